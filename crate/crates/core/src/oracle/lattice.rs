use num_complex::Complex;
use rayon::prelude::*;

use super::OracleError;
use crate::gauge::phase_residual;
use crate::scalar::Real;

/// Largest path count enumerated exhaustively.
pub const MAX_LATTICE_PATHS: f64 = 1e7;

/// Space-time lattice for an exhaustive sum over histories. Every path
/// starts at `start` and takes `n_time_steps` hops to arbitrary sites.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeSpec<T> {
    pub n_time_steps: usize,
    pub n_space_points: usize,
    pub dt: T,
    pub dx: T,
    pub mass: T,
    /// One value per site.
    pub potential: Vec<T>,
    pub start: usize,
}

impl<T: Real> LatticeSpec<T> {
    pub fn free(n_time_steps: usize, n_space_points: usize, dt: T, dx: T, mass: T) -> Self {
        Self {
            n_time_steps,
            n_space_points,
            dt,
            dx,
            mass,
            potential: vec![T::zero(); n_space_points],
            start: n_space_points / 2,
        }
    }

    pub fn path_count(&self) -> f64 {
        (self.n_space_points as f64).powi(self.n_time_steps as i32)
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        let pos = |v: T| v.is_finite() && v > T::zero();
        if !(pos(self.dt) && pos(self.dx) && pos(self.mass)) {
            return Err(OracleError::InvalidLattice("dt, dx and mass must be > 0"));
        }
        if self.n_space_points == 0 || self.n_time_steps == 0 {
            return Err(OracleError::InvalidLattice("need at least one site and one step"));
        }
        if self.potential.len() != self.n_space_points || self.potential.iter().any(|v| !v.is_finite()) {
            return Err(OracleError::InvalidLattice("potential needs one finite value per site"));
        }
        if self.start >= self.n_space_points {
            return Err(OracleError::InvalidLattice("start site outside the lattice"));
        }
        if self.path_count() > MAX_LATTICE_PATHS {
            return Err(OracleError::LatticeTooLarge {
                paths: self.path_count(),
                limit: MAX_LATTICE_PATHS,
            });
        }
        Ok(())
    }

    /// `m·Δx²/(2Δt) − V̄·Δt` for the hop `i → j`, `V̄` the mean of the two sites.
    pub fn link_action(&self, i: usize, j: usize) -> T {
        let dx = self.dx * T::lit(j as f64 - i as f64);
        let v = T::lit(0.5) * (self.potential[i] + self.potential[j]);
        self.mass * dx * dx / (T::lit(2.0) * self.dt) - v * self.dt
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathFilter {
    All,
    /// Keep paths with `ω(S) ≤ tol`.
    PhysicalOnly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathSumReport<T> {
    /// Amplitude per endpoint site over every path.
    pub all: Vec<Complex<T>>,
    /// Amplitude per endpoint site over the physical subset.
    pub physical: Vec<Complex<T>>,
    pub n_paths: usize,
    pub n_physical: usize,
}

/// Unnormalized `Σ exp(iS)` per endpoint site.
pub fn filtered_path_sum<T: Real>(
    lattice: &LatticeSpec<T>,
    filter: PathFilter,
    tol: T,
) -> Result<Vec<Complex<T>>, OracleError> {
    let r = path_sum_comparison(lattice, tol)?;
    Ok(match filter {
        PathFilter::All => r.all,
        PathFilter::PhysicalOnly => r.physical,
    })
}

/// Both amplitude sets in one enumeration, split across first-hop branches.
pub fn path_sum_comparison<T: Real>(lattice: &LatticeSpec<T>, tol: T) -> Result<PathSumReport<T>, OracleError> {
    lattice.validate()?;
    let n = lattice.n_space_points;
    let rest = lattice.n_time_steps - 1;
    let per_branch = n.pow(rest as u32);
    let branches: Vec<PathSumReport<T>> = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut r = PathSumReport {
                all: vec![Complex::new(T::zero(), T::zero()); n],
                physical: vec![Complex::new(T::zero(), T::zero()); n],
                n_paths: 0,
                n_physical: 0,
            };
            for code in 0..per_branch {
                let mut s = lattice.link_action(lattice.start, first);
                let (mut site, mut c) = (first, code);
                for _ in 0..rest {
                    let next = c % n;
                    c /= n;
                    s += lattice.link_action(site, next);
                    site = next;
                }
                let amp = Complex::new(s.cos(), s.sin());
                r.all[site] += amp;
                r.n_paths += 1;
                if phase_residual(s, T::zero()).omega <= tol {
                    r.physical[site] += amp;
                    r.n_physical += 1;
                }
            }
            r
        })
        .collect();
    let mut out = PathSumReport {
        all: vec![Complex::new(T::zero(), T::zero()); n],
        physical: vec![Complex::new(T::zero(), T::zero()); n],
        n_paths: 0,
        n_physical: 0,
    };
    for b in branches {
        for k in 0..n {
            out.all[k] += b.all[k];
            out.physical[k] += b.physical[k];
        }
        out.n_paths += b.n_paths;
        out.n_physical += b.n_physical;
    }
    Ok(out)
}
