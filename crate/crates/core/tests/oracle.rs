use std::f64::consts::{PI, TAU};

use gaugemech::experiments::{Amplitude, SlitGeometry};
use gaugemech::oracle::{
    evolve_wave, madelung_decompose, path_sum_comparison, two_slit_intensity, LatticeSpec, OracleError,
    WaveField,
};
use num_complex::Complex;
use proptest::prelude::*;

fn ground_state(n: usize) -> (WaveField<f64>, Vec<f64>) {
    let dx = 20.0 / n as f64;
    let f = WaveField::from_fn(n, -10.0, dx, |x| Complex::new(PI.powf(-0.25) * (-x * x / 2.0).exp(), 0.0)).unwrap();
    let v = (0..n).map(|i| 0.5 * f.x(i).powi(2)).collect();
    (f, v)
}

#[test]
fn harmonic_ground_state_is_stationary_over_a_period() {
    let (f, v) = ground_state(256);
    let dt = 0.01;
    let g = evolve_wave(&f, dt, (TAU / dt).round() as usize, &v, 1.0).unwrap();
    let drift = f
        .values
        .iter()
        .zip(&g.values)
        .map(|(a, b)| (a.norm_sqr() - b.norm_sqr()).abs())
        .fold(0.0, f64::max);
    assert!(drift < 1e-6, "{drift}");
    // the phase advances by E·t with E = 1/2, up to the O(dt²) splitting error
    let turn = (g.values[128] / f.values[128]).arg();
    let want = (-0.5 * g.t + PI).rem_euclid(TAU) - PI;
    assert!((turn - want).abs() < 1e-4, "{turn} vs {want}");
}

#[test]
fn dark_fringes_sit_at_half_integer_wavelengths() {
    let g = SlitGeometry::new(5.0, 100.0);
    let p = TAU;
    let peak = two_slit_intensity(&g, p, 0.0, 0.0, Amplitude::Ideal);
    for n in -2..2 {
        let x = g.solve_delta_r((n as f64 + 0.5) * TAU / p, -50.0, 50.0).unwrap();
        let here = two_slit_intensity(&g, p, x, 0.0, Amplitude::Ideal);
        assert!(here / peak < 1e-12, "n {n}: {here}");
        for dx in [-0.05, 0.05] {
            assert!(two_slit_intensity(&g, p, x + dx, 0.0, Amplitude::Ideal) > here);
        }
    }
}

#[test]
fn lattice_sum_is_independent_of_enumeration_order() {
    let mut lat = LatticeSpec::<f64>::free(3, 4, 0.4, 0.9, 1.3);
    lat.potential = vec![0.0, 0.7, -0.2, 1.1];
    lat.start = 1;
    let report = path_sum_comparison(&lat, 0.8).unwrap();

    // endpoint-major enumeration with sites visited from the far end
    let mut want = vec![Complex::new(0.0, 0.0); 4];
    let mut count = 0;
    for end in (0..4).rev() {
        for b in (0..4).rev() {
            for a in 0..4 {
                let s = lat.link_action(1, a) + lat.link_action(a, b) + lat.link_action(b, end);
                want[end] += Complex::new(s.cos(), s.sin());
                count += 1;
            }
        }
    }
    assert_eq!(report.n_paths, count);
    for (got, w) in report.all.iter().zip(&want) {
        assert!((got - w).norm() < 1e-12);
    }
    assert!(report.n_physical < report.n_paths);
}

#[test]
fn lattice_limits_are_enforced() {
    let lat = LatticeSpec::free(8, 10, 0.1f64, 0.1, 1.0);
    assert!(matches!(path_sum_comparison(&lat, 0.1), Err(OracleError::LatticeTooLarge { .. })));
    let small = LatticeSpec::free(2, 3, 0.5f32, 1.0, 1.0);
    assert_eq!(path_sum_comparison(&small, 0.2).unwrap().n_paths, 9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn free_evolution_keeps_the_norm(x0 in -3.0f64..3.0, k in -4.0f64..4.0, w in 0.5f64..2.0, steps in 1usize..8) {
        let n = 256;
        let f = WaveField::from_fn(n, -12.8, 0.1, |x| {
            let z = (x - x0) / w;
            Complex::new(-0.5 * z * z, k * x).exp()
        }).unwrap();
        let v = vec![0.0; n];
        let mut g = f.clone();
        for _ in 0..steps {
            let next = evolve_wave(&g, 0.02, 1, &v, 1.0).unwrap();
            prop_assert!((next.norm_sq() - g.norm_sq()).abs() <= 1e-9 * g.norm_sq());
            g = next;
        }
    }

    #[test]
    fn decomposition_reconstructs_the_field(x0 in -2.0f64..2.0, k in -5.0f64..5.0, c in -1.0f64..1.0) {
        let f = WaveField::from_fn(200, -10.0, 0.1, |x| {
            Complex::new(-0.5 * (x - x0).powi(2), k * x + c * x * x).exp()
        }).unwrap();
        let m = madelung_decompose(&f);
        for i in 0..f.len() {
            prop_assert!(m.sigma[i] >= 0.0);
            if m.mask[i] {
                prop_assert!((m.reconstruct(i) - f.values[i]).norm() < 1e-9);
            }
        }
    }
}
