//! Spacetime events, piecewise-geodesic paths and the action functionals
//! evaluated along them.
//!
//! Units are natural throughout: `c = 1`, `ħ = 1`, so Planck's constant is
//! `2π` and a particle of momentum `p` has wavelength `2π/p`. Slit and
//! Aharonov-Bohm geometries use the `(x, y)` plane; barrier problems and the
//! wave oracle keep `y = 0`.

use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpacetimeError {
    #[error("a path needs at least two events, got {0}")]
    EmptyPath(usize),
    #[error("event {index} has a non-finite coordinate")]
    NonFinite { index: usize },
    #[error("events {index} and {next} are identical", next = index + 1)]
    RepeatedEvent { index: usize },
    #[error("events {index} and {next} share the same time", next = index + 1)]
    ZeroDuration { index: usize },
    #[error("path reverses its time direction more than once (at event {index})")]
    MultipleTurns { index: usize },
    #[error("path runs backwards in time from the first event")]
    Retrograde,
    #[error("segment {index} is not timelike: elapsed {elapsed} <= length {length}")]
    Spacelike {
        index: usize,
        elapsed: f64,
        length: f64,
    },
    #[error("path is monotonic and has no correlated-pair decomposition")]
    AlreadyMonotonic,
    #[error("paths do not share an endpoint")]
    Disjoint,
    #[error("invalid particle: {0}")]
    InvalidParticle(&'static str),
    #[error("invalid potential: {0}")]
    InvalidPotential(&'static str),
}

/// A point in spacetime.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Event<T> {
    pub t: T,
    pub x: T,
    pub y: T,
}

impl<T: Real> Event<T> {
    pub fn new(t: T, x: T, y: T) -> Self {
        Self { t, x, y }
    }

    /// Event on the `y = 0` line.
    pub fn line(t: T, x: T) -> Self {
        Self { t, x, y: T::zero() }
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.x.is_finite() && self.y.is_finite()
    }

    pub fn spatial_distance(&self, other: &Self) -> T {
        (other.x - self.x).hypot(other.y - self.y)
    }

    /// Linear interpolation, `frac = 0` at `self`.
    pub fn lerp(&self, other: &Self, frac: T) -> Self {
        Self {
            t: self.t + (other.t - self.t) * frac,
            x: self.x + (other.x - self.x) * frac,
            y: self.y + (other.y - self.y) * frac,
        }
    }
}

/// A straight worldline piece between two events.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment<T> {
    pub start: Event<T>,
    pub end: Event<T>,
}

impl<T: Real> Segment<T> {
    pub fn new(start: Event<T>, end: Event<T>) -> Self {
        Self { start, end }
    }

    /// Spatial length `l`.
    pub fn length(&self) -> T {
        self.start.spatial_distance(&self.end)
    }

    /// Elapsed coordinate time `t(l)`; negative for an inverted segment.
    pub fn elapsed(&self) -> T {
        self.end.t - self.start.t
    }

    pub fn midpoint(&self) -> Event<T> {
        self.start.lerp(&self.end, T::lit(0.5))
    }

    pub fn reversed(&self) -> Self {
        Self {
            start: self.end,
            end: self.start,
        }
    }

    pub fn is_timelike(&self) -> bool {
        self.elapsed().abs() > self.length()
    }

    /// Spatial speed `l / t(l)`.
    pub fn speed(&self) -> T {
        self.length() / self.elapsed().abs()
    }
}

/// Time-direction profile of a valid path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathShape {
    /// Time strictly increases along the event list.
    Monotonic,
    /// Time increases up to event `turn`, then decreases: two arms meeting
    /// at the latest event (the double-slit pair `A -> B <- A'`).
    Peak { turn: usize },
    /// Time decreases down to event `turn`, then increases: two arms leaving a
    /// common earliest event (the EPR pair `B <- A -> C`).
    Trough { turn: usize },
}

/// Ordered sequence of events joined by straight segments.
#[derive(Clone, Debug, PartialEq)]
pub struct Path<T> {
    events: Vec<Event<T>>,
    shape: PathShape,
}

impl<T: Real> Path<T> {
    /// Validates the event list. A path has at least two events, no two
    /// consecutive events equal or simultaneous, and at most one reversal of
    /// its time direction; a path whose first step runs backwards and never
    /// turns is rejected.
    pub fn new(events: Vec<Event<T>>) -> Result<Self, SpacetimeError> {
        if events.len() < 2 {
            return Err(SpacetimeError::EmptyPath(events.len()));
        }
        if let Some(index) = events.iter().position(|e| !e.is_finite()) {
            return Err(SpacetimeError::NonFinite { index });
        }
        let mut rising = None;
        let mut turn = None;
        for (index, pair) in events.windows(2).enumerate() {
            let (a, b) = (pair[0], pair[1]);
            if a == b {
                return Err(SpacetimeError::RepeatedEvent { index });
            }
            if a.t == b.t {
                return Err(SpacetimeError::ZeroDuration { index });
            }
            let up = b.t > a.t;
            match rising {
                None => rising = Some(up),
                Some(dir) if dir != up => {
                    if turn.is_some() {
                        return Err(SpacetimeError::MultipleTurns { index });
                    }
                    turn = Some(index);
                    rising = Some(up);
                }
                _ => {}
            }
        }
        let first_up = events[1].t > events[0].t;
        let shape = match (turn, first_up) {
            (None, true) => PathShape::Monotonic,
            (None, false) => return Err(SpacetimeError::Retrograde),
            (Some(turn), true) => PathShape::Peak { turn },
            (Some(turn), false) => PathShape::Trough { turn },
        };
        Ok(Self { events, shape })
    }

    /// Straight path between two events.
    pub fn straight(start: Event<T>, end: Event<T>) -> Result<Self, SpacetimeError> {
        Self::new(vec![start, end])
    }

    pub fn events(&self) -> &[Event<T>] {
        &self.events
    }

    pub fn into_events(self) -> Vec<Event<T>> {
        self.events
    }

    pub fn shape(&self) -> PathShape {
        self.shape
    }

    pub fn is_monotonic(&self) -> bool {
        self.shape == PathShape::Monotonic
    }

    pub fn start(&self) -> Event<T> {
        self.events[0]
    }

    pub fn end(&self) -> Event<T> {
        self.events[self.events.len() - 1]
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment<T>> + '_ {
        self.events.windows(2).map(|w| Segment::new(w[0], w[1]))
    }

    /// Splits a non-monotonic path into its two monotonic components, each
    /// oriented forward in time.
    pub fn decompose(&self) -> Result<Decomposition<T>, SpacetimeError> {
        let turn = match self.shape {
            PathShape::Monotonic => return Err(SpacetimeError::AlreadyMonotonic),
            PathShape::Peak { turn } | PathShape::Trough { turn } => turn,
        };
        let pivot = turn;
        let mut first: Vec<_> = self.events[..=pivot].to_vec();
        let mut second: Vec<_> = self.events[pivot..].to_vec();
        match self.shape {
            PathShape::Peak { .. } => second.reverse(),
            PathShape::Trough { .. } => first.reverse(),
            PathShape::Monotonic => unreachable!(),
        }
        Ok(Decomposition {
            first: Path::new(first)?,
            second: Path::new(second)?,
            shape: self.shape,
        })
    }

    /// Joins two monotonic paths where `self` ends and `other` starts.
    pub fn concat(&self, other: &Self) -> Result<Self, SpacetimeError> {
        if self.end() != other.start() {
            return Err(SpacetimeError::Disjoint);
        }
        let mut events = self.events.clone();
        events.extend_from_slice(&other.events[1..]);
        Self::new(events)
    }

    /// Rescales every elapsed time by `factor` about the first event.
    pub fn with_time_scale(&self, factor: T) -> Result<Self, SpacetimeError> {
        let t0 = self.events[0].t;
        let events = self
            .events
            .iter()
            .map(|e| Event::new(t0 + (e.t - t0) * factor, e.x, e.y))
            .collect();
        Self::new(events)
    }
}

/// The two monotonic components of a non-monotonic path.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition<T> {
    /// Component traversed first, as stored on the original path.
    pub first: Path<T>,
    pub second: Path<T>,
    shape: PathShape,
}

impl<T: Real> Decomposition<T> {
    /// Reassembles the original path.
    pub fn recombine(&self) -> Result<Path<T>, SpacetimeError> {
        let mut first = self.first.events.clone();
        let mut second = self.second.events.clone();
        match self.shape {
            PathShape::Peak { .. } => second.reverse(),
            PathShape::Trough { .. } => first.reverse(),
            PathShape::Monotonic => unreachable!("decompositions are never monotonic"),
        }
        first.extend_from_slice(&second[1..]);
        Path::new(first)
    }
}

/// Rest mass and momentum magnitude of the particle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParticleParams<T> {
    mass: T,
    momentum: T,
}

impl<T: Real> ParticleParams<T> {
    pub fn new(mass: T, momentum: T) -> Result<Self, SpacetimeError> {
        if !(mass.is_finite() && mass > T::zero()) {
            return Err(SpacetimeError::InvalidParticle("mass must be positive"));
        }
        if !(momentum.is_finite() && momentum > T::zero()) {
            return Err(SpacetimeError::InvalidParticle("momentum must be positive"));
        }
        Ok(Self { mass, momentum })
    }

    pub fn mass(&self) -> T {
        self.mass
    }

    pub fn momentum(&self) -> T {
        self.momentum
    }

    /// `λ = 2π/p`.
    pub fn wavelength(&self) -> T {
        T::TAU() / self.momentum
    }

    /// Classical speed in the given dynamics: `p/m` non-relativistically,
    /// `p/E` relativistically.
    pub fn speed(&self, mode: ActionMode) -> T {
        match mode {
            ActionMode::NonRelativistic => self.momentum / self.mass,
            ActionMode::Relativistic => self.momentum / self.momentum.hypot(self.mass),
        }
    }

    /// Non-relativistic kinetic energy `p²/2m`.
    pub fn kinetic_energy(&self) -> T {
        self.momentum * self.momentum / (T::lit(2.0) * self.mass)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PotentialKind {
    Free,
    Barrier,
}

/// Rectangular potential along `x`: height `V` on `[x_lo, x_hi)`, zero outside.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PotentialSpec<T> {
    kind: PotentialKind,
    height: T,
    x_lo: T,
    x_hi: T,
}

impl<T: Real> PotentialSpec<T> {
    pub fn free() -> Self {
        Self {
            kind: PotentialKind::Free,
            height: T::zero(),
            x_lo: T::zero(),
            x_hi: T::zero(),
        }
    }

    pub fn barrier(height: T, x_lo: T, x_hi: T) -> Result<Self, SpacetimeError> {
        if !(height.is_finite() && height >= T::zero()) {
            return Err(SpacetimeError::InvalidPotential("height must be >= 0"));
        }
        if !(x_lo.is_finite() && x_hi.is_finite() && x_lo < x_hi) {
            return Err(SpacetimeError::InvalidPotential("barrier needs x_lo < x_hi"));
        }
        Ok(Self {
            kind: PotentialKind::Barrier,
            height,
            x_lo,
            x_hi,
        })
    }

    pub fn kind(&self) -> PotentialKind {
        self.kind
    }

    pub fn height(&self) -> T {
        self.height
    }

    pub fn region(&self) -> (T, T) {
        (self.x_lo, self.x_hi)
    }

    pub fn value_at(&self, x: T) -> T {
        match self.kind {
            PotentialKind::Free => T::zero(),
            PotentialKind::Barrier if x >= self.x_lo && x < self.x_hi => self.height,
            PotentialKind::Barrier => T::zero(),
        }
    }

    fn edges(&self) -> Option<[T; 2]> {
        match self.kind {
            PotentialKind::Barrier => Some([self.x_lo, self.x_hi]),
            PotentialKind::Free => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ActionMode {
    Relativistic,
    #[default]
    NonRelativistic,
}

/// Relativistic action of a forward segment, `−m·√(t(l)² − l²) − V·t(l)`,
/// with `V` sampled at the segment midpoint.
pub fn segment_action_rel<T: Real>(
    seg: &Segment<T>,
    particle: &ParticleParams<T>,
    pot: &PotentialSpec<T>,
) -> Result<T, SpacetimeError> {
    segment_action(seg, particle, pot, ActionMode::Relativistic, 0)
}

/// Non-relativistic action `m·l²/(2·t(l)) − V·t(l)`, rest-mass term dropped.
pub fn segment_action_nonrel<T: Real>(
    seg: &Segment<T>,
    particle: &ParticleParams<T>,
    pot: &PotentialSpec<T>,
) -> T {
    let elapsed = seg.elapsed();
    let l = seg.length();
    let v = pot.value_at(seg.midpoint().x);
    particle.mass() * l * l / (T::lit(2.0) * elapsed) - v * elapsed
}

fn segment_action<T: Real>(
    seg: &Segment<T>,
    particle: &ParticleParams<T>,
    pot: &PotentialSpec<T>,
    mode: ActionMode,
    index: usize,
) -> Result<T, SpacetimeError> {
    match mode {
        ActionMode::NonRelativistic => Ok(segment_action_nonrel(seg, particle, pot)),
        ActionMode::Relativistic => {
            let elapsed = seg.elapsed();
            let l = seg.length();
            if elapsed <= l {
                return Err(SpacetimeError::Spacelike {
                    index,
                    elapsed: elapsed.to_f64_lossy(),
                    length: l.to_f64_lossy(),
                });
            }
            let v = pot.value_at(seg.midpoint().x);
            let interval = ((elapsed - l) * (elapsed + l)).sqrt();
            Ok(-particle.mass() * interval - v * elapsed)
        }
    }
}

/// Inserts joints where segments cross a barrier edge so that every segment
/// lies entirely inside or outside the barrier.
pub fn refine_at_barrier<T: Real>(path: &Path<T>, pot: &PotentialSpec<T>) -> Path<T> {
    let Some(edges) = pot.edges() else {
        return path.clone();
    };
    let mut events = Vec::with_capacity(path.events.len() + 2);
    events.push(path.events[0]);
    for seg in path.segments() {
        let (x0, x1) = (seg.start.x, seg.end.x);
        let mut cuts: Vec<T> = edges
            .iter()
            .filter(|&&edge| (x0 < edge && edge < x1) || (x1 < edge && edge < x0))
            .map(|&edge| (edge - x0) / (x1 - x0))
            .collect();
        cuts.sort_by(|a, b| a.partial_cmp(b).expect("finite cut fractions"));
        for frac in cuts {
            events.push(seg.start.lerp(&seg.end, frac));
        }
        events.push(seg.end);
    }
    // Cuts are strictly interior, so the refined list keeps the original shape.
    Path::new(events).expect("refinement preserves path validity")
}

/// Sum of segment actions. Segments running backwards in time belong to the
/// inverted component of a correlated pair and contribute the negated action
/// of their forward orientation.
pub fn path_action<T: Real>(
    path: &Path<T>,
    particle: &ParticleParams<T>,
    pot: &PotentialSpec<T>,
    mode: ActionMode,
) -> Result<T, SpacetimeError> {
    let refined;
    let path = if pot.kind() == PotentialKind::Barrier {
        refined = refine_at_barrier(path, pot);
        &refined
    } else {
        path
    };
    let mut total = T::zero();
    for (index, seg) in path.segments().enumerate() {
        if seg.elapsed() > T::zero() {
            total += segment_action(&seg, particle, pot, mode, index)?;
        } else {
            total -= segment_action(&seg.reversed(), particle, pot, mode, index)?;
        }
    }
    Ok(total)
}

/// Total spatial length of the path's components.
pub fn path_length<T: Real>(path: &Path<T>) -> T {
    path.segments()
        .fold(T::zero(), |acc, seg| acc + seg.length())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn unit() -> ParticleParams<f64> {
        ParticleParams::new(1.0, 1.0).unwrap()
    }

    fn seg(t0: f64, x0: f64, t1: f64, x1: f64) -> Segment<f64> {
        Segment::new(Event::line(t0, x0), Event::line(t1, x1))
    }

    #[test]
    fn relativistic_segment_examples() {
        let free = PotentialSpec::free();
        assert_eq!(segment_action_rel(&seg(0., 0., 2., 0.), &unit(), &free), Ok(-2.0));
        assert_eq!(segment_action_rel(&seg(0., 0., 5., 3.), &unit(), &free), Ok(-4.0));
        let wall = PotentialSpec::barrier(1.0, -10.0, 10.0).unwrap();
        assert_eq!(segment_action_rel(&seg(0., 0., 5., 3.), &unit(), &wall), Ok(-9.0));
    }

    #[test]
    fn spacelike_segment_is_rejected() {
        let free = PotentialSpec::free();
        let err = segment_action_rel(&seg(0., 0., 1., 1.), &unit(), &free).unwrap_err();
        assert!(matches!(err, SpacetimeError::Spacelike { .. }));
        let err = segment_action_rel(&seg(0., 0., 1., 3.), &unit(), &free).unwrap_err();
        assert!(matches!(err, SpacetimeError::Spacelike { .. }));
    }

    #[test]
    fn path_action_additivity_and_nonrel() {
        let free = PotentialSpec::free();
        let p = Path::new(vec![
            Event::line(0., 0.),
            Event::line(2., 0.),
            Event::line(4., 0.),
        ])
        .unwrap();
        assert_eq!(path_action(&p, &unit(), &free, ActionMode::Relativistic), Ok(-4.0));

        let q = Path::straight(Event::line(0., 0.), Event::line(1., 2.)).unwrap();
        assert_eq!(path_action(&q, &unit(), &free, ActionMode::NonRelativistic), Ok(2.0));
    }

    #[test]
    fn subdivided_straight_path_has_same_action() {
        let free = PotentialSpec::free();
        let m = ParticleParams::new(1.3, 1.0).unwrap();
        let a = Event::new(0.0, 0.0, 0.0);
        let b = Event::new(7.0, 2.5, -1.5);
        let straight = Path::straight(a, b).unwrap();
        let split = Path::new((0..=4).map(|k| a.lerp(&b, k as f64 / 4.0)).collect()).unwrap();
        for mode in [ActionMode::Relativistic, ActionMode::NonRelativistic] {
            let s1 = path_action(&straight, &m, &free, mode).unwrap();
            let s2 = path_action(&split, &m, &free, mode).unwrap();
            assert_abs_diff_eq!(s1, s2, epsilon = 1e-12);
        }
    }

    #[test]
    fn path_lengths() {
        let p = Path::straight(Event::new(0., 0., 0.), Event::new(1., 3., 4.)).unwrap();
        assert_eq!(path_length(&p), 5.0);
        let q = Path::new(vec![
            Event::line(0., 0.),
            Event::line(1., 1.),
            Event::line(2., 2.),
        ])
        .unwrap();
        assert_eq!(path_length(&q), 2.0);
        let r = Path::straight(Event::line(0., 1.), Event::line(3., 1.)).unwrap();
        assert_eq!(path_length(&r), 0.0);
    }

    #[test]
    fn invalid_paths() {
        assert_eq!(
            Path::<f64>::new(vec![Event::line(0., 0.)]),
            Err(SpacetimeError::EmptyPath(1))
        );
        assert_eq!(
            Path::new(vec![Event::line(0., 0.), Event::line(0., 0.)]),
            Err(SpacetimeError::RepeatedEvent { index: 0 })
        );
        assert_eq!(
            Path::new(vec![Event::line(0., 0.), Event::line(0., 1.)]),
            Err(SpacetimeError::ZeroDuration { index: 0 })
        );
        assert_eq!(
            Path::new(vec![Event::line(1., 0.), Event::line(0., 1.)]),
            Err(SpacetimeError::Retrograde)
        );
        let zigzag = vec![
            Event::line(0., 0.),
            Event::line(1., 0.),
            Event::line(0.5, 1.),
            Event::line(2., 1.),
        ];
        assert_eq!(
            Path::new(zigzag),
            Err(SpacetimeError::MultipleTurns { index: 2 })
        );
        assert_eq!(
            Path::new(vec![Event::line(0., f64::NAN), Event::line(1., 0.)]),
            Err(SpacetimeError::NonFinite { index: 0 })
        );
    }

    #[test]
    fn decomposition_matches_flag() {
        let mono = Path::straight(Event::line(0., 0.), Event::line(1., 0.)).unwrap();
        assert!(mono.is_monotonic());
        assert_eq!(mono.decompose(), Err(SpacetimeError::AlreadyMonotonic));

        let peak = Path::new(vec![
            Event::new(0., -1., 0.),
            Event::new(5., 0., 4.),
            Event::new(0., 1., 0.),
        ])
        .unwrap();
        assert_eq!(peak.shape(), PathShape::Peak { turn: 1 });
        let parts = peak.decompose().unwrap();
        assert!(parts.first.is_monotonic() && parts.second.is_monotonic());
        assert_eq!(parts.first.end(), parts.second.end());
        assert_eq!(parts.recombine().unwrap(), peak);

        let trough = Path::new(vec![
            Event::line(3., -2.),
            Event::line(1., -1.),
            Event::line(0., 0.),
            Event::line(2., 1.),
        ])
        .unwrap();
        assert_eq!(trough.shape(), PathShape::Trough { turn: 2 });
        let parts = trough.decompose().unwrap();
        assert_eq!(parts.first.start(), parts.second.start());
        assert_eq!(parts.recombine().unwrap(), trough);
    }

    #[test]
    fn inverted_component_enters_with_reversed_sign() {
        let free = PotentialSpec::free();
        let m = unit();
        let a = Event::new(0., -1., 0.);
        let b = Event::new(5., 0., 3.);
        let a2 = Event::new(0., 1., 0.);
        let pair = Path::new(vec![a, b, a2]).unwrap();
        let s1 = path_action(&Path::straight(a, b).unwrap(), &m, &free, ActionMode::Relativistic)
            .unwrap();
        let s2 = path_action(&Path::straight(a2, b).unwrap(), &m, &free, ActionMode::Relativistic)
            .unwrap();
        let s = path_action(&pair, &m, &free, ActionMode::Relativistic).unwrap();
        assert_abs_diff_eq!(s, s1 - s2, epsilon = 1e-12);
        // symmetric arms
        assert_abs_diff_eq!(s, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn barrier_refinement_places_joints_on_edges() {
        let pot = PotentialSpec::barrier(2.0, 0.0, 1.0).unwrap();
        let p = Path::straight(Event::line(0., -1.), Event::line(6., 2.)).unwrap();
        let r = refine_at_barrier(&p, &pot);
        let xs: Vec<f64> = r.events().iter().map(|e| e.x).collect();
        assert_eq!(xs, vec![-1.0, 0.0, 1.0, 2.0]);
        // V·t only accrues on the inside third of the time
        let m = unit();
        let s = path_action(&p, &m, &pot, ActionMode::NonRelativistic).unwrap();
        let free = path_action(&p, &m, &PotentialSpec::free(), ActionMode::NonRelativistic).unwrap();
        assert_abs_diff_eq!(free - s, 2.0 * 2.0, epsilon = 1e-12);
    }

    #[test]
    fn f32_paths_work() {
        let m = ParticleParams::<f32>::new(1.0, 1.0).unwrap();
        let p = Path::straight(Event::line(0.0f32, 0.0), Event::line(5.0, 3.0)).unwrap();
        let s = path_action(&p, &m, &PotentialSpec::free(), ActionMode::Relativistic).unwrap();
        assert!((s + 4.0).abs() < 1e-6);
    }
}
