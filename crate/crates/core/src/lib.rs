//! Gauge-mechanical path simulation.
//!
//! Particles follow paths whose action satisfies the phase condition
//! `κ(B)·exp(iS)·κ⁻¹(A) = 1`. This crate samples such paths, turns them into
//! screen densities for the double-slit family of experiments, the
//! Aharonov-Bohm ring, EPR pairs and barrier crossings, and compares them
//! with a standard quantum-mechanical reference.

pub mod experiments;
pub mod gauge;
pub mod io;
pub mod oracle;
pub mod profile;
pub mod sampler;
pub mod scalar;
pub mod spacetime;

pub use scalar::Real;

pub type Event = spacetime::Event<f64>;
pub type Path = spacetime::Path<f64>;
pub type ParticleParams = spacetime::ParticleParams<f64>;
pub type PotentialSpec = spacetime::PotentialSpec<f64>;
pub type PhaseState = gauge::PhaseState<f64>;
pub type DensityParams = gauge::DensityParams<f64>;
pub type WaveField = oracle::WaveField<f64>;
pub type LatticeSpec = oracle::LatticeSpec<f64>;

pub type EventF32 = spacetime::Event<f32>;
pub type PathF32 = spacetime::Path<f32>;
pub type WaveFieldF32 = oracle::WaveField<f32>;
