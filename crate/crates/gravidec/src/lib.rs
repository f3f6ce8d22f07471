//! gravidec — entanglement-induced decoherence of a two-branch massive
//! superposition coupled to a quantized bosonic weak-field environment.
//!
//! The model is pure dephasing with linear coupling: each field mode is
//! kicked into a branch-conditioned coherent state, the branch shift is known
//! in closed form, and tracing out the field gives the interferometric
//! visibility exactly. On top of that core the crate provides
//!
//! - spectral-density mode grids and the continuum decoherence-rate integral,
//! - dimensional-analysis and zero-temperature (collapse-style) rate
//!   estimates and related closed-form calculators,
//! - simulated free-evolution / spin-echo / closed-loop protocols that
//!   discriminate field entanglement from classical dephasing and from
//!   genuine collapse, including the fake-decoherence effect,
//! - a truncated-Fock-space evolver used as a brute-force oracle for the
//!   analytic engine.
//!
//! Everything is deterministic: random draws are seeded, and parallel
//! reductions accumulate in index order.

pub mod config;
pub mod constants;
pub mod dynamics;
pub mod error;
pub mod modes;
pub mod oracle;
pub mod profile;
pub mod protocols;
pub mod report;
pub mod thresholds;
pub mod visibility;

pub use constants::{planck_scales, PhysicalConstants, PlanckScales};
pub use dynamics::{
    displacement_free, displacement_profile, displacement_sequenced, overlap, Displacement,
    PulseSequence,
};
pub use error::{Error, Result};
pub use modes::{build_mode_grid, EnvironmentState, Mode, ModeGrid, SpectralDensity};
pub use profile::{CouplingProfile, Segment};
pub use protocols::{
    classical_fringe, classify, fake_decoherence_demo, simulate_experiment, ExperimentKind,
    MechanismLabel, NoiseModel, ProtocolTraces, Verdict, VisibilityTrace,
};
pub use thresholds::{
    baym_condition, christoffel_fluctuation, em_to_gravity_substitution, quadrupole_emission,
    BaymResult, EmissionResult, FluctuationResult,
};
pub use visibility::{
    dimensional_rate, penrose_rate, rate_integral, visibility, DimensionalParams,
    KernelConvention, RateEstimate, VisibilityResult,
};
