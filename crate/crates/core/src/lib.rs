//! Wave-packet revival analysis for quantum systems whose energies depend on
//! two nondegenerate quantum numbers.
//!
//! The crate is organized around four layers:
//!
//! * [`models`]: energy models on a two-index lattice, their derivatives at
//!   the packet center and the five controlling time scales.
//! * [`commensurability`]: exact rational arithmetic deciding whether time
//!   scales are commensurate and enumerating fractional-revival times.
//! * [`packet`]: Gaussian coefficient grids, phase evolution and the
//!   autocorrelation function.
//! * [`revival`]: cyclic periods of the second-order phase, subsidiary-wave
//!   expansion coefficients, classification and parameter tuning.
//!
//! Energy models, evolution rules and tuning families are trait objects
//! registered by name so that a configuration file can select them at
//! runtime.

pub mod commensurability;
pub mod error;
pub mod fmt;
pub mod models;
pub mod packet;
pub mod revival;

pub use commensurability::{
    classical_beat, cross_ratios, enumerate_fractimes, rationalize, revival_triple, ClassicalBeat,
    CommensurateTriple, CrossRatios, FracTime, ReducedFraction,
};
pub use error::{Error, Result};
pub use models::{
    derivatives, energy, timescales, DerivativeSet, EnergyModel, Lattice, ModelRegistry, ScaleKind,
    TimeScales,
};
pub use packet::{
    AutocorrelationSeries, CoefficientGrid, EvolutionRegistry, PacketSpec, PhaseProvider,
    Propagator,
};
pub use revival::{
    classify, expansion_coefficients, minimal_periods, predict_autocorrelation, theta,
    verify_expansion, Classification, CoefficientMatrix, RevivalPoint, ThetaSpec,
};
