//! Entanglement transfer from a two-mode squeezed vacuum to a pair of
//! charge qubits, each resonantly coupled to one field mode.
//!
//! The closed-form route ([`dynamics`]) covers the `|−,−⟩` preparation; the
//! truncated-Hilbert-space [`oracle`] covers any product preparation and
//! cross-checks the closed form. [`experiments`] builds sweeps on top of
//! both, and [`circuit`] maps dimensionless time onto device parameters.

pub mod circuit;
pub mod cli;
pub mod density;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod measures;
pub mod oracle;
pub mod report;
pub mod spectrum;
pub mod verify;

pub use circuit::{derive, regime_check, CircuitParams, DerivedParams, RegimeCheck};
pub use density::{QubitPairDensity, Subsystem};
pub use dynamics::{coefficients, AbcdCoefficients};
pub use error::{Error, Result};
pub use experiments::{Axis, Measure, Peak, SweepResult, SweepSpec};
pub use measures::EntanglementReport;
pub use oracle::{HilbertOracle, ProductPreparation};
pub use spectrum::{SqueezedSpectrum, DEFAULT_EPSILON_TAIL};

/// Crate version recorded in sweep provenance.
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");
