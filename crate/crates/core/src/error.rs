use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain where the model is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("index {index} out of range (max {max})")]
    OutOfRange { index: usize, max: usize },

    /// A produced or supplied object violates one of its invariants.
    #[error("integrity error: {0}")]
    Integrity(String),

    /// Amplitude leaked into a basis state whose dynamics the Fock cutoff cannot represent.
    #[error("truncation error: amplitude {amplitude:.3e} at the photon cutoff n_cut={n_cut}")]
    Truncation { amplitude: f64, n_cut: usize },

    #[error("validation error: {0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
