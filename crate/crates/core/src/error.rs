use thiserror::Error;

/// Errors raised by the simulator, the oracle and the circuit builder.
#[derive(Debug, Error)]
pub enum Error {
    /// A register or enumeration would exceed a configured size cap.
    #[error("{what} of size {requested} exceeds the cap of {cap}")]
    Resource {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    /// Malformed input to an operation.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// The request is well formed but outside what the implementation supports.
    #[error("unsupported: {0}")]
    Capability(String),

    /// A gate matrix failed the unitarity check.
    #[error("gate `{label}` is not unitary (max deviation {deviation:e})")]
    NotUnitary { label: String, deviation: f64 },

    /// The subspace selected for interference carries (almost) no weight.
    #[error("selected subspace has norm {norm:e}, below the degeneracy threshold")]
    DegenerateSubspace { norm: f64 },

    /// A scripted measurement outcome has (almost) zero probability.
    #[error("forced outcome {outcome:+} on qubit {qubit} has probability {probability:e}")]
    ImpossibleOutcome {
        qubit: usize,
        outcome: i8,
        probability: f64,
    },

    /// A model file could not be parsed or validated.
    #[error("model file: {0}")]
    ModelFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
