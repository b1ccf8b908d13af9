use thiserror::Error;

/// Everything that can go wrong in this crate.
///
/// Variants fall in two families: malformed input (dimension mismatches,
/// bad configs) and math-domain failures (a point outside the domain, a
/// certificate that cannot be issued). The CLI maps the second family to
/// its own exit code, see [`Error::is_math_domain`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("multi-index {index:?} exceeds the bound {bound:?}")]
    DegreeExceedsBound { index: Vec<usize>, bound: Vec<usize> },

    #[error("series has a vanishing constant term")]
    ZeroConstantTerm,

    #[error("logarithm requested on the branch cut (constant term {re} + {im}i)")]
    BranchCut { re: f64, im: f64 },

    #[error("Schur parameter {index} has modulus {modulus} > 1: data is not from a Schur function")]
    NotSchur { index: usize, modulus: f64 },

    #[error("Schur chain is not terminated (no parameter of unit modulus)")]
    NotTerminated,

    #[error("Schur chain terminated at step {got}, expected {expected}")]
    WrongTermination { expected: usize, got: usize },

    #[error("epsilon too large for the certificate: L - M*eps = {margin}")]
    EpsilonTooLarge { margin: f64 },

    #[error("polynomial vanishes inside the open polydisk near {point:?}")]
    Unstable { point: Vec<(f64, f64)> },

    #[error("Cayley transform evaluated at its pole")]
    CayleyPole,

    #[error("value {re} + {im}i has negative real part: source is not Herglotz")]
    NotHerglotz { re: f64, im: f64 },

    #[error("phase {phase} falls outside [-pi/2, pi/2]")]
    PhaseOutOfRange { phase: f64 },

    #[error("Fourier box {bound:?} does not fit below the Nyquist limit of a {n}-point grid")]
    BoxTooLarge { bound: Vec<usize>, n: usize },

    #[error("no admissible index: polynomial is constant or zero")]
    NoAdmissibleIndex,

    #[error("epsilon {eps} outside [0, {max}]")]
    EpsilonOutOfRange { eps: f64, max: f64 },

    #[error("point of norm {norm} is not inside the unit ball")]
    OutsideBall { norm: f64 },

    #[error("denominator vanishes on the closed ball (min |b| = {min})")]
    DenominatorVanishes { min: f64 },

    #[error("map is not a ball automorphism: boundary identity defect {defect}")]
    NotAutomorphism { defect: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures that come from the mathematics rather than from
    /// malformed input or I/O.
    pub fn is_math_domain(&self) -> bool {
        !matches!(
            self,
            Error::DimensionMismatch { .. } | Error::Config(_) | Error::Format(_) | Error::Io(_) | Error::Json(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
