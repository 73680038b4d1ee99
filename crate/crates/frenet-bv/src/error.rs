use thiserror::Error;

/// Crate-wide error type.
///
/// Variants are grouped by the exit-code contract of the CLI: scenario
/// parsing failures map to exit code 2, data-validation failures to 3,
/// numerical failures to 4.
#[derive(Debug, Error)]
pub enum Error {
    // construction / validation
    #[error("generator index {0} is out of range 1..=3")]
    GeneratorIndex(usize),
    #[error("matrix is not skew-symmetric: max |B + B^T| entry is {0:.3e}")]
    NotSkew(f64),
    #[error("matrix is not a rotation: orthogonality defect {defect:.3e}, det {det:.6}")]
    NotRotation { defect: f64, det: f64 },
    #[error("axis has norm {0:.12}, expected a unit vector")]
    NonUnitAxis(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("invalid interval length {0}")]
    BadLength(f64),
    #[error("piece breakpoints must be strictly increasing and end at the interval length: {0}")]
    BadBreakpoints(String),
    #[error("absolutely continuous part is discontinuous at s = {location}: gap {gap:.3e}")]
    AcDiscontinuity { location: f64, gap: f64 },
    #[error("jump list invalid: {0}")]
    BadJumpList(String),
    #[error("function declared strictly increasing but {0}")]
    NotIncreasing(String),
    #[error("solver configuration invalid: {0}")]
    BadConfig(String),

    // numerical preconditions
    #[error("rotation angle too close to pi for a unique logarithm (trace = {0:.9})")]
    AnglePi(f64),
    #[error("Cayley transform undefined: |det(A + I)| = {0:.3e}")]
    CayleySingular(f64),
    #[error("path radius vanishes at s = {0} (rho = {1:.3e})")]
    PathRadiusZero(f64, f64),
    #[error("jump at s = {location} has magnitude {magnitude:.9} outside (0, pi)")]
    JumpTooLarge { location: f64, magnitude: f64 },
    #[error("jump validation failed: {violations} of {total} jumps outside (0, pi - 1e-9)")]
    JumpValidation { violations: usize, total: usize },
    #[error("mollifier half-width {eps} exceeds the smallest jump/boundary gap {gap}")]
    MollifierWindow { eps: f64, gap: f64 },
    #[error("countable jump family is not summable (ratio {0} >= 1)")]
    NonSummableTail(f64),
    #[error("curve reconstruction needs a strictly increasing theta; the frame path is still available")]
    ThetaNotIncreasing,
    #[error("degenerate chord between inscribed vertices {0} and {1}")]
    DegenerateChord(usize, usize),
    #[error("cannot compare empty curves")]
    EmptyCurve,
    #[error("frame path jump records do not match the datum: {0}")]
    JumpMismatch(String),
    #[error("numerical check failed: {0}")]
    Numerical(String),

    // scenario / io
    #[error("scenario `{name}` failed to parse: {message}")]
    ScenarioParse { name: String, message: String },
    #[error("unknown built-in scenario `{0}`")]
    UnknownBuiltin(String),
    #[error("unsupported output format `{0}` (expected csv, json or obj)")]
    BadFormat(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code for the CLI contract: 2 parse, 3 validation, 4 numerical.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            ScenarioParse { .. } | UnknownBuiltin(_) | BadFormat(_) => 2,
            GeneratorIndex(_) | NotSkew(_) | NotRotation { .. } | NonUnitAxis(_)
            | Dimension { .. } | BadLength(_) | BadBreakpoints(_) | AcDiscontinuity { .. }
            | BadJumpList(_) | NotIncreasing(_) | BadConfig(_) | JumpValidation { .. }
            | JumpTooLarge { .. } | MollifierWindow { .. } | NonSummableTail(_)
            | ThetaNotIncreasing | JumpMismatch(_) => 3,
            AnglePi(_) | CayleySingular(_) | PathRadiusZero(..) | DegenerateChord(..)
            | EmptyCurve | Numerical(_) => 4,
            Io { .. } => 4,
        }
    }
}
