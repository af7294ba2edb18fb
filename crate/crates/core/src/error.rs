use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("root iteration did not converge after {iterations} iterations (max residual {max_residual:e})")]
    NumericFailure {
        iterations: usize,
        max_residual: f64,
        residuals: Vec<f64>,
    },

    #[error("roots collided near y = {re}+{im}i (separation {separation:e})")]
    RootCollision { re: f64, im: f64, separation: f64 },

    #[error("end roots could not be matched bijectively to start roots: {0}")]
    MatchFailure(String),

    #[error("degenerate curve spec: {0}")]
    DegenerateSpec(String),

    #[error("satellite order certificate failed: {0}")]
    OrderViolation(String),

    #[error("exact arithmetic bound exceeded: {0}")]
    ExactArithmeticOverflow(String),

    #[error("crossing events are inconsistent: {0}")]
    InconsistentEvents(String),

    #[error("path cannot keep clearance from singular value {value}: {detail}")]
    PathClearanceFailure { value: String, detail: String },

    #[error("check failed: {0}")]
    CheckFailed(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("scripted reduction mismatch: {0}")]
    ReductionMismatch(String),

    #[error("degree map weights are inconsistent: {0}")]
    InconsistentWeights(String),

    #[error("all codimension-one minors vanish (zero ideal)")]
    ZeroIdeal,

    #[error("inexact polynomial division: {0}")]
    InexactDivision(String),

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// The underlying error with stage wrappers removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            e => e,
        }
    }

    pub fn at_stage(self, stage: &'static str) -> Error {
        match self {
            e @ Error::Stage { .. } => e,
            e => Error::Stage {
                stage,
                source: Box::new(e),
            },
        }
    }
}

pub trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: &'static str) -> Result<T> {
        self.map_err(|e| e.at_stage(stage))
    }
}
