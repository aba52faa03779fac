use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Pipeline stage that produced an error. Displayed as a snake_case tag so
/// diagnostics can be matched by scripts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Rescale,
    Extend,
    EstimateDelta,
    Mergelyan,
    Avoid,
    Verify,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self {
            Stage::Rescale => "rescale",
            Stage::Extend => "extend",
            Stage::EstimateDelta => "estimate_delta",
            Stage::Mergelyan => "mergelyan",
            Stage::Avoid => "avoid",
            Stage::Verify => "verify",
        };
        f.write_str(tag)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty sample list")]
    EmptySamples,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported geometry: {0}")]
    Geometry(String),

    #[error("root finder did not converge after {iterations} iterations (worst relative residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("truncation too large: {count} values exceeds the limit of {limit}")]
    TruncationTooLarge { count: usize, limit: usize },

    #[error("cannot avoid value {value}: {reason}")]
    AvoidFailed { value: String, reason: String },

    #[error("step {step}: {source}")]
    AvoidStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("step {step}: boundary margin {delta:e} is below the floor {floor:e}; margins are not certifiable at this discretization")]
    DegenerateMargin { step: usize, delta: f64, floor: f64 },

    #[error("step {step}: perturbation budget underflowed and value {value} needs a perturbation")]
    BudgetUnderflow { step: usize, value: String },

    #[error("no rescale parameter above {floor:e} reaches {target:e} on component {component} (best error {best:e})")]
    RescaleFailed {
        component: usize,
        target: f64,
        floor: f64,
        best: f64,
    },

    #[error("no polynomial of degree <= {max_degree} reaches tolerance {tol:e} (best error {best:e} at degree {best_degree}); try a higher degree")]
    FitFailed {
        max_degree: usize,
        tol: f64,
        best: f64,
        best_degree: usize,
    },

    #[error("separation estimate {delta:e} is not above the floor {floor:e}: the function takes a forbidden value on the interior or the sampling is too coarse")]
    DeltaNotPositive { delta: f64, floor: f64 },

    #[error("winding number indeterminate: point is {distance:e} from the curve, needs more than {required:e}")]
    IndeterminateWinding { distance: f64, required: f64 },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("{stage}: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn at(self, stage: Stage) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// The stage tag of a pipeline error, if any.
    pub fn stage(&self) -> Option<Stage> {
        match self {
            Error::Stage { stage, .. } => Some(*stage),
            _ => None,
        }
    }
}
