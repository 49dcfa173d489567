use thiserror::Error;

use crate::emergent::ConvergenceReport;

#[derive(Debug, Clone, Error)]
pub enum IrqError {
    #[error("iteration exponent must be a nonzero integer with |k| <= {max}, got {k}")]
    InvalidExponent { k: i64, max: i64 },

    #[error("epsilon must lie in the open interval (0, 1), got {0}")]
    EpsilonOutOfRange(f64),

    #[error("invalid carrier parameter: {0}")]
    InvalidParameter(String),

    #[error("element is not in the carrier {carrier}: {detail}")]
    NotInCarrier { carrier: String, detail: String },

    #[error("carrier {carrier} does not support {what}")]
    Unsupported { carrier: String, what: String },

    #[error("construction rejected: {0}")]
    Construction(String),

    #[error("limit `{name}` did not converge within {} iterates", .report.residual_trail.len() + 1)]
    NonConvergence {
        name: String,
        report: ConvergenceReport,
    },

    #[error("division did not reach residual {tol:e} within {terms} terms (last residual {residual:e})")]
    DivisionFailed { terms: usize, residual: f64, tol: f64 },

    #[error("carrier is not distributive: max residual {residual:e} exceeds {tol:e}")]
    NotDistributive { residual: f64, tol: f64 },
}

pub type Result<T> = std::result::Result<T, IrqError>;
