//! Parameter types and decision procedures for delay conditions.

mod bdc;
mod cond;
mod inertial;
mod params;

pub use bdc::fdc_member;
pub use cond::{Atom, CondExpr};
pub use inertial::{
    baidc_consistent, bridc_consistent, bridc_det_output, bridc_regime_holds, bridc_regimes, BridcRegime,
};
pub use params::{AicParams, BdcParams, ParamError, RicParams};

use crate::signal::SignalError;
use crate::tick::TickOverflow;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("bounded delay {0} violates the consistency condition")]
    Inconsistent(String),
    #[error("fixed delay must be non-negative, got {0}")]
    NegativeDelay(String),
    #[error("condition expression has no atoms")]
    EmptyExpr,
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Signal(#[from] SignalError),
}

impl From<TickOverflow> for AlgebraError {
    fn from(e: TickOverflow) -> Self {
        AlgebraError::Signal(e.into())
    }
}
