//! Identity checks and their reports.

pub mod arith;
pub mod deformation;
pub mod identities;
pub mod lab;
pub mod registry;
mod report;
pub mod reproduction;
pub mod toda;

pub use lab::{Lab, VerifyError};
pub use report::{CheckReport, GBReport, Mismatch, Status, SCHEMA_VERSION};

use crate::param_poly::{Param, ParamPoly};
use crate::rational::{qi, Rational};
use crate::series::Series;

pub(crate) fn omt(e: &Rational, order: usize) -> Series<ParamPoly> {
    Series::one_minus_t_pow(e, order)
}

/// `alpha -> 1 - alpha`.
pub(crate) fn flip_alpha(s: &Series<ParamPoly>) -> Series<ParamPoly> {
    s.compose_param(&ParamPoly::new(Some(Param::Alpha), vec![qi(1), qi(-1)]))
}
