//! Low-order coefficients of solver families expanded around special
//! parameter values, against closed forms.

use crate::param_poly::{Param, ParamPoly};
use crate::rational::{q, qi, Rational};
use crate::series::{sigma_transform, PrefactoredSeries, Series};

use super::lab::{Lab, VerifyError};
use super::report::CheckReport;

pub const DEFORMATION_IDS: &[&str] = &[
    "deformation_f1_beta0",
    "deformation_f1_beta1",
    "deformation_f1_beta1_printed",
    "deformation_f1_log",
    "deformation_F1_beta0",
    "deformation_F1_beta1",
    "deformation_F1_beta1_printed",
    "deformation_F1_log",
    "deformation_C11_g1",
    "deformation_C11_rho",
];

/// (family, alpha = 1/2 member, first-order closed form, printed first-order
/// series, base log-derivative, first-order log-derivative).
struct BetaCase {
    family: &'static str,
    half: &'static str,
    first: &'static str,
    printed: &'static str,
    logbase: &'static str,
    logdef: &'static str,
}

const F1: BetaCase =
    BetaCase { family: "f1", half: "f1_05_half", first: "G_f1", printed: "G_f1_printed", logbase: "logbase_f1", logdef: "logdef_f1" };

const F1_25: BetaCase = BetaCase {
    family: "F1_25",
    half: "F1_25_half",
    first: "G_F1_25",
    printed: "G_F1_25_printed",
    logbase: "logbase_F1_25",
    logdef: "logdef_F1_25",
};

/// The family in `beta = alpha - 1/2`.
fn beta_family(lab: &Lab, family: &str, order: usize) -> Result<Series<ParamPoly>, VerifyError> {
    Ok(lab.family(family, order)?.series.shift_param(&q(1, 2), Param::Beta))
}

/// `t (t-1) d/dt ln f`, with the valuation of `f` split off first.
fn tt1_log_derivative(f: &Series<ParamPoly>) -> Result<Series<ParamPoly>, VerifyError> {
    let v = f.valuation().ok_or_else(|| VerifyError::Invalid("vanishing series".into()))?;
    let body = f.shift_down(v)?;
    let p = PrefactoredSeries::new(qi(v as i64), qi(0), body)?;
    Ok(sigma_transform(&p, &qi(0))?)
}

fn beta_check(lab: &Lab, id: &str, case: &BetaCase, part: &str, order: usize) -> Result<CheckReport, VerifyError> {
    let r = match part {
        "beta0" => {
            let s = beta_family(lab, case.family, order)?;
            CheckReport::compare(
                id,
                &s.param_coeff(0),
                &lab.closed(case.half, order)?,
                &format!("{} at beta = 0 equals {}", case.family, case.half),
            )
        }
        "beta1" => {
            let s = beta_family(lab, case.family, order)?;
            CheckReport::compare(
                id,
                &s.param_coeff(1),
                &lab.closed(case.first, order)?,
                &format!("beta^1 coefficient of {} equals {}", case.family, case.first),
            )
        }
        "beta1_printed" => {
            let printed = lab.catalog().reference_full(case.printed)?.specialize(&qi(0));
            let s = beta_family(lab, case.family, printed.order())?;
            CheckReport::compare(
                id,
                &s.param_coeff(1),
                &printed,
                &format!("beta^1 coefficient of {} against its printed terms", case.family),
            )
        }
        "log" => {
            let s = beta_family(lab, case.family, order + 8)?;
            let l = tt1_log_derivative(&s)?;
            let base = CheckReport::compare("beta^0", &l.param_coeff(0).truncate(order), &lab.closed(case.logbase, order)?, "");
            let first = CheckReport::compare("beta^1", &l.param_coeff(1).truncate(order), &lab.closed(case.logdef, order)?, "");
            CheckReport::combine(id, vec![base, first], &format!("t(t-1) d/dt ln {}(1/2 + beta) through beta^1", case.family))
        }
        _ => return Err(VerifyError::UnknownCheck(id.to_string())),
    };
    Ok(r)
}

pub fn check_deformation(lab: &Lab, id: &str, order: usize) -> Result<CheckReport, VerifyError> {
    if let Some(part) = id.strip_prefix("deformation_f1_") {
        return beta_check(lab, id, &F1, part, order);
    }
    if let Some(part) = id.strip_prefix("deformation_F1_") {
        return beta_check(lab, id, &F1_25, part, order);
    }
    match id {
        "deformation_C11_g1" => {
            let s = lab.family("C11", order)?.series;
            Ok(CheckReport::compare(id, &s.param_coeff(1), &lab.closed("g1_C11", order)?, "M_def^1 coefficient of C(1,1) equals g1"))
        }
        "deformation_C11_rho" => {
            let s = lab.family("C11", order)?.series.shift_param(&qi(2), Param::RhoDef);
            let g0 = lab.closed_pp("G0_C11", order)?;
            let ratio = s.div(&g0)?;
            let mut parts = vec![CheckReport::compare("rho^0", &ratio.param_coeff(0), &Series::one(order), "")];
            for k in 1..=3 {
                let closed: Series<Rational> = lab.closed(&format!("rho{k}_C11"), order)?;
                parts.push(CheckReport::compare(&format!("rho^{k}"), &ratio.param_coeff(k), &closed, ""));
            }
            Ok(CheckReport::combine(id, parts, "C(1,1)/G0 in rho = M_def - 2 through rho^3"))
        }
        _ => Err(VerifyError::UnknownCheck(id.to_string())),
    }
}
