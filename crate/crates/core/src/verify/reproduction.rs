//! Closed forms against printed series, solver families against printed
//! lambda/alpha-extensions, and ODE residuals on closed forms.

use crate::odes::{additive_split_check, residual, OdeSpec, SigmaSeries};
use crate::rational::{q, qi, Rational};
use crate::series::{PrefactoredSeries, Series};

use super::lab::{family_def, Lab, VerifyError};
use super::report::CheckReport;

/// (check id, closed form, printed reference, parameter value if the
/// reference is an extension).
pub type Fixture = (&'static str, &'static str, &'static str, Option<(i64, i64)>);

pub const FIXTURES: &[Fixture] = &[
    ("fixture_f1_alpha0", "f1_05_alpha0", "f1_alpha", Some((0, 1))),
    ("fixture_f1_alpha1", "f1_05_alpha1", "f1_alpha", Some((1, 1))),
    ("fixture_f2_alpha0", "f2_05_alpha0", "f2_alpha", Some((0, 1))),
    ("fixture_f2_alpha1", "f2_05_alpha1", "f2_alpha", Some((1, 1))),
    ("fixture_f3_alpha0", "f3_05_alpha0", "f3_alpha", Some((0, 1))),
    ("fixture_f3_alpha1", "f3_05_alpha1", "f3_alpha", Some((1, 1))),
    ("fixture_f4_alpha0", "f4_05_alpha0", "f4_alpha", Some((0, 1))),
    ("fixture_f4_alpha1", "f4_05_alpha1", "f4_alpha", Some((1, 1))),
    ("fixture_F1_alpha0", "F1_25_alpha0", "F1_25_a0_printed", None),
    ("fixture_F1_alpha1", "F1_25_alpha1", "F1_25_a1_printed", None),
    ("fixture_F2_alpha0", "F2_25_alpha0", "F2_25_a0_printed", None),
    ("fixture_F2_alpha1", "F2_25_alpha1", "F2_25_a1_printed", None),
    ("fixture_C11_E", "C11_lowT", "C11_E_printed", None),
    ("fixture_F2_half", "F2_25_half", "F2_25_half_printed", None),
    ("fixture_F1_half", "F1_25_half", "F1_25_half_printed", None),
    ("fixture_f1_half", "f1_05_half", "f1_half_printed", None),
    ("fixture_f2_half", "f2_05_half", "f2_half_printed", None),
    ("fixture_f3_half", "f3_05_half", "f3_half_printed", None),
    ("fixture_f3_half_quot", "f3_05_half_quot", "f3_half_printed", None),
    ("fixture_f4_half", "f4_05_half", "f4_half_printed", None),
];

/// (check id, family, printed reference).
pub const SOLVER_FIXTURES: &[(&str, &str, &str)] = &[
    ("solver_C05_lambda", "C05", "C05_lambda"),
    ("solver_C05_mu", "C05_mu", "C05_mu"),
    ("solver_C25_lambda", "C25", "C25_lambda"),
    ("solver_C25_mu", "C25_mu", "C25_mu"),
    ("solver_C11_M", "C11", "C11_M"),
    ("solver_f1_alpha", "f1", "f1_alpha"),
    ("solver_f2_alpha", "f2", "f2_alpha"),
    ("solver_f3_alpha", "f3", "f3_alpha"),
    ("solver_f4_alpha", "f4", "f4_alpha"),
    ("solver_F1_alpha", "F1_25", "F1_25_alpha"),
    ("solver_F2_alpha", "F2_25", "F2_25_alpha"),
];

/// Closed form against its printed expansion, at every printed order.
pub fn check_fixture(lab: &Lab, id: &str) -> Result<CheckReport, VerifyError> {
    let &(_, closed, printed, value) = FIXTURES.iter().find(|f| f.0 == id).ok_or_else(|| VerifyError::UnknownCheck(id.to_string()))?;
    let reference = lab.catalog().reference_full(printed)?;
    let expected = reference.specialize(&value.map(|(a, b)| q(a, b)).unwrap_or_else(|| qi(0)));
    let got = lab.closed(closed, expected.order())?;
    Ok(CheckReport::compare(id, &got, &expected, &format!("{closed} expanded against the printed {printed}")))
}

/// Solver family, calibrated at its first parameter-dependent order, against
/// every printed coefficient of the reference.
pub fn check_solver(lab: &Lab, id: &str) -> Result<CheckReport, VerifyError> {
    let &(_, family, reference) = SOLVER_FIXTURES.iter().find(|f| f.0 == id).ok_or_else(|| VerifyError::UnknownCheck(id.to_string()))?;
    let expected = lab.catalog().reference_full(reference)?;
    let fam = lab.family(family, expected.order())?;
    let def = family_def(family)?;
    let notes = format!("{} family, degeneracy at n={:?}, calibrated by {}", def.spec(), fam.raw.degeneracy_orders, fam.map);
    Ok(CheckReport::compare(id, &fam.series, &expected, &notes))
}

/// How the closed form enters the sigma transform.
#[derive(Debug, Clone, Copy)]
enum Norm {
    /// Extra exponents and offset given explicitly.
    Fixed(i64, i64, i64, i64, i64, i64),
    /// Found by grid search on the closed form itself.
    Searched,
}

/// (check id, closed form, ODE, normalization).
type Residual = (&'static str, &'static str, fn() -> OdeSpec, Norm);

const RESIDUALS: &[Residual] = &[
    ("residual_C05", "C05", || OdeSpec::eqnmodd(0, 5).expect("valid"), Norm::Fixed(0, 1, 0, 1, -1, 4)),
    ("residual_C25", "C25", || OdeSpec::eqnmodd(2, 5).expect("valid"), Norm::Fixed(0, 1, 0, 1, -1, 4)),
    ("residual_diag_E", "C11_lowT", || OdeSpec::diag(1), Norm::Fixed(0, 1, 0, 1, -1, 4)),
    ("residual_fourfact_f1", "f1_05_alpha0", || OdeSpec::fourfact(5), Norm::Searched),
    ("residual_fourfact_f2", "f2_05_alpha0", || OdeSpec::fourfact(5), Norm::Searched),
    ("residual_fourfact_f3", "f3_05_alpha0", || OdeSpec::fourfact(5), Norm::Searched),
    ("residual_fourfact_f4", "f4_05_alpha0", || OdeSpec::fourfact(5), Norm::Searched),
    ("residual_fourfact_f1_alpha1", "f1_05_alpha1", || OdeSpec::fourfact(5), Norm::Searched),
    ("residual_fourfact_f2_alpha1", "f2_05_alpha1", || OdeSpec::fourfact(5), Norm::Searched),
    ("residual_fourfact_f3_alpha1", "f3_05_alpha1", || OdeSpec::fourfact(5), Norm::Searched),
    ("residual_fourfact_f4_alpha1", "f4_05_alpha1", || OdeSpec::fourfact(5), Norm::Searched),
    ("residual_nonlinear_F1", "F1_25_alpha0", || OdeSpec::nonlinear(2, 5).expect("valid"), Norm::Searched),
    ("residual_nonlinear_F2", "F2_25_alpha0", || OdeSpec::nonlinear(2, 5).expect("valid"), Norm::Searched),
    ("residual_nonlinear_F1_alpha1", "F1_25_alpha1", || OdeSpec::nonlinear(2, 5).expect("valid"), Norm::Searched),
    ("residual_nonlinear_F2_alpha1", "F2_25_alpha1", || OdeSpec::nonlinear(2, 5).expect("valid"), Norm::Searched),
    ("residual_nonlinear_f13", "f13_05_alpha0", || OdeSpec::nonlinear(0, 5).expect("valid"), Norm::Searched),
    ("residual_nonlinear_f24", "f24_05_alpha0", || OdeSpec::nonlinear(0, 5).expect("valid"), Norm::Searched),
    ("residual_nonlinear_f13_alpha1", "f13_05_alpha1", || OdeSpec::nonlinear(0, 5).expect("valid"), Norm::Searched),
    ("residual_nonlinear_f24_alpha1", "f24_05_alpha1", || OdeSpec::nonlinear(0, 5).expect("valid"), Norm::Searched),
];

pub fn residual_ids() -> impl Iterator<Item = &'static str> {
    RESIDUALS.iter().map(|r| r.0)
}

/// ODE residual on the sigma of a closed form; vanishes through `t^order`.
pub fn check_residual(lab: &Lab, id: &str, order: usize) -> Result<CheckReport, VerifyError> {
    let &(_, closed, spec, norm) = RESIDUALS.iter().find(|r| r.0 == id).ok_or_else(|| VerifyError::UnknownCheck(id.to_string()))?;
    let spec = spec();
    let (a, b, kappa) = match norm {
        Norm::Fixed(an, ad, bn, bd, kn, kd) => (q(an, ad), q(bn, bd), q(kn, kd)),
        Norm::Searched => {
            // The alpha = 1 members share the exponents found for alpha = 0
            // up to the (1-t) power already carried by the closed form.
            lab.normalization(closed, &spec)?.chosen
        }
    };
    let member = lab.member(closed, order + 4)?;
    let f = PrefactoredSeries { a: &member.a + &a, b: &member.b + &b, body: member.body };
    let sigma = SigmaSeries::from_prefactored(closed, &f, &kappa)?;
    let res = residual(&spec, &sigma)?;
    if res.order() < order {
        return Ok(CheckReport::inconclusive(id, &format!("residual only provable to t^{}", res.order())));
    }
    let notes = format!("{spec} on sigma of t^({}) (1-t)^({}) {closed} with offset {}", f.a, f.b, kappa);
    Ok(CheckReport::vanishing(id, &res.truncate(order), &notes))
}

fn factor_sigma(lab: &Lab, id: &str, order: usize) -> Result<SigmaSeries<Rational>, VerifyError> {
    let m = lab.member(id, order + 1)?;
    Ok(SigmaSeries::from_prefactored(id, &m, &qi(0))?)
}

/// Sigma of the bookkeeping prefactor `c t^a (1-t)^b` with offset `kappa`.
fn prefactor_sigma(a: Rational, b: Rational, kappa: Rational, order: usize) -> Result<SigmaSeries<Rational>, VerifyError> {
    let f = PrefactoredSeries::new(a, b, Series::one(order))?;
    Ok(SigmaSeries::from_prefactored("prefactor", &f, &kappa)?)
}

pub const ADDITIVE_IDS: &[&str] = &["additive_C05_four", "additive_C05_two", "additive_C25"];

/// Sigma of a product equals the sum of the factor sigmas plus the prefactor term.
pub fn check_additive(lab: &Lab, id: &str, order: usize) -> Result<CheckReport, VerifyError> {
    let (total, factors): (&str, &[&str]) = match id {
        "additive_C05_four" => ("C05", &["f1_05_alpha0", "f2_05_alpha0", "f3_05_alpha0", "f4_05_alpha0"]),
        "additive_C05_two" => ("C05", &["f13_05_alpha0", "f24_05_alpha0"]),
        "additive_C25" => ("C25", &["F1_25_alpha0", "F2_25_alpha0"]),
        _ => return Err(VerifyError::UnknownCheck(id.to_string())),
    };
    let t = lab.member(total, order + 1)?;
    let total_sigma = SigmaSeries::from_prefactored(total, &t, &q(-1, 4))?;
    let mut parts = factors.iter().map(|f| factor_sigma(lab, f, order)).collect::<Result<Vec<_>, _>>()?;
    parts.push(prefactor_sigma(qi(-6), q(1, 2), q(-1, 4), order + 1)?);
    let r = additive_split_check(id, &total_sigma, &parts);
    Ok(r.with_notes(&format!("sigma({total}, offset -1/4) = sum of factor sigmas + sigma(t^-6 (1-t)^(1/2), offset -1/4)")))
}
