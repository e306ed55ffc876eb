//! Check ids, default orders, negative controls and the suite runner.

use std::thread;

use serde::Serialize;

use crate::catalog::CatalogError;
use crate::coeff::Coeff;
use crate::odes::{residual, OdeSpec, SigmaSeries};
use crate::param_poly::ParamPoly;
use crate::rational::{q, qi, Rational};
use crate::series::{PrefactoredSeries, Series};

use super::arith::{check_arith, ARITH_IDS};
use super::deformation::{check_deformation, DEFORMATION_IDS};
use super::identities::{check_identity, IDENTITY_IDS};
use super::lab::{Lab, VerifyError, FAMILIES};
use super::report::{CheckReport, Mismatch, Status, SCHEMA_VERSION};
use super::reproduction::{
    check_additive, check_fixture, check_residual, check_solver, residual_ids, ADDITIVE_IDS, FIXTURES, SOLVER_FIXTURES,
};
use super::toda::{check_toda, constant_control_residual, LambdaMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Fixture,
    Solver,
    Residual,
    Additive,
    Identity,
    Deformation,
    Toda,
    Arith,
    Property,
    Control,
}

impl Category {
    pub fn name(self) -> &'static str {
        match self {
            Category::Fixture => "fixture",
            Category::Solver => "solver",
            Category::Residual => "residual",
            Category::Additive => "additive",
            Category::Identity => "identity",
            Category::Deformation => "deformation",
            Category::Toda => "toda",
            Category::Arith => "arith",
            Category::Property => "property",
            Category::Control => "control",
        }
    }
}

const TODA_IDS: &[&str] = &["toda_N1_calibrated", "toda_N1_physical", "toda_N2_calibrated", "toda_N2_physical"];

pub const VALUATION_IDS: &[&str] = &["valuation_f1_N5", "valuation_f1_N7", "valuation_f1_N9"];

const PROPERTY_IDS: &[&str] = &["specialization_commutes"];

pub const CONTROL_IDS: &[&str] = &["control_perturbed_fixture", "control_perturbed_solver", "control_toda_constant"];

/// Every registered check id with its category and default order, in
/// registry order.
pub fn all_checks() -> Vec<(&'static str, Category, usize)> {
    let mut v = Vec::new();
    v.extend(FIXTURES.iter().map(|f| (f.0, Category::Fixture, 0)));
    v.extend(SOLVER_FIXTURES.iter().map(|f| (f.0, Category::Solver, 0)));
    v.extend(residual_ids().map(|id| (id, Category::Residual, 30)));
    v.extend(ADDITIVE_IDS.iter().map(|&id| (id, Category::Additive, 30)));
    v.extend(IDENTITY_IDS.iter().map(|&id| (id, Category::Identity, 20)));
    v.extend(DEFORMATION_IDS.iter().map(|&id| (id, Category::Deformation, 20)));
    v.extend(TODA_IDS.iter().map(|&id| (id, Category::Toda, if id.contains("N1") { 20 } else { 12 })));
    v.extend(ARITH_IDS.iter().map(|&id| (id, Category::Arith, 25)));
    v.extend(VALUATION_IDS.iter().map(|&id| (id, Category::Property, 0)));
    v.extend(PROPERTY_IDS.iter().map(|&id| (id, Category::Property, 12)));
    v.extend(CONTROL_IDS.iter().map(|&id| (id, Category::Control, 8)));
    v
}

pub fn lookup(id: &str) -> Option<(&'static str, Category, usize)> {
    all_checks().into_iter().find(|c| c.0 == id)
}

/// Runs one check; `order = None` uses its default order.
pub fn run_check(lab: &Lab, id: &str, order: Option<usize>) -> Result<CheckReport, VerifyError> {
    let (_, cat, default) = lookup(id).ok_or_else(|| VerifyError::UnknownCheck(id.to_string()))?;
    let order = order.unwrap_or(default);
    match cat {
        Category::Fixture => check_fixture(lab, id),
        Category::Solver => check_solver(lab, id),
        Category::Residual => check_residual(lab, id, order),
        Category::Additive => check_additive(lab, id, order),
        Category::Identity => check_identity(lab, id, order),
        Category::Deformation => check_deformation(lab, id, order),
        Category::Toda => {
            let rest = id.strip_prefix("toda_N").ok_or_else(|| VerifyError::UnknownCheck(id.to_string()))?;
            let (n, mode) = rest.split_once('_').ok_or_else(|| VerifyError::UnknownCheck(id.to_string()))?;
            let n: usize = n.parse().map_err(|_| VerifyError::UnknownCheck(id.to_string()))?;
            let mode = LambdaMode::from_name(mode).ok_or_else(|| VerifyError::UnknownCheck(id.to_string()))?;
            check_toda(lab, n, order, mode)
        }
        Category::Arith => check_arith(lab, id, order),
        Category::Property if id.starts_with("valuation_") => check_valuation(lab, id),
        Category::Property => check_specialization(lab, id, order),
        Category::Control => check_control(lab, id, order),
    }
}

/// Runs a check, turning computation errors into inconclusive reports.
pub fn run_check_reported(lab: &Lab, id: &str, order: Option<usize>) -> Result<CheckReport, VerifyError> {
    match run_check(lab, id, order) {
        Err(e) if !e.is_unknown_id() => Ok(CheckReport::inconclusive(id, &format!("computation error: {e}"))),
        r => r,
    }
}

/// `t`-valuation of the first row factor for `N`: `(N-1)^2/16` for
/// `N = 1 mod 4`, `(N+1)^2/16` for `N = 3 mod 4`.
pub fn f1_valuation(n: i64) -> Rational {
    let m = if n % 4 == 1 { n - 1 } else { n + 1 };
    q(m * m, 16)
}

fn check_valuation(lab: &Lab, id: &str) -> Result<CheckReport, VerifyError> {
    let n: i64 = id.strip_prefix("valuation_f1_N").and_then(|s| s.parse().ok()).ok_or_else(|| VerifyError::UnknownCheck(id.to_string()))?;
    let expected = f1_valuation(n);
    let v = expected.to_integer().try_into().map_err(|_| VerifyError::Invalid("valuation out of range".into()))?;
    let s = lab.catalog().expand_entry(&format!("f1_N{n}"), v + 2)?.to_series()?;
    let notes = format!("f1 for N = {n} starts at t^{expected}; every lower coefficient, t^{} included, is exactly 0", v as i64 - 1);
    let r = CheckReport::compare(id, &s.truncate(v - 1), &Series::zero(v - 1), &notes);
    if r.passed() && Coeff::is_zero(s.coeff(v)) {
        let bad = Mismatch { order: v, expected: "nonzero".into(), got: "0".into() };
        return Ok(CheckReport { status: Status::Fail, first_mismatch: Some(bad), checked_order: v, ..r });
    }
    Ok(CheckReport { checked_order: v, ..r })
}

fn c25_residual<C: Coeff>(s: &Series<C>) -> Result<Series<C>, VerifyError> {
    let f = PrefactoredSeries::new(qi(0), qi(0), s.clone())?;
    Ok(residual(&OdeSpec::eqnmodd(2, 5)?, &SigmaSeries::from_prefactored("C05", &f, &q(-1, 4))?)?)
}

/// The C(2,5) residual of the C(0,5) family, which does not vanish: computed
/// over the parameter ring then specialized, and computed on the specialized
/// family over the rationals, for each value.
pub fn specialization_residuals(lab: &Lab, values: &[Rational], order: usize) -> Result<Vec<[Series<Rational>; 2]>, VerifyError> {
    let fam = lab.family("C05", order + 2)?.series;
    let generic = c25_residual(&fam)?;
    values.iter().map(|v| Ok([generic.specialize(v), c25_residual(&fam.specialize(v))?])).collect()
}

fn check_specialization(lab: &Lab, id: &str, order: usize) -> Result<CheckReport, VerifyError> {
    let values = [q(1, 3), q(-2, 7), qi(5)];
    let pairs = specialization_residuals(lab, &values, order)?;
    let parts = pairs
        .iter()
        .zip(&values)
        .map(|([a, b], v)| CheckReport::compare(&format!("lambda^2 = {v}"), &a.truncate(order), &b.truncate(order), ""))
        .collect::<Vec<_>>();
    let nonzero = pairs.iter().all(|[a, _]| !a.truncate(order).is_zero());
    if !nonzero {
        return Ok(CheckReport::inconclusive(id, "residual vanishes, comparison would be vacuous"));
    }
    Ok(CheckReport::combine(id, parts, "C(2,5) residual of the C(0,5) family commutes with specializing lambda^2"))
}

/// `1/2^50`.
pub fn perturbation() -> Rational {
    Rational::new(1.into(), num_bigint::BigInt::from(1u8) << 50)
}

/// Passes when `inner` fails exactly at `at`.
fn control_outcome(id: &str, inner: CheckReport, at: usize, what: &str) -> CheckReport {
    let hit = inner.first_mismatch.as_ref().map(|m| m.order);
    let ok = inner.status == Status::Fail && hit == Some(at);
    CheckReport {
        check_id: id.to_string(),
        status: if ok { Status::Pass } else { Status::Fail },
        checked_order: at,
        first_mismatch: None,
        notes: format!("{what} perturbed by 1/2^50 at t^{at}; inner check {} at {:?}", inner.status.name(), hit),
    }
}

fn check_control(lab: &Lab, id: &str, order: usize) -> Result<CheckReport, VerifyError> {
    match id {
        "control_perturbed_fixture" => {
            let mut expected = lab.catalog().reference_full("f1_alpha")?.specialize(&qi(0));
            let at = order.min(expected.order());
            let c = expected.coeff(at) + perturbation();
            expected.set_coeff(at, c);
            let got = lab.closed("f1_05_alpha0", expected.order())?;
            let inner = CheckReport::compare("fixture_f1_alpha0", &got, &expected, "");
            Ok(control_outcome(id, inner, at, "printed f1 at alpha = 0"))
        }
        "control_perturbed_solver" => {
            let mut expected = lab.catalog().reference_full("C05_lambda")?;
            let at = order.min(expected.order());
            let c = expected.coeff(at).add(&ParamPoly::constant(perturbation()));
            expected.set_coeff(at, c);
            let fam = lab.family("C05", expected.order())?.series;
            let inner = CheckReport::compare("solver_C05_lambda", &fam, &expected, "");
            Ok(control_outcome(id, inner, at, "printed C(0,5) lambda-extension"))
        }
        "control_toda_constant" => {
            let res = constant_control_residual(1, order)?;
            let expected = Series::one_minus_t_pow(&qi(-2), order).scale(&ParamPoly::constant(q(1, 4)));
            let r = CheckReport::compare(id, &res.truncate(order), &expected, "");
            let vanishes = res.truncate(order).is_zero();
            let notes =
                format!("recurrence with C_N = 1 leaves (1/4)/(1-t)^2 (vanishing: {vanishes}), so the plain recurrence check fails at t^0");
            Ok(r.with_notes(&notes))
        }
        _ => Err(VerifyError::UnknownCheck(id.to_string())),
    }
}

/// Parses a suite manifest: one `check_id [order]` per line, `#` comments.
pub fn parse_manifest(text: &str) -> Result<Vec<(String, Option<usize>)>, VerifyError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let id = parts.next().expect("nonempty").to_string();
        let order = match parts.next() {
            Some(o) => Some(o.parse().map_err(|_| VerifyError::Invalid(format!("manifest line {}: bad order {o:?}", i + 1)))?),
            None => None,
        };
        out.push((id, order));
    }
    Ok(out)
}

pub const DEFAULT_SUITE: &str = include_str!("../../data/suite.txt");

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub reports: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed())
    }

    pub fn count(&self, s: Status) -> usize {
        self.reports.iter().filter(|r| r.status == s).count()
    }
}

/// Runs a manifest on `threads` workers; reports come back sorted by check id.
/// Unknown ids abort the run before any check starts.
pub fn run_suite(lab: &Lab, manifest: &[(String, Option<usize>)], threads: usize) -> Result<SuiteReport, VerifyError> {
    for (id, _) in manifest {
        lookup(id).ok_or_else(|| VerifyError::UnknownCheck(id.clone()))?;
    }
    let threads = threads.max(1);
    let mut reports: Vec<CheckReport> = thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|w| {
                s.spawn(move || {
                    manifest
                        .iter()
                        .skip(w)
                        .step_by(threads)
                        .map(|(id, order)| run_check_reported(lab, id, *order).expect("ids validated"))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    });
    reports.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    Ok(SuiteReport { schema_version: SCHEMA_VERSION, reports })
}

/// What a series id names.
pub enum Resolved {
    /// A solver family in the parameter of its reference, or a printed series.
    Param(Series<ParamPoly>),
    /// A closed form `t^a (1-t)^b body`.
    Closed(PrefactoredSeries<Rational>),
}

/// Resolves a series id through `t^order`: solver families by name, printed
/// references through the family that reproduces them (so any order works),
/// other printed references up to their printed order, and closed forms.
pub fn resolve_series(lab: &Lab, id: &str, order: usize) -> Result<Resolved, VerifyError> {
    let family = FAMILIES.iter().find(|d| d.name == id || d.reference == Some(id));
    if let Some(def) = family {
        // The parameter is fixed at the degeneracy order, which may lie
        // beyond `order`.
        let printed = def.reference.map(|r| lab.catalog().reference_full(r).map(|s| s.order())).transpose()?.unwrap_or(0);
        return Ok(Resolved::Param(lab.family(def.name, order.max(printed))?.series.truncate(order)));
    }
    let catalog = lab.catalog();
    match catalog.reference_series(id, order) {
        Ok(s) => return Ok(Resolved::Param(s)),
        Err(CatalogError::WrongKind { .. }) => {}
        Err(e) => return Err(e.into()),
    }
    match catalog.expand_series(id, order) {
        Ok(s) => Ok(Resolved::Param(Series::from_rational_series(&s))),
        Err(CatalogError::NotPlainSeries { .. }) => Ok(Resolved::Closed(catalog.expand_entry(id, order)?)),
        Err(e) => Err(e.into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_lists_every_check_once() {
        let manifest = parse_manifest(DEFAULT_SUITE).unwrap();
        let mut listed: Vec<&str> = manifest.iter().map(|m| m.0.as_str()).collect();
        let mut known: Vec<&str> = all_checks().iter().map(|c| c.0).collect();
        listed.sort();
        known.sort();
        assert_eq!(listed, known);
    }

    #[test]
    fn manifest_parsing() {
        let m = parse_manifest("# c\n\nxy_odd 8  # trailing\nC05_half\n").unwrap();
        assert_eq!(m, vec![("xy_odd".to_string(), Some(8)), ("C05_half".to_string(), None)]);
        assert!(parse_manifest("xy_odd eight").is_err());
    }

    #[test]
    fn valuation_law_values() {
        assert_eq!([5, 7, 9].map(f1_valuation), [qi(1), qi(4), qi(4)]);
    }
}
