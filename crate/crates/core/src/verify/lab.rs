//! Named solver families, solved on demand and cached by depth.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::catalog::{Catalog, CatalogError};
use crate::odes::{OdeError, OdeSpec};
use crate::param_poly::ParamPoly;
use crate::rational::{q, qi, Rational};
use crate::series::{PrefactoredSeries, Series, SeriesError};
use crate::solver::{
    calibrate_normalization, default_grid, fit_parameter, solve_family, CalibrationError, FamilySeries, NormalizationReport, ParameterMap,
    SeedAnsatz, SolverError,
};
use crate::special::SpecialError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error("unknown check id {0:?}")]
    UnknownCheck(String),
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("family {family} calibrated onto {reference} fails at t^{order}")]
    Calibration { family: String, reference: String, order: usize },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Fit(#[from] CalibrationError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error(transparent)]
    Special(#[from] SpecialError),
}

impl VerifyError {
    pub fn is_unknown_id(&self) -> bool {
        matches!(self, VerifyError::UnknownCheck(_) | VerifyError::UnknownFamily(_) | VerifyError::Catalog(CatalogError::UnknownId(_)))
    }
}

#[derive(Debug, Clone, Copy)]
enum Seed {
    /// `v = 0`, `c0 = 1`, no prefactor, offset -1/4.
    Normalized,
    /// Leading behaviour and root choices from a closed-form member; the
    /// transform exponents from a grid search on that member.
    Member(&'static str),
}

#[derive(Debug, Clone, Copy)]
pub struct FamilyDef {
    pub name: &'static str,
    solve_key: &'static str,
    spec: fn() -> OdeSpec,
    seed: Seed,
    /// Reference series whose parameter the family is calibrated onto.
    pub reference: Option<&'static str>,
}

fn eqnmodd05() -> OdeSpec {
    OdeSpec::eqnmodd(0, 5).expect("valid")
}
fn eqnmodd25() -> OdeSpec {
    OdeSpec::eqnmodd(2, 5).expect("valid")
}
fn nonlinear25() -> OdeSpec {
    OdeSpec::nonlinear(2, 5).expect("valid")
}
fn fourfact5() -> OdeSpec {
    OdeSpec::fourfact(5)
}
fn diag1() -> OdeSpec {
    OdeSpec::diag(1)
}

pub const FAMILIES: &[FamilyDef] = &[
    FamilyDef { name: "C05", solve_key: "C05", spec: eqnmodd05, seed: Seed::Normalized, reference: Some("C05_lambda") },
    FamilyDef { name: "C05_mu", solve_key: "C05", spec: eqnmodd05, seed: Seed::Normalized, reference: Some("C05_mu") },
    FamilyDef { name: "C25", solve_key: "C25", spec: eqnmodd25, seed: Seed::Normalized, reference: Some("C25_lambda") },
    FamilyDef { name: "C25_mu", solve_key: "C25", spec: eqnmodd25, seed: Seed::Normalized, reference: Some("C25_mu") },
    FamilyDef { name: "C11", solve_key: "C11", spec: diag1, seed: Seed::Normalized, reference: Some("C11_M") },
    FamilyDef { name: "f1", solve_key: "f1", spec: fourfact5, seed: Seed::Member("f1_05_alpha0"), reference: Some("f1_alpha") },
    FamilyDef { name: "f2", solve_key: "f2", spec: fourfact5, seed: Seed::Member("f2_05_alpha0"), reference: Some("f2_alpha") },
    FamilyDef { name: "f3", solve_key: "f3", spec: fourfact5, seed: Seed::Member("f3_05_alpha0"), reference: Some("f3_alpha") },
    FamilyDef { name: "f4", solve_key: "f4", spec: fourfact5, seed: Seed::Member("f4_05_alpha0"), reference: Some("f4_alpha") },
    FamilyDef { name: "F1_25", solve_key: "F1_25", spec: nonlinear25, seed: Seed::Member("F1_25_alpha0"), reference: Some("F1_25_alpha") },
    FamilyDef { name: "F2_25", solve_key: "F2_25", spec: nonlinear25, seed: Seed::Member("F2_25_alpha0"), reference: Some("F2_25_alpha") },
];

pub fn family_def(name: &str) -> Result<&'static FamilyDef, VerifyError> {
    FAMILIES.iter().find(|d| d.name == name).ok_or_else(|| VerifyError::UnknownFamily(name.to_string()))
}

impl FamilyDef {
    pub fn spec(&self) -> OdeSpec {
        (self.spec)()
    }
}

/// A solver family rewritten in the parameter of its reference series.
#[derive(Debug, Clone)]
pub struct CalibratedFamily {
    pub raw: FamilySeries,
    pub map: ParameterMap,
    /// The family as a series in t, known through the requested order.
    pub series: Series<ParamPoly>,
}

/// Shared state for a run of checks: the catalog plus cached solves.
pub struct Lab {
    catalog: Catalog,
    solves: Mutex<HashMap<&'static str, FamilySeries>>,
    normalizations: Mutex<HashMap<(String, String), NormalizationReport>>,
    diagonals: Mutex<HashMap<i64, Vec<FamilySeries>>>,
}

const MEMBER_ORDER: usize = 14;
const HINT_ORDERS: [usize; 3] = [1, 2, 3];

impl Lab {
    pub fn new(catalog: Catalog) -> Lab {
        Lab {
            catalog,
            solves: Mutex::new(HashMap::new()),
            normalizations: Mutex::new(HashMap::new()),
            diagonals: Mutex::new(HashMap::new()),
        }
    }

    /// Lab over the catalog named by `LAMBDA_EXT_CATALOG`, or the embedded one.
    pub fn global() -> Result<&'static Lab, VerifyError> {
        static LAB: OnceLock<Lab> = OnceLock::new();
        if let Some(l) = LAB.get() {
            return Ok(l);
        }
        let catalog = Catalog::load()?;
        Ok(LAB.get_or_init(|| Lab::new(catalog)))
    }

    pub fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    /// Closed form expanded as a plain series through `t^order`.
    pub fn closed(&self, id: &str, order: usize) -> Result<Series<Rational>, VerifyError> {
        Ok(self.catalog.expand_series(id, order)?)
    }

    pub fn closed_pp(&self, id: &str, order: usize) -> Result<Series<ParamPoly>, VerifyError> {
        Ok(Series::from_rational_series(&self.closed(id, order)?))
    }

    /// Grid search for the transform exponents of a closed form under `spec`.
    pub fn normalization(&self, id: &str, spec: &OdeSpec) -> Result<NormalizationReport, VerifyError> {
        let key = (id.to_string(), spec.to_string());
        if let Some(r) = self.normalizations.lock().expect("lock").get(&key) {
            return Ok(r.clone());
        }
        let member = self.catalog.expand_entry(id, MEMBER_ORDER)?;
        let report = calibrate_normalization(&member, spec, &default_grid())?;
        self.normalizations.lock().expect("lock").insert(key, report.clone());
        Ok(report)
    }

    pub fn seed(&self, def: &FamilyDef) -> Result<SeedAnsatz, VerifyError> {
        match def.seed {
            Seed::Normalized => Ok(SeedAnsatz::new(0, qi(1), qi(0), qi(0), q(-1, 4))?),
            Seed::Member(id) => {
                let (a, b, kappa) = self.normalization(id, &def.spec())?.chosen;
                let member = self.closed(id, MEMBER_ORDER)?;
                Ok(SeedAnsatz::from_member(&member, a, b, kappa, &HINT_ORDERS)?)
            }
        }
    }

    /// Raw solver family known through `t^order`.
    pub fn raw_family(&self, name: &str, order: usize) -> Result<FamilySeries, VerifyError> {
        let def = family_def(name)?;
        if let Some(f) = self.solves.lock().expect("lock").get(def.solve_key) {
            if f.valuation + f.order() >= order {
                return Ok(f.truncate(order.saturating_sub(f.valuation)));
            }
        }
        let seed = self.seed(def)?;
        let body_order = order.saturating_sub(seed.valuation).max(1);
        let fam = solve_family(&def.spec(), &seed, body_order)?;
        self.solves.lock().expect("lock").insert(def.solve_key, fam.clone());
        Ok(fam)
    }

    /// Family in the parameter of its reference series, through `t^order`.
    /// Only the pivot order is used to fix the map; agreement elsewhere is
    /// the business of the checks.
    pub fn family(&self, name: &str, order: usize) -> Result<CalibratedFamily, VerifyError> {
        let def = family_def(name)?;
        let reference = def.reference.ok_or_else(|| VerifyError::Invalid(format!("family {name} has no reference series")))?;
        let raw = self.raw_family(name, order)?;
        let series = raw.series();
        let map = fit_parameter(&series, &self.catalog.reference_full(reference)?)?;
        let series = map.apply(&series);
        Ok(CalibratedFamily { raw, map, series })
    }

    /// Like [`Lab::family`] but also requires agreement with every printed
    /// reference coefficient.
    pub fn verified_family(&self, name: &str, order: usize) -> Result<CalibratedFamily, VerifyError> {
        let fam = self.family(name, order)?;
        let def = family_def(name)?;
        let reference = def.reference.expect("checked in family");
        let r = self.catalog.reference_full(reference)?;
        let common = r.order().min(fam.series.order());
        if let Some((k, _, _)) = fam.series.truncate(common).first_mismatch(&r.truncate(common)) {
            return Err(VerifyError::Calibration { family: name.to_string(), reference: reference.to_string(), order: k });
        }
        Ok(fam)
    }

    /// Every branch of the diagonal family `C(n,n)` with `C(0) = 1`, known
    /// through `t^order`.
    pub fn diagonal_branches(&self, n: i64, order: usize) -> Result<Vec<FamilySeries>, VerifyError> {
        if let Some(fs) = self.diagonals.lock().expect("lock").get(&n) {
            if fs.iter().all(|f| f.order() >= order) {
                return Ok(fs.iter().map(|f| f.truncate(order)).collect());
            }
        }
        let seed = SeedAnsatz::new(0, qi(1), qi(0), qi(0), q(-1, 4))?;
        let fs = solve_branches(&OdeSpec::diag(n), seed, order.max(1), 0)?;
        self.diagonals.lock().expect("lock").insert(n, fs.clone());
        Ok(fs)
    }

    /// The normalized closed form as the transform sees it.
    pub fn member(&self, id: &str, order: usize) -> Result<PrefactoredSeries<Rational>, VerifyError> {
        Ok(self.catalog.expand_entry(id, order)?)
    }
}

fn solve_branches(spec: &OdeSpec, seed: SeedAnsatz, order: usize, depth: usize) -> Result<Vec<FamilySeries>, VerifyError> {
    match solve_family(spec, &seed, order) {
        Ok(f) => Ok(vec![f]),
        Err(SolverError::Branches { order: k, roots }) if depth < 4 => {
            let mut out = Vec::new();
            for r in roots {
                out.extend(solve_branches(spec, seed.clone().with_branch(k, r), order, depth + 1)?);
            }
            Ok(out)
        }
        Err(e) => Err(e.into()),
    }
}
