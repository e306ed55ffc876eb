//! Order-by-order construction of one-parameter analytic solution families.
//!
//! The unknown is `t^v c0 (1 + sum u_n t^n)`; the ODE acts on the sigma
//! transform of `t^(v+a) (1-t)^b c0 (1 + ...)` with offset `kappa`. At each
//! order the first unsatisfied residual coefficient is sampled as a
//! polynomial in the new coefficient `u_n` and solved exactly.

use std::fmt;

use crate::odes::{residual_of_poly, OdeError, OdePoly, OdeSpec, SigmaSeries};
use crate::param_poly::{Param, ParamPoly};
use crate::rational::{fmt_rational, qi, rational_pow, Rational};
use crate::series::{sigma_transform, PrefactoredSeries, Series, SeriesError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolverError {
    #[error("order {order}: residual coefficient t^{residual_order} is the nonzero constant {value}; the seed does not extend")]
    Inconsistent { order: usize, residual_order: usize, value: String },
    #[error("order {order}: residual is a non-affine polynomial in u_{order} ({poly}) and no branch hint selects a root")]
    NonAffine { order: usize, poly: String },
    #[error("order {order}: residual has the distinct roots {roots:?} in u_{order}; a branch hint must select one")]
    Branches { order: usize, roots: Vec<ParamPoly> },
    #[error("order {order}: branch hint {hint} is not a root of the residual polynomial")]
    BadHint { order: usize, hint: String },
    #[error("order {order}: a second free parameter would be needed")]
    SecondDegeneracy { order: usize },
    #[error("order {order}: the linear coefficient {divisor} does not divide {dividend}")]
    NotDivisible { order: usize, dividend: String, divisor: String },
    #[error("order {order}: residual coefficient depends on coefficients two steps ahead")]
    IllPosed { order: usize },
    #[error("order {order}: residual never becomes nontrivial")]
    NoConstraint { order: usize },
    #[error("invalid seed: {0}")]
    BadSeed(String),
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Leading behaviour and transform conventions for a solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedAnsatz {
    pub valuation: usize,
    pub leading: Rational,
    /// Extra t-exponent applied on top of the valuation before the sigma transform.
    pub a: Rational,
    pub b: Rational,
    pub kappa: Rational,
    /// Normalized coefficients `u_n` used to pick a root when the residual is
    /// not affine in `u_n`.
    pub branch_hints: Vec<(usize, ParamPoly)>,
    /// Values used for `u_n` at a degenerate order instead of a free parameter.
    pub pins: Vec<(usize, Rational)>,
}

impl SeedAnsatz {
    pub fn new(valuation: usize, leading: Rational, a: Rational, b: Rational, kappa: Rational) -> Result<Self, SolverError> {
        if leading == qi(0) {
            return Err(SolverError::BadSeed("leading coefficient is zero".into()));
        }
        Ok(SeedAnsatz { valuation, leading, a, b, kappa, branch_hints: Vec::new(), pins: Vec::new() })
    }

    /// Reads valuation and leading coefficient off a known member; the
    /// normalized coefficients at `hint_orders` become branch hints.
    pub fn from_member(
        member: &Series<Rational>,
        a: Rational,
        b: Rational,
        kappa: Rational,
        hint_orders: &[usize],
    ) -> Result<Self, SolverError> {
        let v = member.valuation().ok_or_else(|| SolverError::BadSeed("member vanishes".into()))?;
        let c0 = member.coeff(v).clone();
        let mut seed = SeedAnsatz::new(v, c0.clone(), a, b, kappa)?;
        for &n in hint_orders {
            if v + n > member.order() {
                return Err(SolverError::BadSeed(format!("member too short for a hint at order {n}")));
            }
            seed.branch_hints.push((n, ParamPoly::constant(member.coeff(v + n) / &c0)));
        }
        Ok(seed)
    }

    pub fn with_hint(mut self, n: usize, u: Rational) -> Self {
        self.branch_hints.push((n, ParamPoly::constant(u)));
        self
    }

    /// Branch hint that may depend on the free parameter.
    pub fn with_branch(mut self, n: usize, u: ParamPoly) -> Self {
        self.branch_hints.push((n, u));
        self
    }

    pub fn with_pin(mut self, n: usize, u: Rational) -> Self {
        self.pins.push((n, u));
        self
    }

    fn hint(&self, n: usize) -> Option<&ParamPoly> {
        self.branch_hints.iter().find(|(k, _)| *k == n).map(|(_, u)| u)
    }
}

/// A one-parameter family `t^v * body`, with body over the solver parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySeries {
    pub spec: OdeSpec,
    pub valuation: usize,
    pub a: Rational,
    pub b: Rational,
    pub kappa: Rational,
    /// `c0 (1 + sum u_n t^n)` through the solved order.
    pub body: Series<ParamPoly>,
    pub degeneracy_orders: Vec<usize>,
    pub parameter: Param,
}

impl FamilySeries {
    /// The family as a plain series in t, known through `t^(v + order)`.
    pub fn series(&self) -> Series<ParamPoly> {
        self.body.shift_up(self.valuation)
    }

    /// The series the ODE's sigma transform acts on.
    pub fn transformed(&self) -> PrefactoredSeries<ParamPoly> {
        PrefactoredSeries { a: &self.a + qi(self.valuation as i64), b: self.b.clone(), body: self.body.clone() }
    }

    pub fn sigma(&self) -> Result<SigmaSeries<ParamPoly>, SolverError> {
        Ok(SigmaSeries::from_prefactored(&self.spec.to_string(), &self.transformed(), &self.kappa)?)
    }

    /// Applies `p = g(q)` to the body coefficients.
    pub fn reparametrize(&self, g: &ParamPoly) -> FamilySeries {
        let mut out = self.clone();
        out.body = self.body.compose_param(g);
        if let Some(p) = g.param() {
            out.parameter = p;
        }
        out
    }

    pub fn specialize(&self, value: &Rational) -> Series<Rational> {
        self.series().specialize(value)
    }

    pub fn order(&self) -> usize {
        self.body.order()
    }

    pub fn truncate(&self, order: usize) -> FamilySeries {
        let mut out = self.clone();
        out.body = self.body.truncate(order.min(self.body.order()));
        out
    }

    /// One line per body order plus the degeneracy note.
    pub fn text_lines(&self) -> Vec<String> {
        let mut out = self.series().text_lines();
        for n in &self.degeneracy_orders {
            out.push(format!("degeneracy at n={n} (free parameter {})", self.parameter.name()));
        }
        out
    }
}

/// Builds the body, runs the transform and returns the residual.
struct Probe<'a> {
    poly: OdePoly,
    seed: &'a SeedAnsatz,
}

impl Probe<'_> {
    fn residual(&self, body: &[ParamPoly]) -> Result<Series<ParamPoly>, SolverError> {
        let f = PrefactoredSeries {
            a: &self.seed.a + qi(self.seed.valuation as i64),
            b: self.seed.b.clone(),
            body: Series::new(body.to_vec()),
        };
        let sigma = sigma_transform(&f, &self.seed.kappa)?;
        Ok(residual_of_poly(&self.poly, &sigma)?)
    }
}

const SAMPLES: [i64; 6] = [0, 1, 2, 3, 4, 5];

/// Solves for the body coefficients `u_1 .. u_order`.
pub fn solve_family(spec: &OdeSpec, seed: &SeedAnsatz, order: usize) -> Result<FamilySeries, SolverError> {
    let probe = Probe { poly: spec.polynomial(), seed };
    let zero = ParamPoly::zero();
    let mut body: Vec<ParamPoly> = vec![ParamPoly::one()];
    let mut degeneracies = Vec::new();
    let mut m0 = 0usize;

    for n in 1..=order {
        let mut bumps = 0;
        loop {
            let len = (m0 + 4).max(n + 3);
            let trial = |x: &ParamPoly, y: Option<(usize, i64)>| -> Result<ParamPoly, SolverError> {
                let mut b = body.clone();
                b.resize(len + 1, zero.clone());
                b[n] = x.clone();
                if let Some((k, val)) = y {
                    b[k] = ParamPoly::constant(qi(val));
                }
                let r = probe.residual(&b)?;
                Ok(r.coeff(m0).clone())
            };

            // Three-point affine probe; the full quintic fit only runs when it fails.
            let mut values: Vec<ParamPoly> =
                SAMPLES[..3].iter().map(|&x| trial(&ParamPoly::constant(qi(x)), None)).collect::<Result<_, _>>()?;
            let one = ParamPoly::constant(qi(1));
            let next_dep = trial(&one, Some((n + 1, -3)))? != values[1];
            let far_dep = trial(&one, Some((n + 2, -3)))? != values[1];
            if far_dep && !next_dep {
                return Err(SolverError::IllPosed { order: n });
            }
            if next_dep {
                if !degeneracies.is_empty() && !seed.pins.iter().any(|(k, _)| *k == n) {
                    return Err(SolverError::SecondDegeneracy { order: n });
                }
                match seed.pins.iter().find(|(k, _)| *k == n) {
                    Some((_, u)) => body.push(ParamPoly::constant(u.clone())),
                    None => {
                        degeneracies.push(n);
                        body.push(ParamPoly::var(Param::Free));
                    }
                }
                break;
            }

            let second = values[2].sub(&values[1].scale(&qi(2))).add(&values[0]);
            let cs = if second.is_zero() {
                vec![values[0].clone(), values[1].sub(&values[0])]
            } else {
                for &x in &SAMPLES[3..] {
                    values.push(trial(&ParamPoly::constant(qi(x)), None)?);
                }
                let cs = interpolate(&SAMPLES[..5], &values[..5]);
                if eval_poly(&cs, &qi(SAMPLES[5])) != values[5] {
                    return Err(SolverError::NonAffine { order: n, poly: "degree above four".into() });
                }
                cs
            };
            let nz: Vec<usize> = (0..cs.len()).filter(|&i| !cs[i].is_zero()).collect();
            if nz.is_empty() {
                m0 += 1;
                bumps += 1;
                if bumps > 8 {
                    return Err(SolverError::NoConstraint { order: n });
                }
                continue;
            }
            if nz == [0] {
                return Err(SolverError::Inconsistent { order: n, residual_order: m0, value: cs[0].to_text() });
            }
            let k = *nz.last().unwrap();
            let u = if k == 1 {
                cs[0].neg().div_exact(&cs[1]).ok_or_else(|| SolverError::NotDivisible {
                    order: n,
                    dividend: cs[0].neg().to_text(),
                    divisor: cs[1].to_text(),
                })?
            } else {
                match repeated_root(&cs, k) {
                    Some(r) => r,
                    None => {
                        let Some(h) = seed.hint(n) else {
                            if let Some(roots) = quadratic_roots(&cs[..=k]) {
                                return Err(SolverError::Branches { order: n, roots });
                            }
                            return Err(SolverError::NonAffine { order: n, poly: poly_text(&cs) });
                        };
                        let h = h.clone();
                        if !eval_poly_pp(&cs, &h).is_zero() {
                            return Err(SolverError::BadHint { order: n, hint: h.to_text() });
                        }
                        h
                    }
                }
            };
            body.push(u);
            m0 += 1;
            break;
        }
    }

    let c0 = ParamPoly::constant(seed.leading.clone());
    let body = Series::new(body.into_iter().map(|u| u.mul(&c0)).collect());
    Ok(FamilySeries {
        spec: *spec,
        valuation: seed.valuation,
        a: seed.a.clone(),
        b: seed.b.clone(),
        kappa: seed.kappa.clone(),
        body,
        degeneracy_orders: degeneracies,
        parameter: Param::Free,
    })
}

/// Coefficients of the polynomial through `(xs[i], ys[i])`, by divided differences.
fn interpolate(xs: &[i64], ys: &[ParamPoly]) -> Vec<ParamPoly> {
    let n = xs.len();
    let mut dd: Vec<ParamPoly> = ys.to_vec();
    let mut newton = vec![dd[0].clone()];
    for k in 1..n {
        dd = (0..dd.len() - 1).map(|i| dd[i + 1].sub(&dd[i]).scale(&Rational::new((1).into(), (xs[i + k] - xs[i]).into()))).collect();
        newton.push(dd[0].clone());
    }
    let mut out = vec![ParamPoly::zero(); n];
    let mut basis = vec![ParamPoly::one()];
    for (k, c) in newton.iter().enumerate() {
        for (i, b) in basis.iter().enumerate() {
            out[i] = out[i].add(&b.mul(c));
        }
        let mut next = vec![ParamPoly::zero(); basis.len() + 1];
        for (i, b) in basis.iter().enumerate() {
            next[i + 1] = next[i + 1].add(b);
            next[i] = next[i].sub(&b.scale(&qi(xs[k])));
        }
        basis = next;
    }
    out
}

fn eval_poly(cs: &[ParamPoly], x: &Rational) -> ParamPoly {
    cs.iter().rev().fold(ParamPoly::zero(), |acc, c| acc.scale(x).add(c))
}

fn eval_poly_pp(cs: &[ParamPoly], x: &ParamPoly) -> ParamPoly {
    cs.iter().rev().fold(ParamPoly::zero(), |acc, c| acc.mul(x).add(c))
}

/// Both roots of `c0 + c1 x + c2 x^2` when the discriminant is a square.
fn quadratic_roots(cs: &[ParamPoly]) -> Option<Vec<ParamPoly>> {
    if cs.len() != 3 || cs[2].is_zero() {
        return None;
    }
    let disc = cs[1].mul(&cs[1]).sub(&cs[0].mul(&cs[2]).scale(&qi(4)));
    let s = disc.sqrt()?;
    let two_a = cs[2].scale(&qi(2));
    let minus_b = cs[1].neg();
    Some(vec![minus_b.add(&s).div_exact(&two_a)?, minus_b.sub(&s).div_exact(&two_a)?])
}

/// The root `r` when `cs` is exactly `c_k (x - r)^k`.
fn repeated_root(cs: &[ParamPoly], k: usize) -> Option<ParamPoly> {
    let ck = &cs[k];
    let r = cs[k - 1].neg().div_exact(&ck.scale(&qi(k as i64)))?;
    let mut expand = vec![ParamPoly::one()];
    for _ in 0..k {
        let mut next = vec![ParamPoly::zero(); expand.len() + 1];
        for (i, e) in expand.iter().enumerate() {
            next[i + 1] = next[i + 1].add(e);
            next[i] = next[i].sub(&e.mul(&r));
        }
        expand = next;
    }
    let ok = (0..=k).all(|i| cs.get(i).cloned().unwrap_or_else(ParamPoly::zero) == expand[i].mul(ck));
    ok.then_some(r)
}

fn poly_text(cs: &[ParamPoly]) -> String {
    cs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| format!("({})*u^{i}", c.to_text())).collect::<Vec<_>>().join(" + ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    Identity,
    Affine,
    Quadratic,
}

/// `p = g(q)`: the solver parameter as a polynomial in a named parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterMap {
    pub kind: MapKind,
    pub target: Option<Param>,
    pub g: ParamPoly,
}

impl ParameterMap {
    pub fn identity() -> Self {
        ParameterMap { kind: MapKind::Identity, target: Some(Param::Free), g: ParamPoly::var(Param::Free) }
    }

    /// Applies the map to a series over the solver parameter.
    pub fn apply(&self, s: &Series<ParamPoly>) -> Series<ParamPoly> {
        s.compose_param(&self.g)
    }

    /// Values of the target parameter giving solver value `p`, "+" branch
    /// first; empty when the roots are irrational.
    pub fn preimages(&self, p: &Rational) -> Vec<Rational> {
        match self.kind {
            MapKind::Identity => vec![p.clone()],
            MapKind::Affine => vec![(p - self.g.coeff(0)) / self.g.coeff(1)],
            MapKind::Quadratic => {
                let (c0, c1, c2) = (self.g.coeff(0), self.g.coeff(1), self.g.coeff(2));
                let disc = &c1 * &c1 - qi(4) * &c2 * (c0 - p);
                let Some(root) = rational_pow(&disc, &Rational::new(1.into(), 2.into())) else {
                    return Vec::new();
                };
                let mut out = vec![(-&c1 + &root) / (qi(2) * &c2)];
                if root != qi(0) {
                    out.push((-&c1 - &root) / (qi(2) * &c2));
                }
                out
            }
        }
    }

    /// Text form of both branches of the inverse map.
    pub fn branches(&self) -> Vec<String> {
        let name = self.target.map(|p| p.name()).unwrap_or("q");
        match self.kind {
            MapKind::Quadratic => {
                let (c0, c1, c2) = (self.g.coeff(0), self.g.coeff(1), self.g.coeff(2));
                let center = -&c1 / (qi(2) * &c2);
                let shift = &c0 - &c1 * &c1 / (qi(4) * &c2);
                ["+", "-"]
                    .iter()
                    .map(|s| format!("{name} = {} {s} sqrt((p - {}) / {})", fmt_rational(&center), fmt_rational(&shift), fmt_rational(&c2)))
                    .collect()
            }
            _ => vec![format!("p = {}", self.g.to_text())],
        }
    }
}

impl fmt::Display for ParameterMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            MapKind::Identity => "identity",
            MapKind::Affine => "affine",
            MapKind::Quadratic => "quadratic",
        };
        write!(f, "{kind}: p = {}", self.g.to_text())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CalibrationError {
    #[error("family and reference disagree at parameter-free order t^{0}")]
    FixedMismatch(usize),
    #[error("the family has no parameter-dependent coefficient within the common order")]
    NoParameter,
    #[error("family coefficient at t^{0} is not affine in the solver parameter")]
    NonLinearFamily(usize),
    #[error("no affine or quadratic map fits (first failure at t^{0})")]
    NoFit(usize),
    #[error("no grid member annihilates the residual")]
    NoNormalization,
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// Finds `p = g(q)` from the first parameter-dependent order alone; the
/// remaining orders are left for the caller to compare.
pub fn fit_parameter(fam: &Series<ParamPoly>, reference: &Series<ParamPoly>) -> Result<ParameterMap, CalibrationError> {
    let order = fam.order().min(reference.order());
    let mut pivot = None;
    for k in 0..=order {
        let f = fam.coeff(k);
        if !f.is_constant() {
            pivot = Some(k);
            break;
        }
        if *f != *reference.coeff(k) {
            return Err(CalibrationError::FixedMismatch(k));
        }
    }
    let k = pivot.ok_or(CalibrationError::NoParameter)?;
    let f = fam.coeff(k);
    if f.degree() != Some(1) {
        return Err(CalibrationError::NonLinearFamily(k));
    }
    let r = reference.coeff(k);
    let g = r.sub(&ParamPoly::constant(f.coeff(0))).scale(&f.coeff(1).recip());
    let g = match reference.param() {
        Some(p) => g.with_param(p),
        None => g,
    };
    let kind = match g.degree() {
        Some(1) if fam.param() == reference.param() && g.coeff(0) == qi(0) && g.coeff(1) == qi(1) => MapKind::Identity,
        Some(1) => MapKind::Affine,
        Some(2) => MapKind::Quadratic,
        _ => return Err(CalibrationError::NoFit(k)),
    };
    Ok(ParameterMap { kind, target: reference.param(), g })
}

/// Finds `p = g(q)` turning the family into the reference at every common order.
pub fn calibrate_parameter(fam: &Series<ParamPoly>, reference: &Series<ParamPoly>) -> Result<ParameterMap, CalibrationError> {
    let map = fit_parameter(fam, reference)?;
    let order = fam.order().min(reference.order());
    let mapped = map.apply(&fam.truncate(order));
    if let Some((bad, _, _)) = mapped.first_mismatch(&reference.truncate(order)) {
        return Err(CalibrationError::NoFit(bad));
    }
    Ok(map)
}

/// Extra `(a, b, kappa)` applied on top of a closed form before the transform.
pub type Normalization = (Rational, Rational, Rational);

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationReport {
    /// Every grid member whose residual vanishes. Members sharing `b + kappa`
    /// give the same sigma.
    pub matches: Vec<Normalization>,
    pub chosen: Normalization,
    pub checked_order: usize,
}

/// Candidate exponents: `a` in eighths, `b` in sixteenths, `kappa` in `{0, -1/4}`.
pub fn default_grid() -> Vec<Normalization> {
    let mut out = Vec::new();
    for a in -32..=16 {
        for b in -16..=16 {
            for kappa in [qi(0), Rational::new((-1).into(), 4.into())] {
                out.push((Rational::new(a.into(), 8.into()), Rational::new(b.into(), 16.into()), kappa));
            }
        }
    }
    out
}

/// Finds which `t^a (1-t)^b` times `reference` has a sigma (offset kappa)
/// annihilated by `spec`. Prefers `kappa = 0` among equivalent matches.
pub fn calibrate_normalization(
    reference: &PrefactoredSeries<Rational>,
    spec: &OdeSpec,
    grid: &[Normalization],
) -> Result<NormalizationReport, CalibrationError> {
    let poly = spec.polynomial();
    let full = reference.order();
    // Only sigma_0 and sigma_1 depend on the normalization.
    let base = sigma_transform(&PrefactoredSeries { a: qi(0), b: qi(0), body: reference.body.clone() }, &qi(0))
        .map_err(|e| CalibrationError::Solver(SolverError::Series(e)))?;
    let vanishes = |n: &Normalization, order: usize| -> bool {
        let mut s = base.truncate(order.min(base.order()));
        let a = &reference.a + &n.0;
        let lin = &reference.b + &n.1 + &n.2 + &a;
        s.set_coeff(0, s.coeff(0) - a);
        if s.order() >= 1 {
            s.set_coeff(1, s.coeff(1) + lin);
        }
        matches!(residual_of_poly(&poly, &s), Ok(r) if r.is_zero())
    };
    let matches: Vec<Normalization> =
        grid.iter().filter(|n| vanishes(n, full.min(3)) && vanishes(n, full.min(7)) && vanishes(n, full)).cloned().collect();
    let chosen = matches.iter().find(|n| n.2 == qi(0)).or_else(|| matches.first()).cloned().ok_or(CalibrationError::NoNormalization)?;
    Ok(NormalizationReport { matches, chosen, checked_order: full })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn interpolation_recovers_cubic() {
        let f = |x: i64| qi(2 * x * x * x - x + 7);
        let ys: Vec<ParamPoly> = SAMPLES[..5].iter().map(|&x| ParamPoly::constant(f(x))).collect();
        let cs = interpolate(&SAMPLES[..5], &ys);
        let expect = [7, -1, 0, 2, 0];
        for (c, e) in cs.iter().zip(expect) {
            assert_eq!(*c, ParamPoly::constant(qi(e)));
        }
    }

    #[test]
    fn repeated_root_detection() {
        // 3 (x - 1/2)^2 = 3x^2 - 3x + 3/4
        let cs: Vec<ParamPoly> = [q(3, 4), qi(-3), qi(3)].into_iter().map(ParamPoly::constant).collect();
        assert_eq!(repeated_root(&cs, 2), Some(ParamPoly::constant(q(1, 2))));
        let cs: Vec<ParamPoly> = [qi(2), qi(-3), qi(1)].into_iter().map(ParamPoly::constant).collect();
        assert_eq!(repeated_root(&cs, 2), None);
    }

    #[test]
    fn identity_calibration() {
        let x = ParamPoly::var(Param::Free);
        let s = Series::new(vec![ParamPoly::one(), ParamPoly::constant(q(1, 3)), x.scale(&q(2, 5)).add(&ParamPoly::one())]);
        let m = calibrate_parameter(&s, &s).unwrap();
        assert_eq!(m.kind, MapKind::Identity);
    }

    #[test]
    fn quadratic_preimages() {
        // p = (2 alpha - 1)^2
        let g = ParamPoly::new(Some(Param::Alpha), vec![qi(1), qi(-4), qi(4)]);
        let m = ParameterMap { kind: MapKind::Quadratic, target: Some(Param::Alpha), g };
        assert_eq!(m.preimages(&q(1, 4)), vec![q(3, 4), q(1, 4)]);
        assert!(m.preimages(&q(1, 2)).is_empty());
    }
}
