//! The four second-order sigma-form ODEs, stored as polynomials in
//! `(t, sigma, sigma', sigma'')`, and their residuals on series.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::coeff::Coeff;
use crate::rational::{q, qi, Rational};
use crate::series::{sigma_transform, PrefactoredSeries, Series, SeriesError};
use crate::verify::CheckReport;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OdeError {
    #[error("sigma of order {0} is too small for a residual (need at least 4)")]
    OrderTooSmall(usize),
    #[error("invalid ODE parameters: {0}")]
    InvalidSpec(String),
    #[error("series error: {0}")]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OdeFamily {
    /// Sigma form for `C(M,N)` with `M + N` odd.
    EqnModd,
    /// The equation shared by the two-factor sigmas.
    NonlinearEq,
    /// The equation shared by the four row-correlation factors.
    FourFact,
    /// Sigma form for the diagonal correlations `C(N,N)`.
    DiagPvi,
}

impl OdeFamily {
    pub fn name(self) -> &'static str {
        match self {
            OdeFamily::EqnModd => "EQNMODD",
            OdeFamily::NonlinearEq => "NONLINEAREQ",
            OdeFamily::FourFact => "FOURFACT",
            OdeFamily::DiagPvi => "DIAG_PVI",
        }
    }

    pub fn from_name(name: &str) -> Option<OdeFamily> {
        match name.to_ascii_uppercase().as_str() {
            "EQNMODD" => Some(OdeFamily::EqnModd),
            "NONLINEAREQ" => Some(OdeFamily::NonlinearEq),
            "FOURFACT" => Some(OdeFamily::FourFact),
            "DIAG_PVI" | "DIAG" => Some(OdeFamily::DiagPvi),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OdeSpec {
    pub family: OdeFamily,
    pub m: Option<i64>,
    pub n: i64,
}

impl OdeSpec {
    pub fn eqnmodd(m: i64, n: i64) -> Result<Self, OdeError> {
        Self::two_index(OdeFamily::EqnModd, m, n)
    }

    pub fn nonlinear(m: i64, n: i64) -> Result<Self, OdeError> {
        Self::two_index(OdeFamily::NonlinearEq, m, n)
    }

    pub fn fourfact(n: i64) -> Self {
        OdeSpec { family: OdeFamily::FourFact, m: None, n }
    }

    pub fn diag(n: i64) -> Self {
        OdeSpec { family: OdeFamily::DiagPvi, m: None, n }
    }

    fn two_index(family: OdeFamily, m: i64, n: i64) -> Result<Self, OdeError> {
        if (m + n).rem_euclid(2) != 1 {
            return Err(OdeError::InvalidSpec(format!("M + N must be odd, got M={m}, N={n}")));
        }
        if m > n || m < 0 {
            return Err(OdeError::InvalidSpec(format!("need 0 <= M <= N, got M={m}, N={n}")));
        }
        Ok(OdeSpec { family, m: Some(m), n })
    }

    /// Builds a spec from a family name and optional `M`.
    pub fn from_parts(family: OdeFamily, m: Option<i64>, n: i64) -> Result<Self, OdeError> {
        match family {
            OdeFamily::EqnModd | OdeFamily::NonlinearEq => {
                let m = m.ok_or_else(|| OdeError::InvalidSpec(format!("{} needs M", family.name())))?;
                Self::two_index(family, m, n)
            }
            OdeFamily::FourFact | OdeFamily::DiagPvi => Ok(OdeSpec { family, m: None, n }),
        }
    }

    /// The equation as a polynomial in `(t, sigma, sigma', sigma'')`.
    pub fn polynomial(&self) -> OdePoly {
        let t = OdePoly::t;
        let s = OdePoly::s;
        let s1 = OdePoly::s1;
        let s2 = OdePoly::s2;
        let c = |r: Rational| OdePoly::constant(r);
        let nn = qi(self.n * self.n);
        let mm = qi(self.m.unwrap_or(0).pow(2));
        let tm1 = t() - c(qi(1));
        let ts = t() * s1() - s();
        let t1s = tm1.clone() * s1() - s();
        match self.family {
            OdeFamily::EqnModd => {
                t() * t() * tm1.clone() * tm1.clone() * s2() * s2() + c(qi(4)) * s1() * ts.clone() * t1s.clone()
                    - c(mm.clone()) * ts.clone() * ts.clone()
                    - c(nn.clone()) * s1() * s1()
                    + c(&mm + &nn) * s1() * ts
            }
            OdeFamily::NonlinearEq => {
                let d = &mm - &nn;
                let inner = c(qi(8)) * s() - c(qi(8)) * (t() + c(qi(1))) * s1() + c(d.clone());
                let left = c(qi(8)) * s() - c(qi(16)) * t() * s1() + c(mm.clone()) * t() - c(nn.clone()) + c(qi(1)) - t();
                let right = c(qi(8)) * t() * tm1.clone() * s1() * s1() - c(qi(16)) * t() * s() * s1() + c(qi(8)) * s() * s() + c(d) * s();
                c(qi(32)) * t() * t() * t() * tm1.clone() * tm1.clone() * s2() * s2() + c(qi(4)) * t() * t() * tm1.clone() * inner * s2()
                    - left * right
            }
            OdeFamily::FourFact => {
                let np1 = &nn + qi(1);
                t() * t() * tm1.clone() * tm1.clone() * s2() * s2()
                    + c(qi(4)) * s1() * ts * t1s
                    + c(q(1, 4)) * (c(np1.clone()) * tm1 - t() * t()) * s1() * s1()
                    - c(q(1, 64)) * (c(qi(16)) * (c(np1) - c(qi(2)) * t()) * s() + c(nn.clone()) * t()) * s1()
                    - c(q(1, 4)) * s() * s()
                    + c(&nn / qi(64)) * s()
                    - c(&nn * (&nn - qi(3)) / qi(1024))
            }
            OdeFamily::DiagPvi => {
                let lhs = t() * tm1.clone() * s2();
                lhs.clone() * lhs - (c(nn) * t1s.clone() * t1s.clone() - c(qi(4)) * s1() * (t1s - c(q(1, 4))) * ts)
            }
        }
    }
}

impl fmt::Display for OdeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.m {
            Some(m) => write!(f, "{}({m},{})", self.family.name(), self.n),
            None => write!(f, "{}({})", self.family.name(), self.n),
        }
    }
}

/// Exponents of `(t, sigma, sigma', sigma'')`.
pub type Monomial = [u32; 4];

/// Sparse polynomial in `(t, sigma, sigma', sigma'')` with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OdePoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl OdePoly {
    fn var(i: usize) -> OdePoly {
        let mut m = [0u32; 4];
        m[i] = 1;
        OdePoly { terms: BTreeMap::from([(m, qi(1))]) }
    }

    pub fn t() -> OdePoly {
        Self::var(0)
    }

    pub fn s() -> OdePoly {
        Self::var(1)
    }

    pub fn s1() -> OdePoly {
        Self::var(2)
    }

    pub fn s2() -> OdePoly {
        Self::var(3)
    }

    pub fn constant(r: Rational) -> OdePoly {
        let mut p = OdePoly::default();
        if !r.is_zero() {
            p.terms.insert([0; 4], r);
        }
        p
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    fn insert(&mut self, m: Monomial, c: Rational) {
        let entry = self.terms.entry(m).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Evaluates at scalar values, for spot checks.
    pub fn eval_scalar(&self, vals: [&Rational; 4]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for i in 0..4 {
                for _ in 0..m[i] {
                    v *= vals[i];
                }
            }
            acc += v;
        }
        acc
    }
}

impl Add for OdePoly {
    type Output = OdePoly;
    fn add(mut self, rhs: OdePoly) -> OdePoly {
        for (m, c) in rhs.terms {
            self.insert(m, c);
        }
        self
    }
}

impl Neg for OdePoly {
    type Output = OdePoly;
    fn neg(self) -> OdePoly {
        OdePoly { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl Sub for OdePoly {
    type Output = OdePoly;
    fn sub(self, rhs: OdePoly) -> OdePoly {
        self + (-rhs)
    }
}

impl Mul for OdePoly {
    type Output = OdePoly;
    fn mul(self, rhs: OdePoly) -> OdePoly {
        let mut out = OdePoly::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = [ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2], ma[3] + mb[3]];
                out.insert(m, ca * cb);
            }
        }
        out
    }
}

/// Where a sigma series came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub source: String,
    pub a: Rational,
    pub b: Rational,
    pub kappa: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SigmaSeries<C> {
    pub sigma: Series<C>,
    pub provenance: Provenance,
}

impl<C: Coeff> SigmaSeries<C> {
    /// Applies the sigma transform to `f` and records the bookkeeping.
    pub fn from_prefactored(source: &str, f: &PrefactoredSeries<C>, kappa: &Rational) -> Result<Self, OdeError> {
        Ok(SigmaSeries {
            sigma: sigma_transform(f, kappa)?,
            provenance: Provenance { source: source.to_string(), a: f.a.clone(), b: f.b.clone(), kappa: kappa.clone() },
        })
    }

    pub fn raw(source: &str, sigma: Series<C>) -> Self {
        SigmaSeries {
            sigma,
            provenance: Provenance { source: source.to_string(), a: Rational::zero(), b: Rational::zero(), kappa: Rational::zero() },
        }
    }
}

/// The ODE's left-hand side evaluated on `s`; zero for a solution.
pub fn residual<C: Coeff>(spec: &OdeSpec, s: &SigmaSeries<C>) -> Result<Series<C>, OdeError> {
    if s.sigma.order() < 4 {
        return Err(OdeError::OrderTooSmall(s.sigma.order()));
    }
    residual_of_poly(&spec.polynomial(), &s.sigma)
}

/// Residual of an arbitrary table polynomial. The result order is the
/// smallest provable order among its terms.
pub fn residual_of_poly<C: Coeff>(poly: &OdePoly, sigma: &Series<C>) -> Result<Series<C>, OdeError> {
    let n = sigma.order();
    if n < 2 {
        return Err(OdeError::OrderTooSmall(n));
    }
    let d1 = sigma.derivative()?;
    let d2 = d1.derivative()?;
    let factors = [sigma.clone(), d1, d2];

    // Group monomials by their sigma part; each group gets a t-polynomial.
    let mut groups: BTreeMap<[u32; 3], Vec<(u32, Rational)>> = BTreeMap::new();
    for (m, c) in poly.terms() {
        groups.entry([m[1], m[2], m[3]]).or_default().push((m[0], c.clone()));
    }

    // Provable order of each group and of the whole residual.
    let mut out_order = usize::MAX;
    for (sig, tpoly) in &groups {
        let base = (0..3).filter(|&i| sig[i] > 0).map(|i| factors[i].order()).min();
        if let Some(base) = base {
            let tmin = tpoly.iter().map(|(k, _)| *k as usize).min().unwrap();
            out_order = out_order.min(base + tmin);
        }
    }
    if out_order == usize::MAX {
        out_order = n;
    }

    let mut cache: BTreeMap<[u32; 3], Series<C>> = BTreeMap::new();
    let mut total = Series::<C>::zero(out_order);
    for (sig, tpoly) in &groups {
        let prod = monomial_product(sig, &factors, out_order, &mut cache);
        let tmax = tpoly.iter().map(|(k, _)| *k as usize).max().unwrap();
        let mut tp = vec![Rational::zero(); tmax + 1];
        for (k, c) in tpoly {
            tp[*k as usize] += c;
        }
        // Multiply by the t-polynomial directly: cheap shifted adds.
        let pc = prod.coeffs();
        let mut acc: Vec<C> = total.coeffs().to_vec();
        for (k, c) in tp.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for i in 0..=out_order {
                if i < k || i - k >= pc.len() {
                    continue;
                }
                let x = &pc[i - k];
                if !x.is_zero() {
                    acc[i] = acc[i].add(&x.scale(c));
                }
            }
        }
        total = Series::new(acc);
    }
    Ok(total)
}

/// `sigma^a sigma'^b sigma''^c` truncated to `order`, memoized.
fn monomial_product<C: Coeff>(
    exps: &[u32; 3],
    factors: &[Series<C>; 3],
    order: usize,
    cache: &mut BTreeMap<[u32; 3], Series<C>>,
) -> Series<C> {
    if let Some(s) = cache.get(exps) {
        return s.clone();
    }
    let result = if exps == &[0, 0, 0] {
        Series::one(order)
    } else {
        // Peel one factor off the highest nonzero slot.
        let i = (0..3).rev().find(|&i| exps[i] > 0).unwrap();
        let mut rest = *exps;
        rest[i] -= 1;
        let sub = monomial_product(&rest, factors, order, cache);
        let f = pad_or_truncate(&factors[i], order);
        let sub = pad_or_truncate(&sub, order);
        &sub * &f
    };
    cache.insert(*exps, result.clone());
    result
}

/// Truncates to `order`; a shorter series is padded with zeros. Padding is
/// only used where the group's provable order already accounts for it.
fn pad_or_truncate<C: Coeff>(s: &Series<C>, order: usize) -> Series<C> {
    if s.order() >= order {
        s.truncate(order)
    } else {
        Series::from_poly(s.coeffs().to_vec(), order)
    }
}

/// Checks `total = sum(parts)` exactly to the common order.
pub fn additive_split_check<C: Coeff>(check_id: &str, total: &SigmaSeries<C>, parts: &[SigmaSeries<C>]) -> CheckReport {
    let mut order = total.sigma.order();
    for p in parts {
        order = order.min(p.sigma.order());
    }
    let mut sum = Series::<C>::zero(order);
    for p in parts {
        sum = &sum + &p.sigma.truncate(order);
    }
    CheckReport::compare(check_id, &total.sigma.truncate(order), &sum, "sigma equals the sum of the factor sigmas")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::param_poly::{Param, ParamPoly};
    use crate::special::elliptic_e;

    #[test]
    fn zero_sigma_annihilates_eqnmodd_and_nonlinear() {
        let z = SigmaSeries::raw("zero", Series::<Rational>::zero(10));
        for spec in [OdeSpec::eqnmodd(0, 5).unwrap(), OdeSpec::eqnmodd(2, 5).unwrap(), OdeSpec::nonlinear(2, 5).unwrap()] {
            assert!(residual(&spec, &z).unwrap().is_zero(), "{spec}");
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(OdeSpec::eqnmodd(1, 5).is_err());
        assert!(OdeSpec::eqnmodd(6, 5).is_err());
    }

    #[test]
    fn order_too_small() {
        let z = SigmaSeries::raw("short", Series::<Rational>::zero(3));
        assert_eq!(residual(&OdeSpec::diag(1), &z).unwrap_err(), OdeError::OrderTooSmall(3));
    }

    #[test]
    fn diag_on_e() {
        let n = 30;
        let f = PrefactoredSeries::new(qi(0), qi(0), elliptic_e(n + 2)).unwrap();
        let s = SigmaSeries::from_prefactored("E", &f, &q(-1, 4)).unwrap();
        let r = residual(&OdeSpec::diag(1), &s).unwrap();
        assert!(r.order() >= n);
        assert!(r.is_zero());
    }

    #[test]
    fn ring_generic_residual_commutes_with_specialization() {
        let x = ParamPoly::var(Param::Free);
        let coeffs: Vec<ParamPoly> = (0..10)
            .map(|k| {
                ParamPoly::affine(Param::Free, q(k as i64 - 3, k as i64 + 2), q(1, k as i64 + 1))
                    .mul(&x)
                    .add(&ParamPoly::constant(qi(k as i64)))
            })
            .collect();
        let s = Series::new(coeffs);
        let spec = OdeSpec::fourfact(5);
        let r = residual(&spec, &SigmaSeries::raw("p", s.clone())).unwrap();
        for v in [q(1, 3), q(-2, 1), q(7, 5)] {
            let direct = residual(&spec, &SigmaSeries::raw("v", s.specialize(&v))).unwrap();
            assert_eq!(r.specialize(&v), direct);
        }
    }

    #[test]
    fn polynomial_spot_values() {
        // EQNMODD at t=2, s=0, s'=1, s''=0 with M=0, N=5: 8 - 25 + 50.
        let p = OdeSpec::eqnmodd(0, 5).unwrap().polynomial();
        let v = p.eval_scalar([&qi(2), &qi(0), &qi(1), &qi(0)]);
        assert_eq!(v, qi(33));
        // FOURFACT constant term at sigma = 0 everywhere.
        let f = OdeSpec::fourfact(5).polynomial();
        assert_eq!(f.eval_scalar([&qi(3), &qi(0), &qi(0), &qi(0)]), q(-25 * 22, 1024));
    }
}
