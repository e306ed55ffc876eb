//! Truncated power series in `t` with exact coefficients.
//!
//! A `Series` of order `n` knows the coefficients of `t^0..=t^n`; everything
//! above is unknown, not zero. Binary operations take the smaller order.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::coeff::Coeff;
use crate::param_poly::{Param, ParamPoly};
use crate::rational::{parse_rational, q, qi, Rational};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("coefficient ring mismatch")]
    RingMismatch,
    #[error("leading coefficient is not invertible")]
    NotInvertible,
    #[error("valuation mismatch: dividend valuation {dividend} < divisor valuation {divisor}")]
    ValuationMismatch { dividend: usize, divisor: usize },
    #[error("series of order 0 has no provable derivative")]
    OrderTooSmall,
    #[error("constant term must be {expected}")]
    BadConstantTerm { expected: &'static str },
    #[error("series vanishes to its known order")]
    Vanishing,
    #[error("malformed series data: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series<C> {
    coeffs: Vec<C>,
}

impl<C: Coeff> Series<C> {
    /// Series whose order is `coeffs.len() - 1`. Panics on an empty vector.
    pub fn new(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        Series { coeffs }
    }

    /// Polynomial data padded with zeros (or truncated) to `order`.
    pub fn from_poly(mut coeffs: Vec<C>, order: usize) -> Self {
        coeffs.resize(order + 1, C::zero());
        Series { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Series { coeffs: vec![C::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(C::one(), order)
    }

    pub fn constant(c: C, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `c * t^k` known to `order`.
    pub fn monomial(c: C, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// The series `t`.
    pub fn t(order: usize) -> Self {
        Self::monomial(C::one(), 1, order)
    }

    /// Polynomial with rational coefficients, low degree first.
    pub fn from_rationals(values: &[Rational], order: usize) -> Self {
        Self::from_poly(values.iter().cloned().map(C::from_rational).collect(), order)
    }

    /// Polynomial with small integer coefficients, low degree first.
    pub fn from_ints(values: &[i64], order: usize) -> Self {
        Self::from_poly(values.iter().map(|&v| C::from_rational(qi(v))).collect(), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    /// Coefficient of `t^n`; panics above the order.
    pub fn coeff(&self, n: usize) -> &C {
        assert!(n <= self.order(), "coefficient t^{n} is beyond order {}", self.order());
        &self.coeffs[n]
    }

    pub fn set_coeff(&mut self, n: usize, c: C) {
        self.coeffs[n] = c;
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot raise order {} to {order}", self.order());
        Series { coeffs: self.coeffs[..=order].to_vec() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn compatible(&self, other: &Self) -> bool {
        let rep_a = self.coeffs.iter().find(|c| c.as_rational().is_none());
        let rep_b = other.coeffs.iter().find(|c| c.as_rational().is_none());
        match (rep_a, rep_b) {
            (Some(a), Some(b)) => a.compatible(b),
            _ => true,
        }
    }

    fn check_ring(&self, other: &Self) -> Result<(), SeriesError> {
        if self.compatible(other) {
            Ok(())
        } else {
            Err(SeriesError::RingMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_ring(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_ring(other)?;
        Ok(self.sub_unchecked(other))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_ring(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Series { coeffs: (0..=n).map(|k| self.coeffs[k].add(&other.coeffs[k])).collect() }
    }

    fn sub_unchecked(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Series { coeffs: (0..=n).map(|k| self.coeffs[k].sub(&other.coeffs[k])).collect() }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let fa: Vec<C::Dot> = self.coeffs[..=n].iter().map(|c| c.to_dot()).collect();
        let fb: Vec<C::Dot> = other.coeffs[..=n].iter().map(|c| c.to_dot()).collect();
        let za: Vec<bool> = self.coeffs[..=n].iter().map(|c| c.is_zero()).collect();
        let zb: Vec<bool> = other.coeffs[..=n].iter().map(|c| c.is_zero()).collect();
        let coeffs = (0..=n).map(|k| C::dot((0..=k).filter(|&i| !za[i] && !zb[k - i]).map(|i| (&fa[i], &fb[k - i])))).collect();
        Series { coeffs }
    }

    pub fn neg(&self) -> Self {
        Series { coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn scale(&self, c: &C) -> Self {
        Series { coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect() }
    }

    pub fn scale_q(&self, r: &Rational) -> Self {
        Series { coeffs: self.coeffs.iter().map(|x| x.scale(r)).collect() }
    }

    /// `self * t^k`; the order grows by `k`.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut coeffs = vec![C::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Series { coeffs }
    }

    /// `self / t^k`; requires the first `k` coefficients to vanish.
    pub fn shift_down(&self, k: usize) -> Result<Self, SeriesError> {
        if k > self.order() {
            return Err(SeriesError::Vanishing);
        }
        if self.coeffs[..k].iter().any(|c| !c.is_zero()) {
            return Err(SeriesError::ValuationMismatch { dividend: self.valuation().unwrap_or(0), divisor: k });
        }
        Ok(Series { coeffs: self.coeffs[k..].to_vec() })
    }

    /// Multiplicative inverse; needs an invertible constant term.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let inv0 = self.coeffs[0].inverse().ok_or(SeriesError::NotInvertible)?;
        let n = self.order();
        let fs: Vec<C::Dot> = self.coeffs.iter().map(|c| c.to_dot()).collect();
        let nz: Vec<usize> = (1..=n).filter(|&j| !self.coeffs[j].is_zero()).collect();
        let mut out = vec![inv0.clone()];
        let mut fo = vec![inv0.to_dot()];
        for k in 1..=n {
            let acc = C::dot(nz.iter().take_while(|&&j| j <= k).map(|&j| (&fs[j], &fo[k - j])));
            let c = acc.mul(&inv0).neg();
            fo.push(c.to_dot());
            out.push(c);
        }
        Ok(Series { coeffs: out })
    }

    /// `self / other`. A divisor with positive valuation `v` requires the
    /// dividend to have valuation at least `v`; the result has order
    /// `min(orders) - v`.
    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_ring(other)?;
        let v = other.valuation().ok_or(SeriesError::Vanishing)?;
        let (num, den) = if v > 0 {
            let dv = self.valuation().unwrap_or(self.order() + 1);
            if dv < v {
                return Err(SeriesError::ValuationMismatch { dividend: dv, divisor: v });
            }
            let n = self.order().min(other.order());
            (self.truncate(n).shift_down(v)?, other.truncate(n).shift_down(v)?)
        } else {
            (self.clone(), other.clone())
        };
        if den.coeffs[0].inverse().is_none() {
            // Non-unit leading coefficients (e.g. parameter polynomials) are
            // handled by exact division term by term.
            return num.div_by_exact_lead(&den);
        }
        Ok(num.mul_unchecked(&den.inverse()?))
    }

    fn div_by_exact_lead(&self, den: &Self) -> Result<Self, SeriesError> {
        let n = self.order().min(den.order());
        let fd: Vec<C::Dot> = den.coeffs[..=n].iter().map(|c| c.to_dot()).collect();
        let mut out: Vec<C> = Vec::with_capacity(n + 1);
        let mut fo: Vec<C::Dot> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let acc = self.coeffs[k].sub(&C::dot((1..=k).map(|j| (&fd[j], &fo[k - j]))));
            let c = acc.div_exact(&den.coeffs[0]).ok_or(SeriesError::NotInvertible)?;
            fo.push(c.to_dot());
            out.push(c);
        }
        Ok(Series { coeffs: out })
    }

    /// `d/dt`; the order drops by one.
    pub fn derivative(&self) -> Result<Self, SeriesError> {
        if self.order() == 0 {
            return Err(SeriesError::OrderTooSmall);
        }
        Ok(Series { coeffs: (1..=self.order()).map(|k| self.coeffs[k].scale(&qi(k as i64))).collect() })
    }

    /// Antiderivative with zero constant; the order grows by one.
    pub fn integral(&self) -> Self {
        let mut coeffs = vec![C::zero()];
        coeffs.extend(self.coeffs.iter().enumerate().map(|(k, c)| c.scale(&q(1, k as i64 + 1))));
        Series { coeffs }
    }

    /// `log(self)` for a series with constant term one.
    pub fn log(&self) -> Result<Self, SeriesError> {
        if self.coeffs[0] != C::one() {
            return Err(SeriesError::BadConstantTerm { expected: "one" });
        }
        if self.order() == 0 {
            return Ok(Series::zero(0));
        }
        let d = self.derivative()?;
        let ld = d.mul_unchecked(&self.truncate(d.order()).inverse()?);
        Ok(ld.integral())
    }

    /// `exp(self)` for a series with constant term zero.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::BadConstantTerm { expected: "zero" });
        }
        let n = self.order();
        let mut out = vec![C::zero(); n + 1];
        out[0] = C::one();
        // k e_k = sum_{j=1..k} j a_j e_{k-j}
        for k in 1..=n {
            let mut acc = C::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc = acc.add(&self.coeffs[j].mul(&out[k - j]).scale(&qi(j as i64)));
                }
            }
            out[k] = acc.scale(&q(1, k as i64));
        }
        Ok(Series { coeffs: out })
    }

    /// `self^r` for a series with constant term one, equal to `exp(r log self)`.
    ///
    /// Uses the power recurrence `n b_n = sum_k ((r+1)k - n) a_k b_{n-k}`,
    /// which needs no intermediate logarithm.
    pub fn pow_rational(&self, r: &Rational) -> Result<Self, SeriesError> {
        if self.coeffs[0] != C::one() {
            return Err(SeriesError::BadConstantTerm { expected: "one" });
        }
        let n = self.order();
        let mut out = vec![C::zero(); n + 1];
        out[0] = C::one();
        let r1 = r + Rational::one();
        for m in 1..=n {
            let mut acc = C::zero();
            for k in 1..=m {
                if self.coeffs[k].is_zero() {
                    continue;
                }
                let w = &r1 * qi(k as i64) - qi(m as i64);
                if w.is_zero() {
                    continue;
                }
                acc = acc.add(&self.coeffs[k].mul(&out[m - k]).scale(&w));
            }
            out[m] = acc.scale(&q(1, m as i64));
        }
        Ok(Series { coeffs: out })
    }

    /// Integer power by repeated squaring.
    pub fn pow_int(&self, e: u32) -> Self {
        let mut result = Series::one(self.order());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        result
    }

    /// Substitutes `t -> factor * t`.
    pub fn rescale(&self, factor: &Rational) -> Self {
        let mut p = Rational::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            coeffs.push(c.scale(&p));
            p *= factor;
        }
        Series { coeffs }
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Series<D> {
        Series { coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// `(1 - t)^r` to the given order.
    pub fn one_minus_t_pow(r: &Rational, order: usize) -> Self {
        // Binomial recurrence: c_{k+1} = c_k (k - r) / (k + 1).
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut c = Rational::one();
        for k in 0..=order {
            coeffs.push(C::from_rational(c.clone()));
            c = c * (qi(k as i64) - r) / qi(k as i64 + 1);
        }
        Series { coeffs }
    }

    /// First index where the two series differ, up to the common order.
    pub fn first_mismatch(&self, other: &Self) -> Option<(usize, C, C)> {
        let n = self.order().min(other.order());
        (0..=n).find(|&k| self.coeffs[k] != other.coeffs[k]).map(|k| (k, self.coeffs[k].clone(), other.coeffs[k].clone()))
    }

    /// Exact equality up to the common order.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.first_mismatch(other).is_none()
    }

    /// One `t^n : coeff` line per order.
    pub fn text_lines(&self) -> Vec<String> {
        self.coeffs.iter().enumerate().map(|(n, c)| format!("t^{n} : {}", c.to_text())).collect()
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            schema_version: SCHEMA_VERSION,
            order: self.order(),
            parameter: None,
            coeffs: self.coeffs.iter().map(|c| c.to_text()).collect(),
        }
    }
}

impl Series<ParamPoly> {
    /// Lifts a rational series into the parameter ring.
    pub fn from_rational_series(s: &Series<Rational>) -> Self {
        s.map(|c| ParamPoly::constant(c.clone()))
    }

    /// Evaluates the parameter at `value`.
    pub fn specialize(&self, value: &Rational) -> Series<Rational> {
        self.map(|c| c.eval(value))
    }

    /// Substitutes the parameter by a polynomial in another parameter.
    pub fn compose_param(&self, sub: &ParamPoly) -> Series<ParamPoly> {
        self.map(|c| c.compose(sub))
    }

    /// The parameter carried by any non-constant coefficient.
    pub fn param(&self) -> Option<Param> {
        self.coeffs.iter().find_map(|c| c.param())
    }

    /// Coefficient series of `x^k`.
    pub fn param_coeff(&self, k: usize) -> Series<Rational> {
        self.map(|c| c.coeff(k))
    }

    /// Largest parameter degree present.
    pub fn param_degree(&self) -> usize {
        self.coeffs.iter().filter_map(|c| c.degree()).max().unwrap_or(0)
    }

    /// Taylor shift `x -> x0 + y`, with `y` tagged as `new_param`.
    pub fn shift_param(&self, x0: &Rational, new_param: Param) -> Series<ParamPoly> {
        let sub = ParamPoly::affine(new_param, x0.clone(), Rational::one());
        self.compose_param(&sub)
    }

    pub fn to_json_param(&self) -> SeriesJson {
        let mut j = self.to_json();
        j.parameter = self.param().or_else(|| self.coeffs.iter().find_map(|c| c.tag())).map(|p| p.name().to_string());
        j
    }
}

/// JSON form: coefficients as `"p/q"` strings (or parameter polynomials).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub schema_version: u32,
    pub order: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub parameter: Option<String>,
    pub coeffs: Vec<String>,
}

impl SeriesJson {
    pub fn to_rational_series(&self) -> Result<Series<Rational>, SeriesError> {
        self.check_shape()?;
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| parse_rational(c).map_err(|e| SeriesError::Malformed(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Series::new(coeffs))
    }

    pub fn to_param_series(&self) -> Result<Series<ParamPoly>, SeriesError> {
        self.check_shape()?;
        let param = match &self.parameter {
            Some(name) => Some(Param::from_name(name).ok_or_else(|| SeriesError::Malformed(format!("unknown parameter {name}")))?),
            None => None,
        };
        let coeffs =
            self.coeffs.iter().map(|c| ParamPoly::parse(c, param).map_err(SeriesError::Malformed)).collect::<Result<Vec<_>, _>>()?;
        Ok(Series::new(coeffs))
    }

    fn check_shape(&self) -> Result<(), SeriesError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(SeriesError::Malformed(format!("unsupported schema_version {}", self.schema_version)));
        }
        if self.coeffs.len() != self.order + 1 {
            return Err(SeriesError::Malformed("coefficient count does not match order".into()));
        }
        Ok(())
    }
}

impl<C: Coeff> Add for &Series<C> {
    type Output = Series<C>;
    /// Panics on a coefficient-ring mismatch; see [`Series::try_add`].
    fn add(self, rhs: Self) -> Series<C> {
        self.try_add(rhs).expect("series addition")
    }
}

impl<C: Coeff> Sub for &Series<C> {
    type Output = Series<C>;
    fn sub(self, rhs: Self) -> Series<C> {
        self.try_sub(rhs).expect("series subtraction")
    }
}

impl<C: Coeff> Mul for &Series<C> {
    type Output = Series<C>;
    fn mul(self, rhs: Self) -> Series<C> {
        self.try_mul(rhs).expect("series multiplication")
    }
}

impl<C: Coeff> Neg for &Series<C> {
    type Output = Series<C>;
    fn neg(self) -> Series<C> {
        Series::neg(self)
    }
}

/// `t^a (1-t)^b body` with a nonzero constant term in `body`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrefactoredSeries<C> {
    pub a: Rational,
    pub b: Rational,
    pub body: Series<C>,
}

impl<C: Coeff> PrefactoredSeries<C> {
    pub fn new(a: Rational, b: Rational, body: Series<C>) -> Result<Self, SeriesError> {
        if body.coeffs()[0].is_zero() {
            return Err(SeriesError::BadConstantTerm { expected: "nonzero" });
        }
        Ok(PrefactoredSeries { a, b, body })
    }

    /// Moves valuation out of `body` into `a`.
    pub fn normalized(a: Rational, b: Rational, body: Series<C>) -> Result<Self, SeriesError> {
        let v = body.valuation().ok_or(SeriesError::Vanishing)?;
        let body = body.shift_down(v)?;
        Ok(PrefactoredSeries { a: a + qi(v as i64), b, body })
    }

    pub fn plain(body: Series<C>) -> Result<Self, SeriesError> {
        Self::normalized(Rational::zero(), Rational::zero(), body)
    }

    /// Leading coefficient `body[0]`.
    pub fn leading(&self) -> &C {
        &self.body.coeffs()[0]
    }

    pub fn mul(&self, other: &Self) -> Self {
        PrefactoredSeries { a: &self.a + &other.a, b: &self.b + &other.b, body: &self.body * &other.body }
    }

    pub fn scale(&self, c: &C) -> Self {
        PrefactoredSeries { a: self.a.clone(), b: self.b.clone(), body: self.body.scale(c) }
    }

    /// Rewrites with `(1-t)`-exponent `target_b`, folding the difference into the body.
    pub fn with_b(&self, target_b: &Rational) -> Self {
        let diff = &self.b - target_b;
        let body = if diff.is_zero() { self.body.clone() } else { &self.body * &Series::one_minus_t_pow(&diff, self.body.order()) };
        PrefactoredSeries { a: self.a.clone(), b: target_b.clone(), body }
    }

    /// Equal `a`, and bodies equal once the `b` difference is absorbed.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.a == other.a && self.with_b(&Rational::zero()).body.agrees_with(&other.with_b(&Rational::zero()).body)
    }

    /// The plain series `t^a (1-t)^b body`; needs `a` to be a nonnegative integer.
    pub fn to_series(&self) -> Result<Series<C>, SeriesError> {
        let a = self.integer_a().ok_or(SeriesError::Malformed(format!("t-exponent {} is not a nonnegative integer", self.a)))?;
        Ok(self.with_b(&Rational::zero()).body.shift_up(a))
    }

    pub fn integer_a(&self) -> Option<usize> {
        if self.a.is_integer() && self.a >= Rational::zero() {
            usize::try_from(self.a.to_integer()).ok()
        } else {
            None
        }
    }

    pub fn order(&self) -> usize {
        self.body.order()
    }

    pub fn truncate(&self, order: usize) -> Self {
        PrefactoredSeries { a: self.a.clone(), b: self.b.clone(), body: self.body.truncate(order) }
    }
}

impl PrefactoredSeries<Rational> {
    pub fn lift(&self) -> PrefactoredSeries<ParamPoly> {
        PrefactoredSeries { a: self.a.clone(), b: self.b.clone(), body: Series::from_rational_series(&self.body) }
    }
}

/// `sigma = a(t-1) + (b + kappa) t + t(t-1) body'/body`, i.e.
/// `t(t-1) d/dt ln(t^a (1-t)^b body) + kappa t`.
pub fn sigma_transform<C: Coeff>(f: &PrefactoredSeries<C>, kappa: &Rational) -> Result<Series<C>, SeriesError> {
    let n = f.body.order();
    if f.body.coeffs()[0].is_zero() {
        return Err(SeriesError::BadConstantTerm { expected: "nonzero" });
    }
    let mut sigma = if n == 0 {
        Series::zero(0)
    } else {
        let ld = f.body.derivative()?.div(&f.body.truncate(n - 1))?;
        let tm1 = Series::from_ints(&[-1, 1], n);
        &ld.shift_up(1) * &tm1
    };
    let lin = &f.b + kappa + &f.a;
    let c0 = sigma.coeffs()[0].sub(&C::from_rational(f.a.clone()));
    sigma.set_coeff(0, c0);
    if n >= 1 {
        let c1 = sigma.coeffs()[1].add(&C::from_rational(lin));
        sigma.set_coeff(1, c1);
    }
    Ok(sigma)
}

/// Integer value of a rational if it has denominator one.
pub fn as_bigint(r: &Rational) -> Option<BigInt> {
    if r.is_integer() {
        Some(r.to_integer())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qs(v: &[(i64, i64)], order: usize) -> Series<Rational> {
        Series::from_rationals(&v.iter().map(|&(a, b)| q(a, b)).collect::<Vec<_>>(), order)
    }

    #[test]
    fn difference_of_squares() {
        let a = Series::<Rational>::from_ints(&[1, 1], 6);
        let b = Series::<Rational>::from_ints(&[1, -1], 6);
        assert_eq!(&a * &b, Series::from_ints(&[1, 0, -1], 6));
    }

    #[test]
    fn order_is_min_of_operands() {
        let a = Series::<Rational>::one(5);
        let b = Series::<Rational>::one(3);
        assert_eq!((&a * &b).order(), 3);
        assert_eq!((&a + &b).order(), 3);
    }

    #[test]
    fn geometric_division() {
        let one = Series::<Rational>::one(8);
        let omt = Series::<Rational>::from_ints(&[1, -1], 8);
        assert_eq!(one.div(&omt).unwrap(), Series::from_ints(&[1; 9], 8));
        let a = Series::<Rational>::from_ints(&[1, 0, -1], 8);
        assert_eq!(a.div(&omt).unwrap(), Series::from_ints(&[1, 1], 8));
    }

    #[test]
    fn division_with_valuation() {
        let a = Series::<Rational>::from_ints(&[0, 0, 2, 2], 8);
        let b = Series::<Rational>::from_ints(&[0, 1, 1], 8);
        let r = a.div(&b).unwrap();
        assert_eq!(r.order(), 7);
        assert_eq!(r, Series::from_ints(&[0, 2], 7));
        let err = b.div(&a).unwrap_err();
        assert!(matches!(err, SeriesError::ValuationMismatch { .. }));
    }

    #[test]
    fn param_lead_not_invertible_unless_exact() {
        let x = ParamPoly::var(Param::Mu);
        let den = Series::from_poly(vec![x.clone()], 3);
        let num = Series::from_poly(vec![x.mul(&x), x.clone()], 3);
        let r = num.div(&den).unwrap();
        assert_eq!(r.coeffs()[0], x);
        assert_eq!(r.coeffs()[1], ParamPoly::one());
        let bad = Series::<ParamPoly>::one(3);
        assert_eq!(bad.div(&den).unwrap_err(), SeriesError::NotInvertible);
    }

    #[test]
    fn quarter_power_of_one_minus_t() {
        let omt = Series::<Rational>::from_ints(&[1, -1], 5);
        let p = omt.pow_rational(&q(1, 4)).unwrap();
        assert_eq!(p, qs(&[(1, 1), (-1, 4), (-3, 32), (-7, 128), (-77, 2048), (-231, 8192)], 5));
        assert_eq!(p, Series::one_minus_t_pow(&q(1, 4), 5));
        assert_eq!(omt.pow_rational(&q(0, 1)).unwrap(), Series::one(5));
    }

    #[test]
    fn pow_matches_exp_log() {
        let a = qs(&[(1, 1), (2, 3), (-1, 5), (7, 2), (0, 1), (1, 9)], 5);
        let r = q(-3, 7);
        let via_log = a.log().unwrap().scale_q(&r).exp().unwrap();
        assert_eq!(a.pow_rational(&r).unwrap(), via_log);
        assert_eq!(a.pow_rational(&qi(3)).unwrap(), a.pow_int(3));
    }

    #[test]
    fn derivative_errors_at_order_zero() {
        assert_eq!(Series::<Rational>::one(0).derivative().unwrap_err(), SeriesError::OrderTooSmall);
    }

    #[test]
    fn sigma_of_quarter_power() {
        let f = PrefactoredSeries::new(q(0, 1), q(1, 4), Series::<Rational>::one(6)).unwrap();
        let s = sigma_transform(&f, &q(0, 1)).unwrap();
        assert_eq!(s, qs(&[(0, 1), (1, 4)], 6));
    }

    #[test]
    fn sigma_of_algebraic_factor() {
        // -45/16 t^3 (1-t)^(-3/8)
        let f = PrefactoredSeries::new(qi(3), q(-3, 8), Series::constant(q(-45, 16), 8)).unwrap();
        let s = sigma_transform(&f, &q(0, 1)).unwrap();
        assert_eq!(s, qs(&[(-3, 1), (21, 8)], 8));
    }

    #[test]
    fn prefactored_equality_absorbs_b() {
        let body = Series::<Rational>::from_ints(&[1, 2, 3], 6);
        let f = PrefactoredSeries::new(q(1, 2), q(1, 4), body.clone()).unwrap();
        let g = f.with_b(&q(-1, 3));
        assert_ne!(f.body, g.body);
        assert!(f.agrees_with(&g));
    }

    #[test]
    fn json_roundtrip() {
        let s = qs(&[(1, 1), (-1, 4), (-3, 32)], 2);
        let j = s.to_json();
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.contains("\"schema_version\":1"));
        let back: SeriesJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_rational_series().unwrap(), s);
        let p = Series::from_poly(vec![ParamPoly::one(), ParamPoly::affine(Param::LambdaSq, q(1, 2), q(3, 4))], 1);
        let pj = p.to_json_param();
        assert_eq!(pj.parameter.as_deref(), Some("lambda_sq"));
        assert_eq!(pj.to_param_series().unwrap(), p);
    }

    #[test]
    fn rescale_and_specialize() {
        let p = Series::from_poly(
            vec![
                ParamPoly::one(),
                ParamPoly::affine(Param::MDef, q(-1, 4), q(0, 1)),
                ParamPoly::affine(Param::MDef, q(-3, 64), q(-3, 256)),
            ],
            2,
        );
        let s = p.specialize(&qi(1)).rescale(&qi(16));
        assert_eq!(s, Series::from_ints(&[1, -4, -15], 2));
    }
}
