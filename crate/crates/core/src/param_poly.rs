//! Univariate polynomials over the rationals in one named formal parameter.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{fmt_rational, parse_rational, rational_pow, Rational};

/// The formal parameters a coefficient polynomial may carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Param {
    LambdaSq,
    Mu,
    Alpha,
    Beta,
    MDef,
    RhoDef,
    /// A free parameter adjoined by the order-by-order solver.
    Free,
}

impl Param {
    pub const ALL: [Param; 7] = [Param::LambdaSq, Param::Mu, Param::Alpha, Param::Beta, Param::MDef, Param::RhoDef, Param::Free];

    pub fn name(self) -> &'static str {
        match self {
            Param::LambdaSq => "lambda_sq",
            Param::Mu => "mu",
            Param::Alpha => "alpha",
            Param::Beta => "beta",
            Param::MDef => "M_def",
            Param::RhoDef => "rho_def",
            Param::Free => "p",
        }
    }

    pub fn from_name(name: &str) -> Option<Param> {
        Param::ALL.into_iter().find(|p| p.name() == name)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `c0 + c1 x + c2 x^2 + ...` with `x` a named parameter.
///
/// A polynomial of degree ≤ 0 is a plain constant; its parameter tag is then
/// irrelevant and it combines with polynomials in any parameter. Mixing two
/// non-constant polynomials in different parameters panics in the operator
/// methods; use [`ParamPoly::compatible`] to test beforehand.
#[derive(Debug, Clone)]
pub struct ParamPoly {
    param: Option<Param>,
    coeffs: Vec<Rational>,
}

impl PartialEq for ParamPoly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && (self.coeffs.len() <= 1 || self.param == other.param)
    }
}

impl Eq for ParamPoly {}

impl ParamPoly {
    pub fn new(param: Option<Param>, mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        ParamPoly { param, coeffs }
    }

    pub fn constant(c: Rational) -> Self {
        ParamPoly::new(None, vec![c])
    }

    pub fn zero() -> Self {
        ParamPoly { param: None, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        ParamPoly::constant(Rational::one())
    }

    /// The parameter itself, `x`.
    pub fn var(param: Param) -> Self {
        ParamPoly::new(Some(param), vec![Rational::zero(), Rational::one()])
    }

    /// `a + b x`.
    pub fn affine(param: Param, a: Rational, b: Rational) -> Self {
        ParamPoly::new(Some(param), vec![a, b])
    }

    pub fn param(&self) -> Option<Param> {
        if self.coeffs.len() <= 1 {
            None
        } else {
            self.param
        }
    }

    /// Parameter tag as stored, even for constants.
    pub fn tag(&self) -> Option<Param> {
        self.param
    }

    pub fn with_param(mut self, param: Param) -> Self {
        self.param = Some(param);
        self
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn constant_value(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn compatible(&self, other: &Self) -> bool {
        match (self.param(), other.param()) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        }
    }

    fn joint_param(&self, other: &Self) -> Option<Param> {
        match (self.param(), other.param()) {
            (Some(a), Some(b)) => {
                assert_eq!(a, b, "parameter mismatch: {a} vs {b}");
                Some(a)
            }
            (Some(a), None) | (None, Some(a)) => Some(a),
            (None, None) => self.param.or(other.param),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let param = self.joint_param(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let v = match (self.coeffs.get(k), other.coeffs.get(k)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            };
            out.push(v);
        }
        ParamPoly::new(param, out)
    }

    pub fn neg(&self) -> Self {
        ParamPoly { param: self.param, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let param = self.joint_param(other);
        if self.is_zero() || other.is_zero() {
            return ParamPoly { param, coeffs: Vec::new() };
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        ParamPoly::new(param, out)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return ParamPoly { param: self.param, coeffs: Vec::new() };
        }
        ParamPoly { param: self.param, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = ParamPoly::one();
        out.param = self.param;
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Exact polynomial division; `None` when `other` does not divide `self`.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        if !self.compatible(other) {
            return None;
        }
        let param = self.joint_param(other);
        if self.is_zero() {
            return Some(ParamPoly { param, coeffs: Vec::new() });
        }
        let dn = other.coeffs.len();
        if self.coeffs.len() < dn {
            return None;
        }
        let lead = other.coeffs.last().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); rem.len() - dn + 1];
        for k in (0..quot.len()).rev() {
            let f = &rem[k + dn - 1] / lead;
            if !f.is_zero() {
                for (i, b) in other.coeffs.iter().enumerate() {
                    rem[k + i] -= &f * b;
                }
            }
            quot[k] = f;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(ParamPoly::new(param, quot))
    }

    /// Exact square root with positive leading coefficient, if one exists.
    pub fn sqrt(&self) -> Option<ParamPoly> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let d = self.coeffs.len() - 1;
        if d % 2 == 1 {
            return None;
        }
        let h = d / 2;
        let mut r = vec![Rational::zero(); h + 1];
        r[h] = rational_pow(&self.coeffs[d], &Rational::new(1.into(), 2.into()))?;
        for k in (0..h).rev() {
            let mut s = self.coeffs[h + k].clone();
            for i in k + 1..h {
                let j = h + k - i;
                if j > k && j < h {
                    s -= &r[i] * &r[j];
                }
            }
            r[k] = s / (&r[h] * Rational::from_integer(2.into()));
        }
        let root = ParamPoly::new(self.param, r);
        (root.mul(&root) == *self).then_some(root)
    }

    /// Value at `x = v`.
    pub fn eval(&self, v: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * v + c;
        }
        acc
    }

    /// Substitutes `x -> s(y)` where `s` is a polynomial in another parameter.
    pub fn compose(&self, s: &ParamPoly) -> ParamPoly {
        let mut acc = ParamPoly::zero();
        acc.param = s.param;
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(s).add(&ParamPoly::constant(c.clone()));
        }
        acc.param = s.param.or(acc.param);
        acc
    }

    /// Renders as `c0 + c1*x + c2*x^2`, skipping zero terms.
    pub fn to_text(&self) -> String {
        let name = self.param.map(|p| p.name()).unwrap_or("x");
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = fmt_rational(&c.abs());
            let body = match k {
                0 => mag,
                _ => {
                    let mono = if k == 1 { name.to_string() } else { format!("{name}^{k}") };
                    if c.abs().is_one() {
                        mono
                    } else {
                        format!("{mag}*{mono}")
                    }
                }
            };
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            "0".to_string()
        } else {
            out
        }
    }

    /// Parses `c0 + c1*x + c2*x^2` style text. Any identifier is accepted as
    /// the variable; it is tagged with `param`.
    pub fn parse(text: &str, param: Option<Param>) -> Result<ParamPoly, String> {
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err("empty polynomial".into());
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        for (i, ch) in cleaned.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !current.ends_with('^') {
                terms.push((negative, std::mem::take(&mut current)));
                negative = ch == '-';
            } else if (ch == '+' || ch == '-') && i == 0 {
                negative = ch == '-';
            } else {
                current.push(ch);
            }
        }
        terms.push((negative, current));
        let mut coeffs: Vec<Rational> = Vec::new();
        for (neg, term) in terms {
            if term.is_empty() {
                return Err(format!("malformed polynomial `{text}`"));
            }
            let (coef_text, power) = split_monomial(&term).ok_or_else(|| format!("bad term `{term}`"))?;
            let mut c = if coef_text.is_empty() { Rational::one() } else { parse_rational(coef_text).map_err(|e| e.to_string())? };
            if neg {
                c = -c;
            }
            if coeffs.len() <= power {
                coeffs.resize(power + 1, Rational::zero());
            }
            coeffs[power] += c;
        }
        Ok(ParamPoly::new(param, coeffs))
    }
}

/// Splits `3/4*x^2` into (`3/4`, 2), `x` into (``, 1), `5` into (`5`, 0).
fn split_monomial(term: &str) -> Option<(&str, usize)> {
    let var_start = term.find(|c: char| c.is_ascii_alphabetic() || c == '_');
    match var_start {
        None => Some((term, 0)),
        Some(pos) => {
            let coef = term[..pos].trim_end_matches('*');
            let var = &term[pos..];
            let power = match var.split_once('^') {
                Some((_, p)) => p.parse().ok()?,
                None => 1,
            };
            Some((coef, power))
        }
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn arithmetic_and_trim() {
        let a = ParamPoly::affine(Param::Alpha, q(1, 2), q(1, 1));
        let b = ParamPoly::affine(Param::Alpha, q(1, 2), q(-1, 1));
        let prod = a.mul(&b);
        assert_eq!(prod.coeffs(), &[q(1, 4), q(0, 1), q(-1, 1)]);
        assert_eq!(a.add(&b), ParamPoly::constant(q(1, 1)));
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn exact_division() {
        let x = ParamPoly::var(Param::Mu);
        let p = x.mul(&x).sub(&ParamPoly::constant(q(1, 1)));
        let d = x.sub(&ParamPoly::constant(q(1, 1)));
        let quot = p.div_exact(&d).unwrap();
        assert_eq!(quot, x.add(&ParamPoly::constant(q(1, 1))));
        assert!(p.div_exact(&x).is_none());
    }

    #[test]
    fn text_roundtrip() {
        let p = ParamPoly::parse("-1463/65536 - 25/1048576*lambda_sq", Some(Param::LambdaSq)).unwrap();
        assert_eq!(p.to_text(), "-1463/65536 - 25/1048576*lambda_sq");
        let m = ParamPoly::parse("-4851/1048576 - 9281/2097152*x + 5/16777216*x^2", Some(Param::MDef)).unwrap();
        assert_eq!(m.to_text(), "-4851/1048576 - 9281/2097152*M_def + 5/16777216*M_def^2");
        assert_eq!(ParamPoly::parse("0", None).unwrap(), ParamPoly::zero());
        assert_eq!(ParamPoly::parse("-x", Some(Param::Mu)).unwrap().to_text(), "-mu");
    }

    #[test]
    fn compose_and_eval() {
        // mu = 1 - lambda_sq
        let p = ParamPoly::parse("-23433/1048576 + 25/1048576*x", Some(Param::Mu)).unwrap();
        let sub = ParamPoly::affine(Param::LambdaSq, q(1, 1), q(-1, 1));
        let r = p.compose(&sub);
        assert_eq!(r.to_text(), "-1463/65536 - 25/1048576*lambda_sq");
        assert_eq!(p.eval(&q(0, 1)), q(-23433, 1048576));
    }

    #[test]
    #[should_panic(expected = "parameter mismatch")]
    fn mixing_parameters_panics() {
        let a = ParamPoly::var(Param::Mu);
        let b = ParamPoly::var(Param::Alpha);
        let _ = a.add(&b);
    }
}

/// Integer numerators over one common denominator; sums of products in this
/// form need a single normalization.
#[derive(Debug, Clone)]
pub struct IntPoly {
    param: Option<Param>,
    nums: Vec<BigInt>,
    den: BigInt,
}

impl From<&ParamPoly> for IntPoly {
    fn from(p: &ParamPoly) -> Self {
        let den = p.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums = p.coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        IntPoly { param: p.param(), nums, den }
    }
}

impl IntPoly {
    pub fn dot<'a, I: Iterator<Item = (&'a IntPoly, &'a IntPoly)>>(pairs: I) -> ParamPoly {
        let mut nums: Vec<BigInt> = Vec::new();
        let mut den = BigInt::one();
        let mut param: Option<Param> = None;
        for (a, b) in pairs {
            if a.nums.is_empty() || b.nums.is_empty() {
                continue;
            }
            for p in [a.param, b.param].into_iter().flatten() {
                match param {
                    Some(q) => assert_eq!(q, p, "parameter mismatch: {q} vs {p}"),
                    None => param = Some(p),
                }
            }
            let d = &a.den * &b.den;
            let term_scale = if d == den {
                None
            } else {
                let g = den.gcd(&d);
                let acc_scale = &d / &g;
                for x in nums.iter_mut() {
                    *x *= &acc_scale;
                }
                let ts = &den / &g;
                den = &den / &g * &d;
                Some(ts)
            };
            let need = a.nums.len() + b.nums.len() - 1;
            if nums.len() < need {
                nums.resize(need, BigInt::zero());
            }
            for (i, x) in a.nums.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let x = match &term_scale {
                    Some(s) => x * s,
                    None => x.clone(),
                };
                for (j, y) in b.nums.iter().enumerate() {
                    if !y.is_zero() {
                        nums[i + j] += &x * y;
                    }
                }
            }
        }
        ParamPoly::new(param, nums.into_iter().map(|n| Rational::new(n, den.clone())).collect())
    }
}
