//! Hypergeometric and elliptic series, and an evaluator for algebraic
//! closed-form expressions built from them.
//!
//! Everything is a series in `t = k^2`. The elliptic integrals use the
//! normalization `K~ = 2F1(1/2,1/2;1;t)`, `E~ = 2F1(1/2,-1/2;1;t)`.

use std::fmt;

use num_traits::{One, Zero};

use crate::rational::{fmt_rational, parse_rational, q, qi, rational_pow, Rational};
use crate::series::{PrefactoredSeries, Series, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpecialError {
    #[error("invalid lower parameter c = {0}")]
    InvalidLowerParameter(String),
    #[error("series error: {0}")]
    Series(#[from] SeriesError),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("constant {0} has no rational power {1}")]
    IrrationalConstant(String, String),
    #[error("t-exponents {0} and {1} differ by a non-integer in a sum")]
    IncompatibleExponents(String, String),
    #[error("unresolved reference @{0}")]
    UnresolvedRef(String),
    #[error("expression loses too much precision (needed order {needed}, reached {reached})")]
    PrecisionLoss { needed: usize, reached: usize },
}

/// `2F1(a, b; c; t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyp2F1Spec {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl Hyp2F1Spec {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Result<Self, SpecialError> {
        if c.is_integer() && c <= Rational::zero() {
            return Err(SpecialError::InvalidLowerParameter(fmt_rational(&c)));
        }
        Ok(Hyp2F1Spec { a, b, c })
    }
}

/// Coefficients `(a)_n (b)_n / ((c)_n n!)` by the term-ratio recurrence.
pub fn hyp2f1_series(spec: &Hyp2F1Spec, order: usize) -> Result<Series<Rational>, SpecialError> {
    let spec = Hyp2F1Spec::new(spec.a.clone(), spec.b.clone(), spec.c.clone())?;
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut term = Rational::one();
    for n in 0..=order {
        coeffs.push(term.clone());
        let k = qi(n as i64);
        term = term * (&spec.a + &k) * (&spec.b + &k) / ((&spec.c + &k) * (&k + Rational::one()));
    }
    Ok(Series::new(coeffs))
}

/// `K~(t) = 2F1(1/2, 1/2; 1; t)`.
pub fn elliptic_k(order: usize) -> Series<Rational> {
    hyp2f1_series(&Hyp2F1Spec { a: q(1, 2), b: q(1, 2), c: qi(1) }, order).expect("valid parameters")
}

/// `E~(t) = 2F1(1/2, -1/2; 1; t)`.
pub fn elliptic_e(order: usize) -> Series<Rational> {
    hyp2f1_series(&Hyp2F1Spec { a: q(1, 2), b: q(-1, 2), c: qi(1) }, order).expect("valid parameters")
}

/// `2 (1 - (1-t)^(1/2)) / t`, analytic with constant term one.
pub fn shifted_series(order: usize) -> Series<Rational> {
    let root = Series::<Rational>::one_minus_t_pow(&q(1, 2), order + 1);
    let coeffs = (0..=order).map(|j| -(root.coeffs()[j + 1].clone()) * qi(2)).collect();
    Series::new(coeffs)
}

/// `((1+t^(1/2))^(1/2) - (1-t^(1/2))^(1/2)) / t^(1/2) = 2 sum_j C(1/2, 2j+1) t^j`.
pub fn half_root_quotient_series(order: usize) -> Series<Rational> {
    let half = q(1, 2);
    let mut binom = Rational::one();
    let mut coeffs = Vec::with_capacity(order + 1);
    for m in 0..=(2 * order as i64 + 1) {
        if m % 2 == 1 {
            coeffs.push(&binom * qi(2));
        }
        binom = binom * (&half - qi(m)) / qi(m + 1);
    }
    Series::new(coeffs)
}

/// Closed-form expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum AlgExpr {
    Const(Rational),
    T,
    /// `1 - t`, kept symbolic so its powers land in the `(1-t)^b` prefactor.
    OneMinusT,
    EllipticK,
    EllipticE,
    /// `2 (1 - (1-t)^(1/2)) / t`.
    Shifted,
    /// `((1+t^(1/2))^(1/2) - (1-t^(1/2))^(1/2)) / t^(1/2)`.
    HalfRootQuotient,
    Hyp2F1(Hyp2F1Spec),
    Sum(Vec<AlgExpr>),
    Product(Vec<AlgExpr>),
    Neg(Box<AlgExpr>),
    Pow(Box<AlgExpr>, Rational),
    /// `d/dt` of the inner expression.
    Derivative(Box<AlgExpr>),
    /// Another catalog entry, by id.
    Ref(String),
}

impl AlgExpr {
    pub fn parse(text: &str) -> Result<AlgExpr, SpecialError> {
        let mut p = Parser { src: text.as_bytes(), pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn constant(r: Rational) -> AlgExpr {
        AlgExpr::Const(r)
    }

    /// Ids referenced by `@id` nodes.
    pub fn references(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_refs(&mut out);
        out
    }

    fn collect_refs(&self, out: &mut Vec<String>) {
        match self {
            AlgExpr::Ref(id) => out.push(id.clone()),
            AlgExpr::Sum(v) | AlgExpr::Product(v) => v.iter().for_each(|e| e.collect_refs(out)),
            AlgExpr::Neg(e) | AlgExpr::Pow(e, _) | AlgExpr::Derivative(e) => e.collect_refs(out),
            _ => {}
        }
    }
}

impl fmt::Display for AlgExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgExpr::Const(r) => write!(f, "{}", fmt_rational(r)),
            AlgExpr::T => write!(f, "t"),
            AlgExpr::OneMinusT => write!(f, "(1-t)"),
            AlgExpr::EllipticK => write!(f, "K"),
            AlgExpr::EllipticE => write!(f, "E"),
            AlgExpr::Shifted => write!(f, "shifted"),
            AlgExpr::HalfRootQuotient => write!(f, "halfquot"),
            AlgExpr::Hyp2F1(s) => write!(f, "F({},{};{})", fmt_rational(&s.a), fmt_rational(&s.b), fmt_rational(&s.c)),
            AlgExpr::Sum(v) => {
                write!(f, "(")?;
                for (i, e) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, ")")
            }
            AlgExpr::Product(v) => {
                for (i, e) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    write!(f, "{e}")?;
                }
                Ok(())
            }
            AlgExpr::Neg(e) => write!(f, "-({e})"),
            AlgExpr::Pow(e, r) => write!(f, "({e})^({})", fmt_rational(r)),
            AlgExpr::Derivative(e) => write!(f, "D({e})"),
            AlgExpr::Ref(id) => write!(f, "@{id}"),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> SpecialError {
        SpecialError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, ch: u8) -> bool {
        if self.peek() == Some(ch) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, ch: u8) -> Result<(), SpecialError> {
        if self.eat(ch) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", ch as char)))
        }
    }

    fn expr(&mut self) -> Result<AlgExpr, SpecialError> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat(b'+') {
                terms.push(self.term()?);
            } else if self.eat(b'-') {
                terms.push(AlgExpr::Neg(Box::new(self.term()?)));
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { AlgExpr::Sum(terms) })
    }

    fn term(&mut self) -> Result<AlgExpr, SpecialError> {
        let mut factors = vec![self.unary()?];
        loop {
            if self.eat(b'*') {
                factors.push(self.unary()?);
            } else if self.eat(b'/') {
                let d = self.unary()?;
                factors.push(match d {
                    AlgExpr::Const(r) if !r.is_zero() => AlgExpr::Const(r.recip()),
                    other => AlgExpr::Pow(Box::new(other), -Rational::one()),
                });
            } else {
                break;
            }
        }
        Ok(fold_constants(factors))
    }

    fn unary(&mut self) -> Result<AlgExpr, SpecialError> {
        if self.eat(b'-') {
            let inner = self.unary()?;
            return Ok(match inner {
                AlgExpr::Const(r) => AlgExpr::Const(-r),
                other => AlgExpr::Neg(Box::new(other)),
            });
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let r = self.exponent()?;
            return Ok(match base {
                AlgExpr::Const(c) if r.is_integer() => {
                    let e = r.to_integer();
                    let v = rational_pow(&c, &Rational::from_integer(e)).ok_or_else(|| self.error("bad constant power"))?;
                    AlgExpr::Const(v)
                }
                other => AlgExpr::Pow(Box::new(other), r),
            });
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<Rational, SpecialError> {
        if self.eat(b'(') {
            let neg = self.eat(b'-');
            let mut r = self.number()?;
            if self.eat(b'/') {
                let d = self.number()?;
                r /= d;
            }
            self.expect(b')')?;
            Ok(if neg { -r } else { r })
        } else {
            let neg = self.eat(b'-');
            let r = self.number()?;
            Ok(if neg { -r } else { r })
        }
    }

    fn number(&mut self) -> Result<Rational, SpecialError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        parse_rational(text).map_err(|e| self.error(&e.to_string()))
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn signed_rational(&mut self) -> Result<Rational, SpecialError> {
        let neg = self.eat(b'-');
        let mut r = self.number()?;
        if self.eat(b'/') {
            r /= self.number()?;
        }
        Ok(if neg { -r } else { r })
    }

    fn atom(&mut self) -> Result<AlgExpr, SpecialError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(if is_one_minus_t(&e) { AlgExpr::OneMinusT } else { e })
            }
            Some(b'@') => {
                self.pos += 1;
                let id = self.ident();
                if id.is_empty() {
                    return Err(self.error("empty reference"));
                }
                Ok(AlgExpr::Ref(id))
            }
            Some(c) if c.is_ascii_digit() => Ok(AlgExpr::Const(self.number()?)),
            Some(c) if c.is_ascii_alphabetic() => {
                let word = self.ident();
                match word.as_str() {
                    "t" => Ok(AlgExpr::T),
                    "E" => Ok(AlgExpr::EllipticE),
                    "K" => Ok(AlgExpr::EllipticK),
                    "shifted" => Ok(AlgExpr::Shifted),
                    "halfquot" => Ok(AlgExpr::HalfRootQuotient),
                    "F" => {
                        self.expect(b'(')?;
                        let a = self.signed_rational()?;
                        self.expect(b',')?;
                        let b = self.signed_rational()?;
                        self.expect(b';')?;
                        let c = self.signed_rational()?;
                        self.expect(b')')?;
                        Ok(AlgExpr::Hyp2F1(Hyp2F1Spec::new(a, b, c)?))
                    }
                    "D" => {
                        self.expect(b'(')?;
                        let e = self.expr()?;
                        self.expect(b')')?;
                        Ok(AlgExpr::Derivative(Box::new(e)))
                    }
                    other => Err(self.error(&format!("unknown symbol `{other}`"))),
                }
            }
            _ => Err(self.error("expected an operand")),
        }
    }
}

fn fold_constants(factors: Vec<AlgExpr>) -> AlgExpr {
    let mut c = Rational::one();
    let mut rest = Vec::new();
    for f in factors {
        match f {
            AlgExpr::Const(r) => c *= r,
            other => rest.push(other),
        }
    }
    if rest.is_empty() {
        return AlgExpr::Const(c);
    }
    if !c.is_one() {
        rest.insert(0, AlgExpr::Const(c));
    }
    if rest.len() == 1 {
        rest.pop().unwrap()
    } else {
        AlgExpr::Product(rest)
    }
}

fn is_one_minus_t(e: &AlgExpr) -> bool {
    match e {
        AlgExpr::Sum(v) if v.len() == 2 => {
            matches!(&v[0], AlgExpr::Const(c) if c.is_one()) && matches!(&v[1], AlgExpr::Neg(inner) if **inner == AlgExpr::T)
        }
        _ => false,
    }
}

/// Intermediate value `t^a (1-t)^b body`; unlike [`PrefactoredSeries`] the
/// body may vanish at `t = 0`.
#[derive(Debug, Clone)]
struct Lax {
    a: Rational,
    b: Rational,
    body: Series<Rational>,
}

impl Lax {
    fn plain(body: Series<Rational>) -> Lax {
        Lax { a: Rational::zero(), b: Rational::zero(), body }
    }

    /// Moves the valuation of `body` into `a`.
    fn normalize(self) -> Result<Lax, SpecialError> {
        let v = self.body.valuation().ok_or(SeriesError::Vanishing)?;
        let body = self.body.shift_down(v)?;
        Ok(Lax { a: self.a + qi(v as i64), b: self.b, body })
    }

    fn with_b(&self, b: &Rational) -> Series<Rational> {
        let d = &self.b - b;
        if d.is_zero() {
            self.body.clone()
        } else {
            &self.body * &Series::one_minus_t_pow(&d, self.body.order())
        }
    }
}

/// Resolves `@id` references during evaluation.
pub trait RefResolver {
    fn resolve(&self, id: &str, order: usize) -> Result<PrefactoredSeries<Rational>, SpecialError>;
}

/// A resolver that knows no references.
pub struct NoRefs;

impl RefResolver for NoRefs {
    fn resolve(&self, id: &str, _order: usize) -> Result<PrefactoredSeries<Rational>, SpecialError> {
        Err(SpecialError::UnresolvedRef(id.to_string()))
    }
}

/// Expands an expression; the returned body has exactly `order` as order.
pub fn eval_alg_expr(e: &AlgExpr, order: usize) -> Result<PrefactoredSeries<Rational>, SpecialError> {
    eval_alg_expr_with(e, order, &NoRefs)
}

pub fn eval_alg_expr_with(e: &AlgExpr, order: usize, refs: &dyn RefResolver) -> Result<PrefactoredSeries<Rational>, SpecialError> {
    let mut guard = 8;
    loop {
        let work = order + guard;
        let raw = eval(e, work, refs)?;
        let reached = match raw.clone().normalize() {
            Ok(lax) if lax.body.order() >= order => {
                return Ok(PrefactoredSeries { a: lax.a, b: lax.b, body: lax.body.truncate(order) });
            }
            Ok(lax) => lax.body.order(),
            // Cancellation through the whole working order: more terms needed.
            Err(SpecialError::Series(SeriesError::Vanishing)) => 0,
            Err(err) => return Err(err),
        };
        if guard > 4 * (order + 16) {
            return Err(SpecialError::PrecisionLoss { needed: order, reached });
        }
        guard *= 2;
    }
}

fn eval(e: &AlgExpr, n: usize, refs: &dyn RefResolver) -> Result<Lax, SpecialError> {
    Ok(match e {
        AlgExpr::Const(c) => Lax::plain(Series::constant(c.clone(), n)),
        AlgExpr::T => Lax { a: Rational::one(), b: Rational::zero(), body: Series::one(n) },
        AlgExpr::OneMinusT => Lax { a: Rational::zero(), b: Rational::one(), body: Series::one(n) },
        AlgExpr::EllipticK => Lax::plain(elliptic_k(n)),
        AlgExpr::EllipticE => Lax::plain(elliptic_e(n)),
        AlgExpr::Shifted => Lax::plain(shifted_series(n)),
        AlgExpr::HalfRootQuotient => Lax::plain(half_root_quotient_series(n)),
        AlgExpr::Hyp2F1(spec) => Lax::plain(hyp2f1_series(spec, n)?),
        AlgExpr::Ref(id) => {
            let p = refs.resolve(id, n)?;
            Lax { a: p.a, b: p.b, body: p.body }
        }
        AlgExpr::Neg(inner) => {
            let v = eval(inner, n, refs)?;
            Lax { a: v.a, b: v.b, body: v.body.neg() }
        }
        AlgExpr::Sum(terms) => {
            let vals = terms.iter().map(|t| eval(t, n, refs)).collect::<Result<Vec<_>, _>>()?;
            sum(vals)?
        }
        AlgExpr::Product(factors) => {
            let mut acc = Lax::plain(Series::one(n));
            for f in factors {
                let v = eval(f, n, refs)?;
                acc = Lax { a: &acc.a + &v.a, b: &acc.b + &v.b, body: &acc.body * &v.body };
            }
            acc
        }
        AlgExpr::Pow(base, r) => {
            let v = eval(base, n, refs)?.normalize()?;
            let c = v.body.coeffs()[0].clone();
            let cr = rational_pow(&c, r).ok_or_else(|| SpecialError::IrrationalConstant(fmt_rational(&c), fmt_rational(r)))?;
            let unit = v.body.scale_q(&c.recip());
            let body = unit.pow_rational(r)?.scale_q(&cr);
            Lax { a: &v.a * r, b: &v.b * r, body }
        }
        AlgExpr::Derivative(inner) => derivative(eval(inner, n, refs)?)?,
    })
}

fn sum(vals: Vec<Lax>) -> Result<Lax, SpecialError> {
    // Zero bodies carry no exponent information.
    let live: Vec<&Lax> = vals.iter().filter(|v| !v.body.is_zero()).collect();
    if live.is_empty() {
        let n = vals.iter().map(|v| v.body.order()).min().unwrap_or(0);
        return Ok(Lax::plain(Series::zero(n)));
    }
    let a_min = live.iter().map(|v| v.a.clone()).min().unwrap();
    let b_min = live.iter().map(|v| v.b.clone()).min().unwrap();
    let mut acc: Option<Series<Rational>> = None;
    for v in &vals {
        if v.body.is_zero() {
            acc = Some(match acc {
                Some(s) => s.truncate(s.order().min(v.body.order())),
                None => Series::zero(v.body.order()),
            });
            continue;
        }
        let shift = &v.a - &a_min;
        if !shift.is_integer() {
            return Err(SpecialError::IncompatibleExponents(fmt_rational(&v.a), fmt_rational(&a_min)));
        }
        let k = usize::try_from(shift.to_integer()).expect("nonnegative shift");
        let s = v.with_b(&b_min).shift_up(k);
        acc = Some(match acc {
            Some(prev) => &prev + &s,
            None => s,
        });
    }
    Ok(Lax { a: a_min, b: b_min, body: acc.unwrap() })
}

/// `d/dt [t^a (1-t)^b u] = t^(a-1) (1-t)^(b-1) [a(1-t)u - b t u + t(1-t) u']`.
fn derivative(v: Lax) -> Result<Lax, SpecialError> {
    let n = v.body.order();
    if n == 0 {
        return Err(SeriesError::OrderTooSmall.into());
    }
    let u = v.body.truncate(n - 1);
    let du = v.body.derivative()?;
    let omt = Series::from_ints(&[1, -1], n - 1);
    let t = Series::t(n - 1);
    let first = (&omt * &u).scale_q(&v.a);
    let second = (&t * &u).scale_q(&v.b);
    let third = &(&t * &omt) * &du;
    let body = &(&first - &second) + &third;
    Ok(Lax { a: &v.a - Rational::one(), b: &v.b - Rational::one(), body })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qs(v: &[(i64, i64)]) -> Vec<Rational> {
        v.iter().map(|&(a, b)| q(a, b)).collect()
    }

    #[test]
    fn k_and_e_leading_terms() {
        assert_eq!(elliptic_k(3).coeffs(), qs(&[(1, 1), (1, 4), (9, 64), (25, 256)]).as_slice());
        assert_eq!(elliptic_e(4).coeffs(), qs(&[(1, 1), (-1, 4), (-3, 64), (-5, 256), (-175, 16384)]).as_slice());
    }

    #[test]
    fn zero_upper_parameter_gives_one() {
        let s = hyp2f1_series(&Hyp2F1Spec::new(qi(0), q(3, 2), qi(2)).unwrap(), 6).unwrap();
        assert_eq!(s, Series::one(6));
        assert!(Hyp2F1Spec::new(qi(1), qi(1), qi(-2)).is_err());
    }

    #[test]
    fn shifted_square_root_squares_back() {
        let s = shifted_series(20);
        assert_eq!(s.coeffs()[0], qi(1));
        let r = s.pow_rational(&q(1, 2)).unwrap();
        assert_eq!(&r * &r, s);
    }

    #[test]
    fn quotient_form_equals_shifted_root() {
        let a = half_root_quotient_series(20);
        let b = shifted_series(20).pow_rational(&q(1, 2)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn deep_cancellation_gets_more_terms() {
        // Cancels through t^29, past the initial working order.
        let e = AlgExpr::parse("(1-t)^(-1) - 1 - t - t^2 - t^3 - t^4 - t^5 - t^6 - t^7 - t^8 - t^9 - t^10 - t^11 - t^12 - t^13 - t^14 - t^15 - t^16 - t^17 - t^18 - t^19 - t^20 - t^21 - t^22 - t^23 - t^24 - t^25 - t^26 - t^27 - t^28 - t^29").unwrap();
        let p = eval_alg_expr(&e, 2).unwrap();
        // t^30 (1-t)^(-1).
        assert_eq!((p.a, p.b), (qi(30), qi(-1)));
        assert_eq!(p.body.coeffs(), &[qi(1), qi(0), qi(0)]);
    }

    #[test]
    fn parse_and_eval_closed_form() {
        let e = AlgExpr::parse("3/2*t*(1-t)^(1/16)*((1+(1-t)^(1/2))/2)^(5/4)").unwrap();
        let p = eval_alg_expr(&e, 5).unwrap();
        assert_eq!(p.a, qi(1));
        let s = p.to_series().unwrap();
        assert_eq!(s.coeffs(), qs(&[(0, 1), (3, 2), (-9, 16), (-15, 128), (-15, 256), (-1215, 32768), (-6903, 262144)]).as_slice());
    }

    #[test]
    fn eval_algebraic_power() {
        let e = AlgExpr::parse("-45/16*t^3*(1-t)^(1/8)").unwrap();
        let p = eval_alg_expr(&e, 2).unwrap();
        assert_eq!((p.a.clone(), p.b.clone()), (qi(3), q(1, 8)));
        let s = p.to_series().unwrap();
        assert_eq!(&s.coeffs()[3..], qs(&[(-45, 16), (45, 128), (315, 2048)]).as_slice());
    }

    #[test]
    fn cancellation_is_tracked() {
        // (2t-1)E + (1-t)K vanishes at t = 0.
        let e = AlgExpr::parse("(2*t-1)*E + (1-t)*K").unwrap();
        let p = eval_alg_expr(&e, 3).unwrap();
        assert_eq!(p.a, qi(1));
        assert_eq!(p.body.coeffs(), qs(&[(3, 2), (-9, 16), (-15, 128), (-105, 2048)]).as_slice());
    }

    #[test]
    fn legendre_relation() {
        let n = 40;
        let e = elliptic_e(n + 1);
        let k = elliptic_k(n + 1);
        let de = e.derivative().unwrap();
        let rhs = (&e - &k).shift_down(1).unwrap().scale_q(&q(1, 2));
        assert!((&de - &rhs).is_zero());
    }

    #[test]
    fn derivative_node() {
        let e = AlgExpr::parse("D(K)").unwrap();
        let p = eval_alg_expr(&e, 5).unwrap().to_series().unwrap();
        assert_eq!(p, elliptic_k(7).derivative().unwrap().truncate(5));
    }

    #[test]
    fn parse_errors() {
        assert!(AlgExpr::parse("3*").is_err());
        assert!(AlgExpr::parse("Q").is_err());
        assert!(AlgExpr::parse("(t").is_err());
        assert_eq!(eval_alg_expr(&AlgExpr::parse("1").unwrap(), 4).unwrap().body, Series::one(4));
    }
}
