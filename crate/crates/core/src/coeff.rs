//! The coefficient-ring abstraction shared by rationals and parameter polynomials.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::param_poly::{IntPoly, Param, ParamPoly};
use crate::rational::{fmt_rational, Rational};

/// An exact commutative coefficient ring containing the rationals.
pub trait Coeff: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: Rational) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, r: &Rational) -> Self;
    /// Multiplicative inverse, when the element is a unit.
    fn inverse(&self) -> Option<Self>;
    /// Exact quotient, when `d` divides `self`.
    fn div_exact(&self, d: &Self) -> Option<Self>;
    /// Whether two elements live in the same ring.
    fn compatible(&self, other: &Self) -> bool;
    /// The rational value, when the element is a constant.
    fn as_rational(&self) -> Option<Rational>;
    fn to_text(&self) -> String;
    /// Representation used inside long sums of products.
    type Dot: Clone + Send + Sync;
    fn to_dot(&self) -> Self::Dot;
    /// `sum a_i b_i`, normalized once at the end.
    fn dot<'a, I: Iterator<Item = (&'a Self::Dot, &'a Self::Dot)>>(pairs: I) -> Self
    where
        Self::Dot: 'a;
}

impl Coeff for Rational {
    type Dot = Rational;
    fn to_dot(&self) -> Rational {
        self.clone()
    }
    fn dot<'a, I: Iterator<Item = (&'a Rational, &'a Rational)>>(pairs: I) -> Self {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for (a, b) in pairs {
            if Zero::is_zero(a) || Zero::is_zero(b) {
                continue;
            }
            let d = a.denom() * b.denom();
            let n = a.numer() * b.numer();
            if d == den {
                num += n;
            } else {
                let g = den.gcd(&d);
                num = num * (&d / &g) + n * (&den / &g);
                den = &den / &g * d;
            }
        }
        Rational::new(num, den)
    }
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, r: &Rational) -> Self {
        self * r
    }
    fn inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn div_exact(&self, d: &Self) -> Option<Self> {
        if Zero::is_zero(d) {
            None
        } else {
            Some(self / d)
        }
    }
    fn compatible(&self, _other: &Self) -> bool {
        true
    }
    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn to_text(&self) -> String {
        fmt_rational(self)
    }
}

impl Coeff for ParamPoly {
    type Dot = IntPoly;
    fn to_dot(&self) -> IntPoly {
        IntPoly::from(self)
    }
    fn dot<'a, I: Iterator<Item = (&'a IntPoly, &'a IntPoly)>>(pairs: I) -> Self {
        IntPoly::dot(pairs)
    }
    fn zero() -> Self {
        ParamPoly::zero()
    }
    fn one() -> Self {
        ParamPoly::one()
    }
    fn from_rational(r: Rational) -> Self {
        ParamPoly::constant(r)
    }
    fn is_zero(&self) -> bool {
        ParamPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        ParamPoly::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        ParamPoly::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        ParamPoly::mul(self, other)
    }
    fn neg(&self) -> Self {
        ParamPoly::neg(self)
    }
    fn scale(&self, r: &Rational) -> Self {
        ParamPoly::scale(self, r)
    }
    fn inverse(&self) -> Option<Self> {
        let c = self.constant_value()?;
        if Zero::is_zero(&c) {
            None
        } else {
            Some(ParamPoly::constant(c.recip()))
        }
    }
    fn div_exact(&self, d: &Self) -> Option<Self> {
        ParamPoly::div_exact(self, d)
    }
    fn compatible(&self, other: &Self) -> bool {
        ParamPoly::compatible(self, other)
    }
    fn as_rational(&self) -> Option<Rational> {
        self.constant_value()
    }
    fn to_text(&self) -> String {
        ParamPoly::to_text(self)
    }
}

/// Rings able to host a freshly adjoined formal parameter.
pub trait ParamRing: Coeff {
    fn generator(param: Param) -> Self;
}

impl ParamRing for ParamPoly {
    fn generator(param: Param) -> Self {
        ParamPoly::var(param)
    }
}
