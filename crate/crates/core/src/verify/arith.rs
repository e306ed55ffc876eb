//! Integrality of specialized families after a rescaling `t -> N t`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::param_poly::ParamPoly;
use crate::rational::{fmt_rational, q, qi, Rational};
use crate::series::Series;

use super::lab::{Lab, VerifyError};
use super::report::{CheckReport, GBReport, Mismatch, Status};

/// Trial-division bound for denominator factorization.
const TRIAL_LIMIT: u64 = 100_000;

/// Prime factorization of `n` by trial division; `None` if a cofactor
/// above the trial bound remains.
fn factor(n: &BigInt) -> Option<Vec<(u64, u32)>> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = 2u64;
    while !n.is_one() {
        if p > TRIAL_LIMIT {
            return None;
        }
        let bp = BigInt::from(p);
        if BigInt::from(p * p) > n {
            // What remains is prime.
            let r = n.to_u64()?;
            out.push((r, 1));
            break;
        }
        let mut e = 0;
        while (&n % &bp).is_zero() {
            n /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    Some(out)
}

/// Smallest `N` with `N^n d_n` integral for every `n`, from the prime
/// support of the denominators. `None` if a denominator could not be factored.
pub fn minimal_rescale(s: &Series<Rational>) -> Option<BigInt> {
    let mut exps: Vec<(u64, u32)> = Vec::new();
    for (n, c) in s.coeffs().iter().enumerate() {
        if c.denom().is_one() {
            continue;
        }
        if n == 0 {
            return None;
        }
        for (p, e) in factor(c.denom())? {
            let need = (e as usize).div_ceil(n) as u32;
            match exps.iter_mut().find(|x| x.0 == p) {
                Some(x) => x.1 = x.1.max(need),
                None => exps.push((p, need)),
            }
        }
    }
    Some(exps.iter().fold(BigInt::one(), |acc, &(p, e)| acc * BigInt::from(p).pow(e)))
}

fn integer_prefix(s: &Series<Rational>) -> usize {
    s.coeffs().iter().take_while(|c| c.is_integer()).count()
}

fn report(value: &Rational, s: &Series<Rational>, factor: u64) -> GBReport {
    let scaled = s.rescale(&qi(factor as i64));
    let prefix = integer_prefix(&scaled);
    GBReport {
        parameter_value: value.clone(),
        rescale_factor: factor,
        verified_prefix: prefix,
        all_integer: prefix == scaled.coeffs().len(),
        coefficients: scaled.coeffs().iter().map(fmt_rational).collect(),
    }
}

/// Specializes the parameter and searches the smallest rescale factor up to
/// `max_rescale` that makes the prefix through `t^order` integral.
pub fn gb_check(family: &Series<ParamPoly>, param: &Rational, max_rescale: u64, order: usize) -> GBReport {
    let s = family.truncate(order).specialize(param);
    match minimal_rescale(&s).and_then(|n| n.to_u64()).filter(|&n| n <= max_rescale) {
        Some(n) => report(param, &s, n),
        None => {
            let mut r = report(param, &s, max_rescale.max(1));
            r.all_integer = false;
            r
        }
    }
}

/// Integrality under one given rescale factor.
pub fn gb_fixed(family: &Series<ParamPoly>, param: &Rational, rescale: u64, order: usize) -> GBReport {
    report(param, &family.truncate(order).specialize(param), rescale)
}

pub const ARITH_IDS: &[&str] =
    &["glob_M0", "glob_M1", "glob_M2", "glob_M3", "glob_M4", "glob_M5", "glob_printed", "gb_M1_2", "gb_M1_3", "gb_M2_5"];

const MAX_RESCALE: u64 = 1 << 40;
const MIN_PREFIX: usize = 20;

fn gb_as_check(id: &str, r: &GBReport, need_factor: Option<u64>, min_prefix: usize) -> CheckReport {
    let ok = r.all_integer && r.verified_prefix >= min_prefix && need_factor.is_none_or(|n| n == r.rescale_factor);
    let checked = r.verified_prefix.saturating_sub(1);
    let first_mismatch = if r.all_integer {
        None
    } else {
        r.coefficients.get(r.verified_prefix).map(|c| Mismatch { order: r.verified_prefix, expected: "an integer".into(), got: c.clone() })
    };
    let status = if ok {
        Status::Pass
    } else if first_mismatch.is_some() {
        Status::Fail
    } else {
        Status::Inconclusive
    };
    CheckReport { check_id: id.to_string(), status, checked_order: checked, first_mismatch, notes: r.summary_line() }
}

pub fn check_arith(lab: &Lab, id: &str, order: usize) -> Result<CheckReport, VerifyError> {
    let c11 = || -> Result<Series<ParamPoly>, VerifyError> { Ok(lab.family("C11", order)?.series) };
    if let Some(m) = id.strip_prefix("glob_M").and_then(|m| m.parse::<i64>().ok()) {
        if !(0..=5).contains(&m) {
            return Err(VerifyError::UnknownCheck(id.to_string()));
        }
        let r = gb_fixed(&c11()?, &qi(m), 16, order);
        return Ok(gb_as_check(id, &r, Some(16), order + 1));
    }
    let value = match id {
        "glob_printed" => {
            let printed = lab.catalog().reference_full("C11_glob")?;
            let fam = lab.family("C11", printed.order())?.series.rescale(&qi(16));
            return Ok(CheckReport::compare(id, &fam, &printed, "C(1,1) family under t -> 16 t against its printed integer series"));
        }
        "gb_M1_2" => q(1, 2),
        "gb_M1_3" => q(1, 3),
        "gb_M2_5" => q(2, 5),
        _ => return Err(VerifyError::UnknownCheck(id.to_string())),
    };
    let r = gb_check(&c11()?, &value, MAX_RESCALE, order);
    Ok(gb_as_check(id, &r, None, MIN_PREFIX.min(order + 1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_small_numbers() {
        assert_eq!(factor(&BigInt::from(360)), Some(vec![(2, 3), (3, 2), (5, 1)]));
        assert_eq!(factor(&BigInt::from(1)), Some(vec![]));
    }

    #[test]
    fn minimal_rescale_of_geometric_series() {
        // sum (t/12)^n needs N = 12.
        let s: Series<Rational> = Series::new((0..8).map(|n| Rational::new(BigInt::one(), BigInt::from(12).pow(n))).collect());
        assert_eq!(minimal_rescale(&s), Some(BigInt::from(12)));
        // 1 + t^2/8 needs N = 4, since 4^2 = 16 is divisible by 8 and 2^2 is not.
        let s: Series<Rational> = Series::new(vec![qi(1), qi(0), q(1, 8)]);
        assert_eq!(minimal_rescale(&s), Some(BigInt::from(4)));
    }
}
