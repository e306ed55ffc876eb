use serde::Serialize;

use crate::coeff::Coeff;
use crate::rational::{fmt_rational, Rational};
use crate::series::Series;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub order: usize,
    pub expected: String,
    pub got: String,
}

/// Outcome of one exact check. A failure always carries the first mismatch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check_id: String,
    pub status: Status,
    pub checked_order: usize,
    pub first_mismatch: Option<Mismatch>,
    pub notes: String,
}

impl CheckReport {
    /// Compares `got` against `expected` up to their common order.
    pub fn compare<C: Coeff>(check_id: &str, got: &Series<C>, expected: &Series<C>, notes: &str) -> CheckReport {
        let order = got.order().min(expected.order());
        let first_mismatch = got.truncate(order).first_mismatch(&expected.truncate(order)).map(|(order, g, e)| Mismatch {
            order,
            expected: e.to_text(),
            got: g.to_text(),
        });
        CheckReport {
            check_id: check_id.to_string(),
            status: if first_mismatch.is_none() { Status::Pass } else { Status::Fail },
            checked_order: order,
            first_mismatch,
            notes: notes.to_string(),
        }
    }

    /// Requires `s` to vanish identically.
    pub fn vanishing<C: Coeff>(check_id: &str, s: &Series<C>, notes: &str) -> CheckReport {
        Self::compare(check_id, s, &Series::zero(s.order()), notes)
    }

    pub fn inconclusive(check_id: &str, notes: &str) -> CheckReport {
        CheckReport {
            check_id: check_id.to_string(),
            status: Status::Inconclusive,
            checked_order: 0,
            first_mismatch: None,
            notes: notes.to_string(),
        }
    }

    /// All of `parts` must pass; the first non-passing part decides the outcome.
    pub fn combine(check_id: &str, parts: Vec<CheckReport>, notes: &str) -> CheckReport {
        let order = parts.iter().map(|p| p.checked_order).min().unwrap_or(0);
        match parts.into_iter().find(|p| p.status != Status::Pass) {
            None => CheckReport {
                check_id: check_id.to_string(),
                status: Status::Pass,
                checked_order: order,
                first_mismatch: None,
                notes: notes.to_string(),
            },
            Some(bad) => CheckReport {
                check_id: check_id.to_string(),
                status: bad.status,
                checked_order: bad.checked_order,
                first_mismatch: bad.first_mismatch,
                notes: format!("{notes}; failing part {}: {}", bad.check_id, bad.notes),
            },
        }
    }

    pub fn with_notes(mut self, notes: &str) -> Self {
        self.notes = notes.to_string();
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn summary_line(&self) -> String {
        let mut line =
            format!("{} {} (exact to t^{}) {}", self.status.name().to_uppercase(), self.check_id, self.checked_order, self.notes);
        if let Some(m) = &self.first_mismatch {
            line.push_str(&format!(" [first mismatch at t^{}: expected {}, got {}]", m.order, m.expected, m.got));
        }
        line
    }
}

/// Evidence of integrality after a rescaling `t -> N t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GBReport {
    #[serde(serialize_with = "ser_rational")]
    pub parameter_value: Rational,
    pub rescale_factor: u64,
    /// Number of leading coefficients checked to be integers.
    pub verified_prefix: usize,
    pub all_integer: bool,
    pub coefficients: Vec<String>,
}

impl GBReport {
    pub fn summary_line(&self) -> String {
        if self.all_integer {
            format!(
                "parameter {}: rescale t -> {} t, integer prefix verified: {} terms",
                fmt_rational(&self.parameter_value),
                self.rescale_factor,
                self.verified_prefix
            )
        } else {
            format!(
                "parameter {}: no rescale factor found; integer prefix under t -> {} t: {} terms (inconclusive)",
                fmt_rational(&self.parameter_value),
                self.rescale_factor,
                self.verified_prefix
            )
        }
    }
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn failure_carries_mismatch() {
        let a: Series<Rational> = Series::from_rationals(&[qi(1), q(1, 2), qi(3)], 2);
        let b: Series<Rational> = Series::from_rationals(&[qi(1), q(1, 2), qi(4)], 2);
        let r = CheckReport::compare("x", &a, &b, "");
        assert_eq!(r.status, Status::Fail);
        let m = r.first_mismatch.unwrap();
        assert_eq!((m.order, m.expected.as_str(), m.got.as_str()), (2, "4", "3"));
        assert!(CheckReport::compare("x", &a, &a, "").passed());
    }

    #[test]
    fn combine_reports_first_failure() {
        let a: Series<Rational> = Series::from_rationals(&[qi(1)], 3);
        let ok = CheckReport::vanishing("z", &Series::<Rational>::zero(3), "");
        let bad = CheckReport::vanishing("a", &a, "");
        let c = CheckReport::combine("both", vec![ok.clone(), bad], "n");
        assert_eq!(c.status, Status::Fail);
        assert_eq!(c.first_mismatch.unwrap().order, 0);
        assert!(CheckReport::combine("one", vec![ok], "n").passed());
    }
}
