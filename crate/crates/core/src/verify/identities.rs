//! Exact series identities between closed forms and solver families.

use crate::param_poly::{Param, ParamPoly};
use crate::rational::{q, qi, Rational};
use crate::series::Series;

use super::lab::{Lab, VerifyError};
use super::report::CheckReport;
use super::{flip_alpha, omt};

pub const IDENTITY_IDS: &[&str] = &[
    "identity_f2_f1",
    "identity_f4_f3",
    "identitythus",
    "identitythus2",
    "verif_f1f3",
    "verif2",
    "C05_factorization",
    "C05_alpha_product",
    "C05_half",
    "C05_lambda0",
    "F_identity",
    "F_half_identity",
    "C25_factorization",
    "C25_alpha_product",
    "C25_half",
    "particular_f",
    "particular_F",
    "alg_member_f",
    "alg_member_F",
    "lambda_parity",
    "xy_even",
    "xy_odd",
    "sigmamother",
    "canbe",
];

type PS = Series<ParamPoly>;

fn fam(lab: &Lab, name: &str, order: usize) -> Result<PS, VerifyError> {
    Ok(lab.family(name, order)?.series)
}

fn cmp(id: &str, got: &PS, expected: &PS, notes: &str) -> CheckReport {
    CheckReport::compare(id, got, expected, notes)
}

fn cmp_q(id: &str, got: &Series<Rational>, expected: &Series<Rational>, notes: &str) -> CheckReport {
    CheckReport::compare(id, got, expected, notes)
}

/// `(1-t)^e * a(alpha) = b(1-alpha)` and `(1-t)^e * a(1-alpha) = b(alpha)`.
fn reflection_pair(id: &str, a: &PS, b: &PS, e: Rational, order: usize, notes: &str) -> CheckReport {
    let w = omt(&e, order);
    let first = cmp(&format!("{id}/direct"), &(&w * &a.truncate(order)), &flip_alpha(&b.truncate(order)), notes);
    let second = cmp(&format!("{id}/reflected"), &(&w * &flip_alpha(&a.truncate(order))), &b.truncate(order), notes);
    CheckReport::combine(id, vec![first, second], notes)
}

/// `scale * (1-t)^(1/2) * t^(-6) * product`, through `t^order`.
fn product_form(factors: &[PS], scale: Rational, order: usize) -> Result<PS, VerifyError> {
    let mut prod = Series::constant(ParamPoly::one(), order + 6);
    for f in factors {
        prod = &prod * &f.truncate(order + 6);
    }
    let body = prod.shift_down(6)?;
    Ok((&omt(&q(1, 2), order) * &body).scale(&ParamPoly::constant(scale)))
}

pub fn check_identity(lab: &Lab, id: &str, order: usize) -> Result<CheckReport, VerifyError> {
    let alpha_of_mu = ParamPoly::new(Some(Param::Alpha), vec![qi(0), qi(4), qi(-4)]);
    let r = match id {
        "identity_f2_f1" => {
            let (f1, f2) = (fam(lab, "f1", order)?, fam(lab, "f2", order)?);
            reflection_pair(id, &f2, &f1, q(1, 4), order, "(1-t)^(1/4) f2(alpha) = f1(1-alpha), both orientations")
        }
        "identity_f4_f3" => {
            let (f3, f4) = (fam(lab, "f3", order)?, fam(lab, "f4", order)?);
            reflection_pair(id, &f4, &f3, q(1, 4), order, "(1-t)^(1/4) f4(alpha) = f3(1-alpha), both orientations")
        }
        "identitythus" => {
            let f13 = &fam(lab, "f1", order)? * &fam(lab, "f3", order)?;
            let f24 = &fam(lab, "f2", order)? * &fam(lab, "f4", order)?;
            reflection_pair(id, &f24, &f13, q(1, 2), order, "(1-t)^(1/2) f2 f4 (alpha) = f1 f3 (1-alpha), both orientations")
        }
        "identitythus2" => {
            let (f1, f2, f3, f4) = (fam(lab, "f1", order)?, fam(lab, "f2", order)?, fam(lab, "f3", order)?, fam(lab, "f4", order)?);
            let a = cmp("direct", &(&f4 * &flip_alpha(&f1)), &(&f2 * &flip_alpha(&f3)), "");
            let b = cmp("reflected", &(&flip_alpha(&f4) * &f1), &(&flip_alpha(&f2) * &f3), "");
            CheckReport::combine(id, vec![a, b], "f4(alpha) f1(1-alpha) = f2(alpha) f3(1-alpha), both orientations")
        }
        "verif_f1f3" | "verif2" => {
            let (first, second, closed, e) = if id == "verif_f1f3" {
                (("f1_05_half", "f3_05_half"), ("f2_05_half", "f4_05_half"), "f13_half_closed", q(1, 2))
            } else {
                (("f1_05_half", "f4_05_half"), ("f2_05_half", "f3_05_half"), "f14_half_closed", qi(0))
            };
            let lhs = &lab.closed(first.0, order)? * &lab.closed(first.1, order)?;
            let mid = &Series::one_minus_t_pow(&e, order) * &(&lab.closed(second.0, order)? * &lab.closed(second.1, order)?);
            let rhs = lab.closed(closed, order)?;
            let notes = format!("alpha = 1/2 products equal the closed value {closed}");
            CheckReport::combine(id, vec![cmp_q("left", &lhs, &rhs, ""), cmp_q("middle", &mid, &rhs, "")], &notes)
        }
        "C05_factorization" | "C25_factorization" => {
            let (family, closed) = if id == "C05_factorization" { ("C05", "C05") } else { ("C25", "C25") };
            let physical = fam(lab, family, order)?.specialize(&qi(1));
            cmp_q(id, &physical, &lab.closed(closed, order)?, "solver family at lambda^2 = 1 equals the product of its factors")
        }
        "C05_alpha_product" => {
            let lhs = fam(lab, "C05_mu", order)?.compose_param(&alpha_of_mu);
            let fs = ["f1", "f2", "f3", "f4"].iter().map(|n| fam(lab, n, order + 6)).collect::<Result<Vec<_>, _>>()?;
            let rhs = product_form(&fs, q(256, 81), order)?;
            cmp(id, &lhs, &rhs, "C(0,5) in mu = 4 alpha (1 - alpha) equals the product of the four alpha-families")
        }
        "C25_alpha_product" => {
            let lhs = fam(lab, "C25_mu", order)?.compose_param(&alpha_of_mu);
            let fs = ["F1_25", "F2_25"].iter().map(|n| fam(lab, n, order + 6)).collect::<Result<Vec<_>, _>>()?;
            let rhs = product_form(&fs, q(256, 2025), order)?;
            cmp(id, &lhs, &rhs, "C(2,5) in mu = 4 alpha (1 - alpha) equals the product of the two alpha-families")
        }
        "C05_half" | "C25_half" => {
            let lhs = lab.closed(id, order)?;
            cmp_q(id, &lhs, &Series::one_minus_t_pow(&q(1, 4), order), "alpha = 1/2 product equals (1-t)^(1/4)")
        }
        "C05_lambda0" => {
            let lhs = fam(lab, "C05", order)?.specialize(&qi(0));
            cmp_q(id, &lhs, &Series::one_minus_t_pow(&q(1, 4), order), "solver family at lambda = 0 equals (1-t)^(1/4)")
        }
        "F_identity" => {
            let (f1, f2) = (fam(lab, "F1_25", order)?, fam(lab, "F2_25", order)?);
            let direct = cmp("direct", &f2, &(&omt(&q(1, 2), order) * &flip_alpha(&f1)), "");
            let refl = cmp("reflected", &flip_alpha(&f2), &(&omt(&q(1, 2), order) * &f1), "");
            CheckReport::combine(id, vec![direct, refl], "F2(alpha) = (1-t)^(1/2) F1(1-alpha), both orientations")
        }
        "F_half_identity" => {
            let rhs = &Series::one_minus_t_pow(&q(1, 2), order) * &lab.closed("F1_25_half", order)?;
            cmp_q(id, &lab.closed("F2_25_half", order)?, &rhs, "F2 = (1-t)^(1/2) F1 at alpha = 1/2")
        }
        "particular_f" | "particular_F" => {
            let names: &[(&str, &str)] = if id == "particular_f" {
                &[("f1", "f1_05"), ("f2", "f2_05"), ("f3", "f3_05"), ("f4", "f4_05")]
            } else {
                &[("F1_25", "F1_25"), ("F2_25", "F2_25")]
            };
            let mut parts = Vec::new();
            for (family, stem) in names {
                let s = fam(lab, family, order)?;
                for (v, tag) in [(qi(0), "alpha0"), (qi(1), "alpha1")] {
                    let closed = format!("{stem}_{tag}");
                    parts.push(cmp_q(&format!("{family}@{tag}"), &s.specialize(&v), &lab.closed(&closed, order)?, ""));
                }
            }
            CheckReport::combine(id, parts, "alpha-families at alpha = 0 and 1 equal their E/K closed forms")
        }
        "alg_member_f" | "alg_member_F" => {
            let names: &[(&str, &str)] = if id == "alg_member_f" {
                &[("f1", "f1_05_half"), ("f2", "f2_05_half"), ("f3", "f3_05_half"), ("f4", "f4_05_half")]
            } else {
                &[("F1_25", "F1_25_half"), ("F2_25", "F2_25_half")]
            };
            let mut parts = Vec::new();
            for (family, closed) in names {
                let s = fam(lab, family, order)?.specialize(&q(1, 2));
                parts.push(cmp_q(family, &s, &lab.closed(closed, order)?, ""));
            }
            CheckReport::combine(id, parts, "alpha-families at alpha = 1/2 equal their algebraic closed forms")
        }
        "lambda_parity" => {
            let mut parts = Vec::new();
            for family in ["C05_mu", "C25_mu"] {
                let s = fam(lab, family, order)?.compose_param(&alpha_of_mu);
                parts.push(cmp(family, &s, &flip_alpha(&s), ""));
            }
            CheckReport::combine(id, parts, "mu-families pulled back to alpha are invariant under alpha -> 1 - alpha")
        }
        "xy_even" | "xy_odd" => {
            // N = 1 at lambda = 1 (M_def = 0): C(1,1) = E, C(0,0) = 1.
            let c11 = fam(lab, "C11", order)?.specialize(&qi(0));
            let e = lab.closed("C11_lowT", order)?;
            if id == "xy_even" {
                cmp_q(id, &(&c11 * &c11), &(&e * &e), "<s0 s2> = C(1,1)^2 from the solver family at M_def = 0 equals E^2")
            } else {
                cmp_q(id, &c11, &e, "<s0 s1> = C(1,1) C(0,0) from the solver family at M_def = 0 equals E")
            }
        }
        "sigmamother" | "canbe" => return super::toda::sigma_identity(lab, id, order),
        _ => return Err(VerifyError::UnknownCheck(id.to_string())),
    };
    Ok(r)
}
