//! The catalog of closed forms and printed reference series.
//!
//! The data lives in `data/catalog.txt`, embedded at build time. Setting
//! `LAMBDA_EXT_CATALOG` to a path loads that file instead.

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use crate::param_poly::{Param, ParamPoly};
use crate::rational::{parse_rational, qi, Rational};
use crate::series::{PrefactoredSeries, Series, SeriesError};
use crate::special::{eval_alg_expr_with, AlgExpr, RefResolver, SpecialError};

const EMBEDDED: &str = include_str!("../data/catalog.txt");

pub const CATALOG_ENV: &str = "LAMBDA_EXT_CATALOG";

type Field = (usize, String, String);

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown catalog id `{0}`")]
    UnknownId(String),
    #[error("entry `{id}` is a {kind}, not usable here")]
    WrongKind { id: String, kind: &'static str },
    #[error("entry `{id}` prints coefficients up to t^{printed}; t^{requested} requested (use the solver)")]
    OrderExceedsPrinted { id: String, requested: usize, printed: usize },
    #[error("entry `{id}` has a non-integer or negative t-exponent {a} and is not a plain series")]
    NotPlainSeries { id: String, a: String },
    #[error("catalog line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("cannot read catalog file: {0}")]
    Io(String),
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryKind {
    EkPolynomial,
    AlgExpr,
    ReferenceSeries,
}

impl EntryKind {
    pub fn name(self) -> &'static str {
        match self {
            EntryKind::EkPolynomial => "ek_polynomial",
            EntryKind::AlgExpr => "alg_expr",
            EntryKind::ReferenceSeries => "reference_series",
        }
    }

    fn parse(s: &str) -> Option<EntryKind> {
        match s {
            "ek_polynomial" => Some(EntryKind::EkPolynomial),
            "alg_expr" => Some(EntryKind::AlgExpr),
            "reference_series" => Some(EntryKind::ReferenceSeries),
            _ => None,
        }
    }
}

/// One `E^i K^j * c(t)` term.
#[derive(Debug, Clone, PartialEq)]
pub struct EkTerm {
    pub e_degree: u32,
    pub k_degree: u32,
    pub coeff: AlgExpr,
}

/// `c * t^a * (1-t)^b * sum of E^i K^j c_ij(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EkPolynomial {
    pub terms: Vec<EkTerm>,
    pub prefactor: (Rational, Rational, Rational),
    pub homogeneous: bool,
}

impl EkPolynomial {
    /// Whether all terms share one total degree.
    pub fn is_homogeneous(&self) -> bool {
        let degrees: HashSet<u32> = self.terms.iter().map(|t| t.e_degree + t.k_degree).collect();
        degrees.len() <= 1
    }

    pub fn to_expr(&self) -> AlgExpr {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                AlgExpr::Product(vec![
                    t.coeff.clone(),
                    AlgExpr::Pow(Box::new(AlgExpr::EllipticE), qi(t.e_degree as i64)),
                    AlgExpr::Pow(Box::new(AlgExpr::EllipticK), qi(t.k_degree as i64)),
                ])
            })
            .collect();
        let (a, b, c) = &self.prefactor;
        AlgExpr::Product(vec![
            AlgExpr::Const(c.clone()),
            AlgExpr::Pow(Box::new(AlgExpr::T), a.clone()),
            AlgExpr::Pow(Box::new(AlgExpr::OneMinusT), b.clone()),
            AlgExpr::Sum(terms),
        ])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSeries {
    pub param: Option<Param>,
    /// Printed coefficients from `t^0`; the printed order is `len - 1`.
    pub coeffs: Vec<ParamPoly>,
}

impl ReferenceSeries {
    pub fn printed_order(&self) -> usize {
        self.coeffs.len() - 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Ek(EkPolynomial),
    Expr(AlgExpr),
    Reference(ReferenceSeries),
}

/// Physical regime shared by every entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Regime {
    pub temperature: &'static str,
    pub nu_condition: &'static str,
    pub t_def: &'static str,
}

pub const REGIME: Regime = Regime { temperature: "low", nu_condition: "nu = -k", t_def: "t = k^2" };

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub id: String,
    pub kind: EntryKind,
    pub param: Option<Param>,
    pub label: String,
    pub payload: Payload,
    pub notes: Vec<String>,
    pub line: usize,
}

impl CatalogEntry {
    pub fn regime(&self) -> Regime {
        REGIME
    }

    /// The expression tree of a closed-form entry.
    pub fn expr(&self) -> Option<AlgExpr> {
        match &self.payload {
            Payload::Ek(p) => Some(p.to_expr()),
            Payload::Expr(e) => Some(e.clone()),
            Payload::Reference(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
    index: HashMap<String, usize>,
}

static GLOBAL: OnceLock<Result<Catalog, CatalogError>> = OnceLock::new();

impl Catalog {
    pub fn embedded() -> Catalog {
        Catalog::parse(EMBEDDED).expect("embedded catalog parses")
    }

    pub fn from_path(path: &str) -> Result<Catalog, CatalogError> {
        let text = std::fs::read_to_string(path).map_err(|e| CatalogError::Io(format!("{path}: {e}")))?;
        Catalog::parse(&text)
    }

    /// The override file if `LAMBDA_EXT_CATALOG` is set, else the embedded data.
    pub fn load() -> Result<Catalog, CatalogError> {
        match std::env::var(CATALOG_ENV) {
            Ok(path) if !path.is_empty() => Catalog::from_path(&path),
            _ => Ok(Catalog::embedded()),
        }
    }

    /// Process-wide catalog, loaded once.
    pub fn global() -> Result<&'static Catalog, CatalogError> {
        GLOBAL.get_or_init(Catalog::load).as_ref().map_err(Clone::clone)
    }

    pub fn parse(text: &str) -> Result<Catalog, CatalogError> {
        let mut entries: Vec<CatalogEntry> = Vec::new();
        // The open entry and its (line, key, value) fields.
        let mut current: Option<(CatalogEntry, Vec<Field>)> = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if let Some(header) = trimmed.strip_prefix('@') {
                if let Some((entry, lines)) = current.take() {
                    entries.push(finish_entry(entry, lines)?);
                }
                current = Some((parse_header(header, line_no)?, Vec::new()));
                continue;
            }
            let Some((_, lines)) = current.as_mut() else {
                return Err(CatalogError::Parse { line: line_no, msg: "payload line before any header".into() });
            };
            let (key, value) = trimmed
                .split_once(" : ")
                .ok_or_else(|| CatalogError::Parse { line: line_no, msg: format!("expected `key : value`, got `{trimmed}`") })?;
            lines.push((line_no, key.trim().to_string(), value.trim().to_string()));
        }
        if let Some((entry, lines)) = current.take() {
            entries.push(finish_entry(entry, lines)?);
        }
        let mut index = HashMap::new();
        for (i, e) in entries.iter().enumerate() {
            if index.insert(e.id.clone(), i).is_some() {
                return Err(CatalogError::Parse { line: e.line, msg: format!("duplicate id `{}`", e.id) });
            }
        }
        let cat = Catalog { entries, index };
        cat.check_references()?;
        Ok(cat)
    }

    /// Every `@id` must exist, name a closed form, and not loop back.
    fn check_references(&self) -> Result<(), CatalogError> {
        fn visit(cat: &Catalog, id: &str, stack: &mut Vec<String>, line: usize) -> Result<(), CatalogError> {
            if stack.iter().any(|s| s == id) {
                return Err(CatalogError::Parse { line, msg: format!("reference cycle through `{id}`") });
            }
            let entry = cat.get(id).map_err(|_| CatalogError::Parse { line, msg: format!("unknown reference `@{id}`") })?;
            let expr = entry.expr().ok_or_else(|| CatalogError::Parse { line, msg: format!("`@{id}` refers to a reference series") })?;
            stack.push(id.to_string());
            for r in expr.references() {
                visit(cat, &r, stack, entry.line)?;
            }
            stack.pop();
            Ok(())
        }
        for e in &self.entries {
            if e.kind != EntryKind::ReferenceSeries {
                visit(self, &e.id, &mut Vec::new(), e.line)?;
            }
        }
        Ok(())
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.id.as_str())
    }

    pub fn get(&self, id: &str) -> Result<&CatalogEntry, CatalogError> {
        self.index.get(id).map(|&i| &self.entries[i]).ok_or_else(|| CatalogError::UnknownId(id.to_string()))
    }

    /// Expands a closed-form entry; the body has exactly `order` as order.
    pub fn expand_entry(&self, id: &str, order: usize) -> Result<PrefactoredSeries<Rational>, CatalogError> {
        let entry = self.get(id)?;
        let expr = entry.expr().ok_or(CatalogError::WrongKind { id: id.to_string(), kind: entry.kind.name() })?;
        Ok(eval_alg_expr_with(&expr, order, self)?)
    }

    /// Expands a closed form with a nonnegative integer t-exponent as a plain
    /// series known through `t^order`.
    pub fn expand_series(&self, id: &str, order: usize) -> Result<Series<Rational>, CatalogError> {
        let probe = self.expand_entry(id, 0)?;
        let a = probe
            .integer_a()
            .ok_or_else(|| CatalogError::NotPlainSeries { id: id.to_string(), a: crate::rational::fmt_rational(&probe.a) })?;
        if a > order {
            return Ok(Series::zero(order));
        }
        let full = self.expand_entry(id, order - a)?;
        Ok(full.to_series()?.truncate(order))
    }

    /// Printed coefficients of a reference entry, through `t^order`.
    pub fn reference_series(&self, id: &str, order: usize) -> Result<Series<ParamPoly>, CatalogError> {
        let entry = self.get(id)?;
        let Payload::Reference(r) = &entry.payload else {
            return Err(CatalogError::WrongKind { id: id.to_string(), kind: entry.kind.name() });
        };
        if order > r.printed_order() {
            return Err(CatalogError::OrderExceedsPrinted { id: id.to_string(), requested: order, printed: r.printed_order() });
        }
        Ok(Series::new(r.coeffs[..=order].to_vec()))
    }

    /// The full printed reference series.
    pub fn reference_full(&self, id: &str) -> Result<Series<ParamPoly>, CatalogError> {
        let entry = self.get(id)?;
        let Payload::Reference(r) = &entry.payload else {
            return Err(CatalogError::WrongKind { id: id.to_string(), kind: entry.kind.name() });
        };
        Ok(Series::new(r.coeffs.clone()))
    }
}

impl RefResolver for Catalog {
    fn resolve(&self, id: &str, order: usize) -> Result<PrefactoredSeries<Rational>, SpecialError> {
        let entry = self.get(id).map_err(|_| SpecialError::UnresolvedRef(id.to_string()))?;
        let expr = entry.expr().ok_or_else(|| SpecialError::UnresolvedRef(id.to_string()))?;
        eval_alg_expr_with(&expr, order, self)
    }
}

fn parse_header(header: &str, line: usize) -> Result<CatalogEntry, CatalogError> {
    let parts: Vec<&str> = header.split('|').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(CatalogError::Parse { line, msg: "header must be `@ id | kind | parameter | label`".into() });
    }
    let kind = EntryKind::parse(parts[1]).ok_or_else(|| CatalogError::Parse { line, msg: format!("unknown kind `{}`", parts[1]) })?;
    let param = match parts[2] {
        "-" | "" => None,
        name => Some(Param::from_name(name).ok_or_else(|| CatalogError::Parse { line, msg: format!("unknown parameter `{name}`") })?),
    };
    let payload = match kind {
        EntryKind::EkPolynomial => Payload::Ek(EkPolynomial { terms: Vec::new(), prefactor: (qi(0), qi(0), qi(1)), homogeneous: false }),
        EntryKind::AlgExpr => Payload::Expr(AlgExpr::Const(qi(0))),
        EntryKind::ReferenceSeries => Payload::Reference(ReferenceSeries { param, coeffs: Vec::new() }),
    };
    Ok(CatalogEntry { id: parts[0].to_string(), kind, param, label: parts[3].to_string(), payload, notes: Vec::new(), line })
}

fn finish_entry(mut entry: CatalogEntry, lines: Vec<(usize, String, String)>) -> Result<CatalogEntry, CatalogError> {
    let perr = |line: usize, msg: String| CatalogError::Parse { line, msg };
    let mut saw_expr = false;
    for (line, key, value) in lines {
        if key == "note" {
            entry.notes.push(value);
            continue;
        }
        match &mut entry.payload {
            Payload::Ek(p) => {
                if key == "homogeneous" {
                    p.homogeneous = value == "yes";
                } else if key == "prefactor" {
                    let v: Vec<&str> = value.split(',').map(str::trim).collect();
                    if v.len() != 3 {
                        return Err(perr(line, "prefactor needs `a, b, c`".into()));
                    }
                    let r = |s: &str| parse_rational(s).map_err(|e| perr(line, e.to_string()));
                    p.prefactor = (r(v[0])?, r(v[1])?, r(v[2])?);
                } else if let Some((i, j)) = parse_ek_key(&key) {
                    let coeff = AlgExpr::parse(&value).map_err(|e| perr(line, e.to_string()))?;
                    p.terms.push(EkTerm { e_degree: i, k_degree: j, coeff });
                } else {
                    return Err(perr(line, format!("unexpected key `{key}` in ek_polynomial")));
                }
            }
            Payload::Expr(e) => {
                if key != "expr" {
                    return Err(perr(line, format!("unexpected key `{key}` in alg_expr")));
                }
                *e = AlgExpr::parse(&value).map_err(|err| perr(line, err.to_string()))?;
                saw_expr = true;
            }
            Payload::Reference(r) => {
                let n: usize = key
                    .strip_prefix("t^")
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| perr(line, format!("expected `t^n`, got `{key}`")))?;
                if n != r.coeffs.len() {
                    return Err(perr(line, format!("coefficients must be consecutive from t^0; got t^{n}")));
                }
                let c = ParamPoly::parse(&value, r.param).map_err(|e| perr(line, e))?;
                if r.param.is_none() && !c.is_constant() {
                    return Err(perr(line, "parameter-free entry has a non-constant coefficient".into()));
                }
                r.coeffs.push(c);
            }
        }
    }
    match &entry.payload {
        Payload::Ek(p) if p.terms.is_empty() => return Err(perr(entry.line, format!("`{}` has no terms", entry.id))),
        Payload::Ek(p) if p.homogeneous && !p.is_homogeneous() => {
            return Err(perr(entry.line, format!("`{}` is flagged homogeneous but is not", entry.id)))
        }
        Payload::Expr(_) if !saw_expr => return Err(perr(entry.line, format!("`{}` has no expr line", entry.id))),
        Payload::Reference(r) if r.coeffs.is_empty() => return Err(perr(entry.line, format!("`{}` has no coefficients", entry.id))),
        _ => {}
    }
    Ok(entry)
}

fn parse_ek_key(key: &str) -> Option<(u32, u32)> {
    let (e, k) = key.split_once(' ')?;
    let i = e.strip_prefix("E^")?.parse().ok()?;
    let j = k.trim().strip_prefix("K^")?.parse().ok()?;
    Some((i, j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::special::elliptic_e;

    #[test]
    fn embedded_catalog_loads() {
        let c = Catalog::embedded();
        assert!(c.get("C05_lambda").is_ok());
        assert!(matches!(c.get("nope"), Err(CatalogError::UnknownId(_))));
    }

    #[test]
    fn homogeneity_flags_hold() {
        for e in Catalog::embedded().entries() {
            if let Payload::Ek(p) = &e.payload {
                if p.homogeneous {
                    assert!(p.is_homogeneous(), "{}", e.id);
                }
            }
        }
    }

    #[test]
    fn low_temperature_c11_is_e() {
        let c = Catalog::embedded();
        assert_eq!(c.expand_series("C11_lowT", 20).unwrap(), elliptic_e(20));
    }

    #[test]
    fn reference_order_guard() {
        let c = Catalog::embedded();
        let s = c.reference_series("C05_lambda", 6).unwrap();
        assert_eq!(s.coeff(6).to_text(), "-1463/65536 - 25/1048576*lambda_sq");
        assert!(matches!(c.reference_series("C05_lambda", 9), Err(CatalogError::OrderExceedsPrinted { .. })));
        assert!(matches!(c.reference_series("C05", 3), Err(CatalogError::WrongKind { .. })));
    }

    #[test]
    fn f1_alpha0_leading_terms() {
        let s = Catalog::embedded().expand_series("f1_05_alpha0", 4).unwrap();
        assert_eq!(s.coeffs(), &[qi(0), q(3, 2), q(-9, 16), q(-15, 128), q(-105, 2048)]);
    }

    #[test]
    fn malformed_records_are_rejected() {
        assert!(Catalog::parse("@ x | alg_expr | - | a\n  expr : @y\n").is_err());
        assert!(Catalog::parse("@ x | alg_expr | - | a\n  expr : @x\n").is_err());
        assert!(Catalog::parse("@ x | reference_series | - | a\n  t^1 : 3\n").is_err());
        assert!(Catalog::parse("@ x | ek_polynomial | - | a\n  homogeneous : yes\n  E^1 K^0 : 1\n  E^0 K^0 : 1\n").is_err());
    }
}
