//! Element JSON for every algebra. Generator indices in files are 1-based.

use std::path::Path;

use nowicki_core::assoc::{self, AssocElement};
use nowicki_core::commutative::{Monomial, PolyElement};
use nowicki_core::grassmann::{self, GrassElement, GrassWord};
use nowicki_core::lie::{self, LieElement};
use nowicki_core::linalg::{format_scalar, parse_scalar, Scalar};
use nowicki_core::poisson::{self, PoissonElement};
use serde_json::{json, Value};

use crate::{Algebra, CliError};

#[derive(Clone, Debug, PartialEq)]
pub enum Element {
    Poly { d: usize, f: PolyElement },
    Lie { n: usize, e: LieElement },
    Assoc { d: usize, e: AssocElement },
    Grassmann { d: usize, e: GrassElement },
    Poisson { n: usize, e: PoissonElement },
}

impl Element {
    pub fn algebra(&self) -> Algebra {
        match self {
            Element::Poly { .. } => Algebra::Poly,
            Element::Lie { .. } => Algebra::Lie,
            Element::Assoc { .. } => Algebra::Assoc,
            Element::Grassmann { .. } => Algebra::Grassmann,
            Element::Poisson { .. } => Algebra::Poisson,
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            Element::Poly { d, .. } | Element::Assoc { d, .. } | Element::Grassmann { d, .. } => *d,
            Element::Lie { n, .. } | Element::Poisson { n, .. } => *n,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Element::Poly { d, f } => poly_json(*d, f),
            Element::Lie { n, e } => {
                let terms: Vec<Value> = e
                    .iter()
                    .map(|(w, c)| json!({"c": format_scalar(c), "w": plus_one(&w.0)}))
                    .collect();
                json!({"algebra": "lie", "n": n, "terms": terms})
            }
            Element::Assoc { d, e } => {
                let terms: Vec<Value> = e
                    .iter()
                    .map(|(w, c)| {
                        json!({"c": format_scalar(c), "prefix": w.prefix, "bracket": w.bracket.as_deref().map(plus_one).unwrap_or_default()})
                    })
                    .collect();
                json!({"algebra": "assoc", "d": d, "terms": terms})
            }
            Element::Grassmann { d, e } => {
                let terms: Vec<Value> = e
                    .iter()
                    .map(|(w, c)| json!({"c": format_scalar(c), "prefix": w.prefix, "chain": plus_one(&w.chain)}))
                    .collect();
                json!({"algebra": "grassmann", "d": d, "terms": terms})
            }
            Element::Poisson { n, e } => poisson::to_json(*n, e),
        }
    }

    pub fn render(&self) -> String {
        match self {
            Element::Poly { f, .. } => f.to_string(),
            Element::Lie { n, e } => lie::Rendered(e, *n).to_string(),
            Element::Assoc { e, .. } => assoc::Rendered(e).to_string(),
            Element::Grassmann { e, .. } => grassmann::Rendered(e).to_string(),
            Element::Poisson { n, e } => poisson::Rendered(e, *n).to_string(),
        }
    }
}

fn plus_one(v: &[u32]) -> Vec<u32> {
    v.iter().map(|l| l + 1).collect()
}

pub fn poly_json(d: usize, f: &PolyElement) -> Value {
    let terms: Vec<Value> = f.terms().iter().map(|(m, c)| json!({"c": format_scalar(c), "e": m.0})).collect();
    json!({"algebra": "poly", "vars": {"x": d, "y": d}, "terms": terms})
}

fn schema(field: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Input(format!("{}: {}", field.into(), message.into()))
}

fn get_usize(v: &Value, field: &str) -> Result<usize, CliError> {
    v.get(field).and_then(Value::as_u64).map(|x| x as usize).ok_or_else(|| schema(field, "missing or not a natural number"))
}

fn terms(v: &Value) -> Result<&Vec<Value>, CliError> {
    v.get("terms").and_then(Value::as_array).ok_or_else(|| schema("terms", "missing array"))
}

fn coeff(t: &Value, p: usize) -> Result<Scalar, CliError> {
    let c = t.get("c").and_then(Value::as_str).ok_or_else(|| schema(format!("terms[{p}].c"), "missing string"))?;
    parse_scalar(c).map_err(|e| schema(format!("terms[{p}].c"), e.to_string()))
}

fn indices(t: &Value, p: usize, f: &str, max: usize, required: bool) -> Result<Vec<u32>, CliError> {
    let field = format!("terms[{p}].{f}");
    let Some(a) = t.get(f) else {
        return if required { Err(schema(field, "missing array")) } else { Ok(Vec::new()) };
    };
    let a = a.as_array().ok_or_else(|| schema(&field, "not an array"))?;
    a.iter()
        .map(|x| match x.as_u64() {
            Some(i) if i >= 1 && i as usize <= max => Ok(i as u32 - 1),
            _ => Err(schema(&field, format!("index outside 1..={max}"))),
        })
        .collect()
}

fn exponents(t: &Value, p: usize, f: &str, len: usize) -> Result<Vec<u32>, CliError> {
    let field = format!("terms[{p}].{f}");
    let a = t.get(f).and_then(Value::as_array).ok_or_else(|| schema(&field, "missing array"))?;
    if a.len() != len {
        return Err(schema(&field, format!("expected {len} exponents, got {}", a.len())));
    }
    a.iter()
        .map(|x| x.as_u64().map(|e| e as u32).ok_or_else(|| schema(&field, "exponent is not a natural number")))
        .collect()
}

/// Parses an element of any algebra; the result is normalized.
pub fn parse_element(v: &Value) -> Result<Element, CliError> {
    let alg = v.get("algebra").and_then(Value::as_str).ok_or_else(|| schema("algebra", "missing string"))?;
    match alg {
        "poly" => {
            let vars = v.get("vars").ok_or_else(|| schema("vars", "missing"))?;
            let (dx, dy) = (get_usize(vars, "x")?, get_usize(vars, "y")?);
            if dx != dy {
                return Err(schema("vars", "x and y counts differ"));
            }
            let d = dx;
            let mut f = PolyElement::zero(2 * d);
            for (p, t) in terms(v)?.iter().enumerate() {
                let m = Monomial(exponents(t, p, "e", 2 * d)?);
                f = f.add(&PolyElement::monomial(m).scale(&coeff(t, p)?));
            }
            Ok(Element::Poly { d, f })
        }
        "lie" => {
            let n = get_usize(v, "n")?;
            let mut e = LieElement::zero();
            for (p, t) in terms(v)?.iter().enumerate() {
                let w = indices(t, p, "w", 2 * n, true)?;
                if w.is_empty() {
                    return Err(schema(format!("terms[{p}].w"), "empty word"));
                }
                e.add_scaled(&coeff(t, p)?, &lie::normalize_letters(&w));
            }
            Ok(Element::Lie { n, e })
        }
        "assoc" => {
            let d = get_usize(v, "d")?;
            let mut e = AssocElement::zero();
            for (p, t) in terms(v)?.iter().enumerate() {
                let prefix = exponents(t, p, "prefix", 2 * d)?;
                let br = indices(t, p, "bracket", 2 * d, false)?;
                if br.len() == 1 {
                    return Err(schema(format!("terms[{p}].bracket"), "a commutator needs at least two letters"));
                }
                let letters: Vec<u32> = prefix
                    .iter()
                    .enumerate()
                    .flat_map(|(l, &k)| std::iter::repeat(l as u32).take(k as usize))
                    .collect();
                let mut w = assoc::from_letters(d, &letters);
                if !br.is_empty() {
                    w = assoc::mul(&w, &assoc::commutator_of_letters(d, &br));
                }
                e.add_scaled(&coeff(t, p)?, &w);
            }
            Ok(Element::Assoc { d, e })
        }
        "grassmann" => {
            let d = get_usize(v, "d")?;
            let mut e = GrassElement::zero();
            for (p, t) in terms(v)?.iter().enumerate() {
                let prefix = exponents(t, p, "prefix", 2 * d)?;
                let chain = indices(t, p, "chain", 2 * d, false)?;
                if chain.len() % 2 == 1 {
                    return Err(schema(format!("terms[{p}].chain"), "odd length"));
                }
                let mut w = GrassElement::word(GrassWord { prefix, chain: vec![] });
                for c in chain.chunks(2) {
                    let br = grassmann::commutator(&grassmann::letter(d, c[0]), &grassmann::letter(d, c[1]));
                    w = grassmann::mul(&w, &br);
                }
                e.add_scaled(&coeff(t, p)?, &w);
            }
            Ok(Element::Grassmann { d, e })
        }
        "poisson" => {
            let (n, e) = poisson::from_json(v).map_err(|e| CliError::Input(e.to_string()))?;
            Ok(Element::Poisson { n, e })
        }
        other => Err(schema("algebra", format!("unknown algebra {other:?}"))),
    }
}

/// Reads and parses an element file. JSON syntax errors carry line and
/// column; schema errors name the offending field.
pub fn load_element(path: &Path) -> Result<Element, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| {
        CliError::Input(format!("{}: line {} column {}: {e}", path.display(), e.line(), e.column()))
    })?;
    parse_element(&v).map_err(|e| match e {
        CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
        other => other,
    })
}
