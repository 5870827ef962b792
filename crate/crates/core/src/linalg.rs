//! Exact sparse linear algebra over the rationals.
//!
//! Column indices are owned by the caller; nothing here knows what a
//! coordinate means.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::Error;

/// Exact rational scalar. `BigRational` keeps itself reduced with a positive
/// denominator, so structural equality is value equality.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

/// Always `num/den`, including integers (`3/1`).
pub fn format_scalar(s: &Scalar) -> String {
    format!("{}/{}", s.numer(), s.denom())
}

/// Accepts `n` or `n/d` with optional sign and surrounding whitespace.
pub fn parse_scalar(s: &str) -> Result<Scalar, Error> {
    let bad = || Error::Scalar(s.to_string());
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Scalar::new(n, d))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVector {
    entries: Vec<(usize, Scalar)>,
}

impl SparseVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit(col: usize) -> Self {
        Self { entries: vec![(col, Scalar::one())] }
    }

    /// Sorts, merges duplicate columns and drops zeros.
    pub fn from_pairs<I: IntoIterator<Item = (usize, Scalar)>>(pairs: I) -> Self {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (c, v) in pairs {
            *acc.entry(c).or_insert_with(Scalar::zero) += v;
        }
        Self { entries: acc.into_iter().filter(|(_, v)| !v.is_zero()).collect() }
    }

    pub fn from_dense(values: &[Scalar]) -> Self {
        Self {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        }
    }

    pub fn from_i64(values: &[i64]) -> Self {
        Self::from_dense(&values.iter().map(|&v| int(v)).collect::<Vec<_>>())
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn leading(&self) -> Option<(usize, &Scalar)> {
        self.entries.first().map(|(c, v)| (*c, v))
    }

    pub fn get(&self, col: usize) -> Scalar {
        match self.entries.binary_search_by_key(&col, |(c, _)| *c) {
            Ok(i) => self.entries[i].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    /// One past the largest stored column.
    pub fn support_end(&self) -> usize {
        self.entries.last().map_or(0, |(c, _)| c + 1)
    }

    pub fn to_dense(&self, dim: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); dim];
        for (c, v) in &self.entries {
            out[*c] = v.clone();
        }
        out
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self { entries: self.entries.iter().map(|(c, v)| (*c, v * k)).collect() }
    }

    /// `self + k * other`, merging in one pass.
    pub fn add_scaled(&self, k: &Scalar, other: &Self) -> Self {
        if k.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.entries, &other.entries);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, &b[j].1 * k));
                j += 1;
            } else {
                let v = &a[i].1 + &b[j].1 * k;
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        Self { entries: out }
    }

    pub fn dot(&self, other: &Self) -> Scalar {
        let mut acc = Scalar::zero();
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.entries, &other.entries);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += &a[i].1 * &b[j].1;
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.entries
                .iter()
                .map(|(c, v)| json!([c, format_scalar(v)]))
                .collect(),
        )
    }
}

impl fmt::Display for SparseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, (c, v)) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}:{v}")?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub rank: usize,
    /// Nonzero reduced rows, sorted by pivot column; each pivot entry is 1.
    pub rows: Vec<SparseVector>,
    pub pivots: Vec<usize>,
}

/// Incremental echelon basis. Rows are kept fully reduced against each
/// other, so the basis is always in reduced row echelon form.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, SparseVector>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Residue of `v` after eliminating every pivot column.
    pub fn reduce(&self, v: &SparseVector) -> SparseVector {
        let mut cur = v.clone();
        // Only columns at or after the current position can still hit a pivot,
        // and reduced pivot rows never reintroduce other pivot columns.
        let mut from = 0usize;
        loop {
            let hit = cur
                .entries
                .iter()
                .filter(|(c, _)| *c >= from)
                .find(|(c, _)| self.rows.contains_key(c))
                .map(|(c, x)| (*c, x.clone()));
            match hit {
                None => return cur,
                Some((c, x)) => {
                    cur = cur.add_scaled(&-x, &self.rows[&c]);
                    from = c + 1;
                }
            }
        }
    }

    pub fn contains(&self, v: &SparseVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Returns true when `v` enlarged the span.
    pub fn insert(&mut self, v: &SparseVector) -> bool {
        let r = self.reduce(v);
        let Some((p, lead)) = r.leading() else {
            return false;
        };
        let r = r.scale(&lead.recip());
        for row in self.rows.values_mut() {
            let x = row.get(p);
            if !x.is_zero() {
                *row = row.add_scaled(&-x, &r);
            }
        }
        self.rows.insert(p, r);
        true
    }

    pub fn into_rref(self) -> Rref {
        let pivots: Vec<usize> = self.rows.keys().copied().collect();
        let rows: Vec<SparseVector> = self.rows.into_values().collect();
        Rref { rank: rows.len(), rows, pivots }
    }

    pub fn pivot_rows(&self) -> impl Iterator<Item = (&usize, &SparseVector)> {
        self.rows.iter()
    }
}

/// Reduced row echelon form. Rows are consumed in index order; within a
/// column the earliest row reaching it becomes the pivot row.
pub fn rref(rows: &[SparseVector]) -> Rref {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.into_rref()
}

pub fn rank(rows: &[SparseVector]) -> usize {
    rref(rows).rank
}

/// Null space of the matrix whose rows are `rows`, acting on `ambient`
/// coordinates. One vector per free column, with a 1 in that column.
pub fn kernel_basis(rows: &[SparseVector], ambient: usize) -> Vec<SparseVector> {
    let r = rref(rows);
    debug_assert!(r.pivots.iter().all(|&p| p < ambient));
    let pivot_set: std::collections::BTreeSet<usize> = r.pivots.iter().copied().collect();
    (0..ambient)
        .filter(|c| !pivot_set.contains(c))
        .map(|free| {
            let mut pairs = vec![(free, Scalar::one())];
            for (p, row) in r.pivots.iter().zip(&r.rows) {
                let x = row.get(free);
                if !x.is_zero() {
                    pairs.push((*p, -x));
                }
            }
            SparseVector::from_pairs(pairs)
        })
        .collect()
}

pub fn is_independent(vs: &[SparseVector]) -> bool {
    rank(vs) == vs.len()
}

/// Matrix (given by rows) times a column vector.
pub fn apply_rows(rows: &[SparseVector], v: &SparseVector) -> SparseVector {
    SparseVector::from_pairs(rows.iter().enumerate().map(|(i, r)| (i, r.dot(v))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Equal,
    ASubsetOfB,
    BSubsetOfA,
    Incomparable,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Equal => "equal",
            Verdict::ASubsetOfB => "A-subset-of-B",
            Verdict::BSubsetOfA => "B-subset-of-A",
            Verdict::Incomparable => "incomparable",
        }
    }

    pub fn mirrored(self) -> Self {
        match self {
            Verdict::ASubsetOfB => Verdict::BSubsetOfA,
            Verdict::BSubsetOfA => Verdict::ASubsetOfB,
            v => v,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanCertificate {
    pub verdict: Verdict,
    pub rank_a: usize,
    pub rank_b: usize,
    pub rank_union: usize,
    /// A vector lying in exactly one of the two spans, when they differ.
    pub witness: Option<SparseVector>,
}

impl SpanCertificate {
    pub fn is_equal(&self) -> bool {
        self.verdict == Verdict::Equal
    }

    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict.as_str(),
            "rank_a": self.rank_a,
            "rank_b": self.rank_b,
            "rank_union": self.rank_union,
            "witness": self.witness.as_ref().map(|w| w.to_json()),
        })
    }
}

fn first_outside(basis: &Echelon, vs: &[SparseVector]) -> Option<SparseVector> {
    vs.iter().find(|v| !basis.contains(v)).cloned()
}

pub fn span_compare(a: &[SparseVector], b: &[SparseVector]) -> SpanCertificate {
    let mut ea = Echelon::new();
    a.iter().for_each(|v| {
        ea.insert(v);
    });
    let mut eb = Echelon::new();
    b.iter().for_each(|v| {
        eb.insert(v);
    });
    let (rank_a, rank_b) = (ea.rank(), eb.rank());
    let mut eu = ea.clone();
    b.iter().for_each(|v| {
        eu.insert(v);
    });
    let rank_union = eu.rank();
    let a_in_b = rank_b == rank_union;
    let b_in_a = rank_a == rank_union;
    let (verdict, witness) = match (a_in_b, b_in_a) {
        (true, true) => (Verdict::Equal, None),
        (true, false) => (Verdict::ASubsetOfB, first_outside(&ea, b)),
        (false, true) => (Verdict::BSubsetOfA, first_outside(&eb, a)),
        (false, false) => (Verdict::Incomparable, first_outside(&ea, b)),
    };
    SpanCertificate { verdict, rank_a, rank_b, rank_union, witness }
}

/// Coordinates of `v` in terms of `basis` (which must be independent), or
/// `None` when `v` is outside the span.
pub fn coordinates(basis: &[SparseVector], v: &SparseVector) -> Option<Vec<Scalar>> {
    // Track combinations alongside elimination: augment each basis vector with
    // a tag column beyond the ambient support.
    let shift = basis
        .iter()
        .map(SparseVector::support_end)
        .chain(std::iter::once(v.support_end()))
        .max()
        .unwrap_or(0);
    let mut e = Echelon::new();
    for (i, b) in basis.iter().enumerate() {
        let tagged = SparseVector::from_pairs(
            b.entries().iter().cloned().chain(std::iter::once((shift + i, Scalar::one()))),
        );
        e.insert(&tagged);
    }
    let r = e.reduce(v);
    if r.entries().iter().any(|(c, _)| *c < shift) {
        return None;
    }
    // r = v - sum c_i b_i restricted to tags gives -c_i.
    Some((0..basis.len()).map(|i| -r.get(shift + i)).collect())
}
