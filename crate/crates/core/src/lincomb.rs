//! Finite formal linear combinations of basis words.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use crate::linalg::{Scalar, SparseVector};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinComb<W: Ord> {
    terms: BTreeMap<W, Scalar>,
}

impl<W: Ord> Default for LinComb<W> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<W: Ord + Clone> LinComb<W> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn word(w: W) -> Self {
        Self::term(w, Scalar::one())
    }

    pub fn term(w: W, c: Scalar) -> Self {
        let mut s = Self::zero();
        s.add_term(w, c);
        s
    }

    pub fn from_terms<I: IntoIterator<Item = (W, Scalar)>>(it: I) -> Self {
        let mut s = Self::zero();
        for (w, c) in it {
            s.add_term(w, c);
        }
        s
    }

    pub fn add_term(&mut self, w: W, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += k * other`.
    pub fn add_scaled(&mut self, k: &Scalar, other: &Self) {
        if k.is_zero() {
            return;
        }
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c * k);
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.add_scaled(&Scalar::one(), other);
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(w, c)| (w.clone(), c * k)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &W) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&W, &Scalar)> {
        self.terms.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = &W> {
        self.terms.keys()
    }

    /// Linear extension of a map on words.
    pub fn flat_map<V: Ord + Clone, F: FnMut(&W) -> LinComb<V>>(&self, mut f: F) -> LinComb<V> {
        let mut out = LinComb::zero();
        for (w, c) in &self.terms {
            out.add_scaled(c, &f(w));
        }
        out
    }

    pub fn map_words<V: Ord + Clone, F: FnMut(&W) -> V>(&self, mut f: F) -> LinComb<V> {
        LinComb::from_terms(self.terms.iter().map(|(w, c)| (f(w), c.clone())))
    }

    /// Bilinear extension of a product on words.
    pub fn bilinear<U: Ord + Clone, V: Ord + Clone, F: FnMut(&W, &U) -> LinComb<V>>(
        &self,
        other: &LinComb<U>,
        mut f: F,
    ) -> LinComb<V> {
        let mut out = LinComb::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in other.iter() {
                out.add_scaled(&(ca * cb), &f(a, b));
            }
        }
        out
    }

    /// Divides by the coefficient of the leading (smallest) word.
    pub fn monic(&self) -> Self {
        match self.terms.values().next() {
            None => Self::zero(),
            Some(c) => self.scale(&c.recip()),
        }
    }

    pub fn into_terms(self) -> BTreeMap<W, Scalar> {
        self.terms
    }
}

impl<W: Ord + Clone> Add for LinComb<W> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (w, c) in rhs.terms {
            self.add_term(w, c);
        }
        self
    }
}

impl<W: Ord + Clone> Sub for LinComb<W> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (w, c) in rhs.terms {
            self.add_term(w, -c);
        }
        self
    }
}

impl<W: Ord + Clone> Neg for LinComb<W> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { terms: self.terms.into_iter().map(|(w, c)| (w, -c)).collect() }
    }
}

impl<'a, W: Ord + Clone> Add for &'a LinComb<W> {
    type Output = LinComb<W>;
    fn add(self, rhs: Self) -> LinComb<W> {
        self.clone() + rhs.clone()
    }
}

impl<'a, W: Ord + Clone> Sub for &'a LinComb<W> {
    type Output = LinComb<W>;
    fn sub(self, rhs: Self) -> LinComb<W> {
        self.clone() - rhs.clone()
    }
}

/// Assigns coordinates to words in first-seen order.
#[derive(Clone, Debug)]
pub struct WordIndex<W: Ord> {
    pos: BTreeMap<W, usize>,
    words: Vec<W>,
}

impl<W: Ord + Clone> Default for WordIndex<W> {
    fn default() -> Self {
        Self { pos: BTreeMap::new(), words: Vec::new() }
    }
}

impl<W: Ord + Clone> WordIndex<W> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_words<I: IntoIterator<Item = W>>(ws: I) -> Self {
        let mut ix = Self::new();
        for w in ws {
            ix.index(&w);
        }
        ix
    }

    pub fn index(&mut self, w: &W) -> usize {
        if let Some(&i) = self.pos.get(w) {
            return i;
        }
        let i = self.words.len();
        self.pos.insert(w.clone(), i);
        self.words.push(w.clone());
        i
    }

    pub fn get(&self, w: &W) -> Option<usize> {
        self.pos.get(w).copied()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[W] {
        &self.words
    }

    /// Coordinates, extending the index with unseen words.
    pub fn vector(&mut self, e: &LinComb<W>) -> SparseVector {
        SparseVector::from_pairs(e.iter().map(|(w, c)| (self.index(w), c.clone())).collect::<Vec<_>>())
    }

    /// Coordinates against a frozen index; `None` if a word is missing.
    pub fn vector_frozen(&self, e: &LinComb<W>) -> Option<SparseVector> {
        let mut pairs = Vec::with_capacity(e.len());
        for (w, c) in e.iter() {
            pairs.push((self.get(w)?, c.clone()));
        }
        Some(SparseVector::from_pairs(pairs))
    }

    pub fn element(&self, v: &SparseVector) -> LinComb<W> {
        LinComb::from_terms(v.entries().iter().map(|(i, c)| (self.words[*i].clone(), c.clone())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    #[test]
    fn cancellation_removes_terms() {
        let mut a = LinComb::term("x", int(2));
        a.add_term("x", int(-2));
        assert!(a.is_zero());
        let b = LinComb::term("x", int(1)) + LinComb::term("y", int(3));
        assert_eq!((b.clone() - b).len(), 0);
    }

    #[test]
    fn index_round_trip() {
        let e = LinComb::term("b", int(2)) + LinComb::term("a", int(-1));
        let mut ix = WordIndex::new();
        let v = ix.vector(&e);
        assert_eq!(ix.element(&v), e);
        assert_eq!(ix.vector_frozen(&LinComb::word("z")), None);
    }
}
