//! Per-component kernels, generated spans and certificates shared by every
//! algebra. A component is addressed by a key (a vector of naturals); callers
//! decide what the key means.

use std::collections::HashMap;

use serde_json::{json, Value};

use crate::lincomb::{LinComb, WordIndex};
use crate::linalg::{is_independent, kernel_basis, span_compare, Echelon, SparseVector, SpanCertificate};

pub type Key = Vec<u32>;

pub fn key_total(k: &[u32]) -> u32 {
    k.iter().sum()
}

pub fn key_sub(a: &[u32], b: &[u32]) -> Option<Key> {
    a.iter().zip(b).map(|(x, y)| x.checked_sub(*y)).collect()
}

pub fn key_add(a: &[u32], b: &[u32]) -> Key {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn unit_key(len: usize, i: usize) -> Key {
    let mut k = vec![0; len];
    k[i] = 1;
    k
}

/// All vectors of length `len` with entries summing to `total`, in
/// lexicographic order.
pub fn compositions(len: usize, total: u32) -> Vec<Key> {
    fn go(len: usize, total: u32, cur: &mut Key, out: &mut Vec<Key>) {
        if cur.len() + 1 == len {
            cur.push(total);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for v in (0..=total).rev() {
            cur.push(v);
            go(len, total - v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if len == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(len, total, &mut Vec::with_capacity(len), &mut out);
    out.sort();
    out
}

/// Keys of total degree in `lo..=hi`, sorted lexicographically.
pub fn keys_between(len: usize, lo: u32, hi: u32) -> Vec<Key> {
    let mut out: Vec<Key> = (lo..=hi).flat_map(|t| compositions(len, t)).collect();
    out.sort();
    out
}

/// Exponent vectors over variables with positive weights whose weighted sum
/// is exactly `total`.
pub fn weighted_exponents(weights: &[u32], total: u32) -> Vec<Key> {
    fn go(w: &[u32], total: u32, cur: &mut Key, out: &mut Vec<Key>) {
        match w.split_first() {
            None => {
                if total == 0 {
                    out.push(cur.clone());
                }
            }
            Some((&first, rest)) => {
                for e in 0..=total / first {
                    cur.push(e);
                    go(rest, total - e * first, cur, out);
                    cur.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    go(weights, total, &mut Vec::new(), &mut out);
    out
}

/// Basis of the kernel of `image` restricted to span(`basis`).
pub fn kernel_of<W, V, F>(basis: &[W], image: F) -> Vec<LinComb<W>>
where
    W: Ord + Clone,
    V: Ord + Clone,
    F: Fn(&W) -> LinComb<V>,
{
    let mut target: WordIndex<V> = WordIndex::new();
    let mut rows: Vec<Vec<(usize, crate::linalg::Scalar)>> = Vec::new();
    for (j, w) in basis.iter().enumerate() {
        for (v, c) in image(w).iter() {
            let t = target.index(v);
            if t == rows.len() {
                rows.push(Vec::new());
            }
            rows[t].push((j, c.clone()));
        }
    }
    let rows: Vec<SparseVector> = rows.into_iter().map(SparseVector::from_pairs).collect();
    let src = WordIndex::from_words(basis.iter().cloned());
    kernel_basis(&rows, basis.len()).iter().map(|v| src.element(v)).collect()
}

/// Keeps a maximal independent prefix-greedy subset.
pub fn independent_subset<W: Ord + Clone>(elems: Vec<LinComb<W>>) -> Vec<LinComb<W>> {
    let mut ix = WordIndex::new();
    let mut e = Echelon::new();
    elems.into_iter().filter(|x| e.insert(&ix.vector(x))).collect()
}

/// Spans of a set of generators acting on seed elements, memoised per key:
/// `S(k) = seeds(k) + sum over generators g with key(g) <= k of g . S(k - key(g))`.
///
/// With the unit as the only seed in key 0 and multiplication as the action
/// this is the subalgebra generated; with module generators as seeds it is the
/// submodule generated.
pub struct Closure<W: Ord, G, S, A> {
    gens: Vec<(Key, G)>,
    seeds: S,
    act: A,
    memo: HashMap<Key, Vec<LinComb<W>>>,
}

impl<W, G, S, A> Closure<W, G, S, A>
where
    W: Ord + Clone,
    S: Fn(&Key) -> Vec<LinComb<W>>,
    A: Fn(&G, &LinComb<W>) -> LinComb<W>,
{
    pub fn new(gens: Vec<(Key, G)>, seeds: S, act: A) -> Self {
        assert!(gens.iter().all(|(k, _)| key_total(k) > 0), "generators of degree zero");
        Self { gens, seeds, act, memo: HashMap::new() }
    }

    pub fn span(&mut self, key: &Key) -> Vec<LinComb<W>> {
        if let Some(v) = self.memo.get(key) {
            return v.clone();
        }
        let mut elems = (self.seeds)(key);
        for gi in 0..self.gens.len() {
            let Some(rest) = key_sub(key, &self.gens[gi].0) else { continue };
            let sub = self.span(&rest);
            let g = &self.gens[gi].1;
            elems.extend(sub.iter().map(|s| (self.act)(g, s)).filter(|e| !e.is_zero()));
        }
        let out = independent_subset(elems);
        self.memo.insert(key.clone(), out.clone());
        out
    }
}

/// Outcome of checking one component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentCertificate {
    pub key: Key,
    /// Which piece of the algebra the component belongs to (e.g. "B3").
    pub label: String,
    pub dim_component: usize,
    pub dim_kernel: usize,
    pub claimed: usize,
    /// Claimed elements are linearly independent; `None` when not asked.
    pub independent: Option<bool>,
    /// Claimed elements are all annihilated by the derivation.
    pub constants: bool,
    /// A = claimed/generated span, B = computed kernel.
    pub span: SpanCertificate,
}

impl ComponentCertificate {
    pub fn ok(&self) -> bool {
        self.span.is_equal() && self.constants && self.independent.unwrap_or(true)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "key": self.key,
            "label": self.label,
            "dim_component": self.dim_component,
            "dim_kernel": self.dim_kernel,
            "claimed": self.claimed,
            "independent": self.independent,
            "constants": self.constants,
            "span": self.span.to_json(),
            "ok": self.ok(),
        })
    }
}

/// Compares the span of `claimed` with `kernel` inside the component with
/// the given basis. Words outside the basis extend the ambient space and so
/// can never be matched by kernel vectors.
pub fn compare_in_component<W: Ord + Clone>(
    key: &Key,
    label: &str,
    basis: &[W],
    kernel: &[LinComb<W>],
    claimed: &[LinComb<W>],
    check_independent: bool,
    constants: bool,
) -> ComponentCertificate {
    let mut ix = WordIndex::from_words(basis.iter().cloned());
    let k: Vec<SparseVector> = kernel.iter().map(|e| ix.vector(e)).collect();
    let c: Vec<SparseVector> = claimed.iter().map(|e| ix.vector(e)).collect();
    ComponentCertificate {
        key: key.clone(),
        label: label.to_string(),
        dim_component: basis.len(),
        dim_kernel: kernel.len(),
        claimed: claimed.len(),
        independent: check_independent.then(|| is_independent(&c)),
        constants,
        span: span_compare(&c, &k),
    }
}

pub fn all_ok(certs: &[ComponentCertificate]) -> bool {
    certs.iter().all(ComponentCertificate::ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_counts() {
        assert_eq!(compositions(3, 2).len(), 6);
        assert_eq!(compositions(1, 4), vec![vec![4]]);
        assert_eq!(compositions(0, 0), vec![Vec::<u32>::new()]);
        assert!(compositions(0, 1).is_empty());
        assert_eq!(keys_between(2, 0, 2).len(), 6);
    }

    #[test]
    fn weighted_exponents_respect_weights() {
        let v = weighted_exponents(&[1, 2], 4);
        assert_eq!(v, vec![vec![0, 2], vec![2, 1], vec![4, 0]]);
    }

    #[test]
    fn closure_of_a_single_variable() {
        // words are exponents of one variable; the generator multiplies by it
        let mut c = Closure::new(
            vec![(vec![1], ())],
            |k: &Key| if k[0] == 0 { vec![LinComb::word(0u32)] } else { vec![] },
            |_: &(), e: &LinComb<u32>| e.map_words(|w| w + 1),
        );
        assert_eq!(c.span(&vec![3]), vec![LinComb::word(3u32)]);
    }
}
