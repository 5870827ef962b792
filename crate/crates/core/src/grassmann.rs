//! Relatively free algebra of rank 2d in the variety defined by
//! [z_1,z_2,z_3] = 0.
//!
//! Variables are ordered x_1 < y_1 < x_2 < ... < y_d; the 0-based letter of
//! x_i is 2(i-1) and of y_i is 2(i-1)+1. Commutators are central and a
//! product of commutators is antisymmetric in all of its entries, so a normal
//! word is an ordered monomial times one strictly increasing chain.

use std::fmt;

use rayon::prelude::*;

use crate::assoc::AssocTree;
use crate::graded::{compare_in_component, independent_subset, kernel_of, keys_between, Closure, ComponentCertificate, Key};
use crate::lincomb::LinComb;
use crate::linalg::{int, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GrassWord {
    pub prefix: Vec<u32>,
    /// Strictly increasing, even length; read in consecutive pairs.
    pub chain: Vec<u32>,
}

pub type GrassElement = LinComb<GrassWord>;

pub fn x_letter(i: usize) -> u32 {
    (2 * i - 2) as u32
}

pub fn y_letter(i: usize) -> u32 {
    (2 * i - 1) as u32
}

pub fn letter_name(l: u32) -> String {
    let i = l / 2 + 1;
    if l % 2 == 0 {
        format!("x{i}")
    } else {
        format!("y{i}")
    }
}

impl GrassWord {
    pub fn is_normal(&self) -> bool {
        self.chain.len() % 2 == 0 && self.chain.windows(2).all(|w| w[0] < w[1])
    }

    pub fn pair_key(&self) -> Key {
        let d = self.prefix.len() / 2;
        let mut k: Key = (0..d).map(|i| self.prefix[2 * i] + self.prefix[2 * i + 1]).collect();
        for &l in &self.chain {
            k[l as usize / 2] += 1;
        }
        k
    }

    pub fn render(&self) -> String {
        let mut parts: Vec<String> = self
            .prefix
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(l, e)| {
                let n = letter_name(l as u32);
                if *e == 1 {
                    n
                } else {
                    format!("{n}^{e}")
                }
            })
            .collect();
        for p in self.chain.chunks(2) {
            parts.push(format!("[{},{}]", letter_name(p[0]), letter_name(p[1])));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

pub struct Rendered<'a>(pub &'a GrassElement);

impl fmt::Display for Rendered<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            return f.write_str("0");
        }
        let s: Vec<String> = self.0.iter().map(|(w, c)| format!("({c}){}", w.render())).collect();
        f.write_str(&s.join(" + "))
    }
}

/// Sorts a list of chain entries, returning the sign of the permutation, or
/// `None` when an entry repeats.
pub fn sort_chain(entries: &[u32]) -> Option<(Vec<u32>, i64)> {
    let mut v = entries.to_vec();
    let mut sign = 1i64;
    // insertion sort counting transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

fn with_chain(prefix: Vec<u32>, chain: &[u32], c: Scalar) -> GrassElement {
    match sort_chain(chain) {
        None => GrassElement::zero(),
        Some((chain, s)) => LinComb::term(GrassWord { prefix, chain }, c * int(s)),
    }
}

pub fn one(d: usize) -> GrassElement {
    LinComb::word(GrassWord { prefix: vec![0; 2 * d], chain: vec![] })
}

pub fn letter(d: usize, l: u32) -> GrassElement {
    let mut p = vec![0; 2 * d];
    p[l as usize] = 1;
    LinComb::word(GrassWord { prefix: p, chain: vec![] })
}

// M x_l = (M + e_l) + Σ_{b > l} m_b (M − e_b) [b, l]
fn word_times_letter(w: &GrassWord, l: u32) -> GrassElement {
    let mut top = w.prefix.clone();
    top[l as usize] += 1;
    let mut out = LinComb::word(GrassWord { prefix: top, chain: w.chain.clone() });
    for b in l as usize + 1..w.prefix.len() {
        let m = w.prefix[b];
        if m == 0 {
            continue;
        }
        let mut p = w.prefix.clone();
        p[b] -= 1;
        let mut ch = w.chain.clone();
        ch.extend([b as u32, l]);
        out.add_assign(&with_chain(p, &ch, int(m as i64)));
    }
    out
}

fn mul_words(a: &GrassWord, b: &GrassWord) -> GrassElement {
    let mut cur = LinComb::word(a.clone());
    for (l, &e) in b.prefix.iter().enumerate() {
        for _ in 0..e {
            cur = cur.flat_map(|w| word_times_letter(w, l as u32));
        }
    }
    if b.chain.is_empty() {
        return cur;
    }
    cur.flat_map(|w| {
        let mut ch = w.chain.clone();
        ch.extend_from_slice(&b.chain);
        with_chain(w.prefix.clone(), &ch, int(1))
    })
}

pub fn mul(a: &GrassElement, b: &GrassElement) -> GrassElement {
    a.bilinear(b, mul_words)
}

pub fn commutator(a: &GrassElement, b: &GrassElement) -> GrassElement {
    mul(a, b) - mul(b, a)
}

pub fn from_letters(d: usize, letters: &[u32]) -> GrassElement {
    letters.iter().fold(one(d), |acc, &l| mul(&acc, &letter(d, l)))
}

pub fn grass_normalize(d: usize, t: &AssocTree) -> GrassElement {
    match t {
        AssocTree::Gen(l) => letter(d, *l),
        AssocTree::Mul(a, b) => mul(&grass_normalize(d, a), &grass_normalize(d, b)),
        AssocTree::Br(a, b) => commutator(&grass_normalize(d, a), &grass_normalize(d, b)),
    }
}

fn delta_word(w: &GrassWord) -> GrassElement {
    let d = w.prefix.len() / 2;
    let mut out = GrassElement::zero();
    let letters: Vec<u32> = (0..w.prefix.len())
        .flat_map(|l| std::iter::repeat(l as u32).take(w.prefix[l] as usize))
        .collect();
    let chain_word = GrassWord { prefix: vec![0; 2 * d], chain: w.chain.clone() };
    for pos in 0..letters.len() {
        if letters[pos] % 2 == 1 {
            let mut ls = letters.clone();
            ls[pos] -= 1;
            out.add_assign(&mul(&from_letters(d, &ls), &LinComb::word(chain_word.clone())));
        }
    }
    for pos in 0..w.chain.len() {
        if w.chain[pos] % 2 == 1 {
            let mut ch = w.chain.clone();
            ch[pos] -= 1;
            out.add_assign(&with_chain(w.prefix.clone(), &ch, int(1)));
        }
    }
    out
}

pub fn grass_delta(e: &GrassElement) -> GrassElement {
    e.flat_map(delta_word)
}

fn letter_counts(d: usize, key: &[u32]) -> Vec<Vec<u32>> {
    let mut splits: Vec<Vec<u32>> = vec![vec![0; 2 * d]];
    for (i, &k) in key.iter().enumerate() {
        splits = splits
            .into_iter()
            .flat_map(|c| {
                (0..=k).map(move |a| {
                    let mut c = c.clone();
                    c[2 * i] = a;
                    c[2 * i + 1] = k - a;
                    c
                })
            })
            .collect();
    }
    splits
}

/// Normal words with the given pair degrees.
pub fn component_basis(d: usize, key: &[u32]) -> Vec<GrassWord> {
    let mut out = Vec::new();
    for counts in letter_counts(d, key) {
        let present: Vec<u32> = (0..2 * d as u32).filter(|&l| counts[l as usize] > 0).collect();
        for mask in 0u32..(1 << present.len()) {
            if mask.count_ones() % 2 == 1 {
                continue;
            }
            let chain: Vec<u32> =
                present.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &l)| l).collect();
            let mut prefix = counts.clone();
            for &l in &chain {
                prefix[l as usize] -= 1;
            }
            out.push(GrassWord { prefix, chain });
        }
    }
    out.sort();
    out
}

pub fn element_pair_key(e: &GrassElement) -> Option<Key> {
    let mut ks = e.words().map(GrassWord::pair_key);
    let first = ks.next()?;
    ks.all(|k| k == first).then_some(first)
}

/// The generating families X, V, W_s, Z_s.
#[derive(Clone, Debug)]
pub struct GrassFamilies {
    pub d: usize,
    pub x: Vec<GrassElement>,
    pub v: Vec<GrassElement>,
    /// W_0, W_1, ... up to the last nonzero level; each level is reduced to
    /// an independent set per component (the recursion is linear).
    pub w: Vec<Vec<GrassElement>>,
    pub z: Vec<Vec<GrassElement>>,
    /// Candidates that failed the constancy check and were left out.
    pub non_constant: Vec<(String, GrassElement)>,
}

impl GrassFamilies {
    pub fn all(&self) -> impl Iterator<Item = &GrassElement> {
        self.x.iter().chain(&self.v).chain(self.w.iter().flatten()).chain(self.z.iter().flatten())
    }
}

pub fn v_elem(d: usize, i: usize, j: usize) -> GrassElement {
    mul(&letter(d, x_letter(i)), &letter(d, y_letter(j))) - mul(&letter(d, y_letter(i)), &letter(d, x_letter(j)))
}

/// y[x, e] − x[y, e] for one letter y ∈ Y and one letter x ∈ X.
pub fn raise(d: usize, yl: u32, xl: u32, e: &GrassElement) -> GrassElement {
    let (x, y) = (letter(d, xl), letter(d, yl));
    mul(&y, &commutator(&x, e)) - mul(&x, &commutator(&y, e))
}

/// y_a[x_b, e] − x_a[y_b, e], the shape of w_ijk with the bracketed letter
/// replaced by e.
pub fn raise_paired(d: usize, a: usize, b: usize, e: &GrassElement) -> GrassElement {
    let (ya, xa, xb, yb) = (letter(d, y_letter(a)), letter(d, x_letter(a)), letter(d, x_letter(b)), letter(d, y_letter(b)));
    mul(&ya, &commutator(&xb, e)) - mul(&xa, &commutator(&yb, e))
}

/// How W_s and Z_s are produced from the previous level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RaiseReading {
    /// y[x, w] − x[y, w] over all x ∈ X, y ∈ Y; candidates that are not
    /// constants are dropped and reported.
    Literal,
    /// y_a[x_b, w] − x_a[y_b, w] over all a, b; always constants.
    Paired,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GrassOptions {
    pub seeds: SeedRange,
    pub raise: RaiseReading,
}

impl Default for GrassOptions {
    fn default() -> Self {
        Self { seeds: SeedRange::Printed, raise: RaiseReading::Literal }
    }
}

fn reduce_level(elems: Vec<GrassElement>) -> Vec<GrassElement> {
    let mut by_key: std::collections::BTreeMap<Key, Vec<GrassElement>> = Default::default();
    for e in elems.into_iter().filter(|e| !e.is_zero()) {
        by_key.entry(element_pair_key(&e).expect("homogeneous")).or_default().push(e);
    }
    by_key.into_values().flat_map(independent_subset).collect()
}

/// Index ranges for the seeds W_0 and Z_0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeedRange {
    /// w_ijk with i, j <= k; z_ijkl with i <= j <= k <= l.
    Printed,
    /// w_ijk as printed; every z_ijkl.
    FullZ,
    /// every index tuple.
    Full,
}

/// Builds the families, recursing W_s and Z_s over all (y, x) letter pairs
/// until a level vanishes or its degree passes `maxdeg`.
pub fn grass_constant_families(d: usize, maxdeg: Option<u32>) -> GrassFamilies {
    grass_constant_families_with(d, maxdeg, GrassOptions::default())
}

pub fn grass_constant_families_with(d: usize, maxdeg: Option<u32>, opts: GrassOptions) -> GrassFamilies {
    let full_w = opts.seeds == SeedRange::Full;
    let full = matches!(opts.seeds, SeedRange::Full | SeedRange::FullZ);
    let x: Vec<GrassElement> = (1..=d).map(|i| letter(d, x_letter(i))).collect();
    let mut v = Vec::new();
    for i in 1..=d {
        for j in 1..=d {
            v.push(v_elem(d, i, j));
        }
    }
    let mut w0 = Vec::new();
    for k in 1..=d {
        for i in 1..=if full_w { d } else { k } {
            for j in 1..=if full_w { d } else { k } {
                let e = mul(&letter(d, y_letter(i)), &commutator(&letter(d, x_letter(j)), &letter(d, x_letter(k))))
                    - mul(&letter(d, x_letter(i)), &commutator(&letter(d, y_letter(j)), &letter(d, x_letter(k))));
                w0.push(e);
            }
        }
    }
    let mut z0 = Vec::new();
    for i in 1..=d {
        for j in if full { 1 } else { i }..=d {
            for k in if full { 1 } else { j }..=d {
                for l in if full { 1 } else { k }..=d {
                    let vk = v_elem(d, k, l);
                    let e = mul(&letter(d, y_letter(i)), &commutator(&letter(d, x_letter(j)), &vk))
                        - mul(&letter(d, x_letter(i)), &commutator(&letter(d, y_letter(j)), &vk));
                    z0.push(e);
                }
            }
        }
    }
    let cap = maxdeg.unwrap_or(u32::MAX);
    let mut rejected: Vec<(String, GrassElement)> = Vec::new();
    let mut keep = |name: String, cands: Vec<GrassElement>| -> Vec<GrassElement> {
        let mut ok = Vec::new();
        for e in cands.into_iter().filter(|e| !e.is_zero()) {
            if grass_delta(&e).is_zero() {
                ok.push(e);
            } else {
                rejected.push((name.clone(), e));
            }
        }
        reduce_level(ok)
    };
    let mut levels = |name: &str, start: Vec<GrassElement>, base_deg: u32| {
        let mut out = vec![keep(format!("{name}0"), start)];
        let mut deg = base_deg;
        loop {
            deg += 2;
            let last = out.last().unwrap();
            if last.is_empty() || deg > cap {
                break;
            }
            let mut next = Vec::new();
            for e in last {
                for a in 1..=d {
                    for b in 1..=d {
                        next.push(match opts.raise {
                            RaiseReading::Literal => raise(d, y_letter(a), x_letter(b), e),
                            RaiseReading::Paired => raise_paired(d, a, b, e),
                        });
                    }
                }
            }
            let level = keep(format!("{name}{}", out.len()), next);
            out.push(level);
        }
        while out.len() > 1 && out.last().unwrap().is_empty() {
            out.pop();
        }
        out
    };
    let w = levels("W", w0, 3);
    let z = levels("Z", z0, 4);
    GrassFamilies { d, x, v, w, z, non_constant: rejected }
}

/// The subalgebra generated by the families against ker δ, per pair-degree
/// component of total degree 1..=maxdeg.
pub fn verify_grass_theorem(d: usize, maxdeg: u32) -> Vec<ComponentCertificate> {
    verify_grass_theorem_with(d, maxdeg, GrassOptions::default())
}

pub fn verify_grass_theorem_with(d: usize, maxdeg: u32, opts: GrassOptions) -> Vec<ComponentCertificate> {
    let fam = grass_constant_families_with(d, Some(maxdeg), opts);
    let constants = fam.all().all(|e| grass_delta(e).is_zero());
    let gens: Vec<(Key, GrassElement)> = fam
        .all()
        .filter(|e| !e.is_zero())
        .map(|e| (element_pair_key(e).expect("homogeneous"), e.clone()))
        .collect();
    let mut closure = Closure::new(
        gens,
        |k: &Key| if k.iter().all(|x| *x == 0) { vec![one(d)] } else { vec![] },
        |g: &GrassElement, e: &GrassElement| mul(g, e),
    );
    let spans: Vec<(Key, Vec<GrassElement>)> =
        keys_between(d, 1, maxdeg).into_iter().map(|k| { let s = closure.span(&k); (k, s) }).collect();
    spans
        .into_par_iter()
        .map(|(k, span)| {
            let basis = component_basis(d, &k);
            let kernel = kernel_of(&basis, delta_word);
            compare_in_component(&k, "G", &basis, &kernel, &span, false, constants)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn br(a: u32, b: u32) -> AssocTree {
        AssocTree::br(AssocTree::Gen(a), AssocTree::Gen(b))
    }

    fn chain(d: usize, c: &[u32]) -> GrassElement {
        LinComb::word(GrassWord { prefix: vec![0; 2 * d], chain: c.to_vec() })
    }

    #[test]
    fn normalization_examples() {
        let d = 2;
        let (x1, y1, x2, y2) = (0, 1, 2, 3);
        let e = grass_normalize(d, &AssocTree::mul(br(x1, y1), br(x2, y2)));
        assert_eq!(e, chain(d, &[0, 1, 2, 3]));
        let e = grass_normalize(d, &AssocTree::mul(br(x1, x2), br(y1, y2)));
        assert_eq!(e, chain(d, &[0, 1, 2, 3]).scale(&int(-1)));
        assert!(grass_normalize(d, &AssocTree::mul(br(x1, y1), br(x1, y2))).is_zero());
    }

    #[test]
    fn delta_examples() {
        let d = 2;
        assert!(grass_delta(&v_elem(d, 1, 2)).is_zero());
        // x1 y1 + y1 x1 = 2 x1 y1 − [x1, y1]: the commutator does not cancel
        let y1sq = from_letters(d, &[1, 1]);
        let expect = from_letters(d, &[0, 1]).scale(&int(2)) - chain(d, &[0, 1]);
        assert_eq!(grass_delta(&y1sq), expect);
    }

    #[test]
    fn family_examples() {
        let f = grass_constant_families(1, None);
        // w_111 = y1[x1,x1] − x1[y1,x1] = x1[x1,y1], a product of X and V
        let x1v = GrassElement::word(GrassWord { prefix: vec![1, 0], chain: vec![0, 1] });
        assert_eq!(f.w, vec![vec![x1v]]);
        assert_eq!(f.z, vec![Vec::<GrassElement>::new()]);
        assert_eq!(f.v, vec![chain(1, &[0, 1])]);
        // levels W_s, Z_s with s >= d vanish
        for d in 2..=3 {
            let f = grass_constant_families(d, None);
            assert!(f.w.len() <= d && f.z.len() <= d, "d={d}");
            assert!(f.all().all(|e| grass_delta(e).is_zero()));
        }
    }

    #[test]
    fn rank_one_kernel() {
        for n in 1..=6u32 {
            let basis = component_basis(1, &[n]);
            let k = kernel_of(&basis, delta_word);
            let mut expect = vec![GrassElement::word(GrassWord { prefix: vec![n, 0], chain: vec![] })];
            if n >= 2 {
                expect.push(GrassElement::word(GrassWord { prefix: vec![n - 2, 0], chain: vec![0, 1] }));
            }
            let c = compare_in_component(&vec![n], "G", &basis, &k, &expect, true, true);
            assert!(c.ok(), "degree {n}");
        }
    }

    #[test]
    fn theorem_small() {
        assert!(crate::graded::all_ok(&verify_grass_theorem(1, 5)));
        assert!(crate::graded::all_ok(&verify_grass_theorem(2, 3)));
        // z_ijkl restricted to i <= j <= k <= l misses constants in degree 4
        let c = verify_grass_theorem(2, 4);
        let bad: Vec<&Key> = c.iter().filter(|c| !c.ok()).map(|c| &c.key).collect();
        assert_eq!(bad, vec![&vec![1, 3], &vec![2, 2]]);
        let wide = GrassOptions { seeds: SeedRange::FullZ, raise: RaiseReading::Literal };
        assert!(crate::graded::all_ok(&verify_grass_theorem_with(2, 4, wide)));
    }

    #[test]
    fn literal_raise_rejects_mixed_indices() {
        let f = grass_constant_families(3, Some(5));
        assert!(!f.non_constant.is_empty());
        assert!(f.all().all(|e| grass_delta(e).is_zero()));
        let p = grass_constant_families_with(3, Some(5), GrassOptions { seeds: SeedRange::Printed, raise: RaiseReading::Paired });
        assert!(p.non_constant.is_empty());
    }

    fn arb_elem(d: usize) -> impl Strategy<Value = GrassElement> {
        let n = 2 * d as u32;
        prop::collection::vec((prop::collection::vec(0..n, 0..4), -2i64..3), 1..3).prop_map(move |ts| {
            let mut e = GrassElement::zero();
            for (ls, c) in ts {
                e.add_scaled(&int(c), &from_letters(d, &ls));
            }
            e
        })
    }

    proptest! {
        #[test]
        fn associativity(a in arb_elem(2), b in arb_elem(2), c in arb_elem(2)) {
            prop_assert_eq!(mul(&mul(&a, &b), &c), mul(&a, &mul(&b, &c)));
        }

        #[test]
        fn triple_commutators_vanish(a in arb_elem(2), b in arb_elem(2), c in arb_elem(2)) {
            prop_assert!(commutator(&commutator(&a, &b), &c).is_zero());
        }

        #[test]
        fn delta_is_a_derivation(a in arb_elem(2), b in arb_elem(2)) {
            prop_assert_eq!(grass_delta(&mul(&a, &b)), mul(&grass_delta(&a), &b) + mul(&a, &grass_delta(&b)));
        }

        #[test]
        fn swap_identity(ls in prop::collection::vec(0u32..6, 4)) {
            let d = 3;
            let c = |a: u32, b: u32| commutator(&letter(d, a), &letter(d, b));
            let lhs = mul(&c(ls[0], ls[1]), &c(ls[2], ls[3]));
            let rhs = mul(&c(ls[0], ls[2]), &c(ls[1], ls[3])).scale(&int(-1));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn sort_sign_is_order_independent(ls in prop::collection::vec(0u32..8, 0..6), k in 0usize..5) {
            let mut rotated = ls.clone();
            if !ls.is_empty() { rotated.rotate_left(k % ls.len()); }
            let a = sort_chain(&ls);
            let b = sort_chain(&rotated);
            // rotation of n entries has sign (-1)^{k(n-k)}
            if let (Some((va, sa)), Some((vb, sb))) = (a.clone(), b) {
                let n = ls.len();
                let kk = if n == 0 { 0 } else { k % n };
                let rot = if (kk * (n - kk)) % 2 == 0 { 1 } else { -1 };
                prop_assert_eq!(va, vb);
                prop_assert_eq!(sa, sb * rot);
            } else {
                prop_assert!(a.is_none());
            }
        }
    }
}
