//! Free metabelian Lie algebra on x_1..x_n, y_1..y_n.
//!
//! Letters are 0-based: x_i is `i-1`, y_i is `n+i-1`. Words of length at
//! least two are left-normed brackets [i1,i2,...,ik] with i1 > i2 <= i3 <= ... <= ik.

use std::fmt;

use rayon::prelude::*;

use crate::error::Error;
use crate::graded::{
    compare_in_component, kernel_of, key_add, keys_between, unit_key, Closure,
    ComponentCertificate, Key,
};
use crate::lincomb::LinComb;
use crate::linalg::int;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LieWord(pub Vec<u32>);

pub type LieElement = LinComb<LieWord>;

impl LieWord {
    pub fn is_normal(&self) -> bool {
        let w = &self.0;
        match w.len() {
            0 => false,
            1 => true,
            _ => w[0] > w[1] && w[2..].iter().all(|c| *c >= w[1]) && w[2..].windows(2).all(|p| p[0] <= p[1]),
        }
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    /// Degree in each pair (x_i, y_i).
    pub fn pair_key(&self, n: usize) -> Key {
        let mut k = vec![0; n];
        for &l in &self.0 {
            k[l as usize % n] += 1;
        }
        k
    }

    pub fn render(&self, n: usize) -> String {
        let names: Vec<String> = self.0.iter().map(|&l| letter_name(n, l)).collect();
        if names.len() == 1 {
            names[0].clone()
        } else {
            format!("[{}]", names.join(","))
        }
    }
}

pub fn letter_name(n: usize, l: u32) -> String {
    let l = l as usize;
    if l < n {
        format!("x{}", l + 1)
    } else {
        format!("y{}", l - n + 1)
    }
}

pub fn x(i: usize) -> u32 {
    (i - 1) as u32
}

pub fn y(n: usize, i: usize) -> u32 {
    (n + i - 1) as u32
}

pub fn gen(l: u32) -> LieElement {
    LinComb::word(LieWord(vec![l]))
}

/// Normal form of the left-normed bracket of the given letters.
pub fn normalize_letters(w: &[u32]) -> LieElement {
    match w.len() {
        0 => LieElement::zero(),
        1 => gen(w[0]),
        _ => {
            let (a, b) = (w[0], w[1]);
            let mut tail = w[2..].to_vec();
            tail.sort_unstable();
            match a.cmp(&b) {
                std::cmp::Ordering::Equal => LieElement::zero(),
                std::cmp::Ordering::Greater => head_fixed(a, b, &tail),
                std::cmp::Ordering::Less => -head_fixed(b, a, &tail),
            }
        }
    }
}

// a > b, tail sorted
fn head_fixed(a: u32, b: u32, tail: &[u32]) -> LieElement {
    match tail.first() {
        Some(&c) if c < b => {
            // [a,b,c] = [a,c,b] - [b,c,a]; c is now the smallest letter
            let rest = &tail[1..];
            let mk = |h: u32, m: u32| {
                let mut t: Vec<u32> = rest.to_vec();
                t.push(m);
                t.sort_unstable();
                let mut w = vec![h, c];
                w.extend(t);
                LieWord(w)
            };
            let mut e = LieElement::word(mk(a, b));
            e.add_term(mk(b, a), int(-1));
            e
        }
        _ => {
            let mut v = vec![a, b];
            v.extend_from_slice(tail);
            LieElement::word(LieWord(v))
        }
    }
}

fn bracket_words(u: &LieWord, v: &LieWord) -> LieElement {
    match (u.0.len(), v.0.len()) {
        (1, 1) => normalize_letters(&[u.0[0], v.0[0]]),
        (_, 1) => {
            let mut w = u.0.clone();
            w.push(v.0[0]);
            normalize_letters(&w)
        }
        (1, _) => {
            let mut w = v.0.clone();
            w.push(u.0[0]);
            -normalize_letters(&w)
        }
        // [L', L'] = 0
        _ => LieElement::zero(),
    }
}

pub fn bracket(a: &LieElement, b: &LieElement) -> LieElement {
    a.bilinear(b, bracket_words)
}

/// Left-normed bracket of elements.
pub fn bracket_all(parts: &[LieElement]) -> LieElement {
    let mut it = parts.iter();
    let first = it.next().cloned().unwrap_or_default();
    it.fold(first, |acc, p| bracket(&acc, p))
}

/// Left-normed bracket of single letters.
pub fn lbr(letters: &[u32]) -> LieElement {
    normalize_letters(letters)
}

/// Binary bracket tree over generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LieTree {
    Gen(u32),
    Br(Box<LieTree>, Box<LieTree>),
}

impl LieTree {
    pub fn br(a: LieTree, b: LieTree) -> Self {
        LieTree::Br(Box::new(a), Box::new(b))
    }

    pub fn left_normed(letters: &[u32]) -> Result<Self, Error> {
        let (first, rest) = letters
            .split_first()
            .ok_or_else(|| Error::schema("tree", "empty bracket"))?;
        Ok(rest.iter().fold(LieTree::Gen(*first), |acc, l| LieTree::br(acc, LieTree::Gen(*l))))
    }

    pub fn leaves(&self) -> usize {
        match self {
            LieTree::Gen(_) => 1,
            LieTree::Br(a, b) => a.leaves() + b.leaves(),
        }
    }
}

pub fn lie_normalize(t: &LieTree) -> LieElement {
    match t {
        LieTree::Gen(l) => gen(*l),
        LieTree::Br(a, b) => bracket(&lie_normalize(a), &lie_normalize(b)),
    }
}

fn delta_word(w: &LieWord, n: usize) -> LieElement {
    let mut out = LieElement::zero();
    for p in 0..w.0.len() {
        if w.0[p] as usize >= n {
            let mut v = w.0.clone();
            v[p] -= n as u32;
            out.add_assign(&normalize_letters(&v));
        }
    }
    out
}

/// δ(y_i) = x_i, δ(x_i) = 0, extended as a derivation of the bracket.
pub fn delta_lie(e: &LieElement, n: usize) -> LieElement {
    e.flat_map(|w| delta_word(w, n))
}

/// Right action of a letter on L': f . z = [f, z].
pub fn act_letter(e: &LieElement, l: u32) -> LieElement {
    bracket(e, &gen(l))
}

/// Action of a commutative polynomial given as monomials in letters.
pub fn act_poly(e: &LieElement, poly: &[(crate::linalg::Scalar, Vec<u32>)]) -> LieElement {
    let mut out = LieElement::zero();
    for (c, letters) in poly {
        let t = letters.iter().fold(e.clone(), |acc, &l| act_letter(&acc, l));
        out.add_scaled(c, &t);
    }
    out
}

/// u_{i,j} = x_i y_j - x_j y_i as a polynomial in letters (1-based i, j).
pub fn u_poly(n: usize, i: usize, j: usize) -> Vec<(crate::linalg::Scalar, Vec<u32>)> {
    vec![(int(1), vec![x(i), y(n, j)]), (int(-1), vec![x(j), y(n, i)])]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeled<E> {
    pub family: usize,
    pub indices: Vec<usize>,
    pub element: E,
}

/// Module generators of the constants in L', family by family, with the
/// printed index ranges.
pub fn principal_generators(n: usize) -> Vec<Labeled<LieElement>> {
    let mut out = Vec::new();
    let mut push = |family, indices: Vec<usize>, element: LieElement| {
        out.push(Labeled { family, indices, element })
    };
    let yy = |i| y(n, i);
    for i in 1..=n {
        push(1, vec![i], lbr(&[x(i), yy(i)]));
    }
    for i in 1..=n {
        for j in i + 1..=n {
            push(2, vec![i, j], lbr(&[x(i), x(j)]));
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            push(3, vec![i, j], lbr(&[x(i), yy(j)]) + lbr(&[x(j), yy(i)]));
        }
    }
    for i in 1..=n {
        for p in 1..=n {
            for q in p + 1..=n {
                push(4, vec![i, p, q], lbr(&[x(i), x(p), yy(q)]) - lbr(&[x(i), yy(p), x(q)]));
            }
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                push(
                    5,
                    vec![i, j, k],
                    lbr(&[x(i), x(j), yy(k)]) - lbr(&[x(i), x(k), yy(j)]) + lbr(&[x(j), x(k), yy(i)]),
                );
            }
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            for p in 1..=n {
                for q in p + 1..=n {
                    push(6, vec![i, j, p, q], family6(n, i, j, p, q));
                }
            }
        }
    }
    out
}

/// [x_i,x_p,y_j,y_q] + [y_i,y_p,x_j,x_q] - [x_i,y_p,y_j,x_q] - [y_i,x_p,x_j,y_q]
pub fn family6(n: usize, i: usize, j: usize, p: usize, q: usize) -> LieElement {
    let yy = |i| y(n, i);
    lbr(&[x(i), x(p), yy(j), yy(q)]) + lbr(&[yy(i), yy(p), x(j), x(q)])
        - lbr(&[x(i), yy(p), yy(j), x(q)])
        - lbr(&[yy(i), x(p), x(j), yy(q)])
}

/// Normal words of L' (length >= 2) with the given pair degrees.
pub fn commutator_basis(n: usize, key: &[u32]) -> Vec<LieWord> {
    let mut out = Vec::new();
    // split each pair degree between x_i and y_i
    let mut splits: Vec<Vec<u32>> = vec![vec![0; 2 * n]];
    for (i, &k) in key.iter().enumerate() {
        splits = splits
            .into_iter()
            .flat_map(|c| {
                (0..=k).map(move |a| {
                    let mut c = c.clone();
                    c[i] = a;
                    c[n + i] = k - a;
                    c
                })
            })
            .collect();
    }
    for counts in splits {
        let letters: Vec<u32> = counts
            .iter()
            .enumerate()
            .flat_map(|(l, &c)| std::iter::repeat(l as u32).take(c as usize))
            .collect();
        if letters.len() < 2 {
            continue;
        }
        let m = letters[0];
        let mut heads: Vec<u32> = letters.iter().copied().filter(|&l| l > m).collect();
        heads.dedup();
        for a in heads {
            let mut rest = letters.clone();
            let pos = rest.iter().position(|&l| l == a).unwrap();
            rest.remove(pos);
            rest.remove(0);
            let mut w = vec![a, m];
            w.extend(rest);
            out.push(LieWord(w));
        }
    }
    out.sort();
    out
}

pub fn element_pair_key(e: &LieElement, n: usize) -> Option<Key> {
    let mut ks = e.words().map(|w| w.pair_key(n));
    let first = ks.next()?;
    ks.all(|k| k == first).then_some(first)
}

enum Act {
    Letter(u32),
    Poly(Vec<(crate::linalg::Scalar, Vec<u32>)>),
}

/// Per component of total degree 2..=maxdeg: the module generated by the
/// principal families over the constants x_i, u_{i,j} against ker δ on L'.
pub fn verify_lie_module_generation(n: usize, maxdeg: u32) -> Vec<ComponentCertificate> {
    let gens = principal_generators(n);
    let constants = gens.iter().all(|g| delta_lie(&g.element, n).is_zero());
    let seeds: Vec<(Key, LieElement)> = gens
        .iter()
        .filter(|g| !g.element.is_zero())
        .map(|g| (element_pair_key(&g.element, n).expect("homogeneous"), g.element.clone()))
        .collect();
    let mut ring: Vec<(Key, Act)> = (1..=n).map(|i| (unit_key(n, i - 1), Act::Letter(x(i)))).collect();
    for i in 1..=n {
        for j in i + 1..=n {
            ring.push((key_add(&unit_key(n, i - 1), &unit_key(n, j - 1)), Act::Poly(u_poly(n, i, j))));
        }
    }
    let mut closure = Closure::new(
        ring,
        |k: &Key| seeds.iter().filter(|(sk, _)| sk == k).map(|(_, e)| e.clone()).collect(),
        |a: &Act, e: &LieElement| match a {
            Act::Letter(l) => act_letter(e, *l),
            Act::Poly(p) => act_poly(e, p),
        },
    );
    let keys: Vec<Key> = keys_between(n, 2, maxdeg.max(1));
    let spans: Vec<(Key, Vec<LieElement>)> = keys.iter().map(|k| (k.clone(), closure.span(k))).collect();
    spans
        .into_par_iter()
        .map(|(k, span)| {
            let basis = commutator_basis(n, &k);
            let kernel = kernel_of(&basis, |w| delta_word(w, n));
            compare_in_component(&k, "L'", &basis, &kernel, &span, false, constants)
        })
        .collect()
}

pub fn kernel_commutator_component(n: usize, key: &[u32]) -> Vec<LieElement> {
    let basis = commutator_basis(n, key);
    kernel_of(&basis, |w| delta_word(w, n))
}

pub struct Rendered<'a>(pub &'a LieElement, pub usize);

impl fmt::Display for Rendered<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.0.iter().map(|(w, c)| format!("({c}){}", w.render(self.1))).collect();
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(v: &[u32]) -> LieElement {
        LieElement::word(LieWord(v.to_vec()))
    }

    #[test]
    fn normal_form_examples() {
        // z1 = 0, z2 = 1, z3 = 2
        assert_eq!(lbr(&[0, 1]), -w(&[1, 0]));
        assert!(lbr(&[0, 0]).is_zero());
        // [z3,z2,z1] - [z3,z1,z2], itself reduced to normal words
        assert_eq!(lbr(&[0, 1, 2]), lbr(&[2, 1, 0]) - lbr(&[2, 0, 1]));
        assert_eq!(lbr(&[0, 1, 2]), -w(&[1, 0, 2]));
    }

    #[test]
    fn delta_examples() {
        let n = 2;
        assert!(delta_lie(&lbr(&[x(2), x(1)]), n).is_zero());
        assert!(delta_lie(&lbr(&[y(n, 1), x(1)]), n).is_zero());
        let e = lbr(&[x(2), y(n, 1)]) + lbr(&[x(1), y(n, 2)]);
        assert!(delta_lie(&e, n).is_zero());
    }

    #[test]
    fn principal_lists() {
        let g1 = principal_generators(1);
        assert_eq!(g1.len(), 1);
        assert_eq!(g1[0].element, lbr(&[x(1), y(1, 1)]));
        for n in 1..=3 {
            for g in principal_generators(n) {
                assert!(delta_lie(&g.element, n).is_zero(), "{:?}", g);
            }
        }
    }

    #[test]
    fn basis_sizes() {
        // multilinear in 3 letters: 2 words; x1^2 y1: [y1,x1,x1] only
        // 8 ways to pick x or y per pair, two words per multilinear multiset
        assert_eq!(commutator_basis(3, &[1, 1, 1]).len(), 16);
        assert_eq!(commutator_basis(1, &[3]).len(), 2);
        assert!(commutator_basis(2, &[1, 0]).is_empty());
        assert!(commutator_basis(2, &[2, 1]).iter().all(LieWord::is_normal));
    }

    #[test]
    fn one_pair_kernel() {
        // [y1,x1] acted on by powers of x1
        for k in 2..=6 {
            let ker = kernel_commutator_component(1, &[k]);
            assert_eq!(ker.len(), 1);
            let mut expect = lbr(&[y(1, 1), x(1)]);
            for _ in 2..k {
                expect = act_letter(&expect, x(1));
            }
            assert_eq!(ker[0].monic(), expect.monic());
        }
    }

    #[test]
    fn small_module_generation() {
        assert!(crate::graded::all_ok(&verify_lie_module_generation(1, 5)));
        assert!(crate::graded::all_ok(&verify_lie_module_generation(2, 3)));
    }

    #[test]
    fn empty_tree_rejected() {
        assert!(LieTree::left_normed(&[]).is_err());
    }

    fn arb_elem(letters: u32) -> impl Strategy<Value = LieElement> {
        prop::collection::vec((prop::collection::vec(0..letters, 1..5), -2i64..3), 1..4).prop_map(|ts| {
            let mut e = LieElement::zero();
            for (ls, c) in ts {
                e.add_scaled(&int(c), &lbr(&ls));
            }
            e
        })
    }

    fn arb_tree(letters: u32) -> impl Strategy<Value = LieTree> {
        let leaf = (0..letters).prop_map(LieTree::Gen);
        leaf.prop_recursive(4, 6, 2, |inner| (inner.clone(), inner).prop_map(|(a, b)| LieTree::br(a, b)))
    }

    proptest! {
        #[test]
        fn normal_form_is_a_projection(t in arb_tree(4)) {
            let e = lie_normalize(&t);
            prop_assert!(e.words().all(LieWord::is_normal));
            let again = e.flat_map(|w| normalize_letters(&w.0));
            prop_assert_eq!(again, e);
        }

        #[test]
        fn lie_identities(a in arb_elem(4), b in arb_elem(4), c in arb_elem(4)) {
            prop_assert_eq!(bracket(&a, &b), -bracket(&b, &a));
            let jac = bracket(&bracket(&a, &b), &c) + bracket(&bracket(&b, &c), &a) + bracket(&bracket(&c, &a), &b);
            prop_assert!(jac.is_zero());
        }

        #[test]
        fn metabelian_via_jacobi(l in prop::collection::vec(0u32..4, 4)) {
            // [[a,b],[c,d]] = [[a,b],c,d] - [[a,b],d,c] must vanish
            let r = lbr(&[l[0], l[1], l[2], l[3]]) - lbr(&[l[0], l[1], l[3], l[2]]);
            prop_assert!(r.is_zero());
        }

        #[test]
        fn delta_is_a_derivation(a in arb_elem(4), b in arb_elem(4)) {
            let n = 2;
            let lhs = delta_lie(&bracket(&a, &b), n);
            let rhs = bracket(&delta_lie(&a, n), &b) + bracket(&a, &delta_lie(&b, n));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn delta_shifts_bidegree(a in arb_elem(4)) {
            let n = 2;
            let yd = |w: &LieWord| w.0.iter().filter(|l| **l as usize >= n).count();
            let src: std::collections::BTreeSet<usize> = a.words().map(yd).collect();
            for w in delta_lie(&a, n).words() {
                prop_assert!(src.contains(&(yd(w) + 1)));
            }
        }
    }
}
