//! Free metabelian associative algebra F_{2d} on x_1..x_{2d}.
//!
//! Letters are 0-based (`x_k` is `k-1`); the derivation sends x_{2i} to
//! x_{2i-1}, i.e. an odd 0-based letter `l` to `l-1`. Normal words are an
//! exponent vector (the ordered product x_1^e1 ... x_{2d}^e2d) optionally
//! followed by a normal left-normed commutator of length >= 2.

pub mod uv;
pub mod wreath;

use std::fmt;

use rayon::prelude::*;

use crate::commutative::PolyElement;
use crate::graded::{compare_in_component, kernel_of, keys_between, Closure, ComponentCertificate, Key};
use crate::lie::{normalize_letters, LieWord};
use crate::lincomb::LinComb;
use crate::linalg::{int, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AssocWord {
    pub prefix: Vec<u32>,
    /// Normal commutator letters, length >= 2, when present.
    pub bracket: Option<Vec<u32>>,
}

pub type AssocElement = LinComb<AssocWord>;

impl AssocWord {
    pub fn plain(prefix: Vec<u32>) -> Self {
        Self { prefix, bracket: None }
    }

    pub fn letters(&self) -> usize {
        self.prefix.len()
    }

    pub fn is_commutator(&self) -> bool {
        self.bracket.is_some()
    }

    pub fn is_normal(&self) -> bool {
        match &self.bracket {
            None => true,
            Some(b) => b.len() >= 2 && LieWord(b.clone()).is_normal(),
        }
    }

    /// Degree in each pair (x_{2i-1}, x_{2i}).
    pub fn pair_key(&self) -> Key {
        let d = self.prefix.len() / 2;
        let mut k: Key = (0..d).map(|i| self.prefix[2 * i] + self.prefix[2 * i + 1]).collect();
        if let Some(b) = &self.bracket {
            for &l in b {
                k[l as usize / 2] += 1;
            }
        }
        k
    }

    pub fn render(&self) -> String {
        let mut parts: Vec<String> = self
            .prefix
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(l, e)| if *e == 1 { format!("x{}", l + 1) } else { format!("x{}^{}", l + 1, e) })
            .collect();
        if let Some(b) = &self.bracket {
            let names: Vec<String> = b.iter().map(|l| format!("x{}", l + 1)).collect();
            parts.push(format!("[{}]", names.join(",")));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

pub fn render(e: &AssocElement) -> String {
    if e.is_zero() {
        return "0".into();
    }
    e.iter().map(|(w, c)| format!("({c}){}", w.render())).collect::<Vec<_>>().join(" + ")
}

pub struct Rendered<'a>(pub &'a AssocElement);

impl fmt::Display for Rendered<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self.0))
    }
}

pub fn one(d: usize) -> AssocElement {
    LinComb::word(AssocWord::plain(vec![0; 2 * d]))
}

pub fn letter(d: usize, l: u32) -> AssocElement {
    let mut p = vec![0; 2 * d];
    p[l as usize] = 1;
    LinComb::word(AssocWord::plain(p))
}

/// x_{2i-1} as a 0-based letter.
pub fn odd(i: usize) -> u32 {
    (2 * i - 2) as u32
}

/// x_{2i} as a 0-based letter.
pub fn even(i: usize) -> u32 {
    (2 * i - 1) as u32
}

fn comm_word(prefix: Vec<u32>, bracket: &[u32]) -> AssocElement {
    normalize_letters(bracket).map_words(|lw| AssocWord { prefix: prefix.clone(), bracket: Some(lw.0.clone()) })
}

/// Commutator word acted on by u^alpha (left multiplication) and the letters
/// in `vs` (right bracketing).
pub fn act_word(w: &AssocWord, alpha: &[u32], vs: &[u32]) -> AssocElement {
    let b = w.bracket.as_ref().expect("module action on a commutator word");
    let prefix: Vec<u32> = w.prefix.iter().zip(alpha).map(|(a, b)| a + b).collect();
    let mut letters = b.clone();
    letters.extend_from_slice(vs);
    comm_word(prefix, &letters)
}

/// f . u_l = x_l f
pub fn act_u(e: &AssocElement, l: u32) -> AssocElement {
    e.flat_map(|w| {
        let mut a = vec![0; w.prefix.len()];
        a[l as usize] = 1;
        act_word(w, &a, &[])
    })
}

/// f . v_l = [f, x_l]
pub fn act_v(e: &AssocElement, l: u32) -> AssocElement {
    e.flat_map(|w| act_word(w, &vec![0; w.prefix.len()], &[l]))
}

/// Action of a polynomial in u_1..u_{2d}, v_1..v_{2d} (4d variables, U-block
/// first) on commutator elements.
pub fn act_uv(e: &AssocElement, f: &PolyElement) -> AssocElement {
    let mut out = AssocElement::zero();
    for (m, c) in f.terms().iter() {
        let n = m.0.len() / 2;
        let alpha = &m.0[..n];
        let vs: Vec<u32> =
            (0..n).flat_map(|l| std::iter::repeat(l as u32).take(m.0[n + l] as usize)).collect();
        out.add_scaled(c, &e.flat_map(|w| act_word(w, alpha, &vs)));
    }
    out
}

// commutator word times a letter: (u_l + v_l)
fn comm_times_letter(w: &AssocWord, l: u32) -> AssocElement {
    let mut a = vec![0; w.prefix.len()];
    a[l as usize] = 1;
    act_word(w, &a, &[]) + act_word(w, &vec![0; w.prefix.len()], &[l])
}

// ordered product M times letter x_i
fn plain_times_letter(m: &[u32], i: u32) -> AssocElement {
    let n = m.len();
    let mut top = m.to_vec();
    top[i as usize] += 1;
    let mut out = LinComb::word(AssocWord::plain(top));
    // M = A B with A the letters <= i; B x_i = x_i B + [B, x_i]
    let mut a_part = vec![0u32; n];
    a_part[..=i as usize].copy_from_slice(&m[..=i as usize]);
    let b_letters: Vec<u32> = (i as usize + 1..n)
        .flat_map(|l| std::iter::repeat(l as u32).take(m[l] as usize))
        .collect();
    for t in 0..b_letters.len() {
        // b_1..b_{t-1} [b_t, x_i] b_{t+1}..b_k, then A on the left
        let mut pre = a_part.clone();
        for &b in &b_letters[..t] {
            pre[b as usize] += 1;
        }
        let mut term = comm_word(pre, &[b_letters[t], i]);
        for &b in &b_letters[t + 1..] {
            term = term.flat_map(|w| comm_times_letter(w, b));
        }
        out.add_assign(&term);
    }
    out
}

fn mul_words(a: &AssocWord, b: &AssocWord) -> AssocElement {
    match (&a.bracket, &b.bracket) {
        (Some(_), Some(_)) => AssocElement::zero(),
        (None, Some(_)) => LinComb::word(AssocWord {
            prefix: a.prefix.iter().zip(&b.prefix).map(|(x, y)| x + y).collect(),
            bracket: b.bracket.clone(),
        }),
        (_, None) => {
            let mut cur = LinComb::word(a.clone());
            for (l, &e) in b.prefix.iter().enumerate() {
                for _ in 0..e {
                    cur = cur.flat_map(|w| match w.bracket {
                        Some(_) => comm_times_letter(w, l as u32),
                        None => plain_times_letter(&w.prefix, l as u32),
                    });
                }
            }
            cur
        }
    }
}

pub fn mul(a: &AssocElement, b: &AssocElement) -> AssocElement {
    a.bilinear(b, mul_words)
}

pub fn commutator(a: &AssocElement, b: &AssocElement) -> AssocElement {
    mul(a, b) - mul(b, a)
}

/// Normal form of the word x_{l_1} x_{l_2} ... in the free algebra.
pub fn from_letters(d: usize, letters: &[u32]) -> AssocElement {
    letters.iter().fold(one(d), |acc, &l| mul(&acc, &letter(d, l)))
}

/// Left-normed commutator of letters, built by actual multiplication.
pub fn commutator_of_letters(d: usize, letters: &[u32]) -> AssocElement {
    let mut it = letters.iter();
    let first = letter(d, *it.next().expect("nonempty"));
    it.fold(first, |acc, &l| commutator(&acc, &letter(d, l)))
}

/// Associative expression with products and commutators over letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AssocTree {
    Gen(u32),
    Mul(Box<AssocTree>, Box<AssocTree>),
    Br(Box<AssocTree>, Box<AssocTree>),
}

impl AssocTree {
    pub fn mul(a: AssocTree, b: AssocTree) -> Self {
        AssocTree::Mul(Box::new(a), Box::new(b))
    }
    pub fn br(a: AssocTree, b: AssocTree) -> Self {
        AssocTree::Br(Box::new(a), Box::new(b))
    }
}

pub fn assoc_normalize(d: usize, t: &AssocTree) -> AssocElement {
    match t {
        AssocTree::Gen(l) => letter(d, *l),
        AssocTree::Mul(a, b) => mul(&assoc_normalize(d, a), &assoc_normalize(d, b)),
        AssocTree::Br(a, b) => commutator(&assoc_normalize(d, a), &assoc_normalize(d, b)),
    }
}

fn delta_letter(l: u32) -> Option<u32> {
    (l % 2 == 1).then(|| l - 1)
}

fn delta_word(w: &AssocWord) -> AssocElement {
    let d = w.prefix.len() / 2;
    match &w.bracket {
        Some(b) => {
            let mut out = AssocElement::zero();
            // prefix letters act as commuting u's
            for l in 0..w.prefix.len() {
                if let (Some(t), true) = (delta_letter(l as u32), w.prefix[l] > 0) {
                    let mut p = w.prefix.clone();
                    let e = p[l];
                    p[l] -= 1;
                    p[t as usize] += 1;
                    out.add_scaled(&int(e as i64), &comm_word(p, b));
                }
            }
            for pos in 0..b.len() {
                if let Some(t) = delta_letter(b[pos]) {
                    let mut bb = b.clone();
                    bb[pos] = t;
                    out.add_assign(&comm_word(w.prefix.clone(), &bb));
                }
            }
            out
        }
        None => {
            let letters: Vec<u32> = (0..w.prefix.len())
                .flat_map(|l| std::iter::repeat(l as u32).take(w.prefix[l] as usize))
                .collect();
            let mut out = AssocElement::zero();
            for pos in 0..letters.len() {
                if let Some(t) = delta_letter(letters[pos]) {
                    let mut ls = letters.clone();
                    ls[pos] = t;
                    out.add_assign(&from_letters(d, &ls));
                }
            }
            out
        }
    }
}

pub fn delta_assoc(e: &AssocElement) -> AssocElement {
    e.flat_map(delta_word)
}

fn letter_count_splits(d: usize, key: &[u32]) -> Vec<Vec<u32>> {
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

/// Normal commutator words with the given pair degrees.
pub fn commutator_basis(d: usize, key: &[u32]) -> Vec<AssocWord> {
    let mut out = Vec::new();
    for counts in letter_count_splits(d, key) {
        // choose the bracket's letter multiset, the rest is the prefix
        let mut subs: Vec<Vec<u32>> = vec![vec![]];
        for &c in &counts {
            subs = subs.into_iter().flat_map(|s| (0..=c).map(move |k| {
                let mut s = s.clone();
                s.push(k);
                s
            })).collect();
        }
        for sub in subs {
            if sub.iter().sum::<u32>() < 2 {
                continue;
            }
            let prefix: Vec<u32> = counts.iter().zip(&sub).map(|(c, s)| c - s).collect();
            let letters: Vec<u32> = sub
                .iter()
                .enumerate()
                .flat_map(|(l, &c)| std::iter::repeat(l as u32).take(c as usize))
                .collect();
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
                out.push(AssocWord { prefix: prefix.clone(), bracket: Some(w) });
            }
        }
    }
    out.sort();
    out
}

/// All normal words (plain and commutator) with the given pair degrees.
pub fn full_basis(d: usize, key: &[u32]) -> Vec<AssocWord> {
    let mut out: Vec<AssocWord> = letter_count_splits(d, key).into_iter().map(AssocWord::plain).collect();
    out.extend(commutator_basis(d, key));
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GElement {
    /// 1..=8
    pub family: usize,
    pub indices: Vec<usize>,
    pub element: AssocElement,
}

/// Module generators g_1..g_8 of the commutator constants.
pub fn module_generators_g(d: usize) -> Vec<GElement> {
    let c = |ls: &[u32]| comm_word(vec![0; 2 * d], ls);
    let pc = |p: u32, ls: &[u32]| {
        let mut pre = vec![0; 2 * d];
        pre[p as usize] = 1;
        comm_word(pre, ls)
    };
    let (o, e) = (odd, even);
    let mut out = Vec::new();
    let mut push = |family, indices: Vec<usize>, element: AssocElement| {
        out.push(GElement { family, indices, element })
    };
    for i in 1..=d {
        push(1, vec![i], c(&[o(i), e(i)]));
    }
    for i in 1..=d {
        for j in i + 1..=d {
            push(2, vec![i, j], c(&[o(i), o(j)]));
        }
    }
    for i in 1..=d {
        for j in i + 1..=d {
            push(3, vec![i, j], c(&[o(i), e(j)]) + c(&[o(j), e(i)]));
        }
    }
    for i in 1..=d {
        for p in 1..=d {
            for q in p + 1..=d {
                push(4, vec![i, p, q], c(&[o(i), o(p), e(q)]) - c(&[o(i), e(p), o(q)]));
            }
        }
    }
    for i in 1..=d {
        for j in i + 1..=d {
            for k in j + 1..=d {
                push(
                    5,
                    vec![i, j, k],
                    c(&[o(i), o(j), e(k)]) - c(&[o(i), o(k), e(j)]) + c(&[o(j), o(k), e(i)]),
                );
            }
        }
    }
    for i in 1..=d {
        for j in i + 1..=d {
            for p in 1..=d {
                for q in p + 1..=d {
                    push(
                        6,
                        vec![i, j, p, q],
                        c(&[o(i), o(p), e(j), e(q)]) + c(&[e(i), e(p), o(j), o(q)])
                            - c(&[o(i), e(p), e(j), o(q)])
                            - c(&[e(i), o(p), o(j), e(q)]),
                    );
                }
            }
        }
    }
    for i in 1..=d {
        for j in 1..=d {
            for k in j + 1..=d {
                for l in k + 1..=d {
                    push(
                        7,
                        vec![i, j, k, l],
                        pc(e(i), &[o(j), o(k), e(l)]) + pc(o(i), &[e(j), e(k), o(l)])
                            - pc(e(i), &[o(j), e(k), o(l)])
                            - pc(o(i), &[e(j), o(k), e(l)]),
                    );
                }
            }
        }
    }
    for i in 1..=d {
        for j in 1..=d {
            for k in j + 1..=d {
                push(8, vec![i, j, k], pc(e(i), &[o(j), o(k)]) - pc(o(i), &[e(j), o(k)]));
            }
        }
    }
    out
}

pub fn element_pair_key(e: &AssocElement) -> Option<Key> {
    let mut ks = e.words().map(AssocWord::pair_key);
    let first = ks.next()?;
    ks.all(|k| k == first).then_some(first)
}

/// δ-constants of K[U,V] whose pair degrees (u-cell plus v-cell) equal `key`.
pub fn uv_kernel_for_pair_key(d: usize, key: &[u32], cache: &mut std::collections::HashMap<Key, Vec<PolyElement>>) -> Vec<PolyElement> {
    let der = uv::uv_derivation(d);
    let mut out = Vec::new();
    // split each pair degree into u-part and v-part
    let mut splits: Vec<Key> = vec![vec![0; 2 * d]];
    for (i, &k) in key.iter().enumerate() {
        splits = splits
            .into_iter()
            .flat_map(|s| {
                (0..=k).map(move |a| {
                    let mut s = s.clone();
                    s[i] = a;
                    s[d + i] = k - a;
                    s
                })
            })
            .collect();
    }
    for s in splits {
        let ker = cache
            .entry(s.clone())
            .or_insert_with(|| der.kernel_component(&s).expect("jordan grading"))
            .clone();
        out.extend(ker);
    }
    out
}

/// Span of g_1..g_8 acted on by δ-constants of K[U,V], compared with ker δ on
/// the commutator part, per component of total degree 2..=maxdeg.
pub fn verify_commutator_constants(d: usize, maxdeg: u32) -> Vec<ComponentCertificate> {
    let gens: Vec<AssocElement> = module_generators_g(d).into_iter().map(|g| g.element).collect();
    verify_commutator_claim(d, maxdeg, &gens)
}

/// K[U,V]^δ-closure of arbitrary commutator elements against ker δ ∩ F'.
pub fn verify_commutator_claim(d: usize, maxdeg: u32, gens: &[AssocElement]) -> Vec<ComponentCertificate> {
    let constants = gens.iter().all(|g| delta_assoc(g).is_zero());
    let spans = commutator_closure(d, maxdeg, gens);
    spans
        .into_par_iter()
        .map(|(k, span)| {
            let basis = commutator_basis(d, &k);
            let kernel = kernel_of(&basis, delta_word);
            compare_in_component(&k, "F'", &basis, &kernel, &span, false, constants)
        })
        .collect()
}

fn commutator_closure(d: usize, maxdeg: u32, gens: &[AssocElement]) -> Vec<(Key, Vec<AssocElement>)> {
    let keyed: Vec<(Key, &AssocElement)> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| (element_pair_key(g).expect("homogeneous"), g))
        .collect();
    let mut cache = std::collections::HashMap::new();
    keys_between(d, 2, maxdeg.max(2))
        .into_iter()
        .map(|k| {
            let mut elems = Vec::new();
            for (gk, g) in &keyed {
                if let Some(rest) = crate::graded::key_sub(&k, gk) {
                    for f in uv_kernel_for_pair_key(d, &rest, &mut cache) {
                        let e = act_uv(g, &f);
                        if !e.is_zero() {
                            elems.push(e);
                        }
                    }
                }
            }
            (k, crate::graded::independent_subset(elems))
        })
        .collect()
}

/// The subalgebra generated by x_{2i-1}, x_{2i-1}x_{2j} - x_{2i}x_{2j-1} and
/// the commutator constants above, compared with ker δ on all of F_{2d}.
pub fn verify_algebra_constants(d: usize, maxdeg: u32) -> Vec<ComponentCertificate> {
    let gens: Vec<AssocElement> = module_generators_g(d).into_iter().map(|g| g.element).collect();
    let mut alg: Vec<(Key, AssocElement)> = Vec::new();
    for i in 1..=d {
        alg.push((crate::graded::unit_key(d, i - 1), letter(d, odd(i))));
    }
    for i in 1..=d {
        for j in i + 1..=d {
            let q = mul(&letter(d, odd(i)), &letter(d, even(j))) - mul(&letter(d, even(i)), &letter(d, odd(j)));
            alg.push((element_pair_key(&q).unwrap(), q));
        }
    }
    for (k, span) in commutator_closure(d, maxdeg, &gens) {
        alg.extend(span.into_iter().map(|e| (k.clone(), e)));
    }
    let constants = alg.iter().all(|(_, e)| delta_assoc(e).is_zero());
    let mut closure = Closure::new(
        alg,
        |k: &Key| if k.iter().all(|x| *x == 0) { vec![one(d)] } else { vec![] },
        |g: &AssocElement, e: &AssocElement| mul(g, e),
    );
    let keys = keys_between(d, 1, maxdeg);
    let spans: Vec<(Key, Vec<AssocElement>)> = keys.iter().map(|k| (k.clone(), closure.span(k))).collect();
    spans
        .into_par_iter()
        .map(|(k, span)| {
            let basis = full_basis(d, &k);
            let kernel = kernel_of(&basis, delta_word);
            compare_in_component(&k, "F", &basis, &kernel, &span, false, constants)
        })
        .collect()
}

/// Both checks: the commutator part, then the whole algebra.
pub fn verify_assoc_constants(d: usize, maxdeg: u32) -> Vec<ComponentCertificate> {
    let mut out = verify_commutator_constants(d, maxdeg);
    out.extend(verify_algebra_constants(d, maxdeg));
    out
}

/// The scalar `c` with `a = c * b`, if any.
pub fn proportional<W: Ord + Clone>(a: &LinComb<W>, b: &LinComb<W>) -> Option<Scalar> {
    let (w, cb) = b.iter().next()?;
    let c = a.coeff(w) / cb;
    (b.scale(&c) == *a).then_some(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn comm(d: usize, prefix: &[u32], b: &[u32]) -> AssocElement {
        let mut p = vec![0; 2 * d];
        p[..prefix.len()].copy_from_slice(prefix);
        LinComb::word(AssocWord { prefix: p, bracket: Some(b.to_vec()) })
    }

    #[test]
    fn normalization_examples() {
        let d = 2;
        // x2 x1 = x1 x2 + [x2,x1]
        let e = from_letters(d, &[1, 0]);
        assert_eq!(e, from_letters(d, &[0, 1]) + comm(d, &[], &[1, 0]));
        // [x1,x2][x3,x4] = 0
        let c1 = commutator_of_letters(d, &[0, 1]);
        let c2 = commutator_of_letters(d, &[2, 3]);
        assert!(mul(&c1, &c2).is_zero());
        // x3 [x2,x1] x4 = x3 x4 [x2,x1] + x3 [x2,x1,x4]
        let lhs = mul(&mul(&letter(d, 2), &commutator_of_letters(d, &[1, 0])), &letter(d, 3));
        let rhs = comm(d, &[0, 0, 1, 1], &[1, 0]) + comm(d, &[0, 0, 1, 0], &[1, 0, 3]);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn module_action_examples() {
        let d = 2;
        let c = commutator_of_letters(d, &[1, 0]);
        assert_eq!(act_u(&c, 2), mul(&letter(d, 2), &c));
        assert_eq!(act_v(&c, 2), commutator_of_letters(d, &[1, 0, 2]));
    }

    #[test]
    fn g_constants() {
        for d in 1..=3 {
            for g in module_generators_g(d) {
                assert!(delta_assoc(&g.element).is_zero(), "{:?}", g);
            }
        }
        let g1 = &module_generators_g(1)[0];
        assert_eq!(g1.element, commutator_of_letters(1, &[0, 1]));
    }

    #[test]
    fn small_constants() {
        let c = verify_commutator_constants(1, 5);
        assert!(crate::graded::all_ok(&c));
        assert!(crate::graded::all_ok(&verify_commutator_constants(2, 3)));
        // degree 2 with one pair: [x2,x1] only
        let k2 = c.iter().find(|c| c.key == vec![2]).unwrap();
        assert_eq!(k2.dim_kernel, 1);
        assert!(crate::graded::all_ok(&verify_algebra_constants(2, 3)));
    }

    #[test]
    fn listed_generators_miss_a_degree_four_constant() {
        // ker δ ∩ F' at pair degrees (2,2) is one dimension larger than the
        // closure of g_1..g_8; the extra constant maps to
        // ρ_11 γ_22 − ρ_22 γ_11 with ρ_pq = a_{2p-1} u_{2q} − a_{2p} u_{2q-1}.
        let c = verify_commutator_constants(2, 4);
        let bad: Vec<&Key> = c.iter().filter(|c| !c.ok()).map(|c| &c.key).collect();
        assert_eq!(bad, vec![&vec![1, 3], &vec![2, 2], &vec![3, 1]]);
        let k22 = c.iter().find(|c| c.key == vec![2, 2]).unwrap();
        assert_eq!(k22.span.verdict, crate::Verdict::ASubsetOfB);
        assert_eq!((k22.span.rank_a, k22.dim_kernel), (24, 25));

        let d = 2;
        let pc = |p: &[u32], b: &[u32]| comm(d, p, b);
        let h = pc(&[0, 1, 0, 1], &[2, 0]) - pc(&[0, 1, 1, 0], &[3, 0]) - pc(&[1, 0, 0, 1], &[2, 1])
            + pc(&[1, 0, 1, 0], &[3, 1]);
        assert!(delta_assoc(&h).is_zero());
        let uvar = |k: usize| PolyElement::var(8, k - 1);
        let rho = |p: usize, q: usize| {
            wreath::module_gen(d, (2 * p - 2) as u32, &uvar(2 * q)) - wreath::module_gen(d, (2 * p - 1) as u32, &uvar(2 * q - 1))
        };
        let expect = wreath::module_mul(&rho(1, 1), &uv::gamma(d, 2, 2)) - wreath::module_mul(&rho(2, 2), &uv::gamma(d, 1, 1));
        assert_eq!(wreath::epsilon(d, &h).module, expect);
        // with this element (and its two neighbours) the closure is complete
        let mut gens: Vec<AssocElement> = module_generators_g(d).into_iter().map(|g| g.element).collect();
        for k in &c {
            if let Some(w) = k.span.witness.as_ref().filter(|_| !k.ok()) {
                let ix = crate::lincomb::WordIndex::from_words(commutator_basis(d, &k.key));
                gens.push(ix.element(w));
            }
        }
        assert!(crate::graded::all_ok(&verify_commutator_claim(d, 4, &gens)));
    }

    #[test]
    fn basis_counts_match_free_metabelian_dimension() {
        // multilinear degree 3 in 4 letters over pairs (1,1,.) etc.: letters
        // a<b<c all distinct -> 6 plain orderings collapse to 1 plain word + 3*... check
        // via the ordered-word expansion: every word of length 3 lies in the span
        let d = 2;
        let key = vec![2, 1];
        let basis = full_basis(d, &key);
        let mut ix = crate::lincomb::WordIndex::from_words(basis.iter().cloned());
        let words: Vec<Vec<u32>> = {
            let mut v = vec![];
            for a in 0..4u32 { for b in 0..4u32 { for c in 0..4u32 {
                let w = vec![a, b, c];
                let mut k = vec![0, 0];
                for l in &w { k[*l as usize / 2] += 1; }
                if k == key { v.push(w); }
            }}}
            v
        };
        let vecs: Vec<_> = words.iter().map(|w| ix.vector(&from_letters(d, w))).collect();
        assert_eq!(ix.len(), basis.len());
        assert_eq!(crate::linalg::rank(&vecs), basis.len());
    }

    fn arb_elem(d: usize) -> impl Strategy<Value = AssocElement> {
        let n = 2 * d as u32;
        prop::collection::vec((prop::collection::vec(0..n, 0..4), -2i64..3), 1..3).prop_map(move |ts| {
            let mut e = AssocElement::zero();
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
        fn delta_is_a_derivation(a in arb_elem(2), b in arb_elem(2)) {
            let lhs = delta_assoc(&mul(&a, &b));
            let rhs = mul(&delta_assoc(&a), &b) + mul(&a, &delta_assoc(&b));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn normal_words_only(a in arb_elem(2), b in arb_elem(2)) {
            prop_assert!(mul(&a, &b).words().all(AssocWord::is_normal));
        }

        #[test]
        fn commutators_multiply_to_zero(a in arb_elem(2), b in arb_elem(2), c in arb_elem(2), e in arb_elem(2)) {
            prop_assert!(mul(&commutator(&a, &b), &commutator(&c, &e)).is_zero());
        }
    }
}
