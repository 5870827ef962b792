//! Free metabelian Poisson algebra P_{2n} on z_1..z_{2n} = x_1..x_n, y_1..y_n.
//!
//! Letters are 0-based: x_i is `i-1`, y_i is `n+i-1`, so the letter order is
//! x_1 < ... < x_n < y_1 < ... < y_n. Normal words:
//!
//! * B1: generators and metabelian Lie words [i1,i2,...] with i1 > i2 <= i3 <= ...
//! * B2: products of two or three generators, letters nondecreasing
//! * B3: [z_i,z_j]·z_k with i > j
//! * B4: [z_i,z_j,z_k]·z_l with j < i <= l and j <= k < l
//!
//! Everything of degree >= 5 is Lie; every product of two elements of degree
//! >= 2 vanishes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::Error;
use crate::graded::{compare_in_component, compositions, kernel_of, ComponentCertificate, Key};
use crate::lie::{self, Labeled, LieElement, LieWord};
use crate::lincomb::LinComb;
use crate::linalg::{format_scalar, int, parse_scalar};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PoissonWord {
    B1(LieWord),
    B2(Vec<u32>),
    B3 { i: u32, j: u32, k: u32 },
    B4 { i: u32, j: u32, k: u32, l: u32 },
}

pub type PoissonElement = LinComb<PoissonWord>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Block {
    B1,
    B2,
    B3,
    B4,
}

impl Block {
    pub fn as_str(self) -> &'static str {
        match self {
            Block::B1 => "B1",
            Block::B2 => "B2",
            Block::B3 => "B3",
            Block::B4 => "B4",
        }
    }
}

impl PoissonWord {
    pub fn block(&self) -> Block {
        match self {
            PoissonWord::B1(_) => Block::B1,
            PoissonWord::B2(_) => Block::B2,
            PoissonWord::B3 { .. } => Block::B3,
            PoissonWord::B4 { .. } => Block::B4,
        }
    }

    /// Letters in written order (bracket first, then the factor).
    pub fn letters(&self) -> Vec<u32> {
        match self {
            PoissonWord::B1(w) => w.0.clone(),
            PoissonWord::B2(m) => m.clone(),
            PoissonWord::B3 { i, j, k } => vec![*i, *j, *k],
            PoissonWord::B4 { i, j, k, l } => vec![*i, *j, *k, *l],
        }
    }

    pub fn degree(&self) -> usize {
        self.letters().len()
    }

    pub fn is_normal(&self) -> bool {
        match self {
            PoissonWord::B1(w) => w.is_normal(),
            PoissonWord::B2(m) => (2..=3).contains(&m.len()) && m.windows(2).all(|p| p[0] <= p[1]),
            PoissonWord::B3 { i, j, .. } => j < i,
            PoissonWord::B4 { i, j, k, l } => j < i && i <= l && j <= k && k < l,
        }
    }

    pub fn pair_key(&self, n: usize) -> Key {
        let mut key = vec![0; n];
        for l in self.letters() {
            key[l as usize % n] += 1;
        }
        key
    }

    pub fn y_degree(&self, n: usize) -> u32 {
        self.letters().iter().filter(|&&l| l as usize >= n).count() as u32
    }

    pub fn render(&self, n: usize) -> String {
        let name = |l: &u32| lie::letter_name(n, *l);
        let br = |ls: &[u32]| format!("[{}]", ls.iter().map(name).collect::<Vec<_>>().join(","));
        match self {
            PoissonWord::B1(w) => w.render(n),
            PoissonWord::B2(m) => m.iter().map(name).collect::<Vec<_>>().join("*"),
            PoissonWord::B3 { i, j, k } => format!("{}*{}", br(&[*i, *j]), name(k)),
            PoissonWord::B4 { i, j, k, l } => format!("{}*{}", br(&[*i, *j, *k]), name(l)),
        }
    }
}

pub struct Rendered<'a>(pub &'a PoissonElement, pub usize);

impl fmt::Display for Rendered<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.0.iter().map(|(w, c)| format!("({c}){}", w.render(self.1))).collect();
        f.write_str(&parts.join(" + "))
    }
}

pub fn x(i: usize) -> u32 {
    lie::x(i)
}

pub fn y(n: usize, i: usize) -> u32 {
    lie::y(n, i)
}

fn is_x(n: usize, l: u32) -> bool {
    (l as usize) < n
}

pub fn gen(l: u32) -> PoissonElement {
    LinComb::word(PoissonWord::B1(LieWord(vec![l])))
}

pub fn from_lie(e: &LieElement) -> PoissonElement {
    e.map_words(|w| PoissonWord::B1(w.clone()))
}

/// Product of generators; zero for four or more factors.
pub fn b2(letters: &[u32]) -> PoissonElement {
    match letters.len() {
        0 => PoissonElement::zero(),
        1 => gen(letters[0]),
        2 | 3 => {
            let mut m = letters.to_vec();
            m.sort_unstable();
            LinComb::word(PoissonWord::B2(m))
        }
        _ => PoissonElement::zero(),
    }
}

/// [z_a, z_b]·z_c
pub fn b3(a: u32, b: u32, c: u32) -> PoissonElement {
    match a.cmp(&b) {
        std::cmp::Ordering::Equal => PoissonElement::zero(),
        std::cmp::Ordering::Greater => LinComb::word(PoissonWord::B3 { i: a, j: b, k: c }),
        std::cmp::Ordering::Less => LinComb::term(PoissonWord::B3 { i: b, j: a, k: c }, int(-1)),
    }
}

/// [z_a, z_b, z_c]·z_d
pub fn b4(a: u32, b: u32, c: u32, d: u32) -> PoissonElement {
    let mut out = PoissonElement::zero();
    for (w, coef) in lie::normalize_letters(&[a, b, c]).iter() {
        out.add_scaled(coef, &reduce_b4(w.0[0], w.0[1], w.0[2], d));
    }
    out
}

// (i, j, k) is a normal Lie word. The single-swap rule goes first.
fn reduce_b4(i: u32, j: u32, k: u32, l: u32) -> PoissonElement {
    if k == l {
        // [a,b,c]·c = 0
        return PoissonElement::zero();
    }
    if k > l {
        // [a,b,c]·d = −[a,b,d]·c
        return -b4(i, j, l, k);
    }
    if l < i {
        // [a,b,c]·d = [d,b,c]·a − [c,b,d]·a
        return b4(l, j, k, i) - b4(k, j, l, i);
    }
    LinComb::word(PoissonWord::B4 { i, j, k, l })
}

/// Rebuilds an element from the letters of its words; the identity on
/// normal input.
pub fn renormalize(e: &PoissonElement) -> PoissonElement {
    e.flat_map(|w| word_from_letters(w.block(), &w.letters()))
}

fn word_from_letters(block: Block, ls: &[u32]) -> PoissonElement {
    match block {
        Block::B1 => from_lie(&lie::normalize_letters(ls)),
        Block::B2 => b2(ls),
        Block::B3 => b3(ls[0], ls[1], ls[2]),
        Block::B4 => b4(ls[0], ls[1], ls[2], ls[3]),
    }
}

fn as_letter(w: &PoissonWord) -> Option<u32> {
    match w {
        PoissonWord::B1(l) if l.0.len() == 1 => Some(l.0[0]),
        _ => None,
    }
}

// z_a times a word
fn mul_letter(a: u32, w: &PoissonWord) -> PoissonElement {
    match w {
        PoissonWord::B1(lw) => match lw.0.as_slice() {
            &[b] => b2(&[a, b]),
            &[p, q] => b3(p, q, a),
            &[p, q, r] => b4(p, q, r, a),
            _ => PoissonElement::zero(),
        },
        PoissonWord::B2(m) if m.len() == 2 => b2(&[m[0], m[1], a]),
        _ => PoissonElement::zero(),
    }
}

fn mul_words(u: &PoissonWord, v: &PoissonWord) -> PoissonElement {
    match (as_letter(u), as_letter(v)) {
        (Some(a), _) => mul_letter(a, v),
        (_, Some(b)) => mul_letter(b, u),
        // both factors of degree >= 2
        _ => PoissonElement::zero(),
    }
}

// [p, v] for a Lie word p and a word v outside B1
fn bracket_lie_word(p: &LieWord, v: &PoissonWord) -> PoissonElement {
    let &[a] = p.0.as_slice() else {
        // [[a,b], c·d] = 0 and everything deeper
        return PoissonElement::zero();
    };
    match v {
        // [a, c·d] = [a,c]·d + [a,d]·c
        PoissonWord::B2(m) if m.len() == 2 => b3(a, m[0], m[1]) + b3(a, m[1], m[0]),
        // [a, [b,c]·d] = [a,[b,c]]·d + [b,c]·[a,d] = −[b,c,a]·d
        PoissonWord::B3 { i, j, k } => -b4(*i, *j, a, *k),
        _ => PoissonElement::zero(),
    }
}

fn bracket_words(u: &PoissonWord, v: &PoissonWord) -> PoissonElement {
    match (u, v) {
        (PoissonWord::B1(p), PoissonWord::B1(q)) => {
            from_lie(&lie::bracket(&LinComb::word(p.clone()), &LinComb::word(q.clone())))
        }
        (PoissonWord::B1(p), _) => bracket_lie_word(p, v),
        (_, PoissonWord::B1(q)) => -bracket_lie_word(q, u),
        _ => PoissonElement::zero(),
    }
}

pub fn mul(a: &PoissonElement, b: &PoissonElement) -> PoissonElement {
    a.bilinear(b, mul_words)
}

pub fn bracket(a: &PoissonElement, b: &PoissonElement) -> PoissonElement {
    a.bilinear(b, bracket_words)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PoissonTree {
    Gen(u32),
    Mul(Box<PoissonTree>, Box<PoissonTree>),
    Br(Box<PoissonTree>, Box<PoissonTree>),
}

impl PoissonTree {
    pub fn mul(a: PoissonTree, b: PoissonTree) -> Self {
        PoissonTree::Mul(Box::new(a), Box::new(b))
    }

    pub fn br(a: PoissonTree, b: PoissonTree) -> Self {
        PoissonTree::Br(Box::new(a), Box::new(b))
    }

    pub fn leaves(&self) -> usize {
        match self {
            PoissonTree::Gen(_) => 1,
            PoissonTree::Mul(a, b) | PoissonTree::Br(a, b) => a.leaves() + b.leaves(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            PoissonTree::Gen(_) => 0,
            PoissonTree::Mul(a, b) | PoissonTree::Br(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// The tree spelling a normal word.
    pub fn of_word(w: &PoissonWord) -> Self {
        let g = PoissonTree::Gen;
        let left = |ls: &[u32]| {
            ls[1..].iter().fold(g(ls[0]), |t, &l| PoissonTree::br(t, g(l)))
        };
        match w {
            PoissonWord::B1(lw) => left(&lw.0),
            PoissonWord::B2(m) => m[1..].iter().fold(g(m[0]), |t, &l| PoissonTree::mul(t, g(l))),
            PoissonWord::B3 { i, j, k } => PoissonTree::mul(left(&[*i, *j]), g(*k)),
            PoissonWord::B4 { i, j, k, l } => PoissonTree::mul(left(&[*i, *j, *k]), g(*l)),
        }
    }
}

/// Order in which identities are applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewriteOrder {
    /// Normalize subtrees first, then combine normal words.
    BottomUp,
    /// Expand the whole tree into products of Lie words with the Leibniz law,
    /// drop vanishing products, and only then map to normal words.
    Expand,
}

pub fn poisson_normalize(t: &PoissonTree) -> PoissonElement {
    poisson_normalize_with(t, RewriteOrder::BottomUp)
}

pub fn poisson_normalize_with(t: &PoissonTree, s: RewriteOrder) -> PoissonElement {
    match s {
        RewriteOrder::BottomUp => bottom_up(t),
        RewriteOrder::Expand => sym_eval(t).flat_map(|fs| sym_to_poisson(fs)),
    }
}

fn bottom_up(t: &PoissonTree) -> PoissonElement {
    match t {
        PoissonTree::Gen(l) => gen(*l),
        PoissonTree::Mul(a, b) => mul(&bottom_up(a), &bottom_up(b)),
        PoissonTree::Br(a, b) => bracket(&bottom_up(a), &bottom_up(b)),
    }
}

// A product of Lie words, sorted.
type SymTerm = Vec<LieWord>;

// Products surviving the zero identities: one Lie word; a generator times a
// word of length <= 3; three generators.
fn sym_survives(fs: &[LieWord]) -> bool {
    let long = fs.iter().filter(|w| w.0.len() >= 2).count();
    match fs.len() {
        1 => true,
        2 => long <= 1 && fs.iter().all(|w| w.0.len() <= 3),
        3 => long == 0,
        _ => false,
    }
}

fn sym_word(mut fs: SymTerm) -> LinComb<SymTerm> {
    fs.sort();
    if sym_survives(&fs) {
        LinComb::word(fs)
    } else {
        LinComb::zero()
    }
}

fn sym_eval(t: &PoissonTree) -> LinComb<SymTerm> {
    match t {
        PoissonTree::Gen(l) => LinComb::word(vec![LieWord(vec![*l])]),
        PoissonTree::Mul(a, b) => sym_eval(a).bilinear(&sym_eval(b), |u, v| {
            let mut fs = u.clone();
            fs.extend(v.iter().cloned());
            sym_word(fs)
        }),
        // [A1...Ap, B1...Bq] = Σ [A_a, B_b] · (the other factors)
        PoissonTree::Br(a, b) => sym_eval(a).bilinear(&sym_eval(b), |u, v| {
            let mut out = LinComb::zero();
            for ia in 0..u.len() {
                for ib in 0..v.len() {
                    let br = lie::bracket(&LinComb::word(u[ia].clone()), &LinComb::word(v[ib].clone()));
                    for (w, c) in br.iter() {
                        let mut fs: SymTerm = Vec::new();
                        fs.extend(u.iter().enumerate().filter(|(p, _)| *p != ia).map(|(_, f)| f.clone()));
                        fs.extend(v.iter().enumerate().filter(|(p, _)| *p != ib).map(|(_, f)| f.clone()));
                        fs.push(w.clone());
                        out.add_scaled(c, &sym_word(fs));
                    }
                }
            }
            out
        }),
    }
}

fn sym_to_poisson(fs: &SymTerm) -> PoissonElement {
    match fs.len() {
        1 => LinComb::word(PoissonWord::B1(fs[0].clone())),
        2 => {
            let (a, w) = if fs[0].0.len() == 1 { (fs[0].0[0], &fs[1].0) } else { (fs[1].0[0], &fs[0].0) };
            match w.as_slice() {
                &[b] => b2(&[a, b]),
                &[p, q] => b3(p, q, a),
                &[p, q, r] => b4(p, q, r, a),
                _ => PoissonElement::zero(),
            }
        }
        3 => b2(&fs.iter().map(|w| w.0[0]).collect::<Vec<_>>()),
        _ => PoissonElement::zero(),
    }
}

/// δ(y_i) = x_i, δ(x_i) = 0
fn delta_letter(n: usize, l: u32) -> Option<u32> {
    (l as usize >= n).then(|| l - n as u32)
}

pub fn delta_word(n: usize, w: &PoissonWord) -> PoissonElement {
    if let PoissonWord::B1(lw) = w {
        return from_lie(&lie::delta_lie(&LinComb::word(lw.clone()), n));
    }
    let ls = w.letters();
    let mut out = PoissonElement::zero();
    for p in 0..ls.len() {
        if let Some(d) = delta_letter(n, ls[p]) {
            let mut v = ls.clone();
            v[p] = d;
            out.add_assign(&word_from_letters(w.block(), &v));
        }
    }
    out
}

/// δ extended to P_{2n} by the Leibniz law for both operations.
pub fn poisson_delta(e: &PoissonElement, n: usize) -> PoissonElement {
    e.flat_map(|w| delta_word(n, w))
}

pub fn element_pair_key(e: &PoissonElement, n: usize) -> Option<Key> {
    let mut ks = e.words().map(|w| w.pair_key(n));
    let first = ks.next()?;
    ks.all(|k| k == first).then_some(first)
}

/// Parts of an element in K·B1, ..., K·B4.
pub fn split_blocks(e: &PoissonElement) -> BTreeMap<Block, PoissonElement> {
    let mut out: BTreeMap<Block, PoissonElement> = BTreeMap::new();
    for (w, c) in e.iter() {
        out.entry(w.block()).or_default().add_term(w.clone(), c.clone());
    }
    out
}

// Sorted letter lists with the given pair degrees.
fn letter_multisets(n: usize, key: &[u32]) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = vec![Vec::new()];
    for (i, &k) in key.iter().enumerate() {
        out = out
            .into_iter()
            .flat_map(|c| {
                (0..=k).map(move |a| {
                    let mut c = c.clone();
                    c.extend(std::iter::repeat(i as u32).take(a as usize));
                    c.extend(std::iter::repeat((n + i) as u32).take((k - a) as usize));
                    c
                })
            })
            .collect();
    }
    for m in &mut out {
        m.sort_unstable();
    }
    out
}

fn permutations(ls: &[u32]) -> BTreeSet<Vec<u32>> {
    if ls.len() <= 1 {
        return std::iter::once(ls.to_vec()).collect();
    }
    let mut out = BTreeSet::new();
    for p in 0..ls.len() {
        let mut rest = ls.to_vec();
        let h = rest.remove(p);
        for mut t in permutations(&rest) {
            t.insert(0, h);
            out.insert(t);
        }
    }
    out
}

/// Normal words of one block with the given pair degrees.
pub fn block_basis(n: usize, key: &[u32], block: Block) -> Vec<PoissonWord> {
    let total: u32 = key.iter().sum();
    let mut out: BTreeSet<PoissonWord> = BTreeSet::new();
    match block {
        Block::B1 if total == 1 => {
            for m in letter_multisets(n, key) {
                out.insert(PoissonWord::B1(LieWord(m)));
            }
        }
        Block::B1 => out.extend(lie::commutator_basis(n, key).into_iter().map(PoissonWord::B1)),
        Block::B2 if total == 2 || total == 3 => {
            out.extend(letter_multisets(n, key).into_iter().map(PoissonWord::B2));
        }
        Block::B3 | Block::B4 if total as usize == 3 + (block == Block::B4) as usize => {
            for m in letter_multisets(n, key) {
                for p in permutations(&m) {
                    let w = match block {
                        Block::B3 => PoissonWord::B3 { i: p[0], j: p[1], k: p[2] },
                        _ => PoissonWord::B4 { i: p[0], j: p[1], k: p[2], l: p[3] },
                    };
                    if w.is_normal() {
                        out.insert(w);
                    }
                }
            }
        }
        _ => {}
    }
    out.into_iter().collect()
}

/// All normal words with the given pair degrees.
pub fn component_basis(n: usize, key: &[u32]) -> Vec<PoissonWord> {
    [Block::B1, Block::B2, Block::B3, Block::B4].iter().flat_map(|&b| block_basis(n, key, b)).collect()
}

/// Basis of ker δ on a component. A key of length n fixes the pair degrees;
/// a key of length 2n (degrees in x_1..x_n, y_1..y_n) fixes the pair
/// degrees and the total y-degree, the finest grading δ respects.
pub fn poisson_kernel_component(n: usize, key: &[u32]) -> Result<Vec<PoissonElement>, Error> {
    let (pair, ydeg): (Key, Option<u32>) = if key.len() == n {
        (key.to_vec(), None)
    } else if key.len() == 2 * n {
        ((0..n).map(|i| key[i] + key[n + i]).collect(), Some(key[n..].iter().sum()))
    } else {
        return Err(Error::schema("multidegree", format!("expected {n} or {} entries, got {}", 2 * n, key.len())));
    };
    let basis: Vec<PoissonWord> = component_basis(n, &pair)
        .into_iter()
        .filter(|w| ydeg.map_or(true, |d| w.y_degree(n) == d))
        .collect();
    Ok(kernel_of(&basis, |w| delta_word(n, w)))
}

/// Every kernel vector splits into block pieces that are kernel vectors.
pub fn kernel_splits_by_block(n: usize, kernel: &[PoissonElement]) -> bool {
    kernel
        .iter()
        .all(|e| split_blocks(e).values().all(|p| poisson_delta(p, n).is_zero()))
}

/// Sub-blocks of B3 (A1..A6) and B4 (B1..B6) by letter types.
pub fn sub_block(n: usize, w: &PoissonWord) -> Option<&'static str> {
    let t: String = w.letters().iter().map(|&l| if is_x(n, l) { 'x' } else { 'y' }).collect();
    let name = match (w.block(), t.as_str()) {
        (Block::B3, "xxx") => "A1",
        (Block::B3, "yyy") => "A2",
        (Block::B3, "xxy") => "A3",
        (Block::B3, "yyx") => "A4",
        (Block::B3, "yxy") => "A5",
        (Block::B3, "yxx") => "A6",
        (Block::B4, "xxxx") => "B1",
        (Block::B4, "yyyy") => "B2",
        (Block::B4, "xxxy") => "B3",
        (Block::B4, "xxyy") => "B4",
        (Block::B4, "yxxy") => "B5",
        (Block::B4, "yxyy") => "B6",
        _ => return None,
    };
    Some(name)
}

/// ker δ restricted to the span of the sub-blocks A2, A4+A5, B2 and B6; each
/// certificate compares the empty set with that kernel.
pub fn verify_zero_subblocks(n: usize) -> Vec<ComponentCertificate> {
    let groups: [(Block, &[&str], &str); 4] = [
        (Block::B3, &["A2"], "B3/A2"),
        (Block::B3, &["A4", "A5"], "B3/A4+A5"),
        (Block::B4, &["B2"], "B4/B2"),
        (Block::B4, &["B6"], "B4/B6"),
    ];
    let mut jobs = Vec::new();
    for (block, names, label) in groups {
        let total = if block == Block::B3 { 3 } else { 4 };
        for key in compositions(n, total) {
            jobs.push((block, names, label, key));
        }
    }
    jobs.into_par_iter()
        .filter_map(|(block, names, label, key)| {
            let basis: Vec<PoissonWord> = block_basis(n, &key, block)
                .into_iter()
                .filter(|w| sub_block(n, w).is_some_and(|s| names.contains(&s)))
                .collect();
            if basis.is_empty() {
                return None;
            }
            let kernel = kernel_of(&basis, |w| delta_word(n, w));
            Some(compare_in_component(&key, label, &basis, &kernel, &[], false, true))
        })
        .collect()
}

pub type Claimed = Labeled<PoissonElement>;

/// u_{i,j} = x_i·y_j − x_j·y_i
pub fn u(n: usize, i: usize, j: usize) -> PoissonElement {
    b2(&[x(i), y(n, j)]) - b2(&[x(j), y(n, i)])
}

/// X_n, u_{i,j} (i < j), and u_{i,j}·x_k (i < j, any k).
pub fn b2_constants(n: usize) -> Vec<Claimed> {
    let mut out = Vec::new();
    for i in 1..=n {
        out.push(Labeled { family: 1, indices: vec![i], element: gen(x(i)) });
    }
    for i in 1..=n {
        for j in i + 1..=n {
            out.push(Labeled { family: 2, indices: vec![i, j], element: u(n, i, j) });
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            for k in 1..=n {
                out.push(Labeled { family: 3, indices: vec![i, j, k], element: mul(&u(n, i, j), &gen(x(k))) });
            }
        }
    }
    out
}

/// x_i·u_{j,k} − x_j·u_{i,k} + x_k·u_{i,j}
pub fn b2_relation(n: usize, i: usize, j: usize, k: usize) -> PoissonElement {
    let xu = |a: usize, b: usize, c: usize| mul(&gen(x(a)), &u(n, b, c));
    xu(i, j, k) - xu(j, i, k) + xu(k, i, j)
}

/// Span of the products of x's and u's in B2 against ker δ ∩ K·B2, per
/// component of total degree 2 and 3.
pub fn verify_b2(n: usize) -> Vec<ComponentCertificate> {
    let mut inst: Vec<PoissonElement> = Vec::new();
    for i in 1..=n {
        for j in i..=n {
            inst.push(b2(&[x(i), x(j)]));
            for k in j..=n {
                inst.push(b2(&[x(i), x(j), x(k)]));
            }
        }
    }
    for c in b2_constants(n).into_iter().filter(|c| c.family > 1) {
        inst.push(c.element);
    }
    let constants = inst.iter().all(|e| poisson_delta(e, n).is_zero());
    let keys: Vec<Key> = (2..=3).flat_map(|t| compositions(n, t)).collect();
    keys.into_par_iter()
        .map(|key| {
            let basis = block_basis(n, &key, Block::B2);
            let claimed: Vec<PoissonElement> = inst
                .iter()
                .filter(|e| element_pair_key(e, n).as_ref() == Some(&key))
                .cloned()
                .collect();
            let kernel = kernel_of(&basis, |w| delta_word(n, w));
            compare_in_component(&key, "B2", &basis, &kernel, &claimed, false, constants)
        })
        .collect()
}

/// Index ranges for the claimed families; indices are (i, j, k, l).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Range {
    I,
    IJ,
    JltI,
    JltIKany,
    JltIltK,
    JltIltKltL,
    /// j < i <= l, j <= k < l
    Chain,
}

fn instances(r: Range, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let all = || 1..=n;
    for i in all() {
        for j in all() {
            for k in all() {
                for l in all() {
                    let keep = match r {
                        Range::I => j == 1 && k == 1 && l == 1,
                        Range::IJ => k == 1 && l == 1,
                        Range::JltI => j < i && k == 1 && l == 1,
                        Range::JltIKany => j < i && l == 1,
                        Range::JltIltK => j < i && i < k && l == 1,
                        Range::JltIltKltL => j < i && i < k && k < l,
                        Range::Chain => j < i && i <= l && j <= k && k < l,
                    };
                    if keep {
                        let used = match r {
                            Range::I => 1,
                            Range::IJ | Range::JltI => 2,
                            Range::JltIKany | Range::JltIltK => 3,
                            _ => 4,
                        };
                        out.push([i, j, k, l][..used].to_vec());
                    }
                }
            }
        }
    }
    out
}

/// Evaluates a family written as e.g. "[x_i,x_j,x_i]y_j-2[x_i,x_j,y_j]y_i"
/// at the given (i, j, k, l).
fn eval_family(n: usize, text: &str, idx: &[usize]) -> PoissonElement {
    let letter = |s: &str| -> u32 {
        let b = s.as_bytes();
        let v = match b[2] {
            b'i' => idx[0],
            b'j' => idx[1],
            b'k' => idx[2],
            b'l' => idx[3],
            _ => panic!("bad index in {text}"),
        };
        if b[0] == b'x' {
            x(v)
        } else {
            y(n, v)
        }
    };
    let mut out = PoissonElement::zero();
    let mut rest = text;
    while !rest.is_empty() {
        let (sign, r) = match rest.as_bytes()[0] {
            b'-' => (-1, &rest[1..]),
            b'+' => (1, &rest[1..]),
            _ => (1, rest),
        };
        let open = r.find('[').expect("bracket");
        let coef: i64 = if open == 0 { 1 } else { r[..open].parse().expect("coefficient") };
        let close = r.find(']').expect("bracket");
        let br: Vec<u32> = r[open + 1..close].split(',').map(letter).collect();
        let factor = letter(&r[close + 1..close + 4]);
        let t = match br.as_slice() {
            &[a, b] => b3(a, b, factor),
            &[a, b, c] => b4(a, b, c, factor),
            _ => panic!("bad term in {text}"),
        };
        out.add_scaled(&int(sign * coef), &t);
        rest = &r[close + 4..];
    }
    out
}

fn emit(n: usize, families: &[(Range, &str)]) -> Vec<Claimed> {
    let mut out = Vec::new();
    for (f, (r, text)) in families.iter().enumerate() {
        for idx in instances(*r, n) {
            let mut full = idx.clone();
            full.resize(4, 1);
            out.push(Labeled { family: f + 1, indices: idx, element: eval_family(n, text, &full) });
        }
    }
    out
}

/// Index range of the two mixed KB3 families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kb3Reading {
    /// j < i < k
    Strict,
    /// j < i, any k
    Proof,
}

impl Kb3Reading {
    pub fn as_str(self) -> &'static str {
        match self {
            Kb3Reading::Strict => "j<i<k",
            Kb3Reading::Proof => "j<i,k-any",
        }
    }
}

pub fn kb3_claimed_basis(n: usize, reading: Kb3Reading) -> Vec<Claimed> {
    let mixed = match reading {
        Kb3Reading::Strict => Range::JltIltK,
        Kb3Reading::Proof => Range::JltIKany,
    };
    emit(
        n,
        &[
            (Range::JltIKany, "[x_i,x_j]x_k"),
            (Range::IJ, "[y_i,x_i]x_j"),
            (mixed, "[x_i,x_j]y_k+[y_j,x_i]x_k"),
            (mixed, "[y_i,x_j]x_k+[y_j,x_i]x_k"),
        ],
    )
}

/// The KB4 families in their listed order. The first of the y-families uses
/// only the index i and is taken over every i.
const KB4_FAMILIES: [(Range, &str); 34] = [
    (Range::Chain, "[x_i,x_j,x_k]x_l"),
    (Range::JltI, "[x_i,x_j,x_j]y_j"),
    (Range::JltI, "[x_i,x_j,x_i]y_i"),
    (Range::JltI, "[x_i,x_j,x_i]y_j+[x_i,x_j,x_j]y_i"),
    (Range::JltIltK, "[x_i,x_j,x_k]y_k"),
    (Range::JltIltK, "[x_k,x_j,x_i]y_i"),
    (Range::JltIltK, "[x_i,x_j,x_i]y_k+[x_i,x_j,x_k]y_i"),
    (Range::JltIltK, "[x_i,x_j,x_i]y_k+[x_k,x_i,x_i]y_j"),
    (Range::JltIltK, "[x_i,x_j,x_k]y_j-[x_k,x_j,x_i]y_j"),
    (Range::JltIltK, "[x_i,x_j,x_k]y_j+[x_i,x_j,x_j]y_k"),
    (Range::JltIltK, "[x_i,x_j,x_k]y_j+[x_k,x_j,x_j]y_i"),
    (Range::JltIltK, "[x_k,x_j,x_k]y_i+[x_k,x_j,x_i]y_k"),
    (Range::JltIltK, "[x_k,x_j,x_k]y_i-[x_k,x_i,x_k]y_j"),
    (Range::JltIltKltL, "[x_k,x_j,x_l]y_i+[x_i,x_j,x_k]y_l-[x_k,x_i,x_l]y_j"),
    (Range::JltIltKltL, "[x_k,x_j,x_i]y_l-[x_i,x_j,x_k]y_l+[x_k,x_i,x_l]y_j"),
    (Range::JltIltKltL, "[x_l,x_i,x_k]y_j+[x_i,x_j,x_k]y_l-[x_k,x_i,x_l]y_j"),
    (Range::JltIltKltL, "[x_i,x_j,x_l]y_k+[x_i,x_j,x_k]y_l"),
    (Range::JltIltKltL, "[x_l,x_j,x_i]y_k+[x_k,x_i,x_l]y_j"),
    (Range::JltIltKltL, "[x_l,x_j,x_k]y_i-[x_k,x_i,x_l]y_j"),
    (Range::I, "[y_i,x_i,x_i]y_i"),
    (Range::JltI, "[y_j,x_j,x_i]y_i"),
    (Range::JltI, "[y_j,x_i,x_i]y_i+[y_i,x_j,x_i]y_i"),
    (Range::JltI, "[y_j,x_j,x_i]y_j+[y_j,x_j,x_j]y_i"),
    (Range::JltI, "[y_j,x_i,x_i]y_j-2[x_i,x_j,y_j]y_i+[y_i,x_j,x_j]y_i"),
    (Range::JltIltK, "[y_i,x_j,x_k]y_i+[x_i,x_j,y_i]y_k+[x_k,x_i,y_j]y_i+[y_j,x_i,x_i]y_k"),
    (Range::JltIltK, "[y_j,x_i,x_k]y_i-[x_i,x_j,y_i]y_k-[x_k,x_i,y_j]y_i+[y_i,x_j,x_i]y_k"),
    (Range::JltIltK, "[x_k,x_j,y_i]y_k+[x_k,x_i,y_j]y_k-[y_j,x_k,x_k]y_i-[y_k,x_j,x_i]y_k"),
    (Range::JltIltK, "[y_i,x_j,x_k]y_k+[y_j,x_i,x_k]y_k"),
    (Range::JltIltK, "[y_j,x_j,x_k]y_i+[y_j,x_j,x_i]y_k"),
    (Range::JltIltK, "[x_i,x_j,y_j]y_k+[x_k,x_j,y_j]y_i-[y_i,x_j,x_j]y_k-[y_j,x_i,x_k]y_j"),
    (Range::JltIltKltL, "[x_l,x_k,y_j]y_i+[x_i,x_j,y_k]y_l+[y_j,x_i,x_k]y_l+[y_i,x_j,x_l]y_k"),
    (Range::JltIltKltL, "[y_j,x_k,x_l]y_i+[y_k,x_j,x_i]y_l-[x_l,x_i,y_j]y_k-[x_k,x_j,y_i]y_l"),
    (Range::JltIltKltL, "[y_j,x_i,x_l]y_k+[y_i,x_j,x_k]y_l+[y_j,x_i,x_k]y_l+[y_i,x_j,x_l]y_k"),
    (
        Range::JltIltKltL,
        "[x_l,x_j,y_i]y_k+[x_k,x_i,y_j]y_l-[y_j,x_i,x_k]y_l-[y_i,x_j,x_l]y_k-[x_l,x_i,y_j]y_k-[x_k,x_j,y_i]y_l",
    ),
];

pub fn kb4_family_text(family: usize) -> &'static str {
    KB4_FAMILIES[family - 1].1
}

pub fn kb4_claimed_basis(n: usize) -> Vec<Claimed> {
    emit(n, &KB4_FAMILIES)
}

pub fn kb3_family_text(family: usize) -> &'static str {
    ["[x_i,x_j]x_k", "[y_i,x_i]x_j", "[x_i,x_j]y_k+[y_j,x_i]x_k", "[y_i,x_j]x_k+[y_j,x_i]x_k"][family - 1]
}

/// Outcome of checking a claimed basis of (K·B3)^δ or (K·B4)^δ.
#[derive(Clone, Debug)]
pub struct KbReport {
    pub block: Block,
    pub reading: Option<Kb3Reading>,
    pub certificates: Vec<ComponentCertificate>,
    /// Claimed elements that are not constants.
    pub non_constant: Vec<Claimed>,
    /// Claimed elements that normalize to zero.
    pub zero: Vec<Claimed>,
    pub claimed: usize,
}

impl KbReport {
    pub fn ok(&self) -> bool {
        self.non_constant.is_empty() && self.zero.is_empty() && crate::graded::all_ok(&self.certificates)
    }

    pub fn dim_kernel(&self) -> usize {
        self.certificates.iter().map(|c| c.dim_kernel).sum()
    }

    pub fn to_json(&self, n: usize) -> Value {
        let lab = |c: &Claimed| {
            json!({"family": c.family, "indices": c.indices, "element": Rendered(&c.element, n).to_string()})
        };
        json!({
            "block": self.block.as_str(),
            "reading": self.reading.map(Kb3Reading::as_str),
            "claimed": self.claimed,
            "dim_kernel": self.dim_kernel(),
            "non_constant": self.non_constant.iter().map(lab).collect::<Vec<_>>(),
            "zero": self.zero.iter().map(lab).collect::<Vec<_>>(),
            "ok": self.ok(),
        })
    }
}

/// Per pair-degree component of the block: claimed elements are constants,
/// independent, and span ker δ ∩ K·B. `reading` only matters for B3.
pub fn verify_kb(n: usize, block: Block, reading: Kb3Reading) -> KbReport {
    let (claims, total) = match block {
        Block::B3 => (kb3_claimed_basis(n, reading), 3),
        Block::B4 => (kb4_claimed_basis(n), 4),
        _ => panic!("verify_kb covers B3 and B4"),
    };
    let non_constant: Vec<Claimed> =
        claims.iter().filter(|c| !poisson_delta(&c.element, n).is_zero()).cloned().collect();
    let zero: Vec<Claimed> = claims.iter().filter(|c| c.element.is_zero()).cloned().collect();
    let certificates = compositions(n, total)
        .into_par_iter()
        .filter_map(|key| {
            let basis = block_basis(n, &key, block);
            if basis.is_empty() {
                return None;
            }
            let mine: Vec<&Claimed> = claims
                .iter()
                .filter(|c| !c.element.is_zero() && element_pair_key(&c.element, n).as_ref() == Some(&key))
                .collect();
            let claimed: Vec<PoissonElement> = mine.iter().map(|c| c.element.clone()).collect();
            let constants = claimed.iter().all(|e| poisson_delta(e, n).is_zero());
            let kernel = kernel_of(&basis, |w| delta_word(n, w));
            Some(compare_in_component(&key, block.as_str(), &basis, &kernel, &claimed, true, constants))
        })
        .collect();
    KbReport {
        block,
        reading: (block == Block::B3).then_some(reading),
        certificates,
        non_constant,
        zero,
        claimed: claims.len(),
    }
}

pub fn word_to_json(w: &PoissonWord) -> Value {
    let one = |v: Vec<u32>| v.into_iter().map(|l| l + 1).collect::<Vec<_>>();
    match w {
        PoissonWord::B1(lw) => json!({"shape": "B1", "bracket": one(lw.0.clone())}),
        PoissonWord::B2(m) => json!({"shape": "B2", "monomial": one(m.clone())}),
        PoissonWord::B3 { i, j, k } => json!({"shape": "B3", "bracket": one(vec![*i, *j]), "factor": k + 1}),
        PoissonWord::B4 { i, j, k, l } => {
            json!({"shape": "B4", "bracket": one(vec![*i, *j, *k]), "factor": l + 1})
        }
    }
}

/// `{"algebra":"poisson","n":n,"terms":[{"c":"1/2","shape":"B3","bracket":[i,j],"factor":k}]}`
/// with 1-based generator indices z_1..z_{2n}.
pub fn to_json(n: usize, e: &PoissonElement) -> Value {
    let terms: Vec<Value> = e
        .iter()
        .map(|(w, c)| {
            let mut t = word_to_json(w);
            t["c"] = json!(format_scalar(c));
            t
        })
        .collect();
    json!({"algebra": "poisson", "n": n, "terms": terms})
}

/// Parses and normalizes an element. A B3 term with equal bracket entries
/// is rejected.
pub fn from_json(v: &Value) -> Result<(usize, PoissonElement), Error> {
    if v.get("algebra").and_then(Value::as_str) != Some("poisson") {
        return Err(Error::schema("algebra", "expected \"poisson\""));
    }
    let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| Error::schema("n", "missing or not a natural number"))?
        as usize;
    let terms = v.get("terms").and_then(Value::as_array).ok_or_else(|| Error::schema("terms", "missing array"))?;
    let mut out = PoissonElement::zero();
    for (p, t) in terms.iter().enumerate() {
        let field = |f: &str| format!("terms[{p}].{f}");
        let c = t.get("c").and_then(Value::as_str).ok_or_else(|| Error::schema(field("c"), "missing string"))?;
        let c = parse_scalar(c).map_err(|e| Error::schema(field("c"), e.to_string()))?;
        let shape = t.get("shape").and_then(Value::as_str).ok_or_else(|| Error::schema(field("shape"), "missing"))?;
        let list = |f: &str| -> Result<Vec<u32>, Error> {
            let a = t.get(f).and_then(Value::as_array).ok_or_else(|| Error::schema(field(f), "missing array"))?;
            a.iter()
                .map(|x| match x.as_u64() {
                    Some(i) if i >= 1 && i as usize <= 2 * n => Ok(i as u32 - 1),
                    _ => Err(Error::schema(field(f), format!("generator index outside 1..={}", 2 * n))),
                })
                .collect()
        };
        let factor = || -> Result<u32, Error> {
            match t.get("factor").and_then(Value::as_u64) {
                Some(i) if i >= 1 && i as usize <= 2 * n => Ok(i as u32 - 1),
                _ => Err(Error::schema(field("factor"), format!("generator index outside 1..={}", 2 * n))),
            }
        };
        let e = match shape {
            "B1" => {
                let b = list("bracket")?;
                if b.is_empty() {
                    return Err(Error::schema(field("bracket"), "empty bracket"));
                }
                from_lie(&lie::normalize_letters(&b))
            }
            "B2" => {
                let m = list("monomial")?;
                if !(2..=3).contains(&m.len()) {
                    return Err(Error::schema(field("monomial"), "expected 2 or 3 factors"));
                }
                b2(&m)
            }
            "B3" => {
                let b = list("bracket")?;
                if b.len() != 2 {
                    return Err(Error::schema(field("bracket"), "expected 2 entries"));
                }
                if b[0] == b[1] {
                    return Err(Error::schema(field("bracket"), "degenerate bracket [z_i, z_i]"));
                }
                b3(b[0], b[1], factor()?)
            }
            "B4" => {
                let b = list("bracket")?;
                if b.len() != 3 {
                    return Err(Error::schema(field("bracket"), "expected 3 entries"));
                }
                b4(b[0], b[1], b[2], factor()?)
            }
            other => return Err(Error::schema(field("shape"), format!("unknown shape {other:?}"))),
        };
        out.add_scaled(&c, &e);
    }
    Ok((n, out))
}
