//! Polynomial rings K[X_m, Y_m] with Weitzenböck and elementary derivations.
//!
//! Variables are laid out as an X-block followed by a Y-block: index `i`
//! is x_{i+1} and `m + i` is y_{i+1}. The Jordan kind uses plain z_1..z_m.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::Error;
use crate::graded::{
    compare_in_component, key_add, keys_between, unit_key, weighted_exponents, Closure,
    ComponentCertificate, Key,
};
use crate::lincomb::LinComb;
use crate::linalg::{int, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, o: &Self) -> Self {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&o.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }
}

// graded lexicographic
impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| o.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyElement {
    nvars: usize,
    terms: LinComb<Monomial>,
}

impl PolyElement {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: LinComb::zero() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Scalar::one())
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        Self { nvars, terms: LinComb::term(Monomial::one(nvars), c) }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self { nvars, terms: LinComb::word(Monomial::var(nvars, i)) }
    }

    /// x_i (1-based) in K[X_m, Y_m].
    pub fn x(m: usize, i: usize) -> Self {
        Self::var(2 * m, i - 1)
    }

    /// y_i (1-based) in K[X_m, Y_m].
    pub fn y(m: usize, i: usize) -> Self {
        Self::var(2 * m, m + i - 1)
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Scalar)>>(nvars: usize, it: I) -> Self {
        let terms = LinComb::from_terms(it);
        debug_assert!(terms.words().all(|m| m.0.len() == nvars));
        Self { nvars, terms }
    }

    pub fn monomial(m: Monomial) -> Self {
        Self { nvars: m.0.len(), terms: LinComb::word(m) }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &LinComb<Monomial> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        Self { nvars: self.nvars, terms: self.terms.scale(k) }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars);
        Self { nvars: self.nvars, terms: &self.terms + &o.terms }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars);
        Self { nvars: self.nvars, terms: &self.terms - &o.terms }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars);
        Self {
            nvars: self.nvars,
            terms: self.terms.bilinear(&o.terms, |a, b| LinComb::word(a.mul(b))),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.nvars), |acc, _| acc.mul(self))
    }

    /// Exact division by a monomial; `None` if some term is not divisible.
    pub fn div_monomial(&self, m: &Monomial) -> Option<Self> {
        let mut out = Self::zero(self.nvars);
        for (w, c) in self.terms.iter() {
            out.terms.add_term(w.div(m)?, c.clone());
        }
        Some(out)
    }

    pub fn partial(&self, v: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (w, c) in self.terms.iter() {
            let e = w.0[v];
            if e > 0 {
                let mut m = w.clone();
                m.0[v] -= 1;
                out.terms.add_term(m, c * int(e as i64));
            }
        }
        out
    }

    /// Largest exponent of variable `v` appearing.
    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.words().map(|m| m.0[v]).max().unwrap_or(0)
    }

    /// Coefficient of `var^e` viewed as a polynomial in `var`.
    pub fn coefficient_of(&self, var: usize, e: u32) -> Self {
        let mut out = Self::zero(self.nvars);
        for (w, c) in self.terms.iter() {
            if w.0[var] == e {
                let mut m = w.clone();
                m.0[var] = 0;
                out.terms.add_term(m, c.clone());
            }
        }
        out
    }

    /// Splits into parts grouped by `f(monomial)`.
    pub fn split_by<K: Ord, F: Fn(&Monomial) -> K>(&self, f: F) -> BTreeMap<K, PolyElement> {
        let mut out: BTreeMap<K, PolyElement> = BTreeMap::new();
        for (w, c) in self.terms.iter() {
            out.entry(f(w))
                .or_insert_with(|| Self::zero(self.nvars))
                .terms
                .add_term(w.clone(), c.clone());
        }
        out
    }

    /// Text with x/y names when the variable count is even, z names otherwise.
    pub fn render(&self, names: &VarNames) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        // highest degree first reads more naturally
        let terms: Vec<_> = self.terms.iter().collect();
        for (k, (w, c)) in terms.iter().rev().enumerate() {
            let neg = c < &&Scalar::zero();
            let a = if neg { -(*c).clone() } else { (*c).clone() };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let vars: Vec<String> = w
                .0
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| if *e == 1 { names.name(i) } else { format!("{}^{}", names.name(i), e) })
                .collect();
            if vars.is_empty() {
                s.push_str(&a.to_string());
            } else {
                if !a.is_one() {
                    s.push_str(&format!("{a}*"));
                }
                s.push_str(&vars.join("*"));
            }
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarNames {
    XY(usize),
    Z,
}

impl VarNames {
    pub fn name(&self, i: usize) -> String {
        match *self {
            VarNames::XY(m) if i < m => format!("x{}", i + 1),
            VarNames::XY(m) => format!("y{}", i - m + 1),
            VarNames::Z => format!("z{}", i + 1),
        }
    }
}

impl fmt::Display for PolyElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = if self.nvars % 2 == 0 { VarNames::XY(self.nvars / 2) } else { VarNames::Z };
        f.write_str(&self.render(&names))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DerivationKind {
    /// δ(y_i) = x_i, δ(x_i) = 0 for i = 1..d.
    Paired { d: usize },
    /// Nilpotent Jordan cells on z_1..z_m: within a cell starting at a,
    /// δ(z_a) = 0 and δ(z_{a+t}) = z_{a+t-1}.
    Jordan { partition: Vec<usize> },
    /// Δ(x_i) = 0, Δ(y_i) = f_i with f_i in K[X_m].
    Elementary { images: Vec<PolyElement> },
}

/// Variables grouped into blocks the derivation maps into themselves, each
/// variable carrying a positive weight that the derivation preserves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    pub groups: Vec<Vec<(usize, u32)>>,
}

impl Grading {
    pub fn key(&self, m: &Monomial) -> Key {
        self.groups
            .iter()
            .map(|g| g.iter().map(|(v, w)| m.0[*v] * w).sum())
            .collect()
    }

    /// Monomials whose key is exactly `key`.
    pub fn component(&self, nvars: usize, key: &[u32]) -> Vec<Monomial> {
        let mut out = vec![vec![0u32; nvars]];
        for (g, &total) in self.groups.iter().zip(key) {
            let ws: Vec<u32> = g.iter().map(|(_, w)| *w).collect();
            let choices = weighted_exponents(&ws, total);
            out = out
                .iter()
                .flat_map(|base| {
                    choices.iter().map(move |c| {
                        let mut e = base.clone();
                        for ((v, _), x) in g.iter().zip(c) {
                            e[*v] = *x;
                        }
                        e
                    })
                })
                .collect();
        }
        let mut ms: Vec<Monomial> = out.into_iter().map(Monomial).collect();
        ms.sort();
        ms
    }

    /// The key of `f` if all its terms share one.
    pub fn homogeneous_key(&self, f: &PolyElement) -> Option<Key> {
        let mut keys = f.terms().words().map(|m| self.key(m));
        let first = keys.next()?;
        keys.all(|k| k == first).then_some(first)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeitzenboeckDerivation {
    kind: DerivationKind,
    nvars: usize,
    action: Vec<PolyElement>,
}

impl WeitzenboeckDerivation {
    pub fn paired(d: usize) -> Self {
        let n = 2 * d;
        let mut action = vec![PolyElement::zero(n); n];
        for i in 0..d {
            action[d + i] = PolyElement::var(n, i);
        }
        Self { kind: DerivationKind::Paired { d }, nvars: n, action }
    }

    pub fn jordan(partition: &[usize]) -> Result<Self, Error> {
        if partition.contains(&0) {
            return Err(Error::InvalidDerivation("Jordan cell of size 0".into()));
        }
        let n: usize = partition.iter().sum();
        let mut action = vec![PolyElement::zero(n); n];
        let mut start = 0;
        for &s in partition {
            for t in 1..s {
                action[start + t] = PolyElement::var(n, start + t - 1);
            }
            start += s;
        }
        Ok(Self { kind: DerivationKind::Jordan { partition: partition.to_vec() }, nvars: n, action })
    }

    /// Δ(y_i) = images[i]; every image must live in K[X_m].
    pub fn elementary(images: &[PolyElement]) -> Result<Self, Error> {
        let m = images.len();
        let n = 2 * m;
        for (i, f) in images.iter().enumerate() {
            if f.nvars() != n {
                return Err(Error::VariableMismatch { expected: n, found: f.nvars() });
            }
            if f.terms().words().any(|w| w.0[m..].iter().any(|e| *e > 0)) {
                return Err(Error::InvalidDerivation(format!(
                    "image of y{} involves Y-variables",
                    i + 1
                )));
            }
        }
        let mut action = vec![PolyElement::zero(n); n];
        for (i, f) in images.iter().enumerate() {
            action[m + i] = f.clone();
        }
        Ok(Self { kind: DerivationKind::Elementary { images: images.to_vec() }, nvars: n, action })
    }

    pub fn kind(&self) -> &DerivationKind {
        &self.kind
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn image_of_var(&self, v: usize) -> &PolyElement {
        &self.action[v]
    }

    pub fn apply(&self, f: &PolyElement) -> Result<PolyElement, Error> {
        if f.nvars() != self.nvars {
            return Err(Error::VariableMismatch { expected: self.nvars, found: f.nvars() });
        }
        Ok(self.apply_unchecked(f))
    }

    fn apply_unchecked(&self, f: &PolyElement) -> PolyElement {
        let mut out = PolyElement::zero(self.nvars);
        for (v, img) in self.action.iter().enumerate() {
            if img.is_zero() {
                continue;
            }
            let p = f.partial(v);
            if !p.is_zero() {
                out = out.add(&p.mul(img));
            }
        }
        out
    }

    pub fn apply_monomial(&self, m: &Monomial) -> LinComb<Monomial> {
        self.apply_unchecked(&PolyElement::monomial(m.clone())).terms
    }

    pub fn grading(&self) -> Result<Grading, Error> {
        match &self.kind {
            DerivationKind::Paired { d } => Ok(Grading {
                groups: (0..*d).map(|i| vec![(i, 1), (d + i, 1)]).collect(),
            }),
            DerivationKind::Jordan { partition } => {
                let mut start = 0;
                let mut groups = Vec::new();
                for &s in partition {
                    groups.push((start..start + s).map(|v| (v, 1)).collect());
                    start += s;
                }
                Ok(Grading { groups })
            }
            DerivationKind::Elementary { images } => {
                let m = images.len();
                // per-pair weights when f_i = c * x_i^k
                let per_pair: Option<Vec<u32>> = images
                    .iter()
                    .enumerate()
                    .map(|(i, f)| {
                        if f.is_zero() {
                            return Some(1);
                        }
                        let mut ws = f.terms().words();
                        let w = ws.next()?;
                        let k = w.0[i];
                        let only_xi = w.0.iter().enumerate().all(|(v, e)| v == i || *e == 0);
                        (ws.next().is_none() && only_xi && k > 0).then_some(k)
                    })
                    .collect();
                if let Some(ws) = per_pair {
                    return Ok(Grading {
                        groups: (0..m).map(|i| vec![(i, 1), (m + i, ws[i])]).collect(),
                    });
                }
                // otherwise one weighted group if each image is homogeneous
                let mut group: Vec<(usize, u32)> = (0..m).map(|i| (i, 1)).collect();
                for (i, f) in images.iter().enumerate() {
                    let w = if f.is_zero() {
                        1
                    } else {
                        let mut degs = f.terms().words().map(Monomial::degree);
                        let d0 = degs.next().unwrap_or(1);
                        if d0 == 0 || degs.any(|d| d != d0) {
                            return Err(Error::NoGrading);
                        }
                        d0
                    };
                    group.push((m + i, w));
                }
                Ok(Grading { groups: vec![group] })
            }
        }
    }

    /// Some power of the derivation kills every variable.
    pub fn is_locally_nilpotent_on_generators(&self) -> bool {
        (0..self.nvars).all(|v| {
            let mut f = PolyElement::var(self.nvars, v);
            for _ in 0..=self.nvars {
                if f.is_zero() {
                    return true;
                }
                f = self.apply_unchecked(&f);
            }
            f.is_zero()
        })
    }

    pub fn kernel_component(&self, key: &[u32]) -> Result<Vec<PolyElement>, Error> {
        let g = self.grading()?;
        if key.len() != g.groups.len() {
            return Err(Error::VariableMismatch { expected: g.groups.len(), found: key.len() });
        }
        let basis = g.component(self.nvars, key);
        Ok(crate::graded::kernel_of(&basis, |m| self.apply_monomial(m))
            .into_iter()
            .map(|t| PolyElement { nvars: self.nvars, terms: t })
            .collect())
    }
}

/// x_1..x_d followed by u_{i,j} = x_i y_j - x_j y_i for i < j.
pub fn nowicki_generators(d: usize) -> Vec<PolyElement> {
    let mut out: Vec<PolyElement> = (1..=d).map(|i| PolyElement::x(d, i)).collect();
    for i in 1..=d {
        for j in i + 1..=d {
            out.push(u(d, i, j));
        }
    }
    out
}

/// u_{i,j} = x_i y_j - x_j y_i in K[X_d, Y_d] (1-based).
pub fn u(d: usize, i: usize, j: usize) -> PolyElement {
    PolyElement::x(d, i)
        .mul(&PolyElement::y(d, j))
        .sub(&PolyElement::x(d, j).mul(&PolyElement::y(d, i)))
}

/// u_{i,j} = f_i y_j - f_j y_i for i < j; each is checked to be a constant.
pub fn elementary_determinants(images: &[PolyElement]) -> Result<Vec<PolyElement>, Error> {
    let der = WeitzenboeckDerivation::elementary(images)?;
    let m = images.len();
    let mut out = Vec::new();
    for i in 1..=m {
        for j in i + 1..=m {
            let uij = images[i - 1]
                .mul(&PolyElement::y(m, j))
                .sub(&images[j - 1].mul(&PolyElement::y(m, i)));
            let du = der.apply(&uij)?;
            if !du.is_zero() {
                return Err(Error::NotConstant(format!("u_{i},{j}: image {du}")));
            }
            out.push(uij);
        }
    }
    Ok(out)
}

/// f_i = x_i^{m_i}.
pub fn power_images(powers: &[u32]) -> Vec<PolyElement> {
    let m = powers.len();
    powers.iter().enumerate().map(|(i, &p)| PolyElement::x(m, i + 1).pow(p)).collect()
}

/// For every component with grading total in `1..=maxdeg`, compares the
/// subalgebra generated by `gens` with the kernel of the derivation.
pub fn verify_generation(
    der: &WeitzenboeckDerivation,
    gens: &[PolyElement],
    maxdeg: u32,
) -> Result<Vec<ComponentCertificate>, Error> {
    let g = der.grading()?;
    let n = der.nvars();
    let mut keyed = Vec::new();
    for f in gens {
        let k = g.homogeneous_key(f).ok_or_else(|| Error::NotHomogeneous(f.to_string()))?;
        keyed.push((k, f.clone()));
    }
    let constants = gens.iter().all(|f| der.apply_unchecked(f).is_zero());
    let keys = keys_between(g.groups.len(), 1, maxdeg);
    let len = g.groups.len();
    let mut closure = Closure::new(
        keyed,
        |k: &Key| {
            if k.iter().all(|x| *x == 0) {
                vec![LinComb::word(Monomial::one(n))]
            } else {
                vec![]
            }
        },
        |gen: &PolyElement, e: &LinComb<Monomial>| {
            gen.terms.bilinear(e, |a, b| LinComb::word(a.mul(b)))
        },
    );
    let spans: Vec<(Key, Vec<LinComb<Monomial>>)> =
        keys.iter().map(|k| (k.clone(), closure.span(k))).collect();
    debug_assert!(keys.iter().all(|k| k.len() == len));
    Ok(spans
        .into_par_iter()
        .map(|(k, span)| {
            let basis = g.component(n, &k);
            let kernel = crate::graded::kernel_of(&basis, |m| der.apply_monomial(m));
            compare_in_component(&k, "poly", &basis, &kernel, &span, false, constants)
        })
        .collect())
}

pub fn verify_nowicki(d: usize, maxdeg: u32) -> Vec<ComponentCertificate> {
    verify_generation(&WeitzenboeckDerivation::paired(d), &nowicki_generators(d), maxdeg)
        .expect("paired derivation is graded")
}

/// Δ(y_i) = x_i^{m_i}: X together with the determinants against the kernel.
/// Components are graded with weight 1 on x_i and m_i on y_i.
pub fn verify_generalized_nowicki(powers: &[u32], maxdeg: u32) -> Result<Vec<ComponentCertificate>, Error> {
    let images = power_images(powers);
    let der = WeitzenboeckDerivation::elementary(&images)?;
    let m = powers.len();
    let mut gens: Vec<PolyElement> = (1..=m).map(|i| PolyElement::x(m, i)).collect();
    gens.extend(elementary_determinants(&images)?);
    verify_generation(&der, &gens, maxdeg)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GenVar {
    /// x_i, 0-based.
    X(usize),
    /// u_{i,j} with i < j, 0-based.
    U(usize, usize),
}

pub type GenMonomial = BTreeMap<GenVar, u32>;

/// Polynomial in the Nowicki generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorExpression {
    pub d: usize,
    pub terms: LinComb<GenMonomial>,
}

impl GeneratorExpression {
    pub fn zero(d: usize) -> Self {
        Self { d, terms: LinComb::zero() }
    }

    pub fn expand(&self) -> PolyElement {
        let d = self.d;
        let mut out = PolyElement::zero(2 * d);
        for (mono, c) in self.terms.iter() {
            let mut p = PolyElement::constant(2 * d, c.clone());
            for (v, e) in mono {
                let base = match *v {
                    GenVar::X(i) => PolyElement::x(d, i + 1),
                    GenVar::U(i, j) => u(d, i + 1, j + 1),
                };
                p = p.mul(&base.pow(*e));
            }
            out = out.add(&p);
        }
        out
    }

    fn times(&self, v: GenVar, e: u32) -> Self {
        if e == 0 {
            return self.clone();
        }
        Self {
            d: self.d,
            terms: self.terms.map_words(|m| {
                let mut m = m.clone();
                *m.entry(v).or_insert(0) += e;
                m
            }),
        }
    }
}

impl fmt::Display for GeneratorExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let vars: Vec<String> = m
                    .iter()
                    .map(|(v, e)| {
                        let n = match v {
                            GenVar::X(i) => format!("x{}", i + 1),
                            GenVar::U(i, j) => format!("u{},{}", i + 1, j + 1),
                        };
                        if *e == 1 { n } else { format!("{n}^{e}") }
                    })
                    .collect();
                if vars.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{}", vars.join("*"))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Rewrites a constant of the paired derivation as a polynomial in x_i and
/// u_{i,j}, peeling off the highest pair first.
pub fn express_constant(f: &PolyElement, d: usize) -> Result<GeneratorExpression, Error> {
    if f.nvars() != 2 * d {
        return Err(Error::VariableMismatch { expected: 2 * d, found: f.nvars() });
    }
    let der = WeitzenboeckDerivation::paired(d);
    let df = der.apply(f)?;
    if !df.is_zero() {
        return Err(Error::NotConstant(format!("image {df}")));
    }
    let mut out = GeneratorExpression::zero(d);
    // constants of a paired derivation stay constants on each piece homogeneous
    // in every pair and in the total Y-degree
    let parts = f.split_by(|m| {
        let pairs: Vec<u32> = (0..d).map(|i| m.0[i] + m.0[d + i]).collect();
        (pairs, m.0[d..].iter().sum::<u32>())
    });
    for part in parts.values() {
        let e = express_homogeneous(part, d, d);
        out.terms.add_assign(&e.terms);
    }
    Ok(out)
}

// `f` is homogeneous, constant, and involves only the first `m` pairs.
fn express_homogeneous(f: &PolyElement, d: usize, m: usize) -> GeneratorExpression {
    let mut out = GeneratorExpression::zero(d);
    if f.is_zero() {
        return out;
    }
    if m == 0 {
        let c = f.terms().coeff(&Monomial::one(2 * d));
        out.terms.add_term(GenMonomial::new(), c);
        return out;
    }
    let (xm, ym) = (m - 1, d + m - 1);
    let p = f.degree_in(ym);
    let pair_deg = f.terms().words().next().map_or(0, |w| w.0[xm] + w.0[ym]);
    if pair_deg == 0 {
        return express_homogeneous(f, d, m - 1);
    }
    if p == 0 {
        let b0 = f.div_monomial(&Monomial::var(2 * d, xm).pow_var(xm, pair_deg)).expect("pure x_m power");
        return express_homogeneous(&b0, d, m - 1).times(GenVar::X(xm), pair_deg);
    }
    // f = (a_p y_m^p + ...) x_m^q with a_p a constant in fewer pairs
    let q = pair_deg - p;
    let a_p = f
        .coefficient_of(ym, p)
        .div_monomial(&Monomial::var(2 * d, xm).pow_var(xm, q))
        .expect("top coefficient carries x_m^q");
    let e = express_homogeneous(&a_p, d, m - 1);
    // trade p of the x-factors in each term for u_{s,m}
    let mut g = GeneratorExpression::zero(d);
    for (mono, c) in e.terms.iter() {
        let mut mono = mono.clone();
        let mut need = p;
        let xs: Vec<(usize, u32)> = mono
            .iter()
            .filter_map(|(v, e)| if let GenVar::X(i) = v { Some((*i, *e)) } else { None })
            .collect();
        for (i, e) in xs {
            if need == 0 {
                break;
            }
            let take = e.min(need);
            need -= take;
            let left = e - take;
            if left == 0 {
                mono.remove(&GenVar::X(i));
            } else {
                mono.insert(GenVar::X(i), left);
            }
            *mono.entry(GenVar::U(i, xm)).or_insert(0) += take;
        }
        assert_eq!(need, 0, "top coefficient term with fewer than {p} x-factors");
        g.terms.add_term(mono, c.clone());
    }
    let mut g = g.times(GenVar::X(xm), q);
    // f - G = x_m f_1 with f_1 a constant of smaller degree in the m-th pair
    let rest = f.sub(&g.expand());
    let f1 = rest.div_monomial(&Monomial::var(2 * d, xm)).expect("remainder divisible by x_m");
    debug_assert!(f1.terms().words().all(|w| w.0[xm] + w.0[ym] < pair_deg));
    let tail = express_homogeneous(&f1, d, m).times(GenVar::X(xm), 1);
    g.terms.add_assign(&tail.terms);
    g
}

impl Monomial {
    fn pow_var(mut self, v: usize, e: u32) -> Self {
        self.0[v] = e;
        self
    }
}

/// Monomials in generators with the given keys summing to `target`.
pub fn generator_monomials(keys: &[Key], target: &[u32]) -> Vec<Vec<u32>> {
    fn go(keys: &[Key], i: usize, rest: &[u32], cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == keys.len() {
            if rest.iter().all(|x| *x == 0) {
                out.push(cur.clone());
            }
            return;
        }
        let mut e = 0;
        let mut r = rest.to_vec();
        loop {
            cur.push(e);
            go(keys, i + 1, &r, cur, out);
            cur.pop();
            match crate::graded::key_sub(&r, &keys[i]) {
                Some(nr) if keys[i].iter().any(|x| *x > 0) => {
                    r = nr;
                    e += 1;
                }
                _ => break,
            }
        }
    }
    let mut out = Vec::new();
    go(keys, 0, target, &mut Vec::new(), &mut out);
    out
}

/// Pair-degree key of a generator of the paired derivation.
pub fn genvar_key(d: usize, v: GenVar) -> Key {
    match v {
        GenVar::X(i) => unit_key(d, i),
        GenVar::U(i, j) => key_add(&unit_key(d, i), &unit_key(d, j)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;
    use proptest::prelude::*;

    fn x(d: usize, i: usize) -> PolyElement {
        PolyElement::x(d, i)
    }
    fn y(d: usize, i: usize) -> PolyElement {
        PolyElement::y(d, i)
    }

    #[test]
    fn paired_action_examples() {
        let der = WeitzenboeckDerivation::paired(2);
        assert!(der.apply(&x(2, 1)).unwrap().is_zero());
        assert!(der.apply(&u(2, 1, 2)).unwrap().is_zero());
        let y1sq = y(2, 1).pow(2);
        assert_eq!(der.apply(&y1sq).unwrap(), x(2, 1).mul(&y(2, 1)).scale(&int(2)));
        assert!(der.apply(&PolyElement::x(3, 1)).is_err());
    }

    #[test]
    fn nowicki_generator_lists() {
        assert_eq!(nowicki_generators(1), vec![x(1, 1)]);
        assert_eq!(nowicki_generators(2), vec![x(2, 1), x(2, 2), u(2, 1, 2)]);
        let der = WeitzenboeckDerivation::paired(3);
        let g = nowicki_generators(3);
        assert_eq!(g.len(), 6);
        assert!(g.iter().all(|f| der.apply(f).unwrap().is_zero()));
    }

    #[test]
    fn determinants() {
        let classical = elementary_determinants(&power_images(&[1, 1])).unwrap();
        assert_eq!(classical, vec![u(2, 1, 2)]);
        let k = elementary_determinants(&power_images(&[2, 3])).unwrap();
        let expect = x(2, 1).pow(2).mul(&y(2, 2)).sub(&x(2, 2).pow(3).mul(&y(2, 1)));
        assert_eq!(k, vec![expect]);
        let mixed = vec![x(2, 1).add(&x(2, 2)), x(2, 2)];
        assert_eq!(elementary_determinants(&mixed).unwrap().len(), 1);
        assert!(elementary_determinants(&[y(2, 1), x(2, 2)]).is_err());
    }

    #[test]
    fn the_other_determinant_reading_is_not_constant() {
        // det [[f_i, y_j], [f_j, y_i]] = f_i y_i - f_j y_j
        let der = WeitzenboeckDerivation::paired(2);
        let alt = x(2, 1).mul(&y(2, 1)).sub(&x(2, 2).mul(&y(2, 2)));
        assert!(!der.apply(&alt).unwrap().is_zero());
    }

    #[test]
    fn one_pair_kernel_is_powers_of_x() {
        let der = WeitzenboeckDerivation::paired(1);
        for n in 0..6 {
            let k = der.kernel_component(&[n]).unwrap();
            assert_eq!(k, vec![x(1, 1).pow(n)]);
        }
    }

    #[test]
    fn kernel_contains_u12() {
        let der = WeitzenboeckDerivation::paired(2);
        let k = der.kernel_component(&[1, 1]).unwrap();
        let terms: Vec<LinComb<Monomial>> = k.iter().map(|p| p.terms().clone()).collect();
        let c = crate::graded::compare_in_component(
            &vec![1, 1],
            "",
            &der.grading().unwrap().component(4, &[1, 1]),
            &terms,
            &[u(2, 1, 2).terms().clone()],
            true,
            true,
        );
        assert_eq!(c.span.verdict, crate::linalg::Verdict::ASubsetOfB);
        assert_eq!(k.len(), 2); // x1 x2 and u12
    }

    #[test]
    fn jordan_kind() {
        let der = WeitzenboeckDerivation::jordan(&[3, 1]).unwrap();
        assert!(der.is_locally_nilpotent_on_generators());
        assert_eq!(der.apply(&PolyElement::var(4, 2)).unwrap(), PolyElement::var(4, 1));
        assert!(der.apply(&PolyElement::var(4, 3)).unwrap().is_zero());
        // z1 and z2^2 - 2 z1 z3 span the degree-2 kernel of the 3-cell
        let k = der.kernel_component(&[2, 0]).unwrap();
        assert_eq!(k.len(), 2);
        assert!(WeitzenboeckDerivation::jordan(&[0]).is_err());
    }

    #[test]
    fn gradings() {
        let g = WeitzenboeckDerivation::elementary(&power_images(&[2, 3])).unwrap().grading().unwrap();
        assert_eq!(g.groups, vec![vec![(0, 1), (2, 2)], vec![(1, 1), (3, 3)]]);
        let mixed = WeitzenboeckDerivation::elementary(&[x(2, 1).add(&x(2, 2)), x(2, 2)]).unwrap();
        assert_eq!(mixed.grading().unwrap().groups.len(), 1);
        let bad = WeitzenboeckDerivation::elementary(&[x(2, 1).add(&x(2, 2).pow(2)), x(2, 2)]).unwrap();
        assert_eq!(bad.grading(), Err(Error::NoGrading));
    }

    #[test]
    fn plucker_relation() {
        for d in 3..=5 {
            for i in 1..=d {
                for j in i + 1..=d {
                    for k in j + 1..=d {
                        let r = x(d, i)
                            .mul(&u(d, j, k))
                            .sub(&x(d, j).mul(&u(d, i, k)))
                            .add(&x(d, k).mul(&u(d, i, j)));
                        assert!(r.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn express_examples() {
        let e = express_constant(&u(2, 1, 2), 2).unwrap();
        assert_eq!(e.terms.len(), 1);
        assert_eq!(e.expand(), u(2, 1, 2));
        let e = express_constant(&x(2, 1), 2).unwrap();
        assert_eq!(e.expand(), x(2, 1));
        let f = u(3, 1, 2).mul(&u(3, 1, 3));
        // four monomials after expansion; none cancel
        assert_eq!(f.terms().len(), 4);
        assert_eq!(express_constant(&f, 3).unwrap().expand(), f);
        assert!(express_constant(&y(2, 1), 2).is_err());
    }

    #[test]
    fn nowicki_small() {
        assert!(crate::graded::all_ok(&verify_nowicki(2, 4)));
    }

    #[test]
    fn generator_monomial_enumeration() {
        let keys = vec![vec![1, 0], vec![0, 1], vec![1, 1]];
        assert_eq!(generator_monomials(&keys, &[1, 1]).len(), 2);
    }

    fn arb_poly(d: usize) -> impl Strategy<Value = PolyElement> {
        prop::collection::vec((prop::collection::vec(0u32..3, 2 * d), -3i64..4), 0..5).prop_map(
            move |ts| PolyElement::from_terms(2 * d, ts.into_iter().map(|(e, c)| (Monomial(e), int(c)))),
        )
    }

    proptest! {
        #[test]
        fn leibniz(f in arb_poly(2), g in arb_poly(2)) {
            let der = WeitzenboeckDerivation::paired(2);
            let lhs = der.apply(&f.mul(&g)).unwrap();
            let rhs = der.apply(&f).unwrap().mul(&g).add(&f.mul(&der.apply(&g).unwrap()));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn local_nilpotency(e in prop::collection::vec(0u32..3, 4)) {
            let der = WeitzenboeckDerivation::paired(2);
            let m = Monomial(e);
            let ydeg: u32 = m.0[2..].iter().sum();
            let mut f = PolyElement::monomial(m);
            for _ in 0..=ydeg {
                f = der.apply(&f).unwrap();
            }
            prop_assert!(f.is_zero());
        }

        #[test]
        fn express_round_trip(exps in prop::collection::vec(0u32..3, 6)) {
            let d = 3;
            let gens = nowicki_generators(d);
            let f = gens.iter().zip(&exps).fold(PolyElement::one(2 * d), |acc, (g, e)| acc.mul(&g.pow(*e)));
            prop_assert_eq!(express_constant(&f, d).unwrap().expand(), f);
        }
    }
}
