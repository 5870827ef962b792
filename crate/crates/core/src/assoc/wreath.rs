//! The wreath-product model W_{2d} = K[Y] ⋉ M of the free metabelian
//! associative algebra. M is the free K[U,V]-module on a_1..a_{2d} with
//! M·M = 0, y_j a_i = a_i u_j and a_i y_j = a_i (u_j + v_j).
//!
//! K[U,V] polynomials use 4d variables: u_1..u_{2d} then v_1..v_{2d}.
//! K[Y] polynomials use 2d variables.

use crate::commutative::{Monomial, PolyElement};
use crate::lincomb::LinComb;
use crate::linalg::Scalar;

use super::{AssocElement, AssocWord};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MWord {
    /// 0-based index of the free generator a.
    pub a: u32,
    pub m: Monomial,
}

pub type ModuleElement = LinComb<MWord>;

pub fn uv_var_u(d: usize, l: u32) -> usize {
    let _ = d;
    l as usize
}

pub fn uv_var_v(d: usize, l: u32) -> usize {
    2 * d + l as usize
}

/// a_l · f
pub fn module_gen(d: usize, l: u32, f: &PolyElement) -> ModuleElement {
    assert_eq!(f.nvars(), 4 * d);
    f.terms().map_words(|m| MWord { a: l, m: m.clone() })
}

pub fn module_mul(x: &ModuleElement, f: &PolyElement) -> ModuleElement {
    x.bilinear(f.terms(), |w, m| LinComb::word(MWord { a: w.a, m: w.m.mul(m) }))
}

/// Σ_a v_a f_a; zero exactly on images of commutators.
pub fn contraction(d: usize, x: &ModuleElement) -> PolyElement {
    PolyElement::from_terms(
        4 * d,
        x.iter().map(|(w, c)| (w.m.mul(&Monomial::var(4 * d, uv_var_v(d, w.a))), c.clone())),
    )
}

pub fn render_module(d: usize, x: &ModuleElement) -> String {
    if x.is_zero() {
        return "0".into();
    }
    x.iter()
        .map(|(w, c)| {
            let mut s = format!("({c})a{}", w.a + 1);
            for (v, e) in w.m.0.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                let name = if v < 2 * d { format!("u{}", v + 1) } else { format!("v{}", v - 2 * d + 1) };
                s.push('*');
                s.push_str(&name);
                if *e > 1 {
                    s.push_str(&format!("^{e}"));
                }
            }
            s
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// y_j ↦ u_j, or y_j ↦ u_j + v_j when `shifted`.
fn substitute(d: usize, p: &PolyElement, shifted: bool) -> PolyElement {
    let n = 4 * d;
    let mut out = PolyElement::zero(n);
    for (m, c) in p.terms().iter() {
        let mut t = PolyElement::constant(n, c.clone());
        for (j, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let mut base = PolyElement::var(n, j);
            if shifted {
                base = base.add(&PolyElement::var(n, 2 * d + j));
            }
            t = t.mul(&base.pow(e));
        }
        out = out.add(&t);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WElement {
    pub d: usize,
    pub poly: PolyElement,
    pub module: ModuleElement,
}

impl WElement {
    pub fn zero(d: usize) -> Self {
        Self { d, poly: PolyElement::zero(2 * d), module: ModuleElement::zero() }
    }

    pub fn one(d: usize) -> Self {
        Self { d, poly: PolyElement::one(2 * d), module: ModuleElement::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero() && self.module.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { d: self.d, poly: self.poly.add(&o.poly), module: self.module.clone() + o.module.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self { d: self.d, poly: self.poly.sub(&o.poly), module: self.module.clone() - o.module.clone() }
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        Self { d: self.d, poly: self.poly.scale(k), module: self.module.scale(k) }
    }

    /// (p + m)(q + n) = pq + p(U) n + m q(U + V)
    pub fn mul(&self, o: &Self) -> Self {
        let d = self.d;
        let left = module_mul(&o.module, &substitute(d, &self.poly, false));
        let right = module_mul(&self.module, &substitute(d, &o.poly, true));
        Self { d, poly: self.poly.mul(&o.poly), module: left + right }
    }

    /// Image of a commutator: no K[Y] part and Σ v_a f_a = 0.
    pub fn is_commutator_image(&self) -> bool {
        self.poly.is_zero() && contraction(self.d, &self.module).is_zero()
    }
}

/// ε(x_l) = y_l + a_l
pub fn epsilon_letter(d: usize, l: u32) -> WElement {
    WElement {
        d,
        poly: PolyElement::var(2 * d, l as usize),
        module: module_gen(d, l, &PolyElement::one(4 * d)),
    }
}

fn ordered_product(d: usize, prefix: &[u32]) -> WElement {
    let mut acc = WElement::one(d);
    for (l, &e) in prefix.iter().enumerate() {
        for _ in 0..e {
            acc = acc.mul(&epsilon_letter(d, l as u32));
        }
    }
    acc
}

fn uv_monomial(d: usize, u: &[u32], vs: &[u32]) -> PolyElement {
    let mut e = vec![0u32; 4 * d];
    e[..2 * d].copy_from_slice(u);
    for &l in vs {
        e[uv_var_v(d, l)] += 1;
    }
    PolyElement::monomial(Monomial(e))
}

/// Closed form on commutator words:
/// x^P [x_i, x_j, x_k...] ↦ (a_i v_j − a_j v_i) v_k... u^P.
fn epsilon_word(d: usize, w: &AssocWord) -> WElement {
    match &w.bracket {
        None => ordered_product(d, &w.prefix),
        Some(b) => {
            let (i, j) = (b[0], b[1]);
            let rest = uv_monomial(d, &w.prefix, &b[2..]);
            let one = PolyElement::one(4 * d);
            let lead = module_mul(&module_gen(d, i, &one), &uv_monomial(d, &vec![0; 2 * d], &[j]))
                - module_mul(&module_gen(d, j, &one), &uv_monomial(d, &vec![0; 2 * d], &[i]));
            WElement { d, poly: PolyElement::zero(2 * d), module: module_mul(&lead, &rest) }
        }
    }
}

pub fn epsilon(d: usize, e: &AssocElement) -> WElement {
    let mut out = WElement::zero(d);
    for (w, c) in e.iter() {
        out = out.add(&epsilon_word(d, w).scale(c));
    }
    out
}

/// ε computed only through products and commutators of letter images.
pub fn epsilon_by_products(d: usize, e: &AssocElement) -> WElement {
    let mut out = WElement::zero(d);
    for (w, c) in e.iter() {
        let mut img = ordered_product(d, &w.prefix);
        if let Some(b) = &w.bracket {
            let mut br = epsilon_letter(d, b[0]);
            for &l in &b[1..] {
                let x = epsilon_letter(d, l);
                br = br.mul(&x).sub(&x.mul(&br));
            }
            img = img.mul(&br);
        }
        out = out.add(&img.scale(c));
    }
    out
}

/// The derivation on W: y, a, u, v with index 2i go to index 2i-1.
pub fn delta_w(x: &WElement) -> WElement {
    let d = x.d;
    let der = crate::commutative::WeitzenboeckDerivation::jordan(&vec![2; d])
        .expect("cells of size 2");
    let poly = der.apply(&x.poly).expect("2d variables");
    let uv = super::uv::uv_derivation(d);
    let mut module = ModuleElement::zero();
    for (w, c) in x.module.iter() {
        let mono = PolyElement::monomial(w.m.clone());
        module.add_scaled(c, &module_gen(d, w.a, &uv.apply(&mono).expect("4d variables")));
        if w.a % 2 == 1 {
            module.add_scaled(c, &module_gen(d, w.a - 1, &mono));
        }
    }
    WElement { d, poly, module }
}
