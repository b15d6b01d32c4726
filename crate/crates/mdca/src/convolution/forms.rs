use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cdga::{AlgebraSpec, Element};
use crate::graded_core::linalg::add_entry;
use crate::graded_core::{parity_sign, Rational, SVec};
use crate::sym_coalgebra::SymContext;

/// A form on Σ[sL] with values in A, stored over the basis of pairs
/// `(word, a)`; see [`FormSpace::index`].
pub type Form = SVec;

/// Indexing and products for `Hom(Σ[sL], A)` truncated at the word bound.
#[derive(Debug)]
pub struct FormSpace {
    ctx: Arc<SymContext>,
    dim_a: usize,
}

impl FormSpace {
    pub fn new(ctx: Arc<SymContext>) -> Self {
        let dim_a = ctx.module().algebra().dim();
        FormSpace { ctx, dim_a }
    }

    pub fn ctx(&self) -> &Arc<SymContext> {
        &self.ctx
    }

    pub fn algebra(&self) -> &AlgebraSpec {
        self.ctx.module().algebra()
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim(&self) -> usize {
        self.ctx.num_words() * self.dim_a
    }

    /// Index of the basis form sending word `w` to `a_a` and every other word to 0.
    pub fn index(&self, w: usize, a: usize) -> usize {
        w * self.dim_a + a
    }

    pub fn split(&self, i: usize) -> (usize, usize) {
        (i / self.dim_a, i % self.dim_a)
    }

    /// Degree `|a| - |w|` of a basis form.
    pub fn degree(&self, i: usize) -> i64 {
        let (w, a) = self.split(i);
        self.algebra().degree(a) - self.ctx.word(w).degree
    }

    pub fn word_len(&self, i: usize) -> usize {
        self.ctx.word(self.split(i).0).len()
    }

    pub fn label(&self, i: usize) -> String {
        let (w, a) = self.split(i);
        format!("{}↦{}", self.ctx.word_label(w), self.algebra().basis().label(a))
    }

    pub fn basis_form(&self, w: usize, a: usize) -> Form {
        [(self.index(w, a), Rational::one())].into_iter().collect()
    }

    /// The form supported on the empty word with value `a`.
    pub fn constant(&self, a: &[Rational]) -> Form {
        let u = self.ctx.unit_word();
        let mut f = Form::new();
        for (i, c) in a.iter().enumerate() {
            add_entry(&mut f, self.index(u, i), c);
        }
        f
    }

    pub fn value(&self, f: &Form, w: usize) -> Element {
        let mut out = self.algebra().zero();
        for a in 0..self.dim_a {
            if let Some(c) = f.get(&self.index(w, a)) {
                out[a] += c;
            }
        }
        out
    }

    /// Adds `c · x` at word `w` for an algebra element `x`.
    pub fn add_value(&self, f: &mut Form, w: usize, x: &[Rational], c: &Rational) {
        for (a, y) in x.iter().enumerate() {
            if !y.is_zero() {
                add_entry(f, self.index(w, a), &(c * y));
            }
        }
    }

    /// Splits a form into homogeneous components by degree.
    pub fn components(&self, f: &Form) -> BTreeMap<i64, Form> {
        let mut out: BTreeMap<i64, Form> = BTreeMap::new();
        for (&i, c) in f {
            out.entry(self.degree(i)).or_default().insert(i, c.clone());
        }
        out
    }

    /// `(f ∪ g)(w) = Σ_Δ (-1)^{|g||w1|} f(w1) g(w2)`.
    pub fn cup(&self, f: &Form, g: &Form) -> Form {
        let a = self.algebra();
        let mut out = Form::new();
        for (&i, x) in f {
            let (u, ai) = self.split(i);
            let ud = self.ctx.word(u).degree;
            for (&j, y) in g {
                let (v, bj) = self.split(j);
                let Some((_, w)) = self.ctx.mul_words(u, v) else { continue };
                let Some(k) = self.ctx.coproduct_coeff(w, u, v) else { continue };
                let gdeg = a.degree(bj) - self.ctx.word(v).degree;
                let s = Rational::sign(parity_sign(gdeg * ud));
                let c = &(&(x * y) * k) * &s;
                for (m, p) in a.mul_basis(ai, bj).iter().enumerate() {
                    if !p.is_zero() {
                        add_entry(&mut out, self.index(w, m), &(&c * p));
                    }
                }
            }
        }
        out
    }
}
