use std::sync::Arc;

use super::{Issue, ShLieRinehartData};
use crate::cdga::{Derivation, Element};
use crate::convolution::TwistingCochain;
use crate::graded_core::linalg::svec_add_scaled;
use crate::graded_core::{compose, parity_sign, LinearMap, Rational, SVec};
use crate::sym_coalgebra::{coderivation_from_brackets, Brackets, ModuleSpec, SymContext, WordError};

/// A dg Lie-Rinehart pair `(A, L)` with L free over A, tabulated on the
/// rational basis `{a_i x_k}` of L.
#[derive(Debug, Clone)]
pub struct LieRinehartData {
    pub module: Arc<ModuleSpec>,
    /// `bracket[p][q] = [e_p, e_q]` over the rational basis of L.
    pub bracket: Vec<Vec<SVec>>,
    /// `anchor[p]`, a map on A of degree `|e_p|`.
    pub anchor: Vec<LinearMap>,
}

fn unit_vec(i: usize) -> SVec {
    [(i, Rational::one())].into_iter().collect()
}

impl LieRinehartData {
    /// Extends brackets and anchors given on the generators `x_k` through
    /// A-linearity of the anchor and the Leibniz rule.
    pub fn from_generators(module: Arc<ModuleSpec>, gen_bracket: &[Vec<SVec>], gen_anchor: &[LinearMap]) -> Self {
        let alg = module.algebra().clone();
        let unit = alg.unit();
        let n = module.dim();
        let gdeg = |k: usize| module.generators().degree(k);
        let anchor: Vec<LinearMap> = (0..n)
            .map(|p| {
                let (a, k) = module.split(p);
                let la = super::sh::mult_map(&alg, &alg.basis_element(a), alg.degree(a));
                compose(&la, &gen_anchor[k]).expect("maps on A")
            })
            .collect();
        // [x_k, b x_l] = ϑ(x_k)(b) x_l + (-1)^{|x_k||b|} b [x_k, x_l]
        let gen_with = |k: usize, b: usize, l: usize| -> SVec {
            let mut out = module.act_element(&gen_anchor[k].column(b), &unit_vec(module.index(unit, l)));
            let s = Rational::sign(parity_sign(gdeg(k) * alg.degree(b)));
            svec_add_scaled(&mut out, &module.act(b, &gen_bracket[k][l]), &s);
            out
        };
        let mut bracket = vec![vec![SVec::new(); n]; n];
        for (p, row) in bracket.iter_mut().enumerate() {
            let (a, k) = module.split(p);
            let xdeg = alg.degree(a) + gdeg(k);
            for (q, entry) in row.iter_mut().enumerate() {
                let (b, l) = module.split(q);
                let ydeg = alg.degree(b) + gdeg(l);
                // [a x, y] = a [x, y] - (-1)^{|ax||y|} ϑ(y)(a) x
                let mut out = module.act(a, &gen_with(k, b, l));
                let ya: Element = alg.mul(&alg.basis_element(b), &gen_anchor[l].column(a));
                let s = Rational::sign(-parity_sign(xdeg * ydeg));
                svec_add_scaled(&mut out, &module.act_element(&ya, &unit_vec(module.index(unit, k))), &s);
                *entry = out;
            }
        }
        LieRinehartData { module, bracket, anchor }
    }

    pub fn degree(&self, p: usize) -> i64 {
        self.module.qbasis().degree(p)
    }

    /// Bilinear extension of the bracket table.
    pub fn bracket_of(&self, u: &SVec, v: &SVec) -> SVec {
        let mut out = SVec::new();
        for (&p, x) in u {
            for (&q, y) in v {
                svec_add_scaled(&mut out, &self.bracket[p][q], &(x * y));
            }
        }
        out
    }

    /// `ϑ(u)(b)` for a combination `u` of basis elements of L.
    pub fn anchor_apply(&self, u: &SVec, b: &[Rational]) -> Element {
        let alg = self.module.algebra();
        let mut out = alg.zero();
        for (&p, x) in u {
            for (o, y) in out.iter_mut().zip(self.anchor[p].apply(b)) {
                *o += &(x * &y);
            }
        }
        out
    }

    /// The sh Lie-Rinehart pair with `c_1` from the bracket, `t_1` from the
    /// anchor and no higher components.
    pub fn to_sh(&self, max_len: usize) -> Result<ShLieRinehartData, WordError> {
        let ctx = Arc::new(SymContext::new(self.module.clone(), max_len)?);
        let mut b = Brackets { arity: 2, values: Default::default() };
        let mut t = TwistingCochain::new();
        for &w in ctx.words_of_len(2) {
            let xs: Vec<usize> = ctx.word(w).gens.iter().map(|&g| ctx.gen(g as usize).l_index).collect();
            let v = self.bracket[xs[0]][xs[1]].clone();
            if !v.is_empty() {
                b.values.insert(xs, v);
            }
        }
        for g in 0..ctx.gens().len() {
            t.set(1, ctx.gen_word(g), self.anchor[ctx.gen(g).l_index].clone());
        }
        let del = coderivation_from_brackets(&ctx, &[b]).expect("arity 2 is within the bound");
        Ok(ShLieRinehartData { ctx, del, t: t.normalized() })
    }
}

/// All defining identities of a dg Lie-Rinehart pair on basis elements.
pub fn check_lie_rinehart(lr: &LieRinehartData) -> Vec<Issue> {
    let module = &lr.module;
    let alg = module.algebra();
    let ql = module.qbasis();
    let ab = alg.basis();
    let n = module.dim();
    let mut out = Vec::new();
    let mut push = |check: &str, level: usize, witness: Vec<String>| {
        out.push(Issue { check: check.into(), level, witness, detail: String::new() });
    };
    for (name, w) in module.validate() {
        push(&name, 0, w);
    }
    let lab = |p: usize| ql.label(p).to_string();
    for p in 0..n {
        let d = Derivation { degree: lr.anchor[p].degree(), action: lr.anchor[p].clone() };
        if lr.anchor[p].degree() != lr.degree(p) && !lr.anchor[p].is_zero() {
            push("anchor degree", 1, vec![lab(p)]);
        }
        if let Some((i, j)) = d.leibniz_witness(alg) {
            push("anchor values are derivations", 1, vec![lab(p), ab.label(i).into(), ab.label(j).into()]);
        }
        // ϑ(dx) = d_A ϑ(x) - (-1)^{|x|} ϑ(x) d_A
        let dx = module.d(&unit_vec(p));
        for b in 0..alg.dim() {
            let e = alg.basis_element(b);
            let lhs = lr.anchor_apply(&dx, &e);
            let mut rhs = alg.d(&lr.anchor[p].apply(&e));
            let s = Rational::sign(-parity_sign(lr.degree(p)));
            for (r, v) in rhs.iter_mut().zip(lr.anchor[p].apply(&alg.d(&e))) {
                *r += &(&s * &v);
            }
            if lhs != rhs {
                push("anchor is a chain map", 1, vec![lab(p), ab.label(b).into()]);
                break;
            }
        }
        // ϑ(a x) = a ϑ(x)
        for m in 0..alg.dim() {
            let ax = module.act(m, &unit_vec(p));
            for b in 0..alg.dim() {
                let e = alg.basis_element(b);
                let lhs = lr.anchor_apply(&ax, &e);
                let rhs = alg.mul_left_basis(m, &lr.anchor[p].apply(&e));
                if lhs != rhs {
                    push("anchor is A-linear", 1, vec![ab.label(m).into(), lab(p)]);
                    break;
                }
            }
        }
    }
    for p in 0..n {
        for q in 0..n {
            let (x, y) = (unit_vec(p), unit_vec(q));
            let xy = lr.bracket_of(&x, &y);
            let mut skew = lr.bracket_of(&y, &x);
            skew = skew.into_iter().map(|(i, c)| (i, c * &Rational::sign(-parity_sign(lr.degree(p) * lr.degree(q))))).collect();
            if xy != skew {
                push("skew symmetry", 1, vec![lab(p), lab(q)]);
            }
            // d[x, y] = [dx, y] + (-1)^{|x|} [x, dy]
            let lhs = module.d(&xy);
            let mut rhs = lr.bracket_of(&module.d(&x), &y);
            svec_add_scaled(&mut rhs, &lr.bracket_of(&x, &module.d(&y)), &Rational::sign(parity_sign(lr.degree(p))));
            if lhs != rhs {
                push("bracket is compatible with d", 1, vec![lab(p), lab(q)]);
            }
            for b in 0..alg.dim() {
                // [x, b y] = ϑ(x)(b) y + (-1)^{|x||b|} b [x, y]
                let lhs = lr.bracket_of(&x, &module.act(b, &y));
                let mut rhs = module.act_element(&lr.anchor[p].column(b), &y);
                svec_add_scaled(&mut rhs, &module.act(b, &xy), &Rational::sign(parity_sign(lr.degree(p) * alg.degree(b))));
                if lhs != rhs {
                    push("Leibniz rule", 1, vec![lab(p), ab.label(b).into(), lab(q)]);
                }
            }
            // ϑ[x, y] = [ϑx, ϑy]
            let s = Rational::sign(-parity_sign(lr.degree(p) * lr.degree(q)));
            for b in 0..alg.dim() {
                let e = alg.basis_element(b);
                let lhs = lr.anchor_apply(&xy, &e);
                let mut rhs = lr.anchor[p].apply(&lr.anchor[q].apply(&e));
                for (r, v) in rhs.iter_mut().zip(lr.anchor[q].apply(&lr.anchor[p].apply(&e))) {
                    *r += &(&s * &v);
                }
                if lhs != rhs {
                    push("anchor preserves brackets", 2, vec![lab(p), lab(q)]);
                    break;
                }
            }
            for r in 0..n {
                // [x, [y, z]] = [[x, y], z] + (-1)^{|x||y|} [y, [x, z]]
                let z = unit_vec(r);
                let lhs = lr.bracket_of(&x, &lr.bracket_of(&y, &z));
                let mut rhs = lr.bracket_of(&xy, &z);
                let s = Rational::sign(parity_sign(lr.degree(p) * lr.degree(q)));
                svec_add_scaled(&mut rhs, &lr.bracket_of(&y, &lr.bracket_of(&x, &z)), &s);
                if lhs != rhs {
                    push("Jacobi identity", 2, vec![lab(p), lab(q), lab(r)]);
                }
            }
        }
    }
    out
}
