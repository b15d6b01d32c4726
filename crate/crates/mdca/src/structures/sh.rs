use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::{Issue, RouteOutcome};
use crate::cdga::{AlgebraSpec, Derivation, Element};
use crate::convolution::{
    descent_check, project_word, AmbientOperators, DescendedSpace, Form, FormSpace, MdcaStructure,
    TwistingCochain,
};
use crate::graded_core::linalg::{add_entry, svec_add_scaled};
use crate::graded_core::{compose, parity_sign, LinearMap, Rational, SVec};
use crate::sym_coalgebra::{check_coalgebra_perturbation, Coderivation, ModuleSpec, SymContext, WordMap};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DataError {
    #[error("level {level} value on {word} is not on a generator word")]
    NotGenerator { level: usize, word: String },
    #[error("level {level} value on {word} has degree {got}, expected {expected}")]
    Degree { level: usize, word: String, got: i64, expected: i64 },
    #[error("level {level} is outside 1..={max}")]
    Level { level: usize, max: usize },
}

/// Corestrictions `c_j` of the coderivation perturbation and components
/// `t_j` of the twisting cochain, tabulated on all words of the context.
#[derive(Debug, Clone)]
pub struct ShLieRinehartData {
    pub ctx: Arc<SymContext>,
    pub del: Coderivation,
    pub t: TwistingCochain,
}

impl PartialEq for ShLieRinehartData {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) && self.del == other.del && self.t == other.t
    }
}

/// Left multiplication by a homogeneous element of degree `deg`.
pub(crate) fn mult_map(alg: &AlgebraSpec, a: &Element, deg: i64) -> LinearMap {
    let mut m = LinearMap::zero(alg.basis().clone(), alg.basis().clone(), deg);
    for i in 0..alg.dim() {
        for (t, c) in alg.mul(a, &alg.basis_element(i)).iter().enumerate() {
            if !c.is_zero() {
                m.add_to(t, i, c).expect("homogeneous factor");
            }
        }
    }
    m
}

/// `a_m · v` for `v` over sL generators, using `a·(sξ) = (-1)^{|a|} s(aξ)`.
pub(crate) fn act_on_s(ctx: &SymContext, m: usize, v: &SVec) -> SVec {
    let module = ctx.module();
    let s = Rational::sign(parity_sign(module.algebra().degree(m)));
    let mut out = SVec::new();
    for (&g, c) in v {
        let e: SVec = [(ctx.gen(g).l_index, Rational::one())].into_iter().collect();
        for (l, x) in module.act(m, &e) {
            add_entry(&mut out, ctx.gen_of_l(l), &(&(c * &x) * &s));
        }
    }
    out
}

pub(crate) fn act_elem_on_s(ctx: &SymContext, b: &[Rational], v: &SVec) -> SVec {
    let mut out = SVec::new();
    for (m, c) in b.iter().enumerate() {
        if !c.is_zero() {
            svec_add_scaled(&mut out, &act_on_s(ctx, m, v), c);
        }
    }
    out
}

fn gen_vec(g: usize) -> SVec {
    [(g, Rational::one())].into_iter().collect()
}

fn is_pure(ctx: &SymContext, w: usize) -> bool {
    let unit = ctx.module().algebra().unit();
    ctx.word(w).gens.iter().all(|&g| ctx.gen(g as usize).a == unit)
}

fn add_map(acc: &mut LinearMap, m: &LinearMap, c: &Rational) {
    for ((t, s), v) in m.entries() {
        acc.add_to(*t, *s, &(v * c)).expect("summand has the residual degree");
    }
}

/// `[δ1, δ2] = δ1 δ2 - (-1)^{|δ1||δ2|} δ2 δ1`.
fn commutator(d1: &LinearMap, d2: &LinearMap) -> LinearMap {
    let ab = compose(d1, d2).expect("maps on A");
    let ba = compose(d2, d1).expect("maps on A");
    let mut out = ab;
    add_map(&mut out, &ba, &Rational::sign(-parity_sign(d1.degree() * d2.degree())));
    out
}

/// `d_A δ - (-1)^{|δ|} δ d_A`.
fn d_der(alg: &AlgebraSpec, m: &LinearMap) -> LinearMap {
    let mut out = compose(alg.diff(), m).expect("maps on A");
    add_map(&mut out, &compose(m, alg.diff()).expect("maps on A"), &Rational::sign(-parity_sign(m.degree())));
    out
}

/// Extends twisting components given on generator words to all words by
/// `t_j(a·g·rest) = (-1)^{|a|} a t_j(g·rest)`.
pub fn extend_twisting(ctx: &SymContext, pure: &TwistingCochain) -> TwistingCochain {
    let alg = ctx.module().algebra();
    let mut out = TwistingCochain::new();
    for j in 1..=ctx.max_len() {
        for &w in ctx.words_of_len(j) {
            let Some(p) = project_word(ctx, &ctx.word(w).gens) else { continue };
            let Some(tp) = pure.get(j, p.pure) else { continue };
            let s = Rational::sign(p.sign * parity_sign(p.a_deg));
            let m = compose(&mult_map(alg, &p.a_prod, p.a_deg), tp).expect("maps on A");
            out.set(j, w, m.scale(&s));
        }
    }
    out.normalized()
}

/// Extends corestrictions given on generator words to all words through
/// `c_j(v·(a·g)) = t_j(v)(a)·g + (-1)^{(|v|+1)|a|} a·c_j(v·g)`.
pub fn extend_corestrictions(ctx: &SymContext, pure: &Coderivation, t: &TwistingCochain) -> Coderivation {
    let mut out = Coderivation::new();
    for j in 1..ctx.max_len() {
        let mut memo: HashMap<usize, SVec> = HashMap::new();
        for &w in ctx.words_of_len(j + 1) {
            let v = corestriction_at(ctx, pure, t, j, w, &mut memo);
            out.set(j, w, v);
        }
    }
    out
}

fn corestriction_at(
    ctx: &SymContext,
    pure: &Coderivation,
    t: &TwistingCochain,
    j: usize,
    w: usize,
    memo: &mut HashMap<usize, SVec>,
) -> SVec {
    if let Some(v) = memo.get(&w) {
        return v.clone();
    }
    let alg = ctx.module().algebra();
    let unit = alg.unit();
    let gens = ctx.word(w).gens.clone();
    let Some(r) = gens.iter().rposition(|&g| ctx.gen(g as usize).a != unit) else {
        let v = pure.get(j, w).cloned().unwrap_or_default();
        memo.insert(w, v.clone());
        return v;
    };
    let e = ctx.gen(gens[r] as usize).clone();
    let after: i64 = gens[r + 1..].iter().map(|&g| ctx.gen(g as usize).degree).sum();
    let kappa = parity_sign(e.degree * after);
    let mut rest = gens.clone();
    rest.remove(r);
    let ad = alg.degree(e.a);
    let gk = ctx.pure_gen(e.x);
    let mut val = SVec::new();
    // t_j(v)(a)·g_k
    if let Some((s, v)) = ctx.normalize(&rest) {
        if let Some(tv) = t.get(j, v) {
            let b = tv.column(e.a);
            svec_add_scaled(&mut val, &act_elem_on_s(ctx, &b, &gen_vec(gk)), &Rational::sign(s));
        }
        let vdeg = ctx.word(v).degree;
        let mut seq = rest.clone();
        seq.push(gk as u32);
        if let Some((s2, u)) = ctx.normalize(&seq) {
            let inner = corestriction_at(ctx, pure, t, j, u, memo);
            let c = Rational::sign(s2 * parity_sign((vdeg + 1) * ad));
            svec_add_scaled(&mut val, &act_on_s(ctx, e.a, &inner), &c);
        }
    }
    let out: SVec = val.iter().map(|(g, c)| (*g, c * &Rational::sign(kappa * parity_sign(ad)))).collect();
    memo.insert(w, out.clone());
    out
}

impl ShLieRinehartData {
    pub fn zero(ctx: Arc<SymContext>) -> Self {
        ShLieRinehartData { ctx, del: Coderivation::new(), t: TwistingCochain::new() }
    }

    pub fn module(&self) -> &Arc<ModuleSpec> {
        self.ctx.module()
    }

    /// Builds the full tables from values on generator words.
    pub fn from_generators(ctx: Arc<SymContext>, del: &Coderivation, t: &TwistingCochain) -> Result<Self, DataError> {
        let max = ctx.max_len();
        for (&j, m) in &del.corestrictions {
            if j == 0 || j >= max {
                if m.is_empty() {
                    continue;
                }
                return Err(DataError::Level { level: j, max: max - 1 });
            }
            for (&w, v) in m {
                let word = ctx.word_label(w);
                if !is_pure(&ctx, w) || ctx.word(w).len() != j + 1 {
                    return Err(DataError::NotGenerator { level: j, word });
                }
                let expected = ctx.word(w).degree - 1;
                if let Some(&g) = v.keys().find(|&&g| ctx.gen(g).degree != expected) {
                    return Err(DataError::Degree { level: j, word, got: ctx.gen(g).degree, expected });
                }
            }
        }
        for (&j, m) in &t.components {
            if j == 0 || j > max {
                if m.is_empty() {
                    continue;
                }
                return Err(DataError::Level { level: j, max });
            }
            for (&w, v) in m {
                let word = ctx.word_label(w);
                if !is_pure(&ctx, w) || ctx.word(w).len() != j {
                    return Err(DataError::NotGenerator { level: j, word });
                }
                let expected = ctx.word(w).degree - 1;
                if v.degree() != expected && !v.is_zero() {
                    return Err(DataError::Degree { level: j, word, got: v.degree(), expected });
                }
            }
        }
        let tt = extend_twisting(&ctx, t);
        let dd = extend_corestrictions(&ctx, del, &tt);
        Ok(ShLieRinehartData { ctx, del: dd, t: tt })
    }

    /// Values on generator words only.
    pub fn generator_data(&self) -> (Coderivation, TwistingCochain) {
        let mut del = Coderivation::new();
        for (&j, m) in &self.del.corestrictions {
            for (&w, v) in m {
                if is_pure(&self.ctx, w) {
                    del.set(j, w, v.clone());
                }
            }
        }
        let mut t = TwistingCochain::new();
        for (&j, m) in &self.t.components {
            for (&w, v) in m {
                if is_pure(&self.ctx, w) {
                    t.set(j, w, v.clone());
                }
            }
        }
        (del, t.normalized())
    }

    fn word_issue(&self, check: &str, level: usize, w: usize, extra: Vec<String>, detail: String) -> Issue {
        let mut witness = vec![self.ctx.word_label(w)];
        witness.extend(extra);
        Issue { check: check.into(), level, witness, detail }
    }

    /// Nonzero values of `d_Der t_j + t_j d0 + Σ t_k ∂^{j-k} + ½ Σ [t_k, t_l]`,
    /// keyed by `(j, word)`.
    pub fn twisting_residual_maps(&self) -> BTreeMap<(usize, usize), LinearMap> {
        let ctx = &self.ctx;
        let alg = ctx.module().algebra();
        let parts: Vec<WordMap> = (0..ctx.max_len()).map(|i| self.del.part(ctx, i)).collect();
        let half = Rational::new(1, 2);
        let mut out = BTreeMap::new();
        for j in 1..=ctx.max_len() {
            for &w in ctx.words_of_len(j) {
                let deg = ctx.word(w).degree - 2;
                let mut acc = LinearMap::zero(alg.basis().clone(), alg.basis().clone(), deg);
                if let Some(tw) = self.t.get(j, w) {
                    add_map(&mut acc, &d_der(alg, tw), &Rational::one());
                }
                for k in 1..=j {
                    for (u, c) in &parts[j - k].cols[w] {
                        if let Some(tu) = self.t.get(k, *u) {
                            add_map(&mut acc, tu, c);
                        }
                    }
                }
                for (w1, w2, c) in ctx.diagonal(w) {
                    let (k, l) = (ctx.word(*w1).len(), ctx.word(*w2).len());
                    if k == 0 || l == 0 {
                        continue;
                    }
                    let (Some(a), Some(b)) = (self.t.get(k, *w1), self.t.get(l, *w2)) else { continue };
                    let s = Rational::sign(parity_sign(ctx.word(*w1).degree));
                    add_map(&mut acc, &commutator(a, b), &(&(c * &s) * &half));
                }
                if !acc.is_zero() {
                    out.insert((j, w), acc);
                }
            }
        }
        out
    }

    pub fn twisting_residuals(&self) -> Vec<Issue> {
        let ab = self.ctx.module().algebra().basis();
        self.twisting_residual_maps()
            .into_iter()
            .map(|((j, w), acc)| {
                let (&(t, src), c) = acc.entries().iter().next().expect("nonzero map");
                let detail = format!("{} nonzero entries, e.g. {} ↦ {}", acc.entries().len(), ab.label(src), super::render_terms([(ab.label(t).to_string(), c.clone())]));
                self.word_issue("twisting cochain", j, w, vec![], detail)
            })
            .collect()
    }

    /// `t_j(a·u·rest) = (-1)^{|a|} a t_j(u·rest)` on all rational words.
    pub fn twisting_multilinearity(&self) -> Vec<Issue> {
        let ctx = &self.ctx;
        let alg = ctx.module().algebra();
        let mut out = Vec::new();
        for j in 1..=ctx.max_len() {
            'words: for &rest in ctx.words_of_len(j - 1) {
                for g in 0..ctx.gens().len() {
                    let base = ctx.mul_gen(g, rest).and_then(|(s, w)| self.t.get(j, w).map(|m| m.scale(&Rational::sign(s))));
                    for m in 0..alg.dim() {
                        let am = alg.degree(m);
                        let mut lhs: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
                        for (g2, c) in act_on_s(ctx, m, &gen_vec(g)) {
                            let Some((s, w)) = ctx.mul_gen(g2, rest) else { continue };
                            let Some(tw) = self.t.get(j, w) else { continue };
                            for (k, v) in tw.entries() {
                                *lhs.entry(*k).or_insert_with(Rational::zero) += &(&c * v) * &Rational::sign(s);
                            }
                        }
                        let mut rhs: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
                        if let Some(b) = &base {
                            let l = compose(&mult_map(alg, &alg.basis_element(m), am), b).expect("maps on A");
                            for (k, v) in l.entries() {
                                rhs.insert(*k, v * &Rational::sign(parity_sign(am)));
                            }
                        }
                        lhs.retain(|_, v| !v.is_zero());
                        if lhs != rhs {
                            let w = ctx.mul_gen(g, rest).map_or(rest, |(_, w)| w);
                            out.push(self.word_issue(
                                "twisting multilinearity",
                                j,
                                w,
                                vec![alg.basis().label(m).to_string()],
                                format!("slot {}", ctx.gen(g).label),
                            ));
                            continue 'words;
                        }
                    }
                }
            }
        }
        out
    }

    /// Each `t_j(w)` must be a derivation of A.
    pub fn twisting_derivations(&self) -> Vec<Issue> {
        let alg = self.ctx.module().algebra();
        let mut out = Vec::new();
        for (&j, m) in &self.t.components {
            for (&w, map) in m {
                let d = Derivation { degree: map.degree(), action: map.clone() };
                if let Some((a, b)) = d.leibniz_witness(alg) {
                    let ab = alg.basis();
                    out.push(self.word_issue(
                        "twisting derivation",
                        j,
                        w,
                        vec![ab.label(a).to_string(), ab.label(b).to_string()],
                        "Leibniz rule fails".into(),
                    ));
                }
            }
        }
        out
    }

    /// `c_j(v·(a·g)) = t_j(v)(a)·g + (-1)^{(|v|+1)|a|} a·c_j(v·g)`.
    pub fn anchor_leibniz(&self) -> Vec<Issue> {
        let ctx = &self.ctx;
        let alg = ctx.module().algebra();
        let cval = |j: usize, seq: &[u32]| -> SVec {
            match ctx.normalize(seq) {
                Some((s, w)) => self
                    .del
                    .get(j, w)
                    .map(|v| v.iter().map(|(g, c)| (*g, c * &Rational::sign(s))).collect())
                    .unwrap_or_default(),
                None => SVec::new(),
            }
        };
        let mut out = Vec::new();
        for j in 1..ctx.max_len() {
            'words: for &v in ctx.words_of_len(j) {
                let vdeg = ctx.word(v).degree;
                for g in 0..ctx.gens().len() {
                    let mut vg = ctx.word(v).gens.clone();
                    vg.push(g as u32);
                    let cvg = cval(j, &vg);
                    for m in 0..alg.dim() {
                        let am = alg.degree(m);
                        let mut lhs = SVec::new();
                        for (g2, c) in act_on_s(ctx, m, &gen_vec(g)) {
                            let mut seq = ctx.word(v).gens.clone();
                            seq.push(g2 as u32);
                            svec_add_scaled(&mut lhs, &cval(j, &seq), &c);
                        }
                        let mut rhs = act_on_s(ctx, m, &cvg);
                        rhs = rhs.into_iter().map(|(k, c)| (k, c * &Rational::sign(parity_sign((vdeg + 1) * am)))).collect();
                        if let Some(tv) = self.t.get(j, v) {
                            svec_add_scaled(&mut rhs, &act_elem_on_s(ctx, &tv.column(m), &gen_vec(g)), &Rational::one());
                        }
                        if lhs != rhs {
                            out.push(self.word_issue(
                                "anchor Leibniz rule",
                                j,
                                v,
                                vec![ctx.gen(g).label.clone(), alg.basis().label(m).to_string()],
                                "c_j(v·(a·g)) differs from the anchor expansion".into(),
                            ));
                            continue 'words;
                        }
                    }
                }
            }
        }
        out
    }

    /// Direct verification of every defining identity.
    pub fn route_a(&self) -> RouteOutcome {
        let ctx = &self.ctx;
        let mut issues = Vec::new();
        for (name, w) in ctx.module().validate() {
            issues.push(Issue { check: name, level: 0, witness: w, detail: String::new() });
        }
        for r in check_coalgebra_perturbation(ctx, &self.del) {
            let ql = ctx.module().qbasis();
            let linear: SVec = r
                .value
                .iter()
                .filter(|(w, _)| ctx.word(**w).len() == 1)
                .map(|(w, c)| (ctx.word(*w).gens[0] as usize, c.clone()))
                .collect();
            let value = super::render_terms(r.value.iter().map(|(w, c)| (ctx.word_label(*w), c.clone())));
            let lin = super::render_terms(linear.iter().map(|(g, c)| (ql.label(ctx.gen(*g).l_index).to_string(), c.clone())));
            issues.push(self.word_issue(
                "coderivation perturbation",
                r.level,
                r.word,
                vec![],
                format!("{value}; L-component {lin}"),
            ));
        }
        issues.extend(self.twisting_residuals());
        issues.extend(self.twisting_multilinearity());
        issues.extend(self.twisting_derivations());
        issues.extend(self.anchor_leibniz());
        RouteOutcome::new(issues)
    }

    /// Verification through the convolution algebra: `D_j` restricted to A
    /// are derivations, descend to A-multilinear forms, and square to zero.
    pub fn route_b(&self) -> RouteOutcome {
        let space = FormSpace::new(self.ctx.clone());
        let desc = DescendedSpace::new(&space);
        let ops = AmbientOperators::build(&space, &self.del, &self.t);
        let mut issues = ambient_derivation_issues(&space, &ops);
        for r in descent_check(&space, &desc, &ops) {
            if let Some((i, wit)) = &r.failure {
                let (w, a) = desc.split(*i);
                issues.push(Issue {
                    check: "descent".into(),
                    level: r.level,
                    witness: vec![space.label(space.index(w, a)), self.ctx.word_label(wit.word)],
                    detail: format!("slot {}", self.ctx.gen(wit.slot).label),
                });
            }
        }
        let inputs: Vec<Form> = (0..desc.dim()).map(|i| desc.lift_basis(&space, i)).collect();
        for r in crate::convolution::square_check(&ops, &inputs) {
            let (w, a) = desc.split(r.input);
            issues.push(Issue {
                check: "square zero".into(),
                level: r.level,
                witness: vec![space.label(space.index(w, a))],
                detail: super::render_terms(r.value.iter().map(|(i, c)| (space.label(*i), c.clone()))),
            });
        }
        RouteOutcome::new(issues)
    }
}

fn ambient_derivation_issues(space: &FormSpace, ops: &AmbientOperators) -> Vec<Issue> {
    let alg = space.algebra();
    let consts: Vec<Form> = (0..alg.dim()).map(|m| space.constant(&alg.basis_element(m))).collect();
    let mut out = Vec::new();
    for (j, d) in ops.d.iter().enumerate() {
        let imgs: Vec<Form> = consts.iter().map(|f| d.apply(f)).collect();
        'pairs: for m in 0..alg.dim() {
            for n in 0..alg.dim() {
                let lhs = d.apply(&space.constant(alg.mul_basis(m, n)));
                let mut rhs = space.cup(&imgs[m], &consts[n]);
                svec_add_scaled(&mut rhs, &space.cup(&consts[m], &imgs[n]), &Rational::sign(parity_sign(alg.degree(m))));
                if lhs != rhs {
                    let ab = alg.basis();
                    out.push(Issue {
                        check: "derivation on A".into(),
                        level: j,
                        witness: vec![ab.label(m).to_string(), ab.label(n).to_string()],
                        detail: String::new(),
                    });
                    break 'pairs;
                }
            }
        }
    }
    out
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum MaurerCartanError {
    #[error("D_{level} does not preserve A-multilinear forms: {witness:?}")]
    Descent { level: usize, witness: Vec<String> },
}

/// The multi derivation structure of an sh Lie-Rinehart pair; refuses when
/// some `D_j` fails to descend.
pub fn build_maurer_cartan(data: &ShLieRinehartData) -> Result<MdcaStructure, MaurerCartanError> {
    let space = Arc::new(FormSpace::new(data.ctx.clone()));
    let desc = Arc::new(DescendedSpace::new(&space));
    let ops = AmbientOperators::build(&space, &data.del, &data.t);
    for r in descent_check(&space, &desc, &ops) {
        if let Some((i, wit)) = &r.failure {
            let (w, a) = desc.split(*i);
            return Err(MaurerCartanError::Descent {
                level: r.level,
                witness: vec![space.label(space.index(w, a)), data.ctx.word_label(wit.word)],
            });
        }
    }
    Ok(MdcaStructure::from_operators(space, desc, &ops))
}

/// Result of reading an sh Lie-Rinehart pair back from a structure.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub data: ShLieRinehartData,
    /// Whether rebuilding from `data` reproduces the structure exactly.
    pub consistent: bool,
}

/// Recovers `t_j` from `D_j` on A and `c_j` from `D_j` on the dual 1-forms.
pub fn extract_structure(m: &MdcaStructure) -> Extraction {
    let space = m.space();
    let desc = m.desc();
    let ctx = space.ctx().clone();
    let alg = space.algebra();
    let ab = alg.basis();
    let w_max = ctx.max_len();
    let mut t = TwistingCochain::new();
    for j in 1..=w_max.min(m.levels() - 1) {
        let lifted: Vec<Form> = (0..alg.dim()).map(|a| desc.lift(space, &m.on_algebra[j][a])).collect();
        for &w in ctx.words_of_len(j) {
            let wdeg = ctx.word(w).degree;
            let mut map = LinearMap::zero(ab.clone(), ab.clone(), wdeg - 1);
            let mut ok = true;
            for (a, f) in lifted.iter().enumerate() {
                let s = Rational::sign(parity_sign(alg.degree(a) * wdeg));
                for (b, c) in space.value(f, w).iter().enumerate() {
                    if !c.is_zero() && map.add_to(b, a, &(c * &s)).is_err() {
                        ok = false;
                    }
                }
            }
            if ok {
                t.set(j, w, map);
            }
        }
    }
    let t = t.normalized();
    let module = ctx.module();
    let mut del = Coderivation::new();
    for j in 1..w_max.min(m.levels()) {
        let mut vals: BTreeMap<usize, SVec> = BTreeMap::new();
        for k in 0..module.rank() {
            let gk = ctx.pure_gen(k);
            let phi_deg = -ctx.gen(gk).degree;
            let phi = desc.lift(space, &[(desc.index(ctx.gen_word(gk), alg.unit()).unwrap(), Rational::one())].into_iter().collect());
            let dphi = desc.lift(space, &m.on_duals[j][k]);
            for &w in ctx.words_of_len(j + 1) {
                let mut y = space.value(&dphi, w);
                for (w1, w2, c) in ctx.diagonal(w) {
                    if ctx.word(*w1).len() != j {
                        continue;
                    }
                    let Some(tm) = t.get(j, *w1) else { continue };
                    let s = Rational::sign(parity_sign(phi_deg * ctx.word(*w1).degree));
                    let img = tm.apply(&space.value(&phi, *w2));
                    for (x, v) in y.iter_mut().zip(img) {
                        *x -= &(&(c * &s) * &v);
                    }
                }
                let s = Rational::sign(parity_sign(phi_deg + 1));
                let e = vals.entry(w).or_default();
                for (i, x) in y.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let dual = Rational::sign(parity_sign(alg.degree(i) * (1 + phi_deg)));
                    add_entry(e, ctx.gen_of(i, k), &(&(x * &s) * &dual));
                }
            }
        }
        for (w, v) in vals {
            del.set(j, w, v);
        }
    }
    let data = ShLieRinehartData { ctx, del, t };
    let consistent = match build_maurer_cartan(&data) {
        Ok(rebuilt) => rebuilt == *m,
        Err(_) => false,
    };
    Extraction { data, consistent }
}
