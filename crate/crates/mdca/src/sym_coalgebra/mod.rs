//! The symmetric coalgebra on the suspension of a free dg A-module: word
//! bases, the shuffle diagonal, coderivations and brackets.

mod brackets;
mod coderivation;
mod module;
mod words;

pub use brackets::{
    brackets_from_coderivation, coderivation_from_brackets, suspension_sign, BracketError, Brackets,
};
pub use coderivation::{
    check_coalgebra_perturbation, d0_corestriction, extend_coderivation, Coderivation, PerturbationResidual,
    WordMap,
};
pub use module::{ModuleError, ModuleSpec};
pub use words::{
    normalize_word, shuffle_diagonal, word_basis, SGen, SymContext, SymWord, TruncationPolicy, WordError,
};

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;
    use std::sync::Arc;

    use super::*;
    use crate::cdga::ground_field;
    use crate::graded_core::{GradedBasis, Rational, SVec};

    fn lie_module(names: &[&str]) -> Arc<ModuleSpec> {
        let gens = Arc::new(GradedBasis::from_pairs(names.iter().map(|n| (*n, 0))).unwrap());
        Arc::new(ModuleSpec::new(Arc::new(ground_field()), gens, None).unwrap())
    }

    fn sv(ctx: &SymContext, terms: &[(&str, i64)]) -> SVec {
        let mut v = SVec::new();
        for (l, c) in terms {
            let x = ctx.module().qbasis().position(l).unwrap();
            v.insert(x, Rational::from_int(*c));
        }
        v
    }

    fn lie_brackets(ctx: &SymContext, table: &[(&str, &str, &[(&str, i64)])]) -> Brackets {
        let q = ctx.module().qbasis();
        let mut values = BTreeMap::new();
        for (a, b, v) in table {
            let (x, y) = (q.position(a).unwrap(), q.position(b).unwrap());
            let mut key = vec![x, y];
            let mut val = sv(ctx, v);
            if ctx.gen_of_l(x) > ctx.gen_of_l(y) {
                key.reverse();
                val = val.into_iter().map(|(k, c)| (k, -c)).collect();
            }
            values.insert(key, val);
        }
        Brackets { arity: 2, values }
    }

    fn sl2(w: usize) -> (SymContext, Coderivation) {
        let ctx = SymContext::new(lie_module(&["e", "f", "h"]), w).unwrap();
        let b = lie_brackets(&ctx, &[("e", "f", &[("h", 1)]), ("h", "e", &[("e", 2)]), ("h", "f", &[("f", -2)])]);
        let del = coderivation_from_brackets(&ctx, &[b]).unwrap();
        (ctx, del)
    }

    fn word(ctx: &SymContext, labels: &[&str]) -> (i32, usize) {
        let seq: Vec<u32> = labels.iter().map(|l| ctx.gen_position(l).unwrap() as u32).collect();
        ctx.normalize(&seq).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let ctx = SymContext::new(lie_module(&["x", "y"]), 3).unwrap();
        let (s, w) = normalize_word(&ctx, &["sy", "sx"]).unwrap().unwrap();
        assert_eq!(s, -1);
        assert_eq!(ctx.word_index(&w.gens), Some(word(&ctx, &["sx", "sy"]).1));
        assert!(normalize_word(&ctx, &["sx", "sx"]).unwrap().is_none());
        assert_eq!(normalize_word(&ctx, &["sx"]).unwrap().unwrap().0, 1);
        assert!(matches!(normalize_word(&ctx, &["sq"]), Err(WordError::UnknownGenerator(_))));
    }

    #[test]
    fn word_counts() {
        let even = Arc::new(
            ModuleSpec::new(
                Arc::new(ground_field()),
                Arc::new(GradedBasis::from_pairs([("x", -1)]).unwrap()),
                None,
            )
            .unwrap(),
        );
        assert_eq!(word_basis(even, &TruncationPolicy::new(3)).unwrap().len(), 4);
        assert_eq!(word_basis(lie_module(&["x"]), &TruncationPolicy::new(3)).unwrap().len(), 2);
        let ctx = SymContext::new(lie_module(&["e", "f", "h"]), 2).unwrap();
        let counts: Vec<usize> = (0..=2).map(|l| ctx.words_of_len(l).len()).collect();
        assert_eq!(counts, vec![1, 3, 3]);
    }

    #[test]
    fn diagonal_of_two_odd_generators() {
        let ctx = SymContext::new(lie_module(&["x", "y"]), 2).unwrap();
        let (_, xy) = word(&ctx, &["sx", "sy"]);
        let (x, y, one) = (ctx.gen_word(0), ctx.gen_word(1), ctx.unit_word());
        let mut got = ctx.diagonal(xy).to_vec();
        got.sort_by_key(|e| (e.0, e.1));
        let mut want = vec![
            (xy, one, Rational::one()),
            (x, y, Rational::one()),
            (y, x, -Rational::one()),
            (one, xy, Rational::one()),
        ];
        want.sort_by_key(|e| (e.0, e.1));
        assert_eq!(got, want);
    }

    #[test]
    fn sl2_bracket_coderivation() {
        let (ctx, del) = sl2(3);
        let d1 = del.part(&ctx, 1);
        let (s, ef) = word(&ctx, &["se", "sf"]);
        assert_eq!(s, 1);
        let sh = ctx.gen_word(ctx.gen_position("sh").unwrap());
        assert_eq!(d1.cols[ef], [(sh, Rational::one())].into_iter().collect());
        // the three 2-subsets of se·sf·sh: sh·sh = 0, -s[e,h]·sf = 2 se·sf, s[f,h]·se = -2 se·sf
        let (_, efh) = word(&ctx, &["se", "sf", "sh"]);
        assert!(d1.cols[efh].is_empty());
        assert!(check_coalgebra_perturbation(&ctx, &del).is_empty());
        let b = brackets_from_coderivation(&ctx, &del, 2).unwrap();
        let q = ctx.module().qbasis();
        let (e, f, h) = (q.position("e").unwrap(), q.position("f").unwrap(), q.position("h").unwrap());
        assert_eq!(b.eval(&ctx, &[e, f]), sv(&ctx, &[("h", 1)]));
        assert_eq!(b.eval(&ctx, &[f, e]), sv(&ctx, &[("h", -1)]));
        assert_eq!(b.eval(&ctx, &[h, e]), sv(&ctx, &[("e", 2)]));
    }

    #[test]
    fn jacobi_violator_residual() {
        let ctx = SymContext::new(lie_module(&["x", "y", "z"]), 3).unwrap();
        let b = lie_brackets(&ctx, &[("x", "y", &[("x", 1)]), ("y", "z", &[("y", 1)]), ("z", "x", &[("z", 1)])]);
        let del = coderivation_from_brackets(&ctx, &[b.clone()]).unwrap();
        let res = check_coalgebra_perturbation(&ctx, &del);
        let (_, xyz) = word(&ctx, &["sx", "sy", "sz"]);
        assert_eq!(res.len(), 1);
        assert_eq!((res[0].level, res[0].word), (2, xyz));
        // oracle: [[x,y],z] + [[y,z],x] + [[z,x],y] from the bracket table
        let q = ctx.module().qbasis();
        let (x, y, z) = (q.position("x").unwrap(), q.position("y").unwrap(), q.position("z").unwrap());
        let br = |u: &SVec, w: usize| {
            let mut out = SVec::new();
            for (k, c) in u {
                crate::graded_core::linalg::svec_add_scaled(&mut out, &b.eval(&ctx, &[*k, w]), c);
            }
            out
        };
        let mut jac = SVec::new();
        for (p, r, t) in [(x, y, z), (y, z, x), (z, x, y)] {
            let inner = b.eval(&ctx, &[p, r]);
            crate::graded_core::linalg::svec_add_scaled(&mut jac, &br(&inner, t), &Rational::one());
        }
        assert_eq!(jac, sv(&ctx, &[("x", -1), ("y", -1), ("z", -1)]));
        let value: SVec = res[0]
            .value
            .iter()
            .map(|(w, c)| (ctx.gen(ctx.word(*w).gens[0] as usize).l_index, c.clone()))
            .collect();
        assert!(res[0].value.keys().all(|&w| ctx.word(w).len() == 1));
        assert_eq!(value, jac);
    }

    #[test]
    fn zero_brackets_round_trip() {
        let ctx = SymContext::new(lie_module(&["x", "y"]), 3).unwrap();
        let del = Coderivation::new();
        assert!(del.part(&ctx, 1).is_zero());
        assert!(brackets_from_coderivation(&ctx, &del, 2).unwrap().values.is_empty());
        assert!(matches!(brackets_from_coderivation(&ctx, &del, 4), Err(BracketError::OutOfRange { .. })));
    }
}
