use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::ModuleSpec;
use crate::graded_core::linalg::add_entry;
use crate::graded_core::{sort_sign, Rational, SVec};

/// A generator `s(a_i x_k)` of the suspension sL.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SGen {
    /// Index into the rational basis of L.
    pub l_index: usize,
    pub a: usize,
    pub x: usize,
    pub degree: i64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymWord {
    /// Sorted generator indices in canonical order.
    pub gens: Vec<u32>,
    pub degree: i64,
}

impl SymWord {
    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }
}

/// Word-length bound and degree window for enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationPolicy {
    pub max_len: usize,
    pub degree_window: (i64, i64),
}

impl TruncationPolicy {
    pub fn new(max_len: usize) -> Self {
        TruncationPolicy { max_len, degree_window: (i64::MIN / 4, i64::MAX / 4) }
    }

    pub fn with_window(max_len: usize, dmin: i64, dmax: i64) -> Self {
        TruncationPolicy { max_len, degree_window: (dmin, dmax) }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum WordError {
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("word length bound must be at least 2, got {0}")]
    BoundTooSmall(usize),
}

/// All words of Σ[sL] up to a length bound, with the shuffle diagonal
/// precomputed.
#[derive(Debug)]
pub struct SymContext {
    module: Arc<ModuleSpec>,
    max_len: usize,
    gens: Vec<SGen>,
    gen_of_l: Vec<usize>,
    words: Vec<SymWord>,
    index: HashMap<Vec<u32>, usize>,
    by_len: Vec<Vec<usize>>,
    /// `diag[w]` lists `(w1, w2, c)` with `Δ(w) = Σ c w1 ⊗ w2`.
    diag: Vec<Vec<(usize, usize, Rational)>>,
}

fn sgen_label(l: &str) -> String {
    if l.chars().all(|c| c.is_alphanumeric() || c == '_') {
        format!("s{l}")
    } else {
        format!("s({l})")
    }
}

fn multisets(n: usize, len: usize, odd: &[bool], out: &mut Vec<Vec<u32>>) {
    fn rec(start: usize, n: usize, left: usize, odd: &[bool], cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for g in start..n {
            if odd[g] && cur.last() == Some(&(g as u32)) {
                continue;
            }
            cur.push(g as u32);
            rec(g, n, left - 1, odd, cur, out);
            cur.pop();
        }
    }
    rec(0, n, len, odd, &mut Vec::new(), out);
}

impl SymContext {
    pub fn new(module: Arc<ModuleSpec>, max_len: usize) -> Result<Self, WordError> {
        if max_len < 2 {
            return Err(WordError::BoundTooSmall(max_len));
        }
        let qb = module.qbasis().clone();
        let mut order: Vec<usize> = (0..qb.len()).collect();
        order.sort_by(|&p, &q| (qb.degree(p), qb.label(p)).cmp(&(qb.degree(q), qb.label(q))));
        let mut gen_of_l = vec![0; qb.len()];
        let gens: Vec<SGen> = order
            .iter()
            .enumerate()
            .map(|(g, &l)| {
                gen_of_l[l] = g;
                let (a, x) = module.split(l);
                SGen { l_index: l, a, x, degree: qb.degree(l) + 1, label: sgen_label(qb.label(l)) }
            })
            .collect();
        let odd: Vec<bool> = gens.iter().map(|g| g.degree % 2 != 0).collect();
        let mut words = Vec::new();
        let mut by_len = Vec::new();
        for len in 0..=max_len {
            let mut ms = Vec::new();
            multisets(gens.len(), len, &odd, &mut ms);
            let mut ids = Vec::new();
            for m in ms {
                let degree = m.iter().map(|&g| gens[g as usize].degree).sum();
                ids.push(words.len());
                words.push(SymWord { gens: m, degree });
            }
            by_len.push(ids);
        }
        let index = words.iter().enumerate().map(|(i, w)| (w.gens.clone(), i)).collect();
        let mut ctx = SymContext { module, max_len, gens, gen_of_l, words, index, by_len, diag: Vec::new() };
        ctx.diag = (0..ctx.words.len()).map(|w| ctx.compute_diagonal(w)).collect();
        Ok(ctx)
    }

    fn compute_diagonal(&self, w: usize) -> Vec<(usize, usize, Rational)> {
        let word = &self.words[w].gens;
        let p = word.len();
        let mut acc: HashMap<(usize, usize), Rational> = HashMap::new();
        for mask in 0u32..(1u32 << p) {
            let items: Vec<((u8, usize), i64)> = (0..p)
                .map(|i| (((mask >> i) & 1 == 0) as u8, i))
                .map(|k| (k, self.gens[word[k.1] as usize].degree))
                .collect();
            let (s, _) = sort_sign(&items);
            let left: Vec<u32> = (0..p).filter(|i| mask >> i & 1 == 1).map(|i| word[i]).collect();
            let right: Vec<u32> = (0..p).filter(|i| mask >> i & 1 == 0).map(|i| word[i]).collect();
            let key = (self.index[&left], self.index[&right]);
            *acc.entry(key).or_insert_with(Rational::zero) += Rational::sign(s);
        }
        let mut out: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|((a, b), c)| (a, b, c)).collect();
        out.sort_by_key(|e| (e.0, e.1));
        out
    }

    pub fn module(&self) -> &Arc<ModuleSpec> {
        &self.module
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn gens(&self) -> &[SGen] {
        &self.gens
    }

    pub fn gen(&self, g: usize) -> &SGen {
        &self.gens[g]
    }

    /// The sL generator suspending the L basis element `l`.
    pub fn gen_of_l(&self, l: usize) -> usize {
        self.gen_of_l[l]
    }

    pub fn gen_of(&self, a: usize, x: usize) -> usize {
        self.gen_of_l[self.module.index(a, x)]
    }

    /// The generator `s(1 ⊗ x_k)`.
    pub fn pure_gen(&self, k: usize) -> usize {
        self.gen_of(self.module.algebra().unit(), k)
    }

    pub fn gen_position(&self, label: &str) -> Result<usize, WordError> {
        self.gens
            .iter()
            .position(|g| g.label == label)
            .ok_or_else(|| WordError::UnknownGenerator(label.to_string()))
    }

    pub fn words(&self) -> &[SymWord] {
        &self.words
    }

    pub fn word(&self, w: usize) -> &SymWord {
        &self.words[w]
    }

    pub fn num_words(&self) -> usize {
        self.words.len()
    }

    pub fn words_of_len(&self, len: usize) -> &[usize] {
        self.by_len.get(len).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn word_index(&self, gens: &[u32]) -> Option<usize> {
        self.index.get(gens).copied()
    }

    pub fn unit_word(&self) -> usize {
        self.by_len[0][0]
    }

    pub fn gen_word(&self, g: usize) -> usize {
        self.index[&vec![g as u32]]
    }

    pub fn diagonal(&self, w: usize) -> &[(usize, usize, Rational)] {
        &self.diag[w]
    }

    /// Coefficient of `u ⊗ v` in `Δ(w)`.
    pub fn coproduct_coeff(&self, w: usize, u: usize, v: usize) -> Option<&Rational> {
        let d = &self.diag[w];
        d.binary_search_by_key(&(u, v), |e| (e.0, e.1)).ok().map(|i| &d[i].2)
    }

    /// Sorts a generator sequence into canonical order with its Koszul sign;
    /// `None` when the product vanishes or is longer than the bound.
    pub fn normalize(&self, seq: &[u32]) -> Option<(i32, usize)> {
        let items: Vec<(u32, i64)> = seq.iter().map(|&g| (g, self.gens[g as usize].degree)).collect();
        let (s, order) = sort_sign(&items);
        let sorted: Vec<u32> = order.iter().map(|&i| seq[i]).collect();
        for p in sorted.windows(2) {
            if p[0] == p[1] && self.gens[p[0] as usize].degree % 2 != 0 {
                return None;
            }
        }
        self.index.get(&sorted).map(|&w| (s, w))
    }

    /// Product of two basis words.
    pub fn mul_words(&self, u: usize, v: usize) -> Option<(i32, usize)> {
        let mut seq = self.words[u].gens.clone();
        seq.extend_from_slice(&self.words[v].gens);
        self.normalize(&seq)
    }

    /// Product `g · w` of a generator with a word.
    pub fn mul_gen(&self, g: usize, w: usize) -> Option<(i32, usize)> {
        let mut seq = vec![g as u32];
        seq.extend_from_slice(&self.words[w].gens);
        self.normalize(&seq)
    }

    /// `v · w` for `v` a combination of sL generators.
    pub fn mul_gens_vec(&self, v: &SVec, w: usize) -> SVec {
        let mut out = SVec::new();
        for (&g, c) in v {
            if let Some((s, u)) = self.mul_gen(g, w) {
                add_entry(&mut out, u, &(c * &Rational::sign(s)));
            }
        }
        out
    }

    pub fn word_label(&self, w: usize) -> String {
        let word = &self.words[w];
        if word.is_empty() {
            return "1".into();
        }
        word.gens.iter().map(|&g| self.gens[g as usize].label.as_str()).collect::<Vec<_>>().join("·")
    }

    pub fn word_labels(&self, w: usize) -> Vec<String> {
        self.words[w].gens.iter().map(|&g| self.gens[g as usize].label.clone()).collect()
    }

    /// Words within the policy, ordered by length then degree then index.
    pub fn word_basis(&self, policy: &TruncationPolicy) -> Vec<usize> {
        let (lo, hi) = policy.degree_window;
        let mut out: Vec<usize> = (0..self.words.len())
            .filter(|&w| {
                let word = &self.words[w];
                word.len() <= policy.max_len && word.degree >= lo && word.degree <= hi
            })
            .collect();
        out.sort_by_key(|&w| (self.words[w].len(), self.words[w].degree, w));
        out
    }
}

impl fmt::Display for SymWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.gens.iter().map(|g| format!("g{g}")).collect();
        write!(f, "[{}]", v.join(","))
    }
}

/// Canonical word for a generator sequence given by labels.
pub fn normalize_word(ctx: &SymContext, labels: &[&str]) -> Result<Option<(i32, SymWord)>, WordError> {
    let seq = labels.iter().map(|l| ctx.gen_position(l).map(|g| g as u32)).collect::<Result<Vec<_>, _>>()?;
    Ok(ctx.normalize(&seq).map(|(s, w)| (s, ctx.word(w).clone())))
}

/// `Δ(w)` as `(left, right, coefficient)` triples.
pub fn shuffle_diagonal(ctx: &SymContext, w: usize) -> Vec<(SymWord, SymWord, Rational)> {
    ctx.diagonal(w).iter().map(|(a, b, c)| (ctx.word(*a).clone(), ctx.word(*b).clone(), c.clone())).collect()
}

/// Words of `module` within the policy.
pub fn word_basis(module: Arc<ModuleSpec>, policy: &TruncationPolicy) -> Result<Vec<SymWord>, WordError> {
    let ctx = SymContext::new(module, policy.max_len.max(2))?;
    Ok(ctx.word_basis(policy).into_iter().map(|w| ctx.word(w).clone()).collect())
}
