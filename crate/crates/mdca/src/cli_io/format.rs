use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::cdga::{exterior, AlgebraSpec};
use crate::convolution::{DescendedSpace, FormSpace, MdcaStructure, TwistingCochain};
use crate::graded_core::linalg::add_entry;
use crate::graded_core::{Generator, GradedBasis, LinearMap, Rational, SVec};
use crate::structures::{LieRinehartData, QuasiLieRinehartData, ShLieRinehartData};
use crate::sym_coalgebra::{Coderivation, ModuleSpec, SymContext};

pub const DEFAULT_W: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InputError {
    /// Malformed JSON, with its line and column.
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    /// A well-formed document whose content is rejected at `locus`.
    #[error("{locus}: {message}")]
    Invalid { locus: String, message: String },
    #[error("unsupported structure kind {0:?}")]
    Unsupported(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

pub(crate) fn invalid(locus: impl Into<String>, message: impl ToString) -> InputError {
    InputError::Invalid { locus: locus.into(), message: message.to_string() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Lr,
    Shlr,
    Quasi,
    Mdca,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::Lr, Kind::Shlr, Kind::Quasi, Kind::Mdca];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Lr => "lr",
            Kind::Shlr => "shlr",
            Kind::Quasi => "quasi",
            Kind::Mdca => "mdca",
        }
    }

    /// Key of the structure section in instance files.
    pub fn section(self) -> &'static str {
        match self {
            Kind::Lr => "lie_rinehart",
            Kind::Shlr => "sh_lie_rinehart",
            Kind::Quasi => "quasi",
            Kind::Mdca => "mdca",
        }
    }
}

impl FromStr for Kind {
    type Err = InputError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Kind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| InputError::Unsupported(s.to_string()))
    }
}

/// Generator data of an sh Lie-Rinehart pair, keyed by labels of sL.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ShTables {
    /// `(j, word, target, r)`: `c_j(word)` has coefficient `r` on `target`.
    pub coderivations: Vec<(usize, Vec<String>, String, Rational)>,
    /// `(j, word, i, k, r)`: `t_j(word)(a_k)` has coefficient `r` on `a_i`.
    pub twisting: Vec<(usize, Vec<String>, usize, usize, Rational)>,
}

/// Generator action tables of a multi derivation structure.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MdcaTables {
    /// `(j, m, word, a, r)`: `D_j(a_m)` has coefficient `r` on the form `(word, a)`.
    pub on_algebra: Vec<(usize, usize, Vec<String>, usize, Rational)>,
    /// `(j, k, word, a, r)`: the same for `D_j(g_k^*)`.
    pub on_duals: Vec<(usize, usize, Vec<String>, usize, Rational)>,
}

#[derive(Debug, Clone)]
pub enum Structure {
    LieRinehart(LieRinehartData),
    Sh(ShTables),
    Quasi(QuasiLieRinehartData),
    Mdca(MdcaTables),
}

impl Structure {
    pub fn kind(&self) -> Kind {
        match self {
            Structure::LieRinehart(_) => Kind::Lr,
            Structure::Sh(_) => Kind::Shlr,
            Structure::Quasi(_) => Kind::Quasi,
            Structure::Mdca(_) => Kind::Mdca,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Policy {
    pub w: Option<usize>,
    /// Upper degrees, inclusive.
    pub degree_window: Option<(i64, i64)>,
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub name: Option<String>,
    pub module: Arc<ModuleSpec>,
    pub structure: Structure,
    pub policy: Policy,
}

impl Instance {
    pub fn algebra(&self) -> &Arc<AlgebraSpec> {
        self.module.algebra()
    }
}

fn context(module: &Arc<ModuleSpec>, w: usize) -> Result<Arc<SymContext>, InputError> {
    SymContext::new(module.clone(), w).map(Arc::new).map_err(|e| invalid("policy.W", e))
}

/// Canonical word for a list of sL labels with the sign of the reordering.
fn word_of(ctx: &SymContext, labels: &[String], locus: &str) -> Result<(i32, usize), InputError> {
    let gens = labels
        .iter()
        .map(|l| ctx.gen_position(l).map(|g| g as u32).map_err(|e| invalid(locus, e)))
        .collect::<Result<Vec<_>, _>>()?;
    if gens.len() > ctx.max_len() {
        return Err(invalid(locus, format!("word longer than W = {}", ctx.max_len())));
    }
    ctx.normalize(&gens).ok_or_else(|| invalid(locus, "word vanishes: an odd generator is repeated"))
}

impl ShTables {
    pub fn to_data(&self, module: &Arc<ModuleSpec>, w: usize) -> Result<ShLieRinehartData, InputError> {
        let ctx = context(module, w)?;
        let ab = module.algebra().basis().clone();
        let sec = "structure.sh_lie_rinehart";
        let mut del = Coderivation::new();
        for (n, (j, word, target, r)) in self.coderivations.iter().enumerate() {
            let locus = format!("{sec}.coderivations.{j}[{n}]");
            let (s, wd) = word_of(&ctx, word, &locus)?;
            let g = ctx.gen_position(target).map_err(|e| invalid(&locus, e))?;
            let mut v = del.get(*j, wd).cloned().unwrap_or_default();
            add_entry(&mut v, g, &(r * &Rational::sign(s)));
            del.set(*j, wd, v);
        }
        let mut t = TwistingCochain::new();
        for (n, (j, word, i, k, r)) in self.twisting.iter().enumerate() {
            let locus = format!("{sec}.twisting.{j}[{n}]");
            let (s, wd) = word_of(&ctx, word, &locus)?;
            if *i >= ab.len() || *k >= ab.len() {
                return Err(invalid(locus, "algebra index out of range"));
            }
            let deg = ctx.word(wd).degree - 1;
            let mut m = t.get(*j, wd).cloned().unwrap_or_else(|| LinearMap::zero(ab.clone(), ab.clone(), deg));
            m.add_to(*i, *k, &(r * &Rational::sign(s))).map_err(|e| invalid(&locus, e))?;
            t.set(*j, wd, m);
        }
        ShLieRinehartData::from_generators(ctx, &del, &t).map_err(|e| invalid(sec, e))
    }

    pub fn from_data(data: &ShLieRinehartData) -> Self {
        let ctx = &data.ctx;
        let (del, t) = data.generator_data();
        let mut out = ShTables::default();
        for (&j, m) in &del.corestrictions {
            for (&w, v) in m {
                for (&g, r) in v {
                    out.coderivations.push((j, ctx.word_labels(w), ctx.gen(g).label.clone(), r.clone()));
                }
            }
        }
        for (&j, m) in &t.components {
            for (&w, map) in m {
                for (&(i, k), r) in map.entries() {
                    out.twisting.push((j, ctx.word_labels(w), i, k, r.clone()));
                }
            }
        }
        out
    }
}

impl MdcaTables {
    pub fn to_structure(&self, module: &Arc<ModuleSpec>, w: usize) -> Result<MdcaStructure, InputError> {
        let ctx = context(module, w)?;
        let alg = module.algebra().clone();
        let space = Arc::new(FormSpace::new(ctx.clone()));
        let desc = Arc::new(DescendedSpace::new(&space));
        let levels = w + 1;
        let mut on_algebra = vec![vec![SVec::new(); alg.dim()]; levels];
        let mut on_duals = vec![vec![SVec::new(); module.rank()]; levels];
        let sec = "structure.mdca";
        for (table, name, rows, count) in
            [(&mut on_algebra, "on_algebra", &self.on_algebra, alg.dim()), (&mut on_duals, "on_duals", &self.on_duals, module.rank())]
        {
            for (n, (j, m, word, a, r)) in rows.iter().enumerate() {
                let locus = format!("{sec}.{name}.{j}[{n}]");
                if *j >= levels || *m >= count || *a >= alg.dim() {
                    return Err(invalid(locus, "index out of range"));
                }
                let (s, wd) = word_of(&ctx, word, &locus)?;
                let i = desc.index(wd, *a).ok_or_else(|| invalid(&locus, "form is not on a word of generators"))?;
                let (source_deg, len) = if name == "on_algebra" {
                    (alg.degree(*m), *j)
                } else {
                    (-ctx.gen(ctx.pure_gen(*m)).degree, j + 1)
                };
                if ctx.word(wd).len() != len {
                    return Err(invalid(locus, format!("D_{j} of this element has word length {len}")));
                }
                if desc.degree(&space, i) != source_deg - 1 {
                    return Err(invalid(locus, "degree mismatch"));
                }
                add_entry(&mut table[*j][*m], i, &(r * &Rational::sign(s)));
            }
        }
        Ok(MdcaStructure::new(space, desc, on_algebra, on_duals))
    }

    pub fn from_structure(m: &MdcaStructure) -> Self {
        let space = m.space();
        let desc = m.desc();
        let ctx = space.ctx();
        let rows = |table: &Vec<Vec<SVec>>| {
            let mut out = Vec::new();
            for (j, row) in table.iter().enumerate() {
                for (x, f) in row.iter().enumerate() {
                    for (&i, r) in f {
                        let (w, a) = desc.split(i);
                        out.push((j, x, ctx.word_labels(w), a, r.clone()));
                    }
                }
            }
            out
        };
        MdcaTables { on_algebra: rows(&m.on_algebra), on_duals: rows(&m.on_duals) }
    }
}

// ---- parsing ----

struct Obj<'a> {
    map: &'a Map<String, Value>,
    locus: String,
}

impl<'a> Obj<'a> {
    fn new(v: &'a Value, locus: &str, allowed: &[&str]) -> Result<Self, InputError> {
        let map = v.as_object().ok_or_else(|| invalid(locus, "expected an object"))?;
        for k in map.keys() {
            if !allowed.contains(&k.as_str()) {
                return Err(invalid(locus, format!("unknown key {k:?}")));
            }
        }
        Ok(Obj { map, locus: locus.to_string() })
    }

    fn sub(&self, key: &str) -> String {
        if self.locus.is_empty() {
            key.to_string()
        } else {
            format!("{}.{key}", self.locus)
        }
    }

    fn get(&self, key: &str) -> Option<&'a Value> {
        self.map.get(key)
    }

    fn req(&self, key: &str) -> Result<&'a Value, InputError> {
        self.map.get(key).ok_or_else(|| invalid(&self.locus, format!("missing key {key:?}")))
    }

    fn rows(&self, key: &str) -> Result<Vec<(String, &'a [Value])>, InputError> {
        match self.get(key) {
            None => Ok(Vec::new()),
            Some(v) => rows(v, &self.sub(key)),
        }
    }
}

fn rows<'a>(v: &'a Value, locus: &str) -> Result<Vec<(String, &'a [Value])>, InputError> {
    let items = v.as_array().ok_or_else(|| invalid(locus, "expected an array"))?;
    items
        .iter()
        .enumerate()
        .map(|(n, it)| {
            let l = format!("{locus}[{n}]");
            let row = it.as_array().ok_or_else(|| invalid(&l, "expected an array"))?;
            Ok((l, row.as_slice()))
        })
        .collect()
}

fn arity<'a>(row: &'a [Value], n: usize, locus: &str) -> Result<&'a [Value], InputError> {
    if row.len() != n {
        return Err(invalid(locus, format!("expected {n} entries, found {}", row.len())));
    }
    Ok(row)
}

fn index(v: &Value, bound: usize, locus: &str) -> Result<usize, InputError> {
    let i = v.as_u64().ok_or_else(|| invalid(locus, "expected a non-negative integer index"))? as usize;
    if i >= bound {
        return Err(invalid(locus, format!("index {i} out of range (size {bound})")));
    }
    Ok(i)
}

fn integer(v: &Value, locus: &str) -> Result<i64, InputError> {
    v.as_i64().ok_or_else(|| invalid(locus, "expected an integer"))
}

fn rational(v: &Value, locus: &str) -> Result<Rational, InputError> {
    let s = v.as_str().ok_or_else(|| invalid(locus, "rationals are written as \"p/q\" strings"))?;
    Rational::parse_strict(s).map_err(|e| invalid(locus, format!("{s:?}: {e}")))
}

fn label_list(v: &Value, locus: &str) -> Result<Vec<String>, InputError> {
    let items = v.as_array().ok_or_else(|| invalid(locus, "expected an array of labels"))?;
    items.iter().map(|x| x.as_str().map(str::to_string).ok_or_else(|| invalid(locus, "expected a label"))).collect()
}

fn level_key(k: &str, locus: &str) -> Result<usize, InputError> {
    k.parse::<usize>().ok().filter(|&j| j > 0).ok_or_else(|| invalid(locus, format!("level key {k:?} is not a positive integer")))
}

fn generators(v: Option<&Value>, locus: &str, upper: bool) -> Result<Arc<GradedBasis>, InputError> {
    let v = v.ok_or_else(|| invalid(locus, "missing key \"generators\""))?;
    let loc = format!("{locus}.generators");
    let items = v.as_array().ok_or_else(|| invalid(&loc, "expected an array"))?;
    let gens = items
        .iter()
        .enumerate()
        .map(|(n, it)| {
            let l = format!("{loc}[{n}]");
            let o = Obj::new(it, &l, &["label", "degree"])?;
            let label = o.req("label")?.as_str().ok_or_else(|| invalid(&l, "label must be a string"))?.to_string();
            let d = integer(o.req("degree")?, &o.sub("degree"))?;
            Ok(Generator { label, degree: if upper { -d } else { d } })
        })
        .collect::<Result<Vec<_>, InputError>>()?;
    GradedBasis::new(gens).map(Arc::new).map_err(|e| invalid(loc, e))
}

fn parse_algebra(v: &Value, upper: bool) -> Result<Arc<AlgebraSpec>, InputError> {
    let o = Obj::new(v, "algebra", &["generators", "unit", "mult", "diff"])?;
    let basis = generators(o.get("generators"), "algebra", upper)?;
    let n = basis.len();
    if n == 0 {
        return Err(invalid("algebra", "unit required: the algebra has no basis elements"));
    }
    let unit = match o.get("unit") {
        Some(u) => index(u, n, &o.sub("unit"))?,
        None => return Err(invalid("algebra", "unit required")),
    };
    let mut mult = Vec::new();
    for (l, row) in o.rows("mult")? {
        let row = arity(row, 4, &l)?;
        mult.push((index(&row[0], n, &l)?, index(&row[1], n, &l)?, index(&row[2], n, &l)?, rational(&row[3], &l)?));
    }
    let mut diff = LinearMap::zero(basis.clone(), basis.clone(), -1);
    for (l, row) in o.rows("diff")? {
        let row = arity(row, 3, &l)?;
        let (k, i) = (index(&row[0], n, &l)?, index(&row[1], n, &l)?);
        diff.add_to(k, i, &rational(&row[2], &l)?).map_err(|e| invalid(&l, e))?;
    }
    let alg = AlgebraSpec::new(basis, unit, mult, diff).map_err(|e| invalid("algebra", e))?;
    if let Some(v) = alg.validate().first() {
        return Err(invalid("algebra", format!("{} fails on {:?}", v.invariant, v.witness)));
    }
    Ok(Arc::new(alg))
}

fn parse_module(v: &Value, alg: &Arc<AlgebraSpec>, upper: bool) -> Result<Arc<ModuleSpec>, InputError> {
    let o = Obj::new(v, "module", &["generators", "diff", "relations"])?;
    if let Some(r) = o.get("relations") {
        if r.as_array().is_none_or(|a| !a.is_empty()) {
            return Err(invalid(o.sub("relations"), "modules must be free: relations are not supported"));
        }
    }
    let gens = generators(o.get("generators"), "module", upper)?;
    let probe = ModuleSpec::new(alg.clone(), gens.clone(), None).map_err(|e| invalid("module", e))?;
    let mut values = vec![SVec::new(); gens.len()];
    for (l, row) in o.rows("diff")? {
        let row = arity(row, 4, &l)?;
        let k = index(&row[0], gens.len(), &l)?;
        let a = index(&row[1], alg.dim(), &l)?;
        let x = index(&row[2], gens.len(), &l)?;
        add_entry(&mut values[k], probe.index(a, x), &rational(&row[3], &l)?);
    }
    let m = ModuleSpec::with_generator_diff(alg.clone(), gens, &values).map_err(|e| invalid(o.sub("diff"), e))?;
    if let Some((name, w)) = m.validate().first() {
        return Err(invalid("module", format!("{name} fails on {w:?}")));
    }
    Ok(Arc::new(m))
}

fn parse_lr(v: &Value, module: &Arc<ModuleSpec>) -> Result<LieRinehartData, InputError> {
    let o = Obj::new(v, "structure.lie_rinehart", &["bracket", "anchor"])?;
    let alg = module.algebra();
    let ab = alg.basis();
    let gens = module.generators();
    let n = module.rank();
    let mut bracket = vec![vec![SVec::new(); n]; n];
    let mut given = vec![vec![false; n]; n];
    for (l, row) in o.rows("bracket")? {
        let row = arity(row, 5, &l)?;
        let (k, p) = (index(&row[0], n, &l)?, index(&row[1], n, &l)?);
        let (a, m) = (index(&row[2], alg.dim(), &l)?, index(&row[3], n, &l)?);
        let r = rational(&row[4], &l)?;
        if ab.degree(a) + gens.degree(m) != gens.degree(k) + gens.degree(p) {
            return Err(invalid(l, "bracket entry has the wrong degree"));
        }
        given[k][p] = true;
        add_entry(&mut bracket[k][p], module.index(a, m), &r);
    }
    // [y, x] = -(-1)^{|x||y|} [x, y]
    for k in 0..n {
        for p in 0..n {
            let s = Rational::sign(-crate::graded_core::parity_sign(gens.degree(k) * gens.degree(p)));
            let mirrored: SVec = bracket[k][p].iter().map(|(i, c)| (*i, c * &s)).collect();
            if given[k][p] && (given[p][k] || k == p) && bracket[p][k] != mirrored {
                return Err(invalid(
                    o.sub("bracket"),
                    format!("bracket of {} and {} is not graded skew", gens.label(k), gens.label(p)),
                ));
            }
            if given[k][p] && !given[p][k] {
                bracket[p][k] = mirrored;
                given[p][k] = true;
            }
        }
    }
    let mut anchor: Vec<LinearMap> =
        (0..n).map(|k| LinearMap::zero(ab.clone(), ab.clone(), gens.degree(k))).collect();
    for (l, row) in o.rows("anchor")? {
        let row = arity(row, 4, &l)?;
        let k = index(&row[0], n, &l)?;
        let (i, j) = (index(&row[1], alg.dim(), &l)?, index(&row[2], alg.dim(), &l)?);
        anchor[k].add_to(i, j, &rational(&row[3], &l)?).map_err(|e| invalid(&l, e))?;
    }
    Ok(LieRinehartData::from_generators(module.clone(), &bracket, &anchor))
}

fn parse_sh(v: &Value) -> Result<ShTables, InputError> {
    let sec = "structure.sh_lie_rinehart";
    let o = Obj::new(v, sec, &["coderivations", "twisting"])?;
    let mut out = ShTables::default();
    let levels = |key: &str| -> Result<Vec<(usize, String, &Value)>, InputError> {
        let Some(v) = o.get(key) else { return Ok(Vec::new()) };
        let map = v.as_object().ok_or_else(|| invalid(o.sub(key), "expected an object keyed by level"))?;
        map.iter().map(|(k, x)| Ok((level_key(k, &o.sub(key))?, format!("{}.{k}", o.sub(key)), x))).collect()
    };
    for (j, loc, x) in levels("coderivations")? {
        for (l, row) in rows(x, &loc)? {
            let row = arity(row, 3, &l)?;
            let word = label_list(&row[0], &l)?;
            let target = row[1].as_str().ok_or_else(|| invalid(&l, "target must be a label"))?.to_string();
            out.coderivations.push((j, word, target, rational(&row[2], &l)?));
        }
    }
    for (j, loc, x) in levels("twisting")? {
        for (l, row) in rows(x, &loc)? {
            let row = arity(row, 2, &l)?;
            let word = label_list(&row[0], &l)?;
            for (l2, e) in rows(&row[1], &format!("{l}[1]"))? {
                let e = arity(e, 3, &l2)?;
                let i = e[0].as_u64().ok_or_else(|| invalid(&l2, "expected an index"))? as usize;
                let k = e[1].as_u64().ok_or_else(|| invalid(&l2, "expected an index"))? as usize;
                out.twisting.push((j, word.clone(), i, k, rational(&e[2], &l2)?));
            }
        }
    }
    Ok(out)
}

const THETA: usize = 1;

fn parse_quasi(v: &Value, module: &Arc<ModuleSpec>) -> Result<QuasiLieRinehartData, InputError> {
    let sec = "structure.quasi";
    let o = Obj::new(v, sec, &["bracketQ", "pairing", "triple"])?;
    if **module.algebra() != exterior(&["theta"], -1) {
        return Err(invalid("algebra", "quasi structures live over the exterior algebra on theta of degree -1"));
    }
    let gens = module.generators();
    let n = gens.len();
    if let Some(k) = (0..n).find(|&k| gens.degree(k) != 0) {
        return Err(invalid("module.generators", format!("{} must have degree 0", gens.label(k))));
    }
    let zero = || Rational::zero();
    let mut m = vec![vec![zero(); n]; n];
    for i in 0..n {
        let dx = module.d(&[(module.index(0, i), Rational::one())].into_iter().collect());
        for (q, c) in dx {
            let (a, j) = module.split(q);
            debug_assert_eq!(a, THETA);
            m[j][i] = c;
        }
    }
    let mut lambda = vec![zero(); n];
    for (l, row) in o.rows("pairing")? {
        let row = arity(row, 2, &l)?;
        lambda[index(&row[0], n, &l)?] = rational(&row[1], &l)?;
    }
    let skew_pair = |i: usize, j: usize, l: &str| -> Result<(), InputError> {
        if i == j {
            return Err(invalid(l, "entries on the diagonal vanish by skew symmetry"));
        }
        Ok(())
    };
    let mut bracket = vec![vec![vec![zero(); n]; n]; n];
    for (l, row) in o.rows("bracketQ")? {
        let row = arity(row, 4, &l)?;
        let (i, j, k) = (index(&row[0], n, &l)?, index(&row[1], n, &l)?, index(&row[2], n, &l)?);
        skew_pair(i, j, &l)?;
        let r = rational(&row[3], &l)?;
        bracket[j][i][k] = -r.clone();
        bracket[i][j][k] = r;
    }
    let mut triple = vec![vec![zero(); n]; n];
    for (l, row) in o.rows("triple")? {
        let row = arity(row, 3, &l)?;
        let (i, j) = (index(&row[0], n, &l)?, index(&row[1], n, &l)?);
        skew_pair(i, j, &l)?;
        let r = rational(&row[2], &l)?;
        triple[j][i] = -r.clone();
        triple[i][j] = r;
    }
    Ok(QuasiLieRinehartData { names: gens.generators().iter().map(|g| g.label.clone()).collect(), m, lambda, bracket, triple })
}

fn parse_mdca(v: &Value) -> Result<MdcaTables, InputError> {
    let sec = "structure.mdca";
    let o = Obj::new(v, sec, &["on_algebra", "on_duals"])?;
    let mut out = MdcaTables::default();
    for key in ["on_algebra", "on_duals"] {
        let Some(x) = o.get(key) else { continue };
        let map = x.as_object().ok_or_else(|| invalid(o.sub(key), "expected an object keyed by level"))?;
        for (k, x) in map {
            let loc = format!("{}.{k}", o.sub(key));
            let j = k.parse::<usize>().map_err(|_| invalid(&loc, "level key is not an integer"))?;
            for (l, row) in rows(x, &loc)? {
                let row = arity(row, 4, &l)?;
                let m = row[0].as_u64().ok_or_else(|| invalid(&l, "expected an index"))? as usize;
                let word = label_list(&row[1], &l)?;
                let a = row[2].as_u64().ok_or_else(|| invalid(&l, "expected an index"))? as usize;
                let entry = (j, m, word, a, rational(&row[3], &l)?);
                if key == "on_algebra" {
                    out.on_algebra.push(entry);
                } else {
                    out.on_duals.push(entry);
                }
            }
        }
    }
    Ok(out)
}

fn parse_policy(v: Option<&Value>) -> Result<Policy, InputError> {
    let Some(v) = v else { return Ok(Policy::default()) };
    let o = Obj::new(v, "policy", &["W", "degree_window"])?;
    let w = match o.get("W") {
        Some(x) => {
            let w = x.as_u64().ok_or_else(|| invalid(o.sub("W"), "expected a positive integer"))? as usize;
            if w < 2 {
                return Err(invalid(o.sub("W"), "word-length bound must be at least 2"));
            }
            Some(w)
        }
        None => None,
    };
    let degree_window = match o.get("degree_window") {
        Some(x) => {
            let l = o.sub("degree_window");
            let a = x.as_array().filter(|a| a.len() == 2).ok_or_else(|| invalid(&l, "expected [low, high]"))?;
            let (lo, hi) = (integer(&a[0], &l)?, integer(&a[1], &l)?);
            if lo > hi {
                return Err(invalid(l, "empty window"));
            }
            Some((lo, hi))
        }
        None => None,
    };
    Ok(Policy { w, degree_window })
}

/// Parses and validates an instance document.
pub fn parse_instance(text: &str) -> Result<Instance, InputError> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| InputError::Syntax { line: e.line(), column: e.column(), message: e.to_string() })?;
    let o = Obj::new(&v, "", &["name", "scalars", "grading", "algebra", "module", "structure", "policy"])?;
    let name = match o.get("name") {
        Some(n) => Some(n.as_str().ok_or_else(|| invalid("name", "expected a string"))?.to_string()),
        None => None,
    };
    if let Some(s) = o.get("scalars") {
        if s.as_str() != Some("Q") {
            return Err(invalid("scalars", "only \"Q\" is supported"));
        }
    }
    let upper = match o.get("grading").map(|g| g.as_str()) {
        None | Some(Some("homological")) => false,
        Some(Some("upper")) => true,
        Some(_) => return Err(invalid("grading", "expected \"homological\" or \"upper\"")),
    };
    let alg = parse_algebra(o.req("algebra")?, upper)?;
    let module = parse_module(o.req("module")?, &alg, upper)?;
    let policy = parse_policy(o.get("policy"))?;
    let sv = o.req("structure")?;
    let smap = sv.as_object().ok_or_else(|| invalid("structure", "expected an object"))?;
    if let Some(k) = smap.keys().find(|k| !Kind::ALL.iter().any(|kind| kind.section() == k.as_str())) {
        return Err(InputError::Unsupported(k.clone()));
    }
    let s = Obj::new(sv, "structure", &["lie_rinehart", "sh_lie_rinehart", "quasi", "mdca"])?;
    if s.map.len() != 1 {
        return Err(invalid("structure", "exactly one structure kind is required"));
    }
    let (key, body) = s.map.iter().next().expect("one entry");
    let structure = match key.as_str() {
        "lie_rinehart" => Structure::LieRinehart(parse_lr(body, &module)?),
        "sh_lie_rinehart" => Structure::Sh(parse_sh(body)?),
        "quasi" => Structure::Quasi(parse_quasi(body, &module)?),
        _ => Structure::Mdca(parse_mdca(body)?),
    };
    Ok(Instance { name, module, structure, policy })
}

// ---- emission ----

fn rat(r: &Rational) -> Value {
    Value::String(r.to_string())
}

fn basis_json(b: &GradedBasis) -> Value {
    Value::Array(b.generators().iter().map(|g| json!({"label": g.label, "degree": g.degree})).collect())
}

fn by_level<T>(rows: impl IntoIterator<Item = (usize, T)>) -> Value
where
    T: Into<Value>,
{
    let mut map: BTreeMap<usize, Vec<Value>> = BTreeMap::new();
    for (j, v) in rows {
        map.entry(j).or_default().push(v.into());
    }
    Value::Object(map.into_iter().map(|(j, v)| (j.to_string(), Value::Array(v))).collect())
}

fn structure_json(inst: &Instance) -> Value {
    let module = &inst.module;
    match &inst.structure {
        Structure::LieRinehart(lr) => {
            let unit = module.algebra().unit();
            let n = module.rank();
            let mut bracket = Vec::new();
            for k in 0..n {
                for p in k..n {
                    for (q, r) in &lr.bracket[module.index(unit, k)][module.index(unit, p)] {
                        let (a, m) = module.split(*q);
                        bracket.push(json!([k, p, a, m, rat(r)]));
                    }
                }
            }
            let mut anchor = Vec::new();
            for k in 0..n {
                for (&(i, j), r) in lr.anchor[module.index(unit, k)].entries() {
                    anchor.push(json!([k, i, j, rat(r)]));
                }
            }
            json!({"lie_rinehart": {"bracket": bracket, "anchor": anchor}})
        }
        Structure::Sh(t) => {
            let mut cod = t.coderivations.clone();
            cod.sort();
            let coderivations = by_level(cod.iter().map(|(j, w, g, r)| (*j, json!([w, g, rat(r)]))));
            let mut tw: BTreeMap<(usize, Vec<String>), Vec<Value>> = BTreeMap::new();
            for (j, w, i, k, r) in &t.twisting {
                tw.entry((*j, w.clone())).or_default().push(json!([i, k, rat(r)]));
            }
            let twisting = by_level(tw.into_iter().map(|((j, w), m)| (j, json!([w, m]))));
            json!({"sh_lie_rinehart": {"coderivations": coderivations, "twisting": twisting}})
        }
        Structure::Quasi(q) => {
            let n = q.rank();
            let mut bracket = Vec::new();
            let mut triple = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    for k in 0..n {
                        if !q.bracket[i][j][k].is_zero() {
                            bracket.push(json!([i, j, k, rat(&q.bracket[i][j][k])]));
                        }
                    }
                    if !q.triple[i][j].is_zero() {
                        triple.push(json!([i, j, rat(&q.triple[i][j])]));
                    }
                }
            }
            let pairing: Vec<Value> =
                (0..n).filter(|&i| !q.lambda[i].is_zero()).map(|i| json!([i, rat(&q.lambda[i])])).collect();
            json!({"quasi": {"bracketQ": bracket, "pairing": pairing, "triple": triple}})
        }
        Structure::Mdca(t) => {
            let table = |rows: &Vec<(usize, usize, Vec<String>, usize, Rational)>| {
                let mut rows = rows.clone();
                rows.sort();
                by_level(rows.iter().map(|(j, m, w, a, r)| (*j, json!([m, w, a, rat(r)]))))
            };
            json!({"mdca": {"on_algebra": table(&t.on_algebra), "on_duals": table(&t.on_duals)}})
        }
    }
}

/// The instance as a JSON value in homological grading.
pub fn instance_json(inst: &Instance) -> Value {
    let alg = inst.algebra();
    let module = &inst.module;
    let mult: Vec<Value> = alg.structure_constants().iter().map(|(i, j, k, c)| json!([i, j, k, rat(c)])).collect();
    let diff: Vec<Value> = alg.diff().entries().iter().map(|(&(k, i), c)| json!([k, i, rat(c)])).collect();
    let mut mdiff = Vec::new();
    for k in 0..module.rank() {
        for (&(q, _), c) in module.diff().entries().iter().filter(|((_, s), _)| *s == module.index(alg.unit(), k)) {
            let (a, x) = module.split(q);
            mdiff.push(json!([k, a, x, rat(c)]));
        }
    }
    let mut policy = Map::new();
    if let Some(w) = inst.policy.w {
        policy.insert("W".into(), json!(w));
    }
    if let Some((lo, hi)) = inst.policy.degree_window {
        policy.insert("degree_window".into(), json!([lo, hi]));
    }
    let mut out = json!({
        "scalars": "Q",
        "grading": "homological",
        "algebra": {"generators": basis_json(alg.basis()), "unit": alg.unit(), "mult": mult, "diff": diff},
        "module": {"generators": basis_json(module.generators()), "diff": mdiff},
        "structure": structure_json(inst),
        "policy": Value::Object(policy),
    });
    if let Some(n) = &inst.name {
        out["name"] = json!(n);
    }
    out
}

fn is_scalar(v: &Value) -> bool {
    !v.is_array() && !v.is_object()
}

/// Arrays without objects inside, and objects of scalars, fit on one line.
fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.iter().all(|x| is_scalar(x) || (x.is_array() && is_flat(x))),
        Value::Object(m) => m.values().all(is_scalar),
        _ => true,
    }
}

fn write_inline(v: &Value, out: &mut String) {
    match v {
        Value::Array(a) => {
            out.push('[');
            for (i, x) in a.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_inline(x, out);
            }
            out.push(']');
        }
        Value::Object(m) => {
            out.push('{');
            for (i, (k, x)) in m.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_inline(x, out);
            }
            out.push('}');
        }
        _ => out.push_str(&v.to_string()),
    }
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| " ".repeat(n);
    match v {
        Value::Array(a) if !a.is_empty() && !is_flat(v) => {
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                out.push_str(&pad(indent + 2));
                write_value(x, indent + 2, out);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(m) if !m.is_empty() && !is_flat(v) => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&pad(indent + 2));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(x, indent + 2, out);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        _ => write_inline(v, out),
    }
}

/// Byte-stable rendering with sorted keys; table rows stay on one line.
pub fn emit_value(v: &Value) -> String {
    let mut s = String::new();
    write_value(v, 0, &mut s);
    s.push('\n');
    s
}

pub fn emit_instance(inst: &Instance) -> String {
    emit_value(&instance_json(inst))
}
