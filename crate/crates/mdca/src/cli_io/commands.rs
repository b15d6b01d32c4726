use std::time::Instant;

use super::catalog::{catalog_instance, NAMES};
use super::format::{invalid, parse_instance, InputError, Instance, Kind, Structure, DEFAULT_W};
use super::report::{BettiEntry, Report};
use crate::convolution::{CohomologyError, MdcaStructure};
use crate::structures::{
    build_maurer_cartan, build_quasi_mc, check_lie_rinehart, check_sh_lie_rinehart, extract_structure,
    jacobi_defect_identity, quasi_to_sh, render_terms, Issue, MaurerCartanError, ShLieRinehartData,
};

/// Caps the global rayon pool at `MDCA_THREADS` when that is a positive integer.
pub fn configure_threads() {
    if let Some(n) = std::env::var("MDCA_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Reads `catalog:NAME` or a file path.
pub fn load(source: &str) -> Result<(String, Instance), InputError> {
    let inst = match source.strip_prefix("catalog:") {
        Some(name) => catalog_instance(name).ok_or_else(|| invalid("catalog", format!("no catalog entry {name:?}")))??,
        None => {
            let text = std::fs::read_to_string(source)
                .map_err(|e| InputError::Io { path: source.to_string(), message: e.to_string() })?;
            parse_instance(&text)?
        }
    };
    let name = inst.name.clone().unwrap_or_else(|| source.to_string());
    Ok((name, inst))
}

/// `auto` means the kind of the structure section.
pub fn parse_kind(s: &str) -> Result<Option<Kind>, InputError> {
    if s == "auto" {
        Ok(None)
    } else {
        s.parse().map(Some)
    }
}

/// Parses `a..b` into an inclusive window.
pub fn parse_window(s: &str) -> Result<(i64, i64), InputError> {
    let bad = || invalid("--window", format!("expected <a>..<b>, got {s:?}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let (a, b) = (a.trim().parse::<i64>().map_err(|_| bad())?, b.trim().parse::<i64>().map_err(|_| bad())?);
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn resolve_w(flag: Option<usize>, inst: &Instance) -> Result<usize, InputError> {
    let w = flag.or(inst.policy.w).unwrap_or(DEFAULT_W);
    if w < 2 {
        return Err(invalid("--W", "word-length bound must be at least 2"));
    }
    Ok(w)
}

/// The sh Lie-Rinehart pair carried by an instance.
pub fn sh_data(inst: &Instance, w: usize) -> Result<ShLieRinehartData, InputError> {
    match &inst.structure {
        Structure::LieRinehart(lr) => lr.to_sh(w).map_err(|e| invalid("policy.W", e)),
        Structure::Sh(t) => t.to_data(&inst.module, w),
        Structure::Quasi(q) => quasi_to_sh(q, w).map_err(|e| invalid("policy.W", e)),
        Structure::Mdca(_) => Err(invalid("--kind", "an mdca structure is not read as sh Lie-Rinehart data")),
    }
}

/// The multi derivation structure of an instance; quasi pairs use their
/// literal operators.
pub fn mdca_structure(inst: &Instance, w: usize) -> Result<Result<MdcaStructure, MaurerCartanError>, InputError> {
    match &inst.structure {
        Structure::Mdca(t) => t.to_structure(&inst.module, w).map(Ok),
        Structure::Quasi(q) => build_quasi_mc(q, w).map(Ok).map_err(|e| invalid("policy.W", e)),
        _ => Ok(build_maurer_cartan(&sh_data(inst, w)?)),
    }
}

fn descent_issue(e: &MaurerCartanError) -> Issue {
    let MaurerCartanError::Descent { level, witness } = e;
    Issue { check: "descent".into(), level: *level, witness: witness.clone(), detail: String::new() }
}

fn structure_issues(m: &MdcaStructure) -> (Vec<Issue>, Vec<Issue>) {
    let space = m.space();
    let desc = m.desc();
    let ab = space.algebra().basis();
    let label = |i: usize| {
        let (w, a) = desc.split(i);
        space.label(space.index(w, a))
    };
    let der = m
        .derivation_failures()
        .into_iter()
        .map(|f| Issue {
            check: "derivation on A".into(),
            level: f.level,
            witness: vec![ab.label(f.pair.0).into(), ab.label(f.pair.1).into()],
            detail: String::new(),
        })
        .collect();
    let sq = m
        .square_residuals()
        .into_iter()
        .map(|r| Issue {
            check: "square zero".into(),
            level: r.level,
            witness: vec![label(r.form)],
            detail: render_terms(r.value.iter().map(|(i, c)| (label(*i), c.clone()))),
        })
        .collect();
    (der, sq)
}

fn sh_verdicts(rep: &mut Report, data: &ShLieRinehartData) {
    let r = check_sh_lie_rinehart(data);
    rep.verdict("sh Lie-Rinehart identities (direct)", &r.direct.issues);
    rep.verdict("sh Lie-Rinehart identities (Maurer-Cartan)", &r.maurer_cartan.issues);
    rep.flag("both routes agree on the first failing level", r.routes_agree());
}

fn mdca_verdicts(rep: &mut Report, m: &Result<MdcaStructure, MaurerCartanError>) {
    match m {
        Ok(m) => {
            let (der, sq) = structure_issues(m);
            rep.verdict("operators are derivations", &der);
            rep.verdict("total operator squares to zero", &sq);
        }
        Err(e) => rep.verdict("operators descend to A-multilinear forms", &[descent_issue(e)]),
    }
}

fn elapsed(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

/// Verifies the defining identities of an instance, read as `kind`.
pub fn cmd_check(source: &str, kind: Option<Kind>, w: Option<usize>) -> Result<Report, InputError> {
    let start = Instant::now();
    let (name, inst) = load(source)?;
    let w = resolve_w(w, &inst)?;
    let actual = inst.structure.kind();
    let kind = kind.unwrap_or(actual);
    let compatible = match kind {
        Kind::Lr | Kind::Quasi => kind == actual,
        Kind::Shlr => actual != Kind::Mdca,
        Kind::Mdca => true,
    };
    if !compatible {
        return Err(invalid("--kind", format!("a {} instance cannot be checked as {}", actual.name(), kind.name())));
    }
    let mut rep = Report::new("check", &name, kind.name(), w);
    match (kind, &inst.structure) {
        (Kind::Lr, Structure::LieRinehart(lr)) => {
            rep.verdict("Lie-Rinehart axioms", &check_lie_rinehart(lr));
            sh_verdicts(&mut rep, &sh_data(&inst, w)?);
        }
        (Kind::Quasi, Structure::Quasi(q)) => {
            let sh = sh_data(&inst, w)?;
            sh_verdicts(&mut rep, &sh);
            let lit = mdca_structure(&inst, w)?;
            mdca_verdicts(&mut rep, &lit);
            let same = match (&lit, build_maurer_cartan(&sh)) {
                (Ok(a), Ok(b)) => *a == b && (0..a.levels()).all(|j| a.op(j) == b.op(j)),
                _ => false,
            };
            rep.flag("quasi operators match the sh route", same);
            let jd = jacobi_defect_identity(q);
            let issues: Vec<Issue> = jd
                .mismatches
                .iter()
                .map(|&(i, j, k)| Issue {
                    check: "Jacobi defect".into(),
                    level: 2,
                    witness: [i, j, k].iter().map(|&x| q.names[x].clone()).collect(),
                    detail: String::new(),
                })
                .collect();
            rep.verdict("Jacobi defect identity", &issues);
        }
        (Kind::Shlr, _) => sh_verdicts(&mut rep, &sh_data(&inst, w)?),
        _ => mdca_verdicts(&mut rep, &mdca_structure(&inst, w)?),
    }
    rep.timing_ms = elapsed(start);
    Ok(rep)
}

fn tables_equal(a: &MdcaStructure, b: &MdcaStructure) -> bool {
    a == b && a.levels() == b.levels() && (0..a.levels()).all(|j| a.op(j) == b.op(j))
}

/// Build, extract and rebuild, comparing structure and operator tables.
pub fn cmd_roundtrip(source: &str, w: Option<usize>) -> Result<Report, InputError> {
    let start = Instant::now();
    let (name, inst) = load(source)?;
    let w = resolve_w(w, &inst)?;
    let mut rep = Report::new("roundtrip", &name, inst.structure.kind().name(), w);
    let (m, data) = match &inst.structure {
        Structure::Mdca(t) => (t.to_structure(&inst.module, w)?, None),
        _ => {
            let data = sh_data(&inst, w)?;
            match build_maurer_cartan(&data) {
                Ok(m) => (m, Some(data)),
                Err(e) => {
                    rep.verdict("operators descend to A-multilinear forms", &[descent_issue(&e)]);
                    rep.timing_ms = elapsed(start);
                    return Ok(rep);
                }
            }
        }
    };
    let ex = extract_structure(&m);
    rep.flag("extraction is consistent", ex.consistent);
    let rebuilt = build_maurer_cartan(&ex.data);
    let structure_ok = match (&data, &rebuilt) {
        (Some(d), _) => ex.data.del == d.del && ex.data.t == d.t,
        (None, Ok(r)) => {
            let again = extract_structure(r).data;
            again.del == ex.data.del && again.t == ex.data.t
        }
        (None, Err(_)) => false,
    };
    rep.flag("structure tables match", structure_ok);
    rep.flag("operator tables match", rebuilt.as_ref().is_ok_and(|r| tables_equal(r, &m)));
    rep.timing_ms = elapsed(start);
    Ok(rep)
}

/// Betti numbers of the total operator; the window defaults to `0..W-1`.
pub fn cmd_cohomology(source: &str, window: Option<(i64, i64)>, w: Option<usize>) -> Result<Report, InputError> {
    let start = Instant::now();
    let (name, inst) = load(source)?;
    let w = resolve_w(w, &inst)?;
    let window = window.or(inst.policy.degree_window).unwrap_or((0, w as i64 - 1));
    let mut rep = Report::new("cohomology", &name, inst.structure.kind().name(), w);
    match mdca_structure(&inst, w)? {
        Err(e) => rep.verdict("operators descend to A-multilinear forms", &[descent_issue(&e)]),
        Ok(m) => match m.cohomology_ranks(window) {
            Ok(entries) => {
                rep.flag("total operator squares to zero", true);
                rep.betti = entries.iter().map(BettiEntry::from).collect();
            }
            Err(CohomologyError::NotSquareZero(_)) => {
                let (_, sq) = structure_issues(&m);
                rep.verdict("total operator squares to zero", &sq);
            }
        },
    }
    rep.timing_ms = elapsed(start);
    Ok(rep)
}

pub fn cmd_catalog_list() -> String {
    NAMES.iter().map(|n| format!("{n}\n")).collect()
}

pub fn cmd_catalog_emit(name: &str) -> Result<String, InputError> {
    super::catalog::catalog_text(name).ok_or_else(|| invalid("catalog", format!("no catalog entry {name:?}")))
}
