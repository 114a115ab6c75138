//! The pinned regression suite.
//!
//! Each case names a category window, a target (check, audit, ladder rung or
//! one of a few concrete probes) and the verdict it is pinned to. Witnesses of
//! failing cases are written to disk and must re-verify when read back; a
//! witness already on disk is re-verified instead of being overwritten.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::axioms::{audit, classify, run_check, Audit, Check, Options, Rung, Verdict, Witness};
use crate::backend::alg::Algebra;
use crate::backend::{native, Backend, Materialized};
use crate::budget::{Budget, Meter};
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::functor::{functor_category, pointwise_audit, IndexShape, Pointwise, PointwisePredicate};
use crate::report::{load_witness, load_witness_text, witness_document};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "name")]
pub enum Target {
    Check(Check),
    Audit(Audit),
    Rung(Rung),
    /// The identity-on-carrier map `(Z/2, 0) → (Z/2, Z/2)` is epi but neither
    /// strong nor regular.
    PairEpi,
    /// Every split extension's domain is generated by the kernel and the section.
    Generated,
    /// Native constructions pass the universal-property solver.
    Oracles,
    /// Pointwise audits and ladder agreement for `C^I`.
    Pointwise(IndexShape),
}

#[derive(Clone, Debug, Serialize)]
pub struct Case {
    pub name: String,
    pub backend: Backend,
    pub bound: usize,
    pub target: Target,
    pub expect: Verdict,
}

fn case(name: &str, backend: Backend, bound: usize, target: Target, expect: Verdict) -> Case {
    Case { name: name.to_string(), backend, bound, target, expect }
}

/// The desk-scale suite. With `extended`, FinGroup is also run at bound 8.
pub fn pinned(extended: bool) -> Vec<Case> {
    use Backend::*;
    use Verdict::*;
    let mut v = vec![
        case("finab4-ladder", AbGroup, 4, Target::Rung(Rung::SemiAbelian), Holds),
        case("finab4-oracles", AbGroup, 4, Target::Oracles, Holds),
        case("finab4-homolex", AbGroup, 4, Target::Audit(Audit::Homolex), Holds),
        case("finab2-arrow", AbGroup, 2, Target::Pointwise(IndexShape::Arrow), Holds),
        case("fingrp6-generated", Group, 6, Target::Generated, Holds),
        case("fingrp6-oracles", Group, 6, Target::Oracles, Holds),
        case("finptset3-oracles", PointedSet, 3, Target::Oracles, Holds),
        case("finmon3-oracles", Monoid, 3, Target::Oracles, Holds),
        case("grppair4-oracles", GroupPair, 4, Target::Oracles, Holds),
        case("fingrp6-homolex", Group, 6, Target::Audit(Audit::Homolex), Holds),
        case("finptset3-condC", PointedSet, 3, Target::Check(Check::CondC), Fails),
        case("finptset3-proto", PointedSet, 3, Target::Check(Check::Proto), Fails),
        case("finptset3-ssfl-iso", PointedSet, 3, Target::Check(Check::SsflIso), Fails),
        case("fingrp6-ssfl-iso", Group, 6, Target::Check(Check::SsflIso), Holds),
        case("finmon3-condC", Monoid, 3, Target::Check(Check::CondC), Fails),
        case("grppair4-epi", GroupPair, 4, Target::PairEpi, Holds),
        case("grppair4-proto", GroupPair, 4, Target::Check(Check::Proto), Holds),
        case("grppair4-A4", GroupPair, 4, Target::Check(Check::A4), Fails),
    ];
    let five = [(AbGroup, 4), (Group, 6), (PointedSet, 3), (Monoid, 3), (GroupPair, 4)];
    for (b, n) in five {
        v.push(case(&format!("{b}{n}-lemma1"), b, n, Target::Audit(Audit::Lemma1), Holds));
        v.push(case(&format!("{b}{n}-critproto"), b, n, Target::Audit(Audit::Critproto), Holds));
    }
    for c in [Check::A2, Check::A3, Check::A4, Check::Exact] {
        v.push(case(&format!("fingrp6-{}", c.key()), Group, 6, Target::Check(c), Holds));
    }
    v.push(case("grppair4-A2", GroupPair, 4, Target::Check(Check::A2), Holds));
    v.push(case("grppair4-exact", GroupPair, 4, Target::Check(Check::Exact), Fails));
    if extended {
        for c in [Check::Proto, Check::A2, Check::A3, Check::A4, Check::SsflIso] {
            v.push(case(&format!("fingrp8-{}", c.key()), Group, 8, Target::Check(c), Holds));
        }
    }
    v
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseResult {
    pub name: String,
    pub source: String,
    pub target: Target,
    pub expected: Verdict,
    pub got: Verdict,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_reproduces: Option<bool>,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegressReport {
    pub seed: u64,
    pub budget: Budget,
    pub cases: Vec<CaseResult>,
    pub green: bool,
}

impl RegressReport {
    pub fn text(&self) -> String {
        let mut s = String::new();
        for c in &self.cases {
            let mark = if c.ok { "ok  " } else { "FAIL" };
            s.push_str(&format!(
                "{mark} {:28} {:16} expected {:13} got {:13} {}\n",
                c.name, c.source, c.expected, c.got, c.detail
            ));
            if c.witness_reproduces == Some(false) {
                s.push_str(&format!("     witness {} does not reproduce\n", c.witness_file.as_deref().unwrap_or("?")));
            }
        }
        let bad = self.cases.iter().filter(|c| !c.ok).count();
        s.push_str(&format!("{} case(s), {} regression(s)\n", self.cases.len(), bad));
        s
    }
}

struct Outcome {
    verdict: Verdict,
    detail: String,
    witness: Option<Witness>,
}

fn pair_epi(m: &Materialized, e: &Engine) -> Result<Outcome> {
    let find = |marked: Vec<usize>| {
        m.locate(&Algebra::cyclic(2).with_marked(marked))
            .map(|(o, _)| o)
            .ok_or_else(|| Error::Invalid("pair of Z/2 missing from the window".into()))
    };
    let (a, b) = (find(vec![0])?, find(vec![0, 1])?);
    let f = m
        .find_hom(a, b, &[0, 1])
        .ok_or_else(|| Error::Inconsistent("identity carrier map is not a morphism".into()))?;
    let (epi, strong, regular) = (e.is_epi(f), e.is_strong_epi(f), e.is_regular_epi(f)?);
    let verdict = if epi && !strong && !regular { Verdict::Holds } else { Verdict::Fails };
    Ok(Outcome { verdict, detail: format!("epi {epi}, strong {strong}, regular {regular}"), witness: None })
}

fn pointwise(m: &Materialized, e: &Engine, shape: IndexShape, budget: Budget, seed: u64) -> Result<Outcome> {
    let fc = functor_category(&m.cat, &shape.category(), &Meter::new(budget))?;
    let amb = Pointwise::new(&fc, e);
    let fe = Engine::new(&fc.cat, budget).with_ambient(&amb);
    let mut parts = vec![format!("{} functors", fc.cat.num_objects())];
    let mut ok = true;
    for p in [PointwisePredicate::Mono, PointwisePredicate::RegularEpi, PointwisePredicate::Kernel] {
        let r = pointwise_audit(&fc, e, &fe, p, 100, seed)?;
        ok &= r.agrees() && r.incomplete == 0;
        parts.push(format!("{} {}/{}", p.key(), r.agree, r.examined));
    }
    let base = classify(e, false, Options::default())?;
    let lifted = classify(&fe, false, Options::default())?;
    let same = base.rungs.iter().zip(&lifted.rungs).all(|(x, y)| x.verdict == y.verdict);
    ok &= same;
    parts.push(format!("ladder {}", if same { "agrees" } else { "differs" }));
    Ok(Outcome { verdict: if ok { Verdict::Holds } else { Verdict::Fails }, detail: parts.join(", "), witness: None })
}

fn run_case(m: &Materialized, e: &Engine, target: Target, budget: Budget, seed: u64) -> Result<Outcome> {
    let opts = Options::default();
    match target {
        Target::Check(c) => {
            let o = run_check(e, c, opts)?;
            let detail = format!("scanned {}, escaped {}, inconclusive {}", o.scanned, o.skipped, o.inconclusive);
            Ok(Outcome { verdict: o.verdict, detail, witness: o.witnesses.into_iter().next() })
        }
        Target::Audit(a) => {
            let r = audit(e, a, opts)?;
            let detail = format!("{} edge(s), {} violated", r.edges.len(), r.violations());
            Ok(Outcome { verdict: r.verdict, detail, witness: None })
        }
        Target::Rung(rung) => {
            let cl = classify(e, false, opts)?;
            let detail = format!("highest rung {}", cl.highest().map(|r| r.key()).unwrap_or("none"));
            Ok(Outcome { verdict: cl.rung(rung), detail, witness: None })
        }
        Target::PairEpi => pair_epi(m, e),
        Target::Generated => {
            let (n, bad) = native::split_extensions_generated(m);
            let verdict = if bad.is_empty() { Verdict::Holds } else { Verdict::Fails };
            Ok(Outcome {
                verdict,
                detail: format!("{n} split extension(s), {} not generated", bad.len()),
                witness: None,
            })
        }
        Target::Oracles => {
            let t = native::verify_oracles(m, e)?;
            let verdict = if t.failures.is_empty() { Verdict::Holds } else { Verdict::Fails };
            let detail = format!("{} checked, {} escaped, {} failed", t.checked, t.escaped, t.failures.len());
            Ok(Outcome { verdict, detail, witness: None })
        }
        Target::Pointwise(shape) => pointwise(m, e, shape, budget, seed),
    }
}

fn witness_status(cat: &crate::FinCategory, w: &Witness, path: Option<&PathBuf>, budget: Budget) -> Result<bool> {
    let doc = witness_document(cat, w);
    let Some(path) = path else {
        return Ok(load_witness_text(&doc, budget)?.reproduces);
    };
    if !path.exists() {
        std::fs::write(path, &doc)?;
    }
    match load_witness(path, budget) {
        Ok(l) => Ok(l.reproduces && l.check == w.check),
        Err(Error::Parse { .. } | Error::Invalid(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Runs `cases`. Witness files go to `dir` when given.
pub fn run_suite(cases: &[Case], dir: Option<&Path>, budget: Budget, seed: u64) -> Result<RegressReport> {
    if let Some(d) = dir {
        std::fs::create_dir_all(d)?;
    }
    let mut windows: BTreeMap<(Backend, usize), Materialized> = BTreeMap::new();
    let mut results = Vec::new();
    for c in cases {
        if let Entry::Vacant(v) = windows.entry((c.backend, c.bound)) {
            v.insert(Materialized::new(c.backend, c.bound, true)?);
        }
        let m = &windows[&(c.backend, c.bound)];
        let e = Engine::new(&m.cat, budget).with_ambient(m);
        let out = match run_case(m, &e, c.target, budget, seed) {
            Ok(o) => o,
            Err(err) if err.is_budget() => {
                Outcome { verdict: Verdict::OutOfBudget, detail: err.to_string(), witness: None }
            }
            Err(err) => return Err(err),
        };
        let path = dir.map(|d| d.join(format!("{}.witness", c.name)));
        let (witness_file, witness_reproduces) = match &out.witness {
            Some(w) => (Some(format!("{}.witness", c.name)), Some(witness_status(&m.cat, w, path.as_ref(), budget)?)),
            None => (None, None),
        };
        let ok = out.verdict == c.expect && witness_reproduces != Some(false);
        results.push(CaseResult {
            name: c.name.clone(),
            source: m.label(),
            target: c.target,
            expected: c.expect,
            got: out.verdict,
            detail: out.detail,
            witness_file,
            witness_reproduces,
            ok,
        });
    }
    let green = results.iter().all(|r| r.ok);
    Ok(RegressReport { seed, budget, cases: results, green })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Vec<Case> {
        pinned(false)
            .into_iter()
            .filter(|c| {
                matches!(c.name.as_str(), "finptset3-condC" | "finmon3-condC" | "grppair4-epi" | "finab2-arrow")
            })
            .collect()
    }

    #[test]
    fn small_suite_is_green_and_stable() {
        let d = tempfile::tempdir().unwrap();
        let a = run_suite(&small(), Some(d.path()), Budget::default(), 0).unwrap();
        assert!(a.green, "{}", a.text());
        let b = run_suite(&small(), Some(d.path()), Budget::default(), 0).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn corrupted_witness_is_flagged() {
        let d = tempfile::tempdir().unwrap();
        run_suite(&small(), Some(d.path()), Budget::default(), 0).unwrap();
        let p = d.path().join("finmon3-condC.witness");
        let text = std::fs::read_to_string(&p).unwrap();
        let u = text.lines().find_map(|l| l.strip_prefix("u ")).unwrap().to_string();
        let v = text.lines().find_map(|l| l.strip_prefix("v ")).unwrap().to_string();
        std::fs::write(&p, text.replace(&format!("\nv {v}"), &format!("\nv {u}"))).unwrap();
        let r = run_suite(&small(), Some(d.path()), Budget::default(), 0).unwrap();
        assert!(!r.green);
        let bad: Vec<&str> = r.cases.iter().filter(|c| !c.ok).map(|c| c.name.as_str()).collect();
        assert_eq!(bad, ["finmon3-condC"]);
    }

    #[test]
    fn unparsable_witness_is_flagged() {
        let d = tempfile::tempdir().unwrap();
        let cases: Vec<Case> = small().into_iter().filter(|c| c.name == "finptset3-condC").collect();
        std::fs::write(d.path().join("finptset3-condC.witness"), "objects:\nx\nmorphisms:\n").unwrap();
        let r = run_suite(&cases, Some(d.path()), Budget::default(), 0).unwrap();
        assert_eq!(r.cases[0].witness_reproduces, Some(false));
    }
}
