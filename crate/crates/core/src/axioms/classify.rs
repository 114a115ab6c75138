//! The classification ladder and the implication audits.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::diagrams::split_extensions;
use super::proto::{exactness_instance, protomodular_routes, Exactness};
use super::semiab::{a2_instance, constructions_scan, image_of_kernels, A2Route, Demands};
use super::{guard, not_pointed, run_check, Check, Options, Outcome, Scan, Support, Verdict};
use crate::engine::{Engine, Lookup};
use crate::error::{Error, Result};
use crate::fincat::solver::Construction;

/// Regularity: kernel pairs have coequalizers, regular epis are stable under
/// pullback, and every morphism has a regular-epi/mono factorization.
pub fn check_regular(e: &Engine, opts: Options) -> Result<Outcome> {
    if !e.is_pointed() {
        return Ok(not_pointed(Check::Regular));
    }
    let c = e.cat();
    let mut scan = Scan::new(e, Check::Regular, opts);
    for f in c.morphisms() {
        let r = (|| {
            let Some(kp) = e.kernel_pair(f)? else {
                return Ok(Err(()));
            };
            Ok(Ok(match e.construct(Construction::Coequalizer(kp.p0, kp.p1))? {
                Lookup::Absent => Some(scan.witness(
                    vec![("f", f), ("p0", kp.p0), ("p1", kp.p1)],
                    Support::All,
                    "the kernel pair of f has no coequalizer",
                )),
                _ => None,
            }))
        })();
        match r {
            Ok(Err(())) => scan.skip(),
            Ok(Ok(w)) => scan.record(Ok(w))?,
            Err(err) => scan.record(Err(err))?,
        }
        if scan.done() {
            return Ok(scan.finish());
        }
    }
    for f in c.morphisms() {
        let r = e.image_factorization(f).map(|fac| {
            fac.is_none().then(|| scan.witness(vec![("f", f)], Support::All, "f has no regular-epi/mono factorization"))
        });
        scan.record(r)?;
        if scan.done() {
            return Ok(scan.finish());
        }
    }
    'all: for f in c.morphisms() {
        match e.is_regular_epi(f) {
            Ok(true) => {}
            Ok(false) => continue,
            Err(err) => {
                scan.record(Err(err))?;
                continue;
            }
        }
        for g in c.into_obj(c.cod(f)) {
            let r = match e.pullback(f, g) {
                Ok(Lookup::Found(cone)) => {
                    let (p0, p1) = (cone.legs[0], cone.legs[1]);
                    e.is_regular_epi(p1).map(|ok| {
                        (!ok).then(|| {
                            scan.witness(
                                vec![("f", f), ("g", g), ("p0", p0), ("p1", p1)],
                                Support::All,
                                "the pullback p1 of the regular epi f along g is not a regular epi",
                            )
                        })
                    })
                }
                Ok(_) => {
                    scan.skip();
                    continue;
                }
                Err(err) => Err(err),
            };
            scan.record(r)?;
            if scan.done() {
                break 'all;
            }
        }
    }
    Ok(scan.finish())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rung {
    PointedFinitelyComplete,
    Protomodular,
    Homological,
    FinitelyCocompleteHomological,
    SemiAbelian,
}

impl Rung {
    pub const ALL: [Rung; 5] = [
        Rung::PointedFinitelyComplete,
        Rung::Protomodular,
        Rung::Homological,
        Rung::FinitelyCocompleteHomological,
        Rung::SemiAbelian,
    ];

    pub fn key(&self) -> &'static str {
        match self {
            Rung::PointedFinitelyComplete => "pointed-finitely-complete",
            Rung::Protomodular => "protomodular",
            Rung::Homological => "homological",
            Rung::FinitelyCocompleteHomological => "finitely-cocomplete-homological",
            Rung::SemiAbelian => "semi-abelian",
        }
    }
}

impl fmt::Display for Rung {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RungResult {
    pub rung: Rung,
    pub verdict: Verdict,
    /// The checks this rung is the conjunction of.
    pub from: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub rungs: Vec<RungResult>,
    pub outcomes: Vec<Outcome>,
    pub notes: Vec<String>,
}

impl Classification {
    pub fn outcome(&self, check: Check) -> Option<&Outcome> {
        self.outcomes.iter().find(|o| o.check == check)
    }

    pub fn rung(&self, rung: Rung) -> Verdict {
        self.rungs.iter().find(|r| r.rung == rung).map(|r| r.verdict).unwrap_or(Verdict::OutOfBudget)
    }

    /// The highest rung that holds, if any.
    pub fn highest(&self) -> Option<Rung> {
        self.rungs.iter().rev().find(|r| r.verdict == Verdict::Holds).map(|r| r.rung)
    }
}

fn finitely_complete(e: &Engine, opts: Options) -> Result<Outcome> {
    let d = Demands {
        products: true,
        coproducts: false,
        equalizers: true,
        coequalizers: false,
        relation_coequalizers: false,
    };
    let mut o = guard(Check::A1, constructions_scan(e, Check::A1, d, opts))?;
    o.notes.insert(0, "products and equalizers only".into());
    Ok(o)
}

/// Runs A1 (or A1′), A2, A3, A4 and the structural checks, and assembles the ladder.
pub fn classify(e: &Engine, prime: bool, opts: Options) -> Result<Classification> {
    let fc = finitely_complete(e, opts)?;
    let proto = run_check(e, Check::Proto, opts)?;
    let regular = run_check(e, Check::Regular, opts)?;
    let a1 = run_check(e, if prime { Check::A1p } else { Check::A1 }, opts)?;
    let a2 = run_check(e, Check::A2, opts)?;
    let a3 = run_check(e, Check::A3, opts)?;
    let a4 = run_check(e, Check::A4, opts)?;
    let mut notes = Vec::new();

    let pfc = if e.is_pointed() { fc.verdict } else { Verdict::Fails };
    let pm = pfc.and(proto.verdict);
    let hom = pm.and(regular.verdict);
    let fch = a1.verdict.and(a2.verdict).and(a3.verdict);
    let sa = fch.and(a4.verdict);
    if fch == Verdict::Holds && hom == Verdict::Fails {
        notes.push("A1-A3 hold but the homological rung fails".into());
    }
    if hom == Verdict::Holds {
        let a4p = run_check(e, Check::A4p, opts)?;
        match (a4.verdict.decided(), a4p.verdict.decided()) {
            (Some(x), Some(y)) if x != y => {
                notes.push(format!("A4 ({}) and A4' ({}) disagree on a regular category", a4.verdict, a4p.verdict))
            }
            (Some(_), Some(_)) => notes.push(format!("A4 and A4' agree ({})", a4.verdict)),
            _ => {}
        }
    }
    let a1c = a1.check;
    let rungs = vec![
        RungResult { rung: Rung::PointedFinitelyComplete, verdict: pfc, from: vec![Check::A1] },
        RungResult { rung: Rung::Protomodular, verdict: pm, from: vec![Check::A1, Check::Proto] },
        RungResult { rung: Rung::Homological, verdict: hom, from: vec![Check::A1, Check::Proto, Check::Regular] },
        RungResult { rung: Rung::FinitelyCocompleteHomological, verdict: fch, from: vec![a1c, Check::A2, Check::A3] },
        RungResult { rung: Rung::SemiAbelian, verdict: sa, from: vec![a1c, Check::A2, Check::A3, Check::A4] },
    ];
    Ok(Classification { rungs, outcomes: vec![a1, a2, a3, a4, proto, regular], notes })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Audit {
    Lemma1,
    Critproto,
    Prodsemdir,
    Homolex,
}

impl Audit {
    pub const ALL: [Audit; 4] = [Audit::Lemma1, Audit::Critproto, Audit::Prodsemdir, Audit::Homolex];

    pub fn key(&self) -> &'static str {
        match self {
            Audit::Lemma1 => "lemma1",
            Audit::Critproto => "critproto",
            Audit::Prodsemdir => "prodsemdir",
            Audit::Homolex => "homolex",
        }
    }

    pub fn anchor(&self) -> &'static str {
        match self {
            Audit::Lemma1 => "implications (A) => (B) => (C) <=> (D), (B) => (E)",
            Audit::Critproto => "protomodular iff (A) iff SSFL-strong and (C)",
            Audit::Prodsemdir => "(A) iff (F) where coproducts exist; copairing cokernel agrees",
            Audit::Homolex => "exactness: direct iso test agrees with the proof replay",
        }
    }
}

impl fmt::Display for Audit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Audit {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Audit::ALL
            .iter()
            .copied()
            .find(|a| a.key().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Invalid(format!("unknown audit `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeStatus {
    Consistent,
    Violated,
    /// One side did not complete.
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub name: String,
    pub status: EdgeStatus,
    pub detail: String,
}

impl Edge {
    fn implies(name: &str, a: Verdict, b: Verdict) -> Edge {
        let status = match (a.decided(), b.decided()) {
            (Some(true), Some(false)) => EdgeStatus::Violated,
            (Some(false), _) | (_, Some(true)) => EdgeStatus::Consistent,
            _ => EdgeStatus::Skipped,
        };
        Edge { name: name.into(), status, detail: format!("{a} => {b}") }
    }

    fn iff(name: &str, a: Verdict, b: Verdict) -> Edge {
        let status = match (a.decided(), b.decided()) {
            (Some(x), Some(y)) if x == y => EdgeStatus::Consistent,
            (Some(_), Some(_)) => EdgeStatus::Violated,
            _ => EdgeStatus::Skipped,
        };
        Edge { name: name.into(), status, detail: format!("{a} <=> {b}") }
    }

    fn counted(name: &str, agree: usize, disagree: usize) -> Edge {
        let status = if disagree > 0 {
            EdgeStatus::Violated
        } else if agree > 0 {
            EdgeStatus::Consistent
        } else {
            EdgeStatus::Skipped
        };
        Edge { name: name.into(), status, detail: format!("{agree} agreeing, {disagree} disagreeing instance(s)") }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditResult {
    pub audit: Audit,
    pub verdict: Verdict,
    pub edges: Vec<Edge>,
    pub outcomes: Vec<Outcome>,
}

impl AuditResult {
    fn new(audit: Audit, edges: Vec<Edge>, outcomes: Vec<Outcome>) -> Self {
        let verdict = if edges.iter().any(|e| e.status == EdgeStatus::Violated) {
            Verdict::Fails
        } else if edges.iter().any(|e| e.status == EdgeStatus::Consistent) {
            Verdict::Holds
        } else {
            Verdict::OutOfBudget
        };
        AuditResult { audit, verdict, edges, outcomes }
    }

    pub fn violations(&self) -> usize {
        self.edges.iter().filter(|e| e.status == EdgeStatus::Violated).count()
    }
}

pub fn audit(e: &Engine, which: Audit, opts: Options) -> Result<AuditResult> {
    match which {
        Audit::Lemma1 => lemma1(e, opts),
        Audit::Critproto => critproto(e, opts),
        Audit::Prodsemdir => prodsemdir(e),
        Audit::Homolex => homolex(e, opts),
    }
}

fn lemma1(e: &Engine, opts: Options) -> Result<AuditResult> {
    let run = |c| run_check(e, c, opts);
    let (a, b, cc, d, ee) =
        (run(Check::CondA)?, run(Check::CondB)?, run(Check::CondC)?, run(Check::CondD)?, run(Check::CondE)?);
    let mut edges = vec![
        Edge::implies("(A) => (B)", a.verdict, b.verdict),
        Edge::implies("(B) => (C)", b.verdict, cc.verdict),
        Edge::iff("(C) <=> (D)", cc.verdict, d.verdict),
        Edge::implies("(B) => (E)", b.verdict, ee.verdict),
    ];
    let mut outcomes = vec![a, b, cc, d, ee];
    let cp = critproto(e, opts)?;
    edges.extend(cp.edges);
    let a1 = run(Check::A1)?;
    let weak = weak_a2(e)?;
    let e_verdict = outcomes[4].verdict;
    let mut remark = Edge::implies("A1 and weak A2 => (E)", a1.verdict.and(weak), e_verdict);
    remark.detail = format!("A1 {} and weak A2 {weak} => (E) {e_verdict}", a1.verdict);
    edges.push(remark);
    outcomes.push(a1);
    Ok(AuditResult::new(Audit::Lemma1, edges, outcomes))
}

/// The regular-epi reading of A2.
fn weak_a2(e: &Engine) -> Result<Verdict> {
    if !e.is_pointed() {
        return Ok(Verdict::Fails);
    }
    let exts = match split_extensions(e) {
        Ok((exts, _)) => exts,
        Err(err) if err.is_budget() => return Ok(Verdict::OutOfBudget),
        Err(err) => return Err(err),
    };
    let mut verdict = Verdict::Holds;
    for ext in &exts {
        match a2_instance(e, ext) {
            Ok(inst) if !inst.holds_weak() => return Ok(Verdict::Fails),
            Ok(_) => {}
            Err(err) if err.is_budget() => verdict = Verdict::OutOfBudget,
            Err(err) => return Err(err),
        }
    }
    Ok(verdict)
}

fn critproto(e: &Engine, opts: Options) -> Result<AuditResult> {
    if !e.is_pointed() {
        return Ok(AuditResult::new(Audit::Critproto, vec![], vec![not_pointed(Check::Proto)]));
    }
    let (a, ssfl, cc) = match protomodular_routes(e, opts) {
        Ok(r) => r,
        Err(err) if err.is_budget() => {
            let o = guard(Check::Proto, Err(err))?;
            return Ok(AuditResult::new(Audit::Critproto, vec![], vec![o]));
        }
        Err(err) => return Err(err),
    };
    let edges = vec![
        Edge::iff("(A) <=> SSFL-strong and (C)", a.verdict, ssfl.verdict.and(cc.verdict)),
        Edge::implies("(A) => SSFL-strong", a.verdict, ssfl.verdict),
    ];
    Ok(AuditResult::new(Audit::Critproto, edges, vec![a, ssfl, cc]))
}

fn prodsemdir(e: &Engine) -> Result<AuditResult> {
    if !e.is_pointed() {
        return Ok(AuditResult::new(Audit::Prodsemdir, vec![], vec![not_pointed(Check::CondF)]));
    }
    let exts = match split_extensions(e) {
        Ok((exts, _)) => exts,
        Err(err) if err.is_budget() => return Ok(AuditResult::new(Audit::Prodsemdir, vec![], vec![])),
        Err(err) => return Err(err),
    };
    let (mut af, mut af_bad, mut ck, mut ck_bad, mut delegated) = (0, 0, 0, 0, 0);
    for ext in &exts {
        let inst = match a2_instance(e, ext) {
            Ok(i) => i,
            Err(err) if err.is_budget() => continue,
            Err(err) => return Err(err),
        };
        match inst.route {
            A2Route::Coproduct { cokernel, strong, .. } => {
                if strong == inst.condition_a {
                    af += 1;
                } else {
                    af_bad += 1;
                }
                if cokernel == inst.condition_a {
                    ck += 1;
                } else {
                    ck_bad += 1;
                }
            }
            A2Route::Delegated { .. } => delegated += 1,
        }
    }
    let mut edges = vec![
        Edge::counted("(k, s) strongly epimorphic <=> copairing strong epi", af, af_bad),
        Edge::counted("(k, s) strongly epimorphic <=> copairing cokernel", ck, ck_bad),
    ];
    edges[0].detail.push_str(&format!("; {delegated} without coproduct"));
    Ok(AuditResult::new(Audit::Prodsemdir, edges, vec![]))
}

fn homolex(e: &Engine, opts: Options) -> Result<AuditResult> {
    if !e.is_pointed() {
        return Ok(AuditResult::new(Audit::Homolex, vec![], vec![not_pointed(Check::Exact)]));
    }
    let rels = match super::diagrams::equivalence_relations(e) {
        Ok(r) => r,
        Err(err) if err.is_budget() => return Ok(AuditResult::new(Audit::Homolex, vec![], vec![])),
        Err(err) => return Err(err),
    };
    let (mut agree, mut gaps, mut escaped) = (0, 0, 0);
    for rel in &rels {
        match exactness_instance(e, rel) {
            Ok(Exactness::Instance(inst)) => {
                if inst.proof.is_some() {
                    agree += 1;
                } else {
                    gaps += 1;
                }
            }
            Ok(_) => escaped += 1,
            Err(err) if err.is_budget() => escaped += 1,
            Err(err) => return Err(err),
        }
    }
    let mut double = Edge::counted("direct iso test <=> proof replay", agree, 0);
    double.detail.push_str(&format!("; {gaps} without the proof hypotheses, {escaped} escaping"));
    let exact = run_check(e, Check::Exact, opts)?;
    let proto = run_check(e, Check::Proto, opts)?;
    let regular = run_check(e, Check::Regular, opts)?;
    let homological = proto.verdict.and(regular.verdict);
    let rel_coeq = run_check(e, Check::A1p, opts)?;
    let img = guard(Check::A4, image_of_kernels(e, true, opts))?;
    let rhs = rel_coeq.verdict.and(img.verdict);
    let mut prop =
        Edge::iff("homological: exact <=> relation coequalizers and regular images of kernels", exact.verdict, rhs);
    if homological != Verdict::Holds {
        prop.status = EdgeStatus::Skipped;
        prop.detail = format!("homological rung is {homological}");
    }
    Ok(AuditResult::new(Audit::Homolex, vec![double, prop], vec![exact, proto, regular, rel_coeq, img]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::testutil::{engine, window};
    use crate::backend::Backend;

    #[test]
    fn ladder_tops_out_where_expected() {
        let m = window(Backend::AbGroup, 2);
        let e = engine!(m);
        let cl = classify(&e, false, Options::default()).unwrap();
        assert_eq!(cl.highest(), Some(Rung::SemiAbelian));
        let p = window(Backend::PointedSet, 3);
        let pe = engine!(p);
        let cl = classify(&pe, false, Options::default()).unwrap();
        assert_eq!(cl.rung(Rung::Protomodular), Verdict::Fails);
    }

    #[test]
    fn lemma_audit_is_consistent_on_negative_controls() {
        for (b, n) in [(Backend::PointedSet, 3), (Backend::Monoid, 2)] {
            let m = window(b, n);
            let e = engine!(m);
            let a = audit(&e, Audit::Lemma1, Options::default()).unwrap();
            assert_eq!(a.violations(), 0, "{b}");
        }
    }

    #[test]
    fn audit_names_parse() {
        for a in [Audit::Lemma1, Audit::Critproto, Audit::Prodsemdir, Audit::Homolex] {
            assert_eq!(a.key().parse::<Audit>().unwrap(), a);
        }
    }

    #[test]
    fn pairs_are_regular() {
        let m = window(Backend::GroupPair, 2);
        let e = engine!(m);
        assert_eq!(check_regular(&e, Options::default()).unwrap().verdict, Verdict::Holds);
    }
}
