//! Checkers for the axioms A1–A4, the conditions (A)–(F), the split short
//! five lemmas, protomodularity and exactness, plus the classification ladder
//! and implication audits built from them.
//!
//! Every scan quantifies over the materialized window. Instances whose
//! constructions escape the window are skipped and counted; instances that
//! cannot be decided within budget make the verdict inconclusive unless a
//! failure has already been found.

mod classify;
mod diagrams;
mod lemma;
mod proto;
mod semiab;
mod validate;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::fincat::{MorId, ObjId};

pub use classify::{
    audit, check_regular, classify, Audit, AuditResult, Classification, Edge, EdgeStatus, Rung, RungResult,
};
pub use diagrams::{
    equivalence_relations, split_extensions, EquivRelation, ReflexivePair, SplitExtension, SsflDiagram,
};
pub use lemma::{
    check_condition_a, check_condition_b, check_condition_c, check_condition_d, check_condition_e, check_condition_f,
    condition_a_instance, condition_b_instance,
};
pub use proto::{
    check_equiv_relation, check_exactness, check_protomodular, check_ssfl, exactness_instance, protomodular_routes,
    Exactness, ExactnessInstance, ProofPath,
};
pub use semiab::{a2_instance, check_a1, check_a2, check_a3, check_a4, check_a4_prime, A2Instance, A2Route};
pub use validate::validate;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Check {
    A1,
    A1p,
    A2,
    A3,
    A4,
    A4p,
    CondA,
    CondB,
    CondC,
    CondD,
    CondE,
    CondF,
    SsflIso,
    SsflStrong,
    Proto,
    Exact,
    Regular,
    Equiv,
}

impl Check {
    pub const ALL: [Check; 18] = [
        Check::A1,
        Check::A1p,
        Check::A2,
        Check::A3,
        Check::A4,
        Check::A4p,
        Check::CondA,
        Check::CondB,
        Check::CondC,
        Check::CondD,
        Check::CondE,
        Check::CondF,
        Check::SsflIso,
        Check::SsflStrong,
        Check::Proto,
        Check::Exact,
        Check::Regular,
        Check::Equiv,
    ];

    pub fn key(&self) -> &'static str {
        match self {
            Check::A1 => "A1",
            Check::A1p => "A1p",
            Check::A2 => "A2",
            Check::A3 => "A3",
            Check::A4 => "A4",
            Check::A4p => "A4p",
            Check::CondA => "condA",
            Check::CondB => "condB",
            Check::CondC => "condC",
            Check::CondD => "condD",
            Check::CondE => "condE",
            Check::CondF => "condF",
            Check::SsflIso => "ssfl-iso",
            Check::SsflStrong => "ssfl-strong",
            Check::Proto => "proto",
            Check::Exact => "exact",
            Check::Regular => "regular",
            Check::Equiv => "equiv",
        }
    }

    /// Short descriptive anchor for the statement being checked.
    pub fn anchor(&self) -> &'static str {
        match self {
            Check::A1 => "A1: pointed, finite products, coproducts, equalizers, coequalizers",
            Check::A1p => "A1': A1 with coequalizers of equivalence relations only",
            Check::A2 => "A2: copairing of kernel and section is a cokernel",
            Check::A3 => "A3: pullbacks of cokernels are cokernels",
            Check::A4 => "A4: image of a kernel under a cokernel is a kernel",
            Check::A4p => "A4': square with kernel, regular epis and mono forces a kernel",
            Check::CondA => "(A): kernel and section form a strongly epimorphic family",
            Check::CondB => "(B): coequalizer of a reflexive pair is a cokernel of g restricted to Ker f",
            Check::CondC => "(C): trivial kernel implies mono",
            Check::CondD => "(D): mono outer arrows force a mono middle arrow",
            Check::CondE => "(E): regular epis are cokernels",
            Check::CondF => "(F): copairing of kernel and section is a strong epi",
            Check::SsflIso => "split short five lemma",
            Check::SsflStrong => "split short five lemma for strong epis",
            Check::Proto => "protomodularity via (A), cross-checked via SSFL-strong and (C)",
            Check::Exact => "equivalence relations are kernel pairs",
            Check::Regular => "regular: kernel pairs have coequalizers, regular epis are pullback-stable, images exist",
            Check::Equiv => "internal equivalence relation",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Check {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let alias = match s {
            "ssfl" => Some(Check::SsflIso),
            "A" => Some(Check::CondA),
            "B" => Some(Check::CondB),
            "C" => Some(Check::CondC),
            "D" => Some(Check::CondD),
            "E" => Some(Check::CondE),
            "F" => Some(Check::CondF),
            _ => None,
        };
        alias
            .or_else(|| Check::ALL.iter().copied().find(|c| c.key().eq_ignore_ascii_case(s)))
            .ok_or_else(|| Error::Invalid(format!("unknown check `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    OutOfBudget,
}

impl Verdict {
    pub fn decided(&self) -> Option<bool> {
        match self {
            Verdict::Holds => Some(true),
            Verdict::Fails => Some(false),
            Verdict::OutOfBudget => None,
        }
    }

    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fails, _) | (_, Verdict::Fails) => Verdict::Fails,
            (Verdict::Holds, Verdict::Holds) => Verdict::Holds,
            _ => Verdict::OutOfBudget,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::OutOfBudget => "out-of-budget",
        })
    }
}

/// A counterexample: labelled morphisms plus the objects needed to re-check it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub check: Check,
    pub roles: Vec<(String, MorId)>,
    /// Objects of the subcategory in which the failure reproduces.
    pub support: Vec<ObjId>,
    pub detail: String,
}

impl Witness {
    pub fn role(&self, label: &str) -> Option<MorId> {
        self.roles.iter().find(|(l, _)| l == label).map(|(_, m)| *m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub check: Check,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub scanned: usize,
    pub skipped: usize,
    pub inconclusive: usize,
    pub notes: Vec<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub all_witnesses: bool,
}

/// Bookkeeping for one scan.
pub(crate) struct Scan<'e, 'a> {
    pub engine: &'e Engine<'a>,
    check: Check,
    opts: Options,
    witnesses: Vec<Witness>,
    scanned: usize,
    skipped: usize,
    inconclusive: usize,
    notes: Vec<String>,
    first_budget_note: Option<String>,
}

impl<'e, 'a> Scan<'e, 'a> {
    pub fn new(engine: &'e Engine<'a>, check: Check, opts: Options) -> Self {
        Scan {
            engine,
            check,
            opts,
            witnesses: Vec::new(),
            scanned: 0,
            skipped: 0,
            inconclusive: 0,
            notes: Vec::new(),
            first_budget_note: None,
        }
    }

    /// Whether the scan should stop.
    pub fn done(&self) -> bool {
        !self.opts.all_witnesses && !self.witnesses.is_empty()
    }

    pub fn note(&mut self, s: impl Into<String>) {
        let s = s.into();
        if !self.notes.contains(&s) {
            self.notes.push(s);
        }
    }

    pub fn skip(&mut self) {
        self.skipped += 1;
    }

    /// Records the outcome of one instance: `Ok(None)` passed, `Ok(Some(w))`
    /// failed with witness `w`. Budget errors mark the instance inconclusive;
    /// other errors abort the scan.
    pub fn record(&mut self, r: Result<Option<Witness>>) -> Result<()> {
        self.scanned += 1;
        match r {
            Ok(None) => Ok(()),
            Ok(Some(w)) => {
                self.witnesses.push(w);
                Ok(())
            }
            Err(Error::OutOfBudget(why)) => {
                self.inconclusive += 1;
                self.first_budget_note.get_or_insert(why);
                Ok(())
            }
            Err(e) => Err(e),
        }
    }

    pub fn witness(&self, roles: Vec<(&str, MorId)>, support: Support, detail: impl Into<String>) -> Witness {
        let cat = self.engine.cat();
        let support = match support {
            Support::All => cat.objects().collect(),
            Support::Roles => {
                let mut objs: Vec<ObjId> = roles.iter().flat_map(|&(_, m)| [cat.dom(m), cat.cod(m)]).collect();
                objs.extend(self.engine.zero_object());
                objs.sort_unstable();
                objs.dedup();
                objs
            }
        };
        Witness {
            check: self.check,
            roles: roles.into_iter().map(|(l, m)| (l.to_string(), m)).collect(),
            support,
            detail: detail.into(),
        }
    }

    pub fn finish(mut self) -> Outcome {
        let verdict = if !self.witnesses.is_empty() {
            Verdict::Fails
        } else if self.inconclusive > 0 {
            Verdict::OutOfBudget
        } else {
            Verdict::Holds
        };
        if let Some(why) = self.first_budget_note.take() {
            self.notes.push(format!("{} instance(s) inconclusive: {why}", self.inconclusive));
        }
        if self.skipped > 0 {
            self.notes.push(format!("{} instance(s) escape the window", self.skipped));
        }
        Outcome {
            check: self.check,
            verdict,
            witnesses: self.witnesses,
            scanned: self.scanned,
            skipped: self.skipped,
            inconclusive: self.inconclusive,
            notes: self.notes,
        }
    }
}

/// Which objects a witness needs for its failure to reproduce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Support {
    /// The domains and codomains of the roles, plus a zero object.
    Roles,
    /// The whole window; used for failures that assert the absence of something.
    All,
}

/// Outcome for a category that lacks a zero object.
pub(crate) fn not_pointed(check: Check) -> Outcome {
    Outcome {
        check,
        verdict: Verdict::Fails,
        witnesses: Vec::new(),
        scanned: 0,
        skipped: 0,
        inconclusive: 0,
        notes: vec!["category has no zero object".into()],
    }
}

/// Converts a budget error escaping a checker into an inconclusive outcome.
pub(crate) fn guard(check: Check, r: Result<Outcome>) -> Result<Outcome> {
    match r {
        Err(Error::OutOfBudget(why)) => Ok(Outcome {
            check,
            verdict: Verdict::OutOfBudget,
            witnesses: Vec::new(),
            scanned: 0,
            skipped: 0,
            inconclusive: 1,
            notes: vec![why],
        }),
        r => r,
    }
}

/// Runs a checker by name.
pub fn run_check(engine: &Engine, check: Check, opts: Options) -> Result<Outcome> {
    guard(check, run_unguarded(engine, check, opts))
}

fn run_unguarded(engine: &Engine, check: Check, opts: Options) -> Result<Outcome> {
    match check {
        Check::A1 => check_a1(engine, false, opts),
        Check::A1p => check_a1(engine, true, opts),
        Check::A2 => check_a2(engine, opts),
        Check::A3 => check_a3(engine, opts),
        Check::A4 => check_a4(engine, opts),
        Check::A4p => check_a4_prime(engine, opts),
        Check::CondA => check_condition_a(engine, opts),
        Check::CondB => check_condition_b(engine, opts),
        Check::CondC => check_condition_c(engine, opts),
        Check::CondD => check_condition_d(engine, opts),
        Check::CondE => check_condition_e(engine, opts),
        Check::CondF => check_condition_f(engine, opts),
        Check::SsflIso => check_ssfl(engine, false, opts),
        Check::SsflStrong => check_ssfl(engine, true, opts),
        Check::Proto => check_protomodular(engine, opts),
        Check::Exact => check_exactness(engine, opts),
        Check::Regular => check_regular(engine, opts),
        Check::Equiv => Err(Error::Invalid("`equiv` needs a candidate pair; use check_equiv_relation".into())),
    }
}


#[cfg(test)]
mod tests {
    use super::testutil::{engine, window};
    use super::*;
    use crate::backend::Backend;
    use crate::fincat::parse_category;

    #[test]
    fn check_names_parse() {
        for c in Check::ALL {
            assert_eq!(c.key().parse::<Check>().unwrap(), c);
            assert_eq!(c.key().to_uppercase().parse::<Check>().unwrap(), c);
        }
        assert_eq!("C".parse::<Check>().unwrap(), Check::CondC);
        assert_eq!("ssfl".parse::<Check>().unwrap(), Check::SsflIso);
        assert!("G".parse::<Check>().is_err());
    }

    #[test]
    fn verdict_and_is_pessimistic() {
        use Verdict::*;
        assert_eq!(Holds.and(Holds), Holds);
        assert_eq!(Holds.and(OutOfBudget), OutOfBudget);
        assert_eq!(OutOfBudget.and(Fails), Fails);
        assert_eq!(Fails.and(Holds), Fails);
    }

    #[test]
    fn one_object_category_passes_everything() {
        let text = "objects:\n0\nmorphisms:\n1 0 0\nidentities:\n0 1\n";
        let (cat, _, _) = parse_category(text).unwrap();
        let e = Engine::new(&cat, crate::Budget::default());
        for c in Check::ALL.into_iter().filter(|&c| c != Check::Equiv) {
            let o = run_check(&e, c, Options::default()).unwrap();
            assert_eq!(o.verdict, Verdict::Holds, "{c}");
        }
    }

    #[test]
    fn unpointed_category_fails_with_empty_support() {
        let text = "objects:\na\nb\nmorphisms:\n1a a a\n1b b b\nf a b\nidentities:\na 1a\nb 1b\n";
        let (cat, _, _) = parse_category(text).unwrap();
        let e = Engine::new(&cat, crate::Budget::default());
        let o = run_check(&e, Check::A2, Options::default()).unwrap();
        assert_eq!(o.verdict, Verdict::Fails);
        assert!(o.witnesses.is_empty());
    }

    #[test]
    fn all_witnesses_collects_more_than_one() {
        let m = window(Backend::PointedSet, 3);
        let e = engine!(m);
        let one = run_check(&e, Check::CondC, Options::default()).unwrap();
        let all = run_check(&e, Check::CondC, Options { all_witnesses: true }).unwrap();
        assert_eq!(one.witnesses.len(), 1);
        assert!(all.witnesses.len() > 1);
        assert_eq!(all.witnesses[0], one.witnesses[0]);
    }

    #[test]
    fn zero_apex_budget_is_inconclusive() {
        let m = window(Backend::AbGroup, 2);
        let b = crate::Budget { max_apexes: 0, ..crate::Budget::default() };
        let e = Engine::new(&m.cat, b).with_ambient(&m);
        let o = run_check(&e, Check::A4, Options::default()).unwrap();
        assert_eq!(o.verdict, Verdict::OutOfBudget);
    }
}
