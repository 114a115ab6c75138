//! Structured reports, their text rendering, and witness files.
//!
//! A witness file is a category document (the witness's support subcategory)
//! with a `roles:` section and a `# check <key>` header line. Loading one
//! re-runs the relevant validator on the stored category.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::axioms::{classify, validate, AuditResult, Check, Classification, Outcome, Verdict, Witness};
use crate::budget::Budget;
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::fincat::{parse_category, print_category, FinCategory, RolesSection};
use crate::functor::{functor_category, pointwise_audit, Pointwise, PointwisePredicate, PointwiseReport};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    /// The validator that re-checks this witness.
    pub check: String,
    pub detail: String,
    /// `(label, morphism name)` in the source category.
    pub roles: Vec<(String, String)>,
    /// The support subcategory with its roles, in the category file format.
    pub category: String,
}

impl WitnessReport {
    pub fn new(cat: &FinCategory, w: &Witness) -> Self {
        WitnessReport {
            check: w.check.key().to_string(),
            detail: w.detail.clone(),
            roles: w.roles.iter().map(|(l, m)| (l.clone(), cat.mor_name(*m).to_string())).collect(),
            category: witness_document(cat, w),
        }
    }
}

/// Renders a witness as a self-contained category document.
pub fn witness_document(cat: &FinCategory, w: &Witness) -> String {
    let (sub, back) = cat.full_subcategory(&w.support);
    let roles = RolesSection(
        w.roles
            .iter()
            .map(|(l, m)| {
                let id = back.iter().position(|b| b == m).expect("role outside the witness support");
                (l.clone(), id)
            })
            .collect(),
    );
    let header = [format!(" check {}", w.check.key()), format!(" {}", w.detail)];
    print_category(&sub, Some(&roles), &header)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<WitnessReport>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub more_witnesses: Vec<WitnessReport>,
    pub budget: Budget,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<u64>,
    /// Which statement the check decides.
    pub anchor: String,
    pub source: String,
    pub scanned: usize,
    pub skipped: usize,
    pub inconclusive: usize,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(cat: &FinCategory, source: &str, o: &Outcome, budget: Budget, elapsed_ms: Option<u64>) -> Self {
        let mut ws = o.witnesses.iter().map(|w| WitnessReport::new(cat, w));
        CheckReport {
            check: o.check.key().to_string(),
            verdict: o.verdict,
            witness: ws.next(),
            more_witnesses: ws.collect(),
            budget,
            elapsed_ms,
            anchor: o.check.anchor().to_string(),
            source: source.to_string(),
            scanned: o.scanned,
            skipped: o.skipped,
            inconclusive: o.inconclusive,
            notes: o.notes.clone(),
        }
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "check {} on {}: {}", self.check, self.source, self.verdict);
        let _ = writeln!(s, "  anchor: {}", self.anchor);
        let _ = writeln!(s, "  scanned {}, escaped {}, inconclusive {}", self.scanned, self.skipped, self.inconclusive);
        if let Some(ms) = self.elapsed_ms {
            let _ = writeln!(s, "  elapsed {ms} ms");
        }
        for n in &self.notes {
            let _ = writeln!(s, "  note: {n}");
        }
        for w in self.witness.iter().chain(&self.more_witnesses) {
            let _ = writeln!(s, "  witness ({}): {}", w.check, w.detail);
            for (l, m) in &w.roles {
                let _ = writeln!(s, "    {l} = {m}");
            }
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RungReport {
    pub rung: String,
    pub verdict: Verdict,
    pub from: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub source: String,
    pub ladder: Vec<RungReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub highest: Option<String>,
    pub checks: Vec<CheckReport>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
    pub budget: Budget,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<u64>,
}

impl ClassifyReport {
    pub fn new(cat: &FinCategory, source: &str, cl: &Classification, budget: Budget, elapsed_ms: Option<u64>) -> Self {
        ClassifyReport {
            source: source.to_string(),
            ladder: cl
                .rungs
                .iter()
                .map(|r| RungReport {
                    rung: r.rung.key().to_string(),
                    verdict: r.verdict,
                    from: r.from.iter().map(|c| c.key().to_string()).collect(),
                })
                .collect(),
            highest: cl.highest().map(|r| r.key().to_string()),
            checks: cl.outcomes.iter().map(|o| CheckReport::new(cat, source, o, budget, None)).collect(),
            notes: cl.notes.clone(),
            budget,
            elapsed_ms,
        }
    }

    /// Overall verdict: any failing rung is a failure.
    pub fn verdict(&self) -> Verdict {
        self.ladder.iter().fold(Verdict::Holds, |v, r| v.and(r.verdict))
    }

    pub fn text(&self) -> String {
        let mut s = format!("classify {}\n", self.source);
        for r in &self.ladder {
            let _ = writeln!(s, "  {:34} {}", r.rung, r.verdict);
        }
        let _ = writeln!(s, "  highest rung: {}", self.highest.as_deref().unwrap_or("none"));
        for n in &self.notes {
            let _ = writeln!(s, "  note: {n}");
        }
        if let Some(ms) = self.elapsed_ms {
            let _ = writeln!(s, "  elapsed {ms} ms");
        }
        for c in &self.checks {
            s.push_str(&c.text());
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeReport {
    pub name: String,
    pub status: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub audit: String,
    pub source: String,
    pub verdict: Verdict,
    pub anchor: String,
    pub edges: Vec<EdgeReport>,
    pub checks: Vec<CheckReport>,
    pub budget: Budget,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<u64>,
}

impl AuditReport {
    pub fn new(cat: &FinCategory, source: &str, a: &AuditResult, budget: Budget, elapsed_ms: Option<u64>) -> Self {
        AuditReport {
            audit: a.audit.key().to_string(),
            source: source.to_string(),
            verdict: a.verdict,
            anchor: a.audit.anchor().to_string(),
            edges: a
                .edges
                .iter()
                .map(|e| EdgeReport {
                    name: e.name.clone(),
                    status: serde_json::to_value(e.status).unwrap().as_str().unwrap().to_string(),
                    detail: e.detail.clone(),
                })
                .collect(),
            checks: a.outcomes.iter().map(|o| CheckReport::new(cat, source, o, budget, None)).collect(),
            budget,
            elapsed_ms,
        }
    }

    pub fn text(&self) -> String {
        let mut s = format!("audit {} on {}: {}\n  anchor: {}\n", self.audit, self.source, self.verdict, self.anchor);
        for e in &self.edges {
            let _ = writeln!(s, "  {:60} {} ({})", e.name, e.status, e.detail);
        }
        if let Some(ms) = self.elapsed_ms {
            let _ = writeln!(s, "  elapsed {ms} ms");
        }
        s
    }
}

/// Hex SHA-256 of a canonical configuration string, used for report file names.
pub fn content_address(config: &str) -> String {
    hex::encode(Sha256::digest(config.as_bytes()))
}

/// A witness file read back from disk.
#[derive(Clone, Debug)]
pub struct LoadedWitness {
    pub check: Check,
    pub cat: FinCategory,
    pub roles: RolesSection,
    /// Whether the stored failure reproduces.
    pub reproduces: bool,
}

pub fn load_witness_text(text: &str, budget: Budget) -> Result<LoadedWitness> {
    let (cat, roles, comments) = parse_category(text)?;
    let check = comments
        .iter()
        .find_map(|c| c.trim().strip_prefix("check "))
        .ok_or_else(|| Error::Invalid("witness file lacks a `# check <name>` header".into()))?
        .trim()
        .parse::<Check>()?;
    cat.validate()?;
    let e = Engine::new(&cat, budget);
    let reproduces = match validate(&e, check, &roles) {
        Ok(b) => b,
        Err(Error::Invalid(_)) => false,
        Err(err) => return Err(err),
    };
    Ok(LoadedWitness { check, cat, roles, reproduces })
}

pub fn load_witness(path: &Path, budget: Budget) -> Result<LoadedWitness> {
    load_witness_text(&std::fs::read_to_string(path)?, budget)
}

/// Re-checks a freshly produced witness in its support subcategory.
pub fn reverify(cat: &FinCategory, w: &Witness, budget: Budget) -> Result<bool> {
    Ok(load_witness_text(&witness_document(cat, w), budget)?.reproduces)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctorcatReport {
    pub source: String,
    pub index: String,
    pub functors: usize,
    pub transformations: usize,
    pub audits: Vec<PointwiseReport>,
    pub base_ladder: Vec<RungReport>,
    pub lifted_ladder: Vec<RungReport>,
    pub ladder_agrees: bool,
    pub verdict: Verdict,
    pub budget: Budget,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<u64>,
}

impl FunctorcatReport {
    /// Builds `C^I` over the engine's category and compares it with `C`.
    pub fn run(
        base: &Engine,
        index: &FinCategory,
        source: &str,
        index_label: &str,
        samples: usize,
        seed: u64,
    ) -> Result<Self> {
        let budget = base.budget();
        let fc = functor_category(base.cat(), index, base.meter())?;
        let amb = Pointwise::new(&fc, base);
        let lifted = Engine::new(&fc.cat, budget).with_ambient(&amb);
        let audits = PointwisePredicate::ALL
            .into_iter()
            .map(|p| pointwise_audit(&fc, base, &lifted, p, samples, seed))
            .collect::<Result<Vec<_>>>()?;
        let opts = crate::axioms::Options::default();
        let a = ClassifyReport::new(base.cat(), source, &classify(base, false, opts)?, budget, None);
        let b = ClassifyReport::new(&fc.cat, index_label, &classify(&lifted, false, opts)?, budget, None);
        let ladder_agrees = a.ladder.iter().zip(&b.ladder).all(|(x, y)| x.verdict == y.verdict);
        let verdict = if !ladder_agrees || audits.iter().any(|r| !r.agrees()) {
            Verdict::Fails
        } else if audits.iter().any(|r| r.incomplete > 0) {
            Verdict::OutOfBudget
        } else {
            Verdict::Holds
        };
        Ok(FunctorcatReport {
            source: source.to_string(),
            index: index_label.to_string(),
            functors: fc.cat.num_objects(),
            transformations: fc.cat.num_morphisms(),
            audits,
            base_ladder: a.ladder,
            lifted_ladder: b.ladder,
            ladder_agrees,
            verdict,
            budget,
            elapsed_ms: None,
        })
    }

    pub fn text(&self) -> String {
        let mut s = format!(
            "functorcat {}^{}: {} functors, {} transformations: {}\n",
            self.source, self.index, self.functors, self.transformations, self.verdict
        );
        for a in &self.audits {
            let _ = writeln!(
                s,
                "  {:12} agree on {} of {} examined ({} in space, coverage {:.3}, seed {}), {} incomplete",
                a.predicate.key(),
                a.agree,
                a.examined,
                a.space,
                a.coverage,
                a.seed,
                a.incomplete
            );
            for d in &a.disagreements {
                let _ = writeln!(s, "    disagreement: {d}");
            }
        }
        for (x, y) in self.base_ladder.iter().zip(&self.lifted_ladder) {
            let _ = writeln!(s, "  {:34} {:13} {}", x.rung, x.verdict.to_string(), y.verdict);
        }
        if let Some(ms) = self.elapsed_ms {
            let _ = writeln!(s, "  elapsed {ms} ms");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::{run_check, Options};
    use crate::backend::{Backend, Materialized};

    fn failing(b: Backend, n: usize, check: Check) -> (Materialized, Outcome) {
        let m = Materialized::new(b, n, true).unwrap();
        let o = {
            let e = Engine::new(&m.cat, Budget::default()).with_ambient(&m);
            run_check(&e, check, Options::default()).unwrap()
        };
        (m, o)
    }

    #[test]
    fn witness_files_round_trip_and_reproduce() {
        let (m, o) = failing(Backend::PointedSet, 3, Check::CondC);
        let doc = witness_document(&m.cat, &o.witnesses[0]);
        let l = load_witness_text(&doc, Budget::default()).unwrap();
        assert_eq!(l.check, Check::CondC);
        assert!(l.reproduces);
        assert_eq!(
            print_category(&l.cat, Some(&l.roles), &[" check condC".into(), format!(" {}", o.witnesses[0].detail)]),
            doc
        );
    }

    #[test]
    fn witness_of_another_check_does_not_reproduce() {
        let (m, o) = failing(Backend::PointedSet, 3, Check::CondC);
        let doc = witness_document(&m.cat, &o.witnesses[0]).replace("check condC", "check A3");
        assert!(!load_witness_text(&doc, Budget::default()).unwrap().reproduces);
    }

    #[test]
    fn witness_without_header_is_rejected() {
        let (m, o) = failing(Backend::PointedSet, 3, Check::CondC);
        let doc = witness_document(&m.cat, &o.witnesses[0]).replace("check condC", "");
        assert!(load_witness_text(&doc, Budget::default()).is_err());
    }

    #[test]
    fn check_report_json_round_trips() {
        let (m, o) = failing(Backend::Monoid, 3, Check::CondC);
        let r = CheckReport::new(&m.cat, &m.label(), &o, Budget::default(), None);
        let s = serde_json::to_string(&r).unwrap();
        assert!(!s.contains("elapsed_ms"));
        let back: CheckReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        assert!(r.text().contains(&r.anchor));
    }

    #[test]
    fn content_address_is_hex_sha256() {
        let a = content_address("x");
        assert_eq!(a.len(), 64);
        assert_eq!(a, content_address("x"));
        assert_ne!(a, content_address("y"));
    }
}
