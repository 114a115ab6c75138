//! Split short five lemmas, protomodularity, equivalence relations, exactness.

use super::diagrams::{equivalence_relations, relation_props, split_extensions, EquivRelation, SsflDiagram};
use super::lemma::{check_condition_a, check_condition_c};
use super::{not_pointed, Check, Options, Outcome, Scan, Support, Verdict, Witness};
use crate::engine::{Engine, KernelPair, Lookup};
use crate::error::{Error, Result};
use crate::fincat::solver::{Cone, Construction};
use crate::fincat::MorId;

/// Split short five lemma: with `l`, `n` isos (or strong epis when `strong`),
/// `m` must be an iso (or a strong epi).
pub fn check_ssfl(e: &Engine, strong: bool, opts: Options) -> Result<Outcome> {
    let check = if strong { Check::SsflStrong } else { Check::SsflIso };
    if !e.is_pointed() {
        return Ok(not_pointed(check));
    }
    let c = e.cat();
    let mut scan = Scan::new(e, check, opts);
    let (exts, missing) = split_extensions(e)?;
    for _ in 0..missing {
        scan.skip();
    }
    let class = |f: MorId| if strong { e.is_strong_epi(f) } else { e.is_iso(f) };
    'all: for lower in &exts {
        for upper in &exts {
            for &m in c.hom(upper.x, lower.x) {
                // n is forced by n = n∘q∘r = p∘m∘r; l by m∘i = k∘l.
                let n = c.chain(&[lower.p, m, upper.s]);
                if c.comp(n, upper.p) != c.comp(lower.p, m) || c.comp(m, upper.s) != c.comp(lower.s, n) {
                    continue;
                }
                let Some(l) = e.factor_through(c.comp(m, upper.k), lower.k) else {
                    return Err(Error::Inconsistent("m∘i does not factor through the kernel k".into()));
                };
                let d = SsflDiagram { upper: *upper, lower: *lower, l, m, n };
                debug_assert!(d.commutes(e));
                let w = if class(l) && class(n) && !class(m) {
                    let mut roles = d.roles();
                    let support = if strong {
                        let (u, g) = e.strong_epi_witness(m).expect("m is not a strong epi");
                        roles.extend([("u", u), ("g", g)]);
                        Support::All
                    } else {
                        Support::Roles
                    };
                    let what = if strong { "strong epis" } else { "isos" };
                    Some(scan.witness(roles, support, format!("l and n are {what} but m is not")))
                } else {
                    None
                };
                scan.record(Ok(w))?;
                if scan.done() {
                    break 'all;
                }
            }
        }
        e.meter().check_time().or_else(|err| scan.record(Err(err)))?;
        if scan.done() {
            break;
        }
    }
    Ok(scan.finish())
}

/// Verdicts of the two routes to protomodularity: (A), and SSFL-strong ∧ (C).
pub fn protomodular_routes(e: &Engine, opts: Options) -> Result<(Outcome, Outcome, Outcome)> {
    Ok((check_condition_a(e, opts)?, check_ssfl(e, true, opts)?, check_condition_c(e, opts)?))
}

pub fn check_protomodular(e: &Engine, opts: Options) -> Result<Outcome> {
    if !e.is_pointed() {
        return Ok(not_pointed(Check::Proto));
    }
    let (a, ssfl, cc) = protomodular_routes(e, opts)?;
    let route2 = ssfl.verdict.and(cc.verdict);
    let mut notes = vec![
        format!("via (A): {}", a.verdict),
        format!("via SSFL-strong and (C): {route2} ({} and {})", ssfl.verdict, cc.verdict),
    ];
    let verdict = match (a.verdict.decided(), route2.decided()) {
        (Some(x), Some(y)) if x != y => {
            notes.push("route disagreement".into());
            Verdict::Fails
        }
        (Some(_), _) => a.verdict,
        (None, _) => route2,
    };
    let mut witnesses = a.witnesses;
    if witnesses.is_empty() {
        witnesses.extend(ssfl.witnesses);
        witnesses.extend(cc.witnesses);
    }
    Ok(Outcome {
        check: Check::Proto,
        verdict,
        witnesses,
        scanned: a.scanned + ssfl.scanned + cc.scanned,
        skipped: a.skipped + ssfl.skipped + cc.skipped,
        inconclusive: a.inconclusive + ssfl.inconclusive + cc.inconclusive,
        notes,
    })
}

/// Decides whether `(r0, r1)` is an internal equivalence relation; a failing
/// outcome names the first property that breaks.
pub fn check_equiv_relation(e: &Engine, r0: MorId, r1: MorId) -> Result<Outcome> {
    let mut scan = Scan::new(e, Check::Equiv, Options::default());
    let props = relation_props(e, r0, r1)?;
    let failure = if !props.jointly_monic {
        Some("(r0, r1) is not jointly monic")
    } else if props.delta.is_none() {
        Some("no diagonal δ with r0∘δ = r1∘δ = 1")
    } else if props.twist.is_none() {
        Some("no twist τ with r0∘τ = r1, r1∘τ = r0")
    } else if props.transitive != Some(true) {
        Some("not transitive")
    } else {
        None
    };
    let w = failure.map(|why| scan.witness(vec![("r0", r0), ("r1", r1)], Support::All, why));
    scan.record(Ok(w))?;
    Ok(scan.finish())
}

/// The proof replay for one relation: `i` mono by joint monicity, and a strong
/// epi by the split short five lemma for strong epis applied to
/// `(k, r0, δ)` over `(φ, p0, σ)` with verticals `(e, i, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofPath {
    pub k: MorId,
    pub e: MorId,
    pub l: MorId,
    pub phi: MorId,
    pub l_is_kernel: bool,
    pub phi_is_kernel_of_p0: bool,
    pub i_mono: bool,
    pub i_strong_epi: bool,
}

impl ProofPath {
    pub fn verdict(&self) -> bool {
        self.i_mono && self.i_strong_epi
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessInstance {
    pub rel: EquivRelation,
    pub q: MorId,
    pub kp: KernelPair,
    pub i: MorId,
    /// Whether `i: R → P` is an isomorphism.
    pub direct: bool,
    /// `None` when a hypothesis of the proof is not met in the window.
    pub proof: Option<ProofPath>,
    pub proof_gap: Option<String>,
}

pub enum Exactness {
    Instance(Box<ExactnessInstance>),
    NoCoequalizer,
    Escaped,
}

fn proof_path(
    e: &Engine,
    rel: &EquivRelation,
    q: MorId,
    kp: &KernelPair,
    i: MorId,
) -> Result<std::result::Result<ProofPath, String>> {
    let c = e.cat();
    let i_mono = e.is_mono(i);
    if !i_mono {
        return Err(Error::Inconsistent("i is not mono although (r0, r1) is jointly monic".into()));
    }
    let Some(k) = e.kernel(rel.r0)? else {
        return Ok(Err("kernel of r0 not in the window".into()));
    };
    let Some((ep, l)) = e.image_factorization(c.comp(rel.r1, k))? else {
        return Ok(Err("image of r1∘k not in the window".into()));
    };
    let zero = e.zero(c.dom(l), c.cod(l))?;
    if c.comp(q, l) != c.comp(q, zero) {
        return Ok(Err("q∘l ≠ 0".into()));
    }
    let pb = Construction::Pullback(q, q);
    let cone = Cone { apex: kp.apex, legs: vec![kp.p0, kp.p1, c.comp(q, kp.p0)] };
    let other = Cone { apex: c.dom(l), legs: vec![zero, l, c.comp(q, l)] };
    let phi = e
        .universal(pb)?
        .mediate(c, &cone, &other)
        .ok_or_else(|| Error::Inconsistent("no factorization of (0, l) through the kernel pair".into()))?;
    let phi_is_kernel_of_p0 = e.is_kernel_of(phi, kp.p0)?;
    let l_is_kernel = e.is_kernel_mono(l)?;
    let x = c.cod(rel.r0);
    let commutes = c.comp(i, k) == c.comp(phi, ep) && c.comp(kp.p0, i) == rel.r0 && c.comp(i, rel.delta) == kp.diagonal;
    if !commutes {
        return Err(Error::Inconsistent("proof diagram does not commute".into()));
    }
    if !phi_is_kernel_of_p0 {
        return Ok(Err("φ is not the kernel of p0".into()));
    }
    if !(e.is_strong_epi(ep) && e.is_strong_epi(c.id(x))) {
        return Ok(Err("outer vertical arrows are not strong epis".into()));
    }
    Ok(Ok(ProofPath { k, e: ep, l, phi, l_is_kernel, phi_is_kernel_of_p0, i_mono, i_strong_epi: e.is_strong_epi(i) }))
}

pub fn exactness_instance(e: &Engine, rel: &EquivRelation) -> Result<Exactness> {
    let c = e.cat();
    let q = match e.construct(Construction::Coequalizer(rel.r0, rel.r1))? {
        Lookup::Found(cone) => cone.legs[1],
        Lookup::Escaped => return Ok(Exactness::Escaped),
        Lookup::Absent => return Ok(Exactness::NoCoequalizer),
    };
    let Some(kp) = e.kernel_pair(q)? else {
        return Ok(Exactness::Escaped);
    };
    let cone = Cone { apex: kp.apex, legs: vec![kp.p0, kp.p1, c.comp(q, kp.p0)] };
    let other = Cone { apex: c.dom(rel.r0), legs: vec![rel.r0, rel.r1, c.comp(q, rel.r0)] };
    let i = e
        .universal(Construction::Pullback(q, q))?
        .mediate(c, &cone, &other)
        .ok_or_else(|| Error::Inconsistent("relation does not factor through the kernel pair".into()))?;
    let direct = e.is_iso(i);
    let (proof, proof_gap) = match proof_path(e, rel, q, &kp, i)? {
        Ok(p) => {
            if p.verdict() != direct {
                return Err(Error::Inconsistent(format!(
                    "exactness routes disagree on ({}, {})",
                    c.mor_name(rel.r0),
                    c.mor_name(rel.r1)
                )));
            }
            (Some(p), None)
        }
        Err(gap) => (None, Some(gap)),
    };
    Ok(Exactness::Instance(Box::new(ExactnessInstance { rel: *rel, q, kp, i, direct, proof, proof_gap })))
}

pub fn check_exactness(e: &Engine, opts: Options) -> Result<Outcome> {
    if !e.is_pointed() {
        return Ok(not_pointed(Check::Exact));
    }
    let mut scan = Scan::new(e, Check::Exact, opts);
    let rels = match equivalence_relations(e) {
        Ok(r) => r,
        Err(err) => {
            scan.record(Err(err))?;
            return Ok(scan.finish());
        }
    };
    let (mut replayed, mut gaps) = (0, 0);
    for rel in &rels {
        let base = vec![("r0", rel.r0), ("r1", rel.r1), ("delta", rel.delta), ("tau", rel.twist)];
        let r = exactness_instance(e, rel).map(|x| -> Option<Witness> {
            match x {
                Exactness::Escaped => {
                    scan.skip();
                    None
                }
                Exactness::NoCoequalizer => {
                    Some(scan.witness(base.clone(), Support::All, "no coequalizer of the relation"))
                }
                Exactness::Instance(inst) => {
                    if inst.proof.is_some() {
                        replayed += 1;
                    } else {
                        gaps += 1;
                    }
                    (!inst.direct).then(|| {
                        let mut roles = base.clone();
                        roles.extend([("q", inst.q), ("p0", inst.kp.p0), ("p1", inst.kp.p1), ("i", inst.i)]);
                        scan.witness(
                            roles,
                            Support::Roles,
                            "the comparison i: R → P with the kernel pair of q is not an iso",
                        )
                    })
                }
            }
        });
        scan.record(r)?;
        if scan.done() {
            break;
        }
    }
    scan.note(format!(
        "{} equivalence relation(s); proof path replayed on {replayed}, inapplicable on {gaps}",
        rels.len()
    ));
    Ok(scan.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::testutil::{engine, window};
    use crate::axioms::validate;
    use crate::backend::Backend;
    use crate::fincat::RolesSection;

    #[test]
    fn ssfl_iso_fails_for_pointed_sets_only() {
        let m = window(Backend::PointedSet, 3);
        let e = engine!(m);
        let o = check_ssfl(&e, false, Options::default()).unwrap();
        assert_eq!(o.verdict, Verdict::Fails);
        let w = &o.witnesses[0];
        assert!(validate(&e, Check::SsflIso, &RolesSection(w.roles.clone())).unwrap());
        let g = window(Backend::Group, 4);
        let ge = engine!(g);
        assert_eq!(check_ssfl(&ge, false, Options::default()).unwrap().verdict, Verdict::Holds);
    }

    #[test]
    fn routes_agree_on_small_windows() {
        for (b, n) in [(Backend::AbGroup, 3), (Backend::PointedSet, 2), (Backend::Monoid, 2), (Backend::GroupPair, 2)] {
            let m = window(b, n);
            let e = engine!(m);
            let o = check_protomodular(&e, Options::default()).unwrap();
            assert!(!o.notes.iter().any(|n| n == "route disagreement"), "{b}");
        }
    }

    #[test]
    fn diagonal_relation_is_an_equivalence() {
        let m = window(Backend::AbGroup, 2);
        let e = engine!(m);
        let c = e.cat();
        let z2 = c.find_object("Z/2").unwrap();
        let id = c.id(z2);
        assert_eq!(check_equiv_relation(&e, id, id).unwrap().verdict, Verdict::Holds);
        let zero = e.zero(z2, z2).unwrap();
        let o = check_equiv_relation(&e, id, zero).unwrap();
        assert_eq!(o.verdict, Verdict::Fails);
    }

    #[test]
    fn exactness_routes_agree_on_abelian_groups() {
        let m = window(Backend::AbGroup, 4);
        let e = engine!(m);
        let rels = equivalence_relations(&e).unwrap();
        assert!(!rels.is_empty());
        for rel in &rels {
            let Exactness::Instance(inst) = exactness_instance(&e, rel).unwrap() else {
                panic!("coequalizer missing");
            };
            assert!(inst.direct);
            assert_eq!(inst.proof.map(|p| p.verdict()), Some(true));
        }
    }

    #[test]
    fn pairs_are_not_exact() {
        let m = window(Backend::GroupPair, 4);
        let e = engine!(m);
        let o = check_exactness(&e, Options::default()).unwrap();
        assert_eq!(o.verdict, Verdict::Fails);
        assert!(validate(&e, Check::Exact, &RolesSection(o.witnesses[0].roles.clone())).unwrap());
    }
}
