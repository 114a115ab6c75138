//! The diagram shapes the checkers quantify over, and their enumeration.

use serde::Serialize;

use crate::engine::{Engine, Lookup};
use crate::error::{Error, Result};
use crate::fincat::solver::Construction;
use crate::fincat::{MorId, ObjId};

/// `K --k--> X <--s-- Y` with `p: X → Y`, `p∘s = 1`, `k = ker p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SplitExtension {
    pub p: MorId,
    pub s: MorId,
    pub k: MorId,
    pub kernel: ObjId,
    pub x: ObjId,
    pub y: ObjId,
}

impl SplitExtension {
    pub fn roles(&self, prefix: [&'static str; 3]) -> Vec<(&'static str, MorId)> {
        vec![(prefix[0], self.p), (prefix[1], self.s), (prefix[2], self.k)]
    }
}

/// Upper row `(i, q, r)` over `Z, W`, lower row `(k, p, s)` over `X, Y`,
/// verticals `l: K[q] → K[p]`, `m: Z → X`, `n: W → Y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SsflDiagram {
    pub upper: SplitExtension,
    pub lower: SplitExtension,
    pub l: MorId,
    pub m: MorId,
    pub n: MorId,
}

impl SsflDiagram {
    pub fn roles(&self) -> Vec<(&'static str, MorId)> {
        let mut r = self.upper.roles(["q", "r", "i"]);
        r.extend(self.lower.roles(["p", "s", "k"]));
        r.extend([("l", self.l), ("m", self.m), ("n", self.n)]);
        r
    }

    pub fn commutes(&self, e: &Engine) -> bool {
        let c = e.cat();
        let (u, d) = (self.upper, self.lower);
        c.comp(self.n, u.p) == c.comp(d.p, self.m)
            && c.comp(self.m, u.s) == c.comp(d.s, self.n)
            && c.comp(self.m, u.k) == c.comp(d.k, self.l)
    }
}

/// `f, g: A ⇉ B` with common section `s` and `k = ker f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ReflexivePair {
    pub f: MorId,
    pub g: MorId,
    pub s: MorId,
    pub k: MorId,
}

/// `r0, r1: R ⇉ X` with diagonal `δ` and twist `τ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EquivRelation {
    pub r0: MorId,
    pub r1: MorId,
    pub delta: MorId,
    pub twist: MorId,
}

/// Every split extension in the window: every split epi with every section,
/// ordered by domain, then codomain. Returns the extensions together with the
/// number of split epis whose kernel is not in the window.
pub fn split_extensions(e: &Engine) -> Result<(Vec<SplitExtension>, usize)> {
    let c = e.cat();
    let mut out = Vec::new();
    let mut missing = 0;
    for x in c.objects() {
        for y in c.objects() {
            for &p in c.hom(x, y) {
                let sections: Vec<MorId> = c.hom(y, x).iter().copied().filter(|&s| c.comp(p, s) == c.id(y)).collect();
                if sections.is_empty() {
                    continue;
                }
                let Some(k) = e.kernel(p)? else {
                    missing += 1;
                    continue;
                };
                for s in sections {
                    out.push(SplitExtension { p, s, k, kernel: c.dom(k), x, y });
                }
            }
        }
        e.meter().check_time()?;
    }
    Ok((out, missing))
}

/// Properties of a candidate relation `(r0, r1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationProps {
    pub jointly_monic: bool,
    pub delta: Option<MorId>,
    pub twist: Option<MorId>,
    pub transitive: Option<bool>,
}

impl RelationProps {
    pub fn is_equivalence(&self) -> bool {
        self.jointly_monic && self.delta.is_some() && self.twist.is_some() && self.transitive == Some(true)
    }
}

/// Transitivity through generalized elements: for all `a, b: T → R` with
/// `r1 a = r0 b` there is `c` with `r0 c = r0 a`, `r1 c = r1 b`. When the
/// pullback `R ×_X R` lies in the window the internal statement is decided as
/// well and both must agree.
fn transitive(e: &Engine, r0: MorId, r1: MorId) -> Result<bool> {
    let c = e.cat();
    let r = c.dom(r0);
    let mut generalized = true;
    'outer: for t in c.objects() {
        let hom = c.hom(t, r);
        for &a in hom {
            for &b in hom {
                if c.comp(r1, a) != c.comp(r0, b) {
                    continue;
                }
                let (x0, x1) = (c.comp(r0, a), c.comp(r1, b));
                if !hom.iter().any(|&m| c.comp(r0, m) == x0 && c.comp(r1, m) == x1) {
                    generalized = false;
                    break 'outer;
                }
            }
        }
    }
    if let Lookup::Found(cone) = e.construct(Construction::Pullback(r1, r0))? {
        let (p0, p1) = (cone.legs[0], cone.legs[1]);
        let (x0, x1) = (c.comp(r0, p0), c.comp(r1, p1));
        let internal = c.hom(cone.apex, r).iter().any(|&m| c.comp(r0, m) == x0 && c.comp(r1, m) == x1);
        if internal != generalized {
            return Err(Error::Inconsistent(format!(
                "transitivity routes disagree on ({}, {})",
                c.mor_name(r0),
                c.mor_name(r1)
            )));
        }
    }
    Ok(generalized)
}

pub fn relation_props(e: &Engine, r0: MorId, r1: MorId) -> Result<RelationProps> {
    let c = e.cat();
    let (r, x) = (c.dom(r0), c.cod(r0));
    let jointly_monic = c.dom(r1) == r && c.cod(r1) == x && e.jointly_monic_witness(&[r0, r1]).is_none();
    if !jointly_monic {
        return Ok(RelationProps { jointly_monic, delta: None, twist: None, transitive: None });
    }
    let id = c.id(x);
    let delta = c.hom(x, r).iter().copied().find(|&d| c.comp(r0, d) == id && c.comp(r1, d) == id);
    let twist = c.hom(r, r).iter().copied().find(|&t| c.comp(r0, t) == r1 && c.comp(r1, t) == r0);
    let transitive = if delta.is_some() && twist.is_some() { Some(transitive(e, r0, r1)?) } else { None };
    Ok(RelationProps { jointly_monic, delta, twist, transitive })
}

/// All internal equivalence relations in the window, one per subobject of
/// `X × X` (pairs differing by an automorphism of `R` are identified).
pub fn equivalence_relations(e: &Engine) -> Result<Vec<EquivRelation>> {
    let c = e.cat();
    let mut out = Vec::new();
    let mut visited = 0usize;
    for x in c.objects() {
        for r in c.objects() {
            let autos: Vec<MorId> = c.hom(r, r).iter().copied().filter(|&a| e.is_iso(a)).collect();
            let hom = c.hom(r, x);
            for &r0 in hom {
                for &r1 in hom {
                    visited += 1;
                    e.meter().check_pairs(visited)?;
                    let canonical = autos.iter().all(|&a| (r0, r1) <= (c.comp(r0, a), c.comp(r1, a)));
                    if !canonical {
                        continue;
                    }
                    let props = relation_props(e, r0, r1)?;
                    if props.is_equivalence() {
                        out.push(EquivRelation { r0, r1, delta: props.delta.unwrap(), twist: props.twist.unwrap() });
                    }
                }
            }
            e.meter().check_time()?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::testutil::{engine, window};
    use crate::backend::Backend;

    #[test]
    fn split_extensions_have_sections_and_kernels() {
        let m = window(Backend::Group, 4);
        let e = engine!(m);
        let c = e.cat();
        let (exts, missing) = split_extensions(&e).unwrap();
        assert_eq!(missing, 0);
        assert!(!exts.is_empty());
        for x in &exts {
            assert_eq!(c.comp(x.p, x.s), c.id(x.y));
            assert!(e.is_kernel_of(x.k, x.p).unwrap());
        }
    }

    #[test]
    fn relations_are_equivalences() {
        let m = window(Backend::AbGroup, 4);
        let e = engine!(m);
        for r in equivalence_relations(&e).unwrap() {
            assert!(relation_props(&e, r.r0, r.r1).unwrap().is_equivalence());
        }
    }
}
