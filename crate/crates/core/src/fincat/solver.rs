//! Universal-property search for finite limits and colimits.
//!
//! A cone over a diagram at apex `A` is universal iff for every object `B`
//! the map `hom(B, A) -> cones(B)`, `u ↦ (λ_j ∘ u)_j`, is a bijection. Cone
//! counts per test object do not depend on the apex, so they are computed
//! once per diagram ([`Universal`]) and double as a cheap apex filter.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{FinCategory, MorId, ObjId};
use crate::budget::Meter;
use crate::error::{Error, Result};

/// A finite diagram: nodes labelled by objects, arrows `(source node, target node, morphism)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Diagram {
    pub nodes: Vec<ObjId>,
    pub arrows: Vec<(usize, usize, MorId)>,
}

impl Diagram {
    pub fn new(nodes: Vec<ObjId>, arrows: Vec<(usize, usize, MorId)>) -> Self {
        Diagram { nodes, arrows }
    }

    pub fn check(&self, cat: &FinCategory) -> Result<()> {
        for &(s, t, f) in &self.arrows {
            if s >= self.nodes.len() || t >= self.nodes.len() || f >= cat.num_morphisms() {
                return Err(Error::Invalid("diagram arrow out of range".into()));
            }
            if cat.dom(f) != self.nodes[s] || cat.cod(f) != self.nodes[t] {
                return Err(Error::Invalid(format!("diagram arrow {} does not match its endpoints", cat.mor_name(f))));
            }
        }
        Ok(())
    }
}

/// A cone (legs out of the apex) or cocone (legs into it), one leg per node.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cone {
    pub apex: ObjId,
    pub legs: Vec<MorId>,
}

/// The finite (co)limit shapes the axioms quantify over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Construction {
    Terminal,
    Initial,
    Product(ObjId, ObjId),
    Coproduct(ObjId, ObjId),
    Equalizer(MorId, MorId),
    Coequalizer(MorId, MorId),
    /// Pullback of a cospan `f: X → Z ← Y: g`. Legs are `[X, Y, Z]`.
    Pullback(MorId, MorId),
    /// Pushout of a span `f: Z → X, g: Z → Y`. Legs are `[X, Y, Z]`.
    Pushout(MorId, MorId),
}

impl Construction {
    pub fn is_colimit(&self) -> bool {
        matches!(
            self,
            Construction::Initial
                | Construction::Coproduct(..)
                | Construction::Coequalizer(..)
                | Construction::Pushout(..)
        )
    }

    pub fn diagram(&self, cat: &FinCategory) -> Diagram {
        use Construction::*;
        match *self {
            Terminal | Initial => Diagram::new(vec![], vec![]),
            Product(a, b) | Coproduct(a, b) => Diagram::new(vec![a, b], vec![]),
            Equalizer(f, g) | Coequalizer(f, g) => {
                Diagram::new(vec![cat.dom(f), cat.cod(f)], vec![(0, 1, f), (0, 1, g)])
            }
            Pullback(f, g) => Diagram::new(vec![cat.dom(f), cat.dom(g), cat.cod(f)], vec![(0, 2, f), (1, 2, g)]),
            Pushout(f, g) => Diagram::new(vec![cat.cod(f), cat.cod(g), cat.dom(f)], vec![(2, 0, f), (2, 1, g)]),
        }
    }

    /// Shape sanity: parallel pairs parallel, cospans/spans matching.
    pub fn well_formed(&self, cat: &FinCategory) -> bool {
        use Construction::*;
        match *self {
            Terminal | Initial => true,
            Product(a, b) | Coproduct(a, b) => a < cat.num_objects() && b < cat.num_objects(),
            Equalizer(f, g) | Coequalizer(f, g) => cat.dom(f) == cat.dom(g) && cat.cod(f) == cat.cod(g),
            Pullback(f, g) => cat.cod(f) == cat.cod(g),
            Pushout(f, g) => cat.dom(f) == cat.dom(g),
        }
    }
}

/// Result of an exhaustive search. Budget exhaustion is reported as an error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Search<T> {
    Found(T),
    /// Every candidate apex was examined; nothing is universal.
    Absent,
}

impl<T> Search<T> {
    pub fn found(self) -> Option<T> {
        match self {
            Search::Found(t) => Some(t),
            Search::Absent => None,
        }
    }
}

enum Step {
    Free(usize),
    /// Leg at `node` is determined by the already-assigned leg at `from` via `arrow`.
    Forced {
        node: usize,
        from: usize,
        mor: MorId,
    },
}

struct Plan {
    steps: Vec<Step>,
    /// Arrows to verify once step `i` is done (both ends assigned, not the forcing arrow).
    checks: Vec<Vec<(usize, usize, MorId)>>,
}

impl Plan {
    fn new(d: &Diagram, dual: bool) -> Plan {
        let n = d.nodes.len();
        let mut assigned = vec![false; n];
        let mut used = vec![false; d.arrows.len()];
        let mut steps = Vec::new();
        let mut checks = Vec::new();
        while steps.len() < n {
            // For a cone, an arrow s→t forces t from s; for a cocone it forces s from t.
            let forced = d.arrows.iter().enumerate().find_map(|(ai, &(s, t, f))| {
                let (from, to) = if dual { (t, s) } else { (s, t) };
                (assigned[from] && !assigned[to]).then_some((ai, to, from, f))
            });
            let step = match forced {
                Some((ai, node, from, mor)) => {
                    used[ai] = true;
                    assigned[node] = true;
                    Step::Forced { node, from, mor }
                }
                None => {
                    let node = (0..n).find(|&i| !assigned[i]).unwrap();
                    assigned[node] = true;
                    Step::Free(node)
                }
            };
            steps.push(step);
            let mut now = Vec::new();
            for (ai, &(s, t, f)) in d.arrows.iter().enumerate() {
                if !used[ai] && assigned[s] && assigned[t] {
                    used[ai] = true;
                    now.push((s, t, f));
                }
            }
            checks.push(now);
        }
        Plan { steps, checks }
    }
}

/// Enumerates all cones (or cocones, when `dual`) at `apex`, calling `visit`
/// for each; `visit` returns `true` to stop early. Returns whether it stopped.
pub fn for_each_cone(
    cat: &FinCategory,
    d: &Diagram,
    apex: ObjId,
    dual: bool,
    cap: &mut usize,
    visit: &mut dyn FnMut(&[MorId]) -> bool,
) -> Result<bool> {
    let plan = Plan::new(d, dual);
    let mut legs = vec![usize::MAX; d.nodes.len()];
    walk(cat, d, &plan, apex, dual, 0, &mut legs, cap, visit)
}

#[allow(clippy::too_many_arguments)]
fn walk(
    cat: &FinCategory,
    d: &Diagram,
    plan: &Plan,
    apex: ObjId,
    dual: bool,
    depth: usize,
    legs: &mut Vec<MorId>,
    cap: &mut usize,
    visit: &mut dyn FnMut(&[MorId]) -> bool,
) -> Result<bool> {
    if depth == plan.steps.len() {
        if *cap == 0 {
            return Err(Error::OutOfBudget("cone enumeration cap reached".into()));
        }
        *cap -= 1;
        return Ok(visit(legs));
    }
    // A leg commutes with an arrow s→t (morphism f) iff f∘λ_s = λ_t (cone) or λ_t∘f = λ_s (cocone).
    let ok = |legs: &[MorId]| {
        plan.checks[depth].iter().all(|&(s, t, f)| {
            if dual {
                cat.comp(legs[t], f) == legs[s]
            } else {
                cat.comp(f, legs[s]) == legs[t]
            }
        })
    };
    match plan.steps[depth] {
        Step::Free(node) => {
            let obj = d.nodes[node];
            let candidates = if dual { cat.hom(obj, apex) } else { cat.hom(apex, obj) };
            for &leg in candidates {
                legs[node] = leg;
                if ok(legs) && walk(cat, d, plan, apex, dual, depth + 1, legs, cap, visit)? {
                    return Ok(true);
                }
            }
            legs[node] = usize::MAX;
            Ok(false)
        }
        Step::Forced { node, from, mor } => {
            legs[node] = if dual { cat.comp(legs[from], mor) } else { cat.comp(mor, legs[from]) };
            let stop = ok(legs) && walk(cat, d, plan, apex, dual, depth + 1, legs, cap, visit)?;
            legs[node] = usize::MAX;
            Ok(stop)
        }
    }
}

/// A diagram with its per-object cone counts, ready for repeated universality tests.
pub struct Universal {
    pub diagram: Diagram,
    pub dual: bool,
    counts: Vec<usize>,
}

impl Universal {
    pub fn new(cat: &FinCategory, diagram: Diagram, dual: bool, meter: &Meter) -> Result<Self> {
        diagram.check(cat)?;
        meter.check_time()?;
        let mut counts = Vec::with_capacity(cat.num_objects());
        for b in cat.objects() {
            let mut cap = meter.budget.max_pairs;
            let mut c = 0usize;
            for_each_cone(cat, &diagram, b, dual, &mut cap, &mut |_| {
                c += 1;
                false
            })?;
            counts.push(c);
        }
        Ok(Universal { diagram, dual, counts })
    }

    pub fn for_construction(cat: &FinCategory, c: Construction, meter: &Meter) -> Result<Self> {
        if !c.well_formed(cat) {
            return Err(Error::Invalid(format!("ill-formed construction {c:?}")));
        }
        Universal::new(cat, c.diagram(cat), c.is_colimit(), meter)
    }

    /// Number of cones (cocones) with apex `b`.
    pub fn cone_count(&self, b: ObjId) -> usize {
        self.counts[b]
    }

    fn hom_to_apex<'c>(&self, cat: &'c FinCategory, b: ObjId, apex: ObjId) -> &'c [MorId] {
        if self.dual {
            cat.hom(apex, b)
        } else {
            cat.hom(b, apex)
        }
    }

    fn apex_plausible(&self, cat: &FinCategory, apex: ObjId) -> bool {
        cat.objects().all(|b| self.hom_to_apex(cat, b, apex).len() == self.counts[b])
    }

    /// Does the (co)cone commute with the diagram?
    pub fn commutes(&self, cat: &FinCategory, cone: &Cone) -> bool {
        if cone.legs.len() != self.diagram.nodes.len() {
            return false;
        }
        let typed = cone.legs.iter().zip(&self.diagram.nodes).all(|(&l, &o)| {
            if self.dual {
                cat.dom(l) == o && cat.cod(l) == cone.apex
            } else {
                cat.dom(l) == cone.apex && cat.cod(l) == o
            }
        });
        typed
            && self.diagram.arrows.iter().all(|&(s, t, f)| {
                if self.dual {
                    cat.comp(cone.legs[t], f) == cone.legs[s]
                } else {
                    cat.comp(f, cone.legs[s]) == cone.legs[t]
                }
            })
    }

    /// Decides whether a given (co)cone is universal.
    pub fn is_universal(&self, cat: &FinCategory, cone: &Cone) -> bool {
        self.commutes(cat, cone) && self.apex_plausible(cat, cone.apex) && self.injective_all(cat, cone)
    }

    fn injective_all(&self, cat: &FinCategory, cone: &Cone) -> bool {
        let mut seen: HashSet<Vec<MorId>> = HashSet::new();
        for b in cat.objects() {
            seen.clear();
            for &u in self.hom_to_apex(cat, b, cone.apex) {
                let tuple: Vec<MorId> =
                    cone.legs.iter().map(|&l| if self.dual { cat.comp(u, l) } else { cat.comp(l, u) }).collect();
                if !seen.insert(tuple) {
                    return false;
                }
            }
        }
        true
    }

    /// The unique mediating morphism from a competing (co)cone, if `cone` is universal.
    pub fn mediate(&self, cat: &FinCategory, cone: &Cone, other: &Cone) -> Option<MorId> {
        self.hom_to_apex(cat, other.apex, cone.apex).iter().copied().find(|&u| {
            cone.legs.iter().zip(&other.legs).all(
                |(&l, &o)| {
                    if self.dual {
                        cat.comp(u, l) == o
                    } else {
                        cat.comp(l, u) == o
                    }
                },
            )
        })
    }

    /// Searches apexes in id order and returns the first universal cone found
    /// (legs in hom-set order, so the lowest-id representative).
    pub fn search(&self, cat: &FinCategory, meter: &Meter) -> Result<Search<Cone>> {
        let mut examined = 0usize;
        for apex in cat.objects() {
            examined += 1;
            if examined > meter.budget.max_apexes {
                return Err(Error::OutOfBudget(format!("candidate apex cap {} reached", meter.budget.max_apexes)));
            }
            meter.check_time()?;
            if !self.apex_plausible(cat, apex) {
                continue;
            }
            let mut found = None;
            let mut cap = meter.budget.max_pairs;
            for_each_cone(cat, &self.diagram, apex, self.dual, &mut cap, &mut |legs| {
                let cone = Cone { apex, legs: legs.to_vec() };
                if self.injective_all(cat, &cone) {
                    found = Some(cone);
                    true
                } else {
                    false
                }
            })?;
            if let Some(c) = found {
                return Ok(Search::Found(c));
            }
        }
        Ok(Search::Absent)
    }
}

/// Limit of an arbitrary finite diagram.
pub fn limit(cat: &FinCategory, d: &Diagram, meter: &Meter) -> Result<Search<Cone>> {
    Universal::new(cat, d.clone(), false, meter)?.search(cat, meter)
}

/// Colimit of an arbitrary finite diagram.
pub fn colimit(cat: &FinCategory, d: &Diagram, meter: &Meter) -> Result<Search<Cone>> {
    Universal::new(cat, d.clone(), true, meter)?.search(cat, meter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::tests::arrow;

    #[test]
    fn arrow_category_limits() {
        let c = arrow();
        let m = Meter::unlimited();
        // terminal is b, initial is a
        assert_eq!(
            limit(&c, &Diagram::new(vec![], vec![]), &m).unwrap(),
            Search::Found(Cone { apex: 1, legs: vec![] })
        );
        assert_eq!(
            colimit(&c, &Diagram::new(vec![], vec![]), &m).unwrap(),
            Search::Found(Cone { apex: 0, legs: vec![] })
        );
        // a × b = a
        let p = limit(&c, &Diagram::new(vec![0, 1], vec![]), &m).unwrap().found().unwrap();
        assert_eq!(p, Cone { apex: 0, legs: vec![0, 2] });
        // b ⨿ b = b, a ⨿ b = b
        let s = colimit(&c, &Diagram::new(vec![0, 1], vec![]), &m).unwrap().found().unwrap();
        assert_eq!(s.apex, 1);
    }

    #[test]
    fn zero_apex_budget_is_inconclusive() {
        let c = arrow();
        let b = crate::Budget { max_apexes: 0, ..crate::Budget::default() };
        let err = limit(&c, &Diagram::new(vec![0], vec![]), &Meter::new(b)).unwrap_err();
        assert!(err.is_budget());
    }
}
