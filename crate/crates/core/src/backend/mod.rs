//! Concrete finite algebraic categories and their materialization into
//! [`FinCategory`] tables.

pub mod alg;
pub mod enumerate;
pub mod format;
pub mod native;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::engine::{Ambient, Outside};
use crate::error::{Error, Result};
use crate::fincat::solver::Construction;
use crate::fincat::{FinCategory, MorId, ObjId};
use alg::{compose, Algebra, Map};

const HOM_CAP: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Backend {
    PointedSet,
    Monoid,
    Group,
    AbGroup,
    GroupPair,
}

impl Backend {
    pub const ALL: [Backend; 5] =
        [Backend::PointedSet, Backend::Monoid, Backend::Group, Backend::AbGroup, Backend::GroupPair];

    pub fn key(&self) -> &'static str {
        match self {
            Backend::PointedSet => "finptset",
            Backend::Monoid => "finmon",
            Backend::Group => "fingrp",
            Backend::AbGroup => "finab",
            Backend::GroupPair => "grppair",
        }
    }

    /// Largest bound this backend can enumerate.
    pub fn max_bound(&self) -> usize {
        match self {
            Backend::PointedSet => 6,
            Backend::Monoid => 4,
            Backend::Group | Backend::AbGroup | Backend::GroupPair => 8,
        }
    }

    pub fn admits(&self, a: &Algebra) -> bool {
        match self {
            Backend::PointedSet => !a.has_op() && a.marked.is_none(),
            Backend::Monoid => a.is_monoid() && a.marked.is_none(),
            Backend::Group => a.is_group() && a.marked.is_none(),
            Backend::AbGroup => a.is_group() && a.is_commutative() && a.marked.is_none(),
            Backend::GroupPair => a.is_group() && pair_is_valid(a),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Backend::ALL
            .iter()
            .copied()
            .find(|b| b.key() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown backend `{s}`")))
    }
}

/// `G′ ⊆ A ⊆ Z(G)`, which forces nilpotency class at most two.
pub fn pair_is_valid(a: &Algebra) -> bool {
    let Some(marked) = &a.marked else { return false };
    let closed = alg::members(&a.closure(marked)) == *marked;
    let center = a.center();
    closed
        && a.nilpotent_class_at_most_two()
        && a.derived_subgroup().iter().all(|x| marked.contains(x))
        && marked.iter().all(|x| center.contains(x))
}

/// Sort key putting cyclic groups first within an order, then by name.
fn group_key(g: &Algebra, name: &str) -> (usize, bool, bool, String) {
    let cyclic = (0..g.size).any(|a| g.element_order(a) == g.size);
    (g.size, !cyclic, !g.is_commutative(), name.to_string())
}

fn dedupe_names(names: &mut [String]) {
    let mut seen: HashMap<String, usize> = HashMap::new();
    for n in names.iter() {
        *seen.entry(n.clone()).or_default() += 1;
    }
    let mut counter: HashMap<String, usize> = HashMap::new();
    for n in names.iter_mut() {
        if seen[n.as_str()] > 1 {
            let k = counter.entry(n.clone()).or_default();
            *n = format!("{n}#{k}");
            *k += 1;
        }
    }
}

/// All backend objects of size ≤ `bound`, one per iso class when `skeletal`,
/// otherwise every labelled table.
pub fn objects_up_to(backend: Backend, bound: usize, skeletal: bool) -> Result<Vec<(String, Algebra)>> {
    if bound == 0 || bound > backend.max_bound() {
        return Err(Error::Invalid(format!("bound {bound} outside 1..={} for {backend}", backend.max_bound())));
    }
    let mut out: Vec<(String, Algebra)> = Vec::new();
    match backend {
        Backend::PointedSet => {
            for n in 1..=bound {
                out.push((format!("P{n}"), Algebra::pointed_set(n)));
            }
        }
        Backend::Group | Backend::AbGroup => {
            for n in 1..=bound {
                let tables =
                    if skeletal { enumerate::groups_of_order(n)? } else { enumerate::all_tables(n, true, 50_000_000)? };
                let mut batch: Vec<(String, Algebra)> = tables
                    .into_iter()
                    .filter(|g| backend == Backend::Group || g.is_commutative())
                    .map(|g| (enumerate::group_name(&g), g))
                    .collect();
                batch.sort_by_key(|(name, g)| group_key(g, name));
                out.extend(batch);
            }
        }
        Backend::Monoid => {
            for n in 1..=bound {
                let tables = if skeletal {
                    enumerate::monoids_of_order(n)?
                } else {
                    enumerate::all_tables(n, false, 50_000_000)?
                };
                for (k, m) in tables.into_iter().enumerate() {
                    let name = if n == 1 { "1".to_string() } else { format!("M{n}.{k}") };
                    out.push((name, m));
                }
            }
        }
        Backend::GroupPair => {
            for (gname, g) in objects_up_to(Backend::Group, bound, true)? {
                if !g.nilpotent_class_at_most_two() {
                    continue;
                }
                let derived = g.derived_subgroup();
                let center = g.center();
                let mut reps: Vec<Algebra> = Vec::new();
                for a in enumerate::subgroups(&g) {
                    if !derived.iter().all(|x| a.contains(x)) || !a.iter().all(|x| center.contains(x)) {
                        continue;
                    }
                    let pair = g.clone().with_marked(a);
                    if skeletal && reps.iter().any(|r| r.is_isomorphic(&pair)) {
                        continue;
                    }
                    reps.push(pair);
                }
                for pair in reps {
                    let marked = pair.marked.clone().unwrap();
                    let mut inside = vec![false; pair.size];
                    marked.iter().for_each(|&x| inside[x] = true);
                    let (sub, _) = g.sub(&inside);
                    let aname = enumerate::group_name(&sub);
                    out.push((format!("({gname},{aname})"), pair));
                }
            }
        }
    }
    let mut names: Vec<String> = out.iter().map(|(n, _)| n.clone()).collect();
    dedupe_names(&mut names);
    Ok(names.into_iter().zip(out.into_iter().map(|(_, a)| a)).collect())
}

/// A finite full subcategory of a backend, with the concrete data behind each id.
#[derive(Clone, Debug)]
pub struct Materialized {
    pub backend: Backend,
    pub bound: usize,
    pub skeletal: bool,
    /// Whether every iso class of size ≤ bound is present.
    pub complete: bool,
    pub names: Vec<String>,
    pub objects: Vec<Algebra>,
    pub maps: Vec<Map>,
    pub cat: FinCategory,
    index: HashMap<(ObjId, ObjId, Map), MorId>,
}

impl Materialized {
    pub fn new(backend: Backend, bound: usize, skeletal: bool) -> Result<Self> {
        let objs = objects_up_to(backend, bound, skeletal)?;
        Self::from_objects(backend, bound, objs, true, skeletal)
    }

    /// Full subcategory on an explicit object list (e.g. from an algebra file).
    pub fn from_objects(
        backend: Backend,
        bound: usize,
        objs: Vec<(String, Algebra)>,
        complete: bool,
        skeletal: bool,
    ) -> Result<Self> {
        for (name, a) in &objs {
            if !backend.admits(a) {
                return Err(Error::Invalid(format!("{name} is not a valid {backend} object")));
            }
        }
        let (names, objects): (Vec<String>, Vec<Algebra>) = objs.into_iter().unzip();
        let n = objects.len();
        let mut morphisms = Vec::new();
        let mut maps = Vec::new();
        let mut index = HashMap::new();
        for a in 0..n {
            for b in 0..n {
                for (k, h) in objects[a].homs(&objects[b], HOM_CAP)?.into_iter().enumerate() {
                    index.insert((a, b, h.clone()), maps.len());
                    morphisms.push((format!("{}->{}#{k}", names[a], names[b]), a, b));
                    maps.push(h);
                }
            }
        }
        let ident: Vec<MorId> = (0..n).map(|a| index[&(a, a, (0..objects[a].size).collect::<Map>())]).collect();
        let cat = FinCategory::from_parts(names.clone(), morphisms.clone(), ident, |g, f| {
            let key = (morphisms[f].1, morphisms[g].2, compose(&maps[g], &maps[f]));
            index[&key]
        });
        Ok(Materialized { backend, bound, skeletal, complete, names, objects, maps, cat, index })
    }

    /// The window spanned by an algebra file. If the file has pair entries,
    /// its plain groups only serve as references and the window is the pairs.
    pub fn from_algebra_file(file: &format::AlgebraFile) -> Result<Self> {
        use format::AlgebraKind as K;
        let pairs = file.entries.iter().any(|e| matches!(e.kind, K::GroupPair { .. }));
        let chosen: Vec<&format::AlgebraEntry> =
            file.entries.iter().filter(|e| !pairs || matches!(e.kind, K::GroupPair { .. })).collect();
        let Some(first) = chosen.first() else {
            return Err(Error::Invalid("algebra file has no entries".into()));
        };
        if chosen.iter().any(|e| std::mem::discriminant(&e.kind) != std::mem::discriminant(&first.kind)) {
            return Err(Error::Invalid("algebra file mixes kinds of structure".into()));
        }
        let backend = match first.kind {
            K::Group => Backend::Group,
            K::Monoid => Backend::Monoid,
            K::PointedSet => Backend::PointedSet,
            K::GroupPair { .. } => Backend::GroupPair,
        };
        let bound = chosen.iter().map(|e| e.algebra.size).max().unwrap_or(1);
        let objs = chosen.iter().map(|e| (e.name.clone(), e.algebra.clone())).collect();
        Self::from_objects(backend, bound, objs, false, false)
    }

    pub fn object(&self, o: ObjId) -> &Algebra {
        &self.objects[o]
    }

    pub fn map(&self, f: MorId) -> &Map {
        &self.maps[f]
    }

    pub fn find_hom(&self, dom: ObjId, cod: ObjId, map: &[usize]) -> Option<MorId> {
        self.index.get(&(dom, cod, map.to_vec())).copied()
    }

    /// A window object isomorphic to `a`, with an isomorphism `a → rep`.
    pub fn locate(&self, a: &Algebra) -> Option<(ObjId, Map)> {
        self.objects.iter().enumerate().find_map(|(o, r)| a.isomorphism(r).map(|iso| (o, iso)))
    }

    pub fn label(&self) -> String {
        format!("{}(bound {}{})", self.backend, self.bound, if self.skeletal { "" } else { ", labelled" })
    }

    fn is_trivial(&self, o: ObjId) -> bool {
        self.objects[o].size == 1
    }
}

impl Ambient for Materialized {
    fn outside(&self, _cat: &FinCategory, c: &Construction) -> Outside {
        if !self.complete {
            return Outside::Unknown(format!(
                "{} is an explicit object list; absence of {c:?} is not conclusive",
                self.label()
            ));
        }
        let size = match native::native(self, *c) {
            Ok(Some(n)) => n.apex.size,
            Ok(None) => {
                return Outside::Unknown(format!("{c:?} has no finite native construction in {}", self.backend))
            }
            Err(e) => return Outside::Unknown(e.to_string()),
        };
        if size > self.bound {
            Outside::Escapes
        } else {
            Outside::Absent
        }
    }
}

impl Materialized {
    /// Coproducts the backend cannot build natively: free products of non-trivial factors.
    pub(crate) fn coproduct_is_free(&self, a: ObjId, b: ObjId) -> bool {
        matches!(self.backend, Backend::Group | Backend::Monoid | Backend::GroupPair)
            && !self.is_trivial(a)
            && !self.is_trivial(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(b: Backend, bound: usize) -> Vec<String> {
        objects_up_to(b, bound, true).unwrap().into_iter().map(|(n, _)| n).collect()
    }

    #[test]
    fn skeletal_windows() {
        assert_eq!(names(Backend::AbGroup, 4), vec!["0", "Z/2", "Z/3", "Z/4", "Z/2xZ/2"]);
        assert_eq!(names(Backend::Group, 6), vec!["0", "Z/2", "Z/3", "Z/4", "Z/2xZ/2", "Z/5", "Z/6", "S3"]);
        assert_eq!(names(Backend::PointedSet, 3), vec!["P1", "P2", "P3"]);
        assert_eq!(names(Backend::Monoid, 3).len(), 10);
        assert_eq!(names(Backend::GroupPair, 2), vec!["(0,0)", "(Z/2,0)", "(Z/2,Z/2)"]);
    }

    #[test]
    fn pointed_set_bound_one() {
        let m = Materialized::new(Backend::PointedSet, 1, true).unwrap();
        assert_eq!(m.cat.num_objects(), 1);
        assert_eq!(m.cat.num_morphisms(), 1);
    }

    #[test]
    fn materialized_tables_are_categories() {
        for b in Backend::ALL {
            let m = Materialized::new(b, 3, true).unwrap();
            m.cat.validate().unwrap();
        }
    }

    #[test]
    fn hom_counts_invariant_under_relabelling() {
        let labelled = Materialized::new(Backend::Group, 4, false).unwrap();
        let skeletal = Materialized::new(Backend::Group, 4, true).unwrap();
        for a in labelled.cat.objects() {
            for b in labelled.cat.objects() {
                let (ra, _) = skeletal.locate(labelled.object(a)).unwrap();
                let (rb, _) = skeletal.locate(labelled.object(b)).unwrap();
                assert_eq!(labelled.cat.hom(a, b).len(), skeletal.cat.hom(ra, rb).len());
            }
        }
    }

    #[test]
    fn rejects_out_of_range_bound() {
        assert!(Materialized::new(Backend::Monoid, 5, true).is_err());
    }
}
