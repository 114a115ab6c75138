//! Finite categories as explicit composition tables.
//!
//! A [`FinCategory`] is immutable once built. Hom-sets are indexed by
//! `(dom, cod)` and composition is a dense table keyed by `(g, f)`, so
//! enumerating parallel pairs or post-composites is a slice walk.

mod format;
pub mod solver;

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

pub use format::{parse_category, print_category, RolesSection};

pub type ObjId = usize;
pub type MorId = usize;

const NONE: u32 = u32::MAX;

#[derive(Clone, PartialEq, Eq)]
pub struct FinCategory {
    obj_names: Vec<String>,
    mor_names: Vec<String>,
    dom: Vec<ObjId>,
    cod: Vec<ObjId>,
    ident: Vec<MorId>,
    comp: Vec<u32>,
    homs: Vec<Vec<MorId>>,
}

impl fmt::Debug for FinCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinCategory({} objects, {} morphisms)", self.num_objects(), self.num_morphisms())
    }
}

/// A morphism together with the category it lives in.
#[derive(Clone, Copy, Debug)]
pub struct MorRef<'a> {
    pub cat: &'a FinCategory,
    pub id: MorId,
    pub dom: ObjId,
    pub cod: ObjId,
}

impl<'a> MorRef<'a> {
    pub fn name(&self) -> &'a str {
        self.cat.mor_name(self.id)
    }
}

/// Unvalidated category data. Each entry may carry the source line it came
/// from so that invariant violations can be reported against the input.
#[derive(Clone, Debug, Default)]
pub struct RawCategory {
    pub objects: Vec<(String, usize)>,
    pub morphisms: Vec<(String, ObjId, ObjId, usize)>,
    pub identities: Vec<(ObjId, MorId, usize)>,
    pub composition: Vec<(MorId, MorId, MorId, usize)>,
}

impl RawCategory {
    /// Validates every category axiom exhaustively and builds the table.
    /// Compositions with an identity may be omitted; they are filled in.
    pub fn build(self) -> Result<FinCategory> {
        let n = self.objects.len();
        let m = self.morphisms.len();
        if m >= NONE as usize {
            return Err(Error::Invalid("too many morphisms".into()));
        }
        let obj_names: Vec<String> = self.objects.iter().map(|o| o.0.clone()).collect();
        let mut dom = Vec::with_capacity(m);
        let mut cod = Vec::with_capacity(m);
        let mut mor_names = Vec::with_capacity(m);
        for (name, d, c, line) in &self.morphisms {
            if *d >= n || *c >= n {
                return Err(Error::parse(*line, format!("morphism {name}: unknown object")));
            }
            mor_names.push(name.clone());
            dom.push(*d);
            cod.push(*c);
        }
        let mut ident = vec![usize::MAX; n];
        for (o, f, line) in &self.identities {
            if *o >= n || *f >= m {
                return Err(Error::parse(*line, "identity refers to unknown id"));
            }
            if dom[*f] != *o || cod[*f] != *o {
                return Err(Error::parse(
                    *line,
                    format!("identity {} is not an endomorphism of {}", mor_names[*f], obj_names[*o]),
                ));
            }
            if ident[*o] != usize::MAX {
                return Err(Error::parse(*line, format!("second identity for {}", obj_names[*o])));
            }
            ident[*o] = *f;
        }
        if let Some(o) = ident.iter().position(|&i| i == usize::MAX) {
            return Err(Error::parse(0, format!("object {} has no identity", obj_names[o])));
        }

        let mut comp = vec![NONE; m * m];
        let mut lines = vec![0usize; m * m];
        for (g, f, gf, line) in &self.composition {
            if *g >= m || *f >= m || *gf >= m {
                return Err(Error::parse(*line, "composition refers to unknown morphism"));
            }
            if cod[*f] != dom[*g] {
                return Err(Error::parse(*line, format!("{} and {} are not composable", mor_names[*g], mor_names[*f])));
            }
            if dom[*gf] != dom[*f] || cod[*gf] != cod[*g] {
                return Err(Error::parse(
                    *line,
                    format!("{} does not lie in the hom-set of the composite", mor_names[*gf]),
                ));
            }
            let slot = g * m + f;
            if comp[slot] != NONE && comp[slot] as usize != *gf {
                return Err(Error::parse(*line, "conflicting composition entry"));
            }
            comp[slot] = *gf as u32;
            lines[slot] = *line;
        }
        for f in 0..m {
            for (slot, expect) in [(ident[cod[f]] * m + f, f), (f * m + ident[dom[f]], f)] {
                if comp[slot] == NONE {
                    comp[slot] = expect as u32;
                } else if comp[slot] as usize != expect {
                    return Err(Error::parse(lines[slot], format!("identity law fails for {}", mor_names[f])));
                }
            }
        }

        let mut homs = vec![Vec::new(); n * n];
        for f in 0..m {
            homs[dom[f] * n + cod[f]].push(f);
        }
        let cat = FinCategory { obj_names, mor_names, dom, cod, ident, comp, homs };

        for g in 0..m {
            for f in cat.into_obj(cat.dom[g]) {
                if cat.comp[g * m + f] == NONE {
                    return Err(Error::parse(
                        0,
                        format!("composition of {} after {} is missing", cat.mor_names[g], cat.mor_names[f]),
                    ));
                }
            }
        }
        cat.check_associativity().map_err(|(h, g, f)| {
            let line = lines[h * m + g].max(lines[g * m + f]);
            Error::parse(
                line,
                format!("associativity fails for ({}, {}, {})", cat.mor_names[h], cat.mor_names[g], cat.mor_names[f]),
            )
        })?;
        Ok(cat)
    }
}

impl FinCategory {
    /// Builds a category from trusted data (e.g. composition of concrete
    /// maps). Associativity is not re-checked; use [`FinCategory::validate`].
    pub fn from_parts(
        obj_names: Vec<String>,
        morphisms: Vec<(String, ObjId, ObjId)>,
        ident: Vec<MorId>,
        compose: impl Fn(MorId, MorId) -> MorId,
    ) -> Self {
        let n = obj_names.len();
        let m = morphisms.len();
        let mut dom = Vec::with_capacity(m);
        let mut cod = Vec::with_capacity(m);
        let mut mor_names = Vec::with_capacity(m);
        for (name, d, c) in morphisms {
            mor_names.push(name);
            dom.push(d);
            cod.push(c);
        }
        let mut homs = vec![Vec::new(); n * n];
        for f in 0..m {
            homs[dom[f] * n + cod[f]].push(f);
        }
        let mut comp = vec![NONE; m * m];
        for g in 0..m {
            for a in 0..n {
                for &f in &homs[a * n + dom[g]] {
                    comp[g * m + f] = compose(g, f) as u32;
                }
            }
        }
        FinCategory { obj_names, mor_names, dom, cod, ident, comp, homs }
    }

    /// Re-checks identity laws, typing and associativity.
    pub fn validate(&self) -> Result<()> {
        let m = self.num_morphisms();
        for g in 0..m {
            for f in self.into_obj(self.dom[g]) {
                let gf = self.comp[g * m + f];
                if gf == NONE {
                    return Err(Error::Invalid(format!("missing composite {} . {}", g, f)));
                }
                let gf = gf as usize;
                if self.dom[gf] != self.dom[f] || self.cod[gf] != self.cod[g] {
                    return Err(Error::Invalid(format!("ill-typed composite {} . {}", g, f)));
                }
            }
        }
        for f in 0..m {
            if self.comp(self.ident[self.cod[f]], f) != f || self.comp(f, self.ident[self.dom[f]]) != f {
                return Err(Error::Invalid(format!("identity law fails at {}", self.mor_names[f])));
            }
        }
        self.check_associativity()
            .map_err(|(h, g, f)| Error::Invalid(format!("associativity fails at ({h}, {g}, {f})")))
    }

    fn check_associativity(&self) -> std::result::Result<(), (MorId, MorId, MorId)> {
        let m = self.num_morphisms();
        for g in 0..m {
            let ins = self.into_obj(self.dom[g]);
            let outs = self.out_of(self.cod[g]);
            for &f in &ins {
                let gf = self.comp[g * m + f] as usize;
                for &h in &outs {
                    let hg = self.comp[h * m + g] as usize;
                    if self.comp[h * m + gf] != self.comp[hg * m + f] {
                        return Err((h, g, f));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn num_objects(&self) -> usize {
        self.obj_names.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.dom.len()
    }

    pub fn objects(&self) -> std::ops::Range<ObjId> {
        0..self.num_objects()
    }

    pub fn morphisms(&self) -> std::ops::Range<MorId> {
        0..self.num_morphisms()
    }

    pub fn obj_name(&self, o: ObjId) -> &str {
        &self.obj_names[o]
    }

    pub fn mor_name(&self, f: MorId) -> &str {
        &self.mor_names[f]
    }

    pub fn find_object(&self, name: &str) -> Option<ObjId> {
        self.obj_names.iter().position(|n| n == name)
    }

    pub fn find_morphism(&self, name: &str) -> Option<MorId> {
        self.mor_names.iter().position(|n| n == name)
    }

    pub fn dom(&self, f: MorId) -> ObjId {
        self.dom[f]
    }

    pub fn cod(&self, f: MorId) -> ObjId {
        self.cod[f]
    }

    pub fn id(&self, o: ObjId) -> MorId {
        self.ident[o]
    }

    pub fn is_identity(&self, f: MorId) -> bool {
        self.ident[self.dom[f]] == f
    }

    pub fn mor(&self, f: MorId) -> Result<MorRef<'_>> {
        if f >= self.num_morphisms() {
            return Err(Error::Invalid(format!("no morphism with id {f}")));
        }
        Ok(MorRef { cat: self, id: f, dom: self.dom[f], cod: self.cod[f] })
    }

    /// `g ∘ f`. Panics if the pair is not composable.
    pub fn comp(&self, g: MorId, f: MorId) -> MorId {
        let v = self.comp[g * self.num_morphisms() + f];
        assert!(v != NONE, "composing non-composable pair ({g}, {f})");
        v as usize
    }

    pub fn try_comp(&self, g: MorId, f: MorId) -> Option<MorId> {
        if self.cod[f] != self.dom[g] {
            return None;
        }
        Some(self.comp(g, f))
    }

    /// Composes a path given in diagrammatic-reverse order: `chain(&[h, g, f]) = h ∘ g ∘ f`.
    pub fn chain(&self, path: &[MorId]) -> MorId {
        let (last, rest) = path.split_last().expect("empty path");
        rest.iter().rev().fold(*last, |acc, &g| self.comp(g, acc))
    }

    pub fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        &self.homs[a * self.num_objects() + b]
    }

    /// All morphisms with domain `a`, grouped by codomain in id order.
    pub fn out_of(&self, a: ObjId) -> Vec<MorId> {
        self.objects().flat_map(|b| self.hom(a, b).iter().copied()).collect()
    }

    /// All morphisms with codomain `b`, grouped by domain in id order.
    pub fn into_obj(&self, b: ObjId) -> Vec<MorId> {
        self.objects().flat_map(|a| self.hom(a, b).iter().copied()).collect()
    }

    /// The full subcategory on `objs` (kept in the given order), together with
    /// the map from new morphism ids to old ones.
    pub fn full_subcategory(&self, objs: &[ObjId]) -> (FinCategory, Vec<MorId>) {
        let mut back = Vec::new();
        let mut fwd: HashMap<MorId, MorId> = HashMap::new();
        let mut morphisms = Vec::new();
        for (i, &a) in objs.iter().enumerate() {
            for (j, &b) in objs.iter().enumerate() {
                for &f in self.hom(a, b) {
                    fwd.insert(f, back.len());
                    back.push(f);
                    morphisms.push((self.mor_names[f].clone(), i, j));
                }
            }
        }
        let names = objs.iter().map(|&o| self.obj_names[o].clone()).collect();
        let ident = objs.iter().map(|&o| fwd[&self.ident[o]]).collect();
        let sub = FinCategory::from_parts(names, morphisms, ident, |g, f| fwd[&self.comp(back[g], back[f])]);
        (sub, back)
    }

    /// Renames morphisms in place; names must stay unique.
    pub fn with_morphism_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.num_morphisms());
        self.mor_names = names;
        self
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// The walking arrow `a -> b`.
    pub(crate) fn arrow() -> FinCategory {
        let raw = RawCategory {
            objects: vec![("a".into(), 0), ("b".into(), 0)],
            morphisms: vec![("1a".into(), 0, 0, 0), ("1b".into(), 1, 1, 0), ("f".into(), 0, 1, 0)],
            identities: vec![(0, 0, 0), (1, 1, 0)],
            composition: vec![],
        };
        raw.build().unwrap()
    }

    #[test]
    fn identities_are_filled_in() {
        let c = arrow();
        assert_eq!(c.comp(1, 2), 2);
        assert_eq!(c.comp(2, 0), 2);
        assert_eq!(c.hom(0, 1), &[2]);
        assert!(c.hom(1, 0).is_empty());
        c.validate().unwrap();
    }

    #[test]
    fn rejects_missing_identity() {
        let raw = RawCategory {
            objects: vec![("a".into(), 1)],
            morphisms: vec![("f".into(), 0, 0, 3)],
            identities: vec![],
            composition: vec![(0, 0, 0, 5)],
        };
        assert!(raw.build().is_err());
    }

    #[test]
    fn rejects_idempotent_without_closure() {
        // e∘e missing
        let raw = RawCategory {
            objects: vec![("a".into(), 1)],
            morphisms: vec![("1".into(), 0, 0, 2), ("e".into(), 0, 0, 3)],
            identities: vec![(0, 0, 4)],
            composition: vec![],
        };
        let err = raw.build().unwrap_err();
        assert!(err.to_string().contains("missing"), "{err}");
    }

    #[test]
    fn full_subcategory_keeps_composition() {
        let c = arrow();
        let (sub, back) = c.full_subcategory(&[1]);
        assert_eq!(sub.num_morphisms(), 1);
        assert_eq!(back, vec![1]);
        sub.validate().unwrap();
    }
}
