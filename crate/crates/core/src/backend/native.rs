//! Native constructions by algebra, and their cross-check against the
//! abstract universal-property solver.

use serde::Serialize;

use super::alg::{compose, image, Algebra, Map};
use super::{Backend, Materialized};
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::fincat::solver::{Cone, Construction};
use crate::fincat::{MorId, ObjId};

/// A (co)limit built by algebra: apex plus one leg per diagram node, in the
/// node order of [`Construction::diagram`].
#[derive(Clone, Debug)]
pub struct NativeCone {
    pub apex: Algebra,
    pub legs: Vec<Map>,
}

fn zero_map(from: &Algebra) -> Map {
    vec![0; from.size]
}

/// Builds a construction natively. `Ok(None)` means the backend has no finite
/// construction for it (free products).
pub fn native(m: &Materialized, c: Construction) -> Result<Option<NativeCone>> {
    use Construction::*;
    let cat = &m.cat;
    let obj = |o: ObjId| m.object(o);
    let map = |f: MorId| m.map(f);
    let cone = match c {
        Terminal | Initial => {
            let t = m
                .objects
                .iter()
                .find(|a| a.size == 1)
                .cloned()
                .ok_or_else(|| Error::Invalid("window lacks the trivial object".into()))?;
            NativeCone { apex: t, legs: vec![] }
        }
        Product(a, b) => {
            let (p, p0, p1) = obj(a).product(obj(b));
            NativeCone { apex: p, legs: vec![p0, p1] }
        }
        Coproduct(a, b) => {
            let (x, y) = (obj(a), obj(b));
            match m.backend {
                Backend::PointedSet => {
                    let (w, i0, i1) = x.wedge(y);
                    NativeCone { apex: w, legs: vec![i0, i1] }
                }
                Backend::AbGroup => {
                    let (p, _, _) = x.product(y);
                    let i0 = (0..x.size).map(|e| e * y.size).collect();
                    let i1 = (0..y.size).collect();
                    NativeCone { apex: p, legs: vec![i0, i1] }
                }
                _ if m.coproduct_is_free(a, b) => return Ok(None),
                _ => {
                    // one factor is trivial
                    if x.size == 1 {
                        NativeCone { apex: y.clone(), legs: vec![zero_map(x), (0..y.size).collect()] }
                    } else {
                        NativeCone { apex: x.clone(), legs: vec![(0..x.size).collect(), zero_map(y)] }
                    }
                }
            }
        }
        Equalizer(f, g) => {
            let x = obj(cat.dom(f));
            let inside: Vec<bool> = (0..x.size).map(|e| map(f)[e] == map(g)[e]).collect();
            let (e, incl) = x.sub(&inside);
            let leg1 = compose(map(f), &incl);
            NativeCone { apex: e, legs: vec![incl, leg1] }
        }
        Coequalizer(f, g) => {
            let y = obj(cat.cod(f));
            let pairs: Vec<(usize, usize)> = (0..obj(cat.dom(f)).size).map(|e| (map(f)[e], map(g)[e])).collect();
            let (q, proj) = y.quotient(&y.congruence(&pairs));
            let leg0 = compose(&proj, map(f));
            NativeCone { apex: q, legs: vec![leg0, proj] }
        }
        Pullback(f, g) => {
            let (x, y) = (obj(cat.dom(f)), obj(cat.dom(g)));
            let (p, p0, p1) = x.product(y);
            let inside: Vec<bool> = (0..p.size).map(|e| map(f)[p0[e]] == map(g)[p1[e]]).collect();
            let (pb, incl) = p.sub(&inside);
            let l0 = compose(&p0, &incl);
            let l1 = compose(&p1, &incl);
            let l2 = compose(map(f), &l0);
            NativeCone { apex: pb, legs: vec![l0, l1, l2] }
        }
        Pushout(f, g) => {
            let (x, y) = (obj(cat.cod(f)), obj(cat.cod(g)));
            let sum = match m.backend {
                Backend::PointedSet | Backend::AbGroup => native(m, Coproduct(cat.cod(f), cat.cod(g)))?,
                _ => None,
            };
            let Some(sum) = sum else { return Ok(None) };
            let z = obj(cat.dom(f));
            let pairs: Vec<(usize, usize)> =
                (0..z.size).map(|e| (sum.legs[0][map(f)[e]], sum.legs[1][map(g)[e]])).collect();
            let (q, proj) = sum.apex.quotient(&sum.apex.congruence(&pairs));
            let l0 = compose(&proj, &sum.legs[0]);
            let l1 = compose(&proj, &sum.legs[1]);
            let l2 = compose(&l0, map(f));
            let _ = (x, y);
            NativeCone { apex: q, legs: vec![l0, l1, l2] }
        }
    };
    Ok(Some(cone))
}

/// Native image factorization of `f`: `(image object, corestriction, inclusion)`.
pub fn native_image(m: &Materialized, f: MorId) -> (Algebra, Map, Map) {
    let cat = &m.cat;
    let (x, y) = (m.object(cat.dom(f)), m.object(cat.cod(f)));
    let mut inside = image(m.map(f), y.size);
    if let Some(marked) = &x.marked {
        // the image pair carries f(A)
        let (sub, incl) = y.sub(&inside);
        let fa: Vec<usize> = marked.iter().map(|&a| incl.iter().position(|&e| e == m.map(f)[a]).unwrap()).collect();
        let sub = sub.with_marked(fa);
        let e: Map = m.map(f).iter().map(|&v| incl.iter().position(|&e| e == v).unwrap()).collect();
        return (sub, e, incl);
    }
    inside[0] = true;
    let (sub, incl) = y.sub(&inside);
    let e: Map = m.map(f).iter().map(|&v| incl.iter().position(|&e| e == v).unwrap()).collect();
    (sub, e, incl)
}

/// Smallest substructure of `x` containing `s`, with its inclusion.
pub fn subobject_generated(x: &Algebra, s: &[usize]) -> (Algebra, Map) {
    x.sub(&x.closure(s))
}

/// Moves a native cone onto the window representative of its apex.
pub fn transfer(m: &Materialized, c: Construction, n: &NativeCone) -> Result<Option<Cone>> {
    let Some((rep, iso)) = m.locate(&n.apex) else {
        return Ok(None);
    };
    let inv = super::alg::invert(&iso);
    let d = c.diagram(&m.cat);
    let mut legs = Vec::with_capacity(n.legs.len());
    for (j, leg) in n.legs.iter().enumerate() {
        let node = d.nodes[j];
        let id = if c.is_colimit() {
            m.find_hom(node, rep, &compose(&iso, leg))
        } else {
            m.find_hom(rep, node, &compose(leg, &inv))
        };
        legs.push(id.ok_or_else(|| Error::Inconsistent(format!("native leg of {c:?} is not a window morphism")))?);
    }
    Ok(Some(Cone { apex: rep, legs }))
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct OracleTally {
    pub checked: usize,
    pub escaped: usize,
    pub not_native: usize,
    pub failures: Vec<String>,
}

impl OracleTally {
    fn absorb(&mut self, other: OracleTally) {
        self.checked += other.checked;
        self.escaped += other.escaped;
        self.not_native += other.not_native;
        self.failures.extend(other.failures);
    }
}

fn check_one(m: &Materialized, e: &Engine, c: Construction, tally: &mut OracleTally) -> Result<()> {
    let Some(n) = native(m, c)? else {
        tally.not_native += 1;
        return Ok(());
    };
    if n.apex.size > m.bound {
        tally.escaped += 1;
        return Ok(());
    }
    if !m.backend.admits(&n.apex) && n.apex.size > 1 {
        tally.failures.push(format!("{c:?}: native apex is not a {} object", m.backend));
        return Ok(());
    }
    tally.checked += 1;
    match transfer(m, c, &n)? {
        None => tally.failures.push(format!("{c:?}: native apex has no window representative")),
        Some(cone) => {
            if !e.is_universal(c, &cone)? {
                tally.failures.push(format!("{c:?}: native cone is not universal"));
            }
        }
    }
    Ok(())
}

/// Every native construction on objects of the window, checked by the solver.
pub fn verify_oracles(m: &Materialized, e: &Engine) -> Result<OracleTally> {
    let cat = &m.cat;
    let mut tally = OracleTally::default();
    check_one(m, e, Construction::Terminal, &mut tally)?;
    for a in cat.objects() {
        for b in cat.objects() {
            check_one(m, e, Construction::Product(a, b), &mut tally)?;
            check_one(m, e, Construction::Coproduct(a, b), &mut tally)?;
            let hom = cat.hom(a, b);
            for &f in hom {
                for &g in hom {
                    check_one(m, e, Construction::Equalizer(f, g), &mut tally)?;
                    check_one(m, e, Construction::Coequalizer(f, g), &mut tally)?;
                }
            }
        }
    }
    for f in cat.morphisms() {
        for g in cat.into_obj(cat.cod(f)) {
            check_one(m, e, Construction::Pullback(f, g), &mut tally)?;
        }
        let mut sub = OracleTally::default();
        check_kernel_cokernel_image(m, e, f, &mut sub)?;
        tally.absorb(sub);
    }
    Ok(tally)
}

fn check_kernel_cokernel_image(m: &Materialized, e: &Engine, f: MorId, tally: &mut OracleTally) -> Result<()> {
    let cat = &m.cat;
    let z = e.zero(cat.dom(f), cat.cod(f))?;
    check_one(m, e, Construction::Equalizer(f, z), tally)?;
    check_one(m, e, Construction::Coequalizer(f, z), tally)?;
    let (img, corestr, incl) = native_image(m, f);
    tally.checked += 1;
    let Some((rep, iso)) = m.locate(&img) else {
        tally.failures.push(format!("image of {}: no window representative", cat.mor_name(f)));
        return Ok(());
    };
    let inv = super::alg::invert(&iso);
    let ei = m.find_hom(cat.dom(f), rep, &compose(&iso, &corestr));
    let mi = m.find_hom(rep, cat.cod(f), &compose(&incl, &inv));
    match (ei, mi) {
        (Some(ei), Some(mi)) => {
            if cat.comp(mi, ei) != f || !e.is_mono(mi) || !e.is_regular_epi(ei)? {
                tally.failures.push(format!("image of {}: not a regular-epi/mono factorization", cat.mor_name(f)));
            }
        }
        _ => tally.failures.push(format!("image of {}: legs are not window morphisms", cat.mor_name(f))),
    }
    Ok(())
}

/// For every split epi with every section among the window objects: is the
/// domain generated by the kernel together with the image of the section?
/// Returns the number of split extensions checked and the counterexamples.
pub fn split_extensions_generated(m: &Materialized) -> (usize, Vec<(MorId, MorId)>) {
    let cat = &m.cat;
    let mut checked = 0;
    let mut bad = Vec::new();
    for p in cat.morphisms() {
        let (x, y) = (cat.dom(p), cat.cod(p));
        for &s in cat.hom(y, x) {
            if cat.comp(p, s) != cat.id(y) {
                continue;
            }
            checked += 1;
            let pm = m.map(p);
            let mut gens: Vec<usize> = (0..m.object(x).size).filter(|&a| pm[a] == 0).collect();
            gens.extend(m.map(s).iter().copied());
            let (sub, _) = subobject_generated(m.object(x), &gens);
            if sub.size != m.object(x).size {
                bad.push((p, s));
            }
        }
    }
    (checked, bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Budget;

    #[test]
    fn kernel_of_sign_is_a3() {
        let m = Materialized::new(Backend::Group, 6, true).unwrap();
        let s3 = m.cat.find_object("S3").unwrap();
        let z2 = m.cat.find_object("Z/2").unwrap();
        let sign = m.cat.hom(s3, z2).iter().copied().find(|&f| m.map(f).iter().any(|&v| v != 0)).unwrap();
        let e = Engine::new(&m.cat, Budget::default()).with_ambient(&m);
        let z = e.zero(s3, z2).unwrap();
        let n = native(&m, Construction::Equalizer(sign, z)).unwrap().unwrap();
        assert_eq!(n.apex.size, 3);
        let k = e.kernel(sign).unwrap().unwrap();
        assert_eq!(m.cat.obj_name(m.cat.dom(k)), "Z/3");
    }

    #[test]
    fn coequalizer_of_equal_pair_is_iso() {
        let m = Materialized::new(Backend::AbGroup, 4, true).unwrap();
        let e = Engine::new(&m.cat, Budget::default()).with_ambient(&m);
        for f in m.cat.morphisms() {
            let n = native(&m, Construction::Coequalizer(f, f)).unwrap().unwrap();
            let cone = transfer(&m, Construction::Coequalizer(f, f), &n).unwrap().unwrap();
            assert!(e.is_iso(cone.legs[1]));
        }
    }

    #[test]
    fn subobject_generated_examples() {
        let s3 = Algebra::s3();
        assert_eq!(subobject_generated(&s3, &[0, 1, 2, 3]).0.size, 6);
        let (v, _, _) = Algebra::cyclic(2).product(&Algebra::cyclic(2));
        let (sub, incl) = subobject_generated(&v, &[2]);
        assert_eq!((sub.size, incl), (2, vec![0, 2]));
        assert_eq!(subobject_generated(&v, &[0, 1, 2, 3]).0.size, 4);
    }

    #[test]
    fn group_pair_cokernel_marks_the_image() {
        // (Z/2,Z/2) → (Z/2×Z/2, Z/2×Z/2), x ↦ (x,0): quotient pair is (Z/2, Z/2)
        let z2 = Algebra::cyclic(2).with_marked(vec![0, 1]);
        let (v, _, _) = Algebra::cyclic(2).product(&Algebra::cyclic(2));
        let v = v.with_marked(vec![0, 1, 2, 3]);
        let objs = vec![
            ("0".to_string(), Algebra::trivial_group().with_marked(vec![0])),
            ("A".to_string(), z2),
            ("B".to_string(), v),
        ];
        let m = Materialized::from_objects(Backend::GroupPair, 4, objs, false, true).unwrap();
        let (a, b) = (1, 2);
        let f = m.find_hom(a, b, &[0, 2]).unwrap();
        let e = Engine::new(&m.cat, Budget::default());
        let z = e.zero(a, b).unwrap();
        let n = native(&m, Construction::Coequalizer(f, z)).unwrap().unwrap();
        assert_eq!(n.apex.size, 2);
        assert_eq!(n.apex.marked, Some(vec![0, 1]));
        let cone = transfer(&m, Construction::Coequalizer(f, z), &n).unwrap().unwrap();
        assert!(e.is_universal(Construction::Coequalizer(f, z), &cone).unwrap());
    }
}
