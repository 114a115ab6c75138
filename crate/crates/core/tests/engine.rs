use catcheck_core::backend::{Backend, Materialized};
use catcheck_core::fincat::parse_category;
use catcheck_core::{Budget, Construction, Engine, Lookup, MorId, ObjId};

fn window(b: Backend, n: usize) -> Materialized {
    Materialized::new(b, n, true).unwrap()
}

fn engine(m: &Materialized) -> Engine<'_> {
    Engine::new(&m.cat, Budget::default()).with_ambient(m)
}

/// Objects by carrier size and predicate.
fn obj(m: &Materialized, size: usize, pred: impl Fn(&catcheck_core::backend::alg::Algebra) -> bool) -> ObjId {
    m.cat.objects().find(|&o| m.object(o).size == size && pred(m.object(o))).unwrap()
}

fn cyclic(m: &Materialized, n: usize) -> ObjId {
    obj(m, n, |a| (0..n).any(|x| a.element_order(x) == n))
}

fn nonzero(e: &Engine, a: ObjId, b: ObjId) -> Vec<MorId> {
    e.cat().hom(a, b).iter().copied().filter(|&f| !e.is_zero_mor(f).unwrap()).collect()
}

fn image_size(map: &[usize]) -> usize {
    map.iter().collect::<std::collections::BTreeSet<_>>().len()
}

fn size(m: &Materialized, o: ObjId) -> usize {
    m.object(o).size
}

#[test]
fn pointed_collapse_is_not_mono() {
    let m = window(Backend::PointedSet, 3);
    let e = engine(&m);
    let (p3, p2) = (obj(&m, 3, |_| true), obj(&m, 2, |_| true));
    let f = m.find_hom(p3, p2, &[0, 1, 1]).unwrap();
    let (u, v) = e.mono_witness(f).unwrap();
    assert_ne!(u, v);
    assert_eq!(m.cat.comp(f, u), m.cat.comp(f, v));
    assert!(e.is_mono(m.cat.id(p3)));
}

#[test]
fn alternating_subgroup_inclusion_is_mono_and_a_kernel() {
    let m = window(Backend::Group, 6);
    let e = engine(&m);
    let s3 = obj(&m, 6, |a| !a.is_commutative());
    let (z2, z3) = (cyclic(&m, 2), cyclic(&m, 3));
    let sign = nonzero(&e, s3, z2);
    assert_eq!(sign.len(), 1);
    assert_eq!(m.cat.hom(s3, z2).len(), 2);
    let k = e.kernel(sign[0]).unwrap().unwrap();
    assert_eq!(size(&m, m.cat.dom(k)), 3);
    assert!(e.is_mono(k));
    let incl = nonzero(&e, z3, s3)[0];
    assert!(e.is_mono(incl) && e.is_kernel_of(incl, sign[0]).unwrap());
    // kernel and a section of the sign generate S3
    let s = nonzero(&e, z2, s3).into_iter().find(|&s| m.cat.comp(sign[0], s) == m.cat.id(z2)).unwrap();
    assert!(e.is_strongly_epimorphic_family(&[incl, s]));
    assert!(!e.is_epi(incl));
}

#[test]
fn cyclic_quotient_is_a_regular_epi() {
    let m = window(Backend::AbGroup, 4);
    let e = engine(&m);
    let (z4, z2) = (cyclic(&m, 4), cyclic(&m, 2));
    let q = nonzero(&e, z4, z2)[0];
    assert!(e.is_epi(q) && e.is_strong_epi(q) && e.is_regular_epi(q).unwrap());
    assert_eq!(e.regular_epi_via_kernel_pair(q).unwrap(), None, "kernel pair has order 8");
    let i = nonzero(&e, z2, z4)[0];
    assert!(e.is_cokernel_of(q, i).unwrap());
    assert!(e.is_cokernel_epi(q).unwrap());
    assert!(e.is_epimorphic_family(&[
        e.zero(m.cat.objects().find(|&o| e.is_zero_obj(o)).unwrap(), z4).unwrap(),
        m.cat.id(z4)
    ]));
    // cokernel of doubling on Z/4
    let double = m.cat.hom(z4, z4).iter().copied().find(|&f| image_size(m.map(f)) == 2).unwrap();
    let c = e.cokernel(double).unwrap().unwrap();
    assert_eq!(size(&m, m.cat.cod(c)), 2);
}

#[test]
fn kernel_pairs_live_at_bound_eight() {
    let m = window(Backend::AbGroup, 8);
    let e = engine(&m);
    let (z4, z2) = (cyclic(&m, 4), cyclic(&m, 2));
    let q = nonzero(&e, z4, z2)[0];
    let kp = e.kernel_pair(q).unwrap().unwrap();
    assert_eq!(size(&m, kp.apex), 8);
    // {(x, y) : x - y in {0, 2}}: the projections agree through q
    assert_eq!(m.cat.comp(q, kp.p0), m.cat.comp(q, kp.p1));
    assert_eq!(m.cat.comp(kp.p0, kp.diagonal), m.cat.id(z4));
    assert_eq!(e.regular_epi_via_kernel_pair(q).unwrap(), Some(true));

    let id = e.kernel_pair(m.cat.id(z4)).unwrap().unwrap();
    assert_eq!(size(&m, id.apex), 4);
    let zero = m.cat.objects().find(|&o| e.is_zero_obj(o)).unwrap();
    let bang = e.zero(z2, zero).unwrap();
    let full = e.kernel_pair(bang).unwrap().unwrap();
    assert_eq!(size(&m, full.apex), 4);

    // an injective Z/4 → Z/8 factors as (iso, inclusion)
    let z8 = cyclic(&m, 8);
    let f = m.cat.hom(z4, z8).iter().copied().find(|&f| image_size(m.map(f)) == 4).unwrap();
    let (ep, mo) = e.image_factorization(f).unwrap().unwrap();
    assert!(e.is_iso(ep) && e.is_mono(mo));
    assert_eq!(size(&m, m.cat.cod(ep)), 4);
}

#[test]
fn products_and_coproducts() {
    let m = window(Backend::AbGroup, 6);
    let e = engine(&m);
    let (z2, z3) = (cyclic(&m, 2), cyclic(&m, 3));
    let Lookup::Found(p) = e.construct(Construction::Product(z2, z3)).unwrap() else { panic!() };
    assert_eq!(p.apex, cyclic(&m, 6));
    let Lookup::Found(c) = e.construct(Construction::Coproduct(z2, z3)).unwrap() else { panic!() };
    assert_eq!(c.apex, p.apex);

    let g = window(Backend::Group, 8);
    let ge = engine(&g);
    let Lookup::Found(t) = ge.construct(Construction::Terminal).unwrap() else { panic!() };
    assert_eq!(size(&g, t.apex), 1);
    let err = ge.construct(Construction::Coproduct(cyclic(&g, 2), cyclic(&g, 3))).unwrap_err();
    assert!(err.is_budget(), "{err}");
}

#[test]
fn finite_sets_have_no_zero_object() {
    let text = "objects:\nE\nS\nmorphisms:\ne E E\ns S S\nu E S\nidentities:\nE e\nS s\ncomposition:\n";
    let (cat, _, _) = parse_category(text).unwrap();
    let e = Engine::new(&cat, Budget::default());
    assert!(!e.is_pointed());
    assert!(e.require_zero().is_err());
}

#[test]
fn pointed_stray_element_blocks_the_family() {
    let m = window(Backend::PointedSet, 4);
    let e = engine(&m);
    let (x, y) = (obj(&m, 4, |_| true), obj(&m, 2, |_| true));
    // a ↦ *, b ↦ b, c ↦ b; section fixes b
    let p = m.find_hom(x, y, &[0, 0, 1, 1]).unwrap();
    let s = m.find_hom(y, x, &[0, 2]).unwrap();
    assert_eq!(m.cat.comp(p, s), m.cat.id(y));
    let k = e.kernel(p).unwrap().unwrap();
    let (mono, _) = e.strong_family_witness(&[k, s]).unwrap();
    assert_eq!(size(&m, m.cat.dom(mono)), 3);
    assert!(!e.is_iso(mono));
}
