//! Conditions (A)–(F).

use super::diagrams::{split_extensions, ReflexivePair, SplitExtension};
use super::semiab::copairing;
use super::{not_pointed, Check, Options, Outcome, Scan, Support, Witness};
use crate::engine::{Engine, Lookup};
use crate::error::Result;
use crate::fincat::MorId;

/// A non-iso mono `m` with factorizations `k = m∘f`, `s = m∘t`, if any.
pub fn condition_a_instance(e: &Engine, ext: &SplitExtension) -> Option<(MorId, MorId, MorId)> {
    e.strong_family_witness(&[ext.k, ext.s]).map(|(m, fs)| (m, fs[0], fs[1]))
}

pub(crate) fn condition_a_witness(scan: &Scan, ext: &SplitExtension, check: Check) -> Option<Witness> {
    let (m, f, t) = condition_a_instance(scan.engine, ext)?;
    let mut roles = ext.roles(["p", "s", "k"]);
    roles.extend([("m", m), ("f", f), ("t", t)]);
    let c = scan.engine.cat();
    let mut w = scan.witness(
        roles,
        Support::Roles,
        format!("k and s factor through the proper subobject {} of {}", c.obj_name(c.dom(m)), c.obj_name(ext.x)),
    );
    w.check = check;
    Some(w)
}

pub fn check_condition_a(e: &Engine, opts: Options) -> Result<Outcome> {
    if !e.is_pointed() {
        return Ok(not_pointed(Check::CondA));
    }
    let mut scan = Scan::new(e, Check::CondA, opts);
    let (exts, missing) = split_extensions(e)?;
    for _ in 0..missing {
        scan.skip();
    }
    for ext in &exts {
        let w = condition_a_witness(&scan, ext, Check::CondA);
        scan.record(Ok(w))?;
        if scan.done() {
            break;
        }
    }
    Ok(scan.finish())
}

/// `(is q a coequalizer of (f, g), is q a cokernel of g∘k)`.
pub fn condition_b_instance(e: &Engine, rp: &ReflexivePair, q: MorId) -> Result<(bool, bool)> {
    let c = e.cat();
    let coeq = e.is_coequalizer(q, rp.f, rp.g)?;
    let coker = e.is_cokernel_of(q, c.comp(rp.g, rp.k))?;
    Ok((coeq, coker))
}

pub fn check_condition_b(e: &Engine, opts: Options) -> Result<Outcome> {
    if !e.is_pointed() {
        return Ok(not_pointed(Check::CondB));
    }
    let c = e.cat();
    let mut scan = Scan::new(e, Check::CondB, opts);
    'all: for a in c.objects() {
        for b in c.objects() {
            let hom = c.hom(a, b);
            for &f in hom {
                for &g in hom {
                    let Some(s) =
                        c.hom(b, a).iter().copied().find(|&s| c.comp(f, s) == c.id(b) && c.comp(g, s) == c.id(b))
                    else {
                        continue;
                    };
                    let k = match e.kernel(f) {
                        Ok(Some(k)) => k,
                        Ok(None) => {
                            scan.skip();
                            continue;
                        }
                        Err(err) => {
                            scan.record(Err(err))?;
                            continue;
                        }
                    };
                    let rp = ReflexivePair { f, g, s, k };
                    for q in c.out_of(b) {
                        let r = condition_b_instance(e, &rp, q).map(|(coeq, coker)| {
                            (coeq != coker).then(|| {
                                scan.witness(
                                    vec![("f", f), ("g", g), ("s", s), ("k", k), ("q", q)],
                                    Support::All,
                                    format!(
                                        "q is {}a coequalizer of (f, g) but {}a cokernel of g∘k",
                                        if coeq { "" } else { "not " },
                                        if coker { "" } else { "not " }
                                    ),
                                )
                            })
                        });
                        scan.record(r)?;
                        if scan.done() {
                            break 'all;
                        }
                    }
                }
            }
        }
    }
    Ok(scan.finish())
}

pub fn check_condition_c(e: &Engine, opts: Options) -> Result<Outcome> {
    if !e.is_pointed() {
        return Ok(not_pointed(Check::CondC));
    }
    let c = e.cat();
    let mut scan = Scan::new(e, Check::CondC, opts);
    for f in c.morphisms() {
        let k = match e.kernel(f) {
            Ok(Some(k)) => k,
            Ok(None) => {
                scan.skip();
                continue;
            }
            Err(err) => {
                scan.record(Err(err))?;
                continue;
            }
        };
        let w = if e.is_zero_obj(c.dom(k)) {
            e.mono_witness(f).map(|(u, v)| {
                scan.witness(
                    vec![("f", f), ("k", k), ("u", u), ("v", v)],
                    Support::Roles,
                    "kernel is zero, yet f∘u = f∘v with u ≠ v",
                )
            })
        } else {
            None
        };
        scan.record(Ok(w))?;
        if scan.done() {
            break;
        }
    }
    Ok(scan.finish())
}

/// Looks for `p: X → Y` and a mono `n: W → Y` with `p∘m = n∘q`, where
/// `m: Z → X`, `q: Z → W`.
fn lower_square(e: &Engine, m: MorId, q: MorId) -> Option<(MorId, MorId)> {
    let c = e.cat();
    for p in c.out_of(c.cod(m)) {
        let pm = c.comp(p, m);
        for &n in c.hom(c.cod(q), c.cod(p)) {
            if e.is_mono(n) && c.comp(n, q) == pm {
                return Some((p, n));
            }
        }
    }
    None
}

/// A counterexample to (D) exists iff there is one with `l = 1`, `k = m∘i`;
/// so only non-mono `m` with `m∘ker q` mono are tried.
pub fn check_condition_d(e: &Engine, opts: Options) -> Result<Outcome> {
    if !e.is_pointed() {
        return Ok(not_pointed(Check::CondD));
    }
    let c = e.cat();
    let mut scan = Scan::new(e, Check::CondD, opts);
    'all: for m in c.morphisms() {
        let Some((u, v)) = e.mono_witness(m) else {
            continue;
        };
        for q in c.out_of(c.dom(m)) {
            let i = match e.kernel(q) {
                Ok(Some(i)) => i,
                Ok(None) => {
                    scan.skip();
                    continue;
                }
                Err(err) => {
                    scan.record(Err(err))?;
                    continue;
                }
            };
            let k = c.comp(m, i);
            let w = if e.is_mono(k) {
                lower_square(e, m, q).map(|(p, n)| {
                    let l = c.id(c.dom(i));
                    scan.witness(
                        vec![("i", i), ("q", q), ("l", l), ("k", k), ("m", m), ("p", p), ("n", n), ("u", u), ("v", v)],
                        Support::Roles,
                        "l, k, n are monos and i = ker q, yet m∘u = m∘v with u ≠ v",
                    )
                })
            } else {
                None
            };
            scan.record(Ok(w))?;
            if scan.done() {
                break 'all;
            }
        }
    }
    Ok(scan.finish())
}

pub fn check_condition_e(e: &Engine, opts: Options) -> Result<Outcome> {
    if !e.is_pointed() {
        return Ok(not_pointed(Check::CondE));
    }
    let c = e.cat();
    let mut scan = Scan::new(e, Check::CondE, opts);
    for f in c.morphisms() {
        let r = (|| -> Result<Option<Witness>> {
            if !e.is_regular_epi(f)? || e.is_cokernel_epi(f)? {
                return Ok(None);
            }
            let (u, v) = e.regular_epi_pair(f)?.expect("regular epi has a pair");
            Ok(Some(scan.witness(
                vec![("f", f), ("u", u), ("v", v)],
                Support::All,
                "f is a coequalizer of (u, v) but not a cokernel",
            )))
        })();
        scan.record(r)?;
        if scan.done() {
            break;
        }
    }
    Ok(scan.finish())
}

pub fn check_condition_f(e: &Engine, opts: Options) -> Result<Outcome> {
    if !e.is_pointed() {
        return Ok(not_pointed(Check::CondF));
    }
    let mut scan = Scan::new(e, Check::CondF, opts);
    let (exts, missing) = split_extensions(e)?;
    for _ in 0..missing {
        scan.skip();
    }
    for ext in &exts {
        let r = match copairing(e, ext.k, ext.s) {
            Ok((Lookup::Found(cone), Some(cp))) => Ok(e.strong_epi_witness(cp).map(|(m, g)| {
                let mut roles = ext.roles(["p", "s", "k"]);
                roles.extend([("c", cp), ("i0", cone.legs[0]), ("i1", cone.legs[1]), ("m", m), ("g", g)]);
                scan.witness(roles, Support::Roles, "the copairing c = m∘g factors through a proper mono m")
            })),
            Ok(_) => {
                scan.skip();
                continue;
            }
            Err(err) => Err(err),
        };
        scan.record(r)?;
        if scan.done() {
            break;
        }
    }
    Ok(scan.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::testutil::{engine, window};
    use crate::axioms::{validate, Verdict};
    use crate::backend::Backend;
    use crate::fincat::RolesSection;

    fn roles(w: &Witness) -> RolesSection {
        RolesSection(w.roles.clone())
    }

    #[test]
    fn pointed_sets_fail_c_with_a_five_element_witness() {
        let m = window(Backend::PointedSet, 3);
        let e = engine!(m);
        let o = check_condition_c(&e, Options::default()).unwrap();
        assert_eq!(o.verdict, Verdict::Fails);
        let w = &o.witnesses[0];
        let f = w.role("f").unwrap();
        assert_eq!(m.object(m.cat.dom(f)).size + m.object(m.cat.cod(f)).size, 5);
        assert!(validate(&e, Check::CondC, &roles(w)).unwrap());
    }

    #[test]
    fn abelian_groups_satisfy_a_through_f() {
        let m = window(Backend::AbGroup, 4);
        let e = engine!(m);
        let opts = Options::default();
        for o in [
            check_condition_a(&e, opts).unwrap(),
            check_condition_b(&e, opts).unwrap(),
            check_condition_c(&e, opts).unwrap(),
            check_condition_d(&e, opts).unwrap(),
            check_condition_e(&e, opts).unwrap(),
            check_condition_f(&e, opts).unwrap(),
        ] {
            assert_eq!(o.verdict, Verdict::Holds, "{}", o.check);
        }
    }

    #[test]
    fn c_and_d_agree_on_negative_controls() {
        for (b, n) in [(Backend::PointedSet, 3), (Backend::Monoid, 3)] {
            let m = window(b, n);
            let e = engine!(m);
            let c = check_condition_c(&e, Options::default()).unwrap();
            let d = check_condition_d(&e, Options::default()).unwrap();
            assert_eq!(c.verdict, d.verdict, "{b}");
            assert!(validate(&e, Check::CondD, &roles(&d.witnesses[0])).unwrap());
        }
    }

    #[test]
    fn condition_a_witness_is_a_proper_mono() {
        let m = window(Backend::PointedSet, 3);
        let e = engine!(m);
        let o = check_condition_a(&e, Options::default()).unwrap();
        let w = &o.witnesses[0];
        let mono = w.role("m").unwrap();
        assert!(e.is_mono(mono) && !e.is_iso(mono));
        assert!(validate(&e, Check::CondA, &roles(w)).unwrap());
    }

    #[test]
    fn b_instance_on_groups_agrees() {
        let m = window(Backend::Group, 4);
        let e = engine!(m);
        let c = e.cat();
        let z4 = c.find_object("Z/4").unwrap();
        // (1, 1) with section 1: the coequalizer and the cokernel of g∘k are both the identity.
        let id = c.id(z4);
        let k = e.kernel(id).unwrap().unwrap();
        let rp = ReflexivePair { f: id, g: id, s: id, k };
        let (coeq, coker) = condition_b_instance(&e, &rp, id).unwrap();
        assert!(coeq && coker);
    }
}
