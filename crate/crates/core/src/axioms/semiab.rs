//! Axioms A1–A4 and A4′.

use super::diagrams::{equivalence_relations, split_extensions, SplitExtension};
use super::lemma::condition_a_witness;
use super::{not_pointed, Check, Options, Outcome, Scan, Support, Witness};
use crate::engine::{Engine, Lookup};
use crate::error::{Error, Result};
use crate::fincat::solver::{Cone, Construction};
use crate::fincat::MorId;

/// The coproduct of `dom f1` and `dom f2` and, when it is in the window,
/// the copairing `(f1, f2)` out of it.
pub(crate) fn copairing(e: &Engine, f1: MorId, f2: MorId) -> Result<(Lookup, Option<MorId>)> {
    let c = e.cat();
    let con = Construction::Coproduct(c.dom(f1), c.dom(f2));
    let l = e.construct(con)?;
    let cp = match &l {
        Lookup::Found(cone) => {
            let other = Cone { apex: c.cod(f1), legs: vec![f1, f2] };
            Some(
                e.universal(con)?
                    .mediate(c, cone, &other)
                    .ok_or_else(|| Error::Inconsistent("coproduct without copairing".into()))?,
            )
        }
        _ => None,
    };
    Ok((l, cp))
}

fn construction_witness(scan: &Scan, con: Construction, what: &str) -> Witness {
    let c = scan.engine.cat();
    let roles = match con {
        Construction::Product(a, b) => vec![("prod_a", c.id(a)), ("prod_b", c.id(b))],
        Construction::Coproduct(a, b) => vec![("coprod_a", c.id(a)), ("coprod_b", c.id(b))],
        Construction::Equalizer(f, g) => vec![("eq_f", f), ("eq_g", g)],
        Construction::Coequalizer(f, g) => vec![("coeq_f", f), ("coeq_g", g)],
        _ => vec![],
    };
    scan.witness(roles, Support::All, format!("no {what} in the window or beyond it"))
}

fn require(scan: &mut Scan, con: Construction, what: &str) -> Result<()> {
    let r = match scan.engine.construct(con) {
        Ok(Lookup::Found(_)) => Ok(None),
        Ok(Lookup::Escaped) => {
            scan.skip();
            return Ok(());
        }
        Ok(Lookup::Absent) => Ok(Some(construction_witness(scan, con, what))),
        Err(err) => {
            if err.is_budget() {
                scan.note(format!("some {what}s are inconclusive"));
            }
            Err(err)
        }
    };
    scan.record(r)
}

/// Which constructions a scan demands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Demands {
    pub products: bool,
    pub coproducts: bool,
    pub equalizers: bool,
    pub coequalizers: bool,
    /// Coequalizers of equivalence relations only.
    pub relation_coequalizers: bool,
}

pub(crate) fn constructions_scan(e: &Engine, check: Check, d: Demands, opts: Options) -> Result<Outcome> {
    if !e.is_pointed() {
        return Ok(not_pointed(check));
    }
    let c = e.cat();
    let mut scan = Scan::new(e, check, opts);
    let n = c.num_objects();
    for (on, kind, what) in [(d.products, 0, "product"), (d.coproducts, 1, "coproduct")] {
        if !on {
            continue;
        }
        for a in 0..n {
            for b in a..n {
                let con = if kind == 0 { Construction::Product(a, b) } else { Construction::Coproduct(a, b) };
                require(&mut scan, con, what)?;
                if scan.done() {
                    return Ok(scan.finish());
                }
            }
        }
    }
    if d.equalizers || d.coequalizers {
        for a in 0..n {
            for b in 0..n {
                let hom = c.hom(a, b);
                for (i, &f) in hom.iter().enumerate() {
                    for &g in &hom[i + 1..] {
                        if d.equalizers {
                            require(&mut scan, Construction::Equalizer(f, g), "equalizer")?;
                        }
                        if d.coequalizers {
                            require(&mut scan, Construction::Coequalizer(f, g), "coequalizer")?;
                        }
                        if scan.done() {
                            return Ok(scan.finish());
                        }
                    }
                }
            }
            e.meter().check_time().or_else(|err| scan.record(Err(err)))?;
        }
    }
    if d.relation_coequalizers {
        match equivalence_relations(e) {
            Ok(rels) => {
                for r in rels {
                    require(
                        &mut scan,
                        Construction::Coequalizer(r.r0, r.r1),
                        "coequalizer of an equivalence relation",
                    )?;
                    if scan.done() {
                        break;
                    }
                }
            }
            Err(err) => scan.record(Err(err))?,
        }
    }
    Ok(scan.finish())
}

/// A1, or A1′ when `prime` (coequalizers of equivalence relations only).
pub fn check_a1(e: &Engine, prime: bool, opts: Options) -> Result<Outcome> {
    let check = if prime { Check::A1p } else { Check::A1 };
    let d = Demands {
        products: true,
        coproducts: true,
        equalizers: true,
        coequalizers: !prime,
        relation_coequalizers: prime,
    };
    constructions_scan(e, check, d, opts)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum A2Route {
    /// The coproduct is in the window; the copairing's class memberships.
    Coproduct { copairing: MorId, injections: [MorId; 2], cokernel: bool, regular: bool, strong: bool },
    /// The coproduct escapes or is undecidable; (A) decides.
    Delegated { why: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct A2Instance {
    pub ext: SplitExtension,
    pub route: A2Route,
    /// Condition (A) on the same extension.
    pub condition_a: bool,
}

impl A2Instance {
    /// The cokernel reading; delegated instances take (A)'s verdict.
    pub fn holds(&self) -> bool {
        match self.route {
            A2Route::Coproduct { cokernel, .. } => cokernel,
            A2Route::Delegated { .. } => self.condition_a,
        }
    }

    /// The regular-epi reading.
    pub fn holds_weak(&self) -> bool {
        match self.route {
            A2Route::Coproduct { regular, .. } => regular,
            A2Route::Delegated { .. } => self.condition_a,
        }
    }
}

pub fn a2_instance(e: &Engine, ext: &SplitExtension) -> Result<A2Instance> {
    let condition_a = e.strong_family_witness(&[ext.k, ext.s]).is_none();
    let route = match copairing(e, ext.k, ext.s) {
        Ok((Lookup::Found(cone), Some(cp))) => A2Route::Coproduct {
            copairing: cp,
            injections: [cone.legs[0], cone.legs[1]],
            cokernel: e.is_cokernel_epi(cp)?,
            regular: e.is_regular_epi(cp)?,
            strong: e.is_strong_epi(cp),
        },
        Ok((Lookup::Escaped, _)) => A2Route::Delegated { why: "coproduct escapes the window".into() },
        Ok(_) => A2Route::Delegated { why: "coproduct absent".into() },
        Err(Error::OutOfBudget(why)) => A2Route::Delegated { why },
        Err(err) => return Err(err),
    };
    Ok(A2Instance { ext: *ext, route, condition_a })
}

pub fn check_a2(e: &Engine, opts: Options) -> Result<Outcome> {
    if !e.is_pointed() {
        return Ok(not_pointed(Check::A2));
    }
    let mut scan = Scan::new(e, Check::A2, opts);
    let (exts, missing) = split_extensions(e)?;
    for _ in 0..missing {
        scan.skip();
    }
    let (mut delegated, mut weak_fail, mut weak_scanned) = (0, 0, 0);
    for ext in &exts {
        let r = a2_instance(e, ext).map(|inst| {
            weak_scanned += 1;
            if !inst.holds_weak() {
                weak_fail += 1;
            }
            match &inst.route {
                A2Route::Coproduct { copairing, injections, cokernel: false, .. } => {
                    let mut roles = ext.roles(["p", "s", "k"]);
                    roles.extend([("c", *copairing), ("i0", injections[0]), ("i1", injections[1])]);
                    Some(scan.witness(roles, Support::All, "the copairing of k and s is not a cokernel"))
                }
                A2Route::Coproduct { .. } => None,
                A2Route::Delegated { why } => {
                    delegated += 1;
                    if delegated == 1 {
                        scan.note(format!("decided through (A) where the coproduct is unavailable ({why})"));
                    }
                    condition_a_witness(&scan, ext, Check::A2)
                }
            }
        });
        scan.record(r)?;
        if scan.done() {
            break;
        }
    }
    if delegated > 0 {
        scan.note(format!(
            "{delegated} instance(s) decided through (A): a family is strongly epimorphic iff its copairing is a strong epi"
        ));
    }
    scan.note(format!(
        "regular-epi reading: {} ({weak_fail} failing of {weak_scanned})",
        if weak_fail == 0 { "holds" } else { "fails" }
    ));
    Ok(scan.finish())
}

pub fn check_a3(e: &Engine, opts: Options) -> Result<Outcome> {
    if !e.is_pointed() {
        return Ok(not_pointed(Check::A3));
    }
    let c = e.cat();
    let mut scan = Scan::new(e, Check::A3, opts);
    'all: for q in c.morphisms() {
        match e.is_cokernel_epi(q) {
            Ok(true) => {}
            Ok(false) => continue,
            Err(err) => {
                scan.record(Err(err))?;
                continue;
            }
        }
        for f in c.into_obj(c.cod(q)) {
            let r = match e.pullback(q, f) {
                Ok(Lookup::Found(cone)) => {
                    let (p0, p1) = (cone.legs[0], cone.legs[1]);
                    e.is_cokernel_epi(p1).map(|ok| {
                        (!ok).then(|| {
                            scan.witness(
                                vec![("q", q), ("f", f), ("p0", p0), ("p1", p1)],
                                Support::All,
                                "the pullback p1 of the cokernel q along f is not a cokernel",
                            )
                        })
                    })
                }
                Ok(Lookup::Escaped) => {
                    scan.skip();
                    continue;
                }
                Ok(Lookup::Absent) => {
                    scan.note("some pullbacks are absent");
                    scan.skip();
                    continue;
                }
                Err(err) => Err(err),
            };
            scan.record(r)?;
            if scan.done() {
                break 'all;
            }
        }
    }
    Ok(scan.finish())
}

/// Image of every kernel under every cokernel (or every regular epi when
/// `by_regular`) must be a kernel.
pub(crate) fn image_of_kernels(e: &Engine, by_regular: bool, opts: Options) -> Result<Outcome> {
    if !e.is_pointed() {
        return Ok(not_pointed(Check::A4));
    }
    let c = e.cat();
    let mut scan = Scan::new(e, Check::A4, opts);
    'all: for k in c.morphisms() {
        match e.is_kernel_mono(k) {
            Ok(true) => {}
            Ok(false) => continue,
            Err(err) => {
                scan.record(Err(err))?;
                continue;
            }
        }
        for g in c.out_of(c.cod(k)) {
            let r = (|| -> Result<Option<Witness>> {
                let qualifies = if by_regular { e.is_regular_epi(g)? } else { e.is_cokernel_epi(g)? };
                if !qualifies {
                    return Ok(None);
                }
                let Some((ep, m)) = e.image_factorization(c.comp(g, k))? else {
                    return Err(Error::OutOfBudget("image factorization not in the window".into()));
                };
                if e.is_kernel_mono(m)? {
                    return Ok(None);
                }
                Ok(Some(scan.witness(
                    vec![("k", k), ("g", g), ("e", ep), ("m", m)],
                    Support::All,
                    "g∘k = m∘e with e a regular epi, but the image m is not a kernel",
                )))
            })();
            scan.record(r)?;
            if scan.done() {
                break 'all;
            }
        }
    }
    Ok(scan.finish())
}

pub fn check_a4(e: &Engine, opts: Options) -> Result<Outcome> {
    image_of_kernels(e, false, opts)
}

pub fn check_a4_prime(e: &Engine, opts: Options) -> Result<Outcome> {
    if !e.is_pointed() {
        return Ok(not_pointed(Check::A4p));
    }
    let c = e.cat();
    let mut scan = Scan::new(e, Check::A4p, opts);
    'all: for f in c.morphisms() {
        match e.is_kernel_mono(f) {
            Ok(true) => {}
            Ok(false) => continue,
            Err(err) => {
                scan.record(Err(err))?;
                continue;
            }
        }
        for h in c.out_of(c.cod(f)) {
            for g in c.out_of(c.dom(f)) {
                let r = (|| -> Result<Option<Witness>> {
                    if !e.is_regular_epi(h)? || !e.is_regular_epi(g)? {
                        return Ok(None);
                    }
                    let hf = c.comp(h, f);
                    let Some(&k) = c.hom(c.cod(g), c.cod(h)).iter().find(|&&k| c.comp(k, g) == hf) else {
                        return Ok(None);
                    };
                    if !e.is_mono(k) || e.is_kernel_mono(k)? {
                        return Ok(None);
                    }
                    Ok(Some(scan.witness(
                        vec![("f", f), ("g", g), ("h", h), ("k", k)],
                        Support::All,
                        "k∘g = h∘f with f a kernel, g, h regular epis and k mono, but k is not a kernel",
                    )))
                })();
                scan.record(r)?;
                if scan.done() {
                    break 'all;
                }
            }
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

    #[test]
    fn abelian_groups_satisfy_a1_to_a4() {
        let m = window(Backend::AbGroup, 4);
        let e = engine!(m);
        let opts = Options::default();
        for o in [
            check_a1(&e, false, opts).unwrap(),
            check_a2(&e, opts).unwrap(),
            check_a3(&e, opts).unwrap(),
            check_a4(&e, opts).unwrap(),
            check_a4_prime(&e, opts).unwrap(),
        ] {
            assert_eq!(o.verdict, Verdict::Holds, "{}", o.check);
        }
    }

    #[test]
    fn a2_fails_for_pointed_sets() {
        let m = window(Backend::PointedSet, 3);
        let e = engine!(m);
        let o = check_a2(&e, Options::default()).unwrap();
        assert_eq!(o.verdict, Verdict::Fails);
        assert!(validate(&e, Check::A2, &RolesSection(o.witnesses[0].roles.clone())).unwrap());
    }

    #[test]
    fn group_coproducts_are_undecided() {
        let m = window(Backend::Group, 4);
        let e = engine!(m);
        assert_eq!(check_a1(&e, false, Options::default()).unwrap().verdict, Verdict::OutOfBudget);
    }

    #[test]
    fn pairs_fail_a4() {
        let m = window(Backend::GroupPair, 4);
        let e = engine!(m);
        let o = check_a4(&e, Options::default()).unwrap();
        assert_eq!(o.verdict, Verdict::Fails);
        assert!(validate(&e, Check::A4, &RolesSection(o.witnesses[0].roles.clone())).unwrap());
    }
}
