//! Acceptance criteria: prints one `criterion N: PASS|FAIL` line each and exits non-zero on any failure.

use std::time::{Duration, Instant};

use catcheck_core::axioms::{
    audit, classify, equivalence_relations, exactness_instance, protomodular_routes, run_check, validate, Audit, Check,
    Exactness, Options, Rung, Verdict,
};
use catcheck_core::backend::alg::Algebra;
use catcheck_core::backend::{native, Backend, Materialized};
use catcheck_core::fincat::RolesSection;
use catcheck_core::functor::{functor_category, pointwise_audit, IndexShape, Pointwise, PointwisePredicate};
use catcheck_core::regress::{pinned, run_suite};
use catcheck_core::report::load_witness_text;
use catcheck_core::report::witness_document;
use catcheck_core::{Budget, Engine, Meter};

const C1_LIMIT: Duration = Duration::from_secs(60);
const C2_LIMIT: Duration = Duration::from_secs(300);
const C11_MIN_SAMPLES: usize = 100;
const FIVE: [(Backend, usize); 5] = [
    (Backend::AbGroup, 4),
    (Backend::Group, 6),
    (Backend::PointedSet, 3),
    (Backend::Monoid, 3),
    (Backend::GroupPair, 4),
];

fn window(b: Backend, n: usize) -> Materialized {
    Materialized::new(b, n, true).unwrap()
}

fn engine(m: &Materialized) -> Engine<'_> {
    Engine::new(&m.cat, Budget::default()).with_ambient(m)
}

/// Kernel of a pointed map: elements sent to the basepoint/unit.
fn kernel_size(map: &[usize]) -> usize {
    map.iter().filter(|&&v| v == 0).count()
}

fn injective(map: &[usize]) -> bool {
    let mut seen = std::collections::HashSet::new();
    map.iter().all(|v| seen.insert(*v))
}

fn criterion_01_abelian_groups_are_semi_abelian() -> (bool, String) {
    let t = Instant::now();
    let m = window(Backend::AbGroup, 4);
    let e = engine(&m);
    let cl = classify(&e, false, Options::default()).unwrap();
    let elapsed = t.elapsed();
    let axioms = [Check::A1, Check::A2, Check::A3, Check::A4];
    let all = axioms.iter().all(|&c| cl.outcome(c).map(|o| o.verdict) == Some(Verdict::Holds));
    // 0, Z/2, Z/3, Z/4, Z/2×Z/2
    let pass = m.cat.num_objects() == 5 && all && cl.rung(Rung::SemiAbelian) == Verdict::Holds && elapsed < C1_LIMIT;
    (pass, format!("{} objects, A1-A4 hold: {all}, {elapsed:?} (limit {C1_LIMIT:?})", m.cat.num_objects()))
}

fn generated(g: &Algebra, seeds: &[usize]) -> usize {
    let mut set: Vec<bool> = vec![false; g.size];
    set[0] = true;
    for &s in seeds {
        set[s] = true;
    }
    loop {
        let cur: Vec<usize> = (0..g.size).filter(|&x| set[x]).collect();
        let mut grew = false;
        for &a in &cur {
            for &b in &cur {
                let ab = g.mul(a, b);
                if !set[ab] {
                    set[ab] = true;
                    grew = true;
                }
            }
        }
        if !grew {
            return set.iter().filter(|&&x| x).count();
        }
    }
}

fn criterion_02_split_extensions_are_generated() -> (bool, String) {
    let t = Instant::now();
    let m = window(Backend::Group, 8);
    let c = &m.cat;
    let (mut checked, mut bad) = (0, 0);
    for p in c.morphisms() {
        let (x, y) = (c.dom(p), c.cod(p));
        for &s in c.hom(y, x) {
            if c.comp(p, s) != c.id(y) {
                continue;
            }
            checked += 1;
            let mut seeds: Vec<usize> = (0..m.object(x).size).filter(|&a| m.map(p)[a] == 0).collect();
            seeds.extend(m.map(s).iter().copied());
            if generated(m.object(x), &seeds) != m.object(x).size {
                bad += 1;
            }
        }
    }
    let (lib_checked, lib_bad) = native::split_extensions_generated(&m);
    let elapsed = t.elapsed();
    let pass = bad == 0 && lib_bad.is_empty() && lib_checked == checked && checked > 0 && elapsed < C2_LIMIT;
    (
        pass,
        format!(
            "{checked} split extensions up to order 8, {bad} not generated (library: {lib_checked}, {}), {elapsed:?}",
            lib_bad.len()
        ),
    )
}

fn criterion_03_pointed_sets_fail_condition_c() -> (bool, String) {
    let m = window(Backend::PointedSet, 3);
    let e = engine(&m);
    let c = run_check(&e, Check::CondC, Options::default()).unwrap();
    let proto = run_check(&e, Check::Proto, Options::default()).unwrap();
    let w = &c.witnesses[0];
    let f = w.role("f").unwrap();
    let carrier = m.object(m.cat.dom(f)).size + m.object(m.cat.cod(f)).size;
    let oracle = kernel_size(m.map(f)) == 1 && !injective(m.map(f));
    let isolated = load_witness_text(&witness_document(&m.cat, w), Budget::default()).unwrap().reproduces;
    let pass = c.verdict == Verdict::Fails && carrier == 5 && oracle && proto.verdict == Verdict::Fails && isolated;
    (
        pass,
        format!(
            "(C) {}, carrier {carrier}, map {:?}, proto {}, re-verifies alone: {isolated}",
            c.verdict,
            m.map(f),
            proto.verdict
        ),
    )
}

fn criterion_04_monoids_fail_condition_c() -> (bool, String) {
    let m = window(Backend::Monoid, 3);
    let e = engine(&m);
    let c = run_check(&e, Check::CondC, Options::default()).unwrap();
    let w = &c.witnesses[0];
    let f = w.role("f").unwrap();
    let valid = validate(&e, Check::CondC, &RolesSection(w.roles.clone())).unwrap();
    let oracle = kernel_size(m.map(f)) == 1 && !injective(m.map(f));
    let dom = m.object(m.cat.dom(f));
    // {1, a, 0} with a² = 0: a unit, one absorbing element, one square-zero element
    let absorbing: Vec<usize> =
        (0..dom.size).filter(|&z| (0..dom.size).all(|x| dom.mul(x, z) == z && dom.mul(z, x) == z)).collect();
    let expected_shape = dom.size == 3
        && absorbing.len() == 1
        && (1..dom.size).any(|a| a != absorbing[0] && dom.mul(a, a) == absorbing[0]);
    let pass = c.verdict == Verdict::Fails && valid && oracle;
    (
        pass,
        format!(
            "(C) {}, witness valid {valid}, map {:?}, domain is {{1,a,0}} with a\u{b2}=0: {expected_shape}",
            c.verdict,
            m.map(f)
        ),
    )
}

fn criterion_05_pair_epi_is_not_strong() -> (bool, String) {
    let m = window(Backend::GroupPair, 4);
    let e = engine(&m);
    let find = |marked: Vec<usize>| m.locate(&Algebra::cyclic(2).with_marked(marked)).unwrap().0;
    let (a, b) = (find(vec![0]), find(vec![0, 1]));
    let f = m.find_hom(a, b, &[0, 1]).unwrap();
    let (epi, strong, regular) = (e.is_epi(f), e.is_strong_epi(f), e.is_regular_epi(f).unwrap());
    // q regular requires q(B) = C: the marked part {0} maps onto {0}, not {0, 1}.
    let image_of_marked: Vec<usize> = m.object(a).marked.as_ref().unwrap().iter().map(|&x| m.map(f)[x]).collect();
    let oracle = image_of_marked.len() < m.object(b).marked.as_ref().unwrap().len();
    let pass = epi && !strong && !regular && oracle;
    (pass, format!("epi {epi}, strong {strong}, regular {regular}, q(B)≠C {oracle}"))
}

fn criterion_06_lemma_implications() -> (bool, String) {
    let mut lines = Vec::new();
    let mut violations = 0;
    for (b, n) in FIVE {
        let m = window(b, n);
        let e = engine(&m);
        let a = audit(&e, Audit::Lemma1, Options::default()).unwrap();
        violations += a.violations();
        let decided = a.edges.iter().filter(|x| x.status != catcheck_core::axioms::EdgeStatus::Skipped).count();
        lines.push(format!("{b}{n}: {} violated, {decided} decided", a.violations()));
    }
    (violations == 0, lines.join("; "))
}

fn criterion_07_protomodularity_routes_agree() -> (bool, String) {
    let mut lines = Vec::new();
    let mut agree = true;
    for (b, n) in FIVE {
        let m = window(b, n);
        let e = engine(&m);
        let (a, ssfl, c) = protomodular_routes(&e, Options::default()).unwrap();
        let route2 = ssfl.verdict.and(c.verdict);
        agree &= a.verdict == route2;
        lines.push(format!("{b}{n}: {} / {route2}", a.verdict));
    }
    (agree, lines.join("; "))
}

fn criterion_08_ssfl_iso_witness() -> (bool, String) {
    let m = window(Backend::PointedSet, 3);
    let e = engine(&m);
    let o = run_check(&e, Check::SsflIso, Options::default()).unwrap();
    let valid = o
        .witnesses
        .first()
        .map(|w| validate(&e, Check::SsflIso, &RolesSection(w.roles.clone())).unwrap())
        .unwrap_or(false);
    let g = window(Backend::Group, 6);
    let ge = engine(&g);
    let og = run_check(&ge, Check::SsflIso, Options::default()).unwrap();
    let pass = o.verdict == Verdict::Fails && valid && og.verdict == Verdict::Holds && og.witnesses.is_empty();
    (
        pass,
        format!("finptset3 {} (witness valid {valid}), fingrp6 {} over {} diagrams", o.verdict, og.verdict, og.scanned),
    )
}

fn criterion_09_exactness_double_check() -> (bool, String) {
    let mut lines = Vec::new();
    let mut pass = true;
    for (b, n) in [(Backend::AbGroup, 4), (Backend::Group, 6)] {
        let m = window(b, n);
        let e = engine(&m);
        let rels = equivalence_relations(&e).unwrap();
        let (mut both, mut other) = (0, 0);
        for rel in &rels {
            match exactness_instance(&e, rel).unwrap() {
                Exactness::Instance(inst) => match inst.proof {
                    Some(p) if p.verdict() == inst.direct && inst.direct => both += 1,
                    _ => other += 1,
                },
                _ => other += 1,
            }
        }
        pass &= other == 0 && both == rels.len() && !rels.is_empty();
        lines.push(format!("{b}{n}: {} relations, {both} confirmed by both methods", rels.len()));
    }
    (pass, lines.join("; "))
}

fn criterion_10_native_constructions_are_universal() -> (bool, String) {
    let mut lines = Vec::new();
    let mut failures = Vec::new();
    for (b, n) in FIVE {
        let m = window(b, n);
        let e = engine(&m);
        let t = native::verify_oracles(&m, &e).unwrap();
        lines.push(format!("{b}{n}: {}/{} ", t.checked - t.failures.len(), t.checked));
        failures.extend(t.failures);
    }
    (failures.is_empty(), format!("{} {:?}", lines.join(""), failures.iter().take(3).collect::<Vec<_>>()))
}

fn criterion_11_functor_category_is_pointwise() -> (bool, String) {
    let m = window(Backend::AbGroup, 2);
    let ce = engine(&m);
    let fc = functor_category(&m.cat, &IndexShape::Arrow.category(), &Meter::new(Budget::default())).unwrap();
    let amb = Pointwise::new(&fc, &ce);
    let fe = Engine::new(&fc.cat, Budget::default()).with_ambient(&amb);
    let homs: usize = m.cat.objects().map(|a| m.cat.objects().map(|b| m.cat.hom(a, b).len()).sum::<usize>()).sum();
    let mut pass = fc.cat.num_objects() == homs && homs == 5;
    let mut lines = vec![format!("{} functors", fc.cat.num_objects())];
    for p in [PointwisePredicate::Mono, PointwisePredicate::RegularEpi, PointwisePredicate::Kernel] {
        let r = pointwise_audit(&fc, &ce, &fe, p, C11_MIN_SAMPLES, 0).unwrap();
        pass &= r.agrees() && r.incomplete == 0 && (r.examined >= C11_MIN_SAMPLES || r.examined == r.space);
        lines.push(format!("{} {}/{} of {}", p.key(), r.agree, r.examined, r.space));
    }
    let a = classify(&ce, false, Options::default()).unwrap();
    let b = classify(&fe, false, Options::default()).unwrap();
    let same = a.rungs.iter().zip(&b.rungs).all(|(x, y)| x.rung == y.rung && x.verdict == y.verdict);
    pass &= same && a.rungs.len() == Rung::ALL.len();
    lines.push(format!("ladder agrees: {same}"));
    (pass, lines.join(", "))
}

fn criterion_12_regression_suite_is_deterministic() -> (bool, String) {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    let cases = pinned(false);
    let a = run_suite(&cases, Some(d1.path()), Budget::default(), 0).unwrap();
    let b = run_suite(&cases, Some(d2.path()), Budget::default(), 0).unwrap();
    let (ja, jb) = (serde_json::to_string_pretty(&a).unwrap(), serde_json::to_string_pretty(&b).unwrap());
    let mut files_equal = true;
    for entry in std::fs::read_dir(d1.path()).unwrap() {
        let p = entry.unwrap().path();
        let q = d2.path().join(p.file_name().unwrap());
        files_equal &= std::fs::read(&p).unwrap() == std::fs::read(&q).unwrap();
    }
    let pass = ja == jb && files_equal && a.green;
    (
        pass,
        format!(
            "{} cases, reports identical: {}, witness files identical: {files_equal}, green: {}",
            a.cases.len(),
            ja == jb,
            a.green
        ),
    )
}

type Criterion = fn() -> (bool, String);

fn main() {
    let all: [Criterion; 12] = [
        criterion_01_abelian_groups_are_semi_abelian,
        criterion_02_split_extensions_are_generated,
        criterion_03_pointed_sets_fail_condition_c,
        criterion_04_monoids_fail_condition_c,
        criterion_05_pair_epi_is_not_strong,
        criterion_06_lemma_implications,
        criterion_07_protomodularity_routes_agree,
        criterion_08_ssfl_iso_witness,
        criterion_09_exactness_double_check,
        criterion_10_native_constructions_are_universal,
        criterion_11_functor_category_is_pointwise,
        criterion_12_regression_suite_is_deterministic,
    ];
    let mut failed = 0;
    for (i, run) in all.iter().enumerate() {
        let (pass, detail) = std::panic::catch_unwind(run).unwrap_or_else(|_| (false, "panicked".into()));
        println!("criterion {}: {} {detail}", i + 1, if pass { "PASS" } else { "FAIL" });
        failed += usize::from(!pass);
    }
    println!("{} of {} criteria pass", all.len() - failed, all.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
