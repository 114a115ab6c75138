use catcheck_core::axioms::{run_check, validate, Check, Options, Verdict};
use catcheck_core::backend::{Backend, Materialized};
use catcheck_core::fincat::{parse_category, print_category, FinCategory, RolesSection};
use catcheck_core::functor::{functor_category, IndexShape};
use catcheck_core::{Budget, Engine, Error, Meter};
use proptest::prelude::*;
use std::sync::OnceLock;

fn ptset3() -> &'static Materialized {
    static W: OnceLock<Materialized> = OnceLock::new();
    W.get_or_init(|| Materialized::new(Backend::PointedSet, 3, true).unwrap())
}

fn mon2() -> &'static Materialized {
    static W: OnceLock<Materialized> = OnceLock::new();
    W.get_or_init(|| Materialized::new(Backend::Monoid, 2, true).unwrap())
}

fn ab2() -> &'static Materialized {
    static W: OnceLock<Materialized> = OnceLock::new();
    W.get_or_init(|| Materialized::new(Backend::AbGroup, 2, true).unwrap())
}

const CHEAP: [Check; 8] =
    [Check::A2, Check::A3, Check::CondA, Check::CondB, Check::CondC, Check::CondD, Check::Proto, Check::SsflIso];

/// Full subcategory on the zero object plus the chosen others.
fn sub(m: &Materialized, mask: u64) -> FinCategory {
    let zero = Engine::new(&m.cat, Budget::default()).zero_object().unwrap();
    let objs: Vec<_> = m.cat.objects().filter(|&o| o == zero || mask >> o & 1 == 1).collect();
    m.cat.full_subcategory(&objs).0
}

fn same_table(a: &FinCategory, b: &FinCategory) -> bool {
    a.num_objects() == b.num_objects()
        && a.num_morphisms() == b.num_morphisms()
        && a.morphisms().all(|f| {
            let g = b.find_morphism(a.mor_name(f)).unwrap();
            a.obj_name(a.dom(f)) == b.obj_name(b.dom(g))
                && a.obj_name(a.cod(f)) == b.obj_name(b.cod(g))
                && a.morphisms().filter(|&h| a.dom(h) == a.cod(f)).all(|h| {
                    let h2 = b.find_morphism(a.mor_name(h)).unwrap();
                    a.mor_name(a.comp(h, f)) == b.mor_name(b.comp(h2, g))
                })
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn witnesses_validate_in_subcategories(mask in any::<u64>(), ci in 0..CHEAP.len(), mon in any::<bool>()) {
        let m = if mon { mon2() } else { ptset3() };
        let cat = sub(m, mask);
        let e = Engine::new(&cat, Budget::default());
        let o = run_check(&e, CHEAP[ci], Options { all_witnesses: true }).unwrap();
        prop_assert_eq!(o.verdict == Verdict::Fails, !o.witnesses.is_empty());
        for w in &o.witnesses {
            prop_assert!(validate(&e, w.check, &RolesSection(w.roles.clone())).unwrap());
        }
    }

    #[test]
    fn decided_verdicts_do_not_depend_on_budget(pairs in 1usize..400, apexes in 0usize..6, ci in 0..CHEAP.len()) {
        let m = ptset3();
        let full = run_check(&Engine::new(&m.cat, Budget::default()).with_ambient(m), CHEAP[ci], Options::default()).unwrap();
        let small = Budget { max_pairs: pairs, max_apexes: apexes, ..Budget::default() };
        match run_check(&Engine::new(&m.cat, small).with_ambient(m), CHEAP[ci], Options::default()) {
            Ok(o) if o.verdict != Verdict::OutOfBudget => prop_assert_eq!(o.verdict, full.verdict),
            Ok(_) | Err(Error::OutOfBudget(_)) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn category_format_round_trips(mask in any::<u64>(), which in 0..3usize) {
        let m = [ptset3(), mon2(), ab2()][which];
        let cat = sub(m, mask);
        let text = print_category(&cat, None, &["note".to_string()]);
        let (back, roles, header) = parse_category(&text).unwrap();
        prop_assert!(roles.0.is_empty());
        prop_assert_eq!(header, vec!["note".to_string()]);
        prop_assert!(same_table(&cat, &back));
        prop_assert_eq!(print_category(&back, None, &["note".to_string()]), text);
    }

    #[test]
    fn functor_categories_are_categories(shape in 0..5usize, mask in any::<u64>()) {
        let shape = [IndexShape::Terminal, IndexShape::Discrete2, IndexShape::Arrow, IndexShape::Parallel, IndexShape::Span][shape];
        let c = sub(ab2(), mask);
        let fc = functor_category(&c, &shape.category(), &Meter::new(Budget::default())).unwrap();
        fc.cat.validate().unwrap();
        let n = c.num_objects();
        let homs: usize = c.objects().map(|a| c.objects().map(|b| c.hom(a, b).len()).sum::<usize>()).sum();
        let expected = match shape {
            IndexShape::Terminal => Some(n),
            IndexShape::Discrete2 => Some(n * n),
            IndexShape::Arrow => Some(homs),
            _ => None,
        };
        if let Some(k) = expected {
            prop_assert_eq!(fc.cat.num_objects(), k);
        }
        for alpha in fc.cat.morphisms() {
            let (f, g) = (fc.cat.dom(alpha), fc.cat.cod(alpha));
            prop_assert_eq!(fc.cat.is_identity(alpha), fc.transformations[alpha].components.iter().all(|&k| c.is_identity(k)) && f == g);
        }
    }
}
