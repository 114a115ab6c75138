//! Functor categories `C^I` for small index categories, and audits comparing
//! predicates computed in `C^I` against their pointwise counterparts in `C`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::budget::Meter;
use crate::engine::{Ambient, Engine, Lookup, Outside};
use crate::error::{Error, Result};
use crate::fincat::solver::Construction;
use crate::fincat::{FinCategory, MorId, ObjId, RawCategory};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexShape {
    Terminal,
    Discrete2,
    Arrow,
    Parallel,
    Span,
}

impl IndexShape {
    pub const ALL: [IndexShape; 5] =
        [IndexShape::Terminal, IndexShape::Discrete2, IndexShape::Arrow, IndexShape::Parallel, IndexShape::Span];

    pub fn key(&self) -> &'static str {
        match self {
            IndexShape::Terminal => "terminal",
            IndexShape::Discrete2 => "discrete2",
            IndexShape::Arrow => "arrow",
            IndexShape::Parallel => "parallel",
            IndexShape::Span => "span",
        }
    }

    /// The shape as a category. None of the shapes has a non-trivial composite.
    pub fn category(&self) -> FinCategory {
        let (objs, arrows): (&[&str], &[(&str, usize, usize)]) = match self {
            IndexShape::Terminal => (&["a"], &[]),
            IndexShape::Discrete2 => (&["a", "b"], &[]),
            IndexShape::Arrow => (&["a", "b"], &[("u", 0, 1)]),
            IndexShape::Parallel => (&["a", "b"], &[("u", 0, 1), ("v", 0, 1)]),
            IndexShape::Span => (&["z", "a", "b"], &[("u", 0, 1), ("v", 0, 2)]),
        };
        let mut raw = RawCategory::default();
        for (i, o) in objs.iter().enumerate() {
            raw.objects.push((o.to_string(), 0));
            raw.morphisms.push((format!("1{o}"), i, i, 0));
            raw.identities.push((i, i, 0));
        }
        for (name, d, c) in arrows {
            raw.morphisms.push((name.to_string(), *d, *c, 0));
        }
        raw.build().expect("index shapes are categories")
    }
}

impl fmt::Display for IndexShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for IndexShape {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        IndexShape::ALL
            .into_iter()
            .find(|x| x.key().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Invalid(format!("unknown index shape `{s}`")))
    }
}

/// A functor `I → C`, as its object and morphism maps.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FunctorObj {
    pub obj: Vec<ObjId>,
    pub mor: Vec<MorId>,
}

/// A natural transformation, by its components at each object of `I`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NatTrans {
    pub src: ObjId,
    pub tgt: ObjId,
    pub components: Vec<MorId>,
}

#[derive(Clone, Debug)]
pub struct FunctorCategory {
    pub cat: FinCategory,
    pub index: FinCategory,
    pub functors: Vec<FunctorObj>,
    pub transformations: Vec<NatTrans>,
}

impl FunctorCategory {
    pub fn component(&self, alpha: MorId, i: ObjId) -> MorId {
        self.transformations[alpha].components[i]
    }
}

fn functors(c: &FinCategory, index: &FinCategory, meter: &Meter) -> Result<Vec<FunctorObj>> {
    let arrows: Vec<MorId> = index.morphisms().filter(|&u| !index.is_identity(u)).collect();
    let mut out = Vec::new();
    let n = c.num_objects();
    let k = index.num_objects();
    let mut obj = vec![0; k];
    'objs: loop {
        let choices: Vec<&[MorId]> = arrows.iter().map(|&u| c.hom(obj[index.dom(u)], obj[index.cod(u)])).collect();
        if choices.iter().all(|h| !h.is_empty()) {
            let mut pick = vec![0usize; arrows.len()];
            loop {
                let mut mor: Vec<MorId> = index.morphisms().map(|u| c.id(obj[index.dom(u)])).collect();
                for (j, &u) in arrows.iter().enumerate() {
                    mor[u] = choices[j][pick[j]];
                }
                let functorial = index.morphisms().all(|g| {
                    index.into_obj(index.dom(g)).into_iter().all(|f| mor[index.comp(g, f)] == c.comp(mor[g], mor[f]))
                });
                if functorial {
                    out.push(FunctorObj { obj: obj.clone(), mor });
                    meter.check_objects(out.len())?;
                }
                if !advance(&mut pick, |j| choices[j].len()) {
                    break;
                }
            }
        }
        if !advance(&mut obj, |_| n) {
            break 'objs;
        }
    }
    Ok(out)
}

/// Odometer increment; false once every digit has wrapped.
fn advance(digits: &mut [usize], base: impl Fn(usize) -> usize) -> bool {
    for j in (0..digits.len()).rev() {
        digits[j] += 1;
        if digits[j] < base(j) {
            return true;
        }
        digits[j] = 0;
    }
    false
}

fn functor_name(c: &FinCategory, index: &FinCategory, f: &FunctorObj) -> String {
    let objs: Vec<&str> = f.obj.iter().map(|&o| c.obj_name(o)).collect();
    let mors: Vec<&str> = index.morphisms().filter(|&u| !index.is_identity(u)).map(|u| c.mor_name(f.mor[u])).collect();
    if mors.is_empty() {
        format!("<{}>", objs.join(","))
    } else {
        format!("<{}|{}>", objs.join(","), mors.join(","))
    }
}

/// Materializes `C^I`: all functors, all natural transformations, composition
/// componentwise. The result is re-validated before it is returned.
pub fn functor_category(c: &FinCategory, index: &FinCategory, meter: &Meter) -> Result<FunctorCategory> {
    let fs = functors(c, index, meter)?;
    let k = index.num_objects();
    let mut transformations = Vec::new();
    let mut morphisms = Vec::new();
    let mut lookup: HashMap<(ObjId, ObjId, Vec<MorId>), MorId> = HashMap::new();
    let mut ident = vec![0; fs.len()];
    let names: Vec<String> = fs.iter().map(|f| functor_name(c, index, f)).collect();
    let mut visited = 0usize;
    for (a, fa) in fs.iter().enumerate() {
        for (b, fb) in fs.iter().enumerate() {
            let homs: Vec<&[MorId]> = (0..k).map(|i| c.hom(fa.obj[i], fb.obj[i])).collect();
            if homs.iter().any(|h| h.is_empty()) {
                continue;
            }
            let mut pick = vec![0usize; k];
            let mut count = 0;
            loop {
                visited += 1;
                meter.check_pairs(visited)?;
                let comps: Vec<MorId> = (0..k).map(|i| homs[i][pick[i]]).collect();
                let natural = index.morphisms().all(|u| {
                    let (d, e) = (index.dom(u), index.cod(u));
                    c.comp(fb.mor[u], comps[d]) == c.comp(comps[e], fa.mor[u])
                });
                if natural {
                    if a == b && comps.iter().enumerate().all(|(i, &m)| m == c.id(fa.obj[i])) {
                        ident[a] = morphisms.len();
                    }
                    lookup.insert((a, b, comps.clone()), morphisms.len());
                    morphisms.push((format!("{}=>{}#{count}", names[a], names[b]), a, b));
                    transformations.push(NatTrans { src: a, tgt: b, components: comps });
                    count += 1;
                }
                if !advance(&mut pick, |i| homs[i].len()) {
                    break;
                }
            }
        }
        meter.check_time()?;
    }
    let cat = FinCategory::from_parts(names, morphisms, ident, |g, f| {
        let (tg, tf) = (&transformations[g], &transformations[f]);
        let comps: Vec<MorId> = (0..k).map(|i| c.comp(tg.components[i], tf.components[i])).collect();
        lookup[&(tf.src, tg.tgt, comps)]
    });
    cat.validate()?;
    Ok(FunctorCategory { cat, index: index.clone(), functors: fs, transformations })
}

/// Decides constructions missing from a `C^I` window by computing them pointwise
/// in `C`.
pub struct Pointwise<'a> {
    fc: &'a FunctorCategory,
    base: &'a Engine<'a>,
}

impl<'a> Pointwise<'a> {
    pub fn new(fc: &'a FunctorCategory, base: &'a Engine<'a>) -> Self {
        Pointwise { fc, base }
    }

    fn at(&self, con: &Construction, i: ObjId) -> Construction {
        use Construction::*;
        let o = |f: ObjId| self.fc.functors[f].obj[i];
        let m = |a: MorId| self.fc.component(a, i);
        match *con {
            Terminal => Terminal,
            Initial => Initial,
            Product(a, b) => Product(o(a), o(b)),
            Coproduct(a, b) => Coproduct(o(a), o(b)),
            Equalizer(f, g) => Equalizer(m(f), m(g)),
            Coequalizer(f, g) => Coequalizer(m(f), m(g)),
            Pullback(f, g) => Pullback(m(f), m(g)),
            Pushout(f, g) => Pushout(m(f), m(g)),
        }
    }
}

impl Ambient for Pointwise<'_> {
    fn outside(&self, _cat: &FinCategory, con: &Construction) -> Outside {
        let mut escaped = false;
        let mut absent = false;
        for i in self.fc.index.objects() {
            match self.base.construct(self.at(con, i)) {
                Ok(Lookup::Found(_)) => {}
                Ok(Lookup::Escaped) => escaped = true,
                Ok(Lookup::Absent) => absent = true,
                Err(e) => return Outside::Unknown(format!("component at {}: {e}", self.fc.index.obj_name(i))),
            }
        }
        let discrete = self.fc.index.morphisms().all(|u| self.fc.index.is_identity(u));
        match (absent, escaped) {
            (true, _) if discrete => Outside::Absent,
            (true, _) => {
                Outside::Unknown(format!("{con:?} is absent at some component; pointwise criterion does not apply"))
            }
            (false, true) => Outside::Escapes,
            (false, false) => Outside::Unknown(format!("{con:?} exists pointwise but has no cone in the window")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointwisePredicate {
    Mono,
    RegularEpi,
    Kernel,
    Pullback,
}

impl PointwisePredicate {
    pub const ALL: [PointwisePredicate; 4] = [
        PointwisePredicate::Mono,
        PointwisePredicate::RegularEpi,
        PointwisePredicate::Kernel,
        PointwisePredicate::Pullback,
    ];

    pub fn key(&self) -> &'static str {
        match self {
            PointwisePredicate::Mono => "mono",
            PointwisePredicate::RegularEpi => "regular-epi",
            PointwisePredicate::Kernel => "kernel",
            PointwisePredicate::Pullback => "pullback",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointwiseReport {
    pub predicate: PointwisePredicate,
    /// Size of the full instance space.
    pub space: usize,
    pub examined: usize,
    pub coverage: f64,
    pub seed: u64,
    pub agree: usize,
    /// Instances where at least one side ran out of budget.
    pub incomplete: usize,
    /// Instances where the two sides differ, by morphism names.
    pub disagreements: Vec<String>,
    /// Instances where the predicate holds, out of those compared.
    pub positives: usize,
}

impl PointwiseReport {
    pub fn agrees(&self) -> bool {
        self.disagreements.is_empty()
    }
}

fn instances(fc: &FunctorCategory, pred: PointwisePredicate, meter: &Meter) -> Result<Vec<Vec<MorId>>> {
    let c = &fc.cat;
    let mut out = Vec::new();
    match pred {
        PointwisePredicate::Mono | PointwisePredicate::RegularEpi => out.extend(c.morphisms().map(|f| vec![f])),
        PointwisePredicate::Kernel => {
            for f in c.morphisms() {
                for k in c.into_obj(c.dom(f)) {
                    out.push(vec![k, f]);
                }
                meter.check_pairs(out.len())?;
            }
        }
        PointwisePredicate::Pullback => {
            for z in c.objects() {
                let into = c.into_obj(z);
                for &f in &into {
                    for &g in &into {
                        for p in c.objects() {
                            for &p0 in c.hom(p, c.dom(f)) {
                                for &p1 in c.hom(p, c.dom(g)) {
                                    if c.comp(f, p0) == c.comp(g, p1) {
                                        out.push(vec![p0, p1, f, g]);
                                    }
                                }
                            }
                        }
                        meter.check_pairs(out.len())?;
                    }
                }
            }
        }
    }
    Ok(out)
}

fn decide(e: &Engine, pred: PointwisePredicate, inst: &[MorId]) -> Result<bool> {
    match pred {
        PointwisePredicate::Mono => Ok(e.is_mono(inst[0])),
        PointwisePredicate::RegularEpi => e.is_regular_epi(inst[0]),
        PointwisePredicate::Kernel => e.is_kernel_of(inst[0], inst[1]),
        PointwisePredicate::Pullback => e.is_pullback(inst[0], inst[1], inst[2], inst[3]),
    }
}

/// Compares `pred` decided in `C^I` (engine `fe`) with the conjunction of its
/// components decided in `C` (engine `ce`). When the instance space exceeds
/// `samples`, a seeded sample of that size is examined.
pub fn pointwise_audit(
    fc: &FunctorCategory,
    ce: &Engine,
    fe: &Engine,
    pred: PointwisePredicate,
    samples: usize,
    seed: u64,
) -> Result<PointwiseReport> {
    let all = instances(fc, pred, fe.meter())?;
    let chosen: Vec<usize> = if all.len() <= samples {
        (0..all.len()).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut idx = sample(&mut rng, all.len(), samples).into_vec();
        idx.sort_unstable();
        idx
    };
    let mut rep = PointwiseReport {
        predicate: pred,
        space: all.len(),
        examined: chosen.len(),
        coverage: if all.is_empty() { 1.0 } else { chosen.len() as f64 / all.len() as f64 },
        seed,
        agree: 0,
        incomplete: 0,
        disagreements: Vec::new(),
        positives: 0,
    };
    for &j in &chosen {
        let inst = &all[j];
        let global = decide(fe, pred, inst);
        let local = fc.index.objects().try_fold(true, |acc, i| {
            let comps: Vec<MorId> = inst.iter().map(|&a| fc.component(a, i)).collect();
            Ok::<bool, Error>(acc && decide(ce, pred, &comps)?)
        });
        match (global, local) {
            (Ok(g), Ok(l)) if g == l => {
                rep.agree += 1;
                rep.positives += g as usize;
            }
            (Ok(g), Ok(l)) => {
                let names: Vec<&str> = inst.iter().map(|&a| fc.cat.mor_name(a)).collect();
                rep.disagreements.push(format!("{} (in C^I: {g}, pointwise: {l})", names.join(", ")));
            }
            (Err(Error::OutOfBudget(_)), _) | (_, Err(Error::OutOfBudget(_))) => rep.incomplete += 1,
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::{Backend, Materialized};
    use crate::budget::Budget;

    fn finab2() -> Materialized {
        Materialized::new(Backend::AbGroup, 2, true).unwrap()
    }

    #[test]
    fn terminal_index_is_a_copy() {
        let m = finab2();
        let fc = functor_category(&m.cat, &IndexShape::Terminal.category(), &Meter::unlimited()).unwrap();
        assert_eq!(fc.cat.num_objects(), m.cat.num_objects());
        assert_eq!(fc.cat.num_morphisms(), m.cat.num_morphisms());
    }

    #[test]
    fn arrow_functors_are_morphisms() {
        let m = finab2();
        let fc = functor_category(&m.cat, &IndexShape::Arrow.category(), &Meter::unlimited()).unwrap();
        assert_eq!(fc.cat.num_objects(), m.cat.num_morphisms());
    }

    #[test]
    fn discrete_index_squares_homs() {
        let m = finab2();
        let fc = functor_category(&m.cat, &IndexShape::Discrete2.category(), &Meter::unlimited()).unwrap();
        let n = m.cat.num_objects();
        assert_eq!(fc.cat.num_objects(), n * n);
        let homs: usize = m
            .cat
            .objects()
            .flat_map(|a| m.cat.objects().map(move |b| (a, b)))
            .map(|(a, b)| m.cat.hom(a, b).len())
            .sum();
        assert_eq!(fc.cat.num_morphisms(), homs * homs);
    }

    #[test]
    fn zero_functor_is_zero_object() {
        let m = finab2();
        let ce = Engine::new(&m.cat, Budget::default());
        let fc = functor_category(&m.cat, &IndexShape::Span.category(), &Meter::unlimited()).unwrap();
        let fe = Engine::new(&fc.cat, Budget::default());
        let z = fe.zero_object().expect("functor category is pointed");
        let cz = ce.zero_object().unwrap();
        assert!(fc.functors[z].obj.iter().all(|&o| o == cz));
    }

    #[test]
    fn functor_budget_is_enforced() {
        let m = finab2();
        let tight = Meter::new(Budget { max_objects: 2, ..Budget::default() });
        let r = functor_category(&m.cat, &IndexShape::Arrow.category(), &tight);
        assert!(matches!(r, Err(Error::OutOfBudget(_))));
    }

    #[test]
    fn shape_keys_round_trip() {
        for s in IndexShape::ALL {
            assert_eq!(s.key().parse::<IndexShape>().unwrap(), s);
            s.category().validate().unwrap();
        }
    }
}
