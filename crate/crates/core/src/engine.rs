//! Decision procedures for morphism classes on a materialized category.
//!
//! An [`Engine`] wraps an immutable [`FinCategory`] with a budget, an
//! optional [`Ambient`] that knows what lies outside the materialized window,
//! and memo tables. All predicates quantify over the materialized objects
//! only.

use std::cell::{OnceCell, RefCell};
use std::collections::HashMap;
use std::rc::Rc;

use crate::budget::{Budget, Meter};
use crate::error::{Error, Result};
use crate::fincat::solver::{Cone, Construction, Search, Universal};
use crate::fincat::{FinCategory, MorId, ObjId};

/// What the ambient category says about a construction that has no universal
/// cone inside the materialized window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outside {
    /// Exists in the ambient category, but its apex lies beyond the window.
    Escapes,
    /// Does not exist at all.
    Absent,
    /// Cannot be decided at this bound; the reason is carried along.
    Unknown(String),
}

/// Knowledge about the ambient category a window was cut from.
pub trait Ambient {
    fn outside(&self, cat: &FinCategory, c: &Construction) -> Outside;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lookup {
    Found(Cone),
    Escaped,
    Absent,
}

impl Lookup {
    pub fn found(&self) -> Option<&Cone> {
        match self {
            Lookup::Found(c) => Some(c),
            _ => None,
        }
    }
}

/// Kernel pair `(p0, p1): P ⇉ X` of `f: X → Y`, with diagonal `σ: X → P`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KernelPair {
    pub apex: ObjId,
    pub p0: MorId,
    pub p1: MorId,
    pub diagonal: MorId,
}

pub struct Engine<'a> {
    cat: &'a FinCategory,
    meter: Meter,
    ambient: Option<&'a dyn Ambient>,
    zero: OnceCell<Option<ObjId>>,
    mono: OnceCell<Vec<bool>>,
    epi: OnceCell<Vec<bool>>,
    inverse: OnceCell<Vec<Option<MorId>>>,
    strong_epi: OnceCell<Vec<bool>>,
    universals: RefCell<HashMap<Construction, Rc<Universal>>>,
    lookups: RefCell<HashMap<Construction, Lookup>>,
    regular_epi: RefCell<HashMap<MorId, bool>>,
    kernel_mono: RefCell<HashMap<MorId, bool>>,
    cokernel_epi: RefCell<HashMap<MorId, bool>>,
}

impl<'a> Engine<'a> {
    pub fn new(cat: &'a FinCategory, budget: Budget) -> Self {
        Engine {
            cat,
            meter: Meter::new(budget),
            ambient: None,
            zero: OnceCell::new(),
            mono: OnceCell::new(),
            epi: OnceCell::new(),
            inverse: OnceCell::new(),
            strong_epi: OnceCell::new(),
            universals: RefCell::default(),
            lookups: RefCell::default(),
            regular_epi: RefCell::default(),
            kernel_mono: RefCell::default(),
            cokernel_epi: RefCell::default(),
        }
    }

    pub fn with_ambient(mut self, ambient: &'a dyn Ambient) -> Self {
        self.ambient = Some(ambient);
        self
    }

    pub fn cat(&self) -> &'a FinCategory {
        self.cat
    }

    pub fn meter(&self) -> &Meter {
        &self.meter
    }

    pub fn budget(&self) -> Budget {
        self.meter.budget
    }

    /// Starts a fresh wall-clock window; caches are kept.
    pub fn restart_clock(&mut self) {
        self.meter = Meter::new(self.meter.budget);
    }

    // ---- pointedness ----

    pub fn zero_object(&self) -> Option<ObjId> {
        *self.zero.get_or_init(|| {
            let c = self.cat;
            c.objects().find(|&z| c.objects().all(|x| c.hom(z, x).len() == 1 && c.hom(x, z).len() == 1))
        })
    }

    pub fn is_pointed(&self) -> bool {
        self.zero_object().is_some()
    }

    pub fn require_zero(&self) -> Result<ObjId> {
        self.zero_object().ok_or_else(|| Error::Invalid("category is not pointed".into()))
    }

    /// Whether `o` is a zero object (any zero object, not only the chosen one).
    pub fn is_zero_obj(&self, o: ObjId) -> bool {
        let c = self.cat;
        c.objects().all(|x| c.hom(o, x).len() == 1 && c.hom(x, o).len() == 1)
    }

    /// The zero morphism `a → 0 → b`.
    pub fn zero(&self, a: ObjId, b: ObjId) -> Result<MorId> {
        let z = self.require_zero()?;
        Ok(self.cat.comp(self.cat.hom(z, b)[0], self.cat.hom(a, z)[0]))
    }

    pub fn is_zero_mor(&self, f: MorId) -> Result<bool> {
        Ok(self.zero(self.cat.dom(f), self.cat.cod(f))? == f)
    }

    // ---- mono / epi / iso ----

    /// A pair `u ≠ v` into `dom f` with `f∘u = f∘v`, if any.
    pub fn mono_witness(&self, f: MorId) -> Option<(MorId, MorId)> {
        let c = self.cat;
        let a = c.dom(f);
        for t in c.objects() {
            let mut seen: HashMap<MorId, MorId> = HashMap::new();
            for &u in c.hom(t, a) {
                if let Some(&v) = seen.get(&c.comp(f, u)) {
                    return Some((v, u));
                }
                seen.insert(c.comp(f, u), u);
            }
        }
        None
    }

    /// A pair `u ≠ v` out of `cod f` with `u∘f = v∘f`, if any.
    pub fn epi_witness(&self, f: MorId) -> Option<(MorId, MorId)> {
        self.epi_family_witness(&[f])
    }

    /// Distinct `u, v` with `u∘f_i = v∘f_i` for every member of the family.
    pub fn epi_family_witness(&self, fs: &[MorId]) -> Option<(MorId, MorId)> {
        let c = self.cat;
        let b = c.cod(fs[0]);
        for z in c.objects() {
            let mut seen: HashMap<Vec<MorId>, MorId> = HashMap::new();
            for &u in c.hom(b, z) {
                let key: Vec<MorId> = fs.iter().map(|&f| c.comp(u, f)).collect();
                if let Some(&v) = seen.get(&key) {
                    return Some((v, u));
                }
                seen.insert(key, u);
            }
        }
        None
    }

    pub fn is_mono(&self, f: MorId) -> bool {
        self.mono.get_or_init(|| self.cat.morphisms().map(|f| self.mono_witness(f).is_none()).collect())[f]
    }

    pub fn is_epi(&self, f: MorId) -> bool {
        self.epi.get_or_init(|| self.cat.morphisms().map(|f| self.epi_witness(f).is_none()).collect())[f]
    }

    pub fn is_epimorphic_family(&self, fs: &[MorId]) -> bool {
        self.epi_family_witness(fs).is_none()
    }

    pub fn jointly_monic_witness(&self, fs: &[MorId]) -> Option<(MorId, MorId)> {
        let c = self.cat;
        let a = c.dom(fs[0]);
        for t in c.objects() {
            let mut seen: HashMap<Vec<MorId>, MorId> = HashMap::new();
            for &u in c.hom(t, a) {
                let key: Vec<MorId> = fs.iter().map(|&f| c.comp(f, u)).collect();
                if let Some(&v) = seen.get(&key) {
                    return Some((v, u));
                }
                seen.insert(key, u);
            }
        }
        None
    }

    pub fn inverse(&self, f: MorId) -> Option<MorId> {
        self.inverse.get_or_init(|| {
            let c = self.cat;
            c.morphisms()
                .map(|f| {
                    let (a, b) = (c.dom(f), c.cod(f));
                    c.hom(b, a).iter().copied().find(|&g| c.comp(g, f) == c.id(a) && c.comp(f, g) == c.id(b))
                })
                .collect()
        })[f]
    }

    pub fn is_iso(&self, f: MorId) -> bool {
        self.inverse(f).is_some()
    }

    /// Some `g` with `m∘g = f`.
    pub fn factor_through(&self, f: MorId, m: MorId) -> Option<MorId> {
        let c = self.cat;
        if c.cod(f) != c.cod(m) {
            return None;
        }
        c.hom(c.dom(f), c.dom(m)).iter().copied().find(|&g| c.comp(m, g) == f)
    }

    /// Some `h` with `h∘e = f`.
    pub fn cofactor_through(&self, f: MorId, e: MorId) -> Option<MorId> {
        let c = self.cat;
        if c.dom(f) != c.dom(e) {
            return None;
        }
        c.hom(c.cod(e), c.cod(f)).iter().copied().find(|&h| c.comp(h, e) == f)
    }

    /// A non-iso mono `m` through which every `f_i` factors, with the factorizations.
    pub fn strong_family_witness(&self, fs: &[MorId]) -> Option<(MorId, Vec<MorId>)> {
        let c = self.cat;
        let y = c.cod(fs[0]);
        for m in c.into_obj(y) {
            if !self.is_mono(m) || self.is_iso(m) {
                continue;
            }
            let gs: Option<Vec<MorId>> = fs.iter().map(|&f| self.factor_through(f, m)).collect();
            if let Some(gs) = gs {
                return Some((m, gs));
            }
        }
        None
    }

    pub fn is_strongly_epimorphic_family(&self, fs: &[MorId]) -> bool {
        self.strong_family_witness(fs).is_none()
    }

    /// `(m, g)` with `f = m∘g`, `m` mono and not iso.
    pub fn strong_epi_witness(&self, f: MorId) -> Option<(MorId, MorId)> {
        self.strong_family_witness(&[f]).map(|(m, gs)| (m, gs[0]))
    }

    pub fn is_strong_epi(&self, f: MorId) -> bool {
        self.strong_epi.get_or_init(|| self.cat.morphisms().map(|f| self.strong_epi_witness(f).is_none()).collect())[f]
    }

    // ---- universal constructions ----

    pub fn universal(&self, c: Construction) -> Result<Rc<Universal>> {
        if let Some(u) = self.universals.borrow().get(&c) {
            return Ok(u.clone());
        }
        let u = Rc::new(Universal::for_construction(self.cat, c, &self.meter)?);
        self.universals.borrow_mut().insert(c, u.clone());
        Ok(u)
    }

    /// Finds the construction in the window; if absent, asks the ambient.
    /// Undecidable cases surface as [`Error::OutOfBudget`].
    pub fn construct(&self, c: Construction) -> Result<Lookup> {
        if let Some(l) = self.lookups.borrow().get(&c) {
            return Ok(l.clone());
        }
        if self.meter.budget.max_apexes == 0 {
            return Err(Error::OutOfBudget("candidate apex cap 0 reached".into()));
        }
        let u = self.universal(c)?;
        let l = match u.search(self.cat, &self.meter)? {
            Search::Found(cone) => Lookup::Found(cone),
            Search::Absent => match self.ambient.map(|a| a.outside(self.cat, &c)) {
                None | Some(Outside::Absent) => Lookup::Absent,
                Some(Outside::Escapes) => Lookup::Escaped,
                Some(Outside::Unknown(why)) => return Err(Error::OutOfBudget(why)),
            },
        };
        self.lookups.borrow_mut().insert(c, l.clone());
        Ok(l)
    }

    pub fn is_universal(&self, c: Construction, cone: &Cone) -> Result<bool> {
        Ok(self.universal(c)?.is_universal(self.cat, cone))
    }

    /// Is `e` an equalizer of `(f, g)`?
    pub fn is_equalizer(&self, e: MorId, f: MorId, g: MorId) -> Result<bool> {
        let c = self.cat;
        if c.cod(e) != c.dom(f) {
            return Ok(false);
        }
        let cone = Cone { apex: c.dom(e), legs: vec![e, c.comp(f, e)] };
        self.is_universal(Construction::Equalizer(f, g), &cone)
    }

    /// Is `q` a coequalizer of `(f, g)`?
    pub fn is_coequalizer(&self, q: MorId, f: MorId, g: MorId) -> Result<bool> {
        let c = self.cat;
        if c.dom(q) != c.cod(f) {
            return Ok(false);
        }
        let cone = Cone { apex: c.cod(q), legs: vec![c.comp(q, f), q] };
        self.is_universal(Construction::Coequalizer(f, g), &cone)
    }

    /// Is `k` a kernel of `f`?
    pub fn is_kernel_of(&self, k: MorId, f: MorId) -> Result<bool> {
        let z = self.zero(self.cat.dom(f), self.cat.cod(f))?;
        self.is_equalizer(k, f, z)
    }

    /// Is `q` a cokernel of `f`?
    pub fn is_cokernel_of(&self, q: MorId, f: MorId) -> Result<bool> {
        let z = self.zero(self.cat.dom(f), self.cat.cod(f))?;
        self.is_coequalizer(q, f, z)
    }

    /// Is `(p0, p1)` a pullback of the cospan `(f, g)`?
    pub fn is_pullback(&self, p0: MorId, p1: MorId, f: MorId, g: MorId) -> Result<bool> {
        let c = self.cat;
        if c.dom(p0) != c.dom(p1) || c.cod(p0) != c.dom(f) || c.cod(p1) != c.dom(g) {
            return Ok(false);
        }
        let cone = Cone { apex: c.dom(p0), legs: vec![p0, p1, c.comp(f, p0)] };
        self.is_universal(Construction::Pullback(f, g), &cone)
    }

    /// Kernel of `f` as a mono into `dom f`.
    pub fn kernel(&self, f: MorId) -> Result<Option<MorId>> {
        let z = self.zero(self.cat.dom(f), self.cat.cod(f))?;
        Ok(self.construct(Construction::Equalizer(f, z))?.found().map(|c| c.legs[0]))
    }

    /// Cokernel of `f` as an arrow out of `cod f`.
    pub fn cokernel(&self, f: MorId) -> Result<Option<MorId>> {
        let z = self.zero(self.cat.dom(f), self.cat.cod(f))?;
        Ok(self.construct(Construction::Coequalizer(f, z))?.found().map(|c| c.legs[1]))
    }

    pub fn pullback(&self, f: MorId, g: MorId) -> Result<Lookup> {
        self.construct(Construction::Pullback(f, g))
    }

    pub fn kernel_pair(&self, f: MorId) -> Result<Option<KernelPair>> {
        let c = self.cat;
        let Lookup::Found(cone) = self.pullback(f, f)? else {
            return Ok(None);
        };
        let x = c.dom(f);
        let id = c.id(x);
        let diag = Cone { apex: x, legs: vec![id, id, f] };
        let u = self.universal(Construction::Pullback(f, f))?;
        let diagonal =
            u.mediate(c, &cone, &diag).ok_or_else(|| Error::Inconsistent("kernel pair without diagonal".into()))?;
        Ok(Some(KernelPair { apex: cone.apex, p0: cone.legs[0], p1: cone.legs[1], diagonal }))
    }

    // ---- regular epis, kernels, cokernels ----

    /// `Some(verdict)` when the kernel pair lies in the window.
    pub fn regular_epi_via_kernel_pair(&self, f: MorId) -> Result<Option<bool>> {
        match self.kernel_pair(f)? {
            Some(kp) => Ok(Some(self.is_coequalizer(f, kp.p0, kp.p1)?)),
            None => Ok(None),
        }
    }

    /// A parallel pair in the window that `f` coequalizes universally.
    pub fn regular_epi_pair(&self, f: MorId) -> Result<Option<(MorId, MorId)>> {
        let c = self.cat;
        let x = c.dom(f);
        let mut visited = 0usize;
        for t in c.objects() {
            let hom = c.hom(t, x);
            for (i, &u) in hom.iter().enumerate() {
                for &v in &hom[i..] {
                    visited += 1;
                    self.meter.check_pairs(visited)?;
                    if c.comp(f, u) == c.comp(f, v) && self.is_coequalizer(f, u, v)? {
                        return Ok(Some((u, v)));
                    }
                }
            }
            self.meter.check_time()?;
        }
        Ok(None)
    }

    /// Coequalizer of its kernel pair when that exists; otherwise a coequalizer of
    /// any parallel pair. Both routes run when both can, and must agree.
    pub fn is_regular_epi(&self, f: MorId) -> Result<bool> {
        if let Some(&v) = self.regular_epi.borrow().get(&f) {
            return Ok(v);
        }
        let v = if !self.is_epi(f) {
            false
        } else {
            let existential = self.regular_epi_pair(f)?.is_some();
            if let Some(via_kp) = self.regular_epi_via_kernel_pair(f)? {
                if via_kp != existential {
                    return Err(Error::Inconsistent(format!(
                        "regular-epi routes disagree on {}",
                        self.cat.mor_name(f)
                    )));
                }
            }
            existential
        };
        self.regular_epi.borrow_mut().insert(f, v);
        Ok(v)
    }

    /// Is `m` the kernel of some morphism? Decided as "kernel of its cokernel",
    /// cross-checked against a search over all morphisms out of `cod m`.
    pub fn is_kernel_mono(&self, m: MorId) -> Result<bool> {
        if let Some(&v) = self.kernel_mono.borrow().get(&m) {
            return Ok(v);
        }
        let v = if !self.is_mono(m) {
            false
        } else {
            let mut existential = false;
            for g in self.cat.out_of(self.cat.cod(m)) {
                if self.is_kernel_of(m, g)? {
                    existential = true;
                    break;
                }
            }
            if let Some(q) = self.cokernel(m)? {
                if self.is_kernel_of(m, q)? != existential {
                    return Err(Error::Inconsistent(format!("kernel routes disagree on {}", self.cat.mor_name(m))));
                }
            }
            existential
        };
        self.kernel_mono.borrow_mut().insert(m, v);
        Ok(v)
    }

    /// Is `q` the cokernel of some morphism? Dual of [`Engine::is_kernel_mono`].
    pub fn is_cokernel_epi(&self, q: MorId) -> Result<bool> {
        if let Some(&v) = self.cokernel_epi.borrow().get(&q) {
            return Ok(v);
        }
        let v = if !self.is_epi(q) {
            false
        } else {
            let mut existential = false;
            for g in self.cat.into_obj(self.cat.dom(q)) {
                if self.is_cokernel_of(q, g)? {
                    existential = true;
                    break;
                }
            }
            if let Some(k) = self.kernel(q)? {
                if self.is_cokernel_of(q, k)? != existential {
                    return Err(Error::Inconsistent(format!("cokernel routes disagree on {}", self.cat.mor_name(q))));
                }
            }
            existential
        };
        self.cokernel_epi.borrow_mut().insert(q, v);
        Ok(v)
    }

    /// `(e, m)` with `f = m∘e`, `e` a regular epi and `m` a mono. Returns the
    /// first such pair in id order, or `None` when the window has none.
    pub fn image_factorization(&self, f: MorId) -> Result<Option<(MorId, MorId)>> {
        let c = self.cat;
        for m in c.into_obj(c.cod(f)) {
            if !self.is_mono(m) {
                continue;
            }
            if let Some(e) = self.factor_through(f, m) {
                if self.is_regular_epi(e)? {
                    return Ok(Some((e, m)));
                }
            }
        }
        Ok(None)
    }

    /// Whether `f: A → B` has trivial kernel, i.e. its kernel's apex is a zero object.
    pub fn has_zero_kernel(&self, f: MorId) -> Result<Option<bool>> {
        Ok(self.kernel(f)?.map(|k| self.is_zero_obj(self.cat.dom(k))))
    }
}
