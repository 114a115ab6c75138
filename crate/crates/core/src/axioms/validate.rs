//! Independent re-checking of failure witnesses.
//!
//! Each validator takes the witness category and its labelled morphisms and
//! decides whether the claimed failure holds there, using only the roles.

use super::diagrams::relation_props;
use super::Check;
use crate::engine::{Engine, Lookup};
use crate::error::{Error, Result};
use crate::fincat::solver::{Cone, Construction};
use crate::fincat::{MorId, RolesSection};

struct Roles<'r>(&'r RolesSection);

impl Roles<'_> {
    fn get(&self, l: &str) -> Result<MorId> {
        self.0.get(l).ok_or_else(|| Error::Invalid(format!("witness lacks role `{l}`")))
    }

    fn has(&self, l: &str) -> bool {
        self.0.get(l).is_some()
    }
}

fn split_ext(e: &Engine, r: &Roles, [p, s, k]: [&str; 3]) -> Result<bool> {
    let c = e.cat();
    let (p, s, k) = (r.get(p)?, r.get(s)?, r.get(k)?);
    Ok(c.try_comp(p, s) == Some(c.id(c.cod(p))) && c.cod(k) == c.dom(p) && e.is_kernel_of(k, p)?)
}

fn coproduct_cone(e: &Engine, r: &Roles) -> Result<bool> {
    let c = e.cat();
    let (i0, i1, cp) = (r.get("i0")?, r.get("i1")?, r.get("c")?);
    let cone = Cone { apex: c.cod(i0), legs: vec![i0, i1] };
    Ok(c.cod(i1) == c.cod(i0)
        && e.is_universal(Construction::Coproduct(c.dom(i0), c.dom(i1)), &cone)?
        && c.try_comp(cp, i0) == Some(r.get("k")?)
        && c.try_comp(cp, i1) == Some(r.get("s")?))
}

fn absent(e: &Engine, con: Construction) -> Result<bool> {
    Ok(con.well_formed(e.cat()) && e.construct(con)? == Lookup::Absent)
}

fn distinct_equalized(e: &Engine, f: MorId, u: MorId, v: MorId) -> bool {
    let c = e.cat();
    u != v && c.try_comp(f, u).is_some() && c.try_comp(f, u) == c.try_comp(f, v)
}

fn condition_a(e: &Engine, r: &Roles) -> Result<bool> {
    let c = e.cat();
    let (m, f, t) = (r.get("m")?, r.get("f")?, r.get("t")?);
    Ok(split_ext(e, r, ["p", "s", "k"])?
        && e.is_mono(m)
        && !e.is_iso(m)
        && c.try_comp(m, f) == Some(r.get("k")?)
        && c.try_comp(m, t) == Some(r.get("s")?))
}

fn ssfl(e: &Engine, r: &Roles, strong: bool) -> Result<bool> {
    let c = e.cat();
    let (l, m, n) = (r.get("l")?, r.get("m")?, r.get("n")?);
    let (q, rr, i, p, s, k) = (r.get("q")?, r.get("r")?, r.get("i")?, r.get("p")?, r.get("s")?, r.get("k")?);
    let commutes = c.try_comp(n, q).is_some()
        && c.try_comp(n, q) == c.try_comp(p, m)
        && c.try_comp(m, rr).is_some()
        && c.try_comp(m, rr) == c.try_comp(s, n)
        && c.try_comp(m, i).is_some()
        && c.try_comp(m, i) == c.try_comp(k, l);
    if !(commutes && split_ext(e, r, ["q", "r", "i"])? && split_ext(e, r, ["p", "s", "k"])?) {
        return Ok(false);
    }
    if strong {
        let (u, g) = (r.get("u")?, r.get("g")?);
        Ok(e.is_strong_epi(l) && e.is_strong_epi(n) && e.is_mono(u) && !e.is_iso(u) && c.try_comp(u, g) == Some(m))
    } else {
        Ok(e.is_iso(l) && e.is_iso(n) && !e.is_iso(m))
    }
}

/// Whether the failure recorded by a witness of `check` reproduces in `e`'s category.
pub fn validate(e: &Engine, check: Check, roles: &RolesSection) -> Result<bool> {
    let c = e.cat();
    let r = Roles(roles);
    match check {
        Check::A1 | Check::A1p => {
            if r.has("prod_a") {
                absent(e, Construction::Product(c.dom(r.get("prod_a")?), c.dom(r.get("prod_b")?)))
            } else if r.has("coprod_a") {
                absent(e, Construction::Coproduct(c.dom(r.get("coprod_a")?), c.dom(r.get("coprod_b")?)))
            } else if r.has("eq_f") {
                absent(e, Construction::Equalizer(r.get("eq_f")?, r.get("eq_g")?))
            } else {
                absent(e, Construction::Coequalizer(r.get("coeq_f")?, r.get("coeq_g")?))
            }
        }
        Check::A2 if r.has("m") => condition_a(e, &r),
        Check::A2 => {
            Ok(split_ext(e, &r, ["p", "s", "k"])? && coproduct_cone(e, &r)? && !e.is_cokernel_epi(r.get("c")?)?)
        }
        Check::CondA | Check::Proto => condition_a(e, &r),
        Check::CondB => {
            let (f, g, s, k, q) = (r.get("f")?, r.get("g")?, r.get("s")?, r.get("k")?, r.get("q")?);
            let id = c.id(c.cod(f));
            if c.try_comp(f, s) != Some(id) || c.try_comp(g, s) != Some(id) || !e.is_kernel_of(k, f)? {
                return Ok(false);
            }
            Ok(e.is_coequalizer(q, f, g)? != e.is_cokernel_of(q, c.comp(g, k))?)
        }
        Check::CondC => {
            let (f, k) = (r.get("f")?, r.get("k")?);
            Ok(e.is_kernel_of(k, f)? && e.is_zero_obj(c.dom(k)) && distinct_equalized(e, f, r.get("u")?, r.get("v")?))
        }
        Check::CondD => {
            let (i, q, l, k, m, p, n) =
                (r.get("i")?, r.get("q")?, r.get("l")?, r.get("k")?, r.get("m")?, r.get("p")?, r.get("n")?);
            Ok(e.is_kernel_of(i, q)?
                && e.is_mono(l)
                && e.is_mono(k)
                && e.is_mono(n)
                && c.try_comp(m, i).is_some()
                && c.try_comp(m, i) == c.try_comp(k, l)
                && c.try_comp(n, q).is_some()
                && c.try_comp(n, q) == c.try_comp(p, m)
                && distinct_equalized(e, m, r.get("u")?, r.get("v")?))
        }
        Check::CondE => {
            let (f, u, v) = (r.get("f")?, r.get("u")?, r.get("v")?);
            Ok(e.is_coequalizer(f, u, v)? && !e.is_cokernel_epi(f)?)
        }
        Check::CondF => {
            let (cp, m, g) = (r.get("c")?, r.get("m")?, r.get("g")?);
            Ok(split_ext(e, &r, ["p", "s", "k"])?
                && coproduct_cone(e, &r)?
                && e.is_mono(m)
                && !e.is_iso(m)
                && c.try_comp(m, g) == Some(cp))
        }
        Check::SsflIso => ssfl(e, &r, false),
        Check::SsflStrong => ssfl(e, &r, true),
        Check::A3 => {
            let (q, f, p0, p1) = (r.get("q")?, r.get("f")?, r.get("p0")?, r.get("p1")?);
            Ok(e.is_cokernel_epi(q)? && e.is_pullback(p0, p1, q, f)? && !e.is_cokernel_epi(p1)?)
        }
        Check::A4 => {
            let (k, g, ep, m) = (r.get("k")?, r.get("g")?, r.get("e")?, r.get("m")?);
            Ok(e.is_kernel_mono(k)?
                && e.is_cokernel_epi(g)?
                && c.try_comp(g, k).is_some()
                && c.try_comp(m, ep) == c.try_comp(g, k)
                && e.is_regular_epi(ep)?
                && e.is_mono(m)
                && !e.is_kernel_mono(m)?)
        }
        Check::A4p => {
            let (f, g, h, k) = (r.get("f")?, r.get("g")?, r.get("h")?, r.get("k")?);
            Ok(e.is_kernel_mono(f)?
                && e.is_regular_epi(g)?
                && e.is_regular_epi(h)?
                && e.is_mono(k)
                && c.try_comp(k, g).is_some()
                && c.try_comp(k, g) == c.try_comp(h, f)
                && !e.is_kernel_mono(k)?)
        }
        Check::Regular => {
            let f = r.get("f")?;
            if r.has("g") {
                let (g, p0, p1) = (r.get("g")?, r.get("p0")?, r.get("p1")?);
                Ok(e.is_regular_epi(f)? && e.is_pullback(p0, p1, f, g)? && !e.is_regular_epi(p1)?)
            } else if r.has("p0") {
                let (p0, p1) = (r.get("p0")?, r.get("p1")?);
                Ok(e.is_pullback(p0, p1, f, f)? && absent(e, Construction::Coequalizer(p0, p1))?)
            } else {
                Ok(e.image_factorization(f)?.is_none())
            }
        }
        Check::Exact => {
            let (r0, r1) = (r.get("r0")?, r.get("r1")?);
            if !relation_props(e, r0, r1)?.is_equivalence() {
                return Ok(false);
            }
            if !r.has("q") {
                return absent(e, Construction::Coequalizer(r0, r1));
            }
            let (q, p0, p1, i) = (r.get("q")?, r.get("p0")?, r.get("p1")?, r.get("i")?);
            Ok(e.is_coequalizer(q, r0, r1)?
                && e.is_pullback(p0, p1, q, q)?
                && c.try_comp(p0, i) == Some(r0)
                && c.try_comp(p1, i) == Some(r1)
                && !e.is_iso(i))
        }
        Check::Equiv => Ok(!relation_props(e, r.get("r0")?, r.get("r1")?)?.is_equivalence()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::testutil::{engine, window};
    use crate::axioms::{run_check, Options};
    use crate::backend::Backend;

    #[test]
    fn altered_roles_do_not_reproduce() {
        let m = window(Backend::PointedSet, 3);
        let e = engine!(m);
        let o = run_check(&e, Check::CondC, Options::default()).unwrap();
        let w = &o.witnesses[0];
        let mut roles = RolesSection(w.roles.clone());
        assert!(validate(&e, Check::CondC, &roles).unwrap());
        let v = roles.get("v").unwrap();
        for r in roles.0.iter_mut().filter(|(l, _)| l == "u") {
            r.1 = v;
        }
        assert!(!validate(&e, Check::CondC, &roles).unwrap());
    }

    #[test]
    fn missing_role_is_an_input_error() {
        let m = window(Backend::PointedSet, 2);
        let e = engine!(m);
        assert!(matches!(validate(&e, Check::CondE, &RolesSection::default()), Err(Error::Invalid(_))));
    }
}
