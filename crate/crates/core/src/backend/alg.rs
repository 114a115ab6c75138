//! Finite algebras given by tables: pointed sets, monoids, groups and pairs
//! of groups. Element 0 is always the unit (or basepoint).

use std::collections::HashMap;

use crate::error::{Error, Result};

/// A finite pointed set (no operation), monoid or group (Cayley table), with an
/// optional marked subgroup for pairs of groups.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Algebra {
    pub size: usize,
    pub op: Option<Vec<usize>>,
    /// Sorted elements of the marked subgroup (pairs of groups only).
    pub marked: Option<Vec<usize>>,
}

/// Element maps between carriers; `map[x]` is the image of `x`.
pub type Map = Vec<usize>;

impl Algebra {
    pub fn pointed_set(size: usize) -> Self {
        assert!(size >= 1);
        Algebra { size, op: None, marked: None }
    }

    pub fn from_table(size: usize, table: Vec<usize>) -> Self {
        assert_eq!(table.len(), size * size);
        Algebra { size, op: Some(table), marked: None }
    }

    pub fn trivial_group() -> Self {
        Algebra::from_table(1, vec![0])
    }

    pub fn cyclic(n: usize) -> Self {
        Algebra::from_table(n, (0..n * n).map(|i| (i / n + i % n) % n).collect())
    }

    /// Symmetric group on three letters, elements listed in a fixed order.
    pub fn s3() -> Self {
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 0, 2], [0, 2, 1], [2, 1, 0]];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let mut t = vec![0; 36];
        for (i, a) in perms.iter().enumerate() {
            for (j, b) in perms.iter().enumerate() {
                // (a·b)(x) = a(b(x))
                t[i * 6 + j] = idx([a[b[0]], a[b[1]], a[b[2]]]);
            }
        }
        Algebra::from_table(6, t)
    }

    pub fn with_marked(mut self, marked: Vec<usize>) -> Self {
        let mut m = marked;
        m.sort_unstable();
        m.dedup();
        self.marked = Some(m);
        self
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.op {
            Some(t) => t[a * self.size + b],
            None => panic!("pointed sets carry no operation"),
        }
    }

    pub fn has_op(&self) -> bool {
        self.op.is_some()
    }

    pub fn is_associative(&self) -> bool {
        let n = self.size;
        (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c)))))
    }

    pub fn has_unit_zero(&self) -> bool {
        (0..self.size).all(|a| self.mul(0, a) == a && self.mul(a, 0) == a)
    }

    pub fn inverse(&self, a: usize) -> Option<usize> {
        (0..self.size).find(|&b| self.mul(a, b) == 0 && self.mul(b, a) == 0)
    }

    pub fn is_group(&self) -> bool {
        self.has_op()
            && self.is_associative()
            && self.has_unit_zero()
            && (0..self.size).all(|a| self.inverse(a).is_some())
    }

    pub fn is_monoid(&self) -> bool {
        self.has_op() && self.is_associative() && self.has_unit_zero()
    }

    pub fn is_commutative(&self) -> bool {
        match &self.op {
            None => true,
            Some(_) => (0..self.size).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a))),
        }
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.size).filter(|&a| (0..self.size).all(|b| self.mul(a, b) == self.mul(b, a))).collect()
    }

    /// Subgroup generated by all commutators `a b a⁻¹ b⁻¹`.
    pub fn derived_subgroup(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        for a in 0..self.size {
            for b in 0..self.size {
                let (ai, bi) = (self.inverse(a).unwrap(), self.inverse(b).unwrap());
                gens.push(self.mul(self.mul(a, b), self.mul(ai, bi)));
            }
        }
        members(&self.closure(&gens))
    }

    /// `[[G, G], G]` is trivial.
    pub fn nilpotent_class_at_most_two(&self) -> bool {
        let center = self.center();
        self.derived_subgroup().iter().all(|x| center.contains(x))
    }

    /// Order of an element in a group (or the period of its powers reaching 0).
    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 && k <= self.size {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// `(index, period)` of the cyclic subsemigroup generated by `a`.
    pub fn power_profile(&self, a: usize) -> (usize, usize) {
        let mut seen: HashMap<usize, usize> = HashMap::new();
        let mut x = a;
        let mut k = 1;
        loop {
            if let Some(&j) = seen.get(&x) {
                return (j, k - j);
            }
            seen.insert(x, k);
            x = self.mul(x, a);
            k += 1;
        }
    }

    /// Smallest substructure containing `s` and the unit.
    pub fn closure(&self, s: &[usize]) -> Vec<bool> {
        let mut inside = vec![false; self.size];
        inside[0] = true;
        let mut frontier: Vec<usize> = vec![0];
        for &x in s {
            if !inside[x] {
                inside[x] = true;
                frontier.push(x);
            }
        }
        if self.op.is_none() {
            return inside;
        }
        let mut members: Vec<usize> = (0..self.size).filter(|&x| inside[x]).collect();
        while let Some(a) = frontier.pop() {
            let snapshot = members.clone();
            for b in snapshot {
                for p in [self.mul(a, b), self.mul(b, a)] {
                    if !inside[p] {
                        inside[p] = true;
                        members.push(p);
                        frontier.push(p);
                    }
                }
            }
        }
        inside
    }

    /// A generating set chosen greedily in element order.
    pub fn generators(&self) -> Vec<usize> {
        if self.op.is_none() {
            return (1..self.size).collect();
        }
        let mut gens = Vec::new();
        let mut inside = self.closure(&[]);
        for x in 0..self.size {
            if !inside[x] {
                gens.push(x);
                inside = self.closure(&gens);
            }
        }
        gens
    }

    pub fn is_marked(&self, x: usize) -> bool {
        self.marked.as_ref().is_some_and(|m| m.binary_search(&x).is_ok())
    }

    /// Does `map` preserve unit/basepoint, operation and marked subgroup?
    pub fn is_hom(&self, target: &Algebra, map: &[usize]) -> bool {
        if map.len() != self.size || map[0] != 0 || map.iter().any(|&y| y >= target.size) {
            return false;
        }
        if self.op.is_some() {
            for a in 0..self.size {
                for b in 0..self.size {
                    if map[self.mul(a, b)] != target.mul(map[a], map[b]) {
                        return false;
                    }
                }
            }
        }
        if let Some(m) = &self.marked {
            if m.iter().any(|&a| !target.is_marked(map[a])) {
                return false;
            }
        }
        true
    }

    /// All structure-preserving maps into `target`, in lexicographic order of the
    /// generator images. Maps are determined by their values on generators.
    pub fn homs(&self, target: &Algebra, cap: usize) -> Result<Vec<Map>> {
        let gens = self.generators();
        let candidates = target.size.checked_pow(gens.len() as u32).unwrap_or(usize::MAX);
        if candidates > cap {
            return Err(Error::OutOfBudget(format!(
                "hom enumeration needs {candidates} candidate assignments, cap {cap}"
            )));
        }
        // Each non-generator element x is reached as x = a·g from an earlier element a.
        let mut plan = Vec::new();
        if self.op.is_some() {
            let mut known = vec![false; self.size];
            known[0] = true;
            for &g in &gens {
                known[g] = true;
            }
            let mut order: Vec<usize> = std::iter::once(0).chain(gens.iter().copied()).collect();
            let mut i = 0;
            while i < order.len() {
                let a = order[i];
                for &g in &gens {
                    let x = self.mul(a, g);
                    if !known[x] {
                        known[x] = true;
                        order.push(x);
                        plan.push((x, a, g));
                    }
                }
                i += 1;
            }
        }
        let mut out = Vec::new();
        let mut assign = vec![0usize; gens.len()];
        loop {
            let mut map = vec![usize::MAX; self.size];
            map[0] = 0;
            for (g, &img) in gens.iter().zip(&assign) {
                map[*g] = img;
            }
            for &(x, a, g) in &plan {
                map[x] = target.mul(map[a], map[g]);
            }
            if self.is_hom(target, &map) {
                out.push(map);
            }
            // odometer, last generator fastest
            let mut k = gens.len();
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                assign[k] += 1;
                if assign[k] < target.size {
                    break;
                }
                assign[k] = 0;
            }
        }
    }

    /// Invariants preserved by isomorphisms; cheap filter before explicit search.
    pub fn fingerprint(&self) -> Vec<usize> {
        let mut fp = vec![self.size, self.op.is_some() as usize];
        if self.op.is_some() {
            fp.push(self.is_commutative() as usize);
            fp.push(self.center().len());
            let mut prof: Vec<(usize, usize)> = (0..self.size).map(|a| self.power_profile(a)).collect();
            prof.sort_unstable();
            fp.extend(prof.into_iter().flat_map(|(i, p)| [i, p]));
            fp.push((0..self.size).filter(|&a| self.mul(a, a) == a).count());
        }
        if let Some(m) = &self.marked {
            fp.push(m.len());
            if self.op.is_some() {
                let mut prof: Vec<(usize, usize)> = m.iter().map(|&a| self.power_profile(a)).collect();
                prof.sort_unstable();
                fp.extend(prof.into_iter().flat_map(|(i, p)| [i, p]));
            }
        }
        fp
    }

    /// An isomorphism onto `other` (as an element map), if one exists.
    pub fn isomorphism(&self, other: &Algebra) -> Option<Map> {
        if self.size != other.size || self.fingerprint() != other.fingerprint() {
            return None;
        }
        let homs = self.homs(other, usize::MAX).ok()?;
        homs.into_iter().find(|h| {
            let mut hit = vec![false; other.size];
            h.iter().for_each(|&y| hit[y] = true);
            hit.iter().all(|&b| b)
                && self.marked.as_ref().map_or(0, |m| m.len()) == other.marked.as_ref().map_or(0, |m| m.len())
        })
    }

    pub fn is_isomorphic(&self, other: &Algebra) -> bool {
        self.isomorphism(other).is_some()
    }

    /// Substructure on `subset` (must contain 0 and be closed), relabelled in order,
    /// with its inclusion map.
    pub fn sub(&self, subset: &[bool]) -> (Algebra, Map) {
        let incl: Vec<usize> = members(subset);
        let index: HashMap<usize, usize> = incl.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let k = incl.len();
        let op = self.op.as_ref().map(|_| {
            let mut t = vec![0; k * k];
            for i in 0..k {
                for j in 0..k {
                    t[i * k + j] = index[&self.mul(incl[i], incl[j])];
                }
            }
            t
        });
        let marked = self.marked.as_ref().map(|m| m.iter().filter_map(|x| index.get(x).copied()).collect::<Vec<_>>());
        (Algebra { size: k, op, marked }, incl)
    }

    /// Smallest congruence containing `pairs` (for pointed sets: the generated equivalence).
    pub fn congruence(&self, pairs: &[(usize, usize)]) -> Vec<usize> {
        let n = self.size;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        let mut queue: Vec<(usize, usize)> = pairs.to_vec();
        while let Some((a, b)) = queue.pop() {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                continue;
            }
            parent[ra.max(rb)] = ra.min(rb);
            if self.op.is_some() {
                for c in 0..n {
                    queue.push((self.mul(c, a), self.mul(c, b)));
                    queue.push((self.mul(a, c), self.mul(b, c)));
                }
            }
        }
        // Renumber classes by least element, so the unit's class is 0.
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        let mut classes = vec![0; n];
        for x in 0..n {
            let r = find(&mut parent, x);
            if label[r] == usize::MAX {
                label[r] = next;
                next += 1;
            }
            classes[x] = label[r];
        }
        classes
    }

    /// Quotient by a congruence given as class labels; returns the projection.
    pub fn quotient(&self, classes: &[usize]) -> (Algebra, Map) {
        let k = classes.iter().max().map_or(0, |m| m + 1);
        let mut rep = vec![usize::MAX; k];
        for (x, &c) in classes.iter().enumerate() {
            if rep[c] == usize::MAX {
                rep[c] = x;
            }
        }
        let op = self.op.as_ref().map(|_| {
            let mut t = vec![0; k * k];
            for i in 0..k {
                for j in 0..k {
                    t[i * k + j] = classes[self.mul(rep[i], rep[j])];
                }
            }
            t
        });
        let marked = self.marked.as_ref().map(|m| {
            let mut v: Vec<usize> = m.iter().map(|&x| classes[x]).collect();
            v.sort_unstable();
            v.dedup();
            v
        });
        (Algebra { size: k, op, marked }, classes.to_vec())
    }

    /// Direct product with projections; element `(a, b)` is `a * |other| + b`.
    pub fn product(&self, other: &Algebra) -> (Algebra, Map, Map) {
        let (n, m) = (self.size, other.size);
        let op = match (&self.op, &other.op) {
            (Some(_), Some(_)) => {
                let mut t = vec![0; n * m * n * m];
                for x in 0..n * m {
                    for y in 0..n * m {
                        let a = self.mul(x / m, y / m);
                        let b = other.mul(x % m, y % m);
                        t[x * n * m + y] = a * m + b;
                    }
                }
                Some(t)
            }
            (None, None) => None,
            _ => panic!("product of algebras of different kinds"),
        };
        let marked = match (&self.marked, &other.marked) {
            (Some(a), Some(b)) => Some(a.iter().flat_map(|&x| b.iter().map(move |&y| x * m + y)).collect()),
            _ => None,
        };
        let p0 = (0..n * m).map(|x| x / m).collect();
        let p1 = (0..n * m).map(|x| x % m).collect();
        (Algebra { size: n * m, op, marked }, p0, p1)
    }

    /// Wedge of pointed sets with its two injections.
    pub fn wedge(&self, other: &Algebra) -> (Algebra, Map, Map) {
        let n = self.size;
        let w = Algebra::pointed_set(n + other.size - 1);
        let i0 = (0..n).collect();
        let i1 = (0..other.size).map(|b| if b == 0 { 0 } else { n + b - 1 }).collect();
        (w, i0, i1)
    }
}

pub fn members(subset: &[bool]) -> Vec<usize> {
    subset.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
}

pub fn compose(g: &[usize], f: &[usize]) -> Map {
    f.iter().map(|&x| g[x]).collect()
}

pub fn invert(f: &[usize]) -> Map {
    let mut inv = vec![0; f.len()];
    for (x, &y) in f.iter().enumerate() {
        inv[y] = x;
    }
    inv
}

pub fn image(f: &[usize], target_size: usize) -> Vec<bool> {
    let mut hit = vec![false; target_size];
    f.iter().for_each(|&y| hit[y] = true);
    hit
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hom_counts() {
        let z2 = Algebra::cyclic(2);
        let z3 = Algebra::cyclic(3);
        let s3 = Algebra::s3();
        assert!(s3.is_group());
        assert_eq!(z2.homs(&z3, 1000).unwrap(), vec![vec![0, 0]]);
        assert_eq!(z2.homs(&z2, 1000).unwrap().len(), 2);
        assert_eq!(s3.homs(&z2, 1000).unwrap().len(), 2);
        assert_eq!(s3.homs(&s3, 1000).unwrap().len(), 10);
    }

    #[test]
    fn generated_subgroup_of_s3() {
        let s3 = Algebra::s3();
        // A3 = {0,1,2}; 3 is a transposition
        assert!(s3.closure(&[1, 2, 3]).iter().all(|&b| b));
        assert_eq!(members(&s3.closure(&[1])), vec![0, 1, 2]);
        let (v, _, _) = Algebra::cyclic(2).product(&Algebra::cyclic(2));
        // (1,0) is element 2
        assert_eq!(members(&v.closure(&[2])), vec![0, 2]);
        assert!(v.closure(&[0, 1, 2, 3]).iter().all(|&b| b));
    }

    #[test]
    fn s3_invariants() {
        let s3 = Algebra::s3();
        assert_eq!(s3.center(), vec![0]);
        assert_eq!(s3.derived_subgroup(), vec![0, 1, 2]);
        assert!(!s3.nilpotent_class_at_most_two());
        assert!(!s3.is_isomorphic(&Algebra::cyclic(6)));
    }

    #[test]
    fn congruence_quotient_of_z4() {
        let z4 = Algebra::cyclic(4);
        let classes = z4.congruence(&[(2, 0)]);
        assert_eq!(classes, vec![0, 1, 0, 1]);
        let (q, _) = z4.quotient(&classes);
        assert!(q.is_isomorphic(&Algebra::cyclic(2)));
    }

    #[test]
    fn product_z2_z3_is_cyclic() {
        let (p, _, _) = Algebra::cyclic(2).product(&Algebra::cyclic(3));
        assert!(p.is_isomorphic(&Algebra::cyclic(6)));
    }
}
