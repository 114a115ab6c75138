//! Enumeration of all groups and monoids of a given order, up to isomorphism.
//!
//! Cayley tables are filled by backtracking in row-major order with the unit
//! row and column fixed. Associativity is checked incrementally on every
//! triple the new cell participates in. Tables come out in lexicographic
//! order, so the first table seen in each isomorphism class is its
//! lexicographically least representative.

use super::alg::Algebra;
use crate::error::{Error, Result};

const EMPTY: usize = usize::MAX;

struct TableSearch {
    n: usize,
    latin: bool,
    t: Vec<usize>,
    row_used: Vec<Vec<bool>>,
    col_used: Vec<Vec<bool>>,
    nodes: u64,
    node_cap: u64,
}

impl TableSearch {
    fn new(n: usize, latin: bool, node_cap: u64) -> Self {
        let mut t = vec![EMPTY; n * n];
        for a in 0..n {
            t[a] = a;
            t[a * n] = a;
        }
        let mut row_used = vec![vec![false; n]; n];
        let mut col_used = vec![vec![false; n]; n];
        for a in 0..n {
            row_used[a][a] = true;
            col_used[a][a] = true;
            row_used[0][a] = true;
            col_used[0][a] = true;
        }
        TableSearch { n, latin, t, row_used, col_used, nodes: 0, node_cap }
    }

    fn get(&self, a: usize, b: usize) -> usize {
        self.t[a * self.n + b]
    }

    /// Checks every associativity triple involving cell (i, j) that is fully known.
    fn consistent(&self, i: usize, j: usize) -> bool {
        let n = self.n;
        let v = self.get(i, j);
        let known = |x: usize, y: usize| -> Option<usize> {
            let r = self.get(x, y);
            (r != EMPTY).then_some(r)
        };
        for c in 0..n {
            // (i j) c = i (j c)
            if let (Some(l), Some(jc)) = (known(v, c), known(j, c)) {
                if let Some(r) = known(i, jc) {
                    if l != r {
                        return false;
                    }
                }
            }
            // (c i) j = c (i j)
            if let (Some(ci), Some(r)) = (known(c, i), known(c, v)) {
                if let Some(l) = known(ci, j) {
                    if l != r {
                        return false;
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                // (a b) j with a b = i: i j = a (b j)
                if self.get(a, b) == i {
                    if let Some(bj) = known(b, j) {
                        if let Some(r) = known(a, bj) {
                            if r != v {
                                return false;
                            }
                        }
                    }
                }
                // i (a b) with a b = j: i j = (i a) b
                if self.get(a, b) == j {
                    if let Some(ia) = known(i, a) {
                        if let Some(l) = known(ia, b) {
                            if l != v {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    fn run(&mut self, cell: usize, out: &mut dyn FnMut(&[usize])) -> Result<()> {
        let n = self.n;
        if cell == (n - 1) * (n - 1) {
            out(&self.t);
            return Ok(());
        }
        self.nodes += 1;
        if self.nodes > self.node_cap {
            return Err(Error::OutOfBudget("table enumeration node cap reached".into()));
        }
        let (i, j) = (1 + cell / (n - 1), 1 + cell % (n - 1));
        for v in 0..n {
            if self.latin && (self.row_used[i][v] || self.col_used[j][v]) {
                continue;
            }
            self.t[i * n + j] = v;
            if self.latin {
                self.row_used[i][v] = true;
                self.col_used[j][v] = true;
            }
            if self.consistent(i, j) {
                self.run(cell + 1, out)?;
            }
            if self.latin {
                self.row_used[i][v] = false;
                self.col_used[j][v] = false;
            }
        }
        self.t[i * n + j] = EMPTY;
        Ok(())
    }
}

fn classes_of(n: usize, latin: bool, node_cap: u64) -> Result<Vec<Algebra>> {
    if n == 1 {
        return Ok(vec![Algebra::trivial_group()]);
    }
    let mut reps: Vec<Algebra> = Vec::new();
    let mut search = TableSearch::new(n, latin, node_cap);
    search.run(0, &mut |t| {
        let a = Algebra::from_table(n, t.to_vec());
        if !reps.iter().any(|r| r.is_isomorphic(&a)) {
            reps.push(a);
        }
    })?;
    Ok(reps)
}

/// All labelled Cayley tables (unit = 0), without identifying isomorphic ones.
pub fn all_tables(n: usize, latin: bool, node_cap: u64) -> Result<Vec<Algebra>> {
    if n == 1 {
        return Ok(vec![Algebra::trivial_group()]);
    }
    let mut out = Vec::new();
    let mut search = TableSearch::new(n, latin, node_cap);
    search.run(0, &mut |t| out.push(Algebra::from_table(n, t.to_vec())))?;
    Ok(out)
}

/// One representative per isomorphism class of groups of order `n`.
pub fn groups_of_order(n: usize) -> Result<Vec<Algebra>> {
    classes_of(n, true, 50_000_000)
}

/// One representative per isomorphism class of monoids of order `n`.
pub fn monoids_of_order(n: usize) -> Result<Vec<Algebra>> {
    classes_of(n, false, 50_000_000)
}

/// All subgroups of a group, as sorted element lists, in lexicographic order.
pub fn subgroups(g: &Algebra) -> Vec<Vec<usize>> {
    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut frontier = vec![super::alg::members(&g.closure(&[]))];
    while let Some(h) = frontier.pop() {
        if found.contains(&h) {
            continue;
        }
        for x in 0..g.size {
            if !h.contains(&x) {
                let mut gens = h.clone();
                gens.push(x);
                frontier.push(super::alg::members(&g.closure(&gens)));
            }
        }
        found.push(h);
    }
    found.sort();
    found
}

/// Human-readable name for a small group.
pub fn group_name(g: &Algebra) -> String {
    let n = g.size;
    if n == 1 {
        return "0".into();
    }
    if g.is_commutative() {
        return invariant_factors(g).iter().map(|k| format!("Z/{k}")).collect::<Vec<_>>().join("x");
    }
    let involutions = (1..n).filter(|&a| g.element_order(a) == 2).count();
    match (n, involutions) {
        (6, _) => "S3".into(),
        (8, 5) => "D4".into(),
        (8, 1) => "Q8".into(),
        _ => format!("G{n}"),
    }
}

/// Invariant factors `n1, n2, ...` with `n_{i+1} | n_i` of a finite abelian group.
pub fn invariant_factors(g: &Algebra) -> Vec<usize> {
    let n = g.size;
    let mut primes = Vec::new();
    let mut m = n;
    let mut p = 2;
    while m > 1 {
        if m.is_multiple_of(p) {
            primes.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    // exponents of the p-primary cyclic factors, largest first
    let pow = |a: usize, k: usize| (0..k).fold(0, |x, _| g.mul(x, a));
    let mut factors: Vec<usize> = Vec::new();
    let mut by_prime: Vec<(usize, Vec<u32>)> = Vec::new();
    for &p in &primes {
        let mut s_prev = 0u32;
        let mut counts_ge: Vec<u32> = Vec::new();
        let mut k = 1u32;
        loop {
            let pk = p.pow(k);
            let c = (0..n).filter(|&a| pow(a, pk) == 0).count();
            let s = (c as f64).log(p as f64).round() as u32;
            if s == s_prev {
                break;
            }
            counts_ge.push(s - s_prev);
            s_prev = s;
            k += 1;
        }
        // counts_ge[k-1] = number of factors with exponent ≥ k
        let mut exps = Vec::new();
        for k in (0..counts_ge.len()).rev() {
            let with_exactly = counts_ge[k] - counts_ge.get(k + 1).copied().unwrap_or(0);
            for _ in 0..with_exactly {
                exps.push(k as u32 + 1);
            }
        }
        by_prime.push((p, exps));
    }
    let len = by_prime.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
    for i in 0..len {
        let mut f = 1;
        for (p, e) in &by_prime {
            if let Some(&k) = e.get(i) {
                f *= p.pow(k);
            }
        }
        factors.push(f);
    }
    factors
}
