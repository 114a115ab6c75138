//! Text format for concrete algebras.
//!
//! ```text
//! group Z2 order 2
//! 0 1
//! 1 0
//! pointedset P3 size 3 basepoint 0
//! grouppair Z2full group Z2 subgroup 0 1
//! monoid M order 2
//! 0 1
//! 1 1
//! ```
//!
//! Cayley tables are row-major and 0-indexed with element 0 the unit.
//! `print(parse(text))` is the canonical form and `parse(print(x)) == x`.

use super::alg::Algebra;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraKind {
    Group,
    Monoid,
    PointedSet,
    /// References a previously defined group entry by name.
    GroupPair {
        group: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraEntry {
    pub name: String,
    pub kind: AlgebraKind,
    pub algebra: Algebra,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AlgebraFile {
    pub entries: Vec<AlgebraEntry>,
}

impl AlgebraFile {
    pub fn get(&self, name: &str) -> Option<&AlgebraEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

fn num(tok: &str, line: usize) -> Result<usize> {
    tok.parse().map_err(|_| Error::parse(line, format!("expected a number, found `{tok}`")))
}

pub fn parse_algebras(text: &str) -> Result<AlgebraFile> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let mut file = AlgebraFile::default();
    let mut i = 0;
    while i < lines.len() {
        let (ln, line) = lines[i];
        let toks: Vec<&str> = line.split_whitespace().collect();
        i += 1;
        let name = toks.get(1).ok_or_else(|| Error::parse(ln, "missing name"))?.to_string();
        if file.get(&name).is_some() {
            return Err(Error::parse(ln, format!("duplicate name `{name}`")));
        }
        let entry = match toks[0] {
            "group" | "monoid" => {
                if toks.len() != 4 || toks[2] != "order" {
                    return Err(Error::parse(ln, "expected `<group|monoid> <name> order <n>`"));
                }
                let n = num(toks[3], ln)?;
                if n == 0 {
                    return Err(Error::parse(ln, "order must be positive"));
                }
                let mut table = Vec::with_capacity(n * n);
                for _ in 0..n {
                    let (rl, row) = *lines.get(i).ok_or_else(|| Error::parse(ln, "Cayley table is truncated"))?;
                    i += 1;
                    let vals: Vec<usize> = row.split_whitespace().map(|t| num(t, rl)).collect::<Result<_>>()?;
                    if vals.len() != n || vals.iter().any(|&v| v >= n) {
                        return Err(Error::parse(rl, format!("row must hold {n} entries below {n}")));
                    }
                    table.extend(vals);
                }
                let a = Algebra::from_table(n, table);
                let (ok, kind, what) = if toks[0] == "group" {
                    (a.is_group(), AlgebraKind::Group, "group")
                } else {
                    (a.is_monoid(), AlgebraKind::Monoid, "monoid with unit 0")
                };
                if !ok {
                    return Err(Error::parse(ln, format!("`{name}` is not a {what}")));
                }
                AlgebraEntry { name, kind, algebra: a }
            }
            "pointedset" => {
                if toks.len() != 6 || toks[2] != "size" || toks[4] != "basepoint" {
                    return Err(Error::parse(ln, "expected `pointedset <name> size <n> basepoint 0`"));
                }
                let n = num(toks[3], ln)?;
                if n == 0 || num(toks[5], ln)? != 0 {
                    return Err(Error::parse(ln, "size must be positive and the basepoint 0"));
                }
                AlgebraEntry { name, kind: AlgebraKind::PointedSet, algebra: Algebra::pointed_set(n) }
            }
            "grouppair" => {
                if toks.len() < 5 || toks[2] != "group" || toks[4] != "subgroup" {
                    return Err(Error::parse(ln, "expected `grouppair <name> group <ref> subgroup <elements>`"));
                }
                let g = file
                    .get(toks[3])
                    .filter(|e| e.kind == AlgebraKind::Group)
                    .ok_or_else(|| Error::parse(ln, format!("unknown group `{}`", toks[3])))?;
                let elems: Vec<usize> = toks[5..].iter().map(|t| num(t, ln)).collect::<Result<_>>()?;
                if elems.iter().any(|&e| e >= g.algebra.size) {
                    return Err(Error::parse(ln, "subgroup element out of range"));
                }
                let mut sorted = elems.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted != elems {
                    return Err(Error::parse(ln, "subgroup elements must be strictly increasing"));
                }
                let a = g.algebra.clone().with_marked(elems);
                if !super::pair_is_valid(&a) {
                    return Err(Error::parse(ln, "subgroup must satisfy G' ⊆ A ⊆ Z(G)"));
                }
                AlgebraEntry { name, kind: AlgebraKind::GroupPair { group: toks[3].to_string() }, algebra: a }
            }
            other => return Err(Error::parse(ln, format!("unknown entry kind `{other}`"))),
        };
        file.entries.push(entry);
    }
    Ok(file)
}

pub fn print_algebras(file: &AlgebraFile) -> String {
    let mut out = String::new();
    for e in &file.entries {
        let a = &e.algebra;
        match &e.kind {
            AlgebraKind::Group | AlgebraKind::Monoid => {
                let word = if e.kind == AlgebraKind::Group { "group" } else { "monoid" };
                out.push_str(&format!("{word} {} order {}\n", e.name, a.size));
                for r in 0..a.size {
                    let row: Vec<String> = (0..a.size).map(|c| a.mul(r, c).to_string()).collect();
                    out.push_str(&row.join(" "));
                    out.push('\n');
                }
            }
            AlgebraKind::PointedSet => {
                out.push_str(&format!("pointedset {} size {} basepoint 0\n", e.name, a.size));
            }
            AlgebraKind::GroupPair { group } => {
                let elems: Vec<String> = a.marked.as_ref().unwrap().iter().map(|x| x.to_string()).collect();
                out.push_str(&format!("grouppair {} group {group} subgroup {}\n", e.name, elems.join(" ")));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_the_documented_example() {
        let text = "group Z2 order 2\n0 1\n1 0\npointedset P3 size 3 basepoint 0\n\
grouppair Z2full group Z2 subgroup 0 1\nmonoid M order 2\n0 1\n1 1\n";
        let f = parse_algebras(text).unwrap();
        assert_eq!(f.entries.len(), 4);
        assert_eq!(print_algebras(&f), text);
    }

    #[test]
    fn rejects_non_group_with_line() {
        let err = parse_algebras("group X order 2\n0 1\n1 1\n").unwrap_err();
        assert_eq!(err, Error::parse(1, "`X` is not a group"));
        let err = parse_algebras("group X order 2\n0 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn rejects_pair_outside_center() {
        let mut text = String::from("group S3 order 6\n");
        let s3 = Algebra::s3();
        for r in 0..6 {
            let row: Vec<String> = (0..6).map(|c| s3.mul(r, c).to_string()).collect();
            text.push_str(&row.join(" "));
            text.push('\n');
        }
        text.push_str("grouppair P group S3 subgroup 0 1 2\n");
        assert!(parse_algebras(&text).is_err());
    }

    fn arb_file() -> impl Strategy<Value = AlgebraFile> {
        // cyclic groups, pointed sets and the full-center pair on each cyclic group
        prop::collection::vec((1usize..7, 1usize..5, any::<bool>()), 1..4).prop_map(|specs| {
            let mut f = AlgebraFile::default();
            for (i, (n, p, pair)) in specs.into_iter().enumerate() {
                let g = Algebra::cyclic(n);
                f.entries.push(AlgebraEntry { name: format!("G{i}"), kind: AlgebraKind::Group, algebra: g.clone() });
                f.entries.push(AlgebraEntry {
                    name: format!("P{i}"),
                    kind: AlgebraKind::PointedSet,
                    algebra: Algebra::pointed_set(p),
                });
                if pair {
                    f.entries.push(AlgebraEntry {
                        name: format!("Q{i}"),
                        kind: AlgebraKind::GroupPair { group: format!("G{i}") },
                        algebra: g.with_marked((0..n).collect()),
                    });
                }
            }
            f
        })
    }

    proptest! {
        #[test]
        fn print_then_parse_is_identity(f in arb_file()) {
            let text = print_algebras(&f);
            prop_assert_eq!(parse_algebras(&text).unwrap(), f);
        }
    }
}
