//! Instance text format, all ids 1-based:
//!
//! ```text
//! n m q
//! p_1 ... p_n        (root's parent is 0)
//! u v                (m bridge lines)
//! u v                (q query lines)
//! ```

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::model::{BridgeSet, ClassTree};

/// A parsed instance with 0-based ids.
#[derive(Debug, Clone)]
pub struct Instance {
    pub parents: Vec<Option<usize>>,
    pub bridges: Vec<(usize, usize)>,
    pub queries: Vec<(usize, usize)>,
}

impl Instance {
    pub fn tree(&self) -> Result<ClassTree> {
        ClassTree::from_parents(&self.parents)
    }

    pub fn bridge_set(&self, tree: &ClassTree) -> Result<BridgeSet> {
        BridgeSet::new(tree, &self.bridges)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let mut next = |what: &str| {
            lines.next().map(|(i, l)| (i + 1, l)).ok_or_else(|| Error::Parse { line: 0, msg: format!("missing {what}") })
        };
        let nums = |line: usize, l: &str| -> Result<Vec<usize>> {
            l.split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| Error::Parse { line, msg: format!("bad number {t:?}") }))
                .collect()
        };
        let (hl, header) = next("header")?;
        let h = nums(hl, header)?;
        let [n, m, q] = h[..] else {
            return Err(Error::Parse { line: hl, msg: "header must be `n m q`".into() });
        };
        let mut parents = Vec::with_capacity(n);
        if n > 0 {
            let (pl, pline) = next("parent line")?;
            let ps = nums(pl, pline)?;
            if ps.len() != n {
                return Err(Error::Parse { line: pl, msg: format!("expected {n} parents, found {}", ps.len()) });
            }
            for p in ps {
                if p > n {
                    return Err(Error::Parse { line: pl, msg: format!("parent {p} out of range") });
                }
                parents.push(p.checked_sub(1));
            }
        }
        let mut pairs = |count: usize, what: &str| -> Result<Vec<(usize, usize)>> {
            (0..count)
                .map(|_| {
                    let (li, l) = next(what)?;
                    match nums(li, l)?[..] {
                        [u, v] if (1..=n).contains(&u) && (1..=n).contains(&v) => Ok((u - 1, v - 1)),
                        [_, _] => Err(Error::Parse { line: li, msg: "vertex id out of range".into() }),
                        _ => Err(Error::Parse { line: li, msg: format!("expected `u v` {what}") }),
                    }
                })
                .collect()
        };
        let bridges = pairs(m, "bridge")?;
        let queries = pairs(q, "query")?;
        Ok(Self { parents, bridges, queries })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {} {}", self.parents.len(), self.bridges.len(), self.queries.len());
        let ps: Vec<String> = self.parents.iter().map(|p| p.map_or(0, |p| p + 1).to_string()).collect();
        let _ = writeln!(s, "{}", ps.join(" "));
        for &(u, v) in self.bridges.iter().chain(&self.queries) {
            let _ = writeln!(s, "{} {}", u + 1, v + 1);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "7 2 1\n0 1 1 2 2 3 3\n2 3\n4 6\n4 6\n";
        let inst = Instance::parse(text).unwrap();
        assert_eq!(inst.bridges, vec![(1, 2), (3, 5)]);
        assert_eq!(inst.to_text(), text);
        assert!(inst.tree().is_ok());
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(Instance::parse("2 1 0\n0 1\n1 x\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(Instance::parse("2 0 0\n0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(Instance::parse("2 1 0\n0 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(Instance::parse("2 1 0\n0 1\n1 3\n"), Err(Error::Parse { line: 3, .. })));
    }
}
