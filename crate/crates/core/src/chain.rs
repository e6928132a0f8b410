//! Enumeration of saturated chains, roots and rooted intervals.

use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::Poset;

/// A chain stored as its element indices, bottom to top.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Chain(pub Vec<usize>);

impl Chain {
    pub fn single(v: usize) -> Self {
        Chain(vec![v])
    }

    pub fn bottom(&self) -> usize {
        self.0[0]
    }

    pub fn top(&self) -> usize {
        *self.0.last().expect("chains are non-empty")
    }

    /// Number of elements minus one.
    pub fn length(&self) -> usize {
        self.0.len() - 1
    }

    pub fn extended(&self, v: usize) -> Chain {
        let mut c = self.0.clone();
        c.push(v);
        Chain(c)
    }

    /// The subchain `m^x` of elements up to and including position `i`.
    pub fn prefix(&self, i: usize) -> Chain {
        Chain(self.0[..=i].to_vec())
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(&v)
    }

    pub fn position(&self, v: usize) -> Option<usize> {
        self.0.iter().position(|&u| u == v)
    }

    pub fn is_saturated(&self, p: &Poset) -> bool {
        self.0.windows(2).all(|w| p.covers(w[0], w[1]))
    }

    pub fn display(&self, p: &Poset) -> String {
        let parts: Vec<&str> = self.0.iter().map(|&v| p.name(v)).collect();
        format!("{{{}}}", parts.join(","))
    }

    pub fn names(&self, p: &Poset) -> Vec<String> {
        self.0.iter().map(|&v| p.name(v).to_string()).collect()
    }
}

impl Deref for Chain {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

/// Enumeration limits shared by every exponential routine.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    /// Maximum number of rooted cover relations before materialization is refused.
    pub max_rooted_covers: u64,
    /// Node budget for backtracking searches.
    pub max_search_nodes: u64,
    /// Maximum facet count accepted by the brute-force shellability search.
    pub max_facets: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_rooted_covers: 10_000,
            max_search_nodes: 1_000_000,
            max_facets: 9,
        }
    }
}

/// All maximal chains of `[x, y]` in lexicographic order of element indices.
pub fn chains_between(p: &Poset, x: usize, y: usize) -> Vec<Chain> {
    let mut out = Vec::new();
    if !p.leq(x, y) {
        return out;
    }
    let mut stack = vec![x];
    walk(p, y, &mut stack, &mut out);
    out
}

fn walk(p: &Poset, y: usize, stack: &mut Vec<usize>, out: &mut Vec<Chain>) {
    let v = *stack.last().unwrap();
    if v == y {
        out.push(Chain(stack.clone()));
        return;
    }
    for &w in p.up(v) {
        if p.leq(w, y) {
            stack.push(w);
            walk(p, y, stack, out);
            stack.pop();
        }
    }
}

/// Every maximal chain from bottom to top.
pub fn maximal_chains(p: &Poset) -> Vec<Chain> {
    chains_between(p, p.bottom(), p.top())
}

/// Roots of `x`: the maximal chains of `[0̂, x]`.
pub fn roots(p: &Poset, x: usize) -> Vec<Chain> {
    chains_between(p, p.bottom(), x)
}

pub fn validate_root(p: &Poset, root: &[usize]) -> Result<()> {
    let ok = !root.is_empty() && root[0] == p.bottom() && root.windows(2).all(|w| p.covers(w[0], w[1]));
    if ok {
        Ok(())
    } else {
        let names: Vec<&str> = root.iter().map(|&v| p.name(v)).collect();
        Err(Error::InvalidRoot(format!("{{{}}}", names.join(","))))
    }
}

/// Maximal chains of the rooted interval `[x, y]_r`, where `x` is the top of `root`.
pub fn maximal_chains_rooted(p: &Poset, root: &[usize], y: usize) -> Result<Vec<Chain>> {
    validate_root(p, root)?;
    let x = *root.last().unwrap();
    if !p.leq(x, y) {
        return Err(Error::Parse(format!(
            "`{}` is not below `{}`",
            p.name(x),
            p.name(y)
        )));
    }
    Ok(chains_between(p, x, y))
}

/// A rooted interval `[x, y]_r`; `x` is the top of the root.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootedInterval {
    pub root: Chain,
    pub y: usize,
}

impl RootedInterval {
    pub fn x(&self) -> usize {
        self.root.top()
    }

    pub fn is_cover(&self, p: &Poset) -> bool {
        p.covers(self.x(), self.y)
    }

    pub fn display(&self, p: &Poset) -> String {
        format!(
            "[{}, {}] rooted at {}",
            p.name(self.x()),
            p.name(self.y),
            self.root.display(p)
        )
    }
}

/// Lazy iterator over rooted intervals `[x, y]_r` with `x < y`.
///
/// Order: `x` by index, roots of `x` lexicographically, then `y` by index.
pub struct RootedIntervals<'a> {
    poset: &'a Poset,
    x: usize,
    roots: Vec<Chain>,
    root_idx: usize,
    y: usize,
    covers_only: bool,
}

impl<'a> RootedIntervals<'a> {
    fn new(poset: &'a Poset, covers_only: bool) -> Self {
        RootedIntervals {
            poset,
            x: 0,
            roots: roots(poset, 0),
            root_idx: 0,
            y: 0,
            covers_only,
        }
    }
}

impl Iterator for RootedIntervals<'_> {
    type Item = RootedInterval;

    fn next(&mut self) -> Option<RootedInterval> {
        let p = self.poset;
        loop {
            if self.x >= p.len() {
                return None;
            }
            if self.root_idx >= self.roots.len() {
                self.x += 1;
                self.root_idx = 0;
                self.y = 0;
                if self.x < p.len() {
                    self.roots = roots(p, self.x);
                }
                continue;
            }
            if self.y >= p.len() {
                self.root_idx += 1;
                self.y = 0;
                continue;
            }
            let y = self.y;
            self.y += 1;
            let keep = if self.covers_only {
                p.covers(self.x, y)
            } else {
                p.lt(self.x, y)
            };
            if keep {
                return Some(RootedInterval {
                    root: self.roots[self.root_idx].clone(),
                    y,
                });
            }
        }
    }
}

pub fn rooted_intervals(p: &Poset) -> RootedIntervals<'_> {
    RootedIntervals::new(p, false)
}

pub fn rooted_cover_relations(p: &Poset) -> RootedIntervals<'_> {
    RootedIntervals::new(p, true)
}

/// Number of maximal chains of `[0̂, v]` for every `v`, saturating.
pub fn root_counts(p: &Poset) -> Vec<u64> {
    let n = p.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (0..n).filter(|&u| p.leq(u, v)).count());
    let mut count = vec![0u64; n];
    for &v in &order {
        count[v] = if v == p.bottom() {
            1
        } else {
            p.down(v)
                .iter()
                .fold(0u64, |acc, &u| acc.saturating_add(count[u]))
        };
    }
    count
}

/// Σ over covers `x ⋖ y` of the number of roots of `x`.
pub fn count_rooted_covers(p: &Poset) -> u64 {
    let counts = root_counts(p);
    (0..p.len()).fold(0u64, |acc, x| {
        acc.saturating_add(counts[x].saturating_mul(p.up(x).len() as u64))
    })
}

/// Refuses posets whose rooted cover relations exceed the budget.
pub fn check_budget(p: &Poset, limits: &Limits) -> Result<()> {
    let count = count_rooted_covers(p);
    if count > limits.max_rooted_covers {
        return Err(Error::BudgetExceeded {
            what: format!("{count} rooted cover relations"),
            limit: limits.max_rooted_covers,
        });
    }
    Ok(())
}

/// Every root (saturated chain from 0̂) whose top is not 1̂, in canonical order.
pub fn all_proper_roots(p: &Poset) -> Vec<Chain> {
    (0..p.len())
        .filter(|&x| x != p.top())
        .flat_map(|x| roots(p, x))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> Poset {
        Poset::build(
            &["0hat", "a", "b", "c", "d", "1hat"],
            &[
                ("0hat", "a"),
                ("0hat", "b"),
                ("a", "c"),
                ("a", "d"),
                ("b", "c"),
                ("b", "d"),
                ("c", "1hat"),
                ("d", "1hat"),
            ],
        )
        .unwrap()
    }

    fn edge() -> Poset {
        Poset::build(&["0hat", "1hat"], &[("0hat", "1hat")]).unwrap()
    }

    #[test]
    fn maximal_chains_small_cases() {
        assert_eq!(maximal_chains(&edge()), vec![Chain(vec![0, 1])]);
        let p = fig1();
        let chains = maximal_chains(&p);
        assert_eq!(chains.len(), 4);
        assert!(chains.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rooted_chain_queries() {
        let p = fig1();
        assert_eq!(
            maximal_chains_rooted(&p, &[0, 1], 1).unwrap(),
            vec![Chain(vec![1])]
        );
        // [0̂, c] where c = index 3.
        assert_eq!(maximal_chains_rooted(&p, &[0], 3).unwrap().len(), 2);
        assert!(matches!(
            maximal_chains_rooted(&p, &[0, 3], 5),
            Err(Error::InvalidRoot(_))
        ));
    }

    #[test]
    fn rooted_interval_counts() {
        assert_eq!(rooted_intervals(&edge()).count(), 1);
        let chain3 = Poset::build(&["0", "a", "1"], &[("0", "a"), ("a", "1")]).unwrap();
        assert_eq!(rooted_intervals(&chain3).count(), 3);
        assert_eq!(rooted_cover_relations(&edge()).count(), 1);
        let chain4 = Poset::build(&["0", "a", "b", "1"], &[("0", "a"), ("a", "b"), ("b", "1")]).unwrap();
        assert_eq!(rooted_cover_relations(&chain4).count(), 3);
    }

    #[test]
    fn fig1_rooted_covers_match_oracle() {
        let p = fig1();
        let lazy = rooted_cover_relations(&p).count();
        // Oracle: loop over covers and roots directly.
        let mut oracle = 0;
        for x in 0..p.len() {
            for y in 0..p.len() {
                if p.covers(x, y) {
                    oracle += chains_between(&p, p.bottom(), x).len();
                }
            }
        }
        assert_eq!(lazy, oracle);
        assert_eq!(lazy, 10);
        assert_eq!(count_rooted_covers(&p), 10);
        let top_covers: Vec<_> = rooted_cover_relations(&p).filter(|rc| rc.y == p.top()).collect();
        assert_eq!(top_covers.len(), 4);
    }

    #[test]
    fn fig1_rooted_intervals_match_triple_loop() {
        let p = fig1();
        let mut oracle = 0;
        for x in 0..p.len() {
            for y in 0..p.len() {
                if p.lt(x, y) {
                    oracle += roots(&p, x).len();
                }
            }
        }
        assert_eq!(rooted_intervals(&p).count(), oracle);
    }

    #[test]
    fn budget_is_enforced() {
        let p = fig1();
        let tight = Limits {
            max_rooted_covers: 9,
            ..Limits::default()
        };
        assert!(matches!(
            check_budget(&p, &tight),
            Err(Error::BudgetExceeded { .. })
        ));
        check_budget(&p, &Limits::default()).unwrap();
    }
}
