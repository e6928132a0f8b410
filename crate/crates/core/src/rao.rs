//! Recursive atom orderings and their generalized variant.
//!
//! The search orders the atoms of `[x, 1̂]` one at a time and recurses into
//! `[a, 1̂]` for each placed atom `a`, passing down the set of atoms of
//! `[a, 1̂]` that sit above earlier atoms. Results are memoized on
//! `(x, constraint set)` and dead prefixes on the set of placed atoms, so the
//! search is exhaustive and absence is certified.

use std::collections::{HashMap, HashSet};

use crate::chain::Limits;
use crate::error::{Error, Result};
use crate::poset::Poset;

/// An atom ordering of `[element, 1̂]` with one subtree per atom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RaoTree {
    pub element: usize,
    pub atoms: Vec<usize>,
    pub children: Vec<RaoTree>,
}

impl RaoTree {
    fn leaf(element: usize) -> Self {
        RaoTree {
            element,
            atoms: Vec::new(),
            children: Vec::new(),
        }
    }

    /// Names of the atoms at the top level.
    pub fn atom_names<'a>(&self, p: &'a Poset) -> Vec<&'a str> {
        self.atoms.iter().map(|&a| p.name(a)).collect()
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(RaoTree::node_count).sum::<usize>()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Kind {
    Rao,
    Grao,
}

/// Atoms of `[v, 1̂]` lying above an earlier atom: covering it for RAO,
/// anywhere above it for GRAO.
fn child_constraint(p: &Poset, kind: Kind, v: usize, earlier: &[usize]) -> Vec<usize> {
    p.up(v)
        .iter()
        .copied()
        .filter(|&w| {
            earlier.iter().any(|&e| match kind {
                Kind::Rao => p.covers(e, w),
                Kind::Grao => p.lt(e, w),
            })
        })
        .collect()
}

/// For every `y > v` above an earlier atom, some `z` with `v ⋖ z ≤ y` lies above
/// an earlier atom.
fn condition_two(p: &Poset, v: usize, earlier: &[usize]) -> Option<usize> {
    (0..p.len()).find(|&y| {
        p.lt(v, y)
            && earlier.iter().any(|&e| p.lt(e, y))
            && !p
                .up(v)
                .iter()
                .any(|&z| p.leq(z, y) && earlier.iter().any(|&e| p.lt(e, z)))
    })
}

/// Placing `v` outside the constraint set `u` must not make `v` the first atom of
/// some `[x, w]` (with `w` covering an atom of `[x, 1̂]`) that contains an atom of `u`.
fn grao_first_atom_ok(p: &Poset, x: usize, v: usize, placed: &[usize], u: &[usize]) -> bool {
    if u.contains(&v) {
        return true;
    }
    let atoms = p.up(x);
    (0..p.len()).all(|w| {
        let relevant = p.leq(v, w) && atoms.iter().any(|&a| p.covers(a, w));
        !relevant || placed.iter().any(|&a| p.leq(a, w)) || !u.iter().any(|&a| p.leq(a, w))
    })
}

struct Search<'a> {
    p: &'a Poset,
    kind: Kind,
    memo: HashMap<(usize, Vec<usize>), Option<RaoTree>>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded {
                what: "atom ordering search nodes".into(),
                limit: self.budget,
            });
        }
        Ok(())
    }

    fn solve(&mut self, x: usize, constraint: Vec<usize>) -> Result<Option<RaoTree>> {
        let p = self.p;
        if x == p.top() {
            return Ok(Some(RaoTree::leaf(x)));
        }
        if p.up(x) == [p.top()] {
            return Ok(Some(RaoTree {
                element: x,
                atoms: vec![p.top()],
                children: vec![RaoTree::leaf(p.top())],
            }));
        }
        let key = (x, constraint);
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        self.tick()?;
        let atoms = p.up(x).to_vec();
        if atoms.len() > 128 {
            return Err(Error::BudgetExceeded {
                what: format!("{} atoms above `{}`", atoms.len(), p.name(x)),
                limit: 128,
            });
        }
        let mut dead = HashSet::new();
        let mut order = Vec::new();
        let found = self.order_atoms(x, &key.1, &atoms, &mut order, 0, &mut dead)?;
        let tree = found.map(|children| RaoTree {
            element: x,
            atoms: order.clone(),
            children,
        });
        self.memo.insert(key, tree.clone());
        Ok(tree)
    }

    fn order_atoms(
        &mut self,
        x: usize,
        constraint: &[usize],
        atoms: &[usize],
        order: &mut Vec<usize>,
        mask: u128,
        dead: &mut HashSet<u128>,
    ) -> Result<Option<Vec<RaoTree>>> {
        if order.len() == atoms.len() {
            return Ok(Some(Vec::new()));
        }
        if dead.contains(&mask) {
            return Ok(None);
        }
        self.tick()?;
        let p = self.p;
        let pending_constrained = self.kind == Kind::Rao
            && atoms
                .iter()
                .enumerate()
                .any(|(i, a)| mask >> i & 1 == 0 && constraint.contains(a));
        for (i, &v) in atoms.iter().enumerate() {
            if mask >> i & 1 == 1 {
                continue;
            }
            if pending_constrained && !constraint.contains(&v) {
                continue;
            }
            if self.kind == Kind::Grao && !grao_first_atom_ok(p, x, v, order, constraint) {
                continue;
            }
            if condition_two(p, v, order).is_some() {
                continue;
            }
            let sub = child_constraint(p, self.kind, v, order);
            let Some(child) = self.solve(v, sub)? else {
                continue;
            };
            order.push(v);
            if let Some(mut rest) = self.order_atoms(x, constraint, atoms, order, mask | 1 << i, dead)? {
                rest.insert(0, child);
                return Ok(Some(rest));
            }
            order.pop();
        }
        dead.insert(mask);
        Ok(None)
    }
}

fn find(p: &Poset, kind: Kind, limits: &Limits) -> Result<Option<RaoTree>> {
    let mut s = Search {
        p,
        kind,
        memo: HashMap::new(),
        nodes: 0,
        budget: limits.max_search_nodes,
    };
    s.solve(p.bottom(), Vec::new())
}

/// A recursive atom ordering, or `None` when none exists.
pub fn find_rao(p: &Poset, limits: &Limits) -> Result<Option<RaoTree>> {
    find(p, Kind::Rao, limits)
}

/// A generalized recursive atom ordering, or `None` when none exists.
pub fn find_grao(p: &Poset, limits: &Limits) -> Result<Option<RaoTree>> {
    find(p, Kind::Grao, limits)
}

fn verify_node(p: &Poset, kind: Kind, t: &RaoTree, x: usize, constraint: &[usize]) -> Result<bool> {
    if t.element != x {
        return Err(Error::MalformedCertificate(format!(
            "expected a node for `{}`, found `{}`",
            p.name(x),
            p.name(t.element)
        )));
    }
    let mut sorted = t.atoms.clone();
    sorted.sort_unstable();
    let expected: &[usize] = if x == p.top() { &[] } else { p.up(x) };
    if sorted != expected || t.children.len() != t.atoms.len() {
        return Err(Error::MalformedCertificate(format!(
            "atoms listed at `{}` are not the atoms of its upper interval",
            p.name(x)
        )));
    }
    for (c, &a) in t.children.iter().zip(&t.atoms) {
        if c.element != a {
            return Err(Error::MalformedCertificate(format!(
                "child of `{}` does not match its atom",
                p.name(a)
            )));
        }
    }
    if x == p.top() {
        return Ok(true);
    }
    if p.up(x) == [p.top()] {
        return verify_node(p, kind, &t.children[0], p.top(), &[]);
    }
    if kind == Kind::Rao {
        let split = t.atoms.iter().take_while(|a| constraint.contains(a)).count();
        if t.atoms[split..].iter().any(|a| constraint.contains(a)) {
            return Ok(false);
        }
    }
    for j in 0..t.atoms.len() {
        let (earlier, v) = (&t.atoms[..j], t.atoms[j]);
        if kind == Kind::Grao && !grao_first_atom_ok(p, x, v, earlier, constraint) {
            return Ok(false);
        }
        if condition_two(p, v, earlier).is_some() {
            return Ok(false);
        }
        let sub = child_constraint(p, kind, v, earlier);
        if !verify_node(p, kind, &t.children[j], v, &sub)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Re-checks every condition of a recursive atom ordering certificate.
pub fn verify_rao(p: &Poset, tree: &RaoTree) -> Result<bool> {
    verify_node(p, Kind::Rao, tree, p.bottom(), &[])
}

/// Re-checks every condition of a generalized recursive atom ordering certificate.
pub fn verify_grao(p: &Poset, tree: &RaoTree) -> Result<bool> {
    verify_node(p, Kind::Grao, tree, p.bottom(), &[])
}

/// Atoms `first`, `second` and an element `y` above both such that nothing
/// covering `second` below `y` lies above `first`: `second` cannot directly
/// follow `first` in an atom ordering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairObstruction {
    pub first: usize,
    pub second: usize,
    pub y: usize,
}

impl PairObstruction {
    pub fn describe(&self, p: &Poset) -> String {
        format!(
            "{} cannot follow {}: no element covering {} below {} lies above {}",
            p.name(self.second),
            p.name(self.first),
            p.name(self.second),
            p.name(self.y),
            p.name(self.first)
        )
    }
}

/// One obstruction per ordered pair of atoms that has one.
pub fn rao_pair_obstructions(p: &Poset) -> Vec<PairObstruction> {
    let atoms = p.atoms();
    let mut out = Vec::new();
    for &a in atoms {
        for &b in atoms {
            if a == b {
                continue;
            }
            if let Some(y) = condition_two(p, b, &[a]) {
                out.push(PairObstruction {
                    first: a,
                    second: b,
                    y,
                });
            }
        }
    }
    out
}

/// True when every ordered pair of distinct atoms is obstructed, which rules out
/// any atom ordering with two or more atoms.
pub fn obstructions_cover_all_pairs(p: &Poset, obs: &[PairObstruction]) -> bool {
    let k = p.atoms().len();
    k >= 2 && obs.len() == k * (k - 1)
}
