//! Recursive first atom sets and the chain orders they induce.
//!
//! A [`FirstAtomSet`] designates one atom `Ω(r, x, y)` of every rooted interval
//! `[x, y]_r`. [`check_rfas`] validates the two recursive conditions,
//! [`chain_order_dag`] builds the relation on maximal chains generated by
//! swapping a pseudo descent for a first atom chain, and [`check_lc`] searches
//! its linear extensions for one free of the forbidden sandwich pattern.

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::Rng;
use rayon::prelude::*;

use crate::chain::{
    chains_between, check_budget, maximal_chains, rooted_intervals, validate_root, Chain, Limits,
    RootedInterval,
};
use crate::error::{Error, Result};
use crate::labeling::{classify, label_sequence, lex_order_max_chains, AscentTable, CeLabeling};
use crate::poset::Poset;
use crate::relabel::{relabel_from_order, MaxChainOrder};

/// How intervals without an explicit entry get their first atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AtomDefault {
    /// The atom that comes first in element order.
    Leftmost,
    /// Only unique-atom intervals may be omitted.
    None,
}

/// A table `Ω(r, x, y)` over every rooted interval with `x < y`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FirstAtomSet {
    table: HashMap<Vec<usize>, HashMap<usize, usize>>,
}

impl FirstAtomSet {
    /// Builds a table from `(root, y, atom)` entries and fills the rest from `default`.
    pub fn from_entries(
        p: &Poset,
        entries: &[(Vec<usize>, usize, usize)],
        default: AtomDefault,
        limits: &Limits,
    ) -> Result<Self> {
        check_budget(p, limits)?;
        let mut omega = FirstAtomSet::default();
        for (root, y, atom) in entries {
            validate_root(p, root)?;
            let x = *root.last().unwrap();
            let (y, atom) = (*y, *atom);
            if !p.lt(x, y) || !p.interval_atoms(x, y).contains(&atom) {
                return Err(Error::InvalidFirstAtomSet(format!(
                    "`{}` is not an atom of [{}, {}]",
                    p.name(atom),
                    p.name(x),
                    p.name(y)
                )));
            }
            if let Some(prev) = omega.get(root, y) {
                if prev != atom {
                    return Err(Error::InvalidFirstAtomSet(format!(
                        "conflicting entries for [{}, {}] rooted at {}",
                        p.name(x),
                        p.name(y),
                        Chain(root.clone()).display(p)
                    )));
                }
            }
            omega.set(root.clone(), y, atom);
        }
        for iv in rooted_intervals(p) {
            if omega.get(&iv.root, iv.y).is_some() {
                continue;
            }
            let atoms = p.interval_atoms(iv.x(), iv.y);
            let atom = if atoms.len() == 1 || default == AtomDefault::Leftmost {
                atoms[0]
            } else {
                return Err(Error::InvalidFirstAtomSet(format!(
                    "no first atom given for {}",
                    iv.display(p)
                )));
            };
            omega.set(iv.root.0, iv.y, atom);
        }
        Ok(omega)
    }

    /// Builds a table by evaluating `f` on every rooted interval.
    pub fn from_fn(
        p: &Poset,
        limits: &Limits,
        mut f: impl FnMut(&RootedInterval) -> Result<usize>,
    ) -> Result<Self> {
        check_budget(p, limits)?;
        let mut omega = FirstAtomSet::default();
        for iv in rooted_intervals(p) {
            let atom = f(&iv)?;
            if !p.interval_atoms(iv.x(), iv.y).contains(&atom) {
                return Err(Error::InvalidFirstAtomSet(format!(
                    "`{}` is not an atom of {}",
                    p.name(atom),
                    iv.display(p)
                )));
            }
            omega.set(iv.root.0, iv.y, atom);
        }
        Ok(omega)
    }

    fn set(&mut self, root: Vec<usize>, y: usize, atom: usize) {
        self.table.entry(root).or_default().insert(y, atom);
    }

    pub fn get(&self, root: &[usize], y: usize) -> Option<usize> {
        self.table.get(root).and_then(|m| m.get(&y)).copied()
    }

    fn at(&self, root: &[usize], y: usize) -> usize {
        self.get(root, y)
            .expect("first atom sets are total over rooted intervals")
    }

    /// Entries `(root, y, atom)` in canonical order.
    pub fn entries(&self) -> Vec<(Chain, usize, usize)> {
        let mut out: Vec<_> = self
            .table
            .iter()
            .flat_map(|(r, m)| m.iter().map(move |(&y, &a)| (Chain(r.clone()), y, a)))
            .collect();
        out.sort();
        out
    }

    /// The table restricted to the closed interval `[x, y]` below the root `root`
    /// of `x`, transported onto the interval poset.
    pub fn restrict(&self, p: &Poset, root: &[usize], y: usize) -> Result<(Poset, FirstAtomSet)> {
        validate_root(p, root)?;
        let x = *root.last().unwrap();
        let (q, map) = p.interval(x, y)?;
        let omega = FirstAtomSet::from_fn(&q, &Limits::default(), |iv| {
            let mut r = root.to_vec();
            r.extend(iv.root[1..].iter().map(|&v| map[v]));
            let atom = self.at(&r, map[iv.y]);
            Ok(map
                .iter()
                .position(|&v| v == atom)
                .expect("atom lies in the interval"))
        })?;
        Ok((q, omega))
    }
}

/// The first atom chain `c(r, x, y)`, where `x` is the top of `root`.
pub fn first_atom_chain(p: &Poset, omega: &FirstAtomSet, root: &[usize], y: usize) -> Result<Chain> {
    validate_root(p, root)?;
    let x = *root.last().unwrap();
    if !p.leq(x, y) {
        return Err(Error::Parse(format!(
            "`{}` is not below `{}`",
            p.name(x),
            p.name(y)
        )));
    }
    Ok(fac(omega, root, y))
}

fn fac(omega: &FirstAtomSet, root: &[usize], y: usize) -> Chain {
    let mut acc = root.to_vec();
    let start = acc.len() - 1;
    while *acc.last().unwrap() != y {
        let next = omega.at(&acc, y);
        acc.push(next);
    }
    Chain(acc[start..].to_vec())
}

/// Positions `i` of the maximal chain `m` where `m[i] ⋖ m[i+1] ⋖ m[i+2]` is a
/// pseudo descent.
pub fn pseudo_descents(omega: &FirstAtomSet, m: &[usize]) -> Vec<usize> {
    pseudo_descents_rooted(omega, &m[..1], m)
}

/// Pseudo descents of a saturated chain that starts at the top of `root`.
pub fn pseudo_descents_rooted(omega: &FirstAtomSet, root: &[usize], chain: &[usize]) -> Vec<usize> {
    let mut acc = root.to_vec();
    let mut out = Vec::new();
    for i in 0..chain.len().saturating_sub(2) {
        if omega.at(&acc, chain[i + 2]) != chain[i + 1] {
            out.push(i);
        }
        acc.push(chain[i + 1]);
    }
    out
}

/// Middle elements of the pseudo descents of `m`.
pub fn pseudo_descent_elements(omega: &FirstAtomSet, m: &[usize]) -> BTreeSet<usize> {
    pseudo_descents(omega, m).into_iter().map(|i| m[i + 1]).collect()
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RfasOptions {
    /// Root the second recursion step at `r ∪ a_i` exactly as written, which
    /// leaves no valid lookup once the witness sequence has two atoms.
    pub literal_ii: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `a` is first in `[x, y]_r` but not in `[x, b]_r`.
    Forward,
    /// `a` is first in `[x, b]_r` but not in `[x, y]_r`.
    Backward,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RfasViolation {
    ConditionI {
        interval: RootedInterval,
        atom: usize,
        b: usize,
        direction: Direction,
    },
    ConditionII {
        interval: RootedInterval,
        atom: usize,
        b: usize,
        trail: Vec<usize>,
        reason: String,
    },
}

impl RfasViolation {
    pub fn interval(&self) -> &RootedInterval {
        match self {
            RfasViolation::ConditionI { interval, .. } | RfasViolation::ConditionII { interval, .. } => {
                interval
            }
        }
    }

    pub fn describe(&self, p: &Poset) -> String {
        match self {
            RfasViolation::ConditionI {
                interval,
                atom,
                b,
                direction,
            } => {
                let dir = match direction {
                    Direction::Forward => "forward",
                    Direction::Backward => "backward",
                };
                format!(
                    "condition (i) {dir}: atom {} with b = {} in {}",
                    p.name(*atom),
                    p.name(*b),
                    interval.display(p)
                )
            }
            RfasViolation::ConditionII {
                interval,
                atom,
                b,
                trail,
                reason,
            } => {
                let t: Vec<&str> = trail.iter().map(|&v| p.name(v)).collect();
                format!(
                    "condition (ii): atom {} with b = {} in {}: {reason} (trail {})",
                    p.name(*atom),
                    p.name(*b),
                    interval.display(p),
                    t.join(" -> ")
                )
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct RfasReport {
    pub condition_i: bool,
    pub condition_ii: bool,
    pub violations: Vec<RfasViolation>,
}

impl RfasReport {
    pub fn ok(&self) -> bool {
        self.condition_i && self.condition_ii
    }

    pub fn has_direction(&self, d: Direction) -> bool {
        self.violations
            .iter()
            .any(|v| matches!(v, RfasViolation::ConditionI { direction, .. } if *direction == d))
    }
}

fn check_interval(
    p: &Poset,
    omega: &FirstAtomSet,
    iv: &RootedInterval,
    opts: RfasOptions,
) -> Vec<RfasViolation> {
    let mut out = Vec::new();
    if iv.is_cover(p) {
        return out;
    }
    let (x, y, r) = (iv.x(), iv.y, &iv.root);
    let atoms = p.interval_atoms(x, y);
    let first = omega.at(r, y);
    for &a in &atoms {
        let b = omega.at(&r.extended(a), y);
        let first_xb = omega.at(r, b);
        if (first == a) != (first_xb == a) {
            out.push(RfasViolation::ConditionI {
                interval: iv.clone(),
                atom: a,
                b,
                direction: if first == a {
                    Direction::Forward
                } else {
                    Direction::Backward
                },
            });
        }
        if a == first {
            continue;
        }
        let mut cur = first_xb;
        let mut trail = vec![cur];
        let mut seen = HashSet::from([cur]);
        let budget = atoms.len() * atoms.len();
        let mut reason = None;
        while cur != first {
            if opts.literal_ii {
                reason = Some("the root r ∪ a_i is not a root of a_(i+1)".to_string());
                break;
            }
            let b_next = omega.at(&r.extended(cur), y);
            let next = omega.at(r, b_next);
            trail.push(next);
            if !seen.insert(next) {
                reason = Some("the witness sequence cycles".to_string());
                break;
            }
            if trail.len() > budget + 1 {
                reason = Some(format!("no witness within {budget} steps"));
                break;
            }
            cur = next;
        }
        if let Some(reason) = reason {
            out.push(RfasViolation::ConditionII {
                interval: iv.clone(),
                atom: a,
                b,
                trail,
                reason,
            });
        }
    }
    out
}

/// Validates both recursive conditions over every rooted interval.
pub fn check_rfas(p: &Poset, omega: &FirstAtomSet, opts: RfasOptions, limits: &Limits) -> Result<RfasReport> {
    check_budget(p, limits)?;
    let intervals: Vec<RootedInterval> = rooted_intervals(p).collect();
    for iv in &intervals {
        if omega.get(&iv.root, iv.y).is_none() {
            return Err(Error::InvalidFirstAtomSet(format!(
                "no first atom for {}",
                iv.display(p)
            )));
        }
    }
    let violations: Vec<RfasViolation> = intervals
        .par_iter()
        .map(|iv| check_interval(p, omega, iv, opts))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    let condition_i = !violations
        .iter()
        .any(|v| matches!(v, RfasViolation::ConditionI { .. }));
    let condition_ii = !violations
        .iter()
        .any(|v| matches!(v, RfasViolation::ConditionII { .. }));
    Ok(RfasReport {
        condition_i,
        condition_ii,
        violations,
    })
}

fn require_rfas(p: &Poset, omega: &FirstAtomSet, limits: &Limits) -> Result<()> {
    let report = check_rfas(p, omega, RfasOptions::default(), limits)?;
    match report.violations.first() {
        None => Ok(()),
        Some(v) => Err(Error::NotAnRfas(v.describe(p))),
    }
}

/// The relation `m → m'` on maximal chains, with its reachability closure.
#[derive(Clone, Debug)]
pub struct ChainOrderDag {
    chains: Vec<Chain>,
    index: HashMap<Chain, usize>,
    edges: Vec<(usize, usize)>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

impl ChainOrderDag {
    fn from_edges(chains: Vec<Chain>, mut edges: Vec<(usize, usize)>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        let n = chains.len();
        let mut succ = vec![Vec::new(); n];
        let mut pred = vec![Vec::new(); n];
        for &(a, b) in &edges {
            succ[a].push(b);
            pred[b].push(a);
        }
        let index = chains.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        ChainOrderDag {
            chains,
            index,
            edges,
            succ,
            pred,
        }
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn chain_index(&self, c: &Chain) -> Option<usize> {
        self.index.get(c).copied()
    }

    /// `closure[a][b]` is true when `a ⪯ b`.
    pub fn closure(&self) -> Vec<Vec<bool>> {
        let n = self.len();
        let mut reach = vec![vec![false; n]; n];
        for (s, row) in reach.iter_mut().enumerate() {
            let mut stack = vec![s];
            row[s] = true;
            while let Some(v) = stack.pop() {
                for &w in &self.succ[v] {
                    if !row[w] {
                        row[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        reach
    }

    pub fn is_antisymmetric(&self) -> bool {
        let c = self.closure();
        (0..self.len()).all(|a| (a + 1..self.len()).all(|b| !(c[a][b] && c[b][a])))
    }

    /// Chains with no other chain below them in the closure.
    pub fn minimal_elements(&self) -> Vec<usize> {
        let c = self.closure();
        (0..self.len())
            .filter(|&b| (0..self.len()).all(|a| a == b || !c[a][b]))
            .collect()
    }

    /// Linear extensions as index sequences, in lexicographic order.
    pub fn linear_extension_indices(&self) -> LinearExtensions<'_> {
        let n = self.len();
        LinearExtensions {
            dag: self,
            indeg: self.pred.iter().map(Vec::len).collect(),
            placed: vec![false; n],
            order: Vec::with_capacity(n),
            cursor: vec![0; n + 1],
            emitted: false,
            done: false,
        }
    }

    /// Linear extensions as chain orders, in lexicographic order of indices.
    pub fn linear_extensions(&self) -> impl Iterator<Item = MaxChainOrder> + '_ {
        self.linear_extension_indices().map(move |ix| self.order_of(&ix))
    }

    pub fn order_of(&self, ix: &[usize]) -> MaxChainOrder {
        MaxChainOrder::from_trusted(ix.iter().map(|&i| self.chains[i].clone()).collect())
    }

    /// A random linear extension: repeatedly pick a uniformly random available chain.
    pub fn random_linear_extension<R: Rng>(&self, rng: &mut R) -> Vec<usize> {
        let mut indeg: Vec<usize> = self.pred.iter().map(Vec::len).collect();
        let mut avail: Vec<usize> = (0..self.len()).filter(|&v| indeg[v] == 0).collect();
        let mut out = Vec::with_capacity(self.len());
        while !avail.is_empty() {
            let v = avail.swap_remove(rng.gen_range(0..avail.len()));
            out.push(v);
            for &w in &self.succ[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    avail.push(w);
                }
            }
            avail.sort_unstable();
        }
        out
    }
}

/// Backtracking enumerator of linear extensions.
pub struct LinearExtensions<'a> {
    dag: &'a ChainOrderDag,
    indeg: Vec<usize>,
    placed: Vec<bool>,
    order: Vec<usize>,
    cursor: Vec<usize>,
    emitted: bool,
    done: bool,
}

impl LinearExtensions<'_> {
    fn pop(&mut self) {
        let v = self.order.pop().expect("non-empty prefix");
        self.placed[v] = false;
        for &w in &self.dag.succ[v] {
            self.indeg[w] += 1;
        }
    }
}

impl Iterator for LinearExtensions<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let n = self.dag.len();
        loop {
            if self.done {
                return None;
            }
            let level = self.order.len();
            if level == n {
                if !self.emitted {
                    self.emitted = true;
                    return Some(self.order.clone());
                }
                self.emitted = false;
                if n == 0 {
                    self.done = true;
                    continue;
                }
                self.pop();
                continue;
            }
            let start = self.cursor[level];
            let pick = (start..n).find(|&c| !self.placed[c] && self.indeg[c] == 0);
            match pick {
                Some(c) => {
                    self.cursor[level] = c + 1;
                    self.placed[c] = true;
                    for &w in &self.dag.succ[c] {
                        self.indeg[w] -= 1;
                    }
                    self.order.push(c);
                    self.cursor[level + 1] = 0;
                }
                None => {
                    self.cursor[level] = 0;
                    if level == 0 {
                        self.done = true;
                    } else {
                        self.pop();
                    }
                }
            }
        }
    }
}

/// Builds the relation `m → m'` from every pseudo descent of every chain `m'`.
pub fn chain_order_dag(p: &Poset, omega: &FirstAtomSet, limits: &Limits) -> Result<ChainOrderDag> {
    require_rfas(p, omega, limits)?;
    Ok(chain_order_dag_unchecked(p, omega))
}

fn chain_order_dag_unchecked(p: &Poset, omega: &FirstAtomSet) -> ChainOrderDag {
    let chains = maximal_chains(p);
    let index: HashMap<&Chain, usize> = chains.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut edges = Vec::new();
    for (j, m2) in chains.iter().enumerate() {
        for i in pseudo_descents(omega, m2) {
            let c = fac(omega, &m2[..=i], m2[i + 2]);
            let mut m = m2[..=i].to_vec();
            m.extend_from_slice(&c[1..]);
            m.extend_from_slice(&m2[i + 3..]);
            let k = index[&Chain(m)];
            edges.push((k, j));
        }
    }
    ChainOrderDag::from_edges(chains, edges)
}

struct LcSearch<'a> {
    dag: &'a ChainOrderDag,
    total: Vec<u32>,
    count: Vec<u32>,
    keys_of: Vec<Vec<usize>>,
    conflicts_of: Vec<Vec<usize>>,
    placed: Vec<bool>,
    order: Vec<usize>,
    dead: HashSet<Vec<u64>>,
    nodes: u64,
    budget: u64,
    deepest: usize,
}

impl LcSearch<'_> {
    fn mask(&self) -> Vec<u64> {
        let mut m = vec![0u64; self.placed.len().div_ceil(64)];
        for (i, &b) in self.placed.iter().enumerate() {
            if b {
                m[i / 64] |= 1 << (i % 64);
            }
        }
        m
    }

    fn allowed(&self, c: usize) -> bool {
        self.dag.pred[c].iter().all(|&q| self.placed[q])
            && self.conflicts_of[c]
                .iter()
                .all(|&k| self.count[k] == 0 || self.count[k] == self.total[k])
    }

    fn run(&mut self) -> Result<bool> {
        let n = self.dag.len();
        if self.order.len() == n {
            return Ok(true);
        }
        let key = self.mask();
        if self.dead.contains(&key) {
            return Ok(false);
        }
        self.nodes += 1;
        self.deepest = self.deepest.max(self.order.len());
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded {
                what: format!(
                    "(LC) search explored {} nodes, longest prefix {} of {} chains",
                    self.nodes - 1,
                    self.deepest,
                    n
                ),
                limit: self.budget,
            });
        }
        for c in 0..n {
            if self.placed[c] || !self.allowed(c) {
                continue;
            }
            self.placed[c] = true;
            for &k in &self.keys_of[c] {
                self.count[k] += 1;
            }
            self.order.push(c);
            if self.run()? {
                return Ok(true);
            }
            self.order.pop();
            for &k in &self.keys_of[c] {
                self.count[k] -= 1;
            }
            self.placed[c] = false;
        }
        self.dead.insert(key);
        Ok(false)
    }
}

/// A linear extension of the chain order satisfying (LC), or `None` if no
/// linear extension does.
pub fn check_lc(p: &Poset, omega: &FirstAtomSet, limits: &Limits) -> Result<Option<MaxChainOrder>> {
    let dag = chain_order_dag(p, omega, limits)?;
    if !dag.is_antisymmetric() {
        return Ok(None);
    }
    let chains = dag.chains();
    // Keys are (root of x, y, z) for consecutive x ⋖ y ⋖ z.
    let mut key_ids: HashMap<(Vec<usize>, usize, usize), usize> = HashMap::new();
    let mut by_root: HashMap<Vec<usize>, Vec<(usize, usize)>> = HashMap::new();
    let mut keys_of = vec![Vec::new(); chains.len()];
    let mut total = Vec::new();
    for (ci, m) in chains.iter().enumerate() {
        for i in 0..m.len().saturating_sub(2) {
            let k = (m[..=i].to_vec(), m[i + 1], m[i + 2]);
            let id = *key_ids.entry(k.clone()).or_insert_with(|| {
                total.push(0u32);
                by_root
                    .entry(k.0.clone())
                    .or_default()
                    .push((total.len() - 1, k.1));
                total.len() - 1
            });
            total[id] += 1;
            keys_of[ci].push(id);
        }
    }
    let conflicts_of = chains
        .iter()
        .map(|m| {
            let mut out = Vec::new();
            for i in 0..m.len() - 1 {
                if let Some(ks) = by_root.get(&m[..=i]) {
                    out.extend(ks.iter().filter(|&&(_, y)| y != m[i + 1]).map(|&(id, _)| id));
                }
            }
            out
        })
        .collect();
    let mut search = LcSearch {
        dag: &dag,
        count: vec![0; total.len()],
        total,
        keys_of,
        conflicts_of,
        placed: vec![false; chains.len()],
        order: Vec::with_capacity(chains.len()),
        dead: HashSet::new(),
        nodes: 0,
        budget: limits.max_search_nodes,
        deepest: 0,
    };
    if search.run()? {
        Ok(Some(dag.order_of(&search.order)))
    } else {
        Ok(None)
    }
}

/// True when `gamma` has no (LC) sandwich: chains `m_i, m_k` through
/// `r ∪ {x ⋖ y ⋖ z}` around a chain `m_j` through `r ∪ {x ⋖ y'}` with `y' ≠ y`.
pub fn satisfies_lc(gamma: &MaxChainOrder) -> bool {
    let chains = gamma.chains();
    for (i, mi) in chains.iter().enumerate() {
        for pos in 0..mi.len().saturating_sub(2) {
            let (root, y, z) = (&mi[..=pos], mi[pos + 1], mi[pos + 2]);
            let through = |m: &Chain| m.starts_with(root) && m[pos + 1] == y && m.get(pos + 2) == Some(&z);
            let Some(k) = chains.iter().rposition(through).filter(|&k| k > i) else {
                continue;
            };
            if chains[i + 1..k]
                .iter()
                .any(|mj| mj.starts_with(root) && mj[pos + 1] != y)
            {
                return false;
            }
        }
    }
    true
}

/// A CE-labeling compatible with `omega`, built from an (LC) linear extension.
pub fn compatible_labeling(p: &Poset, omega: &FirstAtomSet, limits: &Limits) -> Result<CeLabeling> {
    match check_lc(p, omega, limits)? {
        Some(gamma) => Ok(relabel_from_order(p, &gamma)),
        None => Err(Error::NoLcExtension),
    }
}

/// True when, in every rooted interval, the first atom lies on a chain whose
/// label sequence is the least one.
pub fn is_compatible(p: &Poset, lab: &CeLabeling, omega: &FirstAtomSet, limits: &Limits) -> Result<bool> {
    check_budget(p, limits)?;
    for iv in rooted_intervals(p) {
        let chains = chains_between(p, iv.x(), iv.y);
        let seqs = chains
            .iter()
            .map(|c| label_sequence(p, lab, &iv.root, c))
            .collect::<Result<Vec<_>>>()?;
        let least = seqs.iter().min().expect("intervals have chains");
        let atom = omega.at(&iv.root, iv.y);
        if !chains.iter().zip(&seqs).any(|(c, s)| s == least && c[1] == atom) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// First atoms read off the topologically ascending chains of the relabeling
/// of a TCL-labeling along its lexicographic order.
///
/// The relabeling keeps the ascending chains only when each one is also
/// lexicographically first in its rooted interval. In nongraded posets a
/// longer ascending chain can sit behind tied shorter chains; breaking the tie
/// then creates a second ascending chain and `RelabelNotTcl` is returned.
pub fn rfas_from_tcl(p: &Poset, lab: &CeLabeling, limits: &Limits) -> Result<FirstAtomSet> {
    let report = classify(p, lab, limits)?;
    if !report.tcl {
        let why = report
            .witness(crate::labeling::Property::Tcl)
            .map(|w| w.describe(p))
            .unwrap_or_default();
        return Err(Error::NotTcl(why));
    }
    let gamma = lex_order_max_chains(p, lab, true)?;
    let relabeled = relabel_from_order(p, &gamma);
    let asc = AscentTable::build(p, &relabeled)?;
    FirstAtomSet::from_fn(p, limits, |iv| {
        let ascending: Vec<Chain> = chains_between(p, iv.x(), iv.y)
            .into_iter()
            .filter(|c| asc.is_ascending(&iv.root, c))
            .collect();
        match ascending.as_slice() {
            [c] => Ok(c[1]),
            _ => Err(Error::RelabelNotTcl(format!(
                "{} ascending chains in {}",
                ascending.len(),
                iv.display(p)
            ))),
        }
    })
}

/// The first linear extension of the chain order, in canonical order.
pub fn shelling_from_rfas(p: &Poset, omega: &FirstAtomSet, limits: &Limits) -> Result<MaxChainOrder> {
    let dag = chain_order_dag(p, omega, limits)?;
    let first = dag.linear_extensions().next();
    first.ok_or_else(|| Error::NotAnRfas("the chain relation has a cycle".to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig5_p() -> Poset {
        Poset::build(
            &["x", "a'", "a", "b'", "b", "y"],
            &[
                ("x", "a'"),
                ("x", "a"),
                ("a'", "b'"),
                ("a'", "b"),
                ("a", "b'"),
                ("a", "b"),
                ("b'", "y"),
                ("b", "y"),
            ],
        )
        .unwrap()
    }

    fn omega_from(p: &Poset, entries: &[(&str, &str, &str)]) -> FirstAtomSet {
        // (x, y, atom) with x the unique root top; roots are unique here.
        let e: Vec<_> = entries
            .iter()
            .map(|&(x, y, a)| {
                let x = p.index_of(x).unwrap();
                let root = crate::chain::roots(p, x).remove(0);
                (root.0, p.index_of(y).unwrap(), p.index_of(a).unwrap())
            })
            .collect();
        FirstAtomSet::from_entries(p, &e, AtomDefault::None, &Limits::default()).unwrap()
    }

    #[test]
    fn collection_c_fails_backward() {
        let p = fig5_p();
        let omega = omega_from(
            &p,
            &[
                ("x", "b", "a"),
                ("x", "b'", "a'"),
                ("x", "y", "a'"),
                ("a'", "y", "b"),
                ("a", "y", "b"),
            ],
        );
        let r = check_rfas(&p, &omega, RfasOptions::default(), &Limits::default()).unwrap();
        assert!(!r.condition_i);
        assert!(r.has_direction(Direction::Backward));
    }

    #[test]
    fn missing_entry_without_default_is_an_error() {
        let p = fig5_p();
        let res = FirstAtomSet::from_entries(&p, &[], AtomDefault::None, &Limits::default());
        assert!(matches!(res, Err(Error::InvalidFirstAtomSet(_))));
        let leftmost =
            FirstAtomSet::from_entries(&p, &[], AtomDefault::Leftmost, &Limits::default()).unwrap();
        assert_eq!(leftmost.get(&[0], 5), Some(1));
    }

    #[test]
    fn non_atom_entry_rejected() {
        let p = fig5_p();
        let res =
            FirstAtomSet::from_entries(&p, &[(vec![0], 5, 3)], AtomDefault::Leftmost, &Limits::default());
        assert!(matches!(res, Err(Error::InvalidFirstAtomSet(_))));
    }

    #[test]
    fn single_chain_poset() {
        let p = Poset::build(&["0", "a", "1"], &[("0", "a"), ("a", "1")]).unwrap();
        let omega = FirstAtomSet::from_entries(&p, &[], AtomDefault::None, &Limits::default()).unwrap();
        let l = Limits::default();
        assert!(check_rfas(&p, &omega, RfasOptions::default(), &l).unwrap().ok());
        assert_eq!(first_atom_chain(&p, &omega, &[0], 2).unwrap().0, vec![0, 1, 2]);
        assert!(pseudo_descents(&omega, &[0, 1, 2]).is_empty());
        let dag = chain_order_dag(&p, &omega, &l).unwrap();
        assert!(dag.edges().is_empty());
        assert_eq!(check_lc(&p, &omega, &l).unwrap().unwrap().len(), 1);
    }

    #[test]
    fn leftmost_on_a_diamond_is_an_rfas() {
        let p = Poset::build(
            &["0", "a", "b", "1"],
            &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
        )
        .unwrap();
        let l = Limits::default();
        let omega = FirstAtomSet::from_entries(&p, &[], AtomDefault::Leftmost, &l).unwrap();
        assert!(check_rfas(&p, &omega, RfasOptions::default(), &l).unwrap().ok());
        let dag = chain_order_dag(&p, &omega, &l).unwrap();
        assert_eq!(dag.edges(), &[(0, 1)]);
        assert_eq!(dag.minimal_elements(), vec![0]);
        let order = shelling_from_rfas(&p, &omega, &l).unwrap();
        assert_eq!(order.chains()[0].0, vec![0, 1, 3]);
        let lab = compatible_labeling(&p, &omega, &l).unwrap();
        assert!(is_compatible(&p, &lab, &omega, &l).unwrap());
    }

    #[test]
    fn linear_extensions_of_antichain_and_chain() {
        let chains: Vec<Chain> = (0..4).map(|i| Chain(vec![i])).collect();
        let anti = ChainOrderDag::from_edges(chains.clone(), vec![]);
        assert_eq!(anti.linear_extension_indices().count(), 24);
        let first = anti.linear_extension_indices().next().unwrap();
        assert_eq!(first, vec![0, 1, 2, 3]);
        let total = ChainOrderDag::from_edges(chains, vec![(3, 2), (2, 1), (1, 0)]);
        let all: Vec<_> = total.linear_extension_indices().collect();
        assert_eq!(all, vec![vec![3, 2, 1, 0]]);
    }

    #[test]
    fn linear_extensions_are_sorted_and_respect_edges() {
        let chains: Vec<Chain> = (0..5).map(|i| Chain(vec![i])).collect();
        let dag = ChainOrderDag::from_edges(chains, vec![(0, 2), (1, 2), (3, 4)]);
        let all: Vec<_> = dag.linear_extension_indices().collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        for ext in &all {
            let pos = |v: usize| ext.iter().position(|&u| u == v).unwrap();
            assert!(pos(0) < pos(2) && pos(1) < pos(2) && pos(3) < pos(4));
        }
        // 5! / (3 * 2) orderings respecting both constraints.
        assert_eq!(all.len(), 20);
    }

    #[test]
    fn lc_pattern_detection() {
        let p = Poset::build(
            &["0", "a", "b", "c", "d", "1"],
            &[
                ("0", "a"),
                ("0", "b"),
                ("a", "c"),
                ("a", "d"),
                ("b", "d"),
                ("c", "1"),
                ("d", "1"),
            ],
        )
        .unwrap();
        let c = |v: &[usize]| Chain(v.to_vec());
        let bad = MaxChainOrder::new(&p, vec![c(&[0, 1, 3, 5]), c(&[0, 2, 4, 5]), c(&[0, 1, 3, 5])]);
        assert!(bad.is_err());
        // a-c, b-d, a-d: root {0} and y = a appears before and after y' = b, but
        // with different z, so there is no sandwich.
        let ok = MaxChainOrder::new(&p, vec![c(&[0, 1, 3, 5]), c(&[0, 2, 4, 5]), c(&[0, 1, 4, 5])]).unwrap();
        assert!(satisfies_lc(&ok));
    }
}
