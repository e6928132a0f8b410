//! Finite bounded posets stored as Hasse data.
//!
//! Elements keep the order in which they were supplied; every downstream
//! enumeration (chains, roots, atom orders) is derived from that order, so
//! two posets built from the same input produce byte-identical reports.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A validated finite bounded poset.
#[derive(Clone, Debug)]
pub struct Poset {
    names: Vec<String>,
    index: HashMap<String, usize>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    leq: Vec<Vec<bool>>,
    bottom: usize,
    top: usize,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.up == other.up
    }
}

impl Eq for Poset {}

impl Poset {
    /// Builds a poset from element identifiers and cover pairs `(a, b)` meaning `a ⋖ b`.
    pub fn build<S: AsRef<str>>(elements: &[S], covers: &[(S, S)]) -> Result<Self> {
        let mut index = HashMap::with_capacity(elements.len());
        let mut names = Vec::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            let e = e.as_ref();
            if index.insert(e.to_string(), i).is_some() {
                return Err(Error::DuplicateElement(e.to_string()));
            }
            names.push(e.to_string());
        }
        let lookup = |s: &str| -> Result<usize> {
            index
                .get(s)
                .copied()
                .ok_or_else(|| Error::UnknownElement(s.to_string()))
        };
        let mut pairs = Vec::with_capacity(covers.len());
        for (a, b) in covers {
            pairs.push((lookup(a.as_ref())?, lookup(b.as_ref())?));
        }
        Self::from_indices(names, pairs)
    }

    /// Builds a poset from owned names and index-based cover pairs.
    pub fn from_indices(names: Vec<String>, covers: Vec<(usize, usize)>) -> Result<Self> {
        let n = names.len();
        let mut index = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateElement(name.clone()));
            }
        }
        if n < 2 {
            return Err(Error::NotBounded(
                "a bounded poset needs distinct bottom and top elements".into(),
            ));
        }
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for &(a, b) in &covers {
            if a >= n || b >= n {
                return Err(Error::UnknownElement(format!("#{}", a.max(b))));
            }
            if a == b {
                return Err(Error::CycleDetected(names[a].clone()));
            }
            if up[a].contains(&b) {
                return Err(Error::RedundantCover(names[a].clone(), names[b].clone()));
            }
            up[a].push(b);
            down[b].push(a);
        }
        for list in up.iter_mut().chain(down.iter_mut()) {
            list.sort_unstable();
        }

        // Kahn's algorithm; leftover vertices sit on a cycle.
        let mut indeg: Vec<usize> = down.iter().map(Vec::len).collect();
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(v) = queue.pop_front() {
            topo.push(v);
            for &w in &up[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        if topo.len() < n {
            let stuck = (0..n).find(|&v| indeg[v] > 0).unwrap_or(0);
            return Err(Error::CycleDetected(names[stuck].clone()));
        }

        let mut leq = vec![vec![false; n]; n];
        for &v in topo.iter().rev() {
            leq[v][v] = true;
            for &w in &up[v] {
                let above = leq[w].clone();
                for (dst, src) in leq[v].iter_mut().zip(above) {
                    *dst |= src;
                }
            }
        }

        for a in 0..n {
            for &b in &up[a] {
                if up[a].iter().any(|&c| c != b && leq[c][b]) {
                    return Err(Error::RedundantCover(names[a].clone(), names[b].clone()));
                }
            }
        }

        let minimal: Vec<usize> = (0..n).filter(|&v| down[v].is_empty()).collect();
        let maximal: Vec<usize> = (0..n).filter(|&v| up[v].is_empty()).collect();
        if minimal.len() != 1 {
            return Err(Error::NotBounded(format!(
                "expected one minimal element, found {}",
                minimal.len()
            )));
        }
        if maximal.len() != 1 {
            return Err(Error::NotBounded(format!(
                "expected one maximal element, found {}",
                maximal.len()
            )));
        }

        Ok(Poset {
            names,
            index,
            up,
            down,
            leq,
            bottom: minimal[0],
            top: maximal[0],
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq[a][b]
    }

    pub fn covers(&self, a: usize, b: usize) -> bool {
        self.up[a].binary_search(&b).is_ok()
    }

    /// Elements covering `v`, in canonical order.
    pub fn up(&self, v: usize) -> &[usize] {
        &self.up[v]
    }

    /// Elements covered by `v`, in canonical order.
    pub fn down(&self, v: usize) -> &[usize] {
        &self.down[v]
    }

    pub fn atoms(&self) -> &[usize] {
        &self.up[self.bottom]
    }

    pub fn coatoms(&self) -> &[usize] {
        &self.down[self.top]
    }

    /// Atoms of the interval `[x, y]`: covers of `x` lying below `y`.
    pub fn interval_atoms(&self, x: usize, y: usize) -> Vec<usize> {
        if x == y {
            return Vec::new();
        }
        self.up[x].iter().copied().filter(|&a| self.leq[a][y]).collect()
    }

    /// All cover pairs in canonical order.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|a| self.up[a].iter().map(move |&b| (a, b)))
            .collect()
    }

    /// Shortest and longest maximal chain lengths.
    pub fn chain_length_range(&self) -> (usize, usize) {
        let n = self.len();
        let mut order: Vec<usize> = (0..n).collect();
        // Down-set sizes give a linear extension.
        order.sort_by_key(|&v| (0..n).filter(|&u| self.leq[u][v]).count());
        let mut shortest = vec![usize::MAX; n];
        let mut longest = vec![0usize; n];
        shortest[self.bottom] = 0;
        for &v in &order {
            if v == self.bottom {
                continue;
            }
            shortest[v] = self.down[v].iter().map(|&u| shortest[u] + 1).min().unwrap_or(0);
            longest[v] = self.down[v].iter().map(|&u| longest[u] + 1).max().unwrap_or(0);
        }
        (shortest[self.top], longest[self.top])
    }

    /// Length of the longest maximal chain.
    pub fn length(&self) -> usize {
        self.chain_length_range().1
    }

    pub fn is_graded(&self) -> bool {
        let (lo, hi) = self.chain_length_range();
        lo == hi
    }

    /// The dual poset: covers reversed, bottom and top exchanged.
    pub fn dual(&self) -> Poset {
        let covers = self.cover_pairs().into_iter().map(|(a, b)| (b, a)).collect();
        Poset::from_indices(self.names.clone(), covers).expect("dual of a valid poset is valid")
    }

    /// The closed interval `[x, y]` as a poset, with the map from its indices back
    /// into `self`.
    pub fn interval(&self, x: usize, y: usize) -> Result<(Poset, Vec<usize>)> {
        if !self.leq[x][y] || x == y {
            return Err(Error::NotBounded(format!(
                "[{}, {}] has fewer than two elements",
                self.names[x], self.names[y]
            )));
        }
        let members: Vec<usize> = (0..self.len())
            .filter(|&v| self.leq[x][v] && self.leq[v][y])
            .collect();
        let local: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let names = members.iter().map(|&v| self.names[v].clone()).collect();
        let covers = members
            .iter()
            .flat_map(|&a| {
                self.up[a]
                    .iter()
                    .filter_map(|b| local.get(b).map(|&lb| (local[&a], lb)))
                    .collect::<Vec<_>>()
            })
            .collect();
        Ok((Poset::from_indices(names, covers)?, members))
    }

    /// Ordinal sum `self ⊕ other`: every element of `self` lies below every element
    /// of `other`, joined by the single new cover `1̂_self ⋖ 0̂_other`.
    ///
    /// If identifiers collide, the identifiers of `other` get a `*` suffix.
    pub fn ordinal_sum(&self, other: &Poset) -> Poset {
        let collide = other.names.iter().any(|n| self.index.contains_key(n));
        let mut names = self.names.clone();
        for name in &other.names {
            let mut name = name.clone();
            if collide {
                name.push('*');
                while self.index.contains_key(&name) {
                    name.push('*');
                }
            }
            names.push(name);
        }
        let shift = self.len();
        let mut covers = self.cover_pairs();
        covers.extend(
            other
                .cover_pairs()
                .into_iter()
                .map(|(a, b)| (a + shift, b + shift)),
        );
        covers.push((self.top, other.bottom + shift));
        Poset::from_indices(names, covers).expect("ordinal sum of bounded posets is bounded")
    }

    /// A deterministic pseudo-random bounded poset on `n ≥ 2` elements.
    ///
    /// A random DAG on `n - 2` inner elements (edge `i → j`, `i < j`, with probability
    /// `edge_probability`) is transitively reduced, then `0hat` is put below every
    /// minimal element and `1hat` above every maximal one.
    #[allow(clippy::needless_range_loop)]
    pub fn random_bounded(seed: u64, n: usize, edge_probability: f64) -> Poset {
        assert!(n >= 2, "a bounded poset needs at least two elements");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inner = n - 2;
        let p = edge_probability.clamp(0.0, 1.0);
        let mut reach = vec![vec![false; inner]; inner];
        for i in 0..inner {
            for j in i + 1..inner {
                if rng.gen_bool(p) {
                    reach[i][j] = true;
                }
            }
        }
        // Transitive closure; index order is a topological order.
        for k in 0..inner {
            for i in 0..k {
                if reach[i][k] {
                    for j in k + 1..inner {
                        if reach[k][j] {
                            reach[i][j] = true;
                        }
                    }
                }
            }
        }
        let mut names = Vec::with_capacity(n);
        names.push("0hat".to_string());
        names.extend((1..=inner).map(|i| format!("v{i}")));
        names.push("1hat".to_string());
        let (bot, top) = (0, n - 1);
        let mut covers = Vec::new();
        for i in 0..inner {
            for j in i + 1..inner {
                if reach[i][j] && !(i + 1..j).any(|k| reach[i][k] && reach[k][j]) {
                    covers.push((i + 1, j + 1));
                }
            }
        }
        for i in 0..inner {
            if !(0..i).any(|k| reach[k][i]) {
                covers.push((bot, i + 1));
            }
            if !(i + 1..inner).any(|k| reach[i][k]) {
                covers.push((i + 1, top));
            }
        }
        if inner == 0 {
            covers.push((bot, top));
        }
        Poset::from_indices(names, covers).expect("generator output is a bounded poset")
    }

    /// Graphviz rendering of the Hasse diagram, edges directed bottom to top.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph hasse {\n  rankdir=BT;\n");
        for name in &self.names {
            let _ = writeln!(out, "  {};", dot_id(name));
        }
        for (a, b) in self.cover_pairs() {
            let _ = writeln!(out, "  {} -> {};", dot_id(&self.names[a]), dot_id(&self.names[b]));
        }
        out.push_str("}\n");
        out
    }
}

fn dot_id(name: &str) -> String {
    format!("\"{}\"", name.replace('\\', "\\\\").replace('"', "\\\""))
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

    #[test]
    fn smallest_bounded_poset() {
        let p = Poset::build(&["0hat", "1hat"], &[("0hat", "1hat")]).unwrap();
        assert_eq!(p.length(), 1);
        assert!(p.is_graded());
        assert_eq!(p, p.dual().dual());
    }

    #[test]
    fn fig1_is_graded() {
        let p = fig1();
        assert_eq!(p.len(), 6);
        assert_eq!(p.cover_pairs().len(), 8);
        assert!(p.is_graded());
        assert_eq!(p.length(), 3);
    }

    #[test]
    fn two_cycle_rejected() {
        let err = Poset::build(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap_err();
        assert!(matches!(err, Error::CycleDetected(_)));
    }

    #[test]
    fn redundant_cover_rejected() {
        let err = Poset::build(&["0", "a", "1"], &[("0", "a"), ("a", "1"), ("0", "1")]).unwrap_err();
        assert!(matches!(err, Error::RedundantCover(..)));
    }

    #[test]
    fn unbounded_rejected() {
        let err = Poset::build(&["0", "a", "b"], &[("0", "a"), ("0", "b")]).unwrap_err();
        assert!(matches!(err, Error::NotBounded(_)));
        let err = Poset::build(&["x"], &[] as &[(&str, &str)]).unwrap_err();
        assert!(matches!(err, Error::NotBounded(_)));
    }

    #[test]
    fn duplicate_and_unknown_ids() {
        assert!(matches!(
            Poset::build(&["a", "a"], &[]).unwrap_err(),
            Error::DuplicateElement(_)
        ));
        assert!(matches!(
            Poset::build(&["a", "b"], &[("a", "z")]).unwrap_err(),
            Error::UnknownElement(_)
        ));
    }

    #[test]
    fn ordinal_sum_of_two_edges_is_chain_of_length_three() {
        let p = Poset::build(&["0hat", "1hat"], &[("0hat", "1hat")]).unwrap();
        let s = p.ordinal_sum(&p);
        assert_eq!(s.len(), 4);
        assert_eq!(s.length(), 3);
        assert!(s.is_graded());
        assert_eq!(s.name(2), "0hat*");
    }

    #[test]
    fn dual_swaps_bounds() {
        let p = fig1();
        let d = p.dual();
        assert_eq!(d.bottom(), p.top());
        assert_eq!(d.top(), p.bottom());
        assert_eq!(d.dual(), p);
    }

    #[test]
    fn random_generator_edge_cases() {
        let p = Poset::random_bounded(1, 2, 1.0);
        assert_eq!(p.len(), 2);
        assert_eq!(p.length(), 1);
        let a = Poset::random_bounded(7, 8, 0.3);
        let b = Poset::random_bounded(7, 8, 0.3);
        assert_eq!(a, b);
        assert_eq!(a.len(), 8);
        // Rebuilding from its own covers must validate.
        let names = a.names().to_vec();
        Poset::from_indices(names, a.cover_pairs()).unwrap();
    }

    #[test]
    fn dot_export_lists_every_cover() {
        let dot = fig1().to_dot();
        assert_eq!(dot.matches("->").count(), 8);
        assert!(dot.contains("rankdir=BT"));
    }
}
