//! CE-labelings built from a total order on maximal chains.
//!
//! For a root `r` of `x`, the atoms of `[x, 1̂]` are listed in order of first
//! appearance along the chain order Γ. Atom `a_j`, first seen at 1-based index
//! `i_j`, inherits the label of the earliest atom `a_h` that occurs with `r`
//! both before and after `i_j`; otherwise it is labeled `i_j`.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use crate::chain::{all_proper_roots, maximal_chains, Chain};
use crate::error::{Error, Result};
use crate::labeling::CeLabeling;
use crate::poset::Poset;

/// A permutation of the maximal chains of a poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxChainOrder {
    chains: Vec<Chain>,
}

impl MaxChainOrder {
    /// Validates that `chains` lists every maximal chain of `p` exactly once.
    pub fn new(p: &Poset, chains: Vec<Chain>) -> Result<Self> {
        let all: HashSet<Chain> = maximal_chains(p).into_iter().collect();
        let mut seen = HashSet::with_capacity(chains.len());
        for c in &chains {
            if !all.contains(c) {
                return Err(Error::InvalidOrder(format!(
                    "{} is not a maximal chain",
                    c.display(p)
                )));
            }
            if !seen.insert(c.clone()) {
                return Err(Error::InvalidOrder(format!("{} listed twice", c.display(p))));
            }
        }
        if seen.len() != all.len() {
            return Err(Error::InvalidOrder(format!(
                "{} of {} maximal chains listed",
                seen.len(),
                all.len()
            )));
        }
        Ok(MaxChainOrder { chains })
    }

    pub(crate) fn from_trusted(chains: Vec<Chain>) -> Self {
        MaxChainOrder { chains }
    }

    /// Canonical order of the maximal chains.
    pub fn canonical(p: &Poset) -> Self {
        MaxChainOrder {
            chains: maximal_chains(p),
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

    /// 1-based index of the first chain that starts with `prefix`.
    pub fn first_with_prefix(&self, prefix: &[usize]) -> Option<usize> {
        self.chains
            .iter()
            .position(|c| c.starts_with(prefix))
            .map(|i| i + 1)
    }

    pub fn display(&self, p: &Poset) -> Vec<String> {
        self.chains.iter().map(|c| c.display(p)).collect()
    }
}

/// Atoms of `[x, 1̂]` in order of first appearance with `root`, with the 1-based
/// indices of their first and last appearance.
fn atom_appearances(gamma: &MaxChainOrder, root: &[usize]) -> Vec<(usize, usize, usize)> {
    let depth = root.len();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    let mut out: Vec<(usize, usize, usize)> = Vec::new();
    for (i, c) in gamma.chains().iter().enumerate() {
        if !c.starts_with(root) {
            continue;
        }
        let atom = c[depth];
        match slot.get(&atom) {
            Some(&s) => out[s].2 = i + 1,
            None => {
                slot.insert(atom, out.len());
                out.push((atom, i + 1, i + 1));
            }
        }
    }
    out
}

fn labels_for_root(gamma: &MaxChainOrder, root: &[usize]) -> Vec<(usize, i64)> {
    let seen = atom_appearances(gamma, root);
    let mut labels: Vec<i64> = Vec::with_capacity(seen.len());
    for (j, &(_, first, _)) in seen.iter().enumerate() {
        let inherited = (0..j).find(|&h| seen[h].2 > first).map(|h| labels[h]);
        labels.push(inherited.unwrap_or(first as i64));
    }
    seen.iter().map(|s| s.0).zip(labels).collect()
}

/// The CE-labeling induced by the chain order `gamma`.
pub fn relabel_from_order(p: &Poset, gamma: &MaxChainOrder) -> CeLabeling {
    let roots = all_proper_roots(p);
    let per_root: Vec<(Chain, Vec<(usize, i64)>)> = roots
        .into_par_iter()
        .map(|r| {
            let labels = labels_for_root(gamma, &r);
            (r, labels)
        })
        .collect();
    let mut lab = CeLabeling::new();
    for (r, labels) in per_root {
        for (atom, label) in labels {
            lab.insert(r.0.clone(), atom, label);
        }
    }
    lab
}

/// Every label is at most the index of the first chain through its rooted cover.
pub fn verify_label_bound(p: &Poset, gamma: &MaxChainOrder, lab: &CeLabeling) -> bool {
    all_proper_roots(p).iter().all(|r| {
        p.up(r.top()).iter().all(|&y| {
            let prefix = r.extended(y);
            match (lab.get(r, y), gamma.first_with_prefix(&prefix)) {
                (Some(l), Some(bound)) => l <= bound as i64,
                _ => false,
            }
        })
    })
}

/// In each root's atom order, atoms sharing a label are contiguous.
pub fn verify_block_structure(p: &Poset, gamma: &MaxChainOrder, lab: &CeLabeling) -> bool {
    all_proper_roots(p).iter().all(|r| {
        let mut closed: HashSet<i64> = HashSet::new();
        let mut current: Option<i64> = None;
        for (atom, _, _) in atom_appearances(gamma, r) {
            let Some(l) = lab.get(r, atom) else {
                return false;
            };
            if current != Some(l) {
                if closed.contains(&l) {
                    return false;
                }
                if let Some(c) = current {
                    closed.insert(c);
                }
                current = Some(l);
            }
        }
        true
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_chains() -> Poset {
        Poset::build(
            &["0", "a", "b", "1"],
            &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
        )
        .unwrap()
    }

    fn chain(p: &Poset, names: &[&str]) -> Chain {
        Chain(names.iter().map(|n| p.index_of(n).unwrap()).collect())
    }

    #[test]
    fn order_validation() {
        let p = two_chains();
        let a = chain(&p, &["0", "a", "1"]);
        let b = chain(&p, &["0", "b", "1"]);
        assert!(MaxChainOrder::new(&p, vec![a.clone()]).is_err());
        assert!(MaxChainOrder::new(&p, vec![a.clone(), a.clone()]).is_err());
        assert!(MaxChainOrder::new(&p, vec![a.clone(), chain(&p, &["0", "a"])]).is_err());
        let g = MaxChainOrder::new(&p, vec![b, a]).unwrap();
        assert_eq!(g.first_with_prefix(&[0, 1]), Some(2));
    }

    #[test]
    fn disjoint_chains_get_their_index() {
        let p = two_chains();
        let g = MaxChainOrder::canonical(&p);
        let lab = relabel_from_order(&p, &g);
        let (a, b) = (1, 2);
        assert_eq!(lab.get(&[0], a), Some(1));
        assert_eq!(lab.get(&[0, a], 3), Some(1));
        assert_eq!(lab.get(&[0], b), Some(2));
        assert_eq!(lab.get(&[0, b], 3), Some(2));
        assert!(verify_label_bound(&p, &g, &lab));
        assert!(verify_block_structure(&p, &g, &lab));
    }

    #[test]
    fn sandwiched_atom_inherits_label() {
        // Atoms a, b; a has two chains above it, so Γ can put b between them.
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
        let g = MaxChainOrder::new(
            &p,
            vec![
                chain(&p, &["0", "a", "c", "1"]),
                chain(&p, &["0", "b", "d", "1"]),
                chain(&p, &["0", "a", "d", "1"]),
            ],
        )
        .unwrap();
        let lab = relabel_from_order(&p, &g);
        assert_eq!(lab.get(&[0], 1), Some(1));
        assert_eq!(lab.get(&[0], 2), Some(1));
        assert!(verify_block_structure(&p, &g, &lab));
        assert!(verify_label_bound(&p, &g, &lab));
    }

    #[test]
    fn corrupted_label_breaks_the_bound() {
        let p = two_chains();
        let g = MaxChainOrder::canonical(&p);
        let mut lab = relabel_from_order(&p, &g);
        lab.insert(vec![0], 1, 5);
        assert!(!verify_label_bound(&p, &g, &lab));
    }
}
