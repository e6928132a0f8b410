#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use shellab_core::chain::{maximal_chains_rooted, rooted_intervals, Limits, RootedInterval};
use shellab_core::labeling::{is_topological_ascent, label_sequence, CeLabeling, LabelSequence};
use shellab_core::poset::Poset;
use shellab_core::rfas::{
    chain_order_dag, check_rfas, first_atom_chain, pseudo_descent_elements, pseudo_descents_rooted,
    FirstAtomSet, RfasOptions,
};
use shellab_core::shelling::{full_complex_order, is_shelling, restriction_map};
use shellab_core::Chain;

pub fn seqs(p: &Poset, lab: &CeLabeling, chains: &[Chain]) -> Vec<LabelSequence> {
    chains
        .iter()
        .map(|c| label_sequence(p, lab, &[p.bottom()], c).unwrap())
        .collect()
}

pub fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// A rooted interval whose unique topologically ascending chain is not the
/// lexicographically first one, if any.
pub fn ascent_behind_lex_first(p: &Poset, lab: &CeLabeling) -> Option<RootedInterval> {
    rooted_intervals(p).find(|iv| {
        let chains = maximal_chains_rooted(p, &iv.root, iv.y).unwrap();
        let ascending: Vec<&Chain> = chains
            .iter()
            .filter(|c| {
                let mut acc = iv.root.0.clone();
                (0..c.len().saturating_sub(2)).all(|i| {
                    let up = is_topological_ascent(p, lab, &acc, c[i + 1], c[i + 2]).unwrap();
                    acc.push(c[i + 1]);
                    up
                })
            })
            .collect();
        let [asc] = ascending.as_slice() else {
            return false;
        };
        let seq = |c: &Chain| label_sequence(p, lab, &iv.root, c).unwrap();
        let a = seq(asc);
        chains.iter().any(|c| c != *asc && seq(c) <= a)
    })
}

/// Linear extensions to test: all of them if there are at most 1,000, otherwise
/// 100 sampled with a fixed seed.
pub fn extensions_to_test(dag: &shellab_core::rfas::ChainOrderDag, seed: u64) -> Vec<Vec<usize>> {
    let first: Vec<Vec<usize>> = dag.linear_extension_indices().take(1001).collect();
    if first.len() <= 1000 {
        return first;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..100).map(|_| dag.random_linear_extension(&mut rng)).collect()
}

/// Every consequence of `omega` being an RFAS that the shelling argument uses:
/// pseudo descents versus first atom chains on every rooted interval, the
/// chain order being a partial order with the first atom chain as its unique
/// minimum, and every tested linear extension being a shelling whose
/// restriction map is given by pseudo descents.
pub fn rfas_invariants(p: &Poset, omega: &FirstAtomSet, limits: &Limits, seed: u64) -> Result<(), String> {
    let report = check_rfas(p, omega, RfasOptions::default(), limits).map_err(|e| e.to_string())?;
    if !report.ok() {
        let why = report
            .violations
            .first()
            .map(|v| v.describe(p))
            .unwrap_or_default();
        return Err(format!("not an RFAS: {why}"));
    }
    for iv in rooted_intervals(p) {
        let fac = first_atom_chain(p, omega, &iv.root, iv.y).map_err(|e| e.to_string())?;
        for m in maximal_chains_rooted(p, &iv.root, iv.y).map_err(|e| e.to_string())? {
            let descents = pseudo_descents_rooted(omega, &iv.root, &m);
            if m == fac {
                ensure(
                    descents.is_empty(),
                    format!("first atom chain of {} has a pseudo descent", iv.display(p)),
                )?;
            } else {
                ensure(
                    !descents.is_empty(),
                    format!("{} in {} has no pseudo descent", m.display(p), iv.display(p)),
                )?;
            }
        }
    }
    let dag = chain_order_dag(p, omega, limits).map_err(|e| e.to_string())?;
    ensure(dag.is_antisymmetric(), "chain order has a cycle")?;
    let fac = first_atom_chain(p, omega, &[p.bottom()], p.top()).map_err(|e| e.to_string())?;
    let min = dag.chain_index(&fac).ok_or("first atom chain is not maximal")?;
    ensure(
        dag.minimal_elements() == vec![min],
        "first atom chain is not the unique minimum",
    )?;
    let closure = dag.closure();
    ensure(
        closure[min].iter().all(|&b| b),
        "some chain is not above the first atom chain",
    )?;
    for ix in extensions_to_test(&dag, seed) {
        let order = dag.order_of(&ix);
        let (k, facets) = full_complex_order(p, order.chains()).map_err(|e| e.to_string())?;
        let check = is_shelling(&k, &facets).map_err(|e| e.to_string())?;
        ensure(
            check.ok,
            format!("linear extension is not a shelling: {:?}", check.first_violation),
        )?;
        let rmap = restriction_map(&k, &facets).map_err(|e| e.to_string())?;
        let elements = k.elements().expect("order complexes know their elements");
        for (j, m) in order.chains().iter().enumerate() {
            let got: BTreeSet<usize> = rmap[j].iter().map(|&v| elements[v]).collect();
            let want = pseudo_descent_elements(omega, m);
            ensure(
                got == want,
                format!("restriction of {} differs from its pseudo descents", m.display(p)),
            )?;
        }
    }
    Ok(())
}
