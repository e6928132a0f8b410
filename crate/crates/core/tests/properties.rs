use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shellab_core::chain::{maximal_chains, Limits};
use shellab_core::io::{
    chain_order_to_text, complex_to_json, labeling_to_json, parse_chain_order, parse_complex, parse_labeling,
    parse_poset, parse_rfas, poset_to_json, rfas_to_json,
};
use shellab_core::labeling::{classify, label_sequence, lex_order_max_chains, CeLabeling, Property};
use shellab_core::poset::Poset;
use shellab_core::rao::{find_grao, find_rao, verify_grao, verify_rao};
use shellab_core::relabel::{relabel_from_order, verify_block_structure, verify_label_bound, MaxChainOrder};
use shellab_core::rfas::{AtomDefault, FirstAtomSet};
use shellab_core::shelling::{
    brute_force_shellable, full_complex_order, homotopy_report, is_shelling, is_shelling_by_faces,
    order_complex, ComplexMode,
};

fn poset(seed: u64, n: usize) -> Poset {
    Poset::random_bounded(seed, n, 0.35)
}

fn edge_labeling(p: &Poset, seed: u64, max_label: i64) -> CeLabeling {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: BTreeMap<(usize, usize), i64> = p
        .cover_pairs()
        .into_iter()
        .map(|e| (e, rng.gen_range(1..=max_label)))
        .collect();
    CeLabeling::from_edge_labels(p, &edges, &Limits::default()).unwrap()
}

fn shuffled_order(p: &Poset, seed: u64) -> MaxChainOrder {
    let mut chains = maximal_chains(p);
    chains.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    MaxChainOrder::new(p, chains).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn dual_is_an_involution(seed in 0u64..10_000, n in 2usize..=10) {
        let p = poset(seed, n);
        prop_assert_eq!(p.dual().dual(), p.clone());
        prop_assert_eq!(maximal_chains(&p.dual()).len(), maximal_chains(&p).len());
        prop_assert_eq!(p.dual().chain_length_range(), p.chain_length_range());
    }

    #[test]
    fn ordinal_sum_adds_lengths(a in 0u64..1000, b in 0u64..1000, n in 2usize..=6, m in 2usize..=6) {
        let (p, q) = (poset(a, n), poset(b, m));
        let s = p.ordinal_sum(&q);
        prop_assert_eq!(s.len(), p.len() + q.len());
        prop_assert_eq!(s.length(), p.length() + q.length() + 1);
        prop_assert_eq!(maximal_chains(&s).len(), maximal_chains(&p).len() * maximal_chains(&q).len());
    }

    #[test]
    fn labeling_class_implications(seed in 0u64..10_000, n in 2usize..=9, labels in 1i64..=4) {
        let p = poset(seed, n);
        let lab = edge_labeling(&p, seed ^ 0x5eed, labels);
        let r = classify(&p, &lab, &Limits::default()).unwrap();
        use Property::*;
        for (a, b) in [(El, Cl), (Cl, Tcl), (Cc, Tcl), (Ec, Cc)] {
            prop_assert!(!r.holds(a) || r.holds(b), "{} without {}", a.as_str(), b.as_str());
        }
        // Edge labelings never depend on the root.
        prop_assert!(r.root_independent);
    }

    #[test]
    fn cc_lexicographic_order_is_a_shelling(seed in 0u64..10_000, n in 2usize..=9) {
        let p = poset(seed, n);
        let lab = edge_labeling(&p, seed.wrapping_mul(31), 4);
        let r = classify(&p, &lab, &Limits::default()).unwrap();
        prop_assume!(r.cc);
        let gamma = lex_order_max_chains(&p, &lab, false).unwrap();
        let (k, order) = full_complex_order(&p, gamma.chains()).unwrap();
        prop_assert!(is_shelling(&k, &order).unwrap().ok);
    }

    #[test]
    fn relabeling_verifiers_hold_for_any_order(seed in 0u64..10_000, n in 2usize..=10) {
        let p = poset(seed, n);
        let gamma = shuffled_order(&p, seed + 1);
        let lab = relabel_from_order(&p, &gamma);
        lab.check_total(&p).unwrap();
        prop_assert!(verify_block_structure(&p, &gamma, &lab));
        prop_assert!(verify_label_bound(&p, &gamma, &lab));
        // Maximal chains through distinct atoms never share a label sequence.
        let chains = maximal_chains(&p);
        for a in &chains {
            for b in &chains {
                if a[1] != b[1] {
                    let sa = label_sequence(&p, &lab, &[p.bottom()], a).unwrap();
                    let sb = label_sequence(&p, &lab, &[p.bottom()], b).unwrap();
                    prop_assert_ne!(sa, sb);
                }
            }
        }
    }

    #[test]
    fn shelling_formulations_agree(seed in 0u64..10_000, n in 2usize..=9) {
        let p = poset(seed, n);
        let k = order_complex(&p, ComplexMode::Full).unwrap();
        let mut order: Vec<usize> = (0..k.facets().len()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let a = is_shelling(&k, &order).unwrap().ok;
        let b = is_shelling_by_faces(&k, &order).unwrap().ok;
        prop_assert_eq!(a, b);
        if a {
            prop_assert!(homotopy_report(&k, &order).unwrap().consistent());
        }
    }

    #[test]
    fn brute_force_orders_are_shellings(seed in 0u64..10_000, n in 2usize..=8) {
        let p = poset(seed, n);
        let k = order_complex(&p, ComplexMode::Full).unwrap();
        prop_assume!(k.facets().len() <= 9);
        let found = brute_force_shellable(&k, &Limits::default()).unwrap();
        if let Some(order) = found.order {
            prop_assert!(is_shelling(&k, &order).unwrap().ok);
            prop_assert!(homotopy_report(&k, &order).unwrap().consistent());
        }
    }

    #[test]
    fn atom_orderings_verify(seed in 0u64..10_000, n in 2usize..=9) {
        let p = poset(seed, n);
        let limits = Limits::default();
        let rao = find_rao(&p, &limits).unwrap();
        let grao = find_grao(&p, &limits).unwrap();
        if let Some(t) = &rao {
            prop_assert!(verify_rao(&p, t).unwrap());
            // Nongraded posets can have an atom above an earlier atom without
            // covering it, see tests/atom_orderings.rs.
            if p.is_graded() {
                prop_assert!(grao.is_some());
            }
        }
        if let Some(t) = &grao {
            prop_assert!(verify_grao(&p, t).unwrap());
        }
    }

    #[test]
    fn file_formats_round_trip(seed in 0u64..10_000, n in 2usize..=9) {
        let p = poset(seed, n);
        let limits = Limits::default();
        let q = parse_poset(&poset_to_json(&p)).unwrap();
        prop_assert_eq!(&q, &p);

        let gamma = shuffled_order(&p, seed);
        let lab = relabel_from_order(&p, &gamma);
        let back = parse_labeling(&p, &labeling_to_json(&p, &lab, false), &limits).unwrap();
        prop_assert_eq!(back.entries(), lab.entries());

        let order_back = parse_chain_order(&p, &chain_order_to_text(&p, &gamma)).unwrap();
        prop_assert_eq!(order_back, gamma);

        let omega = FirstAtomSet::from_entries(&p, &[], AtomDefault::Leftmost, &limits).unwrap();
        let omega_back = parse_rfas(&p, &rfas_to_json(&p, &omega), &limits).unwrap();
        prop_assert_eq!(omega_back.entries(), omega.entries());

        let k = order_complex(&p, ComplexMode::Full).unwrap();
        let k_back = parse_complex(&complex_to_json(&k)).unwrap();
        prop_assert_eq!(k_back.facets(), k.facets());
        prop_assert_eq!(k_back.vertices(), k.vertices());
    }
}
