use shellab_core::chain::Limits;
use shellab_core::poset::Poset;
use shellab_core::rao::{find_grao, find_rao, verify_grao, verify_rao};

/// Atoms v1, v3, v4. In [v1, 1hat] the atom v6 sits above v3 through v5 but
/// does not cover it.
fn above_without_covering() -> Poset {
    Poset::build(
        &["0hat", "v1", "v2", "v3", "v4", "v5", "v6", "v7", "1hat"],
        &[
            ("0hat", "v1"),
            ("0hat", "v3"),
            ("0hat", "v4"),
            ("v1", "v2"),
            ("v1", "v6"),
            ("v2", "v7"),
            ("v3", "v5"),
            ("v4", "v5"),
            ("v5", "v6"),
            ("v6", "1hat"),
            ("v7", "1hat"),
        ],
    )
    .unwrap()
}

#[test]
fn recursive_atom_ordering_need_not_be_generalized_when_nongraded() {
    let p = above_without_covering();
    let limits = Limits::default();
    assert!(!p.is_graded());
    let rao = find_rao(&p, &limits)
        .unwrap()
        .expect("v3, v1, v4 works with [v1, 1hat] ordered v2, v6");
    assert!(verify_rao(&p, &rao).unwrap());
    // Placing v1 after v3 or v4 forces v6 first in [v1, 1hat], and then v2 and v6
    // meet only at 1hat with nothing below v7 but v2. Placing v1 first fails the
    // pair condition at v6.
    assert!(!verify_grao(&p, &rao).unwrap());
    assert!(find_grao(&p, &limits).unwrap().is_none());
}

#[test]
fn graded_corpus_orderings_are_generalized() {
    let limits = Limits::default();
    let p = shellab_core::corpus::load_named("fig1").unwrap().poset;
    let rao = find_rao(&p, &limits).unwrap().unwrap();
    assert!(verify_grao(&p, &rao).unwrap());
    assert!(find_grao(&p, &limits).unwrap().is_some());
}
