use shellab_core::chain::Limits;
use shellab_core::corpus::{check_expectations, load_named, names, rank_sizes};
use shellab_core::error::Error;

#[test]
fn every_recorded_expectation_holds() {
    let limits = Limits::default();
    let mut failures = Vec::new();
    for name in names() {
        let ex = load_named(&name).unwrap();
        for c in check_expectations(&ex, &limits).unwrap() {
            if !c.ok() {
                failures.push(format!("{}: expected {}, got {}", c.what, c.expected, c.actual));
            }
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn example_names() {
    assert_eq!(names(), ["fig1", "fig2-P", "fig3-Q", "fig5-P", "fig5-Q", "fig8"]);
    assert!(matches!(load_named("fig9"), Err(Error::UnknownName(_))));
}

#[test]
fn fig2_rank_profile() {
    let ex = load_named("fig2-P").unwrap();
    assert!(ex.poset.is_graded());
    assert_eq!(ex.poset.atoms().len(), 3);
    assert_eq!(ex.poset.coatoms().len(), 4);
    assert_eq!(rank_sizes(&ex.poset), Some(vec![1, 3, 6, 4, 1]));
    assert_eq!(ex.labelings.len(), 2);
    assert!(ex.labeling("dual-el").unwrap().on_dual);
}

#[test]
fn fig5_q_has_the_extra_branch() {
    let ex = load_named("fig5-Q").unwrap();
    assert_eq!(ex.poset.len(), 8);
    for n in ["a''", "b''"] {
        ex.poset.index_of(n).unwrap();
    }
}

#[test]
fn fig1_has_three_labelings() {
    let ex = load_named("fig1").unwrap();
    assert_eq!(ex.poset.len(), 6);
    let names: Vec<_> = ex.labelings.iter().map(|l| l.name.as_str()).collect();
    assert_eq!(names, ["left", "middle", "right"]);
}
