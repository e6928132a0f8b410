#![no_main]

use libfuzzer_sys::fuzz_target;
use shellab_core::corpus::load_named;
use shellab_core::io::{labeling_to_json, parse_labeling, LabelingDoc};
use shellab_core::Limits;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(doc) = LabelingDoc::parse(s) else { return };
    let limits = Limits {
        max_rooted_covers: 500,
        ..Limits::default()
    };
    for name in ["fig1", "fig2-P"] {
        let p = load_named(name).unwrap().poset;
        let p = if doc.on_dual() { p.dual() } else { p };
        if let Ok(lab) = doc.resolve(&p, &limits) {
            let again = parse_labeling(&p, &labeling_to_json(&p, &lab, doc.on_dual()), &limits).unwrap();
            assert_eq!(again.entries(), lab.entries());
        }
    }
});
