#![no_main]

use libfuzzer_sys::fuzz_target;
use shellab_core::corpus::load_named;
use shellab_core::io::parse_rao_tree;
use shellab_core::rao::{verify_grao, verify_rao};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    for name in ["fig1", "fig3-Q"] {
        let p = load_named(name).unwrap().poset;
        if let Ok(tree) = parse_rao_tree(&p, s) {
            let _ = verify_rao(&p, &tree);
            let _ = verify_grao(&p, &tree);
        }
    }
});
