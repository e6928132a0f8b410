#![no_main]

use libfuzzer_sys::fuzz_target;
use shellab_core::corpus::load_named;
use shellab_core::io::{chain_order_to_text, parse_chain_order};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    for name in ["fig1", "fig2-P"] {
        let p = load_named(name).unwrap().poset;
        if let Ok(order) = parse_chain_order(&p, s) {
            assert_eq!(
                parse_chain_order(&p, &chain_order_to_text(&p, &order)).unwrap(),
                order
            );
        }
    }
});
