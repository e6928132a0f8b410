#![no_main]

use libfuzzer_sys::fuzz_target;
use shellab_core::corpus::load_named;
use shellab_core::io::{parse_rfas, rfas_to_json};
use shellab_core::Limits;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let limits = Limits::default();
    for name in ["fig5-P", "fig8"] {
        let p = load_named(name).unwrap().poset;
        if let Ok(omega) = parse_rfas(&p, s, &limits) {
            let again = parse_rfas(&p, &rfas_to_json(&p, &omega), &limits).unwrap();
            assert_eq!(again.entries(), omega.entries());
        }
    }
});
