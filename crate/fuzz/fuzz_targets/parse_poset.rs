#![no_main]

use libfuzzer_sys::fuzz_target;
use shellab_core::io::{parse_poset, poset_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(p) = parse_poset(s) else { return };
    let back = parse_poset(&poset_to_json(&p)).expect("serialized posets parse");
    assert_eq!(back, p);
    assert_eq!(p.dual().dual(), p);
    let _ = p.to_dot();
});
