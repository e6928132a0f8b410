#![no_main]

use libfuzzer_sys::fuzz_target;
use shellab_core::io::{complex_to_json, parse_complex};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(k) = parse_complex(s) else { return };
    let back = parse_complex(&complex_to_json(&k)).expect("serialized complexes parse");
    assert_eq!(back.facets(), k.facets());
    if k.facets().iter().all(|f| f.len() <= 12) {
        let _ = k.euler_characteristic();
    }
});
