#![no_main]

use libfuzzer_sys::fuzz_target;
use shellab_core::corpus::resolve_uri;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = resolve_uri(s);
    }
});
