#![no_main]

use comod_core::instance::parse_instance;
use libfuzzer_sys::fuzz_target;

// The parser returns an error on any malformed input and never panics.
fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_instance(text);
    }
});
