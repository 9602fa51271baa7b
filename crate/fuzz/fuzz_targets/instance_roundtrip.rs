#![no_main]

use comod_core::instance::{parse_instance, serialize};
use libfuzzer_sys::fuzz_target;

// Anything that parses serializes to a canonical form that parses back to
// the same instance and serializes identically.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(inst) = parse_instance(text) else { return };
    let canonical = serialize(&inst);
    let back = parse_instance(&canonical).expect("canonical form parses");
    assert_eq!(back, inst);
    assert_eq!(serialize(&back), canonical);
});
