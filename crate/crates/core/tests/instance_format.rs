//! Instance files: canonical serialization round-trips and parse errors
//! carry positions.

mod common;

use common::{free_catalog, fuzz_corpus};
use comod_core::instance::{instance_of, parse_instance, serialize, ParseError};
use proptest::prelude::*;

#[test]
fn generated_instances_round_trip() {
    for case in free_catalog().into_iter().chain(fuzz_corpus(5, 500)) {
        let inst = instance_of(case.m.coalgebra(), &[("M", &case.m)]);
        let text = serialize(&inst);
        let back = parse_instance(&text).unwrap_or_else(|e| panic!("{}: {e}\n{text}", case.name));
        assert_eq!(serialize(&back), text, "{}", case.name);
        let c = back.coalgebra().unwrap();
        let m = back.comodule(&c, 0).unwrap();
        assert_eq!(m.order(), case.m.order(), "{}", case.name);
    }
}

#[test]
fn errors_point_at_the_offending_line() {
    let text = "[ring]\nmodulus = 2\n[coalgebra]\nrank = 1\ndelta 1 = 1*(1,1)\ncounit = 1\n[comodule M]\nrank = 1\nrho 1 = 1*(1,2)\n";
    match parse_instance(text) {
        Err(ParseError::Semantic { line, .. }) => assert_eq!(line, 9),
        other => panic!("expected a semantic error, got {other:?}"),
    }
    match parse_instance("[ring]\nmodulus = two\n") {
        Err(ParseError::Syntax { line, .. }) => assert_eq!(line, 2),
        other => panic!("expected a syntax error, got {other:?}"),
    }
}

proptest! {
    #[test]
    fn parser_never_panics(text in "[\\[\\]a-z0-9 =*(),+\n-]{0,200}") {
        let _ = parse_instance(&text);
    }

    #[test]
    fn mutated_instances_never_panic(pos in 0usize..200, byte in 0u8..128) {
        let case = &free_catalog()[3];
        let mut text = serialize(&instance_of(case.m.coalgebra(), &[("M", &case.m)])).into_bytes();
        let at = pos % text.len();
        text[at] = byte;
        if let Ok(s) = String::from_utf8(text) {
            let _ = parse_instance(&s);
        }
    }
}
