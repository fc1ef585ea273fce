#![no_main]

use libfuzzer_sys::fuzz_target;
use sic_core::sicpovm::{format_vector_set, parse_vector_set};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(set) = parse_vector_set(text) {
        let again = parse_vector_set(&format_vector_set(&set)).expect("formatted set must parse");
        assert_eq!(again.vectors(), set.vectors());
    }
});
