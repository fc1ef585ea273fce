#![no_main]

use libfuzzer_sys::fuzz_target;
use sic_core::sicpovm::{format_fiducial, parse_fiducial};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(fid) = parse_fiducial(text) {
        let again = parse_fiducial(&format_fiducial(&fid)).expect("formatted fiducial must parse");
        assert_eq!(again.d(), fid.d());
    }
});
