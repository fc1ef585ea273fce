#![no_main]

use libfuzzer_sys::fuzz_target;
use sic_core::tensors::{decode_theta3, encode_theta3};

fuzz_target!(|data: &[u8]| {
    if let Ok(t) = decode_theta3(data) {
        assert_eq!(encode_theta3(&t), data);
    }
});
