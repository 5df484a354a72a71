#![no_main]

use libfuzzer_sys::fuzz_target;
use qmf_core::rational::{format_rational, parse_rational};

fuzz_target!(|data: &str| {
    if let Ok(r) = parse_rational(data) {
        let again = parse_rational(&format_rational(&r)).expect("formatted rationals parse");
        assert_eq!(again, r);
    }
});
