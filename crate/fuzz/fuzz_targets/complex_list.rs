#![no_main]

use libfuzzer_sys::fuzz_target;
use qmf_core::paths::parse_complex_list;

fuzz_target!(|data: &str| {
    if let Ok(list) = parse_complex_list(data) {
        assert!(!list.is_empty());
        assert!(list.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
    }
});
