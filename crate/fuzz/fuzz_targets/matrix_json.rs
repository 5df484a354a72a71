#![no_main]

use libfuzzer_sys::fuzz_target;
use qmf_core::hodge::MatrixJson;

fuzz_target!(|data: &str| {
    if let Ok(m) = MatrixJson::parse(data) {
        // entries survive a write/read cycle bit for bit
        let back = MatrixJson::parse(&MatrixJson::to_json(&m)).unwrap();
        assert_eq!(back, m);
    }
    let _ = MatrixJson::parse_integer(data);
});
