#![no_main]

use libfuzzer_sys::fuzz_target;
use qmf_core::QSeries;

fuzz_target!(|data: &str| {
    let Ok(s) = QSeries::parse_json(data) else {
        return;
    };
    let text = serde_json::to_string(&s.to_json()).unwrap();
    let back = QSeries::parse_json(&text).expect("serialized series parse");
    assert_eq!(back, s);
    assert_eq!(back.grade(), s.grade());
});
