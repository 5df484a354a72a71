#![no_main]

use libfuzzer_sys::fuzz_target;
use qmf_core::hodge::FrameJson;

fuzz_target!(|data: &str| {
    if let Ok(frame) = FrameJson::parse(data) {
        let text = serde_json::to_string(&FrameJson::from_frame(&frame)).unwrap();
        let back = FrameJson::parse(&text).expect("serialized frames parse");
        assert_eq!(back.hodge_numbers(), frame.hodge_numbers());
        assert_eq!(back.psi0(), frame.psi0());
    }
});
