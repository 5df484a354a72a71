#![no_main]

use libfuzzer_sys::fuzz_target;
use qmf_core::siegel::{riemann_check, siegel_point_check, to_siegel, SiegelBlocksJson};

fuzz_target!(|data: &str| {
    let Ok(blocks) = SiegelBlocksJson::parse(data) else {
        return;
    };
    if blocks.genus() > 8 {
        return;
    }
    let _ = riemann_check(&blocks);
    if let Ok(x) = to_siegel(&blocks) {
        let _ = siegel_point_check(&x);
    }
});
