#![no_main]

use libfuzzer_sys::fuzz_target;
use qmf_core::eisenstein::{parse_poly, MAX_LITERAL_DIGITS, MAX_POLY_INPUT};

fuzz_target!(|data: &str| {
    let Ok(p) = parse_poly(data) else {
        return;
    };
    let _ = p.ramanujan_derive();
    let printed = p.to_string();
    // expansion can outgrow the parser's input limits
    let digits = |c: &qmf_core::Rational| c.numer().to_string().len().max(c.denom().to_string().len());
    if printed.len() > MAX_POLY_INPUT || p.terms().any(|(_, c)| digits(c) > MAX_LITERAL_DIGITS) {
        return;
    }
    assert_eq!(parse_poly(&printed).expect("printed polynomials parse"), p, "{printed}");
});
