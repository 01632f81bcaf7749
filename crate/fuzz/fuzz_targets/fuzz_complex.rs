#![no_main]
//! Fuzz the complex-amplitude parser used by the eigen flags and the
//! evolve initial-state fields.

use libfuzzer_sys::fuzz_target;

use chiral_sim::config::parse_complex;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(z) = parse_complex(text) {
        // whatever parses must round-trip through the same parser
        // (negative zero renders as "-0", which would break the a+bi split)
        let im = if z.im == 0.0 { 0.0 } else { z.im };
        let rendered = format!("{}{}{}i", z.re, if im < 0.0 { "" } else { "+" }, im);
        let again = parse_complex(&rendered).expect("rendered form must parse");
        let same = |a: f64, b: f64| (a == b) || (a.is_nan() && b.is_nan());
        assert!(same(again.re, z.re) && same(again.im, im));
    }
});
