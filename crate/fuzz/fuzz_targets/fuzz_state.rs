#![no_main]
//! Fuzz the initial-state triple parser: three comma-separated complex
//! amplitudes. Accepted states must come out normalized.

use libfuzzer_sys::fuzz_target;

use chiral_sim::config::parse_state;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let mut parts = text.splitn(3, ',');
    let triple = [
        parts.next().unwrap_or("").to_string(),
        parts.next().unwrap_or("").to_string(),
        parts.next().unwrap_or("").to_string(),
    ];
    if let Ok(state) = parse_state(&triple) {
        assert!((state.norm() - 1.0).abs() <= 1e-12);
        let sum: f64 = state.populations().iter().sum();
        assert!((sum - 1.0).abs() <= 1e-12);
    }
});
