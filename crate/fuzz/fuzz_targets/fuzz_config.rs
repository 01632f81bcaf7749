#![no_main]
//! Fuzz the TOML run-config parser and everything a config feeds:
//! validation, engine selection, grid expansion, schedule construction,
//! and the raw-evolution inputs. None of it may panic; hostile configs
//! must come back as errors.

use libfuzzer_sys::fuzz_target;

use chiral_sim::config::RunConfig;
use chiral_sim::protocol::build_protocol;
use chiral_sim::robustness::apply_error;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(cfg) = RunConfig::from_toml_str(text) else {
        return;
    };

    let spec = cfg.protocol_spec();
    let params = cfg.error_params();
    let _ = cfg.engine_choice();

    if let (Ok(spec), Ok(params)) = (spec, params) {
        if let Ok(model) = params.to_model() {
            let perturbed = apply_error(&spec, &model);
            let _ = build_protocol(&perturbed);
        }
    }

    // expand small grids only; the library cap alone still allows
    // allocations too large for a fuzz loop
    if matches!(cfg.sweep.len(), Some(n) if n <= 4096) {
        let _ = cfg.sweep_points();
    }

    let _ = cfg.evolve_inputs();
});
