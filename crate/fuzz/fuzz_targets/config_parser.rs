#![no_main]

use delta_kernels::config::parse_config;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    // Accepted configs must be internally consistent.
    if let Ok(cfg) = parse_config(text) {
        assert!(!cfg.cutoffs.is_empty());
        assert!(cfg.cutoffs.windows(2).all(|w| w[0] < w[1]));
        assert!(cfg.cutoffs.iter().all(|c| c.is_finite()));
    }
});
