#![no_main]

use libfuzzer_sys::fuzz_target;
use zerolab_cli::ExperimentConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let errors = ExperimentConfig::check_text(text);
    match ExperimentConfig::parse(text) {
        Ok(cfg) => {
            assert!(errors.is_empty());
            let canonical = cfg.to_canonical_json();
            assert!(ExperimentConfig::check_text(&canonical).is_empty(), "{canonical}");
        }
        Err(_) => assert!(!errors.is_empty()),
    }
});
