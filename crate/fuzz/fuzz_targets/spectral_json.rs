#![no_main]

use libfuzzer_sys::fuzz_target;
use zerolab::correlations::SpectralJson;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(doc) = SpectralJson::parse(text) {
        assert!(doc.total_mass() >= 0.0);
    }
});
