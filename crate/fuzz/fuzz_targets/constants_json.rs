#![no_main]

use libfuzzer_sys::fuzz_target;
use zerolab::constants::FrozenConstants;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(c) = FrozenConstants::parse(text) {
        assert!(c.grs_growth > 0.0 && c.local_disks_c.is_finite());
    }
});
