#![no_main]

use libfuzzer_sys::fuzz_target;
use zerolab::sequences::read_csv;

fuzz_target!(|data: &[u8]| {
    let _ = read_csv(data);
});
