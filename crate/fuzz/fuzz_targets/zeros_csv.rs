#![no_main]

use libfuzzer_sys::fuzz_target;
use zerolab::zeros::{read_zeros_csv, write_zeros_csv};

fuzz_target!(|data: &[u8]| {
    if let Ok(zeros) = read_zeros_csv(data) {
        let mut out = Vec::new();
        write_zeros_csv(&zeros, &mut out).expect("write to memory");
        let again = read_zeros_csv(&out[..]).expect("written zeros parse");
        assert_eq!(zeros.len(), again.len());
    }
});
