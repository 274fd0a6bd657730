#![no_main]

use libfuzzer_sys::fuzz_target;
use zerolab::sequences::SequenceBuffer;

fuzz_target!(|data: &[u8]| {
    if let Ok(buf) = SequenceBuffer::from_bytes(data) {
        // Whatever decodes must re-encode to something that decodes identically.
        let bytes = buf.to_bytes();
        let again = SequenceBuffer::from_bytes(&bytes).expect("re-encoded sequence decodes");
        assert_eq!(bytes, again.to_bytes());
    }
});
