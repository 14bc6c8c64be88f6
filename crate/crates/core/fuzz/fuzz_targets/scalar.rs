#![no_main]

use hoalg::scalar::{format_q, parse_q};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(v) = parse_q(text) {
        assert_eq!(parse_q(&format_q(&v)).unwrap(), v);
    }
});
