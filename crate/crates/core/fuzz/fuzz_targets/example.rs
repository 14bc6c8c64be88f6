#![no_main]

use hoalg::models::{example, Example};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let words: Vec<&str> = text.split_whitespace().collect();
    let Some((name, params)) = words.split_first() else { return };
    // huge parameters are legal but slow
    if params.iter().flat_map(|p| p.split(',')).any(|p| p.parse::<u32>().map_or(false, |n| n > 32)) {
        return;
    }
    let Ok(ex) = Example::parse(name, params) else { return };
    let _ = example(&ex);
});
