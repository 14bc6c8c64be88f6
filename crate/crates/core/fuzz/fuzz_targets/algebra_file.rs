#![no_main]

use hoalg::format;
use hoalg::Truncation;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(file) = format::parse(text) else { return };
    // anything accepted must survive a dump/parse round trip
    let again = format::parse(&file.dump()).expect("dump of a parsed file must parse");
    assert_eq!(again, file);
    // keep the identity check cheap
    let small = Truncation::new(4, 3, 3).unwrap();
    let _ = format::load(text, &small);
});
