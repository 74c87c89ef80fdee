#![no_main]

use libfuzzer_sys::fuzz_target;
use mitlab_core::rational;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(v) = rational::parse(text) {
        assert_eq!(rational::parse(&rational::format(&v)).unwrap(), v);
    }
});
