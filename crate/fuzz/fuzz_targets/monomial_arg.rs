#![no_main]

use libfuzzer_sys::fuzz_target;
use mitlab_core::Monomial;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = text.parse::<Monomial>() {
        assert_eq!(m.to_string().parse::<Monomial>().unwrap(), m);
    }
});
