#![no_main]

use libfuzzer_sys::fuzz_target;
use mitlab_core::equi::{compose_chi, ChiProfile, Profile};
use mitlab_core::rational::int;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(chi) = ChiProfile::from_json(text) {
        let again = ChiProfile::from_json(&chi.to_json()).expect("written profiles parse");
        assert_eq!(again, chi);
        let _ = compose_chi(&chi, &Profile::linear(int(2), int(0)).unwrap());
    }
});
