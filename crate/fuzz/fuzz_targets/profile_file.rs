#![no_main]

use libfuzzer_sys::fuzz_target;
use mitlab_core::equi::{profile_difference_integrable, Profile};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = Profile::from_json(text) {
        let again = Profile::from_json(&p.to_json()).expect("written profiles parse");
        assert_eq!(again, p);
        let v = profile_difference_integrable(&p, &p, 1);
        assert_eq!(format!("{:?}", v.kind), "Integrable");
    }
});
