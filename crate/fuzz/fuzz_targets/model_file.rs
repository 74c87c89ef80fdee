#![no_main]

use libfuzzer_sys::fuzz_target;
use mitlab_core::ToricModel;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = ToricModel::from_json(text) {
        let again = ToricModel::from_json(&m.to_json()).expect("written models parse");
        assert_eq!(again, m);
        if m.dim() == 2 && m.terms().len() <= 4 {
            let _ = mitlab_core::threshold::integrability_threshold(&m, &mitlab_core::Monomial::from_ints(&[0, 0]));
        }
    }
});
