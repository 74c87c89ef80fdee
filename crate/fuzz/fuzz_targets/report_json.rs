#![no_main]

use libfuzzer_sys::fuzz_target;
use mitlab_core::equi::DifferenceVerdict;
use mitlab_core::threshold::{ClusterReport, SpectrumTable, ThresholdResult};
use mitlab_core::verify::SuiteReport;

fn check<T: serde::de::DeserializeOwned + serde::Serialize + PartialEq + std::fmt::Debug>(text: &str) {
    if let Ok(v) = serde_json::from_str::<T>(text) {
        let again: T = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(again, v);
    }
}

// payload decoders for the command reports
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    check::<SpectrumTable>(text);
    check::<ThresholdResult>(text);
    check::<ClusterReport>(text);
    check::<SuiteReport>(text);
    check::<DifferenceVerdict>(text);
});
