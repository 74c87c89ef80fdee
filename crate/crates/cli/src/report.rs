use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// How a command finished, mapped onto the process exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Disagreement,
    PropertyFailure,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Disagreement => 3,
            Status::PropertyFailure => 4,
        }
    }
}

/// Everything a command produces; rendered once the output mode is known.
pub struct Output {
    pub payload: Value,
    pub text: String,
    pub tsv: String,
    pub status: Status,
}

#[derive(Serialize)]
pub struct CommandReport<'a> {
    pub command: &'a str,
    pub input_digest: String,
    pub payload: &'a Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

/// SHA-256 over the command name and its normalized inputs, each part
/// length-prefixed so that boundaries cannot shift.
#[derive(Default)]
pub struct InputDigest(Sha256);

impl InputDigest {
    pub fn new(command: &str) -> Self {
        let mut d = InputDigest(Sha256::new());
        d.add(command.as_bytes());
        d
    }

    pub fn add(&mut self, part: &[u8]) -> &mut Self {
        self.0.update((part.len() as u64).to_le_bytes());
        self.0.update(part);
        self
    }

    pub fn field(&mut self, name: &str, value: &str) -> &mut Self {
        self.add(name.as_bytes()).add(value.as_bytes())
    }

    pub fn finish(self) -> String {
        self.0.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Six significant digits, shortest form.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        mitlab_core::oracle::round6(v).to_string()
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_separates_fields() {
        let mut a = InputDigest::new("x");
        a.field("ab", "c");
        let mut b = InputDigest::new("x");
        b.field("a", "bc");
        assert_ne!(a.finish(), b.finish());
        let d = InputDigest::new("cluster").finish();
        assert_eq!(d.len(), 64);
        assert_eq!(d, InputDigest::new("cluster").finish());
    }

    #[test]
    fn numbers_have_six_digits() {
        assert_eq!(num(0.82031251), "0.820313");
        assert_eq!(num(2.0), "2");
        assert_eq!(num(f64::NEG_INFINITY), "-inf");
    }
}
