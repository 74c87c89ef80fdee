//! JSON model files.
//!
//! ```json
//! {"dim": 2, "terms": [{"weight": "1", "monomials": [["1","0"]]},
//!                      {"weight": "1/2", "monomials": [["1","0"],["0","4"]]}]}
//! ```

use serde::{Deserialize, Serialize};

use super::{LogSumTerm, Monomial, ToricModel};
use crate::error::{Error, Result};
use crate::rational::RatStr;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct ModelFile {
    dim: usize,
    terms: Vec<TermFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermFile {
    weight: RatStr,
    monomials: Vec<Vec<RatStr>>,
}

impl TryFrom<ModelFile> for ToricModel {
    type Error = Error;

    fn try_from(file: ModelFile) -> Result<Self> {
        let terms = file
            .terms
            .into_iter()
            .map(|t| {
                let monomials = t
                    .monomials
                    .into_iter()
                    .map(|m| {
                        let m = Monomial::new(m.into_iter().map(|r| r.0).collect())?;
                        if m.dim() != file.dim {
                            return Err(Error::DimensionMismatch {
                                expected: file.dim,
                                found: m.dim(),
                            });
                        }
                        Ok(m)
                    })
                    .collect::<Result<Vec<_>>>()?;
                LogSumTerm::new(t.weight.0, monomials)
            })
            .collect::<Result<Vec<_>>>()?;
        ToricModel::new(file.dim, terms)
    }
}

impl From<&ToricModel> for ModelFile {
    fn from(model: &ToricModel) -> Self {
        ModelFile {
            dim: model.dim(),
            terms: model
                .terms()
                .iter()
                .map(|t| TermFile {
                    weight: RatStr(t.weight().clone()),
                    monomials: t
                        .monomials()
                        .iter()
                        .map(|m| m.exponents().iter().cloned().map(RatStr).collect())
                        .collect(),
                })
                .collect(),
        }
    }
}

impl Serialize for ToricModel {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ModelFile::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ToricModel {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let file = ModelFile::deserialize(deserializer)?;
        ToricModel::try_from(file).map_err(serde::de::Error::custom)
    }
}

impl ToricModel {
    /// Parses and validates a model file.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text)?;
        ToricModel::try_from(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ModelFile::from(self)).expect("model serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SeriesConfig;

    const SERIES_K1: &str = r#"{"dim": 2, "terms": [{"weight": "1", "monomials": [["1","0"]]}, {"weight": "1/2", "monomials": [["1","0"],["0","4"]]}]}"#;

    #[test]
    fn reads_documented_example() {
        let m = ToricModel::from_json(SERIES_K1).unwrap();
        assert_eq!(m, ToricModel::series(&SeriesConfig::new(2, 1).unwrap()));
        assert_eq!(ToricModel::from_json(&m.to_json()).unwrap(), m);
    }

    #[test]
    fn rejects_invalid_models() {
        let cases = [
            r#"{"dim": 2, "terms": [{"weight": "1", "monomials": [["-1","0"]]}]}"#,
            r#"{"dim": 2, "terms": [{"weight": "0", "monomials": [["1","0"]]}]}"#,
            r#"{"dim": 2, "terms": [{"weight": "-1/2", "monomials": [["1","0"]]}]}"#,
            r#"{"dim": 2, "terms": [{"weight": "1", "monomials": []}]}"#,
            r#"{"dim": 2, "terms": [{"weight": "1", "monomials": [["1","0","0"]]}]}"#,
            r#"{"dim": 0, "terms": []}"#,
            r#"{"dim": 2, "terms": [{"weight": "1/0", "monomials": [["1","0"]]}]}"#,
            r#"{"dim": 2, "terms": [{"weight": "1", "monomials": [["1","0"]], "extra": 1}]}"#,
            r#"{"dim": 2, "terms": [{"weight": 0.5, "monomials": [["1","0"]]}]}"#,
            r#"{"dim": 2}"#,
            "not json",
        ];
        for c in cases {
            assert!(ToricModel::from_json(c).is_err(), "accepted {c}");
        }
    }
}
