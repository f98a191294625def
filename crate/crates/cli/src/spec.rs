//! Input documents.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use sqav_core::degeneration::{DegenData, DegenError};
use sqav_core::invariants::{preset, InvariantError};
use sqav_core::linalg::{fmt_rat, parse_rat, Rat};
use sqav_core::{FormError, GramForm};

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed input: {0}")]
    Json(#[from] serde_json::Error),
    #[error("input needs either a preset or a gram matrix")]
    MissingGram,
    #[error("declared rank {declared} but the gram matrix has {rows} rows")]
    RankMismatch { declared: usize, rows: usize },
    #[error("cannot parse rational {0:?}")]
    BadRational(String),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Units(#[from] DegenError),
    #[error(transparent)]
    Preset(#[from] InvariantError),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Units {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a0: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b0: Option<Vec<Vec<String>>>,
}

/// A form description; `preset` overrides `rank`, `gram` and `linear`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linear: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub units: Option<Units>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abelian_rank: Option<usize>,
}

/// Validated input.
pub struct Input {
    pub echo: FormSpec,
    pub data: DegenData,
}

fn rationals(xs: &[String]) -> Result<Vec<Rat>, SpecError> {
    xs.iter().map(|s| parse_rat(s).ok_or_else(|| SpecError::BadRational(s.clone()))).collect()
}

impl FormSpec {
    pub fn read(path: &str) -> Result<Self, SpecError> {
        let text = std::fs::read_to_string(path).map_err(|source| SpecError::Io { path: path.to_string(), source })?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Resolves the preset, validates the form and the units, and returns
    /// the normalised echo of the input.
    pub fn resolve(&self) -> Result<Input, SpecError> {
        let mut echo = self.clone();
        let form = match &self.preset {
            Some(name) => {
                let p = preset(name)?;
                echo.rank = Some(p.rank);
                echo.gram = Some(p.gram.clone());
                echo.linear = Some(p.linear.clone());
                p.form()?
            }
            None => {
                let gram = self.gram.clone().ok_or(SpecError::MissingGram)?;
                if let Some(r) = self.rank {
                    if r != gram.len() {
                        return Err(SpecError::RankMismatch { declared: r, rows: gram.len() });
                    }
                }
                echo.rank = Some(gram.len());
                let f = GramForm::new(gram, self.linear.clone())?;
                echo.linear = Some(f.linear().to_vec());
                f
            }
        };
        let units = self.units.clone().unwrap_or_default();
        let a0 = units.a0.as_deref().map(rationals).transpose()?;
        let b0 = units.b0.as_ref().map(|m| m.iter().map(|row| rationals(row)).collect::<Result<Vec<_>, _>>()).transpose()?;
        let data = DegenData::new(form, a0, b0)?;
        echo.units = Some(Units {
            a0: Some(data.a0_basis().iter().map(fmt_rat).collect()),
            b0: Some(data.b0_matrix().iter().map(|row| row.iter().map(fmt_rat).collect()).collect()),
        });
        Ok(Input { echo, data })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_overrides_the_matrix() {
        let spec = FormSpec { preset: Some("dim2-hex".into()), gram: Some(vec![vec![1]]), ..Default::default() };
        let input = spec.resolve().unwrap();
        assert_eq!(input.data.form().gram(), &[vec![2, -1], vec![-1, 2]]);
        assert_eq!(input.echo.rank, Some(2));
    }

    #[test]
    fn units_are_parsed_exactly() {
        let spec: FormSpec = serde_json::from_str(
            r#"{"gram": [[1,0],[0,1]], "units": {"a0": ["2", "-3/4"], "b0": [["1","1/2"],["1/2","5"]]}}"#,
        )
        .unwrap();
        let input = spec.resolve().unwrap();
        assert_eq!(input.echo.units.unwrap().a0.unwrap(), vec!["2", "-3/4"]);
    }

    #[test]
    fn rejects_bad_input() {
        let asym: FormSpec = serde_json::from_str(r#"{"gram": [[2,1],[0,2]]}"#).unwrap();
        assert!(matches!(asym.resolve(), Err(SpecError::Form(FormError::NotSymmetric { .. }))));
        let indefinite: FormSpec = serde_json::from_str(r#"{"gram": [[1,2],[2,1]]}"#).unwrap();
        let err = indefinite.resolve().err().unwrap().to_string();
        assert!(err.contains("minor of order 2"), "{err}");
        let rank: FormSpec = serde_json::from_str(r#"{"rank": 3, "gram": [[1]]}"#).unwrap();
        assert!(matches!(rank.resolve(), Err(SpecError::RankMismatch { .. })));
        let units: FormSpec = serde_json::from_str(r#"{"gram": [[1]], "units": {"a0": ["x"]}}"#).unwrap();
        assert!(matches!(units.resolve(), Err(SpecError::BadRational(_))));
        assert!(serde_json::from_str::<FormSpec>(r#"{"gramm": [[1]]}"#).is_err());
    }
}
