use crate::adic::RationalEntry;
use crate::error::{Error, Result};
use crate::fgab::IntMatrix;
use num_rational::BigRational;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use std::path::Path;

fn parse_error(file: &Path, path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        file: file.display().to_string(),
        path: path.into(),
        message: message.into(),
    }
}

/// Reads and decodes a JSON file; schema violations report the offending path.
pub fn read<T: DeserializeOwned>(file: &Path) -> Result<T> {
    let text = std::fs::read_to_string(file).map_err(|e| parse_error(file, ".", e.to_string()))?;
    let mut de = serde_json::Deserializer::from_str(&text);
    let value = serde_path_to_error::deserialize(&mut de)
        .map_err(|e| parse_error(file, e.path().to_string(), e.inner().to_string()))?;
    de.end().map_err(|e| parse_error(file, ".", e.to_string()))?;
    Ok(value)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DualLatticeInput {
    pub d: usize,
    pub generators: Vec<Vec<RationalEntry>>,
}

impl DualLatticeInput {
    pub fn generators(&self) -> Vec<Vec<BigRational>> {
        self.generators
            .iter()
            .map(|g| g.iter().map(|q| q.0.clone()).collect())
            .collect()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomSpec {
    pub level: usize,
    #[serde(rename = "W")]
    pub w: IntMatrix,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomList {
    pub homs: Vec<HomSpec>,
}

/// An integer or `p/q`, as typed on the command line.
pub fn rational_arg(flag: &str, s: &str) -> Result<BigRational> {
    let bad = || Error::Parse {
        file: "<command line>".into(),
        path: flag.into(),
        message: format!("expected an integer or p/q, got {s:?}"),
    };
    let value: RationalEntry = serde_json::from_value(serde_json::Value::from(s)).map_err(|_| bad())?;
    Ok(value.0)
}

pub fn rational_list(flag: &str, s: &str) -> Result<Vec<BigRational>> {
    s.split(',').map(|x| rational_arg(flag, x)).collect()
}
