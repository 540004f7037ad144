//! Embedded expected data: transcriptions of the published tables, one
//! provenance string per entry.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedEntry {
    pub weight: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<i64>,
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedCase {
    pub id: String,
    #[serde(rename = "type")]
    pub type_letter: String,
    pub rank: usize,
    /// 1-based selected nodes.
    pub nodes: Vec<usize>,
    pub source: String,
    /// `direct`, `bwb`, `both` or `g2structure`.
    pub method: String,
    /// `lowest` or `highest`.
    pub h2_kind: String,
    /// `coroot` or `simple`.
    pub h2_basis: String,
    pub h2: Vec<ExpectedEntry>,
    pub h1_basis: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h1: Option<Vec<ExpectedEntry>>,
    /// Add the always-present `2 alpha_i` constituents to the H^1 list.
    pub h1_footnote: bool,
    /// Simple-root column printed beside the coroot one; informational.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub printed_fw: Vec<ExpectedEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedSuite {
    pub suite: String,
    pub cases: Vec<ExpectedCase>,
}

const TABLE1: &str = include_str!("../../data/table1.json");
const TABLES234: &str = include_str!("../../data/tables234.json");
const SEC6: &str = include_str!("../../data/sec6.json");
const SEC71: &str = include_str!("../../data/sec71.json");

pub const SUITES: &[&str] = &["table1", "tables234", "sec6", "sec71"];

pub fn load_suite(name: &str) -> Result<ExpectedSuite> {
    let text = match name {
        "table1" => TABLE1,
        "tables234" => TABLES234,
        "sec6" => SEC6,
        "sec71" => SEC71,
        _ => return Err(Error::Invalid(format!("unknown suite {name}; expected one of {}", SUITES.join(", ")))),
    };
    Ok(serde_json::from_str(text)?)
}

pub fn parse_suite(text: &str) -> Result<ExpectedSuite> {
    Ok(serde_json::from_str(text)?)
}
