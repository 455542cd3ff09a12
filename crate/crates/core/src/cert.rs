//! Witness certificates: self-contained JSON records of search results.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremId {
    Gowers,
    Mt,
    Ramsey,
    TypeHom,
    SizeInsens,
    RamseyPair,
    Pipeline,
    Neighbour,
}

impl TheoremId {
    pub fn name(self) -> &'static str {
        match self {
            TheoremId::Gowers => "gowers",
            TheoremId::Mt => "mt",
            TheoremId::Ramsey => "ramsey",
            TheoremId::TypeHom => "type-hom",
            TheoremId::SizeInsens => "size-insens",
            TheoremId::RamseyPair => "ramsey-pair",
            TheoremId::Pipeline => "pipeline",
            TheoremId::Neighbour => "neighbour",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredObject {
    pub object: String,
    pub color: u8,
}

/// What the certificate claims.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Payload {
    /// A coloring of the whole domain at size `n` with no witness.
    Counterexample { n: usize, coloring: Vec<ColoredObject> },
    /// Every coloring at size `n` admits a witness.
    Exhaustive { n: usize, points: usize, constraints: usize },
    /// A witness for one coloring, given by its source.
    Witness { n: usize, witness: String, coloring: String },
    /// A witness plus the certificates of the stages that produced it.
    Chain { n: usize, witness: String, coloring: String, stages: Vec<Value> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Verified,
    Unverified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub theorem: TheoremId,
    pub params: BTreeMap<String, Value>,
    pub payload: Payload,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claimed_color: Option<u8>,
    pub tool_version: String,
    pub status: Status,
}

impl Certificate {
    pub fn new(theorem: TheoremId, params: BTreeMap<String, Value>, payload: Payload) -> Self {
        Certificate {
            theorem,
            params,
            payload,
            claimed_color: None,
            tool_version: TOOL_VERSION.to_string(),
            status: Status::Unverified,
        }
    }

    pub fn with_color(mut self, color: u8) -> Self {
        self.claimed_color = Some(color);
        self
    }

    pub fn verified(mut self) -> Self {
        self.status = Status::Verified;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Certificate::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    /// Integer parameter `name`.
    pub fn param(&self, name: &str) -> Result<usize> {
        self.params
            .get(name)
            .and_then(Value::as_u64)
            .map(|v| v as usize)
            .ok_or_else(|| Error::Parse(format!("certificate lacks integer parameter {name:?}")))
    }

    /// List-of-integers parameter `name`.
    pub fn param_list(&self, name: &str) -> Result<Vec<usize>> {
        self.params
            .get(name)
            .and_then(Value::as_array)
            .and_then(|a| a.iter().map(|v| v.as_u64().map(|x| x as usize)).collect::<Option<Vec<_>>>())
            .ok_or_else(|| Error::Parse(format!("certificate lacks list parameter {name:?}")))
    }

    pub fn param_str(&self, name: &str) -> Result<String> {
        self.params
            .get(name)
            .and_then(Value::as_str)
            .map(str::to_string)
            .ok_or_else(|| Error::Parse(format!("certificate lacks string parameter {name:?}")))
    }
}

/// Builds a parameter record from `(name, value)` pairs.
pub fn params<I, V>(pairs: I) -> BTreeMap<String, Value>
where
    I: IntoIterator<Item = (&'static str, V)>,
    V: Into<Value>,
{
    pairs.into_iter().map(|(k, v)| (k.to_string(), v.into())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let c = Certificate::new(
            TheoremId::Ramsey,
            params([("k", 2usize), ("l", 3), ("r", 2)]),
            Payload::Counterexample { n: 1, coloring: vec![ColoredObject { object: "{1}".into(), color: 1 }] },
        )
        .with_color(1);
        let text = c.to_json();
        assert!(text.contains("\"theorem\": \"ramsey\""));
        assert_eq!(Certificate::from_json(&text).unwrap(), c);
        assert_eq!(c.param("l").unwrap(), 3);
        assert!(c.param("q").is_err());
    }
}
