use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational};

const RESERVED: [&str; 3] = ["experiment", "seed", "out"];

/// A flat JSON object: the reserved keys `experiment`, `seed` and `out`,
/// plus experiment parameters. Unknown parameter keys are rejected when the
/// parameters are decoded.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub seed: u64,
    pub out: Option<PathBuf>,
    raw: Value,
    params: Map<String, Value>,
}

impl ExperimentConfig {
    pub fn from_value(raw: Value) -> Result<Self> {
        let Value::Object(obj) = &raw else {
            return Err(Error::Config("config must be a JSON object".into()));
        };
        let experiment = match obj.get("experiment") {
            None => String::new(),
            Some(Value::String(s)) => s.clone(),
            Some(_) => return Err(Error::Config("`experiment` must be a string".into())),
        };
        let seed = match obj.get("seed") {
            None => 0,
            Some(v) => v
                .as_u64()
                .ok_or_else(|| Error::Config("`seed` must be a nonnegative integer".into()))?,
        };
        let out = match obj.get("out") {
            None => None,
            Some(Value::String(s)) => Some(PathBuf::from(s)),
            Some(_) => return Err(Error::Config("`out` must be a string".into())),
        };
        let params = obj
            .iter()
            .filter(|(k, _)| !RESERVED.contains(&k.as_str()))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        Ok(Self {
            experiment,
            seed,
            out,
            raw,
            params,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid JSON: {e}")))?;
        Self::from_value(v)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    /// A config with no parameters; every experiment has defaults.
    pub fn named(experiment: &str, seed: u64) -> Self {
        Self::from_value(serde_json::json!({"experiment": experiment, "seed": seed})).expect("well-formed object")
    }

    /// The config exactly as loaded.
    pub fn raw(&self) -> &Value {
        &self.raw
    }

    pub fn with_param(mut self, key: &str, value: Value) -> Self {
        if let Value::Object(obj) = &mut self.raw {
            obj.insert(key.to_string(), value.clone());
        }
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn params<T: DeserializeOwned>(&self) -> Result<T> {
        serde_json::from_value(Value::Object(self.params.clone()))
            .map_err(|e| Error::Config(format!("{}: {e}", self.experiment)))
    }
}

/// A scalar or a list of scalars.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            Self::One(x) => vec![x.clone()],
            Self::Many(v) => v.clone(),
        }
    }
}

/// A rational parameter written as `"p/q"` or `"p"`.
#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(try_from = "String")]
pub struct RationalParam(pub Rational);

impl TryFrom<String> for RationalParam {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        parse_rational(&s).map(Self)
    }
}
