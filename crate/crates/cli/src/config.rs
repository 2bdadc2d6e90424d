use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::catalog::{spec_for, KindSpec, ParamSpec, ParamType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExperimentKind {
    XxScaling,
    IsingScaling,
    RenyiScaling,
    SingleCopy,
    HalfchainNegativity,
    KgDivergence,
    Area2dBoson,
    Area2dFermion,
    Halfspace,
    ThermalNegativity,
    FhCheck,
    Topo,
    Quench,
    DmrgVsEd,
    MutualInfo,
    Disorder,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 16] = [
        Self::XxScaling,
        Self::IsingScaling,
        Self::RenyiScaling,
        Self::SingleCopy,
        Self::HalfchainNegativity,
        Self::KgDivergence,
        Self::Area2dBoson,
        Self::Area2dFermion,
        Self::Halfspace,
        Self::ThermalNegativity,
        Self::FhCheck,
        Self::Topo,
        Self::Quench,
        Self::DmrgVsEd,
        Self::MutualInfo,
        Self::Disorder,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::XxScaling => "xx-scaling",
            Self::IsingScaling => "ising-scaling",
            Self::RenyiScaling => "renyi-scaling",
            Self::SingleCopy => "single-copy",
            Self::HalfchainNegativity => "halfchain-negativity",
            Self::KgDivergence => "kg-divergence",
            Self::Area2dBoson => "area-2d-boson",
            Self::Area2dFermion => "area-2d-fermion",
            Self::Halfspace => "halfspace",
            Self::ThermalNegativity => "thermal-negativity",
            Self::FhCheck => "fh-check",
            Self::Topo => "topo",
            Self::Quench => "quench",
            Self::DmrgVsEd => "dmrg-vs-ed",
            Self::MutualInfo => "mutual-info",
            Self::Disorder => "disorder",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentKind {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| ConfigError::new("kind", format!("unknown experiment kind '{s}' (see `arealab list`)")))
    }
}

/// Config validation failure with the JSON path of the offending field.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("config error at {path}: {message}")]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self { path: path.into(), message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Float(f64),
    IntList(Vec<i64>),
    FloatList(Vec<f64>),
    Text(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    /// Every schema parameter, defaults filled in.
    pub params: BTreeMap<String, ParamValue>,
    pub fit_window: Option<(f64, f64)>,
    pub seed: u64,
    pub output_dir: PathBuf,
}

pub const DEFAULT_SEED: u64 = 7;
pub const DEFAULT_OUTPUT_DIR: &str = "arealab-out";

fn as_int(v: &Value) -> Option<i64> {
    v.as_i64().or_else(|| v.as_f64().filter(|x| x.fract() == 0.0 && x.abs() < 9e15).map(|x| x as i64))
}

fn convert(spec: &ParamSpec, v: &Value, path: &str) -> Result<ParamValue, ConfigError> {
    let bad = |what: &str| ConfigError::new(path, format!("expected {what}"));
    let value = match spec.ty {
        ParamType::Int => ParamValue::Int(as_int(v).ok_or_else(|| bad("an integer"))?),
        ParamType::Float => ParamValue::Float(v.as_f64().ok_or_else(|| bad("a number"))?),
        ParamType::Text => ParamValue::Text(v.as_str().ok_or_else(|| bad("a string"))?.to_string()),
        ParamType::IntList => {
            let arr = v.as_array().ok_or_else(|| bad("an array of integers"))?;
            let mut out = Vec::with_capacity(arr.len());
            for (i, x) in arr.iter().enumerate() {
                out.push(as_int(x).ok_or_else(|| ConfigError::new(format!("{path}[{i}]"), "expected an integer"))?);
            }
            ParamValue::IntList(out)
        }
        ParamType::FloatList => {
            let arr = v.as_array().ok_or_else(|| bad("an array of numbers"))?;
            let mut out = Vec::with_capacity(arr.len());
            for (i, x) in arr.iter().enumerate() {
                out.push(x.as_f64().ok_or_else(|| ConfigError::new(format!("{path}[{i}]"), "expected a number"))?);
            }
            ParamValue::FloatList(out)
        }
    };
    check_range(spec, &value, path)?;
    Ok(value)
}

fn check_range(spec: &ParamSpec, value: &ParamValue, path: &str) -> Result<(), ConfigError> {
    let check = |x: f64, p: String| -> Result<(), ConfigError> {
        if !x.is_finite() {
            return Err(ConfigError::new(p, "must be finite"));
        }
        if let Some(lo) = spec.min {
            if x < lo {
                return Err(ConfigError::new(p, format!("must be ≥ {lo}")));
            }
        }
        if let Some(hi) = spec.max {
            if x > hi {
                return Err(ConfigError::new(p, format!("must be ≤ {hi}")));
            }
        }
        Ok(())
    };
    match value {
        ParamValue::Int(i) => check(*i as f64, path.to_string()),
        ParamValue::Float(x) => check(*x, path.to_string()),
        _ if is_empty_list(value) => Err(ConfigError::new(path, "must not be empty")),
        ParamValue::IntList(v) => v.iter().enumerate().try_for_each(|(i, &x)| check(x as f64, format!("{path}[{i}]"))),
        ParamValue::FloatList(v) => v.iter().enumerate().try_for_each(|(i, &x)| check(x, format!("{path}[{i}]"))),
        ParamValue::Text(s) => {
            if spec.choices.is_empty() || spec.choices.contains(&s.as_str()) {
                Ok(())
            } else {
                Err(ConfigError::new(path, format!("must be one of {}", spec.choices.join(", "))))
            }
        }
    }
}

fn is_empty_list(v: &ParamValue) -> bool {
    match v {
        ParamValue::IntList(x) => x.is_empty(),
        ParamValue::FloatList(x) => x.is_empty(),
        _ => false,
    }
}

fn parse_window(v: &Value, spec: &KindSpec) -> Result<Option<(f64, f64)>, ConfigError> {
    if spec.default_window.is_none() {
        return Err(ConfigError::new("fit_window", format!("kind {} does not fit a scaling law", spec.kind)));
    }
    let arr =
        v.as_array().filter(|a| a.len() == 2).ok_or_else(|| ConfigError::new("fit_window", "expected [low, high]"))?;
    let lo = arr[0].as_f64().ok_or_else(|| ConfigError::new("fit_window[0]", "expected a number"))?;
    let hi = arr[1].as_f64().ok_or_else(|| ConfigError::new("fit_window[1]", "expected a number"))?;
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi > lo) {
        return Err(ConfigError::new("fit_window", "need 0 < low < high"));
    }
    Ok(Some((lo, hi)))
}

impl ExperimentConfig {
    /// Defaults for `kind` with no overrides.
    pub fn defaults(kind: ExperimentKind) -> Self {
        let spec = spec_for(kind);
        Self {
            kind,
            params: spec.params.iter().map(|p| (p.name.to_string(), p.default())).collect(),
            fit_window: spec.default_window,
            seed: DEFAULT_SEED,
            output_dir: PathBuf::from(DEFAULT_OUTPUT_DIR),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let root: Value =
            serde_json::from_str(text).map_err(|e| ConfigError::new("$", format!("invalid JSON: {e}")))?;
        Self::from_value(&root)
    }

    pub fn from_value(root: &Value) -> Result<Self, ConfigError> {
        let obj = root.as_object().ok_or_else(|| ConfigError::new("$", "expected a JSON object"))?;
        for key in obj.keys() {
            if !["kind", "params", "fit_window", "seed", "output_dir"].contains(&key.as_str()) {
                return Err(ConfigError::new(key.clone(), "unknown field"));
            }
        }
        let kind: ExperimentKind = obj
            .get("kind")
            .ok_or_else(|| ConfigError::new("kind", "missing field"))?
            .as_str()
            .ok_or_else(|| ConfigError::new("kind", "expected a string"))?
            .parse()?;
        let spec = spec_for(kind);
        let mut cfg = Self::defaults(kind);
        let empty = Map::new();
        let params = match obj.get("params") {
            None | Some(Value::Null) => &empty,
            Some(Value::Object(m)) => m,
            Some(_) => return Err(ConfigError::new("params", "expected an object")),
        };
        for (name, v) in params {
            let path = format!("params.{name}");
            let p = spec
                .params
                .iter()
                .find(|p| p.name == name)
                .ok_or_else(|| ConfigError::new(&path, format!("unknown parameter for kind {kind}")))?;
            cfg.params.insert(name.clone(), convert(p, v, &path)?);
        }
        if let Some(v) = obj.get("fit_window") {
            cfg.fit_window = parse_window(v, spec)?;
        }
        if let Some(v) = obj.get("seed") {
            cfg.seed = v.as_u64().ok_or_else(|| ConfigError::new("seed", "expected a non-negative integer"))?;
        }
        if let Some(v) = obj.get("output_dir") {
            cfg.output_dir =
                PathBuf::from(v.as_str().ok_or_else(|| ConfigError::new("output_dir", "expected a string"))?);
        }
        (spec.validate)(&cfg)?;
        Ok(cfg)
    }

    /// Canonical JSON of everything that affects results (not the output directory).
    pub fn canonical_json(&self) -> String {
        let mut m = Map::new();
        m.insert("kind".into(), Value::from(self.kind.as_str()));
        m.insert("params".into(), serde_json::to_value(&self.params).expect("params serialize"));
        m.insert("fit_window".into(), self.fit_window.map(|(a, b)| Value::from(vec![a, b])).unwrap_or(Value::Null));
        m.insert("seed".into(), Value::from(self.seed));
        Value::Object(m).to_string()
    }

    /// First 16 hex digits of the SHA-256 of [`Self::canonical_json`].
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical_json().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    pub fn with_param(mut self, name: &str, value: ParamValue) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    pub fn int(&self, name: &str) -> i64 {
        match self.params.get(name) {
            Some(ParamValue::Int(i)) => *i,
            other => panic!("parameter {name} is not an integer: {other:?}"),
        }
    }

    pub fn usize(&self, name: &str) -> usize {
        self.int(name).max(0) as usize
    }

    pub fn float(&self, name: &str) -> f64 {
        match self.params.get(name) {
            Some(ParamValue::Float(x)) => *x,
            Some(ParamValue::Int(i)) => *i as f64,
            other => panic!("parameter {name} is not a number: {other:?}"),
        }
    }

    pub fn floats(&self, name: &str) -> Vec<f64> {
        match self.params.get(name) {
            Some(ParamValue::FloatList(v)) => v.clone(),
            Some(ParamValue::IntList(v)) => v.iter().map(|&i| i as f64).collect(),
            other => panic!("parameter {name} is not a list of numbers: {other:?}"),
        }
    }

    pub fn usizes(&self, name: &str) -> Vec<usize> {
        match self.params.get(name) {
            Some(ParamValue::IntList(v)) => v.iter().map(|&i| i.max(0) as usize).collect(),
            other => panic!("parameter {name} is not a list of integers: {other:?}"),
        }
    }

    pub fn text(&self, name: &str) -> &str {
        match self.params.get(name) {
            Some(ParamValue::Text(s)) => s,
            other => panic!("parameter {name} is not a string: {other:?}"),
        }
    }

    pub fn window(&self) -> (f64, f64) {
        self.fit_window.expect("kind declares a fit window")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_through_json() {
        for kind in ExperimentKind::ALL {
            let text = format!(r#"{{"kind": "{kind}"}}"#);
            let cfg = ExperimentConfig::from_json(&text).unwrap();
            assert_eq!(cfg, ExperimentConfig::defaults(kind));
        }
    }

    #[test]
    fn errors_name_the_field() {
        let e = ExperimentConfig::from_json(r#"{"kind": "nope"}"#).unwrap_err();
        assert_eq!(e.path, "kind");
        let e = ExperimentConfig::from_json(r#"{"kind": "xx-scaling", "params": {"n_sites": "big"}}"#).unwrap_err();
        assert_eq!(e.path, "params.n_sites");
        let e = ExperimentConfig::from_json(r#"{"kind": "xx-scaling", "params": {"colour": 1}}"#).unwrap_err();
        assert_eq!(e.path, "params.colour");
        let e =
            ExperimentConfig::from_json(r#"{"kind": "halfchain-negativity", "params": {"n": [8, -2]}}"#).unwrap_err();
        assert_eq!(e.path, "params.n[1]");
        let e = ExperimentConfig::from_json(r#"{"kind": "topo", "fit_window": [1, 2]}"#).unwrap_err();
        assert_eq!(e.path, "fit_window");
        let e = ExperimentConfig::from_json(r#"{"kind": "xx-scaling", "extra": 1}"#).unwrap_err();
        assert_eq!(e.path, "extra");
        assert!(ExperimentConfig::from_json(r#"{"params": {}}"#).is_err());
    }

    #[test]
    fn hash_ignores_output_dir_but_not_params() {
        let a = ExperimentConfig::from_json(r#"{"kind": "disorder", "output_dir": "x"}"#).unwrap();
        let b = ExperimentConfig::from_json(r#"{"kind": "disorder", "output_dir": "y"}"#).unwrap();
        let c = ExperimentConfig::from_json(r#"{"kind": "disorder", "params": {"samples": 21}}"#).unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), c.hash());
        assert_eq!(a.hash().len(), 16);
    }
}
