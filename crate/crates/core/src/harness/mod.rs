//! Finite verification of identities between invariants and operations.
//!
//! Every identity in the [`registry`] is a pair of builders producing the two
//! sides as elements of one context. A case passes iff both sides are equal.

pub mod plan;
pub mod registry;
pub mod report;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Element;

pub use plan::{Profile, SweepPlan};
pub use registry::{check, info, IdentityInfo, IDENTITIES};
pub use report::{sweep, sweep_all, FailureRecord, IdReport, SweepReport};

/// A parameter value: a single integer or an integer list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    List(Vec<u32>),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::List(l) => {
                let parts: Vec<String> = l.iter().map(|v| v.to_string()).collect();
                write!(f, "[{}]", parts.join(","))
            }
        }
    }
}

/// The prime plus named parameters of one case.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Params {
    pub p: u64,
    pub values: BTreeMap<String, ParamValue>,
}

impl Params {
    pub fn new(p: u64) -> Self {
        Params { p, values: BTreeMap::new() }
    }

    pub fn int(mut self, name: &str, v: i64) -> Self {
        self.values.insert(name.to_string(), ParamValue::Int(v));
        self
    }

    pub fn list(mut self, name: &str, v: Vec<u32>) -> Self {
        self.values.insert(name.to_string(), ParamValue::List(v));
        self
    }

    pub fn set(&mut self, name: &str, v: ParamValue) {
        self.values.insert(name.to_string(), v);
    }

    pub fn get_int(&self, name: &str) -> Result<i64> {
        match self.values.get(name) {
            Some(ParamValue::Int(v)) => Ok(*v),
            Some(ParamValue::List(_)) => Err(Error::Hypothesis(format!("parameter '{name}' must be an integer"))),
            None => Err(Error::Hypothesis(format!("missing parameter '{name}'"))),
        }
    }

    /// Non-negative integer parameter.
    pub fn get_nat(&self, name: &str) -> Result<u32> {
        let v = self.get_int(name)?;
        u32::try_from(v).map_err(|_| Error::Hypothesis(format!("parameter '{name}' = {v} must be non-negative")))
    }

    pub fn get_list(&self, name: &str) -> Result<Vec<u32>> {
        match self.values.get(name) {
            Some(ParamValue::List(v)) => Ok(v.clone()),
            Some(ParamValue::Int(v)) if *v >= 0 => Ok(vec![*v as u32]),
            Some(ParamValue::Int(_)) => Err(Error::Hypothesis(format!("parameter '{name}' must be a list"))),
            None => Err(Error::Hypothesis(format!("missing parameter '{name}'"))),
        }
    }

    /// Parses `name=value` with `value` an integer, `[a,b,…]`, or `a,b,…`.
    pub fn parse_assignment(src: &str) -> Result<(String, ParamValue)> {
        let (name, value) =
            src.split_once('=').ok_or_else(|| Error::InvalidArgument(format!("expected name=value, got '{src}'")))?;
        let name = name.trim();
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(Error::InvalidArgument(format!("bad parameter name '{name}'")));
        }
        let value = value.trim();
        let bad = || Error::InvalidArgument(format!("bad value for '{name}': '{value}'"));
        let is_list = value.starts_with('[') || value.contains(',');
        if is_list {
            let inner = value.trim_start_matches('[').trim_end_matches(']');
            let items = if inner.trim().is_empty() {
                Vec::new()
            } else {
                inner.split(',').map(|s| s.trim().parse::<u32>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?
            };
            Ok((name.to_string(), ParamValue::List(items)))
        } else {
            Ok((name.to_string(), ParamValue::Int(value.parse().map_err(|_| bad())?)))
        }
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={}", self.p)?;
        for (k, v) in &self.values {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

/// Outcome of one case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    /// `diff` is `lhs - rhs` for element identities.
    Fail {
        diff: Option<Element>,
        detail: String,
    },
}

/// One identity instantiated at concrete parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCase {
    pub id: &'static str,
    pub params: Params,
    /// Which case of a multi-case statement was exercised.
    pub branch: String,
    pub status: Status,
    pub lhs_terms: usize,
    pub rhs_terms: usize,
}

impl IdentityCase {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}
