//! JSON reports (schema version 1).
//!
//! Every document is an envelope `{"schema": ..., "version": 1, "reports": [...]}`.
//! Field order follows struct declaration order, and rationals are written as
//! `{"num": n, "den": d}` in lowest terms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::audit::Step;
use crate::error::{Error, Result};
use crate::heuristics::TraceStep;
use crate::Rational;

pub const REPORT_VERSION: u32 = 1;
pub const RATIO_SCHEMA: &str = "stp12/ratio-report";
pub const AUDIT_SCHEMA: &str = "stp12/audit-report";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: i64,
    pub den: i64,
}

impl From<Rational> for RationalJson {
    fn from(r: Rational) -> Self {
        RationalJson {
            num: *r.numer(),
            den: *r.denom(),
        }
    }
}

impl From<RationalJson> for Rational {
    fn from(r: RationalJson) -> Self {
        Rational::new(r.num, r.den)
    }
}

/// `cost / opt` as an exact rational. An optimum of 0 only admits cost 0,
/// which is reported as ratio 1.
pub fn ratio(cost: u64, opt: u64) -> Result<Rational> {
    if opt == 0 {
        return if cost == 0 {
            Ok(Rational::from_integer(1))
        } else {
            Err(Error::contract(format!("cost {cost} against optimum 0")))
        };
    }
    if cost < opt {
        return Err(Error::contract(format!("cost {cost} below optimum {opt}")));
    }
    let to_i64 = |x: u64| i64::try_from(x).map_err(|_| Error::invalid("cost too large"));
    Ok(Rational::new(to_i64(cost)?, to_i64(opt)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgorithmResult {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub finishing: Option<String>,
    pub cost: u64,
    pub ratio: RationalJson,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub trace: Vec<TraceStep>,
}

impl AlgorithmResult {
    pub fn new(
        name: impl Into<String>,
        finishing: Option<String>,
        cost: u64,
        opt: u64,
        trace: Vec<TraceStep>,
    ) -> Result<Self> {
        Ok(AlgorithmResult {
            name: name.into(),
            finishing,
            cost,
            ratio: ratio(cost, opt)?.into(),
            trace,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioReport {
    pub instance_id: String,
    pub nodes: usize,
    pub terminals: usize,
    /// `None` when the exact oracles refused the instance.
    pub opt: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub skipped: Option<String>,
    pub algorithms: Vec<AlgorithmResult>,
    /// Algorithms whose ratio exceeds their proven bound.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub flags: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub instance_id: String,
    pub mode: String,
    pub opt: u64,
    pub final_cost: u64,
    pub trace: Vec<Step>,
    pub histogram: BTreeMap<String, usize>,
    pub normal: bool,
}

#[derive(Serialize)]
struct Envelope<'a, T> {
    schema: &'a str,
    version: u32,
    reports: &'a [T],
}

fn envelope<T: Serialize>(schema: &str, reports: &[T]) -> String {
    let doc = Envelope {
        schema,
        version: REPORT_VERSION,
        reports,
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("report types serialize");
    out.push('\n');
    out
}

pub fn write_report(reports: &[RatioReport]) -> String {
    envelope(RATIO_SCHEMA, reports)
}

pub fn write_audit_report(reports: &[AuditReport]) -> String {
    envelope(AUDIT_SCHEMA, reports)
}
