//! Instance files, generators and JSON reports.

pub mod generate;
pub mod report;
pub mod stp;

pub use generate::{generate, Family, GeneratorSpec};
pub use report::{
    ratio, write_audit_report, write_report, AlgorithmResult, AuditReport, RatioReport,
    RationalJson,
};
pub use stp::{parse_stp, write_stp};
