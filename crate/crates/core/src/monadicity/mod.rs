//! Relative monadicity: the decision procedure through the comparison
//! functor, creation audits, and cross-checks of the surrounding theorems.

mod audit;
mod decide;
mod theorems;

pub use audit::{
    audit_with, creation_audit, AuditFailure, AuditOptions, AuditReport, ShapeFamily,
    TargetedResult, MAX_RECORDED,
};
pub use decide::{decide_monadicity, dualize, MonadicityReport, Resolved, Verdict, SCHEMA};
pub use theorems::{
    check_monadic_iff_left_adjoint, decide_composite_monadicity, CompositeReport,
    LeftAdjointReport,
};
