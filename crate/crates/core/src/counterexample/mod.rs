//! Counterexample pipelines: the graph `G`, named vertices of `K_c^G`
//! forming `H`, verification, and certificates.

pub mod build;
pub mod certificate;
pub mod exp;
pub mod family;
pub mod params;
pub mod verify;

pub use build::{build_counterexample, Counterexample};
pub use certificate::{check_certificate, emit_certificate, Certificate, CertificateCheck};
pub use exp::{exp_adjacent, verify_product_coloring, ExpIndex, ProductCheck};
pub use family::{build_special_family, FunctionLabel, FunctionVertex, SelectorReading, TableContext};
pub use params::{parameter_check, CounterexampleParams, InequalitySet, Variant};
pub use verify::{verify_counterexample, Report, Status, Verification, VerifyOptions};
