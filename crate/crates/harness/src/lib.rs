//! Verification harness for the inverse square potential kernels: identity
//! checks against independent oracles, grid evaluation, and the pieces of
//! the `isqk` command-line tool.

pub mod cli;
pub mod grid;
pub mod identities;
pub mod report;
pub mod sampler;

pub use identities::{run_identity_check, IdentityId};
pub use report::{IdentityReport, Verdict};
pub use sampler::{ParamRecord, ParamSampler};
