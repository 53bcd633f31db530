//! `G(n,p)` sampling, spanning-copy search and threshold estimation.

pub mod estimate;
pub mod gnp;
pub mod lowerbound;
pub mod search;
pub mod sweep;
pub mod threshold;

pub use estimate::{estimate_containment_prob, ContainmentEstimate, SimConfig};
pub use gnp::{sample_gnp, BitGraph};
pub use lowerbound::{lower_bound_certificate, LowerBoundCertificate};
pub use search::{contains_copy, Pattern, SearchOutcome};
pub use sweep::{sweep, KRule, SweepResult};
pub use threshold::{estimate_threshold, ThresholdEstimate};
