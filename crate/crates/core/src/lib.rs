//! Exact intersection arithmetic and connectedness analysis for curve
//! configurations on a smooth surface.
//!
//! A configuration is integer data: a symmetric matrix of pairwise
//! intersection numbers and a vector of canonical degrees; curves are
//! non-negative multiplicity vectors over it. On top of that the crate
//! provides:
//!
//! - the bilinear intersection pairing and adjunction genus ([`intersection`]);
//! - connectedness numbers by exact minimization of `A.(D-A)` over the
//!   decomposition lattice, with split-connectivity checks ([`connectivity`]);
//! - subcurve analysis, reduced-curve cohomology shadows, chain
//!   decompositions, and fixed-part consistency reports ([`structure`]);
//! - fixture families and seeded random instances ([`generators`]).
//!
//! All arithmetic is exact; overflow is detected and reported, never
//! wrapped. Enumerations are budget-guarded and deterministic: identical
//! inputs yield identical results, tie-breaks included, independent of
//! parallel scheduling.

pub mod config;
pub mod connectivity;
pub mod error;
pub mod generators;
pub mod intersection;
pub mod order;
pub mod structure;

pub use config::{ComponentDocument, ConfigDocument, Decomposition, Divisor, RawConfiguration, SurfaceConfiguration};
pub use connectivity::{Conn, ConnectivityResult, EnumerationBudget, DEFAULT_MAX_CANDIDATES};
pub use error::{Error, Result};
pub use intersection::{additivity_check, arithmetic_genus, intersect, GenusReport};
pub use structure::{fixed_part_report, ConsistencyReport};

use serde::{Deserialize, Serialize};

/// Outcome of a single named consistency check. Not-applicable is first
/// class so reports never conflate a failed hypothesis with a failed claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
}

impl std::fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let text = match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::NotApplicable => "not_applicable",
        };
        write!(f, "{text}")
    }
}
