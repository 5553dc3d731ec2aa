//! Dempster-Shafer evidence fusion for classifier ensembles.
//!
//! Each model's class scores become a mass function over the singleton
//! classes and Θ ([`evidence`]); the masses are fused with Dempster's rule
//! ([`compact`], with [`mass`] as the general enumerating engine) and the
//! fused mass is turned into a prediction by expected utility
//! ([`decision`]). [`pipeline`] runs this over score files and reports
//! per-model against fused accuracy.

pub mod compact;
pub mod decision;
pub mod error;
pub mod evidence;
pub mod exec;
pub mod frame;
pub mod mass;
pub mod pipeline;

pub use compact::{compact_combine, compact_combine_all, CompactMass};
pub use decision::{expected_utilities, predict, DecisionResult, UtilityVector};
pub use error::DstError;
pub use evidence::{build_evidence, build_mass, BuildMode, BuildPolicy, ScoreVector};
pub use exec::Execution;
pub use frame::{Frame, SubsetMask};
pub use mass::{combine_all, combine_pair, ConflictReport, MassFunction};
