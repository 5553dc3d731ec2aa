//! Turning one model's class scores into a singleton+Θ mass function.
//!
//! A class keeps its score only if it reaches half of the total absolute
//! score mass, `f_c >= 0.5 · Σ_k |f_k|`; everything else is zeroed. The kept
//! scores are then normalized according to a [`BuildPolicy`].

use std::fmt;
use std::str::FromStr;

use crate::compact::CompactMass;
use crate::error::{DstError, Result};

pub const DEFAULT_THETA_FLOOR: f64 = 1e-3;

/// Raw per-class outputs of one model for one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    pub model_id: String,
    pub scores: Vec<f64>,
}

impl ScoreVector {
    pub fn new(model_id: impl Into<String>, scores: Vec<f64>) -> Self {
        Self {
            model_id: model_id.into(),
            scores,
        }
    }
}

/// How kept scores become masses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BuildMode {
    /// Kept scores are rescaled to fill `1 - theta_floor`.
    #[default]
    Literal,
    /// Kept scores are divided by `Σ|f|`; the remainder goes to Θ.
    ResidualTheta,
}

impl BuildMode {
    pub fn as_str(self) -> &'static str {
        match self {
            BuildMode::Literal => "literal",
            BuildMode::ResidualTheta => "residual_theta",
        }
    }
}

impl fmt::Display for BuildMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BuildMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "literal" => Ok(BuildMode::Literal),
            "residual_theta" | "residual-theta" => Ok(BuildMode::ResidualTheta),
            other => Err(format!("unknown build mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuildPolicy {
    mode: BuildMode,
    theta_floor: f64,
}

impl Default for BuildPolicy {
    fn default() -> Self {
        Self {
            mode: BuildMode::Literal,
            theta_floor: DEFAULT_THETA_FLOOR,
        }
    }
}

impl BuildPolicy {
    /// `theta_floor` must lie in `[0, 0.5)`. A floor of zero reproduces the
    /// unguarded construction and can lead to total conflict downstream.
    pub fn new(mode: BuildMode, theta_floor: f64) -> Result<Self> {
        if !(0.0..0.5).contains(&theta_floor) {
            return Err(DstError::InvalidThetaFloor(theta_floor));
        }
        Ok(Self { mode, theta_floor })
    }

    pub fn mode(&self) -> BuildMode {
        self.mode
    }

    pub fn theta_floor(&self) -> f64 {
        self.theta_floor
    }
}

/// Indices whose score passes the dominance threshold, with the absolute
/// score total. Empty when the total is zero.
pub fn kept_classes(scores: &[f64]) -> (Vec<usize>, f64) {
    let total: f64 = scores.iter().map(|f| f.abs()).sum();
    if total <= 0.0 {
        return (Vec::new(), total);
    }
    let threshold = 0.5 * total;
    let kept = scores
        .iter()
        .enumerate()
        .filter(|&(_, &f)| f >= threshold)
        .map(|(i, _)| i)
        .collect();
    (kept, total)
}

/// Builds one model's mass function. A model whose scores leave no class
/// above the threshold (including all-zero scores) abstains with the
/// vacuous mass.
pub fn build_mass(scores: &ScoreVector, policy: &BuildPolicy) -> Result<CompactMass> {
    let n = scores.scores.len();
    if n < 2 {
        return Err(DstError::TooFewClasses(n));
    }
    if let Some(index) = scores.scores.iter().position(|f| !f.is_finite()) {
        return Err(DstError::NonFiniteScore {
            model_id: scores.model_id.clone(),
            index,
        });
    }
    let (kept, total) = kept_classes(&scores.scores);
    if kept.is_empty() {
        return Ok(CompactMass::vacuous(n));
    }
    let floor = policy.theta_floor;
    let mut singleton = vec![0.0; n];
    let theta = match policy.mode {
        BuildMode::Literal => {
            let kept_total: f64 = kept.iter().map(|&c| scores.scores[c]).sum();
            let scale = (1.0 - floor) / kept_total;
            for &c in &kept {
                singleton[c] = scores.scores[c] * scale;
            }
            floor
        }
        BuildMode::ResidualTheta => {
            for &c in &kept {
                singleton[c] = scores.scores[c] / total;
            }
            let committed: f64 = singleton.iter().sum();
            if 1.0 - committed < floor {
                let scale = (1.0 - floor) / committed;
                for m in &mut singleton {
                    *m *= scale;
                }
                floor
            } else {
                1.0 - committed
            }
        }
    };
    CompactMass::new(singleton, theta)
}

/// One mass function per model, in input order.
pub fn build_evidence(
    sample_scores: &[ScoreVector],
    policy: &BuildPolicy,
) -> Result<Vec<CompactMass>> {
    let Some(first) = sample_scores.first() else {
        return Err(DstError::EmptyList);
    };
    let expected = first.scores.len();
    sample_scores
        .iter()
        .map(|sv| {
            if sv.scores.len() != expected {
                return Err(DstError::LengthMismatch {
                    model_id: sv.model_id.clone(),
                    expected,
                    found: sv.scores.len(),
                });
            }
            build_mass(sv, policy)
        })
        .collect()
}
