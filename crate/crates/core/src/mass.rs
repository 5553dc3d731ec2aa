//! General basic probability assignments over arbitrary focal subsets.
//!
//! This engine enumerates focal pairs directly and is the reference that the
//! compact singleton+Θ engine is checked against. It is limited to frames of
//! at most [`crate::frame::MAX_GENERAL_FRAME`] classes.

use std::collections::BTreeMap;

use crate::error::{DstError, Result};
use crate::frame::{Frame, SubsetMask, MAX_GENERAL_FRAME};

/// Tolerance on `Σ m = 1` when accepting a mass function verbatim.
pub const SUM_TOLERANCE: f64 = 1e-9;
/// Combination is refused once the conflict reaches `1 - CONFLICT_EPSILON`.
pub const CONFLICT_EPSILON: f64 = 1e-12;
/// Combined focal masses below this are dropped.
pub const DROP_BELOW: f64 = 1e-15;

/// Dempster conflict of one combination step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConflictReport {
    /// Mass falling on empty intersections.
    pub k: f64,
    /// `1 / (1 - k)`.
    pub renormalizer: f64,
}

impl ConflictReport {
    pub(crate) fn from_k(k: f64) -> Self {
        Self {
            k,
            renormalizer: 1.0 / (1.0 - k),
        }
    }
}

/// A sparse mass function: `m(∅) = 0`, every stored mass is positive and
/// the masses sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct MassFunction {
    frame: Frame,
    focal: BTreeMap<SubsetMask, f64>,
}

fn collect_assignments<I>(frame: &Frame, assignments: I) -> Result<BTreeMap<SubsetMask, f64>>
where
    I: IntoIterator<Item = (SubsetMask, f64)>,
{
    if frame.size() > MAX_GENERAL_FRAME {
        return Err(DstError::FrameTooLarge {
            size: frame.size(),
            max: MAX_GENERAL_FRAME,
        });
    }
    let mut focal = BTreeMap::new();
    for (subset, mass) in assignments {
        if subset.frame_size() != frame.size() {
            return Err(DstError::FrameMismatch);
        }
        if !mass.is_finite() {
            return Err(DstError::NonFiniteMass);
        }
        if mass < 0.0 {
            return Err(DstError::NegativeMass(mass));
        }
        if mass == 0.0 {
            continue;
        }
        if subset.is_empty() {
            return Err(DstError::MassOnEmptySet);
        }
        *focal.entry(subset).or_insert(0.0) += mass;
    }
    Ok(focal)
}

impl MassFunction {
    /// Accepts the assignments as given. Repeated subsets are summed and
    /// zero entries dropped; the total must be within [`SUM_TOLERANCE`] of 1.
    pub fn new<I>(frame: Frame, assignments: I) -> Result<Self>
    where
        I: IntoIterator<Item = (SubsetMask, f64)>,
    {
        let focal = collect_assignments(&frame, assignments)?;
        let total: f64 = focal.values().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(DstError::NotNormalized { total });
        }
        Ok(Self { frame, focal })
    }

    /// Divides every assignment by the total.
    pub fn normalized<I>(frame: Frame, assignments: I) -> Result<Self>
    where
        I: IntoIterator<Item = (SubsetMask, f64)>,
    {
        let mut focal = collect_assignments(&frame, assignments)?;
        let total: f64 = focal.values().sum();
        if total <= 0.0 {
            return Err(DstError::AllZeroMass);
        }
        for mass in focal.values_mut() {
            *mass /= total;
        }
        Ok(Self { frame, focal })
    }

    /// All mass on Θ.
    pub fn vacuous(frame: Frame) -> Result<Self> {
        let theta = frame.theta()?;
        Self::new(frame, [(theta, 1.0)])
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// Focal elements in ascending bit-pattern order.
    pub fn focal(&self) -> impl Iterator<Item = (SubsetMask, f64)> + '_ {
        self.focal.iter().map(|(s, m)| (*s, *m))
    }

    pub fn focal_count(&self) -> usize {
        self.focal.len()
    }

    pub fn mass(&self, subset: SubsetMask) -> f64 {
        self.focal.get(&subset).copied().unwrap_or(0.0)
    }

    fn check(&self, subset: SubsetMask) -> Result<()> {
        if subset.frame_size() == self.frame.size() {
            Ok(())
        } else {
            Err(DstError::FrameMismatch)
        }
    }

    /// `Σ m(B)` over non-empty `B ⊆ A`.
    pub fn bel(&self, subset: SubsetMask) -> Result<f64> {
        self.check(subset)?;
        Ok(self
            .focal
            .iter()
            .filter(|(b, _)| b.within(subset))
            .map(|(_, m)| m)
            .sum())
    }

    /// `Σ m(B)` over `B ∩ A ≠ ∅`.
    pub fn pl(&self, subset: SubsetMask) -> Result<f64> {
        self.check(subset)?;
        Ok(self
            .focal
            .iter()
            .filter(|(b, _)| !b.meet(subset).is_empty())
            .map(|(_, m)| m)
            .sum())
    }

    pub fn doubt(&self, subset: SubsetMask) -> Result<f64> {
        Ok(1.0 - self.pl(subset)?)
    }

    /// Commonality in the superset form, `q(A) = Σ m(B)` over `B ⊇ A`.
    pub fn commonality(&self, subset: SubsetMask) -> Result<f64> {
        self.check(subset)?;
        if subset.is_empty() {
            return Err(DstError::EmptySetQuery);
        }
        Ok(self
            .focal
            .iter()
            .filter(|(b, _)| subset.within(**b))
            .map(|(_, m)| m)
            .sum())
    }

    /// Dempster's rule; see [`combine_pair`].
    pub fn combine(&self, other: &Self) -> Result<(Self, ConflictReport)> {
        combine_pair(self, other)
    }
}

/// Dempster's rule of combination by enumeration of focal pairs.
///
/// Masses are renormalized by the total non-conflicting product mass, which
/// equals `1 - K` in exact arithmetic. Fails with
/// [`DstError::TotalConflict`] (step 1) when `K >= 1 - 1e-12`.
pub fn combine_pair(
    m1: &MassFunction,
    m2: &MassFunction,
) -> Result<(MassFunction, ConflictReport)> {
    combine_step(m1, m2, 1)
}

fn combine_step(
    m1: &MassFunction,
    m2: &MassFunction,
    step: usize,
) -> Result<(MassFunction, ConflictReport)> {
    if m1.frame != m2.frame {
        return Err(DstError::FrameMismatch);
    }
    let mut joint: BTreeMap<SubsetMask, f64> = BTreeMap::new();
    let mut k = 0.0;
    for (&b, &mb) in &m1.focal {
        for (&c, &mc) in &m2.focal {
            let a = b.meet(c);
            let product = mb * mc;
            if a.is_empty() {
                k += product;
            } else {
                *joint.entry(a).or_insert(0.0) += product;
            }
        }
    }
    let agreeing: f64 = joint.values().sum();
    if k >= 1.0 - CONFLICT_EPSILON || agreeing <= 0.0 {
        return Err(DstError::TotalConflict { step, k });
    }
    joint.retain(|_, m| {
        *m /= agreeing;
        *m >= DROP_BELOW
    });
    Ok((
        MassFunction {
            frame: m1.frame.clone(),
            focal: joint,
        },
        ConflictReport::from_k(k),
    ))
}

/// Left fold of [`combine_pair`] in input order.
///
/// Returns one [`ConflictReport`] per fold step. A total conflict carries
/// the step index `i` at which `masses[i]` was folded in.
pub fn combine_all(masses: &[MassFunction]) -> Result<(MassFunction, Vec<ConflictReport>)> {
    let (first, rest) = masses.split_first().ok_or(DstError::EmptyList)?;
    let mut acc = first.clone();
    let mut reports = Vec::with_capacity(rest.len());
    for (i, next) in rest.iter().enumerate() {
        let (fused, report) = combine_step(&acc, next, i + 1)?;
        acc = fused;
        reports.push(report);
    }
    Ok((acc, reports))
}
