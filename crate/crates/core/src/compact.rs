//! Mass functions restricted to the focal family `{singletons} ∪ {Θ}`.
//!
//! This family is closed under Dempster's rule: `{c} ∩ {c} = {c}`,
//! `{c} ∩ {c'} = ∅`, `{c} ∩ Θ = {c}` and `Θ ∩ Θ = Θ`. Combination is
//! therefore O(n) and works for frames of any size.

use crate::error::{DstError, Result};
use crate::frame::{Frame, SubsetMask};
use crate::mass::{ConflictReport, MassFunction, CONFLICT_EPSILON, SUM_TOLERANCE};

#[derive(Debug, Clone, PartialEq)]
pub struct CompactMass {
    singleton: Vec<f64>,
    theta: f64,
}

impl CompactMass {
    /// Validates non-negativity and `Σ singleton + theta = 1` within 1e-9.
    pub fn new(singleton: Vec<f64>, theta: f64) -> Result<Self> {
        if singleton.len() < 2 {
            return Err(DstError::TooFewClasses(singleton.len()));
        }
        for &m in singleton.iter().chain(std::iter::once(&theta)) {
            if !m.is_finite() {
                return Err(DstError::NonFiniteMass);
            }
            if m < 0.0 {
                return Err(DstError::NegativeMass(m));
            }
        }
        let total = singleton.iter().sum::<f64>() + theta;
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(DstError::NotNormalized { total });
        }
        Ok(Self { singleton, theta })
    }

    pub fn vacuous(frame_size: usize) -> Self {
        Self {
            singleton: vec![0.0; frame_size],
            theta: 1.0,
        }
    }

    pub(crate) fn from_parts_unchecked(singleton: Vec<f64>, theta: f64) -> Self {
        Self { singleton, theta }
    }

    pub fn frame_size(&self) -> usize {
        self.singleton.len()
    }

    pub fn singleton(&self) -> &[f64] {
        &self.singleton
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn is_vacuous(&self) -> bool {
        self.theta == 1.0
    }

    /// Total singleton mass `S`.
    pub fn singleton_total(&self) -> f64 {
        self.singleton.iter().sum()
    }

    /// `bel({c})`.
    pub fn bel_singleton(&self, class: usize) -> f64 {
        self.singleton[class]
    }

    /// `pl({c}) = m({c}) + m(Θ)`.
    pub fn pl_singleton(&self, class: usize) -> f64 {
        self.singleton[class] + self.theta
    }

    /// `bel(Θ \ {c})`: the singleton masses other than `c`.
    pub fn bel_complement(&self, class: usize) -> f64 {
        self.singleton
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != class)
            .map(|(_, m)| m)
            .sum()
    }

    /// Representation in the general engine. Requires `frame.size() <= 16`.
    pub fn lift_to_general(&self, frame: &Frame) -> Result<MassFunction> {
        if frame.size() != self.frame_size() {
            return Err(DstError::FrameMismatch);
        }
        let n = frame.size();
        let mut focal = Vec::with_capacity(n + 1);
        for (c, &m) in self.singleton.iter().enumerate() {
            if m > 0.0 {
                focal.push((SubsetMask::from_indices(n, [c])?, m));
            }
        }
        if self.theta > 0.0 {
            focal.push((SubsetMask::theta(n)?, self.theta));
        }
        MassFunction::new(frame.clone(), focal)
    }
}

/// Dempster's rule on the singleton+Θ family.
///
/// `K = (Σ s1)(Σ s2) − Σ_c s1[c]·s2[c]`; the output is renormalized by the
/// sum of the non-conflicting terms.
pub fn compact_combine(
    m1: &CompactMass,
    m2: &CompactMass,
) -> Result<(CompactMass, ConflictReport)> {
    compact_step(m1, m2, 1)
}

fn compact_step(
    m1: &CompactMass,
    m2: &CompactMass,
    step: usize,
) -> Result<(CompactMass, ConflictReport)> {
    if m1.frame_size() != m2.frame_size() {
        return Err(DstError::FrameMismatch);
    }
    let (t1, t2) = (m1.theta, m2.theta);
    let mut dot = 0.0;
    let mut sum1 = 0.0;
    let mut sum2 = 0.0;
    let mut singleton = Vec::with_capacity(m1.frame_size());
    for (&a, &b) in m1.singleton.iter().zip(&m2.singleton) {
        dot += a * b;
        sum1 += a;
        sum2 += b;
        singleton.push(a * b + a * t2 + t1 * b);
    }
    let theta = t1 * t2;
    let k = (sum1 * sum2 - dot).clamp(0.0, 1.0);
    let agreeing = singleton.iter().sum::<f64>() + theta;
    if k >= 1.0 - CONFLICT_EPSILON || agreeing <= 0.0 {
        return Err(DstError::TotalConflict { step, k });
    }
    for m in &mut singleton {
        *m /= agreeing;
    }
    Ok((
        CompactMass::from_parts_unchecked(singleton, theta / agreeing),
        ConflictReport::from_k(k),
    ))
}

/// Left fold of [`compact_combine`]; one conflict report per step.
pub fn compact_combine_all(masses: &[CompactMass]) -> Result<(CompactMass, Vec<ConflictReport>)> {
    let (first, rest) = masses.split_first().ok_or(DstError::EmptyList)?;
    let mut acc = first.clone();
    let mut reports = Vec::with_capacity(rest.len());
    for (i, next) in rest.iter().enumerate() {
        let (fused, report) = compact_step(&acc, next, i + 1)?;
        acc = fused;
        reports.push(report);
    }
    Ok((acc, reports))
}
