use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::compact::compact_combine_all;
use crate::decision::{argmax_lowest, predict};
use crate::evidence::{build_evidence, BuildPolicy, ScoreVector};
use crate::exec::Execution;

use super::{LabelSet, PipelineError, Result, ScoreMatrix};

/// Outcome of fusing one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRecord {
    pub sample_id: String,
    pub label: usize,
    /// Argmax of each model's raw scores, in model order.
    pub model_predictions: Vec<usize>,
    /// Which models produced the vacuous mass, in model order.
    pub abstained: Vec<bool>,
    pub fused_prediction: usize,
    pub max_utility: f64,
    pub tie: bool,
    /// Dempster conflict of each fold step.
    pub conflicts: Vec<f64>,
}

/// Per-model baselines against the fused ensemble over the aligned samples.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionReport {
    pub frame_labels: Vec<String>,
    pub policy: BuildPolicy,
    /// Model ids in fold order.
    pub models: Vec<String>,
    pub per_model_accuracy: BTreeMap<String, f64>,
    /// Number of samples on which each model abstained.
    pub per_model_abstentions: BTreeMap<String, usize>,
    pub fused_accuracy: f64,
    /// Mean of all per-step conflicts over all samples (0 with one model).
    pub mean_conflict: f64,
    pub max_conflict: f64,
    pub tie_count: usize,
    pub sample_count: usize,
    /// Ids present in some input but not in all of them.
    pub unaligned_samples: usize,
    /// Ascending by sample id.
    pub per_sample: Vec<SampleRecord>,
}

impl FusionReport {
    pub fn best_model_accuracy(&self) -> f64 {
        self.per_model_accuracy
            .values()
            .copied()
            .fold(0.0, f64::max)
    }
}

/// [`evaluate_with`] using [`Execution::from_env`].
pub fn evaluate(
    models: &[ScoreMatrix],
    labels: &LabelSet,
    policy: &BuildPolicy,
) -> Result<FusionReport> {
    evaluate_with(models, labels, policy, Execution::from_env())
}

/// Builds, fuses and decides every sample present in all models and the
/// label set. The report does not depend on `exec`.
pub fn evaluate_with(
    models: &[ScoreMatrix],
    labels: &LabelSet,
    policy: &BuildPolicy,
    exec: Execution,
) -> Result<FusionReport> {
    let reference = models.first().ok_or(PipelineError::NoModels)?;
    let classes = reference.classes();
    let mut ids = HashSet::new();
    for m in models {
        if m.classes() != classes {
            return Err(PipelineError::ClassCountMismatch {
                model_id: m.model_id().to_owned(),
                expected: classes,
                found: m.classes(),
            });
        }
        if m.class_labels() != reference.class_labels() {
            return Err(PipelineError::HeaderMismatch {
                model_id: m.model_id().to_owned(),
                reference: reference.model_id().to_owned(),
            });
        }
        if !ids.insert(m.model_id()) {
            return Err(PipelineError::DuplicateModelId(m.model_id().to_owned()));
        }
    }
    for (sample_id, label) in labels.iter() {
        if label >= classes {
            return Err(PipelineError::LabelOutOfRange {
                sample_id: sample_id.to_owned(),
                label,
                classes,
            });
        }
    }

    let rows: Vec<HashMap<&str, usize>> = models
        .iter()
        .map(|m| {
            m.sample_ids()
                .iter()
                .enumerate()
                .map(|(i, id)| (id.as_str(), i))
                .collect()
        })
        .collect();
    // LabelSet iterates in ascending id order, which fixes the sample order.
    let common: Vec<(&str, usize)> = labels
        .iter()
        .filter(|(id, _)| rows.iter().all(|r| r.contains_key(id)))
        .collect();
    if common.is_empty() {
        return Err(PipelineError::NoCommonSamples);
    }
    let mut union: BTreeSet<&str> = labels.iter().map(|(id, _)| id).collect();
    for m in models {
        union.extend(m.sample_ids().iter().map(String::as_str));
    }

    let outcomes = exec.map(&common, |&(sample_id, label)| {
        let vectors: Vec<ScoreVector> = models
            .iter()
            .zip(&rows)
            .map(|(m, r)| ScoreVector::new(m.model_id(), m.row(r[sample_id]).to_vec()))
            .collect();
        fuse_sample(sample_id, label, &vectors, policy)
    });
    let per_sample = outcomes.into_iter().collect::<Result<Vec<_>>>()?;

    let total = per_sample.len() as f64;
    let mut per_model_accuracy = BTreeMap::new();
    let mut per_model_abstentions = BTreeMap::new();
    for (j, m) in models.iter().enumerate() {
        let correct = per_sample
            .iter()
            .filter(|s| s.model_predictions[j] == s.label)
            .count();
        let abstained = per_sample.iter().filter(|s| s.abstained[j]).count();
        per_model_accuracy.insert(m.model_id().to_owned(), correct as f64 / total);
        per_model_abstentions.insert(m.model_id().to_owned(), abstained);
    }
    let fused_correct = per_sample
        .iter()
        .filter(|s| s.fused_prediction == s.label)
        .count();
    let conflicts: Vec<f64> = per_sample
        .iter()
        .flat_map(|s| s.conflicts.iter().copied())
        .collect();
    let mean_conflict = if conflicts.is_empty() {
        0.0
    } else {
        conflicts.iter().sum::<f64>() / conflicts.len() as f64
    };

    Ok(FusionReport {
        frame_labels: reference.class_labels().to_vec(),
        policy: *policy,
        models: models.iter().map(|m| m.model_id().to_owned()).collect(),
        per_model_accuracy,
        per_model_abstentions,
        fused_accuracy: fused_correct as f64 / total,
        mean_conflict,
        max_conflict: conflicts.iter().copied().fold(0.0, f64::max),
        tie_count: per_sample.iter().filter(|s| s.tie).count(),
        sample_count: per_sample.len(),
        unaligned_samples: union.len() - per_sample.len(),
        per_sample,
    })
}

fn fuse_sample(
    sample_id: &str,
    label: usize,
    vectors: &[ScoreVector],
    policy: &BuildPolicy,
) -> Result<SampleRecord> {
    let context = |source| PipelineError::Fusion {
        sample_id: sample_id.to_owned(),
        source,
    };
    let masses = build_evidence(vectors, policy).map_err(context)?;
    let (fused, reports) = compact_combine_all(&masses).map_err(context)?;
    let decision = predict(&fused);
    Ok(SampleRecord {
        sample_id: sample_id.to_owned(),
        label,
        model_predictions: vectors.iter().map(|v| argmax_lowest(&v.scores).0).collect(),
        abstained: masses.iter().map(|m| m.is_vacuous()).collect(),
        fused_prediction: decision.predicted_class,
        max_utility: decision.utilities.max(),
        tie: decision.tie,
        conflicts: reports.iter().map(|r| r.k).collect(),
    })
}
