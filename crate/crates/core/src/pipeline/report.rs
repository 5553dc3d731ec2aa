use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};

use super::{FusionReport, PipelineError, Result};

/// Rounds to 9 significant digits; the JSON writer then prints the
/// shortest representation of the rounded value.
fn sig9(x: f64) -> f64 {
    let r: f64 = format!("{x:.8e}").parse().unwrap_or(x);
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn report_value(report: &FusionReport, include_per_sample: bool) -> Value {
    let accuracy: Map<String, Value> = report
        .per_model_accuracy
        .iter()
        .map(|(k, v)| (k.clone(), json!(sig9(*v))))
        .collect();
    let abstentions: Map<String, Value> = report
        .per_model_abstentions
        .iter()
        .map(|(k, v)| (k.clone(), json!(v)))
        .collect();
    let mut root = json!({
        "frame_labels": report.frame_labels,
        "policy": {
            "mode": report.policy.mode().as_str(),
            "theta_floor": sig9(report.policy.theta_floor()),
        },
        "models": report.models,
        "per_model_accuracy": accuracy,
        "per_model_abstentions": abstentions,
        "best_model_accuracy": sig9(report.best_model_accuracy()),
        "fused_accuracy": sig9(report.fused_accuracy),
        "mean_conflict": sig9(report.mean_conflict),
        "max_conflict": sig9(report.max_conflict),
        "tie_count": report.tie_count,
        "sample_count": report.sample_count,
        "unaligned_samples": report.unaligned_samples,
    });
    if include_per_sample {
        let samples: Vec<Value> = report
            .per_sample
            .iter()
            .map(|s| {
                json!({
                    "sample_id": s.sample_id,
                    "label": s.label,
                    "model_predictions": s.model_predictions,
                    "abstained": s.abstained,
                    "fused_prediction": s.fused_prediction,
                    "max_utility": sig9(s.max_utility),
                    "tie": s.tie,
                    "conflicts": s.conflicts.iter().map(|k| sig9(*k)).collect::<Vec<_>>(),
                })
            })
            .collect();
        root["per_sample"] = Value::Array(samples);
    }
    root
}

/// Sorted keys, 9 significant digits, two-space indent, trailing newline.
pub fn to_canonical_json(report: &FusionReport, include_per_sample: bool) -> String {
    let mut out = serde_json::to_string_pretty(&report_value(report, include_per_sample))
        .expect("report values are always serializable");
    out.push('\n');
    out
}

pub fn emit_report(
    report: &FusionReport,
    path: impl AsRef<Path>,
    include_per_sample: bool,
) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_canonical_json(report, include_per_sample))
        .map_err(|e| PipelineError::io(path, e))
}

/// Aligned text table: one row per model, then the fused ensemble.
pub fn render_table(report: &FusionReport) -> String {
    let width = report
        .models
        .iter()
        .map(String::len)
        .chain(["DST fusion".len(), "Model".len()])
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<width$}  {:>9}  {:>9}",
        "Model", "Accuracy", "Abstained"
    );
    for model in &report.models {
        let _ = writeln!(
            out,
            "{:<width$}  {:>9.4}  {:>9}",
            model, report.per_model_accuracy[model], report.per_model_abstentions[model]
        );
    }
    let _ = writeln!(
        out,
        "{:<width$}  {:>9.4}",
        "DST fusion", report.fused_accuracy
    );
    let _ = writeln!(
        out,
        "samples: {}  unaligned: {}  ties: {}  mean K: {:.6}  max K: {:.6}  policy: {} (theta floor {})",
        report.sample_count,
        report.unaligned_samples,
        report.tie_count,
        report.mean_conflict,
        report.max_conflict,
        report.policy.mode(),
        report.policy.theta_floor(),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evidence::BuildPolicy;
    use crate::exec::Execution;
    use crate::pipeline::{evaluate_with, LabelSet, ScoreMatrix};

    fn report() -> FusionReport {
        let labels = vec!["x".to_string(), "y".to_string()];
        let m = ScoreMatrix::new(
            "only",
            labels,
            vec![
                ("b".into(), vec![0.1, 2.0]),
                ("a".into(), vec![1.0 / 3.0, 0.0]),
            ],
        )
        .unwrap();
        let l: LabelSet = [("a", 0), ("b", 0)].into_iter().collect();
        evaluate_with(&[m], &l, &BuildPolicy::default(), Execution::Sequential).unwrap()
    }

    #[test]
    fn significant_digits() {
        assert_eq!(sig9(1.0 / 3.0), 0.333333333);
        assert_eq!(sig9(0.5), 0.5);
        assert_eq!(sig9(-0.0).to_bits(), 0.0f64.to_bits());
        assert_eq!(sig9(123456789.987), 123456790.0);
    }

    #[test]
    fn canonical_output() {
        let r = report();
        let text = to_canonical_json(&r, false);
        assert_eq!(text, to_canonical_json(&r, false));
        assert!(!text.contains("per_sample"));
        let v: Value = serde_json::from_str(&text).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert_eq!(v["fused_accuracy"], json!(0.5));
        assert_eq!(v["policy"]["mode"], json!("literal"));

        let full = to_canonical_json(&r, true);
        let v: Value = serde_json::from_str(&full).unwrap();
        assert_eq!(v["per_sample"][0]["sample_id"], json!("a"));
        assert_eq!(v["per_sample"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn file_output_is_stable() {
        let dir = tempfile::tempdir().unwrap();
        let r = report();
        let (p1, p2) = (dir.path().join("1.json"), dir.path().join("2.json"));
        emit_report(&r, &p1, true).unwrap();
        emit_report(&r, &p2, true).unwrap();
        assert_eq!(fs::read(p1).unwrap(), fs::read(p2).unwrap());
        let err = emit_report(&r, dir.path().join("missing/dir.json"), false).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn table_lists_models_and_fusion() {
        let t = render_table(&report());
        assert!(t.contains("only"));
        assert!(t.contains("DST fusion"));
        assert!(t.lines().next().unwrap().starts_with("Model"));
    }
}
