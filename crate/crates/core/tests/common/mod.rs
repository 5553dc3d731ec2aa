//! Shared generators and the general-engine reference pipeline.
#![allow(dead_code)]

use std::fs;
use std::path::Path;

use dst_fusion::compact::CompactMass;
use dst_fusion::frame::{Frame, SubsetMask};
use dst_fusion::mass::{combine_all, MassFunction};
use rand::Rng;

/// Random mass function with 1..=5 focal sets; Θ is focal with probability
/// `theta_prob`.
pub fn random_mass<R: Rng>(rng: &mut R, frame: &Frame, theta_prob: f64) -> MassFunction {
    let n = frame.size();
    let full = (1u32 << n) - 1;
    let focal_count = rng.random_range(1..=5);
    let mut assignments = Vec::new();
    for _ in 0..focal_count {
        let bits = rng.random_range(1..=full);
        assignments.push((
            SubsetMask::new(bits, n).unwrap(),
            rng.random_range(0.01..1.0),
        ));
    }
    if rng.random_bool(theta_prob) {
        assignments.push((frame.theta().unwrap(), rng.random_range(0.01..1.0)));
    }
    MassFunction::normalized(frame.clone(), assignments).unwrap()
}

/// Random singleton+Θ mass; roughly a third of the singletons are zero.
pub fn random_compact<R: Rng>(rng: &mut R, n: usize, min_theta: f64) -> CompactMass {
    let mut raw: Vec<f64> = (0..n)
        .map(|_| {
            if rng.random_bool(0.33) {
                0.0
            } else {
                rng.random_range(0.0..1.0)
            }
        })
        .collect();
    let theta = rng.random_range(min_theta..1.0);
    let total: f64 = raw.iter().sum();
    if total == 0.0 {
        return CompactMass::vacuous(n);
    }
    let scale = (1.0 - theta) / total;
    raw.iter_mut().for_each(|m| *m *= scale);
    CompactMass::new(raw, theta).unwrap()
}

/// Reference result of fusing one sample through the general engine.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSample {
    pub fused: usize,
    pub utilities: Vec<f64>,
    pub conflicts: Vec<f64>,
}

/// Threshold, normalize, combine and decide using only the general engine:
/// masses built from subsets, Dempster by enumeration, `U_c` from `bel`.
pub fn oracle_fuse(frame: &Frame, rows: &[Vec<f64>], theta_floor: f64) -> OracleSample {
    let theta = frame.theta().unwrap();
    let masses: Vec<MassFunction> = rows
        .iter()
        .map(|row| {
            let abs_total: f64 = row.iter().map(|f| f.abs()).sum();
            let kept: Vec<(usize, f64)> = row
                .iter()
                .copied()
                .enumerate()
                .filter(|&(_, f)| abs_total > 0.0 && f >= 0.5 * abs_total)
                .collect();
            if kept.is_empty() {
                return MassFunction::vacuous(frame.clone()).unwrap();
            }
            let kept_total: f64 = kept.iter().map(|(_, f)| f).sum();
            let mut assignments: Vec<(SubsetMask, f64)> = kept
                .iter()
                .map(|&(c, f)| {
                    (
                        frame.singleton(c).unwrap(),
                        f / kept_total * (1.0 - theta_floor),
                    )
                })
                .collect();
            assignments.push((theta, theta_floor));
            MassFunction::normalized(frame.clone(), assignments).unwrap()
        })
        .collect();
    let (fused, reports) = combine_all(&masses).unwrap();
    let utilities: Vec<f64> = (0..frame.size())
        .map(|c| {
            let single = frame.singleton(c).unwrap();
            fused.bel(single).unwrap() - fused.bel(single.complement()).unwrap()
        })
        .collect();
    let mut best = 0;
    for c in 1..utilities.len() {
        if utilities[c] > utilities[best] {
            best = c;
        }
    }
    OracleSample {
        fused: best,
        utilities,
        conflicts: reports.iter().map(|r| r.k).collect(),
    }
}

fn read_rows(path: &Path) -> Vec<(String, Vec<f64>)> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|line| {
            let mut fields = line.split(',');
            let id = fields.next().unwrap().to_owned();
            (id, fields.map(|f| f.parse().unwrap()).collect())
        })
        .collect()
}

/// Accuracies of the reference pipeline on a fixture directory whose files
/// share sample ids row for row: `(per-model accuracies, fused accuracy)`.
pub fn oracle_accuracies(
    score_files: &[&Path],
    labels_file: &Path,
    theta_floor: f64,
) -> (Vec<f64>, f64) {
    let models: Vec<_> = score_files.iter().map(|p| read_rows(p)).collect();
    let labels: Vec<usize> = fs::read_to_string(labels_file)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    let n = models[0][0].1.len();
    let frame = Frame::indexed(n).unwrap();
    let samples = labels.len();
    let mut model_correct = vec![0usize; models.len()];
    let mut fused_correct = 0;
    for i in 0..samples {
        let rows: Vec<Vec<f64>> = models.iter().map(|m| m[i].1.clone()).collect();
        for (j, row) in rows.iter().enumerate() {
            let mut best = 0;
            for c in 1..n {
                if row[c] > row[best] {
                    best = c;
                }
            }
            if best == labels[i] {
                model_correct[j] += 1;
            }
        }
        if oracle_fuse(&frame, &rows, theta_floor).fused == labels[i] {
            fused_correct += 1;
        }
    }
    (
        model_correct
            .iter()
            .map(|&c| c as f64 / samples as f64)
            .collect(),
        fused_correct as f64 / samples as f64,
    )
}
