//! Seeded synthetic score fixtures.
//!
//! Model `j` scores a sample as `signal_j · onehot(label) + N(0, 1)` noise
//! per entry, with `signal_j ~ U[1.5, 3.5]` drawn once per model. Draw order
//! is fixed (signals, then labels, then noise model by model, row by row) so
//! a seed reproduces the files byte for byte.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{PipelineError, Result};

pub const SIGNAL_RANGE: (f64, f64) = (1.5, 3.5);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixtureSpec {
    pub classes: usize,
    pub models: usize,
    pub samples: usize,
    pub seed: u64,
}

impl FixtureSpec {
    /// Conventional fixture name, e.g. `synth-10c-3m-200s-seed42`.
    pub fn name(&self) -> String {
        format!(
            "synth-{}c-{}m-{}s-seed{}",
            self.classes, self.models, self.samples, self.seed
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureFiles {
    pub score_files: Vec<PathBuf>,
    pub labels_file: PathBuf,
}

/// Zero-padded so lexicographic order matches numeric order.
fn sample_id(index: usize, samples: usize) -> String {
    let width = samples.saturating_sub(1).to_string().len();
    format!("s{index:0width$}")
}

pub fn generate_fixture(spec: FixtureSpec, out_dir: impl AsRef<Path>) -> Result<FixtureFiles> {
    generate_with_signal(spec, out_dir, None)
}

/// As [`generate_fixture`], optionally forcing every model's signal.
pub(crate) fn generate_with_signal(
    spec: FixtureSpec,
    out_dir: impl AsRef<Path>,
    signal: Option<f64>,
) -> Result<FixtureFiles> {
    if spec.classes < 2 {
        return Err(PipelineError::BadDimension(format!(
            "classes = {} (need >= 2)",
            spec.classes
        )));
    }
    if spec.models < 1 {
        return Err(PipelineError::BadDimension("models = 0 (need >= 1)".into()));
    }
    if spec.samples < 1 {
        return Err(PipelineError::BadDimension(
            "samples = 0 (need >= 1)".into(),
        ));
    }
    let out_dir = out_dir.as_ref();
    fs::create_dir_all(out_dir).map_err(|e| PipelineError::io(out_dir, e))?;

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let signals: Vec<f64> = (0..spec.models)
        .map(|_| {
            let drawn = rng.random_range(SIGNAL_RANGE.0..=SIGNAL_RANGE.1);
            signal.unwrap_or(drawn)
        })
        .collect();
    let labels: Vec<usize> = (0..spec.samples)
        .map(|_| rng.random_range(0..spec.classes))
        .collect();

    let header: String = std::iter::once("sample_id".to_string())
        .chain((0..spec.classes).map(|c| format!("c{c}")))
        .collect::<Vec<_>>()
        .join(",");

    let mut score_files = Vec::with_capacity(spec.models);
    for (j, &signal) in signals.iter().enumerate() {
        let mut body = String::with_capacity(spec.samples * spec.classes * 10);
        body.push_str(&header);
        body.push('\n');
        for (i, &label) in labels.iter().enumerate() {
            body.push_str(&sample_id(i, spec.samples));
            for c in 0..spec.classes {
                let noise: f64 = rng.sample(StandardNormal);
                let value = if c == label { signal + noise } else { noise };
                body.push_str(&format!(",{value:.6}"));
            }
            body.push('\n');
        }
        let path = out_dir.join(format!("model_{j}.csv"));
        write_file(&path, body.as_bytes())?;
        score_files.push(path);
    }

    let mut body = String::from("sample_id,label\n");
    for (i, label) in labels.iter().enumerate() {
        body.push_str(&format!("{},{label}\n", sample_id(i, spec.samples)));
    }
    let labels_file = out_dir.join("labels.csv");
    write_file(&labels_file, body.as_bytes())?;

    Ok(FixtureFiles {
        score_files,
        labels_file,
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut f = fs::File::create(path).map_err(|e| PipelineError::io(path, e))?;
    f.write_all(bytes).map_err(|e| PipelineError::io(path, e))
}
