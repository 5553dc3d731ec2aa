use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use super::{PipelineError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScoreFormat {
    #[default]
    Csv,
    Jsonl,
}

impl FromStr for ScoreFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ScoreFormat::Csv),
            "jsonl" => Ok(ScoreFormat::Jsonl),
            other => Err(format!("unknown score format `{other}`")),
        }
    }
}

impl fmt::Display for ScoreFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScoreFormat::Csv => "csv",
            ScoreFormat::Jsonl => "jsonl",
        })
    }
}

/// Scores of one model for a batch of samples, row-major
/// (`samples × classes`). Column order is class index order.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    model_id: String,
    class_labels: Vec<String>,
    sample_ids: Vec<String>,
    scores: Vec<f64>,
}

impl ScoreMatrix {
    /// Validates rectangularity, finiteness and unique sample ids.
    pub fn new(
        model_id: impl Into<String>,
        class_labels: Vec<String>,
        rows: Vec<(String, Vec<f64>)>,
    ) -> Result<Self> {
        let model_id = model_id.into();
        let origin = PathBuf::from(&model_id);
        let mut builder = Builder::new(origin, class_labels)?;
        for (i, (id, row)) in rows.into_iter().enumerate() {
            builder.push(i + 1, id, row)?;
        }
        builder.finish(model_id)
    }

    pub fn model_id(&self) -> &str {
        &self.model_id
    }

    pub fn class_labels(&self) -> &[String] {
        &self.class_labels
    }

    pub fn classes(&self) -> usize {
        self.class_labels.len()
    }

    pub fn samples(&self) -> usize {
        self.sample_ids.len()
    }

    pub fn sample_ids(&self) -> &[String] {
        &self.sample_ids
    }

    pub fn row(&self, index: usize) -> &[f64] {
        let n = self.classes();
        &self.scores[index * n..(index + 1) * n]
    }
}

struct Builder {
    path: PathBuf,
    class_labels: Vec<String>,
    sample_ids: Vec<String>,
    seen: HashSet<String>,
    scores: Vec<f64>,
}

impl Builder {
    fn new(path: PathBuf, class_labels: Vec<String>) -> Result<Self> {
        if class_labels.len() < 2 {
            return Err(PipelineError::Schema {
                path,
                line: 1,
                message: format!(
                    "need at least 2 class columns, found {}",
                    class_labels.len()
                ),
            });
        }
        let mut uniq = HashSet::new();
        for label in &class_labels {
            if !uniq.insert(label.as_str()) {
                return Err(PipelineError::Schema {
                    path,
                    line: 1,
                    message: format!("duplicate class column `{label}`"),
                });
            }
        }
        Ok(Self {
            path,
            class_labels,
            sample_ids: Vec::new(),
            seen: HashSet::new(),
            scores: Vec::new(),
        })
    }

    fn push(&mut self, line: usize, id: String, row: Vec<f64>) -> Result<()> {
        if row.len() != self.class_labels.len() {
            return Err(PipelineError::Schema {
                path: self.path.clone(),
                line,
                message: format!(
                    "expected {} scores, found {}",
                    self.class_labels.len(),
                    row.len()
                ),
            });
        }
        if row.iter().any(|f| !f.is_finite()) {
            return Err(PipelineError::NonFiniteScore {
                path: self.path.clone(),
                line,
            });
        }
        if !self.seen.insert(id.clone()) {
            return Err(PipelineError::DuplicateSampleId {
                path: self.path.clone(),
                id,
            });
        }
        self.sample_ids.push(id);
        self.scores.extend(row);
        Ok(())
    }

    fn finish(self, model_id: String) -> Result<ScoreMatrix> {
        if self.sample_ids.is_empty() {
            return Err(PipelineError::EmptyFile(self.path));
        }
        Ok(ScoreMatrix {
            model_id,
            class_labels: self.class_labels,
            sample_ids: self.sample_ids,
            scores: self.scores,
        })
    }
}

fn model_id_from(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn csv_error(path: &Path, err: csv::Error) -> PipelineError {
    let line = err.position().map(|p| p.line() as usize).unwrap_or(0);
    match err.into_kind() {
        csv::ErrorKind::Io(e) => PipelineError::io(path, e),
        other => PipelineError::Schema {
            path: path.to_path_buf(),
            line,
            message: format!("{other:?}"),
        },
    }
}

fn open_csv(path: &Path) -> Result<csv::Reader<File>> {
    let file = File::open(path).map_err(|e| PipelineError::io(path, e))?;
    Ok(csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file))
}

/// Reads the header row and checks its first column name.
fn read_header(
    path: &Path,
    records: &mut csv::StringRecordsIter<'_, File>,
    first: &str,
) -> Result<Vec<String>> {
    let header = match records.next() {
        None => return Err(PipelineError::EmptyFile(path.to_path_buf())),
        Some(r) => r.map_err(|e| csv_error(path, e))?,
    };
    let mut fields = header
        .iter()
        .map(|f| f.trim_start_matches('\u{feff}').to_owned());
    match fields.next() {
        Some(f) if f == first => Ok(fields.collect()),
        other => Err(PipelineError::Schema {
            path: path.to_path_buf(),
            line: 1,
            message: format!("first header column must be `{first}`, found {other:?}"),
        }),
    }
}

/// Loads one model's score file. The model id is the file stem.
pub fn load_scores(path: impl AsRef<Path>, format: ScoreFormat) -> Result<ScoreMatrix> {
    let path = path.as_ref();
    match format {
        ScoreFormat::Csv => load_csv(path),
        ScoreFormat::Jsonl => load_jsonl(path),
    }
}

fn load_csv(path: &Path) -> Result<ScoreMatrix> {
    let mut reader = open_csv(path)?;
    let mut records = reader.records();
    let labels = read_header(path, &mut records, "sample_id")?;
    let mut builder = Builder::new(path.to_path_buf(), labels)?;
    for record in records {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        let id = record[0].to_owned();
        let mut row = Vec::with_capacity(record.len().saturating_sub(1));
        for field in record.iter().skip(1) {
            let value: f64 = field.parse().map_err(|_| PipelineError::Schema {
                path: path.to_path_buf(),
                line,
                message: format!("`{field}` is not a number"),
            })?;
            row.push(value);
        }
        builder.push(line, id, row)?;
    }
    builder.finish(model_id_from(path))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonRow {
    sample_id: String,
    scores: Vec<f64>,
}

fn load_jsonl(path: &Path) -> Result<ScoreMatrix> {
    let file = File::open(path).map_err(|e| PipelineError::io(path, e))?;
    let mut builder: Option<Builder> = None;
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| PipelineError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let row: JsonRow = serde_json::from_str(&line).map_err(|e| PipelineError::Schema {
            path: path.to_path_buf(),
            line: i + 1,
            message: e.to_string(),
        })?;
        if builder.is_none() {
            let labels = (0..row.scores.len()).map(|c| format!("c{c}")).collect();
            builder = Some(Builder::new(path.to_path_buf(), labels)?);
        }
        if let Some(b) = builder.as_mut() {
            b.push(i + 1, row.sample_id, row.scores)?;
        }
    }
    builder
        .ok_or_else(|| PipelineError::EmptyFile(path.to_path_buf()))?
        .finish(model_id_from(path))
}

/// Ground-truth class index per sample id.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LabelSet(BTreeMap<String, usize>);

impl LabelSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `false` if the id was already present (the label is kept).
    pub fn insert(&mut self, sample_id: impl Into<String>, label: usize) -> bool {
        use std::collections::btree_map::Entry;
        match self.0.entry(sample_id.into()) {
            Entry::Vacant(v) => {
                v.insert(label);
                true
            }
            Entry::Occupied(_) => false,
        }
    }

    pub fn get(&self, sample_id: &str) -> Option<usize> {
        self.0.get(sample_id).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entries in ascending sample id order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

impl<S: Into<String>> FromIterator<(S, usize)> for LabelSet {
    fn from_iter<I: IntoIterator<Item = (S, usize)>>(iter: I) -> Self {
        let mut set = LabelSet::new();
        for (id, label) in iter {
            set.insert(id, label);
        }
        set
    }
}

/// Loads a `sample_id,label` CSV.
pub fn load_labels(path: impl AsRef<Path>) -> Result<LabelSet> {
    let path = path.as_ref();
    let mut reader = open_csv(path)?;
    let mut records = reader.records();
    let rest = read_header(path, &mut records, "sample_id")?;
    if rest.len() != 1 || rest[0] != "label" {
        return Err(PipelineError::Schema {
            path: path.to_path_buf(),
            line: 1,
            message: "labels header must be `sample_id,label`".into(),
        });
    }
    let mut labels = LabelSet::new();
    for record in records {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != 2 {
            return Err(PipelineError::Schema {
                path: path.to_path_buf(),
                line,
                message: format!("expected 2 fields, found {}", record.len()),
            });
        }
        let label: usize = record[1].parse().map_err(|_| PipelineError::Schema {
            path: path.to_path_buf(),
            line,
            message: format!("`{}` is not a class index", &record[1]),
        })?;
        if !labels.insert(&record[0], label) {
            return Err(PipelineError::DuplicateSampleId {
                path: path.to_path_buf(),
                id: record[0].to_owned(),
            });
        }
    }
    if labels.is_empty() {
        return Err(PipelineError::EmptyFile(path.to_path_buf()));
    }
    Ok(labels)
}
