//! Datasets: the four synthetic 2-feature families, Iris ingestion, angle
//! scaling and the dataset CSV format (`f1,...,fn,label`).

use std::collections::HashSet;
use std::f64::consts::PI;
use std::fmt;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::seeded;

/// Location of the bundled 150-row Iris table.
pub fn bundled_iris_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join("iris.csv")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SyntheticFamily {
    #[serde(rename = "R1_sq")]
    R1Sq,
    #[serde(rename = "P1_sq")]
    P1Sq,
    #[serde(rename = "R2_sq")]
    R2Sq,
    #[serde(rename = "P2_sq")]
    P2Sq,
}

impl SyntheticFamily {
    pub const ALL: [SyntheticFamily; 4] = [
        SyntheticFamily::R1Sq,
        SyntheticFamily::P1Sq,
        SyntheticFamily::R2Sq,
        SyntheticFamily::P2Sq,
    ];

    pub fn n_classes(self) -> usize {
        match self {
            SyntheticFamily::R1Sq | SyntheticFamily::P1Sq => 2,
            SyntheticFamily::R2Sq | SyntheticFamily::P2Sq => 3,
        }
    }

    /// 90 per class for the 2-class families, 60 for the 3-class ones
    /// (180 samples either way).
    pub fn default_samples_per_class(self) -> usize {
        180 / self.n_classes()
    }

    /// Class of the point (x, y) ∈ [-1, 1]².
    ///
    /// * R1_sq: disc r < 0.6 vs. the rest.
    /// * R2_sq: r < 0.45, 0.45 ≤ r < 0.8, r ≥ 0.8.
    /// * P1_sq: quadrants I/III vs. II/IV.
    /// * P2_sq: three equal pie slices of φ = atan2(y, x).
    pub fn region(self, x: f64, y: f64) -> usize {
        let r = x.hypot(y);
        match self {
            SyntheticFamily::R1Sq => usize::from(r >= 0.6),
            SyntheticFamily::R2Sq => {
                if r < 0.45 {
                    0
                } else if r < 0.8 {
                    1
                } else {
                    2
                }
            }
            SyntheticFamily::P1Sq => usize::from(x * y < 0.0),
            SyntheticFamily::P2Sq => {
                let phi = y.atan2(x);
                ((3.0 * (phi + PI) / (2.0 * PI)).floor() as usize).min(2)
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SyntheticFamily::R1Sq => "R1_sq",
            SyntheticFamily::P1Sq => "P1_sq",
            SyntheticFamily::R2Sq => "R2_sq",
            SyntheticFamily::P2Sq => "P2_sq",
        }
    }
}

impl fmt::Display for SyntheticFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SyntheticFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SyntheticFamily::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::Dataset(format!(
                    "unknown family {s:?} (expected one of R1_sq, P1_sq, R2_sq, P2_sq)"
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub family: SyntheticFamily,
    pub samples_per_class: usize,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn new(family: SyntheticFamily, samples_per_class: usize, seed: u64) -> Self {
        SyntheticSpec {
            family,
            samples_per_class,
            seed,
        }
    }

    /// Default 180-sample balanced spec for `family`.
    pub fn standard(family: SyntheticFamily, seed: u64) -> Self {
        Self::new(family, family.default_samples_per_class(), seed)
    }
}

/// Maps `[src_min, src_max]` affinely onto `[dst_min, dst_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    pub src_min: f64,
    pub src_max: f64,
    pub dst_min: f64,
    pub dst_max: f64,
}

impl AffineMap {
    pub fn apply(&self, v: f64) -> f64 {
        self.dst_min + (v - self.src_min) * (self.dst_max - self.dst_min) / (self.src_max - self.src_min)
    }

    pub fn invert(&self, v: f64) -> f64 {
        self.src_min + (v - self.dst_min) * (self.src_max - self.src_min) / (self.dst_max - self.dst_min)
    }
}

/// Per-feature affine scaling, fitted on training data and reused at inference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureScaling {
    pub maps: Vec<AffineMap>,
}

impl FeatureScaling {
    pub fn apply(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.maps.len() {
            return Err(Error::length("feature row", self.maps.len(), row.len()));
        }
        Ok(row.iter().zip(&self.maps).map(|(v, m)| m.apply(*v)).collect())
    }

    pub fn invert(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.maps.len() {
            return Err(Error::length("feature row", self.maps.len(), row.len()));
        }
        Ok(row.iter().zip(&self.maps).map(|(v, m)| m.invert(*v)).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AngleRange {
    /// [0, 2π]
    ZeroToTwoPi,
    /// [-π, π]
    MinusPiToPi,
}

impl AngleRange {
    pub fn bounds(self) -> (f64, f64) {
        match self {
            AngleRange::ZeroToTwoPi => (0.0, 2.0 * PI),
            AngleRange::MinusPiToPi => (-PI, PI),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub n_classes: usize,
    /// Scaling already applied to `features`, if any.
    #[serde(default)]
    pub scaling: Option<FeatureScaling>,
    /// Known value range of the raw features (e.g. [-1, 1] for synthetic data).
    #[serde(default)]
    pub domain: Option<(f64, f64)>,
}

impl Dataset {
    pub fn new(features: Vec<Vec<f64>>, labels: Vec<usize>, n_classes: usize) -> Result<Self> {
        let ds = Dataset {
            features,
            labels,
            n_classes,
            scaling: None,
            domain: None,
        };
        ds.validate()?;
        Ok(ds)
    }

    pub fn validate(&self) -> Result<()> {
        if self.features.is_empty() {
            return Err(Error::Dataset("no samples".into()));
        }
        if self.features.len() != self.labels.len() {
            return Err(Error::length("labels", self.features.len(), self.labels.len()));
        }
        let width = self.features[0].len();
        if width == 0 {
            return Err(Error::Dataset("no features".into()));
        }
        for row in &self.features {
            if row.len() != width {
                return Err(Error::length("feature row", width, row.len()));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::Dataset("non-finite feature value".into()));
            }
        }
        for &l in &self.labels {
            if l >= self.n_classes {
                return Err(Error::Label {
                    label: l,
                    n_classes: self.n_classes,
                });
            }
        }
        if let Some(empty) = self.class_counts().iter().position(|&c| c == 0) {
            return Err(Error::Dataset(format!("class {empty} has no samples")));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.features.first().map_or(0, Vec::len)
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_classes];
        for &l in &self.labels {
            if l < self.n_classes {
                counts[l] += 1;
            }
        }
        counts
    }

    /// Fraction of the most common class.
    pub fn majority_fraction(&self) -> f64 {
        *self.class_counts().iter().max().unwrap_or(&0) as f64 / self.len() as f64
    }

    /// Applies an already-fitted scaling (e.g. training statistics on a test set).
    pub fn with_scaling(&self, scaling: &FeatureScaling) -> Result<Dataset> {
        if self.scaling.is_some() {
            return Err(Error::Dataset("dataset is already scaled".into()));
        }
        let features = self
            .features
            .iter()
            .map(|r| scaling.apply(r))
            .collect::<Result<_>>()?;
        Ok(Dataset {
            features,
            labels: self.labels.clone(),
            n_classes: self.n_classes,
            scaling: Some(scaling.clone()),
            domain: self.domain,
        })
    }

    /// Undoes the recorded scaling.
    pub fn unscaled(&self) -> Result<Dataset> {
        let Some(scaling) = &self.scaling else {
            return Ok(self.clone());
        };
        let features = self
            .features
            .iter()
            .map(|r| scaling.invert(r))
            .collect::<Result<_>>()?;
        Ok(Dataset {
            features,
            labels: self.labels.clone(),
            n_classes: self.n_classes,
            scaling: None,
            domain: self.domain,
        })
    }
}

/// Fits a scaling onto `target`. Features with a declared domain map that
/// domain onto the target; otherwise the per-feature min/max is used.
pub fn fit_scaling(dataset: &Dataset, target: AngleRange) -> Result<FeatureScaling> {
    let (dst_min, dst_max) = target.bounds();
    let maps = (0..dataset.n_features())
        .map(|j| {
            let (src_min, src_max) = match (target, dataset.domain) {
                (AngleRange::MinusPiToPi, Some(domain)) => domain,
                _ => dataset.features.iter().map(|r| r[j]).fold(
                    (f64::INFINITY, f64::NEG_INFINITY),
                    |(lo, hi), v| (lo.min(v), hi.max(v)),
                ),
            };
            if src_max.is_nan() || src_min.is_nan() || src_max <= src_min {
                return Err(Error::ConstantFeature(j));
            }
            Ok(AffineMap {
                src_min,
                src_max,
                dst_min,
                dst_max,
            })
        })
        .collect::<Result<_>>()?;
    Ok(FeatureScaling { maps })
}

/// Scales raw features into an angle range: min-max for [0, 2π], and for
/// [-π, π] the declared domain when present (synthetic data: multiply by π).
pub fn scale_features(dataset: &Dataset, target: AngleRange) -> Result<Dataset> {
    let scaling = fit_scaling(dataset, target)?;
    dataset.with_scaling(&scaling)
}

fn rejection_sample(
    spec: &SyntheticSpec,
    stream: u64,
    exclude: &HashSet<(u64, u64)>,
) -> Result<Dataset> {
    if spec.samples_per_class == 0 {
        return Err(Error::Dataset("samples_per_class must be at least 1".into()));
    }
    let n_classes = spec.family.n_classes();
    let mut rng = seeded(spec.seed, stream);
    let mut counts = vec![0usize; n_classes];
    let total = n_classes * spec.samples_per_class;
    let mut features = Vec::with_capacity(total);
    let mut labels = Vec::with_capacity(total);
    while features.len() < total {
        let x: f64 = rng.random_range(-1.0..=1.0);
        let y: f64 = rng.random_range(-1.0..=1.0);
        let class = spec.family.region(x, y);
        if counts[class] < spec.samples_per_class && !exclude.contains(&(x.to_bits(), y.to_bits())) {
            counts[class] += 1;
            features.push(vec![x, y]);
            labels.push(class);
        }
    }
    let mut ds = Dataset::new(features, labels, n_classes)?;
    ds.domain = Some((-1.0, 1.0));
    Ok(ds)
}

/// Balanced dataset drawn uniformly from [-1, 1]² by rejection sampling.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<Dataset> {
    rejection_sample(spec, 0, &HashSet::new())
}

/// Training set (identical to [`generate_synthetic`]) plus a disjoint test set of
/// the same size drawn from an independent stream.
pub fn train_test_split(spec: &SyntheticSpec) -> Result<(Dataset, Dataset)> {
    let train = generate_synthetic(spec)?;
    let seen: HashSet<(u64, u64)> = train
        .features
        .iter()
        .map(|r| (r[0].to_bits(), r[1].to_bits()))
        .collect();
    let test = rejection_sample(spec, 1, &seen)?;
    Ok((train, test))
}

/// Reads a table with four numeric columns and a class-name column. Labels are
/// numbered by first appearance; a header row is skipped when present.
pub fn load_iris(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(file);
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut names: Vec<String> = Vec::new();
    let mut features = Vec::new();
    let mut labels = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let line = i + 1;
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != 5 {
            return Err(parse_err(line, format!("expected 5 columns, found {}", record.len())));
        }
        let values: std::result::Result<Vec<f64>, _> =
            record.iter().take(4).map(f64::from_str).collect();
        let values = match values {
            Ok(v) => v,
            Err(_) if i == 0 => continue,
            Err(e) => return Err(parse_err(line, format!("bad number: {e}"))),
        };
        let name = record[4].to_string();
        let label = match names.iter().position(|n| *n == name) {
            Some(l) => l,
            None if names.len() < 3 => {
                names.push(name);
                names.len() - 1
            }
            None => {
                return Err(parse_err(
                    line,
                    format!("unknown label {name:?}: already saw {names:?}"),
                ))
            }
        };
        features.push(values);
        labels.push(label);
    }
    if features.is_empty() {
        return Err(Error::Dataset(format!("{}: no data rows", path.display())));
    }
    Dataset::new(features, labels, 3)
}

/// Writes `f1,...,fn,label` with full-precision floats.
pub fn write_dataset_csv(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    let header: Vec<String> = (1..=dataset.n_features()).map(|j| format!("f{j}")).collect();
    out.push_str(&header.join(","));
    out.push_str(",label\n");
    for (row, label) in dataset.features.iter().zip(&dataset.labels) {
        for v in row {
            out.push_str(&format!("{v:.16e},"));
        }
        out.push_str(&format!("{label}\n"));
    }
    let mut f = File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(out.as_bytes()).map_err(|e| Error::io(path, e))
}

/// Reads the `f1,...,fn,label` format; the class count is `max(label) + 1`.
pub fn read_dataset_csv(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let width = reader.headers()?.len();
    if width < 2 {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            msg: "need at least one feature column and a label column".into(),
        });
    }
    let mut features = Vec::new();
    let mut labels = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let bad = |msg: String| Error::Parse {
            path: path.to_path_buf(),
            line: i + 2,
            msg,
        };
        let row = record
            .iter()
            .take(width - 1)
            .map(|v| v.parse::<f64>().map_err(|e| bad(format!("bad number {v:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let label = record[width - 1]
            .parse::<usize>()
            .map_err(|e| bad(format!("bad label: {e}")))?;
        features.push(row);
        labels.push(label);
    }
    let n_classes = labels.iter().max().map_or(0, |m| m + 1);
    Dataset::new(features, labels, n_classes)
}

/// Where an experiment's data comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DatasetSource {
    Synthetic(SyntheticSpec),
    Iris { path: PathBuf },
}

/// Scaled data ready for training: synthetic features are multiplied by π,
/// Iris is min-max scaled to [0, 2π]. Iris has no test split.
#[derive(Debug, Clone)]
pub struct PreparedData {
    pub train: Dataset,
    pub test: Option<Dataset>,
    pub scaling: FeatureScaling,
}

impl DatasetSource {
    pub fn prepare(&self) -> Result<PreparedData> {
        match self {
            DatasetSource::Synthetic(spec) => {
                let (train, test) = train_test_split(spec)?;
                let scaling = fit_scaling(&train, AngleRange::MinusPiToPi)?;
                Ok(PreparedData {
                    train: train.with_scaling(&scaling)?,
                    test: Some(test.with_scaling(&scaling)?),
                    scaling,
                })
            }
            DatasetSource::Iris { path } => {
                let raw = load_iris(path)?;
                let scaling = fit_scaling(&raw, AngleRange::ZeroToTwoPi)?;
                Ok(PreparedData {
                    train: raw.with_scaling(&scaling)?,
                    test: None,
                    scaling,
                })
            }
        }
    }

    /// Short name used in file names and reports.
    pub fn label(&self) -> String {
        match self {
            DatasetSource::Synthetic(spec) => spec.family.to_string(),
            DatasetSource::Iris { .. } => "iris".into(),
        }
    }
}
