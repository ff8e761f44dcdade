//! HTRU-2 ingestion, standardization, and seeded stratified splitting.
//!
//! The on-disk format is the published one: comma-separated, nine numeric
//! columns (eight pulse-profile / DM-SNR summary statistics plus a {0,1}
//! label), no header. Split and subsample determinism is guaranteed by this
//! crate, not the source file: rows are keyed by a canonical stable sort over
//! all nine columns before any seeded shuffle, so file row order is
//! irrelevant.
//!
//! The module also carries a synthetic generator producing files with the
//! same schema and class structure, used for tests and for running the full
//! pipeline in environments where the real dataset is not on disk.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::circuits::N_FEATURES;
use crate::error::{Error, Result};

pub const CANONICAL_ROWS: usize = 17_898;
pub const CANONICAL_POSITIVES: usize = 1_639;
pub const CANONICAL_NEGATIVES: usize = 16_259;

#[derive(Debug, Clone, Default)]
pub struct Dataset {
    pub features: Vec<[f64; N_FEATURES]>,
    pub labels: Vec<u8>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_positive(&self) -> usize {
        self.labels.iter().filter(|&&y| y == 1).count()
    }

    pub fn n_negative(&self) -> usize {
        self.len() - self.n_positive()
    }

    fn select(&self, idx: &[usize]) -> Dataset {
        Dataset {
            features: idx.iter().map(|&i| self.features[i]).collect(),
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    /// Rows reordered by a stable lexicographic sort over all nine columns.
    pub fn canonical_sorted(&self) -> Dataset {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| {
            for k in 0..N_FEATURES {
                match self.features[a][k].total_cmp(&self.features[b][k]) {
                    std::cmp::Ordering::Equal => continue,
                    other => return other,
                }
            }
            self.labels[a].cmp(&self.labels[b])
        });
        self.select(&idx)
    }
}

/// Loads the nine-column CSV. When the file carries the canonical 17,898
/// rows, the class counts are validated against the published 1,639 / 16,259
/// distribution.
pub fn load_htru2(path: &Path) -> Result<Dataset> {
    let file = std::fs::File::open(path)?;
    let reader = BufReader::new(file);
    let mut ds = Dataset::default();
    for (row, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        if fields.len() != N_FEATURES + 1 {
            return Err(Error::Format(format!(
                "row {row}: expected {} columns, found {}",
                N_FEATURES + 1,
                fields.len()
            )));
        }
        let mut x = [0.0; N_FEATURES];
        for (k, field) in fields[..N_FEATURES].iter().enumerate() {
            let v: f64 = field.trim().parse().map_err(|_| Error::Parse {
                row,
                msg: format!("column {k}: '{field}' is not numeric"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    row,
                    msg: format!("column {k}: non-finite value"),
                });
            }
            x[k] = v;
        }
        let label_field = fields[N_FEATURES].trim();
        let label: f64 = label_field.parse().map_err(|_| Error::Parse {
            row,
            msg: format!("label '{label_field}' is not numeric"),
        })?;
        let label = if label == 0.0 {
            0u8
        } else if label == 1.0 {
            1u8
        } else {
            return Err(Error::Parse {
                row,
                msg: format!("label must be 0 or 1, got {label}"),
            });
        };
        ds.features.push(x);
        ds.labels.push(label);
    }

    if ds.len() == CANONICAL_ROWS {
        let pos = ds.n_positive();
        if pos != CANONICAL_POSITIVES {
            return Err(Error::Data(format!(
                "canonical-size file has {pos} positives, expected {CANONICAL_POSITIVES}"
            )));
        }
    }
    Ok(ds)
}

fn class_indices(ds: &Dataset) -> (Vec<usize>, Vec<usize>) {
    let mut neg = Vec::new();
    let mut pos = Vec::new();
    for (i, &y) in ds.labels.iter().enumerate() {
        if y == 1 {
            pos.push(i);
        } else {
            neg.push(i);
        }
    }
    (neg, pos)
}

/// Seeded stratified split; per-class test counts are
/// round(fraction × class size).
pub fn stratified_split(ds: &Dataset, test_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::Config(format!(
            "test_fraction must lie in (0,1), got {test_fraction}"
        )));
    }
    let sorted = ds.canonical_sorted();
    let (neg, pos) = class_indices(&sorted);
    if neg.is_empty() || pos.is_empty() {
        return Err(Error::Data("both classes are required for a stratified split".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train_idx = Vec::new();
    let mut test_idx = Vec::new();
    for class in [neg, pos] {
        let n_test = ((class.len() as f64) * test_fraction).round() as usize;
        if n_test == 0 || n_test >= class.len() {
            return Err(Error::Data(format!(
                "class with {} rows is too small for fraction {test_fraction}",
                class.len()
            )));
        }
        let mut shuffled = class;
        shuffled.shuffle(&mut rng);
        test_idx.extend_from_slice(&shuffled[..n_test]);
        train_idx.extend_from_slice(&shuffled[n_test..]);
    }
    train_idx.sort_unstable();
    test_idx.sort_unstable();
    Ok((sorted.select(&train_idx), sorted.select(&test_idx)))
}

/// Seeded stratified subsample of exactly `n` rows; per-class counts are
/// round(n × class fraction) with any off-by-one absorbed by the majority
/// class.
pub fn stratified_subsample(ds: &Dataset, n: usize, seed: u64) -> Result<Dataset> {
    if n == 0 || n > ds.len() {
        return Err(Error::Data(format!(
            "cannot draw {n} rows from {} available",
            ds.len()
        )));
    }
    let sorted = ds.canonical_sorted();
    let (neg, pos) = class_indices(&sorted);
    let pos_fraction = pos.len() as f64 / sorted.len() as f64;
    let mut n_pos = ((n as f64) * pos_fraction).round() as usize;
    let mut n_neg = n.saturating_sub(n_pos);
    // rounding can leave the total off by one; fix it on the larger class
    let total = n_pos + n_neg;
    if total != n {
        let delta = n as i64 - total as i64;
        if neg.len() >= pos.len() {
            n_neg = (n_neg as i64 + delta) as usize;
        } else {
            n_pos = (n_pos as i64 + delta) as usize;
        }
    }
    if n_pos > pos.len() || n_neg > neg.len() {
        return Err(Error::Data(format!(
            "subsample needs {n_pos} positives / {n_neg} negatives, have {} / {}",
            pos.len(),
            neg.len()
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keep = Vec::with_capacity(n);
    for (class, count) in [(neg, n_neg), (pos, n_pos)] {
        let mut shuffled = class;
        shuffled.shuffle(&mut rng);
        keep.extend_from_slice(&shuffled[..count]);
    }
    keep.sort_unstable();
    Ok(sorted.select(&keep))
}

/// Column-wise (x − μ)/σ with population σ, fitted on training data only.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    pub mean: [f64; N_FEATURES],
    pub std: [f64; N_FEATURES],
}

impl Standardizer {
    pub fn fit(features: &[[f64; N_FEATURES]]) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::Data("cannot fit a standardizer on no rows".into()));
        }
        let n = features.len() as f64;
        let mut mean = [0.0; N_FEATURES];
        for row in features {
            for (m, v) in mean.iter_mut().zip(row) {
                *m += v / n;
            }
        }
        let mut var = [0.0; N_FEATURES];
        for row in features {
            for k in 0..N_FEATURES {
                let d = row[k] - mean[k];
                var[k] += d * d / n;
            }
        }
        let mut std = [0.0; N_FEATURES];
        for k in 0..N_FEATURES {
            if var[k] == 0.0 {
                return Err(Error::Data(format!("feature column {k} has zero variance")));
            }
            std[k] = var[k].sqrt();
        }
        Ok(Self { mean, std })
    }

    pub fn apply(&self, features: &[[f64; N_FEATURES]]) -> Vec<[f64; N_FEATURES]> {
        features
            .iter()
            .map(|row| {
                let mut out = [0.0; N_FEATURES];
                for k in 0..N_FEATURES {
                    out[k] = (row[k] - self.mean[k]) / self.std[k];
                }
                out
            })
            .collect()
    }
}

/// One Gaussian component of a class-conditional mixture.
struct MixtureComponent {
    weight: f64,
    mean: [f64; N_FEATURES],
    sd: [f64; N_FEATURES],
}

/// Shared per-feature spread; every component uses it, so the optimal
/// decision boundary is linear in the features and the mixture positions
/// along the class axis alone shape the score distributions.
const FEATURE_SD: [f64; N_FEATURES] = [16.0, 6.2, 0.36, 0.75, 14.0, 14.5, 3.2, 92.0];

/// Noise-bulk center and the pulsar-minus-noise class axis. All component
/// means below sit on the line μ0 + t·Δ.
const NOISE_MEAN: [f64; N_FEATURES] = [116.0, 47.0, 0.22, 0.35, 9.5, 24.0, 8.9, 112.0];
const CLASS_AXIS: [f64; N_FEATURES] = [
    -28.2496, -7.29771, 0.7627284, 2.11869, 23.07018, 20.48067, -3.76656, -86.63088,
];

const fn on_axis(t: f64) -> [f64; N_FEATURES] {
    let mut out = [0.0; N_FEATURES];
    let mut k = 0;
    while k < N_FEATURES {
        out[k] = NOISE_MEAN[k] + t * CLASS_AXIS[k];
        k += 1;
    }
    out
}

/// Non-pulsar mixture: the noise bulk plus a small interference-like
/// population partway up the class axis.
const NEGATIVE_MIX: &[MixtureComponent] = &[
    MixtureComponent { weight: 0.988, mean: on_axis(0.0), sd: FEATURE_SD },
    MixtureComponent { weight: 0.012, mean: on_axis(0.55), sd: FEATURE_SD },
];

/// Pulsar mixture: a clean bulk at the far end of the axis, a moderate
/// shoulder, and a small population buried in the noise.
const POSITIVE_MIX: &[MixtureComponent] = &[
    MixtureComponent { weight: 0.855, mean: on_axis(1.0), sd: FEATURE_SD },
    MixtureComponent { weight: 0.100, mean: on_axis(0.5), sd: FEATURE_SD },
    MixtureComponent { weight: 0.045, mean: on_axis(0.05), sd: FEATURE_SD },
];

fn sample_row(mix: &[MixtureComponent], rng: &mut ChaCha8Rng) -> [f64; N_FEATURES] {
    let draw: f64 = rng.random();
    let mut acc = 0.0;
    let mut chosen = &mix[mix.len() - 1];
    for component in mix {
        acc += component.weight;
        if draw < acc {
            chosen = component;
            break;
        }
    }
    let mut x = [0.0; N_FEATURES];
    for k in 0..N_FEATURES {
        let normal = Normal::new(chosen.mean[k], chosen.sd[k]).expect("finite parameters");
        x[k] = normal.sample(rng);
    }
    x
}

/// Draws a synthetic dataset with the HTRU-2 schema: `n_neg` non-pulsars
/// followed by `n_pos` pulsars, deterministic per seed.
pub fn generate_synthetic(n_neg: usize, n_pos: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ds = Dataset::default();
    for _ in 0..n_neg {
        ds.features.push(sample_row(NEGATIVE_MIX, &mut rng));
        ds.labels.push(0);
    }
    for _ in 0..n_pos {
        ds.features.push(sample_row(POSITIVE_MIX, &mut rng));
        ds.labels.push(1);
    }
    ds
}

/// Fixed seed for the full-size synthetic stand-in so every run sees the
/// same file.
pub const SYNTHETIC_CANONICAL_SEED: u64 = 0x4854_5255;

/// Synthetic dataset with the canonical 1,639 / 16,259 class counts.
pub fn generate_synthetic_canonical() -> Dataset {
    generate_synthetic(
        CANONICAL_NEGATIVES,
        CANONICAL_POSITIVES,
        SYNTHETIC_CANONICAL_SEED,
    )
}

pub fn write_csv(ds: &Dataset, path: &Path) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    for (x, y) in ds.features.iter().zip(&ds.labels) {
        for v in x {
            write!(out, "{v:.6},")?;
        }
        writeln!(out, "{y}")?;
    }
    out.flush()?;
    Ok(())
}

/// Writes a small synthetic file (~9.2% positives) with the HTRU-2 schema.
pub fn write_fixture(path: &Path, rows: usize, seed: u64) -> Result<Dataset> {
    if rows < 20 {
        return Err(Error::Config(format!("fixture needs at least 20 rows, got {rows}")));
    }
    let n_pos = ((rows as f64) * (CANONICAL_POSITIVES as f64 / CANONICAL_ROWS as f64)).round()
        as usize;
    let ds = generate_synthetic(rows - n_pos, n_pos, seed);
    write_csv(&ds, path)?;
    Ok(ds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tiny_csv(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
        let path = dir.join(name);
        std::fs::write(&path, body).unwrap();
        path
    }

    #[test]
    fn load_fixture_rows_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = tiny_csv(
            dir.path(),
            "three.csv",
            "1,2,3,4,5,6,7,8,0\n9,8,7,6,5,4,3,2,1\n0.5,0.5,0.5,0.5,0.5,0.5,0.5,0.5,0\n",
        );
        let ds = load_htru2(&path).unwrap();
        assert_eq!(ds.len(), 3);
        assert_eq!(ds.n_positive(), 1);
        assert_eq!(ds.features[0][0], 1.0);
        assert_eq!(ds.features[2][7], 0.5);
    }

    #[test]
    fn load_rejects_bad_files() {
        let dir = tempfile::tempdir().unwrap();

        let short = tiny_csv(dir.path(), "short.csv", "1,2,3,4,5,6,7,0\n");
        assert!(matches!(load_htru2(&short), Err(Error::Format(_))));

        let text = tiny_csv(dir.path(), "text.csv", "1,2,3,4,x,6,7,8,0\n");
        match load_htru2(&text) {
            Err(Error::Parse { row, .. }) => assert_eq!(row, 0),
            other => panic!("expected parse error, got {other:?}"),
        }

        let label = tiny_csv(dir.path(), "label.csv", "1,2,3,4,5,6,7,8,2\n");
        assert!(matches!(load_htru2(&label), Err(Error::Parse { .. })));
    }

    #[test]
    fn canonical_size_validates_class_counts() {
        let dir = tempfile::tempdir().unwrap();
        let mut body = String::new();
        for i in 0..CANONICAL_ROWS {
            let y = u8::from(i < 10); // wrong positive count on purpose
            body.push_str(&format!("{i},1,1,1,1,1,1,1,{y}\n"));
        }
        let path = tiny_csv(dir.path(), "wrong.csv", &body);
        assert!(matches!(load_htru2(&path), Err(Error::Data(_))));
    }

    #[test]
    fn split_counts_and_determinism() {
        let ds = generate_synthetic(180, 20, 3);
        let (train, test) = stratified_split(&ds, 0.2, 11).unwrap();
        assert_eq!(test.n_positive(), 4);
        assert_eq!(test.n_negative(), 36);
        assert_eq!(train.len() + test.len(), ds.len());

        let (train2, test2) = stratified_split(&ds, 0.2, 11).unwrap();
        assert_eq!(train.features, train2.features);
        assert_eq!(test.features, test2.features);

        let (_, test3) = stratified_split(&ds, 0.2, 12).unwrap();
        assert_ne!(test.features, test3.features);
    }

    #[test]
    fn split_is_independent_of_row_order() {
        let ds = generate_synthetic(60, 12, 5);
        let mut reversed = Dataset::default();
        for i in (0..ds.len()).rev() {
            reversed.features.push(ds.features[i]);
            reversed.labels.push(ds.labels[i]);
        }
        let (train_a, test_a) = stratified_split(&ds, 0.25, 7).unwrap();
        let (train_b, test_b) = stratified_split(&reversed, 0.25, 7).unwrap();
        assert_eq!(train_a.features, train_b.features);
        assert_eq!(test_a.features, test_b.features);
    }

    #[test]
    fn split_partitions_without_overlap() {
        let ds = generate_synthetic(90, 10, 2);
        let (train, test) = stratified_split(&ds, 0.2, 0).unwrap();
        let mut all: Vec<_> = train
            .features
            .iter()
            .chain(test.features.iter())
            .map(|x| x.map(f64::to_bits))
            .collect();
        all.sort_unstable();
        let mut original: Vec<_> = ds.features.iter().map(|x| x.map(f64::to_bits)).collect();
        original.sort_unstable();
        assert_eq!(all, original);
    }

    #[test]
    fn subsample_counts() {
        // 9.156% positive parent ratio
        let ds = generate_synthetic(13_007, 1_311, 1);
        let sub = stratified_subsample(&ds, 1_000, 0).unwrap();
        assert_eq!(sub.len(), 1_000);
        assert_eq!(sub.n_positive(), 92);
        assert_eq!(sub.n_negative(), 908);

        // identity case keeps every row
        let small = generate_synthetic(50, 10, 4);
        let all = stratified_subsample(&small, 60, 9).unwrap();
        assert_eq!(all.len(), 60);
        assert_eq!(all.n_positive(), 10);

        // ratio within one sample of the parent ratio at n = 200
        let sub = stratified_subsample(&ds, 200, 5).unwrap();
        let parent = 1_311.0 / 14_318.0;
        let got = sub.n_positive() as f64 / 200.0;
        assert!((got - parent).abs() <= 1.0 / 200.0 + 1e-12);

        assert!(stratified_subsample(&small, 61, 0).is_err());
    }

    #[test]
    fn standardizer_examples() {
        let ds = generate_synthetic(40, 10, 8);
        let std = Standardizer::fit(&ds.features).unwrap();
        let out = std.apply(&ds.features);
        for k in 0..N_FEATURES {
            let n = out.len() as f64;
            let mean: f64 = out.iter().map(|r| r[k]).sum::<f64>() / n;
            let var: f64 = out.iter().map(|r| (r[k] - mean) * (r[k] - mean)).sum::<f64>() / n;
            assert_abs_diff_eq!(mean, 0.0, epsilon = 1e-10);
            assert_abs_diff_eq!(var, 1.0, epsilon = 1e-10);
        }

        // train statistics applied to a fresh row stay finite
        let row = [[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]];
        let mapped = std.apply(&row);
        assert!(mapped[0].iter().all(|v| v.is_finite()));

        let constant = vec![[1.0; N_FEATURES]; 5];
        assert!(matches!(Standardizer::fit(&constant), Err(Error::Data(_))));
    }

    #[test]
    fn fixture_has_schema_and_ratio() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("fixture.csv");
        let ds = write_fixture(&path, 200, 7).unwrap();
        assert_eq!(ds.len(), 200);
        assert_eq!(ds.n_positive(), 18);

        let loaded = load_htru2(&path).unwrap();
        assert_eq!(loaded.len(), 200);
        assert_eq!(loaded.n_positive(), 18);
    }

    #[test]
    fn synthetic_canonical_counts() {
        // full generation is cheap enough to assert the exact bookkeeping
        let ds = generate_synthetic_canonical();
        assert_eq!(ds.len(), CANONICAL_ROWS);
        assert_eq!(ds.n_positive(), CANONICAL_POSITIVES);
        assert_eq!(ds.n_negative(), CANONICAL_NEGATIVES);
    }
}
