//! Empirical spectral measures: eigenvalue computation (dense and structured
//! fast path), moments, histograms, and spacing statistics.

mod blockdft;
mod jacobi;

use crate::ensemble::EnsembleSpec;
use crate::error::{Error, Result};
use crate::exec;
use crate::matrix::SymmetricMatrix;

/// Empirical spectral measure of one matrix: the N eigenvalues normalized by
/// √N, sorted ascending. Places mass 1/N at each value.
#[derive(Debug, Clone)]
pub struct SpectralMeasure {
    dim: usize,
    values: Vec<f64>,
}

impl SpectralMeasure {
    pub fn from_eigenvalues(dim: usize, mut raw: Vec<f64>) -> Self {
        let scale = (dim as f64).sqrt();
        for v in &mut raw {
            *v /= scale;
        }
        raw.sort_by(|a, b| a.partial_cmp(b).unwrap());
        SpectralMeasure { dim, values: raw }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sorted normalized eigenvalues λ_i/√N.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// n-th empirical moment (1/N) Σ (λ_i/√N)^n.
    pub fn empirical_moment(&self, n: usize) -> f64 {
        self.values.iter().map(|v| v.powi(n as i32)).sum::<f64>() / self.dim as f64
    }
}

/// All eigenvalues by cyclic Jacobi. Symmetry of the input is guaranteed by
/// the `SymmetricMatrix` type (non-symmetric buffers are rejected at
/// construction).
pub fn eigs_dense(mat: &SymmetricMatrix) -> Result<SpectralMeasure> {
    let n = mat.dim();
    let vals = jacobi::symmetric_eigenvalues(mat.entries().to_vec(), n)?;
    Ok(SpectralMeasure::from_eigenvalues(n, vals))
}

/// All eigenvalues through the block DFT decomposition; requires a circulant
/// kind. Matches `eigs_dense` to solver accuracy at a fraction of the cost.
pub fn eigs_block_circulant(
    spec: &EnsembleSpec,
    mat: &SymmetricMatrix,
) -> Result<SpectralMeasure> {
    let vals = blockdft::eigenvalues(spec, mat)?;
    Ok(SpectralMeasure::from_eigenvalues(spec.dim, vals))
}

/// Spectra of `trials` independent sample matrices, using the structured
/// fast path for circulant kinds and dense Jacobi otherwise. Trials run in
/// parallel with independent rng streams.
pub fn sample_spectra(spec: &EnsembleSpec, trials: u64) -> Result<Vec<SpectralMeasure>> {
    spec.validate()?;
    let fast = spec.kind.is_circulant();
    let results = exec::map_collect(trials as usize, |t| -> Result<SpectralMeasure> {
        let mat = spec.build_matrix_trial(t as u64)?;
        if fast {
            eigs_block_circulant(spec, &mat)
        } else {
            eigs_dense(&mat)
        }
    });
    results.into_iter().collect()
}

/// Average empirical moments over a set of measures, one entry per requested
/// order.
pub fn average_moments(measures: &[SpectralMeasure], orders: &[usize]) -> Vec<f64> {
    orders
        .iter()
        .map(|&k| {
            measures.iter().map(|s| s.empirical_moment(k)).sum::<f64>() / measures.len() as f64
        })
        .collect()
}

/// Normalized histogram: total mass of in-range samples is 1, so bin values
/// are in density units.
#[derive(Debug, Clone)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub densities: Vec<f64>,
    /// Samples that fell inside [lo, hi].
    pub count: usize,
}

impl Histogram {
    pub fn bins(&self) -> usize {
        self.densities.len()
    }

    pub fn bin_width(&self) -> f64 {
        (self.hi - self.lo) / self.bins() as f64
    }

    pub fn center(&self, b: usize) -> f64 {
        self.lo + (b as f64 + 0.5) * self.bin_width()
    }
}

pub fn histogram(values: &[f64], bins: usize, range: (f64, f64)) -> Result<Histogram> {
    if bins == 0 {
        return Err(Error::config("histogram needs at least one bin"));
    }
    if !(range.1 > range.0) {
        return Err(Error::config("histogram range must be non-empty"));
    }
    if values.is_empty() {
        return Err(Error::config("histogram of an empty sample"));
    }
    let (lo, hi) = range;
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0u64; bins];
    let mut inside = 0usize;
    for &v in values {
        if v < lo || v > hi {
            continue;
        }
        let b = (((v - lo) / width) as usize).min(bins - 1);
        counts[b] += 1;
        inside += 1;
    }
    if inside == 0 {
        return Err(Error::config("no samples inside histogram range"));
    }
    let norm = inside as f64 * width;
    Ok(Histogram {
        lo,
        hi,
        densities: counts.iter().map(|&c| c as f64 / norm).collect(),
        count: inside,
    })
}

/// Scale-aware tolerance under which two adjacent eigenvalues are treated as
/// a multiplicity pair rather than a spacing.
pub fn default_dedup_tol(dim: usize) -> f64 {
    1e-8 * (dim as f64).sqrt()
}

/// Consecutive spacings of the central eigenvalues, rescaled to mean 1.
#[derive(Debug, Clone)]
pub struct SpacingSample {
    /// Retained (non-degenerate) spacings, rescaled to mean 1.
    pub spacings: Vec<f64>,
    /// Spacings below the dedup tolerance (multiplicity pairs).
    pub zero_count: usize,
    /// Mean of the retained spacings before rescaling.
    pub raw_mean: f64,
}

impl SpacingSample {
    /// Fraction of spacings that collapsed to (near-)zero.
    pub fn zero_fraction(&self) -> f64 {
        let total = self.zero_count + self.spacings.len();
        if total == 0 {
            0.0
        } else {
            self.zero_count as f64 / total as f64
        }
    }
}

/// Spacings of the `count` eigenvalues nearest the spectral median (by rank).
pub fn central_spacings(
    measure: &SpectralMeasure,
    count: usize,
    dedup_tol: f64,
) -> Result<SpacingSample> {
    if count < 2 {
        return Err(Error::config("need at least 2 central eigenvalues"));
    }
    if count > measure.dim() {
        return Err(Error::config("central window exceeds spectrum size"));
    }
    let v = measure.values();
    let start = (v.len() - count) / 2;
    let window = &v[start..start + count];
    let mut retained = Vec::with_capacity(count - 1);
    let mut zero_count = 0usize;
    for pair in window.windows(2) {
        let gap = pair[1] - pair[0];
        if gap < dedup_tol {
            zero_count += 1;
        } else {
            retained.push(gap);
        }
    }
    Ok(normalize_spacings(retained, zero_count))
}

fn normalize_spacings(raw: Vec<f64>, zero_count: usize) -> SpacingSample {
    if raw.is_empty() {
        return SpacingSample {
            spacings: raw,
            zero_count,
            raw_mean: 0.0,
        };
    }
    let raw_mean = raw.iter().sum::<f64>() / raw.len() as f64;
    SpacingSample {
        spacings: raw.iter().map(|s| s / raw_mean).collect(),
        zero_count,
        raw_mean,
    }
}

/// Pool several spacing samples: recombine the raw spacings and rescale the
/// pooled collection to mean 1.
pub fn pool_spacings(samples: &[SpacingSample]) -> SpacingSample {
    let mut raw = Vec::new();
    let mut zero_count = 0usize;
    for s in samples {
        raw.extend(s.spacings.iter().map(|v| v * s.raw_mean));
        zero_count += s.zero_count;
    }
    normalize_spacings(raw, zero_count)
}

/// Comparison curves for the spacing figures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpacingRef {
    /// e^{-s}: Poissonian spacings.
    Exponential,
    /// GOE Wigner surmise (π s / 2) exp(-π s² / 4).
    GoeSurmise,
}

pub fn reference_spacing_density(kind: SpacingRef, s: f64) -> Result<f64> {
    if s < 0.0 {
        return Err(Error::config("spacing density evaluated at s < 0"));
    }
    Ok(match kind {
        SpacingRef::Exponential => (-s).exp(),
        SpacingRef::GoeSurmise => {
            let pi = std::f64::consts::PI;
            0.5 * pi * s * (-0.25 * pi * s * s).exp()
        }
    })
}

/// One-sample Kolmogorov-Smirnov distance to the unit exponential.
pub fn ks_distance_to_exponential(spacings: &[f64]) -> f64 {
    let mut sorted = spacings.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let cdf = 1.0 - (-x).exp();
        d = d.max((cdf - i as f64 / n).abs());
        d = d.max((cdf - (i as f64 + 1.0) / n).abs());
    }
    d
}
