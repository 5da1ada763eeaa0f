//! Structured eigensolver fast path for block circulant matrices.
//!
//! An m-block circulant matrix block-diagonalizes under the block DFT: with
//! block row (B_0, ..., B_{N/m-1}) the Hermitian m x m blocks
//! H_t = sum_j B_j ω^{jt}, ω = exp(2πi m/N), t = 0..N/m-1, carry the full
//! spectrum. Each H_t is solved through the real symmetric 2m x 2m embedding
//! [[X, -Y], [Y, X]], whose eigenvalues are those of H = X + iY doubled.
//! Runtime O(N·m + (N/m)·m^3), far below the dense O(N^3).

use crate::ensemble::EnsembleSpec;
use crate::error::{Error, Result};
use crate::exec;
use crate::matrix::SymmetricMatrix;

use super::jacobi::symmetric_eigenvalues;

/// All N eigenvalues (unnormalized, unsorted) of a block circulant sample.
pub(crate) fn eigenvalues(spec: &EnsembleSpec, mat: &SymmetricMatrix) -> Result<Vec<f64>> {
    if !spec.kind.is_circulant() {
        return Err(Error::config(
            "block DFT fast path requires a circulant kind",
        ));
    }
    let n = spec.dim;
    let m = spec.period;
    if mat.dim() != n {
        return Err(Error::config("matrix dimension does not match spec"));
    }
    let nb = n / m;

    // Blocks of the first block row.
    let block = |j: usize, r: usize, c: usize| mat.get(r, j * m + c);

    // Roots of unity ω^u for u = 0..nb.
    let (cos_tab, sin_tab): (Vec<f64>, Vec<f64>) = (0..nb)
        .map(|u| {
            let ang = 2.0 * std::f64::consts::PI * u as f64 / nb as f64;
            (ang.cos(), ang.sin())
        })
        .unzip();

    let per_t: Vec<Result<Vec<f64>>> = exec::map_collect(nb, |t| {
        // H_t = sum_j B_j ω^{jt}
        let mut re = vec![0.0f64; m * m];
        let mut im = vec![0.0f64; m * m];
        for j in 0..nb {
            let u = (j * t) % nb;
            let (c, s) = (cos_tab[u], sin_tab[u]);
            for r in 0..m {
                for cidx in 0..m {
                    let b = block(j, r, cidx);
                    re[r * m + cidx] += b * c;
                    im[r * m + cidx] += b * s;
                }
            }
        }
        // Hermitize: X exactly symmetric, Y exactly antisymmetric.
        let mut x = vec![0.0f64; m * m];
        let mut y = vec![0.0f64; m * m];
        for r in 0..m {
            for c in 0..m {
                x[r * m + c] = 0.5 * (re[r * m + c] + re[c * m + r]);
                y[r * m + c] = 0.5 * (im[r * m + c] - im[c * m + r]);
            }
        }
        // Embed [[X, -Y], [Y, X]].
        let d = 2 * m;
        let mut e = vec![0.0f64; d * d];
        for r in 0..m {
            for c in 0..m {
                e[r * d + c] = x[r * m + c];
                e[r * d + (m + c)] = -y[r * m + c];
                e[(m + r) * d + c] = y[r * m + c];
                e[(m + r) * d + (m + c)] = x[r * m + c];
            }
        }
        let doubled = symmetric_eigenvalues(e, d)?;
        // Every eigenvalue of H appears twice; keep every second of the
        // sorted list.
        Ok(doubled.into_iter().step_by(2).collect())
    });

    let mut all = Vec::with_capacity(n);
    for r in per_t {
        all.extend(r?);
    }
    debug_assert_eq!(all.len(), n);
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::EnsembleKind;

    #[test]
    fn period_one_matches_circulant_formula() {
        // m = 1: λ_t = Σ_j c_j ω^{jt}, real since the first row is palindromic.
        let spec = EnsembleSpec::new(EnsembleKind::BlockCirculant, 8, 1)
            .unwrap()
            .with_seed(5);
        let mat = spec.build_matrix().unwrap();
        let mut fast = eigenvalues(&spec, &mat).unwrap();
        fast.sort_by(|a, b| a.partial_cmp(b).unwrap());

        let n = 8usize;
        let mut direct: Vec<f64> = (0..n)
            .map(|t| {
                (0..n)
                    .map(|j| {
                        mat.get(0, j)
                            * (2.0 * std::f64::consts::PI * (j * t) as f64 / n as f64).cos()
                    })
                    .sum()
            })
            .collect();
        direct.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in fast.iter().zip(&direct) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn rejects_toeplitz_kind() {
        let spec = EnsembleSpec::new(EnsembleKind::BlockToeplitz, 8, 2).unwrap();
        let mat = spec.build_matrix().unwrap();
        assert!(eigenvalues(&spec, &mat).is_err());
    }
}
