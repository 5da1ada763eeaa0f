//! Cyclic Jacobi eigenvalue solver for dense real symmetric matrices.
//!
//! Eigenvalues only; adequate to N ≈ 1024 at desk scale and dependency-free.

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 64;
/// Convergence: off-diagonal Frobenius norm reduced to 1e-12 of its initial
/// value (or absolutely negligible).
const REL_THRESHOLD: f64 = 1e-12;

/// Eigenvalues of the symmetric matrix stored row-major in `a` (destroyed),
/// sorted ascending.
pub(crate) fn symmetric_eigenvalues(mut a: Vec<f64>, n: usize) -> Result<Vec<f64>> {
    debug_assert_eq!(a.len(), n * n);
    if n <= 1 {
        return Ok(a);
    }

    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                let v = a[i * n + j];
                s += v * v;
            }
        }
        s.sqrt()
    };

    let initial = off(&a);
    let fro = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    let threshold = (REL_THRESHOLD * initial).max(1e-300).max(f64::EPSILON * fro * 1e-4);

    for _sweep in 0..MAX_SWEEPS {
        let current = off(&a);
        if current <= threshold {
            let mut vals: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
            vals.sort_by(|x, y| x.partial_cmp(y).unwrap());
            return Ok(vals);
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                // Rotation annihilating a_pq, computed in the numerically
                // stable form.
                let theta = 0.5 * (aqq - app) / apq;
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                for j in 0..n {
                    if j == p || j == q {
                        continue;
                    }
                    let ajp = a[j * n + p];
                    let ajq = a[j * n + q];
                    let np = c * ajp - s * ajq;
                    let nq = s * ajp + c * ajq;
                    a[j * n + p] = np;
                    a[p * n + j] = np;
                    a[j * n + q] = nq;
                    a[q * n + j] = nq;
                }
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
    }

    Err(Error::NoConvergence {
        sweeps: MAX_SWEEPS,
        off: off(&a),
    })
}
