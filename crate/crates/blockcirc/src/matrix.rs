//! Dense real symmetric matrices with an optional symbolic link map.

use crate::error::{Error, Result};

/// Dense `n x n` real symmetric matrix. Ensemble-built matrices also carry a
/// link map assigning each entry the id of the independent random variable it
/// came from; entries with the same id are bit-identical by construction.
#[derive(Debug, Clone)]
pub struct SymmetricMatrix {
    n: usize,
    entries: Vec<f64>,
    link: Option<Vec<u32>>,
}

impl SymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        SymmetricMatrix {
            n,
            entries: vec![0.0; n * n],
            link: None,
        }
    }

    /// Build from row-major entries, which must be exactly symmetric.
    pub fn from_entries(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::config("entry buffer has wrong length"));
        }
        let m = SymmetricMatrix {
            n,
            entries,
            link: None,
        };
        m.check_symmetric()?;
        Ok(m)
    }

    pub(crate) fn from_parts(n: usize, entries: Vec<f64>, link: Vec<u32>) -> Self {
        debug_assert_eq!(entries.len(), n * n);
        debug_assert_eq!(link.len(), n * n);
        SymmetricMatrix {
            n,
            entries,
            link: Some(link),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry at 0-based (i, j).
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    /// Set both (i, j) and (j, i), 0-based.
    pub fn set_sym(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.n + j] = v;
        self.entries[j * self.n + i] = v;
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Link-map variable id at 0-based (i, j), when present.
    pub fn link_id(&self, i: usize, j: usize) -> Option<u32> {
        self.link.as_ref().map(|l| l[i * self.n + j])
    }

    pub fn has_link(&self) -> bool {
        self.link.is_some()
    }

    pub fn check_symmetric(&self) -> Result<()> {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.get(i, j).to_bits() != self.get(j, i).to_bits() {
                    return Err(Error::config(format!(
                        "matrix not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum()
    }

    /// Dense CSV rows, '.' decimal separator, LF endings, no header.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if j > 0 {
                    out.push(',');
                }
                out.push_str(&format!("{}", self.get(i, j)));
            }
            out.push('\n');
        }
        out
    }
}
