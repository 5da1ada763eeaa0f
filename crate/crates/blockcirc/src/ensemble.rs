//! Ensemble construction: link functions, sample matrices, and symbolic link
//! maps for symmetric m-block circulant, m-block Toeplitz, and generalized
//! pattern circulant ensembles.
//!
//! The link key of an entry is the canonical identifier of its equivalence
//! class: two entries are forced equal in every matrix of the ensemble iff
//! their keys are equal. Indices are 1-based at this API to match the usual
//! index arithmetic for these ensembles.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dist::{trial_rng, EntryDistribution};
use crate::error::{Error, Result};
use crate::matrix::SymmetricMatrix;
use crate::pattern::Pattern;

/// Hard cap on the dense dimension; desk-scale reproduction needs N <= 1024
/// for the figures and 4000 for the tables.
pub const MAX_DIM: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "pattern", rename_all = "kebab-case")]
pub enum EnsembleKind {
    BlockCirculant,
    BlockToeplitz,
    GeneralizedCirculant(Pattern),
}

impl EnsembleKind {
    pub fn is_circulant(&self) -> bool {
        !matches!(self, EnsembleKind::BlockToeplitz)
    }

    pub fn name(&self) -> &'static str {
        match self {
            EnsembleKind::BlockCirculant => "block-circulant",
            EnsembleKind::BlockToeplitz => "block-toeplitz",
            EnsembleKind::GeneralizedCirculant(_) => "generalized-circulant",
        }
    }
}

/// Full description of an ensemble: kind, dimension N, period m, entry
/// distribution, and the 64-bit seed of the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    /// Matrix dimension N.
    pub dim: usize,
    /// Period m; must divide N.
    pub period: usize,
    pub dist: EntryDistribution,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, dim: usize, period: usize) -> Result<Self> {
        let spec = EnsembleSpec {
            kind,
            dim,
            period,
            dist: EntryDistribution::StandardGaussian,
            seed: 0,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_dist(mut self, dist: EntryDistribution) -> Self {
        self.dist = dist;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 || self.period == 0 {
            return Err(Error::config("N and m must be positive"));
        }
        if self.dim > MAX_DIM {
            return Err(Error::config(format!(
                "dimension {} exceeds the configured cap {MAX_DIM}",
                self.dim
            )));
        }
        if self.dim % self.period != 0 {
            return Err(Error::config(format!(
                "period m = {} must divide N = {}",
                self.period, self.dim
            )));
        }
        if let EnsembleKind::GeneralizedCirculant(p) = &self.kind {
            if p.len() != self.period {
                return Err(Error::config(format!(
                    "pattern length {} must equal period m = {}",
                    p.len(),
                    self.period
                )));
            }
        }
        Ok(())
    }

    /// Canonical key of entry (i, j), 1-based.
    pub fn link_key(&self, i: usize, j: usize) -> Result<LinkKey> {
        let linker = Linker::new(self)?;
        linker.key_checked(i, j)
    }

    /// Number of distinct link keys reachable in an N x N matrix.
    pub fn count_free_parameters(&self) -> Result<usize> {
        let linker = Linker::new(self)?;
        let n = self.dim;
        let mut keys = std::collections::BTreeSet::new();
        for i in 1..=n {
            for j in i..=n {
                keys.insert(linker.key(i, j));
            }
        }
        Ok(keys.len())
    }

    /// Sample matrix from rng stream 0.
    pub fn build_matrix(&self) -> Result<SymmetricMatrix> {
        self.build_matrix_trial(0)
    }

    /// Sample matrix for one trial: one fresh i.i.d. value per distinct link
    /// key, entries filled through the link map. The per-trial rng stream
    /// makes trial t reproducible regardless of scheduling.
    pub fn build_matrix_trial(&self, trial: u64) -> Result<SymmetricMatrix> {
        let linker = Linker::new(self)?;
        let n = self.dim;

        let mut ids: BTreeMap<LinkKey, u32> = BTreeMap::new();
        for i in 1..=n {
            for j in i..=n {
                let next = ids.len() as u32;
                ids.entry(linker.key(i, j)).or_insert(next);
            }
        }
        // Ids were assigned in encounter order; re-number in canonical key
        // order so the draw sequence depends only on the spec.
        for (rank, (_, id)) in ids.iter_mut().enumerate() {
            *id = rank as u32;
        }

        let mut rng = trial_rng(self.seed, trial);
        let values: Vec<f64> = (0..ids.len()).map(|_| self.dist.sample(&mut rng)).collect();

        let mut entries = vec![0.0f64; n * n];
        let mut link = vec![0u32; n * n];
        for i in 1..=n {
            for j in i..=n {
                let id = ids[&linker.key(i, j)];
                let v = values[id as usize];
                entries[(i - 1) * n + (j - 1)] = v;
                entries[(j - 1) * n + (i - 1)] = v;
                link[(i - 1) * n + (j - 1)] = id;
                link[(j - 1) * n + (i - 1)] = id;
            }
        }
        Ok(SymmetricMatrix::from_parts(n, entries, link))
    }
}

/// Canonical identifier of an entry equivalence class.
///
/// `diag` is the canonical wrapped-diagonal index (0..=N/2 for circulant
/// kinds, |j-i| for Toeplitz); `slot` is the canonical symbol id within the
/// period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinkKey {
    pub diag: u32,
    pub slot: u16,
}

/// Precomputed link function for one ensemble spec. Building it is O(m^2);
/// key lookups are O(1).
pub struct Linker {
    n: usize,
    m: usize,
    toeplitz: bool,
    /// Symbol of pattern slot s (identity for the standard ensembles).
    symbols: Vec<u16>,
    /// Canonical symbol on the d = N/2 wrapped diagonal, where symmetry
    /// additionally identifies slot s with slot s + N/2 (mod m): the merge
    /// closure of those identifications, applied to symbols.
    half_diag_rep: Vec<u16>,
}

impl Linker {
    pub fn period(&self) -> usize {
        self.m
    }

    pub fn new(spec: &EnsembleSpec) -> Result<Self> {
        spec.validate()?;
        let n = spec.dim;
        let m = spec.period;
        let symbols: Vec<u16> = match &spec.kind {
            EnsembleKind::GeneralizedCirculant(p) => p.symbols().to_vec(),
            _ => (0..m as u16).collect(),
        };

        // Union-find on symbols for the self-paired diagonal d = N/2.
        let mut half_diag_rep: Vec<u16> = Vec::new();
        if !matches!(spec.kind, EnsembleKind::BlockToeplitz) && n % 2 == 0 {
            let h = (n / 2) % m;
            let nsym = *symbols.iter().max().unwrap() as usize + 1;
            let mut parent: Vec<u16> = (0..nsym as u16).collect();
            fn find(parent: &mut [u16], x: u16) -> u16 {
                let mut r = x;
                while parent[r as usize] != r {
                    r = parent[r as usize];
                }
                let mut c = x;
                while parent[c as usize] != c {
                    let next = parent[c as usize];
                    parent[c as usize] = r;
                    c = next;
                }
                r
            }
            for s in 0..m {
                let a = find(&mut parent, symbols[s]);
                let b = find(&mut parent, symbols[(s + h) % m]);
                if a != b {
                    // Point the larger at the smaller so the class
                    // representative is the minimal symbol.
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    parent[hi as usize] = lo;
                }
            }
            half_diag_rep = (0..nsym as u16).map(|s| find(&mut parent, s)).collect();
        }

        Ok(Linker {
            n,
            m,
            toeplitz: matches!(spec.kind, EnsembleKind::BlockToeplitz),
            symbols,
            half_diag_rep,
        })
    }

    #[inline]
    fn slot_of(&self, index: usize) -> u16 {
        self.symbols[(index - 1) % self.m]
    }

    pub fn key_checked(&self, i: usize, j: usize) -> Result<LinkKey> {
        if i == 0 || j == 0 || i > self.n || j > self.n {
            return Err(Error::IndexOutOfRange { i, j, n: self.n });
        }
        Ok(self.key(i, j))
    }

    /// Canonical key of entry (i, j), 1-based; caller guarantees range.
    #[inline]
    pub fn key(&self, i: usize, j: usize) -> LinkKey {
        if self.toeplitz {
            // No wrap: |j - i| is the canonical diagonal, and the slot is
            // read at the smaller index (the row of the upper-triangle
            // representative).
            let (a, d) = if j >= i { (i, j - i) } else { (j, i - j) };
            return LinkKey {
                diag: d as u32,
                slot: self.slot_of(a),
            };
        }
        let n = self.n;
        let d = (n + j - i) % n;
        if 2 * d < n {
            // d = 0 is the main diagonal; both fall in Area I, slot from i.
            LinkKey {
                diag: d as u32,
                slot: self.slot_of(i),
            }
        } else if 2 * d > n {
            LinkKey {
                diag: (n - d) as u32,
                slot: self.slot_of(j),
            }
        } else {
            // d = N/2: the wrapped diagonal is self-paired under transpose,
            // which merges slot s with slot s + N/2 (mod m); use the merge
            // class representative.
            LinkKey {
                diag: d as u32,
                slot: self.half_diag_rep[self.slot_of(i) as usize],
            }
        }
    }
}
