//! Period patterns for generalized block circulant ensembles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One period of a wrapped diagonal: a length-`m` sequence of symbol ids,
/// possibly with repeats. The all-distinct pattern of length `m` recovers the
/// standard `m`-block circulant ensemble.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Pattern {
    symbols: Vec<u16>,
}

impl Pattern {
    pub fn new(symbols: Vec<u16>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::config("pattern must have length >= 1"));
        }
        Ok(Pattern { symbols })
    }

    /// Pattern with `m` distinct symbols.
    pub fn all_distinct(m: usize) -> Result<Self> {
        if m == 0 || m > u16::MAX as usize {
            return Err(Error::config(format!("unsupported period {m}")));
        }
        Ok(Pattern {
            symbols: (0..m as u16).collect(),
        })
    }

    /// Parse a pattern like "aabb": each letter is a symbol.
    pub fn parse(s: &str) -> Result<Self> {
        let mut symbols = Vec::with_capacity(s.len());
        let mut seen: Vec<char> = Vec::new();
        for ch in s.chars() {
            if !ch.is_ascii_alphanumeric() {
                return Err(Error::config(format!(
                    "pattern must be alphanumeric, got {ch:?}"
                )));
            }
            let id = match seen.iter().position(|&c| c == ch) {
                Some(i) => i,
                None => {
                    seen.push(ch);
                    seen.len() - 1
                }
            };
            symbols.push(id as u16);
        }
        Pattern::new(symbols)
    }

    /// Period length `m`.
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Symbol at pattern slot `s` (0-based, s < m).
    pub fn symbol(&self, slot: usize) -> u16 {
        self.symbols[slot]
    }

    pub fn symbols(&self) -> &[u16] {
        &self.symbols
    }

    /// Occurrence counts ν_r per distinct symbol; Σ ν_r = m.
    pub fn occurrences(&self) -> Vec<usize> {
        let max = *self.symbols.iter().max().unwrap() as usize;
        let mut counts = vec![0usize; max + 1];
        for &s in &self.symbols {
            counts[s as usize] += 1;
        }
        counts.into_iter().filter(|&c| c > 0).collect()
    }

    pub fn distinct_count(&self) -> usize {
        self.occurrences().len()
    }
}

impl std::fmt::Display for Pattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &s in &self.symbols {
            let c = if s < 26 {
                (b'a' + s as u8) as char
            } else {
                '?'
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl TryFrom<String> for Pattern {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        Pattern::parse(&s)
    }
}

impl From<Pattern> for String {
    fn from(p: Pattern) -> String {
        p.to_string()
    }
}
