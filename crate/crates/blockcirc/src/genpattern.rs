//! Generalized m-block circulant patterns: zone classification, finite-N
//! exact moments, Diophantine pairing counts, and the analytic fourth moment
//! 2 + Σ_r (ν_r/m)³.
//!
//! Two independent routes to the same moments live here. The finite-N oracle
//! enumerates every index tuple of the trace expansion and takes exact
//! expectations (same-orientation pairings and all; they are O(1/N)). The
//! pairing counter follows the asymptotic route: opposite-orientation
//! pairings only, counting solutions of the diagonal and modulo conditions.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::dist::EntryDistribution;
use crate::ensemble::{EnsembleKind, EnsembleSpec, Linker};
use crate::error::{Error, Result};
use crate::exec;
use crate::moments::enumerate_pairings;
use crate::pattern::Pattern;
use crate::spectra;

/// The four index zones of an N x N block circulant matrix, by the integer
/// difference j - i. Zones 1 and 3 form Area I (the row index selects the
/// pattern slot), zones 2 and 4 form Area II (the column index does).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Zone {
    Z1,
    Z2,
    Z3,
    Z4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Area {
    I,
    II,
}

impl Zone {
    pub fn area(self) -> Area {
        match self {
            Zone::Z1 | Zone::Z3 => Area::I,
            Zone::Z2 | Zone::Z4 => Area::II,
        }
    }
}

/// Zone of entry (i, j), 1-based, N even. The main diagonal is taken in
/// zone 1.
pub fn classify_zone(n: usize, i: usize, j: usize) -> Result<Zone> {
    if n % 2 != 0 {
        return Err(Error::config("zone classification needs even N"));
    }
    if i == 0 || j == 0 || i > n || j > n {
        return Err(Error::IndexOutOfRange { i, j, n });
    }
    let half = n / 2;
    Ok(if j >= i {
        let d = j - i;
        if d < half {
            Zone::Z1
        } else {
            Zone::Z2
        }
    } else {
        let d = i - j;
        if d >= half {
            Zone::Z3
        } else {
            Zone::Z4
        }
    })
}

/// Exact finite-N moment of order `n` for a generalized pattern:
/// N^{-(n/2+1)} Σ E[a_{i1 i2} ... a_{in i1}] over all index tuples, with the
/// expectation taken through the link map (factors grouped by independent
/// variable, odd groups vanish). Full enumeration is O(N^n): capped at
/// N <= 16, n <= 6.
pub fn pattern_moment_finite_exact(
    pattern: &Pattern,
    n: usize,
    order: usize,
    dist: EntryDistribution,
) -> Result<BigRational> {
    if n > 16 || order > 6 {
        return Err(Error::config(
            "finite-N exact oracle supports N <= 16, order <= 6",
        ));
    }
    if order == 0 {
        return Ok(BigRational::one());
    }
    let spec = EnsembleSpec::new(
        EnsembleKind::GeneralizedCirculant(pattern.clone()),
        n,
        pattern.len(),
    )?;
    if order % 2 == 1 {
        // every term contains a group of odd size
        return Ok(BigRational::zero());
    }
    let linker = Linker::new(&spec)?;

    // Group tuples by the multiset of link-class sizes; the expectation
    // depends only on that multiset.
    let per_start: Vec<BTreeMap<u64, u64>> = exec::map_collect(n, |first| {
        let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
        let mut idx = vec![0usize; order]; // 0-based indices
        idx[0] = first;
        let mut keys = [0u64; 6];
        let mut sizes = [0u8; 6];
        // odometer over idx[1..order]
        loop {
            // keys of the cyclic edges
            for s in 0..order {
                let a = idx[s] + 1;
                let b = idx[(s + 1) % order] + 1;
                let k = linker.key(a, b);
                keys[s] = ((k.diag as u64) << 16) | k.slot as u64;
            }
            let ks = &mut keys[..order];
            ks.sort_unstable();
            // run lengths
            let mut nsizes = 0usize;
            let mut run = 1u8;
            for s in 1..order {
                if ks[s] == ks[s - 1] {
                    run += 1;
                } else {
                    sizes[nsizes] = run;
                    nsizes += 1;
                    run = 1;
                }
            }
            sizes[nsizes] = run;
            nsizes += 1;
            let sz = &mut sizes[..nsizes];
            if sz.iter().all(|&s| s % 2 == 0) {
                sz.sort_unstable_by(|a, b| b.cmp(a));
                let mut code = 0u64;
                for &s in sz.iter() {
                    code = (code << 4) | s as u64;
                }
                *counts.entry(code).or_insert(0) += 1;
            }
            // advance odometer
            let mut pos = order - 1;
            loop {
                if pos == 0 {
                    return counts;
                }
                idx[pos] += 1;
                if idx[pos] < n {
                    break;
                }
                idx[pos] = 0;
                pos -= 1;
            }
        }
    });

    let mut merged: BTreeMap<u64, u64> = BTreeMap::new();
    for m in per_start {
        for (code, c) in m {
            *merged.entry(code).or_insert(0) += c;
        }
    }

    let mut total = BigRational::zero();
    for (code, count) in merged {
        let mut expect = BigRational::one();
        let mut c = code;
        while c != 0 {
            let size = (c & 0xf) as usize;
            expect *= dist.even_moment_exact(size / 2);
            c >>= 4;
        }
        total += expect * BigRational::from_integer(BigInt::from(count));
    }
    Ok(total / BigRational::from_integer(BigInt::from(n).pow(order as u32 / 2 + 1)))
}

/// Solution counts of the pairing conditions for every opposite-orientation
/// pairing, N^{-(k+1)} Σ_σ η(σ).
///
/// η(σ) enumerates one free difference per edge pair (all of Z/N) plus the
/// base index; the modulo condition is checked through link-key equality,
/// which is the definition of entry equality. Configurations depend on the
/// base index only through its residue class mod m, so the base-index loop
/// runs over residues with multiplicity N/m (verified against full
/// enumeration in the tests).
pub fn pattern_moment_pairing_count(pattern: &Pattern, n: usize, k: usize) -> Result<f64> {
    check_pairing_count_size(pattern, n, k)?;
    let mut total: u64 = 0;
    for pairing in enumerate_pairings(k)? {
        total += eta_by_residue(pattern, n, pairing.as_slice())?;
    }
    Ok(total as f64 / (n as f64).powi(k as i32 + 1))
}

fn check_pairing_count_size(pattern: &Pattern, n: usize, k: usize) -> Result<()> {
    if k == 0 || k > 3 || n > 360 {
        return Err(Error::config("pairing counter supports k <= 3, N <= 360"));
    }
    if n % pattern.len() != 0 {
        return Err(Error::config("pattern period must divide N"));
    }
    Ok(())
}

struct PairingPlan {
    k: usize,
    edges: usize,
    /// class index of each edge
    class_of: Vec<usize>,
    /// representative (earlier) edge per class
    rep: Vec<usize>,
    /// partner (later) edge per class
    other: Vec<usize>,
    /// class checks that become possible once edge s's key is known
    check_after: Vec<Vec<(usize, usize)>>, // (earlier edge, later edge)
}

impl PairingPlan {
    fn new(partner: &[usize]) -> Self {
        let edges = partner.len();
        let k = edges / 2;
        let mut class_of = vec![usize::MAX; edges];
        let mut rep = Vec::with_capacity(k);
        let mut other = Vec::with_capacity(k);
        for s in 0..edges {
            if partner[s] > s {
                class_of[s] = rep.len();
                class_of[partner[s]] = rep.len();
                rep.push(s);
                other.push(partner[s]);
            }
        }
        let mut check_after = vec![Vec::new(); edges];
        for (&s, &t) in rep.iter().zip(&other) {
            check_after[t].push((s, t));
        }
        PairingPlan {
            k,
            edges,
            class_of,
            rep,
            other,
            check_after,
        }
    }
}

/// η(σ) with the base index collapsed to residue classes.
fn eta_by_residue(pattern: &Pattern, n: usize, partner: &[usize]) -> Result<u64> {
    let m = pattern.len();
    let spec = EnsembleSpec::new(EnsembleKind::GeneralizedCirculant(pattern.clone()), n, m)?;
    let linker = Linker::new(&spec)?;
    let plan = PairingPlan::new(partner);
    let lift = (n / m) as u64;

    // parallel over the first class's free difference
    let counted = exec::fold_reduce(
        n,
        || Ok(0u64),
        |acc: Result<u64>, x0| {
            let mut acc = acc?;
            let mut xs = vec![0usize; plan.k];
            xs[0] = x0;
            acc += eta_inner(&linker, n, &plan, &mut xs, 1, lift)?;
            Ok(acc)
        },
        |a, b| Ok(a? + b?),
    )?;
    Ok(counted)
}

fn eta_inner(
    linker: &Linker,
    n: usize,
    plan: &PairingPlan,
    xs: &mut [usize],
    depth: usize,
    lift: u64,
) -> Result<u64> {
    if depth < plan.k {
        let mut acc = 0u64;
        for x in 0..n {
            xs[depth] = x;
            acc += eta_inner(linker, n, plan, xs, depth + 1, lift)?;
        }
        return Ok(acc);
    }

    // diffs per edge: the representative edge carries x, its partner -x mod N
    let mut diff = vec![0usize; plan.edges];
    for s in 0..plan.edges {
        let c = plan.class_of[s];
        diff[s] = if plan.rep[c] == s {
            xs[c]
        } else {
            (n - xs[c]) % n
        };
    }

    let m = linker.period();
    let mut count = 0u64;
    let mut idx = vec![0usize; plan.edges + 1];
    let mut keys = vec![crate::ensemble::LinkKey { diag: 0, slot: 0 }; plan.edges];
    'resblock: for eps in 0..m {
        idx[0] = eps + 1;
        for s in 0..plan.edges {
            idx[s + 1] = (idx[s] - 1 + diff[s]) % n + 1;
            keys[s] = linker.key(idx[s], idx[s + 1]);
            for &(a, b) in &plan.check_after[s] {
                if keys[a] != keys[b] {
                    continue 'resblock;
                }
            }
        }
        debug_assert_eq!(idx[plan.edges], idx[0]);
        // Zone invariant: away from the self-paired diagonals (d = 0, N/2)
        // the two entries of a contributing pair sit in different areas.
        if n % 2 == 0 {
            for c in 0..plan.k {
                let d = xs[c] % n;
                if d == 0 || 2 * d == n {
                    continue;
                }
                let (s, t) = (plan.rep[c], plan.other[c]);
                let za = classify_zone(n, idx[s], idx[s + 1])?.area();
                let zb = classify_zone(n, idx[t], idx[t + 1])?.area();
                if za == zb {
                    return Err(Error::invariant(format!(
                        "paired entries share area {za:?} on diagonal {d}"
                    )));
                }
            }
        }
        count += lift;
    }
    Ok(count)
}

/// Reference η(σ): the base index runs over all of 1..=N instead of residue
/// classes. O(N^{k+1}); used to validate the residue collapse.
#[cfg(test)]
fn eta_full_enumeration(pattern: &Pattern, n: usize, partner: &[usize]) -> Result<u64> {
    let m = pattern.len();
    let spec = EnsembleSpec::new(EnsembleKind::GeneralizedCirculant(pattern.clone()), n, m)?;
    let linker = Linker::new(&spec)?;
    let plan = PairingPlan::new(partner);
    let mut xs = vec![0usize; plan.k];
    fn rec(
        linker: &Linker,
        n: usize,
        plan: &PairingPlan,
        xs: &mut [usize],
        depth: usize,
    ) -> u64 {
        if depth < plan.k {
            let mut acc = 0u64;
            for x in 0..n {
                xs[depth] = x;
                acc += rec(linker, n, plan, xs, depth + 1);
            }
            return acc;
        }
        let mut diff = vec![0usize; plan.edges];
        for s in 0..plan.edges {
            let c = plan.class_of[s];
            diff[s] = if plan.rep[c] == s {
                xs[c]
            } else {
                (n - xs[c]) % n
            };
        }
        let mut count = 0u64;
        let mut idx = vec![0usize; plan.edges + 1];
        'base: for i1 in 1..=n {
            idx[0] = i1;
            let mut keys = Vec::with_capacity(plan.edges);
            for s in 0..plan.edges {
                idx[s + 1] = (idx[s] - 1 + diff[s]) % n + 1;
                keys.push(linker.key(idx[s], idx[s + 1]));
            }
            for c in 0..plan.k {
                let s = plan.rep[c];
                let t = (0..plan.edges)
                    .find(|&e| plan.class_of[e] == c && e != s)
                    .unwrap();
                if keys[s] != keys[t] {
                    continue 'base;
                }
            }
            count += 1;
        }
        count
    }
    Ok(rec(&linker, n, &plan, &mut xs, 0))
}

/// Limiting fourth moment of any pattern: 2 + Σ_r (ν_r/m)³. Depends only on
/// the occurrence frequencies, not the arrangement.
pub fn fourth_moment_analytic(pattern: &Pattern) -> BigRational {
    let m = BigInt::from(pattern.len());
    let mut acc = BigRational::from_integer(BigInt::from(2));
    for nu in pattern.occurrences() {
        acc += BigRational::new(BigInt::from(nu).pow(3), m.pow(3));
    }
    acc
}

/// Monte Carlo moments of a pattern ensemble: averages of the even empirical
/// moments k = 2, 4, ..., k_max over `trials` sample matrices.
pub fn simulate_pattern_moments(
    pattern: &Pattern,
    n: usize,
    trials: u64,
    k_max: usize,
    dist: EntryDistribution,
    seed: u64,
) -> Result<Vec<(usize, f64)>> {
    let spec = EnsembleSpec::new(EnsembleKind::GeneralizedCirculant(pattern.clone()), n, pattern.len())?
        .with_dist(dist)
        .with_seed(seed);
    let measures = spectra::sample_spectra(&spec, trials)?;
    let orders: Vec<usize> = (1..=k_max / 2).map(|k| 2 * k).collect();
    let avgs = spectra::average_moments(&measures, &orders);
    Ok(orders.into_iter().zip(avgs).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn zone_examples() {
        assert_eq!(classify_zone(8, 1, 3).unwrap(), Zone::Z1);
        assert_eq!(classify_zone(8, 1, 6).unwrap(), Zone::Z2);
        assert_eq!(classify_zone(8, 6, 1).unwrap(), Zone::Z3);
        assert_eq!(classify_zone(8, 3, 1).unwrap(), Zone::Z4);
        assert_eq!(classify_zone(8, 5, 5).unwrap(), Zone::Z1);
        assert_eq!(classify_zone(8, 1, 5).unwrap(), Zone::Z2); // d = N/2
        assert_eq!(classify_zone(8, 5, 1).unwrap(), Zone::Z3);
        assert!(classify_zone(7, 1, 2).is_err());
        assert!(classify_zone(8, 0, 2).is_err());
    }

    #[test]
    fn zones_partition_everything() {
        let n = 12;
        for i in 1..=n {
            for j in 1..=n {
                classify_zone(n, i, j).unwrap();
            }
        }
    }

    #[test]
    fn second_moment_exactly_one() {
        for pat in ["ab", "abab", "aabb", "abc"] {
            let p = Pattern::parse(pat).unwrap();
            let n = if p.len() == 3 { 12 } else { 8 };
            let v =
                pattern_moment_finite_exact(&p, n, 2, EntryDistribution::StandardGaussian)
                    .unwrap();
            assert_eq!(v, BigRational::one(), "{pat}");
        }
    }

    #[test]
    fn odd_moment_exactly_zero() {
        let p = Pattern::parse("ab").unwrap();
        let v = pattern_moment_finite_exact(&p, 8, 3, EntryDistribution::StandardGaussian)
            .unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn finite_exact_approaches_limit() {
        let p = Pattern::parse("abab").unwrap();
        let lim = 2.25f64;
        let at = |n: usize| {
            pattern_moment_finite_exact(&p, n, 4, EntryDistribution::StandardGaussian)
                .unwrap()
                .to_f64()
                .unwrap()
        };
        let d12 = (at(12) - lim).abs();
        let d16 = (at(16) - lim).abs();
        assert!(d16 < d12, "{d12} vs {d16}");
        assert!(d16 <= 10.0 / 16.0);
    }

    #[test]
    fn size_limits_enforced() {
        let p = Pattern::parse("ab").unwrap();
        assert!(
            pattern_moment_finite_exact(&p, 18, 4, EntryDistribution::StandardGaussian).is_err()
        );
        assert!(
            pattern_moment_finite_exact(&p, 8, 8, EntryDistribution::StandardGaussian).is_err()
        );
        assert!(pattern_moment_pairing_count(&p, 400, 2).is_err());
        assert!(pattern_moment_pairing_count(&p, 240, 4).is_err());
    }

    #[test]
    fn residue_collapse_equals_full_enumeration() {
        for pat in ["ab", "abab", "aabb"] {
            let p = Pattern::parse(pat).unwrap();
            let n = if p.len() == 2 { 8 } else { 8 };
            for k in 1..=3usize {
                for pairing in enumerate_pairings(k).unwrap() {
                    let fast = eta_by_residue(&p, n, pairing.as_slice()).unwrap();
                    let full = eta_full_enumeration(&p, n, pairing.as_slice()).unwrap();
                    assert_eq!(fast, full, "{pat}, k = {k}, {:?}", pairing.as_slice());
                }
            }
        }
    }

    #[test]
    fn pairing_count_second_moment_is_one() {
        for pat in ["ab", "aabb"] {
            let p = Pattern::parse(pat).unwrap();
            let v = pattern_moment_pairing_count(&p, 48, 1).unwrap();
            assert!((v - 1.0).abs() < 1e-12, "{pat}: {v}");
        }
    }

    #[test]
    fn fourth_moment_frequencies_only() {
        let abab = fourth_moment_analytic(&Pattern::parse("abab").unwrap());
        let aabb = fourth_moment_analytic(&Pattern::parse("aabb").unwrap());
        let abba = fourth_moment_analytic(&Pattern::parse("abba").unwrap());
        assert_eq!(abab, aabb);
        assert_eq!(abab, abba);
        assert_eq!(abab, BigRational::new(BigInt::from(9), BigInt::from(4)));
        // {a,b,c}: 2 + 3/27 = 19/9
        let abc = fourth_moment_analytic(&Pattern::parse("abc").unwrap());
        assert_eq!(abc, BigRational::new(BigInt::from(19), BigInt::from(9)));
    }

    #[test]
    fn fourth_moment_all_distinct_matches_closed_form() {
        for m in 1..=8usize {
            let p = Pattern::all_distinct(m).unwrap();
            assert_eq!(
                fourth_moment_analytic(&p),
                crate::moments::limiting_moment(2, m).unwrap()
            );
        }
    }

    #[test]
    fn exact_vs_pairing_count_small_n() {
        // the exact oracle is ground truth at finite N; the pairing count
        // differs by the same-orientation O(1/N) contributions
        for pat in ["ab", "aabb"] {
            let p = Pattern::parse(pat).unwrap();
            for n in [8usize, 12, 16] {
                let exact =
                    pattern_moment_finite_exact(&p, n, 4, EntryDistribution::StandardGaussian)
                        .unwrap()
                        .to_f64()
                        .unwrap();
                let counted = pattern_moment_pairing_count(&p, n, 2).unwrap();
                assert!(
                    (exact - counted).abs() <= 10.0 / n as f64,
                    "{pat} N={n}: {exact} vs {counted}"
                );
            }
        }
    }

    #[test]
    fn simulate_small_pattern_run() {
        let p = Pattern::parse("ab").unwrap();
        let rows =
            simulate_pattern_moments(&p, 60, 40, 4, EntryDistribution::StandardGaussian, 3)
                .unwrap();
        assert_eq!(rows.len(), 2);
        let (k2, m2) = rows[0];
        assert_eq!(k2, 2);
        assert!((m2 - 1.0).abs() < 0.1, "{m2}");
        let (k4, m4) = rows[1];
        assert_eq!(k4, 4);
        // limiting value 2.25 at m = 2
        assert!((m4 - 2.25).abs() < 0.5, "{m4}");
    }
}
