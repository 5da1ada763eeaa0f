//! Exact combinatorial moment machinery: pairings of 2k-gon edges, genus of
//! the glued surface, the Harer-Zagier counts ε_g(k), the c(k, r) generating
//! function, Catalan numbers, and closed-form limiting moments M_{2k;m}.
//!
//! Everything is exact integer/rational arithmetic; floats only appear when
//! callers convert at their own boundary.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact;
use crate::exec;

/// Cap for exhaustive pairing enumeration: (2k-1)!! reaches 2,027,025 at k = 8.
pub const MAX_ENUM_K: usize = 8;
/// Cap for the closed-form moment formulas.
pub const MAX_CLOSED_K: usize = 64;

/// A pairing of the 2k edges of a 2k-gon: a fixed-point-free involution σ on
/// edge labels 0..2k (edge s joins polygon vertices s and s+1 mod 2k).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pairing {
    partner: Vec<usize>,
}

impl Pairing {
    pub fn new(partner: Vec<usize>) -> Result<Self> {
        let n = partner.len();
        if n == 0 || n % 2 != 0 {
            return Err(Error::config("pairing needs a positive even edge count"));
        }
        for s in 0..n {
            let t = partner[s];
            if t >= n || t == s || partner[t] != s {
                return Err(Error::config("not a fixed-point-free involution"));
            }
        }
        Ok(Pairing { partner })
    }

    /// Number of edges, 2k.
    pub fn edges(&self) -> usize {
        self.partner.len()
    }

    pub fn k(&self) -> usize {
        self.partner.len() / 2
    }

    #[inline]
    pub fn partner(&self, s: usize) -> usize {
        self.partner[s]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.partner
    }
}

/// (2k-1)!!, the number of pairings of 2k objects.
pub fn pairing_count(k: usize) -> BigInt {
    exact::double_factorial_odd(k)
}

fn check_enum_k(k: usize) -> Result<()> {
    if k == 0 || k > MAX_ENUM_K {
        return Err(Error::config(format!(
            "pairing enumeration supports 1 <= k <= {MAX_ENUM_K}, got {k}"
        )));
    }
    Ok(())
}

fn enumerate_rec(partner: &mut [usize], visit: &mut impl FnMut(&[usize])) {
    const FREE: usize = usize::MAX;
    let Some(s) = partner.iter().position(|&p| p == FREE) else {
        visit(partner);
        return;
    };
    for t in (s + 1)..partner.len() {
        if partner[t] == FREE {
            partner[s] = t;
            partner[t] = s;
            enumerate_rec(partner, visit);
            partner[s] = FREE;
            partner[t] = FREE;
        }
    }
}

/// All (2k-1)!! fixed-point-free involutions on 2k edges, each exactly once.
pub fn enumerate_pairings(k: usize) -> Result<Vec<Pairing>> {
    check_enum_k(k)?;
    let mut out = Vec::new();
    let mut partner = vec![usize::MAX; 2 * k];
    enumerate_rec(&mut partner, &mut |p| {
        out.push(Pairing {
            partner: p.to_vec(),
        })
    });
    Ok(out)
}

fn genus_of_partner(partner: &[usize]) -> Result<usize> {
    let n = partner.len();
    let k = n / 2;
    // Union-find over the polygon vertices; gluing edge s to σ(s) with
    // opposite orientation identifies vertex s with σ(s)+1 and vertex s+1
    // with σ(s).
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut c = x;
        while parent[c] != c {
            let next = parent[c];
            parent[c] = r;
            c = next;
        }
        r
    }
    let union = |parent: &mut Vec<usize>, a: usize, b: usize| {
        let ra = find(parent, a);
        let rb = find(parent, b);
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    };
    for s in 0..n {
        let t = partner[s];
        if t > s {
            union(&mut parent, s, (t + 1) % n);
            union(&mut parent, (s + 1) % n, t);
        }
    }
    let v = (0..n).filter(|&x| find(&mut parent, x) == x).count();
    // Euler characteristic: 1 face, k edges, v vertices; 2g = k + 1 - v.
    if v > k + 1 || (k + 1 - v) % 2 != 0 {
        return Err(Error::invariant(format!(
            "genus from v = {v}, k = {k} is not a non-negative integer"
        )));
    }
    Ok((k + 1 - v) / 2)
}

/// Genus of the orientable surface obtained by gluing the 2k-gon along the
/// pairing with opposite edge orientations.
pub fn genus(p: &Pairing) -> Result<usize> {
    genus_of_partner(&p.partner)
}

/// Exhaustive genus histogram over all pairings: entry g counts pairings of
/// genus g. Partitioned across workers by the partner of edge 0.
pub fn genus_histogram(k: usize) -> Result<Vec<u64>> {
    check_enum_k(k)?;
    let n = 2 * k;
    let gmax = k / 2;
    let branches: Vec<Result<Vec<u64>>> = exec::map_collect(n - 1, |b| {
        let t = b + 1;
        let mut partner = vec![usize::MAX; n];
        partner[0] = t;
        partner[t] = 0;
        let mut hist = vec![0u64; gmax + 1];
        let mut bad = None;
        enumerate_rec(&mut partner, &mut |p| match genus_of_partner(p) {
            Ok(g) => hist[g] += 1,
            Err(e) => bad = Some(e),
        });
        match bad {
            Some(e) => Err(e),
            None => Ok(hist),
        }
    });
    let mut total = vec![0u64; gmax + 1];
    for h in branches {
        for (acc, v) in total.iter_mut().zip(h?) {
            *acc += v;
        }
    }
    Ok(total)
}

fn check_closed_k(k: usize) -> Result<()> {
    if k > MAX_CLOSED_K {
        return Err(Error::config(format!(
            "closed-form moments support k <= {MAX_CLOSED_K}, got {k}"
        )));
    }
    Ok(())
}

/// Harer-Zagier counts ε_g(k) for g = 0..⌊k/2⌋:
/// ε_g(k) = (2k)!/((k+1)!(k-2g)!) × [x^{2g}] ((x/2)/tanh(x/2))^{k+1},
/// computed with exact rational power series.
pub fn epsilon_table(k: usize) -> Result<Vec<BigInt>> {
    if k == 0 {
        return Ok(vec![BigInt::one()]);
    }
    check_closed_k(k)?;
    let order = 2 * (k / 2);
    let series = exact::half_x_coth_half_x(order).pow(k + 1);
    let front = BigRational::from_integer(exact::factorial(2 * k))
        / BigRational::from_integer(exact::factorial(k + 1));
    let mut out = Vec::with_capacity(k / 2 + 1);
    for g in 0..=(k / 2) {
        let coeff = series.coeff(2 * g);
        let val = &front / BigRational::from_integer(exact::factorial(k - 2 * g)) * coeff;
        if !val.is_integer() {
            return Err(Error::invariant(format!(
                "epsilon_{g}({k}) is not an integer"
            )));
        }
        out.push(val.to_integer());
    }
    Ok(out)
}

/// c(k, r) from 1 + 2 Σ_k c(k,r) x^{k+1} = ((1+x)/(1-x))^r, by exact
/// expansion: the coefficient of x^{k+1} halves to c(k, r).
pub fn c_coeff(k: usize, r: usize) -> Result<BigRational> {
    if r == 0 {
        return Err(Error::config("c(k, r) needs r >= 1"));
    }
    check_closed_k(k)?;
    let n = k + 1;
    // (1+x)^r has coefficients C(r, i); (1-x)^{-r} has C(r-1+j, j).
    let mut coeff = BigInt::zero();
    for i in 0..=n.min(r) {
        coeff += exact::binomial(r, i) * exact::binomial(r - 1 + (n - i), n - i);
    }
    Ok(BigRational::new(coeff, BigInt::from(2)))
}

/// k-th Catalan number C(2k, k)/(k+1): non-crossing pairings, ε_0(k), and the
/// 2k-th moment of the semicircle.
pub fn catalan(k: usize) -> BigInt {
    exact::binomial(2 * k, k) / BigInt::from(k + 1)
}

/// Limiting 2k-th moment of the symmetric m-block circulant ensemble,
/// M_{2k;m} = m^{-(k+1)} (2k-1)!! c(k, m), as an exact rational.
pub fn limiting_moment(k: usize, m: usize) -> Result<BigRational> {
    if m == 0 {
        return Err(Error::config("period m must be >= 1"));
    }
    check_closed_k(k)?;
    let c = c_coeff(k, m)?;
    Ok(
        c * BigRational::from_integer(exact::double_factorial_odd(k))
            / BigRational::from_integer(BigInt::from(m).pow(k as u32 + 1)),
    )
}

/// Same moment through the genus expansion Σ_g ε_g(k) m^{-2g}; agrees with
/// `limiting_moment` exactly (the two routes are independent).
pub fn limiting_moment_via_genus(k: usize, m: usize) -> Result<BigRational> {
    if m == 0 {
        return Err(Error::config("period m must be >= 1"));
    }
    let eps = epsilon_table(k)?;
    let msq = BigRational::from_integer(BigInt::from(m * m));
    let mut acc = BigRational::zero();
    let mut weight = BigRational::one();
    for e in eps {
        acc += BigRational::from_integer(e) * &weight;
        weight /= &msq;
    }
    Ok(acc)
}

/// ε_g(k) rows plus M_{2k;m} values for the CLI table outputs.
pub struct MomentTable {
    pub k_max: usize,
    pub m: usize,
    /// epsilon[k - 1][g] = ε_g(k).
    pub epsilon: Vec<Vec<BigInt>>,
    /// moments[k - 1] = M_{2k;m}.
    pub moments: Vec<BigRational>,
}

impl MomentTable {
    pub fn build(k_max: usize, m: usize) -> Result<Self> {
        let mut epsilon = Vec::with_capacity(k_max);
        let mut moments = Vec::with_capacity(k_max);
        for k in 1..=k_max {
            epsilon.push(epsilon_table(k)?);
            moments.push(limiting_moment(k, m)?);
        }
        Ok(MomentTable {
            k_max,
            m,
            epsilon,
            moments,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_pairings(1).unwrap().len(), 1);
        assert_eq!(enumerate_pairings(2).unwrap().len(), 3);
        assert_eq!(enumerate_pairings(3).unwrap().len(), 15);
        assert_eq!(enumerate_pairings(4).unwrap().len(), 105);
        assert!(enumerate_pairings(0).is_err());
        assert!(enumerate_pairings(9).is_err());
    }

    #[test]
    fn pairings_are_involutions() {
        for p in enumerate_pairings(4).unwrap() {
            for s in 0..p.edges() {
                assert_ne!(p.partner(s), s);
                assert_eq!(p.partner(p.partner(s)), s);
            }
        }
        // each involution yielded exactly once
        let all = enumerate_pairings(3).unwrap();
        for i in 0..all.len() {
            for j in (i + 1)..all.len() {
                assert_ne!(all[i], all[j]);
            }
        }
    }

    #[test]
    fn adjacent_matchings_are_spheres() {
        // pairing edges (0,1), (2,3), ... is non-crossing: genus 0
        for k in 1..=6usize {
            let partner: Vec<usize> = (0..2 * k).map(|s| s ^ 1).collect();
            let p = Pairing::new(partner).unwrap();
            assert_eq!(genus(&p).unwrap(), 0);
        }
    }

    #[test]
    fn square_genus_split() {
        // k = 2: the diagonal matching is the torus, the two adjacent ones spheres.
        let hist = genus_histogram(2).unwrap();
        assert_eq!(hist, vec![2, 1]);
        let diagonal = Pairing::new(vec![2, 3, 0, 1]).unwrap();
        assert_eq!(genus(&diagonal).unwrap(), 1);
    }

    #[test]
    fn genus_histogram_k4() {
        assert_eq!(genus_histogram(4).unwrap(), vec![14, 70, 21]);
    }

    #[test]
    fn epsilon_matches_exhaustive_histogram() {
        for k in 1..=6usize {
            let hist = genus_histogram(k).unwrap();
            let eps = epsilon_table(k).unwrap();
            assert_eq!(hist.len(), eps.len());
            for (h, e) in hist.iter().zip(&eps) {
                assert_eq!(BigInt::from(*h), *e, "k = {k}");
            }
        }
    }

    #[test]
    fn epsilon_partition_and_catalan() {
        for k in 1..=8usize {
            let eps = epsilon_table(k).unwrap();
            let total: BigInt = eps.iter().sum();
            assert_eq!(total, pairing_count(k), "k = {k}");
            assert_eq!(eps[0], catalan(k), "k = {k}");
        }
    }

    #[test]
    fn known_epsilon_rows() {
        assert_eq!(epsilon_table(2).unwrap(), vec![BigInt::from(2), BigInt::from(1)]);
        assert_eq!(epsilon_table(3).unwrap(), vec![BigInt::from(5), BigInt::from(10)]);
        assert_eq!(
            epsilon_table(5).unwrap(),
            vec![BigInt::from(42), BigInt::from(420), BigInt::from(483)]
        );
    }

    #[test]
    fn c_coefficients() {
        // c(k, 1) = 1
        for k in 0..10 {
            assert_eq!(c_coeff(k, 1).unwrap(), BigRational::one());
        }
        // c(0, m) = m
        for m in 1..8usize {
            assert_eq!(
                c_coeff(0, m).unwrap(),
                BigRational::from_integer(BigInt::from(m))
            );
        }
        // c(2, m) = (2m^3 + m)/3
        for m in 1..8usize {
            let expect = BigRational::new(BigInt::from(2 * m * m * m + m), BigInt::from(3));
            assert_eq!(c_coeff(2, m).unwrap(), expect);
        }
        assert!(c_coeff(2, 0).is_err());
    }

    #[test]
    fn table_one_theory_column() {
        let expect = [1.0, 2.25, 7.5, 32.8125, 177.1875];
        for (k, e) in (1..=5).zip(expect) {
            let v = limiting_moment(k, 2).unwrap().to_f64().unwrap();
            assert_eq!(v, e, "k = {k}");
        }
    }

    #[test]
    fn gaussian_moments_at_period_one() {
        for k in 0..=8usize {
            assert_eq!(
                limiting_moment(k, 1).unwrap(),
                BigRational::from_integer(pairing_count(k))
            );
        }
    }

    #[test]
    fn second_moment_is_one() {
        for m in 1..=6usize {
            assert_eq!(limiting_moment(1, m).unwrap(), BigRational::one());
        }
    }

    #[test]
    fn two_routes_agree_exactly() {
        for k in 0..=8usize {
            for m in [1usize, 2, 3, 5, 8, 16, 31, 64] {
                assert_eq!(
                    limiting_moment(k, m).unwrap(),
                    limiting_moment_via_genus(k, m).unwrap(),
                    "k = {k}, m = {m}"
                );
            }
        }
    }

    #[test]
    fn moments_decrease_to_catalan() {
        for k in 1..=6usize {
            let ck = BigRational::from_integer(catalan(k));
            let mut prev_gap: Option<BigRational> = None;
            for j in 0..=10u32 {
                let m = 2usize.pow(j);
                let v = limiting_moment(k, m).unwrap();
                let gap = &v - &ck;
                assert!(gap >= BigRational::zero());
                if let Some(p) = prev_gap {
                    assert!(gap <= p, "k = {k}, m = {m}");
                }
                prev_gap = Some(gap);
            }
            // bounded above by the Gaussian moment
            assert!(
                limiting_moment(k, 3).unwrap()
                    <= BigRational::from_integer(pairing_count(k))
            );
        }
    }

    #[test]
    fn catalan_values() {
        let expect = [1u64, 1, 2, 5, 14, 42, 132, 429, 1430];
        for (k, e) in expect.iter().enumerate() {
            assert_eq!(catalan(k), BigInt::from(*e));
        }
    }
}
