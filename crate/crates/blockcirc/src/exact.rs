//! Exact big-integer / rational helpers shared by the combinatorial and
//! closed-form modules. Everything here is pure integer arithmetic; floats
//! appear only at the callers' API boundaries.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

/// (2k-1)!! = (2k)!/(2^k k!), the number of pairings of 2k objects.
pub fn double_factorial_odd(k: usize) -> BigInt {
    let mut acc = BigInt::one();
    let mut i = 1usize;
    while i + 1 < 2 * k {
        i += 2;
        acc *= BigInt::from(i);
    }
    acc
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Bernoulli numbers B_0..B_n (B_1 = -1/2 convention), via the standard
/// recurrence sum_{j<=n} C(n+1,j) B_j = 0.
pub fn bernoulli(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(BigRational::one());
            continue;
        }
        let mut s = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            s += BigRational::from_integer(binomial(m + 1, j)) * bj;
        }
        b.push(-s / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// Truncated power series with exact rational coefficients,
/// `coeffs[i]` = coefficient of x^i.
#[derive(Clone, Debug)]
pub struct Series {
    pub coeffs: Vec<BigRational>,
}

impl Series {
    pub fn one(order: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); order + 1];
        coeffs[0] = BigRational::one();
        Series { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn mul(&self, other: &Series) -> Series {
        let order = self.order().min(other.order());
        let mut coeffs = vec![BigRational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Series { coeffs }
    }

    pub fn pow(&self, e: usize) -> Series {
        let mut acc = Series::one(self.order());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }
}

/// Series of (x/2)/tanh(x/2) = sum_{n>=0} B_{2n} x^{2n} / (2n)! up to `order`.
pub fn half_x_coth_half_x(order: usize) -> Series {
    let b = bernoulli(order);
    let mut coeffs = vec![BigRational::zero(); order + 1];
    let mut n = 0usize;
    while 2 * n <= order {
        coeffs[2 * n] = b[2 * n].clone() / BigRational::from_integer(factorial(2 * n));
        n += 1;
    }
    Series { coeffs }
}

/// ln of a positive rational, accurate to f64 precision even when the value
/// overflows f64.
pub fn ln_rational(r: &BigRational) -> f64 {
    assert!(r.is_positive(), "ln of non-positive rational");
    ln_bigint(r.numer()) - ln_bigint(r.denom())
}

pub fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 52 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 52;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}
