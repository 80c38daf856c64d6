//! Truncated power series with exact rational coefficients.
//!
//! Everything here is in the variable `x`; the Emden-function expansions are
//! even in ξ, so callers use `x = ξ²`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;

pub type Q = Ratio<i128>;

pub fn q(num: i128, den: i128) -> Q {
    Q::new(num, den)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<Q>,
}

impl Series {
    /// Series truncated after `len` coefficients (`x⁰ … x^{len-1}`).
    pub fn new(mut coeffs: Vec<Q>, len: usize) -> Self {
        coeffs.resize(len, q(0, 1));
        Self { coeffs }
    }

    pub fn constant(c: Q, len: usize) -> Self {
        Self::new(vec![c], len)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).copied().unwrap_or_else(|| q(0, 1))
    }

    pub fn scale(&self, c: Q) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| *a * c).collect() }
    }

    /// `1 / self`; requires a nonzero constant term.
    pub fn recip(&self) -> Self {
        let n = self.len();
        let a0 = self.coeff(0);
        assert!(a0 != q(0, 1), "series reciprocal needs a nonzero constant term");
        let mut out = vec![q(0, 1); n];
        out[0] = a0.recip();
        for k in 1..n {
            let mut acc = q(0, 1);
            for j in 1..=k {
                acc += self.coeff(j) * out[k - j];
            }
            out[k] = -acc / a0;
        }
        Self { coeffs: out }
    }

    /// `self^p` for rational `p`; the constant term must be 1.
    pub fn pow(&self, p: Q) -> Self {
        assert!(self.coeff(0) == q(1, 1), "rational powers need a unit constant term");
        let n = self.len();
        let mut s = self.clone();
        s.coeffs[0] = q(0, 1);
        let mut out = Series::constant(q(1, 1), n);
        let mut term = Series::constant(q(1, 1), n);
        let mut binom = q(1, 1);
        for j in 1..n {
            term = &term * &s;
            binom = binom * (p - q(j as i128 - 1, 1)) / q(j as i128, 1);
            out = &out + &term.scale(binom);
        }
        out
    }

    /// Evaluate at `x` in floating point.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + to_f64(*c))
    }
}

pub fn to_f64(c: Q) -> f64 {
    *c.numer() as f64 / *c.denom() as f64
}

/// `(1 + c·x)^p` to `len` terms.
pub fn binomial(c: Q, p: Q, len: usize) -> Series {
    Series::new(vec![q(1, 1), c], len).pow(p)
}

/// Regular Lane-Emden solution `θ(ξ) = Σ a_k ξ^{2k}` for rational index `n`,
/// built from `a_k·2k(2k+1) = −[θⁿ]_{k−1}` term by term.
pub fn lane_emden(n: Q, len: usize) -> Series {
    let mut coeffs = vec![q(0, 1); len];
    coeffs[0] = q(1, 1);
    for k in 1..len {
        let partial = Series::new(coeffs[..k].to_vec(), k);
        let rhs = partial.pow(n).coeff(k - 1);
        let kk = k as i128;
        coeffs[k] = -rhs / q(2 * kk * (2 * kk + 1), 1);
    }
    Series { coeffs }
}

impl<'a> Add<&'a Series> for &'a Series {
    type Output = Series;
    fn add(self, rhs: &'a Series) -> Series {
        let n = self.len().min(rhs.len());
        Series { coeffs: (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect() }
    }
}

impl<'a> Sub<&'a Series> for &'a Series {
    type Output = Series;
    fn sub(self, rhs: &'a Series) -> Series {
        self + &(-rhs)
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series { coeffs: self.coeffs.iter().map(|c| -*c).collect() }
    }
}

impl<'a> Mul<&'a Series> for &'a Series {
    type Output = Series;
    fn mul(self, rhs: &'a Series) -> Series {
        let n = self.len().min(rhs.len());
        let mut out = vec![q(0, 1); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if *a == q(0, 1) {
                continue;
            }
            for j in 0..(n - i) {
                out[i + j] += *a * rhs.coeff(j);
            }
        }
        Series { coeffs: out }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recip_of_one_minus_x() {
        let s = Series::new(vec![q(1, 1), q(-1, 1)], 6).recip();
        assert!(s.coeffs().iter().all(|c| *c == q(1, 1)));
    }

    #[test]
    fn square_root_squares_back() {
        let s = Series::new(vec![q(1, 1), q(3, 7), q(-2, 5)], 8);
        let r = s.pow(q(1, 2));
        assert_eq!(&r * &r, s);
    }

    #[test]
    fn lane_emden_n0_is_quadratic() {
        let s = lane_emden(q(0, 1), 5);
        assert_eq!(s.coeffs(), &[q(1, 1), q(-1, 6), q(0, 1), q(0, 1), q(0, 1)]);
    }

    #[test]
    fn lane_emden_n1_is_sinc() {
        // sin ξ / ξ = Σ (−1)^k ξ^{2k} / (2k+1)!
        let s = lane_emden(q(1, 1), 6);
        let mut fact = 1i128;
        for k in 0..6i128 {
            if k > 0 {
                fact *= (2 * k) * (2 * k + 1);
            }
            let sign = if k % 2 == 0 { 1 } else { -1 };
            assert_eq!(s.coeff(k as usize), q(sign, fact));
        }
    }
}
