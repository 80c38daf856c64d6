//! Scalar root finding: bisection with an optional Newton polish.

use crate::error::{Error, Result};
use crate::math::abs;

/// Bisection on a sign-changing bracket. Converges to `x_tol`
/// (absolute) or stops after 200 halvings.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, x_tol: f64) -> Result<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NotFound { what: "sign change" });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if abs(hi - lo) <= x_tol || mid == lo || mid == hi {
            return Ok(mid);
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Newton iteration from `x0` using `fdf(x) -> (f, f')`, kept inside
/// `[lo, hi]`; falls back to the starting point if the slope vanishes.
pub fn newton_polish<F: FnMut(f64) -> (f64, f64)>(
    mut fdf: F,
    x0: f64,
    lo: f64,
    hi: f64,
    rel_tol: f64,
) -> f64 {
    let mut x = x0;
    for _ in 0..50 {
        let (fx, dfx) = fdf(x);
        if fx == 0.0 || dfx == 0.0 || !dfx.is_finite() {
            break;
        }
        let next = (x - fx / dfx).clamp(lo, hi);
        let done = abs(next - x) <= rel_tol * abs(x).max(1e-300);
        x = next;
        if done {
            break;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn bisect_requires_bracket() {
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-10).is_err());
    }

    #[test]
    fn newton_converges() {
        let r = newton_polish(|x| (x.cos() - x, -x.sin() - 1.0), 0.7, 0.0, 1.0, 1e-15);
        assert!((r.cos() - r).abs() < 1e-15);
    }
}
