//! Explicit adaptive Runge-Kutta integration.
//!
//! Dormand-Prince 5(4) with FSAL, an RMS error norm and the usual
//! `0.9·err^(-1/5)` step controller. The stepper hands back every accepted
//! step so that callers can watch for events (a sign change of θ, a turning
//! point of an orbit) and stop or bisect on their own terms. Dense output
//! between accepted steps is cubic Hermite on the stored values and slopes.

use crate::error::{Error, Result};
use crate::math::{abs, powf, sqrt};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StepperOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_max: f64,
    pub h_min: f64,
    pub max_steps: usize,
}

impl Default for StepperOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            h_init: 1e-3,
            h_max: f64::INFINITY,
            h_min: 1e-14,
            max_steps: 1_000_000,
        }
    }
}

/// One accepted step: state and slope at both ends.
#[derive(Debug, Clone, Copy)]
pub struct Step<const N: usize> {
    pub t0: f64,
    pub y0: [f64; N],
    pub dy0: [f64; N],
    pub t1: f64,
    pub y1: [f64; N],
    pub dy1: [f64; N],
}

impl<const N: usize> Step<N> {
    pub fn interpolate(&self, t: f64) -> [f64; N] {
        core::array::from_fn(|i| hermite(self.t0, self.y0[i], self.dy0[i], self.t1, self.y1[i], self.dy1[i], t).0)
    }
}

/// Cubic Hermite value and derivative at `t` from end values and slopes.
pub fn hermite(t0: f64, y0: f64, d0: f64, t1: f64, y1: f64, d1: f64, t: f64) -> (f64, f64) {
    let h = t1 - t0;
    let s = (t - t0) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    let value = h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
    let dh00 = (6.0 * s2 - 6.0 * s) / h;
    let dh10 = 3.0 * s2 - 4.0 * s + 1.0;
    let dh01 = (-6.0 * s2 + 6.0 * s) / h;
    let dh11 = 3.0 * s2 - 2.0 * s;
    let deriv = dh00 * y0 + dh10 * d0 + dh01 * y1 + dh11 * d1;
    (value, deriv)
}

#[inline]
fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for i in 0..N {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        out[i] += h * acc;
    }
    out
}

/// A single Dormand-Prince step of size `h`; returns the fifth-order
/// solution, its slope (FSAL) and the embedded error estimate.
pub fn dopri_step<const N: usize, F>(
    f: &F,
    t: f64,
    y: &[f64; N],
    k1: &[f64; N],
    h: f64,
) -> ([f64; N], [f64; N], [f64; N])
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let k2 = f(t + C2 * h, &axpy(y, h, &[(A21, k1)]));
    let k3 = f(t + C3 * h, &axpy(y, h, &[(A31, k1), (A32, &k2)]));
    let k4 = f(t + C4 * h, &axpy(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]));
    let k5 = f(
        t + C5 * h,
        &axpy(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
    );
    let k6 = f(
        t + h,
        &axpy(y, h, &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
    );
    let y_new = axpy(y, h, &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
    let k7 = f(t + h, &y_new);
    let mut err = [0.0; N];
    for i in 0..N {
        err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
    }
    (y_new, k7, err)
}

/// Advance `y` from `t` to `t_end` with fixed-size sub-steps no larger than
/// `h_max`. Used to re-evaluate a trajectory at an arbitrary point from a
/// nearby accepted node without going through the interpolant.
pub fn integrate_to<const N: usize, F>(f: &F, t: f64, y: &[f64; N], t_end: f64, h_max: f64) -> [f64; N]
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let span = t_end - t;
    if span == 0.0 {
        return *y;
    }
    let pieces = (abs(span) / h_max) as usize + 1;
    let h = span / pieces as f64;
    let mut ti = t;
    let mut yi = *y;
    for _ in 0..pieces {
        let k1 = f(ti, &yi);
        yi = dopri_step(f, ti, &yi, &k1, h).0;
        ti += h;
    }
    yi
}

/// Adaptive driver; call [`Stepper::step`] repeatedly.
#[derive(Debug, Clone)]
pub struct Stepper<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
    pub dydt: [f64; N],
    h: f64,
    opts: StepperOptions,
    pub accepted: usize,
    pub rejected: usize,
}

impl<const N: usize> Stepper<N> {
    pub fn new<F>(f: &F, t0: f64, y0: [f64; N], opts: StepperOptions) -> Self
    where
        F: Fn(f64, &[f64; N]) -> [f64; N],
    {
        let dydt = f(t0, &y0);
        Self { t: t0, y: y0, dydt, h: opts.h_init, opts, accepted: 0, rejected: 0 }
    }

    pub fn options(&self) -> &StepperOptions {
        &self.opts
    }

    /// Make one accepted step, never going past `t_limit` (which may lie on
    /// either side of `t`; the sign of the current step size follows it).
    pub fn step<F>(&mut self, f: &F, t_limit: f64) -> Result<Step<N>>
    where
        F: Fn(f64, &[f64; N]) -> [f64; N],
    {
        let dir = if t_limit >= self.t { 1.0 } else { -1.0 };
        loop {
            if self.accepted + self.rejected >= self.opts.max_steps {
                return Err(Error::Integration { reason: "step budget exhausted", at: self.t });
            }
            let mut h = abs(self.h).min(self.opts.h_max);
            let remaining = abs(t_limit - self.t);
            let clipped = h >= remaining;
            if clipped {
                h = remaining;
            }
            let h = dir * h;
            let (y_new, dy_new, err) = dopri_step(f, self.t, &self.y, &self.dydt, h);
            let mut sum = 0.0;
            let mut finite = true;
            for i in 0..N {
                let scale = self.opts.atol + self.opts.rtol * abs(self.y[i]).max(abs(y_new[i]));
                let e = err[i] / scale;
                finite &= y_new[i].is_finite();
                sum += e * e;
            }
            let norm = sqrt(sum / N as f64);
            if finite && norm <= 1.0 {
                let factor = if norm == 0.0 { 5.0 } else { (0.9 * powf(norm, -0.2)).clamp(0.2, 5.0) };
                let t1 = if clipped { t_limit } else { self.t + h };
                let step = Step { t0: self.t, y0: self.y, dy0: self.dydt, t1, y1: y_new, dy1: dy_new };
                self.t = t1;
                self.y = y_new;
                self.dydt = dy_new;
                if !clipped {
                    self.h = abs(h) * factor;
                }
                self.accepted += 1;
                return Ok(step);
            }
            self.rejected += 1;
            let factor = if finite { (0.9 * powf(norm, -0.2)).clamp(0.1, 0.9) } else { 0.25 };
            self.h = abs(h) * factor;
            if self.h < self.opts.h_min {
                return Err(Error::Integration { reason: "step size underflow", at: self.t });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let f = |_t: f64, y: &[f64; 1]| [-y[0]];
        let mut s = Stepper::new(&f, 0.0, [1.0], StepperOptions::default());
        while s.t < 5.0 {
            s.step(&f, 5.0).unwrap();
        }
        assert!((s.y[0] - (-5.0f64).exp()).abs() < 1e-11);
    }

    #[test]
    fn backwards_in_time() {
        let f = |t: f64, _y: &[f64; 1]| [t.cos()];
        let mut s = Stepper::new(&f, 2.0, [2.0f64.sin()], StepperOptions::default());
        while s.t > 0.0 {
            s.step(&f, 0.0).unwrap();
        }
        assert_eq!(s.t, 0.0);
        assert!(s.y[0].abs() < 1e-10);
    }

    #[test]
    fn hermite_reproduces_cubics() {
        let p = |x: f64| 2.0 * x * x * x - x + 0.5;
        let dp = |x: f64| 6.0 * x * x - 1.0;
        for &t in &[0.3, 0.77, 1.2] {
            let (v, d) = hermite(0.2, p(0.2), dp(0.2), 1.4, p(1.4), dp(1.4), t);
            assert!((v - p(t)).abs() < 1e-13);
            assert!((d - dp(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn integrate_to_matches_closed_form() {
        let f = |_t: f64, y: &[f64; 2]| [y[1], -y[0]];
        let y = integrate_to(&f, 0.0, &[0.0, 1.0], 1.3, 0.05);
        assert!((y[0] - 1.3f64.sin()).abs() < 1e-10);
    }
}
