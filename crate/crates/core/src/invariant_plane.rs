//! The Emden branch in the plane of homology invariants.
//!
//! The regular solution leaves the center tangent to `w = (5/3)z` and is
//! integrated in `z = 3 − u` with `ln w` as the unknown up to `u = 1`. Past
//! that point w diverges like `u^{−1/n}` at the surface, so the envelope is
//! carried in `σ = u^{1/n}`, `W = wσ`, where
//!
//! ```text
//! dW/dσ = W(3 − n + (n−1)σⁿ) / (3σ − σ^{n+1} − W)
//! ```
//!
//! is regular down to σ = 0 with `W(0) = n·₀ωₙ^{(n−1)/n}`.
//!
//! Reconstruction integrates `d ln r`, `d ln m` and `d ln ρ` along the curve
//! panel by panel with Gauss-Kronrod on the Hermite interpolant. Near the
//! center the integrands are regularized by subtracting their `1/z` poles,
//! so the result comes out in Emden units without reference to a profile.

use alloc::vec::Vec;

use crate::emden::PolytropeIndex;
use crate::error::{Error, Result};
use crate::math::{abs, exp, ln, powf};
use crate::ode::{hermite, Stepper, StepperOptions};
use crate::quad::gk15;

/// Start offset from the regular point.
pub const START_Z: f64 = 1e-6;
/// Where the core segment hands over to the envelope (u = 1, σ = 1).
pub const SWITCH_Z: f64 = 2.0;
/// Closest approach to u = 0 for n = 5, whose curve has no envelope form.
pub const N5_U_MIN: f64 = 1e-4;

const RTOL: f64 = 1e-12;
const H_MAX: f64 = 1e-3;

/// `dw/du` on the invariant plane.
pub fn rhs_wu(n: PolytropeIndex, u: f64, w: f64) -> Result<f64> {
    let denom = u * (3.0 - u - w);
    if denom == 0.0 {
        return Err(Error::SingularPoint { u, w });
    }
    if n.is_n0() {
        if w != 0.0 {
            return Err(Error::Domain { what: "w for n = 0 (must vanish)", value: w });
        }
        return Ok(0.0);
    }
    Ok(w * (u - 1.0 + w / n.value()) / denom)
}

/// `d ln w / dz` on the core segment.
fn dlnw_dz(n: f64, z: f64, w: f64) -> f64 {
    (2.0 - z + w / n) / ((3.0 - z) * (w - z))
}

fn envelope_denominator(n: f64, sigma: f64, big_w: f64) -> f64 {
    3.0 * sigma - powf(sigma, n + 1.0) - big_w
}

fn dbig_w(n: f64, sigma: f64, big_w: f64) -> f64 {
    big_w * (3.0 - n + (n - 1.0) * powf(sigma, n)) / envelope_denominator(n, sigma, big_w)
}

/// Second coefficient of the regular start, `w = (5/3)z(1 + bz + …)`.
pub fn start_coefficient(n: f64) -> f64 {
    (5.0 - n) / (21.0 * n)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoreSample {
    pub z: f64,
    pub w: f64,
    pub dw_dz: f64,
}

/// Envelope sample in `σ = u^{1/n}`, `W = wσ`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EnvelopeSample {
    pub sigma: f64,
    pub big_w: f64,
    pub dbig_w: f64,
}

/// Behavior of w as u → 0: `w ≈ coefficient · u^{exponent}`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Terminal {
    pub coefficient: f64,
    pub exponent: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InvariantCurve {
    pub n: PolytropeIndex,
    /// Increasing z from the start offset to the switch point.
    pub core: Vec<CoreSample>,
    /// Decreasing σ from 1 to 0; empty for n = 0 and n = 5.
    pub envelope: Vec<EnvelopeSample>,
    /// `None` for n = 5 (w stays finite) and n = 0 (w ≡ 0).
    pub terminal: Option<Terminal>,
}

/// Integrate the regular branch from the center to the surface.
pub fn integrate_wu(n: PolytropeIndex) -> Result<InvariantCurve> {
    if n.is_n0() {
        // u ≡ 3 inside a uniform sphere; the curve is the segment w = 0.
        let core = alloc::vec![
            CoreSample { z: 0.0, w: 0.0, dw_dz: 0.0 },
            CoreSample { z: 3.0, w: 0.0, dw_dz: 0.0 },
        ];
        return Ok(InvariantCurve { n, core, envelope: Vec::new(), terminal: None });
    }
    let nv = n.value();
    let z_end = if n.is_n5() { 3.0 - N5_U_MIN } else { SWITCH_Z };
    let core = integrate_core(nv, z_end)?;
    if n.is_n5() {
        return Ok(InvariantCurve { n, core, envelope: Vec::new(), terminal: None });
    }
    let w_switch = core[core.len() - 1].w;
    let envelope = integrate_envelope(nv, w_switch)?;
    let c = envelope[envelope.len() - 1].big_w;
    Ok(InvariantCurve { n, core, envelope, terminal: Some(Terminal { coefficient: c, exponent: -1.0 / nv }) })
}

fn integrate_core(n: f64, z_end: f64) -> Result<Vec<CoreSample>> {
    let rhs = move |z: f64, y: &[f64; 1]| [dlnw_dz(n, z, exp(y[0]))];
    let z0 = START_Z;
    let w0 = 5.0 / 3.0 * z0 * (1.0 + start_coefficient(n) * z0);
    let opts = StepperOptions { rtol: RTOL, atol: 1e-14, h_init: 0.05 * z0, h_max: H_MAX, ..Default::default() };
    let mut stepper = Stepper::new(&rhs, z0, [ln(w0)], opts);
    let sample = |z: f64, lnw: f64, d: f64| {
        let w = exp(lnw);
        CoreSample { z, w, dw_dz: w * d }
    };
    let mut out = alloc::vec![sample(z0, ln(w0), stepper.dydt[0])];
    while stepper.t < z_end {
        let step = stepper.step(&rhs, z_end)?;
        let s = sample(step.t1, step.y1[0], step.dy1[0]);
        if !(s.w > s.z) || !s.w.is_finite() {
            return Err(Error::Branch { z: s.z, w: s.w });
        }
        out.push(s);
    }
    Ok(out)
}

fn integrate_envelope(n: f64, w_switch: f64) -> Result<Vec<EnvelopeSample>> {
    let rhs = move |s: f64, y: &[f64; 1]| [dbig_w(n, s, y[0])];
    let opts = StepperOptions { rtol: RTOL, atol: 1e-14, h_init: 1e-4, h_max: H_MAX, ..Default::default() };
    let mut stepper = Stepper::new(&rhs, 1.0, [w_switch], opts);
    let mut out = alloc::vec![EnvelopeSample { sigma: 1.0, big_w: w_switch, dbig_w: stepper.dydt[0] }];
    while stepper.t > 0.0 {
        let step = stepper.step(&rhs, 0.0)?;
        let s = EnvelopeSample { sigma: step.t1, big_w: step.y1[0], dbig_w: step.dy1[0] };
        if !(envelope_denominator(n, s.sigma, s.big_w) < 0.0) || !s.big_w.is_finite() {
            return Err(Error::Branch { z: 3.0 - powf(s.sigma, n), w: s.big_w / s.sigma });
        }
        out.push(s);
    }
    Ok(out)
}

impl InvariantCurve {
    /// Largest z the curve reaches.
    pub fn z_max(&self) -> f64 {
        if !self.envelope.is_empty() {
            3.0
        } else {
            self.core[self.core.len() - 1].z
        }
    }

    /// w at `z` by Hermite interpolation; infinite at the surface for 0 < n < 5.
    pub fn w_at_z(&self, z: f64) -> Result<f64> {
        if !(0.0..=self.z_max()).contains(&z) {
            return Err(Error::Coverage { needed: z, reached: self.z_max() });
        }
        let nv = self.n.value();
        let core_end = self.core[self.core.len() - 1].z;
        if z <= core_end {
            if z <= self.core[0].z {
                return Ok(if self.n.is_n0() { 0.0 } else { 5.0 / 3.0 * z * (1.0 + start_coefficient(nv) * z) });
            }
            let i = self.core.partition_point(|s| s.z <= z).clamp(1, self.core.len() - 1);
            let (a, b) = (self.core[i - 1], self.core[i]);
            return Ok(hermite(a.z, a.w, a.dw_dz, b.z, b.w, b.dw_dz, z).0);
        }
        let sigma = powf(3.0 - z, 1.0 / nv);
        if sigma == 0.0 {
            return Ok(f64::INFINITY);
        }
        Ok(self.big_w_at(sigma) / sigma)
    }

    fn big_w_at(&self, sigma: f64) -> f64 {
        let env = &self.envelope;
        let i = env.partition_point(|s| s.sigma >= sigma).clamp(1, env.len() - 1);
        let (a, b) = (env[i - 1], env[i]);
        hermite(a.sigma, a.big_w, a.dbig_w, b.sigma, b.big_w, b.dbig_w, sigma).0
    }

    /// All stored points as `(u, w)`, from the center outward. The surface
    /// point itself (w = ∞) is left out.
    pub fn samples(&self) -> Vec<(f64, f64)> {
        let nv = self.n.value();
        let mut out: Vec<(f64, f64)> = self.core.iter().map(|s| (3.0 - s.z, s.w)).collect();
        out.extend(
            self.envelope
                .iter()
                .skip(1)
                .filter(|s| s.sigma > 0.0)
                .map(|s| (powf(s.sigma, nv), s.big_w / s.sigma)),
        );
        out
    }
}

/// Picard form of the z-plane curve, `(5/J)[1 − (1 − z/3)^J]`.
pub fn picard_w(n: PolytropeIndex, z: f64) -> Result<f64> {
    if !(0.0..=3.0).contains(&z) {
        return Err(Error::Domain { what: "z (0 <= z <= 3)", value: z });
    }
    let j = n.z_plane_exponent();
    let x = 1.0 - z / 3.0;
    if abs(j) < 1e-12 {
        return Ok(-5.0 * ln(x));
    }
    Ok(5.0 / j * (1.0 - powf(x, j)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReconstructedPoint {
    pub z: f64,
    pub w: f64,
    pub rho_frac: f64,
    pub theta: f64,
    pub m_frac: f64,
    pub r_frac: f64,
}

/// Surface constants recovered from the curve alone.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CurveSurface {
    pub xi1: f64,
    pub m1: f64,
    pub rho_ratio: f64,
    pub omega0: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReconstructedProfile {
    pub n: PolytropeIndex,
    pub points: Vec<ReconstructedPoint>,
    pub surface: CurveSurface,
}

impl ReconstructedProfile {
    /// θ at fractional radius `x` by monotone linear interpolation in
    /// `(r/R, ln θ)`; exact at the stored points.
    pub fn theta_at_r_frac(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Domain { what: "r/R", value: x });
        }
        let p = &self.points;
        let i = p.partition_point(|q| q.r_frac <= x).clamp(1, p.len() - 1);
        let (a, b) = (p[i - 1], p[i]);
        let t = (x - a.r_frac) / (b.r_frac - a.r_frac);
        Ok(a.theta + t * (b.theta - a.theta))
    }
}

/// Running logs along the curve, in Emden units.
#[derive(Clone, Copy)]
struct Logs {
    ln_rho: f64,
    ln_r: f64,
    ln_m: f64,
}

/// Rebuild `ρ/ρ_c`, `θ`, `m/M` and `r/R` along the curve.
pub fn reconstruct(curve: &InvariantCurve) -> Result<ReconstructedProfile> {
    let n = curve.n;
    if n.is_n0() || n.is_n5() {
        return Err(Error::UndefinedForIndex { what: "reconstruction from the invariant curve", n: n.value() });
    }
    if curve.envelope.is_empty() || curve.core[curve.core.len() - 1].z < SWITCH_Z {
        return Err(Error::Coverage { needed: 3.0, reached: curve.z_max() });
    }
    let nv = n.value();
    let b = start_coefficient(nv);
    let panel = |f: &dyn Fn(f64) -> f64, a: f64, c: f64| gk15(&mut |x| f(x), a, c).0;

    // (z, ln ρ, ln r, ln m) at each core node; r and m carry their ½ln z, 3/2 ln z poles.
    let z0 = curve.core[0].z;
    let mut lr_reg = 0.5 * ln(5.0 / nv) + (1.0 / 6.0 - 1.25 * b) * z0;
    let mut lm_reg = 1.5 * ln(5.0 / nv) - ln(3.0) - 3.75 * b * z0;
    let mut ln_rho = -5.0 / 6.0 * z0;
    let mut rows: Vec<(f64, f64, Logs)> = Vec::with_capacity(curve.core.len() + curve.envelope.len());
    let logs_at = |z: f64, ln_rho: f64, lr: f64, lm: f64| Logs { ln_rho, ln_r: lr + 0.5 * ln(z), ln_m: lm + 1.5 * ln(z) };
    rows.push((z0, curve.core[0].w, logs_at(z0, ln_rho, lr_reg, lm_reg)));
    for pair in curve.core.windows(2) {
        let (a, c) = (pair[0], pair[1]);
        let w = |z: f64| hermite(a.z, a.w, a.dw_dz, c.z, c.w, c.dw_dz, z).0;
        ln_rho -= panel(&|z| w(z) / ((3.0 - z) * (w(z) - z)), a.z, c.z);
        lr_reg += panel(&|z| 1.0 / ((3.0 - z) * (w(z) - z)) - 0.5 / z, a.z, c.z);
        lm_reg += panel(&|z| 1.0 / (w(z) - z) - 1.5 / z, a.z, c.z);
        rows.push((c.z, c.w, logs_at(c.z, ln_rho, lr_reg, lm_reg)));
    }

    // Envelope: Φ = ln θ − ln σ, ln r and ln m are all smooth in σ.
    let switch = rows[rows.len() - 1].2;
    let mut phi = switch.ln_rho / nv;
    let mut ln_r = switch.ln_r;
    let mut ln_m = switch.ln_m;
    let mut env_logs: Vec<(f64, f64, f64, f64)> = Vec::with_capacity(curve.envelope.len());
    for pair in curve.envelope.windows(2) {
        let (a, c) = (pair[0], pair[1]);
        let big_w = |s: f64| hermite(a.sigma, a.big_w, a.dbig_w, c.sigma, c.big_w, c.dbig_w, s).0;
        let d = |s: f64| envelope_denominator(nv, s, big_w(s));
        phi += panel(&|s| -(3.0 - powf(s, nv)) / d(s), a.sigma, c.sigma);
        ln_r += panel(&|s| nv / d(s), a.sigma, c.sigma);
        ln_m += panel(&|s| nv * powf(s, nv) / d(s), a.sigma, c.sigma);
        env_logs.push((c.sigma, c.big_w, phi, ln_r));
        if c.sigma > 0.0 {
            let z = 3.0 - powf(c.sigma, nv);
            let lt = phi + ln(c.sigma);
            rows.push((z, c.big_w / c.sigma, Logs { ln_rho: nv * lt, ln_r, ln_m }));
        }
    }
    let (ln_big_r, ln_big_m, phi0) = (ln_r, ln_m, phi);

    let mut points = Vec::with_capacity(rows.len() + 2);
    points.push(ReconstructedPoint { z: 0.0, w: 0.0, rho_frac: 1.0, theta: 1.0, m_frac: 0.0, r_frac: 0.0 });
    for (z, w, l) in rows {
        points.push(ReconstructedPoint {
            z,
            w,
            rho_frac: exp(l.ln_rho),
            theta: exp(l.ln_rho / nv),
            m_frac: exp(l.ln_m - ln_big_m),
            r_frac: exp(l.ln_r - ln_big_r),
        });
    }
    points.push(ReconstructedPoint { z: 3.0, w: f64::INFINITY, rho_frac: 0.0, theta: 0.0, m_frac: 1.0, r_frac: 1.0 });

    let c = curve.envelope[curve.envelope.len() - 1].big_w;
    let surface = CurveSurface {
        xi1: exp(ln_big_r),
        m1: exp(ln_big_m),
        rho_ratio: exp(-nv * phi0) / 3.0,
        omega0: if n.is_n1() { None } else { Some(powf(c / nv, nv / (nv - 1.0))) },
    };
    Ok(ReconstructedProfile { n, points, surface })
}
