//! The scaling charge of the Lane-Emden Lagrangian and its radial balance.
//!
//! In units of `−H_c²/G` the charge is
//! `G(ξ) = ξ²[ξ(θ′²/2 + θ^{n+1}/(n+1)) + ω̃θθ′]`, and along a solution
//!
//! ```text
//! dG/dξ = ((5−n)/(n−1)) ξ² (θ′²/2 − θ^{n+1}/(n+1))
//! ```
//!
//! so the charge is conserved only at n = 5, where it vanishes on the Emden
//! function.

use alloc::vec::Vec;

use crate::emden::{EmdenProfile, HomologyInvariants, PolytropeIndex};
use crate::error::{Error, Result};
use crate::math::{abs, pos_pow, powf};
use crate::roots::bisect;

/// Dimensional prefactor of the charge values returned here.
pub const CHARGE_UNIT: &str = "-H_c^2/G";

/// Stencil half-step for the numerical derivative.
pub const FD_STEP: f64 = 1e-2;

fn weight(n: PolytropeIndex) -> Result<f64> {
    n.omega_tilde()
        .ok_or(Error::UndefinedForIndex { what: "scaling weight 2/(n-1)", n: n.value() })
}

/// Charge from a state `(ξ, θ, θ′)`.
pub fn charge_from_state(n: PolytropeIndex, xi: f64, theta: f64, dtheta: f64) -> Result<f64> {
    let wt = weight(n)?;
    let nv = n.value();
    let kinetic = 0.5 * dtheta * dtheta;
    let internal = theta * pos_pow(theta, nv) / (nv + 1.0);
    Ok(xi * xi * (xi * (kinetic + internal) + wt * theta * dtheta))
}

/// Charge written through the invariants: `ξθ²v(v/2 + u/(n+1) − ω̃)` with
/// `θ = (uv)^{1/(n−1)} ξ^{−ω̃}`.
pub fn charge_from_invariants(n: PolytropeIndex, xi: f64, inv: &HomologyInvariants) -> Result<f64> {
    let wt = weight(n)?;
    let nv = n.value();
    let theta = powf(inv.u * inv.v, 0.5 * wt) * powf(xi, -wt);
    Ok(xi * theta * theta * inv.v * (0.5 * inv.v + inv.u / (nv + 1.0) - wt))
}

/// Right-hand side of the balance law at a state.
pub fn charge_rate(n: PolytropeIndex, xi: f64, theta: f64, dtheta: f64) -> Result<f64> {
    weight(n)?;
    let nv = n.value();
    let pref = (5.0 - nv) / (nv - 1.0);
    Ok(pref * xi * xi * (0.5 * dtheta * dtheta - theta * pos_pow(theta, nv) / (nv + 1.0)))
}

/// Charge on a profile at `xi`.
pub fn noether_charge(profile: &EmdenProfile, xi: f64) -> Result<f64> {
    let (t, d) = profile.state_at(xi)?;
    charge_from_state(profile.index(), xi, t, d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChargeSample {
    pub xi: f64,
    pub g_value: f64,
    pub dg_dxi_numeric: f64,
    pub dg_dxi_analytic: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NonconservationReport {
    pub n: PolytropeIndex,
    pub samples: Vec<ChargeSample>,
    pub max_abs_residual: f64,
    pub max_abs_rhs: f64,
    pub max_abs_charge: f64,
}

impl NonconservationReport {
    /// Largest residual relative to the largest right-hand side; the bare
    /// residual when the right-hand side vanishes (n = 5).
    pub fn relative_residual(&self) -> f64 {
        if self.max_abs_rhs > 0.0 {
            self.max_abs_residual / self.max_abs_rhs
        } else {
            self.max_abs_residual
        }
    }
}

pub const CHECK_SAMPLES: usize = 200;

/// Compare a fourth-order central difference of G against the balance law
/// on evenly spaced radii that keep the stencil inside the profile.
pub fn check_nonconservation(profile: &EmdenProfile) -> Result<NonconservationReport> {
    let n = profile.index();
    weight(n)?;
    let h = FD_STEP;
    let lo = 2.0 * h + profile.xi0();
    let hi = profile.xi_end() - 2.0 * h - 1e-9;
    if !(hi > lo) {
        return Err(Error::Domain { what: "profile too short for the stencil", value: profile.xi_end() });
    }
    let g = |x: f64| noether_charge(profile, x);
    let mut report = NonconservationReport {
        n,
        samples: Vec::with_capacity(CHECK_SAMPLES),
        max_abs_residual: 0.0,
        max_abs_rhs: 0.0,
        max_abs_charge: 0.0,
    };
    for i in 0..CHECK_SAMPLES {
        let xi = lo + (hi - lo) * i as f64 / (CHECK_SAMPLES - 1) as f64;
        let numeric = (-g(xi + 2.0 * h)? + 8.0 * g(xi + h)? - 8.0 * g(xi - h)? + g(xi - 2.0 * h)?) / (12.0 * h);
        let (t, d) = profile.state_at(xi)?;
        let analytic = charge_rate(n, xi, t, d)?;
        let value = charge_from_state(n, xi, t, d)?;
        report.max_abs_residual = report.max_abs_residual.max(abs(numeric - analytic));
        report.max_abs_rhs = report.max_abs_rhs.max(abs(analytic));
        report.max_abs_charge = report.max_abs_charge.max(abs(value));
        report.samples.push(ChargeSample { xi, g_value: value, dg_dxi_numeric: numeric, dg_dxi_analytic: analytic });
    }
    Ok(report)
}

/// Ratio of the internal to the gravitational term of the charge,
/// `2θ^{n+1} / ((n+1)θ′²)`: infinite at the center, zero at the surface.
pub fn energy_ratio(profile: &EmdenProfile, xi: f64) -> Result<f64> {
    let nv = profile.index().value();
    let (t, d) = profile.state_at(xi)?;
    let internal = t * pos_pow(t, nv) / (nv + 1.0);
    let gravitational = 0.5 * d * d;
    Ok(if gravitational == 0.0 { f64::INFINITY } else { internal / gravitational })
}

/// Radius where internal and gravitational terms are equal.
pub fn energy_crossing(profile: &EmdenProfile) -> Result<f64> {
    bisect(
        |x| energy_ratio(profile, x).map(|r| r - 1.0).unwrap_or(f64::NAN),
        profile.xi0(),
        profile.xi_end(),
        1e-12,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::emden::{invariants_at, IntegratorOptions};

    fn profile(n: f64) -> EmdenProfile {
        EmdenProfile::solve(PolytropeIndex::new(n).unwrap(), IntegratorOptions::default()).unwrap()
    }

    #[test]
    fn undefined_at_n1() {
        let p = profile(1.0);
        assert!(matches!(noether_charge(&p, 1.0), Err(Error::UndefinedForIndex { .. })));
        assert!(check_nonconservation(&p).is_err());
    }

    #[test]
    fn vanishes_at_center_like_cube() {
        let p = profile(3.0);
        let xi = 1e-3;
        let g = noether_charge(&p, xi).unwrap();
        // θ ≈ 1, θ′ ≈ −ξ/3: G ≈ ξ³(1/(n+1) − ω̃/3).
        let expect = xi.powi(3) * (0.25 - 1.0 / 3.0);
        assert!((g - expect).abs() < 1e-3 * expect.abs());
    }

    #[test]
    fn invariant_form_agrees() {
        let p = profile(3.0);
        let inv = invariants_at(&p, 1.0).unwrap();
        let a = noether_charge(&p, 1.0).unwrap();
        let b = charge_from_invariants(p.index(), 1.0, &inv).unwrap();
        assert!((a - b).abs() < 1e-12 * a.abs().max(1.0), "{a} {b}");
    }

    #[test]
    fn n5_charge_is_zero() {
        let p = profile(5.0);
        for x in [0.5, 2.0, 10.0, 60.0] {
            assert!(noether_charge(&p, x).unwrap().abs() < 1e-7);
        }
        let r = check_nonconservation(&p).unwrap();
        assert_eq!(r.max_abs_rhs, 0.0);
        assert!(r.max_abs_residual < 1e-6);
    }

    #[test]
    fn balance_law_n3() {
        let r = check_nonconservation(&profile(3.0)).unwrap();
        assert!(r.relative_residual() < 1e-6, "{}", r.relative_residual());
    }

    #[test]
    fn energy_ratio_crosses_once() {
        let p = profile(3.0);
        let x = energy_crossing(&p).unwrap();
        assert!(x > 0.0 && x < p.xi_end());
        let mut prev = f64::INFINITY;
        for i in 1..100 {
            let r = energy_ratio(&p, i as f64 * p.xi_end() / 100.0).unwrap();
            assert!(r < prev);
            prev = r;
        }
    }
}
