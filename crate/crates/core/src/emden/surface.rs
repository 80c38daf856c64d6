use super::{EmdenProfile, PolytropeIndex};
use crate::error::{Error, Result};
use crate::math::{powf, sqrt};
use crate::ode::hermite;
use crate::roots::{bisect, newton_polish};

/// One row of surface and core data for a given index.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SurfaceConstants {
    /// First zero of θ; infinite for n = 5.
    pub xi1: f64,
    /// Dimensionless mass `−ξ²θ′` at the surface.
    pub m1: f64,
    /// Surface value of ω; `None` at n = 1 where the weight is infinite.
    pub omega0: Option<f64>,
    /// Central over mean density.
    pub rho_ratio: f64,
    pub xi_core: f64,
    pub r_core_frac: f64,
    pub m_core_frac: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoreRadius {
    pub xi_core: f64,
    pub r_core_frac: f64,
    pub m_core_frac: f64,
}

/// Locate ξ₁ on the overshoot bracket and derive the Table-II style constants.
pub fn find_surface(profile: &EmdenProfile) -> Result<SurfaceConstants> {
    let n = profile.index();
    if n.is_n5() {
        // θ₅ = (1 + ξ²/3)^(−1/2): infinite radius, finite mass √3.
        let m1 = sqrt(3.0);
        let core = core_from(profile, f64::INFINITY, m1)?;
        return Ok(SurfaceConstants {
            xi1: f64::INFINITY,
            m1,
            omega0: Some(0.0),
            rho_ratio: f64::INFINITY,
            xi_core: core.xi_core,
            r_core_frac: core.r_core_frac,
            m_core_frac: core.m_core_frac,
        });
    }
    let last = profile.nodes()[profile.nodes().len() - 1];
    let over = *profile
        .overshoot()
        .ok_or(Error::SurfaceNotFound { n: n.value(), last_xi: last.xi })?;

    let coarse = bisect(
        |x| hermite(last.xi, last.theta, last.dtheta, over.xi, over.theta, over.dtheta, x).0,
        last.xi,
        over.xi,
        1e-12 * over.xi,
    )?;
    let xi1 = newton_polish(
        |x| profile.state_at(x).unwrap_or((0.0, 1.0)),
        coarse,
        last.xi,
        over.xi,
        1e-14,
    );
    let (_, dtheta1) = profile.state_at(xi1)?;
    let m1 = -xi1 * xi1 * dtheta1;
    let omega0 = if n.is_n1() {
        None
    } else {
        let nv = n.value();
        Some(m1 * powf(xi1, -(nv - 3.0) / (nv - 1.0)))
    };
    let core = core_from(profile, xi1, m1)?;
    Ok(SurfaceConstants {
        xi1,
        m1,
        omega0,
        rho_ratio: xi1 / (-3.0 * dtheta1),
        xi_core: core.xi_core,
        r_core_frac: core.r_core_frac,
        m_core_frac: core.m_core_frac,
    })
}

/// Radius where `u = 2`, as a fraction of ξ₁, and the mass fraction inside it.
///
/// For n = 0 the invariant u stays at 3 up to the boundary, so the whole star
/// counts as core.
pub fn core_radius(profile: &EmdenProfile) -> Result<CoreRadius> {
    let s = match profile.surface() {
        Some(s) => *s,
        None => find_surface(profile)?,
    };
    Ok(CoreRadius { xi_core: s.xi_core, r_core_frac: s.r_core_frac, m_core_frac: s.m_core_frac })
}

fn u_of(n: PolytropeIndex, xi: f64, theta: f64, dtheta: f64) -> f64 {
    -xi * crate::math::pos_pow(theta, n.value()) / dtheta
}

fn core_from(profile: &EmdenProfile, xi1: f64, m1: f64) -> Result<CoreRadius> {
    let n = profile.index();
    if n.is_n0() {
        return Ok(CoreRadius { xi_core: xi1, r_core_frac: 1.0, m_core_frac: 1.0 });
    }
    let nodes = profile.nodes();
    // For small n, θⁿ stays near 1 almost to the surface and u only drops
    // below 2 after the last stored node; u = 0 at ξ₁ closes the bracket.
    let (lo, hi) = match nodes.iter().position(|nd| u_of(n, nd.xi, nd.theta, nd.dtheta) < 2.0) {
        Some(0) => return Err(Error::NotFound { what: "core radius (u = 2)" }),
        Some(k) => (nodes[k - 1].xi, nodes[k].xi),
        None if xi1.is_finite() => (nodes[nodes.len() - 1].xi, xi1),
        None => return Err(Error::NotFound { what: "core radius (u = 2)" }),
    };
    let u_minus_2 = |x: f64| match profile.state_at(x) {
        Ok((t, d)) => u_of(n, x, t, d) - 2.0,
        Err(_) => f64::NAN,
    };
    if hi == xi1 && !(u_minus_2(hi) < 0.0) {
        // The drop happens closer to ξ₁ than f64 resolves (n → 0).
        return Ok(CoreRadius { xi_core: xi1, r_core_frac: 1.0, m_core_frac: 1.0 });
    }
    let xi_core = bisect(u_minus_2, lo, hi, 1e-13)?;
    let (_, dc) = profile.state_at(xi_core)?;
    let m_core = -xi_core * xi_core * dc;
    Ok(CoreRadius { xi_core, r_core_frac: xi_core / xi1, m_core_frac: m_core / m1 })
}
