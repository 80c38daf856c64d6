use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{EmdenProfile, IntegratorOptions, PolytropeIndex, SurfaceConstants};
use crate::constants::G;
use crate::error::{Error, Result};
use crate::math::{cbrt, pos_pow, powf, sqrt};

/// A profile in CGS units. Arrays share one radial grid that starts at the
/// center and, for n < 5, ends at the surface.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PhysicalProfile {
    pub n: PolytropeIndex,
    pub k: f64,
    pub rho_c: f64,
    /// Length scale, cm.
    pub alpha: f64,
    /// Central enthalpy `(n+1)P_c/ρ_c`.
    pub h_c: f64,
    pub r: Vec<f64>,
    pub rho: Vec<f64>,
    pub m: Vec<f64>,
    pub rho_bar: Vec<f64>,
    pub g: Vec<f64>,
}

impl PhysicalProfile {
    pub fn total_mass(&self) -> f64 {
        self.m[self.m.len() - 1]
    }

    pub fn radius(&self) -> f64 {
        self.r[self.r.len() - 1]
    }
}

/// Central enthalpy. For n > 0, `K` is the polytropic constant in `P = Kρ^{1+1/n}`;
/// for n = 0 there is no such constant and `K` is read as the central pressure.
fn central_enthalpy(n: f64, k: f64, rho_c: f64) -> f64 {
    if n == 0.0 {
        k / rho_c
    } else {
        (n + 1.0) * k * powf(rho_c, 1.0 / n)
    }
}

/// Scale a solved profile to physical units: `r = αξ`, `ρ = ρ_c θⁿ`,
/// `m = 4πρ_c α³(−ξ²θ′)`, `ρ̄ = ρ_c(−3θ′/ξ)`, `g = 4πGρ_c α(−θ′)`.
pub fn dimensionalize(profile: &EmdenProfile, k: f64, rho_c: f64) -> Result<PhysicalProfile> {
    if !(k > 0.0) {
        return Err(Error::Domain { what: "polytropic constant K", value: k });
    }
    if !(rho_c > 0.0) {
        return Err(Error::Domain { what: "central density", value: rho_c });
    }
    let n = profile.index();
    let nv = n.value();
    let h_c = central_enthalpy(nv, k, rho_c);
    let alpha = sqrt(h_c / (4.0 * PI * G * rho_c));

    let mut states: Vec<(f64, f64, f64)> = Vec::with_capacity(profile.nodes().len() + 2);
    states.push((0.0, 1.0, 0.0));
    states.extend(profile.nodes().iter().map(|nd| (nd.xi, nd.theta, nd.dtheta)));
    if let Some(s) = profile.surface() {
        if s.xi1.is_finite() {
            let (_, d1) = profile.state_at(s.xi1)?;
            states.push((s.xi1, 0.0, d1));
        }
    }

    let len = states.len();
    let mut out = PhysicalProfile {
        n,
        k,
        rho_c,
        alpha,
        h_c,
        r: Vec::with_capacity(len),
        rho: Vec::with_capacity(len),
        m: Vec::with_capacity(len),
        rho_bar: Vec::with_capacity(len),
        g: Vec::with_capacity(len),
    };
    let m_scale = 4.0 * PI * rho_c * alpha * alpha * alpha;
    for (xi, theta, dtheta) in states {
        out.r.push(alpha * xi);
        out.rho.push(rho_c * pos_pow(theta, nv));
        out.m.push(m_scale * (-xi * xi * dtheta));
        out.rho_bar.push(if xi == 0.0 { rho_c } else { rho_c * (-3.0 * dtheta / xi) });
        out.g.push(4.0 * PI * G * rho_c * alpha * (-dtheta));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum MassOrRadius {
    Mass(f64),
    Radius(f64),
}

/// Mass-radius relation at fixed K, solving the profile first.
pub fn mass_radius(n: PolytropeIndex, k: f64, given: MassOrRadius) -> Result<(f64, f64)> {
    if n.is_n0() {
        return mass_radius_n0(k, given);
    }
    if n.is_n5() {
        return Err(Error::Degenerate { n: 5.0, detail: "n = 5 polytropes have infinite radius" });
    }
    let profile = EmdenProfile::solve(n, IntegratorOptions::default())?;
    mass_radius_with(profile.surface().unwrap(), n, k, given)
}

/// Mass-radius relation from known surface constants.
///
/// Both M and R follow from ρ_c: `R = ξ₁ A^{1/2} ρ_c^{(1−n)/2n}` and
/// `M = 4π m₁ A^{3/2} ρ_c^{(3−n)/2n}` with `A = (n+1)K/4πG`. At n = 1 the
/// radius, and at n = 3 the mass, does not depend on ρ_c.
pub fn mass_radius_with(
    s: &SurfaceConstants,
    n: PolytropeIndex,
    k: f64,
    given: MassOrRadius,
) -> Result<(f64, f64)> {
    if !(k > 0.0) {
        return Err(Error::Domain { what: "polytropic constant K", value: k });
    }
    let given_value = match given {
        MassOrRadius::Mass(v) | MassOrRadius::Radius(v) => v,
    };
    if !(given_value > 0.0) {
        return Err(Error::Domain { what: "given mass or radius", value: given_value });
    }
    if n.is_n0() {
        return mass_radius_n0(k, given);
    }
    if n.is_n5() {
        return Err(Error::Degenerate { n: 5.0, detail: "n = 5 polytropes have infinite radius" });
    }
    let nv = n.value();
    let a = (nv + 1.0) * k / (4.0 * PI * G);
    let r_of = |rho_c: f64| s.xi1 * sqrt(a) * powf(rho_c, (1.0 - nv) / (2.0 * nv));
    let m_of = |rho_c: f64| 4.0 * PI * s.m1 * powf(a, 1.5) * powf(rho_c, (3.0 - nv) / (2.0 * nv));
    if n.is_n1() {
        return match given {
            MassOrRadius::Mass(m) => Ok((m, r_of(1.0))),
            MassOrRadius::Radius(_) => Err(Error::Degenerate {
                n: nv,
                detail: "n = 1 fixes the radius independent of mass; give the mass instead",
            }),
        };
    }
    if (nv - 3.0).abs() < 1e-12 {
        return match given {
            MassOrRadius::Radius(r) => Ok((m_of(1.0), r)),
            MassOrRadius::Mass(_) => Err(Error::Degenerate {
                n: nv,
                detail: "n = 3 fixes the mass independent of radius; give the radius instead",
            }),
        };
    }
    match given {
        MassOrRadius::Radius(r) => {
            let rho_c = powf(r / (s.xi1 * sqrt(a)), 2.0 * nv / (1.0 - nv));
            Ok((m_of(rho_c), r))
        }
        MassOrRadius::Mass(m) => {
            let rho_c = powf(m / (4.0 * PI * s.m1 * powf(a, 1.5)), 2.0 * nv / (3.0 - nv));
            Ok((m, r_of(rho_c)))
        }
    }
}

/// Uniform sphere, with `K` read as the density.
fn mass_radius_n0(rho: f64, given: MassOrRadius) -> Result<(f64, f64)> {
    if !(rho > 0.0) {
        return Err(Error::Domain { what: "density of the uniform sphere", value: rho });
    }
    Ok(match given {
        MassOrRadius::Mass(m) => (m, cbrt(3.0 * m / (4.0 * PI * rho))),
        MassOrRadius::Radius(r) => (4.0 / 3.0 * PI * rho * r * r * r, r),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(n: f64) -> EmdenProfile {
        EmdenProfile::solve(PolytropeIndex::new(n).unwrap(), IntegratorOptions::default()).unwrap()
    }

    #[test]
    fn n0_density_is_flat() {
        let p = dimensionalize(&solve(0.0), 1e15, 3.0).unwrap();
        assert!(p.rho.iter().all(|&r| r == 3.0));
    }

    #[test]
    fn rejects_nonpositive_inputs() {
        let p = solve(2.0);
        assert!(dimensionalize(&p, 0.0, 1.0).is_err());
        assert!(dimensionalize(&p, 1.0, -1.0).is_err());
    }

    #[test]
    fn mass_is_monotone_and_matches_relation() {
        for n in [1.5, 2.0, 4.0] {
            let prof = solve(n);
            let k = 3.8e14;
            let p = dimensionalize(&prof, k, 1e4).unwrap();
            assert!(p.m.windows(2).all(|w| w[1] >= w[0]));
            let idx = prof.index();
            let (m, _) = mass_radius_with(prof.surface().unwrap(), idx, k, MassOrRadius::Radius(p.radius())).unwrap();
            assert!((m - p.total_mass()).abs() < 1e-6 * m, "{n}");
            let (_, r) = mass_radius_with(prof.surface().unwrap(), idx, k, MassOrRadius::Mass(p.total_mass())).unwrap();
            assert!((r - p.radius()).abs() < 1e-6 * r);
        }
    }

    #[test]
    fn alpha_formula() {
        let n = 3.0;
        let (k, rho_c) = (1e15, 1e6);
        let p = dimensionalize(&solve(n), k, rho_c).unwrap();
        let expect = (n + 1.0) * k * rho_c.powf(1.0 / n - 1.0) / (4.0 * PI * G);
        assert!((p.alpha * p.alpha - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn mean_density_near_center() {
        let p = dimensionalize(&solve(1.5), 1e14, 10.0).unwrap();
        // ρ̄ = ρ_c^{2/5} ρ^{3/5} up to fourth order in r.
        for i in 1..6 {
            let pred = p.rho_c.powf(0.4) * p.rho[i].powf(0.6);
            let xi = p.r[i] / p.alpha;
            assert!((p.rho_bar[i] - pred).abs() <= 0.01 * xi.powi(4) * p.rho_c + 1e-9 * p.rho_c);
        }
    }

    #[test]
    fn degenerate_indices() {
        let k = 1e14;
        let s1 = *solve(1.0).surface().unwrap();
        let n1 = PolytropeIndex::new(1.0).unwrap();
        let (_, r_a) = mass_radius_with(&s1, n1, k, MassOrRadius::Mass(1e33)).unwrap();
        let (_, r_b) = mass_radius_with(&s1, n1, k, MassOrRadius::Mass(4e33)).unwrap();
        assert_eq!(r_a, r_b);
        assert!(matches!(mass_radius_with(&s1, n1, k, MassOrRadius::Radius(1e9)), Err(Error::Degenerate { .. })));

        let s3 = *solve(3.0).surface().unwrap();
        let n3 = PolytropeIndex::new(3.0).unwrap();
        let (m_a, _) = mass_radius_with(&s3, n3, k, MassOrRadius::Radius(1e9)).unwrap();
        let (m_b, _) = mass_radius_with(&s3, n3, k, MassOrRadius::Radius(1e11)).unwrap();
        assert_eq!(m_a, m_b);
        assert!(mass_radius_with(&s3, n3, k, MassOrRadius::Mass(1e33)).is_err());
        assert!(mass_radius(PolytropeIndex::new(5.0).unwrap(), k, MassOrRadius::Mass(1e33)).is_err());
    }

    #[test]
    fn scaling_exponents() {
        let k = 1e14;
        let n0 = PolytropeIndex::new(0.0).unwrap();
        let (_, r1) = mass_radius(n0, k, MassOrRadius::Mass(1e33)).unwrap();
        let (_, r8) = mass_radius(n0, k, MassOrRadius::Mass(8e33)).unwrap();
        assert!((r8 / r1 - 2.0).abs() < 1e-12);
        let n15 = PolytropeIndex::new(1.5).unwrap();
        let (_, ra) = mass_radius(n15, k, MassOrRadius::Mass(1e33)).unwrap();
        let (_, rb) = mass_radius(n15, k, MassOrRadius::Mass(2e33)).unwrap();
        assert!((rb / ra - 2f64.powf(-1.0 / 3.0)).abs() < 1e-10);
    }
}
