use super::{EmdenProfile, PolytropeIndex};
use crate::error::{Error, Result};
use crate::math::{pos_pow, powf};

/// Homology invariants at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HomologyInvariants {
    /// Mass slope `d ln m / d ln r = −ξθⁿ/θ′`.
    pub u: f64,
    /// `−ξθ′/θ`.
    pub v: f64,
    /// `−d ln ρ / d ln r = n·v`.
    pub w: f64,
    pub z: f64,
    /// `−ξ^{1+ω̃}θ′`; `None` at n = 1.
    pub omega: Option<f64>,
}

impl HomologyInvariants {
    /// Invariants from a state `(ξ, θ, θ′)` with `θ > 0`. At ξ = 0 the
    /// regular-center limits are returned.
    pub fn from_state(n: PolytropeIndex, xi: f64, theta: f64, dtheta: f64) -> Self {
        let nv = n.value();
        let omega_tilde = n.omega_tilde();
        if xi == 0.0 {
            let omega = omega_tilde.map(|_| {
                if n.is_n0() {
                    1.0 / 3.0
                } else if nv > 1.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            });
            return Self { u: 3.0, v: 0.0, w: 0.0, z: 0.0, omega };
        }
        let u = -xi * pos_pow(theta, nv) / dtheta;
        let v = -xi * dtheta / theta;
        Self {
            u,
            v,
            w: nv * v,
            z: 3.0 - u,
            omega: omega_tilde.map(|wt| -powf(xi, 1.0 + wt) * dtheta),
        }
    }

    /// `(u vⁿ)^{1/(n−1)}`, the same quantity as `omega` written in the
    /// invariants alone.
    pub fn omega_from_uv(&self, n: PolytropeIndex) -> Option<f64> {
        n.omega_tilde()
            .map(|wt| powf(self.u * powf(self.v, n.value()), 0.5 * wt))
    }
}

/// Invariants on the profile at `xi`, from the precise state.
pub fn invariants_at(profile: &EmdenProfile, xi: f64) -> Result<HomologyInvariants> {
    let n = profile.index();
    let end = profile.xi_end();
    let inside = if n.is_n5() { xi <= end } else { xi < end };
    if !(xi >= 0.0 && inside) {
        return Err(Error::Domain { what: "xi outside [0, xi1)", value: xi });
    }
    let (theta, dtheta) = profile.state_at(xi)?;
    Ok(HomologyInvariants::from_state(n, xi, theta, dtheta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::emden::IntegratorOptions;

    fn profile(n: f64) -> EmdenProfile {
        EmdenProfile::solve(PolytropeIndex::new(n).unwrap(), IntegratorOptions::default()).unwrap()
    }

    #[test]
    fn center_limits() {
        let p = profile(2.0);
        let inv = invariants_at(&p, 0.0).unwrap();
        assert_eq!((inv.u, inv.z, inv.w), (3.0, 0.0, 0.0));
        let near = invariants_at(&p, 1e-4).unwrap();
        assert!((near.u - 3.0).abs() < 1e-8);
    }

    #[test]
    fn n1_closed_form() {
        let p = profile(1.0);
        let x = 2.0f64;
        let theta = x.sin() / x;
        let dtheta = (x * x.cos() - x.sin()) / (x * x);
        let inv = invariants_at(&p, x).unwrap();
        assert!((inv.u - (-x * theta / dtheta)).abs() < 1e-8);
        assert!(inv.omega.is_none());
    }

    #[test]
    fn n5_w_is_linear_in_u() {
        let p = profile(5.0);
        for x in [0.3, 1.0, 4.0, 30.0] {
            let inv = invariants_at(&p, x).unwrap();
            assert!((inv.w - 5.0 / 3.0 * (3.0 - inv.u)).abs() < 1e-8, "{x}");
        }
    }

    #[test]
    fn omega_two_ways() {
        for n in [1.5, 2.0, 3.0, 4.0] {
            let p = profile(n);
            let idx = p.index();
            for frac in [0.1, 0.5, 0.9] {
                let inv = invariants_at(&p, frac * p.xi_end()).unwrap();
                let a = inv.omega.unwrap();
                let b = inv.omega_from_uv(idx).unwrap();
                assert!((a - b).abs() < 1e-8 * a.abs().max(1.0), "{n} {frac}: {a} {b}");
            }
        }
    }

    #[test]
    fn beyond_surface_is_rejected() {
        let p = profile(3.0);
        assert!(invariants_at(&p, 7.0).is_err());
        assert!(invariants_at(&p, p.xi_end()).is_err());
    }
}
