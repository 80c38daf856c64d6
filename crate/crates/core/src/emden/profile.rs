use alloc::vec::Vec;

use super::{PolytropeIndex, SurfaceConstants};
use crate::error::{Error, Result};
use crate::math::pos_pow;
use crate::ode::{hermite, integrate_to, Stepper, StepperOptions};

/// Largest radius at which the central series may be used.
pub const TAYLOR_MAX_XI: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IntegratorOptions {
    /// Radius where the central series hands over to the integrator.
    pub xi0: f64,
    pub rtol: f64,
    pub atol: f64,
    /// Step cap, which also bounds the Hermite interpolation error.
    pub h_max: f64,
    /// Outer radius for n = 5, which has no surface.
    pub xi_max: f64,
    pub max_steps: usize,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self { xi0: 1e-3, rtol: 1e-10, atol: 1e-14, h_max: 0.05, xi_max: 100.0, max_steps: 500_000 }
    }
}

impl IntegratorOptions {
    pub fn with_rtol(mut self, rtol: f64) -> Self {
        self.rtol = rtol;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProfileNode {
    pub xi: f64,
    pub theta: f64,
    pub dtheta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IntegratorMeta {
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

/// Regular solution θ(ξ) of `(ξ²θ′)′ = −ξ²θⁿ` with θ(0) = 1, θ′(0) = 0.
///
/// Nodes are the accepted integrator steps, starting at ξ₀ and all with
/// θ > 0. For n < 5 the step that crossed θ = 0 is kept separately as the
/// bracket for the surface.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EmdenProfile {
    pub(crate) index: PolytropeIndex,
    pub(crate) nodes: Vec<ProfileNode>,
    pub(crate) overshoot: Option<ProfileNode>,
    pub(crate) surface: Option<SurfaceConstants>,
    pub(crate) options: IntegratorOptions,
    pub(crate) meta: IntegratorMeta,
}

/// Central series through ξ⁶ and its derivative.
pub fn taylor_start(n: PolytropeIndex, xi: f64) -> Result<(f64, f64)> {
    if !(0.0..=TAYLOR_MAX_XI).contains(&xi) {
        return Err(Error::Domain { what: "series start radius (0 <= xi <= 0.1)", value: xi });
    }
    let n = n.value();
    let x2 = xi * xi;
    let c6 = -n * (8.0 * n - 5.0) / 15120.0;
    let theta = 1.0 + x2 * (-1.0 / 6.0 + x2 * (n / 120.0 + x2 * c6));
    let dtheta = xi * (-1.0 / 3.0 + x2 * (n / 30.0 + x2 * 6.0 * c6));
    Ok((theta, dtheta))
}

pub(crate) fn lane_emden_rhs(n: f64) -> impl Fn(f64, &[f64; 2]) -> [f64; 2] {
    move |xi, y| [y[1], -pos_pow(y[0], n) - 2.0 * y[1] / xi]
}

/// Integrate outward from the series start until θ changes sign (n < 5) or
/// ξ reaches `xi_max` (n = 5).
pub fn integrate_profile(n: PolytropeIndex, opts: IntegratorOptions) -> Result<EmdenProfile> {
    let (theta0, dtheta0) = taylor_start(n, opts.xi0)?;
    let rhs = lane_emden_rhs(n.value());
    let stepper_opts = StepperOptions {
        rtol: opts.rtol,
        atol: opts.atol,
        h_init: opts.xi0.min(1e-3),
        h_max: opts.h_max,
        h_min: 1e-14,
        max_steps: opts.max_steps,
    };
    let mut stepper = Stepper::new(&rhs, opts.xi0, [theta0, dtheta0], stepper_opts);
    let mut nodes = alloc::vec![ProfileNode { xi: opts.xi0, theta: theta0, dtheta: dtheta0 }];
    let limit = if n.is_n5() { opts.xi_max } else { f64::INFINITY };
    let mut overshoot = None;
    loop {
        let step = stepper.step(&rhs, limit).map_err(|e| match e {
            Error::Integration { .. } if !n.is_n5() => {
                Error::SurfaceNotFound { n: n.value(), last_xi: stepper.t }
            }
            other => other,
        })?;
        let node = ProfileNode { xi: step.t1, theta: step.y1[0], dtheta: step.y1[1] };
        if node.theta <= 0.0 {
            overshoot = Some(node);
            break;
        }
        nodes.push(node);
        if n.is_n5() && step.t1 >= opts.xi_max {
            break;
        }
    }
    Ok(EmdenProfile {
        index: n,
        nodes,
        overshoot,
        surface: None,
        options: opts,
        meta: IntegratorMeta { accepted_steps: stepper.accepted, rejected_steps: stepper.rejected },
    })
}

impl EmdenProfile {
    /// Integrate and attach the surface constants.
    pub fn solve(n: PolytropeIndex, opts: IntegratorOptions) -> Result<Self> {
        let mut profile = integrate_profile(n, opts)?;
        let surface = super::find_surface(&profile)?;
        profile.surface = Some(surface);
        Ok(profile)
    }

    pub fn index(&self) -> PolytropeIndex {
        self.index
    }

    pub fn nodes(&self) -> &[ProfileNode] {
        &self.nodes
    }

    pub fn overshoot(&self) -> Option<&ProfileNode> {
        self.overshoot.as_ref()
    }

    pub fn surface(&self) -> Option<&SurfaceConstants> {
        self.surface.as_ref()
    }

    pub fn options(&self) -> &IntegratorOptions {
        &self.options
    }

    pub fn meta(&self) -> IntegratorMeta {
        self.meta
    }

    pub fn xi0(&self) -> f64 {
        self.nodes[0].xi
    }

    /// Largest radius at which the profile can be evaluated: ξ₁ when the
    /// surface is known, else the last stored node.
    pub fn xi_end(&self) -> f64 {
        match (&self.surface, &self.overshoot) {
            (Some(s), _) if s.xi1.is_finite() => s.xi1,
            (_, Some(o)) => o.xi,
            _ => self.nodes[self.nodes.len() - 1].xi,
        }
    }

    fn rhs(&self) -> impl Fn(f64, &[f64; 2]) -> [f64; 2] {
        lane_emden_rhs(self.index.value())
    }

    fn check_range(&self, xi: f64) -> Result<()> {
        if !(0.0..=self.xi_end()).contains(&xi) {
            return Err(Error::Domain { what: "xi outside the profile", value: xi });
        }
        Ok(())
    }

    /// Index of the last node with `node.xi <= xi`.
    fn node_below(&self, xi: f64) -> usize {
        self.nodes.partition_point(|nd| nd.xi <= xi).saturating_sub(1)
    }

    /// (θ, θ′) at `xi` by re-integrating from the nearest node below. Exact
    /// to integrator tolerance; used wherever the interpolant is too coarse.
    pub fn state_at(&self, xi: f64) -> Result<(f64, f64)> {
        self.check_range(xi)?;
        if xi < self.xi0() {
            return taylor_start(self.index, xi);
        }
        let i = self.node_below(xi);
        let node = self.nodes[i];
        if xi == node.xi {
            return Ok((node.theta, node.dtheta));
        }
        let spacing = match self.nodes.get(i + 1) {
            Some(next) => next.xi - node.xi,
            None => self.options.h_max,
        };
        let y = integrate_to(&self.rhs(), node.xi, &[node.theta, node.dtheta], xi, spacing.max(1e-6));
        Ok((y[0], y[1]))
    }

    /// (θ, θ′) from cubic Hermite interpolation between accepted steps.
    pub fn interpolate(&self, xi: f64) -> Result<(f64, f64)> {
        self.check_range(xi)?;
        if xi < self.xi0() {
            return taylor_start(self.index, xi);
        }
        let i = self.node_below(xi);
        let a = self.nodes[i];
        let b = match self.nodes.get(i + 1) {
            Some(b) => *b,
            None => match self.overshoot {
                Some(o) => o,
                None => return Ok((a.theta, a.dtheta)),
            },
        };
        let n = self.index.value();
        let dd = |nd: &ProfileNode| -pos_pow(nd.theta, n) - 2.0 * nd.dtheta / nd.xi;
        let theta = hermite(a.xi, a.theta, a.dtheta, b.xi, b.theta, b.dtheta, xi).0;
        let dtheta = hermite(a.xi, a.dtheta, dd(&a), b.xi, b.dtheta, dd(&b), xi).0;
        Ok((theta, dtheta))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(n: f64) -> PolytropeIndex {
        PolytropeIndex::new(n).unwrap()
    }

    #[test]
    fn series_at_center() {
        assert_eq!(taylor_start(idx(3.0), 0.0).unwrap(), (1.0, 0.0));
    }

    #[test]
    fn series_n1_matches_sinc() {
        let (t, d) = taylor_start(idx(1.0), 0.1).unwrap();
        let x = 0.1f64;
        assert!((t - x.sin() / x).abs() < 1e-12);
        assert!((d - (x * x.cos() - x.sin()) / (x * x)).abs() < 1e-10);
    }

    #[test]
    fn series_n3_matches_printed_expansion() {
        let (t, _) = taylor_start(idx(3.0), 0.1).unwrap();
        let x = 0.1f64;
        let expect = 1.0 - x.powi(2) / 6.0 + 3.0 * x.powi(4) / 120.0 - 19.0 * x.powi(6) / 5040.0;
        assert!((t - expect).abs() < 1e-12);
    }

    #[test]
    fn series_domain_error() {
        assert!(taylor_start(idx(2.0), 0.2).is_err());
        assert!(taylor_start(idx(2.0), -1e-9).is_err());
    }

    #[test]
    fn grid_is_positive_and_decreasing() {
        let p = integrate_profile(idx(2.5), IntegratorOptions::default()).unwrap();
        for w in p.nodes().windows(2) {
            assert!(w[1].xi > w[0].xi);
            assert!(w[1].theta < w[0].theta);
            assert!(w[1].theta > 0.0);
            assert!(w[1].dtheta <= 0.0);
        }
        assert!(p.overshoot().unwrap().theta <= 0.0);
    }

    #[test]
    fn step_budget_error() {
        let opts = IntegratorOptions { max_steps: 20, ..Default::default() };
        let err = integrate_profile(idx(3.0), opts).unwrap_err();
        assert!(matches!(err, Error::SurfaceNotFound { .. }), "{err:?}");
    }

    #[test]
    fn n5_stops_at_xi_max() {
        let opts = IntegratorOptions { xi_max: 20.0, ..Default::default() };
        let p = integrate_profile(idx(5.0), opts).unwrap();
        assert_eq!(p.nodes().last().unwrap().xi, 20.0);
        assert!(p.overshoot().is_none());
    }

    #[test]
    fn interpolant_close_to_precise_state() {
        let p = integrate_profile(idx(3.0), IntegratorOptions::default()).unwrap();
        for &x in &[0.5, 1.234, 3.3, 5.9] {
            let (a, da) = p.interpolate(x).unwrap();
            let (b, db) = p.state_at(x).unwrap();
            assert!((a - b).abs() < 1e-8, "{x}: {a} vs {b}");
            assert!((da - db).abs() < 1e-8);
        }
    }
}
