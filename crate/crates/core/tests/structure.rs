//! Pointwise identities of the Emden profile, the invariant curve, the
//! approximants and the n = 3 models, checked across modules.

use emden_core::approximants::{picard_theta, Approximant, ApproximantKind};
use emden_core::astro::{eddington_beta, k_zams, m_star, n3_surface, DEFAULT_MU};
use emden_core::constants::M_SUN;
use emden_core::emden::{invariants_at, mass_radius_with, MassOrRadius};
use emden_core::invariant_plane::{integrate_wu, reconstruct};
use emden_core::{EmdenProfile, IntegratorOptions, PolytropeIndex};

fn solve(n: f64) -> EmdenProfile {
    EmdenProfile::solve(PolytropeIndex::new(n).unwrap(), IntegratorOptions::default()).unwrap()
}

/// Fourth-order central difference.
fn d4(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

#[test]
fn lane_emden_residual_on_nodes() {
    for n in [0.0, 1.0, 1.5, 3.0, 4.5] {
        let p = solve(n);
        let tol = p.options().rtol;
        let xi1 = p.surface().unwrap().xi1;
        for node in p.nodes().iter().filter(|q| q.xi > 3e-3 && q.xi < xi1 * (1.0 - 1e-4)) {
            // θⁿ is not smooth at the surface; shrink the stencil there.
            let h = 1e-3f64.min((xi1 - node.xi) / 8.0);
            let flux = |x: f64| {
                let (_, d) = p.state_at(x).unwrap();
                x * x * d
            };
            let lhs = d4(flux, node.xi, h);
            let rhs = node.xi * node.xi * node.theta.max(0.0).powf(n);
            // Tolerance is relative; the terms carry a factor ξ².
            let res = lhs + rhs;
            assert!(res.abs() <= 10.0 * tol * node.xi.powi(2).max(1.0), "n={n} xi={} res={res}", node.xi);
        }
    }
}

#[test]
fn omega_two_ways_along_profiles() {
    for n in [1.5, 2.0, 3.0, 4.0] {
        let p = solve(n);
        let idx = p.index();
        let xi1 = p.surface().unwrap().xi1;
        for i in 1..50 {
            let inv = invariants_at(&p, xi1 * i as f64 / 50.0).unwrap();
            let a = inv.omega.unwrap();
            let b = inv.omega_from_uv(idx).unwrap();
            assert!((a - b).abs() <= 1e-8 * a.abs().max(1.0), "n={n} {a} {b}");
        }
    }
}

#[test]
fn log_derivative_of_u() {
    for n in [1.5, 3.0, 4.0] {
        let p = solve(n);
        let xi1 = p.surface().unwrap().xi1;
        let ln_u = |s: f64| invariants_at(&p, s.exp()).unwrap().u.ln();
        for i in 2..18 {
            let xi = xi1 * i as f64 / 20.0;
            let inv = invariants_at(&p, xi).unwrap();
            let numeric = d4(ln_u, xi.ln(), 1e-3);
            assert!((numeric - (3.0 - inv.u - inv.w)).abs() < 1e-6, "n={n} xi={xi}");
        }
    }
}

#[test]
fn log_derivative_of_w_along_curve() {
    // d ln w / d ln r = u − 1 + w/n, with r taken from the reconstruction.
    for n in [2.0, 3.0] {
        let idx = PolytropeIndex::new(n).unwrap();
        let rec = reconstruct(&integrate_wu(idx).unwrap()).unwrap();
        let pts: Vec<_> = rec.points.iter().filter(|q| q.z > 0.05 && q.r_frac < 0.95).collect();
        for w in pts.windows(5).step_by(7) {
            let x: Vec<f64> = w.iter().map(|q| q.r_frac.ln()).collect();
            let y: Vec<f64> = w.iter().map(|q| q.w.ln()).collect();
            let slope = lagrange_slope(&x, &y, 2);
            let b = w[2];
            let expect = (3.0 - b.z) - 1.0 + b.w / n;
            assert!((slope - expect).abs() < 1e-6, "n={n} z={} {slope} {expect}", b.z);
        }
    }
}

/// Derivative at `x[k]` of the polynomial through all points.
fn lagrange_slope(x: &[f64], y: &[f64], k: usize) -> f64 {
    let mut sum = 0.0;
    for j in 0..x.len() {
        let weight = if j == k {
            (0..x.len()).filter(|&m| m != k).map(|m| 1.0 / (x[k] - x[m])).sum()
        } else {
            let mut p = 1.0 / (x[j] - x[k]);
            for m in (0..x.len()).filter(|&m| m != j && m != k) {
                p *= (x[k] - x[m]) / (x[j] - x[m]);
            }
            p
        };
        sum += weight * y[j];
    }
    sum
}

#[test]
fn n5_pressure_invariant() {
    let p = solve(5.0);
    for x in [0.1, 1.0, 5.0, 30.0, 90.0] {
        let inv = invariants_at(&p, x).unwrap();
        assert!((inv.v - (1.0 - inv.u / 3.0)).abs() < 1e-8);
    }
}

#[test]
fn picard_overestimates_outside_core() {
    let p = solve(3.0);
    let n3 = p.index();
    let xi1 = p.surface().unwrap().xi1;
    for i in 0..=40 {
        let xi = 3.9 + (xi1 - 3.9) * i as f64 / 40.0;
        assert!(picard_theta(n3, xi).unwrap() >= p.state_at(xi).unwrap().0);
    }
}

#[test]
fn approximants_decrease_on_their_domains() {
    let n3 = PolytropeIndex::new(3.0).unwrap();
    for kind in [ApproximantKind::Picard, ApproximantKind::Pade3, ApproximantKind::Taylor { order: 2 }] {
        let a = Approximant::new(kind, n3).unwrap();
        let hi = a.domain.1.min(6.0);
        let mut prev = f64::INFINITY;
        for i in 0..=300 {
            let v = a.eval(hi * i as f64 / 300.0).unwrap();
            assert!(v < prev || i == 0, "{kind:?}");
            prev = v;
        }
    }
}

#[test]
fn eddington_residual_is_monotone() {
    for x in [0.01f64, 0.3, 1.0, 10.0, 1e3] {
        let mut prev = f64::INFINITY;
        for i in 1..=1000 {
            let b = i as f64 / 1000.0;
            let r = (1.0 - b) - x * x * b.powi(4);
            assert!(r < prev);
            prev = r;
        }
    }
}

#[test]
fn zams_mass_round_trip() {
    let n3 = n3_surface().unwrap();
    let ms = m_star(n3.m1);
    let idx = PolytropeIndex::new(3.0).unwrap();
    for msun in [0.5, 1.0, 10.0, 60.0] {
        let m = msun * M_SUN;
        let beta = eddington_beta(m, DEFAULT_MU, ms).unwrap();
        let k = k_zams(beta, DEFAULT_MU).unwrap();
        let (back, _) = mass_radius_with(&n3, idx, k, MassOrRadius::Radius(7e10)).unwrap();
        assert!((back / m - 1.0).abs() < 0.01, "{msun}: {}", back / M_SUN);
    }
}

#[test]
fn curve_constants_match_direct_integration() {
    for n in [1.5, 3.0, 4.5] {
        let p = solve(n);
        let s = p.surface().unwrap();
        let c = reconstruct(&integrate_wu(p.index()).unwrap()).unwrap().surface;
        assert!((c.xi1 / s.xi1 - 1.0).abs() < 1e-8);
        assert!((c.rho_ratio / s.rho_ratio - 1.0).abs() < 1e-8);
        assert!((c.omega0.unwrap() / s.omega0.unwrap() - 1.0).abs() < 1e-8);
    }
}
