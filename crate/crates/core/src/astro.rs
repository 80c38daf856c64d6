//! n = 3 stars: relativistic white dwarfs and Eddington's standard model.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::constants::{a_rad, C, G, H, M_H, M_SUN, R_GAS};
use crate::emden::{mass_radius_with, EmdenProfile, IntegratorOptions, MassOrRadius, PolytropeIndex, SurfaceConstants};
use crate::error::{Error, Result};
use crate::math::{abs, cbrt, ln, log10, powf, sqrt};
use crate::roots::{bisect, newton_polish};

/// Default mean molecular weight for solar composition.
pub const DEFAULT_MU: f64 = 0.61;
/// Electron-scattering opacity, cm²/g.
pub const DEFAULT_KAPPA: f64 = 0.34;

fn positive(what: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain { what, value })
    }
}

/// Surface constants of the n = 3 Emden function.
pub fn n3_surface() -> Result<SurfaceConstants> {
    let n3 = PolytropeIndex::new(3.0)?;
    Ok(*EmdenProfile::solve(n3, IntegratorOptions::default())?.surface().unwrap())
}

/// `M★ = (3√10 ₀ω₃/π³)(hc/G m_H^{4/3})^{3/2}`, in grams.
pub fn m_star(omega0_3: f64) -> f64 {
    3.0 * sqrt(10.0) * omega0_3 / (PI * PI * PI) * powf(H * C / (G * powf(M_H, 4.0 / 3.0)), 1.5)
}

/// `K = (hc/8)(3/π)^{1/3}(m_H μ_e)^{−4/3}` for relativistic degenerate electrons.
pub fn k_wd(mu_e: f64) -> Result<f64> {
    positive("mu_e", mu_e)?;
    Ok(H * C / 8.0 * cbrt(3.0 / PI) * powf(M_H * mu_e, -4.0 / 3.0))
}

/// `M_Ch = (π²/8√15) M★/μ_e²`.
pub fn chandrasekhar_mass(mu_e: f64, m_star: f64) -> Result<f64> {
    positive("mu_e", mu_e)?;
    Ok(PI * PI / (8.0 * sqrt(15.0)) * m_star / (mu_e * mu_e))
}

/// Chandrasekhar mass through the n = 3 mass-radius relation with `K_wd`.
pub fn chandrasekhar_mass_pipeline(mu_e: f64, n3: &SurfaceConstants) -> Result<f64> {
    let k = k_wd(mu_e)?;
    // Any radius: at n = 3 the mass does not depend on it.
    let (m, _) = mass_radius_with(n3, PolytropeIndex::new(3.0)?, k, MassOrRadius::Radius(1e9))?;
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WhiteDwarfModel {
    pub mu_e: f64,
    pub k_wd: f64,
    pub m_ch: f64,
    pub m_ch_pipeline: f64,
}

pub fn white_dwarf(mu_e: f64, n3: &SurfaceConstants) -> Result<WhiteDwarfModel> {
    let ms = m_star(n3.m1);
    Ok(WhiteDwarfModel {
        mu_e,
        k_wd: k_wd(mu_e)?,
        m_ch: chandrasekhar_mass(mu_e, ms)?,
        m_ch_pipeline: chandrasekhar_mass_pipeline(mu_e, n3)?,
    })
}

fn quartic(beta: f64, x: f64) -> f64 {
    (1.0 - beta) - x * x * beta * beta * beta * beta
}

/// Root of `(1−β)/β⁴ = x²` on (0, 1] by bisection alone.
pub fn eddington_beta_bisect(m: f64, mu: f64, m_star: f64) -> Result<f64> {
    let x = positive("mass", m)? * positive("mu", mu)? * mu / positive("M_star", m_star)?;
    bisect(|b| quartic(b, x), 0.0, 1.0, 1e-16)
}

/// Gas-pressure fraction from Eddington's quartic, bisection then Newton.
pub fn eddington_beta(m: f64, mu: f64, m_star: f64) -> Result<f64> {
    let seed = eddington_beta_bisect(m, mu, m_star)?;
    let x = m * mu * mu / m_star;
    let x2 = x * x;
    Ok(newton_polish(
        |b| (quartic(b, x), -1.0 - 4.0 * x2 * b * b * b),
        seed,
        0.0,
        1.0,
        1e-15,
    ))
}

/// `K = {[3(1−β)/a](𝓡/μβ)⁴}^{1/3}`.
pub fn k_zams(beta: f64, mu: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::Domain { what: "beta (0 < beta < 1; K vanishes without radiation)", value: beta });
    }
    positive("mu", mu)?;
    let g = R_GAS / (mu * beta);
    Ok(cbrt(3.0 * (1.0 - beta) / a_rad() * g * g * g * g))
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ZamsModel {
    pub m: f64,
    pub mu: f64,
    pub beta: f64,
    pub k: f64,
    pub m_star: f64,
    pub kappa_p: f64,
    pub l_edd: f64,
    /// `L_Edd (1 − β)`.
    pub l: f64,
    /// `L_Edd · 0.003 μ⁴β⁴ (M/M_⊙)²`, the rounded closed form.
    pub l_fit: f64,
}

/// `(L_Edd, L)` with `L_Edd = 4πcGM/κ_p` and `L = L_Edd(1 − β)`.
pub fn zams_luminosity(m: f64, mu: f64, kappa_p: f64, m_star: f64) -> Result<(f64, f64)> {
    positive("kappa_p", kappa_p)?;
    let beta = eddington_beta(m, mu, m_star)?;
    let l_edd = 4.0 * PI * C * G * m / kappa_p;
    Ok((l_edd, l_edd * (1.0 - beta)))
}

pub fn zams_model(m: f64, mu: f64, kappa_p: f64, m_star: f64) -> Result<ZamsModel> {
    let beta = eddington_beta(m, mu, m_star)?;
    let (l_edd, l) = zams_luminosity(m, mu, kappa_p, m_star)?;
    let b4 = beta * beta * beta * beta;
    let ms = m / M_SUN;
    Ok(ZamsModel {
        m,
        mu,
        beta,
        k: k_zams(beta, mu)?,
        m_star,
        kappa_p,
        l_edd,
        l,
        l_fit: l_edd * 0.003 * mu * mu * mu * mu * b4 * ms * ms,
    })
}

/// Least-squares slope of `log L` against `log M` over the given masses.
pub fn luminosity_slope(masses: &[f64], mu: f64, kappa_p: f64, m_star: f64) -> Result<f64> {
    if masses.len() < 2 {
        return Err(Error::Domain { what: "number of masses for a slope", value: masses.len() as f64 });
    }
    let pts: Vec<(f64, f64)> = masses
        .iter()
        .map(|&m| Ok((log10(m), log10(zams_luminosity(m, mu, kappa_p, m_star)?.1))))
        .collect::<Result<_>>()?;
    Ok(fit_slope(&pts))
}

pub(crate) fn fit_slope(pts: &[(f64, f64)]) -> f64 {
    let k = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
    let (mx, my) = (sx / k, sy / k);
    let (num, den) = pts
        .iter()
        .fold((0.0, 0.0), |(n, d), p| (n + (p.0 - mx) * (p.1 - my), d + (p.0 - mx) * (p.0 - mx)));
    num / den
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EntropyState {
    pub t: f64,
    pub rho: f64,
    pub mu: f64,
    pub s_rad: f64,
    pub s_gas: f64,
    /// `P_rad/P_gas = (1−β)/β`.
    pub pressure_ratio: f64,
}

pub fn entropies(t: f64, rho: f64, mu: f64) -> Result<EntropyState> {
    positive("temperature", t)?;
    positive("density", rho)?;
    positive("mu", mu)?;
    let a = a_rad();
    Ok(EntropyState {
        t,
        rho,
        mu,
        s_rad: 4.0 * a * t * t * t / (3.0 * rho),
        s_gas: R_GAS / mu * ln(powf(t, 2.5) / rho),
        pressure_ratio: t * t * t / rho * a * mu / (3.0 * R_GAS),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GasEntropyGradient {
    /// `dS_gas/d log P = (𝓡/μ)(5/(2(n+1)) − 1)`.
    pub value: f64,
    /// Subadiabatic (n > 3/2), so stable against convection.
    pub stable: bool,
}

pub fn gas_entropy_gradient(n: f64, mu: f64) -> Result<GasEntropyGradient> {
    if !(n >= 0.0) {
        return Err(Error::Domain { what: "polytropic index", value: n });
    }
    positive("mu", mu)?;
    let value = R_GAS / mu * (2.5 / (n + 1.0) - 1.0);
    let value = if abs(value) < 1e-15 * R_GAS { 0.0 } else { value };
    Ok(GasEntropyGradient { value, stable: n > 1.5 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ms() -> f64 {
        m_star(n3_surface().unwrap().m1)
    }

    #[test]
    fn k_wd_scaling() {
        let a = k_wd(2.0).unwrap() * 2f64.powf(4.0 / 3.0);
        let b = k_wd(1.3).unwrap() * 1.3f64.powf(4.0 / 3.0);
        assert!((a - b).abs() < 1e-12 * a);
        assert!((k_wd(2.0).unwrap() / 4.93e14 - 1.0).abs() < 5e-3);
        assert!(k_wd(0.0).is_err());
    }

    #[test]
    fn chandrasekhar_scales_inverse_square() {
        let m = ms();
        let r = chandrasekhar_mass(1.0, m).unwrap() / chandrasekhar_mass(2.0, m).unwrap();
        assert!((r - 4.0).abs() < 1e-12);
    }

    #[test]
    fn beta_limits() {
        let m = ms();
        assert!((eddington_beta(1e25, 0.61, m).unwrap() - 1.0).abs() < 1e-12);
        for big in [1e4, 1e6] {
            let mass = big * M_SUN;
            let x = mass * 0.61 * 0.61 / m;
            let b = eddington_beta(mass, 0.61, m).unwrap();
            // β = x^{-1/2}(1 - x^{-1/2}/4 + ...)
            assert!((b * x.sqrt() - 1.0).abs() < 0.3 / x.sqrt(), "{big}");
        }
    }

    #[test]
    fn beta_decreases_with_mass() {
        let m = ms();
        let mut prev = 1.0;
        for i in 0..40 {
            let mass = M_SUN * 10f64.powf(-1.0 + i as f64 * 0.1);
            let b = eddington_beta(mass, 0.61, m).unwrap();
            assert!(b < prev);
            prev = b;
        }
    }

    #[test]
    fn k_zams_behavior() {
        assert!(k_zams(1.0, 0.61).is_err());
        assert!(k_zams(0.5, 0.61).unwrap() > k_zams(0.6, 0.61).unwrap());
        let ratio = k_zams(1.0 - 1e-9, 0.61).unwrap() / k_zams(1.0 - 8e-9, 0.61).unwrap();
        assert!((ratio - 0.5).abs() < 1e-6);
    }

    #[test]
    fn entropy_identities() {
        let s = entropies(1e7, 100.0, 0.61).unwrap();
        assert!(s.pressure_ratio < 1.0);
        assert!((s.s_rad - 4.0 * R_GAS / 0.61 * s.pressure_ratio).abs() < 1e-12 * s.s_rad);
        let d = entropies(2e7, 800.0, 0.61).unwrap();
        assert!((d.s_rad - s.s_rad).abs() < 1e-12 * s.s_rad);
    }

    #[test]
    fn entropy_gradient_signs() {
        let g = gas_entropy_gradient(1.5, 0.61).unwrap();
        assert_eq!(g.value, 0.0);
        assert!(!g.stable);
        let g3 = gas_entropy_gradient(3.0, 0.61).unwrap();
        // Negative in log P: entropy rises outward.
        assert!(g3.value < 0.0);
        assert!(g3.stable);
        let g1 = gas_entropy_gradient(1.0, 0.61).unwrap();
        assert!(g1.value > 0.0 && !g1.stable);
    }

    #[test]
    fn fit_form_tracks_exact_luminosity() {
        let m = ms();
        let z = zams_model(M_SUN, 0.61, 0.34, m).unwrap();
        assert!(z.l > 0.0 && z.l.is_finite());
        assert!((z.l_fit / z.l - 1.0).abs() < 0.02);
    }
}
