//! Physical constants in CGS units.
//!
//! Exact SI-defining values (c, h, k) and CODATA 2018 for the measured ones;
//! solar mass is the commonly quoted 1.989e33 g and solar luminosity the IAU
//! 2015 nominal value.

use core::f64::consts::PI;

use crate::math::powi;

pub const G: f64 = 6.674_30e-8;
pub const C: f64 = 2.997_924_58e10;
pub const H: f64 = 6.626_070_15e-27;
pub const K_B: f64 = 1.380_649e-16;
/// Atomic mass unit, g.
pub const M_H: f64 = 1.660_539_066_60e-24;
/// Gas constant per mole, erg mol⁻¹ K⁻¹.
pub const R_GAS: f64 = 8.314_462_618e7;
pub const M_SUN: f64 = 1.989e33;
pub const L_SUN: f64 = 3.828e33;

/// Radiation constant `8π⁵k⁴/(15h³c³)`, erg cm⁻³ K⁻⁴.
pub fn a_rad() -> f64 {
    8.0 * powi(PI, 5) * powi(K_B, 4) / (15.0 * powi(H, 3) * powi(C, 3))
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PhysicalConstants {
    pub g: f64,
    pub c: f64,
    pub h: f64,
    pub m_h: f64,
    pub a_rad: f64,
    pub r_gas: f64,
    pub m_sun: f64,
    pub l_sun: f64,
}

pub fn constants() -> PhysicalConstants {
    PhysicalConstants {
        g: G,
        c: C,
        h: H,
        m_h: M_H,
        a_rad: a_rad(),
        r_gas: R_GAS,
        m_sun: M_SUN,
        l_sun: L_SUN,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_positive() {
        let k = constants();
        for v in [k.g, k.c, k.h, k.m_h, k.a_rad, k.r_gas, k.m_sun, k.l_sun] {
            assert!(v > 0.0);
        }
    }

    #[test]
    fn radiation_constant_value() {
        let a = a_rad();
        assert!(((a - 7.5657e-15) / 7.5657e-15).abs() < 1e-4, "{a}");
    }

    #[test]
    fn gas_constant_matches_boltzmann_per_mass_unit() {
        assert!((R_GAS - K_B / M_H).abs() / R_GAS < 1e-8);
    }
}
