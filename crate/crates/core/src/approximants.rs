//! Closed-form approximations to Emden functions and their error against
//! the integrated profile.

use alloc::vec;
use alloc::vec::Vec;

use crate::emden::{EmdenProfile, PolytropeIndex};
use crate::error::{Error, Result};
use crate::math::{abs, powf};
use crate::roots::bisect;
use crate::series::{binomial, q, to_f64, Series, Q};

/// Coefficients of θ₃ in powers of ξ², through ξ¹⁰, from the series recursion.
pub fn theta3_coefficients() -> Vec<Q> {
    crate::series::lane_emden(q(3, 1), 6).coeffs().to_vec()
}

/// The commonly quoted rounded tenth-order polynomial for θ₃. Its last
/// coefficient is not the series value (−8.5763e-5) and is kept as quoted.
pub const POLY10_3: [f64; 6] = [1.0, -0.166_666_7, 0.025, -0.003_769_8, 0.000_568_6, -0.000_068_72];

/// General-n series coefficients in ξ² through ξ⁶.
pub fn taylor_coefficients(n: Q) -> [Q; 4] {
    [q(1, 1), q(-1, 6), n / q(120, 1), -n * (q(8, 1) * n - q(5, 1)) / q(15120, 1)]
}

/// Picard closed form expanded in ξ²: `(1 + x/6N)^{−N}` with `N = 5/(3n−5)`.
pub fn picard_series(n: Q, len: usize) -> Result<Series> {
    let denom = q(3, 1) * n - q(5, 1);
    if denom == q(0, 1) {
        return Err(Error::UndefinedForIndex { what: "Picard exponent N", n: to_f64(n) });
    }
    let big_n = q(5, 1) / denom;
    Ok(binomial((q(6, 1) * big_n).recip(), -big_n, len))
}

const PADE_NUM: [(i128, i128); 3] = [(1, 1), (-1, 108), (-11, 45360)];
const PADE_DEN: [(i128, i128); 3] = [(1, 1), (17, 108), (1, 1008)];

/// Padé form of θ₃ expanded in ξ².
pub fn pade3_series(len: usize) -> Series {
    let num = Series::new(PADE_NUM.iter().map(|&(a, b)| q(a, b)).collect(), len);
    let den = Series::new(PADE_DEN.iter().map(|&(a, b)| q(a, b)).collect(), len);
    &num * &den.recip()
}

fn poly_x(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// `(1 + ξ²/6N)^{−N}`; the base must stay nonnegative.
pub fn picard_theta(n: PolytropeIndex, xi: f64) -> Result<f64> {
    let big_n = n
        .picard_exponent()
        .ok_or(Error::UndefinedForIndex { what: "Picard exponent N", n: n.value() })?;
    let base = 1.0 + xi * xi / (6.0 * big_n);
    if base < 0.0 || (base == 0.0 && big_n > 0.0) {
        return Err(Error::Domain { what: "xi outside the Picard positivity domain", value: xi });
    }
    Ok(powf(base, -big_n))
}

/// Truncated central series of even `order`: up to 6 for any n, up to 10 for n = 3.
pub fn taylor_theta(n: PolytropeIndex, xi: f64, order: u32) -> Result<f64> {
    let max = if n.value() == 3.0 { 10 } else { 6 };
    if order < 2 || order > max || !order.is_multiple_of(2) {
        return Err(Error::Domain { what: "series order", value: order as f64 });
    }
    let terms = order as usize / 2 + 1;
    let coeffs: Vec<f64> = if n.value() == 3.0 {
        theta3_coefficients()[..terms].iter().map(|c| to_f64(*c)).collect()
    } else {
        let nv = n.value();
        vec![1.0, -1.0 / 6.0, nv / 120.0, -nv * (8.0 * nv - 5.0) / 15120.0][..terms].to_vec()
    };
    Ok(poly_x(&coeffs, xi * xi))
}

/// `(1 − ξ²/108 − 11ξ⁴/45360) / (1 + 17ξ²/108 + ξ⁴/1008)`.
pub fn pade_theta3(xi: f64) -> Result<f64> {
    if !(xi >= 0.0) {
        return Err(Error::Domain { what: "xi", value: xi });
    }
    let x = xi * xi;
    let num: Vec<f64> = PADE_NUM.iter().map(|&(a, b)| a as f64 / b as f64).collect();
    let den: Vec<f64> = PADE_DEN.iter().map(|&(a, b)| a as f64 / b as f64).collect();
    Ok(poly_x(&num, x) / poly_x(&den, x))
}

/// First zero of the Padé form, by bisection on [6, 8].
pub fn pade_theta3_zero() -> Result<f64> {
    bisect(|x| pade_theta3(x).unwrap_or(f64::NAN), 6.0, 8.0, 1e-13)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ApproximantKind {
    Taylor { order: u32 },
    Picard,
    Pade3,
    Poly10_3,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Approximant {
    pub kind: ApproximantKind,
    pub n: PolytropeIndex,
    /// Closed interval of ξ on which the formula is defined.
    pub domain: (f64, f64),
}

impl Approximant {
    pub fn new(kind: ApproximantKind, n: PolytropeIndex) -> Result<Self> {
        let three = n.value() == 3.0;
        let domain = match kind {
            ApproximantKind::Taylor { order } => {
                taylor_theta(n, 0.0, order)?;
                (0.0, f64::INFINITY)
            }
            ApproximantKind::Picard => {
                let big_n = n
                    .picard_exponent()
                    .ok_or(Error::UndefinedForIndex { what: "Picard exponent N", n: n.value() })?;
                if big_n < 0.0 {
                    (0.0, crate::math::sqrt(-6.0 * big_n))
                } else {
                    (0.0, f64::INFINITY)
                }
            }
            ApproximantKind::Pade3 | ApproximantKind::Poly10_3 if !three => {
                return Err(Error::UndefinedForIndex { what: "n = 3 approximant", n: n.value() })
            }
            ApproximantKind::Pade3 | ApproximantKind::Poly10_3 => (0.0, f64::INFINITY),
        };
        Ok(Self { kind, n, domain })
    }

    pub fn eval(&self, xi: f64) -> Result<f64> {
        if !(self.domain.0..=self.domain.1).contains(&xi) {
            return Err(Error::Domain { what: "xi outside the approximant domain", value: xi });
        }
        match self.kind {
            ApproximantKind::Taylor { order } => taylor_theta(self.n, xi, order),
            ApproximantKind::Picard => picard_theta(self.n, xi),
            ApproximantKind::Pade3 => pade_theta3(xi),
            ApproximantKind::Poly10_3 => Ok(poly_x(&POLY10_3, xi * xi)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ErrorReport {
    pub xi_range: (f64, f64),
    pub samples: usize,
    pub max_abs_error: f64,
    pub xi_at_max_abs: f64,
    /// Relative to the exact θ; points where θ = 0 are skipped.
    pub max_rel_error: f64,
    pub xi_at_max_rel: f64,
    /// First zero of the approximant minus ξ₁, when both lie in the range.
    pub zero_offset: Option<f64>,
}

/// One row of a comparison table.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ComparisonPoint {
    pub xi: f64,
    pub exact: f64,
    pub approx: f64,
}

pub const COMPARE_SAMPLES: usize = 2001;

/// Exact and approximate θ on a uniform grid clipped to both domains.
pub fn comparison_table(
    approx: &Approximant,
    exact: &EmdenProfile,
    xi_range: (f64, f64),
    samples: usize,
) -> Result<Vec<ComparisonPoint>> {
    let lo = xi_range.0.max(approx.domain.0).max(0.0);
    let hi = xi_range.1.min(approx.domain.1).min(exact.xi_end());
    if !(hi > lo) || samples < 2 {
        return Err(Error::Domain { what: "empty comparison range", value: hi - lo });
    }
    (0..samples)
        .map(|i| {
            let xi = lo + (hi - lo) * i as f64 / (samples - 1) as f64;
            Ok(ComparisonPoint { xi, exact: exact.state_at(xi)?.0, approx: approx.eval(xi)? })
        })
        .collect()
}

/// Error metrics of an approximant against the integrated profile.
pub fn compare(approx: &Approximant, exact: &EmdenProfile, xi_range: (f64, f64)) -> Result<ErrorReport> {
    let table = comparison_table(approx, exact, xi_range, COMPARE_SAMPLES)?;
    let mut report = ErrorReport {
        xi_range: (table[0].xi, table[table.len() - 1].xi),
        samples: table.len(),
        max_abs_error: 0.0,
        xi_at_max_abs: table[0].xi,
        max_rel_error: 0.0,
        xi_at_max_rel: table[0].xi,
        zero_offset: None,
    };
    for p in &table {
        let err = abs(p.approx - p.exact);
        if err > report.max_abs_error {
            report.max_abs_error = err;
            report.xi_at_max_abs = p.xi;
        }
        if p.exact > 0.0 && err / p.exact > report.max_rel_error {
            report.max_rel_error = err / p.exact;
            report.xi_at_max_rel = p.xi;
        }
    }
    if let Some(xi1) = exact.surface().map(|s| s.xi1).filter(|x| x.is_finite()) {
        if let Some(k) = table.windows(2).position(|w| w[0].approx > 0.0 && w[1].approx <= 0.0) {
            let zero = bisect(|x| approx.eval(x).unwrap_or(f64::NAN), table[k].xi, table[k + 1].xi, 1e-13)?;
            if xi1 <= report.xi_range.1 {
                report.zero_offset = Some(zero - xi1);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::emden::IntegratorOptions;
    use crate::series::lane_emden;

    fn idx(n: f64) -> PolytropeIndex {
        PolytropeIndex::new(n).unwrap()
    }

    #[test]
    fn theta3_tenth_order_coefficient() {
        let c = theta3_coefficients();
        assert_eq!(c[4], q(619, 1_088_640));
        assert_eq!(c[5], q(-17117, 199_584_000));
    }

    #[test]
    fn general_coefficients_match_recursion() {
        for (a, b) in [(1, 2), (3, 2), (2, 1), (9, 2)] {
            let n = q(a, b);
            let s = lane_emden(n, 4);
            assert_eq!(s.coeffs(), &taylor_coefficients(n));
        }
    }

    #[test]
    fn picard_sixth_order_coefficient() {
        for (a, b) in [(1, 1), (3, 1), (4, 1), (1, 2)] {
            let n = q(a, b);
            let s = picard_series(n, 4).unwrap();
            assert_eq!(s.coeff(2), n / q(120, 1));
            assert_eq!(s.coeff(3), -n * (q(6, 1) * n - q(5, 1)) / q(10800, 1));
        }
        assert!(picard_series(q(5, 3), 4).is_err());
    }

    #[test]
    fn picard_exact_cases() {
        for xi in [0.3, 1.0, 2.2] {
            assert!((picard_theta(idx(0.0), xi).unwrap() - (1.0 - xi * xi / 6.0)).abs() < 1e-15);
            let n5 = (1.0 + xi * xi / 3.0).powf(-0.5);
            assert!((picard_theta(idx(5.0), xi).unwrap() - n5).abs() < 1e-15);
        }
        assert!(picard_theta(idx(1.0), 4.0).is_err());
        assert!(picard_theta(idx(5.0 / 3.0), 1.0).is_err());
    }

    #[test]
    fn pade_series_and_zero() {
        let s = pade3_series(6);
        let exact = theta3_coefficients();
        for (k, c) in exact.iter().enumerate().take(5) {
            assert_eq!(s.coeff(k), *c, "{k}");
        }
        assert!((to_f64(s.coeff(5)) + 0.000_085_761_8).abs() < 1e-10);
        let z = pade_theta3_zero().unwrap();
        assert!((z - 6.921).abs() < 1e-3, "{z}");
    }

    #[test]
    fn series_orders() {
        let n3 = idx(3.0);
        let v = taylor_theta(n3, 1.0, 10).unwrap();
        let expect = 1.0 - 1.0 / 6.0 + 1.0 / 40.0 - 19.0 / 5040.0 + 619.0 / 1_088_640.0 - 17117.0 / 199_584_000.0;
        assert!((v - expect).abs() < 1e-15);
        assert!(taylor_theta(idx(2.0), 1.0, 8).is_err());
        assert!(taylor_theta(n3, 1.0, 3).is_err());
        assert_eq!(taylor_theta(idx(2.0), 0.0, 6).unwrap(), 1.0);
    }

    #[test]
    fn decreasing_on_domains() {
        let n3 = idx(3.0);
        let kinds = [ApproximantKind::Picard, ApproximantKind::Pade3, ApproximantKind::Taylor { order: 4 }];
        for kind in kinds {
            let a = Approximant::new(kind, n3).unwrap();
            let mut prev = a.eval(0.0).unwrap();
            assert_eq!(prev, 1.0);
            for i in 1..55 {
                let v = a.eval(i as f64 * 0.03).unwrap();
                assert!(v < prev, "{kind:?}");
                prev = v;
            }
        }
    }

    #[test]
    fn exact_approximant_has_no_error() {
        let p = EmdenProfile::solve(idx(0.0), IntegratorOptions::default()).unwrap();
        let a = Approximant::new(ApproximantKind::Taylor { order: 2 }, idx(0.0)).unwrap();
        let r = compare(&a, &p, (0.0, 2.4)).unwrap();
        assert!(r.max_abs_error < 1e-12);
    }
}
