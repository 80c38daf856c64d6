use crate::error::{Error, Result};
use crate::math::abs;

const EPS: f64 = 1e-12;

/// Polytropic index `n ∈ [0, 5]` and the exponents derived from it.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "f64", into = "f64"))]
pub struct PolytropeIndex(f64);

impl PolytropeIndex {
    pub fn new(n: f64) -> Result<Self> {
        if !(0.0..=5.0).contains(&n) {
            return Err(Error::Domain { what: "polytropic index (0 <= n <= 5)", value: n });
        }
        Ok(Self(n))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Scaling weight `ω̃ = 2/(n−1)`; `None` at n = 1 where it is ±∞.
    pub fn omega_tilde(self) -> Option<f64> {
        if self.is_n1() {
            None
        } else {
            Some(2.0 / (self.0 - 1.0))
        }
    }

    /// Picard exponent `N = 5/(3n−5)`; `None` at n = 5/3.
    pub fn picard_exponent(self) -> Option<f64> {
        if self.is_singular_picard() {
            None
        } else {
            Some(5.0 / (3.0 * self.0 - 5.0))
        }
    }

    /// z-plane Picard exponent `J = (9n−10)/(7−n)`, finite on the whole range.
    pub fn z_plane_exponent(self) -> f64 {
        (9.0 * self.0 - 10.0) / (7.0 - self.0)
    }

    pub fn is_n0(self) -> bool {
        self.0 == 0.0
    }

    pub fn is_n1(self) -> bool {
        abs(self.0 - 1.0) < EPS
    }

    pub fn is_n5(self) -> bool {
        abs(self.0 - 5.0) < EPS
    }

    pub fn is_singular_picard(self) -> bool {
        abs(self.0 - 5.0 / 3.0) < EPS
    }
}

impl TryFrom<f64> for PolytropeIndex {
    type Error = Error;
    fn try_from(n: f64) -> Result<Self> {
        Self::new(n)
    }
}

impl From<PolytropeIndex> for f64 {
    fn from(n: PolytropeIndex) -> f64 {
        n.0
    }
}

impl core::fmt::Display for PolytropeIndex {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_is_enforced() {
        assert!(PolytropeIndex::new(-0.1).is_err());
        assert!(PolytropeIndex::new(5.01).is_err());
        assert!(PolytropeIndex::new(f64::NAN).is_err());
        assert!(PolytropeIndex::new(5.0).is_ok());
    }

    #[test]
    fn derived_exponents() {
        let n3 = PolytropeIndex::new(3.0).unwrap();
        assert_eq!(n3.omega_tilde(), Some(1.0));
        assert_eq!(n3.picard_exponent(), Some(1.25));
        assert_eq!(n3.z_plane_exponent(), 17.0 / 4.0);
        let n5 = PolytropeIndex::new(5.0).unwrap();
        assert_eq!(n5.omega_tilde(), Some(0.5));
        assert_eq!(n5.z_plane_exponent(), 17.5);
        assert_eq!(PolytropeIndex::new(0.0).unwrap().omega_tilde(), Some(-2.0));
    }

    #[test]
    fn undefined_exponents_are_flagged() {
        assert!(PolytropeIndex::new(1.0).unwrap().omega_tilde().is_none());
        assert!(PolytropeIndex::new(5.0 / 3.0).unwrap().picard_exponent().is_none());
    }
}
