//! Particle statistics and probability primitives.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Clamping tolerance for probabilities that leave [0, 1] by rounding.
pub const PROBABILITY_TOL: f64 = 1e-12;

/// Exchange statistics of a two-particle pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Boson,
    Fermion,
    Distinguishable,
}

impl Statistics {
    /// Sign weighting exchange contributions: +1, -1, or None when exchange is absent.
    pub fn exchange_sign(self) -> Option<f64> {
        match self {
            Statistics::Boson => Some(1.0),
            Statistics::Fermion => Some(-1.0),
            Statistics::Distinguishable => None,
        }
    }

    /// Applies the double sign rule: direct + exchange, direct - exchange, or direct alone.
    pub fn double_sign(self, direct: Complex64, exchange: Complex64) -> Complex64 {
        match self.exchange_sign() {
            Some(sign) => direct + sign * exchange,
            None => direct,
        }
    }

    /// Short lowercase name used in CSV headers and diagnostics.
    pub fn name(self) -> &'static str {
        match self {
            Statistics::Boson => "boson",
            Statistics::Fermion => "fermion",
            Statistics::Distinguishable => "distinguishable",
        }
    }
}

impl std::fmt::Display for Statistics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Statistics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "boson" => Ok(Statistics::Boson),
            "fermion" => Ok(Statistics::Fermion),
            "distinguishable" => Ok(Statistics::Distinguishable),
            other => Err(format!(
                "unknown statistics {other:?}, expected boson, fermion, or distinguishable"
            )),
        }
    }
}

/// Probability validated to lie in [0, 1] up to a small clamping tolerance.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability(f64);

impl Probability {
    /// Validates `value`, clamping excursions within `PROBABILITY_TOL` and rejecting larger ones.
    pub fn new(value: f64) -> Result<Self, Error> {
        if !value.is_finite() {
            return Err(Error::NonFiniteInput { name: "probability".to_string() });
        }
        if value < -PROBABILITY_TOL || value > 1.0 + PROBABILITY_TOL {
            return Err(Error::ProbabilityOutOfRange { value });
        }
        Ok(Probability(value.clamp(0.0, 1.0)))
    }

    /// The clamped value in [0, 1].
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Rejects non-finite floats with the offending parameter name.
pub fn require_finite(name: &str, value: f64) -> Result<(), Error> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFiniteInput { name: name.to_string() })
    }
}

/// Rejects complex values with a non-finite component.
pub fn require_finite_complex(name: &str, value: Complex64) -> Result<(), Error> {
    if value.re.is_finite() && value.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFiniteInput { name: name.to_string() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exchange_signs() {
        assert_eq!(Statistics::Boson.exchange_sign(), Some(1.0));
        assert_eq!(Statistics::Fermion.exchange_sign(), Some(-1.0));
        assert_eq!(Statistics::Distinguishable.exchange_sign(), None);
    }

    #[test]
    fn double_sign_matches_sign_convention() {
        let d = Complex64::new(0.6, 0.0);
        let e = Complex64::new(0.6, 0.0);
        assert_eq!(Statistics::Boson.double_sign(d, e), Complex64::new(1.2, 0.0));
        assert_eq!(Statistics::Fermion.double_sign(d, e), Complex64::new(0.0, 0.0));
        assert_eq!(Statistics::Distinguishable.double_sign(d, e), Complex64::new(0.6, 0.0));
    }

    #[test]
    fn fermion_equal_amplitudes_cancel_exactly() {
        let a = Complex64::new(0.3819, -0.77123);
        assert_eq!(Statistics::Fermion.double_sign(a, a).norm(), 0.0);
    }

    #[test]
    fn probability_clamps_tiny_excursions() {
        assert_eq!(Probability::new(1.0 + 5e-13).unwrap().value(), 1.0);
        assert_eq!(Probability::new(-5e-13).unwrap().value(), 0.0);
    }

    #[test]
    fn probability_rejects_large_excursions() {
        assert!(matches!(
            Probability::new(1.0 + 1e-9),
            Err(Error::ProbabilityOutOfRange { .. })
        ));
        assert!(matches!(Probability::new(-1e-9), Err(Error::ProbabilityOutOfRange { .. })));
        assert!(matches!(Probability::new(f64::NAN), Err(Error::NonFiniteInput { .. })));
    }

    #[test]
    fn statistics_round_trip_names() {
        for s in [Statistics::Boson, Statistics::Fermion, Statistics::Distinguishable] {
            assert_eq!(s.name().parse::<Statistics>().unwrap(), s);
        }
        assert!("anyon".parse::<Statistics>().is_err());
    }

    proptest::proptest! {
        #[test]
        fn fermion_cancellation_is_exact(re in -2.0f64..2.0, im in -2.0f64..2.0) {
            let a = Complex64::new(re, im);
            let combined = Statistics::Fermion.double_sign(a, a);
            proptest::prop_assert_eq!(combined, Complex64::new(0.0, 0.0));
        }
    }
}
