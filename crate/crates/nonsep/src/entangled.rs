//! Absorption and emission for a pair of distinguishable atoms prepared in
//! a path-entangled superposition, with equal-weight-mixture baselines.

use num_complex::Complex64;

use crate::error::Error;
use crate::states::{require_finite, require_finite_complex, Probability};

/// Tolerance on the per-branch amplitude normalization checks.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Excitation amplitudes of the two one-excitation branches at the detection site.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntangledAbsorptionParams {
    /// Excitation amplitude of atom A on the detection-site branch.
    pub alpha: Complex64,
    /// Excitation amplitude of atom B on the detection-site branch.
    pub gamma: Complex64,
    /// Ground amplitude accompanying `alpha`; constrained by |alpha|^2 + |beta|^2 = 1.
    pub beta: Option<Complex64>,
    /// Ground amplitude accompanying `gamma`; constrained by |gamma|^2 + |delta|^2 = 1.
    pub delta: Option<Complex64>,
}

impl EntangledAbsorptionParams {
    /// Builds params from the two excitation amplitudes alone.
    pub fn new(alpha: Complex64, gamma: Complex64) -> Result<Self, Error> {
        require_finite_complex("alpha", alpha)?;
        require_finite_complex("gamma", gamma)?;
        Ok(EntangledAbsorptionParams { alpha, gamma, beta: None, delta: None })
    }

    /// Builds params with explicit ground amplitudes, checking both branch normalizations.
    pub fn with_ground_amplitudes(
        alpha: Complex64,
        beta: Complex64,
        gamma: Complex64,
        delta: Complex64,
    ) -> Result<Self, Error> {
        let p = EntangledAbsorptionParams::new(alpha, gamma)?;
        require_finite_complex("beta", beta)?;
        require_finite_complex("delta", delta)?;
        let a_norm = alpha.norm_sqr() + beta.norm_sqr();
        if (a_norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::PreconditionViolated {
                name: "beta",
                detail: format!("|alpha|^2 + |beta|^2 = {a_norm}, expected 1"),
            });
        }
        let g_norm = gamma.norm_sqr() + delta.norm_sqr();
        if (g_norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::PreconditionViolated {
                name: "delta",
                detail: format!("|gamma|^2 + |delta|^2 = {g_norm}, expected 1"),
            });
        }
        Ok(EntangledAbsorptionParams { beta: Some(beta), delta: Some(delta), ..p })
    }
}

/// Lifetimes, non-transition elements, and elapsed time for the two-atom emission problem.
///
/// The emission formulas assume the photon record cannot reveal which atom
/// emitted; both decay alternatives are added at the amplitude level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmissionParams {
    /// Lifetime of atom A, in the problem's time unit.
    pub tau_a: f64,
    /// Lifetime of atom B, same unit.
    pub tau_b: f64,
    /// Non-transition element of atom A; magnitude at most 1, default 1.
    pub m_nt_a: Complex64,
    /// Non-transition element of atom B; magnitude at most 1, default 1.
    pub m_nt_b: Complex64,
    /// Elapsed time since preparation.
    pub t: f64,
}

impl EmissionParams {
    /// Builds params with unit non-transition elements.
    pub fn new(tau_a: f64, tau_b: f64, t: f64) -> Result<Self, Error> {
        check_lifetime("tau_a", tau_a)?;
        check_lifetime("tau_b", tau_b)?;
        require_finite("t", t)?;
        if t < 0.0 {
            return Err(Error::PreconditionViolated {
                name: "t",
                detail: format!("elapsed time {t} must be non-negative"),
            });
        }
        Ok(EmissionParams {
            tau_a,
            tau_b,
            m_nt_a: Complex64::new(1.0, 0.0),
            m_nt_b: Complex64::new(1.0, 0.0),
            t,
        })
    }

    /// Replaces the non-transition elements, checking their magnitude bound.
    pub fn with_non_transition(
        mut self,
        m_nt_a: Complex64,
        m_nt_b: Complex64,
    ) -> Result<Self, Error> {
        require_finite_complex("m_nt_a", m_nt_a)?;
        require_finite_complex("m_nt_b", m_nt_b)?;
        for (name, m) in [("m_nt_a", m_nt_a), ("m_nt_b", m_nt_b)] {
            if m.norm() > 1.0 + 1e-12 {
                return Err(Error::PreconditionViolated {
                    name,
                    detail: format!("magnitude {} exceeds 1", m.norm()),
                });
            }
        }
        self.m_nt_a = m_nt_a;
        self.m_nt_b = m_nt_b;
        Ok(self)
    }
}

fn check_lifetime(name: &'static str, tau: f64) -> Result<(), Error> {
    if !tau.is_finite() || tau <= 0.0 {
        return Err(Error::InvalidLifetime { name, value: tau });
    }
    Ok(())
}

/// Probability that exactly one photon is absorbed at the detection site: |alpha + gamma|^2 / 2.
pub fn one_absorption_probability(p: &EntangledAbsorptionParams) -> Result<Probability, Error> {
    let value = 0.5 * (p.alpha + p.gamma).norm_sqr();
    if value > 1.0 + 1e-12 {
        return Err(Error::PreconditionViolated {
            name: "alpha + gamma",
            detail: format!("|alpha + gamma|^2 / 2 = {value} exceeds 1"),
        });
    }
    Probability::new(value)
}

/// Same absorption probability for the corresponding equal-weight mixture of products.
pub fn mixture_absorption_probability(p: &EntangledAbsorptionParams) -> Result<Probability, Error> {
    Probability::new(0.5 * (p.alpha.norm_sqr() + p.gamma.norm_sqr()))
}

/// Amplitude cross term separating the superposition from the mixture: Re(conj(alpha) gamma).
pub fn interference_term(p: &EntangledAbsorptionParams) -> f64 {
    (p.alpha.conj() * p.gamma).re
}

/// Decay amplitude (1 - e^(-t/tau))^(1/2), phase fixed to zero.
pub fn single_emission_amplitude(t: f64, tau: f64) -> Result<f64, Error> {
    check_lifetime("tau", tau)?;
    require_finite("t", t)?;
    if t < 0.0 {
        return Err(Error::PreconditionViolated {
            name: "t",
            detail: format!("elapsed time {t} must be non-negative"),
        });
    }
    Ok((1.0 - (-t / tau).exp()).sqrt())
}

/// Emission probability at time t for the entangled pair, |(M_a m_nt_b + M_b m_nt_a) / 2|^2.
pub fn emission_probability(p: &EmissionParams) -> Result<Probability, Error> {
    let m_a = single_emission_amplitude(p.t, p.tau_a)?;
    let m_b = single_emission_amplitude(p.t, p.tau_b)?;
    let amp = 0.5 * (m_a * p.m_nt_b + m_b * p.m_nt_a);
    Probability::new(amp.norm_sqr())
}

/// Emission probability for the equal-weight mixture of the two product preparations.
pub fn mixture_emission_probability(p: &EmissionParams) -> Result<Probability, Error> {
    let p_a = single_emission_amplitude(p.t, p.tau_a)?.powi(2);
    let p_b = single_emission_amplitude(p.t, p.tau_b)?.powi(2);
    Probability::new(0.5 * (p_a * p.m_nt_b.norm_sqr() + p_b * p.m_nt_a.norm_sqr()))
}

/// Emission-vs-time curve with unit non-transition elements: rows of (t, entangled, mixture).
pub fn fig1_curve(
    t_grid: &[f64],
    tau_a: f64,
    tau_b: f64,
) -> Result<Vec<(f64, Probability, Probability)>, Error> {
    t_grid
        .iter()
        .map(|&t| {
            let params = EmissionParams::new(tau_a, tau_b, t).map_err(|e| e.at_grid_point(t))?;
            let entangled = emission_probability(&params).map_err(|e| e.at_grid_point(t))?;
            let mixture = mixture_emission_probability(&params).map_err(|e| e.at_grid_point(t))?;
            Ok((t, entangled, mixture))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn absorption_examples() {
        let p = EntangledAbsorptionParams::new(c(0.1), c(0.1)).unwrap();
        assert!((one_absorption_probability(&p).unwrap().value() - 0.02).abs() < 1e-15);
        assert!((mixture_absorption_probability(&p).unwrap().value() - 0.01).abs() < 1e-15);

        let p = EntangledAbsorptionParams::new(c(0.1), c(-0.1)).unwrap();
        assert!(one_absorption_probability(&p).unwrap().value().abs() < 1e-15);
        assert!((mixture_absorption_probability(&p).unwrap().value() - 0.01).abs() < 1e-15);

        let p = EntangledAbsorptionParams::new(c(0.1), c(0.0)).unwrap();
        assert!((one_absorption_probability(&p).unwrap().value() - 0.005).abs() < 1e-15);

        let p = EntangledAbsorptionParams::new(c(0.0), c(0.0)).unwrap();
        assert_eq!(mixture_absorption_probability(&p).unwrap().value(), 0.0);
    }

    #[test]
    fn absorption_rejects_amplitudes_summing_past_unit_probability() {
        let p = EntangledAbsorptionParams::new(c(1.0), c(1.0)).unwrap();
        assert!(matches!(
            one_absorption_probability(&p),
            Err(Error::PreconditionViolated { .. })
        ));
    }

    #[test]
    fn ground_amplitude_normalization_enforced() {
        let ok = EntangledAbsorptionParams::with_ground_amplitudes(
            c(0.1),
            c(0.99_f64.sqrt()),
            c(0.1),
            c(0.99_f64.sqrt()),
        );
        assert!(ok.is_ok());
        let bad = EntangledAbsorptionParams::with_ground_amplitudes(c(0.1), c(0.5), c(0.1), c(0.5));
        assert!(matches!(bad, Err(Error::PreconditionViolated { name: "beta", .. })));
    }

    #[test]
    fn emission_amplitude_examples() {
        assert_eq!(single_emission_amplitude(0.0, 1.0).unwrap(), 0.0);
        let m = single_emission_amplitude(1.0, 1.0).unwrap();
        assert!((m - 0.7950600976206501).abs() < 1e-15);
        assert!((single_emission_amplitude(20.0, 1.0).unwrap() - 1.0).abs() < 1e-8);
        assert!(matches!(
            single_emission_amplitude(1.0, 0.0),
            Err(Error::InvalidLifetime { name: "tau", .. })
        ));
        assert!(matches!(
            single_emission_amplitude(-0.5, 1.0),
            Err(Error::PreconditionViolated { .. })
        ));
    }

    #[test]
    fn emission_probability_anchor_values() {
        let p = EmissionParams::new(1.0, 0.1, 1.0).unwrap();
        assert!((emission_probability(&p).unwrap().value() - 0.805539814514453).abs() < 1e-12);
        assert!((mixture_emission_probability(&p).unwrap().value() - 0.8160375794493976).abs() < 1e-12);

        let p0 = EmissionParams::new(1.0, 0.1, 0.0).unwrap();
        assert_eq!(emission_probability(&p0).unwrap().value(), 0.0);
        assert_eq!(mixture_emission_probability(&p0).unwrap().value(), 0.0);

        let late = EmissionParams::new(1.0, 0.1, 20.0).unwrap();
        assert!((emission_probability(&late).unwrap().value() - 1.0).abs() < 1e-8);
        assert!((mixture_emission_probability(&late).unwrap().value() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn equal_lifetimes_make_superposition_match_mixture() {
        for t in [0.0, 0.3, 1.7, 5.0] {
            let p = EmissionParams::new(0.7, 0.7, t).unwrap();
            let a = emission_probability(&p).unwrap().value();
            let b = mixture_emission_probability(&p).unwrap().value();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn curve_on_singleton_grid_is_all_zero_at_origin() {
        let rows = fig1_curve(&[0.0], 1.0, 0.1).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].0, 0.0);
        assert_eq!(rows[0].1.value(), 0.0);
        assert_eq!(rows[0].2.value(), 0.0);
    }

    #[test]
    fn curve_grid_errors_carry_the_grid_point() {
        let err = fig1_curve(&[0.5, -1.0], 1.0, 0.1).unwrap_err();
        assert!(matches!(err, Error::AtGridPoint { x, .. } if x == -1.0));
    }

    proptest! {
        #[test]
        fn interference_identity(
            ar in -0.7f64..0.7, ai in -0.7f64..0.7,
            gr in -0.7f64..0.7, gi in -0.7f64..0.7,
        ) {
            let alpha = Complex64::new(ar, ai);
            let gamma = Complex64::new(gr, gi);
            prop_assume!(0.5 * (alpha + gamma).norm_sqr() <= 1.0);
            let p = EntangledAbsorptionParams::new(alpha, gamma).unwrap();
            let one = one_absorption_probability(&p).unwrap().value();
            let mix = mixture_absorption_probability(&p).unwrap().value();
            prop_assert!((one - mix - interference_term(&p)).abs() <= 1e-15);
        }

        #[test]
        fn common_phase_leaves_absorption_unchanged(
            ar in -0.6f64..0.6, ai in -0.6f64..0.6,
            gr in -0.6f64..0.6, gi in -0.6f64..0.6,
            phase in 0.0f64..std::f64::consts::TAU,
        ) {
            let rot = Complex64::from_polar(1.0, phase);
            let alpha = Complex64::new(ar, ai);
            let gamma = Complex64::new(gr, gi);
            prop_assume!(0.5 * (alpha + gamma).norm_sqr() <= 0.99);
            prop_assume!(0.5 * (rot * alpha + rot * gamma).norm_sqr() <= 1.0);
            let p = EntangledAbsorptionParams::new(alpha, gamma).unwrap();
            let q = EntangledAbsorptionParams::new(rot * p.alpha, rot * p.gamma).unwrap();
            let a = one_absorption_probability(&p).unwrap().value();
            let b = one_absorption_probability(&q).unwrap().value();
            prop_assert!((a - b).abs() <= 1e-15);
        }

        #[test]
        fn mixture_dominates_superposition_emission(
            tau_a in 0.05f64..3.0,
            tau_b in 0.05f64..3.0,
            t in 0.0f64..10.0,
        ) {
            let p = EmissionParams::new(tau_a, tau_b, t).unwrap();
            let ent = emission_probability(&p).unwrap().value();
            let mix = mixture_emission_probability(&p).unwrap().value();
            prop_assert!(ent <= mix + 1e-12);
            let m_a = single_emission_amplitude(t, tau_a).unwrap();
            let m_b = single_emission_amplitude(t, tau_b).unwrap();
            if (m_a - m_b).abs() < 1e-9 {
                prop_assert!((ent - mix).abs() < 1e-8);
            }
        }

        #[test]
        fn emission_amplitude_monotone_in_time(
            tau in 0.05f64..3.0,
            t1 in 0.0f64..10.0,
            dt in 0.0f64..5.0,
        ) {
            let early = single_emission_amplitude(t1, tau).unwrap();
            let late = single_emission_amplitude(t1 + dt, tau).unwrap();
            prop_assert!(late >= early);
            prop_assert!((0.0..=1.0).contains(&early));
        }

        #[test]
        fn both_probabilities_saturate_at_late_times(
            tau_a in 0.05f64..2.0,
            tau_b in 0.05f64..2.0,
        ) {
            let t = 20.0 * tau_a.max(tau_b);
            let p = EmissionParams::new(tau_a, tau_b, t).unwrap();
            prop_assert!((emission_probability(&p).unwrap().value() - 1.0).abs() < 1e-6);
            prop_assert!((mixture_emission_probability(&p).unwrap().value() - 1.0).abs() < 1e-6);
        }
    }
}
