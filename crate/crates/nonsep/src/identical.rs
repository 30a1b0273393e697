//! One-photon absorption and two-photon emission for pairs of identical atoms,
//! with the full direct/exchange interference decomposition.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Error;
use crate::gram::GramSpec;
use crate::states::{require_finite, require_finite_complex, Probability, Statistics};

/// Mode label: initially occupied ground mode paired with `PHI`.
pub const PSI: &str = "psi";
/// Mode label: initially occupied ground mode paired with `PSI`.
pub const PHI: &str = "phi";
/// Mode label: excited mode reachable from the pair.
pub const PSI_TILDE: &str = "psi_tilde";
/// Mode label: second excited mode reachable from the pair.
pub const PHI_TILDE: &str = "phi_tilde";

/// Magnitude at which a fermion pair counts as occupying one mode.
pub const PAULI_TOL: f64 = 1e-12;

/// One-photon absorption setup: statistics, spatial overlaps, and the internal element.
#[derive(Debug, Clone, PartialEq)]
pub struct IdenticalAbsorptionScenario {
    /// Exchange statistics of the pair.
    pub stats: Statistics,
    /// Overlap table over the modes `phi`, `psi_tilde`, `phi_tilde`, `psi`.
    pub overlaps: GramSpec,
    /// Internal transition element shared by both excited modes; magnitude at most 1.
    pub internal_amplitude: Complex64,
}

impl IdenticalAbsorptionScenario {
    /// Validates and builds a scenario over a four-mode overlap table.
    pub fn new(
        stats: Statistics,
        overlaps: GramSpec,
        internal_amplitude: Complex64,
    ) -> Result<Self, Error> {
        require_finite_complex("internal_amplitude", internal_amplitude)?;
        if internal_amplitude.norm() > 1.0 + 1e-12 {
            return Err(Error::PreconditionViolated {
                name: "internal_amplitude",
                detail: format!("magnitude {} exceeds 1", internal_amplitude.norm()),
            });
        }
        for label in [PHI, PSI_TILDE, PHI_TILDE, PSI] {
            overlaps.index_of(label)?;
        }
        let initial = overlaps.overlap_by_label(PHI, PSI)?;
        if stats == Statistics::Fermion && initial.norm() >= 1.0 - PAULI_TOL {
            return Err(Error::PauliNullState { overlap: initial.norm() });
        }
        Ok(IdenticalAbsorptionScenario { stats, overlaps, internal_amplitude })
    }

    /// Builds the standard sweep scenario at initial overlap `x` and excited overlap `tilde`.
    ///
    /// The fixed entries are ⟨psi_tilde|phi⟩ = ⟨phi_tilde|phi⟩ = 0.6, and both
    /// remaining cross entries equal 0.6·x.
    pub fn sweep_point(x: f64, tilde_overlap: f64, stats: Statistics) -> Result<Self, Error> {
        require_finite("x", x)?;
        require_finite("tilde_overlap", tilde_overlap)?;
        let gram = sweep_gram(x, tilde_overlap)?;
        IdenticalAbsorptionScenario::new(stats, gram, Complex64::new(1.0, 0.0))
    }

    fn overlap(&self, bra: &str, ket: &str) -> Complex64 {
        self.overlaps
            .overlap_by_label(bra, ket)
            .expect("scenario construction checked all four labels")
    }
}

/// Overlap table used by the absorption sweep, in row order (phi, psi_tilde, phi_tilde, psi).
pub fn sweep_gram(x: f64, tilde_overlap: f64) -> Result<GramSpec, Error> {
    let c = |v: f64| Complex64::new(v, 0.0);
    let cross = 0.6 * x;
    let entries = DMatrix::from_row_slice(
        4,
        4,
        &[
            c(1.0), c(0.6), c(0.6), c(x),
            c(0.6), c(1.0), c(tilde_overlap), c(cross),
            c(0.6), c(tilde_overlap), c(1.0), c(cross),
            c(x), c(cross), c(cross), c(1.0),
        ],
    );
    GramSpec::new(vec![PHI, PSI_TILDE, PHI_TILDE, PSI], entries)
}

/// Normalization of a two-mode (anti)symmetrized pair: (2(1 ± |overlap|^2))^(-1/2).
pub fn pair_normalization(overlap: Complex64, stats: Statistics) -> Result<f64, Error> {
    require_finite_complex("overlap", overlap)?;
    let mag_sq = overlap.norm_sqr();
    match stats {
        Statistics::Boson => Ok(1.0 / (2.0 * (1.0 + mag_sq)).sqrt()),
        Statistics::Fermion => {
            if overlap.norm() >= 1.0 - PAULI_TOL {
                return Err(Error::PauliNullState { overlap: overlap.norm() });
            }
            Ok(1.0 / (2.0 * (1.0 - mag_sq)).sqrt())
        }
        Statistics::Distinguishable => Ok(std::f64::consts::FRAC_1_SQRT_2),
    }
}

/// Inner product between the two absorbed-branch states, before final normalization.
fn branch_cross_product(scenario: &IdenticalAbsorptionScenario) -> Result<Complex64, Error> {
    let n_psi = pair_normalization(scenario.overlap(PSI_TILDE, PHI), scenario.stats)?;
    let n_phi = pair_normalization(scenario.overlap(PHI_TILDE, PSI), scenario.stats)?;
    Ok(2.0 * n_psi * n_phi * scenario.overlap(PSI_TILDE, PHI_TILDE) * scenario.overlap(PHI, PSI))
}

/// Normalization of the combined final state: (2 + 2 Re cross)^(-1/2).
pub fn final_state_normalization(scenario: &IdenticalAbsorptionScenario) -> Result<f64, Error> {
    let cross = branch_cross_product(scenario)?;
    let one_plus = 1.0 + cross.re;
    if one_plus <= 1e-12 {
        return Err(Error::DegenerateFinalState { one_plus_re_cross: one_plus });
    }
    Ok(1.0 / (2.0 * one_plus).sqrt())
}

/// Direct and exchange absorption amplitudes for both excited modes, prefactors included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeDecomposition {
    /// Exchange statistics the totals combine under.
    pub stats: Statistics,
    /// Direct amplitude into `psi_tilde`, carrying its 2·N_abs·N_i prefactor.
    pub m_psi_direct: Complex64,
    /// Exchange amplitude into `psi_tilde`, same prefactor; zero for distinguishable atoms.
    pub m_psi_exchange: Complex64,
    /// Direct amplitude into `phi_tilde`, carrying its 2·N_abs·N_i prefactor.
    pub m_phi_direct: Complex64,
    /// Exchange amplitude into `phi_tilde`, same prefactor; zero for distinguishable atoms.
    pub m_phi_exchange: Complex64,
}

impl AmplitudeDecomposition {
    /// Total amplitude into `psi_tilde` under the double sign rule.
    pub fn m_psi_total(&self) -> Complex64 {
        self.stats.double_sign(self.m_psi_direct, self.m_psi_exchange)
    }

    /// Total amplitude into `phi_tilde` under the double sign rule.
    pub fn m_phi_total(&self) -> Complex64 {
        self.stats.double_sign(self.m_phi_direct, self.m_phi_exchange)
    }
}

/// Products of bare single-atom elements, before any normalization prefactor.
///
/// These depend only on the overlap table and the internal element, never on
/// the statistics, so they coincide for bosons and fermions at equal inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BareElementProducts {
    /// Transition into `psi_tilde` paired with the `phi` ← `psi` non-transition.
    pub psi_direct: Complex64,
    /// Transition `psi_tilde` ← `psi` paired with the `phi` ← `phi` non-transition.
    pub psi_exchange: Complex64,
    /// Transition into `phi_tilde` paired with the `psi` ← `psi` non-transition.
    pub phi_direct: Complex64,
    /// Transition `phi_tilde` ← `psi` paired with the `psi` ← `phi` non-transition.
    pub phi_exchange: Complex64,
}

/// Computes the four bare element products of a scenario.
pub fn bare_element_products(
    scenario: &IdenticalAbsorptionScenario,
) -> Result<BareElementProducts, Error> {
    let m = scenario.internal_amplitude;
    let one = Complex64::new(1.0, 0.0);
    Ok(BareElementProducts {
        psi_direct: m * scenario.overlap(PSI_TILDE, PHI) * scenario.overlap(PHI, PSI),
        psi_exchange: m * scenario.overlap(PSI_TILDE, PSI) * one,
        phi_direct: m * scenario.overlap(PHI_TILDE, PHI) * one,
        phi_exchange: m * scenario.overlap(PHI_TILDE, PSI) * scenario.overlap(PSI, PHI),
    })
}

/// Absorption amplitudes with normalization prefactors applied per branch.
pub fn absorption_amplitudes(
    scenario: &IdenticalAbsorptionScenario,
) -> Result<AmplitudeDecomposition, Error> {
    let bare = bare_element_products(scenario)?;
    let n_i = pair_normalization(scenario.overlap(PHI, PSI), scenario.stats)?;
    let n_psi = pair_normalization(scenario.overlap(PSI_TILDE, PHI), scenario.stats)?;
    let n_phi = pair_normalization(scenario.overlap(PHI_TILDE, PSI), scenario.stats)?;
    let w_psi = 2.0 * n_psi * n_i;
    let w_phi = 2.0 * n_phi * n_i;
    let exchange_on = scenario.stats.exchange_sign().is_some();
    let zero = Complex64::new(0.0, 0.0);
    Ok(AmplitudeDecomposition {
        stats: scenario.stats,
        m_psi_direct: w_psi * bare.psi_direct,
        m_psi_exchange: if exchange_on { w_psi * bare.psi_exchange } else { zero },
        m_phi_direct: w_phi * bare.phi_direct,
        m_phi_exchange: if exchange_on { w_phi * bare.phi_exchange } else { zero },
    })
}

/// Term-by-term expansion of the absorption probability.
///
/// The ten raw terms are stored unsigned; `signed_sum` applies the statistics
/// sign to the exchange and mixed groups. Indistinguishability entries always
/// add with a plus sign, and their prefactor-free element products coincide
/// across exchange statistics (see `bare_element_products`).
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityBreakdown {
    /// Exchange statistics the signs are taken from.
    pub stats: Statistics,
    /// |phi-tilde direct|^2, |phi-tilde exchange|^2, |psi-tilde direct|^2, |psi-tilde exchange|^2.
    pub moduli: [f64; 4],
    /// Within-branch direct/exchange cross terms, phi-tilde then psi-tilde.
    pub exchange_terms: [f64; 2],
    /// Across-branch direct/direct and exchange/exchange cross terms.
    pub indistinguishability_terms: [f64; 2],
    /// Across-branch direct/exchange cross terms.
    pub mixed_terms: [f64; 2],
    /// Square of the final-state normalization.
    pub n_f_squared: f64,
    /// The assembled absorption probability.
    pub total: Probability,
}

impl ProbabilityBreakdown {
    /// Sum of the ten terms with the statistics sign applied where it enters.
    pub fn signed_sum(&self) -> f64 {
        let sign = self.stats.exchange_sign().unwrap_or(0.0);
        self.moduli.iter().sum::<f64>()
            + sign * self.exchange_terms.iter().sum::<f64>()
            + self.indistinguishability_terms.iter().sum::<f64>()
            + sign * self.mixed_terms.iter().sum::<f64>()
    }
}

/// One-photon absorption probability with its full interference decomposition.
pub fn one_absorption_probability_identical(
    scenario: &IdenticalAbsorptionScenario,
) -> Result<ProbabilityBreakdown, Error> {
    let amps = absorption_amplitudes(scenario)?;
    let n_f = final_state_normalization(scenario)?;
    let d_phi = amps.m_phi_direct;
    let e_phi = amps.m_phi_exchange;
    let d_psi = amps.m_psi_direct;
    let e_psi = amps.m_psi_exchange;
    let two_re = |a: Complex64, b: Complex64| 2.0 * (a.conj() * b).re;
    let n_f_squared = n_f * n_f;
    let total_amp = amps.m_phi_total() + amps.m_psi_total();
    let total = Probability::new(n_f_squared * total_amp.norm_sqr())?;
    Ok(ProbabilityBreakdown {
        stats: scenario.stats,
        moduli: [d_phi.norm_sqr(), e_phi.norm_sqr(), d_psi.norm_sqr(), e_psi.norm_sqr()],
        exchange_terms: [two_re(d_phi, e_phi), two_re(d_psi, e_psi)],
        indistinguishability_terms: [two_re(d_phi, d_psi), two_re(e_phi, e_psi)],
        mixed_terms: [two_re(d_phi, e_psi), two_re(e_phi, d_psi)],
        n_f_squared,
        total,
    })
}

/// Absorption sweep row: the grid value and one (boson, fermion) pair per excited overlap.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    /// Initial-overlap grid value.
    pub x: f64,
    /// (boson, fermion) probabilities, one pair per requested excited overlap.
    pub pairs: Vec<(f64, f64)>,
}

/// Evaluates the absorption sweep over an initial-overlap grid in [0, 1).
pub fn fig2_sweep(x_grid: &[f64], tilde_overlaps: &[f64]) -> Result<Vec<SweepRow>, Error> {
    for &t in tilde_overlaps {
        require_finite("tilde_overlaps", t)?;
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::PreconditionViolated {
                name: "tilde_overlaps",
                detail: format!("excited-mode overlap {t} outside [0, 1]"),
            });
        }
    }
    x_grid
        .iter()
        .map(|&x| {
            if !(0.0..1.0).contains(&x) {
                return Err(Error::PreconditionViolated {
                    name: "x_grid",
                    detail: format!("initial overlap {x} outside [0, 1)"),
                }
                .at_grid_point(x));
            }
            let pairs = tilde_overlaps
                .iter()
                .map(|&tilde| {
                    let boson =
                        IdenticalAbsorptionScenario::sweep_point(x, tilde, Statistics::Boson)
                            .and_then(|s| one_absorption_probability_identical(&s))?;
                    let fermion =
                        IdenticalAbsorptionScenario::sweep_point(x, tilde, Statistics::Fermion)
                            .and_then(|s| one_absorption_probability_identical(&s))?;
                    Ok((boson.total.value(), fermion.total.value()))
                })
                .collect::<Result<Vec<_>, Error>>()
                .map_err(|e| e.at_grid_point(x))?;
            Ok(SweepRow { x, pairs })
        })
        .collect()
}

/// Two-photon emission setup: four single-atom elements plus initial and final overlaps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdenticalEmissionScenario {
    /// Exchange statistics of the pair.
    pub stats: Statistics,
    /// Element for decay `phi_bar` ← `phi`.
    pub m_phibar_phi: Complex64,
    /// Element for decay `psi_bar` ← `psi`.
    pub m_psibar_psi: Complex64,
    /// Element for decay `phi_bar` ← `psi`.
    pub m_phibar_psi: Complex64,
    /// Element for decay `psi_bar` ← `phi`.
    pub m_psibar_phi: Complex64,
    /// Overlap of the two initially excited modes.
    pub initial_overlap: Complex64,
    /// Overlap of the two final ground modes.
    pub final_overlap: Complex64,
}

impl IdenticalEmissionScenario {
    /// Validates the element magnitudes and, for fermions, both overlap bounds.
    pub fn new(
        stats: Statistics,
        m_phibar_phi: Complex64,
        m_psibar_psi: Complex64,
        m_phibar_psi: Complex64,
        m_psibar_phi: Complex64,
        initial_overlap: Complex64,
        final_overlap: Complex64,
    ) -> Result<Self, Error> {
        let elements = [
            ("m_phibar_phi", m_phibar_phi),
            ("m_psibar_psi", m_psibar_psi),
            ("m_phibar_psi", m_phibar_psi),
            ("m_psibar_phi", m_psibar_phi),
        ];
        for (name, m) in elements {
            require_finite_complex(name, m)?;
            if m.norm() > 1.0 + 1e-12 {
                return Err(Error::PreconditionViolated {
                    name,
                    detail: format!("magnitude {} exceeds 1", m.norm()),
                });
            }
        }
        for (name, ov) in [("initial_overlap", initial_overlap), ("final_overlap", final_overlap)] {
            require_finite_complex(name, ov)?;
            if ov.norm() > 1.0 + 1e-12 {
                return Err(Error::PreconditionViolated {
                    name,
                    detail: format!("magnitude {} exceeds 1", ov.norm()),
                });
            }
            if stats == Statistics::Fermion && ov.norm() >= 1.0 - PAULI_TOL {
                return Err(Error::PauliNullState { overlap: ov.norm() });
            }
        }
        Ok(IdenticalEmissionScenario {
            stats,
            m_phibar_phi,
            m_psibar_psi,
            m_phibar_psi,
            m_psibar_phi,
            initial_overlap,
            final_overlap,
        })
    }
}

/// Probability that both atoms emit, with interference between the two decay pairings.
pub fn double_emission_probability(
    scenario: &IdenticalEmissionScenario,
) -> Result<Probability, Error> {
    let s = scenario;
    let (numerator, denominator) = match s.stats.exchange_sign() {
        Some(sign) => {
            let p_pp = s.m_phibar_phi.norm_sqr();
            let p_ss = s.m_psibar_psi.norm_sqr();
            let p_ps = s.m_phibar_psi.norm_sqr();
            let p_sp = s.m_psibar_phi.norm_sqr();
            let cross =
                (s.m_phibar_phi.conj() * s.m_psibar_psi.conj() * s.m_phibar_psi * s.m_psibar_phi).re;
            let numerator = p_pp * p_ss + p_ps * p_sp + sign * 2.0 * cross;
            let denominator = (1.0 + sign * s.initial_overlap.norm_sqr())
                * (1.0 + sign * s.final_overlap.norm_sqr());
            (numerator, denominator)
        }
        None => (s.m_phibar_phi.norm_sqr() * s.m_psibar_psi.norm_sqr(), 1.0),
    };
    Probability::new(numerator / denominator)
}
