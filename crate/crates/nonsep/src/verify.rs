//! Seeded random campaign comparing every closed-form probability against the
//! brute-force contraction engine.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::entangled::{emission_probability, EmissionParams};
use crate::error::Error;
use crate::gram::GramSpec;
use crate::identical::{
    double_emission_probability, one_absorption_probability_identical, IdenticalAbsorptionScenario,
    IdenticalEmissionScenario, PHI, PHI_TILDE, PSI, PSI_TILDE,
};
use crate::oracle::{
    oracle_double_emission, oracle_emission_probability, oracle_one_absorption_identical,
};
use crate::states::Statistics;

/// Largest acceptable closed-form vs brute-force discrepancy.
pub const CAMPAIGN_TOL: f64 = 1e-10;
/// Redraw budget per trial before the campaign gives up.
pub const MAX_REDRAWS: usize = 64;

const ALL_STATISTICS: [Statistics; 3] =
    [Statistics::Boson, Statistics::Fermion, Statistics::Distinguishable];

/// Outcome of one campaign run.
#[derive(Debug, Clone, PartialEq)]
pub struct CampaignReport {
    /// Seed the generator was started from.
    pub seed: u64,
    /// Completed trials.
    pub trials: usize,
    /// Worst absolute discrepancy observed.
    pub max_abs_err: f64,
    /// Scenario draws discarded for leaving the probability domain.
    pub redraws: usize,
}

impl fmt::Display for CampaignReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "trials={} max_abs_err={:e}", self.trials, self.max_abs_err)
    }
}

fn draw_complex(rng: &mut ChaCha8Rng, half_width: f64) -> Complex64 {
    let re = rng.random_range(-half_width..half_width);
    let im = rng.random_range(-half_width..half_width);
    Complex64::new(re, im)
}

fn draw_gram(rng: &mut ChaCha8Rng) -> Result<GramSpec, Error> {
    let dim = 4;
    let mut vectors = Vec::with_capacity(dim);
    for _ in 0..dim {
        let mut v = DVector::from_element(dim, Complex64::new(0.0, 0.0));
        for k in 0..dim {
            v[k] = draw_complex(rng, 1.0);
        }
        let norm = v.norm();
        vectors.push(v.map(|c| c / norm));
    }
    let mut entries = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for i in 0..dim {
        entries[(i, i)] = Complex64::new(1.0, 0.0);
        for j in (i + 1)..dim {
            let ov = vectors[i].dotc(&vectors[j]);
            entries[(i, j)] = ov;
            entries[(j, i)] = ov.conj();
        }
    }
    GramSpec::new(vec![PHI, PSI_TILDE, PHI_TILDE, PSI], entries)
}

fn absorption_discrepancy(rng: &mut ChaCha8Rng, redraws: &mut usize) -> Result<f64, Error> {
    for _ in 0..MAX_REDRAWS {
        let spec = match draw_gram(rng) {
            Ok(spec) => spec,
            Err(_) => {
                *redraws += 1;
                continue;
            }
        };
        let amplitude = draw_complex(rng, 0.7);
        let mut worst = 0.0f64;
        let mut keep = true;
        for stats in ALL_STATISTICS {
            let outcome = IdenticalAbsorptionScenario::new(stats, spec.clone(), amplitude)
                .and_then(|s| {
                    let closed = one_absorption_probability_identical(&s)?.total.value();
                    let brute = oracle_one_absorption_identical(&s)?.value();
                    Ok((closed - brute).abs())
                });
            match outcome {
                Ok(err) => worst = worst.max(err),
                Err(_) => {
                    keep = false;
                    break;
                }
            }
        }
        if keep {
            return Ok(worst);
        }
        *redraws += 1;
    }
    Err(Error::PreconditionViolated {
        name: "verify",
        detail: format!("no admissible absorption scenario within {MAX_REDRAWS} redraws"),
    })
}

fn double_emission_discrepancy(rng: &mut ChaCha8Rng, redraws: &mut usize) -> Result<f64, Error> {
    for _ in 0..MAX_REDRAWS {
        let elements = [
            draw_complex(rng, 0.5),
            draw_complex(rng, 0.5),
            draw_complex(rng, 0.5),
            draw_complex(rng, 0.5),
        ];
        let ov_i = draw_complex(rng, 0.3);
        let ov_f = draw_complex(rng, 0.3);
        let mut worst = 0.0f64;
        let mut keep = true;
        for stats in ALL_STATISTICS {
            let outcome = IdenticalEmissionScenario::new(
                stats, elements[0], elements[1], elements[2], elements[3], ov_i, ov_f,
            )
            .and_then(|s| {
                let closed = double_emission_probability(&s)?.value();
                let brute = oracle_double_emission(&s)?.value();
                Ok((closed - brute).abs())
            });
            match outcome {
                Ok(err) => worst = worst.max(err),
                Err(_) => {
                    keep = false;
                    break;
                }
            }
        }
        if keep {
            return Ok(worst);
        }
        *redraws += 1;
    }
    Err(Error::PreconditionViolated {
        name: "verify",
        detail: format!("no admissible emission scenario within {MAX_REDRAWS} redraws"),
    })
}

fn emission_discrepancy(rng: &mut ChaCha8Rng) -> Result<f64, Error> {
    let tau_a = rng.random_range(0.05..2.0);
    let tau_b = rng.random_range(0.05..2.0);
    let t = rng.random_range(0.0..3.0);
    let m_nt_a = draw_complex(rng, 0.7);
    let m_nt_b = draw_complex(rng, 0.7);
    let params = EmissionParams::new(tau_a, tau_b, t)?.with_non_transition(m_nt_a, m_nt_b)?;
    let closed = emission_probability(&params)?.value();
    let brute = oracle_emission_probability(&params)?.value();
    Ok((closed - brute).abs())
}

/// Runs the full campaign: per trial one random absorption scenario, one random
/// prescribed-element emission scenario, and one random decay-curve point.
pub fn run_campaign(seed: u64, trials: usize) -> Result<CampaignReport, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_abs_err = 0.0f64;
    let mut redraws = 0usize;
    for _ in 0..trials {
        max_abs_err = max_abs_err.max(absorption_discrepancy(&mut rng, &mut redraws)?);
        max_abs_err = max_abs_err.max(double_emission_discrepancy(&mut rng, &mut redraws)?);
        max_abs_err = max_abs_err.max(emission_discrepancy(&mut rng)?);
    }
    Ok(CampaignReport { seed, trials, max_abs_err, redraws })
}
