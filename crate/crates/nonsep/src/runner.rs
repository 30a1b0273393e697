//! Resolves configs and command-line overrides into jobs, renders CSV output,
//! and maps every failure onto a process exit code.

use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use thiserror::Error as ThisError;

use crate::config::{
    parse_overlap_list, ComplexValue, ConfigError, IdenticalAbsorptionConfig,
    IdenticalEmissionConfig, ScenarioConfig,
};
use crate::entangled::{
    emission_probability, interference_term, mixture_absorption_probability,
    mixture_emission_probability, one_absorption_probability, EmissionParams,
    EntangledAbsorptionParams,
};
use crate::error::Error;
use crate::gram::GramSpec;
use crate::grid::Grid;
use crate::identical::{
    double_emission_probability, fig2_sweep, one_absorption_probability_identical,
    IdenticalAbsorptionScenario, IdenticalEmissionScenario, PHI, PHI_TILDE, PSI, PSI_TILDE,
};
use crate::states::Statistics;
use crate::verify::{run_campaign, CAMPAIGN_TOL};

/// Significant digits used for every CSV cell.
pub const SIGNIFICANT_DIGITS: usize = 9;
/// Largest initial overlap the sweep evaluates for the fermion column.
pub const FERMION_SWEEP_CAP: f64 = 1.0 - 1e-6;

/// A failure with its process exit code.
#[derive(Debug, ThisError)]
pub enum RunError {
    /// Unusable configuration or flags; exit 1.
    #[error("{0}")]
    Config(#[from] ConfigError),
    /// Domain-invalid scenario values; exit 2.
    #[error("{0}")]
    Domain(#[from] Error),
    /// Closed forms and brute force disagreed; exit 3.
    #[error("verification failed: trials={trials} max_abs_err={max_abs_err:e} exceeds {tol:e}")]
    Verification { trials: usize, max_abs_err: f64, tol: f64 },
    /// Output file could not be written; exit 1.
    #[error("cannot write {path}: {detail}")]
    Output { path: String, detail: String },
}

impl RunError {
    /// Process exit code for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::Output { .. } => 1,
            RunError::Domain(_) => 2,
            RunError::Verification { .. } => 3,
        }
    }
}

/// Fully resolved unit of work.
#[derive(Debug, Clone)]
pub enum Job {
    /// Single-photon absorption of the path-entangled pair.
    EntangledAbsorption { params: EntangledAbsorptionParams },
    /// Emission curve over a time grid.
    EmissionCurve {
        tau_a: f64,
        tau_b: f64,
        m_nt_a: Complex64,
        m_nt_b: Complex64,
        grid: Grid,
    },
    /// Identical-pair absorption sweep over the initial overlap.
    OverlapSweep { tilde_overlaps: Vec<f64>, grid_values: Vec<f64> },
    /// One identical-pair absorption scenario with its term breakdown.
    IdenticalAbsorption { scenario: IdenticalAbsorptionScenario },
    /// One identical-pair two-photon emission scenario.
    IdenticalEmission { scenario: IdenticalEmissionScenario },
    /// Random closed-form vs brute-force campaign.
    Verify { seed: u64, trials: usize },
}

/// Job plus its destination and any notes for stderr.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub job: Job,
    pub out: Option<PathBuf>,
    pub warnings: Vec<String>,
}

/// Optional command-line overrides, raw as typed.
#[derive(Debug, Default, Clone)]
pub struct CliOverrides {
    pub tau_a: Option<f64>,
    pub tau_b: Option<f64>,
    pub x_grid: Option<String>,
    pub tilde_overlap: Option<String>,
    pub stats: Option<String>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub out: Option<PathBuf>,
}

/// What a completed job produced.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    /// Text for stdout when no output path was given.
    pub stdout: Option<String>,
    /// Informational line for stderr.
    pub note: Option<String>,
    /// File the output was written to.
    pub path: Option<PathBuf>,
}

fn parse_stats_flag(raw: &str) -> Result<Statistics, RunError> {
    raw.parse::<Statistics>().map_err(|e| {
        RunError::Config(ConfigError::Invalid { name: "stats".to_string(), detail: e.to_string() })
    })
}

fn parse_grid_flag(raw: &str) -> Result<Grid, RunError> {
    raw.parse::<Grid>().map_err(|e| RunError::Config(ConfigError::Grid(e)))
}

fn require_config<T>(
    value: Option<T>,
    mode: &'static str,
) -> Result<T, RunError> {
    value.ok_or(RunError::Config(ConfigError::Missing { name: "config", mode }))
}

fn build_absorption_scenario(
    cfg: &IdenticalAbsorptionConfig,
    stats_override: Option<Statistics>,
) -> Result<IdenticalAbsorptionScenario, RunError> {
    let stats = stats_override.unwrap_or(cfg.statistics);
    let amplitude = cfg
        .internal_amplitude
        .map_or(Complex64::new(1.0, 0.0), ComplexValue::to_complex);
    let c1 = Complex64::new(1.0, 0.0);
    let phi_psi = cfg.overlap_phi_psi.to_complex();
    let psi_tilde_phi = cfg.overlap_psi_tilde_phi.to_complex();
    let phi_tilde_phi = cfg.overlap_phi_tilde_phi.to_complex();
    let psi_tilde_psi = cfg.overlap_psi_tilde_psi.to_complex();
    let phi_tilde_psi = cfg.overlap_phi_tilde_psi.to_complex();
    let psi_tilde_phi_tilde = cfg.overlap_psi_tilde_phi_tilde.to_complex();
    let entries = nalgebra::DMatrix::from_row_slice(
        4,
        4,
        &[
            c1, psi_tilde_phi.conj(), phi_tilde_phi.conj(), phi_psi,
            psi_tilde_phi, c1, psi_tilde_phi_tilde, psi_tilde_psi,
            phi_tilde_phi, psi_tilde_phi_tilde.conj(), c1, phi_tilde_psi,
            phi_psi.conj(), psi_tilde_psi.conj(), phi_tilde_psi.conj(), c1,
        ],
    );
    let gram = GramSpec::new(vec![PHI, PSI_TILDE, PHI_TILDE, PSI], entries)?;
    Ok(IdenticalAbsorptionScenario::new(stats, gram, amplitude)?)
}

fn build_emission_scenario(
    cfg: &IdenticalEmissionConfig,
    stats_override: Option<Statistics>,
) -> Result<IdenticalEmissionScenario, RunError> {
    let stats = stats_override.unwrap_or(cfg.statistics);
    Ok(IdenticalEmissionScenario::new(
        stats,
        cfg.m_phibar_phi.to_complex(),
        cfg.m_psibar_psi.to_complex(),
        cfg.m_phibar_psi.to_complex(),
        cfg.m_psibar_phi.to_complex(),
        cfg.initial_overlap.to_complex(),
        cfg.final_overlap.to_complex(),
    )?)
}

/// Combines a subcommand, an optional config, and flag overrides into a job.
pub fn resolve(
    subcommand: &str,
    config: Option<ScenarioConfig>,
    ov: &CliOverrides,
) -> Result<Resolved, RunError> {
    if let Some(cfg) = &config {
        if cfg.mode_name() != subcommand {
            return Err(RunError::Config(ConfigError::ModeMismatch {
                config: cfg.mode_name().to_string(),
                subcommand: subcommand.to_string(),
            }));
        }
    }
    let stats_override = ov.stats.as_deref().map(parse_stats_flag).transpose()?;
    let grid_override = ov.x_grid.as_deref().map(parse_grid_flag).transpose()?;
    let mut warnings = Vec::new();

    let job = match subcommand {
        "entangled-absorption" => {
            let cfg = match require_config(config, "entangled-absorption")? {
                ScenarioConfig::EntangledAbsorption(c) => c,
                _ => unreachable!("mode agreement checked above"),
            };
            let alpha = cfg.alpha.to_complex();
            let gamma = cfg.gamma.to_complex();
            let params = match (cfg.beta, cfg.delta) {
                (None, None) => EntangledAbsorptionParams::new(alpha, gamma)?,
                (Some(beta), Some(delta)) => EntangledAbsorptionParams::with_ground_amplitudes(
                    alpha,
                    beta.to_complex(),
                    gamma,
                    delta.to_complex(),
                )?,
                _ => {
                    return Err(RunError::Config(ConfigError::Invalid {
                        name: "beta/delta".to_string(),
                        detail: "give both ground amplitudes or neither".to_string(),
                    }))
                }
            };
            Job::EntangledAbsorption { params }
        }
        "entangled-emission" | "fig1" => {
            let (mut tau_a, mut tau_b) = (1.0, 0.1);
            let mut m_nt = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
            let mut grid = Grid::new(0.0, 3.0, 301).expect("static default grid");
            match config {
                Some(ScenarioConfig::EntangledEmission(c)) => {
                    tau_a = c.tau_a.unwrap_or(tau_a);
                    tau_b = c.tau_b.unwrap_or(tau_b);
                    if let Some(m) = c.m_nt_a {
                        m_nt.0 = m.to_complex();
                    }
                    if let Some(m) = c.m_nt_b {
                        m_nt.1 = m.to_complex();
                    }
                    if let Some(g) = c.grid {
                        grid = g.to_grid().map_err(ConfigError::Grid)?;
                    }
                }
                Some(ScenarioConfig::Fig1(c)) => {
                    tau_a = c.tau_a.unwrap_or(tau_a);
                    tau_b = c.tau_b.unwrap_or(tau_b);
                    if let Some(g) = c.grid {
                        grid = g.to_grid().map_err(ConfigError::Grid)?;
                    }
                }
                None => {}
                _ => unreachable!("mode agreement checked above"),
            }
            tau_a = ov.tau_a.unwrap_or(tau_a);
            tau_b = ov.tau_b.unwrap_or(tau_b);
            if let Some(g) = grid_override {
                grid = g;
            }
            Job::EmissionCurve { tau_a, tau_b, m_nt_a: m_nt.0, m_nt_b: m_nt.1, grid }
        }
        "fig2" => {
            let mut tilde_overlaps = vec![0.5, 0.9];
            let mut grid = Grid::new(0.0, 0.999, 200).expect("static default grid");
            if let Some(ScenarioConfig::Fig2(c)) = config {
                if let Some(t) = c.tilde_overlaps {
                    tilde_overlaps = t;
                }
                if let Some(g) = c.grid {
                    grid = g.to_grid().map_err(ConfigError::Grid)?;
                }
            }
            if let Some(raw) = ov.tilde_overlap.as_deref() {
                tilde_overlaps = parse_overlap_list(raw)?;
            }
            if let Some(g) = grid_override {
                grid = g;
            }
            let mut grid_values = grid.values();
            let mut clamped = 0usize;
            for v in &mut grid_values {
                if *v > FERMION_SWEEP_CAP {
                    *v = FERMION_SWEEP_CAP;
                    clamped += 1;
                }
            }
            if clamped > 0 {
                warnings.push(format!(
                    "clamped {clamped} grid value(s) above {FERMION_SWEEP_CAP} where the fermion pair degenerates"
                ));
            }
            Job::OverlapSweep { tilde_overlaps, grid_values }
        }
        "identical-absorption" => {
            let cfg = match require_config(config, "identical-absorption")? {
                ScenarioConfig::IdenticalAbsorption(c) => c,
                _ => unreachable!("mode agreement checked above"),
            };
            Job::IdenticalAbsorption { scenario: build_absorption_scenario(&cfg, stats_override)? }
        }
        "identical-emission" => {
            let cfg = match require_config(config, "identical-emission")? {
                ScenarioConfig::IdenticalEmission(c) => c,
                _ => unreachable!("mode agreement checked above"),
            };
            Job::IdenticalEmission { scenario: build_emission_scenario(&cfg, stats_override)? }
        }
        "verify" => {
            let (mut seed, mut trials) = (42u64, 100usize);
            if let Some(ScenarioConfig::Verify(c)) = config {
                seed = c.seed.unwrap_or(seed);
                trials = c.trials.unwrap_or(trials);
            }
            seed = ov.seed.unwrap_or(seed);
            trials = ov.trials.unwrap_or(trials);
            Job::Verify { seed, trials }
        }
        other => {
            return Err(RunError::Config(ConfigError::UnknownMode(other.to_string())));
        }
    };
    Ok(Resolved { job, out: ov.out.clone(), warnings })
}

/// Formats a value to a fixed number of significant digits, trimming trailing zeros.
pub fn format_significant(value: f64, digits: usize) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    if !value.is_finite() {
        return value.to_string();
    }
    let magnitude = value.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - magnitude).clamp(0, 25) as usize;
    let rendered = format!("{value:.decimals$}");
    if rendered.contains('.') {
        rendered.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        rendered
    }
}

fn cell(value: f64) -> String {
    format_significant(value, SIGNIFICANT_DIGITS)
}

/// CSV for the single-probability entangled absorption job.
pub fn render_entangled_absorption(params: &EntangledAbsorptionParams) -> Result<String, Error> {
    let one = one_absorption_probability(params)?.value();
    let mixture = mixture_absorption_probability(params)?.value();
    let interference = interference_term(params);
    Ok(format!(
        "p_one,p_mixture,interference\n{},{},{}\n",
        cell(one),
        cell(mixture),
        cell(interference)
    ))
}

/// CSV for the emission curve over a time grid.
pub fn render_emission_curve(
    tau_a: f64,
    tau_b: f64,
    m_nt_a: Complex64,
    m_nt_b: Complex64,
    grid: &Grid,
) -> Result<String, Error> {
    let mut out = String::from("t,p_entangled,p_mixture\n");
    for t in grid.values() {
        let wrap = |e: Error| e.at_grid_point(t);
        let params = EmissionParams::new(tau_a, tau_b, t)
            .and_then(|p| p.with_non_transition(m_nt_a, m_nt_b))
            .map_err(wrap)?;
        let entangled = emission_probability(&params).map_err(wrap)?.value();
        let mixture = mixture_emission_probability(&params).map_err(wrap)?.value();
        out.push_str(&format!("{},{},{}\n", cell(t), cell(entangled), cell(mixture)));
    }
    Ok(out)
}

/// CSV for the overlap sweep, one boson and one fermion column per excited overlap.
pub fn render_overlap_sweep(
    tilde_overlaps: &[f64],
    grid_values: &[f64],
) -> Result<String, Error> {
    let rows = fig2_sweep(grid_values, tilde_overlaps)?;
    let mut out = String::from("x");
    for &tilde in tilde_overlaps {
        let label = cell(tilde);
        out.push_str(&format!(",p_boson_{label},p_fermion_{label}"));
    }
    out.push('\n');
    for row in rows {
        out.push_str(&cell(row.x));
        for (boson, fermion) in row.pairs {
            out.push_str(&format!(",{},{}", cell(boson), cell(fermion)));
        }
        out.push('\n');
    }
    Ok(out)
}

/// CSV for one identical-pair absorption scenario with the full term breakdown.
pub fn render_identical_absorption(
    scenario: &IdenticalAbsorptionScenario,
) -> Result<String, Error> {
    let b = one_absorption_probability_identical(scenario)?;
    let header = "p_total,n_f_squared,mod_phi_tilde_direct,mod_phi_tilde_exchange,\
mod_psi_tilde_direct,mod_psi_tilde_exchange,exchange_phi_tilde,exchange_psi_tilde,\
indist_direct_direct,indist_exchange_exchange,mixed_phi_direct_psi_exchange,\
mixed_phi_exchange_psi_direct";
    let values = [
        b.total.value(),
        b.n_f_squared,
        b.moduli[0],
        b.moduli[1],
        b.moduli[2],
        b.moduli[3],
        b.exchange_terms[0],
        b.exchange_terms[1],
        b.indistinguishability_terms[0],
        b.indistinguishability_terms[1],
        b.mixed_terms[0],
        b.mixed_terms[1],
    ];
    let row: Vec<String> = values.iter().map(|&v| cell(v)).collect();
    Ok(format!("{header}\n{}\n", row.join(",")))
}

/// CSV for one identical-pair two-photon emission scenario.
pub fn render_identical_emission(scenario: &IdenticalEmissionScenario) -> Result<String, Error> {
    let p = double_emission_probability(scenario)?.value();
    Ok(format!("p_two\n{}\n", cell(p)))
}

/// Writes a file atomically: temp file in the same directory, then rename.
pub fn write_atomic(path: &Path, text: &str) -> Result<(), RunError> {
    let to_err =
        |detail: String| RunError::Output { path: path.display().to_string(), detail };
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(parent).map_err(|e| to_err(e.to_string()))?;
    tmp.write_all(text.as_bytes()).map_err(|e| to_err(e.to_string()))?;
    tmp.persist(path).map_err(|e| to_err(e.to_string()))?;
    Ok(())
}

/// Executes a job, writing to `out` when given.
pub fn run(job: &Job, out: Option<&Path>) -> Result<RunOutcome, RunError> {
    let (text, note) = match job {
        Job::EntangledAbsorption { params } => (render_entangled_absorption(params)?, None),
        Job::EmissionCurve { tau_a, tau_b, m_nt_a, m_nt_b, grid } => {
            (render_emission_curve(*tau_a, *tau_b, *m_nt_a, *m_nt_b, grid)?, None)
        }
        Job::OverlapSweep { tilde_overlaps, grid_values } => {
            (render_overlap_sweep(tilde_overlaps, grid_values)?, None)
        }
        Job::IdenticalAbsorption { scenario } => (render_identical_absorption(scenario)?, None),
        Job::IdenticalEmission { scenario } => (render_identical_emission(scenario)?, None),
        Job::Verify { seed, trials } => {
            let report = run_campaign(*seed, *trials).map_err(RunError::Domain)?;
            if report.max_abs_err > CAMPAIGN_TOL {
                return Err(RunError::Verification {
                    trials: report.trials,
                    max_abs_err: report.max_abs_err,
                    tol: CAMPAIGN_TOL,
                });
            }
            let note = format!("seed={} redraws={}", report.seed, report.redraws);
            (format!("{report}\n"), Some(note))
        }
    };
    match out {
        Some(path) => {
            write_atomic(path, &text)?;
            Ok(RunOutcome { stdout: None, note, path: Some(path.to_path_buf()) })
        }
        None => Ok(RunOutcome { stdout: Some(text), note, path: None }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn exit_codes_follow_the_failure_class() {
        let config = RunError::Config(ConfigError::UnknownMode("x".to_string()));
        assert_eq!(config.exit_code(), 1);
        let domain = RunError::Domain(Error::InvalidLifetime { name: "tau_a", value: 0.0 });
        assert_eq!(domain.exit_code(), 2);
        let verification =
            RunError::Verification { trials: 10, max_abs_err: 1e-3, tol: CAMPAIGN_TOL };
        assert_eq!(verification.exit_code(), 3);
        let output = RunError::Output { path: "x.csv".to_string(), detail: "denied".to_string() };
        assert_eq!(output.exit_code(), 1);
    }

    #[test]
    fn significant_formatting_cases() {
        assert_eq!(format_significant(0.0, 9), "0");
        assert_eq!(format_significant(-0.0, 9), "0");
        assert_eq!(format_significant(1.0, 9), "1");
        assert_eq!(format_significant(3.0, 9), "3");
        assert_eq!(format_significant(0.5, 9), "0.5");
        assert_eq!(format_significant(0.999, 9), "0.999");
        assert_eq!(format_significant(-0.25, 9), "-0.25");
        assert_eq!(format_significant(0.805539814514453, 9), "0.805539815");
        assert_eq!(format_significant(0.805539814514453, 6), "0.80554");
        assert_eq!(format_significant(0.8160375794493976, 9), "0.816037579");
        assert_eq!(format_significant(123456789.123, 9), "123456789");
        assert_eq!(format_significant(1e-12, 9), "0.000000000001");
        assert_eq!(format_significant(0.18, 9), "0.18");
    }

    #[test]
    fn fig1_defaults_resolve_without_config() {
        let resolved = resolve("fig1", None, &CliOverrides::default()).unwrap();
        match resolved.job {
            Job::EmissionCurve { tau_a, tau_b, grid, .. } => {
                assert_eq!((tau_a, tau_b), (1.0, 0.1));
                assert_eq!(grid, Grid { start: 0.0, stop: 3.0, steps: 301 });
            }
            other => panic!("wrong job {other:?}"),
        }
        assert!(resolved.warnings.is_empty());
    }

    #[test]
    fn verify_defaults_and_overrides() {
        let resolved = resolve("verify", None, &CliOverrides::default()).unwrap();
        assert!(matches!(resolved.job, Job::Verify { seed: 42, trials: 100 }));
        let ov = CliOverrides { seed: Some(7), trials: Some(5), ..Default::default() };
        let resolved = resolve("verify", None, &ov).unwrap();
        assert!(matches!(resolved.job, Job::Verify { seed: 7, trials: 5 }));
    }

    #[test]
    fn flags_override_config_values() {
        let cfg = parse_config(r#"{"mode":"fig1","tau_a":2.0,"tau_b":0.5}"#).unwrap();
        let ov = CliOverrides { tau_b: Some(0.25), ..Default::default() };
        let resolved = resolve("fig1", Some(cfg), &ov).unwrap();
        match resolved.job {
            Job::EmissionCurve { tau_a, tau_b, .. } => {
                assert_eq!((tau_a, tau_b), (2.0, 0.25));
            }
            other => panic!("wrong job {other:?}"),
        }
    }

    #[test]
    fn mode_mismatch_is_a_config_error() {
        let cfg = parse_config(r#"{"mode":"fig1"}"#).unwrap();
        let err = resolve("fig2", Some(cfg), &CliOverrides::default()).unwrap_err();
        assert!(matches!(err, RunError::Config(ConfigError::ModeMismatch { .. })));
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn config_required_modes_fail_closed() {
        for mode in ["entangled-absorption", "identical-absorption", "identical-emission"] {
            let err = resolve(mode, None, &CliOverrides::default()).unwrap_err();
            assert!(matches!(err, RunError::Config(ConfigError::Missing { .. })), "{mode}");
            assert_eq!(err.exit_code(), 1, "{mode}");
        }
    }

    #[test]
    fn sweep_grid_values_above_the_cap_are_clamped_with_a_warning() {
        let ov = CliOverrides { x_grid: Some("0:1:2".to_string()), ..Default::default() };
        let resolved = resolve("fig2", None, &ov).unwrap();
        match resolved.job {
            Job::OverlapSweep { grid_values, .. } => {
                assert_eq!(grid_values, vec![0.0, FERMION_SWEEP_CAP]);
            }
            other => panic!("wrong job {other:?}"),
        }
        assert_eq!(resolved.warnings.len(), 1);
    }

    #[test]
    fn domain_errors_surface_with_exit_code_two() {
        let cfg = parse_config(
            r#"{"mode":"entangled-absorption","alpha":0.9,"gamma":0.9,"beta":0.1,"delta":0.1}"#,
        )
        .unwrap();
        let err = resolve("entangled-absorption", Some(cfg), &CliOverrides::default()).unwrap_err();
        assert_eq!(err.exit_code(), 2, "{err}");
    }

    #[test]
    fn identical_absorption_config_reproduces_the_sweep_anchor() {
        let cfg = parse_config(
            r#"{
                "mode": "identical-absorption",
                "statistics": "boson",
                "overlap_phi_psi": 0.0,
                "overlap_psi_tilde_phi": 0.6,
                "overlap_phi_tilde_phi": 0.6,
                "overlap_psi_tilde_psi": 0.0,
                "overlap_phi_tilde_psi": 0.0,
                "overlap_psi_tilde_phi_tilde": 0.5
            }"#,
        )
        .unwrap();
        let resolved = resolve("identical-absorption", Some(cfg), &CliOverrides::default()).unwrap();
        match resolved.job {
            Job::IdenticalAbsorption { scenario } => {
                let p = one_absorption_probability_identical(&scenario).unwrap().total.value();
                assert!((p - 0.18).abs() < 1e-9);
            }
            other => panic!("wrong job {other:?}"),
        }
    }

    #[test]
    fn stats_flag_overrides_config_statistics() {
        let cfg = parse_config(
            r#"{
                "mode": "identical-emission",
                "statistics": "boson",
                "m_phibar_phi": 0.5, "m_psibar_psi": 0.5,
                "m_phibar_psi": 0.5, "m_psibar_phi": 0.5,
                "initial_overlap": 0.5, "final_overlap": 0.5
            }"#,
        )
        .unwrap();
        let ov = CliOverrides { stats: Some("fermion".to_string()), ..Default::default() };
        let resolved = resolve("identical-emission", Some(cfg), &ov).unwrap();
        match resolved.job {
            Job::IdenticalEmission { scenario } => {
                assert_eq!(scenario.stats, Statistics::Fermion);
                let p = double_emission_probability(&scenario).unwrap().value();
                assert!(p.abs() < 1e-15);
            }
            other => panic!("wrong job {other:?}"),
        }
    }

    #[test]
    fn bad_stats_flag_is_a_config_error() {
        let ov = CliOverrides { stats: Some("anyon".to_string()), ..Default::default() };
        let cfg = parse_config(
            r#"{
                "mode": "identical-emission",
                "statistics": "boson",
                "m_phibar_phi": 0.5, "m_psibar_psi": 0.5,
                "m_phibar_psi": 0.5, "m_psibar_phi": 0.5,
                "initial_overlap": 0.5, "final_overlap": 0.5
            }"#,
        )
        .unwrap();
        let err = resolve("identical-emission", Some(cfg), &ov).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("stats"), "{err}");
    }

    #[test]
    fn rendered_absorption_row_matches_library_values() {
        let params = EntangledAbsorptionParams::new(
            Complex64::new(0.1, 0.0),
            Complex64::new(0.1, 0.0),
        )
        .unwrap();
        let text = render_entangled_absorption(&params).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("p_one,p_mixture,interference"));
        assert_eq!(lines.next(), Some("0.02,0.01,0.01"));
        assert_eq!(lines.next(), None);
    }

    #[test]
    fn rendered_curve_has_exact_grid_and_values() {
        let grid = Grid::new(0.0, 3.0, 301).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let text = render_emission_curve(1.0, 0.1, one, one, &grid).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 302);
        assert_eq!(lines[0], "t,p_entangled,p_mixture");
        let row_t1: Vec<&str> = lines[101].split(',').collect();
        assert_eq!(row_t1[0], "1");
        assert_eq!(row_t1[1], cell(0.805539814514453));
        assert_eq!(row_t1[2], cell(0.8160375794493976));
    }

    #[test]
    fn rendered_sweep_header_names_each_overlap_column() {
        let text = render_overlap_sweep(&[0.5, 0.9], &[0.0]).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x,p_boson_0.5,p_fermion_0.5,p_boson_0.9,p_fermion_0.9");
        let row: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(row[0], "0");
        for cell_text in &row[1..] {
            assert_eq!(*cell_text, "0.18");
        }
    }

    #[test]
    fn rendered_breakdown_has_twelve_columns() {
        let scenario =
            IdenticalAbsorptionScenario::sweep_point(0.5, 0.5, Statistics::Boson).unwrap();
        let text = render_identical_absorption(&scenario).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0].split(',').count(), 12);
        assert_eq!(lines[1].split(',').count(), 12);
        assert!(lines[0].starts_with("p_total,n_f_squared,"));
    }

    #[test]
    fn atomic_write_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_atomic(&path, "a,b\n1,2\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "a,b\n1,2\n");

        let missing = dir.path().join("missing").join("out.csv");
        let err = write_atomic(&missing, "x").unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn verify_job_reports_a_single_line() {
        let outcome = run(&Job::Verify { seed: 42, trials: 3 }, None).unwrap();
        let text = outcome.stdout.unwrap();
        assert!(text.starts_with("trials=3 max_abs_err="), "{text}");
        assert_eq!(text.lines().count(), 1);
        assert!(outcome.note.unwrap().starts_with("seed=42 redraws="));
    }
}
