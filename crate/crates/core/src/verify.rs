//! Seeded Monte-Carlo checks that a functional stays at most 1 below its radius.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::functionals::{evaluate, FunctionalKind, FunctionalValue, MapPair, Mode};
use crate::radii::{radius_problem_for, solve_radius, DEFAULT_TOLERANCE};
use crate::schwarz::{negated_monomial, random_schwarz_with, SchwarzMap};
use crate::series::{random_disk_point, BoundedFunction, DEFAULT_TRUNCATION};

/// Share of trials drawn from the extremal families.
pub const EXTREMAL_SHARE: f64 = 0.2;
pub const MAX_SCHUR_LENGTH: usize = 12;
const MAX_INNER_DEGREE: usize = 3;
/// Violations kept in a report; `violation_count` has the full number.
pub const MAX_RECORDED_VIOLATIONS: usize = 1000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationConfig {
    pub functional: FunctionalKind,
    pub k: u32,
    pub m0: u32,
    pub trials: usize,
    pub seed: u64,
    /// Points are drawn from the disk of radius `radius − margin`.
    pub margin: f64,
    pub truncation: usize,
    /// Replaces the sharp radius, e.g. to probe above it.
    pub radius_override: Option<f64>,
}

impl VerificationConfig {
    pub fn new(functional: FunctionalKind, k: u32, m0: u32, trials: usize, seed: u64) -> Self {
        VerificationConfig {
            functional,
            k,
            m0,
            trials,
            seed,
            margin: 1e-3,
            truncation: DEFAULT_TRUNCATION,
            radius_override: None,
        }
    }
}

/// The sharp radius for `kind` with Schwarz orders `k` and `m0`.
pub fn radius_for(kind: &FunctionalKind, k: u32, m0: u32) -> Result<f64> {
    kind.validate()?;
    Ok(solve_radius(&radius_problem_for(kind, k, m0), DEFAULT_TOLERANCE)?.root)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialDescriptor {
    pub trial: usize,
    pub extremal: bool,
    pub function: BoundedFunction,
    pub w_m0: SchwarzMap,
    pub w_k: SchwarzMap,
    pub z: Complex64,
    pub value: FunctionalValue,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub config: VerificationConfig,
    pub radius: f64,
    pub trials_run: usize,
    pub max_value: f64,
    pub argmax_descriptor: Option<TrialDescriptor>,
    pub violation_count: usize,
    pub violations: Vec<TrialDescriptor>,
    pub seed: u64,
}

fn validate(cfg: &VerificationConfig) -> Result<f64> {
    cfg.functional.validate()?;
    if cfg.trials == 0 {
        return Err(invalid("at least one trial is required"));
    }
    if cfg.k == 0 || cfg.m0 == 0 {
        return Err(invalid("k and m0 must be at least 1"));
    }
    if cfg.truncation == 0 {
        return Err(invalid("truncation must be at least 1"));
    }
    let radius = match cfg.radius_override {
        Some(r) => r,
        None => radius_for(&cfg.functional, cfg.k, cfg.m0)?,
    };
    if !(cfg.margin >= 0.0 && cfg.margin < radius) {
        return Err(invalid(format!("margin {} outside [0, {radius})", cfg.margin)));
    }
    if !(radius < 1.0) {
        return Err(invalid(format!("radius {radius} must lie below 1")));
    }
    Ok(radius)
}

fn uses_zero_constant_family(kind: &FunctionalKind) -> bool {
    matches!(kind, FunctionalKind::ZeroOmittedSum | FunctionalKind::RefinedL)
}

fn evaluates_at_z(kind: &FunctionalKind) -> bool {
    matches!(
        kind,
        FunctionalKind::RogosinskiSum { .. }
            | FunctionalKind::RefinedA { .. }
            | FunctionalKind::PartialSum { .. }
            | FunctionalKind::PowerMajorant { .. }
    )
}

/// One trial, fully determined by `(cfg.seed, trial)`.
pub fn run_trial(cfg: &VerificationConfig, radius: f64, trial: usize) -> Result<TrialDescriptor> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(trial as u64);
    let disk = radius - cfg.margin;
    let kind = cfg.functional;

    let extremal = rng.gen::<f64>() < EXTREMAL_SHARE;
    let (function, w_m0, w_k, z) = if extremal {
        let a = if rng.gen::<bool>() { 1.0 - rng.gen::<f64>().powi(3) } else { rng.gen::<f64>() };
        let f = if uses_zero_constant_family(&kind) {
            BoundedFunction::extremal_fa_star(a)?
        } else {
            BoundedFunction::extremal_fa(a)?
        };
        let x = if evaluates_at_z(&kind) { -disk } else { disk };
        (f, negated_monomial(cfg.m0)?, SchwarzMap::power(cfg.k)?, Complex64::new(x, 0.0))
    } else {
        let len = rng.gen_range(1..=MAX_SCHUR_LENGTH);
        let mut f = BoundedFunction::random_schur(&mut rng, len);
        if kind.needs_zero_constant() {
            if let crate::series::Representation::SchurSequence { params } = f.representation() {
                let mut params = params.clone();
                params.insert(0, Complex64::new(0.0, 0.0));
                f = BoundedFunction::schur_sequence(params)?;
            }
        }
        let deg_m0 = rng.gen_range(0..=MAX_INNER_DEGREE);
        let w_m0 = random_schwarz_with(&mut rng, cfg.m0, deg_m0)?;
        let deg_k = rng.gen_range(0..=MAX_INNER_DEGREE);
        let w_k = random_schwarz_with(&mut rng, cfg.k, deg_k)?;
        let z = random_disk_point(&mut rng, disk);
        (f, w_m0, w_k, z)
    };

    let maps = MapPair { w_m0, w_k };
    let value = evaluate(kind, &function, &maps, z, cfg.truncation, Mode::Pointwise)?;
    Ok(TrialDescriptor { trial, extremal, function, w_m0: maps.w_m0, w_k: maps.w_k, z, value })
}

/// Runs the trials on the rayon pool.
pub fn run_trials(cfg: &VerificationConfig) -> Result<VerificationReport> {
    run_trials_with(cfg, true)
}

/// Runs every trial and folds the results in trial order, so serial and
/// parallel runs produce identical reports.
pub fn run_trials_with(cfg: &VerificationConfig, parallel: bool) -> Result<VerificationReport> {
    let radius = validate(cfg)?;
    let results: Vec<Result<TrialDescriptor>> = if parallel {
        (0..cfg.trials).into_par_iter().map(|t| run_trial(cfg, radius, t)).collect()
    } else {
        (0..cfg.trials).map(|t| run_trial(cfg, radius, t)).collect()
    };

    let mut report = VerificationReport {
        config: cfg.clone(),
        radius,
        trials_run: 0,
        max_value: f64::NEG_INFINITY,
        argmax_descriptor: None,
        violation_count: 0,
        violations: Vec::new(),
        seed: cfg.seed,
    };
    for result in results {
        let d = result?;
        report.trials_run += 1;
        if d.value.total_upper > report.max_value {
            report.max_value = d.value.total_upper;
            report.argmax_descriptor = Some(d.clone());
        }
        if d.value.total_upper > 1.0 + crate::EPS_FLOAT {
            report.violation_count += 1;
            if report.violations.len() < MAX_RECORDED_VIOLATIONS {
                report.violations.push(d);
            }
        }
    }
    Ok(report)
}
