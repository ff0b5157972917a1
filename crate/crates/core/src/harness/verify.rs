use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{map_batch, HarnessError};
use crate::bnb::{improve_schedule, initial_heuristic, solve, SolveOptions};
use crate::lagrangian::compute_bound;
use crate::sched::{
    brute_force_optimal, evaluate_schedule, is_feasible, random_instance, RawInstance,
    DEFAULT_WEIGHT_MAX,
};

/// Largest N the exhaustive oracle handles in reasonable time.
pub const VERIFY_N_MAX: usize = 9;

/// Deliberate solver corruption, to prove the harness catches it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    IncumbentOffByOne,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub n_max: usize,
    pub trials: usize,
    pub seed: u64,
    pub densities: Vec<f64>,
    pub weight_max: u64,
    pub fault: Option<Fault>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            n_max: 8,
            trials: 200,
            seed: 0,
            densities: vec![0.0, 0.2, 0.5],
            weight_max: DEFAULT_WEIGHT_MAX,
            fault: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialSpec {
    pub trial: usize,
    pub n: usize,
    pub density: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyFailure {
    #[serde(flatten)]
    pub spec: TrialSpec,
    pub reason: String,
    #[serde(skip)]
    pub instance: RawInstance,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub trials: usize,
    pub failures: Vec<VerifyFailure>,
}

impl VerifyReport {
    pub fn passed(&self) -> usize {
        self.trials - self.failures.len()
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// N cycles through 2..=n_max and density through the list; instance seeds come from
/// one stream keyed by `cfg.seed`.
pub fn trial_specs(cfg: &VerifyConfig) -> Vec<TrialSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let sizes = cfg.n_max - 1;
    (0..cfg.trials)
        .map(|trial| TrialSpec {
            trial,
            n: 2 + trial % sizes,
            density: cfg.densities[(trial / sizes) % cfg.densities.len()],
            seed: rng.gen(),
        })
        .collect()
}

pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport, HarnessError> {
    if !(2..=VERIFY_N_MAX).contains(&cfg.n_max) {
        return Err(HarnessError::Config(format!(
            "n-max must be between 2 and {VERIFY_N_MAX}, got {}",
            cfg.n_max
        )));
    }
    if cfg.densities.is_empty() || cfg.densities.iter().any(|d| !(0.0..=1.0).contains(d)) {
        return Err(HarnessError::Config("densities must lie in [0, 1]".into()));
    }
    let specs = trial_specs(cfg);
    let outcomes = map_batch(&specs, |spec| check_trial(cfg, spec));
    Ok(VerifyReport {
        trials: specs.len(),
        failures: outcomes.into_iter().flatten().collect(),
    })
}

fn check_trial(cfg: &VerifyConfig, spec: &TrialSpec) -> Option<VerifyFailure> {
    let inst = random_instance(spec.seed, spec.n, spec.density, cfg.weight_max);
    let fail = |reason: String| {
        Some(VerifyFailure {
            spec: *spec,
            reason,
            instance: inst.to_raw(),
        })
    };
    let optimum = brute_force_optimal(&inst)
        .expect("trial sizes stay within the oracle limit")
        .objective();
    let result = solve(
        &inst,
        &SolveOptions {
            seed: spec.seed,
            ..Default::default()
        },
    );
    let mut objective = result.best_objective;
    if cfg.fault == Some(Fault::IncumbentOffByOne) {
        objective += 1;
    }
    if objective != optimum {
        return fail(format!(
            "solver objective {objective}, brute force {optimum}"
        ));
    }
    if !result.proven_optimal || result.global_lb != objective {
        return fail(format!(
            "not proven optimal (global lb {}, objective {objective})",
            result.global_lb
        ));
    }
    if !is_feasible(&inst, result.best_schedule.order()) {
        return fail("solver schedule violates precedence".into());
    }

    let reference = improve_schedule(&inst, &initial_heuristic(&inst, spec.seed));
    let bound = match compute_bound(&inst, &reference) {
        Ok(b) => b,
        Err(e) => return fail(format!("bound failed: {e}")),
    };
    if bound.lb() > optimum {
        return fail(format!("root lb {} exceeds optimum {optimum}", bound.lb()));
    }
    if let (Some(s), Some(ub)) = (&bound.schedule, bound.upper_bound) {
        let direct = evaluate_schedule(&inst, s.order()).map(|s| s.objective());
        if Ok(ub) != direct || ub < optimum {
            return fail(format!("root ub {ub} vs extracted objective {direct:?}"));
        }
    }
    None
}

#[derive(Serialize)]
struct Reproducer<'a> {
    #[serde(flatten)]
    instance: &'a RawInstance,
    verify: &'a VerifyFailure,
}

/// Writes the failing instance in the instance file format, with the trial metadata
/// under an extra `verify` key that instance loading ignores.
pub fn write_reproducer(path: &Path, failure: &VerifyFailure) -> std::io::Result<()> {
    let body = serde_json::to_string_pretty(&Reproducer {
        instance: &failure.instance,
        verify: failure,
    })
    .expect("reproducer serializes");
    std::fs::write(path, body + "\n")
}
