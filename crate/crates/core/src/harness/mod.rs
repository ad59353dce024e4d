//! Monte-Carlo experiment runner: learning curves, steady-state sweeps and
//! stability curves, written out as CSV.

mod config;
mod output;

pub use config::{parse_list, AlgoKind, ExperimentConfig, HSource};
pub use output::{format_sig6, write_curves_csv, write_stability_csv, write_sweep_csv};

use rayon::prelude::*;

use crate::eiv::{sample_stream, EivModel, EivSample, StreamConfig};
use crate::error::{Error, Result};
use crate::linalg::{dist_sq, SymMatrix};
use crate::theory::TheoryModel;

/// Ensemble learning curve of one algorithm.
#[derive(Debug, Clone, PartialEq)]
pub struct MsdCurve {
    pub algo: AlgoKind,
    /// Time indices `1..=steps`.
    pub n: Vec<usize>,
    /// `10 log₁₀` of the ensemble mean of `‖wₙ − h‖²`.
    pub msd_db: Vec<f64>,
    /// Predicted learning curve in dB.
    pub theory_overlay: Option<Vec<f64>>,
    /// Replicas that entered the average.
    pub replicas: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveReport {
    pub eta: f64,
    pub curves: Vec<MsdCurve>,
    /// Replica failures that were excluded from the averages.
    pub warnings: Vec<String>,
}

impl CurveReport {
    pub fn curve(&self, algo: AlgoKind) -> Option<&MsdCurve> {
        self.curves.iter().find(|c| c.algo == algo)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub eta: f64,
    pub algo: AlgoKind,
    /// Mean of `‖wₙ − h‖²` over the final tenth of every replica, in dB.
    pub empirical_db: f64,
    pub theory_db: f64,
    /// Steady-state instances averaged (replicas × window length).
    pub instances: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityRow {
    pub eta: f64,
    /// Closed-form lower bound on `λ`.
    pub bound: f64,
    /// Smallest `λ` for which `ρ{S̄} < 1`.
    pub exact: f64,
}

pub fn to_db(v: f64) -> f64 {
    10.0 * v.log10()
}

/// Runs every configured algorithm on the same replica stream and reduces
/// each squared-deviation trajectory with `summarize`.
fn run_replica(
    cfg: &ExperimentConfig,
    model: &EivModel,
    seed: u64,
    steps: usize,
    summarize: &(dyn Fn(&[f64]) -> Vec<f64> + Sync),
) -> Result<Vec<Result<Vec<f64>>>> {
    let mut stream = sample_stream(
        model,
        StreamConfig {
            shift_structured: cfg.structured,
            seed,
            length: steps,
        },
    )?;
    let mut filters = cfg
        .algos
        .iter()
        .map(|&a| cfg.build_filter(a, model.eta()))
        .collect::<Result<Vec<_>>>()?;
    let mut dev = vec![vec![0.0; steps]; filters.len()];
    let mut failed: Vec<Option<Error>> = vec![None; filters.len()];
    let mut s = EivSample::zeros(cfg.order);
    let mut n = 0;
    while stream.next_into(&mut s) {
        for (k, f) in filters.iter_mut().enumerate() {
            if failed[k].is_some() {
                continue;
            }
            match f.step(&s.x_noisy, s.y_noisy) {
                Ok(()) => dev[k][n] = dist_sq(f.weights(), model.h()),
                Err(e) => failed[k] = Some(Error::Numerical(format!("step {}: {e}", n + 1))),
            }
        }
        n += 1;
    }
    Ok(dev
        .iter()
        .zip(failed)
        .map(|(d, e)| match e {
            Some(e) => Err(e),
            None if d.iter().all(|v| v.is_finite()) => Ok(summarize(d)),
            None => Err(Error::Numerical("non-finite weights".into())),
        })
        .collect())
}

/// Runs `cfg.runs` replicas in parallel and averages each algorithm's
/// summaries in replica order. Replica failures are dropped with a warning
/// while they stay under 1% of the ensemble.
fn ensemble(
    cfg: &ExperimentConfig,
    model: &EivModel,
    steps: usize,
    summarize: &(dyn Fn(&[f64]) -> Vec<f64> + Sync),
    warnings: &mut Vec<String>,
) -> Result<Vec<(Vec<f64>, usize)>> {
    let per_replica: Vec<Vec<Result<Vec<f64>>>> = (0..cfg.runs)
        .into_par_iter()
        .map(|r| run_replica(cfg, model, cfg.base_seed.wrapping_add(r as u64), steps, summarize))
        .collect::<Result<_>>()?;

    let mut out = Vec::with_capacity(cfg.algos.len());
    for (k, &algo) in cfg.algos.iter().enumerate() {
        let mut sum: Option<Vec<f64>> = None;
        let mut used = 0;
        let mut failures = Vec::new();
        for (r, results) in per_replica.iter().enumerate() {
            match &results[k] {
                Ok(v) => {
                    match sum.as_mut() {
                        Some(s) => s.iter_mut().zip(v).for_each(|(a, b)| *a += b),
                        None => sum = Some(v.clone()),
                    }
                    used += 1;
                }
                Err(e) => failures.push(format!("replica {r}: {e}")),
            }
        }
        if !failures.is_empty() {
            if failures.len() as f64 >= 0.01 * cfg.runs as f64 {
                return Err(Error::Numerical(format!(
                    "{algo} failed in {} of {} replicas (first: {})",
                    failures.len(),
                    cfg.runs,
                    failures[0]
                )));
            }
            warnings.extend(failures.into_iter().map(|f| format!("{algo} excluded {f}")));
        }
        let mut mean = sum.unwrap_or_default();
        mean.iter_mut().for_each(|v| *v /= used as f64);
        out.push((mean, used));
    }
    Ok(out)
}

/// Ensemble-averaged learning curves at input noise `cfg.eta`.
pub fn run_learning_curves(cfg: &ExperimentConfig) -> Result<CurveReport> {
    cfg.validate()?;
    let model = cfg.model(cfg.eta)?;
    let mut warnings = Vec::new();
    let means = ensemble(cfg, &model, cfg.steps, &|d| d.to_vec(), &mut warnings)?;
    let overlay = if cfg.theory_overlay {
        let t = TheoryModel::from_model(&model, cfg.lambda()?)?;
        Some(t.predicted_curve(cfg.steps).into_iter().map(to_db).collect::<Vec<_>>())
    } else {
        None
    };
    let curves = cfg
        .algos
        .iter()
        .zip(means)
        .map(|(&algo, (mean, replicas))| MsdCurve {
            algo,
            n: (1..=cfg.steps).collect(),
            msd_db: mean.into_iter().map(to_db).collect(),
            theory_overlay: overlay.clone(),
            replicas,
        })
        .collect();
    Ok(CurveReport {
        eta: cfg.eta,
        curves,
        warnings,
    })
}

/// Run length used by the steady-state sweep: at least `20/(1 − λ)` so the
/// final tenth lies well past the transient.
pub fn steady_state_steps(cfg: &ExperimentConfig) -> Result<usize> {
    let lambda = cfg.lambda()?;
    Ok(cfg.steps.max((20.0 / (1.0 - lambda)).ceil() as usize))
}

/// Empirical and predicted steady-state MSD at every `η` of the grid.
pub fn run_steady_state_sweep(cfg: &ExperimentConfig, eta_grid: &[f64]) -> Result<SweepReport> {
    cfg.validate()?;
    check_grid(eta_grid, true)?;
    let lambda = cfg.lambda()?;
    let steps = steady_state_steps(cfg)?;
    let window = (steps / 10).max(1);
    let summarize = move |d: &[f64]| vec![d[d.len() - window..].iter().sum::<f64>() / window as f64];
    let mut report = SweepReport::default();
    for &eta in eta_grid {
        let model = cfg.model(eta)?;
        let theory = TheoryModel::from_model(&model, lambda)?.steady_state_msd();
        let means = ensemble(cfg, &model, steps, &summarize, &mut report.warnings)?;
        for (&algo, (mean, used)) in cfg.algos.iter().zip(means) {
            report.rows.push(SweepRow {
                eta,
                algo,
                empirical_db: to_db(mean[0]),
                theory_db: to_db(theory),
                instances: used * window,
            });
        }
    }
    Ok(report)
}

/// Forgetting-factor stability thresholds over a grid of input noise levels.
pub fn run_stability_curve(r: &SymMatrix, eta_grid: &[f64]) -> Result<Vec<StabilityRow>> {
    check_grid(eta_grid, false)?;
    let base = TheoryModel::new(r.clone(), vec![0.0; r.dim()], 0.0, 0.0, 1.0)?;
    eta_grid
        .iter()
        .map(|&eta| {
            let m = TheoryModel::new(base.r().clone(), base.h().to_vec(), eta, 0.0, 1.0)?;
            Ok(StabilityRow {
                eta,
                bound: m.stability_lambda_bound(),
                exact: m.stability_lambda_exact(),
            })
        })
        .collect()
}

fn check_grid(grid: &[f64], positive: bool) -> Result<()> {
    for &eta in grid {
        let ok = if positive { eta > 0.0 } else { eta >= 0.0 };
        if !(ok && eta.is_finite()) {
            return Err(Error::Config(format!("grid value η = {eta} is out of range")));
        }
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("η grid must be strictly increasing".into()));
    }
    Ok(())
}
