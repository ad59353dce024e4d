use super::exact::update_inverse;
use super::{update_stats, AdaptiveFilter, FilterConfig};
use crate::error::{check_len, Error, Result};
use crate::linalg::{solve_spd, SymMatrix};
use crate::stats::Stats;

/// Exponentially weighted recursive least squares.
#[derive(Debug, Clone)]
pub struct RlsState {
    pub phi_inv: SymMatrix,
    pub z: Vec<f64>,
    pub w: Vec<f64>,
    pub lambda: f64,
}

impl RlsState {
    /// Starts from `Φ₀⁻¹ = δ⁻¹I`.
    pub fn new(order: usize, lambda: f64, delta: f64) -> Result<Self> {
        let stats = Stats::init(order, lambda, delta)?;
        Ok(Self::from_stats(&stats))
    }

    /// Starts from the (diagonal) initial statistics of a filter configuration.
    pub fn from_config(cfg: &FilterConfig) -> Result<Self> {
        Ok(Self::from_stats(&cfg.initial_stats()?))
    }

    fn from_stats(stats: &Stats) -> Self {
        let inv: Vec<f64> = stats.phi().diag().iter().map(|v| v.recip()).collect();
        Self {
            phi_inv: SymMatrix::diagonal(&inv),
            z: vec![0.0; stats.order()],
            w: vec![0.0; stats.order()],
            lambda: stats.lambda(),
        }
    }
}

/// One RLS update: `Φₙ⁻¹` by its rank-one recursion, `zₙ`, and `wₙ = Φₙ⁻¹zₙ`.
pub fn rls_step(state: &mut RlsState, x: &[f64], y: f64) -> Result<()> {
    check_len("regressor", x.len(), state.z.len())?;
    update_inverse(&mut state.phi_inv, x, state.lambda)?;
    for (zi, &xi) in state.z.iter_mut().zip(x) {
        *zi = state.lambda * *zi + y * xi;
    }
    state.phi_inv.mul_vec_into(&state.z, &mut state.w);
    Ok(())
}

impl AdaptiveFilter for RlsState {
    fn step(&mut self, x: &[f64], y: f64) -> Result<()> {
        rls_step(self, x, y)
    }

    fn weights(&self) -> &[f64] {
        &self.w
    }
}

/// `wₙ = Φₙ⁻¹zₙ + (1 − λ)⁻¹ηΦₙ⁻¹wₙ₋₁`, solved against `Φₙ`.
///
/// The correction assumes the statistics have reached their asymptotic
/// scale `(1 − λ)⁻¹`. Iterated from the first sample it is unstable while
/// `Φₙ` is still small; [`Bcrls`] uses the effective memory instead.
pub fn bcrls_step(stats: &Stats, w_prev: &[f64], eta: f64) -> Result<Vec<f64>> {
    let lambda = stats.lambda();
    if lambda >= 1.0 {
        return Err(Error::Config("bias compensation needs λ < 1".into()));
    }
    bcrls_step_with_memory(stats, w_prev, eta, (1.0 - lambda).recip())
}

/// As [`bcrls_step`] with `(1 − λ)⁻¹` replaced by `memory`.
pub fn bcrls_step_with_memory(stats: &Stats, w_prev: &[f64], eta: f64, memory: f64) -> Result<Vec<f64>> {
    check_len("previous weights", w_prev.len(), stats.order())?;
    if !(eta >= 0.0 && eta.is_finite()) {
        return Err(Error::Config(format!("input noise variance {eta} must be nonnegative")));
    }
    let c = memory * eta;
    let rhs: Vec<f64> = stats.z().iter().zip(w_prev).map(|(z, w)| z + c * w).collect();
    solve_spd(stats.phi(), &rhs)
}

/// Bias-compensated RLS with oracle knowledge of `η`.
///
/// The compensation weight is the effective memory `Σₖ<ₙ λᵏ = (1 − λⁿ)/(1 − λ)`,
/// which tracks the scale of `Φₙ` and tends to `(1 − λ)⁻¹`.
#[derive(Debug, Clone)]
pub struct Bcrls {
    cfg: FilterConfig,
    stats: Stats,
    eta: f64,
    memory: f64,
    w: Vec<f64>,
}

impl Bcrls {
    pub fn new(cfg: FilterConfig, eta: f64) -> Result<Self> {
        if !(eta >= 0.0 && eta.is_finite()) {
            return Err(Error::Config(format!("input noise variance {eta} must be nonnegative")));
        }
        Ok(Self {
            stats: cfg.initial_stats()?,
            eta,
            memory: 0.0,
            w: vec![0.0; cfg.order],
            cfg,
        })
    }

    pub fn stats(&self) -> &Stats {
        &self.stats
    }

    pub fn memory(&self) -> f64 {
        self.memory
    }
}

impl AdaptiveFilter for Bcrls {
    fn step(&mut self, x: &[f64], y: f64) -> Result<()> {
        update_stats(&mut self.stats, self.cfg.structured, x, y)?;
        self.memory = self.cfg.lambda * self.memory + 1.0;
        self.w = bcrls_step_with_memory(&self.stats, &self.w, self.eta, self.memory)?;
        Ok(())
    }

    fn weights(&self) -> &[f64] {
        &self.w
    }
}
