use super::{update_stats, AdaptiveFilter, FilterConfig};
use crate::error::{check_len, Error, Result};
use crate::linalg::{dot, norm, solve_dense, DenseMatrix, SymMatrix};
use crate::stats::Stats;

/// `wₙ = (Φₙ + γ⁻¹wₙ₋₁zₙᵀ)⁻¹(zₙ + γ⁻¹τₙwₙ₋₁)` by a dense LU solve.
pub fn exact_rtls_step_direct(stats: &Stats, w_prev: &[f64], gamma: f64) -> Result<Vec<f64>> {
    let l = stats.order();
    check_len("previous weights", w_prev.len(), l)?;
    check_gamma(gamma)?;
    let (phi, z) = (stats.phi(), stats.z());
    let g = gamma.recip();
    let a = DenseMatrix::from_fn(l, l, |i, j| phi.get(i, j) + g * w_prev[i] * z[j]);
    let rhs: Vec<f64> = (0..l).map(|i| z[i] + g * stats.tau() * w_prev[i]).collect();
    solve_dense(&a, &rhs)
}

/// The same estimate through the Sherman–Morrison form, given `Φₙ⁻¹`.
pub fn exact_rtls_step_sm(phi_inv: &SymMatrix, z: &[f64], tau: f64, w_prev: &[f64], gamma: f64) -> Result<Vec<f64>> {
    let l = phi_inv.dim();
    check_len("cross-correlation", z.len(), l)?;
    check_len("previous weights", w_prev.len(), l)?;
    check_gamma(gamma)?;
    let g = gamma.recip();
    let a = phi_inv.mul_vec(w_prev);
    let c: Vec<f64> = (0..l).map(|i| z[i] + g * tau * w_prev[i]).collect();
    let pc = phi_inv.mul_vec(&c);
    let den = gamma + dot(z, &a);
    let guard = 1e-12 * (gamma + norm(z) * norm(&a));
    if !(den.abs() >= guard) {
        return Err(Error::DegenerateDenominator { value: den, guard });
    }
    // zᵀΦ⁻¹c, using the symmetry of Φ⁻¹
    let ratio = dot(z, &pc) / den;
    Ok((0..l).map(|i| pc[i] - ratio * a[i]).collect())
}

/// Rank-one recursion for `Φₙ⁻¹` after `Φₙ = λΦₙ₋₁ + x̃x̃ᵀ`.
pub fn update_inverse(phi_inv: &mut SymMatrix, x: &[f64], lambda: f64) -> Result<()> {
    let l = phi_inv.dim();
    check_len("regressor", x.len(), l)?;
    let g = phi_inv.mul_vec(x);
    let den = lambda + dot(x, &g);
    if !(den > 0.0) {
        return Err(Error::Numerical(format!("inverse update denominator {den:e} is not positive")));
    }
    let inv_lambda = lambda.recip();
    let data = phi_inv.packed_mut();
    let mut k = 0;
    for i in 0..l {
        for j in i..l {
            data[k] = inv_lambda * (data[k] - g[i] * g[j] / den);
            k += 1;
        }
    }
    Ok(())
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::Config(format!("noise ratio γ = {gamma} must be positive")));
    }
    Ok(())
}

/// Exact RTLS recursion solving the full system every step.
#[derive(Debug, Clone)]
pub struct ExactRtls {
    cfg: FilterConfig,
    stats: Stats,
    w: Vec<f64>,
}

impl ExactRtls {
    pub fn new(cfg: FilterConfig) -> Result<Self> {
        Ok(Self {
            stats: cfg.initial_stats()?,
            w: vec![0.0; cfg.order],
            cfg,
        })
    }

    pub fn stats(&self) -> &Stats {
        &self.stats
    }
}

impl AdaptiveFilter for ExactRtls {
    fn step(&mut self, x: &[f64], y: f64) -> Result<()> {
        update_stats(&mut self.stats, self.cfg.structured, x, y)?;
        self.w = exact_rtls_step_direct(&self.stats, &self.w, self.cfg.gamma)?;
        Ok(())
    }

    fn weights(&self) -> &[f64] {
        &self.w
    }
}

/// Exact RTLS recursion carrying `Φₙ⁻¹` by rank-one updates.
#[derive(Debug, Clone)]
pub struct SmRtls {
    cfg: FilterConfig,
    stats: Stats,
    phi_inv: SymMatrix,
    w: Vec<f64>,
}

impl SmRtls {
    pub fn new(cfg: FilterConfig) -> Result<Self> {
        let stats = cfg.initial_stats()?;
        // the initial Φ is diagonal
        let inv: Vec<f64> = stats.phi().diag().iter().map(|v| v.recip()).collect();
        Ok(Self {
            phi_inv: SymMatrix::diagonal(&inv),
            stats,
            w: vec![0.0; cfg.order],
            cfg,
        })
    }

    pub fn stats(&self) -> &Stats {
        &self.stats
    }

    pub fn phi_inv(&self) -> &SymMatrix {
        &self.phi_inv
    }
}

impl AdaptiveFilter for SmRtls {
    fn step(&mut self, x: &[f64], y: f64) -> Result<()> {
        update_stats(&mut self.stats, self.cfg.structured, x, y)?;
        update_inverse(&mut self.phi_inv, x, self.cfg.lambda)?;
        self.w = exact_rtls_step_sm(&self.phi_inv, self.stats.z(), self.stats.tau(), &self.w, self.cfg.gamma)?;
        Ok(())
    }

    fn weights(&self) -> &[f64] {
        &self.w
    }
}
