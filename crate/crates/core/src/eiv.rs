//! Errors-in-variables data generation.
//!
//! A clean regressor `x` drives a fixed FIR system `h`; both the regressor
//! and the output are observed through additive white Gaussian noise of
//! variances `eta` and `xi` respectively.

use crate::error::{check_len, Error, Result};
use crate::linalg::{dot, norm, sym_eig, DenseMatrix, SymMatrix};
use crate::rng::GaussianSource;

/// The eight-tap reference system used throughout the experiments.
pub const REFERENCE_SYSTEM: [f64; 8] = [-0.019, -0.213, -0.600, 0.235, 0.574, 0.377, -0.056, -0.254];

/// Seed for which `gen_covariance(8, seed)` yields `tr{R⁻¹} ≈ 12.82`, the
/// covariance scale of the reference experiments.
pub const REFERENCE_COVARIANCE_SEED: u64 = 7399;

pub fn paper_system() -> Vec<f64> {
    REFERENCE_SYSTEM.to_vec()
}

/// `R = Q diag(f) Qᵀ` together with its factors.
#[derive(Debug, Clone)]
pub struct CovarianceSynthesis {
    pub r: SymMatrix,
    pub q: DenseMatrix,
    pub f: Vec<f64>,
}

/// Random covariance with eigenvalues drawn uniformly from `[0.2, 1.8]` and a
/// random orthogonal eigenbasis.
///
/// The basis comes from Gram–Schmidt on a standard Gaussian matrix (applied
/// twice for orthogonality to working precision); the implied triangular
/// factor has a positive diagonal.
pub fn gen_covariance(l: usize, seed: u64) -> Result<CovarianceSynthesis> {
    if l == 0 {
        return Err(Error::InvalidInput("system order must be positive".into()));
    }
    let mut g = GaussianSource::new(seed);
    let f: Vec<f64> = (0..l).map(|_| g.uniform(0.2, 1.8)).collect();

    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(l);
    for _ in 0..l {
        let mut col = vec![0.0; l];
        g.fill_standard_normal(&mut col);
        for _pass in 0..2 {
            for prev in &cols {
                let proj = dot(prev, &col);
                col.iter_mut().zip(prev).for_each(|(c, p)| *c -= proj * p);
            }
        }
        let nrm = norm(&col);
        if nrm < 1e-8 {
            return Err(Error::Numerical("degenerate random basis".into()));
        }
        col.iter_mut().for_each(|c| *c /= nrm);
        cols.push(col);
    }
    let q = DenseMatrix::from_fn(l, l, |i, j| cols[j][i]);
    let r = SymMatrix::from_fn(l, |i, j| (0..l).map(|k| f[k] * q.get(i, k) * q.get(j, k)).sum());
    Ok(CovarianceSynthesis { r, q, f })
}

/// Ground truth of an errors-in-variables identification problem.
#[derive(Debug, Clone)]
pub struct EivModel {
    h: Vec<f64>,
    r: SymMatrix,
    eta: f64,
    xi: f64,
    // Q diag(√f), maps a standard normal vector to N(0, R)
    mix: DenseMatrix,
}

impl EivModel {
    /// Validates `R` (finite, positive definite) and factors it for sampling.
    pub fn new(h: Vec<f64>, r: SymMatrix, eta: f64, xi: f64) -> Result<Self> {
        Self::check_noise(eta, xi)?;
        check_len("system vector", h.len(), r.dim())?;
        let eig = sym_eig(&r)?;
        if eig.min() <= 0.0 {
            return Err(Error::InvalidModel(format!(
                "input covariance is not positive definite (smallest eigenvalue {:e})",
                eig.min()
            )));
        }
        let l = r.dim();
        let mix = DenseMatrix::from_fn(l, l, |i, k| eig.eigenvectors[k][i] * eig.eigenvalues[k].sqrt());
        Ok(Self { h, r, eta, xi, mix })
    }

    /// Uses the stored factors of a synthesized covariance directly.
    pub fn from_synthesis(h: Vec<f64>, cov: &CovarianceSynthesis, eta: f64, xi: f64) -> Result<Self> {
        Self::check_noise(eta, xi)?;
        let l = cov.r.dim();
        check_len("system vector", h.len(), l)?;
        let mix = DenseMatrix::from_fn(l, l, |i, k| cov.q.get(i, k) * cov.f[k].sqrt());
        Ok(Self {
            h,
            r: cov.r.clone(),
            eta,
            xi,
            mix,
        })
    }

    /// Reference eight-tap system with the reference covariance, `ξ = γη`.
    pub fn reference(eta: f64, gamma: f64) -> Result<Self> {
        let cov = gen_covariance(REFERENCE_SYSTEM.len(), REFERENCE_COVARIANCE_SEED)?;
        Self::from_synthesis(paper_system(), &cov, eta, gamma * eta)
    }

    fn check_noise(eta: f64, xi: f64) -> Result<()> {
        if !(eta >= 0.0 && eta.is_finite() && xi >= 0.0 && xi.is_finite()) {
            return Err(Error::InvalidModel(format!(
                "noise variances must be finite and non-negative (eta = {eta}, xi = {xi})"
            )));
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.h.len()
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn r(&self) -> &SymMatrix {
        &self.r
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// `γ = ξ/η`, undefined without input noise.
    pub fn gamma(&self) -> Option<f64> {
        (self.eta > 0.0).then(|| self.xi / self.eta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamConfig {
    pub shift_structured: bool,
    pub seed: u64,
    pub length: usize,
}

/// One time step of observed and clean data.
#[derive(Debug, Clone, PartialEq)]
pub struct EivSample {
    pub n: usize,
    pub x_noisy: Vec<f64>,
    pub y_noisy: f64,
    pub x_clean: Vec<f64>,
    pub y_clean: f64,
}

impl EivSample {
    pub fn zeros(l: usize) -> Self {
        Self {
            n: 0,
            x_noisy: vec![0.0; l],
            y_noisy: 0.0,
            x_clean: vec![0.0; l],
            y_clean: 0.0,
        }
    }
}

/// Deterministic sample generator.
///
/// Unstructured streams draw `x ~ N(0, R)` independently at every step. Shift
/// structured streams slide a scalar white input through a tapped delay line
/// that starts from zeros (prewindowed), so `x̃ₙ = (x̃(n), …, x̃(n−L+1))`.
/// Every step consumes the same number of variates regardless of the noise
/// levels, so streams with equal seeds share their clean data.
#[derive(Debug, Clone)]
pub struct EivStream {
    model: EivModel,
    cfg: StreamConfig,
    gauss: GaussianSource,
    n: usize,
    input_std: f64,
    scratch: Vec<f64>,
    noise: Vec<f64>,
    clean_line: Vec<f64>,
    noisy_line: Vec<f64>,
}

pub fn sample_stream(model: &EivModel, cfg: StreamConfig) -> Result<EivStream> {
    if cfg.length == 0 {
        return Err(Error::Config("stream length must be positive".into()));
    }
    let l = model.order();
    let mut input_std = 0.0;
    if cfg.shift_structured {
        let s2 = model.r.get(0, 0);
        for i in 0..l {
            for j in i..l {
                let want = if i == j { s2 } else { 0.0 };
                if (model.r.get(i, j) - want).abs() > 1e-12 * s2.abs().max(1.0) {
                    return Err(Error::Config(
                        "shift-structured input requires a white scalar input (R = σ²I)".into(),
                    ));
                }
            }
        }
        input_std = s2.sqrt();
    }
    Ok(EivStream {
        model: model.clone(),
        cfg,
        gauss: GaussianSource::new(cfg.seed),
        n: 0,
        input_std,
        scratch: vec![0.0; l],
        noise: vec![0.0; l],
        clean_line: vec![0.0; l],
        noisy_line: vec![0.0; l],
    })
}

impl EivStream {
    pub fn model(&self) -> &EivModel {
        &self.model
    }

    pub fn remaining(&self) -> usize {
        self.cfg.length - self.n
    }

    /// Writes the next sample into `out`, reusing its buffers. Returns false
    /// once the configured length is exhausted.
    pub fn next_into(&mut self, out: &mut EivSample) -> bool {
        if self.n >= self.cfg.length {
            return false;
        }
        self.n += 1;
        let l = self.model.order();
        out.x_noisy.resize(l, 0.0);
        out.x_clean.resize(l, 0.0);
        let (eta_std, xi_std) = (self.model.eta.sqrt(), self.model.xi.sqrt());

        if self.cfg.shift_structured {
            let clean = self.gauss.normal(self.input_std);
            let noisy = clean + self.gauss.normal(eta_std);
            self.clean_line.rotate_right(1);
            self.noisy_line.rotate_right(1);
            self.clean_line[0] = clean;
            self.noisy_line[0] = noisy;
            out.x_clean.copy_from_slice(&self.clean_line);
            out.x_noisy.copy_from_slice(&self.noisy_line);
        } else {
            self.gauss.fill_standard_normal(&mut self.scratch);
            self.gauss.fill_standard_normal(&mut self.noise);
            for i in 0..l {
                let xi = dot(self.mix_row(i), &self.scratch);
                out.x_clean[i] = xi;
                out.x_noisy[i] = xi + eta_std * self.noise[i];
            }
        }
        out.y_clean = dot(&out.x_clean, &self.model.h);
        out.y_noisy = out.y_clean + self.gauss.normal(xi_std);
        out.n = self.n;
        true
    }

    #[inline]
    fn mix_row(&self, i: usize) -> &[f64] {
        self.model.mix.row(i)
    }
}

impl Iterator for EivStream {
    type Item = EivSample;

    fn next(&mut self) -> Option<EivSample> {
        let mut s = EivSample::zeros(self.model.order());
        self.next_into(&mut s).then_some(s)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining(), Some(self.remaining()))
    }
}
