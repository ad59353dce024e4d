use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dcd::DcdParams;
use crate::eiv::{gen_covariance, paper_system, EivModel, REFERENCE_COVARIANCE_SEED};
use crate::error::{Error, Result};
use crate::filters::{AdaptiveFilter, Bcrls, DcdRtls, ExactRtls, FilterConfig, RlsState};
use crate::linalg::SymMatrix;
use crate::rng::GaussianSource;
use crate::stats::lambda_from_exponent;

/// Filters the runner knows how to drive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgoKind {
    DcdRtls,
    ExactRtls,
    Rls,
    Bcrls,
}

impl AlgoKind {
    pub const ALL: [AlgoKind; 4] = [AlgoKind::DcdRtls, AlgoKind::ExactRtls, AlgoKind::Rls, AlgoKind::Bcrls];

    pub fn name(self) -> &'static str {
        match self {
            AlgoKind::DcdRtls => "dcd_rtls",
            AlgoKind::ExactRtls => "exact_rtls",
            AlgoKind::Rls => "rls",
            AlgoKind::Bcrls => "bcrls",
        }
    }
}

impl fmt::Display for AlgoKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgoKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s.trim())
            .ok_or_else(|| "unknown algorithm".to_string())
    }
}

/// Where the true system comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HSource {
    /// The eight-tap reference system.
    Paper,
    /// Gaussian taps scaled to unit expected norm, drawn from the given seed.
    Random(u64),
}

/// One Monte-Carlo experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Filter length `L`.
    pub order: usize,
    pub h_source: HSource,
    /// Seed of the synthesized input covariance (unstructured input only).
    pub covariance_seed: u64,
    /// Input noise variance for learning curves.
    pub eta: f64,
    /// Input noise variances for steady-state sweeps and stability curves.
    pub eta_grid: Vec<f64>,
    /// `ξ/η`; the output noise variance is `ηγ`.
    pub gamma: f64,
    /// `λ = 1 − 2⁻ᴾ`.
    pub p_exponent: u32,
    pub dcd: DcdParams,
    pub runs: usize,
    pub steps: usize,
    pub algos: Vec<AlgoKind>,
    /// Replica `r` is seeded with `base_seed + r`.
    pub base_seed: u64,
    pub delta: f64,
    /// Tapped-delay-line input with `R = I`.
    pub structured: bool,
    /// Attach the predicted learning curve to every ensemble curve.
    pub theory_overlay: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            order: 8,
            h_source: HSource::Paper,
            covariance_seed: REFERENCE_COVARIANCE_SEED,
            eta: 0.01,
            eta_grid: vec![0.003, 0.01, 0.03, 0.1],
            gamma: 1.0,
            p_exponent: 10,
            dcd: DcdParams::default(),
            runs: 200,
            steps: 3000,
            algos: vec![AlgoKind::DcdRtls, AlgoKind::ExactRtls, AlgoKind::Rls],
            base_seed: 1,
            delta: 1e-2,
            structured: false,
            theory_overlay: true,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration serializes")
    }

    pub fn lambda(&self) -> Result<f64> {
        lambda_from_exponent(self.p_exponent)
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 || self.steps == 0 {
            return Err(Error::Config("runs and steps must be positive".into()));
        }
        if self.algos.is_empty() {
            return Err(Error::Config("no algorithms selected".into()));
        }
        if !(self.eta >= 0.0 && self.eta.is_finite()) {
            return Err(Error::Config(format!("η = {} must be finite and non-negative", self.eta)));
        }
        if self.h_source == HSource::Paper && self.order != paper_system().len() {
            return Err(Error::Config(format!(
                "the reference system has {} taps, not {}",
                paper_system().len(),
                self.order
            )));
        }
        self.dcd.validate()?;
        self.filter_config()?;
        Ok(())
    }

    pub fn filter_config(&self) -> Result<FilterConfig> {
        let cfg = FilterConfig::new(self.order, self.p_exponent, self.gamma)?
            .delta(self.delta)
            .structured(self.structured);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn system(&self) -> Vec<f64> {
        match self.h_source {
            HSource::Paper => paper_system(),
            HSource::Random(seed) => {
                let mut g = GaussianSource::new(seed);
                let s = (self.order as f64).sqrt().recip();
                (0..self.order).map(|_| g.normal(s)).collect()
            }
        }
    }

    /// Ground truth at input noise `eta`, with `ξ = ηγ`.
    pub fn model(&self, eta: f64) -> Result<EivModel> {
        let h = self.system();
        let xi = eta * self.gamma;
        if self.structured {
            EivModel::new(h, SymMatrix::identity(self.order), eta, xi)
        } else {
            let cov = gen_covariance(self.order, self.covariance_seed)?;
            EivModel::from_synthesis(h, &cov, eta, xi)
        }
    }

    pub(crate) fn build_filter(&self, algo: AlgoKind, eta: f64) -> Result<Box<dyn AdaptiveFilter + Send>> {
        let fc = self.filter_config()?;
        Ok(match algo {
            AlgoKind::DcdRtls => Box::new(DcdRtls::new(fc, self.dcd)?),
            AlgoKind::ExactRtls => Box::new(ExactRtls::new(fc)?),
            AlgoKind::Rls => Box::new(RlsState::from_config(&fc)?),
            AlgoKind::Bcrls => Box::new(Bcrls::new(fc, eta)?),
        })
    }
}

/// Parses a comma-separated list.
pub fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>>
where
    T::Err: fmt::Display,
{
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse::<T>().map_err(|e| Error::Config(format!("cannot parse '{p}': {e}"))))
        .collect()
}
