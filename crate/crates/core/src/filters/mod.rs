//! Adaptive filters for errors-in-variables FIR identification.

mod dcd_rtls;
mod exact;
mod rls;
mod tls;

pub use dcd_rtls::DcdRtls;
pub use exact::{exact_rtls_step_direct, exact_rtls_step_sm, update_inverse, ExactRtls, SmRtls};
pub use rls::{bcrls_step, bcrls_step_with_memory, rls_step, Bcrls, RlsState};
pub use tls::{batch_tls, inverse_power_reference, TlsSolution};

use crate::error::{Error, Result};
use crate::stats::{lambda_from_exponent, Stats};

/// Settings shared by every filter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterConfig {
    pub order: usize,
    pub lambda: f64,
    /// Set when `λ = 1 − 2⁻ᴾ`; enables the shift-and-add scaling.
    pub p_exponent: Option<u32>,
    /// Initial diagonal loading of `Φ`.
    pub delta: f64,
    /// Assumed noise ratio `γ = ξ/η`.
    pub gamma: f64,
    /// Regressors slide through a delay line (enables the O(L) `Φ` update).
    pub structured: bool,
}

impl FilterConfig {
    /// `λ = 1 − 2⁻ᴾ`, `δ = 10⁻²`, unstructured input.
    pub fn new(order: usize, p_exponent: u32, gamma: f64) -> Result<Self> {
        let cfg = Self {
            order,
            lambda: lambda_from_exponent(p_exponent)?,
            p_exponent: Some(p_exponent),
            delta: 1e-2,
            gamma,
            structured: false,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Arbitrary forgetting factor without the shift-and-add scaling.
    pub fn with_lambda(order: usize, lambda: f64, gamma: f64) -> Result<Self> {
        let cfg = Self {
            order,
            lambda,
            p_exponent: None,
            delta: 1e-2,
            gamma,
            structured: false,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn structured(mut self, structured: bool) -> Self {
        self.structured = structured;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.order == 0 {
            return Err(Error::Config("filter order must be positive".into()));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::Config(format!("noise ratio γ = {} must be positive", self.gamma)));
        }
        if let Some(p) = self.p_exponent {
            if lambda_from_exponent(p)? != self.lambda {
                return Err(Error::Config(format!("λ = {} does not equal 1 − 2^-{p}", self.lambda)));
            }
        }
        // remaining checks happen when the statistics are built
        self.initial_stats().map(|_| ())
    }

    /// Starting statistics. Structured input uses the graded diagonal for
    /// which the shift update reproduces the full update exactly.
    pub fn initial_stats(&self) -> Result<Stats> {
        match (self.structured, self.p_exponent) {
            (true, p) => Stats::init_shift(self.order, self.lambda, p, self.delta),
            (false, Some(p)) => Stats::init_pow2(self.order, p, self.delta),
            (false, None) => Stats::init(self.order, self.lambda, self.delta),
        }
    }
}

/// Applies the configured covariance update.
pub(crate) fn update_stats(stats: &mut Stats, structured: bool, x: &[f64], y: f64) -> Result<crate::complexity::OpCounts> {
    if structured {
        stats.update_shift(x, y)
    } else {
        stats.update_generic(x, y)
    }
}

/// Common interface used by the experiment runner.
pub trait AdaptiveFilter {
    fn step(&mut self, x: &[f64], y: f64) -> Result<()>;
    fn weights(&self) -> &[f64];
}
