//! Exponentially weighted second-order statistics of the observed data.

use crate::complexity::OpCounts;
use crate::error::{check_len, Error, Result};
use crate::linalg::SymMatrix;

/// Running `Φₙ = λΦₙ₋₁ + x̃ₙx̃ₙᵀ`, `zₙ = λzₙ₋₁ + ỹₙx̃ₙ`, `τₙ = λτₙ₋₁ + ỹₙ²`.
#[derive(Debug, Clone, PartialEq)]
pub struct Stats {
    phi: SymMatrix,
    z: Vec<f64>,
    tau: f64,
    lambda: f64,
    p_exponent: Option<u32>,
    // 2⁻ᴾ when λ = 1 − 2⁻ᴾ
    shift: Option<f64>,
    n: u64,
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::Config(format!("forgetting factor {lambda} is outside (0, 1]")));
    }
    Ok(())
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::Config(format!("regularization {delta} must be positive and finite")));
    }
    Ok(())
}

/// `1 − 2⁻ᴾ`, exact in binary floating point for `1 ≤ P ≤ 52`.
pub fn lambda_from_exponent(p: u32) -> Result<f64> {
    if !(1..=52).contains(&p) {
        return Err(Error::Config(format!("forgetting exponent P = {p} is outside 1..=52")));
    }
    Ok(1.0 - (-(p as f64)).exp2())
}

impl Stats {
    /// `Φ₀ = δI`, `z₀ = 0`, `τ₀ = 0` with an arbitrary forgetting factor.
    pub fn init(l: usize, lambda: f64, delta: f64) -> Result<Self> {
        Self::with_diagonal(l, lambda, None, delta, false)
    }

    /// As [`Stats::init`] with `λ = 1 − 2⁻ᴾ`; scaling by λ then costs an
    /// addition and an exact power-of-two scaling instead of a multiplication.
    pub fn init_pow2(l: usize, p: u32, delta: f64) -> Result<Self> {
        let lambda = lambda_from_exponent(p)?;
        Self::with_diagonal(l, lambda, Some(p), delta, false)
    }

    /// Initialization for shift-structured data: `Φ₀ = δ·diag(1, λ⁻¹, …, λ⁻⁽ᴸ⁻¹⁾)`.
    ///
    /// With `Φ₀ = δI` the block copy of [`Stats::update_shift`] drifts from the
    /// generic recursion by `δλⁿ⁻¹(1 − λ)` on the diagonal. This graded start
    /// is the one for which both recursions agree exactly.
    pub fn init_shift(l: usize, lambda: f64, p_exponent: Option<u32>, delta: f64) -> Result<Self> {
        if let Some(p) = p_exponent {
            let exact = lambda_from_exponent(p)?;
            if exact != lambda {
                return Err(Error::Config(format!("λ = {lambda} does not equal 1 − 2^-{p}")));
            }
        }
        Self::with_diagonal(l, lambda, p_exponent, delta, true)
    }

    fn with_diagonal(l: usize, lambda: f64, p: Option<u32>, delta: f64, graded: bool) -> Result<Self> {
        if l == 0 {
            return Err(Error::Config("filter order must be positive".into()));
        }
        check_lambda(lambda)?;
        check_delta(delta)?;
        let mut diag = vec![delta; l];
        if graded {
            for i in 1..l {
                diag[i] = diag[i - 1] / lambda;
            }
        }
        Ok(Self {
            phi: SymMatrix::diagonal(&diag),
            z: vec![0.0; l],
            tau: 0.0,
            lambda,
            p_exponent: p,
            shift: p.map(|p| (-(p as f64)).exp2()),
            n: 0,
        })
    }

    pub fn order(&self) -> usize {
        self.z.len()
    }

    pub fn phi(&self) -> &SymMatrix {
        &self.phi
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn p_exponent(&self) -> Option<u32> {
        self.p_exponent
    }

    /// Number of updates applied so far.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// `λa`. With `λ = 1 − 2⁻ᴾ` this is evaluated as `a − 2⁻ᴾa`, which rounds
    /// to the same double as the product.
    #[inline]
    pub fn scale_by_lambda(&self, a: f64) -> f64 {
        match self.shift {
            Some(s) => a - a * s,
            None => self.lambda * a,
        }
    }

    /// Cost of `k` scalings by λ.
    pub fn lambda_cost(&self, k: u64) -> OpCounts {
        if self.shift.is_some() {
            OpCounts::adds(k)
        } else {
            OpCounts::muls(k)
        }
    }

    fn update_z_tau(&mut self, x: &[f64], y: f64) -> OpCounts {
        for (zi, &xi) in self.z.iter_mut().zip(x) {
            let decayed = match self.shift {
                Some(s) => *zi - *zi * s,
                None => self.lambda * *zi,
            };
            *zi = decayed + y * xi;
        }
        self.tau = self.scale_by_lambda(self.tau) + y * y;
        self.n += 1;
        let l = x.len() as u64;
        OpCounts::new(l + 1, l + 1, 0, 0) + self.lambda_cost(l + 1)
    }

    /// Full rank-one update of the upper triangle.
    pub fn update_generic(&mut self, x: &[f64], y: f64) -> Result<OpCounts> {
        let l = self.order();
        check_len("regressor", x.len(), l)?;
        let data = self.phi.packed_mut();
        let mut k = 0;
        for i in 0..l {
            let xi = x[i];
            for &xj in &x[i..] {
                let a = data[k];
                let decayed = match self.shift {
                    Some(s) => a - a * s,
                    None => self.lambda * a,
                };
                data[k] = decayed + xi * xj;
                k += 1;
            }
        }
        let entries = (l * (l + 1) / 2) as u64;
        let phi_cost = OpCounts::new(entries, entries, 0, 0) + self.lambda_cost(entries);
        Ok(phi_cost + self.update_z_tau(x, y))
    }

    /// Update for a sliding regressor `x = (x̃(n), …, x̃(n−L+1))` whose
    /// previous value was `(x̃(n−1), …, x̃(n−L))`.
    ///
    /// The lower-right block is the previous upper-left block, so only the
    /// first row is recomputed. The caller is responsible for the sliding
    /// structure and for starting from [`Stats::init_shift`] on a stream that
    /// is zero before its first sample; otherwise the result differs from
    /// [`Stats::update_generic`].
    pub fn update_shift(&mut self, x: &[f64], y: f64) -> Result<OpCounts> {
        let l = self.order();
        check_len("regressor", x.len(), l)?;
        let data = self.phi.packed_mut();
        // row i starts at i·L − i(i−1)/2 and has L − i entries
        let start = |i: usize| i * l - i * i.saturating_sub(1) / 2;
        for i in (1..l).rev() {
            let src = start(i - 1);
            data.copy_within(src..src + l - i, start(i));
        }
        let x0 = x[0];
        for (a, &xj) in data[..l].iter_mut().zip(x) {
            let decayed = match self.shift {
                Some(s) => *a - *a * s,
                None => self.lambda * *a,
            };
            *a = decayed + x0 * xj;
        }
        let lu = l as u64;
        let phi_cost = OpCounts::new(lu, lu, 0, 0) + self.lambda_cost(lu);
        Ok(phi_cost + self.update_z_tau(x, y))
    }

    /// The weighted augmented covariance `Ψₙ = Dᵀ[Φₙ zₙ; zₙᵀ τₙ]D` with
    /// `D = diag(I, γ^(−1/2))`.
    pub fn assemble_psi(&self, gamma: f64) -> Result<AugmentedStats> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::Config(format!("noise ratio γ = {gamma} must be positive")));
        }
        let l = self.order();
        let g = gamma.sqrt().recip();
        let psi = SymMatrix::from_fn(l + 1, |i, j| match (i == l, j == l) {
            (false, false) => self.phi.get(i, j),
            (false, true) => g * self.z[i],
            (true, false) => g * self.z[j],
            (true, true) => self.tau / gamma,
        });
        Ok(AugmentedStats { psi, gamma })
    }
}

/// `Ψₙ` together with the weighting `γ` it was built with.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedStats {
    pub psi: SymMatrix,
    pub gamma: f64,
}

impl AugmentedStats {
    /// Order of the underlying filter (`dim(Ψ) − 1`).
    pub fn order(&self) -> usize {
        self.psi.dim() - 1
    }
}
