//! Closed-form performance predictions for the RTLS recursion.
//!
//! Every quantity is evaluated from the ground-truth model: input covariance
//! `R`, system `h`, input and output noise variances `η` and `ξ`, and the
//! forgetting factor `λ`.

use crate::eiv::EivModel;
use crate::error::{check_len, Error, Result};
use crate::linalg::{norm_sq, solve_spd, sym_eig, EigDecomposition, SymMatrix};

#[derive(Debug, Clone)]
pub struct TheoryModel {
    r: SymMatrix,
    h: Vec<f64>,
    eta: f64,
    xi: f64,
    lambda: f64,
    eig: EigDecomposition,
    r_inv_h: Vec<f64>,
}

impl TheoryModel {
    pub fn new(r: SymMatrix, h: Vec<f64>, eta: f64, xi: f64, lambda: f64) -> Result<Self> {
        check_len("system vector", h.len(), r.dim())?;
        if r.dim() == 0 {
            return Err(Error::InvalidModel("empty model".into()));
        }
        if !(eta >= 0.0 && eta.is_finite() && xi >= 0.0 && xi.is_finite()) {
            return Err(Error::InvalidModel(format!(
                "noise variances must be finite and non-negative (eta = {eta}, xi = {xi})"
            )));
        }
        check_lambda(lambda)?;
        let eig = sym_eig(&r)?;
        if !(eig.min() > 0.0) {
            return Err(Error::InvalidModel(format!(
                "input covariance is not positive definite (smallest eigenvalue {:e})",
                eig.min()
            )));
        }
        let r_inv_h = solve_spd(&r, &h).map_err(|e| Error::InvalidModel(e.to_string()))?;
        Ok(Self {
            r,
            h,
            eta,
            xi,
            lambda,
            eig,
            r_inv_h,
        })
    }

    /// Builds the model with `ξ = γη`.
    pub fn from_gamma(r: SymMatrix, h: Vec<f64>, eta: f64, gamma: f64, lambda: f64) -> Result<Self> {
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidModel(format!("noise ratio γ = {gamma} must be finite and non-negative")));
        }
        Self::new(r, h, eta, gamma * eta, lambda)
    }

    pub fn from_model(model: &EivModel, lambda: f64) -> Result<Self> {
        Self::new(model.r().clone(), model.h().to_vec(), model.eta(), model.xi(), lambda)
    }

    /// Same ground truth under another forgetting factor.
    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        check_lambda(lambda)?;
        Ok(Self { lambda, ..self.clone() })
    }

    pub fn order(&self) -> usize {
        self.h.len()
    }

    pub fn r(&self) -> &SymMatrix {
        &self.r
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `ξ/η`, undefined without input noise.
    pub fn gamma(&self) -> Option<f64> {
        (self.eta > 0.0).then(|| self.xi / self.eta)
    }

    /// Eigenvalues of `R` in ascending order.
    pub fn r_spectrum(&self) -> Vec<f64> {
        let mut z = self.eig.eigenvalues.clone();
        z.sort_by(f64::total_cmp);
        z
    }

    pub fn trace_r_inv(&self) -> f64 {
        self.eig.eigenvalues.iter().map(|z| z.recip()).sum()
    }

    fn trace_r_inv_sq(&self) -> f64 {
        self.eig.eigenvalues.iter().map(|z| z.powi(-2)).sum()
    }

    fn epsilon(&self) -> f64 {
        1.0 - self.lambda
    }

    /// Spectral radius of the mean weight-error transition,
    /// `η / (ζ_min{R^½(γ⁻¹hhᵀ + I)R^½} + η)`; zero without input noise.
    pub fn mean_convergence_rate(&self) -> f64 {
        if self.eta == 0.0 {
            return 0.0;
        }
        let gamma = self.xi / self.eta;
        let sqrt_r = self.eig.map_spectrum(f64::sqrt);
        let u = sqrt_r.mul_vec(&self.h);
        let mut m = self.r.clone();
        if gamma > 0.0 {
            m.rank_one_update(gamma.recip(), &u);
            // the product form keeps the minimum eigenvalue at or above ζ_min{R}
            let zeta = sym_eig(&m).map(|e| e.min()).unwrap_or(self.eig.min());
            self.eta / (zeta.max(self.eig.min()) + self.eta)
        } else if norm_sq(&u) > 0.0 {
            // γ⁻¹ → ∞ pushes one direction to infinity; the rest stay in R's
            // restriction to the complement of R^½h
            let zeta = min_eig_on_complement(&self.r, &u);
            self.eta / (zeta + self.eta)
        } else {
            self.eta / (self.eig.min() + self.eta)
        }
    }

    /// Asymptotic bias of exponentially weighted least squares, `−η(R + ηI)⁻¹h`.
    pub fn rls_bias(&self) -> Vec<f64> {
        if self.eta == 0.0 {
            return vec![0.0; self.order()];
        }
        let mut a = self.r.clone();
        a.add_diagonal(self.eta);
        // R + ηI is positive definite whenever R is
        let x = solve_spd(&a, &self.h).expect("R + ηI is positive definite");
        x.into_iter().map(|v| -self.eta * v).collect()
    }

    /// `tr{R⁻²[(η‖h‖² + ξ)(R + ηI) + η²hhᵀ]}`.
    pub fn noise_drive_g(&self) -> f64 {
        let a = self.eta * norm_sq(&self.h) + self.xi;
        a * (self.trace_r_inv() + self.eta * self.trace_r_inv_sq()) + self.eta * self.eta * norm_sq(&self.r_inv_h)
    }

    fn s_bar_eigenvalue(&self, zeta: f64, t: f64) -> f64 {
        let e = self.epsilon();
        let q = self.eta / zeta;
        let c = t * zeta - 2.0 * q + q * q;
        1.0 - 2.0 * e + e * e * (2.0 + c)
    }

    /// `(1 − 2λ + 2λ²)I + (1 − λ)²(tr{R⁻¹}R − 2ηR⁻¹ + η²R⁻²)`.
    pub fn s_bar(&self) -> SymMatrix {
        let t = self.trace_r_inv();
        self.eig.map_spectrum(|z| self.s_bar_eigenvalue(z, t))
    }

    /// Eigenvalues of `S̄`, paired with the eigenvalues of `R` in the order
    /// returned by [`TheoryModel::r_spectrum`].
    pub fn s_bar_eigenvalues(&self) -> Vec<f64> {
        let t = self.trace_r_inv();
        self.r_spectrum().into_iter().map(|z| self.s_bar_eigenvalue(z, t)).collect()
    }

    pub fn s_bar_spectral_radius(&self) -> f64 {
        self.s_bar_eigenvalues().into_iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `1 − 2/(tr{R⁻¹}ζ_max + (1 − η/ζ_min)² + 1)`.
    pub fn stability_lambda_bound(&self) -> f64 {
        let z = self.r_spectrum();
        stability_lambda_bound(self.trace_r_inv(), z[z.len() - 1], z[0], self.eta)
    }

    /// Smallest `λ` above which `ρ{S̄} < 1`:
    /// `1 − 2/maxᵢ(tr{R⁻¹}ζᵢ + (1 − η/ζᵢ)² + 1)`.
    ///
    /// Unlike [`TheoryModel::stability_lambda_bound`], which pairs `ζ_max`
    /// with `ζ_min` across terms, this threshold is both necessary and
    /// sufficient.
    pub fn stability_lambda_exact(&self) -> f64 {
        let t = self.trace_r_inv();
        let worst = self
            .eig
            .eigenvalues
            .iter()
            .map(|&z| t * z + (1.0 - self.eta / z).powi(2) + 1.0)
            .fold(f64::NEG_INFINITY, f64::max);
        1.0 - 2.0 / worst
    }

    /// Next value of `E‖w̃ₙ‖² = (1 − 2λ + 2λ²)E‖w̃ₙ₋₁‖² + (1 − λ)²g`.
    pub fn transient_msd(&self, msd_prev: f64) -> f64 {
        let e = self.epsilon();
        (1.0 - 2.0 * e + 2.0 * e * e) * msd_prev + e * e * self.noise_drive_g()
    }

    /// Predicted MSD after samples `1..=steps`, starting from `‖h‖²` (`w₀ = 0`).
    pub fn predicted_curve(&self, steps: usize) -> Vec<f64> {
        let e = self.epsilon();
        let ratio = 1.0 - 2.0 * e + 2.0 * e * e;
        let drive = e * e * self.noise_drive_g();
        let mut msd = norm_sq(&self.h);
        (0..steps)
            .map(|_| {
                msd = ratio * msd + drive;
                msd
            })
            .collect()
    }

    /// `((1 − λ)/(2λ))g`; exactly zero at `λ = 1`.
    pub fn steady_state_msd(&self) -> f64 {
        self.epsilon() / (2.0 * self.lambda) * self.noise_drive_g()
    }

    /// `((1 − λ)⁻¹(R + ηI), (1 − λ)⁻¹Rh, (1 − λ)⁻¹(hᵀRh + ξ))`.
    pub fn asymptotic_moments(&self) -> Result<(SymMatrix, Vec<f64>, f64)> {
        if self.lambda >= 1.0 {
            return Err(Error::DivergentMoments);
        }
        let s = self.epsilon().recip();
        let mut phi = self.r.clone();
        phi.add_diagonal(self.eta);
        phi.scale(s);
        let rh = self.r.mul_vec(&self.h);
        let tau = s * (rh.iter().zip(&self.h).map(|(a, b)| a * b).sum::<f64>() + self.xi);
        Ok((phi, rh.into_iter().map(|v| s * v).collect(), tau))
    }
}

/// The forgetting-factor bound from its scalar ingredients.
pub fn stability_lambda_bound(trace_r_inv: f64, zeta_max: f64, zeta_min: f64, eta: f64) -> f64 {
    1.0 - 2.0 / (trace_r_inv * zeta_max + (1.0 - eta / zeta_min).powi(2) + 1.0)
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::Config(format!("forgetting factor {lambda} must lie in (0, 1]")));
    }
    Ok(())
}

// Smallest eigenvalue of R restricted to the orthogonal complement of u.
fn min_eig_on_complement(r: &SymMatrix, u: &[f64]) -> f64 {
    let l = r.dim();
    let nu = norm_sq(u);
    // P R P with P = I − uuᵀ/‖u‖², plus a large multiple of uuᵀ to push the
    // null direction out of the way
    let p = |i: usize, j: usize| f64::from(u8::from(i == j)) - u[i] * u[j] / nu;
    let big = 1e6 * (1.0 + r.trace());
    let m = SymMatrix::from_fn(l, |i, j| {
        let mut s = 0.0;
        for a in 0..l {
            for b in 0..l {
                s += p(i, a) * r.get(a, b) * p(b, j);
            }
        }
        s + big * u[i] * u[j] / nu
    });
    sym_eig(&m).map(|e| e.min()).unwrap_or(0.0)
}
