use crate::error::{check_len, Error, Result};
use crate::linalg::{norm, solve_dense, sym_eig};
use crate::stats::AugmentedStats;

/// Batch TLS estimate extracted from the minor eigenvector of `Ψ`.
#[derive(Debug, Clone, PartialEq)]
pub struct TlsSolution {
    pub w: Vec<f64>,
    /// Unit minor eigenvector `q`.
    pub q: Vec<f64>,
    /// Smallest-magnitude eigenvalue of `Ψ`.
    pub min_eigenvalue: f64,
    /// Distance between the two smallest eigenvalue magnitudes.
    pub eigen_gap: f64,
    /// Set when the gap is below `1e-10`, in which case the minor eigenvector
    /// (and any inverse-power tracking of it) is poorly determined.
    pub ill_conditioned: bool,
}

/// `w = −γ^(1/2) q₁..L / q_{L+1}` where `q` spans the minor eigenspace of `Ψ`.
pub fn batch_tls(psi: &AugmentedStats) -> Result<TlsSolution> {
    let l = psi.order();
    if l == 0 {
        return Err(Error::InvalidInput("augmented covariance must have order ≥ 2".into()));
    }
    let eig = sym_eig(&psi.psi)?;
    let q = eig.eigenvectors[0].clone();
    let last = q[l];
    if last.abs() < 1e-12 {
        return Err(Error::NonGenericTls(last));
    }
    let scale = -psi.gamma.sqrt() / last;
    let w = q[..l].iter().map(|v| scale * v).collect();
    let eigen_gap = eig.eigenvalues[1].abs() - eig.eigenvalues[0].abs();
    Ok(TlsSolution {
        w,
        q,
        min_eigenvalue: eig.eigenvalues[0],
        eigen_gap,
        ill_conditioned: eigen_gap < 1e-10,
    })
}

/// One inverse-power iterate `Ψ⁻¹q`, normalized to unit length.
pub fn inverse_power_reference(psi: &AugmentedStats, q_prev: &[f64]) -> Result<Vec<f64>> {
    let dim = psi.psi.dim();
    check_len("previous iterate", q_prev.len(), dim)?;
    let mut q = solve_dense(&psi.psi.to_dense(), q_prev)?;
    let n = norm(&q);
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::Numerical(format!("inverse-power iterate has norm {n:e}")));
    }
    q.iter_mut().for_each(|v| *v /= n);
    Ok(q)
}
