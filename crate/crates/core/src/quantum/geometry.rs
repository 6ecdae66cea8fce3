use super::operator::CMatrix;
use super::state::{DensityMatrix, NEGATIVITY_TOL};
use crate::error::{Error, Result};

/// Purity above `1 − PURE_TOL` is treated as a pure state.
const PURE_TOL: f64 = 1e-12;

fn check_dims(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimError(format!("{} vs {}", rho.dim(), sigma.dim())));
    }
    Ok(())
}

fn clamped_sqrt(x: f64) -> Result<f64> {
    if x < -NEGATIVITY_TOL {
        return Err(Error::InvalidState(format!("negative eigenvalue {x:e} in fidelity kernel")));
    }
    Ok(x.max(0.0).sqrt())
}

/// Eigenvalues within `ZERO_MODE_REL · λ_max` of zero are rounding noise; their
/// square roots (~1e-8) would otherwise leak into the fidelity.
const ZERO_MODE_REL: f64 = 64.0 * f64::EPSILON;

fn psd_root(rho: &DensityMatrix) -> Result<CMatrix> {
    let spec = rho.eig();
    let top = spec.max();
    let roots = spec
        .eigenvalues
        .iter()
        .map(|&x| if x.abs() <= ZERO_MODE_REL * top { Ok(0.0) } else { clamped_sqrt(x) })
        .collect::<Result<Vec<_>>>()?;
    Ok(spec.weighted(&roots))
}

/// Root fidelity `Tr √(√σ ρ √σ) = ‖√ρ √σ‖₁`, clamped to `[0, 1]`.
///
/// The trace norm is summed from singular values: the eigenvalues of
/// `√σ ρ √σ` are squared populations, and taking their square roots would
/// turn rounding noise of 1e-16 into errors of 1e-8.
pub fn sqrt_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho, sigma)?;
    if rho.matrix() == sigma.matrix() {
        return Ok(1.0);
    }
    if rho.is_diagonal(0.0) && sigma.is_diagonal(0.0) {
        let mut s = 0.0;
        for (p, q) in rho.populations().into_iter().zip(sigma.populations()) {
            s += clamped_sqrt(p)? * clamped_sqrt(q)?;
        }
        return Ok(s.clamp(0.0, 1.0));
    }
    if rho.purity() > 1.0 - PURE_TOL || sigma.purity() > 1.0 - PURE_TOL {
        // F = Tr(ρσ) when either state is pure; avoids square roots of
        // rounding-level eigenvalues.
        let overlap = (rho.matrix().adjoint() * sigma.matrix()).trace().re;
        return Ok(overlap.clamp(0.0, 1.0).sqrt());
    }
    let root_rho = psd_root(rho)?;
    let root_sigma = psd_root(sigma)?;
    let s: f64 = (root_rho * root_sigma).singular_values().iter().sum();
    Ok(s.clamp(0.0, 1.0))
}

/// Uhlmann fidelity `F(ρ, σ) = (Tr √(√σ ρ √σ))²`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok(sqrt_fidelity(rho, sigma)?.powi(2))
}

/// Bures angle `arccos √F`, in `[0, π/2]`.
pub fn bures_angle(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok(sqrt_fidelity(rho, sigma)?.min(1.0).acos())
}

/// Bures distance `√(2(1 − √F))`, in `[0, √2]`.
pub fn bures_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok((2.0 * (1.0 - sqrt_fidelity(rho, sigma)?)).max(0.0).sqrt())
}

/// Bures angle between two diagonal states given by their populations.
pub fn bures_angle_classical(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimError(format!("{} vs {}", p.len(), q.len())));
    }
    let mut s = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        s += clamped_sqrt(a)? * clamped_sqrt(b)?;
    }
    Ok(s.clamp(0.0, 1.0).acos())
}
