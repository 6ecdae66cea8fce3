use nalgebra::DVector;
use num_complex::Complex64;

use super::operator::{check_hermitian, eig_trusted, hermitize, CMatrix, HermitianOperator, Spectrum};
use crate::error::{Error, Result};

pub const STATE_HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;
pub const NEGATIVITY_TOL: f64 = 1e-10;

/// Unit-trace positive-semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    m: CMatrix,
}

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        check_hermitian(&m, STATE_HERMITICITY_TOL).map_err(Error::InvalidState)?;
        let m = hermitize(&m);
        let tr = m.trace().re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let lo = eig_trusted(&m).min();
        if lo < -NEGATIVITY_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {lo:e}")));
        }
        Ok(Self { m })
    }

    /// Wraps the output of a trace-preserving computation; only Hermiticity is
    /// restored.
    pub(crate) fn from_trusted(m: CMatrix) -> Self {
        Self { m: hermitize(&m) }
    }

    pub fn from_diagonal(p: &[f64]) -> Result<Self> {
        Self::new(HermitianOperator::from_real_diagonal(p).into_matrix())
    }

    pub fn pure(psi: &DVector<Complex64>) -> Result<Self> {
        let n = psi.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let v = psi.unscale(n);
        Ok(Self { m: &v * v.adjoint() })
    }

    /// The basis state `|k⟩⟨k|` in dimension `d`.
    pub fn basis(d: usize, k: usize) -> Result<Self> {
        if k >= d {
            return Err(Error::DimError(format!("basis index {k} out of range for dim {d}")));
        }
        let mut p = vec![0.0; d];
        p[k] = 1.0;
        Self::from_diagonal(&p)
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self { m: CMatrix::identity(d, d).unscale(d as f64) }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.m[(i, i)].re).collect()
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    pub fn purity(&self) -> f64 {
        (&self.m * &self.m).trace().re
    }

    pub fn eig(&self) -> Spectrum {
        eig_trusted(&self.m)
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| i == j || self.m[(i, j)].norm() <= tol))
    }

    /// `lambda * self + (1 - lambda) * other`.
    pub fn mix(&self, other: &Self, lambda: f64) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimError(format!("{} vs {}", self.dim(), other.dim())));
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidInput(format!("mixing weight {lambda} outside [0,1]")));
        }
        Ok(Self { m: self.m.scale(lambda) + other.m.scale(1.0 - lambda) })
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self { m: self.m.kronecker(&other.m) }
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Result<Self> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::DimError(format!("unitary {}x{} on dim {}", u.nrows(), u.ncols(), self.dim())));
        }
        Ok(Self::from_trusted(u * &self.m * u.adjoint()))
    }
}

/// Boltzmann weights `e^{-β(E_i - E_min)} / Z` for ascending or unsorted
/// energies. `beta = +∞` gives the uniform distribution over the ground space,
/// with degeneracy detected at relative tolerance 1e-10.
pub fn thermal_populations(energies: &[f64], beta: f64) -> Result<Vec<f64>> {
    if beta.is_nan() || beta < 0.0 {
        return Err(Error::InvalidInput(format!("inverse temperature {beta} must be non-negative")));
    }
    if energies.is_empty() {
        return Err(Error::DimError("empty spectrum".into()));
    }
    let e0 = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let w: Vec<f64> = if beta.is_infinite() {
        let scale = energies.iter().fold(1.0_f64, |m, e| m.max(e.abs()));
        energies.iter().map(|&e| if e - e0 <= 1e-10 * scale { 1.0 } else { 0.0 }).collect()
    } else {
        energies.iter().map(|&e| (-beta * (e - e0)).exp()).collect()
    };
    let z: f64 = w.iter().sum();
    Ok(w.into_iter().map(|x| x / z).collect())
}

/// `ω(β, H) = e^{-βH} / Tr e^{-βH}`.
pub fn gibbs_state(h: &HermitianOperator, beta: f64) -> Result<DensityMatrix> {
    if beta.is_nan() || beta < 0.0 {
        return Err(Error::InvalidInput(format!("inverse temperature {beta} must be non-negative")));
    }
    if h.is_diagonal(0.0) {
        let e: Vec<f64> = (0..h.dim()).map(|i| h.matrix()[(i, i)].re).collect();
        let p = thermal_populations(&e, beta)?;
        return Ok(DensityMatrix::from_trusted(HermitianOperator::from_real_diagonal(&p).into_matrix()));
    }
    let s = h.eig();
    let p = thermal_populations(s.eigenvalues.as_slice(), beta)?;
    Ok(DensityMatrix::from_trusted(s.weighted(&p)))
}

/// Gibbs populations together with the eigenbasis they refer to.
pub fn gibbs_spectrum(h: &HermitianOperator, beta: f64) -> Result<(Vec<f64>, Spectrum)> {
    let s = h.eig();
    let p = thermal_populations(s.eigenvalues.as_slice(), beta)?;
    Ok((p, s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubit_gibbs_populations() {
        let rho = gibbs_state(&HermitianOperator::from_real_diagonal(&[0.0, 1.0]), 1.0).unwrap();
        let e = std::f64::consts::E;
        let p = rho.populations();
        assert!((p[0] - e / (1.0 + e)).abs() < 1e-15);
        assert!((p[1] - 1.0 / (1.0 + e)).abs() < 1e-15);
        assert!((p[0] - 0.731059).abs() < 1e-6);
    }

    #[test]
    fn flat_spectrum_is_maximally_mixed() {
        for d in 1..5 {
            let rho = gibbs_state(&HermitianOperator::zeros(d), 2.0).unwrap();
            assert!((rho.matrix() - DensityMatrix::maximally_mixed(d).matrix()).norm() < 1e-15);
        }
    }

    #[test]
    fn zero_temperature_ground_state() {
        let rho = gibbs_state(&HermitianOperator::from_real_diagonal(&[0.0, 1.0]), f64::INFINITY).unwrap();
        assert_eq!(rho.populations(), vec![1.0, 0.0]);
        let rho = gibbs_state(&HermitianOperator::from_real_diagonal(&[2.0, -1.0, -1.0]), f64::INFINITY).unwrap();
        assert_eq!(rho.populations(), vec![0.0, 0.5, 0.5]);
    }

    #[test]
    fn zero_temperature_non_diagonal() {
        // ground state of σ_x is |−⟩
        let rho = gibbs_state(&HermitianOperator::pauli_x(), f64::INFINITY).unwrap();
        assert!((rho.matrix()[(0, 1)].re + 0.5).abs() < 1e-12);
        assert!((rho.trace() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::from_diagonal(&[0.5, 0.6]).is_err());
        assert!(DensityMatrix::from_diagonal(&[1.2, -0.2]).is_err());
        assert!(DensityMatrix::from_diagonal(&[0.25, 0.75]).is_ok());
        assert!(gibbs_state(&HermitianOperator::zeros(2), -1.0).is_err());
    }
}
