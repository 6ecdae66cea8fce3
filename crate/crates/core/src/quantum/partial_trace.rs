use super::operator::CMatrix;
use super::state::DensityMatrix;
use crate::error::{Error, Result};

/// Which factor of `H_S ⊗ H_M` to keep. Basis ordering is `|i⟩_S ⊗ |j⟩_M ↦ i·d_M + j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    System,
    Machine,
}

pub fn partial_trace(rho: &DensityMatrix, dims: (usize, usize), keep: Subsystem) -> Result<DensityMatrix> {
    let (ds, dm) = dims;
    if ds == 0 || dm == 0 || ds * dm != rho.dim() {
        return Err(Error::DimError(format!("{}x{} does not factor dimension {}", ds, dm, rho.dim())));
    }
    let m = rho.matrix();
    let out = match keep {
        Subsystem::System => CMatrix::from_fn(ds, ds, |i, k| (0..dm).map(|j| m[(i * dm + j, k * dm + j)]).sum()),
        Subsystem::Machine => CMatrix::from_fn(dm, dm, |j, l| (0..ds).map(|i| m[(i * dm + j, i * dm + l)]).sum()),
    };
    Ok(DensityMatrix::from_trusted(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;
    use num_complex::Complex64;

    #[test]
    fn product_state_factors() {
        let a = DensityMatrix::from_diagonal(&[0.3, 0.7]).unwrap();
        let b = DensityMatrix::from_diagonal(&[0.2, 0.5, 0.3]).unwrap();
        let ab = a.kron(&b);
        let ra = partial_trace(&ab, (2, 3), Subsystem::System).unwrap();
        let rb = partial_trace(&ab, (2, 3), Subsystem::Machine).unwrap();
        assert!((ra.matrix() - a.matrix()).norm() < 1e-15);
        assert!((rb.matrix() - b.matrix()).norm() < 1e-15);
    }

    #[test]
    fn bell_state_reduces_to_maximally_mixed() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let z = Complex64::new(0.0, 0.0);
        let psi = DVector::from_vec(vec![Complex64::new(s, 0.0), z, z, Complex64::new(s, 0.0)]);
        let rho = DensityMatrix::pure(&psi).unwrap();
        for keep in [Subsystem::System, Subsystem::Machine] {
            let r = partial_trace(&rho, (2, 2), keep).unwrap();
            assert!((r.matrix() - DensityMatrix::maximally_mixed(2).matrix()).norm() < 1e-15);
        }
    }

    #[test]
    fn factorization_mismatch() {
        let rho = DensityMatrix::maximally_mixed(4);
        assert!(matches!(partial_trace(&rho, (3, 2), Subsystem::System), Err(Error::DimError(_))));
    }
}
