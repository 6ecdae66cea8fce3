//! Seeded random states and Hamiltonians for sweeps and tests.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::quantum::{spectral_seminorm, CMatrix, DensityMatrix, HermitianOperator};

pub type Rng64 = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    })
}

/// `G G† / Tr(G G†)` for a `d × d` complex Ginibre matrix `G`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, d: usize) -> DensityMatrix {
    random_density_rank(rng, d, d)
}

/// Induced measure with `G` of shape `d × k`; `k = 1` gives pure states.
pub fn random_density_rank<R: Rng + ?Sized>(rng: &mut R, d: usize, k: usize) -> DensityMatrix {
    let g = ginibre(rng, d, k.max(1));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::from_trusted(m.unscale(tr))
}

/// GUE-distributed Hermitian matrix `(G + G†)/2`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, d: usize) -> HermitianOperator {
    let g = ginibre(rng, d, d);
    HermitianOperator::from_trusted((&g + g.adjoint()).scale(0.5))
}

/// GUE direction rescaled to unit spectral seminorm (falls back to a fixed
/// direction in the measure-zero degenerate case).
pub fn random_direction<R: Rng + ?Sized>(rng: &mut R, d: usize) -> HermitianOperator {
    let h = random_hermitian(rng, d);
    let n = spectral_seminorm(&h);
    if n > 0.0 {
        h.scale(1.0 / n)
    } else {
        let mut diag = vec![0.0; d];
        diag[d - 1] = 1.0;
        HermitianOperator::from_real_diagonal(&diag)
    }
}

/// Random real diagonal Hamiltonian with entries uniform in `[lo, hi]`.
pub fn random_diagonal<R: Rng + ?Sized>(rng: &mut R, d: usize, lo: f64, hi: f64) -> HermitianOperator {
    let e: Vec<f64> = (0..d).map(|_| rng.random_range(lo..=hi)).collect();
    HermitianOperator::from_real_diagonal(&e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ginibre_states_are_valid() {
        let mut rng = seeded(7);
        for d in 1..6 {
            let rho = random_density(&mut rng, d);
            assert!(DensityMatrix::new(rho.matrix().clone()).is_ok());
            let pure = random_density_rank(&mut rng, d, 1);
            assert!((pure.purity() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn seeded_streams_repeat() {
        let a = random_hermitian(&mut seeded(3), 3);
        let b = random_hermitian(&mut seeded(3), 3);
        assert_eq!(a, b);
        assert!((spectral_seminorm(&random_direction(&mut seeded(4), 3)) - 1.0).abs() < 1e-12);
    }
}
