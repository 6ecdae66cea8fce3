//! Reference computations that share no numerical path with `planckian`.
//!
//! Fidelity goes through Cholesky factors rather than matrix square roots,
//! the QFI comes from Richardson-extrapolated Bures angles, and the
//! resonant-level steady state is integrated directly against the
//! Lorentzian spectral density.

use nalgebra::{Cholesky, DMatrix, SymmetricEigen};
use planckian::quantum::DensityMatrix;
use planckian::Complex64;

pub type CMat = DMatrix<Complex64>;

/// Principal square root of a positive semidefinite matrix.
pub fn psd_sqrt(m: &CMat) -> CMat {
    let eig = SymmetricEigen::new(m.clone());
    let v = &eig.eigenvectors;
    let mut scaled = v.clone();
    for (k, &l) in eig.eigenvalues.iter().enumerate() {
        let s = l.max(0.0).sqrt();
        scaled.column_mut(k).scale_mut(s);
    }
    scaled * v.adjoint()
}

/// Any `A` with `A A† = m`: the Cholesky factor when `m` is positive
/// definite, the principal square root otherwise.
pub fn factor(m: &CMat) -> CMat {
    match Cholesky::new(m.clone()) {
        Some(c) => c.unpack(),
        None => psd_sqrt(m),
    }
}

/// `‖A†B‖₁` for factorizations `ρ = AA†`, `σ = BB†`: the square root of the
/// Uhlmann fidelity, independent of which factors are used.
pub fn sqrt_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    let prod = factor(rho.matrix()).adjoint() * factor(sigma.matrix());
    prod.singular_values().iter().sum::<f64>().min(1.0)
}

/// Bures angle, using `arccos x = 2 asin √((1−x)/2)` to keep precision near 1.
pub fn bures_angle(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    let x = sqrt_fidelity(rho, sigma);
    2.0 * ((1.0 - x).max(0.0) / 2.0).sqrt().asin()
}

/// Symmetric-difference QFI `4D(ρ_{θ−h}, ρ_{θ+h})²/(2h)²` at two step sizes,
/// Richardson-combined to cancel the `h²` error.
pub fn qfi(family: impl Fn(f64) -> DensityMatrix, theta: f64, h: f64) -> f64 {
    let at = |h: f64| {
        let d = bures_angle(&family(theta - h), &family(theta + h));
        d * d / (h * h)
    };
    let coarse = at(h);
    let fine = at(h / 2.0);
    (4.0 * fine - coarse) / 3.0
}

/// Haar-ish unitary from the eigenvectors of a Hermitian matrix.
pub fn unitary_from_hermitian(h: &CMat) -> CMat {
    SymmetricEigen::new(h.clone()).eigenvectors
}

pub fn fermi(x: f64, beta: f64) -> f64 {
    let y = beta * x;
    if y > 0.0 {
        let e = (-y).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + y.exp())
    }
}

/// Adaptive Simpson with Richardson correction.
pub fn simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &impl Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let diff = left + right - whole;
        if depth == 0 || diff.abs() <= 15.0 * tol {
            return left + right + diff / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// Long-time dot occupation under constant coupling `g`: the Fermi function
/// averaged over a Lorentzian of half-width `g²/2` centred on `energy`.
/// The substitution `ν = E + γ tan φ` flattens the Lorentzian.
pub fn lorentzian_occupation(energy: f64, g: f64, beta: f64) -> f64 {
    let gamma = 0.5 * g * g;
    let half = std::f64::consts::FRAC_PI_2;
    let integrand = |phi: f64| fermi(energy + gamma * phi.tan(), beta);
    simpson(&integrand, -half, half, 1e-13) / std::f64::consts::PI
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_integrates_smooth_functions() {
        let v = simpson(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12);
        assert!((v - 2.0).abs() < 1e-11);
    }

    #[test]
    fn lorentzian_at_zero_energy_is_half() {
        assert!((lorentzian_occupation(0.0, 0.7, 1.0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn fidelity_of_diagonal_states_is_bhattacharyya() {
        let p = DensityMatrix::from_diagonal(&[0.2, 0.8]).unwrap();
        let q = DensityMatrix::from_diagonal(&[0.6, 0.4]).unwrap();
        let expect = (0.2f64 * 0.6).sqrt() + (0.8f64 * 0.4).sqrt();
        assert!((sqrt_fidelity(&p, &q) - expect).abs() < 1e-13);
    }
}
