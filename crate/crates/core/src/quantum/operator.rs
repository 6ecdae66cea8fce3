use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Absolute tolerance on `A[i][j] - conj(A[j][i])`.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Dense Hermitian matrix in energy units.
///
/// Construction checks Hermiticity within [`HERMITICITY_TOL`] and then
/// symmetrizes, so downstream eigensolvers see an exactly Hermitian input.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    m: CMatrix,
}

/// Ascending eigenvalues and the matching unitary of column eigenvectors.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: CMatrix,
}

pub(crate) fn check_hermitian(m: &CMatrix, tol: f64) -> std::result::Result<(), String> {
    if m.nrows() != m.ncols() {
        return Err(format!("not square: {}x{}", m.nrows(), m.ncols()));
    }
    if m.nrows() == 0 {
        return Err("empty matrix".into());
    }
    let d = m.nrows();
    for i in 0..d {
        for j in i..d {
            let dev = (m[(i, j)] - m[(j, i)].conj()).norm();
            if !dev.is_finite() || dev > tol {
                return Err(format!("hermiticity violated at ({i},{j}) by {dev:e}"));
            }
        }
    }
    Ok(())
}

pub(crate) fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

impl HermitianOperator {
    pub fn new(m: CMatrix) -> Result<Self> {
        check_hermitian(&m, HERMITICITY_TOL).map_err(Error::InvalidOperator)?;
        Ok(Self { m: hermitize(&m) })
    }

    /// Wraps a matrix known to be Hermitian up to rounding (products and sums
    /// of Hermitian operators computed inside the crate).
    pub(crate) fn from_trusted(m: CMatrix) -> Self {
        Self { m: hermitize(&m) }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d = diag.len();
        let m = CMatrix::from_fn(d, d, |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Self { m }
    }

    pub fn from_real(d: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != d * d {
            return Err(Error::DimError(format!("expected {} entries, got {}", d * d, entries.len())));
        }
        Self::new(CMatrix::from_fn(d, d, |i, j| Complex64::new(entries[i * d + j], 0.0)))
    }

    pub fn zeros(d: usize) -> Self {
        Self { m: CMatrix::zeros(d, d) }
    }

    pub fn identity(d: usize) -> Self {
        Self { m: CMatrix::identity(d, d) }
    }

    pub fn pauli_x() -> Self {
        Self::from_real(2, &[0.0, 1.0, 1.0, 0.0]).expect("static Pauli matrix")
    }

    pub fn pauli_y() -> Self {
        let i = Complex64::new(0.0, 1.0);
        let z = Complex64::new(0.0, 0.0);
        Self { m: CMatrix::from_row_slice(2, 2, &[z, -i, i, z]) }
    }

    pub fn pauli_z() -> Self {
        Self::from_real_diagonal(&[1.0, -1.0])
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

    pub fn scale(&self, c: f64) -> Self {
        Self { m: self.m.scale(c) }
    }

    /// `self + c * Identity`.
    pub fn shifted(&self, c: f64) -> Self {
        let mut m = self.m.clone();
        for i in 0..m.nrows() {
            m[(i, i)] += Complex64::new(c, 0.0);
        }
        Self { m }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(Self { m: &self.m + &other.m })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(Self { m: &self.m - &other.m })
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, other: &Self, c: f64) -> Result<Self> {
        self.same_dim(other)?;
        Ok(Self { m: &self.m + other.m.scale(c) })
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self { m: self.m.kronecker(&other.m) }
    }

    /// `U† A U`: matrix elements in the basis given by the columns of `u`.
    pub fn in_basis(&self, u: &CMatrix) -> CMatrix {
        u.adjoint() * &self.m * u
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| i == j || self.m[(i, j)].norm() <= tol))
    }

    pub fn eig(&self) -> Spectrum {
        eig_trusted(&self.m)
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimError(format!("{} vs {}", self.dim(), other.dim())));
        }
        Ok(())
    }
}

/// Eigendecomposition of a matrix that is already known to be Hermitian.
pub(crate) fn eig_trusted(m: &CMatrix) -> Spectrum {
    let d = m.nrows();
    if d == 1 {
        return Spectrum {
            eigenvalues: DVector::from_element(1, m[(0, 0)].re),
            eigenvectors: CMatrix::identity(1, 1),
        };
    }
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = DVector::from_iterator(d, order.iter().map(|&k| eig.eigenvalues[k]));
    let mut eigenvectors = CMatrix::zeros(d, d);
    for (col, &k) in order.iter().enumerate() {
        eigenvectors.set_column(col, &eig.eigenvectors.column(k));
    }
    Spectrum { eigenvalues, eigenvectors }
}

/// Eigendecomposition of a raw complex matrix, validating Hermiticity first.
pub fn hermitian_eig(a: &CMatrix) -> Result<Spectrum> {
    check_hermitian(a, HERMITICITY_TOL).map_err(Error::InvalidOperator)?;
    Ok(eig_trusted(&hermitize(a)))
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `U diag(f(λ)) U†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let w: Vec<f64> = self.eigenvalues.iter().map(|&x| f(x)).collect();
        self.weighted(&w)
    }

    /// `U diag(w) U†` for weights listed in eigenvalue order.
    pub fn weighted(&self, w: &[f64]) -> CMatrix {
        let d = self.dim();
        let mut scaled = self.eigenvectors.clone();
        for j in 0..d {
            for i in 0..d {
                scaled[(i, j)] *= w[j];
            }
        }
        scaled * self.eigenvectors.adjoint()
    }

    /// `U diag(f(λ)) U†` for a complex-valued function.
    pub fn map_complex(&self, f: impl Fn(f64) -> Complex64) -> CMatrix {
        let d = self.dim();
        let mut scaled = self.eigenvectors.clone();
        for j in 0..d {
            let fj = f(self.eigenvalues[j]);
            for i in 0..d {
                scaled[(i, j)] *= fj;
            }
        }
        scaled * self.eigenvectors.adjoint()
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.map(|x| x)
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.dim() - 1]
    }
}

/// `λ_max − λ_min`: the norm on Hamiltonians modulo identity shifts.
pub fn spectral_seminorm(a: &HermitianOperator) -> f64 {
    if a.dim() == 1 {
        return 0.0;
    }
    if a.is_diagonal(0.0) {
        let d = a.dim();
        let (lo, hi) = (0..d).map(|i| a.m[(i, i)].re).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
            (lo.min(x), hi.max(x))
        });
        return hi - lo;
    }
    let s = a.eig();
    s.max() - s.min()
}
