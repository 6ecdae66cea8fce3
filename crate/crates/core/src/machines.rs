//! The two-Hamiltonian machine that meets the zero-error bound with equality.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::optimize::golden_section_max;
use crate::quantum::{bures_angle, fidelity, gibbs_state, HermitianOperator, Spectrum};
use crate::Complex64;

/// Thermalize either `H1` or `H2` at inverse temperature `beta`.
#[derive(Clone, Debug)]
pub struct TwoPointTask {
    pub h1: HermitianOperator,
    pub h2: HermitianOperator,
    pub beta: f64,
    /// `H2 − H1`.
    pub kappa: HermitianOperator,
    pub lambda_up: f64,
    pub lambda_down: f64,
}

impl TwoPointTask {
    pub fn new(h1: HermitianOperator, h2: HermitianOperator, beta: f64) -> Result<Self> {
        if !(beta >= 0.0) {
            return Err(Error::InvalidInput(format!("inverse temperature {beta} must be non-negative")));
        }
        let kappa = h2.sub(&h1)?;
        let s: Spectrum = kappa.eig();
        let (lambda_down, lambda_up) = (s.min(), s.max());
        if lambda_up - lambda_down <= 0.0 {
            return Err(Error::DegenerateTask("H2 − H1 is proportional to the identity".into()));
        }
        Ok(Self { h1, h2, beta, kappa, lambda_up, lambda_down })
    }

    /// `‖κ‖ = λ↑ − λ↓`.
    pub fn kappa_norm(&self) -> f64 {
        self.lambda_up - self.lambda_down
    }

    fn gibbs_angle(&self) -> Result<f64> {
        bures_angle(&gibbs_state(&self.h1, self.beta)?, &gibbs_state(&self.h2, self.beta)?)
    }
}

/// Overlap `cos²(‖κ‖τ/2)` of the equal superposition of the extreme
/// eigenvectors of `κ` evolved under `H1` versus `H2`.
pub fn discrimination_overlap(task: &TwoPointTask, tau: f64) -> Result<f64> {
    if !(tau >= 0.0) {
        return Err(Error::InvalidInput(format!("time {tau} must be non-negative")));
    }
    Ok((0.5 * task.kappa_norm() * tau).cos().powi(2))
}

/// `2D(ω₁, ω₂)/‖κ‖`: stop the discrimination evolution once the pure-state
/// angle equals the Gibbs-state angle, then map isometrically onto the
/// Gibbs purifications.
pub fn optimal_two_point_time(task: &TwoPointTask) -> Result<f64> {
    let d = task.gibbs_angle()?;
    if d == 0.0 {
        return Err(Error::DegenerateTask("the two Gibbs states coincide".into()));
    }
    Ok(2.0 * d / task.kappa_norm())
}

/// Overlap the final isometry must reach: the fidelity of the two Gibbs states.
pub fn uhlmann_target_overlap(task: &TwoPointTask) -> Result<f64> {
    fidelity(&gibbs_state(&task.h1, task.beta)?, &gibbs_state(&task.h2, task.beta)?)
}

/// Squared overlap `|⟨Ψ_ρ|Ψ_σ⟩|²` maximized over machine-side unitaries for
/// diagonal qubit states `ρ = diag(p)`, `σ = diag(q)`.
///
/// `|Ψ_ρ⟩ = Σ √p_i |i⟩|i⟩` and `|Ψ_σ⟩ = Σ √q_i |i⟩ ⊗ U|i⟩` with
/// `U = [[cos θ e^{iφ}, −sin θ e^{−iφ}], [sin θ e^{iφ}, cos θ e^{−iφ}]]`;
/// `(θ, φ)` are searched on a grid and refined by golden section.
pub fn qubit_purification_overlap(p: [f64; 2], q: [f64; 2]) -> f64 {
    let c = |re: f64| Complex64::new(re, 0.0);
    let psi_rho = DVector::from_vec(vec![c(p[0].sqrt()), c(0.0), c(0.0), c(p[1].sqrt())]);
    let overlap = |theta: f64, phi: f64| {
        let u = [
            [Complex64::from_polar(theta.cos(), phi), Complex64::from_polar(-theta.sin(), -phi)],
            [Complex64::from_polar(theta.sin(), phi), Complex64::from_polar(theta.cos(), -phi)],
        ];
        // |Ψ_σ⟩ components in the |i⟩|j⟩ basis, index 2i + j
        let mut psi_sigma = DVector::from_element(4, c(0.0));
        for i in 0..2 {
            for j in 0..2 {
                psi_sigma[2 * i + j] = u[j][i] * q[i].sqrt();
            }
        }
        psi_rho.dotc(&psi_sigma).norm_sqr()
    };
    let n = 16;
    let step = std::f64::consts::PI / n as f64;
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for a in 0..(2 * n) {
        for b in 0..(2 * n) {
            let (t, f) = (a as f64 * step - std::f64::consts::PI, b as f64 * step - std::f64::consts::PI);
            let v = overlap(t, f);
            if v > best.0 {
                best = (v, t, f);
            }
        }
    }
    let (mut v, mut t, mut f) = best;
    for _ in 0..20 {
        let (nt, vt) = golden_section_max(|x| overlap(x, f), t - step, t + step, 1e-12);
        if vt > v {
            t = nt;
            v = vt;
        }
        let (nf, vf) = golden_section_max(|y| overlap(t, y), f - step, f + step, 1e-12);
        if vf > v {
            f = nf;
            v = vf;
        }
    }
    v
}

/// Time for a machine that prepares a fixed state without looking at the
/// Hamiltonian: zero for one target, undefined as a thermalizer for more.
pub fn swap_machine_time(target_count: usize) -> Result<f64> {
    match target_count {
        0 => Err(Error::InvalidInput("at least one target Hamiltonian is required".into())),
        1 => Ok(0.0),
        n => Err(Error::NotAThermalizer(n)),
    }
}
