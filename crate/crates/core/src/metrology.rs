//! Quantum Fisher information of thermal families, locally-exact bounds on
//! the thermalization factor and dynamical QFI ceilings.

use crate::error::{Error, Result};
use crate::quantum::{bures_angle, gibbs_spectrum, spectral_seminorm, DensityMatrix, HermitianOperator};

/// Largest dimension searched exhaustively by [`best_bipartition`].
pub const EXHAUSTIVE_BIPARTITION_MAX_DIM: usize = 24;

/// Default step of [`qfi_finite_difference`].
pub const FD_STEP: f64 = 1e-3;

/// Relative disagreement between the `h` and `h/2` estimates that is reported
/// as instability.
pub const FD_RICHARDSON_TOL: f64 = 1e-3;

/// A perturbation direction `X′` with its cached spectral seminorm.
#[derive(Clone, Debug, PartialEq)]
pub struct Perturbation {
    direction: HermitianOperator,
    seminorm: f64,
}

impl Perturbation {
    pub fn new(direction: HermitianOperator) -> Result<Self> {
        let seminorm = spectral_seminorm(&direction);
        if seminorm <= 0.0 {
            return Err(Error::InvalidInput("perturbation is proportional to the identity".into()));
        }
        Ok(Self { direction, seminorm })
    }

    pub fn direction(&self) -> &HermitianOperator {
        &self.direction
    }

    pub fn seminorm(&self) -> f64 {
        self.seminorm
    }
}

/// Two-block coarse graining of Gibbs populations.
///
/// `index_set` lists the levels of block 1; level 0 always sits in block 0, so
/// `q0` is the weight of the block holding the ground level and
/// `p_star = q0 / (q0 + q1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoarseGraining {
    pub index_set: Vec<usize>,
    pub p_star: f64,
    pub q0: f64,
    pub q1: f64,
    /// False when the greedy fallback was used.
    pub optimal: bool,
}

impl CoarseGraining {
    pub fn from_index_set(populations: &[f64], index_set: &[usize]) -> Result<Self> {
        check_normalized(populations)?;
        let mut in_block = vec![false; populations.len()];
        for &i in index_set {
            if i >= populations.len() {
                return Err(Error::DimError(format!("level {i} out of range")));
            }
            in_block[i] = true;
        }
        let mut index_set: Vec<usize> = (0..populations.len()).filter(|&i| in_block[i]).collect();
        if in_block.first() == Some(&true) {
            // keep the ground level in block 0
            index_set = (0..populations.len()).filter(|&i| !in_block[i]).collect();
        }
        let q1: f64 = index_set.iter().map(|&i| populations[i]).sum();
        let q0: f64 = populations.iter().sum::<f64>() - q1;
        Ok(Self { index_set, p_star: q0 / (q0 + q1), q0, q1, optimal: true })
    }

    /// `p*(1 − p*)`, the classical variance being maximized.
    pub fn balance(&self) -> f64 {
        self.p_star * (1.0 - self.p_star)
    }
}

fn check_normalized(p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::DimError("empty population vector".into()));
    }
    if p.iter().any(|&x| !(x >= 0.0)) {
        return Err(Error::InvalidState("negative population".into()));
    }
    let s: f64 = p.iter().sum();
    if (s - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidState(format!("populations sum to {s}")));
    }
    Ok(())
}

/// Off-diagonal pair weight `(p_i − p_j)² / ((ln p_i − ln p_j)² (p_i + p_j))`,
/// written in terms of `x = ln p_small − ln p_large ≤ 0` so that nearly equal
/// populations approach the limit `p/2` smoothly.
pub fn coherent_pair_weight(pi: f64, pj: f64) -> f64 {
    let (small, large) = if pi <= pj { (pi, pj) } else { (pj, pi) };
    if large <= 0.0 {
        return 0.0;
    }
    if small <= 0.0 {
        // x → −∞: (expm1(x)/x)² → 0
        return 0.0;
    }
    let x = small.ln() - large.ln();
    if x.abs() < 1e-9 {
        return 0.5 * large * (1.0 + 0.5 * x);
    }
    let r = x.exp_m1() / x;
    large * r * r / (1.0 + x.exp())
}

/// QFI of `θ ↦ ω(β, H + θX′)` at `θ = 0`.
pub fn qfi_thermal(h: &HermitianOperator, beta: f64, x: &Perturbation) -> Result<f64> {
    if beta.is_infinite() {
        return Err(Error::UnsupportedLimit("QFI of a zero-temperature Gibbs state".into()));
    }
    if x.direction.dim() != h.dim() {
        return Err(Error::DimError(format!("perturbation dim {} vs Hamiltonian dim {}", x.direction.dim(), h.dim())));
    }
    let (p, spec) = gibbs_spectrum(h, beta)?;
    let y = x.direction.scale(beta).in_basis(&spec.eigenvectors);
    let d = h.dim();
    let mean: f64 = (0..d).map(|i| p[i] * y[(i, i)].re).sum();
    let mut f: f64 = (0..d).map(|i| p[i] * y[(i, i)].re.powi(2)).sum::<f64>() - mean * mean;
    for i in 0..d {
        for j in (i + 1)..d {
            // both orderings, each with weight 2·c
            f += 4.0 * y[(i, j)].norm_sqr() * coherent_pair_weight(p[i], p[j]);
        }
    }
    Ok(f.max(0.0))
}

/// Central Bures estimate `D(ρ(θ−h), ρ(θ+h))² / h²` at steps `h` and `h/2`,
/// combined by one Richardson step.
pub fn qfi_finite_difference(family: impl Fn(f64) -> Result<DensityMatrix>, theta0: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidInput(format!("finite-difference step {h} must be positive")));
    }
    let estimate = |h: f64| -> Result<f64> {
        let d = bures_angle(&family(theta0 - h)?, &family(theta0 + h)?)?;
        Ok((d / h).powi(2))
    };
    let coarse = estimate(h)?;
    let fine = estimate(0.5 * h)?;
    let scale = coarse.abs().max(fine.abs());
    if scale < 1e-12 {
        return Ok(0.0);
    }
    if (coarse - fine).abs() > FD_RICHARDSON_TOL * scale {
        return Err(Error::NumericalInstability(format!("Richardson estimates {coarse} and {fine} disagree")));
    }
    Ok(((4.0 * fine - coarse) / 3.0).max(0.0))
}

/// `√(p*(1 − p*))`.
pub fn chi_tilde_diagonal(populations: &[f64], cg: &CoarseGraining) -> Result<f64> {
    check_normalized(populations)?;
    Ok(diagonal_bound(cg.p_star))
}

/// `√(p(1 − p))` for a block weight `p` in `[0, 1]`.
pub fn diagonal_bound(p_star: f64) -> f64 {
    (p_star * (1.0 - p_star)).max(0.0).sqrt()
}

/// `√(Σ_pairs c(p_i, p_j))` over disjoint level pairs.
pub fn chi_tilde_coherent(populations: &[f64], pairing: &[(usize, usize)]) -> Result<f64> {
    check_normalized(populations)?;
    let mut used = vec![false; populations.len()];
    let mut s = 0.0;
    for &(i, j) in pairing {
        if i >= populations.len() || j >= populations.len() {
            return Err(Error::DimError(format!("pair ({i},{j}) out of range")));
        }
        if i == j || used[i] || used[j] {
            return Err(Error::InvalidInput(format!("pair ({i},{j}) overlaps another pair")));
        }
        used[i] = true;
        used[j] = true;
        s += coherent_pair_weight(populations[i], populations[j]);
    }
    Ok(s.sqrt())
}

/// Transversal qubit bound `(2p − 1)/ln(p/(1 − p)) = tanh(x/2)/x`, `x = ln(p/(1−p))`.
pub fn chi_tilde_qubit(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidInput(format!("ground population {p} outside (0,1)")));
    }
    let x = p.ln() - (1.0 - p).ln();
    let value = if x.abs() < 1e-4 { 0.5 - x * x / 24.0 } else { (0.5 * x).tanh() / x };
    debug_assert!(value + 1e-15 >= diagonal_bound(p));
    Ok(value)
}

/// `(2p − 1)/ln((d − 1)p/(1 − p))`, the gapped bound for a ground level of
/// weight `p` against `d − 1` degenerate excited levels. Only defined for
/// `p ≥ ½`, where `(p₀ − p₁)² ≥ (2p − 1)²` holds; `None` below that for `d ≥ 3`.
/// For `d = 2` this is the qubit bound.
pub fn chi_tilde_gapped(p: f64, d: usize) -> Option<f64> {
    if !(p > 0.0 && p < 1.0) || d < 2 {
        return None;
    }
    if d == 2 {
        return chi_tilde_qubit(p).ok();
    }
    if p < 0.5 {
        return None;
    }
    let x = ((d - 1) as f64 * p / (1.0 - p)).ln();
    Some((2.0 * p - 1.0) / x)
}

/// Bipartition of the levels with block weight closest to ½.
pub fn best_bipartition(populations: &[f64]) -> Result<CoarseGraining> {
    check_normalized(populations)?;
    let d = populations.len();
    if d == 1 {
        return Ok(CoarseGraining { index_set: vec![], p_star: 1.0, q0: populations[0], q1: 0.0, optimal: true });
    }
    if d <= EXHAUSTIVE_BIPARTITION_MAX_DIM {
        exhaustive_bipartition(populations)
    } else {
        greedy_bipartition(populations)
    }
}

fn exhaustive_bipartition(p: &[f64]) -> Result<CoarseGraining> {
    let free = p.len() - 1;
    // Gray-code walk over subsets of levels 1..d; the running sum is block 1.
    let mut mask: u32 = 0;
    let mut q1 = 0.0;
    let mut best_mask = 0u32;
    let mut best = f64::NEG_INFINITY;
    for k in 1u32..(1u32 << free) {
        let bit = k.trailing_zeros();
        mask ^= 1 << bit;
        if mask & (1 << bit) != 0 {
            q1 += p[bit as usize + 1];
        } else {
            q1 -= p[bit as usize + 1];
        }
        let v = q1 * (1.0 - q1);
        if v > best {
            best = v;
            best_mask = mask;
        }
    }
    let set: Vec<usize> = (0..free).filter(|b| best_mask & (1 << b) != 0).map(|b| b + 1).collect();
    CoarseGraining::from_index_set(p, &set)
}

fn greedy_bipartition(p: &[f64]) -> Result<CoarseGraining> {
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by(|&a, &b| p[b].total_cmp(&p[a]).then(a.cmp(&b)));
    let (mut w0, mut w1) = (0.0, 0.0);
    let mut side = vec![false; p.len()];
    for i in order {
        if w1 < w0 {
            side[i] = true;
            w1 += p[i];
        } else {
            w0 += p[i];
        }
    }
    let set: Vec<usize> = (0..p.len()).filter(|&i| side[i]).collect();
    let mut cg = CoarseGraining::from_index_set(p, &set)?;
    cg.optimal = false;
    Ok(cg)
}

/// `‖κ‖² τ²`: the largest QFI any evolution of duration `τ` can imprint.
pub fn heisenberg_qfi_bound(tau: f64, kappa: &Perturbation) -> Result<f64> {
    if !(tau >= 0.0) {
        return Err(Error::InvalidInput(format!("duration {tau} must be non-negative")));
    }
    Ok((kappa.seminorm * tau).powi(2))
}

/// Largest Bures angle between two states evolved for `τ` under
/// Hamiltonians differing by `κ`: `τ‖κ‖/2`.
pub fn heisenberg_angle_bound(tau: f64, kappa: &Perturbation) -> Result<f64> {
    Ok(heisenberg_qfi_bound(tau, kappa)?.sqrt() / 2.0)
}

/// `t² k² ⌈n/k⌉ h²/4` for states entangled across blocks of at most `k` sites.
pub fn k_separable_qfi_bound(t: f64, k: usize, n: usize, h_norm: f64) -> Result<f64> {
    if k == 0 || k > n {
        return Err(Error::InvalidInput(format!("block size {k} outside 1..={n}")));
    }
    if !(t >= 0.0) || !(h_norm >= 0.0) {
        return Err(Error::InvalidInput("time and site norm must be non-negative".into()));
    }
    let blocks = n.div_ceil(k) as f64;
    Ok(t * t * (k * k) as f64 * blocks * h_norm * h_norm / 4.0)
}
