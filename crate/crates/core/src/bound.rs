//! The finite-error bound factor χ: pairwise values, the coarse-grained
//! ansatz and its optimization, a brute-force oracle for small dimensions and
//! the time-dependent speed limit derived from it.

use std::f64::consts::{E, FRAC_PI_2, FRAC_PI_4};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::optimize::golden_section_max;
use crate::quantum::{bures_angle, gibbs_state, spectral_seminorm, CMatrix, DensityMatrix, HermitianOperator};
use crate::random::{random_direction, seeded};

/// Largest meaningful thermalization error, in radians.
pub const EPS_MAX: f64 = FRAC_PI_4;

/// Largest ball radius explored by [`chi_lower_optimized`] (in units of `1/β`).
pub const DELTA_MAX: f64 = 50.0;

/// Largest dimension accepted by [`chi_exact_bruteforce`].
pub const BRUTEFORCE_MAX_DIM: usize = 3;

const ALPHA_GRID: usize = 21;
const DELTA_GRID: usize = 40;
const DELTA_GRID_MIN: f64 = 1e-3;
const DELTA_FLOOR: f64 = 1e-4;
const REFINE_TOL: f64 = 1e-6;
const REFINE_STARTS: usize = 4;
const RANDOM_LINE_RADII: usize = 9;

/// A Bures-angle error, stored in radians.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Epsilon(f64);

impl Epsilon {
    pub fn radians(eps: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&eps) {
            return Err(Error::InvalidInput(format!("error {eps} rad outside [0, π/2]")));
        }
        Ok(Self(eps))
    }

    /// `fraction · π/4`.
    pub fn fraction_of_max(fraction: f64) -> Result<Self> {
        if !(0.0..=2.0).contains(&fraction) {
            return Err(Error::InvalidInput(format!("error fraction {fraction} outside [0, 2]")));
        }
        Ok(Self(fraction * EPS_MAX))
    }

    pub fn zero() -> Self {
        Self(0.0)
    }

    pub fn rad(self) -> f64 {
        self.0
    }

    pub fn fraction(self) -> f64 {
        self.0 / EPS_MAX
    }
}

/// Center, temperature, radius and error defining one χ evaluation.
#[derive(Clone, Debug)]
pub struct BoundQuery {
    pub h_bar: HermitianOperator,
    pub beta: f64,
    pub delta: f64,
    pub epsilon: Epsilon,
}

impl BoundQuery {
    pub fn new(h_bar: HermitianOperator, beta: f64, delta: f64, epsilon: Epsilon) -> Result<Self> {
        check_beta(beta)?;
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidInput(format!("ball radius {delta} must be positive")));
        }
        Ok(Self { h_bar, beta, delta, epsilon })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    LowerAnsatz,
    LowerExactPair,
    Upper,
    ExactBruteforce,
}

#[derive(Clone, Debug)]
pub enum Witness {
    Ansatz { alpha: f64, delta: f64, p_star: f64 },
    Pair { h1: HermitianOperator, h2: HermitianOperator },
    None,
}

#[derive(Clone, Debug)]
pub struct ChiBoundResult {
    pub value: f64,
    pub kind: BoundKind,
    pub witness: Witness,
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidInput(format!("inverse temperature {beta} must be positive and finite")));
    }
    Ok(())
}

fn chi_from_angle(angle: f64, beta: f64, separation: f64, eps: Epsilon) -> f64 {
    (2.0 * angle - 4.0 * eps.rad()) / (beta * separation)
}

/// `(2D(ω₁, ω₂) − 4ε) / (β‖H₁ − H₂‖)`; negative values mean the pair gives
/// no constraint.
pub fn pairwise_chi(h1: &HermitianOperator, h2: &HermitianOperator, beta: f64, eps: Epsilon) -> Result<f64> {
    check_beta(beta)?;
    let sep = spectral_seminorm(&h1.sub(h2)?);
    if sep == 0.0 {
        return Err(Error::DegeneratePair);
    }
    let d = bures_angle(&gibbs_state(h1, beta)?, &gibbs_state(h2, beta)?)?;
    Ok(chi_from_angle(d, beta, sep, eps))
}

/// Bures angle between the two-block states `(p*, (1−p*)e^{−αδ})` and
/// `(p*, (1−p*)e^{(1−α)δ})` (each normalized), via `atan2` of the cross and
/// dot products of their square-root vectors.
pub fn ansatz_angle(p_star: f64, alpha: f64, delta: f64) -> f64 {
    let q = 1.0 - p_star;
    let cross = 2.0 * (p_star * q).sqrt() * ((1.0 - 2.0 * alpha) * delta / 4.0).exp() * (delta / 4.0).sinh();
    let dot = p_star + q * ((1.0 - 2.0 * alpha) * delta / 2.0).exp();
    cross.abs().atan2(dot)
}

/// Ansatz lower bound at one `(α, δ)`, with `δ` in units of `1/β`.
///
/// For `α ∈ [0, 1]` both Hamiltonians lie in the ball; other real `α` still
/// give the exact pairwise value of the corresponding two-level shift.
pub fn chi_lower_ansatz(p_star: f64, alpha: f64, delta: f64, eps: Epsilon) -> Result<f64> {
    if !(p_star > 0.0 && p_star < 1.0) {
        return Err(Error::InvalidInput(format!("block weight {p_star} outside (0,1)")));
    }
    if !(delta > 0.0 && delta.is_finite()) || !alpha.is_finite() {
        return Err(Error::InvalidInput(format!("bad ansatz parameters α={alpha}, δ={delta}")));
    }
    Ok(chi_from_angle(ansatz_angle(p_star, alpha, delta), 1.0, delta, eps))
}

fn delta_grid() -> Vec<f64> {
    let ratio = (DELTA_MAX / DELTA_GRID_MIN).ln();
    (0..DELTA_GRID)
        .map(|j| DELTA_GRID_MIN * (ratio * j as f64 / (DELTA_GRID - 1) as f64).exp())
        .collect()
}

/// Candidate `(value, α, δ)` ordering: larger value first, then smaller δ.
fn better(a: (f64, f64, f64), b: (f64, f64, f64)) -> bool {
    a.0 > b.0 || (a.0 == b.0 && a.2 < b.2)
}

/// Best ansatz bound over `α ∈ [0, 1]` and `δ ∈ (0, 50]`.
///
/// A 21 × 40 grid (δ log-spaced from 1e-3) seeds alternating golden-section
/// refinements in `α` and `ln δ` from the top few grid points.
pub fn chi_lower_optimized(p_star: f64, eps: Epsilon) -> Result<ChiBoundResult> {
    if !(p_star > 0.0 && p_star < 1.0) {
        return Err(Error::InvalidInput(format!("block weight {p_star} outside (0,1)")));
    }
    if eps.rad() > EPS_MAX {
        return Err(Error::InvalidInput(format!("error {} rad exceeds π/4", eps.rad())));
    }
    let f = |a: f64, d: f64| chi_from_angle(ansatz_angle(p_star, a, d), 1.0, d, eps);
    let deltas = delta_grid();
    let mut grid: Vec<(f64, usize, usize)> = Vec::with_capacity(ALPHA_GRID * DELTA_GRID);
    for i in 0..ALPHA_GRID {
        let a = i as f64 / (ALPHA_GRID - 1) as f64;
        for (j, &d) in deltas.iter().enumerate() {
            grid.push((f(a, d), i, j));
        }
    }
    grid.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.2.cmp(&y.2)).then(x.1.cmp(&y.1)));

    let mut best = (f64::NEG_INFINITY, 0.5, deltas[0]);
    for &(v, i, j) in grid.iter().take(REFINE_STARTS) {
        let a0 = i as f64 / (ALPHA_GRID - 1) as f64;
        let cand = (v, a0, deltas[j]);
        if better(cand, best) {
            best = cand;
        }
        let a_lo = (a0 - 1.0 / (ALPHA_GRID - 1) as f64).max(0.0);
        let a_hi = (a0 + 1.0 / (ALPHA_GRID - 1) as f64).min(1.0);
        let ld_lo = if j == 0 { DELTA_FLOOR.ln() } else { deltas[j - 1].ln() };
        let ld_hi = if j + 1 == DELTA_GRID { DELTA_MAX.ln() } else { deltas[j + 1].ln() };
        let (mut a, mut ld, mut val) = (a0, deltas[j].ln(), v);
        for _ in 0..50 {
            let prev = val;
            let (na, va) = golden_section_max(|x| f(x, ld.exp()), a_lo, a_hi, REFINE_TOL);
            if va > val {
                a = na;
                val = va;
            }
            let (nld, vd) = golden_section_max(|y| f(a, y.exp()), ld_lo, ld_hi, REFINE_TOL);
            if vd > val {
                ld = nld;
                val = vd;
            }
            if val - prev <= 1e-14 {
                break;
            }
        }
        let cand = (val, a, ld.exp());
        if better(cand, best) {
            best = cand;
        }
    }
    Ok(ChiBoundResult {
        value: best.0,
        kind: BoundKind::LowerAnsatz,
        witness: Witness::Ansatz { alpha: best.1, delta: best.2, p_star },
    })
}

/// `½ − 4ε/(βδ)`.
pub fn chi_upper(delta: f64, eps: Epsilon, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if !(delta > 0.0) {
        return Err(Error::InvalidInput(format!("ball radius {delta} must be positive")));
    }
    Ok(0.5 - 4.0 * eps.rad() / (beta * delta))
}

struct Point {
    h: HermitianOperator,
    state: DensityMatrix,
}

/// Unit-seminorm directions built from the eigenbasis of the center: level
/// projectors (two-level diagonal shifts) and real/imaginary transitions.
fn structured_directions(h_bar: &HermitianOperator) -> Vec<HermitianOperator> {
    let d = h_bar.dim();
    let u = h_bar.eig().eigenvectors;
    let rotate = |m: CMatrix| HermitianOperator::from_trusted(&u * m * u.adjoint());
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << (d - 1)) {
        // subsets of levels 1..d; the complement gives the same line
        let diag: Vec<f64> = (0..d).map(|i| if i > 0 && mask & (1 << (i - 1)) != 0 { 1.0 } else { 0.0 }).collect();
        out.push(rotate(HermitianOperator::from_real_diagonal(&diag).into_matrix()));
    }
    for i in 0..d {
        for j in (i + 1)..d {
            let mut re = CMatrix::zeros(d, d);
            re[(i, j)] = 0.5.into();
            re[(j, i)] = 0.5.into();
            out.push(rotate(re));
            let mut im = CMatrix::zeros(d, d);
            im[(i, j)] = crate::Complex64::new(0.0, -0.5);
            im[(j, i)] = crate::Complex64::new(0.0, 0.5);
            out.push(rotate(im));
        }
    }
    out
}

fn radii(n: usize) -> Vec<f64> {
    (0..n).map(|k| -1.0 + 2.0 * k as f64 / (n - 1) as f64).collect()
}

/// Sampled maximum of [`pairwise_chi`] over pairs in the ball
/// `‖H − H̄‖ ≤ δ` (spectral seminorm), for `dim ≤ 3`.
///
/// Half of the `budget` candidate pairs lie on lines through the center
/// along structured directions, half on lines along seeded random GUE
/// directions (plus pairs joining the endpoints of consecutive random
/// lines). The result is a lower bound on the true maximum.
pub fn chi_exact_bruteforce(query: &BoundQuery, budget: usize, seed: u64) -> Result<ChiBoundResult> {
    let d = query.h_bar.dim();
    if d > BRUTEFORCE_MAX_DIM {
        return Err(Error::UnsupportedDimension(d, BRUTEFORCE_MAX_DIM));
    }
    if d < 2 {
        return Err(Error::InvalidInput("a one-level system has a single Gibbs state".into()));
    }
    if budget == 0 || budget > 1_000_000 {
        return Err(Error::InvalidInput(format!("pair budget {budget} outside 1..=1e6")));
    }
    let structured = structured_directions(&query.h_bar);
    let per_line = (budget as f64 / structured.len() as f64).sqrt().round() as usize;
    let n_s = (per_line | 1).clamp(3, 401);
    let pairs_per_random = RANDOM_LINE_RADII * (RANDOM_LINE_RADII - 1) / 2 + 4;
    let n_random = (budget / 2 / pairs_per_random).max(1);
    let mut rng = seeded(seed);
    let random: Vec<HermitianOperator> = (0..n_random).map(|_| random_direction(&mut rng, d)).collect();

    let make_line = |x: &HermitianOperator, n: usize| -> Result<Vec<Point>> {
        radii(n)
            .into_iter()
            .map(|r| {
                let h = query.h_bar.add_scaled(x, r * query.delta)?;
                let state = gibbs_state(&h, query.beta)?;
                Ok(Point { h, state })
            })
            .collect()
    };
    let mut lines: Vec<Vec<Point>> = Vec::new();
    for x in &structured {
        lines.push(make_line(x, n_s)?);
    }
    let first_random = lines.len();
    for x in &random {
        lines.push(make_line(x, RANDOM_LINE_RADII)?);
    }

    let mut pairs: Vec<((usize, usize), (usize, usize))> = Vec::new();
    for (l, line) in lines.iter().enumerate() {
        for i in 0..line.len() {
            for j in (i + 1)..line.len() {
                pairs.push(((l, i), (l, j)));
            }
        }
    }
    let last = RANDOM_LINE_RADII - 1;
    for l in first_random..lines.len().saturating_sub(1) {
        for a in [0, last] {
            for b in [0, last] {
                pairs.push(((l, a), (l + 1, b)));
            }
        }
    }

    let values: Vec<f64> = pairs
        .par_iter()
        .map(|&((l1, i1), (l2, i2))| {
            let (p1, p2) = (&lines[l1][i1], &lines[l2][i2]);
            let sep = match p1.h.sub(&p2.h) {
                Ok(diff) => spectral_seminorm(&diff),
                Err(_) => 0.0,
            };
            if sep <= 1e-14 * query.delta {
                return f64::NEG_INFINITY;
            }
            match bures_angle(&p1.state, &p2.state) {
                Ok(angle) => chi_from_angle(angle, query.beta, sep, query.epsilon),
                Err(_) => f64::NAN,
            }
        })
        .collect();
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::NumericalInstability("fidelity failed on a sampled pair".into()));
    }
    let (k, &value) = values
        .iter()
        .enumerate()
        .fold(None, |acc: Option<(usize, &f64)>, (k, v)| match acc {
            Some((_, b)) if *b >= *v => acc,
            _ => Some((k, v)),
        })
        .expect("at least one pair");
    let ((l1, i1), (l2, i2)) = pairs[k];
    Ok(ChiBoundResult {
        value,
        kind: BoundKind::ExactBruteforce,
        witness: Witness::Pair { h1: lines[l1][i1].h.clone(), h2: lines[l2][i2].h.clone() },
    })
}

/// `½ D(ω₁, ω₂) − t‖H₁ − H₂‖/4`: at time `t` at least one of the two
/// outputs of any machine is this far (in Bures angle) from its target.
pub fn speed_limit_rhs(t: f64, h1: &HermitianOperator, h2: &HermitianOperator, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if !(t >= 0.0) {
        return Err(Error::InvalidInput(format!("time {t} must be non-negative")));
    }
    let sep = spectral_seminorm(&h1.sub(h2)?);
    if sep == 0.0 {
        return Err(Error::DegeneratePair);
    }
    let d = bures_angle(&gibbs_state(h1, beta)?, &gibbs_state(h2, beta)?)?;
    Ok(0.5 * d - t * sep / 4.0)
}

/// Locally-exact thermalization time in the two temperature regimes:
/// `β√e/(1+e)` for `βΔ ≤ 1`, `(2p₀ − 1)/Δ` otherwise.
pub fn intro_regime_bound(beta: f64, gap: f64, p0: f64) -> Result<f64> {
    check_beta(beta)?;
    if !(gap > 0.0) {
        return Err(Error::InvalidInput(format!("gap {gap} must be positive")));
    }
    if beta * gap <= 1.0 {
        return Ok(beta * E.sqrt() / (1.0 + E));
    }
    if !(0.5..=1.0).contains(&p0) {
        return Err(Error::InvalidInput(format!("ground population {p0} outside [½, 1]")));
    }
    Ok((2.0 * p0 - 1.0) / gap)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Recomputed: D(ω(1, diag(0,0)), ω(1, diag(0,1))).
    const QUBIT_PAIR_ANGLE: f64 = 0.240_190_5;

    fn qubit_pair() -> (HermitianOperator, HermitianOperator) {
        (HermitianOperator::from_real_diagonal(&[0.0, 0.0]), HermitianOperator::from_real_diagonal(&[0.0, 1.0]))
    }

    #[test]
    fn epsilon_units() {
        assert_eq!(EPS_MAX, std::f64::consts::PI / 4.0);
        let e = Epsilon::fraction_of_max(0.2).unwrap();
        assert!((e.rad() - 0.2 * EPS_MAX).abs() < 1e-16);
        assert!((e.fraction() - 0.2).abs() < 1e-15);
        assert!(Epsilon::radians(-0.1).is_err());
        assert!(Epsilon::radians(2.0).is_err());
    }

    #[test]
    fn pairwise_qubit_values() {
        let (h1, h2) = qubit_pair();
        let v = pairwise_chi(&h1, &h2, 1.0, Epsilon::zero()).unwrap();
        assert!((v - 2.0 * QUBIT_PAIR_ANGLE).abs() < 1e-7);
        let d = bures_angle(&gibbs_state(&h1, 1.0).unwrap(), &gibbs_state(&h2, 1.0).unwrap()).unwrap();
        let at_half = pairwise_chi(&h1, &h2, 1.0, Epsilon::radians(d / 2.0).unwrap()).unwrap();
        assert!(at_half.abs() < 1e-15);
        assert!((d / 2.0 / EPS_MAX - 0.1529).abs() < 1e-4);
        let shifted = h1.shifted(0.7);
        assert!(matches!(pairwise_chi(&h1, &shifted, 1.0, Epsilon::zero()), Err(Error::DegeneratePair)));
    }

    #[test]
    fn ansatz_matches_direct_gibbs_fidelity() {
        let (p, a, delta) = (0.5, 0.5, 2.0);
        // Gibbs pair diag(0, ±δ/2) with equal ground weights p*/(1−p*) = 1
        let h1 = HermitianOperator::from_real_diagonal(&[0.0, a * delta]);
        let h2 = HermitianOperator::from_real_diagonal(&[0.0, -(1.0 - a) * delta]);
        let direct = pairwise_chi(&h1, &h2, 1.0, Epsilon::zero()).unwrap();
        let ansatz = chi_lower_ansatz(p, a, delta, Epsilon::zero()).unwrap();
        assert!((direct - ansatz).abs() < 1e-12);
        let angle = ansatz_angle(p, a, delta);
        let arccos_form = ((p + (1.0 - p) * ((1.0 - 2.0 * a) * delta / 2.0).exp())
            / ((p + (1.0 - p) * (-a * delta).exp()).sqrt() * (p + (1.0 - p) * ((1.0 - a) * delta).exp()).sqrt()))
        .acos();
        assert!((angle - arccos_form).abs() < 1e-12);
    }

    #[test]
    fn ansatz_small_delta_limits() {
        let v = chi_lower_ansatz(0.5, 0.5, 1e-6, Epsilon::zero()).unwrap();
        assert!((v - 0.5).abs() < 1e-9);
        let eps = Epsilon::radians(0.01).unwrap();
        let mut prev = f64::INFINITY;
        for k in 0..10 {
            let delta = 0.1 * 0.5f64.powi(k);
            let v = chi_lower_ansatz(0.5, 0.5, delta, eps).unwrap();
            assert!(v < prev);
            prev = v;
        }
        assert!(prev < -4.0 * 0.01 / (0.1 * 0.5f64.powi(9)) + 1.0);
    }

    #[test]
    fn optimized_checkpoints() {
        let zero = chi_lower_optimized(0.5, Epsilon::zero()).unwrap();
        assert!((zero.value - 0.5).abs() < 1e-4);
        let five = chi_lower_optimized(0.5, Epsilon::fraction_of_max(0.05).unwrap()).unwrap();
        assert!(five.value >= 0.4, "{}", five.value);
        let full = chi_lower_optimized(0.5, Epsilon::fraction_of_max(1.0).unwrap()).unwrap();
        assert!(full.value <= 1e-6);
        assert!(matches!(full.kind, BoundKind::LowerAnsatz));
    }

    #[test]
    fn upper_bound_values() {
        assert_eq!(chi_upper(1.0, Epsilon::zero(), 1.0).unwrap(), 0.5);
        let (beta, delta) = (2.0, 0.5);
        let eps = Epsilon::radians(beta * delta / 8.0).unwrap();
        assert_eq!(chi_upper(delta, eps, beta).unwrap(), 0.0);
    }

    #[test]
    fn speed_limit_qubit() {
        let (h1, h2) = qubit_pair();
        let r0 = speed_limit_rhs(0.0, &h1, &h2, 1.0).unwrap();
        assert!((r0 - QUBIT_PAIR_ANGLE / 2.0).abs() < 1e-7);
        let crossing = 4.0 * r0;
        assert!(speed_limit_rhs(crossing, &h1, &h2, 1.0).unwrap().abs() < 1e-15);
        assert!((crossing - 0.480_381_1).abs() < 1e-7);
        assert!(speed_limit_rhs(0.0, &h1, &h1.shifted(1.0), 1.0).is_err());
    }

    #[test]
    fn intro_regimes() {
        let c = E.sqrt() / (1.0 + E);
        assert!((intro_regime_bound(1.0, 1.0, 0.7).unwrap() - c).abs() < 1e-15);
        assert!((c - 0.44341).abs() < 1e-5);
        assert!((intro_regime_bound(1.0, 20.0, 1.0).unwrap() - 1.0 / 20.0).abs() < 1e-15);
        assert_eq!(intro_regime_bound(1.0, 3.0, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn bruteforce_rejects_large_dimension() {
        let q = BoundQuery::new(HermitianOperator::zeros(4), 1.0, 0.1, Epsilon::zero()).unwrap();
        assert!(matches!(chi_exact_bruteforce(&q, 100, 0), Err(Error::UnsupportedDimension(4, 3))));
    }

    #[test]
    fn bruteforce_at_max_error_is_trivial() {
        let q = BoundQuery::new(HermitianOperator::from_real_diagonal(&[0.0, 1.0]), 1.0, 1.0, Epsilon::radians(EPS_MAX).unwrap())
            .unwrap();
        assert!(chi_exact_bruteforce(&q, 2000, 1).unwrap().value <= 0.0);
    }
}
