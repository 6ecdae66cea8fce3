//! Resonant-level model: a fermionic dot of energy `E` tunnel-coupled with
//! strength `g(t)` to a wide-band lead at inverse temperature `β`.
//!
//! The dot occupation is
//! `p(t) = p₀ e^{−G(0,t)} + (1/2π) ∫ dν f_β(E − ν) |I(ν)|²`, with
//! `G(s,t) = ∫_s^t g²`, `I(ν) = ∫₀^t w(s) e^{−iν(t−s)} ds` and
//! `w(s) = g(s) e^{−G(s,t)/2}`. The ν-integral runs over `|ν| ≤ L`
//! numerically; beyond `L` the Fermi factor is 0 or 1 to within `e^{−50}`
//! and the `1/ν²` tail of `|I|²` is integrated in closed form.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::bound::speed_limit_rhs;
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::quantum::HermitianOperator;
use crate::special::{digamma_complex, fermi_dirac, sine_integral};
use crate::Complex64;

pub use crate::special::fermi_dirac as fermi;

/// Allowed margin `max(D₁, D₂) − RHS` before a trajectory pair is reported as
/// violating the speed limit.
pub const FORBIDDEN_REGION_TOL: f64 = 1e-4;

/// Probabilities outside `[−1e-8, 1 + 1e-8]` are treated as quadrature failure.
pub const PROBABILITY_SLACK: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CouplingKind {
    /// `g(t) = g`.
    Constant { g: f64 },
    /// `g(t) = √(a / (t + b))`.
    Decaying { a: f64, b: f64 },
}

/// Coupling profile, switched off for good after `cutoff` if given.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CouplingSchedule {
    pub kind: CouplingKind,
    pub cutoff: Option<f64>,
}

impl CouplingSchedule {
    pub fn constant(g: f64) -> Result<Self> {
        if !(g >= 0.0 && g.is_finite()) {
            return Err(Error::InvalidInput(format!("coupling {g} must be non-negative")));
        }
        Ok(Self { kind: CouplingKind::Constant { g }, cutoff: None })
    }

    pub fn decaying(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidInput(format!("decaying coupling needs a > 0, b > 0 (got {a}, {b})")));
        }
        Ok(Self { kind: CouplingKind::Decaying { a, b }, cutoff: None })
    }

    pub fn with_cutoff(mut self, tau: f64) -> Result<Self> {
        if !(tau >= 0.0) {
            return Err(Error::InvalidInput(format!("cutoff {tau} must be non-negative")));
        }
        self.cutoff = Some(tau);
        Ok(self)
    }

    /// Time up to which the coupling acts; the occupation is frozen afterwards.
    pub fn effective_time(&self, t: f64) -> f64 {
        match self.cutoff {
            Some(c) => t.min(c),
            None => t,
        }
    }

    /// Width scale of the inner coupling dynamics in energy units.
    fn rate(&self) -> f64 {
        match self.kind {
            CouplingKind::Constant { g } => 0.5 * g * g,
            CouplingKind::Decaying { a, b } => (a - 1.0).abs() / (2.0 * b),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSettings {
    /// Gauss–Legendre nodes per panel.
    pub nodes: usize,
    /// ν-range half width in units of `max(1/β, rate)`.
    pub omega_cutoff: f64,
    /// Largest accepted change between a grid and its refinement.
    pub tol: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self { nodes: 10, omega_cutoff: 50.0, tol: 1e-6 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RlmConfig {
    pub energy: f64,
    pub beta: f64,
    pub p0: f64,
    pub schedule: CouplingSchedule,
    pub quadrature: QuadratureSettings,
}

impl RlmConfig {
    pub fn new(energy: f64, beta: f64, p0: f64, schedule: CouplingSchedule) -> Result<Self> {
        if !energy.is_finite() {
            return Err(Error::InvalidInput(format!("dot energy {energy} must be finite")));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidInput(format!("inverse temperature {beta} must be positive and finite")));
        }
        if !(0.0..=1.0).contains(&p0) {
            return Err(Error::InvalidInput(format!("initial occupation {p0} outside [0,1]")));
        }
        Ok(Self { energy, beta, p0, schedule, quadrature: QuadratureSettings::default() })
    }

    pub fn with_energy(&self, energy: f64) -> Self {
        Self { energy, ..*self }
    }

    /// Local thermal occupation `f_β(E)`.
    pub fn thermal_occupation(&self) -> f64 {
        fermi_dirac(self.energy, self.beta)
    }

    fn omega_half_width(&self) -> f64 {
        self.quadrature.omega_cutoff * (1.0 / self.beta).max(self.schedule.rate()) + self.energy.abs()
    }
}

/// Sampled occupation and distance to the local Gibbs state.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub p: Vec<f64>,
    pub d_to_thermal: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ThermalizationOutcome {
    Reached(f64),
    Unreachable,
}

/// `½ − (1/π) Im Ψ(½ + (β/2π)(g²/2 + iE))`: the long-time occupation under a
/// constant coupling.
pub fn rlm_steady_state_constant(energy: f64, g: f64, beta: f64) -> Result<f64> {
    if !(g > 0.0) {
        return Err(Error::InvalidInput(format!("coupling {g} must be positive")));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidInput(format!("inverse temperature {beta} must be positive and finite")));
    }
    let z = Complex64::new(0.5 + beta * g * g / (4.0 * PI), beta * energy / (2.0 * PI));
    Ok(0.5 - digamma_complex(z)?.im / PI)
}

fn check_probability(p: f64) -> Result<f64> {
    if !(p >= -PROBABILITY_SLACK && p <= 1.0 + PROBABILITY_SLACK) {
        return Err(Error::QuadratureError(format!("occupation {p} outside [0,1]")));
    }
    Ok(p)
}

/// `∫_L^∞ cos(νt)/ν² dν`.
fn tail_cos2(l: f64, t: f64) -> f64 {
    (l * t).cos() / l - t * (FRAC_PI_2 - sine_integral(l * t))
}

/// `∫_L^∞ sin(νt)/ν³ dν`.
fn tail_sin3(l: f64, t: f64) -> f64 {
    (l * t).sin() / (2.0 * l * l) + 0.5 * t * tail_cos2(l, t)
}

/// `∫_L^∞ cos(νt)/ν⁴ dν`.
fn tail_cos4(l: f64, t: f64) -> f64 {
    (l * t).cos() / (3.0 * l.powi(3)) - t / 3.0 * tail_sin3(l, t)
}

/// Breakpoints on `[−L, L]`: panels no wider than `h_max`, shrinking to
/// `max(scale, |ν|)/2` near the origin.
fn omega_breaks(l: f64, h_max: f64, scale: f64) -> Vec<f64> {
    let mut pos = vec![0.0];
    let mut x = 0.0;
    while x < l {
        let h = h_max.min(0.5 * scale.max(x));
        x = (x + h).min(l);
        if l - x < 1e-3 * h {
            x = l;
        }
        pos.push(x);
    }
    let mut out: Vec<f64> = pos.iter().rev().map(|v| -v).collect();
    out.extend_from_slice(&pos[1..]);
    out
}

fn refine(breaks: &[f64], factor: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity((breaks.len() - 1) * factor + 1);
    for w in breaks.windows(2) {
        for k in 0..factor {
            out.push(w[0] + (w[1] - w[0]) * k as f64 / factor as f64);
        }
    }
    out.push(*breaks.last().expect("non-empty breakpoints"));
    out
}

/// Envelope `e^{−γt}` below which the oscillating term of the constant
/// kernel is dropped (its weight is at most `4e^{−γt}`).
const SETTLED_ENVELOPE: f64 = 2.5e-13;

/// ν-quadrature for a constant coupling, valid for all `t ≤ t_max`.
///
/// With `γ = g²/2`, `|I(ν)|² = g² |1 − e^{−(γ+iν)t}|²/(γ² + ν²)` gives
/// `p(t) = p₀e^{−g²t} + (1 + e^{−g²t}) P − 2e^{−γt} C(t)` where `P` and `C(t)`
/// are Lorentzian-weighted Fermi integrals without and with `cos(νt)`.
#[derive(Clone, Debug)]
pub struct ConstantKernel {
    p0: f64,
    g2: f64,
    gamma: f64,
    l: f64,
    t_max: f64,
    nu: Vec<f64>,
    weight: Vec<f64>,
    steady: f64,
}

impl ConstantKernel {
    pub fn new(cfg: &RlmConfig, t_max: f64) -> Result<Self> {
        let g = match cfg.schedule.kind {
            CouplingKind::Constant { g } => g,
            _ => return Err(Error::InvalidInput("constant kernel needs a constant coupling".into())),
        };
        // beyond the settling time the oscillating term is dropped, so the
        // grid only has to resolve cos(νt) up to there
        let resolved = if g > 0.0 { t_max.min(-SETTLED_ENVELOPE.ln() / (0.5 * g * g)) } else { t_max };
        let mut coarse = Self::build(cfg, g, resolved, 1);
        coarse.t_max = t_max;
        if g == 0.0 {
            return Ok(coarse);
        }
        let mut fine = Self::build(cfg, g, resolved, 2);
        fine.t_max = t_max;
        let mut worst = (coarse.steady - fine.steady).abs();
        for t in [0.5 * resolved, resolved] {
            worst = worst.max((coarse.oscillating(t) - fine.oscillating(t)).abs());
        }
        if worst > cfg.quadrature.tol {
            return Err(Error::QuadratureError(format!("constant-coupling ν-grid changed by {worst:e} on refinement")));
        }
        Ok(fine)
    }

    fn build(cfg: &RlmConfig, g: f64, t_max: f64, factor: usize) -> Self {
        let g2 = g * g;
        let gamma = 0.5 * g2;
        let l = cfg.omega_half_width();
        let mut h_max = 1.0 / cfg.beta;
        if t_max > 0.0 {
            h_max = h_max.min(1.0 / t_max);
        }
        let breaks = refine(&omega_breaks(l, h_max, gamma.max(1e-300)), factor);
        let rule = GaussLegendre::new(cfg.quadrature.nodes);
        let mut nu = Vec::new();
        let mut weight = Vec::new();
        for w in breaks.windows(2) {
            for (x, wx) in rule.mapped(w[0], w[1]) {
                nu.push(x);
                weight.push(wx * fermi_dirac(cfg.energy - x, cfg.beta) * g2 / (gamma * gamma + x * x) / (2.0 * PI));
            }
        }
        let tail = if gamma > 0.0 { 2.0 * (gamma / l).atan() / (2.0 * PI) } else { 0.0 };
        let steady = weight.iter().sum::<f64>() + tail;
        Self { p0: cfg.p0, g2, gamma, l, t_max, nu, weight, steady }
    }

    /// Quadrature value of the long-time occupation.
    pub fn steady_state(&self) -> f64 {
        self.steady
    }

    fn tail_oscillating(&self, t: f64) -> f64 {
        let g2l = self.gamma * self.gamma;
        // 1/(γ²+ν²) = 1/ν² − γ²/ν⁴ + O(ν⁻⁶)
        self.g2 * (tail_cos2(self.l, t) - g2l * tail_cos4(self.l, t)) / (2.0 * PI)
    }

    fn oscillating(&self, t: f64) -> f64 {
        let s: f64 = self.nu.iter().zip(&self.weight).map(|(&x, &w)| w * (x * t).cos()).sum();
        s + self.tail_oscillating(t)
    }

    fn assemble(&self, t: f64, c: Option<f64>) -> f64 {
        let decay = (-self.g2 * t).exp();
        let env = (-self.gamma * t).exp();
        let osc = if env < SETTLED_ENVELOPE { 0.0 } else { c.unwrap_or_else(|| self.oscillating(t)) };
        self.p0 * decay + (1.0 + decay) * self.steady - 2.0 * env * osc
    }

    pub fn occupation(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) || t > self.t_max * (1.0 + 1e-12) {
            return Err(Error::InvalidInput(format!("time {t} outside [0, {}]", self.t_max)));
        }
        if t == 0.0 {
            return Ok(self.p0);
        }
        check_probability(self.assemble(t, None))
    }

    /// Occupations at `k·dt` for `k = 0..n`, advancing the `e^{iνt}` phasors
    /// by multiplication instead of re-evaluating cosines.
    pub fn occupation_grid(&self, dt: f64, n: usize) -> Result<Vec<f64>> {
        if dt * n.saturating_sub(1) as f64 > self.t_max * (1.0 + 1e-12) {
            return Err(Error::InvalidInput("grid exceeds the kernel horizon".into()));
        }
        let step: Vec<Complex64> = self.nu.iter().map(|&x| Complex64::from_polar(1.0, x * dt)).collect();
        let mut phase: Vec<Complex64> = vec![Complex64::new(1.0, 0.0); self.nu.len()];
        let mut out = Vec::with_capacity(n);
        out.push(self.p0);
        for k in 1..n {
            let t = k as f64 * dt;
            if (-self.gamma * t).exp() < SETTLED_ENVELOPE {
                out.push(check_probability(self.assemble(t, Some(0.0)))?);
                continue;
            }
            if k % 64 == 0 {
                for (ph, &x) in phase.iter_mut().zip(&self.nu) {
                    *ph = Complex64::from_polar(1.0, x * t);
                }
            } else {
                for (ph, s) in phase.iter_mut().zip(&step) {
                    *ph *= s;
                }
            }
            let c = phase.iter().zip(&self.weight).map(|(ph, &w)| w * ph.re).sum::<f64>() + self.tail_oscillating(t);
            out.push(check_probability(self.assemble(t, Some(c)))?);
        }
        Ok(out)
    }
}

/// `w(s)` for the decaying coupling at final time `t`:
/// `√a (s + b)^{(a−1)/2} / (t + b)^{a/2}`.
fn decaying_weight(a: f64, b: f64, s: f64, t: f64) -> f64 {
    a.sqrt() * (s + b).powf(0.5 * (a - 1.0)) / (t + b).powf(0.5 * a)
}

/// Breakpoints on `[0, t]` with panels at most `h_max` wide and at most half
/// the distance to the coupling singularity at `−b`.
fn graded_breaks(t: f64, b: f64, h_max: f64) -> Vec<f64> {
    let mut out = vec![0.0];
    let mut s = 0.0;
    while s < t {
        let h = h_max.min(0.5 * (s + b));
        s = (s + h).min(t);
        if t - s < 1e-3 * h {
            s = t;
        }
        out.push(s);
    }
    out
}

/// Generic evaluation of the occupation integral with numerical inner
/// s-quadrature. Used for decaying couplings.
fn occupation_general(cfg: &RlmConfig, t: f64, factor: usize) -> f64 {
    let (a, b) = match cfg.schedule.kind {
        CouplingKind::Decaying { a, b } => (a, b),
        CouplingKind::Constant { .. } => unreachable!("constant couplings use the closed-form kernel"),
    };
    let rule = GaussLegendre::new(cfg.quadrature.nodes);
    let l = cfg.omega_half_width();
    let h_nu = (1.0 / cfg.beta).min(1.0 / t) / factor as f64;
    let h_s = (PI / l) / factor as f64 * cfg.quadrature.nodes as f64 / 10.0;
    let s_breaks: Vec<f64> = refine(&graded_breaks(t, b, h_s), factor);
    let mut s_nodes = Vec::new();
    let mut s_weights = Vec::new();
    for w in s_breaks.windows(2) {
        for (s, ws) in rule.mapped(w[0], w[1]) {
            s_nodes.push(t - s);
            s_weights.push(ws * decaying_weight(a, b, s, t));
        }
    }
    let panels = ((2.0 * l) / h_nu).ceil() as usize;
    let nu_breaks: Vec<f64> = (0..=panels).map(|k| -l + 2.0 * l * k as f64 / panels as f64).collect();
    let mut bulk = 0.0;
    for w in nu_breaks.windows(2) {
        for (x, wx) in rule.mapped(w[0], w[1]) {
            let f = fermi_dirac(cfg.energy - x, cfg.beta);
            if f < 1e-300 {
                continue;
            }
            let mut i = Complex64::new(0.0, 0.0);
            for (&u, &ws) in s_nodes.iter().zip(&s_weights) {
                i += Complex64::from_polar(ws, -x * u);
            }
            bulk += wx * f * i.norm_sqr();
        }
    }
    // Repeated integration by parts gives |I(ν)|² = (w_t² + w_0² − 2w_t w_0 cos νt)/ν²
    // − 2(w_t w_0' − w_0 w_t') sin(νt)/ν³ plus a non-oscillating ν⁻⁴ term with coefficient w_t'² + w_0'² − 2(w_t w_t'' + w_0 w_0'').
    let c = 0.5 * (a - 1.0);
    let wt = decaying_weight(a, b, t, t);
    let w0 = decaying_weight(a, b, 0.0, t);
    let (d1t, d1z) = (c * wt / (t + b), c * w0 / b);
    let (d2t, d2z) = (c * (c - 1.0) * wt / (t + b).powi(2), c * (c - 1.0) * w0 / (b * b));
    let c4 = d1t * d1t + d1z * d1z - 2.0 * (wt * d2t + w0 * d2z);
    let tail = (wt * wt + w0 * w0) / l - 2.0 * wt * w0 * tail_cos2(l, t)
        - 2.0 * (wt * d1z - w0 * d1t) * tail_sin3(l, t)
        + c4 / (3.0 * l.powi(3));
    let memory = cfg.p0 * (b / (t + b)).powf(a);
    memory + (bulk + tail) / (2.0 * PI)
}

/// Dot occupation at time `t` under the configured coupling.
pub fn rlm_occupation(cfg: &RlmConfig, t: f64) -> Result<f64> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidInput(format!("time {t} must be non-negative")));
    }
    let t = cfg.schedule.effective_time(t);
    if t == 0.0 {
        return Ok(cfg.p0);
    }
    match cfg.schedule.kind {
        CouplingKind::Constant { .. } => ConstantKernel::new(cfg, t)?.occupation(t),
        CouplingKind::Decaying { .. } => {
            let coarse = occupation_general(cfg, t, 1);
            let fine = occupation_general(cfg, t, 2);
            if (coarse - fine).abs() > cfg.quadrature.tol {
                return Err(Error::QuadratureError(format!("occupation changed by {:e} on refinement", (coarse - fine).abs())));
            }
            check_probability(fine)
        }
    }
}

/// `sin(Ex)/sinh(πx/β)`, with the removable value `Eβ/π` near `x = 0`.
fn memory_kernel(energy: f64, beta: f64, x: f64) -> f64 {
    if x.abs() < 1e-10 {
        return energy * beta / PI;
    }
    let y = PI * x.abs() / beta;
    // sinh written with e^{−y} so that long separations underflow to zero
    let e = (-y).exp();
    let sinh = 0.5 * (1.0 - e * e) / e;
    if !sinh.is_finite() {
        return 0.0;
    }
    (energy * x).sin() / (sinh * x.signum())
}

fn decaying_double_integral(energy: f64, beta: f64, a: f64, b: f64, t: f64, nodes: usize, factor: usize) -> f64 {
    let rule = GaussLegendre::new(nodes);
    let mut h = 0.5 * beta;
    if energy != 0.0 {
        h = h.min(1.0 / energy.abs());
    }
    let breaks = refine(&graded_breaks(t, b, h), factor);
    let mut s = Vec::new();
    let mut w = Vec::new();
    for p in breaks.windows(2) {
        for (x, wx) in rule.mapped(p[0], p[1]) {
            s.push(x);
            w.push(wx * (x + b).powf(0.5 * (a - 1.0)));
        }
    }
    let n = s.len();
    let mut total = 0.0;
    for i in 0..n {
        total += w[i] * w[i] * memory_kernel(energy, beta, 0.0);
        let mut row = 0.0;
        for j in (i + 1)..n {
            row += w[j] * memory_kernel(energy, beta, s[i] - s[j]);
        }
        total += 2.0 * w[i] * row;
    }
    total
}

/// Closed-form reduction for `g(t) = √(a/(t+b))`:
/// `p = ½ + (p₀ − ½)(b/(t+b))^a − (a / (2β (t+b)^a)) ∫∫ u(s)u(s′) K(s − s′)`
/// with `u(s) = (s+b)^{(a−1)/2}` and `K(x) = sin(Ex)/sinh(πx/β)`.
pub fn rlm_occupation_decaying(energy: f64, beta: f64, a: f64, b: f64, p0: f64, t: f64) -> Result<f64> {
    RlmConfig::new(energy, beta, p0, CouplingSchedule::decaying(a, b)?)?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidInput(format!("time {t} must be non-negative")));
    }
    let memory = 0.5 + (p0 - 0.5) * (b / (t + b)).powf(a);
    if t == 0.0 || energy == 0.0 {
        return Ok(memory);
    }
    let prefactor = a / (2.0 * beta * (t + b).powf(a));
    let tol = QuadratureSettings::default().tol;
    let mut prev = prefactor * decaying_double_integral(energy, beta, a, b, t, 10, 1);
    for k in 1..7 {
        let next = prefactor * decaying_double_integral(energy, beta, a, b, t, 10, 1 << k);
        if (next - prev).abs() <= tol {
            return check_probability(memory - next);
        }
        prev = next;
    }
    Err(Error::QuadratureError("decaying-coupling double integral did not stabilize".into()))
}

/// Bures angle between `diag(1−p, p)` and the local Gibbs state `diag(1−q, q)`.
pub fn bures_to_thermal_occupation(p: f64, q: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    let q = q.clamp(0.0, 1.0);
    ((p * q).sqrt() + ((1.0 - p) * (1.0 - q)).sqrt()).clamp(0.0, 1.0).acos()
}

/// Distance of the dot state at time `t` from `ω(β, E a†a)`.
pub fn rlm_bures_to_thermal(cfg: &RlmConfig, t: f64) -> Result<f64> {
    Ok(bures_to_thermal_occupation(occupation(cfg, t)?, cfg.thermal_occupation()))
}

/// Occupation by the fastest available representation: the constant kernel
/// or the decaying closed form.
fn occupation(cfg: &RlmConfig, t: f64) -> Result<f64> {
    match cfg.schedule.kind {
        CouplingKind::Constant { .. } => rlm_occupation(cfg, t),
        CouplingKind::Decaying { a, b } => {
            let t = cfg.schedule.effective_time(t);
            rlm_occupation_decaying(cfg.energy, cfg.beta, a, b, cfg.p0, t)
        }
    }
}

/// Occupations and distances on an ascending time grid.
pub fn trajectory(cfg: &RlmConfig, times: &[f64]) -> Result<Trajectory> {
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidInput("times must be ascending".into()));
    }
    let p: Vec<f64> = match cfg.schedule.kind {
        CouplingKind::Constant { .. } => {
            let horizon = times.iter().map(|&t| cfg.schedule.effective_time(t)).fold(0.0, f64::max);
            let kernel = ConstantKernel::new(cfg, horizon)?;
            times.iter().map(|&t| kernel.occupation(cfg.schedule.effective_time(t))).collect::<Result<_>>()?
        }
        CouplingKind::Decaying { .. } => times.iter().map(|&t| occupation(cfg, t)).collect::<Result<_>>()?,
    };
    let q = cfg.thermal_occupation();
    let d_to_thermal = p.iter().map(|&x| bures_to_thermal_occupation(x, q)).collect();
    Ok(Trajectory { times: times.to_vec(), p, d_to_thermal })
}

/// Scan step and horizon of [`thermalization_time`], in units of `β`.
pub const SCAN_STEP: f64 = 0.01;
pub const SCAN_HORIZON: f64 = 50.0;

/// First time at which the dot is within `ε` of its local Gibbs state.
pub fn thermalization_time(cfg: &RlmConfig, eps: f64) -> Result<ThermalizationOutcome> {
    Ok(thermalization_times(cfg, &[eps])?[0])
}

/// [`thermalization_time`] for several tolerances sharing one trajectory.
///
/// The trajectory is scanned with step `β/100` up to `50β`; each first
/// crossing is then located by bisection.
pub fn thermalization_times(cfg: &RlmConfig, eps: &[f64]) -> Result<Vec<ThermalizationOutcome>> {
    for &e in eps {
        if !(e > 0.0 && e < FRAC_PI_2) {
            return Err(Error::InvalidInput(format!("tolerance {e} outside (0, π/2)")));
        }
    }
    let q = cfg.thermal_occupation();
    let dist = |p: f64| bures_to_thermal_occupation(p, q);
    let dt = SCAN_STEP * cfg.beta;
    let n = (SCAN_HORIZON / SCAN_STEP).round() as usize + 1;
    let horizon = dt * (n - 1) as f64;
    let mut out = vec![ThermalizationOutcome::Unreachable; eps.len()];
    let d0 = dist(cfg.p0);
    let mut open: Vec<usize> = Vec::new();
    for (k, &e) in eps.iter().enumerate() {
        if d0 <= e {
            out[k] = ThermalizationOutcome::Reached(0.0);
        } else {
            open.push(k);
        }
    }
    if open.is_empty() {
        return Ok(out);
    }

    let kernel = match cfg.schedule.kind {
        CouplingKind::Constant { .. } => Some(ConstantKernel::new(cfg, cfg.schedule.effective_time(horizon))?),
        CouplingKind::Decaying { .. } => None,
    };
    let eval = |t: f64| -> Result<f64> {
        let te = cfg.schedule.effective_time(t);
        match &kernel {
            Some(k) => k.occupation(te),
            None => occupation(cfg, te),
        }
    };
    let grid: Vec<f64> = match &kernel {
        Some(k) if cfg.schedule.cutoff.is_none() => k.occupation_grid(dt, n)?,
        _ => {
            let mut v = Vec::with_capacity(n);
            for i in 0..n {
                v.push(eval(i as f64 * dt)?);
                let d = dist(*v.last().expect("pushed"));
                if open.iter().all(|&k| d <= eps[k]) {
                    break;
                }
            }
            v
        }
    };
    for k in open {
        let e = eps[k];
        if let Some(i) = grid.iter().position(|&p| dist(p) <= e) {
            let (mut lo, mut hi) = ((i - 1) as f64 * dt, i as f64 * dt);
            for _ in 0..60 {
                if hi - lo <= 1e-12 * cfg.beta {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                if dist(eval(mid)?) <= e {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            out[k] = ThermalizationOutcome::Reached(hi);
        }
    }
    Ok(out)
}

/// Per-time margins `max(D₁, D₂) − RHS(t)` for two dots with energies `E1`,
/// `E2` driven by the same coupling from the same initial occupation.
#[derive(Clone, Debug, PartialEq)]
pub struct ForbiddenRegionReport {
    pub times: Vec<f64>,
    pub first: Trajectory,
    pub second: Trajectory,
    pub rhs: Vec<f64>,
    pub margins: Vec<f64>,
}

impl ForbiddenRegionReport {
    pub fn min_margin(&self) -> f64 {
        self.margins.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub fn forbidden_region_check(cfg: &RlmConfig, e1: f64, e2: f64, times: &[f64]) -> Result<ForbiddenRegionReport> {
    if e1 == e2 {
        return Err(Error::DegeneratePair);
    }
    let h1 = HermitianOperator::from_real_diagonal(&[0.0, e1]);
    let h2 = HermitianOperator::from_real_diagonal(&[0.0, e2]);
    let first = trajectory(&cfg.with_energy(e1), times)?;
    let second = trajectory(&cfg.with_energy(e2), times)?;
    let mut rhs = Vec::with_capacity(times.len());
    let mut margins = Vec::with_capacity(times.len());
    for (k, &t) in times.iter().enumerate() {
        let r = speed_limit_rhs(t, &h1, &h2, cfg.beta)?;
        let m = first.d_to_thermal[k].max(second.d_to_thermal[k]) - r;
        if m < -FORBIDDEN_REGION_TOL {
            return Err(Error::BoundViolation { time: t, margin: m });
        }
        rhs.push(r);
        margins.push(m);
    }
    Ok(ForbiddenRegionReport { times: times.to_vec(), first, second, rhs, margins })
}
