use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::operator::{spectral_seminorm, CMatrix, HermitianOperator};
use super::state::DensityMatrix;
use crate::error::{Error, Result};

/// Largest `‖H‖·Δt` per step used by [`default_steps`].
pub const DEFAULT_STEP_PHASE: f64 = 0.05;

type Family = Arc<dyn Fn(f64) -> HermitianOperator + Send + Sync>;

#[derive(Clone, Debug)]
pub struct Segment {
    pub start: f64,
    pub end: f64,
    pub hamiltonian: HermitianOperator,
}

/// Time-dependent Hamiltonian `t ↦ H(t)` on a bounded interval.
#[derive(Clone)]
pub enum Schedule {
    Piecewise(Vec<Segment>),
    /// Smooth family on `[start, end]`; `norm_bound` caps `‖H(t)‖` for step selection.
    Parametric { start: f64, end: f64, norm_bound: f64, dim: usize, family: Family },
}

impl fmt::Debug for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Schedule::Piecewise(s) => f.debug_tuple("Piecewise").field(s).finish(),
            Schedule::Parametric { start, end, norm_bound, dim, .. } => f
                .debug_struct("Parametric")
                .field("start", start)
                .field("end", end)
                .field("norm_bound", norm_bound)
                .field("dim", dim)
                .finish_non_exhaustive(),
        }
    }
}

impl Schedule {
    pub fn piecewise(segments: Vec<Segment>) -> Result<Self> {
        let first = segments.first().ok_or_else(|| Error::ScheduleError("no segments".into()))?;
        let d = first.hamiltonian.dim();
        for (k, s) in segments.iter().enumerate() {
            if !(s.end > s.start) || !s.start.is_finite() || !s.end.is_finite() {
                return Err(Error::ScheduleError(format!("segment {k} has empty interval [{}, {}]", s.start, s.end)));
            }
            if s.hamiltonian.dim() != d {
                return Err(Error::DimError(format!("segment {k} has dim {} instead of {d}", s.hamiltonian.dim())));
            }
            if k > 0 && (s.start - segments[k - 1].end).abs() > 1e-12 * (1.0 + s.start.abs()) {
                return Err(Error::ScheduleError(format!("segment {k} starts at {} but previous ends at {}", s.start, segments[k - 1].end)));
            }
        }
        Ok(Schedule::Piecewise(segments))
    }

    pub fn constant(h: HermitianOperator, start: f64, end: f64) -> Result<Self> {
        Self::piecewise(vec![Segment { start, end, hamiltonian: h }])
    }

    pub fn parametric(
        start: f64,
        end: f64,
        norm_bound: f64,
        dim: usize,
        family: impl Fn(f64) -> HermitianOperator + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(end > start) {
            return Err(Error::ScheduleError(format!("empty interval [{start}, {end}]")));
        }
        Ok(Schedule::Parametric { start, end, norm_bound, dim, family: Arc::new(family) })
    }

    pub fn start(&self) -> f64 {
        match self {
            Schedule::Piecewise(s) => s[0].start,
            Schedule::Parametric { start, .. } => *start,
        }
    }

    pub fn end(&self) -> f64 {
        match self {
            Schedule::Piecewise(s) => s[s.len() - 1].end,
            Schedule::Parametric { end, .. } => *end,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Schedule::Piecewise(s) => s[0].hamiltonian.dim(),
            Schedule::Parametric { dim, .. } => *dim,
        }
    }

    pub fn hamiltonian_at(&self, t: f64) -> Result<HermitianOperator> {
        self.check_time(t)?;
        match self {
            Schedule::Piecewise(segs) => {
                let seg = segs.iter().find(|s| t < s.end).unwrap_or(&segs[segs.len() - 1]);
                Ok(seg.hamiltonian.clone())
            }
            Schedule::Parametric { family, dim, .. } => {
                let h = family(t);
                if h.dim() != *dim {
                    return Err(Error::DimError(format!("family returned dim {} instead of {dim}", h.dim())));
                }
                Ok(h)
            }
        }
    }

    /// `H(t) + θ·κ` on every segment.
    pub fn perturbed(&self, kappa: &HermitianOperator, theta: f64) -> Result<Self> {
        if kappa.dim() != self.dim() {
            return Err(Error::DimError(format!("perturbation dim {} vs schedule dim {}", kappa.dim(), self.dim())));
        }
        match self {
            Schedule::Piecewise(segs) => {
                let segs = segs
                    .iter()
                    .map(|s| Ok(Segment { start: s.start, end: s.end, hamiltonian: s.hamiltonian.add_scaled(kappa, theta)? }))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Schedule::Piecewise(segs))
            }
            Schedule::Parametric { start, end, norm_bound, dim, family } => {
                let f = family.clone();
                let k = kappa.clone();
                let extra = theta.abs() * spectral_seminorm(kappa);
                Ok(Schedule::Parametric {
                    start: *start,
                    end: *end,
                    norm_bound: norm_bound + extra,
                    dim: *dim,
                    family: Arc::new(move |t| f(t).add_scaled(&k, theta).expect("dimension checked")),
                })
            }
        }
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if !t.is_finite() || t < self.start() || t > self.end() {
            return Err(Error::ScheduleError(format!("time {t} outside [{}, {}]", self.start(), self.end())));
        }
        Ok(())
    }

    fn max_norm(&self) -> f64 {
        match self {
            Schedule::Piecewise(segs) => segs.iter().map(|s| spectral_seminorm(&s.hamiltonian)).fold(0.0, f64::max),
            Schedule::Parametric { norm_bound, .. } => *norm_bound,
        }
    }
}

/// Step count keeping `‖H‖·Δt ≤ 0.05` up to time `t`.
pub fn default_steps(sched: &Schedule, t: f64) -> usize {
    let span = (t - sched.start()).max(0.0);
    ((sched.max_norm() * span / DEFAULT_STEP_PHASE).ceil() as usize).max(1)
}

fn step_unitary(h: &HermitianOperator, dt: f64) -> CMatrix {
    h.eig().map_complex(|e| Complex64::from_polar(1.0, -e * dt))
}

/// Midpoint-rule approximation of the time-ordered `U(t)` from the schedule start.
pub fn unitary(sched: &Schedule, t: f64, steps: usize) -> Result<CMatrix> {
    sched.check_time(t)?;
    if steps == 0 {
        return Err(Error::InvalidInput("steps must be positive".into()));
    }
    let d = sched.dim();
    let mut u = CMatrix::identity(d, d);
    let t0 = sched.start();
    if t == t0 {
        return Ok(u);
    }
    match sched {
        Schedule::Piecewise(segs) => {
            // Steps are shared out over the covered part of each segment so
            // that no step straddles a jump.
            let total = t - t0;
            for s in segs {
                if s.start >= t {
                    break;
                }
                let len = s.end.min(t) - s.start;
                let n = ((steps as f64 * len / total).round() as usize).max(1);
                let step = step_unitary(&s.hamiltonian, len / n as f64);
                for _ in 0..n {
                    u = &step * u;
                }
            }
        }
        Schedule::Parametric { .. } => {
            let dt = (t - t0) / steps as f64;
            for k in 0..steps {
                let h = sched.hamiltonian_at(t0 + (k as f64 + 0.5) * dt)?;
                u = step_unitary(&h, dt) * u;
            }
        }
    }
    Ok(u)
}

/// `U(t) ρ₀ U(t)†`.
pub fn propagate(rho0: &DensityMatrix, sched: &Schedule, t: f64, steps: usize) -> Result<DensityMatrix> {
    if rho0.dim() != sched.dim() {
        return Err(Error::DimError(format!("state dim {} vs schedule dim {}", rho0.dim(), sched.dim())));
    }
    rho0.conjugate_by(&unitary(sched, t, steps)?)
}
