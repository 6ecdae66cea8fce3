//! Fermi–Dirac occupation, complex digamma and the sine integral.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

/// `1 / (1 + e^{βΩ})`, evaluated without overflow for large `|βΩ|`.
pub fn fermi_dirac(omega: f64, beta: f64) -> f64 {
    let x = beta * omega;
    if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// Shift target for the upward recurrence before the asymptotic series.
const ASYMPTOTIC_RE: f64 = 10.0;

/// `B_{2k} / (2k)` for k = 1..7.
const ASYMPTOTIC_COEFFS: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
];

/// Complex digamma `Ψ(z)`.
///
/// Reflection for `Re z < 0`, upward recurrence until `Re z ≥ 10`, then the
/// Stirling-type asymptotic series.
pub fn digamma_complex(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::InvalidInput(format!("non-finite digamma argument {z}")));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::PoleError(z.re));
    }
    if z.re < 0.0 {
        // Ψ(z) = Ψ(1 − z) − π cot(πz)
        return Ok(digamma_complex(Complex64::new(1.0, 0.0) - z)? - PI * cot(PI * z));
    }
    let mut w = z;
    let mut acc = Complex64::new(0.0, 0.0);
    while w.re < ASYMPTOTIC_RE {
        acc -= w.inv();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv2;
    for c in ASYMPTOTIC_COEFFS {
        series += pow * c;
        pow *= inv2;
    }
    Ok(acc + w.ln() - 0.5 * inv - series)
}

/// `cot w` written with the decaying exponential so that large `|Im w|`
/// does not overflow.
fn cot(w: Complex64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    if w.im >= 0.0 {
        let e = (2.0 * i * w).exp();
        i * (e + 1.0) / (e - 1.0)
    } else {
        let e = (-2.0 * i * w).exp();
        i * (1.0 + e) / (1.0 - e)
    }
}

/// Above this argument `Si` uses the auxiliary-function asymptotic series.
const SI_ASYMPTOTIC_FROM: f64 = 40.0;

/// Sine integral `Si(x) = ∫₀ˣ sin(t)/t dt`.
pub fn sine_integral(x: f64) -> f64 {
    if x < 0.0 {
        return -sine_integral(-x);
    }
    if x == 0.0 {
        return 0.0;
    }
    if x <= SI_ASYMPTOTIC_FROM {
        let rule = GaussLegendre::new(12);
        let panels = x.ceil() as usize;
        let sinc = |t: f64| if t == 0.0 { 1.0 } else { t.sin() / t };
        return (0..panels)
            .map(|k| {
                let a = x * k as f64 / panels as f64;
                let b = x * (k + 1) as f64 / panels as f64;
                rule.integrate(a, b, sinc)
            })
            .sum();
    }
    let (f, g) = si_auxiliary(x);
    FRAC_PI_2 - f * x.cos() - g * x.sin()
}

/// Asymptotic `f(x) ~ (1/x) Σ (−1)^k (2k)!/x^{2k}`, `g(x) ~ (1/x²) Σ (−1)^k (2k+1)!/x^{2k}`,
/// truncated at the smallest term.
fn si_auxiliary(x: f64) -> (f64, f64) {
    let inv2 = 1.0 / (x * x);
    let (mut f, mut g) = (0.0, 0.0);
    let mut tf = 1.0;
    let mut tg = 1.0;
    for k in 0..60 {
        f += tf;
        g += tg;
        let kf = (2 * k + 1) as f64 * (2 * k + 2) as f64;
        let kg = (2 * k + 2) as f64 * (2 * k + 3) as f64;
        let nf = -tf * kf * inv2;
        let ng = -tg * kg * inv2;
        if nf.abs() > tf.abs() || ng.abs() > tg.abs() || nf.abs() < 1e-18 * f.abs() {
            break;
        }
        tf = nf;
        tg = ng;
    }
    (f / x, g * inv2)
}
