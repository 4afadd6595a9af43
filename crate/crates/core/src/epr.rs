//! EPR-like uncertainty Δ built from the operators
//! `û = |a| x̂_A + x̂_B / a`, `v̂ = |a| p̂_A − p̂_B / a`, normalized by the
//! separable bound `a² + 1/a²` and clamped at 1.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::solver::{CriticalParams, SqueezingSolution};
use crate::symplectic::StandardFormParams;

/// Slack allowed when clamping Δ into `[b, 1]`.
pub const TOL_CLAMP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EprQuantities {
    pub a0: f64,
    pub b0: f64,
    pub delta0: f64,
    pub delta0_prime: f64,
    pub separable: bool,
}

/// `2 / (a² + 1/a²)`, the weight of the correlation term.
pub fn correlation_weight(a: f64) -> f64 {
    let a2 = a * a;
    2.0 / (a2 + 1.0 / a2)
}

/// Floor of Δ for a given `a`: `|a² − 1/a²| / (a² + 1/a²)`.
pub fn uncertainty_floor(a: f64) -> f64 {
    let a2 = a * a;
    (a2 - 1.0 / a2).abs() / (a2 + 1.0 / a2)
}

fn raw_delta(p: &StandardFormParams, sol: &SqueezingSolution, a: f64) -> f64 {
    let a2 = a * a;
    let s = (sol.r1 * sol.r2).sqrt();
    let num = a2 * p.n * (sol.r1 + 1.0 / sol.r1) / 2.0
        + p.m * (sol.r2 + 1.0 / sol.r2) / (2.0 * a2)
        + a.signum() * (s * p.kx - p.kp / s);
    num / (a2 + 1.0 / a2)
}

/// Δ of a zero-mean Gaussian state in locally squeezed standard form, for
/// an arbitrary nonzero `a`.
pub fn delta_general(p: &StandardFormParams, sol: &SqueezingSolution, a: f64) -> Result<f64> {
    if a == 0.0 || !a.is_finite() {
        return Err(Error::DomainError(format!("weight parameter a = {a} must be finite and nonzero")));
    }
    Ok(raw_delta(p, sol, a).min(1.0))
}

/// Δ₀ and Δ′₀ at the critical parameter `a = −a₀`.
///
/// Values within [`TOL_CLAMP`] below `b₀` are raised to `b₀`; anything lower
/// is not a physical state. The separable flag is set when the unclamped
/// ratio reaches 1.
pub fn delta0(p: &StandardFormParams, sol: &SqueezingSolution, crit: &CriticalParams) -> Result<EprQuantities> {
    let raw = raw_delta(p, sol, -crit.a0);
    if !raw.is_finite() {
        return Err(Error::InvalidState(format!("Δ₀ evaluated to {raw}")));
    }
    if raw < crit.b0 - TOL_CLAMP {
        return Err(Error::InvalidState(format!(
            "Δ₀ = {raw} lies below its floor b₀ = {}",
            crit.b0
        )));
    }
    let separable = raw >= 1.0;
    let delta0 = raw.clamp(crit.b0, 1.0);
    let delta0_prime = delta_prime(delta0, crit.b0)?;
    Ok(EprQuantities {
        a0: crit.a0,
        b0: crit.b0,
        delta0,
        delta0_prime,
        separable,
    })
}

/// Δ(ψ_r) of the two-mode squeezed vacuum for `a < 0`:
/// `min{1, cosh 2r − (2/(a² + 1/a²)) sinh 2r}`.
pub fn delta_pure_squeezed(r: f64, a: f64) -> Result<f64> {
    if !(a < 0.0) {
        return Err(Error::DomainError(format!("a = {a} must be negative")));
    }
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::DomainError(format!("squeezing r = {r} must be finite and ≥ 0")));
    }
    let s = correlation_weight(a);
    // cosh 2r − s sinh 2r = ((1 − s) e^{2r} + (1 + s) e^{−2r}) / 2
    let value = 0.5 * ((1.0 - s) * (2.0 * r).exp() + (1.0 + s) * (-2.0 * r).exp());
    Ok(value.min(1.0))
}

/// `Δ′ = (Δ + √(Δ² − b²)) / (1 + √(1 − b²))`, the smaller-squeezing
/// solution of `Δ(ψ_r) = Δ` expressed as `e^{−2r}`.
pub fn delta_prime(delta: f64, b: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&b) {
        return Err(Error::DomainError(format!("floor b = {b} must lie in [0, 1)")));
    }
    if !(delta >= b - TOL_CLAMP) || !(delta <= 1.0 + TOL_CLAMP) {
        return Err(Error::DomainError(format!(
            "Δ = {delta} outside [b, 1] with b = {b}"
        )));
    }
    let delta = delta.clamp(b, 1.0);
    let radicand = (delta - b) * (delta + b);
    let num = delta + radicand.max(0.0).sqrt();
    let den = 1.0 + ((1.0 - b) * (1.0 + b)).sqrt();
    Ok(num / den)
}

/// `r = −ln(Δ′)/2`.
pub fn r_from_delta_prime(delta_prime: f64) -> Result<f64> {
    if !(delta_prime > 0.0) || delta_prime > 1.0 + 1e-12 {
        return Err(Error::DomainError(format!(
            "Δ′ = {delta_prime} must lie in (0, 1]"
        )));
    }
    Ok((-0.5 * delta_prime.ln()).max(0.0))
}
