//! Entanglement of formation (in bits) of two-mode Gaussian states,
//! `E_F = f(Δ′₀)`, with closed forms for symmetric and squeezed-thermal
//! states and the amplifier family with gain κ and thermal occupation n̄.

use std::f64::consts::LN_2;

use serde::Serialize;

use crate::epr::{delta0, EprQuantities};
use crate::error::{Error, Result};
use crate::numerics::xlog2x;
use crate::solver::{critical_params, solve_squeezings, SolveBranch, SqueezingSolution};
use crate::symplectic::StandardFormParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    General,
    Symmetric,
    SqueezedThermal,
    Pure,
    Separable,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::General => "general",
            Method::Symmetric => "symmetric",
            Method::SqueezedThermal => "squeezed_thermal",
            Method::Pure => "pure",
            Method::Separable => "separable",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EofReport {
    pub params: StandardFormParams,
    pub epr: EprQuantities,
    pub eof: f64,
    pub method: Method,
    /// Squeezing factors when the pipeline solved for them.
    pub squeezing: Option<SqueezingSolution>,
}

/// `f(Δ) = c₊ log₂ c₊ − c₋ log₂ c₋` with `c± = (Δ^{−1/2} ± Δ^{1/2})²/4`.
///
/// Evaluated as `c₋ = (1 − Δ)²/(4Δ)`, `c₊ = 1 + c₋` so weakly entangled
/// states (Δ → 1) keep full relative precision.
pub fn f_aux(delta: f64) -> Result<f64> {
    if !(delta > 0.0) || delta > 1.0 + 1e-12 {
        return Err(Error::DomainError(format!("f needs Δ in (0, 1], got {delta}")));
    }
    let delta = delta.min(1.0);
    let c_minus = (1.0 - delta) * (1.0 - delta) / (4.0 * delta);
    if c_minus <= 1e-300 {
        return Ok(0.0);
    }
    let c_plus = 1.0 + c_minus;
    Ok(c_plus * c_minus.ln_1p() / LN_2 - c_minus * c_minus.log2())
}

/// Entropy of entanglement of `|ψ_r⟩`: `cosh²r log₂ cosh²r − sinh²r log₂ sinh²r`.
pub fn squeezed_vacuum_entropy(r: f64) -> f64 {
    let c2 = r.cosh().powi(2);
    let s2 = r.sinh().powi(2);
    xlog2x(c2) - xlog2x(s2)
}

/// `g(κ) = κ log₂ κ − (κ − 1) log₂(κ − 1)`.
pub fn g_kappa(kappa: f64) -> f64 {
    xlog2x(kappa) - xlog2x(kappa - 1.0)
}

fn trivial_epr(delta: f64, separable: bool) -> EprQuantities {
    EprQuantities {
        a0: 1.0,
        b0: 0.0,
        delta0: delta,
        delta0_prime: delta,
        separable,
    }
}

fn separable_report(params: StandardFormParams, epr: EprQuantities, squeezing: Option<SqueezingSolution>) -> EofReport {
    EofReport {
        params,
        epr,
        eof: 0.0,
        method: Method::Separable,
        squeezing,
    }
}

/// Full pipeline on canonical, bona fide parameters.
///
/// Product states and states with `k_p > 0` (positive partial transpose)
/// return 0. Pure states use `Δ′ = √((n − k_x)(m + k_p))`
/// directly (a₀ is 0/0 there). Everything else solves the squeezing
/// factors, evaluates Δ₀ and Δ′₀ at `a = −a₀`, and returns `f(Δ′₀)`, or 0
/// when `Δ₀ ≥ 1`.
pub fn eof(params: &StandardFormParams) -> Result<EofReport> {
    let validity = params.validate()?;
    if params.is_product() || params.has_positive_partial_transpose() {
        return Ok(separable_report(*params, trivial_epr(1.0, true), None));
    }
    if validity.is_pure {
        let d = ((params.n - params.kx) * (params.m + params.kp)).max(0.0).sqrt();
        let d = d.min(1.0);
        return Ok(EofReport {
            params: *params,
            epr: trivial_epr(d, d >= 1.0),
            eof: f_aux(d)?,
            method: Method::Pure,
            squeezing: None,
        });
    }

    let sol = solve_squeezings(params)?;
    let crit = critical_params(params, &sol)?;
    let epr = delta0(params, &sol, &crit)?;
    if epr.separable {
        return Ok(separable_report(*params, epr, Some(sol)));
    }
    let method = match sol.branch {
        SolveBranch::Symmetric => Method::Symmetric,
        SolveBranch::SqueezedThermal => Method::SqueezedThermal,
        SolveBranch::General => Method::General,
    };
    Ok(EofReport {
        params: *params,
        epr,
        eof: f_aux(epr.delta0_prime)?,
        method,
        squeezing: Some(sol),
    })
}

/// Symmetric states: `E_F = f(√((n − k_x)(n + k_p)))`, zero once the
/// argument reaches 1.
pub fn symmetric_eof(n: f64, kx: f64, kp: f64) -> Result<EofReport> {
    let params = StandardFormParams::new(n, n, kx, kp);
    if params.has_positive_partial_transpose() {
        return Ok(separable_report(params, trivial_epr(1.0, true), None));
    }
    let arg = (n - kx) * (n + kp);
    if !(arg > 0.0) {
        return Err(Error::DomainError(format!(
            "(n − k_x)(n + k_p) = {arg} must be positive"
        )));
    }
    let d = arg.sqrt();
    if d >= 1.0 {
        return Ok(separable_report(params, trivial_epr(1.0, true), None));
    }
    Ok(EofReport {
        params,
        epr: trivial_epr(d, false),
        eof: f_aux(d)?,
        method: Method::Symmetric,
        squeezing: None,
    })
}

/// Squeezed thermal states (`k_p = −k_x`, no local squeezing), with
/// `ñ = n − 1`, `m̃ = m − 1`:
///
/// ```text
/// b₀  = (n − m)/(n + m − 2)
/// Δ₀  = (n m̃ + m ñ − 2 k_x √(ñ m̃)) / (ñ + m̃)
/// Δ′₀ = [(√(n m̃ − k_x√(ñm̃)) + √(m ñ − k_x√(ñm̃))) / (√ñ + √m̃)]²
/// ```
///
/// Modes are swapped if `n < m`; the EOF is symmetric under the exchange.
pub fn squeezed_thermal_eof(n: f64, m: f64, kx: f64) -> Result<EofReport> {
    let (n, m) = if n >= m { (n, m) } else { (m, n) };
    let params = StandardFormParams::new(n, m, kx, -kx);
    if !(m >= 1.0 && kx >= 0.0) || !params.is_finite() {
        return Err(Error::DomainError(format!(
            "squeezed thermal state needs n ≥ m ≥ 1 and k_x ≥ 0, got {params:?}"
        )));
    }
    if params.is_product() {
        return Ok(separable_report(params, trivial_epr(1.0, true), None));
    }
    let nt = n - 1.0;
    let mt = m - 1.0;
    if nt + mt <= 0.0 || mt <= 0.0 {
        return Err(Error::Degenerate(
            "a locally pure mode cannot carry correlations".into(),
        ));
    }
    let root = (nt * mt).sqrt();
    let tol = 1e-12 * n.max(1.0) * m.max(1.0);
    let rad_a = n * mt - kx * root;
    let rad_b = m * nt - kx * root;
    if rad_a < -tol || rad_b < -tol {
        return Err(Error::DomainError(format!(
            "negative radicand in the squeezed-thermal closed form ({rad_a}, {rad_b})"
        )));
    }
    let b0 = (n - m) / (n + m - 2.0);
    let d0 = (n * mt + m * nt - 2.0 * kx * root) / (nt + mt);
    let a0 = (mt / nt).sqrt().sqrt();
    if d0 >= 1.0 {
        let epr = EprQuantities {
            a0,
            b0,
            delta0: 1.0,
            delta0_prime: 1.0,
            separable: true,
        };
        return Ok(separable_report(params, epr, None));
    }
    let dp = ((rad_a.max(0.0).sqrt() + rad_b.max(0.0).sqrt()) / (nt.sqrt() + mt.sqrt())).powi(2);
    let epr = EprQuantities {
        a0,
        b0,
        delta0: d0,
        delta0_prime: dp,
        separable: false,
    };
    Ok(EofReport {
        params,
        epr,
        eof: f_aux(dp)?,
        method: Method::SqueezedThermal,
        squeezing: None,
    })
}

/// One member of the amplifier family with gain `κ ≥ 1` and mean thermal
/// photon number `n̄ ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilyPoint {
    pub kappa: f64,
    pub nbar: f64,
    pub params: StandardFormParams,
    pub report: EofReport,
    pub g_kappa: f64,
    /// `n̄ = 0` is a pure state whose EOF equals `g(κ)` exactly.
    pub pure_boundary: bool,
}

/// `n = 2(n̄+1)κ − 1`, `m = 2(n̄+1)κ − (2n̄+1)`, `k_x = −k_p = 2(n̄+1)√(κ(κ−1))`.
pub fn amplifier_family(kappa: f64, nbar: f64) -> Result<FamilyPoint> {
    if !(kappa >= 1.0) || !(nbar >= 0.0) || !kappa.is_finite() || !nbar.is_finite() {
        return Err(Error::DomainError(format!(
            "family needs κ ≥ 1 and n̄ ≥ 0, got κ = {kappa}, n̄ = {nbar}"
        )));
    }
    let scale = 2.0 * (nbar + 1.0);
    let n = scale * kappa - 1.0;
    let m = scale * kappa - (2.0 * nbar + 1.0);
    let kx = scale * (kappa * (kappa - 1.0)).sqrt();
    let params = StandardFormParams::new(n, m, kx, -kx);
    let report = squeezed_thermal_eof(n, m, kx)?;
    Ok(FamilyPoint {
        kappa,
        nbar,
        params,
        report,
        g_kappa: g_kappa(kappa),
        pure_boundary: nbar == 0.0,
    })
}
