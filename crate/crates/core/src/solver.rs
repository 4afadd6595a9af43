//! Local squeezing factors `r₁, r₂` of the standard form and the critical
//! weight parameter `a₀` with its uncertainty floor `b₀`.
//!
//! The squeezing factors satisfy
//!
//! ```text
//! (n r₁ − 1)/(m r₂ − 1) = (n/r₁ − 1)/(m/r₂ − 1)
//! √(r₁r₂)|k_x| − |k_p|/√(r₁r₂) = √((n r₁−1)(m r₂−1)) − √((n/r₁−1)(m/r₂−1))
//! ```
//!
//! For fixed `r₁` the first equation is quadratic in `r₂`; the second is then
//! a scalar equation in `r₁`, bracketed on a geometric grid and refined by
//! safeguarded secant/bisection.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{bisect_secant, quadratic_roots};
use crate::symplectic::StandardFormParams;

/// Acceptance threshold on both equation residuals.
pub const TOL_ROOT: f64 = 1e-12;
/// Grid points used to bracket the first sign change in `r₁`.
pub const SCAN_POINTS: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveBranch {
    Symmetric,
    SqueezedThermal,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SqueezingSolution {
    pub r1: f64,
    pub r2: f64,
    pub residual_ratio: f64,
    pub residual_correlation: f64,
    pub branch: SolveBranch,
    /// Number of distinct roots found on the scan grid (1 for closed forms).
    pub root_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalParams {
    pub a0: f64,
    pub b0: f64,
}

impl CriticalParams {
    pub fn a0_squared(&self) -> f64 {
        self.a0 * self.a0
    }
}

/// Equal-ratio condition, cross-multiplied so it stays finite when either
/// denominator vanishes: `(n r₁ − 1)(m/r₂ − 1) − (n/r₁ − 1)(m r₂ − 1)`.
pub fn ratio_residual(p: &StandardFormParams, r1: f64, r2: f64) -> f64 {
    (p.n * r1 - 1.0) * (p.m / r2 - 1.0) - (p.n / r1 - 1.0) * (p.m * r2 - 1.0)
}

/// Correlation-matching condition. `None` when a radicand is negative,
/// i.e. the two ratios of the first equation are not positive.
pub fn correlation_residual(p: &StandardFormParams, r1: f64, r2: f64) -> Option<f64> {
    let s = (r1 * r2).sqrt();
    let x_rad = (p.n * r1 - 1.0) * (p.m * r2 - 1.0);
    let p_rad = (p.n / r1 - 1.0) * (p.m / r2 - 1.0);
    let floor = -1e-14 * (p.n * p.m * r1 * r2).max(1.0);
    if x_rad < floor || p_rad < floor {
        return None;
    }
    let lhs = s * p.kx.abs() - p.kp.abs() / s;
    let rhs = x_rad.max(0.0).sqrt() - p_rad.max(0.0).sqrt();
    Some(lhs - rhs)
}

/// Roots `r₂ ≥ 1` of `β m r₂² + (α − β) r₂ − α m = 0` with `α = n r₁ − 1`,
/// `β = n/r₁ − 1`.
fn r2_candidates(p: &StandardFormParams, r1: f64) -> Vec<f64> {
    let alpha = p.n * r1 - 1.0;
    let beta = p.n / r1 - 1.0;
    quadratic_roots(beta * p.m, alpha - beta, -alpha * p.m)
        .into_iter()
        .filter(|r2| r2.is_finite() && *r2 >= 1.0 - 1e-12)
        .map(|r2| r2.max(1.0))
        .collect()
}

/// Correlation residual along the equal-ratio curve; among admissible `r₂` the one with
/// the smallest residual is used.
fn residual_on_curve(p: &StandardFormParams, r1: f64) -> Option<(f64, f64)> {
    r2_candidates(p, r1)
        .into_iter()
        .filter_map(|r2| correlation_residual(p, r1, r2).map(|res| (res, r2)))
        .min_by(|a, b| a.0.abs().total_cmp(&b.0.abs()))
}

fn check_preconditions(p: &StandardFormParams) -> Result<()> {
    if !p.is_finite() {
        return Err(Error::InvalidInput(format!("non-finite parameters {p:?}")));
    }
    if !p.is_canonical() || p.has_positive_partial_transpose() {
        return Err(Error::DomainError(format!(
            "squeezing solve needs n, m ≥ 1 and k_x ≥ −k_p ≥ 0, got {p:?}"
        )));
    }
    if p.is_product() {
        return Err(Error::Degenerate("product state has no correlations".into()));
    }
    if p.n - 1.0 <= TOL_ROOT || p.m - 1.0 <= TOL_ROOT {
        return Err(Error::Degenerate(
            "a locally pure mode leaves n r₁ − 1 at zero".into(),
        ));
    }
    Ok(())
}

fn finish(p: &StandardFormParams, r1: f64, r2: f64, branch: SolveBranch, root_count: usize) -> SqueezingSolution {
    SqueezingSolution {
        r1,
        r2,
        residual_ratio: ratio_residual(p, r1, r2),
        residual_correlation: correlation_residual(p, r1, r2).unwrap_or(f64::NAN),
        branch,
        root_count,
    }
}

/// Solve for `(r₁, r₂)`, using the closed forms for symmetric
/// (`r₁ = r₂ = √((n+k_p)/(n−k_x))`) and squeezed-thermal (`r₁ = r₂ = 1`)
/// inputs and the bracketed solver otherwise.
pub fn solve_squeezings(p: &StandardFormParams) -> Result<SqueezingSolution> {
    check_preconditions(p)?;
    if p.is_squeezed_thermal() {
        return Ok(finish(p, 1.0, 1.0, SolveBranch::SqueezedThermal, 1));
    }
    if p.is_symmetric() {
        let num = p.n + p.kp;
        let den = p.n - p.kx;
        if num <= 0.0 || den <= 0.0 {
            return Err(Error::DomainError(format!(
                "symmetric squeezing needs n > k_x and n > −k_p, got {p:?}"
            )));
        }
        let r = (num / den).sqrt();
        return Ok(finish(p, r, r, SolveBranch::Symmetric, 1));
    }
    solve_squeezings_general(p)
}

/// Bracketed solve with no closed-form shortcuts.
///
/// Scans `r₁` over [`SCAN_POINTS`] geometric points in `[1, 10·max(n, m)]`
/// and returns the smallest root whose residuals pass [`TOL_ROOT`];
/// `root_count` reports how many such roots the scan found.
pub fn solve_squeezings_general(p: &StandardFormParams) -> Result<SqueezingSolution> {
    check_preconditions(p)?;
    let hi = 10.0 * p.n.max(p.m);
    let grid: Vec<f64> = (0..SCAN_POINTS)
        .map(|i| hi.powf(i as f64 / (SCAN_POINTS - 1) as f64))
        .collect();
    let values: Vec<Option<f64>> = grid
        .iter()
        .map(|&r1| residual_on_curve(p, r1).map(|(res, _)| res))
        .collect();

    let g = |r1: f64| residual_on_curve(p, r1).map_or(f64::NAN, |(res, _)| res);
    let mut roots: Vec<(f64, f64)> = Vec::new();
    let accept = |r1: f64, roots: &mut Vec<(f64, f64)>| {
        if let Some((res, r2)) = residual_on_curve(p, r1) {
            let scale = p.kx.abs().max(1.0) * r1.max(r2);
            if res.abs() <= TOL_ROOT * scale
                && !roots.iter().any(|(x, _)| (x - r1).abs() <= 1e-9 * r1)
            {
                roots.push((r1, r2));
            }
        }
    };

    for i in 0..grid.len() {
        if let Some(v) = values[i] {
            if v == 0.0 {
                accept(grid[i], &mut roots);
                continue;
            }
        }
        if i + 1 == grid.len() {
            break;
        }
        if let (Some(a), Some(b)) = (values[i], values[i + 1]) {
            if a != 0.0 && b != 0.0 && a.signum() != b.signum() {
                if let Some(r1) = bisect_secant(g, grid[i], grid[i + 1], 1e-16, 400) {
                    accept(r1, &mut roots);
                }
            }
        }
    }

    let lo = grid[0];
    match roots.first() {
        Some(&(r1, r2)) => Ok(finish(p, r1, r2, SolveBranch::General, roots.len())),
        None => Err(Error::NoRoot { lo, hi }),
    }
}

/// `a₀² = √((m r₂ − 1)/(n r₁ − 1))` and
/// `b₀ = |a₀² − a₀⁻²| / (a₀² + a₀⁻²) = √(1 − 4/(a₀² + a₀⁻²)²)`.
///
/// The second expression `a₀² = √((m/r₂ − 1)/(n/r₁ − 1))` must agree within
/// 1e-9; a mismatch means the squeezing solve is inconsistent.
pub fn critical_params(p: &StandardFormParams, sol: &SqueezingSolution) -> Result<CriticalParams> {
    let x_den = p.n * sol.r1 - 1.0;
    if x_den <= TOL_ROOT {
        return Err(Error::Degenerate(
            "n r₁ − 1 vanishes, a₀ is indeterminate".into(),
        ));
    }
    let a0_sq = ((p.m * sol.r2 - 1.0) / x_den).sqrt();
    let p_den = p.n / sol.r1 - 1.0;
    if p_den.abs() > 1e-8 {
        let alt = ((p.m / sol.r2 - 1.0) / p_den).sqrt();
        if !((alt - a0_sq).abs() <= 1e-9 * a0_sq.max(1.0)) {
            return Err(Error::Degenerate(format!(
                "a₀² from the two quadratures disagree: {a0_sq} vs {alt}"
            )));
        }
    }
    if !(a0_sq.is_finite() && a0_sq > 0.0) {
        return Err(Error::Degenerate(format!("a₀² = {a0_sq} is not positive")));
    }
    let inv = 1.0 / a0_sq;
    let b0 = (a0_sq - inv).abs() / (a0_sq + inv);
    Ok(CriticalParams {
        a0: a0_sq.sqrt(),
        b0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn symmetric_closed_form() {
        let p = StandardFormParams::new(2.0, 2.0, 1.0, -0.5);
        let sol = solve_squeezings(&p).unwrap();
        assert_eq!(sol.branch, SolveBranch::Symmetric);
        assert_abs_diff_eq!(sol.r1, 1.5f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(sol.r2, 1.5f64.sqrt(), epsilon = 1e-15);
        assert!(sol.residual_ratio.abs() < TOL_ROOT);
        assert!(sol.residual_correlation.abs() < TOL_ROOT);
    }

    #[test]
    fn squeezed_thermal_closed_form() {
        let p = StandardFormParams::new(2.0, 1.5, 1.0, -1.0);
        let sol = solve_squeezings(&p).unwrap();
        assert_eq!(sol.branch, SolveBranch::SqueezedThermal);
        assert_eq!((sol.r1, sol.r2), (1.0, 1.0));
    }

    /// Independent bracketing oracle: a dense uniform scan over r₁ ∈ [1, 20]
    /// followed by plain bisection, sharing only the residual definitions.
    fn oracle_root(p: &StandardFormParams) -> (f64, f64) {
        let r2_of = |r1: f64| {
            let alpha = p.n * r1 - 1.0;
            let beta = p.n / r1 - 1.0;
            let (a, b, c) = (beta * p.m, alpha - beta, -alpha * p.m);
            let d = (b * b - 4.0 * a * c).sqrt();
            [(-b + d) / (2.0 * a), (-b - d) / (2.0 * a)]
                .into_iter()
                .filter(|r| *r >= 1.0)
                .fold(f64::NAN, |acc: f64, r| if acc.is_nan() { r } else { acc })
        };
        let res = |r1: f64| correlation_residual(p, r1, r2_of(r1)).unwrap();
        let steps = 20_000;
        let mut prev = (1.0, res(1.0));
        for i in 1..=steps {
            let r1 = 1.0 + 19.0 * i as f64 / steps as f64;
            let v = res(r1);
            if v.signum() != prev.1.signum() {
                let (mut lo, mut hi) = (prev.0, r1);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if res(mid).signum() == res(lo).signum() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let r1 = 0.5 * (lo + hi);
                return (r1, r2_of(r1));
            }
            prev = (r1, v);
        }
        panic!("oracle found no root");
    }

    #[test]
    fn general_solve_matches_dense_oracle() {
        let p = StandardFormParams::new(2.0, 1.5, 1.2, -1.0);
        let sol = solve_squeezings(&p).unwrap();
        assert_eq!(sol.branch, SolveBranch::General);
        assert!(sol.residual_ratio.abs() < TOL_ROOT, "{sol:?}");
        assert!(sol.residual_correlation.abs() < TOL_ROOT, "{sol:?}");
        let (r1, r2) = oracle_root(&p);
        assert_abs_diff_eq!(sol.r1, r1, epsilon = 1e-10);
        assert_abs_diff_eq!(sol.r2, r2, epsilon = 1e-10);
        assert_eq!(sol.root_count, 1);
    }

    #[test]
    fn general_solver_reproduces_closed_forms() {
        let sym = StandardFormParams::new(2.0, 2.0, 1.0, -0.5);
        let sol = solve_squeezings_general(&sym).unwrap();
        assert_abs_diff_eq!(sol.r1, 1.5f64.sqrt(), epsilon = 1e-10);
        assert_abs_diff_eq!(sol.r2, 1.5f64.sqrt(), epsilon = 1e-10);

        let thermal = StandardFormParams::new(2.0, 1.5, 1.0, -1.0);
        let sol = solve_squeezings_general(&thermal).unwrap();
        assert_abs_diff_eq!(sol.r1, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(sol.r2, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn critical_params_symmetric() {
        let p = StandardFormParams::new(2.0, 2.0, 1.0, -0.5);
        let crit = critical_params(&p, &solve_squeezings(&p).unwrap()).unwrap();
        assert_abs_diff_eq!(crit.a0, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(crit.b0, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn critical_params_squeezed_thermal() {
        let p = StandardFormParams::new(2.0, 1.5, 1.0, -1.0);
        let crit = critical_params(&p, &solve_squeezings(&p).unwrap()).unwrap();
        // b₀ = (n − m)/(n + m − 2) = 0.5/1.5
        assert_abs_diff_eq!(crit.b0, 1.0 / 3.0, epsilon = 1e-15);
        let b_alt = (1.0 - 4.0 / (crit.a0_squared() + 1.0 / crit.a0_squared()).powi(2)).sqrt();
        assert_abs_diff_eq!(crit.b0, b_alt, epsilon = 1e-12);
    }

    #[test]
    fn product_state_is_degenerate() {
        let p = StandardFormParams::new(1.5, 1.2, 0.0, 0.0);
        assert!(matches!(solve_squeezings(&p), Err(Error::Degenerate(_))));
    }

    #[test]
    fn locally_pure_mode_is_degenerate() {
        let p = StandardFormParams::new(1.0, 1.5, 0.1, -0.05);
        assert!(matches!(solve_squeezings(&p), Err(Error::Degenerate(_))));
    }

    #[test]
    fn non_canonical_is_rejected() {
        let p = StandardFormParams::new(2.0, 1.5, 0.5, 1.0);
        assert!(matches!(solve_squeezings(&p), Err(Error::DomainError(_))));
    }
}
