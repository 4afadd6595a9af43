//! Gaussian EOF by constrained minimization, plus the symmetric-surrogate
//! lower and upper bounds and the sandwich report tying them together.

use nalgebra::Matrix2;
use serde::Serialize;

use crate::eof::{eof, f_aux, symmetric_eof};
use crate::error::{Error, Result};
use crate::numerics::{format_sig, golden_section_min, quadratic_roots};
use crate::symplectic::{validate_cm, StandardFormParams, TOL_PSD};

/// Default number of scan points over the free off-diagonal entry.
pub const GEF_SCAN_POINTS: usize = 2048;
/// Slack allowed in the bound-sandwich assertions.
pub const TOL_SANDWICH: f64 = 1e-9;

/// Pure-state block `Γ = [[x0 + x3, x1], [x1, x0 − x3]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaCandidate {
    pub x0: f64,
    pub x1: f64,
    pub x3: f64,
}

impl GammaCandidate {
    fn from_diagonal(u: f64, v: f64, x1: f64) -> Self {
        GammaCandidate {
            x0: 0.5 * (u + v),
            x1,
            x3: 0.5 * (u - v),
        }
    }

    pub fn matrix(&self) -> Matrix2<f64> {
        Matrix2::new(self.x0 + self.x3, self.x1, self.x1, self.x0 - self.x3)
    }

    pub fn det(&self) -> f64 {
        self.x0 * self.x0 - self.x3 * self.x3 - self.x1 * self.x1
    }

    /// `det γ_P^(A) = 1 + x1²/det Γ`.
    pub fn objective(&self) -> f64 {
        1.0 + self.x1 * self.x1 / self.det()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianEof {
    pub value: f64,
    pub m_opt: f64,
    pub candidate: GammaCandidate,
    /// `det(C_x − Γ)` at the minimizer.
    pub residual_x: f64,
    /// `det(Γ − C_p⁻¹)` at the minimizer.
    pub residual_p: f64,
}

/// Quadrature blocks `C_x`, `C_p` of the standard-form CM.
///
/// The x block of mode A, mode B and their correlation are `n`, `m`, `k_x`;
/// likewise `n`, `m`, `k_p` for the p block.
pub fn quadrature_blocks(p: &StandardFormParams) -> (Matrix2<f64>, Matrix2<f64>) {
    (
        Matrix2::new(p.n, p.kx, p.kx, p.m),
        Matrix2::new(p.n, p.kp, p.kp, p.m),
    )
}

struct ConstraintSurface {
    c: Matrix2<f64>,
    q: Matrix2<f64>,
}

impl ConstraintSurface {
    fn new(p: &StandardFormParams) -> Result<Self> {
        let (c, cp) = quadrature_blocks(p);
        let q = cp
            .try_inverse()
            .ok_or_else(|| Error::Degenerate("p block of the CM is singular".into()))?;
        Ok(ConstraintSurface { c, q })
    }

    /// Feasible candidates with the given off-diagonal entry, sorted by the
    /// first diagonal entry (branch 0 is the smaller root).
    ///
    /// Writing `u = x0 + x3`, `v = x0 − x3`, the first constraint gives
    /// `v = c22 − (c12 − x1)²/(c11 − u)` and substituting into the second
    /// leaves a quadratic in `u`.
    fn candidates(&self, x1: f64) -> [Option<GammaCandidate>; 2] {
        let (c11, c12, c22) = (self.c[(0, 0)], self.c[(0, 1)], self.c[(1, 1)]);
        let (q11, q12, q22) = (self.q[(0, 0)], self.q[(0, 1)], self.q[(1, 1)]);
        let d = c22 - q22;
        let k1 = (c12 - x1).powi(2);
        let k2 = (x1 - q12).powi(2);
        let mut roots = quadratic_roots(
            -d,
            d * c11 - k1 + q11 * d + k2,
            -q11 * (d * c11 - k1) - k2 * c11,
        );
        roots.sort_by(|a, b| a.total_cmp(b));
        let tol = 1e-12 * c11.max(1.0);
        let mut out = [None, None];
        for (slot, &u) in out.iter_mut().zip(roots.iter()) {
            if !(u >= q11 - tol && u < c11) {
                continue;
            }
            let v = c22 - k1 / (c11 - u);
            if !(v >= q22 - tol) {
                continue;
            }
            let cand = GammaCandidate::from_diagonal(u, v, x1);
            if cand.det() > 0.0 && cand.x0 > 0.0 {
                *slot = Some(cand);
            }
        }
        out
    }

    fn objective_on_branch(&self, x1: f64, branch: usize) -> f64 {
        match self.candidates(x1)[branch] {
            Some(c) => c.objective(),
            None => f64::NAN,
        }
    }

    fn residuals(&self, cand: &GammaCandidate) -> (f64, f64) {
        let g = cand.matrix();
        ((self.c - g).determinant(), (g - self.q).determinant())
    }
}

/// Gaussian EOF with the default scan resolution.
pub fn gaussian_eof(p: &StandardFormParams) -> Result<GaussianEof> {
    gaussian_eof_with(p, GEF_SCAN_POINTS)
}

/// Minimizes `det γ_P^(A)` over pure Gaussian states `Γ ⊕ Γ⁻¹` that satisfy
/// `det(C_x − Γ) = det(Γ − C_p⁻¹) = 0`, scanning `x1 ∈ [−k_x, k_x]` on both
/// branches and polishing the best bracket by golden section.
pub fn gaussian_eof_with(p: &StandardFormParams, scan_points: usize) -> Result<GaussianEof> {
    p.validate()?;
    let surface = ConstraintSurface::new(p)?;
    let span = p.kx.abs();
    let points = scan_points.max(3);
    let step = 2.0 * span / (points - 1) as f64;
    let grid = |i: usize| -span + step * i as f64;

    // (objective, x1, branch, index), ties broken by smaller x1
    let mut best: Option<(f64, f64, usize, usize)> = None;
    for i in 0..points {
        let x1 = grid(i);
        for (branch, cand) in surface.candidates(x1).iter().enumerate() {
            let Some(cand) = cand else { continue };
            let obj = cand.objective();
            if !obj.is_finite() {
                continue;
            }
            let better = match best {
                None => true,
                Some((b, bx, _, _)) => obj < b || (obj == b && x1 < bx),
            };
            if better {
                best = Some((obj, x1, branch, i));
            }
        }
    }
    let (obj0, x10, branch, idx) = best.ok_or(Error::Infeasible)?;

    let lo = grid(idx.saturating_sub(1));
    let hi = grid((idx + 1).min(points - 1));
    let (x1, obj) = if hi > lo {
        golden_section_min(|x| surface.objective_on_branch(x, branch), lo, hi, 1e-15 * span.max(1.0), 300)
    } else {
        (x10, obj0)
    };
    let (x1, m_opt) = if obj <= obj0 { (x1, obj) } else { (x10, obj0) };
    let candidate = surface.candidates(x1)[branch].ok_or(Error::Infeasible)?;
    let m_opt = m_opt.max(1.0);
    let (residual_x, residual_p) = surface.residuals(&candidate);
    let value = f_aux(m_opt.sqrt() - (m_opt - 1.0).sqrt())?;
    Ok(GaussianEof {
        value,
        m_opt,
        candidate,
        residual_x,
        residual_p,
    })
}

/// EOF of the symmetric surrogate with both local terms set to `(n + m)/2`.
pub fn lower_bound(p: &StandardFormParams) -> Result<f64> {
    let mean = 0.5 * (p.n + p.m);
    Ok(symmetric_eof(mean, p.kx, p.kp)?.eof)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UpperSurrogate {
    pub surrogate: StandardFormParams,
    /// Common local squeezing factor; `None` when `n − k_x` or `n + k_p`
    /// is not positive.
    pub squeezing: Option<f64>,
    pub min_nu: Option<f64>,
    pub physical: bool,
    pub value: Option<f64>,
}

/// EOF of the symmetric surrogate `(m, m, k_x, k_p)` with common local
/// squeezing `√((n + k_p)/(n − k_x))`, when that matrix is a bona fide CM.
pub fn upper_bound(p: &StandardFormParams) -> UpperSurrogate {
    let surrogate = StandardFormParams::new(p.m, p.m, p.kx, p.kp);
    let ratio = (p.n + p.kp) / (p.n - p.kx);
    let unphysical = |squeezing, min_nu| UpperSurrogate {
        surrogate,
        squeezing,
        min_nu,
        physical: false,
        value: None,
    };
    if !(ratio > 0.0) || !ratio.is_finite() {
        return unphysical(None, None);
    }
    let r = ratio.sqrt();
    let cm = surrogate.cm_form_two(r, r);
    let nu = cm.symplectic_eigenvalues();
    let min_nu = nu[0].min(nu[1]);
    let bona_fide = matches!(validate_cm(&cm), Ok(v) if v.is_bona_fide) && min_nu >= 1.0 - TOL_PSD;
    if !bona_fide {
        return unphysical(Some(r), Some(min_nu));
    }
    match symmetric_eof(p.m, p.kx, p.kp) {
        Ok(rep) => UpperSurrogate {
            surrogate,
            squeezing: Some(r),
            min_nu: Some(min_nu),
            physical: true,
            value: Some(rep.eof),
        },
        Err(_) => unphysical(Some(r), Some(min_nu)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundsReport {
    pub params: StandardFormParams,
    pub eof: f64,
    pub gaussian_eof: f64,
    pub m_opt: f64,
    pub lower_bound: f64,
    pub upper_bound: Option<f64>,
    pub upper_physical: bool,
    pub separable: bool,
}

impl BoundsReport {
    pub const CSV_HEADER: &'static str =
        "n,m,kx,kp,lower_bound,eof,upper_bound,gaussian_eof,m_opt,separable";

    pub fn to_csv_row(&self) -> String {
        let p = &self.params;
        let upper = self.upper_bound.map(|v| format_sig(v, 12)).unwrap_or_default();
        [
            format_sig(p.n, 12),
            format_sig(p.m, 12),
            format_sig(p.kx, 12),
            format_sig(p.kp, 12),
            format_sig(self.lower_bound, 12),
            format_sig(self.eof, 12),
            upper,
            format_sig(self.gaussian_eof, 12),
            format_sig(self.m_opt, 12),
            self.separable.to_string(),
        ]
        .join(",")
    }
}

/// EOF, Gaussian EOF and both surrogate bounds, checked against
/// `lower ≤ EOF ≤ E_GF` (and `EOF ≤ upper` when the upper surrogate is
/// physical). Separable states report zero Gaussian EOF without running the
/// minimization.
pub fn bounds_report(p: &StandardFormParams) -> Result<BoundsReport> {
    let exact = eof(p)?;
    let lower = lower_bound(p)?;
    let upper = upper_bound(p);
    let (gaussian, m_opt) = if exact.epr.separable {
        (0.0, 1.0)
    } else {
        let g = gaussian_eof(p)?;
        (g.value, g.m_opt)
    };
    let report = BoundsReport {
        params: *p,
        eof: exact.eof,
        gaussian_eof: gaussian,
        m_opt,
        lower_bound: lower,
        upper_bound: upper.value,
        upper_physical: upper.physical,
        separable: exact.epr.separable,
    };
    if report.eof < lower - TOL_SANDWICH {
        return Err(Error::SandwichViolation(format!(
            "EOF {} below lower bound {lower}",
            report.eof
        )));
    }
    if report.eof > gaussian + TOL_SANDWICH {
        return Err(Error::SandwichViolation(format!(
            "EOF {} above Gaussian EOF {gaussian}",
            report.eof
        )));
    }
    if let Some(u) = upper.value {
        if report.eof > u + TOL_SANDWICH {
            return Err(Error::SandwichViolation(format!(
                "EOF {} above upper bound {u}",
                report.eof
            )));
        }
    }
    Ok(report)
}
