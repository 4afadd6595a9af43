//! Two-mode covariance matrices, the symplectic form, bona-fide validation
//! and reduction to the standard-form parameters `(n, m, k_x, k_p)`.
//!
//! Covariance matrices are vacuum-normalized: the vacuum CM is the 4×4
//! identity (not `I/2`). Quadratures are ordered `(x_A, p_A, x_B, p_B)`.

use nalgebra::{Matrix2, Matrix4, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Symmetry tolerance on `max |γ_ij − γ_ji|`.
pub const TOL_SYM: f64 = 1e-12;
/// Bona-fide acceptance: smallest symplectic eigenvalue must be ≥ 1 − TOL_PSD.
pub const TOL_PSD: f64 = 1e-9;
/// Both symplectic eigenvalues within this distance of 1 ⇒ pure state.
pub const TOL_PURE: f64 = 1e-9;
/// Correlations below this magnitude are treated as absent (product state).
pub const TOL_PRODUCT: f64 = 1e-12;

/// Ω = J ⊕ J with J = [[0, 1], [−1, 0]].
pub fn symplectic_form() -> Matrix4<f64> {
    Matrix4::new(
        0.0, 1.0, 0.0, 0.0, //
        -1.0, 0.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, //
        0.0, 0.0, -1.0, 0.0,
    )
}

/// Block-diagonal local operation `S_A ⊕ S_B`.
pub fn local_operation(sa: &Matrix2<f64>, sb: &Matrix2<f64>) -> Matrix4<f64> {
    let mut s = Matrix4::zeros();
    s.fixed_view_mut::<2, 2>(0, 0).copy_from(sa);
    s.fixed_view_mut::<2, 2>(2, 2).copy_from(sb);
    s
}

/// Phase-space rotation of each mode by its own angle.
pub fn local_rotation(theta_a: f64, theta_b: f64) -> Matrix4<f64> {
    let rot = |t: f64| Matrix2::new(t.cos(), t.sin(), -t.sin(), t.cos());
    local_operation(&rot(theta_a), &rot(theta_b))
}

/// Single-mode squeezers `diag(e^{-s}, e^{s})` on each mode.
pub fn local_squeezer(s_a: f64, s_b: f64) -> Matrix4<f64> {
    let sq = |s: f64| Matrix2::new((-s).exp(), 0.0, 0.0, s.exp());
    local_operation(&sq(s_a), &sq(s_b))
}

/// Real symmetric 4×4 second-moment matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix(Matrix4<f64>);

impl CovarianceMatrix {
    /// Wraps a matrix without checks; use [`validate_cm`] before trusting it.
    pub fn from_matrix(m: Matrix4<f64>) -> Self {
        Self(m)
    }

    pub fn from_rows(rows: [[f64; 4]; 4]) -> Self {
        Self(Matrix4::from_fn(|i, j| rows[i][j]))
    }

    pub fn identity() -> Self {
        Self(Matrix4::identity())
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn to_rows(&self) -> [[f64; 4]; 4] {
        let mut rows = [[0.0; 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.0[(i, j)];
            }
        }
        rows
    }

    /// `S γ Sᵀ`.
    pub fn transform(&self, s: &Matrix4<f64>) -> Self {
        Self(s * self.0 * s.transpose())
    }

    pub fn block_a(&self) -> Matrix2<f64> {
        self.0.fixed_view::<2, 2>(0, 0).into_owned()
    }

    pub fn block_b(&self) -> Matrix2<f64> {
        self.0.fixed_view::<2, 2>(2, 2).into_owned()
    }

    pub fn block_c(&self) -> Matrix2<f64> {
        self.0.fixed_view::<2, 2>(0, 2).into_owned()
    }

    /// `(ν₋, ν₊)` in ascending order; see [`symplectic_eigenvalues`].
    pub fn symplectic_eigenvalues(&self) -> [f64; 2] {
        symplectic_eigenvalues(&self.0)
    }
}

/// Symplectic eigenvalues from the spectrum of `−(Ωγ)²`, ascending.
///
/// For positive-definite γ the spectrum is taken from the similar symmetric
/// matrix `KᵀK` with `K = Lᵀ Ω L` and `γ = L Lᵀ`, which keeps the
/// computation real and well-conditioned. Indefinite input falls back to a
/// general eigenvalue solve of `−(Ωγ)²` itself.
pub fn symplectic_eigenvalues(gamma: &Matrix4<f64>) -> [f64; 2] {
    let omega = symplectic_form();
    let sym = (gamma + gamma.transpose()) * 0.5;
    let mut squares: Vec<f64> = match sym.cholesky() {
        Some(chol) => {
            let l = chol.l();
            let k = l.transpose() * omega * l;
            let ktk = k.transpose() * k;
            SymmetricEigen::new(ktk).eigenvalues.iter().cloned().collect()
        }
        None => {
            let og = omega * sym;
            let m = -(og * og);
            m.complex_eigenvalues().iter().map(|z| z.re.abs()).collect()
        }
    };
    squares.sort_by(|a, b| a.total_cmp(b));
    let lo = (0.5 * (squares[0] + squares[1])).max(0.0).sqrt();
    let hi = (0.5 * (squares[2] + squares[3])).max(0.0).sqrt();
    [lo, hi]
}

/// Outcome of [`validate_cm`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidityReport {
    pub is_symmetric_matrix: bool,
    pub is_positive: bool,
    pub symplectic_eigenvalues: [f64; 2],
    pub is_bona_fide: bool,
    pub is_pure: bool,
}

/// Checks symmetry, positivity and the uncertainty relation `γ + iΩ ≥ 0`.
pub fn validate_cm(gamma: &CovarianceMatrix) -> Result<ValidityReport> {
    let g = gamma.matrix();
    for i in 0..4 {
        for j in 0..4 {
            if !g[(i, j)].is_finite() {
                return Err(Error::NonFiniteEntry { row: i, col: j });
            }
        }
    }
    let asym = (g - g.transpose()).abs().max();
    let is_symmetric_matrix = asym <= TOL_SYM * g.abs().max().max(1.0);
    let sym = (g + g.transpose()) * 0.5;
    let min_eig = SymmetricEigen::new(sym)
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let is_positive = min_eig > 0.0;
    let nu = symplectic_eigenvalues(g);
    let is_bona_fide = is_symmetric_matrix && is_positive && nu[0] >= 1.0 - TOL_PSD;
    let is_pure = is_bona_fide && nu.iter().all(|v| (v - 1.0).abs() <= TOL_PURE);
    Ok(ValidityReport {
        is_symmetric_matrix,
        is_positive,
        symplectic_eigenvalues: nu,
        is_bona_fide,
        is_pure,
    })
}

/// CM of the two-mode squeezed vacuum `|ψ_r⟩`: `n = m = cosh 2r`,
/// `k_x = −k_p = sinh 2r`, no local squeezing.
pub fn squeezed_vacuum_cm(r: f64) -> CovarianceMatrix {
    let c = (2.0 * r).cosh();
    let s = (2.0 * r).sinh();
    StandardFormParams::new(c, c, s, -s).cm_form_one()
}

/// Standard-form parameters of a two-mode CM.
///
/// In canonical form `n, m ≥ 1` and `k_x ≥ |k_p|`, `k_p ≤ 0`; entangled
/// candidates additionally have `k_x ≥ −k_p > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StandardFormParams {
    pub n: f64,
    pub m: f64,
    pub kx: f64,
    pub kp: f64,
}

impl StandardFormParams {
    pub fn new(n: f64, m: f64, kx: f64, kp: f64) -> Self {
        Self { n, m, kx, kp }
    }

    /// Standard form with no local squeezing: `A = nI`, `B = mI`, `C = diag(k_x, k_p)`.
    pub fn cm_form_one(&self) -> CovarianceMatrix {
        self.cm_form_two(1.0, 1.0)
    }

    /// Locally squeezed standard form with factors `r₁`, `r₂`:
    ///
    /// ```text
    /// ⎡ n r₁     0        √(r₁r₂) k_x   0           ⎤
    /// ⎢ 0        n/r₁     0             k_p/√(r₁r₂) ⎥
    /// ⎢ √(r₁r₂)k_x 0      m r₂          0           ⎥
    /// ⎣ 0        k_p/√(r₁r₂) 0          m/r₂        ⎦
    /// ```
    pub fn cm_form_two(&self, r1: f64, r2: f64) -> CovarianceMatrix {
        let s = (r1 * r2).sqrt();
        let (n, m, kx, kp) = (self.n, self.m, self.kx, self.kp);
        CovarianceMatrix::from_matrix(Matrix4::new(
            n * r1, 0.0, s * kx, 0.0, //
            0.0, n / r1, 0.0, kp / s, //
            s * kx, 0.0, m * r2, 0.0, //
            0.0, kp / s, 0.0, m / r2,
        ))
    }

    pub fn is_finite(&self) -> bool {
        [self.n, self.m, self.kx, self.kp].iter().all(|v| v.is_finite())
    }

    pub fn is_product(&self) -> bool {
        self.kx.abs() < TOL_PRODUCT && self.kp.abs() < TOL_PRODUCT
    }

    /// `n, m ≥ 1` and `k_x ≥ |k_p|`. The sign of `k_p` is that of `−det C`
    /// and cannot be changed by local operations.
    pub fn is_canonical(&self) -> bool {
        let tol = 1e-12;
        self.n >= 1.0 - tol && self.m >= 1.0 - tol && self.kx + tol >= self.kp.abs()
    }

    /// `det C ≥ 0` (here `k_p > 0`): the partial transpose is positive, so
    /// the state is separable.
    pub fn has_positive_partial_transpose(&self) -> bool {
        self.kp > 0.0
    }

    pub fn is_symmetric(&self) -> bool {
        (self.n - self.m).abs() <= 1e-12 * self.n.max(self.m)
    }

    pub fn is_squeezed_thermal(&self) -> bool {
        (self.kx + self.kp).abs() <= 1e-12 * self.kx.abs().max(1.0)
    }

    /// `det γ = (nm − k_x²)(nm − k_p²)`.
    pub fn det_gamma(&self) -> f64 {
        let nm = self.n * self.m;
        (nm - self.kx * self.kx) * (nm - self.kp * self.kp)
    }

    fn require_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("non-finite parameters {self:?}")))
        }
    }

    /// Rejects non-finite, non-canonical or non-bona-fide parameter sets.
    pub fn validate(&self) -> Result<ValidityReport> {
        self.require_finite()?;
        if !self.is_canonical() {
            return Err(Error::DomainError(format!(
                "parameters not in canonical form (need n, m ≥ 1, k_x ≥ |k_p|): {self:?}"
            )));
        }
        let report = validate_cm(&self.cm_form_one())?;
        if !report.is_bona_fide {
            return Err(Error::NotBonaFide {
                min_nu: report.symplectic_eigenvalues[0],
            });
        }
        Ok(report)
    }
}

fn inverse_sqrt_spd(a: &Matrix2<f64>) -> Option<Matrix2<f64>> {
    let eig = SymmetricEigen::new(*a);
    if eig.eigenvalues.iter().any(|&v| v <= 0.0) {
        return None;
    }
    let d = Matrix2::from_diagonal(&eig.eigenvalues.map(|v| 1.0 / v.sqrt()));
    Some(eig.eigenvectors * d * eig.eigenvectors.transpose())
}

/// Reduces a bona fide CM to canonical `(n, m, k_x, k_p)`.
///
/// Each local block is brought to `√det · I` by the local symplectic
/// `√n A^{-1/2}` (resp. `√m B^{-1/2}`); the transformed correlation block
/// `C' = √(nm) A^{-1/2} C B^{-1/2}` is then diagonalized by local rotations,
/// so `k_x ≥ |k_p|` are its singular values. `k_p` carries the sign of
/// `−det C`, which local operations preserve; `k_p > 0` only occurs for
/// states with positive partial transpose. Product states come back as
/// `(n, m, 0, 0)` and report [`StandardFormParams::is_product`].
pub fn reduce_to_standard_params(gamma: &CovarianceMatrix) -> Result<StandardFormParams> {
    let report = validate_cm(gamma)?;
    if !report.is_bona_fide {
        return Err(Error::NotBonaFide {
            min_nu: report.symplectic_eigenvalues[0],
        });
    }
    let sym = CovarianceMatrix::from_matrix((gamma.matrix() + gamma.matrix().transpose()) * 0.5);
    let a = sym.block_a();
    let b = sym.block_b();
    let c = sym.block_c();

    let n = a.determinant().sqrt();
    let m = b.determinant().sqrt();
    let (a_is, b_is) = match (inverse_sqrt_spd(&a), inverse_sqrt_spd(&b)) {
        (Some(x), Some(y)) => (x, y),
        _ => {
            return Err(Error::AmbiguousSigns(
                "local blocks are not positive definite".into(),
            ))
        }
    };
    let c_std = a_is * c * b_is * (n * m).sqrt();
    let svd = c_std.svd(false, false);
    let (mut s1, mut s2) = (svd.singular_values[0], svd.singular_values[1]);
    if s2 > s1 {
        std::mem::swap(&mut s1, &mut s2);
    }
    let scale = (n * m).sqrt();
    if s1 <= TOL_PRODUCT * scale {
        s1 = 0.0;
    }
    if s2 <= TOL_PRODUCT * scale {
        s2 = 0.0;
    }
    let kp = if c.determinant() > 0.0 { s2 } else { -s2 };
    let params = StandardFormParams::new(n, m, s1, kp);

    // the reduction is a local symplectic map, so det γ must survive it
    let det_in = sym.matrix().determinant();
    let det_out = params.det_gamma();
    if (det_in - det_out).abs() > 1e-8 * det_in.abs().max(1.0) {
        return Err(Error::AmbiguousSigns(format!(
            "det γ mismatch after reduction: {det_in} vs {det_out}"
        )));
    }
    Ok(params)
}
