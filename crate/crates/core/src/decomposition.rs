//! Optimal pure-state decomposition: every member is a displaced copy of
//! one two-mode squeezed vacuum, with Gaussian weight over displacements
//! `g(ξ) ∝ exp(−ξᵀ M⁻¹ ξ)` and `M = γ_σ − γ_ψ`.

use nalgebra::{Matrix4, SymmetricEigen, Vector4};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::eof::{eof, Method};
use crate::epr::r_from_delta_prime;
use crate::error::{Error, Result};
use crate::symplectic::{squeezed_vacuum_cm, CovarianceMatrix, StandardFormParams};

/// Ratio between the weight matrix `M` and the second moments of the
/// displacement distribution.
///
/// `exp(−ξᵀM⁻¹ξ)` is a Gaussian with covariance `M/2`; a displacement `ξ`
/// shifts the mean by `ξ` and the CM normalization counts `2⟨ξξᵀ⟩`. Sampling
/// divides by this factor and reconstruction multiplies by it.
pub const DISPLACEMENT_SCALE: f64 = 2.0;
/// Most negative eigenvalue of `M` still treated as PSD.
pub const TOL_WEIGHT_PSD: f64 = 1e-9;
/// Samples per RNG stream.
pub const SAMPLE_CHUNK: usize = 4096;
/// Width of the reconstruction acceptance band in standard errors.
pub const STANDARD_ERRORS: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionSpec {
    pub params: StandardFormParams,
    pub r_opt: f64,
    pub local_squeezing: (f64, f64),
    /// Target CM in locally squeezed standard form.
    pub target: CovarianceMatrix,
    pub core: CovarianceMatrix,
    pub weight_matrix: Matrix4<f64>,
    pub min_eigenvalue: f64,
    pub rank: usize,
    /// `1/(π²√det M)`, only for full-rank `M`.
    pub norm_constant: Option<f64>,
}

/// Builds `M = γ_σ − γ_{ψ_r}` with `r = r_opt` from the EOF pipeline.
///
/// Fails with `NotPsd` when `M` has an eigenvalue below `−1e-9`: no
/// Gaussian mixture of displaced `ψ_r` reproduces `γ_σ` in that case.
pub fn decomposition_spec(params: &StandardFormParams) -> Result<DecompositionSpec> {
    let report = eof(params)?;
    if report.method == Method::Separable {
        return Err(Error::InvalidState(
            "separable states are mixtures of product states; no squeezed core".into(),
        ));
    }
    let r_opt = r_from_delta_prime(report.epr.delta0_prime)?;
    let (r1, r2) = report.squeezing.map(|s| (s.r1, s.r2)).unwrap_or((1.0, 1.0));
    let target = params.cm_form_two(r1, r2);
    let core = squeezed_vacuum_cm(r_opt);
    let m = target.matrix() - core.matrix();
    let m = 0.5 * (m + m.transpose());
    let eig = SymmetricEigen::new(m);
    let min_eigenvalue = eig.eigenvalues.min();
    if min_eigenvalue < -TOL_WEIGHT_PSD {
        return Err(Error::NotPsd { min_eigenvalue });
    }
    let scale = eig.eigenvalues.amax().max(1.0);
    let rank = eig.eigenvalues.iter().filter(|&&l| l > 1e-10 * scale).count();
    let norm_constant = (rank == 4).then(|| {
        let det: f64 = eig.eigenvalues.iter().product();
        1.0 / (std::f64::consts::PI.powi(2) * det.sqrt())
    });
    Ok(DecompositionSpec {
        params: *params,
        r_opt,
        local_squeezing: (r1, r2),
        target,
        core,
        weight_matrix: m,
        min_eigenvalue,
        rank,
        norm_constant,
    })
}

/// Symmetric square root of `M / DISPLACEMENT_SCALE`; null and slightly
/// negative directions get zero variance.
fn sampling_factor(m: &Matrix4<f64>) -> Matrix4<f64> {
    let eig = SymmetricEigen::new(m / DISPLACEMENT_SCALE);
    let roots = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
    eig.eigenvectors * Matrix4::from_diagonal(&roots) * eig.eigenvectors.transpose()
}

fn chunk_rng(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

/// `n_samples` displacements drawn from `g`. Chunk `k` uses stream `k` of
/// the seeded generator, so output does not depend on the worker count.
pub fn sample_displacements(spec: &DecompositionSpec, n_samples: usize, seed: u64) -> Vec<Vector4<f64>> {
    let factor = sampling_factor(&spec.weight_matrix);
    let chunks = n_samples.div_ceil(SAMPLE_CHUNK);
    (0..chunks)
        .into_par_iter()
        .flat_map_iter(|k| {
            let len = SAMPLE_CHUNK.min(n_samples - k * SAMPLE_CHUNK);
            let mut rng = chunk_rng(seed, k);
            (0..len)
                .map(|_| {
                    let z = Vector4::from_fn(|_, _| StandardNormal.sample(&mut rng));
                    factor * z
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

/// `γ̂ = γ_ψ + DISPLACEMENT_SCALE · ⟨ξξᵀ⟩` over the samples.
pub fn reconstruct_cm(spec: &DecompositionSpec, samples: &[Vector4<f64>]) -> CovarianceMatrix {
    if samples.is_empty() {
        return spec.core;
    }
    let partials: Vec<Matrix4<f64>> = samples
        .par_chunks(SAMPLE_CHUNK)
        .map(|chunk| chunk.iter().fold(Matrix4::zeros(), |acc, x| acc + x * x.transpose()))
        .collect();
    let total = partials.iter().fold(Matrix4::zeros(), |acc, p| acc + p);
    let moment = total / samples.len() as f64;
    CovarianceMatrix::from_matrix(spec.core.matrix() + DISPLACEMENT_SCALE * moment)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub r_opt: f64,
    pub n_samples: usize,
    pub max_abs_error: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// `max |γ_ψ + M − γ_σ|`, zero up to rounding.
    pub algebraic_error: f64,
    pub min_eigenvalue: f64,
    pub rank: usize,
}

/// Monte-Carlo reconstruction of `γ_σ` with tolerance
/// `5 √(2/n) max|γ_σ|`.
pub fn verify_decomposition(params: &StandardFormParams, n_samples: usize, seed: u64) -> Result<DecompositionReport> {
    if n_samples == 0 {
        return Err(Error::InvalidInput("need at least one sample".into()));
    }
    let spec = decomposition_spec(params)?;
    let samples = sample_displacements(&spec, n_samples, seed);
    let rebuilt = reconstruct_cm(&spec, &samples);
    let target = spec.target.matrix();
    let max_abs_error = (rebuilt.matrix() - target).amax();
    let algebraic_error = (spec.core.matrix() + spec.weight_matrix - target).amax();
    let tolerance = STANDARD_ERRORS * (2.0 / n_samples as f64).sqrt() * target.amax();
    Ok(DecompositionReport {
        r_opt: spec.r_opt,
        n_samples,
        max_abs_error,
        tolerance,
        pass: max_abs_error < tolerance,
        algebraic_error,
        min_eigenvalue: spec.min_eigenvalue,
        rank: spec.rank,
    })
}
