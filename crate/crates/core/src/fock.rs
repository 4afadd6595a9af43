//! Truncated Fock-space checks: Schmidt spectra of two-mode squeezed
//! states, their entanglement entropy, the spectrum functional `δ(c)`, and a
//! randomized probe that geometric spectra minimize entropy at fixed `δ`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::epr::{delta_prime, correlation_weight, r_from_delta_prime, uncertainty_floor};
use crate::error::{Error, Result};
use crate::numerics::{bisect_secant, compensated_sum, xlog2x};

/// Default truncation. At `r = 2` the geometric tail is `tanh^{2048}(2) ≈ 1e-33`.
pub const DEFAULT_TRUNCATION: usize = 1024;
/// Largest tail mass accepted by entropy and δ evaluations.
pub const TOL_TAIL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchmidtSpectrum {
    coeffs: Vec<f64>,
    truncation: usize,
    tail_mass: f64,
}

impl SchmidtSpectrum {
    /// Sorts into non-increasing order and records `1 − Σ c²` as tail mass.
    pub fn from_coeffs(mut coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("empty Schmidt spectrum".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(Error::InvalidInput(
                "Schmidt coefficients must be finite and non-negative".into(),
            ));
        }
        coeffs.sort_by(|a, b| b.total_cmp(a));
        let norm = compensated_sum(coeffs.iter().map(|c| c * c));
        if norm > 1.0 + 1e-12 {
            return Err(Error::InvalidInput(format!("Σ c² = {norm} exceeds 1")));
        }
        Ok(SchmidtSpectrum {
            truncation: coeffs.len(),
            coeffs,
            tail_mass: (1.0 - norm).max(0.0),
        })
    }

    /// Rescales to unit norm before sorting.
    pub fn normalized(coeffs: Vec<f64>) -> Result<Self> {
        let norm = compensated_sum(coeffs.iter().map(|c| c * c)).sqrt();
        if !(norm > 0.0) {
            return Err(Error::InvalidInput("spectrum has zero norm".into()));
        }
        Self::from_coeffs(coeffs.into_iter().map(|c| c / norm).collect())
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    fn check_tail(&self) -> Result<()> {
        if self.tail_mass >= TOL_TAIL {
            return Err(Error::TruncationTooCoarse {
                tail_mass: self.tail_mass,
            });
        }
        Ok(())
    }
}

/// `c_N = tanhᴺ r / cosh r` for `N < n_trunc`; the tail mass is the
/// geometric remainder `tanh^{2 n_trunc} r`.
pub fn schmidt_coeffs_squeezed(r: f64, n_trunc: usize) -> Result<SchmidtSpectrum> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::DomainError(format!("squeezing r = {r} must be finite and ≥ 0")));
    }
    if n_trunc == 0 {
        return Err(Error::InvalidInput("truncation must be positive".into()));
    }
    let t = r.tanh();
    let mut c = 1.0 / r.cosh();
    let mut coeffs = Vec::with_capacity(n_trunc);
    for _ in 0..n_trunc {
        coeffs.push(c);
        c *= t;
    }
    Ok(SchmidtSpectrum {
        coeffs,
        truncation: n_trunc,
        tail_mass: (t * t).powi(n_trunc as i32),
    })
}

/// `e(c) = −Σ c_N² log₂ c_N²`.
pub fn entropy_of_spectrum(c: &SchmidtSpectrum) -> Result<f64> {
    c.check_tail()?;
    Ok(-compensated_sum(c.coeffs.iter().map(|x| xlog2x(x * x))))
}

/// `δ(c) = 1 + 2 Σ_{N≥1} N (c_N² − s c_N c_{N−1})` with `s = 2/(a² + 1/a²)`.
pub fn delta_of_spectrum(c: &SchmidtSpectrum, a: f64) -> Result<f64> {
    if !(a < 0.0) || !a.is_finite() {
        return Err(Error::DomainError(format!("a = {a} must be negative")));
    }
    c.check_tail()?;
    Ok(delta_unchecked(&c.coeffs, correlation_weight(a)))
}

fn delta_unchecked(coeffs: &[f64], s: f64) -> f64 {
    let terms = coeffs.windows(2).enumerate().map(|(i, w)| {
        let n = (i + 1) as f64;
        n * (w[1] * w[1] - s * w[1] * w[0])
    });
    1.0 + 2.0 * compensated_sum(terms)
}

/// The geometric spectrum of least entropy among unit-norm spectra with
/// `δ(c) = delta`: that of `ψ_r` with `e^{−2r} = Δ′(delta, b(a))`.
pub fn minimal_entropy_spectrum(delta: f64, a: f64, n_trunc: usize) -> Result<SchmidtSpectrum> {
    if !(a < 0.0) {
        return Err(Error::DomainError(format!("a = {a} must be negative")));
    }
    let b = uncertainty_floor(a);
    if !(delta >= b && delta <= 1.0) {
        return Err(Error::DomainError(format!("Δ = {delta} outside [{b}, 1]")));
    }
    let r = r_from_delta_prime(delta_prime(delta, b)?)?;
    schmidt_coeffs_squeezed(r, n_trunc)
}

/// `r*` with `tanh 2r* = 2/(a² + 1/a²)`, where `δ` of geometric spectra is
/// smallest.
pub fn critical_squeezing(a: f64) -> f64 {
    0.5 * correlation_weight(a).min(1.0 - 1e-16).atanh()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeReport {
    pub trials: usize,
    pub passed: usize,
    /// Trials where no perturbed spectrum with the target δ was bracketed.
    pub unbracketed: usize,
    /// Smallest `e(c̃) − e(c^(Δ))` over evaluated trials.
    pub worst_margin: f64,
    pub target_entropy: f64,
}

/// Number of leading coefficients that receive random perturbations.
const PROBE_PERTURBED: usize = 20;
const PROBE_TOL: f64 = 1e-9;
const PROBE_AMPLITUDE: f64 = 0.1;

fn perturbed_spectrum(weights: &[f64], r: f64, n_trunc: usize) -> Vec<f64> {
    let t = r.tanh();
    let mut c = 1.0 / r.cosh();
    let mut out = Vec::with_capacity(n_trunc);
    for i in 0..n_trunc {
        out.push(c * weights.get(i).copied().unwrap_or(1.0));
        c *= t;
    }
    let norm = compensated_sum(out.iter().map(|x| x * x)).sqrt();
    out.iter_mut().for_each(|x| *x /= norm);
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

/// Smallest carrier squeezing in `(0, r_hi]` where `mismatch` changes sign.
fn first_crossing<F: Fn(f64) -> f64>(mismatch: &F, r_hi: f64) -> Option<f64> {
    const STEPS: usize = 200;
    let mut lo = 1e-12;
    let mut f_lo = mismatch(lo);
    for i in 1..=STEPS {
        let hi = r_hi * i as f64 / STEPS as f64;
        let f_hi = mismatch(hi);
        if f_lo.signum() != f_hi.signum() {
            return bisect_secant(mismatch, lo, hi, 1e-15, 400);
        }
        lo = hi;
        f_lo = f_hi;
    }
    None
}

/// Randomized check that no perturbed spectrum with `δ = delta` has lower
/// entropy than the geometric minimizer.
///
/// Each trial multiplies the leading coefficients of a geometric carrier by
/// `1 + ε z_N` (`z_N` uniform in `[−1, 1]`, `ε` uniform in `(0, 0.1)`),
/// renormalizes, and takes the smallest carrier squeezing at which `δ`
/// matches.
pub fn minimality_probe(delta: f64, a: f64, trials: usize, seed: u64, n_trunc: usize) -> Result<ProbeReport> {
    let target = minimal_entropy_spectrum(delta, a, n_trunc)?;
    let target_entropy = entropy_of_spectrum(&target)?;
    let s = correlation_weight(a);
    let r_hi = (2.0 * critical_squeezing(a)).min(3.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ProbeReport {
        trials,
        passed: 0,
        unbracketed: 0,
        worst_margin: f64::INFINITY,
        target_entropy,
    };
    for _ in 0..trials {
        let amp: f64 = rng.random_range(0.0..PROBE_AMPLITUDE);
        let weights: Vec<f64> = (0..PROBE_PERTURBED)
            .map(|_| 1.0 + amp * rng.random_range(-1.0..=1.0))
            .collect();
        let mismatch = |r: f64| delta_unchecked(&perturbed_spectrum(&weights, r, n_trunc), s) - delta;
        let Some(r) = first_crossing(&mismatch, r_hi) else {
            report.unbracketed += 1;
            continue;
        };
        let probe = SchmidtSpectrum::from_coeffs(perturbed_spectrum(&weights, r, n_trunc))?;
        let margin = entropy_of_spectrum(&probe)? - target_entropy;
        report.worst_margin = report.worst_margin.min(margin);
        if margin >= -PROBE_TOL {
            report.passed += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eof::{f_aux, squeezed_vacuum_entropy};
    use approx::assert_abs_diff_eq;

    #[test]
    fn vacuum_spectrum() {
        let c = schmidt_coeffs_squeezed(0.0, 8).unwrap();
        assert_eq!(c.coeffs()[0], 1.0);
        assert!(c.coeffs()[1..].iter().all(|&x| x == 0.0));
        assert_eq!(c.tail_mass(), 0.0);
        assert_eq!(entropy_of_spectrum(&c).unwrap(), 0.0);
        assert_eq!(delta_of_spectrum(&c, -1.3).unwrap(), 1.0);
    }

    #[test]
    fn tail_mass_is_geometric() {
        let c = schmidt_coeffs_squeezed(0.5, 200).unwrap();
        assert!(c.tail_mass() < 1e-60);
        for r in [0.1, 0.9, 1.7] {
            let c = schmidt_coeffs_squeezed(r, 30).unwrap();
            let norm: f64 = compensated_sum(c.coeffs().iter().map(|x| x * x));
            assert_abs_diff_eq!(norm + c.tail_mass(), 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn default_truncation_covers_r_two() {
        let c = schmidt_coeffs_squeezed(2.0, DEFAULT_TRUNCATION).unwrap();
        assert!(c.tail_mass() < 1e-27);
    }

    #[test]
    fn one_ebit() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let c = SchmidtSpectrum::from_coeffs(vec![h, h]).unwrap();
        assert_abs_diff_eq!(entropy_of_spectrum(&c).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn entropy_matches_closed_form() {
        let c = schmidt_coeffs_squeezed(0.8, 400).unwrap();
        assert_abs_diff_eq!(entropy_of_spectrum(&c).unwrap(), squeezed_vacuum_entropy(0.8), epsilon = 1e-10);
    }

    #[test]
    fn coarse_truncation_is_rejected() {
        let c = schmidt_coeffs_squeezed(1.5, 20).unwrap();
        assert!(matches!(entropy_of_spectrum(&c), Err(Error::TruncationTooCoarse { .. })));
        assert!(matches!(delta_of_spectrum(&c, -1.0), Err(Error::TruncationTooCoarse { .. })));
    }

    #[test]
    fn geometric_delta_identity() {
        for (r, a) in [(0.3, -1.0), (0.7, -1.4), (1.2, -0.6), (0.05, -2.5)] {
            let c = schmidt_coeffs_squeezed(r, DEFAULT_TRUNCATION).unwrap();
            let expect = (2.0 * r).cosh() - correlation_weight(a) * (2.0 * r).sinh();
            assert_abs_diff_eq!(delta_of_spectrum(&c, a).unwrap(), expect, epsilon = 1e-10);
        }
        let c = schmidt_coeffs_squeezed(0.9, DEFAULT_TRUNCATION).unwrap();
        assert_abs_diff_eq!(delta_of_spectrum(&c, -1.0).unwrap(), (-1.8f64).exp(), epsilon = 1e-12);
    }

    #[test]
    fn entropy_delta_consistency() {
        for r in [0.1, 0.6, 1.4] {
            let c = schmidt_coeffs_squeezed(r, DEFAULT_TRUNCATION).unwrap();
            let via_f = f_aux(delta_of_spectrum(&c, -1.0).unwrap()).unwrap();
            assert_abs_diff_eq!(via_f, entropy_of_spectrum(&c).unwrap(), epsilon = 1e-9);
        }
    }

    #[test]
    fn minimal_spectrum_roundtrip() {
        for (d, a) in [(0.5, -1.0), (0.8, -1.3), (0.7, -0.7), (0.999, -2.0)] {
            let c = minimal_entropy_spectrum(d, a, DEFAULT_TRUNCATION).unwrap();
            assert_abs_diff_eq!(delta_of_spectrum(&c, a).unwrap(), d, epsilon = 1e-9);
        }
        let c = minimal_entropy_spectrum(1.0, -1.2, 16).unwrap();
        assert_eq!(entropy_of_spectrum(&c).unwrap(), 0.0);
        assert!(minimal_entropy_spectrum(0.1, -2.0, 16).is_err());
    }

    #[test]
    fn probe_finds_no_counterexample() {
        let a = -1.2;
        let r0 = 0.5;
        let c = schmidt_coeffs_squeezed(r0, DEFAULT_TRUNCATION).unwrap();
        let d = delta_of_spectrum(&c, a).unwrap();
        let rep = minimality_probe(d, a, 40, 11, 256).unwrap();
        assert_eq!(rep.passed, rep.trials, "{rep:?}");
        assert!(rep.worst_margin >= -1e-9);
    }

    #[test]
    fn probe_is_reproducible() {
        let a = -0.8;
        let d = delta_of_spectrum(&schmidt_coeffs_squeezed(0.4, 256).unwrap(), a).unwrap();
        let x = minimality_probe(d, a, 10, 99, 256).unwrap();
        let y = minimality_probe(d, a, 10, 99, 256).unwrap();
        assert_eq!(x, y);
    }
}
