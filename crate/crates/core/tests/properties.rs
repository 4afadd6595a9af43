mod common;

use gauss_eof::bounds::gaussian_eof;
use gauss_eof::eof::{eof, f_aux};
use gauss_eof::epr::correlation_weight;
use gauss_eof::fock::{delta_of_spectrum, SchmidtSpectrum};
use gauss_eof::solver::{ratio_residual, correlation_residual, solve_squeezings};
use gauss_eof::symplectic::{local_rotation, local_squeezer};
use gauss_eof::{reduce_to_standard_params, CovarianceMatrix, Error, StandardFormParams};
use nalgebra::{Matrix4, Vector4};
use proptest::prelude::*;

fn state() -> impl Strategy<Value = CovarianceMatrix> {
    (
        1.0..2.5f64,
        1.0..2.5f64,
        0.0..1.2f64,
        0.0..1.5f64,
        (0.0..6.3f64, 0.0..6.3f64, -0.5..0.5f64, -0.5..0.5f64),
    )
        .prop_map(|(nu1, nu2, r, theta, (ta, tb, sa, sb))| {
            let thermal = Matrix4::from_diagonal(&Vector4::new(nu1, nu1, nu2, nu2));
            let s = local_rotation(ta, tb)
                * local_squeezer(sa, sb)
                * common::beam_splitter(theta)
                * common::two_mode_squeezer(r);
            CovarianceMatrix::from_matrix(thermal).transform(&s)
        })
}

fn local_op() -> impl Strategy<Value = Matrix4<f64>> {
    (0.0..6.3f64, 0.0..6.3f64, -1.0..1.0f64, -1.0..1.0f64, 0.0..6.3f64, 0.0..6.3f64)
        .prop_map(|(a1, b1, sa, sb, a2, b2)| local_rotation(a1, b1) * local_squeezer(sa, sb) * local_rotation(a2, b2))
}

fn eof_of(cm: &CovarianceMatrix) -> Result<f64, Error> {
    Ok(eof(&reduce_to_standard_params(cm)?)?.eof)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn eof_is_invariant_under_local_operations(cm in state(), s in local_op()) {
        let before = eof_of(&cm).unwrap();
        let after = eof_of(&cm.transform(&s)).unwrap();
        prop_assert!((before - after).abs() < 1e-8, "{} vs {}", before, after);
    }

    #[test]
    fn reduction_preserves_symplectic_spectrum(cm in state()) {
        let p = reduce_to_standard_params(&cm).unwrap();
        let a = cm.symplectic_eigenvalues();
        let b = p.cm_form_one().symplectic_eigenvalues();
        for (x, y) in a.iter().zip(b.iter()) {
            prop_assert!((x - y).abs() < 1e-8 * x.max(1.0));
        }
        prop_assert!(p.is_canonical());
    }

    #[test]
    fn solved_squeezings_satisfy_both_equations(cm in state()) {
        let p = reduce_to_standard_params(&cm).unwrap();
        prop_assume!(!p.is_product() && !p.has_positive_partial_transpose());
        prop_assume!(p.n > 1.0 + 1e-6 && p.m > 1.0 + 1e-6);
        let sol = solve_squeezings(&p).unwrap();
        let scale = p.n.max(p.m).max(1.0) * sol.r1.max(sol.r2).max(1.0 / sol.r1.min(sol.r2));
        prop_assert!(ratio_residual(&p, sol.r1, sol.r2).abs() < 1e-9 * scale);
        let r9 = correlation_residual(&p, sol.r1, sol.r2).unwrap();
        prop_assert!(r9.abs() < 1e-9 * scale);
    }

    #[test]
    fn eof_is_symmetric_under_mode_exchange(cm in state()) {
        let p = reduce_to_standard_params(&cm).unwrap();
        let swapped = StandardFormParams::new(p.m, p.n, p.kx, p.kp);
        let a = eof(&p).unwrap().eof;
        let b = eof(&swapped).unwrap().eof;
        prop_assert!((a - b).abs() < 1e-8, "{} vs {}", a, b);
    }

    #[test]
    fn uncertainty_transform_and_gaussian_bound(cm in state()) {
        let p = reduce_to_standard_params(&cm).unwrap();
        let rep = eof(&p).unwrap();
        prop_assert!(rep.eof >= 0.0);
        prop_assert!(rep.epr.delta0_prime <= rep.epr.delta0 + 1e-15);
        prop_assert_eq!(rep.eof == 0.0, rep.epr.separable || p.is_product());
        if !rep.epr.separable {
            let g = gaussian_eof(&p).unwrap();
            prop_assert!(g.value >= rep.eof - 1e-9, "E_GF {} < EOF {}", g.value, rep.eof);
            prop_assert!(g.m_opt >= 1.0);
            prop_assert!(g.residual_x.abs() < 1e-10 && g.residual_p.abs() < 1e-10);
        }
    }

    #[test]
    fn f_is_decreasing(x in 0.01..1.0f64, y in 0.01..1.0f64) {
        prop_assume!(x < y);
        prop_assert!(f_aux(x).unwrap() > f_aux(y).unwrap());
    }

    #[test]
    fn ratio_bounded_spectra_have_delta_at_most_one(
        a in -3.0..-0.3f64,
        ratios in proptest::collection::vec(0.0..1.0f64, 1..40),
    ) {
        // c_N ≤ s c_{N−1}, truncated where the tail vanishes
        let s = correlation_weight(a);
        let mut coeffs = vec![1.0];
        for q in ratios {
            let next = coeffs.last().unwrap() * q * s;
            coeffs.push(next);
        }
        let spec = SchmidtSpectrum::normalized(coeffs).unwrap();
        prop_assert!(delta_of_spectrum(&spec, a).unwrap() <= 1.0 + 1e-12);
    }
}
