//! Scalar root finding, golden-section minimization and a few small
//! floating-point helpers shared by the solver modules.

/// Real roots of `a x² + b x + c = 0`, computed without cancellation.
///
/// Degenerates to the linear solution when `a` vanishes. Returns an empty
/// vector when the discriminant is negative beyond `-1e-14 · b²`.
pub fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a == 0.0 {
        if b == 0.0 {
            return Vec::new();
        }
        return vec![-c / b];
    }
    let mut disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        if disc < -1e-14 * b * b.max(1.0) {
            return Vec::new();
        }
        disc = 0.0;
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q == 0.0 {
        // b == 0 and c == 0
        return vec![0.0, 0.0];
    }
    let x1 = q / a;
    let x2 = c / q;
    vec![x1, x2]
}

/// Locate a root of `f` inside `[lo, hi]` where `f(lo)` and `f(hi)` have
/// opposite signs (or one of them is zero).
///
/// Secant steps are taken when they land strictly inside the current bracket
/// and shrink it by at least half; otherwise the step falls back to
/// bisection. Stops when the bracket is narrower than `x_tol` relative to
/// its midpoint or when `f` vanishes exactly.
pub fn bisect_secant<F>(f: F, mut lo: f64, mut hi: f64, x_tol: f64, max_iter: usize) -> Option<f64>
where
    F: Fn(f64) -> f64,
{
    let mut f_lo = f(lo);
    let mut f_hi = f(hi);
    if !f_lo.is_finite() || !f_hi.is_finite() {
        return None;
    }
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return None;
    }

    for _ in 0..max_iter {
        let width = hi - lo;
        if width.abs() <= x_tol * (0.5 * (lo + hi)).abs().max(1.0) {
            break;
        }
        let secant = hi - f_hi * (hi - lo) / (f_hi - f_lo);
        let mid = 0.5 * (lo + hi);
        let candidate = if secant.is_finite() && secant > lo && secant < hi {
            secant
        } else {
            mid
        };
        let f_c = f(candidate);
        if !f_c.is_finite() {
            return None;
        }
        if f_c == 0.0 {
            return Some(candidate);
        }
        if f_c.signum() == f_lo.signum() {
            lo = candidate;
            f_lo = f_c;
        } else {
            hi = candidate;
            f_hi = f_c;
        }
        // secant stalled on one side: force a bisection step
        if (hi - lo).abs() > 0.5 * width.abs() {
            let mid = 0.5 * (lo + hi);
            let f_m = f(mid);
            if !f_m.is_finite() {
                return None;
            }
            if f_m == 0.0 {
                return Some(mid);
            }
            if f_m.signum() == f_lo.signum() {
                lo = mid;
                f_lo = f_m;
            } else {
                hi = mid;
                f_hi = f_m;
            }
        }
    }

    Some(if f_lo.abs() < f_hi.abs() { lo } else { hi })
}

/// Golden-section search for the minimum of `f` on `[a, b]`.
///
/// Returns `(x_min, f_min)`. Non-finite evaluations are treated as `+inf`,
/// which lets callers encode infeasible regions directly.
pub fn golden_section_min<F>(f: F, mut a: f64, mut b: f64, x_tol: f64, max_iter: usize) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let eval = |x: f64| {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };

    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = eval(x1);
    let mut f2 = eval(x2);

    for _ in 0..max_iter {
        if (b - a).abs() <= x_tol {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = eval(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = eval(x2);
        }
    }

    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Neumaier-compensated sum.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `x log₂ x` with the continuous extension `0 log₂ 0 = 0`.
pub fn xlog2x(x: f64) -> f64 {
    if x <= 1e-300 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Format with at most `digits` significant digits, '.' decimal point and
/// no exponent for ordinary magnitudes. Used for diff-stable CSV output.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .unwrap_or(x);
    let magnitude = rounded.abs().log10();
    if (-6.0..15.0).contains(&magnitude) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_roots_are_accurate_under_cancellation() {
        // x² − 1e8 x + 1 = 0: small root ≈ 1e-8
        let roots = quadratic_roots(1.0, -1e8, 1.0);
        let small = roots.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!((small - 1e-8).abs() < 1e-22);
    }

    #[test]
    fn quadratic_linear_and_empty_cases() {
        assert_eq!(quadratic_roots(0.0, 2.0, -4.0), vec![2.0]);
        assert!(quadratic_roots(1.0, 0.0, 1.0).is_empty());
    }

    #[test]
    fn bisect_secant_finds_cubic_root() {
        let root = bisect_secant(|x| x * x * x - 2.0, 0.0, 2.0, 1e-15, 200).unwrap();
        assert!((root - 2f64.cbrt()).abs() < 1e-14);
    }

    #[test]
    fn bisect_secant_rejects_same_sign() {
        assert!(bisect_secant(|x| x * x + 1.0, -1.0, 1.0, 1e-12, 100).is_none());
    }

    #[test]
    fn bisect_secant_endpoint_root() {
        assert_eq!(bisect_secant(|x| x - 1.0, 1.0, 3.0, 1e-12, 100), Some(1.0));
    }

    #[test]
    fn golden_section_parabola() {
        let (x, fx) = golden_section_min(|x| (x - 0.3).powi(2) + 1.0, -1.0, 2.0, 1e-12, 500);
        assert!((x - 0.3).abs() < 1e-6);
        assert!((fx - 1.0).abs() < 1e-12);
    }

    #[test]
    fn golden_section_treats_nan_as_infeasible() {
        let (x, _) = golden_section_min(
            |x| if x < 0.5 { f64::NAN } else { x },
            0.0,
            1.0,
            1e-12,
            500,
        );
        assert!((x - 0.5).abs() < 1e-9);
    }

    #[test]
    fn compensated_sum_beats_naive() {
        let values = std::iter::once(1.0).chain(std::iter::repeat(1e-16).take(10_000));
        let s = compensated_sum(values);
        assert!((s - (1.0 + 1e-12)).abs() < 1e-15);
    }

    #[test]
    fn format_sig_twelve_digits() {
        assert_eq!(format_sig(0.20222984004567891, 12), "0.202229840046");
        assert_eq!(format_sig(2.0, 12), "2");
        assert_eq!(format_sig(-1.5, 12), "-1.5");
        assert_eq!(format_sig(1.25e-9, 12), "1.25e-9");
    }
}
