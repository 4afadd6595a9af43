//! Parameter sweeps: Δ(ψ_r) against squeezing for fixed `a`, and the
//! amplifier family over a (κ, n̄) grid.

use rayon::prelude::*;
use serde::Serialize;

use crate::eof::{amplifier_family, FamilyPoint};
use crate::epr::delta_pure_squeezed;
use crate::error::{Error, Result};
use crate::numerics::format_sig;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub a: f64,
    pub r: f64,
    pub delta: f64,
}

impl CurvePoint {
    pub const CSV_HEADER: &'static str = "a,r,delta";

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{}",
            format_sig(self.a, 12),
            format_sig(self.r, 12),
            format_sig(self.delta, 12)
        )
    }
}

/// `Δ(ψ_r)` on `points` equally spaced squeezings in `[0, r_max]`.
pub fn squeezed_vacuum_curve(a: f64, r_max: f64, points: usize) -> Result<Vec<CurvePoint>> {
    if !(r_max > 0.0) || !r_max.is_finite() || points < 2 {
        return Err(Error::InvalidInput(format!(
            "need r_max > 0 and at least two points, got r_max = {r_max}, points = {points}"
        )));
    }
    (0..points)
        .map(|i| {
            let r = r_max * i as f64 / (points - 1) as f64;
            Ok(CurvePoint {
                a,
                r,
                delta: delta_pure_squeezed(r, a)?,
            })
        })
        .collect()
}

impl FamilyPoint {
    pub const CSV_HEADER: &'static str = "kappa,nbar,eof,g_kappa";

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{}",
            format_sig(self.kappa, 12),
            format_sig(self.nbar, 12),
            format_sig(self.report.eof, 12),
            format_sig(self.g_kappa, 12)
        )
    }
}

/// Family members for every `(κ, n̄)` pair, κ-major, evaluated in parallel.
pub fn family_sweep(kappas: &[f64], nbars: &[f64]) -> Result<Vec<FamilyPoint>> {
    let grid: Vec<(f64, f64)> = kappas
        .iter()
        .flat_map(|&k| nbars.iter().map(move |&n| (k, n)))
        .collect();
    grid.par_iter().map(|&(k, n)| amplifier_family(k, n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epr::uncertainty_floor;

    #[test]
    fn curve_minimum_is_the_floor() {
        for a in [-1.2, -1.5, -0.7] {
            let curve = squeezed_vacuum_curve(a, 2.0, 4001).unwrap();
            let min = curve.iter().map(|p| p.delta).fold(f64::INFINITY, f64::min);
            assert!((min - uncertainty_floor(a)).abs() < 1e-6, "a = {a}");
        }
    }

    #[test]
    fn curve_starts_at_one() {
        let curve = squeezed_vacuum_curve(-1.2, 1.0, 11).unwrap();
        assert_eq!(curve[0].delta, 1.0);
        assert_eq!(curve.last().unwrap().r, 1.0);
        assert!(squeezed_vacuum_curve(-1.2, 1.0, 1).is_err());
        assert!(squeezed_vacuum_curve(0.5, 1.0, 11).is_err());
    }

    #[test]
    fn family_sweep_is_ordered() {
        let pts = family_sweep(&[1.5, 2.0], &[0.0, 1.0, 3.0]).unwrap();
        assert_eq!(pts.len(), 6);
        assert_eq!((pts[4].kappa, pts[4].nbar), (2.0, 1.0));
        assert_eq!(pts[0].to_csv_row().split(',').count(), 4);
    }
}
