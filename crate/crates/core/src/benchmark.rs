//! The six benchmark states with published reference values, and their
//! recomputation cell by cell.

use serde::{Deserialize, Serialize};

use crate::bounds::{gaussian_eof, upper_bound, lower_bound};
use crate::eof::eof;
use crate::error::{Error, Result};
use crate::numerics::format_sig;
use crate::symplectic::StandardFormParams;

const FIXTURE: &str = include_str!("../data/benchmark.json");

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub eof: f64,
    pub gaussian_eof: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceRow {
    pub params: StandardFormParams,
    pub lower_bound: f64,
    /// Exact EOF from an independent method; informational only.
    pub independent: f64,
    pub eof: f64,
    /// `None` where the upper-bound surrogate is not a physical state.
    pub upper_bound: Option<f64>,
    pub gaussian_eof: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reference {
    pub version: u32,
    pub tolerances: Tolerances,
    pub rows: Vec<ReferenceRow>,
}

pub fn reference() -> Reference {
    serde_json::from_str(FIXTURE).expect("bundled table fixture is valid JSON")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cell {
    pub computed: Option<f64>,
    pub reference: Option<f64>,
    /// Absolute deviation; `None` when either side is absent.
    pub deviation: Option<f64>,
    pub ok: bool,
}

impl Cell {
    fn compare(computed: Option<f64>, reference: Option<f64>, tol: f64) -> Self {
        let deviation = match (computed, reference) {
            (Some(c), Some(r)) => Some((c - r).abs()),
            _ => None,
        };
        let ok = match (computed, reference) {
            (None, None) => true,
            (Some(_), Some(_)) => deviation.is_some_and(|d| d < tol),
            _ => false,
        };
        Cell {
            computed,
            reference,
            deviation,
            ok,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RowResult {
    pub params: StandardFormParams,
    pub eof: Cell,
    pub gaussian_eof: Cell,
    pub lower_bound: Cell,
    pub upper_bound: Cell,
    pub independent: f64,
    pub below_independent: bool,
}

impl RowResult {
    pub fn ok(&self) -> bool {
        self.eof.ok && self.gaussian_eof.ok && self.lower_bound.ok && self.upper_bound.ok
    }

    pub const CSV_HEADER: &'static str = "n,m,kx,kp,\
lower_bound,lower_bound_ref,lower_bound_dev,\
eof,eof_ref,eof_dev,\
upper_bound,upper_bound_ref,upper_bound_dev,\
gaussian_eof,gaussian_eof_ref,gaussian_eof_dev,\
independent_ref,ok";

    pub fn to_csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| format_sig(x, 12)).unwrap_or_default();
        let mut fields = vec![
            format_sig(self.params.n, 12),
            format_sig(self.params.m, 12),
            format_sig(self.params.kx, 12),
            format_sig(self.params.kp, 12),
        ];
        for cell in [&self.lower_bound, &self.eof, &self.upper_bound, &self.gaussian_eof] {
            fields.push(opt(cell.computed));
            fields.push(opt(cell.reference));
            fields.push(opt(cell.deviation));
        }
        fields.push(format_sig(self.independent, 12));
        fields.push(self.ok().to_string());
        fields.join(",")
    }
}

pub fn evaluate_row(row: &ReferenceRow, tol: &Tolerances) -> Result<RowResult> {
    let p = &row.params;
    let exact = eof(p)?.eof;
    let gaussian = match gaussian_eof(p) {
        Ok(g) => Some(g.value),
        Err(Error::Infeasible) => None,
        Err(e) => return Err(e),
    };
    let lower = lower_bound(p)?;
    let upper = upper_bound(p).value;
    Ok(RowResult {
        params: *p,
        eof: Cell::compare(Some(exact), Some(row.eof), tol.eof),
        gaussian_eof: Cell::compare(gaussian, Some(row.gaussian_eof), tol.gaussian_eof),
        lower_bound: Cell::compare(Some(lower), Some(row.lower_bound), tol.lower_bound),
        upper_bound: Cell::compare(upper, row.upper_bound, tol.upper_bound),
        independent: row.independent,
        below_independent: exact <= row.independent,
    })
}

/// Recomputes every row of the bundled reference table.
pub fn evaluate() -> Result<Vec<RowResult>> {
    let reference = reference();
    reference
        .rows
        .iter()
        .map(|row| evaluate_row(row, &reference.tolerances))
        .collect()
}
