//! JSON state input: either a full covariance matrix or standard-form
//! parameters.
//!
//! ```json
//! {"gamma": [[n, 0, kx, 0], [0, n, 0, kp], [kx, 0, m, 0], [0, kp, 0, m]]}
//! {"params": {"n": 2.0, "m": 1.5, "kx": 1.0, "kp": -1.0}}
//! ```

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::symplectic::{reduce_to_standard_params, validate_cm, CovarianceMatrix, StandardFormParams, ValidityReport};

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum StateInput {
    Gamma { gamma: [[f64; 4]; 4] },
    Params { params: StandardFormParams },
}

impl StateInput {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("state JSON: {e}")))
    }

    pub fn covariance(&self) -> CovarianceMatrix {
        match self {
            StateInput::Gamma { gamma } => CovarianceMatrix::from_rows(*gamma),
            StateInput::Params { params } => params.cm_form_one(),
        }
    }

    pub fn validate(&self) -> Result<ValidityReport> {
        validate_cm(&self.covariance())
    }

    /// Canonical standard-form parameters of a bona fide state.
    pub fn standard_params(&self) -> Result<StandardFormParams> {
        canonical_params(&self.covariance())
    }
}

/// Canonical parameters, passing already canonical input through untouched.
pub fn params_from_tuple(n: f64, m: f64, kx: f64, kp: f64) -> Result<StandardFormParams> {
    let p = StandardFormParams::new(n, m, kx, kp);
    if !p.is_finite() {
        return Err(Error::InvalidInput(format!("non-finite parameters {p:?}")));
    }
    if p.is_canonical() {
        p.validate()?;
        return Ok(p);
    }
    canonical_params(&p.cm_form_one())
}

fn canonical_params(cm: &CovarianceMatrix) -> Result<StandardFormParams> {
    let report = validate_cm(cm)?;
    if !report.is_bona_fide {
        let nu = report.symplectic_eigenvalues;
        return Err(Error::NotBonaFide {
            min_nu: nu[0].min(nu[1]),
        });
    }
    let rows = cm.to_rows();
    let as_params = StandardFormParams::new(rows[0][0], rows[2][2], rows[0][2], rows[1][3]);
    if as_params.cm_form_one() == *cm && as_params.is_canonical() {
        return Ok(as_params);
    }
    reduce_to_standard_params(cm)
}
