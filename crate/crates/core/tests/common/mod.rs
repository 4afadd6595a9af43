#![allow(dead_code)]

use gauss_eof::symplectic::{local_rotation, local_squeezer};
use gauss_eof::CovarianceMatrix;
use nalgebra::Matrix4;
use rand::Rng;

/// 50:50-style mixing of the two modes with transmissivity `cos² θ`.
pub fn beam_splitter(theta: f64) -> Matrix4<f64> {
    let (c, s) = (theta.cos(), theta.sin());
    Matrix4::new(
        c, 0.0, s, 0.0, //
        0.0, c, 0.0, s, //
        -s, 0.0, c, 0.0, //
        0.0, -s, 0.0, c,
    )
}

pub fn two_mode_squeezer(r: f64) -> Matrix4<f64> {
    let (c, s) = (r.cosh(), r.sinh());
    Matrix4::new(
        c, 0.0, s, 0.0, //
        0.0, c, 0.0, -s, //
        s, 0.0, c, 0.0, //
        0.0, -s, 0.0, c,
    )
}

/// Random bona fide CM: thermal symplectic spectrum dressed by a random
/// two-mode squeezer, beam splitter and local squeezers/rotations.
pub fn random_state<R: Rng>(rng: &mut R, max_nu: f64, max_r: f64) -> CovarianceMatrix {
    let nu1 = rng.random_range(1.0..max_nu);
    let nu2 = rng.random_range(1.0..max_nu);
    let thermal = Matrix4::from_diagonal(&nalgebra::Vector4::new(nu1, nu1, nu2, nu2));
    let s = local_rotation(rng.random_range(0.0..6.3), rng.random_range(0.0..6.3))
        * local_squeezer(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5))
        * beam_splitter(rng.random_range(0.0..1.5))
        * two_mode_squeezer(rng.random_range(0.0..max_r));
    CovarianceMatrix::from_matrix(thermal).transform(&s)
}
