//! Seeded random draws of states, unitaries and canonical parameters.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c, StateVec, C64};
use crate::measurement::{CanonicalParams, Unitary2};

fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Unitarily invariant random pure state over `dims`.
pub fn random_state<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> StateVec {
    let len = dims.iter().product();
    let amps = (0..len).map(|_| gaussian_complex(rng)).collect();
    StateVec::normalized(amps, dims.to_vec()).expect("gaussian vector is nonzero")
}

/// Haar-distributed 2×2 unitary: Gram–Schmidt on two Gaussian columns.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R) -> Unitary2 {
    let mut col0 = [gaussian_complex(rng), gaussian_complex(rng)];
    let mut col1 = [gaussian_complex(rng), gaussian_complex(rng)];
    let n0 = (col0[0].norm_sqr() + col0[1].norm_sqr()).sqrt();
    col0.iter_mut().for_each(|z| *z /= n0);
    let proj = col0[0].conj() * col1[0] + col0[1].conj() * col1[1];
    col1[0] -= proj * col0[0];
    col1[1] -= proj * col0[1];
    let n1 = (col1[0].norm_sqr() + col1[1].norm_sqr()).sqrt();
    col1.iter_mut().for_each(|z| *z /= n1);
    Unitary2::new([[col0[0], col1[0]], [col0[1], col1[1]]]).expect("Gram-Schmidt output is unitary")
}

/// Uniform draw from the canonical parameter box.
pub fn random_params<R: Rng + ?Sized>(rng: &mut R) -> CanonicalParams {
    use std::f64::consts::{FRAC_PI_2, TAU};
    let mut v = [0.0; 8];
    for (k, slot) in v.iter_mut().enumerate() {
        *slot = if CanonicalParams::is_phase_index(k) {
            rng.random_range(0.0..TAU)
        } else {
            rng.random_range(0.0..=FRAC_PI_2)
        };
    }
    CanonicalParams::from_array(v).expect("draw lies inside the parameter box")
}
