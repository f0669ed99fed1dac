//! Reference computations that avoid the library's reshape/Jacobi route:
//! explicit density matrices, partial traces and nalgebra's Hermitian
//! eigensolver.

#![allow(dead_code)]

use entcost::{StateVec, C64};
use nalgebra::DMatrix;

/// `|x⟩⟨x|` as a dense matrix.
pub fn density(x: &StateVec) -> DMatrix<C64> {
    let v = nalgebra::DVector::from_column_slice(x.amplitudes());
    &v * v.adjoint()
}

/// Traces out every qubit not in `keep` from a density matrix on `n` qubits.
pub fn partial_trace_qubits(rho: &DMatrix<C64>, n: usize, keep: &[usize]) -> DMatrix<C64> {
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let dk = 1 << keep.len();
    let dt = 1 << traced.len();
    let index = |kept_bits: usize, traced_bits: usize| -> usize {
        let mut idx = 0;
        for q in 0..n {
            let bit = if let Some(p) = keep.iter().position(|&k| k == q) {
                (kept_bits >> (keep.len() - 1 - p)) & 1
            } else {
                let p = traced.iter().position(|&t| t == q).unwrap();
                (traced_bits >> (traced.len() - 1 - p)) & 1
            };
            idx = (idx << 1) | bit;
        }
        idx
    };
    DMatrix::from_fn(dk, dk, |i, j| {
        (0..dt).map(|t| rho[(index(i, t), index(j, t))]).sum()
    })
}

pub fn eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

pub fn von_neumann_bits(ev: &[f64]) -> f64 {
    ev.iter()
        .map(|&p| p.clamp(0.0, 1.0))
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

/// `AC:BD` entanglement of an A,B,C,D state, via `ρ_AC`.
pub fn cut_entropy_oracle(chi: &StateVec) -> f64 {
    von_neumann_bits(&eigenvalues(&partial_trace_qubits(
        &density(chi),
        4,
        &[0, 2],
    )))
}

/// Eigenvalues of `ρ_AB` for an A,B,C,D state.
pub fn ab_marginal_spectrum(chi: &StateVec) -> Vec<f64> {
    eigenvalues(&partial_trace_qubits(&density(chi), 4, &[0, 1]))
}

/// `A:B` entanglement of a two-qubit state, via `ρ_A`.
pub fn two_qubit_entropy_oracle(x: &StateVec) -> f64 {
    von_neumann_bits(&eigenvalues(&partial_trace_qubits(&density(x), 2, &[0])))
}

/// `½ Σᵢ ψᵢ ⊗ φᵢ` assembled by explicit index arithmetic.
pub fn chi_oracle(meas: &[[C64; 4]; 4], det: &[[C64; 4]; 4]) -> StateVec {
    let mut amps = vec![C64::new(0.0, 0.0); 16];
    for i in 0..4 {
        for ab in 0..4 {
            for cd in 0..4 {
                amps[ab * 4 + cd] += 0.5 * meas[i][ab] * det[i][cd];
            }
        }
    }
    StateVec::new(amps, vec![2, 2, 2, 2]).unwrap()
}

/// Bound evaluated entirely through the oracle route.
pub fn delta_oracle(meas: &[[C64; 4]; 4], det: &[[C64; 4]; 4]) -> (f64, f64, f64) {
    let ent = |a: &[C64; 4]| two_qubit_entropy_oracle(&StateVec::two_qubit(*a).unwrap());
    let eb: f64 = meas.iter().map(ent).sum::<f64>() / 4.0;
    let ecd: f64 = det.iter().map(ent).sum::<f64>() / 4.0;
    let cut = cut_entropy_oracle(&chi_oracle(meas, det));
    (ecd - cut - eb, ecd, cut)
}
