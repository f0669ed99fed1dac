//! The four-qubit probe state and the entanglement-production bound.
//!
//! For a measurement basis `{ψᵢ}` on qubits A,B and orthonormal detector
//! states `{φᵢ}` on C,D the probe is `χ = ½ Σᵢ ψᵢ ⊗ φᵢ`. Measuring A,B leaves
//! C,D in `φᵢ`, so the bound is the mean entanglement of the detector states
//! minus the initial entanglement of `χ` across `AC:BD`. Subsystems are
//! ordered A,B,C,D; Alice holds A and C.

use crate::error::{Error, Result};
use crate::linalg::{
    entropy_bits, entropy_of_entanglement, hermitian_eigenvalues_in_place, permute_subsystems,
    tensor, BipartiteSplit, StateVec, C64,
};
use crate::measurement::{
    canonical_amplitudes, entropy_bound, entropy_bound_of, BasisAmplitudes, CanonicalParams,
    OrthoBasis,
};

/// All 24 ways of pairing measurement outcome `i` with detector `perm[i]`,
/// in lexicographic order starting from the identity.
pub const PAIRINGS: [[usize; 4]; 24] = lexicographic_permutations();

const fn lexicographic_permutations() -> [[usize; 4]; 24] {
    let mut out = [[0usize; 4]; 24];
    let mut n = 0;
    let mut i = 0;
    while i < 4 {
        let mut j = 0;
        while j < 4 {
            let mut k = 0;
            while k < 4 {
                if i != j && j != k && i != k {
                    out[n] = [i, j, k, 6 - i - j - k];
                    n += 1;
                }
                k += 1;
            }
            j += 1;
        }
        i += 1;
    }
    out
}

/// Which detector basis a report was evaluated at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Detector {
    /// Supplied directly by the caller.
    Explicit,
    /// Canonical-form detectors; outcome `i` is paired with detector
    /// state `pairing[i]`.
    Canonical {
        params: CanonicalParams,
        pairing: [usize; 4],
    },
}

/// Every quantity entering the bound for one measurement/detector pair, in
/// ebits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub entropy_bound: f64,
    /// Mean entanglement of the detector states across `C:D`.
    pub avg_detector_entanglement: f64,
    /// Entanglement of the probe across `AC:BD`.
    pub cut_entanglement: f64,
    pub lower_bound: f64,
    /// `lower_bound − entropy_bound`.
    pub delta: f64,
    pub detector: Detector,
}

impl BoundReport {
    fn assemble(entropy_bound: f64, avg: f64, cut: f64, detector: Detector) -> Self {
        let lower_bound = avg - cut;
        BoundReport {
            entropy_bound,
            avg_detector_entanglement: avg,
            cut_entanglement: cut,
            lower_bound,
            delta: lower_bound - entropy_bound,
            detector,
        }
    }
}

/// `χ = ½ Σᵢ ψᵢ ⊗ φᵢ` on dims `[2,2,2,2]`, ordered A,B,C,D.
///
/// Each amplitude sums its four terms in sorted order, so relabeling the
/// pairs `(ψᵢ, φᵢ)` jointly gives a bitwise identical state.
pub fn chi_state(meas: &OrthoBasis, det: &OrthoBasis) -> StateVec {
    let terms: Vec<StateVec> = meas
        .states()
        .iter()
        .zip(det.states())
        .map(|(psi, phi)| tensor(psi, phi))
        .collect();
    let amps = (0..16)
        .map(|k| {
            let mut re: Vec<f64> = terms.iter().map(|t| t.amplitudes()[k].re).collect();
            let mut im: Vec<f64> = terms.iter().map(|t| t.amplitudes()[k].im).collect();
            re.sort_by(f64::total_cmp);
            im.sort_by(f64::total_cmp);
            0.5 * C64::new(re.iter().sum(), im.iter().sum())
        })
        .collect();
    StateVec::from_parts_unchecked(amps, vec![2, 2, 2, 2])
}

/// Entanglement of a four-qubit A,B,C,D state across `AC:BD`.
pub fn cut_entanglement(chi: &StateVec) -> Result<f64> {
    if chi.dims() != [2, 2, 2, 2] {
        return Err(Error::Dims(format!(
            "probe state must have dims [2, 2, 2, 2], got {:?}",
            chi.dims()
        )));
    }
    let regrouped = permute_subsystems(chi, &[0, 2, 1, 3])?;
    entropy_of_entanglement(&regrouped, &BipartiteSplit::new(&[0, 1], 4)?)
}

/// Evaluates the bound with `ψᵢ` paired to `φᵢ` by index.
pub fn lower_bound(meas: &OrthoBasis, det: &OrthoBasis) -> BoundReport {
    let chi = chi_state(meas, det);
    let cut = cut_entanglement(&chi).expect("probe state has four qubit factors");
    BoundReport::assemble(
        entropy_bound(meas),
        entropy_bound(det),
        cut,
        Detector::Explicit,
    )
}

/// Evaluates canonical-form detectors against one fixed measurement.
///
/// This is the hot path of the search: it works on stack arrays and skips
/// the general subsystem permutation machinery.
#[derive(Debug, Clone)]
pub struct Probe {
    meas: BasisAmplitudes,
    entropy_bound: f64,
}

impl Probe {
    pub fn new(meas: &OrthoBasis) -> Self {
        let amps = meas.amplitudes();
        Probe {
            entropy_bound: entropy_bound_of(&amps),
            meas: amps,
        }
    }

    pub fn entropy_bound(&self) -> f64 {
        self.entropy_bound
    }

    /// Report for detectors `params` under one fixed pairing.
    pub fn evaluate(&self, params: &CanonicalParams, pairing: [usize; 4]) -> BoundReport {
        let det = canonical_amplitudes(params);
        let cut = paired_cut_entanglement(&self.meas, &det, &pairing);
        BoundReport::assemble(
            self.entropy_bound,
            entropy_bound_of(&det),
            cut,
            Detector::Canonical {
                params: *params,
                pairing,
            },
        )
    }

    /// Best report for `params` over all 24 pairings; the first pairing wins
    /// ties.
    pub fn evaluate_best_pairing(&self, params: &CanonicalParams) -> BoundReport {
        let det = canonical_amplitudes(params);
        let avg = entropy_bound_of(&det);
        let mut best_cut = f64::INFINITY;
        let mut best_pairing = PAIRINGS[0];
        for pairing in PAIRINGS {
            let cut = paired_cut_entanglement(&self.meas, &det, &pairing);
            if cut < best_cut {
                best_cut = cut;
                best_pairing = pairing;
            }
        }
        BoundReport::assemble(
            self.entropy_bound,
            avg,
            best_cut,
            Detector::Canonical {
                params: *params,
                pairing: best_pairing,
            },
        )
    }
}

/// `AC:BD` entanglement of `½ Σᵢ ψᵢ ⊗ φ_{pairing[i]}`.
///
/// The probe is reshaped directly into the 4×4 matrix with rows `(a, c)` and
/// columns `(b, d)`; its squared singular values are the eigenvalues of the
/// Gram matrix.
pub(crate) fn paired_cut_entanglement(
    meas: &BasisAmplitudes,
    det: &BasisAmplitudes,
    pairing: &[usize; 4],
) -> f64 {
    let mut t = [C64::default(); 16];
    for (psi, &j) in meas.iter().zip(pairing) {
        let phi = &det[j];
        for a in 0..2 {
            for b in 0..2 {
                let p = 0.5 * psi[2 * a + b];
                for cc in 0..2 {
                    for d in 0..2 {
                        t[(2 * a + cc) * 4 + 2 * b + d] += p * phi[2 * cc + d];
                    }
                }
            }
        }
    }
    let mut gram = [C64::default(); 16];
    for i in 0..4 {
        for j in i..4 {
            let mut s = C64::default();
            for k in 0..4 {
                s += t[i * 4 + k] * t[j * 4 + k].conj();
            }
            gram[i * 4 + j] = s;
            gram[j * 4 + i] = s.conj();
        }
    }
    hermitian_eigenvalues_in_place(&mut gram, 4);
    entropy_bits(&[gram[0].re, gram[5].re, gram[10].re, gram[15].re])
}
