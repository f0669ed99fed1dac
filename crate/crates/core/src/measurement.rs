//! Two-qubit orthonormal bases: the eight-angle canonical form, a few named
//! bases, and local-unitary images.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, TAU};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{c, inner_product, phase, two_qubit_entropy, StateVec, C64};
use crate::tolerance::TOL_ORTHO;

/// Amplitudes of four two-qubit states, `|00⟩,|01⟩,|10⟩,|11⟩` order.
pub type BasisAmplitudes = [[C64; 4]; 4];

const NAMES: [&str; 8] = ["a", "b", "c", "d", "u", "v", "x", "y"];

/// The eight real parameters of the canonical form.
///
/// `a, c, u, x` are angles in `[0, π/2]`; `b, d, v, y` are phases in `[0, 2π)`.
/// Array order everywhere is `a, b, c, d, u, v, x, y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalParams([f64; 8]);

impl CanonicalParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(a: f64, b: f64, c: f64, d: f64, u: f64, v: f64, x: f64, y: f64) -> Result<Self> {
        Self::from_array([a, b, c, d, u, v, x, y])
    }

    pub fn from_array(values: [f64; 8]) -> Result<Self> {
        for (k, &val) in values.iter().enumerate() {
            let ok = if Self::is_phase_index(k) {
                (0.0..TAU).contains(&val)
            } else {
                (0.0..=FRAC_PI_2).contains(&val)
            };
            if !ok {
                let range = if Self::is_phase_index(k) {
                    "[0, 2π)"
                } else {
                    "[0, π/2]"
                };
                return Err(Error::Param(format!(
                    "{} = {val} is outside {range}",
                    NAMES[k]
                )));
            }
        }
        Ok(CanonicalParams(values))
    }

    /// All eight parameters zero: the computational basis up to signs.
    pub fn zero() -> Self {
        CanonicalParams([0.0; 8])
    }

    /// `b, d, v, y` are phases; the rest are angles.
    pub fn is_phase_index(k: usize) -> bool {
        k % 2 == 1
    }

    pub fn name(k: usize) -> &'static str {
        NAMES[k]
    }

    /// Length of the admissible interval for parameter `k`.
    pub fn range_len(k: usize) -> f64 {
        if Self::is_phase_index(k) {
            TAU
        } else {
            FRAC_PI_2
        }
    }

    pub fn as_array(&self) -> &[f64; 8] {
        &self.0
    }

    pub fn get(&self, k: usize) -> f64 {
        self.0[k]
    }

    /// Sets parameter `k`, clamping angles into `[0, π/2]` and wrapping
    /// phases into `[0, 2π)`.
    pub fn with_folded(mut self, k: usize, value: f64) -> Self {
        self.0[k] = if Self::is_phase_index(k) {
            wrap_phase(value)
        } else {
            value.clamp(0.0, FRAC_PI_2)
        };
        self
    }

    /// Parameters of the complex-conjugate basis: every phase negated.
    pub fn mirrored(&self) -> Self {
        let mut out = *self;
        for k in (1..8).step_by(2) {
            out.0[k] = wrap_phase(-self.0[k]);
        }
        out
    }
}

impl fmt::Display for CanonicalParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}={v}", NAMES[k])?;
        }
        Ok(())
    }
}

pub(crate) fn wrap_phase(v: f64) -> f64 {
    let w = v.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Four mutually orthonormal two-qubit states.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoBasis {
    states: [StateVec; 4],
}

/// Outcome of [`validate_orthonormal`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthoCheck {
    pub orthonormal: bool,
    pub max_deviation: f64,
}

impl OrthoBasis {
    /// Accepts four two-qubit states whose Gram matrix is the identity to
    /// within [`TOL_ORTHO`].
    pub fn new(states: [StateVec; 4]) -> Result<Self> {
        if let Some(s) = states.iter().find(|s| s.dims() != [2, 2]) {
            return Err(Error::Basis(format!(
                "state has dims {:?}, expected [2, 2]",
                s.dims()
            )));
        }
        let check = validate_orthonormal(&states, TOL_ORTHO)?;
        if !check.orthonormal {
            return Err(Error::Basis(format!(
                "Gram matrix deviates from identity by {:e}",
                check.max_deviation
            )));
        }
        Ok(OrthoBasis { states })
    }

    pub fn from_amplitudes(amps: BasisAmplitudes) -> Result<Self> {
        let states = amps.map(|a| StateVec::from_parts_unchecked(a.to_vec(), vec![2, 2]));
        Self::new(states)
    }

    pub(crate) fn from_amplitudes_unchecked(amps: &BasisAmplitudes) -> Self {
        OrthoBasis {
            states: amps.map(|a| StateVec::from_parts_unchecked(a.to_vec(), vec![2, 2])),
        }
    }

    pub fn states(&self) -> &[StateVec; 4] {
        &self.states
    }

    pub fn amplitudes(&self) -> BasisAmplitudes {
        self.states.each_ref().map(|s| {
            let a = s.amplitudes();
            [a[0], a[1], a[2], a[3]]
        })
    }

    /// Reorders the states so that entry `i` of the result is `self[perm[i]]`.
    pub fn permuted(&self, perm: [usize; 4]) -> Result<Self> {
        let mut seen = [false; 4];
        if perm
            .iter()
            .any(|&p| p >= 4 || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::Perm(format!(
                "{perm:?} is not a permutation of 0..4"
            )));
        }
        Ok(OrthoBasis {
            states: perm.map(|p| self.states[p].clone()),
        })
    }
}

/// Checks whether the Gram matrix of `states` is the identity to within `tol`
/// entrywise, and reports the largest deviation.
pub fn validate_orthonormal(states: &[StateVec], tol: f64) -> Result<OrthoCheck> {
    let mut max_deviation: f64 = 0.0;
    for (i, si) in states.iter().enumerate() {
        for (j, sj) in states.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            let dev = (inner_product(si, sj)? - target).norm();
            max_deviation = max_deviation.max(dev);
        }
    }
    Ok(OrthoCheck {
        orthonormal: max_deviation < tol,
        max_deviation,
    })
}

/// Canonical-form amplitudes for `p`.
///
/// ```text
/// ψ₁  = cos a|00⟩ + e^{ib} sin a |1⟩(cos u|0⟩ + e^{iv} sin u|1⟩)
/// ψ₂  = cos c|01⟩ + e^{id} sin c |1⟩(e^{-iv} sin u|0⟩ − cos u|1⟩)
/// ψ₁⊥ = e^{-ib} sin a|00⟩ − cos a |1⟩(cos u|0⟩ + e^{iv} sin u|1⟩)
/// ψ₂⊥ = e^{-id} sin c|01⟩ − cos c |1⟩(e^{-iv} sin u|0⟩ − cos u|1⟩)
/// ψ₃  = cos x ψ₁⊥ + e^{iy} sin x ψ₂⊥
/// ψ₄  = e^{-iy} sin x ψ₁⊥ − cos x ψ₂⊥
/// ```
pub fn canonical_amplitudes(p: &CanonicalParams) -> BasisAmplitudes {
    let [a, b, cc, d, u, v, x, y] = p.0;
    let (sa, ca) = a.sin_cos();
    let (sc, cc) = cc.sin_cos();
    let (su, cu) = u.sin_cos();
    let (sx, cx) = x.sin_cos();
    let (eb, ed, ev, ey) = (phase(b), phase(d), phase(v), phase(y));
    let zero = C64::default();

    // second-qubit states |q1⟩ = cos u|0⟩ + e^{iv} sin u|1⟩ and its partner
    let q1 = [c(cu, 0.0), ev * su];
    let q2 = [ev.conj() * su, c(-cu, 0.0)];

    let psi1 = [c(ca, 0.0), zero, eb * sa * q1[0], eb * sa * q1[1]];
    let psi2 = [zero, c(cc, 0.0), ed * sc * q2[0], ed * sc * q2[1]];
    let perp1 = [eb.conj() * sa, zero, -ca * q1[0], -ca * q1[1]];
    let perp2 = [zero, ed.conj() * sc, -cc * q2[0], -cc * q2[1]];

    let mut psi3 = [zero; 4];
    let mut psi4 = [zero; 4];
    for k in 0..4 {
        psi3[k] = cx * perp1[k] + ey * sx * perp2[k];
        psi4[k] = ey.conj() * sx * perp1[k] - cx * perp2[k];
    }
    [psi1, psi2, psi3, psi4]
}

/// Builds the measurement basis `{ψ₁, ψ₂, ψ₃, ψ₄}` for `p`.
pub fn build_basis(p: &CanonicalParams) -> OrthoBasis {
    let amps = canonical_amplitudes(p);
    let basis = OrthoBasis::from_amplitudes_unchecked(&amps);
    debug_assert!(
        validate_orthonormal(basis.states(), TOL_ORTHO)
            .unwrap()
            .orthonormal
    );
    basis
}

/// Mean entanglement of the four basis states across the `A|B` cut.
pub fn entropy_bound(basis: &OrthoBasis) -> f64 {
    entropy_bound_of(&basis.amplitudes())
}

pub(crate) fn entropy_bound_of(amps: &BasisAmplitudes) -> f64 {
    // summed in sorted order so the result does not depend on state order
    let mut e = amps.each_ref().map(two_qubit_entropy);
    e.sort_by(f64::total_cmp);
    e.iter().sum::<f64>() / 4.0
}

/// Named bases singled out as exceptional cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialBasis {
    /// `|00⟩, |01⟩, |10⟩, |11⟩`
    Product,
    /// `Φ+, Φ−, Ψ+, Ψ−`
    Bell,
    /// `Φ+, Φ−, |01⟩, |10⟩`
    CaseIii,
}

impl SpecialBasis {
    pub const ALL: [SpecialBasis; 3] = [
        SpecialBasis::Product,
        SpecialBasis::Bell,
        SpecialBasis::CaseIii,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SpecialBasis::Product => "product",
            SpecialBasis::Bell => "bell",
            SpecialBasis::CaseIii => "case_iii",
        }
    }
}

impl FromStr for SpecialBasis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "product" => Ok(SpecialBasis::Product),
            "bell" => Ok(SpecialBasis::Bell),
            "case_iii" => Ok(SpecialBasis::CaseIii),
            other => Err(Error::Name(other.to_string())),
        }
    }
}

impl fmt::Display for SpecialBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The named basis, exactly as listed.
pub fn special_basis(which: SpecialBasis) -> OrthoBasis {
    let (o, h) = (C64::default(), c(FRAC_1_SQRT_2, 0.0));
    let one = c(1.0, 0.0);
    let phi_plus = [h, o, o, h];
    let phi_minus = [h, o, o, -h];
    let amps = match which {
        SpecialBasis::Product => [
            [one, o, o, o],
            [o, one, o, o],
            [o, o, one, o],
            [o, o, o, one],
        ],
        SpecialBasis::Bell => [phi_plus, phi_minus, [o, h, h, o], [o, h, -h, o]],
        SpecialBasis::CaseIii => [phi_plus, phi_minus, [o, one, o, o], [o, o, one, o]],
    };
    OrthoBasis::from_amplitudes_unchecked(&amps)
}

/// [`special_basis`] looked up by name.
pub fn special_basis_by_name(name: &str) -> Result<OrthoBasis> {
    Ok(special_basis(name.parse()?))
}

/// A 2×2 unitary, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2([[C64; 2]; 2]);

impl Unitary2 {
    pub fn new(m: [[C64; 2]; 2]) -> Result<Self> {
        let mut dev: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let s = m[0][i].conj() * m[0][j] + m[1][i].conj() * m[1][j];
                let target = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((s - target).norm());
            }
        }
        if dev >= TOL_ORTHO {
            return Err(Error::Unitary(dev));
        }
        Ok(Unitary2(m))
    }

    pub fn identity() -> Self {
        let (o, l) = (C64::default(), c(1.0, 0.0));
        Unitary2([[l, o], [o, l]])
    }

    pub fn matrix(&self) -> &[[C64; 2]; 2] {
        &self.0
    }
}

/// Maps every basis state to `(U_A ⊗ U_B)|ψᵢ⟩`.
pub fn apply_local_unitary(basis: &OrthoBasis, ua: &Unitary2, ub: &Unitary2) -> OrthoBasis {
    let amps = basis.amplitudes().map(|psi| apply_local(&psi, ua, ub));
    OrthoBasis::from_amplitudes_unchecked(&amps)
}

pub(crate) fn apply_local(psi: &[C64; 4], ua: &Unitary2, ub: &Unitary2) -> [C64; 4] {
    let mut out = [C64::default(); 4];
    for i in 0..2 {
        for j in 0..2 {
            let mut s = C64::default();
            for k in 0..2 {
                for l in 0..2 {
                    s += ua.0[i][k] * ub.0[j][l] * psi[2 * k + l];
                }
            }
            out[2 * i + j] = s;
        }
    }
    out
}
