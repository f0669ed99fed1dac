//! Dense complex linear algebra for pure multipartite states.
//!
//! Amplitudes are stored row-major with subsystem 0 as the slowest index, so
//! for two qubits the order is `|00⟩, |01⟩, |10⟩, |11⟩`. Every module in the
//! crate relies on this convention.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance::TOL_NORM;

pub type C64 = Complex64;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    Complex64::new(re, im)
}

/// `e^{iθ}`
#[inline]
pub(crate) fn phase(theta: f64) -> C64 {
    Complex64::from_polar(1.0, theta)
}

/// A normalized pure state on a tensor-factored Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVec {
    amplitudes: Vec<C64>,
    dims: Vec<usize>,
}

impl StateVec {
    /// Wraps `amplitudes`, checking that `dims` factor the length and that the
    /// vector is normalized to within [`TOL_NORM`].
    pub fn new(amplitudes: Vec<C64>, dims: Vec<usize>) -> Result<Self> {
        check_dims(&amplitudes, &dims)?;
        let dev = (norm_sqr(&amplitudes) - 1.0).abs();
        if dev > TOL_NORM {
            return Err(Error::Norm(dev));
        }
        Ok(StateVec { amplitudes, dims })
    }

    /// Like [`StateVec::new`] but rescales the input to unit norm first.
    pub fn normalized(mut amplitudes: Vec<C64>, dims: Vec<usize>) -> Result<Self> {
        check_dims(&amplitudes, &dims)?;
        let n = norm_sqr(&amplitudes).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Norm(1.0));
        }
        amplitudes.iter_mut().for_each(|a| *a /= n);
        Ok(StateVec { amplitudes, dims })
    }

    /// Computational basis state `|digits⟩` over `dims`.
    pub fn basis(dims: &[usize], digits: &[usize]) -> Result<Self> {
        if dims.len() != digits.len() || digits.iter().zip(dims).any(|(d, n)| d >= n) {
            return Err(Error::Dims(format!(
                "digits {digits:?} do not index dims {dims:?}"
            )));
        }
        let len = dims.iter().product();
        let idx = digits.iter().zip(dims).fold(0, |acc, (d, n)| acc * n + d);
        let mut amplitudes = vec![C64::default(); len];
        amplitudes[idx] = c(1.0, 0.0);
        Ok(StateVec {
            amplitudes,
            dims: dims.to_vec(),
        })
    }

    /// Two-qubit state from its four amplitudes in `|00⟩,|01⟩,|10⟩,|11⟩` order.
    pub fn two_qubit(amps: [C64; 4]) -> Result<Self> {
        Self::new(amps.to_vec(), vec![2, 2])
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    pub(crate) fn from_parts_unchecked(amplitudes: Vec<C64>, dims: Vec<usize>) -> Self {
        debug_assert_eq!(amplitudes.len(), dims.iter().product::<usize>());
        StateVec { amplitudes, dims }
    }
}

fn check_dims(amplitudes: &[C64], dims: &[usize]) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::Dims(format!("invalid subsystem dims {dims:?}")));
    }
    let prod: usize = dims.iter().product();
    if prod != amplitudes.len() {
        return Err(Error::Dims(format!(
            "dims {dims:?} have product {prod} but there are {} amplitudes",
            amplitudes.len()
        )));
    }
    Ok(())
}

fn norm_sqr(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// A cut of the subsystem index set into two complementary groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteSplit {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl BipartiteSplit {
    /// Puts the subsystems in `left` on one side and everything else among
    /// `0..n_subsystems` on the other.
    pub fn new(left: &[usize], n_subsystems: usize) -> Result<Self> {
        let mut seen = vec![false; n_subsystems];
        for &i in left {
            if i >= n_subsystems || seen[i] {
                return Err(Error::Perm(format!(
                    "left group {left:?} is not a set of distinct indices below {n_subsystems}"
                )));
            }
            seen[i] = true;
        }
        if left.is_empty() || left.len() == n_subsystems {
            return Err(Error::Perm(
                "both sides of a split must be non-empty".into(),
            ));
        }
        let right = (0..n_subsystems).filter(|&i| !seen[i]).collect();
        Ok(BipartiteSplit {
            left: left.to_vec(),
            right,
        })
    }

    /// The `A|B` cut of a two-party system.
    pub fn first_vs_rest(n_subsystems: usize) -> Result<Self> {
        Self::new(&[0], n_subsystems)
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    fn n_subsystems(&self) -> usize {
        self.left.len() + self.right.len()
    }
}

/// Squared Schmidt coefficients in non-increasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtSpectrum {
    probabilities: Vec<f64>,
}

impl SchmidtSpectrum {
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Von Neumann entropy of the spectrum in bits.
    pub fn entropy(&self) -> f64 {
        entropy_bits(&self.probabilities)
    }

    fn from_eigenvalues(mut values: Vec<f64>) -> Self {
        for v in values.iter_mut() {
            *v = v.clamp(0.0, 1.0);
        }
        values.sort_by(|a, b| b.total_cmp(a));
        SchmidtSpectrum {
            probabilities: values,
        }
    }
}

/// `⟨x|y⟩`, conjugate-linear in `x`.
pub fn inner_product(x: &StateVec, y: &StateVec) -> Result<C64> {
    if x.dims != y.dims {
        return Err(Error::Dims(format!(
            "inner product of states with dims {:?} and {:?}",
            x.dims, y.dims
        )));
    }
    Ok(x.amplitudes
        .iter()
        .zip(&y.amplitudes)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// Kronecker product `x ⊗ y`; the factors of `x` come first.
pub fn tensor(x: &StateVec, y: &StateVec) -> StateVec {
    let mut amplitudes = Vec::with_capacity(x.amplitudes.len() * y.amplitudes.len());
    for a in &x.amplitudes {
        amplitudes.extend(y.amplitudes.iter().map(|b| a * b));
    }
    let dims = x.dims.iter().chain(&y.dims).copied().collect();
    StateVec::from_parts_unchecked(amplitudes, dims)
}

/// Reorders subsystems so that subsystem `k` of the result is subsystem
/// `perm[k]` of the input.
pub fn permute_subsystems(x: &StateVec, perm: &[usize]) -> Result<StateVec> {
    let n = x.dims.len();
    let mut seen = vec![false; n];
    if perm.len() != n
        || perm
            .iter()
            .any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
    {
        return Err(Error::Perm(format!(
            "{perm:?} is not a permutation of 0..{n}"
        )));
    }
    let mut old_strides = vec![1usize; n];
    for k in (0..n.saturating_sub(1)).rev() {
        old_strides[k] = old_strides[k + 1] * x.dims[k + 1];
    }
    let new_dims: Vec<usize> = perm.iter().map(|&p| x.dims[p]).collect();
    let strides: Vec<usize> = perm.iter().map(|&p| old_strides[p]).collect();

    let mut amplitudes = Vec::with_capacity(x.amplitudes.len());
    let mut digits = vec![0usize; n];
    for _ in 0..x.amplitudes.len() {
        let src: usize = digits.iter().zip(&strides).map(|(d, s)| d * s).sum();
        amplitudes.push(x.amplitudes[src]);
        // odometer increment, last digit fastest
        for k in (0..n).rev() {
            digits[k] += 1;
            if digits[k] < new_dims[k] {
                break;
            }
            digits[k] = 0;
        }
    }
    Ok(StateVec::from_parts_unchecked(amplitudes, new_dims))
}

/// Squared singular values of the amplitude matrix reshaped across `split`.
pub fn schmidt_spectrum(x: &StateVec, split: &BipartiteSplit) -> Result<SchmidtSpectrum> {
    if split.n_subsystems() != x.dims.len() {
        return Err(Error::Dims(format!(
            "split over {} subsystems applied to a state with dims {:?}",
            split.n_subsystems(),
            x.dims
        )));
    }
    let order: Vec<usize> = split.left.iter().chain(&split.right).copied().collect();
    let grouped = permute_subsystems(x, &order)?;
    let rows: usize = split.left.iter().map(|&i| x.dims[i]).product();
    let cols = grouped.amplitudes.len() / rows;
    Ok(SchmidtSpectrum::from_eigenvalues(
        reshaped_gram_eigenvalues(&grouped.amplitudes, rows, cols),
    ))
}

/// Entanglement entropy across `split`, in ebits.
pub fn entropy_of_entanglement(x: &StateVec, split: &BipartiteSplit) -> Result<f64> {
    Ok(schmidt_spectrum(x, split)?.entropy())
}

/// Wootters concurrence `2|a₀₀a₁₁ − a₀₁a₁₀|` of a two-qubit pure state.
pub fn concurrence(x: &StateVec) -> Result<f64> {
    if x.dims != [2, 2] {
        return Err(Error::Dims(format!(
            "concurrence needs dims [2, 2], got {:?}",
            x.dims
        )));
    }
    let a = &x.amplitudes;
    Ok((2.0 * (a[0] * a[3] - a[1] * a[2]).norm()).min(1.0))
}

/// Entanglement of a two-qubit pure state expressed through its concurrence.
pub fn entropy_from_concurrence(concurrence: f64) -> f64 {
    let c2 = (concurrence * concurrence).min(1.0);
    binary_entropy(0.5 * (1.0 + (1.0 - c2).sqrt()))
}

/// `h(p) = −p log₂ p − (1−p) log₂(1−p)`.
pub fn binary_entropy(p: f64) -> f64 {
    entropy_bits(&[p, 1.0 - p])
}

/// Shannon entropy in bits; entries are clamped to `[0, 1]` and `0·log 0 = 0`.
pub fn entropy_bits(probabilities: &[f64]) -> f64 {
    let mut h = 0.0;
    for &p in probabilities {
        let p = p.clamp(0.0, 1.0);
        if p > 0.0 {
            h -= p * p.log2();
        }
    }
    h
}

/// Entanglement of a two-qubit state given by its four amplitudes, via the
/// Schmidt spectrum of the 2×2 amplitude matrix.
pub fn two_qubit_entropy(a: &[C64; 4]) -> f64 {
    let g01 = a[0] * a[2].conj() + a[1] * a[3].conj();
    let mut gram = [
        c(a[0].norm_sqr() + a[1].norm_sqr(), 0.0),
        g01,
        g01.conj(),
        c(a[2].norm_sqr() + a[3].norm_sqr(), 0.0),
    ];
    hermitian_eigenvalues_in_place(&mut gram, 2);
    entropy_bits(&[gram[0].re, gram[3].re])
}

/// Eigenvalues of `M M†` (or `M† M`, whichever is smaller) for the
/// `rows × cols` row-major matrix `m`.
pub(crate) fn reshaped_gram_eigenvalues(m: &[C64], rows: usize, cols: usize) -> Vec<f64> {
    let (n, k) = (rows.min(cols), rows.max(cols));
    let at = |i: usize, j: usize| -> C64 {
        if rows <= cols {
            m[i * cols + j]
        } else {
            m[j * cols + i]
        }
    };
    let mut gram = vec![C64::default(); n * n];
    for i in 0..n {
        for j in i..n {
            let s: C64 = (0..k).map(|l| at(i, l) * at(j, l).conj()).sum();
            gram[i * n + j] = s;
            gram[j * n + i] = s.conj();
        }
    }
    hermitian_eigenvalues_in_place(&mut gram, n);
    (0..n).map(|i| gram[i * n + i].re).collect()
}

/// Cyclic Jacobi diagonalization of a Hermitian `n × n` row-major matrix.
///
/// On return the diagonal holds the eigenvalues (unsorted) and the
/// off-diagonal part has been driven to zero.
pub fn hermitian_eigenvalues_in_place(a: &mut [C64], n: usize) {
    assert_eq!(a.len(), n * n, "matrix storage does not match n = {n}");
    for i in 0..n {
        a[i * n + i].im = 0.0;
    }
    let scale: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>();
    if scale == 0.0 {
        return;
    }
    for _sweep in 0..64 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[p * n + q].norm_sqr();
            }
        }
        if off <= f64::EPSILON * f64::EPSILON * scale * 1e-4 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let r = apq.norm();
                if r <= f64::MIN_POSITIVE {
                    continue;
                }
                // phase that makes the pivot real, then a real rotation
                let ph = apq / r;
                let theta = (a[q * n + q].re - a[p * n + p].re) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let cs = 1.0 / t.hypot(1.0);
                let sn = t * cs;
                // U = [[c, s], [-s e^{-iφ}, c e^{-iφ}]] on (p, q)
                let u_pp = c(cs, 0.0);
                let u_pq = c(sn, 0.0);
                let u_qp = -ph.conj() * sn;
                let u_qq = ph.conj() * cs;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * u_pp + akq * u_qp;
                    a[k * n + q] = akp * u_pq + akq * u_qq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = u_pp.conj() * apk + u_qp.conj() * aqk;
                    a[q * n + k] = u_pq.conj() * apk + u_qq.conj() * aqk;
                }
                a[p * n + q] = C64::default();
                a[q * n + p] = C64::default();
                a[p * n + p].im = 0.0;
                a[q * n + q].im = 0.0;
            }
        }
    }
}
