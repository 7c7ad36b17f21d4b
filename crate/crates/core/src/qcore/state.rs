//! Pure states, density matrices, observables and Born-rule tables.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::qcore::eigen::eig_hermitian;
use crate::qcore::matrix::{symmetrize, ComplexMatrix, HermitianOperator, C64};

/// Tolerance on the squared norm of a pure state.
pub const NORM_TOL: f64 = 1e-12;

pub const MIN_QUBITS: usize = 2;
pub const MAX_QUBITS: usize = 4;

fn qubits_for_len(len: usize) -> Option<usize> {
    if len.is_power_of_two() && len > 1 {
        Some(len.trailing_zeros() as usize)
    } else {
        None
    }
}

/// Normalized amplitude vector over 2 to 4 qubits. Basis index `b` is read as
/// a bitstring whose most significant bit belongs to qubit 0.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    num_qubits: usize,
    amplitudes: Vec<C64>,
}

impl PureState {
    /// Normalizes `amplitudes` and wraps them.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let n = qubits_for_len(amplitudes.len())
            .filter(|n| (MIN_QUBITS..=MAX_QUBITS).contains(n))
            .ok_or(Error::UnsupportedRegister(
                qubits_for_len(amplitudes.len()).unwrap_or(0),
            ))?;
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        let amplitudes = amplitudes.into_iter().map(|z| z / norm).collect();
        Ok(Self {
            num_qubits: n,
            amplitudes,
        })
    }

    /// Wraps amplitudes that must already be normalized within [`NORM_TOL`].
    pub fn from_normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let norm2: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm2));
        }
        Self::from_amplitudes(amplitudes)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::InvalidConfig(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Self::from_amplitudes(amps)
    }

    /// Haar-random state drawn from normalized complex Gaussians.
    pub fn random<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Result<Self> {
        let dim = 1usize << num_qubits;
        let amps = (0..dim)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::from_amplitudes(amps)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn density(&self) -> DensityMatrix {
        let m = ComplexMatrix::outer(&self.amplitudes, &self.amplitudes).expect("register dim");
        DensityMatrix(HermitianOperator::new(symmetrize(m)).expect("outer product is Hermitian"))
    }

    /// Applies a unitary to the whole register.
    pub fn evolve(&self, unitary: &ComplexMatrix) -> Result<Self> {
        Self::from_amplitudes(unitary.apply(&self.amplitudes)?)
    }

    /// Reduced density matrix on `keep`.
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        partial_trace(&self.density(), keep, self.num_qubits)
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Kronecker product of two amplitude vectors.
pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// `<psi| A |psi>`.
pub fn expectation(state: &PureState, op: &HermitianOperator) -> Result<f64> {
    if op.dim() != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: state.dim(),
            found: op.dim(),
        });
    }
    let a_psi = op.matrix().apply(state.amplitudes())?;
    let value: C64 = state
        .amplitudes()
        .iter()
        .zip(&a_psi)
        .map(|(p, q)| p.conj() * q)
        .sum();
    debug_assert!(value.im.abs() <= 1e-10, "imaginary residue {}", value.im);
    Ok(value.re)
}

/// Unit-trace positive semidefinite Hermitian operator on 1 to 4 qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(HermitianOperator);

impl DensityMatrix {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let tr = op.matrix().trace();
        if (tr.re - 1.0).abs() > 1e-12 || tr.im.abs() > 1e-12 {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr}")));
        }
        let min = eig_hermitian(&op).values.last().copied().unwrap_or(0.0);
        if min < -1e-10 {
            return Err(Error::InvalidDensityMatrix(format!("eigenvalue {min:e}")));
        }
        Ok(Self(op))
    }

    pub fn maximally_mixed(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        Self(HermitianOperator::identity(dim).scale(1.0 / dim as f64))
    }

    pub fn num_qubits(&self) -> usize {
        self.0.dim().trailing_zeros() as usize
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.0
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.0.matrix()
    }

    pub fn trace(&self) -> f64 {
        self.0.matrix().trace().re
    }

    /// `tr(A rho)`.
    pub fn expectation(&self, op: &HermitianOperator) -> Result<f64> {
        Ok(op.matrix().matmul(self.0.matrix())?.trace().re)
    }
}

/// Traces out every qubit not listed in `keep` (strictly increasing indices).
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize], n: usize) -> Result<DensityMatrix> {
    if rho.operator().dim() != 1usize << n {
        return Err(Error::DimensionMismatch {
            expected: 1 << n,
            found: rho.operator().dim(),
        });
    }
    if keep.is_empty() || keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&q| q >= n) {
        return Err(Error::InvalidQubitSet(keep.to_vec()));
    }
    let bit = |q: usize| 1usize << (n - 1 - q);
    let keep_mask: usize = keep.iter().map(|&q| bit(q)).sum();
    let compress = |i: usize| {
        keep.iter()
            .fold(0usize, |acc, &q| (acc << 1) | usize::from(i & bit(q) != 0))
    };
    let k = 1usize << keep.len();
    let mut out = ComplexMatrix::zeros(k, k);
    let full = rho.matrix();
    for i in 0..1usize << n {
        for j in 0..1usize << n {
            if i & !keep_mask == j & !keep_mask {
                out[(compress(i), compress(j))] += full[(i, j)];
            }
        }
    }
    Ok(DensityMatrix(HermitianOperator::new(symmetrize(out))?))
}

/// Single-qubit Hermitian operator with eigenvalues exactly +1 and -1.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable(HermitianOperator);

impl Observable {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        if op.dim() != 2 {
            return Err(Error::NotObservable(format!("dimension {}", op.dim())));
        }
        let m = op.matrix();
        let tr = m.trace().re;
        let det = (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re;
        if tr.abs() > 1e-12 || (det + 1.0).abs() > 1e-12 {
            return Err(Error::NotObservable(format!("trace {tr}, determinant {det}")));
        }
        Ok(Self(op))
    }

    /// `x X + y Y + z Z` for a unit Bloch vector.
    pub fn bloch(x: f64, y: f64, z: f64) -> Result<Self> {
        let i = C64::new(0.0, 1.0);
        let m = ComplexMatrix::new(
            2,
            2,
            vec![C64::new(z, 0.0), x - i * y, x + i * y, C64::new(-z, 0.0)],
        )?;
        Self::new(HermitianOperator::new(m)?)
    }

    pub fn sigma_x() -> Self {
        Self::bloch(1.0, 0.0, 0.0).unwrap()
    }

    pub fn sigma_z() -> Self {
        Self::bloch(0.0, 0.0, 1.0).unwrap()
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.0
    }

    /// Rows of the returned matrix are the conjugated +1 and -1 eigenvectors,
    /// so applying it maps amplitudes into the measurement basis.
    pub fn measurement_basis(&self) -> ComplexMatrix {
        eig_hermitian(&self.0).vectors.adjoint()
    }
}

/// Joint outcome distribution over `{+1,-1}^n`. Index bit `n-1-q` holds
/// qubit `q`'s outcome, with 0 meaning +1.
#[derive(Clone, Debug, PartialEq)]
pub struct BornTable {
    num_qubits: usize,
    probs: Vec<f64>,
}

impl BornTable {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn outcomes(&self, index: usize) -> Vec<i8> {
        (0..self.num_qubits)
            .map(|q| if index >> (self.num_qubits - 1 - q) & 1 == 0 { 1 } else { -1 })
            .collect()
    }

    pub fn index_of(&self, outcomes: &[i8]) -> usize {
        outcomes
            .iter()
            .fold(0, |acc, &o| (acc << 1) | usize::from(o < 0))
    }

    pub fn probability(&self, outcomes: &[i8]) -> f64 {
        assert_eq!(outcomes.len(), self.num_qubits);
        self.probs[self.index_of(outcomes)]
    }

    /// Sums out qubit `q`.
    pub fn marginalize(&self, q: usize) -> BornTable {
        assert!(q < self.num_qubits);
        let n = self.num_qubits;
        let mut probs = vec![0.0; 1 << (n - 1)];
        for (i, p) in self.probs.iter().enumerate() {
            let high = i >> (n - q);
            let low = i & ((1 << (n - 1 - q)) - 1);
            probs[(high << (n - 1 - q)) | low] += p;
        }
        BornTable {
            num_qubits: n - 1,
            probs,
        }
    }

    /// `E[prod_{q in qubits} outcome_q]`.
    pub fn correlator(&self, qubits: &[usize]) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let sign = qubits
                    .iter()
                    .filter(|&&q| i >> (self.num_qubits - 1 - q) & 1 == 1)
                    .count();
                if sign % 2 == 0 {
                    *p
                } else {
                    -p
                }
            })
            .sum()
    }
}

fn basis_change(observables: &[Observable]) -> Result<ComplexMatrix> {
    let mut w = ComplexMatrix::identity(1);
    for o in observables {
        w = crate::qcore::matrix::kron(&w, &o.measurement_basis())?;
    }
    Ok(w)
}

/// Born-rule outcome table for measuring each qubit in its observable's
/// eigenbasis.
pub fn born_distribution(state: &PureState, observables: &[Observable]) -> Result<BornTable> {
    if observables.len() != state.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: state.num_qubits(),
            found: observables.len(),
        });
    }
    let w = basis_change(observables)?;
    let rotated = w.apply(state.amplitudes())?;
    Ok(BornTable {
        num_qubits: state.num_qubits(),
        probs: rotated.iter().map(|z| z.norm_sqr()).collect(),
    })
}

/// Same table computed from a density matrix: `p_i = <i| W rho W^dagger |i>`.
pub fn born_distribution_mixed(rho: &DensityMatrix, observables: &[Observable]) -> Result<BornTable> {
    if observables.len() != rho.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: rho.num_qubits(),
            found: observables.len(),
        });
    }
    let w = basis_change(observables)?;
    let rotated = w.matmul(rho.matrix())?.matmul(&w.adjoint())?;
    Ok(BornTable {
        num_qubits: rho.num_qubits(),
        probs: (0..rotated.rows()).map(|i| rotated[(i, i)].re).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::matrix::{embed_single, pauli_x, pauli_z};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn triplet() -> PureState {
        PureState::from_amplitudes(vec![c(0.0), c(1.0), c(1.0), c(0.0)]).unwrap()
    }

    #[test]
    fn expectation_examples() {
        let zi = embed_single(&pauli_z(), 0, 2).unwrap();
        assert_eq!(expectation(&PureState::basis(2, 0).unwrap(), &zi).unwrap(), 1.0);
        let xx = pauli_x().kron(&pauli_x()).unwrap();
        let zz = pauli_z().kron(&pauli_z()).unwrap();
        assert!((expectation(&triplet(), &xx).unwrap() - 1.0).abs() < 1e-15);
        assert!((expectation(&triplet(), &zz).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn expectation_dimension_mismatch() {
        let zi = embed_single(&pauli_z(), 0, 3).unwrap();
        assert!(matches!(
            expectation(&triplet(), &zi),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn state_construction_errors() {
        assert!(matches!(
            PureState::from_amplitudes(vec![c(0.0); 4]),
            Err(Error::ZeroVector)
        ));
        assert!(matches!(
            PureState::from_amplitudes(vec![c(1.0); 3]),
            Err(Error::UnsupportedRegister(_))
        ));
        assert!(PureState::from_amplitudes(vec![c(1.0); 2]).is_err());
        assert!(PureState::from_amplitudes(vec![c(1.0); 32]).is_err());
        assert!(matches!(
            PureState::from_normalized(vec![c(1.0), c(1.0), c(0.0), c(0.0)]),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn partial_trace_examples() {
        let keep0 = triplet().reduced(&[0]).unwrap();
        assert!(keep0.matrix().max_abs_diff(DensityMatrix::maximally_mixed(1).matrix()) < 1e-15);

        let zero = PureState::basis(2, 0).unwrap().reduced(&[1]).unwrap();
        let proj = ComplexMatrix::from_diagonal(&[1.0, 0.0]).unwrap();
        assert_eq!(zero.matrix(), &proj);
    }

    #[test]
    fn partial_trace_rejects_bad_sets() {
        let rho = triplet().density();
        for keep in [&[][..], &[1, 0], &[0, 0], &[2]] {
            assert!(matches!(
                partial_trace(&rho, keep, 2),
                Err(Error::InvalidQubitSet(_))
            ));
        }
        assert!(partial_trace(&rho, &[0], 3).is_err());
    }

    #[test]
    fn four_qubit_minimal_state_marginal() {
        // Brute-force oracle: rho_{02}[(a,c),(a',c')] = sum_{b,d} psi[abcd] psi*[a'bc'd].
        let mut amps = vec![c(0.0); 16];
        for b in [0b0000, 0b0011, 0b1100, 0b1111] {
            amps[b] = c(0.5);
        }
        let psi = PureState::from_amplitudes(amps).unwrap();
        let mut oracle = [[0.0f64; 4]; 4];
        for a in 0..2 {
            for cc in 0..2 {
                for a2 in 0..2 {
                    for c2 in 0..2 {
                        for b in 0..2 {
                            for d in 0..2 {
                                let i = a << 3 | b << 2 | cc << 1 | d;
                                let j = a2 << 3 | b << 2 | c2 << 1 | d;
                                oracle[a << 1 | cc][a2 << 1 | c2] +=
                                    (psi.amplitudes()[i] * psi.amplitudes()[j].conj()).re;
                            }
                        }
                    }
                }
            }
        }
        let rho = psi.reduced(&[0, 2]).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!((rho.matrix()[(i, j)].re - oracle[i][j]).abs() < 1e-15);
                let want = if i == j { 0.25 } else { 0.0 };
                assert!((oracle[i][j] - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn born_examples() {
        let zz = [Observable::sigma_z(), Observable::sigma_z()];
        let t = born_distribution(&PureState::basis(2, 0).unwrap(), &zz).unwrap();
        assert_eq!(t.probability(&[1, 1]), 1.0);
        assert_eq!(t.total(), 1.0);

        let t = born_distribution(&triplet(), &zz).unwrap();
        assert!((t.probability(&[1, -1]) - 0.5).abs() < 1e-15);
        assert!((t.probability(&[-1, 1]) - 0.5).abs() < 1e-15);

        // Projection oracle: |<++|t>|^2 = |(1/2)(1+1)/sqrt2 * 1/sqrt2 ...|^2 = 1/2.
        let xx = [Observable::sigma_x(), Observable::sigma_x()];
        let t = born_distribution(&triplet(), &xx).unwrap();
        assert!((t.probability(&[1, 1]) - 0.5).abs() < 1e-14);
        assert!((t.probability(&[-1, -1]) - 0.5).abs() < 1e-14);
        assert!(t.probability(&[1, -1]).abs() < 1e-14);
    }

    #[test]
    fn born_needs_one_observable_per_qubit() {
        assert!(born_distribution(&triplet(), &[Observable::sigma_z()]).is_err());
    }

    #[test]
    fn observable_validation() {
        assert!(Observable::new(pauli_z()).is_ok());
        assert!(Observable::new(HermitianOperator::identity(2)).is_err());
        assert!(Observable::bloch(1.0, 1.0, 0.0).is_err());
        let d = Observable::bloch(FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2).unwrap();
        assert!(d.operator().sub(&pauli_x().add(&pauli_z()).unwrap().scale(FRAC_1_SQRT_2)).unwrap().matrix().data().iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn marginal_and_correlator() {
        let t = born_distribution(&triplet(), &[Observable::sigma_z(), Observable::sigma_z()]).unwrap();
        assert!((t.correlator(&[0, 1]) + 1.0).abs() < 1e-15);
        let m = t.marginalize(0);
        assert_eq!(m.num_qubits(), 1);
        assert!((m.probs()[0] - 0.5).abs() < 1e-15);
    }
}
