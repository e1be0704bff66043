//! Three-qubit pure states, Haar sampling, and local-unitary action.
//!
//! Amplitudes are stored big-endian: `amp[4i + 2j + k]` is the coefficient
//! of |ijk⟩ with qubit A the most significant bit. All operations are pure
//! functions; values are immutable after construction and safe to share
//! across threads.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::linalg::Mat2;

/// Absolute tolerance on the state norm.
pub const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum StateError {
    #[error("state norm deviates from 1 by {0:.3e}")]
    NotNormalized(f64),
    #[error("cannot normalize a (numerically) zero amplitude vector")]
    ZeroVector,
}

/// One of the three parties / qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Party {
    A,
    B,
    C,
}

impl Party {
    pub const ALL: [Party; 3] = [Party::A, Party::B, Party::C];

    /// Bit position: A is the most significant bit of the amplitude index.
    #[inline]
    pub fn bit(self) -> usize {
        match self {
            Party::A => 2,
            Party::B => 1,
            Party::C => 0,
        }
    }
}

/// Seed for reproducible ensembles. The same `(seed, stream)` pair always
/// yields the bit-identical draw sequence, which is what makes sharded
/// parallel runs replayable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngSeed(pub u64);

impl RngSeed {
    /// Independent generator for stream `index`.
    pub fn stream(self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(index);
        rng
    }
}

/// A normalized three-qubit pure state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState3Q {
    amp: [Complex64; 8],
}

impl PureState3Q {
    /// Flat amplitude index of |ijk⟩.
    #[inline]
    pub fn index(i: usize, j: usize, k: usize) -> usize {
        4 * i + 2 * j + k
    }

    /// Build from amplitudes that must already be normalized to `NORM_TOL`.
    pub fn new(amp: [Complex64; 8]) -> Result<Self, StateError> {
        let n: f64 = amp.iter().map(|a| a.norm_sqr()).sum();
        let dev = (n - 1.0).abs();
        if dev > NORM_TOL {
            return Err(StateError::NotNormalized(dev));
        }
        Ok(PureState3Q { amp })
    }

    /// Build from arbitrary amplitudes, normalizing them.
    pub fn from_unnormalized(amp: [Complex64; 8]) -> Result<Self, StateError> {
        let n: f64 = amp.iter().map(|a| a.norm_sqr()).sum();
        if n < 1e-30 {
            return Err(StateError::ZeroVector);
        }
        let s = 1.0 / n.sqrt();
        let mut amp = amp;
        for a in &mut amp {
            *a *= s;
        }
        Ok(PureState3Q { amp })
    }

    /// The computational basis state |ijk⟩.
    pub fn basis(i: usize, j: usize, k: usize) -> Self {
        let mut amp = [Complex64::new(0.0, 0.0); 8];
        amp[Self::index(i, j, k)] = Complex64::new(1.0, 0.0);
        PureState3Q { amp }
    }

    /// (|000⟩ + |111⟩)/√2.
    pub fn ghz() -> Self {
        let mut amp = [Complex64::new(0.0, 0.0); 8];
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amp[0] = h;
        amp[7] = h;
        PureState3Q { amp }
    }

    /// (|100⟩ + |010⟩ + |001⟩)/√3.
    pub fn w_state() -> Self {
        let mut amp = [Complex64::new(0.0, 0.0); 8];
        let t = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
        amp[Self::index(1, 0, 0)] = t;
        amp[Self::index(0, 1, 0)] = t;
        amp[Self::index(0, 0, 1)] = t;
        PureState3Q { amp }
    }

    #[inline]
    pub fn amp(&self) -> &[Complex64; 8] {
        &self.amp
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Measurement probabilities in the computational product basis.
    pub fn probabilities(&self) -> [f64; 8] {
        let mut p = [0.0; 8];
        for (dst, a) in p.iter_mut().zip(self.amp.iter()) {
            *dst = a.norm_sqr();
        }
        p
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &PureState3Q) -> Complex64 {
        self.amp
            .iter()
            .zip(other.amp.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |⟨self|other⟩|².
    pub fn fidelity(&self, other: &PureState3Q) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Relabel qubits: position `p` of the result carries qubit `perm[p]`
    /// of `self`.
    pub fn permute_qubits(&self, perm: [usize; 3]) -> Self {
        let mut amp = [Complex64::new(0.0, 0.0); 8];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let bits = [i, j, k];
                    let dst = Self::index(bits[perm[0]], bits[perm[1]], bits[perm[2]]);
                    // dst bits are (bits[perm[0]], ...), source is (i,j,k)
                    amp[dst] = self.amp[Self::index(i, j, k)];
                }
            }
        }
        PureState3Q { amp }
    }

    /// Flip every qubit (X⊗X⊗X as an exact index relabeling).
    pub fn flip_all(&self) -> Self {
        let mut amp = [Complex64::new(0.0, 0.0); 8];
        for m in 0..8 {
            amp[7 - m] = self.amp[m];
        }
        PureState3Q { amp }
    }
}

/// Draw a state from the unitarily invariant (Fubini–Study) ensemble:
/// eight independent standard complex Gaussians, normalized. This matches
/// the distribution of a single column of a Haar-random U(8).
pub fn sample_haar_state(rng: &mut impl Rng) -> PureState3Q {
    loop {
        let mut amp = [Complex64::new(0.0, 0.0); 8];
        let mut norm = 0.0;
        for a in &mut amp {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            *a = Complex64::new(re, im);
            norm += a.norm_sqr();
        }
        if norm > 1e-30 {
            let s = 1.0 / norm.sqrt();
            for a in &mut amp {
                *a *= s;
            }
            return PureState3Q { amp };
        }
    }
}

/// Single-qubit ZYZ rotation Rz(α)·Ry(β)·Rz(γ) with the global phase fixed
/// so the matrix has unit determinant.
pub fn euler_zyz(alpha: f64, beta: f64, gamma: f64) -> Mat2 {
    let c = (0.5 * beta).cos();
    let s = (0.5 * beta).sin();
    let ep = Complex64::from_polar(1.0, 0.5 * (alpha + gamma));
    let em = Complex64::from_polar(1.0, 0.5 * (alpha - gamma));
    Mat2([[c * ep.conj(), -s * em.conj()], [s * em, c * ep]])
}

/// An element of U(2)×U(2)×U(2), one ZYZ angle triple per qubit. Global
/// phases are dropped; no quantity in this crate depends on them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalUnitary {
    angles: [f64; 9],
}

impl LocalUnitary {
    pub fn from_angles(angles: [f64; 9]) -> Self {
        LocalUnitary { angles }
    }

    pub fn identity() -> Self {
        LocalUnitary { angles: [0.0; 9] }
    }

    /// Angles drawn uniformly from [−π, π).
    pub fn random(rng: &mut impl Rng) -> Self {
        let mut angles = [0.0; 9];
        for a in &mut angles {
            *a = (rng.gen::<f64>() - 0.5) * 2.0 * std::f64::consts::PI;
        }
        LocalUnitary { angles }
    }

    pub fn angles(&self) -> &[f64; 9] {
        &self.angles
    }

    /// Realized single-qubit factors (A, B, C).
    pub fn matrices(&self) -> [Mat2; 3] {
        let a = &self.angles;
        [
            euler_zyz(a[0], a[1], a[2]),
            euler_zyz(a[3], a[4], a[5]),
            euler_zyz(a[6], a[7], a[8]),
        ]
    }
}

#[inline]
fn apply_on_qubit(m: &Mat2, party: Party, amp: &mut [Complex64; 8]) {
    let stride = 1 << party.bit();
    for base in 0..8 {
        if base & stride == 0 {
            let lo = amp[base];
            let hi = amp[base + stride];
            amp[base] = m.at(0, 0) * lo + m.at(0, 1) * hi;
            amp[base + stride] = m.at(1, 0) * lo + m.at(1, 1) * hi;
        }
    }
}

/// Apply an explicit triple of single-qubit operators (A, B, C).
pub fn apply_matrix_triple(ms: &[Mat2; 3], s: &PureState3Q) -> PureState3Q {
    let mut amp = *s.amp();
    apply_on_qubit(&ms[0], Party::A, &mut amp);
    apply_on_qubit(&ms[1], Party::B, &mut amp);
    apply_on_qubit(&ms[2], Party::C, &mut amp);
    PureState3Q { amp }
}

/// (U₁⊗U₂⊗U₃)|s⟩.
pub fn apply_local(u: &LocalUnitary, s: &PureState3Q) -> PureState3Q {
    apply_matrix_triple(&u.matrices(), s)
}

/// Reduced density matrix of one qubit (partial trace over the other two).
pub fn reduced_density(s: &PureState3Q, party: Party) -> Mat2 {
    let mut rho = Mat2::zero();
    let stride = 1 << party.bit();
    for base in 0..8 {
        if base & stride == 0 {
            let lo = s.amp()[base];
            let hi = s.amp()[base + stride];
            rho.0[0][0] += lo * lo.conj();
            rho.0[0][1] += lo * hi.conj();
            rho.0[1][0] += hi * lo.conj();
            rho.0[1][1] += hi * hi.conj();
        }
    }
    rho
}

/// Eigenvalues of a single-qubit reduction, θ₁ ≥ θ₂ ≥ 0, θ₁ + θ₂ = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedSpectrum {
    pub theta1: f64,
    pub theta2: f64,
}

impl ReducedSpectrum {
    pub fn lambda_min(&self) -> f64 {
        self.theta2
    }

    pub fn purity(&self) -> f64 {
        self.theta1 * self.theta1 + self.theta2 * self.theta2
    }
}

/// Closed-form spectrum of `reduced_density(s, party)`.
pub fn reduced_spectrum(s: &PureState3Q, party: Party) -> ReducedSpectrum {
    let rho = reduced_density(s, party);
    let a = rho.at(0, 0).re;
    let d = rho.at(1, 1).re;
    let gap = (0.25 * (a - d) * (a - d) + rho.at(0, 1).norm_sqr()).sqrt();
    let mean = 0.5 * (a + d);
    ReducedSpectrum {
        theta1: (mean + gap).min(1.0),
        theta2: (mean - gap).max(0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn sampled(seed: u64) -> PureState3Q {
        sample_haar_state(&mut RngSeed(seed).stream(0))
    }

    #[test]
    fn sampled_states_are_normalized() {
        for seed in 0..50 {
            assert!((sampled(seed).norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn same_seed_and_stream_reproduce_bitwise() {
        let a = sample_haar_state(&mut RngSeed(42).stream(7));
        let b = sample_haar_state(&mut RngSeed(42).stream(7));
        assert_eq!(a.amp(), b.amp());
        let c = sample_haar_state(&mut RngSeed(42).stream(8));
        assert_ne!(a.amp(), c.amp());
    }

    #[test]
    fn identity_leaves_state_unchanged() {
        let s = sampled(1);
        let t = apply_local(&LocalUnitary::identity(), &s);
        for m in 0..8 {
            assert!((t.amp()[m] - s.amp()[m]).norm() < 1e-14);
        }
    }

    #[test]
    fn bit_flips_map_000_to_111() {
        // X on every qubit, as ZYZ angle triples (up to global phase).
        let x = [0.0, std::f64::consts::PI, std::f64::consts::PI];
        let u = LocalUnitary::from_angles([x[0], x[1], x[2], x[0], x[1], x[2], x[0], x[1], x[2]]);
        let t = apply_local(&u, &PureState3Q::basis(0, 0, 0));
        assert_relative_eq!(
            t.fidelity(&PureState3Q::basis(1, 1, 1)),
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn local_action_composes() {
        let s = sampled(3);
        let mut rng = RngSeed(5).stream(0);
        let u1 = LocalUnitary::random(&mut rng);
        let u2 = LocalUnitary::random(&mut rng);
        let seq = apply_local(&u2, &apply_local(&u1, &s));
        let m1 = u1.matrices();
        let m2 = u2.matrices();
        let prod = [m2[0].mul(&m1[0]), m2[1].mul(&m1[1]), m2[2].mul(&m1[2])];
        let joint = apply_matrix_triple(&prod, &s);
        for m in 0..8 {
            assert!((seq.amp()[m] - joint.amp()[m]).norm() < 1e-12);
        }
    }

    #[test]
    fn reduced_density_of_product_and_ghz_states() {
        let rho = reduced_density(&PureState3Q::basis(0, 0, 0), Party::A);
        assert_relative_eq!(rho.at(0, 0).re, 1.0, epsilon = 1e-14);
        assert_relative_eq!(rho.at(1, 1).re, 0.0, epsilon = 1e-14);

        for party in Party::ALL {
            let rho = reduced_density(&PureState3Q::ghz(), party);
            assert_relative_eq!(rho.at(0, 0).re, 0.5, epsilon = 1e-14);
            assert_relative_eq!(rho.at(1, 1).re, 0.5, epsilon = 1e-14);
            assert!(rho.at(0, 1).norm() < 1e-14);
        }
    }

    #[test]
    fn w_state_spectrum_is_two_thirds_one_third() {
        for party in Party::ALL {
            let sp = reduced_spectrum(&PureState3Q::w_state(), party);
            assert_relative_eq!(sp.theta1, 2.0 / 3.0, epsilon = 1e-12);
            assert_relative_eq!(sp.theta2, 1.0 / 3.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn spectrum_consistent_with_matrix_purity() {
        for seed in 0..200 {
            let s = sampled(seed);
            for party in Party::ALL {
                let rho = reduced_density(&s, party);
                let tr2 = rho.mul(&rho).trace().re;
                let sp = reduced_spectrum(&s, party);
                assert!((sp.theta1 + sp.theta2 - 1.0).abs() < 1e-12);
                assert!((sp.purity() - tr2).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn amplitude_moduli_are_exchangeable() {
        // Haar symmetry: every |amp[m]|² has mean 1/8.
        let mut sums = [0.0f64; 8];
        let n = 100_000u64;
        let mut rng = RngSeed(90).stream(0);
        for _ in 0..n {
            let s = sample_haar_state(&mut rng);
            for (acc, a) in sums.iter_mut().zip(s.amp()) {
                *acc += a.norm_sqr();
            }
        }
        for acc in sums {
            assert!((acc / n as f64 - 0.125).abs() < 0.005);
        }
    }

    #[test]
    fn permute_qubits_swaps_first_and_last_bits() {
        let s = PureState3Q::basis(0, 1, 1);
        let t = s.permute_qubits([2, 1, 0]);
        assert_relative_eq!(
            t.fidelity(&PureState3Q::basis(1, 1, 0)),
            1.0,
            epsilon = 1e-14
        );
    }

    proptest! {
        #[test]
        fn local_action_preserves_norm(seed in any::<u64>(), angles in prop::array::uniform9(-3.2f64..3.2)) {
            let s = sampled(seed);
            let t = apply_local(&LocalUnitary::from_angles(angles), &s);
            prop_assert!((t.norm_sqr() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn realized_factors_are_unitary(angles in prop::array::uniform9(-3.2f64..3.2)) {
            for m in LocalUnitary::from_angles(angles).matrices() {
                prop_assert!(m.unitarity_error() < 1e-12);
            }
        }
    }
}
