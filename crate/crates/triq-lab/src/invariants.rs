//! Local-unitary polynomial invariants of three-qubit pure states.
//!
//! Two families are evaluated. The I-set consists of the three reduction
//! purities, the sextic invariant tr[(ρ_A⊗ρ_B)ρ_AB], the squared modulus
//! of the Cayley hyperdeterminant, and the permutation-symmetric Kempe
//! invariant. The J-set is evaluated either literally from canonical
//! coefficients or algebraically from the I-set; the two routes agree and
//! the redundancy is used for validation.
//!
//! Everything here is computed from reduced density matrices; the slow
//! index-contraction expressions live in [`reference`] and serve as
//! independent oracles in tests.

use num_complex::Complex64;

use crate::canonical::AcinForm;
use crate::ensemble::{fold_states, MomentAcc, MomentRow};
use crate::linalg::Mat2;
use crate::state::{reduced_density, reduced_spectrum, Party, PureState3Q, RngSeed};

/// Exact Haar-ensemble moments used as references throughout.
pub mod exact {
    /// ⟨tr ρ²⟩ for any single-qubit reduction.
    pub const MEAN_PURITY: f64 = 2.0 / 3.0;
    pub const MEAN_SEXTIC: f64 = 7.0 / 15.0;
    pub const SECOND_MOMENT_SEXTIC: f64 = 133.0 / 572.0;
    pub const MEAN_HDET_SQ: f64 = 1.0 / 110.0;
    pub const MEAN_KEMPE: f64 = 2.0 / 5.0;
    pub const SECOND_MOMENT_KEMPE: f64 = 499.0 / 2860.0;
    pub const MEAN_J123: f64 = 1.0 / 24.0;
    pub const MEAN_J4: f64 = 1.0 / 12.0;
    pub const MEAN_J5: f64 = 1.0 / 120.0;
}

/// The I-family evaluated on one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantSetI {
    /// tr ρ_A² ∈ [1/2, 1].
    pub i2: f64,
    /// tr ρ_B².
    pub i3: f64,
    /// tr ρ_C².
    pub i4: f64,
    /// tr[(ρ_A⊗ρ_B)ρ_AB] ∈ [1/4, 1].
    pub i5ppp: f64,
    /// |Hdet|² ∈ [0, 1/16]; the three-tangle satisfies τ² = 16·i6.
    pub i6: f64,
    /// Kempe invariant ∈ [2/9, 1].
    pub kempe: f64,
}

impl InvariantSetI {
    pub fn from_state(s: &PureState3Q) -> Self {
        let (i2, i3, i4) = purity_invariants(s);
        let i5ppp = sextic_invariant(s);
        let i6 = hyperdeterminant(s).norm_sqr();
        let kempe = 3.0 * i5ppp
            - trace_cubed(&reduced_density(s, Party::A))
            - trace_cubed(&reduced_density(s, Party::B));
        InvariantSetI {
            i2,
            i3,
            i4,
            i5ppp,
            i6,
            kempe,
        }
    }
}

/// The J-family. j1..j4 are nonnegative; j5 may take either sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantSetJ {
    pub j1: f64,
    pub j2: f64,
    pub j3: f64,
    pub j4: f64,
    pub j5: f64,
}

impl InvariantSetJ {
    /// Δ_J = (J₄+J₅)² − 4(J₁+J₄)(J₂+J₄)(J₃+J₄).
    ///
    /// This is the discriminant of the quadratic whose roots are the μ₀
    /// values of the two candidate five-term decompositions; it vanishes
    /// exactly when the decomposition is unique.
    pub fn delta_j(&self) -> f64 {
        let s = self.j4 + self.j5;
        s * s - 4.0 * (self.j1 + self.j4) * (self.j2 + self.j4) * (self.j3 + self.j4)
    }
}

fn purity(m: &Mat2) -> f64 {
    m.mul(m).trace().re
}

fn trace_cubed(m: &Mat2) -> f64 {
    m.mul(m).mul(m).trace().re
}

/// (tr ρ_A², tr ρ_B², tr ρ_C²).
pub fn purity_invariants(s: &PureState3Q) -> (f64, f64, f64) {
    (
        purity(&reduced_density(s, Party::A)),
        purity(&reduced_density(s, Party::B)),
        purity(&reduced_density(s, Party::C)),
    )
}

/// ρ_AB = tr_C |s⟩⟨s| as a 4×4 matrix indexed by (2i+j).
fn rho_ab(s: &PureState3Q) -> [[Complex64; 4]; 4] {
    let a = s.amp();
    let mut rho = [[Complex64::new(0.0, 0.0); 4]; 4];
    for i1 in 0..2 {
        for j1 in 0..2 {
            for i2 in 0..2 {
                for j2 in 0..2 {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for k in 0..2 {
                        acc += a[PureState3Q::index(i1, j1, k)]
                            * a[PureState3Q::index(i2, j2, k)].conj();
                    }
                    rho[2 * i1 + j1][2 * i2 + j2] = acc;
                }
            }
        }
    }
    rho
}

/// tr[(ρ_A ⊗ ρ_B) ρ_AB].
pub fn sextic_invariant(s: &PureState3Q) -> f64 {
    let ra = reduced_density(s, Party::A);
    let rb = reduced_density(s, Party::B);
    let rab = rho_ab(s);
    let mut acc = Complex64::new(0.0, 0.0);
    for i1 in 0..2 {
        for j1 in 0..2 {
            for i2 in 0..2 {
                for j2 in 0..2 {
                    acc += ra.at(i1, i2) * rb.at(j1, j2) * rab[2 * i2 + j2][2 * i1 + j1];
                }
            }
        }
    }
    acc.re
}

/// Cayley hyperdeterminant of the 2×2×2 amplitude tensor.
///
/// Normalized so that |Hdet| = 1/4 for the GHZ state and the three-tangle
/// is τ = 4·|Hdet|.
pub fn hyperdeterminant(s: &PureState3Q) -> Complex64 {
    let a = s.amp();
    let t = |i: usize, j: usize, k: usize| a[PureState3Q::index(i, j, k)];
    let sq = |z: Complex64| z * z;

    let d1 = sq(t(0, 0, 0) * t(1, 1, 1))
        + sq(t(0, 0, 1) * t(1, 1, 0))
        + sq(t(0, 1, 0) * t(1, 0, 1))
        + sq(t(1, 0, 0) * t(0, 1, 1));
    let d2 = t(0, 0, 0) * t(0, 0, 1) * t(1, 1, 0) * t(1, 1, 1)
        + t(0, 0, 0) * t(0, 1, 0) * t(1, 0, 1) * t(1, 1, 1)
        + t(0, 0, 0) * t(1, 0, 0) * t(0, 1, 1) * t(1, 1, 1)
        + t(0, 0, 1) * t(0, 1, 0) * t(1, 0, 1) * t(1, 1, 0)
        + t(0, 0, 1) * t(1, 0, 0) * t(0, 1, 1) * t(1, 1, 0)
        + t(0, 1, 0) * t(1, 0, 0) * t(0, 1, 1) * t(1, 0, 1);
    let d3 = t(0, 0, 0) * t(0, 1, 1) * t(1, 0, 1) * t(1, 1, 0)
        + t(0, 0, 1) * t(0, 1, 0) * t(1, 0, 0) * t(1, 1, 1);

    d1 - 2.0 * d2 + 4.0 * d3
}

/// Kempe invariant 3·tr[(ρ_A⊗ρ_B)ρ_AB] − tr ρ_A³ − tr ρ_B³.
pub fn kempe_invariant(s: &PureState3Q) -> f64 {
    3.0 * sextic_invariant(s)
        - trace_cubed(&reduced_density(s, Party::A))
        - trace_cubed(&reduced_density(s, Party::B))
}

/// Kempe invariant evaluated directly on canonical coefficients.
pub fn kempe_from_acin(f: &AcinForm) -> f64 {
    let l = f.lambda();
    let (l1, l2, l3, l4) = (l[1], l[2], l[3], l[4]);
    let (m1, m2, m3, m4) = (l1 * l1, l2 * l2, l3 * l3, l4 * l4);
    1.0 - 3.0 * m4 - 3.0 * m3
        + 3.0 * m3 * m3
        + 3.0 * m4 * m4
        + 3.0 * m1 * m3
        + 6.0 * m3 * m4
        + (m1 * (3.0 - 6.0 * m3) - 3.0 * (m3 - 1.0) * (2.0 * m3 + 2.0 * m4 - 1.0)) * m2
        + 6.0 * l1 * l3 * l4 * (m1 + m2 + m3 + m4) * l2 * f.phi().cos()
        + (3.0 - 6.0 * m3) * m2 * m2
}

/// J-invariants evaluated literally from canonical coefficients:
/// J₁ = |λ₁λ₄e^{iφ} − λ₂λ₃|², J₂ = μ₀μ₂, J₃ = μ₀μ₃, J₄ = μ₀μ₄,
/// J₅ = μ₀(J₁ + μ₂μ₃ − μ₁μ₄).
pub fn j_from_acin(f: &AcinForm) -> InvariantSetJ {
    let l = f.lambda();
    let z = Complex64::from_polar(l[1] * l[4], f.phi()) - Complex64::new(l[2] * l[3], 0.0);
    let j1 = z.norm_sqr();
    let (m0, m1, m2, m3, m4) = (f.mu(0), f.mu(1), f.mu(2), f.mu(3), f.mu(4));
    InvariantSetJ {
        j1,
        j2: m0 * m2,
        j3: m0 * m3,
        j4: m0 * m4,
        j5: m0 * (j1 + m2 * m3 - m1 * m4),
    }
}

/// J-invariants from the I-set. Requires the sextic invariant (not the
/// Kempe one) in the J₅ relation.
pub fn j_from_i(i: &InvariantSetI) -> InvariantSetJ {
    let s6 = i.i6.max(0.0).sqrt();
    InvariantSetJ {
        j1: 0.25 * (1.0 + i.i2 - i.i3 - i.i4 - 2.0 * s6),
        j2: 0.25 * (1.0 - i.i2 + i.i3 - i.i4 - 2.0 * s6),
        j3: 0.25 * (1.0 - i.i2 - i.i3 + i.i4 - 2.0 * s6),
        j4: s6,
        j5: 0.25 * (3.0 - 3.0 * i.i2 - 3.0 * i.i3 - i.i4 + 4.0 * i.i5ppp - 2.0 * s6),
    }
}

/// J-invariants of a raw state (through the I-set route).
pub fn j_from_state(s: &PureState3Q) -> InvariantSetJ {
    j_from_i(&InvariantSetI::from_state(s))
}

/// Tracked ensemble quantities and their exact Haar means where known.
/// `i5ppp_sq` and `kempe_sq` are second moments.
pub const MOMENT_REFERENCES: [(&str, Option<f64>); 15] = [
    ("i2", Some(exact::MEAN_PURITY)),
    ("i3", Some(exact::MEAN_PURITY)),
    ("i4", Some(exact::MEAN_PURITY)),
    ("i5ppp", Some(exact::MEAN_SEXTIC)),
    ("i5ppp_sq", Some(exact::SECOND_MOMENT_SEXTIC)),
    ("i6", Some(exact::MEAN_HDET_SQ)),
    ("kempe", Some(exact::MEAN_KEMPE)),
    ("kempe_sq", Some(exact::SECOND_MOMENT_KEMPE)),
    ("j1", Some(exact::MEAN_J123)),
    ("j2", Some(exact::MEAN_J123)),
    ("j3", Some(exact::MEAN_J123)),
    ("j4", Some(exact::MEAN_J4)),
    ("j5", Some(exact::MEAN_J5)),
    ("delta_j", None),
    ("lambda_min", Some(29.0 / 128.0)),
];

/// Monte Carlo means (with standard errors) of every invariant over `n`
/// Haar-random states. Deterministic in `(n, seed)` and independent of the
/// worker count.
pub fn ensemble_means(n: u64, seed: RngSeed) -> Vec<MomentRow> {
    debug_assert!(n >= 1000, "ensemble means need n >= 1e3");
    let accs = fold_states(
        n,
        seed,
        || vec![MomentAcc::default(); MOMENT_REFERENCES.len()],
        |acc, s| {
            let i = InvariantSetI::from_state(s);
            let j = j_from_i(&i);
            let vals = [
                i.i2,
                i.i3,
                i.i4,
                i.i5ppp,
                i.i5ppp * i.i5ppp,
                i.i6,
                i.kempe,
                i.kempe * i.kempe,
                j.j1,
                j.j2,
                j.j3,
                j.j4,
                j.j5,
                j.delta_j(),
            ];
            for (a, v) in acc.iter_mut().zip(vals) {
                a.record(v);
            }
            for party in Party::ALL {
                acc[14].record(reduced_spectrum(s, party).lambda_min());
            }
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b.iter()) {
                x.merge(y);
            }
            a
        },
    );
    MOMENT_REFERENCES
        .iter()
        .zip(accs)
        .map(|(&(name, exact), acc)| MomentRow {
            name,
            mean: acc.mean(),
            std_error: acc.std_error(),
            exact,
        })
        .collect()
}

/// Slow index-contraction forms of the invariants, kept as independent
/// reference implementations for the test suites.
pub mod reference {
    use super::*;

    fn t(s: &PureState3Q, i: usize, j: usize, k: usize) -> Complex64 {
        s.amp()[PureState3Q::index(i, j, k)]
    }

    fn tc(s: &PureState3Q, i: usize, j: usize, k: usize) -> Complex64 {
        t(s, i, j, k).conj()
    }

    /// Quadratic contraction for the purity of one reduction.
    pub fn purity_contraction(s: &PureState3Q, party: Party) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i1 in 0..2 {
            for j1 in 0..2 {
                for k1 in 0..2 {
                    for i2 in 0..2 {
                        for j2 in 0..2 {
                            for k2 in 0..2 {
                                let term = match party {
                                    Party::A => {
                                        t(s, i1, j1, k1)
                                            * tc(s, i2, j1, k1)
                                            * t(s, i2, j2, k2)
                                            * tc(s, i1, j2, k2)
                                    }
                                    Party::B => {
                                        t(s, i1, j1, k1)
                                            * tc(s, i1, j2, k1)
                                            * t(s, i2, j2, k2)
                                            * tc(s, i2, j1, k2)
                                    }
                                    Party::C => {
                                        t(s, i1, j1, k1)
                                            * tc(s, i1, j1, k2)
                                            * t(s, i2, j2, k2)
                                            * tc(s, i2, j2, k1)
                                    }
                                };
                                acc += term;
                            }
                        }
                    }
                }
            }
        }
        acc.re
    }

    /// Sextic contraction equal to tr[(ρ_A⊗ρ_B)ρ_AB].
    pub fn sextic_contraction(s: &PureState3Q) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for idx in 0..512u32 {
            let b = |n: u32| ((idx >> n) & 1) as usize;
            let (i1, i2, i3) = (b(0), b(1), b(2));
            let (j1, j2, j3) = (b(3), b(4), b(5));
            let (k1, k2, k3) = (b(6), b(7), b(8));
            acc += t(s, i1, j1, k1)
                * tc(s, i1, j2, k2)
                * t(s, i2, j2, k2)
                * tc(s, i2, j3, k1)
                * t(s, i3, j3, k3)
                * tc(s, i3, j1, k3);
        }
        acc.re
    }

    /// Six-index contraction form of the Kempe invariant.
    pub fn kempe_contraction(s: &PureState3Q) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for idx in 0..512u32 {
            let b = |n: u32| ((idx >> n) & 1) as usize;
            let (i1, i2, i3) = (b(0), b(1), b(2));
            let (j1, j2, j3) = (b(3), b(4), b(5));
            let (k1, k2, k3) = (b(6), b(7), b(8));
            acc += t(s, i1, j1, k1)
                * t(s, i2, j2, k2)
                * t(s, i3, j3, k3)
                * tc(s, i1, j2, k3)
                * tc(s, i2, j3, k1)
                * tc(s, i3, j1, k2);
        }
        acc.re
    }

    /// Levi-Civita contraction underlying the hyperdeterminant.
    ///
    /// The raw contraction C satisfies Hdet = −C/2 in the normalization
    /// used by [`hyperdeterminant`] (so that |Hdet(GHZ)| = 1/4).
    pub fn hdet_contraction(s: &PureState3Q) -> Complex64 {
        const EPS: [(usize, usize, f64); 2] = [(0, 1, 1.0), (1, 0, -1.0)];
        let mut acc = Complex64::new(0.0, 0.0);
        for &(i1, j1, e1) in &EPS {
            for &(i2, j2, e2) in &EPS {
                for &(k1, l1, e3) in &EPS {
                    for &(k2, l2, e4) in &EPS {
                        for &(i3, k3, e5) in &EPS {
                            for &(j3, l3, e6) in &EPS {
                                acc += e1
                                    * e2
                                    * e3
                                    * e4
                                    * e5
                                    * e6
                                    * t(s, i1, i2, i3)
                                    * t(s, j1, j2, j3)
                                    * t(s, k1, k2, k3)
                                    * t(s, l1, l2, l3);
                            }
                        }
                    }
                }
            }
        }
        -0.5 * acc
    }
}
