//! Entanglement classes: membership predicates on the J-invariants,
//! parametrized generators for each class, and SLOCC labels.
//!
//! A class predicate is a set of polynomial conditions on (J₁..J₅); the
//! classifier checks them most-specific-first so that states satisfying
//! several condition sets (the fully separable state satisfies all of
//! them) land in the smallest class. Haar-random states satisfy none of
//! the conditions and report [`ClassId::Generic`].

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use crate::invariants::InvariantSetJ;
use crate::state::PureState3Q;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassError {
    #[error("angle {name} = {value} outside the open interval (0, π/2)")]
    InvalidAngle { name: &'static str, value: f64 },
    #[error("class {0} takes {1} angles, got {2}")]
    WrongArity(ClassId, usize, usize),
    #[error("no parametrized generator for class {0}")]
    NotParametrized(ClassId),
}

/// Default absolute tolerance for each scalar class condition.
pub const DEFAULT_CLASS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassId {
    C1,
    C2a,
    C2b,
    C3a,
    C3b,
    C4a,
    C4b,
    C4c,
    C4d,
    Generic,
}

impl ClassId {
    pub const ALL: [ClassId; 9] = [
        ClassId::C1,
        ClassId::C2a,
        ClassId::C2b,
        ClassId::C3a,
        ClassId::C3b,
        ClassId::C4a,
        ClassId::C4b,
        ClassId::C4c,
        ClassId::C4d,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ClassId::C1 => "1",
            ClassId::C2a => "2a",
            ClassId::C2b => "2b",
            ClassId::C3a => "3a",
            ClassId::C3b => "3b",
            ClassId::C4a => "4a",
            ClassId::C4b => "4b",
            ClassId::C4c => "4c",
            ClassId::C4d => "4d",
            ClassId::Generic => "generic",
        }
    }

    /// Number of free angles in the class parametrization.
    pub fn angle_count(self) -> usize {
        match self {
            ClassId::C1 => 0,
            ClassId::C2a | ClassId::C2b => 1,
            ClassId::C3a | ClassId::C3b => 2,
            _ => 3,
        }
    }

    /// Whether the parametrization carries a free phase.
    pub fn has_phase(self) -> bool {
        matches!(self, ClassId::C4a | ClassId::C4b)
    }

    /// Amplitude indices of the basis kets spanned by the class.
    pub fn basis_indices(self) -> &'static [usize] {
        match self {
            ClassId::C1 => &[0b000],
            ClassId::C2a => &[0b000, 0b011],
            ClassId::C2b => &[0b000, 0b111],
            ClassId::C3a => &[0b000, 0b101, 0b110],
            ClassId::C3b => &[0b000, 0b110, 0b111],
            ClassId::C4a => &[0b000, 0b100, 0b101, 0b110],
            ClassId::C4b => &[0b000, 0b100, 0b110, 0b111],
            ClassId::C4c => &[0b000, 0b101, 0b110, 0b111],
            ClassId::C4d => &[0b000, 0b010, 0b100, 0b111],
            ClassId::Generic => &[],
        }
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ClassId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "1" | "c1" => Ok(ClassId::C1),
            "2a" | "c2a" => Ok(ClassId::C2a),
            "2b" | "c2b" => Ok(ClassId::C2b),
            "3a" | "c3a" => Ok(ClassId::C3a),
            "3b" | "c3b" => Ok(ClassId::C3b),
            "4a" | "c4a" => Ok(ClassId::C4a),
            "4b" | "c4b" => Ok(ClassId::C4b),
            "4c" | "c4c" => Ok(ClassId::C4c),
            "4d" | "c4d" => Ok(ClassId::C4d),
            "generic" => Ok(ClassId::Generic),
            other => Err(format!("unknown class '{other}'")),
        }
    }
}

/// Most-specific class whose conditions all hold within `tol`.
///
/// Conditions, checked in the order C1, C2a, C2b, C3a, C3b, C4a, C4b,
/// C4c, C4d:
///
/// * 1:  every Jᵢ = 0
/// * 2a: J₂ = J₃ = J₄ = J₅ = 0
/// * 2b: J₁ = J₂ = J₃ = J₅ = 0
/// * 3a: J₁J₂+J₁J₃+J₂J₃ = √(J₁J₂J₃) = J₅/2 and J₄ = 0
/// * 3b: J₁ = J₂ = J₅ = 0
/// * 4a: J₄ = 0 and √(J₁J₂J₃) = J₅/2
/// * 4b: J₂ = J₅ = 0
/// * 4c: J₁J₄+J₁J₂+J₁J₃+J₂J₃ = √(J₁J₂J₃) = J₅/2
/// * 4d: J₃J₄+J₁J₂+J₁J₃+J₂J₃ = √(J₁J₂J₃) = |J₅|/2
///
/// The 4d condition is the image of the 4c condition under the qubit
/// relabeling (flip every qubit, swap qubits 1 and 3) that maps the two
/// families onto each other; it holds identically on states spanned by
/// {|000⟩, |010⟩, |100⟩, |111⟩}.
pub fn classify(j: &InvariantSetJ, tol: f64) -> ClassId {
    let z = |x: f64| x.abs() <= tol;
    let eq = |a: f64, b: f64| (a - b).abs() <= tol;
    let (j1, j2, j3, j4, j5) = (j.j1, j.j2, j.j3, j.j4, j.j5);
    let sym3 = j1 * j2 + j1 * j3 + j2 * j3;
    let root = (j1.max(0.0) * j2.max(0.0) * j3.max(0.0)).sqrt();

    if z(j1) && z(j2) && z(j3) && z(j4) && z(j5) {
        ClassId::C1
    } else if z(j2) && z(j3) && z(j4) && z(j5) {
        ClassId::C2a
    } else if z(j1) && z(j2) && z(j3) && z(j5) {
        ClassId::C2b
    } else if z(j4) && eq(sym3, root) && eq(root, 0.5 * j5) {
        ClassId::C3a
    } else if z(j1) && z(j2) && z(j5) {
        ClassId::C3b
    } else if z(j4) && eq(root, 0.5 * j5) {
        ClassId::C4a
    } else if z(j2) && z(j5) {
        ClassId::C4b
    } else if eq(j1 * j4 + sym3, root) && eq(root, 0.5 * j5) {
        ClassId::C4c
    } else if eq(j3 * j4 + sym3, root) && eq(root, 0.5 * j5.abs()) {
        ClassId::C4d
    } else {
        ClassId::Generic
    }
}

/// Parameters of a class-state generator: up to three angles in the open
/// interval (0, π/2) plus a phase for the classes that carry one.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassStateParams {
    pub class_id: ClassId,
    pub angles: Vec<f64>,
    pub phase: f64,
}

impl ClassStateParams {
    pub fn new(class_id: ClassId, angles: &[f64], phase: f64) -> Result<Self, ClassError> {
        if class_id == ClassId::Generic {
            return Err(ClassError::NotParametrized(class_id));
        }
        let want = class_id.angle_count();
        if angles.len() != want {
            return Err(ClassError::WrongArity(class_id, want, angles.len()));
        }
        const NAMES: [&str; 3] = ["theta0", "theta1", "theta2"];
        for (idx, &a) in angles.iter().enumerate() {
            if !(a > 0.0 && a < std::f64::consts::FRAC_PI_2) {
                return Err(ClassError::InvalidAngle {
                    name: NAMES[idx],
                    value: a,
                });
            }
        }
        Ok(ClassStateParams {
            class_id,
            angles: angles.to_vec(),
            phase: if class_id.has_phase() { phase } else { 0.0 },
        })
    }
}

/// The literal parametrized state of a class.
///
/// Four-term classes use β₁ = sinθ₀sinθ₁sinθ₂, β₂ = sinθ₀sinθ₁cosθ₂,
/// β₃ = sinθ₀cosθ₁, β₄ = cosθ₀ on the basis kets of
/// [`ClassId::basis_indices`], with the phase (classes 4a, 4b) attached to
/// the |100⟩ term.
pub fn make_class_state(p: &ClassStateParams) -> Result<PureState3Q, ClassError> {
    let mut amp = [Complex64::new(0.0, 0.0); 8];
    let basis = p.class_id.basis_indices();
    match p.class_id {
        ClassId::C1 => {
            amp[0] = 1.0.into();
        }
        ClassId::C2a | ClassId::C2b => {
            let a = p.angles[0];
            amp[basis[0]] = a.cos().into();
            amp[basis[1]] = a.sin().into();
        }
        ClassId::C3a | ClassId::C3b => {
            let (t1, t2) = (p.angles[0], p.angles[1]);
            amp[basis[0]] = (t1.sin() * t2.sin()).into();
            amp[basis[1]] = (t1.sin() * t2.cos()).into();
            amp[basis[2]] = t1.cos().into();
        }
        ClassId::C4a | ClassId::C4b | ClassId::C4c | ClassId::C4d => {
            let (t0, t1, t2) = (p.angles[0], p.angles[1], p.angles[2]);
            let betas = [
                t0.sin() * t1.sin() * t2.sin(),
                t0.sin() * t1.sin() * t2.cos(),
                t0.sin() * t1.cos(),
                t0.cos(),
            ];
            for (slot, (&m, &b)) in basis.iter().zip(betas.iter()).enumerate() {
                amp[m] = if slot == 1 && p.class_id.has_phase() {
                    Complex64::from_polar(b, p.phase)
                } else {
                    b.into()
                };
            }
        }
        ClassId::Generic => return Err(ClassError::NotParametrized(ClassId::Generic)),
    }
    Ok(PureState3Q::from_unnormalized(amp).expect("angles produce a normalized state"))
}

/// The exact relabeling (flip every qubit, then swap qubits 1 and 3) that
/// carries the 4d basis onto the 4c basis.
pub fn relabel_4d_to_4c(s: &PureState3Q) -> PureState3Q {
    s.flip_all().permute_qubits([2, 1, 0])
}

/// SLOCC label of a pure state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SloccClass {
    GhzClass,
    WClass,
    Biseparable,
    Separable,
}

impl SloccClass {
    pub fn label(self) -> &'static str {
        match self {
            SloccClass::GhzClass => "ghz",
            SloccClass::WClass => "w",
            SloccClass::Biseparable => "biseparable",
            SloccClass::Separable => "separable",
        }
    }
}

/// GHZ class iff the hyperdeterminant modulus squared exceeds `tol`;
/// otherwise W class when every reduction is mixed, else separable or
/// biseparable by the number of pure reductions.
pub fn slocc_label(s: &PureState3Q, tol: f64) -> SloccClass {
    let i6 = crate::invariants::hyperdeterminant(s).norm_sqr();
    if i6 > tol {
        return SloccClass::GhzClass;
    }
    let (i2, i3, i4) = crate::invariants::purity_invariants(s);
    let pure = [i2, i3, i4].iter().filter(|p| 1.0 - **p <= tol).count();
    match pure {
        0 => SloccClass::WClass,
        1 | 2 => SloccClass::Biseparable,
        _ => SloccClass::Separable,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::acin_decompose;
    use crate::invariants::{j_from_acin, j_from_i, InvariantSetI};
    use crate::state::{sample_haar_state, RngSeed};
    use approx::assert_relative_eq;
    use rand::Rng;

    fn classify_state(s: &PureState3Q) -> ClassId {
        classify(&j_from_acin(&acin_decompose(s)), DEFAULT_CLASS_TOL)
    }

    #[test]
    fn anchor_states_classify_correctly() {
        assert_eq!(classify_state(&PureState3Q::basis(0, 0, 0)), ClassId::C1);
        assert_eq!(classify_state(&PureState3Q::ghz()), ClassId::C2b);
        assert_eq!(classify_state(&PureState3Q::w_state()), ClassId::C3a);
    }

    #[test]
    fn haar_random_states_are_generic() {
        for seed in 0..50 {
            let s = sample_haar_state(&mut RngSeed(seed).stream(0));
            assert_eq!(classify_state(&s), ClassId::Generic);
        }
    }

    #[test]
    fn w_point_of_class_3a_reproduces_w_invariants() {
        let theta1 = (1.0 / 3f64.sqrt()).acos();
        let theta2 = std::f64::consts::FRAC_PI_4;
        let p = ClassStateParams::new(ClassId::C3a, &[theta1, theta2], 0.0).unwrap();
        let s = make_class_state(&p).unwrap();
        let a = InvariantSetI::from_state(&s);
        let b = InvariantSetI::from_state(&PureState3Q::w_state());
        assert_relative_eq!(a.i2, b.i2, epsilon = 1e-12);
        assert_relative_eq!(a.i5ppp, b.i5ppp, epsilon = 1e-12);
        assert_relative_eq!(a.kempe, b.kempe, epsilon = 1e-12);
        assert!(a.i6 < 1e-15);
    }

    #[test]
    fn class_2b_at_quarter_pi_is_ghz() {
        let p = ClassStateParams::new(ClassId::C2b, &[std::f64::consts::FRAC_PI_4], 0.0).unwrap();
        let s = make_class_state(&p).unwrap();
        assert_relative_eq!(s.fidelity(&PureState3Q::ghz()), 1.0, epsilon = 1e-13);
    }

    #[test]
    fn invalid_angles_are_rejected() {
        assert!(matches!(
            ClassStateParams::new(ClassId::C3a, &[0.0, 0.3], 0.0),
            Err(ClassError::InvalidAngle { .. })
        ));
        assert!(matches!(
            ClassStateParams::new(ClassId::C2b, &[std::f64::consts::FRAC_PI_2], 0.0),
            Err(ClassError::InvalidAngle { .. })
        ));
        assert!(matches!(
            ClassStateParams::new(ClassId::C4a, &[0.3, 0.3], 0.0),
            Err(ClassError::WrongArity(..))
        ));
    }

    fn random_params(class_id: ClassId, rng: &mut impl Rng) -> ClassStateParams {
        // Keep angles away from the boundary so no class condition
        // degenerates below the classifier tolerance.
        let margin = 0.2;
        let span = std::f64::consts::FRAC_PI_2 - 2.0 * margin;
        let angles: Vec<f64> = (0..class_id.angle_count())
            .map(|_| margin + span * rng.gen::<f64>())
            .collect();
        let phase = rng.gen::<f64>() * std::f64::consts::PI;
        ClassStateParams::new(class_id, &angles, phase).unwrap()
    }

    #[test]
    fn generators_round_trip_to_their_own_class() {
        let mut rng = RngSeed(9).stream(0);
        for class_id in ClassId::ALL {
            for _ in 0..100 {
                let p = random_params(class_id, &mut rng);
                let s = make_class_state(&p).unwrap();
                let got = classify_state(&s);
                assert_eq!(got, class_id, "generator {class_id} classified as {got}");
            }
        }
    }

    #[test]
    fn relabeled_4d_state_matches_4c_with_swapped_parameters() {
        let mut rng = RngSeed(10).stream(0);
        for _ in 0..50 {
            let p = random_params(ClassId::C4d, &mut rng);
            let s = make_class_state(&p).unwrap();
            let relabeled = relabel_4d_to_4c(&s);
            // The relabeling exchanges β₁ and β₄ within the 4c family.
            let t0 = p.angles[0];
            let t1 = p.angles[1];
            let t2 = p.angles[2];
            let betas = [
                t0.sin() * t1.sin() * t2.sin(),
                t0.sin() * t1.sin() * t2.cos(),
                t0.sin() * t1.cos(),
                t0.cos(),
            ];
            let mut amp = [Complex64::new(0.0, 0.0); 8];
            let basis = ClassId::C4c.basis_indices();
            for (m, b) in basis.iter().zip([betas[3], betas[1], betas[2], betas[0]]) {
                amp[*m] = b.into();
            }
            let matched = PureState3Q::new(amp).unwrap();
            assert_relative_eq!(relabeled.fidelity(&matched), 1.0, epsilon = 1e-12);
            // Both carry identical invariant sets by construction.
            let a = InvariantSetI::from_state(&relabeled);
            let b = InvariantSetI::from_state(&matched);
            assert!((a.kempe - b.kempe).abs() < 1e-12);
            assert!((a.i6 - b.i6).abs() < 1e-12);
        }
    }

    #[test]
    fn slocc_anchors() {
        assert_eq!(
            slocc_label(&PureState3Q::ghz(), 1e-12),
            SloccClass::GhzClass
        );
        assert_eq!(
            slocc_label(&PureState3Q::w_state(), 1e-12),
            SloccClass::WClass
        );
        assert_eq!(
            slocc_label(&PureState3Q::basis(0, 1, 0), 1e-12),
            SloccClass::Separable
        );
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amp = [Complex64::new(0.0, 0.0); 8];
        amp[PureState3Q::index(0, 0, 0)] = h.into();
        amp[PureState3Q::index(0, 1, 1)] = h.into();
        let bisep = PureState3Q::new(amp).unwrap();
        assert_eq!(slocc_label(&bisep, 1e-12), SloccClass::Biseparable);
    }

    #[test]
    fn haar_states_are_all_ghz_class_at_zero_tolerance() {
        for seed in 0..200 {
            let s = sample_haar_state(&mut RngSeed(seed).stream(3));
            assert_eq!(slocc_label(&s, 0.0), SloccClass::GhzClass);
        }
    }

    #[test]
    fn delta_j_vanishes_on_class_3a() {
        // With J₄ = 0 the discriminant reduces to J₅² − 4J₁J₂J₃, which the
        // 3a condition forces to zero.
        let mut rng = RngSeed(11).stream(0);
        for _ in 0..50 {
            let p = random_params(ClassId::C3a, &mut rng);
            let s = make_class_state(&p).unwrap();
            let j = j_from_i(&InvariantSetI::from_state(&s));
            assert!(j.delta_j().abs() < 1e-12);
        }
    }
}
