//! Optimization over local unitaries: minimal Rényi–Ingarden–Urbanik
//! (decomposition) entropies and maximal class-overlap fidelities.
//!
//! Objectives live on U(2)×U(2)×U(2) parametrized by nine unconstrained
//! Euler angles (periodic, so no boundary artifacts) and are optimized by
//! multistart Nelder–Mead; the identity is always among the starting
//! points, which makes every reported optimum at least as good as the
//! untransformed value.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::canonical::acin_decompose;
use crate::classes::{ClassId, ClassStateParams};
use crate::invariants::hyperdeterminant;
use crate::simplex::nelder_mead;
use crate::state::{apply_local, LocalUnitary, PureState3Q};

/// Probabilities below this threshold do not count toward the q = 0
/// support size.
pub const SUPPORT_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OptimizeError {
    #[error("probability vector sums to 1{0:+.3e}")]
    InvalidDistribution(f64),
    #[error("Rényi order must be ≥ 0, got {0}")]
    InvalidOrder(f64),
    #[error("no overlap target for class {0}")]
    InvalidClass(ClassId),
}

/// Multistart budget and simplex settings.
#[derive(Debug, Clone, Copy)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            restarts: 20,
            max_iters: 2000,
            tol: 1e-10,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn with_restarts(mut self, restarts: usize) -> Self {
        assert!(restarts >= 1, "at least one restart is required");
        self.restarts = restarts;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Rényi entropy S_q of a probability vector, in nats.
///
/// q = 0 counts the support above [`SUPPORT_TOL`], q = 1 is the Shannon
/// entropy, q = ∞ gives −ln max p.
pub fn renyi_entropy(p: &[f64], q: f64) -> Result<f64, OptimizeError> {
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > 1e-8 {
        return Err(OptimizeError::InvalidDistribution(sum - 1.0));
    }
    if p.iter().any(|x| *x < -1e-12) {
        return Err(OptimizeError::InvalidDistribution(sum - 1.0));
    }
    if q < 0.0 || q.is_nan() {
        return Err(OptimizeError::InvalidOrder(q));
    }
    if q == 0.0 {
        let count = p.iter().filter(|x| **x > SUPPORT_TOL).count();
        return Ok((count.max(1) as f64).ln());
    }
    if q.is_infinite() {
        let max = p.iter().cloned().fold(0.0, f64::max);
        return Ok(-max.ln());
    }
    if (q - 1.0).abs() < 1e-12 {
        return Ok(p.iter().filter(|x| **x > 0.0).map(|x| -x * x.ln()).sum());
    }
    let s: f64 = p.iter().filter(|x| **x > 0.0).map(|x| x.powf(q)).sum();
    Ok(s.ln() / (1.0 - q))
}

/// Result of a minimal-decomposition-entropy search.
#[derive(Debug, Clone)]
pub struct RiuResult {
    pub q: f64,
    /// Best entropy found (nats); never exceeds S_q of the input state.
    pub entropy: f64,
    pub argmin: LocalUnitary,
    /// Probability vector at the optimum.
    pub prob_vector: [f64; 8],
    pub converged: bool,
    pub iterations: usize,
}

struct MultistartBest {
    x: [f64; 9],
    value: f64,
    iterations: usize,
    converged: bool,
}

fn multistart9<F>(objective: &F, cfg: &OptimizerConfig) -> MultistartBest
where
    F: Fn(&[f64]) -> f64,
{
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best: Option<MultistartBest> = None;
    let mut total_iters = 0;
    for restart in 0..cfg.restarts.max(1) {
        let x0 = if restart == 0 {
            [0.0; 9]
        } else {
            let mut x = [0.0; 9];
            for a in &mut x {
                *a = (rand::Rng::gen::<f64>(&mut rng) - 0.5) * 2.0 * std::f64::consts::PI;
            }
            x
        };
        let r = nelder_mead(|x| objective(x), &x0, 0.45, cfg.max_iters, cfg.tol);
        total_iters += r.iterations;
        let cand = MultistartBest {
            x: r.x.as_slice().try_into().expect("nine angles"),
            value: r.value,
            iterations: total_iters,
            converged: r.converged,
        };
        best = Some(match best {
            None => cand,
            Some(cur) => {
                if cand.value < cur.value {
                    MultistartBest {
                        iterations: total_iters,
                        ..cand
                    }
                } else {
                    MultistartBest {
                        iterations: total_iters,
                        ..cur
                    }
                }
            }
        });
    }
    best.expect("restarts >= 1")
}

fn support_count(p: &[f64; 8]) -> usize {
    p.iter().filter(|x| **x > SUPPORT_TOL).count().max(1)
}

/// Minimal Rényi entropy of the product-basis probability vector over all
/// local unitaries.
///
/// For q = 0 the entropy is piecewise constant, so instead of a simplex
/// search the support is evaluated at the identity, at each random restart
/// point, at the five-term canonical decomposition (never more than five
/// terms), and in the frame that maximizes the largest probability.
pub fn riu_entropy(s: &PureState3Q, q: f64, cfg: &OptimizerConfig) -> RiuResult {
    if q == 0.0 {
        return riu_support(s, cfg);
    }
    let objective = |angles: &[f64]| {
        let mut a9 = [0.0; 9];
        a9.copy_from_slice(angles);
        let t = apply_local(&LocalUnitary::from_angles(a9), s);
        renyi_entropy(&t.probabilities(), q).expect("unitary image stays normalized")
    };
    let best = multistart9(&objective, cfg);
    let argmin = LocalUnitary::from_angles(best.x);
    RiuResult {
        q,
        entropy: best.value,
        prob_vector: apply_local(&argmin, s).probabilities(),
        argmin,
        converged: best.converged,
        iterations: best.iterations,
    }
}

fn riu_support(s: &PureState3Q, cfg: &OptimizerConfig) -> RiuResult {
    let mut best_u = LocalUnitary::identity();
    let mut best = support_count(&s.probabilities());

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 1..cfg.restarts.max(1) {
        let u = LocalUnitary::random(&mut rng);
        let c = support_count(&apply_local(&u, s).probabilities());
        if c < best {
            best = c;
            best_u = u;
        }
    }

    // The frame that maximizes max_m p_m often reveals product structure
    // that the canonical form keeps spread over two terms.
    let inf = riu_entropy(s, f64::INFINITY, cfg);
    let c = support_count(&inf.prob_vector);
    if c < best {
        best = c;
        best_u = inf.argmin;
    }

    // Canonical-form bound: never more than five terms.
    let form = acin_decompose(s);
    let acin_support = form
        .lambda()
        .iter()
        .filter(|l| *l * *l > SUPPORT_TOL)
        .count()
        .max(1);
    if acin_support < best {
        best = acin_support;
        let d = crate::canonical::acin_decompose_full(s);
        let (a0, a1, a2) = crate::linalg::zyz_angles(&d.unitaries[0]);
        let (b0, b1, b2) = crate::linalg::zyz_angles(&d.unitaries[1]);
        let (c0, c1, c2) = crate::linalg::zyz_angles(&d.unitaries[2]);
        best_u = LocalUnitary::from_angles([a0, a1, a2, b0, b1, b2, c0, c1, c2]);
    }
    best = best.min(5);

    RiuResult {
        q: 0.0,
        entropy: (best as f64).ln(),
        prob_vector: apply_local(&best_u, s).probabilities(),
        argmin: best_u,
        converged: true,
        iterations: 0,
    }
}

/// Result of a maximal class-overlap search.
#[derive(Debug, Clone)]
pub struct OverlapResult {
    pub class_id: ClassId,
    /// max |⟨φ|U†|s⟩|² over class members φ and local unitaries U.
    pub lambda_max: f64,
    pub arg_class_params: ClassStateParams,
    pub arg_unitary: LocalUnitary,
    pub iterations: usize,
    pub converged: bool,
}

/// Projection weight of the rotated state on the class's basis span. For a
/// fixed unitary this is the exact inner maximum over class members: the
/// classes span coordinate subspaces and their free phases are absorbable
/// into diagonal local phase gates.
fn class_projection(class_id: ClassId, s: &PureState3Q) -> f64 {
    let p = s.probabilities();
    class_id.basis_indices().iter().map(|m| p[*m]).sum()
}

const ANGLE_CLAMP: f64 = 1e-7;

fn clamp_angle(a: f64) -> f64 {
    a.clamp(ANGLE_CLAMP, std::f64::consts::FRAC_PI_2 - ANGLE_CLAMP)
}

/// Recover generator angles from the projected amplitude magnitudes.
fn params_from_projection(class_id: ClassId, y: &PureState3Q) -> ClassStateParams {
    let basis = class_id.basis_indices();
    let mut b: Vec<f64> = basis.iter().map(|m| y.amp()[*m].norm()).collect();
    let n: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n > 1e-300 {
        for x in &mut b {
            *x /= n;
        }
    }
    let angles: Vec<f64> = match b.len() {
        1 => vec![],
        2 => vec![clamp_angle(b[1].atan2(b[0]))],
        3 => vec![
            clamp_angle(b[2].clamp(-1.0, 1.0).acos()),
            clamp_angle(b[0].atan2(b[1])),
        ],
        _ => {
            let t0 = clamp_angle(b[3].clamp(-1.0, 1.0).acos());
            let s0 = t0.sin().max(1e-12);
            let t1 = clamp_angle((b[2] / s0).clamp(-1.0, 1.0).acos());
            let t2 = clamp_angle(b[0].atan2(b[1]));
            vec![t0, t1, t2]
        }
    };
    ClassStateParams::new(class_id, &angles, 0.0).expect("clamped angles are in range")
}

/// Maximal squared fidelity of `s` with any local-unitary image of a
/// member of the given class.
pub fn max_overlap(
    s: &PureState3Q,
    class_id: ClassId,
    cfg: &OptimizerConfig,
) -> Result<OverlapResult, OptimizeError> {
    if class_id == ClassId::Generic {
        return Err(OptimizeError::InvalidClass(class_id));
    }
    let objective = |angles: &[f64]| {
        let mut a9 = [0.0; 9];
        a9.copy_from_slice(angles);
        -class_projection(class_id, &apply_local(&LocalUnitary::from_angles(a9), s))
    };
    let best = multistart9(&objective, cfg);
    let arg_unitary = LocalUnitary::from_angles(best.x);
    let rotated = apply_local(&arg_unitary, s);
    Ok(OverlapResult {
        class_id,
        lambda_max: (-best.value).clamp(0.0, 1.0),
        arg_class_params: params_from_projection(class_id, &rotated),
        arg_unitary,
        iterations: best.iterations,
        converged: best.converged,
    })
}

/// The closest class member realized by an overlap search: the rotated
/// state projected onto the class span and renormalized.
pub fn overlap_representative(s: &PureState3Q, result: &OverlapResult) -> Option<PureState3Q> {
    let rotated = apply_local(&result.arg_unitary, s);
    let mut amp = [num_complex::Complex64::new(0.0, 0.0); 8];
    for &m in result.class_id.basis_indices() {
        amp[m] = rotated.amp()[m];
    }
    PureState3Q::from_unnormalized(amp).ok()
}

/// |Hdet| of the input state and of the optimal class representative.
/// The first value is what the optimization can never change; the second
/// is zero whenever the class span forces a vanishing hyperdeterminant.
pub fn hdet_track(s: &PureState3Q, result: &OverlapResult) -> (f64, f64) {
    let hdet_beta = hyperdeterminant(s).norm();
    let hdet_phi = overlap_representative(s, result)
        .map(|rep| hyperdeterminant(&rep).norm())
        .unwrap_or(0.0);
    (hdet_beta, hdet_phi)
}

/// One row of a minimal-entropy surface.
#[derive(Debug, Clone)]
pub struct SurfacePoint {
    pub angles: Vec<f64>,
    pub entropy: f64,
}

/// Minimal Shannon decomposition entropy over a Cartesian grid of class
/// angles; rows are emitted in lexicographic grid order.
pub fn riu_surface(
    class_id: ClassId,
    axes: &[Vec<f64>],
    cfg: &OptimizerConfig,
) -> Result<Vec<SurfacePoint>, OptimizeError> {
    if class_id == ClassId::Generic || class_id == ClassId::C1 {
        return Err(OptimizeError::InvalidClass(class_id));
    }
    assert_eq!(
        axes.len(),
        class_id.angle_count(),
        "one axis per class angle"
    );
    let mut points = Vec::new();
    let mut idx = vec![0usize; axes.len()];
    loop {
        let angles: Vec<f64> = idx.iter().zip(axes).map(|(i, ax)| ax[*i]).collect();
        let params = ClassStateParams::new(class_id, &angles, 0.0)
            .unwrap_or_else(|e| panic!("grid angle outside open domain: {e}"));
        let s = crate::classes::make_class_state(&params).expect("validated params");
        let r = riu_entropy(&s, 1.0, cfg);
        points.push(SurfacePoint {
            angles,
            entropy: r.entropy,
        });

        // Advance the mixed-radix counter.
        let mut k = axes.len();
        loop {
            if k == 0 {
                return Ok(points);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < axes[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}
