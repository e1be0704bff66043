//! Analytic reference distributions, histograms, moment-matched beta-like
//! fits, and goodness-of-fit statistics.
//!
//! The closed-form densities: the reduction purity follows
//! (105/2)(1−x)²(2x−1)^{1/2}; the minimal reduced eigenvalue follows
//! 420[x(2x−1)(1−x)]²; the canonical phase is uniform on [0, π]. The
//! sextic invariant, |Hdet|², J₄ and the Kempe invariant get generalized
//! beta approximations whose first two moments match the exact Haar
//! moments.

use std::str::FromStr;

use statrs::function::beta::{beta_reg, ln_beta};
use statrs::function::gamma::ln_gamma;
use thiserror::Error;

use crate::ensemble::KahanSum;
use crate::polytope::{lambda_min_cdf, lambda_min_pdf};
use crate::simplex::nelder_mead;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("unknown distribution '{0}'")]
    UnknownDistribution(String),
    #[error("{value} outside the support [{lo}, {hi}]")]
    Domain { value: f64, lo: f64, hi: f64 },
    #[error("fit diverged: {0}")]
    FitDiverged(String),
}

/// Exponents of the moment-matched approximations.
pub mod fit_constants {
    /// P(I₅''') ∝ (1−x)^A (4x−1)^B.
    pub const SEXTIC_A: f64 = 21989.0 / 5691.0;
    pub const SEXTIC_B: f64 = 5554.0 / 5691.0;
    /// Beta exponents of the three-tangle fit behind the |Hdet|² and J₄
    /// approximations.
    pub const TANGLE_ALPHA: f64 = 31.0 / 17.0;
    pub const TANGLE_BETA: f64 = 62.0 / 17.0;
    /// P(κ) ∝ (1−κ)^A (9κ−2)^B for the Kempe invariant.
    pub const KEMPE_A: f64 = 90.0 / 23.0;
    pub const KEMPE_B: f64 = 283.0 / 621.0;
}

/// Named reference distributions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionId {
    /// Exact density of tr ρ² for any single-qubit reduction, on [1/2, 1].
    Purity,
    /// Moment-matched density of the sextic invariant, on [1/4, 1].
    Sextic,
    /// Moment-matched density of |Hdet|², on [0, 1/16].
    HdetSq,
    /// Moment-matched density of J₄, on [0, 1/4].
    J4,
    /// Moment-matched density of the Kempe invariant, on [2/9, 1].
    Kempe,
    /// Exact density of the minimal reduced eigenvalue, on [0, 1/2].
    LambdaMin,
    /// Uniform canonical phase, on [0, π].
    Phi,
}

impl DistributionId {
    pub const ALL: [DistributionId; 7] = [
        DistributionId::Purity,
        DistributionId::Sextic,
        DistributionId::HdetSq,
        DistributionId::J4,
        DistributionId::Kempe,
        DistributionId::LambdaMin,
        DistributionId::Phi,
    ];

    pub fn support(self) -> (f64, f64) {
        match self {
            DistributionId::Purity => (0.5, 1.0),
            DistributionId::Sextic => (0.25, 1.0),
            DistributionId::HdetSq => (0.0, 1.0 / 16.0),
            DistributionId::J4 => (0.0, 0.25),
            DistributionId::Kempe => (2.0 / 9.0, 1.0),
            DistributionId::LambdaMin => (0.0, 0.5),
            DistributionId::Phi => (0.0, std::f64::consts::PI),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DistributionId::Purity => "purity",
            DistributionId::Sextic => "i5ppp",
            DistributionId::HdetSq => "i6",
            DistributionId::J4 => "j4",
            DistributionId::Kempe => "kempe",
            DistributionId::LambdaMin => "lambda_min",
            DistributionId::Phi => "phi",
        }
    }
}

impl FromStr for DistributionId {
    type Err = StatsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "purity" | "i2" | "i3" | "i4" => Ok(DistributionId::Purity),
            "i5ppp" | "sextic" => Ok(DistributionId::Sextic),
            "i6" | "hdet_sq" => Ok(DistributionId::HdetSq),
            "j4" => Ok(DistributionId::J4),
            "kempe" | "i5" => Ok(DistributionId::Kempe),
            "lambda_min" | "lmin" => Ok(DistributionId::LambdaMin),
            "phi" => Ok(DistributionId::Phi),
            other => Err(StatsError::UnknownDistribution(other.to_string())),
        }
    }
}

fn check_support(id: DistributionId, x: f64) -> Result<(), StatsError> {
    let (lo, hi) = id.support();
    if x < lo || x > hi || x.is_nan() {
        return Err(StatsError::Domain { value: x, lo, hi });
    }
    Ok(())
}

fn beta_pdf(alpha: f64, beta: f64, y: f64) -> f64 {
    if y <= 0.0 || y >= 1.0 {
        return 0.0;
    }
    ((alpha - 1.0) * y.ln() + (beta - 1.0) * (1.0 - y).ln() - ln_beta(alpha, beta)).exp()
}

/// Closed-form value of a named reference density.
///
/// |Hdet|² has an integrable singularity at zero; the density value at
/// exactly 0 is returned as +∞.
pub fn analytic_pdf(id: DistributionId, x: f64) -> Result<f64, StatsError> {
    check_support(id, x)?;
    use fit_constants::*;
    Ok(match id {
        DistributionId::Purity => 52.5 * (1.0 - x) * (1.0 - x) * (2.0 * x - 1.0).max(0.0).sqrt(),
        DistributionId::Sextic => {
            let (a, b) = (SEXTIC_A, SEXTIC_B);
            // Normalization: ∫ (1-x)^a (4x-1)^b dx = 3^{a+b+1}·B(a+1,b+1)/4^{a+1}.
            let ln_c = (a + 1.0) * 4f64.ln() + ln_gamma(a + b + 2.0)
                - (a + b + 1.0) * 3f64.ln()
                - ln_gamma(a + 1.0)
                - ln_gamma(b + 1.0);
            if x <= 0.25 || x >= 1.0 {
                0.0
            } else {
                (ln_c + a * (1.0 - x).ln() + b * (4.0 * x - 1.0).ln()).exp()
            }
        }
        DistributionId::HdetSq => {
            if x == 0.0 {
                f64::INFINITY
            } else {
                let y = 4.0 * x.sqrt();
                2.0 / x.sqrt() * beta_pdf(TANGLE_ALPHA, TANGLE_BETA, y)
            }
        }
        DistributionId::J4 => 4.0 * beta_pdf(TANGLE_ALPHA, TANGLE_BETA, 4.0 * x),
        DistributionId::Kempe => {
            let (a, b) = (KEMPE_A, KEMPE_B);
            let ln_c = (a + 1.0) * 9f64.ln() + ln_gamma(a + b + 2.0)
                - (a + b + 1.0) * 7f64.ln()
                - ln_gamma(a + 1.0)
                - ln_gamma(b + 1.0);
            if x <= 2.0 / 9.0 || x >= 1.0 {
                0.0
            } else {
                (ln_c + a * (1.0 - x).ln() + b * (9.0 * x - 2.0).ln()).exp()
            }
        }
        DistributionId::LambdaMin => lambda_min_pdf(x).expect("support already checked"),
        DistributionId::Phi => std::f64::consts::FRAC_1_PI,
    })
}

/// Closed-form CDF of a named reference distribution.
pub fn analytic_cdf(id: DistributionId, x: f64) -> Result<f64, StatsError> {
    check_support(id, x)?;
    use fit_constants::*;
    Ok(match id {
        DistributionId::Purity => {
            // Substituting u = 2x−1: (105/16)·[(2/3)u^{3/2} − (4/5)u^{5/2} + (2/7)u^{7/2}].
            let u = (2.0 * x - 1.0).max(0.0);
            let s = u.sqrt();
            (105.0 / 16.0) * (2.0 / 3.0 * u * s - 0.8 * u * u * s + 2.0 / 7.0 * u * u * u * s)
        }
        DistributionId::Sextic => {
            // (4x−1)/3 follows Beta(B+1, A+1).
            let u = ((4.0 * x - 1.0) / 3.0).clamp(0.0, 1.0);
            beta_reg(SEXTIC_B + 1.0, SEXTIC_A + 1.0, u)
        }
        DistributionId::HdetSq => beta_reg(TANGLE_ALPHA, TANGLE_BETA, 4.0 * x.sqrt()),
        DistributionId::J4 => beta_reg(TANGLE_ALPHA, TANGLE_BETA, 4.0 * x),
        DistributionId::Kempe => {
            let u = ((9.0 * x - 2.0) / 7.0).clamp(0.0, 1.0);
            beta_reg(KEMPE_B + 1.0, KEMPE_A + 1.0, u)
        }
        DistributionId::LambdaMin => lambda_min_cdf(x).expect("support already checked"),
        DistributionId::Phi => x * std::f64::consts::FRAC_1_PI,
    })
}

/// Joint eigenvalue density of a single-qubit reduction, resolved onto the
/// simplex ϑ₁ + ϑ₂ = 1: the value 210(ϑ₁−ϑ₂)²ϑ₁²ϑ₂², a density in ϑ₂
/// alone over [0, 1].
pub fn joint_eigen_density(theta1: f64, theta2: f64) -> Result<f64, StatsError> {
    if !(0.0..=1.0).contains(&theta1) {
        return Err(StatsError::Domain {
            value: theta1,
            lo: 0.0,
            hi: 1.0,
        });
    }
    if !(0.0..=1.0).contains(&theta2) {
        return Err(StatsError::Domain {
            value: theta2,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let off = (1.0 - theta1 - theta2).abs();
    if off > 1e-9 {
        return Err(StatsError::Domain {
            value: theta1 + theta2,
            lo: 1.0,
            hi: 1.0,
        });
    }
    let d = theta1 - theta2;
    Ok(210.0 * d * d * theta1 * theta1 * theta2 * theta2)
}

/// Fixed-width histogram with raw-moment accumulators. Samples outside
/// the support are clamped into the edge bins.
#[derive(Debug, Clone)]
pub struct Histogram {
    lo: f64,
    hi: f64,
    counts: Vec<u64>,
    n: u64,
    sum: KahanSum,
    sum_sq: KahanSum,
}

impl Histogram {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Self {
        assert!(hi > lo && bins >= 1);
        Histogram {
            lo,
            hi,
            counts: vec![0; bins],
            n: 0,
            sum: KahanSum::default(),
            sum_sq: KahanSum::default(),
        }
    }

    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn bin_width(&self) -> f64 {
        (self.hi - self.lo) / self.counts.len() as f64
    }

    pub fn record(&mut self, x: f64) {
        let idx = ((x - self.lo) / self.bin_width()).floor();
        let idx = (idx.max(0.0) as usize).min(self.counts.len() - 1);
        self.counts[idx] += 1;
        self.n += 1;
        self.sum.add(x);
        self.sum_sq.add(x * x);
    }

    pub fn merge(&mut self, other: &Histogram) {
        assert_eq!(self.counts.len(), other.counts.len());
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.n += other.n;
        self.sum.merge(other.sum);
        self.sum_sq.merge(other.sum_sq);
    }

    pub fn len(&self) -> u64 {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn count(&self, bin: usize) -> u64 {
        self.counts[bin]
    }

    pub fn center(&self, bin: usize) -> f64 {
        self.lo + (bin as f64 + 0.5) * self.bin_width()
    }

    /// Normalized density at one bin.
    pub fn density(&self, bin: usize) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        self.counts[bin] as f64 / (self.n as f64 * self.bin_width())
    }

    /// Riemann integral of the density; exactly 1 for a populated histogram.
    pub fn integral(&self) -> f64 {
        (0..self.bins())
            .map(|b| self.density(b) * self.bin_width())
            .sum()
    }

    pub fn mean(&self) -> f64 {
        self.sum.value() / self.n as f64
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        (self.sum_sq.value() / self.n as f64 - m * m).max(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitMethod {
    Moments,
    LeastSquares,
}

/// Generalized beta fit c·(x−lo)^a·(hi−x)^b on [lo, hi], normalized.
#[derive(Debug, Clone, Copy)]
pub struct BetaLikeFit {
    pub a: f64,
    pub b: f64,
    /// Normalization constant (analytic, not fitted).
    pub c: f64,
    pub lo: f64,
    pub hi: f64,
}

impl BetaLikeFit {
    fn from_exponents(a: f64, b: f64, lo: f64, hi: f64) -> Result<Self, StatsError> {
        if !(a > -1.0 && b > -1.0) || !a.is_finite() || !b.is_finite() {
            return Err(StatsError::FitDiverged(format!("exponents a={a}, b={b}")));
        }
        // ∫ (x-lo)^a (hi-x)^b dx = (hi-lo)^{a+b+1} B(a+1, b+1)
        let ln_c = -(a + b + 1.0) * (hi - lo).ln() - ln_beta(a + 1.0, b + 1.0);
        Ok(BetaLikeFit {
            a,
            b,
            c: ln_c.exp(),
            lo,
            hi,
        })
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if x <= self.lo || x >= self.hi {
            return 0.0;
        }
        self.c * (x - self.lo).powf(self.a) * (self.hi - x).powf(self.b)
    }
}

/// Fit c·(x−lo)^a(hi−x)^b to a histogram.
///
/// `Moments` matches the first two raw moments of the samples; it is
/// deterministic and cheap. `LeastSquares` refines the moment fit by
/// minimizing the L2 distance between bin densities and the model.
pub fn fit_beta_like(h: &Histogram, method: FitMethod) -> Result<BetaLikeFit, StatsError> {
    if h.is_empty() {
        return Err(StatsError::FitDiverged("empty histogram".into()));
    }
    let (lo, hi) = h.support();
    let width = hi - lo;
    let m = ((h.mean() - lo) / width).clamp(1e-12, 1.0 - 1e-12);
    let v = h.variance() / (width * width);
    if v <= 0.0 {
        return Err(StatsError::FitDiverged("zero variance".into()));
    }
    let k = m * (1.0 - m) / v - 1.0;
    if k <= 0.0 {
        return Err(StatsError::FitDiverged(format!(
            "variance too large (k = {k})"
        )));
    }
    let moments = BetaLikeFit::from_exponents(m * k - 1.0, (1.0 - m) * k - 1.0, lo, hi)?;
    match method {
        FitMethod::Moments => Ok(moments),
        FitMethod::LeastSquares => {
            let sse = |p: &[f64]| -> f64 {
                let (a, b) = (p[0], p[1]);
                match BetaLikeFit::from_exponents(a, b, lo, hi) {
                    Err(_) => f64::MAX,
                    Ok(fit) => (0..h.bins())
                        .map(|i| {
                            let d = h.density(i) - fit.pdf(h.center(i));
                            d * d
                        })
                        .sum(),
                }
            };
            let r = nelder_mead(sse, &[moments.a, moments.b], 0.25, 4000, 1e-14);
            if !r.value.is_finite() {
                return Err(StatsError::FitDiverged(
                    "least-squares residual not finite".into(),
                ));
            }
            BetaLikeFit::from_exponents(r.x[0], r.x[1], lo, hi)
        }
    }
}

/// Kolmogorov–Smirnov distance between samples and a reference CDF.
pub fn ks_distance<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    debug_assert!(samples.len() >= 100, "KS distance needs a real sample");
    let mut xs = samples.to_vec();
    xs.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len() as f64;
    let mut sup = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x).clamp(0.0, 1.0);
        sup = sup
            .max((i as f64 / n - f).abs())
            .max(((i + 1) as f64 / n - f).abs());
    }
    sup
}

/// Two-sample Kolmogorov–Smirnov distance.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_unstable_by(|p, q| p.partial_cmp(q).unwrap());
    ys.sort_unstable_by(|p, q| p.partial_cmp(q).unwrap());
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut sup = 0.0f64;
    while i < xs.len() && j < ys.len() {
        let x = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= x {
            i += 1;
        }
        while j < ys.len() && ys[j] <= x {
            j += 1;
        }
        sup = sup.max((i as f64 / na - j as f64 / nb).abs());
    }
    sup
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::Distribution;

    /// Simpson quadrature over [lo, hi].
    fn simpson<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize) -> f64 {
        let n = n + n % 2;
        let h = (hi - lo) / n as f64;
        let mut acc = 0.0;
        for i in 0..=n {
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += w * f(lo + i as f64 * h);
        }
        acc * h / 3.0
    }

    /// ∫ g(x)·pdf_id(x) dx over [lo, x_hi], with the substitution
    /// x = lo + (hi−lo)v² that removes the left-edge power singularities
    /// the reference densities carry.
    fn integrate_pdf<G: Fn(f64) -> f64>(id: DistributionId, x_hi: f64, g: G) -> f64 {
        let (lo, hi) = id.support();
        let span = hi - lo;
        let v_hi = ((x_hi - lo) / span).sqrt();
        simpson(
            |v| {
                let x = (lo + span * v * v).min(hi);
                if v <= 0.0 {
                    0.0
                } else {
                    g(x) * analytic_pdf(id, x).unwrap() * 2.0 * span * v
                }
            },
            0.0,
            v_hi,
            20_000,
        )
    }

    #[test]
    fn every_named_pdf_is_normalized() {
        for id in DistributionId::ALL {
            let hi = id.support().1;
            let integral = integrate_pdf(id, hi, |_| 1.0);
            assert!(
                (integral - 1.0).abs() < 1e-8,
                "{}: integral {integral}",
                id.name()
            );
        }
    }

    #[test]
    fn pdfs_vanish_at_the_right_edges() {
        assert_eq!(analytic_pdf(DistributionId::Purity, 1.0).unwrap(), 0.0);
        assert_eq!(analytic_pdf(DistributionId::Purity, 0.5).unwrap(), 0.0);
        assert_eq!(analytic_pdf(DistributionId::LambdaMin, 0.0).unwrap(), 0.0);
        assert_eq!(analytic_pdf(DistributionId::LambdaMin, 0.5).unwrap(), 0.0);
        assert!(analytic_pdf(DistributionId::Purity, 0.3).is_err());
        assert!("nope".parse::<DistributionId>().is_err());
    }

    #[test]
    fn fit_moments_match_exact_references() {
        use crate::invariants::exact;
        let mean = |id: DistributionId| integrate_pdf(id, id.support().1, |x| x);
        let second = |id: DistributionId| integrate_pdf(id, id.support().1, |x| x * x);
        assert_relative_eq!(
            mean(DistributionId::Purity),
            exact::MEAN_PURITY,
            epsilon = 1e-8
        );
        assert_relative_eq!(
            mean(DistributionId::Sextic),
            exact::MEAN_SEXTIC,
            epsilon = 1e-6
        );
        assert_relative_eq!(
            mean(DistributionId::Kempe),
            exact::MEAN_KEMPE,
            epsilon = 1e-6
        );
        assert_relative_eq!(mean(DistributionId::J4), exact::MEAN_J4, epsilon = 1e-6);
        assert_relative_eq!(
            mean(DistributionId::HdetSq),
            exact::MEAN_HDET_SQ,
            epsilon = 1e-6
        );
        assert_relative_eq!(
            second(DistributionId::Kempe),
            exact::SECOND_MOMENT_KEMPE,
            epsilon = 1e-6
        );
        assert_relative_eq!(
            second(DistributionId::Sextic),
            exact::SECOND_MOMENT_SEXTIC,
            epsilon = 1e-6
        );
        assert_relative_eq!(
            mean(DistributionId::LambdaMin),
            crate::polytope::MEAN_LAMBDA_MIN,
            epsilon = 1e-8
        );
    }

    #[test]
    fn cdfs_match_pdf_quadrature() {
        for id in DistributionId::ALL {
            let (lo, hi) = id.support();
            for frac in [0.2, 0.5, 0.8] {
                let x = lo + frac * (hi - lo);
                let quad = integrate_pdf(id, x, |_| 1.0);
                let cdf = analytic_cdf(id, x).unwrap();
                assert!(
                    (quad - cdf).abs() < 1e-7,
                    "{} at {x}: {quad} vs {cdf}",
                    id.name()
                );
            }
        }
    }

    #[test]
    fn joint_density_anchors_and_derived_marginals() {
        // Vanishes at the degenerate point ϑ₁ = ϑ₂ = 1/2.
        assert_eq!(joint_eigen_density(0.5, 0.5).unwrap(), 0.0);
        assert!(joint_eigen_density(0.7, 0.7).is_err());

        // Change of variables ϑ₂ → I = ϑ₁²+ϑ₂² reproduces the purity pdf.
        for x in [0.55f64, 0.66, 0.8, 0.95] {
            let t2 = 0.5 * (1.0 - (2.0 * x - 1.0).sqrt());
            let rho = joint_eigen_density(1.0 - t2, t2).unwrap();
            let jac = 2.0 * (2.0 * x - 1.0).sqrt();
            let derived = 2.0 * rho / jac;
            assert_relative_eq!(
                derived,
                analytic_pdf(DistributionId::Purity, x).unwrap(),
                epsilon = 1e-10
            );
        }

        // λ_min = min(ϑ₁, ϑ₂) doubles the symmetric density.
        for x in [0.1, 0.2, 0.3, 0.45] {
            let derived = 2.0 * joint_eigen_density(1.0 - x, x).unwrap();
            assert_relative_eq!(
                derived,
                analytic_pdf(DistributionId::LambdaMin, x).unwrap(),
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn histogram_density_integrates_to_one() {
        let mut h = Histogram::new(0.0, 1.0, 200);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50_000 {
            h.record(rng.gen::<f64>().powi(2));
        }
        assert_relative_eq!(h.integral(), 1.0, epsilon = 1e-9);
        assert_eq!(h.len(), 50_000);
    }

    #[test]
    fn histogram_merge_is_order_insensitive() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let xs: Vec<f64> = (0..10_000).map(|_| rng.gen::<f64>()).collect();
        let mut whole = Histogram::new(0.0, 1.0, 64);
        for &x in &xs {
            whole.record(x);
        }
        let mut a = Histogram::new(0.0, 1.0, 64);
        let mut b = Histogram::new(0.0, 1.0, 64);
        for &x in &xs[..3000] {
            a.record(x);
        }
        for &x in &xs[3000..] {
            b.record(x);
        }
        b.merge(&a);
        for i in 0..64 {
            assert_eq!(whole.count(i), b.count(i));
        }
    }

    #[test]
    fn beta_fit_recovers_synthetic_exponents() {
        // Draw from c·x²(1−x)³ = Beta(3, 4) and recover (a, b) = (2, 3).
        let beta = rand_distr::Beta::new(3.0, 4.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut h = Histogram::new(0.0, 1.0, 200);
        for _ in 0..200_000 {
            h.record(beta.sample(&mut rng));
        }
        for method in [FitMethod::Moments, FitMethod::LeastSquares] {
            let fit = fit_beta_like(&h, method).unwrap();
            assert!((fit.a - 2.0).abs() < 0.1, "{method:?}: a = {}", fit.a);
            assert!((fit.b - 3.0).abs() < 0.1, "{method:?}: b = {}", fit.b);
            let integral = simpson(|x| fit.pdf(x), 0.0, 1.0, 20_000);
            assert!((integral - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn fit_rejects_degenerate_histograms() {
        let mut h = Histogram::new(0.0, 1.0, 16);
        for _ in 0..200 {
            h.record(0.5);
        }
        assert!(matches!(
            fit_beta_like(&h, FitMethod::Moments),
            Err(StatsError::FitDiverged(_))
        ));
    }

    #[test]
    fn ks_distance_sanity() {
        // Samples from the reference itself stay close.
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let xs: Vec<f64> = (0..100_000).map(|_| rng.gen::<f64>()).collect();
        let d = ks_distance(&xs, |x| x);
        assert!(d < 0.006, "self-test distance {d}");

        // A constant sample against the uniform CDF is at least 1/2 away.
        let xs = vec![0.5; 1000];
        assert!(ks_distance(&xs, |x| x) >= 0.5 - 1e-12);
    }

    #[test]
    fn two_sample_ks_detects_identical_and_shifted_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let xs: Vec<f64> = (0..50_000).map(|_| rng.gen::<f64>()).collect();
        let ys: Vec<f64> = (0..50_000).map(|_| rng.gen::<f64>()).collect();
        assert!(ks_two_sample(&xs, &ys) < 0.012);
        let shifted: Vec<f64> = xs.iter().map(|x| x + 0.1).collect();
        assert!(ks_two_sample(&xs, &shifted) > 0.05);
    }
}
