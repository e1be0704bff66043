//! The entanglement (Kirwan) polytope of three qubits.
//!
//! A pure state maps to the triple of minimal reduced eigenvalues
//! (λ_A^min, λ_B^min, λ_C^min) ∈ [0, 1/2]³, constrained by the polygon
//! inequalities λ_k ≤ λ_i + λ_j. The polytope has vertices at the
//! separable point O = (0,0,0), the three bi-separable points, and the
//! GHZ point G = (1/2,1/2,1/2); the upper pyramid cut off by the plane
//! λ_A + λ_B + λ_C = 1 holds exactly the GHZ SLOCC class.

use thiserror::Error;

use crate::ensemble::fold_states;
use crate::state::{reduced_spectrum, Party, PureState3Q, RngSeed};

/// Fraction of Haar-random states inside the GHZ pyramid.
pub const GHZ_PYRAMID_FRACTION: f64 = 13.0 / 216.0;

/// ⟨λ_min⟩ over the Haar ensemble.
pub const MEAN_LAMBDA_MIN: f64 = 29.0 / 128.0;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum PolytopeError {
    #[error("{value} outside the support [{lo}, {hi}]")]
    Domain { value: f64, lo: f64, hi: f64 },
}

/// Minimal reduced eigenvalues of one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolytopePoint {
    pub lmin: [f64; 3],
}

impl PolytopePoint {
    /// Largest violation of the three polygon inequalities; non-positive
    /// for every valid pure state.
    pub fn polygon_violation(&self) -> f64 {
        let [a, b, c] = self.lmin;
        (a - b - c).max(b - a - c).max(c - a - b)
    }

    pub fn satisfies_polygon_inequalities(&self, tol: f64) -> bool {
        self.polygon_violation() <= tol
    }

    /// Euclidean distance to the segment from O to G (the main diagonal).
    pub fn distance_to_og_axis(&self) -> f64 {
        let t = ((self.lmin[0] + self.lmin[1] + self.lmin[2]) / 3.0).clamp(0.0, 0.5);
        let d: f64 = self.lmin.iter().map(|x| (x - t) * (x - t)).sum();
        d.sqrt()
    }

    /// Euclidean distance to the nearest of the three polygon facets
    /// λ_k = λ_i + λ_j (the faces carrying the bi-separable states).
    pub fn distance_to_polygon_face(&self) -> f64 {
        let [a, b, c] = self.lmin;
        let slacks = [(b + c - a).abs(), (a + c - b).abs(), (a + b - c).abs()];
        slacks.iter().cloned().fold(f64::INFINITY, f64::min) / 3f64.sqrt()
    }
}

/// Map a state to its polytope coordinates.
pub fn polytope_point(s: &PureState3Q) -> PolytopePoint {
    let mut lmin = [0.0; 3];
    for (dst, party) in lmin.iter_mut().zip(Party::ALL) {
        *dst = reduced_spectrum(s, party).lambda_min();
    }
    PolytopePoint { lmin }
}

/// True iff the point lies in the upper pyramid with apex G, cut off by
/// the plane through the three bi-separable vertices: λ_A+λ_B+λ_C ≥ 1.
pub fn in_ghz_pyramid(p: &PolytopePoint) -> bool {
    p.lmin.iter().sum::<f64>() >= 1.0
}

/// Density of the minimal reduced eigenvalue of a Haar-random state:
/// 420·[x(2x−1)(1−x)]² on [0, 1/2].
pub fn lambda_min_pdf(x: f64) -> Result<f64, PolytopeError> {
    if !(0.0..=0.5).contains(&x) {
        return Err(PolytopeError::Domain {
            value: x,
            lo: 0.0,
            hi: 0.5,
        });
    }
    let g = x * (2.0 * x - 1.0) * (1.0 - x);
    Ok(420.0 * g * g)
}

/// CDF matching [`lambda_min_pdf`].
pub fn lambda_min_cdf(x: f64) -> Result<f64, PolytopeError> {
    if !(0.0..=0.5).contains(&x) {
        return Err(PolytopeError::Domain {
            value: x,
            lo: 0.0,
            hi: 0.5,
        });
    }
    // ∫ 420(4x⁶ −12x⁵ +13x⁴ −6x³ +x²) dx
    let p = 420.0
        * (4.0 / 7.0 * x.powi(7) - 2.0 * x.powi(6) + 13.0 / 5.0 * x.powi(5) - 1.5 * x.powi(4)
            + x.powi(3) / 3.0);
    Ok(p.clamp(0.0, 1.0))
}

/// k-th moment of λ_min: 105/2ᵏ · [1/((k+3)(k+4)(k+5)) − 1/((k+4)(k+5)(k+6))
/// + 1/(4(k+5)(k+6)(k+7))].
pub fn lambda_min_moment(k: u32) -> f64 {
    let k = k as f64;
    let t1 = 1.0 / ((k + 3.0) * (k + 4.0) * (k + 5.0));
    let t2 = 1.0 / ((k + 4.0) * (k + 5.0) * (k + 6.0));
    let t3 = 0.25 / ((k + 5.0) * (k + 6.0) * (k + 7.0));
    105.0 / 2f64.powf(k) * (t1 - t2 + t3)
}

/// Cell counts of polytope points over [0, 1/2]³.
#[derive(Debug, Clone)]
pub struct DensityGrid {
    res: usize,
    counts: Vec<u64>,
    total: u64,
}

impl DensityGrid {
    pub fn new(res: usize) -> Self {
        assert!(res >= 1);
        DensityGrid {
            res,
            counts: vec![0; res * res * res],
            total: 0,
        }
    }

    pub fn resolution(&self) -> usize {
        self.res
    }

    pub fn total_samples(&self) -> u64 {
        self.total
    }

    pub fn cell_width(&self) -> f64 {
        0.5 / self.res as f64
    }

    fn axis_cell(&self, x: f64) -> usize {
        // Half-open cells; the boundary value 1/2 joins the last cell.
        ((x / self.cell_width()) as usize).min(self.res - 1)
    }

    pub fn record(&mut self, p: &PolytopePoint) {
        let (ix, iy, iz) = (
            self.axis_cell(p.lmin[0]),
            self.axis_cell(p.lmin[1]),
            self.axis_cell(p.lmin[2]),
        );
        self.counts[(ix * self.res + iy) * self.res + iz] += 1;
        self.total += 1;
    }

    pub fn merge(&mut self, other: &DensityGrid) {
        assert_eq!(self.res, other.res);
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.total += other.total;
    }

    pub fn count(&self, ix: usize, iy: usize, iz: usize) -> u64 {
        self.counts[(ix * self.res + iy) * self.res + iz]
    }

    /// Probability density (per unit volume) of one cell.
    pub fn density(&self, ix: usize, iy: usize, iz: usize) -> f64 {
        let w = self.cell_width();
        self.count(ix, iy, iz) as f64 / (self.total as f64 * w * w * w)
    }

    pub fn sum_counts(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Indices and center of the most populated cell.
    pub fn max_cell(&self) -> (usize, usize, usize, u64) {
        let mut best = (0, 0, 0, 0);
        for ix in 0..self.res {
            for iy in 0..self.res {
                for iz in 0..self.res {
                    let c = self.count(ix, iy, iz);
                    if c > best.3 {
                        best = (ix, iy, iz, c);
                    }
                }
            }
        }
        best
    }

    pub fn cell_center(&self, ix: usize, iy: usize, iz: usize) -> [f64; 3] {
        let w = self.cell_width();
        [
            (ix as f64 + 0.5) * w,
            (iy as f64 + 0.5) * w,
            (iz as f64 + 0.5) * w,
        ]
    }

    /// Nonzero cells as (ix, iy, iz, count).
    pub fn nonzero_cells(&self) -> impl Iterator<Item = (usize, usize, usize, u64)> + '_ {
        let res = self.res;
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(move |(i, &c)| (i / (res * res), (i / res) % res, i % res, c))
    }
}

/// 2-D histogram over the transverse section through the separable vertex,
/// the bi-separable vertex C = (1/2, 1/2, 0) and the GHZ vertex. Section
/// coordinates are u = (λ_A+λ_B)/√2 and v = λ_C; a point belongs to the
/// slab when its distance |λ_A−λ_B|/√2 to the plane is at most
/// `slab_half`.
#[derive(Debug, Clone)]
pub struct PlanarSlice {
    res: usize,
    counts: Vec<u64>,
    in_slab: u64,
    total: u64,
    pub slab_half: f64,
}

impl PlanarSlice {
    const U_MAX: f64 = std::f64::consts::FRAC_1_SQRT_2;
    const V_MAX: f64 = 0.5;

    pub fn new(res: usize, slab_half: f64) -> Self {
        PlanarSlice {
            res,
            counts: vec![0; res * res],
            in_slab: 0,
            total: 0,
            slab_half,
        }
    }

    pub fn resolution(&self) -> usize {
        self.res
    }

    pub fn record(&mut self, p: &PolytopePoint) {
        self.total += 1;
        let [a, b, c] = p.lmin;
        if (a - b).abs() / 2f64.sqrt() > self.slab_half {
            return;
        }
        let u = (a + b) / 2f64.sqrt();
        let v = c;
        let iu = ((u / Self::U_MAX * self.res as f64) as usize).min(self.res - 1);
        let iv = ((v / Self::V_MAX * self.res as f64) as usize).min(self.res - 1);
        self.counts[iu * self.res + iv] += 1;
        self.in_slab += 1;
    }

    pub fn merge(&mut self, other: &PlanarSlice) {
        assert_eq!(self.res, other.res);
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.in_slab += other.in_slab;
        self.total += other.total;
    }

    pub fn count(&self, iu: usize, iv: usize) -> u64 {
        self.counts[iu * self.res + iv]
    }

    pub fn in_slab(&self) -> u64 {
        self.in_slab
    }

    pub fn cell_center(&self, iu: usize, iv: usize) -> (f64, f64) {
        (
            (iu as f64 + 0.5) * Self::U_MAX / self.res as f64,
            (iv as f64 + 0.5) * Self::V_MAX / self.res as f64,
        )
    }

    /// Density per unit area among in-slab points.
    pub fn density(&self, iu: usize, iv: usize) -> f64 {
        if self.in_slab == 0 {
            return 0.0;
        }
        let area = (Self::U_MAX / self.res as f64) * (Self::V_MAX / self.res as f64);
        self.count(iu, iv) as f64 / (self.in_slab as f64 * area)
    }
}

/// Populate a density grid (and the transverse section) from `n`
/// Haar-random states. Deterministic in `(n, res, seed)`.
pub fn density_grid_with_slice(n: u64, res: usize, seed: RngSeed) -> (DensityGrid, PlanarSlice) {
    debug_assert!(n >= 10_000, "grid statistics need n >= 1e4");
    let slab_half = 0.5 / res as f64;
    fold_states(
        n,
        seed,
        || (DensityGrid::new(res), PlanarSlice::new(res, slab_half)),
        |(grid, slice), s| {
            let p = polytope_point(s);
            grid.record(&p);
            slice.record(&p);
        },
        |(mut g1, mut s1), (g2, s2)| {
            g1.merge(&g2);
            s1.merge(&s2);
            (g1, s1)
        },
    )
}

/// Populate a density grid from `n` Haar-random states.
pub fn density_grid(n: u64, res: usize, seed: RngSeed) -> DensityGrid {
    density_grid_with_slice(n, res, seed).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::sample_haar_state;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    #[test]
    fn vertex_states_map_to_vertices() {
        let p = polytope_point(&PureState3Q::basis(0, 0, 0));
        assert_eq!(p.lmin, [0.0, 0.0, 0.0]);
        assert!(!in_ghz_pyramid(&p));

        let p = polytope_point(&PureState3Q::ghz());
        for v in p.lmin {
            assert_relative_eq!(v, 0.5, epsilon = 1e-12);
        }
        assert!(in_ghz_pyramid(&p));

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amp = [Complex64::new(0.0, 0.0); 8];
        amp[PureState3Q::index(0, 0, 0)] = h.into();
        amp[PureState3Q::index(0, 1, 1)] = h.into();
        let bisep = PureState3Q::new(amp).unwrap();
        let p = polytope_point(&bisep);
        assert!(p.lmin[0] < 1e-12);
        assert_relative_eq!(p.lmin[1], 0.5, epsilon = 1e-12);
        assert_relative_eq!(p.lmin[2], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn pyramid_test_is_permutation_invariant() {
        let points = [[0.4, 0.3, 0.35], [0.1, 0.2, 0.15], [0.5, 0.25, 0.3]];
        for lmin in points {
            let base = in_ghz_pyramid(&PolytopePoint { lmin });
            for perm in [[0, 2, 1], [1, 0, 2], [2, 1, 0], [1, 2, 0], [2, 0, 1]] {
                let q = PolytopePoint {
                    lmin: [lmin[perm[0]], lmin[perm[1]], lmin[perm[2]]],
                };
                assert_eq!(in_ghz_pyramid(&q), base);
            }
        }
    }

    #[test]
    fn pdf_and_moment_anchors() {
        assert_eq!(lambda_min_pdf(0.0).unwrap(), 0.0);
        assert_eq!(lambda_min_pdf(0.5).unwrap(), 0.0);
        assert!(lambda_min_pdf(0.6).is_err());
        assert!(lambda_min_pdf(-0.1).is_err());
        assert_relative_eq!(lambda_min_moment(0), 1.0, epsilon = 1e-14);
        assert_relative_eq!(lambda_min_moment(1), 29.0 / 128.0, epsilon = 1e-14);
    }

    #[test]
    fn pdf_integrates_to_one_and_matches_moments() {
        // Simpson quadrature of the pdf and of x·pdf over [0, 1/2].
        let n = 4000;
        let h = 0.5 / n as f64;
        let (mut total, mut first) = (0.0, 0.0);
        for i in 0..=n {
            let x = i as f64 * h;
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let p = lambda_min_pdf(x).unwrap();
            total += w * p;
            first += w * x * p;
        }
        total *= h / 3.0;
        first *= h / 3.0;
        assert_relative_eq!(total, 1.0, epsilon = 1e-10);
        assert_relative_eq!(first, lambda_min_moment(1), epsilon = 1e-10);
    }

    #[test]
    fn cdf_matches_pdf_quadrature() {
        assert_relative_eq!(lambda_min_cdf(0.5).unwrap(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(lambda_min_cdf(0.0).unwrap(), 0.0, epsilon = 1e-12);
        let x = 0.31;
        let n = 2000;
        let h = x / n as f64;
        let mut acc = 0.0;
        for i in 0..=n {
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += w * lambda_min_pdf(i as f64 * h).unwrap();
        }
        assert_relative_eq!(lambda_min_cdf(x).unwrap(), acc * h / 3.0, epsilon = 1e-9);
    }

    #[test]
    fn grid_counts_every_sample_and_polygon_holds() {
        let (grid, slice) = density_grid_with_slice(20_000, 20, RngSeed(3));
        assert_eq!(grid.sum_counts(), 20_000);
        assert_eq!(grid.total_samples(), 20_000);
        assert!(slice.in_slab() > 0 && slice.in_slab() < 20_000);

        let mut rng = RngSeed(3).stream(0);
        for _ in 0..2000 {
            let p = polytope_point(&sample_haar_state(&mut rng));
            assert!(p.satisfies_polygon_inequalities(1e-10));
        }
    }

    #[test]
    fn boundary_point_half_lands_in_last_cell() {
        let mut grid = DensityGrid::new(8);
        grid.record(&PolytopePoint {
            lmin: [0.5, 0.5, 0.5],
        });
        assert_eq!(grid.count(7, 7, 7), 1);
    }

    #[test]
    fn empirical_lambda_min_mean_is_near_exact() {
        let mut rng = RngSeed(4).stream(0);
        let n = 30_000;
        let mut acc = 0.0;
        for _ in 0..n {
            let s = sample_haar_state(&mut rng);
            for party in Party::ALL {
                acc += reduced_spectrum(&s, party).lambda_min();
            }
        }
        let mean = acc / (3 * n) as f64;
        assert!((mean - MEAN_LAMBDA_MIN).abs() < 0.003, "mean {mean}");
    }
}
