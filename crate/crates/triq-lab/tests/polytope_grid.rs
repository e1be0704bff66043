//! Grid-level polytope statistics: marginal shape, concentration along
//! the separable–GHZ axis, and hyperdeterminant discrimination between
//! the pyramid interior and the bi-separable faces.

use triq_lab::classes::{slocc_label, SloccClass};
use triq_lab::ensemble::{fold_states, MomentAcc};
use triq_lab::invariants::hyperdeterminant;
use triq_lab::polytope::{density_grid_with_slice, in_ghz_pyramid, lambda_min_cdf, polytope_point};
use triq_lab::state::RngSeed;

#[test]
fn grid_marginal_matches_the_min_eigenvalue_law() {
    let n = 1_000_000u64;
    let res = 80usize;
    let (grid, slice) = density_grid_with_slice(n, res, RngSeed(31));
    assert_eq!(grid.sum_counts(), n);

    // Marginal over the first axis vs. the closed-form CDF, compared at
    // cell boundaries.
    let mut marginal = vec![0u64; res];
    for (ix, _, _, c) in grid.nonzero_cells() {
        marginal[ix] += c;
    }
    let mut cum = 0u64;
    let mut sup = 0.0f64;
    for (ix, &c) in marginal.iter().enumerate() {
        cum += c;
        let edge = (ix as f64 + 1.0) * grid.cell_width();
        let expect = lambda_min_cdf(edge.min(0.5)).unwrap();
        sup = sup.max((cum as f64 / n as f64 - expect).abs());
    }
    assert!(sup < 0.01, "marginal KS distance {sup}");

    // The densest cell sits on the separable-to-GHZ diagonal.
    let (ix, iy, iz, count) = grid.max_cell();
    let center = grid.cell_center(ix, iy, iz);
    let t = (center[0] + center[1] + center[2]) / 3.0;
    let dist: f64 = center.iter().map(|x| (x - t) * (x - t)).sum::<f64>().sqrt();
    assert!(
        dist < 0.05,
        "max cell at {center:?} (count {count}) is {dist:.3} from the diagonal"
    );

    // The transverse slab catches a thin but populated band.
    assert!(slice.in_slab() > 0);
    assert!((slice.in_slab() as f64) < 0.1 * n as f64);
}

#[test]
fn hyperdeterminant_separates_pyramid_from_biseparable_faces() {
    let n = 100_000u64;
    let (pyramid, near_face, ghz_count) = fold_states(
        n,
        RngSeed(32),
        || (MomentAcc::default(), MomentAcc::default(), 0u64),
        |acc, s| {
            let p = polytope_point(s);
            let i6 = hyperdeterminant(s).norm_sqr();
            if in_ghz_pyramid(&p) {
                acc.0.record(i6);
            }
            if p.distance_to_polygon_face() <= 0.01 {
                acc.1.record(i6);
            }
            if slocc_label(s, 0.0) == SloccClass::GhzClass {
                acc.2 += 1;
            }
        },
        |mut a, b| {
            a.0.merge(&b.0);
            a.1.merge(&b.1);
            a.2 += b.2;
            a
        },
    );
    assert!(pyramid.count() > 1000 && near_face.count() > 1000);
    assert!(
        pyramid.mean() > near_face.mean(),
        "pyramid mean i6 {} vs near-face {}",
        pyramid.mean(),
        near_face.mean()
    );
    // Every Haar-random state carries a strictly positive hyperdeterminant.
    assert_eq!(ghz_count, n);
}
