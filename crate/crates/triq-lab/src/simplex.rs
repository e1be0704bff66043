//! Nelder–Mead downhill simplex, the derivative-free workhorse behind the
//! unitary-group optimizations and the least-squares fits.

/// Outcome of one simplex run.
#[derive(Debug, Clone)]
pub(crate) struct SimplexResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Minimize `f` starting from `x0` with an axis-aligned initial simplex of
/// the given `step`. Stops when the function spread across the simplex
/// falls below `tol` (relative to the best value) or after `max_iters`.
pub(crate) fn nelder_mead<F>(
    mut f: F,
    x0: &[f64],
    step: f64,
    max_iters: usize,
    tol: f64,
) -> SimplexResult
where
    F: FnMut(&[f64]) -> f64,
{
    const ALPHA: f64 = 1.0; // reflection
    const GAMMA: f64 = 2.0; // expansion
    const RHO: f64 = 0.5; // contraction
    const SIGMA: f64 = 0.5; // shrink

    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();

    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iters {
        iterations += 1;
        // Order by value.
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
        let best = order[0];
        let worst = order[n];
        let second_worst = order[n - 1];

        let spread = values[worst] - values[best];
        if spread <= tol * (values[best].abs() + tol) {
            converged = true;
            break;
        }

        // Centroid of all but the worst vertex.
        let mut centroid = vec![0.0; n];
        for &idx in &order[..n] {
            for (c, x) in centroid.iter_mut().zip(&simplex[idx]) {
                *c += x;
            }
        }
        for c in &mut centroid {
            *c /= n as f64;
        }

        let lerp = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[worst])
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let reflected = lerp(ALPHA);
        let f_ref = f(&reflected);
        if f_ref < values[best] {
            let expanded = lerp(GAMMA);
            let f_exp = f(&expanded);
            if f_exp < f_ref {
                simplex[worst] = expanded;
                values[worst] = f_exp;
            } else {
                simplex[worst] = reflected;
                values[worst] = f_ref;
            }
            continue;
        }
        if f_ref < values[second_worst] {
            simplex[worst] = reflected;
            values[worst] = f_ref;
            continue;
        }
        // Contract toward the better side.
        let (contracted, f_con) = if f_ref < values[worst] {
            let c = lerp(RHO);
            let v = f(&c);
            (c, v)
        } else {
            let c = lerp(-RHO);
            let v = f(&c);
            (c, v)
        };
        if f_con < values[worst].min(f_ref) {
            simplex[worst] = contracted;
            values[worst] = f_con;
            continue;
        }
        // Shrink toward the best vertex.
        let anchor = simplex[best].clone();
        for idx in 0..=n {
            if idx == best {
                continue;
            }
            for (x, a) in simplex[idx].iter_mut().zip(&anchor) {
                *x = a + SIGMA * (*x - a);
            }
            values[idx] = f(&simplex[idx]);
        }
    }

    let (mut bi, mut bv) = (0, values[0]);
    for (i, &v) in values.iter().enumerate() {
        if v < bv {
            bi = i;
            bv = v;
        }
    }
    SimplexResult {
        x: simplex.swap_remove(bi),
        value: bv,
        iterations,
        converged,
    }
}
