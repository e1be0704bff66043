//! Deterministic, shard-parallel Monte Carlo plumbing.
//!
//! Samples are organized into fixed-length blocks; block `b` always draws
//! from RNG stream `b` regardless of how many workers run, and block
//! accumulators are merged in block order. Aggregates are therefore
//! bit-identical for every worker count.

use rayon::prelude::*;

use crate::state::{sample_haar_state, PureState3Q, RngSeed};

/// Number of states drawn per RNG stream.
pub const BLOCK_LEN: u64 = 1024;

/// Kahan (compensated) running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn merge(&mut self, other: KahanSum) {
        self.add(other.sum);
        self.add(-other.comp);
    }

    pub fn value(&self) -> f64 {
        self.sum - self.comp
    }
}

/// Running first and second moment of a scalar quantity.
#[derive(Debug, Clone, Copy, Default)]
pub struct MomentAcc {
    n: u64,
    sum: KahanSum,
    sum_sq: KahanSum,
}

impl MomentAcc {
    pub fn record(&mut self, x: f64) {
        self.n += 1;
        self.sum.add(x);
        self.sum_sq.add(x * x);
    }

    pub fn merge(&mut self, other: &MomentAcc) {
        self.n += other.n;
        self.sum.merge(other.sum);
        self.sum_sq.merge(other.sum_sq);
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.sum.value() / self.n as f64
    }

    pub fn second_moment(&self) -> f64 {
        self.sum_sq.value() / self.n as f64
    }

    pub fn variance(&self) -> f64 {
        (self.second_moment() - self.mean() * self.mean()).max(0.0)
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        (self.variance() / self.n as f64).sqrt()
    }
}

/// One line of a moments table: empirical mean vs. an exact reference
/// value when one is known.
#[derive(Debug, Clone)]
pub struct MomentRow {
    pub name: &'static str,
    pub mean: f64,
    pub std_error: f64,
    pub exact: Option<f64>,
}

/// Fold `n` Haar-random states into an accumulator, block-parallel.
///
/// `step` must be a pure function of the accumulator and the state; block
/// results are merged in block order.
pub fn fold_states<A, Init, Step, Merge>(
    n: u64,
    seed: RngSeed,
    init: Init,
    step: Step,
    merge: Merge,
) -> A
where
    A: Send,
    Init: Fn() -> A + Sync,
    Step: Fn(&mut A, &PureState3Q) + Sync,
    Merge: Fn(A, A) -> A,
{
    if n == 0 {
        return init();
    }
    let blocks = n.div_ceil(BLOCK_LEN);
    let accs: Vec<A> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = seed.stream(b);
            let mut acc = init();
            let lo = b * BLOCK_LEN;
            let hi = (lo + BLOCK_LEN).min(n);
            for _ in lo..hi {
                let s = sample_haar_state(&mut rng);
                step(&mut acc, &s);
            }
            acc
        })
        .collect();
    accs.into_iter().reduce(merge).expect("blocks > 0")
}
