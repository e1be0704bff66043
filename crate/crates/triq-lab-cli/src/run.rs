//! Command implementations and the deterministic output writers.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde_json::json;

use triq_lab::canonical::{acin_decompose, AcinForm};
use triq_lab::classes::{classify, slocc_label, ClassId};
use triq_lab::ensemble::{fold_states, MomentAcc};
use triq_lab::invariants::{
    hyperdeterminant, j_from_i, InvariantSetI, InvariantSetJ, MOMENT_REFERENCES,
};
use triq_lab::optimize::{hdet_track, max_overlap, riu_entropy, OptimizerConfig};
use triq_lab::polytope::{
    in_ghz_pyramid, polytope_point, DensityGrid, PlanarSlice, GHZ_PYRAMID_FRACTION, MEAN_LAMBDA_MIN,
};
use triq_lab::state::{reduced_spectrum, sample_haar_state, Party, PureState3Q, RngSeed};
use triq_lab::stats::{fit_beta_like, FitMethod, Histogram};

use crate::io::{self, StateFileError};
use crate::{Cmd, SeedArg, WorkerArg};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failure(anyhow::Error),
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Failure(e)
    }
}

impl From<StateFileError> for CliError {
    fn from(e: StateFileError) -> Self {
        CliError::Failure(anyhow::Error::new(e))
    }
}

fn resolve_seed(arg: &SeedArg) -> u64 {
    if let Some(seed) = arg.seed {
        return seed;
    }
    if let Ok(text) = std::env::var("TRIQ_LAB_SEED") {
        if let Ok(seed) = text.trim().parse() {
            return seed;
        }
        eprintln!("triq-lab: ignoring unparsable TRIQ_LAB_SEED='{text}'");
    }
    let seed: u64 = rand::random();
    eprintln!("triq-lab: seed = {seed} (generated; pass --seed {seed} to replay)");
    seed
}

fn thread_pool(workers: &WorkerArg) -> Result<rayon::ThreadPool, CliError> {
    if workers.workers == 0 {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.workers)
        .build()
        .context("building worker pool")
        .map_err(Into::into)
}

fn emit_json(out: &Option<PathBuf>, value: &serde_json::Value) -> Result<(), CliError> {
    let text = format!(
        "{}\n",
        serde_json::to_string_pretty(value).expect("serializable")
    );
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(Into::into),
    }
}

fn form_json(form: &AcinForm) -> serde_json::Value {
    json!({
        "schema": "triq-lab/acin-v1",
        "lambda": form.lambda().to_vec(),
        "phi": form.phi(),
        "degenerate": form.is_degenerate(),
    })
}

fn invariants_json(i: &InvariantSetI, j: &InvariantSetJ) -> serde_json::Value {
    json!({
        "schema": "triq-lab/invariants-v1",
        "i2": i.i2, "i3": i.i3, "i4": i.i4,
        "i5ppp": i.i5ppp, "i6": i.i6, "kempe": i.kempe,
        "j1": j.j1, "j2": j.j2, "j3": j.j3, "j4": j.j4, "j5": j.j5,
        "delta_j": j.delta_j(),
    })
}

pub fn dispatch(cmd: Cmd) -> Result<(), CliError> {
    match cmd {
        Cmd::Sample {
            n,
            seed,
            out,
            format,
        } => sample(n, &seed, out, &format),
        Cmd::Decompose { state, out } => {
            let s = io::validate_state_file(&state)?;
            emit_json(&out, &form_json(&acin_decompose(&s)))
        }
        Cmd::Invariants { state, out } => {
            let s = io::validate_state_file(&state)?;
            let i = InvariantSetI::from_state(&s);
            let j = j_from_i(&i);
            emit_json(&out, &invariants_json(&i, &j))
        }
        Cmd::Classify { state, tol, out } => {
            if tol <= 0.0 {
                return Err(CliError::Usage("--tol must be positive".into()));
            }
            let s = io::validate_state_file(&state)?;
            let j = j_from_i(&InvariantSetI::from_state(&s));
            let class = classify(&j, tol);
            let slocc = slocc_label(&s, tol);
            emit_json(
                &out,
                &json!({
                    "schema": "triq-lab/classify-v1",
                    "class": class.label(),
                    "slocc": slocc.label(),
                    "tol": tol,
                    "j": {
                        "j1": j.j1, "j2": j.j2, "j3": j.j3, "j4": j.j4, "j5": j.j5,
                        "delta_j": j.delta_j(),
                    },
                }),
            )
        }
        Cmd::Riu {
            state,
            q,
            restarts,
            seed,
            out,
        } => {
            if restarts == 0 {
                return Err(CliError::Usage("--restarts must be at least 1".into()));
            }
            let s = io::validate_state_file(&state)?;
            let cfg = OptimizerConfig::default()
                .with_restarts(restarts)
                .with_seed(resolve_seed(&seed));
            let r = riu_entropy(&s, q, &cfg);
            emit_json(
                &out,
                &json!({
                    "schema": "triq-lab/riu-v1",
                    "q": if q.is_infinite() { json!("inf") } else { json!(q) },
                    "entropy": r.entropy,
                    "prob_vector": r.prob_vector.to_vec(),
                    "angles": r.argmin.angles().to_vec(),
                    "converged": r.converged,
                    "iterations": r.iterations,
                    "restarts": restarts,
                    "seed": cfg.seed,
                }),
            )
        }
        Cmd::Overlap {
            state,
            class,
            restarts,
            seed,
            out,
        } => {
            if restarts == 0 {
                return Err(CliError::Usage("--restarts must be at least 1".into()));
            }
            if class == ClassId::Generic {
                return Err(CliError::Usage("--class must name a concrete class".into()));
            }
            let s = io::validate_state_file(&state)?;
            let cfg = OptimizerConfig::default()
                .with_restarts(restarts)
                .with_seed(resolve_seed(&seed));
            let r = max_overlap(&s, class, &cfg)
                .map_err(|e| CliError::Failure(anyhow::Error::new(e)))?;
            let (hdet_beta, hdet_phi) = hdet_track(&s, &r);
            emit_json(
                &out,
                &json!({
                    "schema": "triq-lab/overlap-v1",
                    "class": class.label(),
                    "lambda_max": r.lambda_max,
                    "class_params": {
                        "angles": r.arg_class_params.angles,
                        "phase": r.arg_class_params.phase,
                    },
                    "angles": r.arg_unitary.angles().to_vec(),
                    "hdet_input": hdet_beta,
                    "hdet_class_state": hdet_phi,
                    "converged": r.converged,
                    "iterations": r.iterations,
                    "restarts": restarts,
                    "seed": cfg.seed,
                }),
            )
        }
        Cmd::Polytope {
            n,
            res,
            seed,
            workers,
            out,
            per_state,
        } => {
            if n < 1 {
                return Err(CliError::Usage("--n must be at least 1".into()));
            }
            if res < 1 {
                return Err(CliError::Usage("--res must be at least 1".into()));
            }
            let seed = resolve_seed(&seed);
            let pool = thread_pool(&workers)?;
            pool.install(|| polytope_run(n, res, RngSeed(seed), &out, per_state))
        }
        Cmd::Ensemble {
            n,
            bins,
            seed,
            workers,
            out,
        } => {
            if n < 1 {
                return Err(CliError::Usage("--n must be at least 1".into()));
            }
            if bins < 1 {
                return Err(CliError::Usage("--bins must be at least 1".into()));
            }
            let seed = resolve_seed(&seed);
            let pool = thread_pool(&workers)?;
            pool.install(|| ensemble_run(n, bins, RngSeed(seed), &out, &Artifacts::all()))
        }
        Cmd::Reproduce {
            target,
            n,
            bins,
            seed,
            workers,
            out,
        } => {
            let seed = resolve_seed(&seed);
            let pool = thread_pool(&workers)?;
            let n = n.unwrap_or(1_000_000);
            let artifacts = match target.as_str() {
                "fig1" => Artifacts {
                    hists: &["lambda0", "lambda1", "lambda2", "lambda3", "lambda4", "phi"],
                    moments: false,
                    fits: true,
                },
                "fig2" => Artifacts {
                    hists: &["i2", "i3", "i4", "i5ppp", "i6"],
                    moments: true,
                    fits: false,
                },
                "fig3" => Artifacts {
                    hists: &["kempe"],
                    moments: true,
                    fits: false,
                },
                "table1" => Artifacts {
                    hists: &[],
                    moments: false,
                    fits: true,
                },
                "table-moments" => Artifacts {
                    hists: &[],
                    moments: true,
                    fits: false,
                },
                "fig6" => {
                    return pool.install(|| polytope_run(n, 80, RngSeed(seed), &out, false));
                }
                other => {
                    return Err(CliError::Usage(format!(
                        "unknown reproduce target '{other}' (expected fig1, fig2, fig3, fig6, table1, table-moments)"
                    )));
                }
            };
            pool.install(|| ensemble_run(n, bins, RngSeed(seed), &out, &artifacts))
        }
    }
}

fn sample(n: u64, seed: &SeedArg, out: Option<PathBuf>, format: &str) -> Result<(), CliError> {
    let seed = resolve_seed(seed);
    let mut states = Vec::with_capacity(n as usize);
    for stream in 0..n {
        states.push(sample_haar_state(&mut RngSeed(seed).stream(stream)));
    }
    let text = match format {
        "csv" => {
            let mut text = format!("{}\n# n={n} seed={seed}\n", io::CSV_SCHEMA);
            text.push_str(&io::state_csv_columns());
            for s in &states {
                text.push('\n');
                text.push_str(&io::state_csv_row(s));
            }
            text.push('\n');
            text
        }
        _ => {
            let value = if states.len() == 1 {
                io::state_to_json(&states[0])
            } else {
                json!({
                    "schema": "triq-lab/states-v1",
                    "seed": seed,
                    "states": states.iter().map(io::state_to_json).collect::<Vec<_>>(),
                })
            };
            format!(
                "{}\n",
                serde_json::to_string_pretty(&value).expect("serializable")
            )
        }
    };
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => fs::write(&path, text)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(Into::into),
    }
}

// ---------------------------------------------------------------------------
// Ensemble statistics

/// Which files an ensemble run emits.
struct Artifacts {
    hists: &'static [&'static str],
    moments: bool,
    fits: bool,
}

impl Artifacts {
    fn all() -> Self {
        Artifacts {
            hists: &[
                "lambda0",
                "lambda1",
                "lambda2",
                "lambda3",
                "lambda4",
                "phi",
                "i2",
                "i3",
                "i4",
                "i5ppp",
                "i6",
                "kempe",
                "j1",
                "j2",
                "j3",
                "j4",
                "j5",
                "lambda_min",
            ],
            moments: true,
            fits: true,
        }
    }
}

/// Histogram supports for every tracked quantity.
const HIST_SPECS: [(&str, f64, f64); 18] = [
    ("lambda0", 0.0, 1.0),
    ("lambda1", 0.0, 1.0),
    ("lambda2", 0.0, 1.0),
    ("lambda3", 0.0, 1.0),
    ("lambda4", 0.0, 1.0),
    ("phi", 0.0, std::f64::consts::PI),
    ("i2", 0.5, 1.0),
    ("i3", 0.5, 1.0),
    ("i4", 0.5, 1.0),
    ("i5ppp", 0.25, 1.0),
    ("i6", 0.0, 1.0 / 16.0),
    ("kempe", 2.0 / 9.0, 1.0),
    ("j1", 0.0, 0.25),
    ("j2", 0.0, 0.25),
    ("j3", 0.0, 0.25),
    ("j4", 0.0, 0.25),
    ("j5", -0.125, 0.25),
    ("lambda_min", 0.0, 0.5),
];

const FIT_QUANTITIES: [&str; 8] = [
    "lambda0", "lambda1", "lambda2", "lambda3", "lambda4", "j1", "j2", "j3",
];

struct EnsembleAcc {
    moments: Vec<MomentAcc>,
    hists: Vec<Histogram>,
}

impl EnsembleAcc {
    fn new(bins: usize) -> Self {
        EnsembleAcc {
            moments: vec![MomentAcc::default(); MOMENT_REFERENCES.len()],
            hists: HIST_SPECS
                .iter()
                .map(|&(_, lo, hi)| Histogram::new(lo, hi, bins))
                .collect(),
        }
    }

    fn record(&mut self, s: &PureState3Q) {
        let form = acin_decompose(s);
        let i = InvariantSetI::from_state(s);
        let j = j_from_i(&i);
        let lmin: Vec<f64> = Party::ALL
            .iter()
            .map(|&p| reduced_spectrum(s, p).lambda_min())
            .collect();

        let moment_vals = [
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
        for (acc, v) in self.moments.iter_mut().zip(moment_vals) {
            acc.record(v);
        }
        for &v in &lmin {
            self.moments[14].record(v);
        }

        let l = form.lambda();
        let hist_vals = [
            l[0],
            l[1],
            l[2],
            l[3],
            l[4],
            form.phi(),
            i.i2,
            i.i3,
            i.i4,
            i.i5ppp,
            i.i6,
            i.kempe,
            j.j1,
            j.j2,
            j.j3,
            j.j4,
            j.j5,
            f64::NAN, // lambda_min handled below (three samples per state)
        ];
        for (hist, v) in self.hists.iter_mut().zip(hist_vals) {
            if !v.is_nan() {
                hist.record(v);
            }
        }
        for &v in &lmin {
            self.hists[17].record(v);
        }
    }

    fn merge(mut self, other: EnsembleAcc) -> EnsembleAcc {
        for (a, b) in self.moments.iter_mut().zip(&other.moments) {
            a.merge(b);
        }
        for (a, b) in self.hists.iter_mut().zip(&other.hists) {
            a.merge(b);
        }
        self
    }
}

fn write_histogram(
    dir: &Path,
    name: &str,
    hist: &Histogram,
    n: u64,
    seed: RngSeed,
) -> anyhow::Result<()> {
    let path = dir.join(format!("{name}.csv"));
    let file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    let (lo, hi) = hist.support();
    writeln!(w, "{}", io::CSV_SCHEMA)?;
    writeln!(
        w,
        "# quantity={name} n={n} seed={} bins={} lo={lo} hi={hi}",
        seed.0,
        hist.bins()
    )?;
    writeln!(w, "bin_center,density")?;
    for b in 0..hist.bins() {
        writeln!(w, "{:.10e},{:.10e}", hist.center(b), hist.density(b))?;
    }
    Ok(())
}

fn ensemble_run(
    n: u64,
    bins: usize,
    seed: RngSeed,
    dir: &Path,
    artifacts: &Artifacts,
) -> Result<(), CliError> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let acc = fold_states(
        n,
        seed,
        || EnsembleAcc::new(bins),
        |acc, s| acc.record(s),
        EnsembleAcc::merge,
    );

    for (idx, &(name, _, _)) in HIST_SPECS.iter().enumerate() {
        if artifacts.hists.contains(&name) {
            write_histogram(dir, name, &acc.hists[idx], n, seed)?;
        }
    }

    if artifacts.moments {
        let entries: Vec<serde_json::Value> = MOMENT_REFERENCES
            .iter()
            .zip(&acc.moments)
            .map(|(&(name, exact), m)| {
                json!({
                    "name": name,
                    "mean": m.mean(),
                    "std_error": m.std_error(),
                    "exact": exact,
                    "deviation": exact.map(|e| m.mean() - e),
                })
            })
            .collect();
        let value = json!({
            "schema": "triq-lab/moments-v1",
            "n": n,
            "seed": seed.0,
            "entries": entries,
        });
        emit_json(&Some(dir.join("moments.json")), &value)?;
    }

    if artifacts.fits {
        let mut fits = Vec::new();
        for name in FIT_QUANTITIES {
            let idx = HIST_SPECS
                .iter()
                .position(|&(h, _, _)| h == name)
                .expect("known name");
            for method in [FitMethod::Moments, FitMethod::LeastSquares] {
                let label = match method {
                    FitMethod::Moments => "moments",
                    FitMethod::LeastSquares => "least_squares",
                };
                match fit_beta_like(&acc.hists[idx], method) {
                    Ok(f) => fits.push(json!({
                        "name": name, "method": label,
                        "a": f.a, "b": f.b, "c": f.c, "lo": f.lo, "hi": f.hi,
                    })),
                    Err(e) => fits.push(json!({
                        "name": name, "method": label, "error": e.to_string(),
                    })),
                }
            }
        }
        let value = json!({
            "schema": "triq-lab/fits-v1",
            "n": n,
            "seed": seed.0,
            "model": "c * (x - lo)^a * (hi - x)^b",
            "fits": fits,
        });
        emit_json(&Some(dir.join("fits.json")), &value)?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Polytope runs

struct PolyAcc {
    grid: DensityGrid,
    slice: PlanarSlice,
    lmin_hist: Histogram,
    lmin_moments: MomentAcc,
    violations: u64,
    pyramid: u64,
    count: u64,
    i6_pyramid: MomentAcc,
    i6_near_face: MomentAcc,
    rows: Vec<(f64, f64, f64, f64, bool)>,
}

impl PolyAcc {
    fn new(res: usize, keep_rows: bool) -> Self {
        PolyAcc {
            grid: DensityGrid::new(res),
            slice: PlanarSlice::new(res, 0.5 / res as f64),
            lmin_hist: Histogram::new(0.0, 0.5, 200),
            lmin_moments: MomentAcc::default(),
            violations: 0,
            pyramid: 0,
            count: 0,
            i6_pyramid: MomentAcc::default(),
            i6_near_face: MomentAcc::default(),
            rows: if keep_rows {
                Vec::new()
            } else {
                Vec::with_capacity(0)
            },
        }
    }
}

fn polytope_run(
    n: u64,
    res: usize,
    seed: RngSeed,
    dir: &Path,
    per_state: bool,
) -> Result<(), CliError> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let acc = fold_states(
        n,
        seed,
        || PolyAcc::new(res, per_state),
        |acc, s| {
            let p = polytope_point(s);
            let i6 = hyperdeterminant(s).norm_sqr();
            let inside = in_ghz_pyramid(&p);
            acc.grid.record(&p);
            acc.slice.record(&p);
            for &v in &p.lmin {
                acc.lmin_hist.record(v);
                acc.lmin_moments.record(v);
            }
            if !p.satisfies_polygon_inequalities(1e-10) {
                acc.violations += 1;
            }
            if inside {
                acc.pyramid += 1;
                acc.i6_pyramid.record(i6);
            }
            if p.distance_to_polygon_face() <= 0.01 {
                acc.i6_near_face.record(i6);
            }
            acc.count += 1;
            if per_state {
                acc.rows.push((p.lmin[0], p.lmin[1], p.lmin[2], i6, inside));
            }
        },
        |mut a, b| {
            a.grid.merge(&b.grid);
            a.slice.merge(&b.slice);
            a.lmin_hist.merge(&b.lmin_hist);
            a.lmin_moments.merge(&b.lmin_moments);
            a.violations += b.violations;
            a.pyramid += b.pyramid;
            a.count += b.count;
            a.i6_pyramid.merge(&b.i6_pyramid);
            a.i6_near_face.merge(&b.i6_near_face);
            a.rows.extend(b.rows);
            a
        },
    );

    // grid.csv: nonzero cells only.
    {
        let path = dir.join("grid.csv");
        let file =
            fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        let mut w = BufWriter::new(file);
        writeln!(w, "{}", io::CSV_SCHEMA).ok();
        writeln!(
            w,
            "# n={} seed={} res={res} cell_width={}",
            n,
            seed.0,
            acc.grid.cell_width()
        )
        .ok();
        writeln!(w, "ix,iy,iz,count").ok();
        for (ix, iy, iz, c) in acc.grid.nonzero_cells() {
            writeln!(w, "{ix},{iy},{iz},{c}").ok();
        }
    }

    // slice.csv: the transverse-section histogram.
    {
        let path = dir.join("slice.csv");
        let file =
            fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        let mut w = BufWriter::new(file);
        writeln!(w, "{}", io::CSV_SCHEMA).ok();
        writeln!(
            w,
            "# n={} seed={} res={res} slab_half={} in_slab={}",
            n,
            seed.0,
            acc.slice.slab_half,
            acc.slice.in_slab()
        )
        .ok();
        writeln!(w, "u_center,v_center,count,density").ok();
        for iu in 0..acc.slice.resolution() {
            for iv in 0..acc.slice.resolution() {
                let c = acc.slice.count(iu, iv);
                if c > 0 {
                    let (u, v) = acc.slice.cell_center(iu, iv);
                    writeln!(
                        w,
                        "{u:.10e},{v:.10e},{c},{:.10e}",
                        acc.slice.density(iu, iv)
                    )
                    .ok();
                }
            }
        }
    }

    write_histogram(dir, "lambda_min", &acc.lmin_hist, n, seed)?;

    if per_state {
        let path = dir.join("points.csv");
        let file =
            fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        let mut w = BufWriter::new(file);
        writeln!(w, "{}", io::CSV_SCHEMA).ok();
        writeln!(
            w,
            "lambda_a_min,lambda_b_min,lambda_c_min,i6,in_ghz_pyramid"
        )
        .ok();
        for (a, b, c, i6, inside) in &acc.rows {
            writeln!(w, "{a:.8e},{b:.8e},{c:.8e},{i6:.8e},{}", *inside as u8).ok();
        }
    }

    let (mx, my, mz, mc) = acc.grid.max_cell();
    let summary = json!({
        "schema": "triq-lab/polytope-v1",
        "n": n,
        "seed": seed.0,
        "res": res,
        "polygon_violations": acc.violations,
        "pyramid_count": acc.pyramid,
        "pyramid_fraction": acc.pyramid as f64 / acc.count as f64,
        "expected_pyramid_fraction": GHZ_PYRAMID_FRACTION,
        "lambda_min_mean": acc.lmin_moments.mean(),
        "expected_lambda_min_mean": MEAN_LAMBDA_MIN,
        "max_cell": {
            "ix": mx, "iy": my, "iz": mz, "count": mc,
            "center": acc.grid.cell_center(mx, my, mz).to_vec(),
        },
        "mean_i6_in_pyramid": acc.i6_pyramid.mean(),
        "mean_i6_near_biseparable_face": acc.i6_near_face.mean(),
    });
    emit_json(&Some(dir.join("summary.json")), &summary)
}
