use std::io::Write;
use std::time::Instant;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use super::config::{Experiment, ExperimentConfig};
use crate::algebra::{nest_pattern, random_near_identity_embedding, random_near_identity_unitary, MasaPartition};
use crate::error::{Error, Result};
use crate::numkernel::{polar_svd, CMatrix, C64};
use crate::perturb::{block_triangularize, CorrectionCertificate};
use crate::regular::{fix_normalizer, regular_stabilize};
use crate::stability::stabilize_nest_inclusion;
use crate::tolerances::{Tolerances, TOL};
use crate::tower::{generate_tower, perturb_tower, recover_chain, TowerConfig};

pub const CSV_COLUMNS: [&str; 8] = [
    "experiment",
    "trial",
    "epsilon",
    "defect_in",
    "recovery_distance",
    "structural_residual",
    "runtime_ms",
    "status",
];

/// One (epsilon, trial) outcome. Measurements are absent on failure.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub experiment: Experiment,
    pub trial: usize,
    pub epsilon: f64,
    pub defect_in: Option<f64>,
    pub recovery_distance: Option<f64>,
    pub structural_residual: Option<f64>,
    pub runtime_ms: Option<f64>,
    /// `ok` or `FAILED:<stage>`.
    pub status: String,
}

impl ResultRow {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

struct Measurement {
    defect_in: f64,
    recovery_distance: f64,
    structural_residual: f64,
    ambient: usize,
}

impl Measurement {
    fn from_certificate(c: &CorrectionCertificate, ambient: usize) -> Self {
        Self {
            defect_in: c.input_defect,
            recovery_distance: c.correction_distance,
            structural_residual: c.structural_residual,
            ambient,
        }
    }
}

/// The generator of trial `trial`: stream `trial` of the ChaCha8 keyed by
/// `seed`. Every epsilon of a trial reuses the same draws.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn gaussian(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
}

fn unitary(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    polar_svd(&gaussian(rng, n)).isometric_part
}

fn run_trial(cfg: &ExperimentConfig, epsilon: f64, trial: usize) -> Result<Measurement> {
    let mut rng = trial_rng(cfg.seed, trial);
    let m = cfg.multiplicity;
    match cfg.experiment {
        Experiment::Stability => {
            let comp = cfg.composition()?;
            let phi = random_near_identity_embedding(&nest_pattern(&comp), m, epsilon, rng.next_u64())?;
            let (_, report) = stabilize_nest_inclusion(&phi, &comp.ampliate(m)?)?;
            Ok(Measurement {
                defect_in: report.input_defect,
                recovery_distance: report.distance,
                structural_residual: report.unit_residual,
                ambient: phi.ambient_dim(),
            })
        }
        Experiment::RegularStability => {
            let p = cfg.pattern()?;
            let n = p.dim() * m;
            let phi = random_near_identity_embedding(&p, m, epsilon, rng.next_u64())?;
            let (_, report) = regular_stabilize(
                &phi,
                &MasaPartition::blocks_of(p.dim(), m)?,
                &p.tensor_diagonal(m)?,
                &MasaPartition::full_diagonal(n)?,
            )?;
            Ok(Measurement {
                defect_in: report.input_defect,
                ..Measurement::from_certificate(&report.certificate, n)
            })
        }
        Experiment::Tower => {
            let schedule = TowerConfig::geometric_schedule(cfg.depth, epsilon, 0.5);
            let tcfg = TowerConfig::doubling(&cfg.pattern()?, cfg.depth, schedule, rng.next_u64())?;
            let tower = perturb_tower(&generate_tower(&tcfg)?, &tcfg);
            let (_, report) = recover_chain(&tower)?;
            let residual = report.links.iter().map(|l| l.unit_residual).fold(0.0, f64::max);
            let defect = report.links.iter().map(|l| l.reduction_defect).fold(0.0, f64::max);
            Ok(Measurement {
                defect_in: defect,
                recovery_distance: report.total_commutation,
                structural_residual: residual,
                ambient: tcfg.ambient_dim(),
            })
        }
        Experiment::NormfixSweep => {
            let p = cfg.pattern()?;
            let n = p.dim();
            let v = random_normalizer(&mut rng, &p);
            let noise = gaussian(&mut rng, n);
            let v = &v + &noise.scale_real(epsilon / noise.norm());
            let (_, cert) = fix_normalizer(&v, &p, &MasaPartition::full_diagonal(n)?)?;
            Ok(Measurement::from_certificate(&cert, n))
        }
        Experiment::TriangularizeSweep => {
            let comp = cfg.composition()?;
            let n = comp.total();
            let mut b = CMatrix::zeros(n, n);
            for k in 0..comp.len() {
                let r = comp.range(k);
                b.set_submatrix(r.start, r.start, &unitary(&mut rng, r.len()));
            }
            let d: Vec<f64> = (0..n).map(|_| if rng.random_bool(0.7) { 1.0 } else { 0.0 }).collect();
            let tilt = random_near_identity_unitary(n, epsilon, &mut rng);
            let v = b.matmul(&CMatrix::from_real_diag(&d)).matmul(&tilt);
            let (_, cert) = block_triangularize(&v, &comp)?;
            let defect = comp.subdiagonal_norm(&v);
            Ok(Measurement {
                defect_in: defect,
                ..Measurement::from_certificate(&cert, n)
            })
        }
    }
}

/// A partial permutation with unimodular entries inside the pattern, each
/// row kept with probability 4/5.
fn random_normalizer(rng: &mut ChaCha8Rng, pattern: &crate::algebra::IncidencePattern) -> CMatrix {
    let n = pattern.dim();
    let mut v = CMatrix::zeros(n, n);
    let mut used = vec![false; n];
    for i in 0..n {
        if !rng.random_bool(0.8) {
            continue;
        }
        let free: Vec<usize> = (0..n).filter(|&j| !used[j] && pattern.contains(i, j)).collect();
        if free.is_empty() {
            continue;
        }
        let j = free[rng.random_range(0..free.len())];
        used[j] = true;
        v[(i, j)] = C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    }
    v
}

fn row(cfg: &ExperimentConfig, epsilon: f64, trial: usize) -> ResultRow {
    let start = cfg.timing.then(Instant::now);
    let outcome = run_trial(cfg, epsilon, trial);
    let runtime_ms = start.map(|t| t.elapsed().as_secs_f64() * 1e3);
    let mut r = ResultRow {
        experiment: cfg.experiment,
        trial,
        epsilon,
        defect_in: None,
        recovery_distance: None,
        structural_residual: None,
        runtime_ms,
        status: "ok".into(),
    };
    match outcome {
        Ok(m) => {
            r.defect_in = Some(m.defect_in);
            r.recovery_distance = Some(m.recovery_distance);
            r.structural_residual = Some(m.structural_residual);
            if !(m.structural_residual <= TOL.struct_tol(m.ambient)) {
                r.status = "FAILED:structural-residual".into();
            }
        }
        Err(e) => r.status = format!("FAILED:{}", e.stage()),
    }
    r
}

/// Runs every (epsilon, trial) pair. Trials run concurrently; rows come
/// back ordered by epsilon, then trial.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let jobs: Vec<(f64, usize)> = cfg
        .epsilons
        .iter()
        .flat_map(|&e| (0..cfg.trials).map(move |t| (e, t)))
        .collect();
    Ok(jobs.par_iter().map(|&(e, t)| row(cfg, e, t)).collect())
}

fn field(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".to_string(), |v| format!("{v:e}"))
}

/// Writes the results CSV; measurements use the shortest round-trip
/// exponent form and absent ones are `NA`.
pub fn write_csv(rows: &[ResultRow], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(CSV_COLUMNS).map_err(io)?;
    for r in rows {
        w.write_record([
            r.experiment.name().to_string(),
            r.trial.to_string(),
            r.epsilon.to_string(),
            field(r.defect_in),
            field(r.recovery_distance),
            field(r.structural_residual),
            field(r.runtime_ms),
            r.status.clone(),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// Everything needed to rerun an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct Manifest {
    pub version: String,
    pub config: ExperimentConfig,
    pub tolerances: Tolerances,
    pub columns: Vec<String>,
}

impl Manifest {
    pub fn new(config: &ExperimentConfig) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: config.clone(),
            tolerances: TOL,
            columns: CSV_COLUMNS.iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes") + "\n"
    }

    /// Parses a manifest; it must have been written with this build's
    /// tolerance set.
    pub fn from_json(text: &str) -> Result<Self> {
        let m: Manifest = serde_json::from_str(text)?;
        if m.tolerances != TOL {
            return Err(Error::Invalid("manifest was written with a different tolerance set".into()));
        }
        Ok(m)
    }
}
