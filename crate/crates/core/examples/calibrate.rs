//! Measures the ensemble constants that the acceptance suite freezes: the
//! per-ε median recovery distances of the nest stability pipeline, the
//! tower recovery constant CAL, and the spread of regular-stability
//! certificates across ambient multiplicities.
//!
//! Calibration seeds are disjoint from the seeds the acceptance suite runs.

use perturba::algebra::{nest_pattern, random_near_identity_embedding, MasaPartition};
use perturba::harness::{run_experiment, Experiment, ExperimentConfig};
use perturba::regular::regular_stabilize;
use perturba::tower::{generate_tower, perturb_tower, recover_chain, TowerConfig};

const CALIBRATION_SEED: u64 = 20_240_601;

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    xs[xs.len() / 2]
}

fn main() -> perturba::Result<()> {
    let mut cfg = ExperimentConfig::new(Experiment::Stability);
    cfg.trials = 50;
    cfg.seed = CALIBRATION_SEED;
    let rows = run_experiment(&cfg)?;
    println!("nest stability, composition (2,2,2), multiplicity 2, 50 trials");
    for &e in &cfg.epsilons {
        let d: Vec<f64> = rows.iter().filter(|r| r.epsilon == e).filter_map(|r| r.recovery_distance).collect();
        let worst = d.iter().copied().fold(0.0, f64::max);
        let m = median(d);
        println!("  eps {e:e}: median {m:.4e}, max {worst:.4e}, threshold (2x median) {:.4e}", 2.0 * m);
    }

    let base = nest_pattern(&"1,1".parse()?);
    let eps = TowerConfig::geometric_schedule(4, 0.01, 0.5);
    let (mut worst, mut worst_sum): (f64, f64) = (0.0, 0.0);
    for trial in 0..50 {
        let tcfg = TowerConfig::doubling(&base, 4, eps.clone(), CALIBRATION_SEED + trial)?;
        let tower = perturb_tower(&generate_tower(&tcfg)?, &tcfg);
        let (_, report) = recover_chain(&tower)?;
        for link in &report.links {
            worst = worst.max(link.commutation / link.epsilon);
        }
        worst_sum = worst_sum.max(report.total_commutation / report.total_epsilon);
    }
    println!("tower, T2 doubling, depth 4, eps_k = 0.01 * 2^-k, 50 trials");
    println!("  max c_k / eps_k {worst:.4}, max sum c / sum eps {worst_sum:.4}, CAL (2x) {:.4}", 2.0 * worst);

    let p = nest_pattern(&"1,1,1".parse()?);
    let certificate = |m: usize, seed: u64| -> perturba::Result<f64> {
        let phi = random_near_identity_embedding(&p, m, 1e-3, seed)?;
        let (_, report) = regular_stabilize(
            &phi,
            &MasaPartition::blocks_of(3, m)?,
            &p.tensor_diagonal(m)?,
            &MasaPartition::full_diagonal(3 * m)?,
        )?;
        Ok(report.certificate.correction_distance)
    };
    let mut ratios = Vec::new();
    let (mut at2, mut at4) = (Vec::new(), Vec::new());
    for trial in 0..50 {
        let (a, b) = (certificate(2, CALIBRATION_SEED + trial)?, certificate(4, CALIBRATION_SEED + trial)?);
        ratios.push((a / b).max(b / a));
        at2.push(a);
        at4.push(b);
    }
    let (m2, m4) = (median(at2), median(at4));
    println!("regular stability, T3, eps 1e-3, multiplicities 2 and 4, 50 trials");
    println!(
        "  median {m2:.4e} vs {m4:.4e} (ratio {:.3}); per-trial ratio median {:.3}, max {:.3}",
        (m2 / m4).max(m4 / m2),
        median(ratios.clone()),
        ratios.iter().copied().fold(0.0, f64::max)
    );
    Ok(())
}
