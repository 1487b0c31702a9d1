//! Runs a seeded stability experiment and writes the results CSV and the
//! manifest that reproduces it.

use std::fs::File;

use perturba::harness::{run_experiment, write_csv, ExperimentConfig, Manifest};

fn main() -> perturba::Result<()> {
    let mut cfg = ExperimentConfig::parse("experiment = stability\ncomposition = 1,2\nmultiplicity = 2\ntrials = 5\nseed = 42\n")?;
    cfg.epsilons = vec![1e-2, 1e-3];
    let rows = run_experiment(&cfg)?;
    let dir = std::env::temp_dir().join("perturba-experiment");
    std::fs::create_dir_all(&dir)?;
    write_csv(&rows, File::create(dir.join("results.csv"))?)?;
    std::fs::write(dir.join("manifest.json"), Manifest::new(&cfg).to_json())?;
    write_csv(&rows, std::io::stdout())?;
    println!("wrote {}", dir.display());
    Ok(())
}
