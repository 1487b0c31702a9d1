use std::ffi::OsString;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use super::config::{parse_pattern, ExperimentConfig};
use super::experiment::{run_experiment, write_csv, Manifest};
use crate::algebra::{arveson_distance, masa_distance, pattern_distance, IncidencePattern, MasaPartition};
use crate::error::{Error, Result};
use crate::numkernel::{read_matrix, write_matrix, CMatrix};
use crate::perturb::{
    block_triangularize, conjugating_unitary, fix_partial_isometry, round_to_projection, CorrectionCertificate,
};
use crate::regular::fix_normalizer;

/// Exit code for malformed input, I/O errors and invalid configurations.
pub const EXIT_INVALID: i32 = 1;
/// Exit code for well-formed input too far from the target structure.
pub const EXIT_HYPOTHESIS: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "perturba", version, about = "Structured matrix corrections with certified distances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Output {
    /// Corrected matrix path [default: <input>.corrected.json].
    #[arg(long)]
    out: Option<PathBuf>,
    /// Certificate path [default: <input>.certificate.json].
    #[arg(long)]
    certificate: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Round a nearly idempotent Hermitian matrix to a projection.
    Project {
        input: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Round an approximate partial isometry to a partial isometry.
    Pisofix {
        input: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Block upper-triangular partial isometry near a partial isometry with
    /// block-diagonal final projection.
    Triangularize {
        input: PathBuf,
        /// Block sizes, e.g. `2,1,3`.
        #[arg(long)]
        composition: String,
        #[command(flatten)]
        output: Output,
    },
    /// Unitary carrying the first projection onto the second.
    Conjugate {
        p: PathBuf,
        q: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Exact normalizer of the diagonal masa near an approximate one.
    Normfix {
        input: PathBuf,
        /// Pattern the normalizer must lie in [default: full].
        #[arg(long)]
        pattern: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Distance to a nest algebra, a digraph algebra or the diagonal masa.
    Distance {
        input: PathBuf,
        /// Nest algebra block sizes.
        #[arg(long, conflicts_with = "pattern")]
        composition: Option<String>,
        /// Digraph algebra pattern, e.g. `pairs:3:1-2,2-3`.
        #[arg(long)]
        pattern: Option<String>,
        /// Report path [default: <input>.distance.json].
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a seeded experiment and write results.csv and manifest.json.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    /// Flat `key = value` configuration file.
    #[arg(long, conflicts_with = "manifest")]
    config: Option<PathBuf>,
    /// Rerun the configuration recorded in a manifest.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long)]
    experiment: Option<String>,
    #[arg(long)]
    composition: Option<String>,
    #[arg(long)]
    pattern: Option<String>,
    #[arg(long)]
    multiplicity: Option<String>,
    /// Comma-separated list.
    #[arg(long)]
    epsilons: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    /// Overrides both the config and PERTURBA_SEED.
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    depth: Option<String>,
    /// Record per-trial runtimes.
    #[arg(long)]
    timing: bool,
}

fn sibling(input: &Path, suffix: &str) -> PathBuf {
    let stem = input.file_stem().unwrap_or_default().to_string_lossy();
    input.with_file_name(format!("{stem}.{suffix}.json"))
}

fn emit(input: &Path, output: &Output, m: &CMatrix, cert: &CorrectionCertificate) -> Result<String> {
    let out = output.out.clone().unwrap_or_else(|| sibling(input, "corrected"));
    let cert_path = output.certificate.clone().unwrap_or_else(|| sibling(input, "certificate"));
    write_matrix(&out, m)?;
    std::fs::write(&cert_path, cert.to_json() + "\n")?;
    Ok(format!(
        "wrote {} (distance {:.6e}, residual {:.3e}) and {}",
        out.display(),
        cert.correction_distance,
        cert.structural_residual,
        cert_path.display()
    ))
}

fn experiment_config(args: &ExperimentArgs) -> Result<ExperimentConfig> {
    if let Some(path) = &args.manifest {
        return Ok(Manifest::from_json(&std::fs::read_to_string(path)?)?.config);
    }
    let mut cfg = match (&args.config, &args.experiment) {
        (Some(path), _) => ExperimentConfig::parse(&std::fs::read_to_string(path)?)?,
        (None, Some(name)) => ExperimentConfig::new(name.parse()?),
        (None, None) => return Err(Error::Invalid("either --config or --experiment is required".into())),
    };
    cfg.apply_env()?;
    let flags = [
        ("experiment", &args.experiment),
        ("composition", &args.composition),
        ("pattern", &args.pattern),
        ("multiplicity", &args.multiplicity),
        ("epsilons", &args.epsilons),
        ("trials", &args.trials),
        ("seed", &args.seed),
        ("depth", &args.depth),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    if args.timing {
        cfg.timing = true;
    }
    Ok(cfg)
}

fn execute(command: Command) -> Result<String> {
    match command {
        Command::Project { input, output } => {
            let (p, cert) = round_to_projection(&read_matrix(&input)?)?;
            emit(&input, &output, &p, &cert)
        }
        Command::Pisofix { input, output } => {
            let (v, cert) = fix_partial_isometry(&read_matrix(&input)?)?;
            emit(&input, &output, &v, &cert)
        }
        Command::Triangularize {
            input,
            composition,
            output,
        } => {
            let (v, cert) = block_triangularize(&read_matrix(&input)?, &composition.parse()?)?;
            emit(&input, &output, &v, &cert)
        }
        Command::Conjugate { p, q, output } => {
            let (u, cert) = conjugating_unitary(&read_matrix(&p)?, &read_matrix(&q)?)?;
            emit(&p, &output, &u, &cert)
        }
        Command::Normfix { input, pattern, output } => {
            let v = read_matrix(&input)?;
            let n = v.rows();
            let pattern = match pattern {
                Some(desc) => parse_pattern(&desc)?,
                None => IncidencePattern::full(n)?,
            };
            let (w, cert) = fix_normalizer(&v, &pattern, &MasaPartition::full_diagonal(n)?)?;
            emit(&input, &output, &w, &cert)
        }
        Command::Distance {
            input,
            composition,
            pattern,
            out,
        } => {
            let x = read_matrix(&input)?;
            let report = match (composition, pattern) {
                (Some(c), _) => {
                    let d = arveson_distance(&x, &c.parse()?)?;
                    serde_json::json!({ "kind": "nest", "distance": d, "exact": true })
                }
                (None, Some(desc)) => {
                    let d = pattern_distance(&x, &parse_pattern(&desc)?)?;
                    serde_json::json!({ "kind": "pattern", "distance": d.value, "exact": d.exact })
                }
                (None, None) => {
                    x.ensure_square()?;
                    let d = masa_distance(&x, &MasaPartition::full_diagonal(x.rows())?)?;
                    serde_json::json!({
                        "kind": "masa",
                        "distance": d.estimate,
                        "exact": false,
                        "lower_bound": d.commutator_bound / 2.0,
                    })
                }
            };
            let (kind, distance) = (report["kind"].clone(), report["distance"].as_f64().unwrap_or(f64::NAN));
            let path = out.unwrap_or_else(|| sibling(&input, "distance"));
            std::fs::write(&path, serde_json::to_string_pretty(&report)? + "\n")?;
            Ok(format!("{kind} distance {distance:.6e}, wrote {}", path.display()))
        }
        Command::Experiment(args) => {
            let cfg = experiment_config(&args)?;
            let rows = run_experiment(&cfg)?;
            std::fs::create_dir_all(&args.out_dir)?;
            let csv_path = args.out_dir.join("results.csv");
            write_csv(&rows, BufWriter::new(File::create(&csv_path)?))?;
            std::fs::write(args.out_dir.join("manifest.json"), Manifest::new(&cfg).to_json())?;
            let failed = rows.iter().filter(|r| !r.is_ok()).count();
            Ok(format!("{} rows ({failed} failed), wrote {}", rows.len(), csv_path.display()))
        }
    }
}

/// What a failed hypothesis asked of the input.
pub fn hypothesis(err: &Error) -> Option<String> {
    let text = match err {
        Error::AtLevel { level, source } => {
            return hypothesis(source).map(|h| format!("tower level {level}: {h}"));
        }
        Error::DefectTooLarge { stage, .. } => match stage.as_str() {
            "projection" => "a Hermitian input must be nearly idempotent, ‖b² − b‖ < 1/4",
            "partial-isometry" => "the input must be an approximate partial isometry, ‖v*v − (v*v)²‖ < 1/4",
            "block-diagonal-range" => "the input must be a partial isometry whose final projection is block diagonal",
            "normalizer" => "the input must nearly normalize the diagonal masa, with defect below 1/4",
            "normalizer-pattern" => "the large entries of the input must lie in the pattern",
            "perturbation" => "each tower level must be perturbed by less than 1/4",
            "selfadjoint-containment" => "the self-adjoint units must lie within 1/8 of the target",
            _ => "the input must be close enough to the target structure for the correction to apply",
        },
        Error::ProjectionsTooFar { .. } => "the two projections must be at distance below 1",
        Error::RankMismatch { .. } => "nearby partial isometries must have equal rank",
        Error::CompressionSingular { .. } => "the compressed edge must be invertible on its initial projection",
        Error::AmbiguousSupport { .. } => "no row or column may carry two entries above 1/2",
        Error::NotRefined { .. } => "the source masa must be contained in the target masa",
        Error::SupportMismatch { .. } => "corrected units must stay inside the target pattern",
        Error::FrameMismatch { .. } => "edge images must be exact normalizers with matching projections",
        _ => return None,
    };
    Some(text.to_string())
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(summary) => {
            println!("{summary}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_hypothesis_failure() {
                if let Some(h) = hypothesis(&e) {
                    eprintln!("hypothesis not met: {h}");
                }
                EXIT_HYPOTHESIS
            } else {
                EXIT_INVALID
            }
        }
    }
}
