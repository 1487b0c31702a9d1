use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{nest_pattern, BlockComposition, IncidencePattern};
use crate::error::{Error, Result};

/// Environment variable overriding the configured seed.
pub const SEED_ENV: &str = "PERTURBA_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    /// Approximate nest inclusions corrected to exact ones.
    Stability,
    /// Approximate digraph-algebra inclusions corrected to regular ones.
    RegularStability,
    /// Perturbed towers of regular inclusions and chain recovery.
    Tower,
    /// Perturbed masa normalizers repaired.
    NormfixSweep,
    /// Rotated partial isometries triangularized.
    TriangularizeSweep,
}

impl Experiment {
    pub const ALL: [Experiment; 5] = [
        Experiment::Stability,
        Experiment::RegularStability,
        Experiment::Tower,
        Experiment::NormfixSweep,
        Experiment::TriangularizeSweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Stability => "stability",
            Experiment::RegularStability => "regular-stability",
            Experiment::Tower => "tower",
            Experiment::NormfixSweep => "normfix-sweep",
            Experiment::TriangularizeSweep => "triangularize-sweep",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| {
                let known: Vec<&str> = Experiment::ALL.iter().map(|e| e.name()).collect();
                Error::Invalid(format!("unknown experiment `{s}` (expected one of {})", known.join(", ")))
            })
    }
}

/// Parses a pattern description:
/// `nest:2,1,3`, `upper:n`, `full:n`, `diagonal:n` or `pairs:n:1-2,2-3`
/// (1-based pairs, closed reflexively and transitively).
pub fn parse_pattern(desc: &str) -> Result<IncidencePattern> {
    let bad = || Error::Invalid(format!("bad pattern `{desc}`"));
    let (kind, rest) = desc.trim().split_once(':').ok_or_else(bad)?;
    let dim = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    match kind.trim() {
        "nest" => Ok(nest_pattern(&rest.parse()?)),
        "upper" => IncidencePattern::upper_triangular(dim(rest)?),
        "full" => IncidencePattern::full(dim(rest)?),
        "diagonal" => IncidencePattern::diagonal(dim(rest)?),
        "pairs" => {
            let (n, list) = rest.split_once(':').unwrap_or((rest, ""));
            let n = dim(n)?;
            let mut pairs = Vec::new();
            for item in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let (i, j) = item.split_once('-').ok_or_else(bad)?;
                let (i, j) = (dim(i)?, dim(j)?);
                if i == 0 || j == 0 || i > n || j > n {
                    return Err(Error::Invalid(format!("pair `{item}` is out of range 1..={n}")));
                }
                pairs.push((i - 1, j - 1));
            }
            IncidencePattern::closure(n, pairs)
        }
        _ => Err(bad()),
    }
}

/// One experiment: every epsilon is run for every trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    /// Block sizes of the source nest (stability, triangularize-sweep).
    pub composition: String,
    /// Pattern description for regular-stability, tower and normfix-sweep;
    /// defaults to the nest of `composition`.
    pub pattern: Option<String>,
    /// Ambient multiplicity of the source algebra.
    pub multiplicity: usize,
    pub epsilons: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    /// Tower depth; level k is perturbed by ε·2^{−k}.
    pub depth: usize,
    /// Record wall-clock runtimes (breaks byte-identical reruns).
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            composition: "2,2,2".into(),
            pattern: None,
            multiplicity: 2,
            epsilons: vec![1e-2, 1e-3, 1e-4],
            trials: 10,
            seed: 0,
            depth: 4,
            timing: false,
        }
    }

    /// Parses a flat `key = value` file. Blank lines and lines starting
    /// with `#` are ignored; `experiment` is required.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("config line {}: expected `key = value`", k + 1)))?;
            entries.push((key.trim().to_string(), value.trim().to_string()));
        }
        let experiment = entries
            .iter()
            .find(|(k, _)| k == "experiment")
            .ok_or_else(|| Error::Invalid("config does not name an experiment".into()))?
            .1
            .parse()?;
        let mut cfg = Self::new(experiment);
        for (key, value) in &entries {
            cfg.set(key, value)?;
        }
        Ok(cfg)
    }

    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let invalid = || Error::Invalid(format!("bad value `{value}` for `{key}`"));
        match key {
            "experiment" => self.experiment = value.parse()?,
            "composition" => self.composition = value.to_string(),
            "pattern" => self.pattern = Some(value.to_string()),
            "multiplicity" => self.multiplicity = value.parse().map_err(|_| invalid())?,
            "epsilons" | "epsilon" => {
                self.epsilons = value
                    .split(',')
                    .map(|t| t.trim().parse::<f64>().map_err(|_| invalid()))
                    .collect::<Result<_>>()?
            }
            "trials" => self.trials = value.parse().map_err(|_| invalid())?,
            "seed" => self.seed = value.parse().map_err(|_| invalid())?,
            "depth" => self.depth = value.parse().map_err(|_| invalid())?,
            "timing" => self.timing = value.parse().map_err(|_| invalid())?,
            _ => return Err(Error::Invalid(format!("unknown config key `{key}`"))),
        }
        Ok(())
    }

    /// Applies `PERTURBA_SEED` if it is set.
    pub fn apply_env(&mut self) -> Result<()> {
        if let Ok(v) = std::env::var(SEED_ENV) {
            self.seed = v
                .trim()
                .parse()
                .map_err(|_| Error::Invalid(format!("{SEED_ENV} must be an unsigned integer, got `{v}`")))?;
        }
        Ok(())
    }

    pub fn composition(&self) -> Result<BlockComposition> {
        self.composition.parse()
    }

    pub fn pattern(&self) -> Result<IncidencePattern> {
        match &self.pattern {
            Some(desc) => parse_pattern(desc),
            None => Ok(nest_pattern(&self.composition()?)),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.composition()?;
        self.pattern()?;
        if self.multiplicity == 0 {
            return Err(Error::Invalid("multiplicity must be positive".into()));
        }
        if self.epsilons.is_empty() {
            return Err(Error::Invalid("at least one epsilon is required".into()));
        }
        if let Some(e) = self.epsilons.iter().find(|e| !(e.is_finite() && **e >= 0.0)) {
            return Err(Error::Invalid(format!("epsilon must be finite and non-negative, got {e}")));
        }
        if self.experiment == Experiment::Tower && self.depth == 0 {
            return Err(Error::Invalid("tower depth must be positive".into()));
        }
        Ok(())
    }
}
