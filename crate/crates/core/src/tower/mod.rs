//! Finite towers of digraph algebras in a common ambient M_N: generation,
//! perturbation, recovery of an exact chain of regular embeddings, and masa
//! density measurements.
//!
//! Level k is the pattern P_k on n_k vertices amplified by m_k, so that
//! n_k·m_k = N at every level. Consecutive levels satisfy
//! P_k ⊗ D_r ⊆ P_{k+1} with r = n_{k+1}/n_k, and the level masas are the
//! runs of length m_k, nested as k grows.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{
    matrix_unit_residual, random_near_identity_unitary, IncidencePattern, MasaPartition, MatrixUnitSystem,
    StarEmbedding,
};
use crate::error::{Error, Result};
use crate::numkernel::{CMatrix, C64, ZERO};
use crate::regular::regular_stabilize;

/// Largest ambient dimension a tower may use.
pub const MAX_AMBIENT: usize = 512;

/// Per-level perturbations must stay below this.
pub const EPSILON_CEILING: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TowerConfig {
    pub depth: usize,
    pub patterns: Vec<IncidencePattern>,
    pub multiplicities: Vec<usize>,
    pub eps_schedule: Vec<f64>,
    pub seed: u64,
}

impl TowerConfig {
    /// Levels P ⊗ D_{2^k} with multiplicities 2^{depth−1−k}.
    pub fn doubling(base: &IncidencePattern, depth: usize, eps_schedule: Vec<f64>, seed: u64) -> Result<Self> {
        if depth == 0 || depth > 20 {
            return Err(Error::Invalid("tower depth must be between 1 and 20".into()));
        }
        let patterns = (0..depth)
            .map(|k| base.tensor_diagonal(1 << k))
            .collect::<Result<Vec<_>>>()?;
        let multiplicities = (0..depth).map(|k| 1usize << (depth - 1 - k)).collect();
        Ok(Self {
            depth,
            patterns,
            multiplicities,
            eps_schedule,
            seed,
        })
    }

    /// ε_k = first·ratio^k.
    pub fn geometric_schedule(depth: usize, first: f64, ratio: f64) -> Vec<f64> {
        (0..depth).map(|k| first * ratio.powi(k as i32)).collect()
    }

    /// Common ambient dimension n_k·m_k, read from level 0.
    pub fn ambient_dim(&self) -> usize {
        match (self.patterns.first(), self.multiplicities.first()) {
            (Some(p), Some(&m)) => p.dim().saturating_mul(m),
            _ => 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.depth == 0 {
            return Err(Error::Invalid("tower depth must be positive".into()));
        }
        if self.patterns.len() != self.depth
            || self.multiplicities.len() != self.depth
            || self.eps_schedule.len() != self.depth
        {
            return Err(Error::Invalid(format!(
                "tower of depth {} needs {} patterns, multiplicities and epsilons (got {}, {}, {})",
                self.depth,
                self.depth,
                self.patterns.len(),
                self.multiplicities.len(),
                self.eps_schedule.len()
            )));
        }
        if let Some(k) = self.multiplicities.iter().position(|&m| m == 0) {
            return Err(Error::Invalid(format!("multiplicity of level {k} is zero")));
        }
        for (k, &e) in self.eps_schedule.iter().enumerate() {
            if !(0.0..EPSILON_CEILING).contains(&e) {
                return Err(Error::Invalid(format!("epsilon of level {k} must lie in [0, 1/4), got {e}")));
            }
        }
        let n = self.ambient_dim();
        if n > MAX_AMBIENT {
            return Err(Error::DimensionOverflow { dim: n, limit: MAX_AMBIENT });
        }
        for k in 0..self.depth {
            let nk = self.patterns[k].dim().saturating_mul(self.multiplicities[k]);
            if nk != n {
                return Err(Error::Invalid(format!(
                    "level {k} has ambient dimension {nk} but level 0 has {n}"
                )));
            }
        }
        for k in 0..self.depth - 1 {
            let (lo, hi) = (&self.patterns[k], &self.patterns[k + 1]);
            if hi.dim() % lo.dim() != 0 {
                return Err(Error::Invalid(format!("level {} does not refine level {k}", k + 1)));
            }
            let r = hi.dim() / lo.dim();
            if let Some((i, j)) = lo
                .pairs()
                .find(|&(i, j)| (0..r).any(|b| !hi.contains(i * r + b, j * r + b)))
            {
                return Err(Error::Invalid(format!(
                    "unit ({}, {}) of level {k} is not contained in level {}",
                    i + 1,
                    j + 1,
                    k + 1
                )));
            }
        }
        Ok(())
    }
}

/// One level of a tower in the common ambient.
#[derive(Debug, Clone, PartialEq)]
pub struct TowerLevel {
    /// P_k on n_k vertices.
    pub pattern: IncidencePattern,
    pub multiplicity: usize,
    /// Runs of length m_k.
    pub masa: MasaPartition,
    /// Images of P_k's units in M_N.
    pub embedding: StarEmbedding,
    /// Perturbation applied to this level, 0 for an exact level.
    pub epsilon: f64,
}

/// Tower bundle `{"levels": [{"multiplicity", "epsilon", "masa", "bundle"}]}`.
pub fn tower_to_json(tower: &[TowerLevel]) -> String {
    let levels: Vec<String> = tower
        .iter()
        .map(|l| {
            format!(
                "{{\"multiplicity\": {}, \"epsilon\": {}, \"masa\": {}, \"bundle\": {}}}",
                l.multiplicity,
                serde_json::to_string(&l.epsilon).expect("finite"),
                serde_json::to_string(&l.masa).expect("masa serializes"),
                l.embedding.images().to_json()
            )
        })
        .collect();
    format!("{{\"levels\": [{}]}}", levels.join(", "))
}

/// The exact tower: level k is P_k ⊗ I_{m_k}.
pub fn generate_tower(cfg: &TowerConfig) -> Result<Vec<TowerLevel>> {
    cfg.validate()?;
    (0..cfg.depth)
        .map(|k| {
            let (p, m) = (&cfg.patterns[k], cfg.multiplicities[k]);
            Ok(TowerLevel {
                pattern: p.clone(),
                multiplicity: m,
                masa: MasaPartition::blocks_of(p.dim(), m)?,
                embedding: StarEmbedding::new(MatrixUnitSystem::ampliation(p, m)?),
                epsilon: 0.0,
            })
        })
        .collect()
}

/// Conjugates level k by an independent unitary u_k with ‖u_k − I‖ = ε_k,
/// drawn from stream k of the configured seed.
///
/// Masas are left in place; only the unit images move.
pub fn perturb_tower(tower: &[TowerLevel], cfg: &TowerConfig) -> Vec<TowerLevel> {
    tower
        .iter()
        .enumerate()
        .map(|(k, level)| {
            let eps = cfg.eps_schedule.get(k).copied().unwrap_or(0.0);
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(k as u64);
            // ‖exp(k) − I‖ = 2 sin(‖k‖/2) for skew-Hermitian k.
            let angle = 2.0 * (eps.min(2.0) / 2.0).asin();
            let u = random_near_identity_unitary(level.embedding.ambient_dim(), angle, &mut rng);
            TowerLevel {
                embedding: StarEmbedding::new(level.embedding.images().conjugate(&u)),
                epsilon: eps,
                ..level.clone()
            }
        })
        .collect()
}

/// Measurements of one recovered link π_k : A_k → A_{k+1}.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinkReport {
    pub level: usize,
    /// ε_k of the source level.
    pub epsilon: f64,
    /// max over units e of A_k of ‖π_k(e) − ι_k(e)‖, ι_k the exact
    /// inclusion e ↦ e ⊗ I_r.
    pub commutation: f64,
    /// Σ of the commutation defects up to this link.
    pub partial_sum: f64,
    /// max ‖c(φ_k(e)) − ι_k(e)‖ before correction.
    pub reduction_defect: f64,
    pub unit_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    pub links: Vec<LinkReport>,
    pub total_commutation: f64,
    pub total_epsilon: f64,
}

/// Coordinates of an ambient matrix relative to a level's unit images:
/// c(x)_st = tr(h_st*·x)/m for (s, t) in the level's pattern.
fn reduce(x: &CMatrix, level: &TowerLevel) -> CMatrix {
    let n = level.pattern.dim();
    let m = level.multiplicity as f64;
    let mut out = CMatrix::zeros(n, n);
    for ((s, t), h) in level.embedding.images().units() {
        let mut acc = ZERO;
        for (a, b) in h.data().iter().zip(x.data()) {
            if *a != ZERO {
                acc += a.conj() * b;
            }
        }
        out[(*s, *t)] = acc / C64::new(m, 0.0);
    }
    out
}

/// Exact regular embeddings π_k of each level into the next, recovered from
/// the perturbed unit images of both levels.
///
/// The images of A_k's units are expressed in the coordinates of the
/// perturbed level k + 1 and corrected by [`regular_stabilize`] with source
/// masa the runs of length r = n_{k+1}/n_k and target masa the full
/// diagonal. Every recorded ε_k must lie below 1/4, and so must the
/// distance of each reduced system from the exact ampliation.
pub fn recover_chain(tower: &[TowerLevel]) -> Result<(Vec<StarEmbedding>, ChainReport)> {
    let mut maps = Vec::new();
    let mut links = Vec::new();
    let mut partial_sum = 0.0;
    let mut total_epsilon = 0.0;
    for (k, level) in tower.iter().enumerate() {
        if !(level.epsilon < EPSILON_CEILING) {
            return Err(Error::AtLevel {
                level: k,
                source: Box::new(Error::too_large("perturbation", level.epsilon, EPSILON_CEILING)),
            });
        }
    }
    for k in 0..tower.len().saturating_sub(1) {
        let (lo, hi) = (&tower[k], &tower[k + 1]);
        let at = |e: Error| Error::AtLevel {
            level: k,
            source: Box::new(e),
        };
        let (n_lo, n_hi) = (lo.pattern.dim(), hi.pattern.dim());
        if n_hi % n_lo != 0 || lo.embedding.ambient_dim() != hi.embedding.ambient_dim() {
            return Err(at(Error::Invalid("levels are not compatible".into())));
        }
        let r = n_hi / n_lo;
        let exact = MatrixUnitSystem::ampliation(&lo.pattern, r).map_err(at)?;
        let images = lo.embedding.images();
        let reduced = MatrixUnitSystem::new(
            lo.pattern.clone(),
            n_hi,
            images.units().map(|(&st, x)| (st, reduce(x, hi))).collect(),
        )
        .map_err(at)?;
        let reduction_defect = reduced.distance(&exact).map_err(at)?;
        if reduction_defect >= EPSILON_CEILING {
            return Err(at(Error::too_large("reduction", reduction_defect, EPSILON_CEILING)));
        }
        let (pi, _) = regular_stabilize(
            &StarEmbedding::new(reduced),
            &MasaPartition::blocks_of(n_lo, r).map_err(at)?,
            &hi.pattern,
            &MasaPartition::full_diagonal(n_hi).map_err(at)?,
        )
        .map_err(at)?;
        let commutation = pi.images().distance(&exact).map_err(at)?;
        partial_sum += commutation;
        total_epsilon += lo.epsilon;
        links.push(LinkReport {
            level: k,
            epsilon: lo.epsilon,
            commutation,
            partial_sum,
            reduction_defect,
            unit_residual: matrix_unit_residual(pi.images()),
        });
        maps.push(pi);
    }
    let report = ChainReport {
        total_commutation: partial_sum,
        total_epsilon,
        links,
    };
    Ok((maps, report))
}

/// Radius of the smallest disc containing the points.
fn enclosing_radius(points: &[C64]) -> f64 {
    let inside = |c: C64, r: f64, p: C64| (p - c).norm() <= r * (1.0 + 1e-12) + 1e-300;
    let Some(&first) = points.first() else {
        return 0.0;
    };
    let (mut c, mut r) = (first, 0.0);
    for i in 1..points.len() {
        if inside(c, r, points[i]) {
            continue;
        }
        (c, r) = (points[i], 0.0);
        for j in 0..i {
            if inside(c, r, points[j]) {
                continue;
            }
            c = (points[i] + points[j]) / 2.0;
            r = (points[i] - points[j]).norm() / 2.0;
            for k in 0..j {
                if !inside(c, r, points[k]) {
                    (c, r) = circumscribe(points[i], points[j], points[k]);
                }
            }
        }
    }
    r
}

/// Circle through three points; the widest diameter circle when they are
/// collinear.
fn circumscribe(a: C64, b: C64, c: C64) -> (C64, f64) {
    let (ab, ac) = (b - a, c - a);
    let d = 2.0 * (ab.re * ac.im - ab.im * ac.re);
    if d.abs() <= 1e-300 {
        let pairs = [(a, b), (a, c), (b, c)];
        let (p, q) = pairs
            .into_iter()
            .max_by(|x, y| (x.0 - x.1).norm().total_cmp(&(y.0 - y.1).norm()))
            .expect("three pairs");
        return ((p + q) / 2.0, (p - q).norm() / 2.0);
    }
    let (b2, c2) = (ab.norm_sqr(), ac.norm_sqr());
    let ux = (ac.im * b2 - ab.im * c2) / d;
    let uy = (ab.re * c2 - ac.re * b2) / d;
    let center = a + C64::new(ux, uy);
    (center, C64::new(ux, uy).norm())
}

/// For each diagonal probe c, dist(c, span C_k) at every level k: the
/// largest over cells of the radius of the smallest disc containing the
/// probe's entries on that cell.
pub fn masa_density_report(tower: &[TowerLevel], probes: &[CMatrix]) -> Result<Vec<Vec<f64>>> {
    let Some(first) = tower.first() else {
        return Ok(vec![Vec::new(); probes.len()]);
    };
    let n = first.masa.dim();
    probes
        .iter()
        .map(|c| {
            c.ensure_shape((n, n))?;
            if (0..n).any(|i| (0..n).any(|j| i != j && c[(i, j)] != ZERO)) {
                return Err(Error::Invalid("masa density probes must be diagonal".into()));
            }
            Ok(tower
                .iter()
                .map(|level| {
                    level
                        .masa
                        .cells()
                        .iter()
                        .map(|cell| enclosing_radius(&cell.iter().map(|&i| c[(i, i)]).collect::<Vec<_>>()))
                        .fold(0.0, f64::max)
                })
                .collect())
        })
        .collect()
}
