use serde::Serialize;

use super::composition::BlockComposition;
use super::masa::MasaPartition;
use super::pattern::IncidencePattern;
use super::units::MatrixUnitSystem;
use crate::error::{Error, Result};
use crate::numkernel::{CMatrix, ZERO};
use crate::tolerances::TOL;

/// A distance together with whether it is exact or only an upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistanceEstimate {
    pub value: f64,
    pub exact: bool,
}

/// max over 1 ≤ k < r of ‖(I − P_k)·x·P_k‖, which is the distance from x to
/// the block upper-triangular algebra of `comp`.
pub fn arveson_distance(x: &CMatrix, comp: &BlockComposition) -> Result<f64> {
    let n = comp.total();
    x.ensure_shape((n, n))?;
    let offs = comp.offsets();
    let mut worst: f64 = 0.0;
    for k in 1..comp.len() {
        let cut = offs[k];
        worst = worst.max(x.submatrix(cut, n, 0, cut).norm());
    }
    Ok(worst)
}

/// Arveson's formula for a chain of coordinate classes (earliest first).
pub(crate) fn chain_distance(x: &CMatrix, chain: &[Vec<usize>]) -> f64 {
    let mut worst: f64 = 0.0;
    for k in 1..chain.len() {
        let below: Vec<usize> = chain[..k].iter().flatten().copied().collect();
        let above: Vec<usize> = chain[k..].iter().flatten().copied().collect();
        worst = worst.max(x.select(&above, &below).norm());
    }
    worst
}

/// Distance from x to the span of a pattern: exact for nests (in any
/// coordinate order), the truncation upper bound otherwise.
pub fn pattern_distance(x: &CMatrix, pattern: &IncidencePattern) -> Result<DistanceEstimate> {
    let n = pattern.dim();
    x.ensure_shape((n, n))?;
    Ok(match pattern.as_nest() {
        Some(chain) => DistanceEstimate {
            value: chain_distance(x, &chain),
            exact: true,
        },
        None => DistanceEstimate {
            value: pattern.truncation_distance(x),
            exact: false,
        },
    })
}

/// E(b) = Σ p_cell·b·p_cell.
pub fn expectation(b: &CMatrix, masa: &MasaPartition) -> Result<CMatrix> {
    let n = masa.dim();
    b.ensure_shape((n, n))?;
    Ok(CMatrix::from_fn(n, n, |i, j| {
        if masa.cell_of(i) == masa.cell_of(j) {
            b[(i, j)]
        } else {
            ZERO
        }
    }))
}

/// Two-sided estimate of the distance from w to a masa.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MasaDistance {
    /// ‖w − E(w)‖, an upper bound.
    pub estimate: f64,
    /// max ‖wp − pw‖ over projections p of the masa; half of it is a lower
    /// bound.
    pub commutator_bound: f64,
    /// Whether every projection was enumerated. When false only minimal
    /// projections were tried and the bound is itself a lower bound.
    pub exhaustive: bool,
}

pub fn masa_distance(w: &CMatrix, masa: &MasaPartition) -> Result<MasaDistance> {
    let n = masa.dim();
    w.ensure_shape((n, n))?;
    let estimate = (w - &expectation(w, masa)?).norm();
    let cells = masa.cells().len();
    let commutator = |mask: &dyn Fn(usize) -> bool| {
        CMatrix::from_fn(n, n, |i, j| {
            let (a, b) = (mask(masa.cell_of(i)), mask(masa.cell_of(j)));
            if a == b {
                ZERO
            } else if b {
                w[(i, j)]
            } else {
                -w[(i, j)]
            }
        })
        .norm()
    };
    let mut bound: f64 = 0.0;
    let exhaustive = cells <= TOL.brute_limit;
    if exhaustive {
        // p and I − p give the same commutator norm, so the last cell can be
        // left out of every subset.
        for subset in 1u64..(1u64 << (cells - 1)).max(1) {
            bound = bound.max(commutator(&|c| c + 1 < cells && subset >> c & 1 == 1));
        }
    } else {
        for cell in 0..cells {
            bound = bound.max(commutator(&|c| c == cell));
        }
    }
    Ok(MasaDistance {
        estimate,
        commutator_bound: bound,
        exhaustive,
    })
}

/// Generator-level containment defect: max over units g of dist(g, span of
/// the target pattern).
pub fn containment_defect(gens: &MatrixUnitSystem, target: &IncidencePattern) -> Result<DistanceEstimate> {
    if gens.ambient_dim() != target.dim() {
        return Err(Error::dims(
            (target.dim(), target.dim()),
            (gens.ambient_dim(), gens.ambient_dim()),
        ));
    }
    let chain = target.as_nest();
    let mut worst: f64 = 0.0;
    for (_, g) in gens.units() {
        let d = match &chain {
            Some(c) => chain_distance(g, c),
            None => target.truncation_distance(g),
        };
        worst = worst.max(d);
    }
    Ok(DistanceEstimate {
        value: worst,
        exact: chain.is_some(),
    })
}

/// max over minimal projections e of the masa of the distance estimates of
/// v·e·v* and v*·e·v from the masa.
pub fn normalizer_defect(v: &CMatrix, masa: &MasaPartition) -> Result<f64> {
    let n = masa.dim();
    v.ensure_shape((n, n))?;
    let mut worst: f64 = 0.0;
    for cell in masa.cells() {
        let right = v.select(&(0..n).collect::<Vec<_>>(), cell);
        let left = v.adjoint().select(&(0..n).collect::<Vec<_>>(), cell);
        for x in [right.mul_adjoint(&right), left.mul_adjoint(&left)] {
            worst = worst.max((&x - &expectation(&x, masa)?).norm());
        }
    }
    Ok(worst)
}

/// Defects of one generator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratorDefect {
    /// 0-based source pair.
    pub pair: (usize, usize),
    pub pisometry_defect: f64,
    pub normalizer_defect: f64,
    pub containment_defect: f64,
}

/// Worst-case defects of a unit system against a target pattern and masa.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DefectReport {
    pub pisometry_defect: f64,
    pub normalizer_defect: f64,
    pub containment_defect: f64,
    /// Containment is exact for nest targets, a truncation upper bound
    /// otherwise.
    pub containment_exact: bool,
    /// Normalizer defects are measured on minimal projections only.
    pub normalizer_minimal_projections_only: bool,
    pub per_generator: Vec<GeneratorDefect>,
}

impl DefectReport {
    pub fn measure(sys: &MatrixUnitSystem, target: &IncidencePattern, masa: &MasaPartition) -> Result<Self> {
        let chain = target.as_nest();
        let mut per_generator = Vec::new();
        for (&pair, g) in sys.units() {
            let containment = match &chain {
                Some(c) => chain_distance(g, c),
                None => target.truncation_distance(g),
            };
            per_generator.push(GeneratorDefect {
                pair,
                pisometry_defect: g.pisometry_defect(),
                normalizer_defect: normalizer_defect(g, masa)?,
                containment_defect: containment,
            });
        }
        let max = |f: fn(&GeneratorDefect) -> f64| per_generator.iter().map(f).fold(0.0, f64::max);
        Ok(Self {
            pisometry_defect: max(|g| g.pisometry_defect),
            normalizer_defect: max(|g| g.normalizer_defect),
            containment_defect: max(|g| g.containment_defect),
            containment_exact: chain.is_some(),
            normalizer_minimal_projections_only: true,
            per_generator,
        })
    }
}
