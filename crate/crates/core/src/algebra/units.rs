use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::pattern::IncidencePattern;
use crate::error::{Error, Result};
use crate::numkernel::{exp_skew, CMatrix, C64, ONE};

/// Matrices {f_ij} indexed by the pairs of a pattern, living in M_n.
///
/// The matrix unit relations f_ij f_kl = δ_jk f_il and f_ij* = f_ji are not
/// enforced on construction; [`matrix_unit_residual`] measures them.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixUnitSystem {
    pattern: IncidencePattern,
    ambient_dim: usize,
    units: BTreeMap<(usize, usize), CMatrix>,
}

impl MatrixUnitSystem {
    /// Requires exactly one n×n matrix per pattern pair.
    pub fn new(
        pattern: IncidencePattern,
        ambient_dim: usize,
        units: BTreeMap<(usize, usize), CMatrix>,
    ) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::Invalid("ambient dimension must be positive".into()));
        }
        for (i, j) in pattern.pairs() {
            let u = units.get(&(i, j)).ok_or_else(|| {
                Error::Invalid(format!("missing unit for pair ({}, {})", i + 1, j + 1))
            })?;
            u.ensure_shape((ambient_dim, ambient_dim))?;
            u.ensure_finite()?;
        }
        if let Some(&(i, j)) = units.keys().find(|&&(i, j)| i >= pattern.dim() || j >= pattern.dim() || !pattern.contains(i, j)) {
            return Err(Error::Invalid(format!("unit ({}, {}) is not in the pattern", i + 1, j + 1)));
        }
        Ok(Self {
            pattern,
            ambient_dim,
            units,
        })
    }

    /// The canonical units e_ij of M_N for the pattern's pairs.
    pub fn canonical(pattern: &IncidencePattern) -> Self {
        Self::ampliation(pattern, 1).expect("multiplicity 1")
    }

    /// e_ij ⊗ I_m in M_{N·m}, coordinates (i, a) ↦ i·m + a.
    pub fn ampliation(pattern: &IncidencePattern, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Invalid("multiplicity must be positive".into()));
        }
        let n = pattern.dim() * m;
        let units = pattern
            .pairs()
            .map(|(i, j)| {
                let mut e = CMatrix::zeros(n, n);
                for a in 0..m {
                    e[(i * m + a, j * m + a)] = ONE;
                }
                ((i, j), e)
            })
            .collect();
        Ok(Self {
            pattern: pattern.clone(),
            ambient_dim: n,
            units,
        })
    }

    pub fn pattern(&self) -> &IncidencePattern {
        &self.pattern
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn unit(&self, i: usize, j: usize) -> &CMatrix {
        &self.units[&(i, j)]
    }

    pub fn units(&self) -> impl Iterator<Item = (&(usize, usize), &CMatrix)> {
        self.units.iter()
    }

    /// u·f_ij·u* for every unit.
    pub fn conjugate(&self, u: &CMatrix) -> Self {
        self.map(|_, f| u.matmul(f).mul_adjoint(u))
    }

    pub fn map(&self, mut f: impl FnMut((usize, usize), &CMatrix) -> CMatrix) -> Self {
        Self {
            pattern: self.pattern.clone(),
            ambient_dim: self.ambient_dim,
            units: self.units.iter().map(|(&k, v)| (k, f(k, v))).collect(),
        }
    }

    /// max over pairs of ‖f_ij − g_ij‖.
    pub fn distance(&self, other: &MatrixUnitSystem) -> Result<f64> {
        if self.pattern != other.pattern || self.ambient_dim != other.ambient_dim {
            return Err(Error::Invalid("unit systems have different patterns or ambient dimensions".into()));
        }
        Ok(self
            .units
            .iter()
            .map(|(k, v)| v.dist(&other.units[k]))
            .fold(0.0, f64::max))
    }

    /// Linear extension Σ a_ij f_ij; entries of `a` outside the pattern are
    /// ignored.
    pub fn apply(&self, a: &CMatrix) -> Result<CMatrix> {
        a.ensure_shape((self.pattern.dim(), self.pattern.dim()))?;
        let n = self.ambient_dim;
        let mut out = CMatrix::zeros(n, n);
        for (&(i, j), f) in &self.units {
            let c = a[(i, j)];
            if c != crate::numkernel::ZERO {
                out = &out + &f.scale(c);
            }
        }
        Ok(out)
    }

    /// JSON bundle `{"pattern": …, "ambient_dim": n, "units": {"i,j": matrix}}`
    /// with 1-based keys.
    pub fn to_json(&self) -> String {
        let mut out = String::new();
        let pattern = serde_json::to_string(&self.pattern).expect("pattern serializes");
        let _ = write!(out, "{{\"pattern\": {pattern}, \"ambient_dim\": {}, \"units\": {{", self.ambient_dim);
        for (k, (&(i, j), m)) in self.units.iter().enumerate() {
            if k > 0 {
                out.push_str(", ");
            }
            let _ = write!(out, "\"{},{}\": {}", i + 1, j + 1, m.to_json());
        }
        out.push_str("}}");
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(text)?;
        let pattern: IncidencePattern = serde_json::from_value(
            v.get("pattern")
                .cloned()
                .ok_or_else(|| Error::Invalid("bundle lacks `pattern`".into()))?,
        )?;
        let ambient_dim = v
            .get("ambient_dim")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::Invalid("bundle lacks `ambient_dim`".into()))? as usize;
        let raw = v
            .get("units")
            .and_then(|x| x.as_object())
            .ok_or_else(|| Error::Invalid("bundle lacks `units`".into()))?;
        let mut units = BTreeMap::new();
        for (key, m) in raw {
            let (i, j) = parse_key(key)?;
            let m: crate::numkernel::MatrixJson = serde_json::from_value(m.clone())?;
            units.insert((i, j), m.into_matrix()?);
        }
        Self::new(pattern, ambient_dim, units)
    }
}

fn parse_key(key: &str) -> Result<(usize, usize)> {
    let bad = || Error::Invalid(format!("bad unit key `{key}`, expected \"i,j\" (1-based)"));
    let (a, b) = key.split_once(',').ok_or_else(bad)?;
    let i: usize = a.trim().parse().map_err(|_| bad())?;
    let j: usize = b.trim().parse().map_err(|_| bad())?;
    if i == 0 || j == 0 {
        return Err(bad());
    }
    Ok((i - 1, j - 1))
}

/// max over stored pairs of ‖f_ij f_kl − δ_jk f_il‖ and ‖f_ij* − f_ji‖.
pub fn matrix_unit_residual(sys: &MatrixUnitSystem) -> f64 {
    let mut worst: f64 = 0.0;
    for (&(i, j), f) in &sys.units {
        if let Some(g) = sys.units.get(&(j, i)) {
            worst = worst.max(f.adjoint().dist(g));
        }
        for (&(k, l), g) in &sys.units {
            let prod = f.matmul(g);
            let r = if j == k {
                match sys.units.get(&(i, l)) {
                    Some(h) => prod.dist(h),
                    None => prod.norm(),
                }
            } else {
                prod.norm()
            };
            worst = worst.max(r);
        }
    }
    worst
}

/// A star-extendible map, represented by the images of the canonical matrix
/// units of its source pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct StarEmbedding {
    source: MatrixUnitSystem,
    images: MatrixUnitSystem,
}

impl StarEmbedding {
    pub fn new(images: MatrixUnitSystem) -> Self {
        Self {
            source: MatrixUnitSystem::canonical(images.pattern()),
            images,
        }
    }

    pub fn source(&self) -> &MatrixUnitSystem {
        &self.source
    }

    pub fn images(&self) -> &MatrixUnitSystem {
        &self.images
    }

    pub fn pattern(&self) -> &IncidencePattern {
        self.images.pattern()
    }

    pub fn ambient_dim(&self) -> usize {
        self.images.ambient_dim()
    }

    pub fn image(&self, i: usize, j: usize) -> &CMatrix {
        self.images.unit(i, j)
    }

    /// max over source units of ‖φ(e_ij) − ψ(e_ij)‖.
    pub fn distance(&self, other: &StarEmbedding) -> Result<f64> {
        self.images.distance(&other.images)
    }

    pub fn into_images(self) -> MatrixUnitSystem {
        self.images
    }
}

/// exp(k) with k skew-Hermitian, Gaussian direction and ‖k‖ = epsilon.
pub fn random_near_identity_unitary(n: usize, epsilon: f64, rng: &mut ChaCha8Rng) -> CMatrix {
    if epsilon == 0.0 {
        return CMatrix::identity(n);
    }
    let g = CMatrix::from_fn(n, n, |_, _| {
        C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    });
    let h = g.hermitian_part();
    let k = h.scale(C64::new(0.0, epsilon / h.norm()));
    exp_skew(&k).expect("i·H is skew-Hermitian")
}

/// u·(e_ij ⊗ I_m)·u* with u = exp(k), ‖k‖ = epsilon, drawn from `seed`.
pub fn random_near_identity_embedding(
    pattern: &IncidencePattern,
    multiplicity: usize,
    epsilon: f64,
    seed: u64,
) -> Result<StarEmbedding> {
    if !(epsilon >= 0.0) || !epsilon.is_finite() {
        return Err(Error::Invalid("epsilon must be a finite non-negative number".into()));
    }
    let base = MatrixUnitSystem::ampliation(pattern, multiplicity)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = random_near_identity_unitary(base.ambient_dim(), epsilon, &mut rng);
    Ok(StarEmbedding::new(base.conjugate(&u)))
}
