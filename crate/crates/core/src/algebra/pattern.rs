use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::composition::BlockComposition;
use crate::error::{Error, Result};
use crate::numkernel::{CMatrix, ZERO};

/// Reflexive transitive relation on {0, …, N−1}; the matrix units e_ij with
/// (i, j) in the relation span a digraph algebra.
///
/// Indices are 0-based in code and 1-based in the JSON form
/// `{"dim": N, "pairs": [[i, j], …]}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PatternJson", into = "PatternJson")]
pub struct IncidencePattern {
    dim: usize,
    adj: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct PatternJson {
    dim: usize,
    pairs: Vec<[usize; 2]>,
}

impl TryFrom<PatternJson> for IncidencePattern {
    type Error = Error;
    fn try_from(j: PatternJson) -> Result<Self> {
        let mut pairs = Vec::with_capacity(j.pairs.len());
        for [i, k] in j.pairs {
            if i == 0 || k == 0 {
                return Err(Error::Invalid("pattern indices are 1-based".into()));
            }
            pairs.push((i - 1, k - 1));
        }
        IncidencePattern::new(j.dim, pairs)
    }
}

impl From<IncidencePattern> for PatternJson {
    fn from(p: IncidencePattern) -> Self {
        PatternJson {
            dim: p.dim,
            pairs: p.pairs().map(|(i, j)| [i + 1, j + 1]).collect(),
        }
    }
}

impl IncidencePattern {
    /// Validates reflexivity and transitivity.
    pub fn new(dim: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let p = Self::raw(dim, pairs)?;
        for i in 0..dim {
            if !p.contains(i, i) {
                return Err(Error::Invalid(format!("pattern is not reflexive at {}", i + 1)));
            }
        }
        if let Some((i, j, k)) = p.transitivity_witness() {
            return Err(Error::Invalid(format!(
                "pattern is not transitive: ({}, {}) and ({}, {}) present, ({}, {}) missing",
                i + 1,
                j + 1,
                j + 1,
                k + 1,
                i + 1,
                k + 1
            )));
        }
        Ok(p)
    }

    /// Reflexive transitive closure of an arbitrary relation.
    pub fn closure(dim: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut p = Self::raw(dim, pairs)?;
        for i in 0..dim {
            p.adj[i * dim + i] = true;
        }
        for k in 0..dim {
            for i in 0..dim {
                if p.adj[i * dim + k] {
                    for j in 0..dim {
                        if p.adj[k * dim + j] {
                            p.adj[i * dim + j] = true;
                        }
                    }
                }
            }
        }
        Ok(p)
    }

    fn raw(dim: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Invalid("pattern dimension must be positive".into()));
        }
        let mut adj = vec![false; dim * dim];
        for (i, j) in pairs {
            if i >= dim || j >= dim {
                return Err(Error::Invalid(format!(
                    "pattern pair ({}, {}) outside dimension {dim}",
                    i + 1,
                    j + 1
                )));
            }
            adj[i * dim + j] = true;
        }
        Ok(Self { dim, adj })
    }

    fn transitivity_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                if i == j || !self.contains(i, j) {
                    continue;
                }
                for k in 0..n {
                    if self.contains(j, k) && !self.contains(i, k) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// M_N.
    pub fn full(dim: usize) -> Result<Self> {
        Self::new(dim, (0..dim).flat_map(|i| (0..dim).map(move |j| (i, j))))
    }

    /// The diagonal algebra D_N.
    pub fn diagonal(dim: usize) -> Result<Self> {
        Self::new(dim, (0..dim).map(|i| (i, i)))
    }

    /// Upper triangular T_N.
    pub fn upper_triangular(dim: usize) -> Result<Self> {
        Self::new(dim, (0..dim).flat_map(|i| (i..dim).map(move |j| (i, j))))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.adj[i * self.dim + j]
    }

    /// Pairs in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.dim;
        (0..n * n).filter(|&k| self.adj[k]).map(move |k| (k / n, k % n))
    }

    pub fn len(&self) -> usize {
        self.adj.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.dim).all(|i| self.contains(i, i))
    }

    pub fn is_transitive(&self) -> bool {
        self.transitivity_witness().is_none()
    }

    /// Classes of the equivalence i ~ j ⇔ (i, j) and (j, i) both present,
    /// each sorted, ordered by smallest member.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let n = self.dim;
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let class: Vec<usize> = (i..n).filter(|&j| self.contains(i, j) && self.contains(j, i)).collect();
            for &j in &class {
                seen[j] = true;
            }
            out.push(class);
        }
        out
    }

    /// Class index of every coordinate, matching [`classes`](Self::classes).
    pub fn class_index(&self) -> Vec<usize> {
        let mut idx = vec![0; self.dim];
        for (c, class) in self.classes().iter().enumerate() {
            for &i in class {
                idx[i] = c;
            }
        }
        idx
    }

    /// If the pattern is a nest algebra up to a permutation of coordinates,
    /// returns its classes in chain order (earliest first).
    pub fn as_nest(&self) -> Option<Vec<Vec<usize>>> {
        let classes = self.classes();
        let rep: Vec<usize> = classes.iter().map(|c| c[0]).collect();
        let m = classes.len();
        // Position in the chain = number of classes below.
        let mut order: Vec<(usize, usize)> = (0..m)
            .map(|a| ((0..m).filter(|&b| b != a && self.contains(rep[b], rep[a])).count(), a))
            .collect();
        order.sort();
        for (pos, &(below, _)) in order.iter().enumerate() {
            if below != pos {
                return None;
            }
        }
        for (x, &(_, a)) in order.iter().enumerate() {
            for &(_, b) in &order[x + 1..] {
                if !self.contains(rep[a], rep[b]) {
                    return None;
                }
            }
        }
        Some(order.into_iter().map(|(_, a)| classes[a].clone()).collect())
    }

    /// The block upper-triangular pattern of a composition.
    pub fn nest(comp: &BlockComposition) -> Self {
        let n = comp.total();
        let blocks: Vec<usize> = (0..n).map(|i| comp.block_of(i)).collect();
        let pairs = (0..n).flat_map(|i| (0..n).map(move |j| (i, j)));
        let mut p = Self::raw(n, std::iter::empty()).expect("positive dimension");
        for (i, j) in pairs {
            if blocks[i] <= blocks[j] {
                p.adj[i * n + j] = true;
            }
        }
        p
    }

    /// P ⊗ D_m: index (i, a) ↦ i·m + a, pairs ((i, a), (j, a)).
    pub fn tensor_diagonal(&self, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Invalid("multiplicity must be positive".into()));
        }
        let pairs: Vec<_> = self
            .pairs()
            .flat_map(|(i, j)| (0..m).map(move |a| (i * m + a, j * m + a)))
            .collect();
        Self::new(self.dim * m, pairs)
    }

    /// P ⊗ M_m: index (i, a) ↦ i·m + a, pairs ((i, a), (j, b)).
    pub fn ampliate_full(&self, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Invalid("multiplicity must be positive".into()));
        }
        let pairs: Vec<_> = self
            .pairs()
            .flat_map(|(i, j)| (0..m).flat_map(move |a| (0..m).map(move |b| (i * m + a, j * m + b))))
            .collect();
        Self::new(self.dim * m, pairs)
    }

    /// Orthogonal compression onto the span of the pattern's matrix units.
    pub fn truncate(&self, x: &CMatrix) -> CMatrix {
        let n = self.dim;
        CMatrix::from_fn(n, n, |i, j| if self.contains(i, j) { x[(i, j)] } else { ZERO })
    }

    /// ‖x − truncate(x)‖; an upper bound for the distance to the algebra.
    pub fn truncation_distance(&self, x: &CMatrix) -> f64 {
        let n = self.dim;
        CMatrix::from_fn(n, n, |i, j| if self.contains(i, j) { ZERO } else { x[(i, j)] }).norm()
    }

    /// First nonzero entry of x outside the pattern, in lexicographic order.
    pub fn first_violation(&self, x: &CMatrix) -> Option<(usize, usize)> {
        let n = self.dim;
        (0..n * n)
            .map(|k| (k / n, k % n))
            .find(|&(i, j)| !self.contains(i, j) && x[(i, j)] != ZERO)
    }

    /// Pairs (i, j) such that j covers i in the quotient order: i below j,
    /// not equivalent, and no class strictly between.
    pub fn covering_pairs(&self) -> BTreeSet<(usize, usize)> {
        let idx = self.class_index();
        let classes = self.classes();
        let m = classes.len();
        let rep: Vec<usize> = classes.iter().map(|c| c[0]).collect();
        let below = |a: usize, b: usize| a != b && self.contains(rep[a], rep[b]);
        let mut out = BTreeSet::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let (a, b) = (idx[i], idx[j]);
                if below(a, b) && !(0..m).any(|c| below(a, c) && below(c, b)) {
                    out.insert((i, j));
                }
            }
        }
        out
    }
}
