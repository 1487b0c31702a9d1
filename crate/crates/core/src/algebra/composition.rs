use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{CMatrix, ONE};

/// Ordered block sizes (n₁, …, n_r) decomposing the identity of M_N.
///
/// Block i occupies the coordinates `offset(i)..offset(i + 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CompositionJson", into = "CompositionJson")]
pub struct BlockComposition {
    sizes: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct CompositionJson {
    sizes: Vec<usize>,
}

impl TryFrom<CompositionJson> for BlockComposition {
    type Error = Error;
    fn try_from(j: CompositionJson) -> Result<Self> {
        BlockComposition::new(j.sizes)
    }
}

impl From<BlockComposition> for CompositionJson {
    fn from(c: BlockComposition) -> Self {
        CompositionJson { sizes: c.sizes }
    }
}

impl BlockComposition {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::Invalid("composition needs at least one block".into()));
        }
        if sizes.contains(&0) {
            return Err(Error::Invalid("composition block sizes must be positive".into()));
        }
        Ok(Self { sizes })
    }

    /// r blocks of size 1.
    pub fn scalar(r: usize) -> Result<Self> {
        Self::new(vec![1; r])
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Number of blocks r.
    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// N = Σ nᵢ.
    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// r + 1 boundaries, starting at 0 and ending at N.
    pub fn offsets(&self) -> Vec<usize> {
        offsets(&self.sizes)
    }

    pub fn range(&self, block: usize) -> std::ops::Range<usize> {
        let start: usize = self.sizes[..block].iter().sum();
        start..start + self.sizes[block]
    }

    /// Block index of a coordinate.
    pub fn block_of(&self, index: usize) -> usize {
        let mut acc = 0;
        for (b, &s) in self.sizes.iter().enumerate() {
            acc += s;
            if index < acc {
                return b;
            }
        }
        self.sizes.len() - 1
    }

    /// Every block size multiplied by m.
    pub fn ampliate(&self, m: usize) -> Result<Self> {
        Self::new(self.sizes.iter().map(|s| s * m).collect())
    }

    /// I_{n_i}: the diagonal projection onto block i.
    pub fn block_projection(&self, block: usize) -> CMatrix {
        let n = self.total();
        let mut p = CMatrix::zeros(n, n);
        for i in self.range(block) {
            p[(i, i)] = ONE;
        }
        p
    }

    /// P_k: the diagonal projection onto the first k blocks (1 ≤ k ≤ r).
    pub fn nest_projection(&self, k: usize) -> CMatrix {
        let n = self.total();
        let end: usize = self.sizes[..k].iter().sum();
        let mut p = CMatrix::zeros(n, n);
        for i in 0..end {
            p[(i, i)] = ONE;
        }
        p
    }

    /// Largest norm of a block strictly below the block diagonal.
    pub fn subdiagonal_norm(&self, x: &CMatrix) -> f64 {
        subdiagonal_norm(x, &self.sizes, &self.sizes)
    }
}

impl FromStr for BlockComposition {
    type Err = Error;

    /// Comma-separated sizes, e.g. `2,2,2`.
    fn from_str(s: &str) -> Result<Self> {
        let sizes = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Invalid(format!("bad composition entry `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(sizes)
    }
}

impl fmt::Display for BlockComposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sizes.iter().map(|s| s.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub(crate) fn offsets(sizes: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(sizes.len() + 1);
    let mut acc = 0;
    out.push(0);
    for &s in sizes {
        acc += s;
        out.push(acc);
    }
    out
}

/// max over i > j of ‖(row block i) x (column block j)‖, for separate row
/// and column partitions.
pub(crate) fn subdiagonal_norm(x: &CMatrix, row_sizes: &[usize], col_sizes: &[usize]) -> f64 {
    let ro = offsets(row_sizes);
    let co = offsets(col_sizes);
    let mut worst: f64 = 0.0;
    for i in 0..row_sizes.len() {
        for j in 0..i.min(col_sizes.len()) {
            if row_sizes[i] == 0 || col_sizes[j] == 0 {
                continue;
            }
            let block = x.submatrix(ro[i], ro[i + 1], co[j], co[j + 1]);
            worst = worst.max(block.norm());
        }
    }
    worst
}

/// Sets every block strictly below the block diagonal to zero.
pub(crate) fn zero_subdiagonal(x: &mut CMatrix, row_sizes: &[usize], col_sizes: &[usize]) {
    let ro = offsets(row_sizes);
    let co = offsets(col_sizes);
    for i in 0..row_sizes.len() {
        for j in 0..i.min(col_sizes.len()) {
            for r in ro[i]..ro[i + 1] {
                for c in co[j]..co[j + 1] {
                    x[(r, c)] = crate::numkernel::ZERO;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_measures() {
        let c: BlockComposition = "1, 2".parse().unwrap();
        assert_eq!(c.total(), 3);
        assert_eq!(c.offsets(), vec![0, 1, 3]);
        assert_eq!(c.block_of(2), 1);
        assert_eq!(c.range(1), 1..3);
        assert!("1,0".parse::<BlockComposition>().is_err());
        assert!("".parse::<BlockComposition>().is_err());
    }

    #[test]
    fn nest_projections_increase_to_identity() {
        let c = BlockComposition::new(vec![2, 1, 3]).unwrap();
        for k in 1..c.len() {
            let (p, q) = (c.nest_projection(k), c.nest_projection(k + 1));
            assert_eq!(p.matmul(&q), p);
        }
        assert_eq!(c.nest_projection(3), CMatrix::identity(6));
    }

    #[test]
    fn json_uses_sizes_key() {
        let c = BlockComposition::new(vec![1, 2]).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"sizes":[1,2]}"#);
        assert!(serde_json::from_str::<BlockComposition>(r#"{"sizes":[]}"#).is_err());
    }
}
