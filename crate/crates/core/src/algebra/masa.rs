use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{CMatrix, ONE};

/// A sub-masa of the diagonal masa of M_N, given by the supports of its
/// minimal projections.
///
/// Cells are stored sorted and ordered by smallest member. The JSON form is
/// `{"cells": [[…], …]}` with 1-based indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MasaJson", into = "MasaJson")]
pub struct MasaPartition {
    dim: usize,
    cells: Vec<Vec<usize>>,
    cell_of: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct MasaJson {
    cells: Vec<Vec<usize>>,
}

impl TryFrom<MasaJson> for MasaPartition {
    type Error = Error;
    fn try_from(j: MasaJson) -> Result<Self> {
        let mut cells = Vec::with_capacity(j.cells.len());
        for cell in j.cells {
            if cell.contains(&0) {
                return Err(Error::Invalid("masa indices are 1-based".into()));
            }
            cells.push(cell.into_iter().map(|i| i - 1).collect());
        }
        MasaPartition::new(cells)
    }
}

impl From<MasaPartition> for MasaJson {
    fn from(m: MasaPartition) -> Self {
        MasaJson {
            cells: m.cells.iter().map(|c| c.iter().map(|i| i + 1).collect()).collect(),
        }
    }
}

impl MasaPartition {
    /// Cells must be nonempty, disjoint and cover {0, …, N−1}, where N is
    /// the total number of indices.
    pub fn new(cells: Vec<Vec<usize>>) -> Result<Self> {
        let dim: usize = cells.iter().map(Vec::len).sum();
        if dim == 0 {
            return Err(Error::Invalid("masa partition is empty".into()));
        }
        let mut cell_of = vec![usize::MAX; dim];
        let mut cells: Vec<Vec<usize>> = cells;
        for cell in &mut cells {
            if cell.is_empty() {
                return Err(Error::Invalid("masa cells must be nonempty".into()));
            }
            cell.sort_unstable();
        }
        cells.sort_by_key(|c| c[0]);
        for (k, cell) in cells.iter().enumerate() {
            for &i in cell {
                if i >= dim || cell_of[i] != usize::MAX {
                    return Err(Error::Invalid(format!(
                        "masa cells must partition 1..{dim}; index {} repeated or out of range",
                        i + 1
                    )));
                }
                cell_of[i] = k;
            }
        }
        Ok(Self { dim, cells, cell_of })
    }

    /// The full diagonal masa D_N.
    pub fn full_diagonal(dim: usize) -> Result<Self> {
        Self::new((0..dim).map(|i| vec![i]).collect())
    }

    /// The scalars C·I_N.
    pub fn trivial(dim: usize) -> Result<Self> {
        Self::new(vec![(0..dim).collect()])
    }

    /// Contiguous runs of length m: the cells {i·m, …, i·m + m − 1}.
    pub fn blocks_of(count: usize, m: usize) -> Result<Self> {
        Self::new((0..count).map(|i| (i * m..(i + 1) * m).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell_of(&self, index: usize) -> usize {
        self.cell_of[index]
    }

    /// Minimal projection onto a cell.
    pub fn cell_projection(&self, cell: usize) -> CMatrix {
        let mut p = CMatrix::zeros(self.dim, self.dim);
        for &i in &self.cells[cell] {
            p[(i, i)] = ONE;
        }
        p
    }

    /// Diagonal projection onto a union of cells.
    pub fn union_projection(&self, cells: impl IntoIterator<Item = usize>) -> CMatrix {
        let mut p = CMatrix::zeros(self.dim, self.dim);
        for c in cells {
            for &i in &self.cells[c] {
                p[(i, i)] = ONE;
            }
        }
        p
    }

    /// True if x is diagonal and constant on every cell, up to `tol`.
    pub fn contains(&self, x: &CMatrix, tol: f64) -> bool {
        let n = self.dim;
        if x.shape() != (n, n) {
            return false;
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && x[(i, j)].norm() > tol {
                    return false;
                }
            }
        }
        self.cells
            .iter()
            .all(|cell| cell.iter().all(|&i| (x[(i, i)] - x[(cell[0], cell[0])]).norm() <= tol))
    }
}
