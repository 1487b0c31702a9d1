use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::IncidencePattern;
use crate::error::{Error, Result};
use crate::numkernel::CMatrix;

/// A spanning forest of a digraph algebra's reduced digraph and the unique
/// path word of every matrix unit.
///
/// Letters are signed 1-based edge numbers: +k stands for the k-th edge
/// unit, −k for its adjoint. The word for (i, i) is empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeWords {
    pub digraph: IncidencePattern,
    /// Oriented edges (a, b) with e_ab in the algebra.
    pub tree_edges: Vec<(usize, usize)>,
    pub words: BTreeMap<(usize, usize), Vec<i64>>,
}

struct Components(Vec<usize>);

impl Components {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Lexicographically smallest spanning forest of the reduced digraph:
/// pairs inside an equivalence class together with the covering pairs
/// between classes.
pub fn tree_words(pattern: &IncidencePattern) -> TreeWords {
    let n = pattern.dim();
    let mut candidates: Vec<(usize, usize)> = pattern
        .pairs()
        .filter(|&(i, j)| i < j && pattern.contains(j, i))
        .collect();
    candidates.extend(pattern.covering_pairs());
    candidates.sort_unstable();

    let mut forest = Components((0..n).collect());
    let mut tree_edges = Vec::new();
    let mut adjacent: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for (a, b) in candidates {
        if forest.union(a, b) {
            tree_edges.push((a, b));
            let k = tree_edges.len() as i64;
            // Walking a → b multiplies by e_ab; walking b → a by its adjoint.
            adjacent[a].push((b, k));
            adjacent[b].push((a, -k));
        }
    }

    let mut words = BTreeMap::new();
    for start in 0..n {
        // Depth-first search from `start`; in a forest the path is unique.
        let mut path_to: Vec<Option<Vec<i64>>> = vec![None; n];
        path_to[start] = Some(Vec::new());
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            let here = path_to[x].clone().expect("visited");
            for &(y, letter) in &adjacent[x] {
                if path_to[y].is_none() {
                    let mut w = here.clone();
                    w.push(letter);
                    path_to[y] = Some(w);
                    stack.push(y);
                }
            }
        }
        for end in 0..n {
            if pattern.contains(start, end) {
                let w = path_to[end].take().expect("pattern pairs are connected in the reduced digraph");
                words.insert((start, end), w);
            }
        }
    }
    TreeWords {
        digraph: pattern.clone(),
        tree_edges,
        words,
    }
}

impl TreeWords {
    pub fn word(&self, i: usize, j: usize) -> Option<&[i64]> {
        self.words.get(&(i, j)).map(Vec::as_slice)
    }

    /// Evaluates the word of (i, j) on edge images; the empty word evaluates
    /// to `diagonal[i]`.
    pub fn evaluate(&self, i: usize, j: usize, edges: &[CMatrix], diagonal: &[CMatrix]) -> Result<CMatrix> {
        if edges.len() != self.tree_edges.len() || diagonal.len() != self.digraph.dim() {
            return Err(Error::Invalid(format!(
                "expected {} edge images and {} diagonal units",
                self.tree_edges.len(),
                self.digraph.dim()
            )));
        }
        let word = self
            .word(i, j)
            .ok_or_else(|| Error::Invalid(format!("({}, {}) is not in the pattern", i + 1, j + 1)))?;
        let mut acc = diagonal[i].clone();
        for &letter in word {
            let k = letter.unsigned_abs() as usize - 1;
            acc = if letter > 0 {
                acc.matmul(&edges[k])
            } else {
                acc.mul_adjoint(&edges[k])
            };
        }
        Ok(acc)
    }
}
