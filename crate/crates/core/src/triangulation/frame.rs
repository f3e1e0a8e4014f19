//! Triangulations decorated with c-vectors relative to a base triangulation.
//!
//! The combinatorial encoding identifies triangulations that differ by a
//! mapping class. To tell two labeled triangulations apart as isotopy classes
//! (the objects of the Ptolemy groupoid) we carry, next to the triangulation,
//! the bottom block `C` of the principal-coefficient extended exchange matrix
//! `[εᵀ; I]`, mutated along every flip. Column `k` of `C` is the c-vector of
//! arc `k`; its sign (c-vectors are sign-coherent) selects the tropical branch
//! of the flip's linear part.

use super::{
    exchange_matrix, flip, permute, LabeledTriangulation, Permutation, TriangulationError,
};
use crate::IntMatrix;

/// Matrix mutation of an extended `r × m` matrix at column `k < m`:
/// `b'_ij = −b_ij` if `i = k` or `j = k`, otherwise
/// `b_ij + [b_ik]_+[b_kj]_+ − [−b_ik]_+[−b_kj]_+`.
///
/// Rows `0..m` form the principal (square) part; further rows are
/// coefficient rows.
pub fn mutate_extended(b: &IntMatrix, k: usize) -> IntMatrix {
    let pos = |x: i64| x.max(0);
    let mut out = b.clone();
    for (i, row) in b.iter().enumerate() {
        for j in 0..row.len() {
            out[i][j] = if i == k || j == k {
                -row[j]
            } else {
                row[j] + pos(row[k]) * pos(b[k][j]) - pos(-row[k]) * pos(-b[k][j])
            };
        }
    }
    out
}

/// A labeled triangulation together with its c-vectors relative to a base.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Frame {
    tri: LabeledTriangulation,
    /// Rows indexed by base arcs, columns by current arcs.
    c: IntMatrix,
}

impl Frame {
    /// The base frame: `C = I`.
    pub fn base(tri: LabeledTriangulation) -> Self {
        let m = tri.arc_count();
        let c = (0..m)
            .map(|i| (0..m).map(|j| i64::from(i == j)).collect())
            .collect();
        Frame { tri, c }
    }

    /// The decorated triangulation.
    pub fn triangulation(&self) -> &LabeledTriangulation {
        &self.tri
    }

    /// The c-matrix (columns are c-vectors).
    pub fn c_matrix(&self) -> &IntMatrix {
        &self.c
    }

    /// Sign (`+1` or `−1`) of the c-vector of arc `k`.
    pub fn c_sign(&self, k: usize) -> i64 {
        let col = self.c.iter().map(|row| row[k]);
        let (mut pos, mut neg) = (false, false);
        for x in col {
            pos |= x > 0;
            neg |= x < 0;
        }
        assert!(pos != neg, "c-vector of arc {k} is not sign-coherent");
        if pos {
            1
        } else {
            -1
        }
    }

    /// Flips arc `k`, mutating the c-vectors along.
    pub fn flip(&self, k: usize) -> Result<Self, TriangulationError> {
        let tri = flip(&self.tri, k)?;
        let eps = exchange_matrix(&self.tri).eps;
        let m = eps.len();
        let mut ext: IntMatrix = (0..m)
            .map(|i| (0..m).map(|j| eps[j][i]).collect())
            .collect();
        ext.extend(self.c.iter().cloned());
        let ext = mutate_extended(&ext, k);
        Ok(Frame {
            tri,
            c: ext[m..].to_vec(),
        })
    }

    /// Relabels arcs by `σ`; the c-vector of arc `i` moves to column `σ(i)`.
    pub fn permute(&self, sigma: &Permutation) -> Self {
        let tri = permute(&self.tri, sigma);
        let mut c = self.c.clone();
        for (row, src) in c.iter_mut().zip(&self.c) {
            for (i, &x) in src.iter().enumerate() {
                row[sigma.apply(i)] = x;
            }
        }
        Frame { tri, c }
    }

    /// The relabeling `σ` with `self.permute(σ) == other`, if any.
    pub fn relabeling_to(&self, other: &Frame) -> Option<Permutation> {
        let m = self.tri.arc_count();
        if other.tri.arc_count() != m || self.tri.signature() != other.tri.signature() {
            return None;
        }
        let col = |f: &Frame, j: usize| -> Vec<i64> { f.c.iter().map(|r| r[j]).collect() };
        let mut images = Vec::with_capacity(m);
        for i in 0..m {
            let ci = col(self, i);
            images.push((0..m).find(|&j| col(other, j) == ci)?);
        }
        let sigma = Permutation::new(images).ok()?;
        (self.permute(&sigma) == *other).then_some(sigma)
    }
}
