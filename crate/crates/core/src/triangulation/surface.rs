//! Surfaces, labeled triangulations, flips and exchange matrices.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Permutation, TriangulationError};
use crate::IntMatrix;

/// A side slot: `(triangle index, side index in 0..3)`.
pub type Slot = (usize, usize);

/// Genus and number of punctures of a closed oriented surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SurfaceSignature {
    pub genus: usize,
    pub punctures: usize,
}

impl SurfaceSignature {
    /// Validates `punctures ≥ 1` and `2 − 2g − n < 0`.
    pub fn new(genus: usize, punctures: usize) -> Result<Self, TriangulationError> {
        let sig = SurfaceSignature { genus, punctures };
        if punctures == 0 || sig.euler_characteristic() >= 0 {
            return Err(TriangulationError::BadSignature { genus, punctures });
        }
        Ok(sig)
    }

    /// `2 − 2g − n`.
    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.punctures as i64
    }

    /// `6g − 6 + 3n`.
    pub fn arc_count(&self) -> usize {
        (6 * self.genus as i64 - 6 + 3 * self.punctures as i64) as usize
    }

    /// `4g − 4 + 2n`.
    pub fn triangle_count(&self) -> usize {
        (4 * self.genus as i64 - 4 + 2 * self.punctures as i64) as usize
    }

    /// `6g − 6 + 2n`, the number of non-pivot arcs in the constrained
    /// representation.
    pub fn reduced_arc_count(&self) -> usize {
        self.arc_count() - self.punctures
    }
}

/// A labeled ideal triangulation in canonical form.
///
/// Each triangle is the counterclockwise triple of its arc labels, rotated so
/// that the smallest label comes first; the triangles are sorted. Side `s` of
/// a triangle runs from corner `s − 1` to corner `s`, so corner `s` sits
/// between side `s` (counterclockwise-previous) and side `s + 1`
/// (counterclockwise-next).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledTriangulation {
    signature: SurfaceSignature,
    triangles: Vec<[usize; 3]>,
}

impl LabeledTriangulation {
    /// Builds a triangulation from counterclockwise arc triples.
    ///
    /// Every arc of `0..arc_count` must occur exactly twice, in two distinct
    /// triangles, and the corner cycles must number exactly `punctures`.
    pub fn from_triangles(
        signature: SurfaceSignature,
        triangles: Vec<[usize; 3]>,
    ) -> Result<Self, TriangulationError> {
        let signature = SurfaceSignature::new(signature.genus, signature.punctures)?;
        let m = signature.arc_count();
        if triangles.len() != signature.triangle_count() {
            return Err(TriangulationError::WrongArcCount {
                expected: m,
                found: 3 * triangles.len() / 2,
            });
        }
        let mut count = vec![0usize; m];
        for (t, tri) in triangles.iter().enumerate() {
            for s in 0..3 {
                let a = tri[s];
                if a >= m {
                    return Err(TriangulationError::BadLabels(format!(
                        "arc {a} out of range 0..{m}"
                    )));
                }
                if tri[(s + 1) % 3] == a {
                    return Err(TriangulationError::SelfFoldedTriangle {
                        triangle: t,
                        arc: a,
                    });
                }
                count[a] += 1;
            }
        }
        if let Some(a) = count.iter().position(|&c| c != 2) {
            return Err(TriangulationError::BadGluing(format!(
                "arc {a} has {} sides instead of 2",
                count[a]
            )));
        }
        let tri = LabeledTriangulation {
            signature,
            triangles: canonicalize(triangles),
        };
        let cycles = tri.corner_cycles().len();
        if cycles != signature.punctures {
            return Err(TriangulationError::EulerMismatch {
                corner_cycles: cycles,
                punctures: signature.punctures,
            });
        }
        Ok(tri)
    }

    /// Internal constructor for triples already known to be valid.
    pub(crate) fn from_valid(signature: SurfaceSignature, triangles: Vec<[usize; 3]>) -> Self {
        LabeledTriangulation {
            signature,
            triangles: canonicalize(triangles),
        }
    }

    /// The surface.
    pub fn signature(&self) -> SurfaceSignature {
        self.signature
    }

    /// Canonical counterclockwise arc triples.
    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// Number of arcs.
    pub fn arc_count(&self) -> usize {
        self.signature.arc_count()
    }

    /// The arc on a side slot.
    pub fn arc_at(&self, (t, s): Slot) -> usize {
        self.triangles[t][s]
    }

    /// For each arc, its two side slots in increasing order.
    pub fn arc_slots(&self) -> Vec<[Slot; 2]> {
        let mut slots: Vec<Vec<Slot>> = vec![Vec::with_capacity(2); self.arc_count()];
        for (t, tri) in self.triangles.iter().enumerate() {
            for (s, &a) in tri.iter().enumerate() {
                slots[a].push((t, s));
            }
        }
        slots.into_iter().map(|v| [v[0], v[1]]).collect()
    }

    /// The gluing involution on side slots.
    pub fn glue(&self, slot: Slot) -> Slot {
        let a = self.arc_at(slot);
        for (t, tri) in self.triangles.iter().enumerate() {
            for (s, &b) in tri.iter().enumerate() {
                if b == a && (t, s) != slot {
                    return (t, s);
                }
            }
        }
        unreachable!("every arc has two sides")
    }

    /// Corner cycles (punctures), each listed from its smallest corner and
    /// ordered by that corner. Corner `(t, s)` lies between sides `s` and
    /// `s + 1` of triangle `t`.
    pub fn corner_cycles(&self) -> Vec<Vec<Slot>> {
        let slots = self.arc_slots();
        let other = |(t, s): Slot| -> Slot {
            let [p, q] = slots[self.triangles[t][s]];
            if p == (t, s) {
                q
            } else {
                p
            }
        };
        let mut seen = vec![[false; 3]; self.triangles.len()];
        let mut cycles = Vec::new();
        for t in 0..self.triangles.len() {
            for s in 0..3 {
                if seen[t][s] {
                    continue;
                }
                let mut cycle = Vec::new();
                let mut c = (t, s);
                while !seen[c.0][c.1] {
                    seen[c.0][c.1] = true;
                    cycle.push(c);
                    // The next side counterclockwise is glued, reversed, to a
                    // side that ends at the same puncture.
                    c = other((c.0, (c.1 + 1) % 3));
                }
                cycles.push(cycle);
            }
        }
        cycles
    }

    /// Notes about inputs outside the main scope (currently `n = 1`).
    pub fn warnings(&self) -> Vec<String> {
        if self.signature.punctures == 1 {
            vec!["once-punctured surface: combinatorics are supported, but representation suites assume at least two punctures".into()]
        } else {
            Vec::new()
        }
    }
}

fn canonicalize(mut triangles: Vec<[usize; 3]>) -> Vec<[usize; 3]> {
    for tri in &mut triangles {
        let r = (0..3).min_by_key(|&i| tri[i]).expect("three sides");
        tri.rotate_left(r);
    }
    triangles.sort_unstable();
    triangles
}

/// Builds and validates a triangulation from an explicit gluing.
///
/// `gluing` lists glued pairs of side slots; `labels` maps one slot of each
/// glued pair (either one) to its 0-based arc label. The resulting triangles
/// are renumbered into canonical order.
pub fn build_triangulation(
    signature: SurfaceSignature,
    triangle_count: usize,
    gluing: &[(Slot, Slot)],
    labels: &BTreeMap<Slot, usize>,
) -> Result<LabeledTriangulation, TriangulationError> {
    let signature = SurfaceSignature::new(signature.genus, signature.punctures)?;
    let mut partner: Vec<[Option<Slot>; 3]> = vec![[None; 3]; triangle_count];
    for &(a, b) in gluing {
        for x in [a, b] {
            if x.0 >= triangle_count || x.1 >= 3 {
                return Err(TriangulationError::BadGluing(format!(
                    "slot {x:?} out of range"
                )));
            }
        }
        if a == b {
            return Err(TriangulationError::BadGluing(format!(
                "slot {a:?} glued to itself"
            )));
        }
        for (x, y) in [(a, b), (b, a)] {
            if partner[x.0][x.1].is_some() {
                return Err(TriangulationError::BadGluing(format!(
                    "slot {x:?} glued twice"
                )));
            }
            partner[x.0][x.1] = Some(y);
        }
    }
    if let Some(t) = partner.iter().position(|p| p.iter().any(Option::is_none)) {
        return Err(TriangulationError::BadGluing(format!(
            "triangle {t} has an unglued side"
        )));
    }
    let expected = signature.arc_count();
    if gluing.len() != expected || triangle_count != signature.triangle_count() {
        return Err(TriangulationError::WrongArcCount {
            expected,
            found: gluing.len(),
        });
    }

    let mut arc_of = vec![[usize::MAX; 3]; triangle_count];
    let mut used = vec![false; expected];
    for (&slot, &label) in labels {
        if slot.0 >= triangle_count || slot.1 >= 3 {
            return Err(TriangulationError::BadLabels(format!(
                "label key {slot:?} is not a slot"
            )));
        }
        if label >= expected || used[label] {
            return Err(TriangulationError::BadLabels(format!(
                "label {label} out of range or repeated"
            )));
        }
        let other = partner[slot.0][slot.1].expect("glued");
        if arc_of[slot.0][slot.1] != usize::MAX {
            return Err(TriangulationError::BadLabels(format!(
                "arc through {slot:?} labeled twice"
            )));
        }
        used[label] = true;
        arc_of[slot.0][slot.1] = label;
        arc_of[other.0][other.1] = label;
    }
    if labels.len() != expected {
        return Err(TriangulationError::BadLabels(format!(
            "{} labels for {expected} arcs",
            labels.len()
        )));
    }
    for (t, tri) in arc_of.iter().enumerate() {
        for s in 0..3 {
            if tri[s] == tri[(s + 1) % 3] {
                return Err(TriangulationError::SelfFoldedTriangle {
                    triangle: t,
                    arc: tri[s],
                });
            }
        }
    }
    LabeledTriangulation::from_triangles(signature, arc_of)
}

/// Skew-symmetric exchange matrix together with the valence matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExchangeMatrix {
    /// `ε_ij = a_ij − a_ji`, indexed by arcs.
    pub eps: IntMatrix,
    /// `v_{i,p}`: how many ends of arc `i` sit at puncture `p`.
    pub valences: IntMatrix,
}

impl ExchangeMatrix {
    /// Number of arcs.
    pub fn arc_count(&self) -> usize {
        self.eps.len()
    }

    /// Number of punctures.
    pub fn puncture_count(&self) -> usize {
        self.valences.first().map_or(0, Vec::len)
    }

    /// Valence vector of puncture `p`.
    pub fn valence_column(&self, p: usize) -> Vec<i64> {
        self.valences.iter().map(|row| row[p]).collect()
    }
}

/// Exchange matrix and valences of `t`.
///
/// `a_ij` counts corners whose counterclockwise-previous side lies on arc `i`
/// and counterclockwise-next side on arc `j`.
pub fn exchange_matrix(t: &LabeledTriangulation) -> ExchangeMatrix {
    let m = t.arc_count();
    let mut eps = vec![vec![0i64; m]; m];
    for tri in t.triangles() {
        for s in 0..3 {
            let (i, j) = (tri[s], tri[(s + 1) % 3]);
            eps[i][j] += 1;
            eps[j][i] -= 1;
        }
    }
    let cycles = t.corner_cycles();
    let mut valences = vec![vec![0i64; cycles.len()]; m];
    for (p, cycle) in cycles.iter().enumerate() {
        for &corner in cycle {
            valences[t.arc_at(corner)][p] += 1;
        }
    }
    ExchangeMatrix { eps, valences }
}

/// Flips arc `k`: the diagonal of the quadrilateral formed by the two
/// triangles adjacent to `k` is replaced by the other diagonal, which keeps
/// the label `k`.
pub fn flip(
    t: &LabeledTriangulation,
    k: usize,
) -> Result<LabeledTriangulation, TriangulationError> {
    let m = t.arc_count();
    if k >= m {
        return Err(TriangulationError::ArcOutOfRange { arc: k, count: m });
    }
    let [(t1, s1), (t2, s2)] = t.arc_slots()[k];
    if t1 == t2 {
        return Err(TriangulationError::IllegalFlip {
            arc: k,
            reason: "both sides of the arc lie in one triangle".into(),
        });
    }
    let tr = t.triangles();
    let (a, b) = (tr[t1][(s1 + 1) % 3], tr[t1][(s1 + 2) % 3]);
    let (c, d) = (tr[t2][(s2 + 1) % 3], tr[t2][(s2 + 2) % 3]);
    if a == d || b == c {
        return Err(TriangulationError::IllegalFlip {
            arc: k,
            reason: "the flipped diagonal would bound a self-folded triangle".into(),
        });
    }
    let mut out: Vec<[usize; 3]> = tr.to_vec();
    out[t1] = [k, d, a];
    out[t2] = [k, b, c];
    Ok(LabeledTriangulation::from_valid(t.signature(), out))
}

/// Relabels arcs: the arc labeled `i` becomes `σ(i)`.
pub fn permute(t: &LabeledTriangulation, sigma: &Permutation) -> LabeledTriangulation {
    assert_eq!(
        sigma.len(),
        t.arc_count(),
        "permutation size differs from arc count"
    );
    let out = t
        .triangles()
        .iter()
        .map(|tri| tri.map(|a| sigma.apply(a)))
        .collect();
    LabeledTriangulation::from_valid(t.signature(), out)
}

/// Matrix mutation at `k`: `ε'_ij = −ε_ij` if `k ∈ {i, j}`, otherwise
/// `ε_ij + [ε_ik]_+[ε_kj]_+ − [−ε_ik]_+[−ε_kj]_+`.
pub fn mutate_exchange(eps: &IntMatrix, k: usize) -> IntMatrix {
    super::mutate_extended(eps, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere3() -> LabeledTriangulation {
        LabeledTriangulation::from_triangles(
            SurfaceSignature::new(0, 3).unwrap(),
            vec![[0, 1, 2], [0, 2, 1]],
        )
        .unwrap()
    }

    #[test]
    fn signature_counts() {
        let s = SurfaceSignature::new(1, 2).unwrap();
        assert_eq!(
            (s.arc_count(), s.triangle_count(), s.reduced_arc_count()),
            (6, 4, 4)
        );
        assert!(SurfaceSignature::new(0, 2).is_err());
        assert!(SurfaceSignature::new(1, 0).is_err());
    }

    #[test]
    fn thrice_punctured_sphere_has_zero_exchange_matrix() {
        let t = sphere3();
        let e = exchange_matrix(&t);
        assert!(e.eps.iter().flatten().all(|&x| x == 0));
        assert_eq!(e.puncture_count(), 3);
        for row in &e.valences {
            assert_eq!(row.iter().sum::<i64>(), 2);
        }
    }

    #[test]
    fn gluing_with_fixed_point_is_rejected() {
        let sig = SurfaceSignature::new(0, 3).unwrap();
        let gluing = [((0, 0), (0, 0)), ((0, 1), (1, 2)), ((0, 2), (1, 1))];
        let labels = BTreeMap::from([((0, 0), 0), ((0, 1), 1), ((0, 2), 2)]);
        assert!(matches!(
            build_triangulation(sig, 2, &gluing, &labels),
            Err(TriangulationError::BadGluing(_))
        ));
    }

    #[test]
    fn self_folded_gluing_is_rejected() {
        let sig = SurfaceSignature::new(0, 3).unwrap();
        let gluing = [((0, 0), (0, 1)), ((0, 2), (1, 0)), ((1, 1), (1, 2))];
        let labels = BTreeMap::from([((0, 0), 0), ((0, 2), 1), ((1, 1), 2)]);
        assert!(matches!(
            build_triangulation(sig, 2, &gluing, &labels),
            Err(TriangulationError::SelfFoldedTriangle { .. })
        ));
    }

    #[test]
    fn explicit_gluing_matches_triples() {
        let sig = SurfaceSignature::new(0, 3).unwrap();
        let gluing = [((0, 0), (1, 0)), ((0, 1), (1, 2)), ((0, 2), (1, 1))];
        let labels = BTreeMap::from([((0, 0), 0), ((1, 2), 1), ((0, 2), 2)]);
        assert_eq!(
            build_triangulation(sig, 2, &gluing, &labels).unwrap(),
            sphere3()
        );
    }

    #[test]
    fn wrong_arc_count_is_reported() {
        let sig = SurfaceSignature::new(0, 4).unwrap();
        let gluing = [((0, 0), (1, 0)), ((0, 1), (1, 2)), ((0, 2), (1, 1))];
        let labels = BTreeMap::from([((0, 0), 0), ((0, 1), 1), ((0, 2), 2)]);
        assert!(matches!(
            build_triangulation(sig, 2, &gluing, &labels),
            Err(TriangulationError::WrongArcCount { .. })
        ));
    }

    #[test]
    fn genus_mismatch_is_an_euler_mismatch() {
        // Two triangles with equal cyclic order glue to a once-punctured
        // torus, which has one corner cycle, not three.
        let sig = SurfaceSignature::new(0, 3).unwrap();
        let err =
            LabeledTriangulation::from_triangles(sig, vec![[0, 1, 2], [0, 1, 2]]).unwrap_err();
        assert_eq!(
            err,
            TriangulationError::EulerMismatch {
                corner_cycles: 1,
                punctures: 3
            }
        );
    }

    #[test]
    fn once_punctured_torus_is_accepted_with_warning() {
        let t = LabeledTriangulation::from_triangles(
            SurfaceSignature::new(1, 1).unwrap(),
            vec![[0, 1, 2], [0, 1, 2]],
        )
        .unwrap();
        assert_eq!(t.warnings().len(), 1);
        let e = exchange_matrix(&t);
        assert_eq!(e.eps[0][1], 2);
        assert_eq!(e.valences, vec![vec![2], vec![2], vec![2]]);
    }

    #[test]
    fn flip_on_sphere_is_illegal() {
        // Flipping any arc of the two-triangle sphere folds a triangle.
        let t = sphere3();
        for k in 0..3 {
            assert!(matches!(
                flip(&t, k),
                Err(TriangulationError::IllegalFlip { .. })
            ));
        }
    }

    #[test]
    fn mutation_is_an_involution() {
        let eps = vec![vec![0, 1, -1], vec![-1, 0, 2], vec![1, -2, 0]];
        for k in 0..3 {
            assert_eq!(mutate_exchange(&mutate_exchange(&eps, k), k), eps);
        }
    }

    #[test]
    fn mutation_at_isolated_index_only_flips_signs() {
        let eps = vec![vec![0, 0, 0], vec![0, 0, 3], vec![0, -3, 0]];
        assert_eq!(mutate_exchange(&eps, 0), eps);
    }
}
