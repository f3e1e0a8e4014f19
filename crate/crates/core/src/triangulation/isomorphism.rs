//! Label-changing combinatorial isomorphisms between triangulations.

use std::collections::{BTreeSet, VecDeque};

use super::{permute, LabeledTriangulation, Permutation};

/// All relabelings `σ` with `permute(a, σ) == b`, in a deterministic order.
///
/// An orientation-preserving isomorphism of connected triangle complexes is
/// fixed by the image of one triangle and a rotation, so there are at most
/// `3 · triangle_count` candidates, each checked by propagation across arcs.
pub fn isomorphisms(a: &LabeledTriangulation, b: &LabeledTriangulation) -> Vec<Permutation> {
    if a.signature() != b.signature() {
        return Vec::new();
    }
    let (ta, tb) = (a.triangles(), b.triangles());
    let (sa, sb) = (a.arc_slots(), b.arc_slots());
    let m = a.arc_count();
    let mut found = BTreeSet::new();
    for start in 0..tb.len() {
        for rot in 0..3 {
            if let Some(sigma) = propagate(ta, tb, &sa, &sb, m, start, rot) {
                if permute(a, &sigma) == *b {
                    found.insert(sigma);
                }
            }
        }
    }
    found.into_iter().collect()
}

/// The first relabeling from [`isomorphisms`], preferring the identity.
pub fn find_isomorphism(a: &LabeledTriangulation, b: &LabeledTriangulation) -> Option<Permutation> {
    if a == b {
        return Some(Permutation::identity(a.arc_count()));
    }
    isomorphisms(a, b).into_iter().next()
}

/// Label permutations preserving `t`.
pub fn automorphisms(t: &LabeledTriangulation) -> Vec<Permutation> {
    isomorphisms(t, t)
}

fn propagate(
    ta: &[[usize; 3]],
    tb: &[[usize; 3]],
    sa: &[[(usize, usize); 2]],
    sb: &[[(usize, usize); 2]],
    m: usize,
    start: usize,
    rot: usize,
) -> Option<Permutation> {
    let mut sigma = vec![usize::MAX; m];
    let mut tri_map = vec![usize::MAX; ta.len()];
    let mut queue = VecDeque::from([(0usize, start, rot)]);
    tri_map[0] = start;
    while let Some((x, y, r)) = queue.pop_front() {
        for s in 0..3 {
            let (arc_a, arc_b) = (ta[x][s], tb[y][(s + r) % 3]);
            if sigma[arc_a] == usize::MAX {
                sigma[arc_a] = arc_b;
            } else if sigma[arc_a] != arc_b {
                return None;
            }
            let other_a = other(sa[arc_a], (x, s));
            let other_b = other(sb[arc_b], (y, (s + r) % 3));
            let r2 = (other_b.1 + 3 - other_a.1) % 3;
            if tri_map[other_a.0] == usize::MAX {
                tri_map[other_a.0] = other_b.0;
                queue.push_back((other_a.0, other_b.0, r2));
            } else if tri_map[other_a.0] != other_b.0 {
                return None;
            }
        }
    }
    Permutation::new(sigma).ok()
}

fn other(pair: [(usize, usize); 2], me: (usize, usize)) -> (usize, usize) {
    if pair[0] == me {
        pair[1]
    } else {
        pair[0]
    }
}
