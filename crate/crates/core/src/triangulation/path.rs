//! Breadth-first search for connecting words.
//!
//! The flip graph is infinite, so searches are capped at a maximum number of
//! flips and report the searched radius when they give up.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use super::{
    find_isomorphism, Frame, GroupoidWord, LabeledTriangulation, Move, Permutation,
    TriangulationError,
};

/// Shortest word of flips followed by one relabeling from `a` to `b`, where
/// triangulations are compared combinatorially (up to mapping class).
///
/// Flips are tried in increasing arc order, so the result is deterministic.
pub fn find_path(
    a: &LabeledTriangulation,
    b: &LabeledTriangulation,
    max_depth: usize,
) -> Result<GroupoidWord, TriangulationError> {
    if a.signature() != b.signature() {
        return Err(TriangulationError::SignatureMismatch(
            a.signature(),
            b.signature(),
        ));
    }
    bfs(
        a.clone(),
        max_depth,
        |t| find_isomorphism(t, b),
        |t, k| super::flip(t, k).ok(),
    )
    .map(|(flips, sigma)| finish(a.clone(), flips, sigma))
}

/// Shortest word from the base frame of `a` to `target`, comparing frames by
/// triangulation *and* c-vectors, that is, as labeled isotopy classes.
pub fn find_path_framed(
    a: &LabeledTriangulation,
    target: &Frame,
    max_depth: usize,
) -> Result<GroupoidWord, TriangulationError> {
    if a.signature() != target.triangulation().signature() {
        return Err(TriangulationError::SignatureMismatch(
            a.signature(),
            target.triangulation().signature(),
        ));
    }
    bfs(
        Frame::base(a.clone()),
        max_depth,
        |f| f.relabeling_to(target),
        |f, k| f.flip(k).ok(),
    )
    .map(|(flips, sigma)| finish(a.clone(), flips, sigma))
}

fn finish(start: LabeledTriangulation, flips: Vec<usize>, sigma: Permutation) -> GroupoidWord {
    let mut moves: Vec<Move> = flips.into_iter().map(Move::Flip).collect();
    if !sigma.is_identity() {
        moves.push(Move::Permute(sigma));
    }
    GroupoidWord { start, moves }
}

trait ArcCount {
    fn arcs(&self) -> usize;
}

impl ArcCount for LabeledTriangulation {
    fn arcs(&self) -> usize {
        self.arc_count()
    }
}

impl ArcCount for Frame {
    fn arcs(&self) -> usize {
        self.triangulation().arc_count()
    }
}

fn bfs<S: Clone + Eq + Hash + ArcCount>(
    start: S,
    max_depth: usize,
    matches: impl Fn(&S) -> Option<Permutation>,
    step: impl Fn(&S, usize) -> Option<S>,
) -> Result<(Vec<usize>, Permutation), TriangulationError> {
    let m = start.arcs();
    let mut parent: HashMap<S, Option<(S, usize)>> = HashMap::from([(start.clone(), None)]);
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((node, depth)) = queue.pop_front() {
        if let Some(sigma) = matches(&node) {
            let mut flips = Vec::new();
            let mut cur = node;
            while let Some(Some((prev, k))) = parent.get(&cur) {
                flips.push(*k);
                cur = prev.clone();
            }
            flips.reverse();
            return Ok((flips, sigma));
        }
        if depth == max_depth {
            continue;
        }
        for k in 0..m {
            if let Some(next) = step(&node, k) {
                if !parent.contains_key(&next) {
                    parent.insert(next.clone(), Some((node.clone(), k)));
                    queue.push_back((next, depth + 1));
                }
            }
        }
    }
    Err(TriangulationError::NotFound { radius: max_depth })
}
