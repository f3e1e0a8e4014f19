//! Groupoid words and mapping-class loops.

use super::{flip, permute, Frame, LabeledTriangulation, Permutation, TriangulationError};

/// An elementary move between labeled triangulations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    /// Flip of the arc with this (0-based) label.
    Flip(usize),
    /// Relabeling `i ↦ σ(i)`.
    Permute(Permutation),
}

/// A sequence of moves starting at a labeled triangulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidWord {
    pub start: LabeledTriangulation,
    pub moves: Vec<Move>,
}

impl GroupoidWord {
    /// The empty word at `start`.
    pub fn empty(start: LabeledTriangulation) -> Self {
        GroupoidWord {
            start,
            moves: Vec::new(),
        }
    }

    /// Every triangulation visited, starting with `start`; fails at the first
    /// illegal flip.
    pub fn trajectory(&self) -> Result<Vec<LabeledTriangulation>, TriangulationError> {
        let mut out = vec![self.start.clone()];
        for mv in &self.moves {
            let cur = out.last().expect("non-empty");
            let next = match mv {
                Move::Flip(k) => flip(cur, *k)?,
                Move::Permute(s) => {
                    if s.len() != cur.arc_count() {
                        return Err(TriangulationError::BadPermutation(format!(
                            "permutation of {} points on a surface with {} arcs",
                            s.len(),
                            cur.arc_count()
                        )));
                    }
                    permute(cur, s)
                }
            };
            out.push(next);
        }
        Ok(out)
    }

    /// The triangulation reached at the end of the word.
    pub fn end(&self) -> Result<LabeledTriangulation, TriangulationError> {
        Ok(self.trajectory()?.pop().expect("non-empty"))
    }

    /// The end frame (c-vectors relative to `start`).
    pub fn end_frame(&self) -> Result<Frame, TriangulationError> {
        let mut f = Frame::base(self.start.clone());
        for mv in &self.moves {
            f = match mv {
                Move::Flip(k) => f.flip(*k)?,
                Move::Permute(s) => f.permute(s),
            };
        }
        Ok(f)
    }

    /// Appends the moves of `other`, which must start where `self` ends.
    pub fn concat(&self, other: &GroupoidWord) -> Result<GroupoidWord, TriangulationError> {
        if self.end()? != other.start {
            return Err(TriangulationError::Format(
                "concatenated words do not meet".into(),
            ));
        }
        let mut moves = self.moves.clone();
        moves.extend(other.moves.iter().cloned());
        Ok(GroupoidWord {
            start: self.start.clone(),
            moves,
        })
    }

    /// The inverse word, running from `end()` back to `start`.
    pub fn inverse(&self) -> Result<GroupoidWord, TriangulationError> {
        let end = self.end()?;
        let moves = self
            .moves
            .iter()
            .rev()
            .map(|mv| match mv {
                Move::Flip(k) => Move::Flip(*k),
                Move::Permute(s) => Move::Permute(s.inverse()),
            })
            .collect();
        Ok(GroupoidWord { start: end, moves })
    }

    /// Cancels adjacent inverse pairs (`μ_k μ_k`, `P_σ P_σ⁻¹`), merges
    /// adjacent permutations and drops identity permutations.
    pub fn simplified(&self) -> GroupoidWord {
        let mut out: Vec<Move> = Vec::with_capacity(self.moves.len());
        for mv in &self.moves {
            match (out.last(), mv) {
                (Some(Move::Flip(a)), Move::Flip(b)) if a == b => {
                    out.pop();
                }
                (Some(Move::Permute(p)), Move::Permute(q)) => {
                    let merged = q.compose(p);
                    out.pop();
                    if !merged.is_identity() {
                        out.push(Move::Permute(merged));
                    }
                }
                (_, Move::Permute(q)) if q.is_identity() => {}
                _ => out.push(mv.clone()),
            }
        }
        GroupoidWord {
            start: self.start.clone(),
            moves: out,
        }
    }
}

/// A word whose end is identified with its start by a relabeling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MappingClassLoop {
    pub word: GroupoidWord,
    /// Relabeling `σ` with `permute(word.end(), σ) == word.start`; `None`
    /// means the identity.
    pub closing_iso: Option<Permutation>,
}

impl MappingClassLoop {
    /// The word with the closing relabeling appended as a final move, so that
    /// it ends exactly at its start triangulation.
    pub fn closed_word(&self) -> GroupoidWord {
        let mut w = self.word.clone();
        if let Some(s) = &self.closing_iso {
            w.moves.push(Move::Permute(s.clone()));
        }
        w
    }
}

/// `true` iff the closing relabeling maps `word.end()` onto `word.start`.
pub fn verify_loop(lp: &MappingClassLoop) -> bool {
    let Ok(end) = lp.word.end() else {
        return false;
    };
    match &lp.closing_iso {
        None => end == lp.word.start,
        Some(s) => s.len() == end.arc_count() && permute(&end, s) == lp.word.start,
    }
}
