//! Mapping class group representation elements.
//!
//! A mapping class is given by a loop: a word from `Δ` to a triangulation
//! that the closing relabeling identifies with `Δ`. Its representation
//! element is the compiled closed word. Products of mapping classes are
//! formed by concatenating closed words: the second word, read from the end
//! of the first, is its translate by the first mapping class.

use serde_json::{json, Value};

use super::{compile, IntertwinerError, IntertwinerWord};
use crate::numfmt::json17;
use crate::qdilog::QDParams;
use crate::triangulation::{
    exchange_matrix, find_path_framed, verify_loop, MappingClassLoop, Permutation, WordFile,
};
use crate::SymplecticMap;

/// `ρ^ℏ_Δ(h)` as a symbolic word.
#[derive(Clone, Debug, PartialEq)]
pub struct RepresentationElement {
    pub mapping_loop: MappingClassLoop,
    pub word: IntertwinerWord,
    pub params: QDParams,
}

/// The representation element of a loop.
///
/// The closed word (the loop followed by its closing relabeling) is
/// simplified by cancelling adjacent inverse moves and then compiled.
pub fn rho(
    lp: &MappingClassLoop,
    params: QDParams,
) -> Result<RepresentationElement, IntertwinerError> {
    check_loop(lp)?;
    let word = compile(&lp.closed_word().simplified(), params)?;
    Ok(RepresentationElement {
        mapping_loop: lp.clone(),
        word,
        params,
    })
}

impl RepresentationElement {
    /// The exact linear part of the element.
    pub fn linear_part(&self) -> SymplecticMap {
        self.word.linear_part()
    }

    /// `ρ(h₁)·ρ(h₂)` for `self = ρ(h₁)`, `other = ρ(h₂)`, realised by the
    /// concatenated loop.
    pub fn compose(
        &self,
        other: &RepresentationElement,
    ) -> Result<RepresentationElement, IntertwinerError> {
        if self.params != other.params {
            return Err(IntertwinerError::Mismatch(
                "elements with different kernel parameters".into(),
            ));
        }
        rho(
            &loop_product(&self.mapping_loop, &other.mapping_loop)?,
            self.params,
        )
    }

    /// `{surface, lambda, hbar, loop, factors, linear_part, phase}`.
    ///
    /// The scalar phase of the operator is not tracked and is reported as
    /// `"undetermined"`.
    pub fn to_json(&self) -> Value {
        let sig = self.word.source.signature();
        let lp = WordFile::from_word(
            &self.mapping_loop.word,
            self.mapping_loop.closing_iso.as_ref(),
        );
        json!({
            "surface": {"genus": sig.genus, "punctures": sig.punctures},
            "lambda": self.params.lambda.as_i64(),
            "hbar": json17(self.params.hbar),
            "loop": serde_json::to_value(lp).expect("serializable"),
            "factors": self.word.factors_json(),
            "linear_part": self.linear_part().coord.to_string_rows(),
            "phase": "undetermined",
        })
    }
}

fn check_loop(lp: &MappingClassLoop) -> Result<(), IntertwinerError> {
    if verify_loop(lp) {
        Ok(())
    } else {
        Err(IntertwinerError::InvalidLoop(
            "the closing relabeling does not map the end of the word to its start".into(),
        ))
    }
}

/// The loop of `h₁h₂`: the closed word of `h₁` followed by that of `h₂`.
pub fn loop_product(
    h1: &MappingClassLoop,
    h2: &MappingClassLoop,
) -> Result<MappingClassLoop, IntertwinerError> {
    check_loop(h1)?;
    check_loop(h2)?;
    if h1.word.start != h2.word.start {
        return Err(IntertwinerError::Mismatch(
            "loops start at different triangulations".into(),
        ));
    }
    let word = h1.closed_word().concat(&h2.closed_word())?;
    Ok(MappingClassLoop {
        word,
        closing_iso: None,
    })
}

/// The loop of `h⁻¹`: the closed word of `h` run backwards.
pub fn loop_inverse(h: &MappingClassLoop) -> Result<MappingClassLoop, IntertwinerError> {
    check_loop(h)?;
    Ok(MappingClassLoop {
        word: h.closed_word().inverse()?,
        closing_iso: None,
    })
}

/// A shortest loop for the same mapping class, found by breadth-first search
/// for the end frame (triangulation and c-vectors) of `h`.
pub fn research_loop(
    h: &MappingClassLoop,
    max_depth: usize,
) -> Result<MappingClassLoop, IntertwinerError> {
    check_loop(h)?;
    let target = h.closed_word().end_frame()?;
    let word = find_path_framed(&h.word.start, &target, max_depth)?;
    Ok(MappingClassLoop {
        word,
        closing_iso: None,
    })
}

/// `true` when the exchange matrix at the end of the loop, pushed forward by
/// the closing relabeling, equals the exchange matrix at the start.
pub fn eps_is_invariant(h: &MappingClassLoop) -> Result<bool, IntertwinerError> {
    let end = h.word.end()?;
    let m = end.arc_count();
    let sigma = h
        .closing_iso
        .clone()
        .unwrap_or_else(|| Permutation::identity(m));
    if sigma.len() != m {
        return Ok(false);
    }
    let eps_end = exchange_matrix(&end).eps;
    let mut pushed = vec![vec![0i64; m]; m];
    for (i, row) in eps_end.iter().enumerate() {
        for (j, &e) in row.iter().enumerate() {
            pushed[sigma.apply(i)][sigma.apply(j)] = e;
        }
    }
    Ok(pushed == exchange_matrix(&h.word.start).eps)
}
