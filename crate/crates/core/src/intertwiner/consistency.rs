//! Seeded randomized suites for the linear shadow: homomorphism under loop
//! concatenation and independence of the connecting word.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{compile, loop_product, research_loop, rho, IntertwinerError};
use crate::qdilog::QDParams;
use crate::triangulation::{
    find_path_framed, flip, isomorphisms, Frame, GroupoidWord, LabeledTriangulation,
    MappingClassLoop, Move, Permutation, SurfaceSignature, WordFile,
};

/// Longest random flip word drawn by the suites.
pub const MAX_RANDOM_FLIPS: usize = 3;

/// Depth of the breadth-first searches that re-find words; twice
/// [`MAX_RANDOM_FLIPS`], so every concatenation is within reach.
pub const SEARCH_DEPTH: usize = 2 * MAX_RANDOM_FLIPS;

/// A uniformly random word of `0..=max_flips` legal flips from `t`. The walk
/// stops early where no flip is legal.
pub fn random_flip_word(
    t: &LabeledTriangulation,
    max_flips: usize,
    rng: &mut impl Rng,
) -> GroupoidWord {
    let mut cur = t.clone();
    let mut moves = Vec::new();
    for _ in 0..rng.gen_range(0..=max_flips) {
        let legal: Vec<usize> = (0..t.arc_count())
            .filter(|&k| flip(&cur, k).is_ok())
            .collect();
        let Some(&k) = legal.choose(rng) else { break };
        cur = flip(&cur, k).expect("legal flip");
        moves.push(Move::Flip(k));
    }
    GroupoidWord {
        start: t.clone(),
        moves,
    }
}

/// A random loop: a random flip word closed by a random isomorphism from its
/// end back to `t`. Words ending at a triangulation not isomorphic to `t`
/// are redrawn; the empty word always closes.
pub fn random_loop(
    t: &LabeledTriangulation,
    max_flips: usize,
    rng: &mut impl Rng,
) -> MappingClassLoop {
    loop {
        let word = random_flip_word(t, max_flips, rng);
        let end = word.end().expect("legal flips");
        if let Some(sigma) = isomorphisms(&end, t).choose(rng) {
            let closing_iso = Some(sigma.clone());
            return MappingClassLoop { word, closing_iso };
        }
    }
}

fn moves_json(word: &GroupoidWord, closing_iso: Option<&Permutation>) -> Value {
    let f = WordFile::from_word(word, closing_iso);
    json!({"moves": f.moves, "closing_iso": f.closing_iso})
}

/// One pair of loops checked by [`homomorphism_suite`].
#[derive(Clone, Debug, PartialEq)]
pub struct LoopPairCheck {
    pub h1: MappingClassLoop,
    pub h2: MappingClassLoop,
    /// `linear_part(ρ(h₁)·ρ(h₂)) = linear_part(ρ(h₁h₂))` with `h₁h₂`
    /// re-found by framed search.
    pub matches_research: bool,
    /// The closed word of `h₁` returns the c-vectors to the base frame.
    pub h1_fixes_base_frame: bool,
    /// `linear_part(ρ(h₁)·ρ(h₂))` is the coordinate change of `ρ(h₁)`
    /// followed by that of `ρ(h₂)`. The flips of `h₂` inside the product take
    /// their tropical signs from the frame `h₁` ends in, so this is required
    /// only when that frame is the base frame.
    pub matches_product: bool,
    pub error: Option<String>,
}

impl LoopPairCheck {
    pub fn passed(&self) -> bool {
        self.matches_research
            && (self.matches_product || !self.h1_fixes_base_frame)
            && self.error.is_none()
    }
}

/// Outcome of [`homomorphism_suite`].
#[derive(Clone, Debug, PartialEq)]
pub struct HomomorphismReport {
    pub signature: SurfaceSignature,
    pub seed: u64,
    pub checks: Vec<LoopPairCheck>,
}

impl HomomorphismReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(LoopPairCheck::passed)
    }

    /// `{surface, seed, pairs, passed, checks:[{h1, h2, …}]}`.
    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                json!({
                    "h1": moves_json(&c.h1.word, c.h1.closing_iso.as_ref()),
                    "h2": moves_json(&c.h2.word, c.h2.closing_iso.as_ref()),
                    "matches_research": c.matches_research,
                    "h1_fixes_base_frame": c.h1_fixes_base_frame,
                    "matches_product": c.matches_product,
                    "error": c.error,
                    "passed": c.passed(),
                })
            })
            .collect();
        json!({
            "surface": {"genus": self.signature.genus, "punctures": self.signature.punctures},
            "seed": self.seed,
            "pairs": self.checks.len(),
            "passed": self.passed(),
            "checks": checks,
        })
    }
}

fn pair_check(
    h1: &MappingClassLoop,
    h2: &MappingClassLoop,
    params: QDParams,
) -> Result<(bool, bool, bool), IntertwinerError> {
    let (e1, e2) = (rho(h1, params)?, rho(h2, params)?);
    let composed = e1.compose(&e2)?.linear_part();
    let found = rho(
        &research_loop(&loop_product(h1, h2)?, SEARCH_DEPTH)?,
        params,
    )?;
    let fixes = h1.closed_word().end_frame()? == Frame::base(h1.word.start.clone());
    Ok((
        composed == found.linear_part(),
        fixes,
        composed == e1.linear_part().then(&e2.linear_part()),
    ))
}

/// Draws `pairs` pairs of random loops at `t` from `seed` and compares the
/// linear part of `ρ(h₁)·ρ(h₂)` with that of the re-found word for `h₁h₂`
/// and, when `h₁` fixes the base frame, with the product of the two linear
/// parts. All comparisons are exact.
pub fn homomorphism_suite(
    t: &LabeledTriangulation,
    params: QDParams,
    pairs: usize,
    seed: u64,
) -> HomomorphismReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let checks = (0..pairs)
        .map(|_| {
            let h1 = random_loop(t, MAX_RANDOM_FLIPS, &mut rng);
            let h2 = random_loop(t, MAX_RANDOM_FLIPS, &mut rng);
            let (research, fixes, product, error) = match pair_check(&h1, &h2, params) {
                Ok((a, b, c)) => (a, b, c, None),
                Err(e) => (false, false, false, Some(e.to_string())),
            };
            LoopPairCheck {
                h1,
                h2,
                matches_research: research,
                h1_fixes_base_frame: fixes,
                matches_product: product,
                error,
            }
        })
        .collect();
    HomomorphismReport {
        signature: t.signature(),
        seed,
        checks,
    }
}

/// One pair of connecting words checked by [`path_independence_suite`].
#[derive(Clone, Debug, PartialEq)]
pub struct PathCheck {
    /// A random walk, possibly ending with a transposition.
    pub walk: GroupoidWord,
    /// The word found by framed search for the end of `walk`.
    pub found: Option<GroupoidWord>,
    pub equal_linear_parts: bool,
    pub error: Option<String>,
}

impl PathCheck {
    pub fn passed(&self) -> bool {
        self.equal_linear_parts && self.error.is_none()
    }
}

/// Outcome of [`path_independence_suite`].
#[derive(Clone, Debug, PartialEq)]
pub struct PathReport {
    pub seed: u64,
    pub checks: Vec<PathCheck>,
}

impl PathReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(PathCheck::passed)
    }

    /// `{seed, trials, passed, checks:[{surface, walk, found, …}]}`.
    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                let sig = c.walk.start.signature();
                json!({
                    "surface": {"genus": sig.genus, "punctures": sig.punctures},
                    "walk": moves_json(&c.walk, None),
                    "found": c.found.as_ref().map(|w| moves_json(w, None)),
                    "equal_linear_parts": c.equal_linear_parts,
                    "error": c.error,
                    "passed": c.passed(),
                })
            })
            .collect();
        json!({"seed": self.seed, "trials": self.checks.len(), "passed": self.passed(), "checks": checks})
    }
}

/// Draws `trials` random walks from the triangulations in `starts` (taken in
/// turn), finds a second word to the same end by framed search and compares
/// the compiled linear parts exactly.
pub fn path_independence_suite(
    starts: &[LabeledTriangulation],
    params: QDParams,
    trials: usize,
    seed: u64,
) -> PathReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let checks = (0..trials)
        .filter_map(|n| starts.get(n % starts.len().max(1)))
        .map(|t| {
            let mut walk = random_flip_word(t, SEARCH_DEPTH - 1, &mut rng);
            let m = t.arc_count();
            let (a, b) = (rng.gen_range(0..m), rng.gen_range(0..m));
            if a != b && rng.gen_bool(0.5) {
                walk.moves
                    .push(Move::Permute(Permutation::transposition(m, a, b)));
            }
            let outcome = walk
                .end_frame()
                .map_err(IntertwinerError::from)
                .and_then(|end| {
                    let found = find_path_framed(t, &end, SEARCH_DEPTH)?;
                    let equal = compile(&walk, params)?.linear_part()
                        == compile(&found, params)?.linear_part();
                    Ok((found, equal))
                });
            match outcome {
                Ok((found, equal)) => PathCheck {
                    walk,
                    found: Some(found),
                    equal_linear_parts: equal,
                    error: None,
                },
                Err(e) => PathCheck {
                    walk,
                    found: None,
                    equal_linear_parts: false,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    PathReport { seed, checks }
}
