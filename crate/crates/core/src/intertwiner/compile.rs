//! Compilation of groupoid words into factor lists.

use serde_json::{json, Value};

use super::IntertwinerError;
use crate::heisenberg::{permutation_map, tropical_monomial_map, LinearSymplecticMap};
use crate::numfmt::json17;
use crate::qdilog::QDParams;
use crate::triangulation::{
    cycles_to_one_based, exchange_matrix, Frame, GroupoidWord, LabeledTriangulation, Move,
    Permutation, TriangulationError,
};
use crate::{IntMatrix, SymplecticMap};

/// The automorphism part `F^ℏ_Λ(x_k, y_k)` of a flip at arc `k`.
///
/// `eps` is the exchange matrix of the triangulation the flip starts from,
/// which fixes `x_k, y_k` in the reducible solution. `sign` is the sign of
/// the c-vector of `k`: `+1` uses `F`, `−1` uses `F_−(x, y) = 1/F(−x, −y)`,
/// matching the branch of the monomial part emitted with it.
#[derive(Clone, Debug, PartialEq)]
pub struct AutoFactor {
    pub params: QDParams,
    pub arc: usize,
    pub eps: IntMatrix,
    pub sign: i64,
}

/// One factor of an intertwiner word.
#[derive(Clone, Debug, PartialEq)]
pub enum Factor {
    /// Linear part of a flip at `arc` on the branch `sign`.
    Monomial {
        arc: usize,
        sign: i64,
        map: SymplecticMap,
    },
    /// Automorphism part of a flip.
    Auto(AutoFactor),
    /// Relabeling of arcs.
    Perm {
        sigma: Permutation,
        map: SymplecticMap,
    },
}

impl Factor {
    /// Variant name for reports.
    pub fn kind_name(&self) -> &'static str {
        match self {
            Factor::Monomial { .. } => "Monomial",
            Factor::Auto(_) => "Auto",
            Factor::Perm { .. } => "Perm",
        }
    }

    /// The coordinate change of a linear factor; `None` for `Auto`.
    pub fn linear(&self) -> Option<&SymplecticMap> {
        match self {
            Factor::Monomial { map, .. } | Factor::Perm { map, .. } => Some(map),
            Factor::Auto(_) => None,
        }
    }

    /// JSON record with 1-based arc labels.
    pub fn to_json(&self) -> Value {
        match self {
            Factor::Monomial { arc, sign, map } => {
                json!({"kind": "Monomial", "arc": arc + 1, "sign": sign, "coord": map.coord.to_string_rows()})
            }
            Factor::Auto(a) => json!({
                "kind": "Auto",
                "arc": a.arc + 1,
                "sign": a.sign,
                "lambda": a.params.lambda.as_i64(),
                "hbar": json17(a.params.hbar),
                "eps": a.eps,
            }),
            Factor::Perm { sigma, .. } => {
                json!({"kind": "Perm", "cycles": cycles_to_one_based(sigma)})
            }
        }
    }
}

/// A compiled word: factors in application order.
#[derive(Clone, Debug, PartialEq)]
pub struct IntertwinerWord {
    pub source: LabeledTriangulation,
    pub target: LabeledTriangulation,
    pub factors: Vec<Factor>,
}

impl IntertwinerWord {
    /// Number of arcs, which is the number of variables.
    pub fn arc_count(&self) -> usize {
        self.source.arc_count()
    }

    /// The coordinate change `t_end = M t_start` of the whole word: the
    /// product of the linear factors in list order. `Auto` factors contribute
    /// the identity.
    pub fn linear_part(&self) -> SymplecticMap {
        self.factors
            .iter()
            .rev()
            .filter_map(Factor::linear)
            .fold(LinearSymplecticMap::identity(self.arc_count()), |acc, m| {
                acc.then(m)
            })
    }

    /// The automorphism factors in application order.
    pub fn autos(&self) -> impl Iterator<Item = &AutoFactor> {
        self.factors.iter().filter_map(|f| match f {
            Factor::Auto(a) => Some(a),
            _ => None,
        })
    }

    /// `[{kind, …}, …]`.
    pub fn factors_json(&self) -> Value {
        Value::Array(self.factors.iter().map(Factor::to_json).collect())
    }
}

/// Compiles a word into its factor list.
///
/// Moves are processed in word order while the c-vectors of the current
/// triangulation are tracked relative to `w.start`. A flip at `k` emits its
/// monomial part (the tropical branch selected by the sign of the c-vector of
/// `k`) followed by its automorphism part; a relabeling emits its permutation
/// part. The per-move blocks are then reversed. The word is taken verbatim:
/// adjacent inverse moves are not cancelled, so relations compile to their
/// full factor lists.
pub fn compile(w: &GroupoidWord, params: QDParams) -> Result<IntertwinerWord, IntertwinerError> {
    let m = w.start.arc_count();
    let mut frame = Frame::base(w.start.clone());
    let mut blocks: Vec<Vec<Factor>> = Vec::with_capacity(w.moves.len());
    for mv in &w.moves {
        match mv {
            Move::Flip(k) => {
                let next = frame.flip(*k)?;
                let eps = exchange_matrix(frame.triangulation()).eps;
                let sign = frame.c_sign(*k);
                let map = tropical_monomial_map(&eps, *k, sign);
                blocks.push(vec![
                    Factor::Monomial { arc: *k, sign, map },
                    Factor::Auto(AutoFactor {
                        params,
                        arc: *k,
                        eps,
                        sign,
                    }),
                ]);
                frame = next;
            }
            Move::Permute(sigma) => {
                if sigma.len() != m {
                    return Err(TriangulationError::BadPermutation(format!(
                        "permutation of {} points on a surface with {m} arcs",
                        sigma.len()
                    ))
                    .into());
                }
                blocks.push(vec![Factor::Perm {
                    sigma: sigma.clone(),
                    map: permutation_map(sigma),
                }]);
                frame = frame.permute(sigma);
            }
        }
    }
    Ok(IntertwinerWord {
        source: w.start.clone(),
        target: frame.triangulation().clone(),
        factors: blocks.into_iter().rev().flatten().collect(),
    })
}
