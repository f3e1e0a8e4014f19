//! The relation suite: every applicable instance of the flip and relabeling
//! relations on a triangulation, checked on triangulations, on linear parts
//! and, for pentagons, on the full operators.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::{compile, local_residual, localize, Factor, IntertwinerError, IntertwinerWord};
use crate::numfmt::json17;
use crate::opcalc::{
    default_f_states, GaussianState, Grid, ResidualReport, PENTAGON_TOLERANCE, RESAMPLING_BUDGET,
};
use crate::qdilog::{FKernel, QDParams};
use crate::triangulation::{
    exchange_matrix, flip, Frame, GroupoidWord, LabeledTriangulation, Move, Permutation,
    SurfaceSignature,
};

/// The relations generating all relations among flips and relabelings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationKind {
    /// `μ_k ∘ μ_k = id`.
    TwiceFlip,
    /// `μ_i ∘ μ_j ∘ μ_i ∘ μ_j = id` for `ε_ij = 0`.
    Quadrilateral,
    /// `P_(ij) ∘ μ_i ∘ μ_j ∘ μ_i ∘ μ_j ∘ μ_i = id` for `ε_ij = ±1`.
    Pentagon,
    /// `P_id = id`.
    PermIdentity,
    /// `P_(σ∘γ)⁻¹ ∘ P_σ ∘ P_γ = id`.
    PermComposition,
    /// `P_σ ∘ μ_i ∘ P_σ⁻¹ ∘ μ_σ(i) = id`.
    PermFlip,
}

impl RelationKind {
    /// Stable name used in reports.
    pub fn name(self) -> &'static str {
        match self {
            RelationKind::TwiceFlip => "twice-flip",
            RelationKind::Quadrilateral => "quadrilateral",
            RelationKind::Pentagon => "pentagon",
            RelationKind::PermIdentity => "perm-identity",
            RelationKind::PermComposition => "perm-composition",
            RelationKind::PermFlip => "perm-flip",
        }
    }
}

/// One relation instance, written as a word in application order that
/// should return to its start.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationInstance {
    pub kind: RelationKind,
    /// Human-readable parameters with 1-based arcs.
    pub label: String,
    pub word: GroupoidWord,
    /// The two arcs a pentagon acts on.
    pub local_arcs: Option<[usize; 2]>,
}

/// Every applicable instance based at `t` or at a triangulation within
/// `radius` flips of it.
///
/// Flip relations are enumerated over all arcs and ordered arc pairs whose
/// flips are legal along the whole word. Relabeling relations use the
/// transpositions and the cycle `(1 2 … m)` for `σ` and `γ`, a generating
/// set of the symmetric group. Each instance's word starts at its base, and
/// its label records the flips leading there from `t`.
pub fn relation_instances(t: &LabeledTriangulation, radius: usize) -> Vec<RelationInstance> {
    let mut bases: Vec<(Vec<usize>, LabeledTriangulation)> = vec![(Vec::new(), t.clone())];
    let mut frontier = 0;
    for _ in 0..radius {
        let end = bases.len();
        for b in frontier..end {
            for k in 0..t.arc_count() {
                if let Ok(next) = flip(&bases[b].1, k) {
                    if !bases.iter().any(|(_, s)| *s == next) {
                        let mut path = bases[b].0.clone();
                        path.push(k);
                        bases.push((path, next));
                    }
                }
            }
        }
        frontier = end;
    }
    bases
        .iter()
        .flat_map(|(path, base)| {
            let prefix = if path.is_empty() {
                "base=T".to_string()
            } else {
                let flips: Vec<String> = path.iter().map(|k| format!("mu_{}", k + 1)).collect();
                format!("base={}(T)", flips.join("."))
            };
            instances_at(base).into_iter().map(move |mut inst| {
                inst.label = format!("{prefix};{}", inst.label);
                inst
            })
        })
        .collect()
}

fn instances_at(t: &LabeledTriangulation) -> Vec<RelationInstance> {
    let m = t.arc_count();
    let eps = exchange_matrix(t).eps;
    let legal = |seq: &[usize]| seq.iter().try_fold(t.clone(), |c, &k| flip(&c, k)).is_ok();
    let flips = |seq: &[usize]| seq.iter().map(|&k| Move::Flip(k)).collect::<Vec<_>>();
    let word = |moves: Vec<Move>| GroupoidWord {
        start: t.clone(),
        moves,
    };
    let mut out = Vec::new();
    for k in 0..m {
        if legal(&[k]) {
            out.push(RelationInstance {
                kind: RelationKind::TwiceFlip,
                label: format!("k={}", k + 1),
                word: word(flips(&[k, k])),
                local_arcs: None,
            });
        }
    }
    for i in 0..m {
        for j in (0..m).filter(|&j| j != i) {
            if eps[i][j] == 0 && legal(&[j, i, j, i]) {
                out.push(RelationInstance {
                    kind: RelationKind::Quadrilateral,
                    label: format!("i={},j={}", i + 1, j + 1),
                    word: word(flips(&[j, i, j, i])),
                    local_arcs: None,
                });
            }
            if eps[i][j].abs() == 1 && legal(&[i, j, i, j, i]) {
                let mut moves = flips(&[i, j, i, j, i]);
                moves.push(Move::Permute(Permutation::transposition(m, i, j)));
                out.push(RelationInstance {
                    kind: RelationKind::Pentagon,
                    label: format!("i={},j={},eps_ij={}", i + 1, j + 1, eps[i][j]),
                    word: word(moves),
                    local_arcs: Some([i, j]),
                });
            }
        }
    }
    out.push(RelationInstance {
        kind: RelationKind::PermIdentity,
        label: "id".into(),
        word: word(vec![Move::Permute(Permutation::identity(m))]),
        local_arcs: None,
    });
    let mut gens: Vec<Permutation> = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            gens.push(Permutation::transposition(m, a, b));
        }
    }
    if let Ok(cycle) = Permutation::new((0..m).map(|i| (i + 1) % m).collect()) {
        gens.push(cycle);
    }
    for sigma in &gens {
        for gamma in &gens {
            let undo = sigma.compose(gamma).inverse();
            out.push(RelationInstance {
                kind: RelationKind::PermComposition,
                label: format!("sigma={sigma},gamma={gamma}"),
                word: word(vec![
                    Move::Permute(gamma.clone()),
                    Move::Permute(sigma.clone()),
                    Move::Permute(undo),
                ]),
                local_arcs: None,
            });
        }
    }
    for sigma in &gens {
        for i in 0..m {
            if legal(&[sigma.apply(i)]) {
                out.push(RelationInstance {
                    kind: RelationKind::PermFlip,
                    label: format!("sigma={sigma},i={}", i + 1),
                    word: word(vec![
                        Move::Flip(sigma.apply(i)),
                        Move::Permute(sigma.inverse()),
                        Move::Flip(i),
                        Move::Permute(sigma.clone()),
                    ]),
                    local_arcs: None,
                });
            }
        }
    }
    out
}

/// Numerical settings of the suite.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub grid: Grid,
    pub states: Vec<GaussianState>,
    pub tolerance: f64,
    pub resampling_budget: f64,
    /// Run the operator-level pentagon checks.
    pub numeric: bool,
    /// Negative control: move the automorphism factor with this index (in
    /// application order) of every pentagon word to the other arc of the pair.
    pub corrupt_auto: Option<usize>,
    /// Relations are based at every triangulation within this many flips.
    pub radius: usize,
}

impl Default for SuiteConfig {
    /// `N = 256`, `L = 12` on the default two-dimensional test states,
    /// relations based at the triangulation itself.
    fn default() -> Self {
        SuiteConfig {
            grid: Grid::new(2, 256, 12.0).expect("valid default grid"),
            states: default_f_states(),
            tolerance: PENTAGON_TOLERANCE,
            resampling_budget: RESAMPLING_BUDGET,
            numeric: true,
            corrupt_auto: None,
            radius: 0,
        }
    }
}

/// Outcome of one relation instance.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationCheck {
    pub kind: RelationKind,
    pub label: String,
    pub factors: usize,
    /// The word returns to its start triangulation.
    pub closes: bool,
    /// The word also returns to the base c-vectors, so it is a relation of
    /// labeled isotopy classes and not a nontrivial mapping class.
    pub frame_closes: bool,
    /// The compiled linear part is the identity.
    pub linear_identity: bool,
    /// Operator-level residual `‖Wψ − ψ‖/‖ψ‖`, maximised over test states.
    pub residual: Option<f64>,
    pub error: Option<String>,
}

impl RelationCheck {
    /// All exact checks hold and the residual, if any, is within `tolerance`.
    pub fn passed(&self, tolerance: f64) -> bool {
        self.closes
            && self.frame_closes
            && self.linear_identity
            && self.error.is_none()
            && self.residual.is_none_or(|r| r <= tolerance)
    }
}

/// Outcome of [`verify_relation_suite`].
#[derive(Clone, Debug, PartialEq)]
pub struct RelationReport {
    pub signature: SurfaceSignature,
    pub params: QDParams,
    pub config: SuiteConfig,
    pub checks: Vec<RelationCheck>,
    /// One report per distinct local pentagon operator word.
    pub local_reports: Vec<ResidualReport>,
}

impl RelationReport {
    /// Every check passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed(self.config.tolerance))
    }

    /// Largest pentagon residual, if any was computed.
    pub fn max_residual(&self) -> Option<f64> {
        self.checks
            .iter()
            .filter_map(|c| c.residual)
            .reduce(f64::max)
    }

    /// Per-kind counts, per-check records and the local reports.
    pub fn to_json(&self) -> Value {
        let mut counts: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
        for c in &self.checks {
            let e = counts.entry(c.kind.name()).or_default();
            e.0 += 1;
            e.1 += usize::from(c.passed(self.config.tolerance));
        }
        let summary: Value = counts
            .iter()
            .map(|(k, (n, p))| (k.to_string(), json!({"instances": n, "passed": p})))
            .collect();
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                json!({
                    "kind": c.kind.name(),
                    "label": c.label,
                    "factors": c.factors,
                    "closes": c.closes,
                    "frame_closes": c.frame_closes,
                    "linear_identity": c.linear_identity,
                    "residual": c.residual.map(json17),
                    "error": c.error,
                    "passed": c.passed(self.config.tolerance),
                })
            })
            .collect();
        json!({
            "surface": {"genus": self.signature.genus, "punctures": self.signature.punctures},
            "lambda": self.params.lambda.as_i64(),
            "hbar": json17(self.params.hbar),
            "N": self.config.grid.n,
            "L": json17(self.config.grid.l),
            "tolerance": json17(self.config.tolerance),
            "corrupt_auto": self.config.corrupt_auto,
            "passed": self.passed(),
            "max_residual": self.max_residual().map(json17),
            "summary": summary,
            "checks": checks,
            "local_reports": self.local_reports.iter().map(ResidualReport::to_json).collect::<Vec<_>>(),
        })
    }
}

/// [`verify_relation_suite_with`] under the default configuration.
pub fn verify_relation_suite(
    t: &LabeledTriangulation,
    params: QDParams,
) -> Result<RelationReport, IntertwinerError> {
    verify_relation_suite_with(t, params, &SuiteConfig::default())
}

/// Runs every relation instance based within `config.radius` flips of `t`.
///
/// Each instance is checked for closure on triangulations and on c-vectors,
/// and for an identity linear part. Pentagon instances are also evaluated as
/// operators on their two arcs; instances whose pulled-back factor lists
/// coincide share one numerical run. Failures are report entries; only a
/// failure to build the kernel is an error.
pub fn verify_relation_suite_with(
    t: &LabeledTriangulation,
    params: QDParams,
    config: &SuiteConfig,
) -> Result<RelationReport, IntertwinerError> {
    let instances = relation_instances(t, config.radius);
    let mut rows: Vec<(RelationCheck, Option<IntertwinerWord>)> = instances
        .par_iter()
        .map(|inst| exact_check(inst, params, config.corrupt_auto))
        .collect();
    let mut local_reports = Vec::new();
    if config.numeric {
        let kernel = FKernel::new(params).map_err(crate::opcalc::OpcalcError::from)?;
        let mut cache: BTreeMap<String, Result<f64, String>> = BTreeMap::new();
        for (inst, (check, word)) in instances.iter().zip(rows.iter_mut()) {
            let (Some(arcs), Some(word)) = (inst.local_arcs, word.as_ref()) else {
                continue;
            };
            let key = match localize(word, arcs) {
                Ok(autos) => {
                    let ops: Vec<_> = autos.iter().map(|a| (a.sign, &a.x, &a.y)).collect();
                    format!("{ops:?}")
                }
                Err(e) => {
                    check.error = Some(e.to_string());
                    continue;
                }
            };
            let outcome = cache.entry(key).or_insert_with(|| {
                match local_residual(
                    word,
                    arcs,
                    &kernel,
                    &config.grid,
                    &config.states,
                    config.resampling_budget,
                ) {
                    Ok(report) => {
                        let r = report.max_residual();
                        local_reports.push(report);
                        Ok(r)
                    }
                    Err(e) => Err(e.to_string()),
                }
            });
            match outcome {
                Ok(r) => check.residual = Some(*r),
                Err(e) => check.error = Some(e.clone()),
            }
        }
    }
    Ok(RelationReport {
        signature: t.signature(),
        params,
        config: config.clone(),
        checks: rows.into_iter().map(|r| r.0).collect(),
        local_reports,
    })
}

fn exact_check(
    inst: &RelationInstance,
    params: QDParams,
    corrupt_auto: Option<usize>,
) -> (RelationCheck, Option<IntertwinerWord>) {
    let mut check = RelationCheck {
        kind: inst.kind,
        label: inst.label.clone(),
        factors: 0,
        closes: false,
        frame_closes: false,
        linear_identity: false,
        residual: None,
        error: None,
    };
    let outcome = inst
        .word
        .end_frame()
        .map_err(IntertwinerError::from)
        .and_then(|end| {
            check.closes = *end.triangulation() == inst.word.start;
            check.frame_closes = end == Frame::base(inst.word.start.clone());
            compile(&inst.word, params)
        });
    match outcome {
        Ok(mut word) => {
            check.factors = word.factors.len();
            check.linear_identity = word.linear_part().is_identity();
            if let (Some(index), Some(arcs)) = (corrupt_auto, inst.local_arcs) {
                corrupt(&mut word, index, arcs);
            }
            (check, Some(word))
        }
        Err(e) => {
            check.error = Some(e.to_string());
            (check, None)
        }
    }
}

/// Moves the automorphism factor number `index` to the other arc of `arcs`.
fn corrupt(word: &mut IntertwinerWord, index: usize, arcs: [usize; 2]) {
    let target = word.factors.iter_mut().filter_map(|f| match f {
        Factor::Auto(a) => Some(a),
        _ => None,
    });
    if let Some(a) = target.into_iter().nth(index) {
        a.arc = if a.arc == arcs[0] { arcs[1] } else { arcs[0] };
    }
}
