//! Integration tests for intertwiner words, the relation suite and the
//! mapping class group representation.

use qtgrav::fixtures;
use qtgrav::intertwiner::*;
use qtgrav::opcalc::RESAMPLING_BUDGET;
use qtgrav::qdilog::{Lambda, QDParams};
use qtgrav::triangulation::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn params(lambda: Lambda) -> QDParams {
    QDParams::new(lambda, 0.7).unwrap()
}

fn sphere4() -> LabeledTriangulation {
    fixtures::load("example_0_4.json").unwrap()
}

fn torus2() -> LabeledTriangulation {
    fixtures::load("example_1_2.json").unwrap()
}

fn legal_flips(t: &LabeledTriangulation) -> Vec<usize> {
    (0..t.arc_count()).filter(|&k| flip(t, k).is_ok()).collect()
}

/// A pair `(i, j)` with `ε_ij = ±1` whose pentagon word is legal.
fn pentagon_pair(t: &LabeledTriangulation) -> (usize, usize) {
    let eps = exchange_matrix(t).eps;
    let m = t.arc_count();
    (0..m)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .find(|&(i, j)| {
            eps[i][j].abs() == 1
                && [i, j, i, j, i]
                    .iter()
                    .try_fold(t.clone(), |c, &k| flip(&c, k))
                    .is_ok()
        })
        .expect("a legal pentagon")
}

fn flips(t: &LabeledTriangulation, seq: &[usize]) -> GroupoidWord {
    GroupoidWord {
        start: t.clone(),
        moves: seq.iter().map(|&k| Move::Flip(k)).collect(),
    }
}

/// A random word of at most `len` legal flips, shorter at a dead end.
fn random_flips(t: &LabeledTriangulation, len: usize, rng: &mut ChaCha8Rng) -> GroupoidWord {
    let mut cur = t.clone();
    let mut seq = Vec::new();
    for _ in 0..rng.gen_range(0..=len) {
        let Some(&k) = legal_flips(&cur).choose(rng) else {
            break;
        };
        cur = flip(&cur, k).unwrap();
        seq.push(k);
    }
    flips(t, &seq)
}

/// A random loop: a short flip word closed by a random isomorphism back to
/// the start. Words whose end is not isomorphic to the start are redrawn.
fn random_loop(t: &LabeledTriangulation, rng: &mut ChaCha8Rng) -> MappingClassLoop {
    loop {
        let word = random_flips(t, 3, rng);
        let isos = isomorphisms(&word.end().unwrap(), t);
        if let Some(sigma) = isos.choose(rng) {
            let lp = MappingClassLoop {
                word,
                closing_iso: Some(sigma.clone()),
            };
            assert!(verify_loop(&lp));
            return lp;
        }
    }
}

fn kinds(w: &IntertwinerWord) -> Vec<&'static str> {
    w.factors.iter().map(Factor::kind_name).collect()
}

#[test]
fn empty_word_compiles_to_identity() {
    let t = sphere4();
    let w = compile(&GroupoidWord::empty(t.clone()), params(Lambda::Minus)).unwrap();
    assert!(w.factors.is_empty());
    assert_eq!(w.source, t);
    assert_eq!(w.target, t);
    assert!(w.linear_part().is_identity());
}

#[test]
fn single_flip_is_monomial_then_auto() {
    let t = sphere4();
    let k = legal_flips(&t)[0];
    let w = compile(&flips(&t, &[k]), params(Lambda::Zero)).unwrap();
    assert_eq!(kinds(&w), ["Monomial", "Auto"]);
    match (&w.factors[0], &w.factors[1]) {
        (Factor::Monomial { arc, sign, .. }, Factor::Auto(a)) => {
            assert_eq!((*arc, *sign), (k, 1));
            assert_eq!((a.arc, a.sign), (k, 1));
            assert_eq!(a.eps, exchange_matrix(&t).eps);
        }
        _ => unreachable!(),
    }
    assert_eq!(w.target, flip(&t, k).unwrap());
    assert!(!w.linear_part().is_identity());
}

#[test]
fn illegal_flip_is_propagated() {
    let t = sphere4();
    let bad = GroupoidWord {
        start: t.clone(),
        moves: vec![Move::Flip(t.arc_count())],
    };
    assert!(matches!(
        compile(&bad, params(Lambda::Minus)),
        Err(IntertwinerError::Triangulation(_))
    ));
}

#[test]
fn blocks_are_reversed() {
    let t = sphere4();
    let k = legal_flips(&t)[0];
    let l = legal_flips(&flip(&t, k).unwrap())
        .into_iter()
        .find(|&l| l != k)
        .unwrap();
    let w = compile(&flips(&t, &[k, l]), params(Lambda::Minus)).unwrap();
    let arcs: Vec<usize> = w
        .factors
        .iter()
        .map(|f| match f {
            Factor::Monomial { arc, .. } => *arc,
            Factor::Auto(a) => a.arc,
            Factor::Perm { .. } => unreachable!(),
        })
        .collect();
    assert_eq!(arcs, [l, l, k, k]);
    // The second automorphism part sees the exchange matrix after the first flip.
    let Factor::Auto(second) = &w.factors[1] else {
        unreachable!()
    };
    assert_eq!(second.eps, exchange_matrix(&flip(&t, k).unwrap()).eps);
}

#[test]
fn pentagon_word_has_eleven_factors_and_identity_linear_part() {
    let t = torus2();
    let (i, j) = pentagon_pair(&t);
    let mut w = flips(&t, &[i, j, i, j, i]);
    w.moves.push(Move::Permute(Permutation::transposition(
        t.arc_count(),
        i,
        j,
    )));
    let c = compile(&w, params(Lambda::Minus)).unwrap();
    assert_eq!(c.factors.len(), 11);
    assert_eq!(c.factors[0].kind_name(), "Perm");
    assert_eq!(c.autos().count(), 5);
    assert!(c.linear_part().is_identity());
    // Without the closing relabeling the linear part is the transposition.
    let open = compile(&flips(&t, &[i, j, i, j, i]), params(Lambda::Minus)).unwrap();
    assert!(!open.linear_part().is_identity());
}

#[test]
fn twice_flip_and_quadrilateral_have_identity_linear_part() {
    for t in fixtures::bundled().unwrap() {
        let eps = exchange_matrix(&t).eps;
        for k in legal_flips(&t) {
            let w = compile(&flips(&t, &[k, k]), params(Lambda::Plus)).unwrap();
            assert_eq!(w.factors.len(), 4);
            assert!(w.linear_part().is_identity());
        }
        let m = t.arc_count();
        let mut quads = 0;
        for i in 0..m {
            for j in (0..m).filter(|&j| j != i && eps[i][j] == 0) {
                let w = flips(&t, &[j, i, j, i]);
                if w.end().is_ok() {
                    quads += 1;
                    assert!(compile(&w, params(Lambda::Zero))
                        .unwrap()
                        .linear_part()
                        .is_identity());
                }
            }
        }
        assert!(quads > 0 || m == 3);
    }
}

#[test]
fn local_evaluation_requires_two_closed_arcs() {
    let t = torus2();
    let (i, j) = pentagon_pair(&t);
    let k = (0..t.arc_count()).find(|&k| k != i && k != j).unwrap();
    let mut w = flips(&t, &[i, j, i, j, i]);
    w.moves.push(Move::Permute(Permutation::transposition(
        t.arc_count(),
        i,
        j,
    )));
    let c = compile(&w, params(Lambda::Minus)).unwrap();
    let autos = localize(&c, [i, j]).unwrap();
    assert_eq!(autos.len(), 5);
    assert!(matches!(
        localize(&c, [i, k]),
        Err(IntertwinerError::NotLocal { .. })
    ));
    let open = compile(&flips(&t, &[i, j, i, j, i]), params(Lambda::Minus)).unwrap();
    assert!(matches!(
        localize(&open, [i, j]),
        Err(IntertwinerError::NotClosed(_))
    ));
}

#[test]
fn relation_instances_cover_each_kind() {
    let t = torus2();
    let inst = relation_instances(&t, 0);
    for kind in [
        RelationKind::TwiceFlip,
        RelationKind::Quadrilateral,
        RelationKind::Pentagon,
        RelationKind::PermIdentity,
        RelationKind::PermComposition,
        RelationKind::PermFlip,
    ] {
        assert!(inst.iter().any(|r| r.kind == kind), "{kind:?}");
    }
    assert!(relation_instances(&t, 1).len() > inst.len());
}

#[test]
fn four_punctured_sphere_has_no_pentagon() {
    // Flipping an arc of the tetrahedral triangulation produces a degree-two
    // puncture, and no pair with ε_ij = ±1 admits five legal flips anywhere
    // within three flips.
    assert!(relation_instances(&sphere4(), 3)
        .iter()
        .all(|r| r.kind != RelationKind::Pentagon));
}

#[test]
fn exact_relation_suite_passes_on_every_fixture() {
    let config = SuiteConfig {
        numeric: false,
        radius: 1,
        ..SuiteConfig::default()
    };
    for t in fixtures::bundled().unwrap() {
        let report = verify_relation_suite_with(&t, params(Lambda::Minus), &config).unwrap();
        assert!(!report.checks.is_empty());
        for c in &report.checks {
            assert!(
                c.passed(config.tolerance),
                "{:?} {} failed: {c:?}",
                c.kind,
                c.label
            );
            assert!(c.residual.is_none());
        }
    }
}

#[test]
fn pentagon_residuals_pass_for_negative_and_zero_lambda() {
    let t = torus2();
    for lambda in [Lambda::Minus, Lambda::Zero] {
        let report = verify_relation_suite(&t, params(lambda)).unwrap();
        let pentagons: Vec<_> = report
            .checks
            .iter()
            .filter(|c| c.kind == RelationKind::Pentagon)
            .collect();
        assert!(!pentagons.is_empty());
        assert!(
            pentagons.iter().all(|c| c.residual.is_some()),
            "{lambda:?}: {pentagons:?}"
        );
        let worst = report.max_residual().unwrap();
        assert!(report.passed(), "{lambda:?}: max residual {worst}");
        assert!(worst <= 1e-3);
        // Pentagons with the same pulled-back operators share one run.
        assert!(report.local_reports.len() < pentagons.len());
    }
}

#[test]
fn corrupted_auto_factor_gives_order_one_residual() {
    let t = torus2();
    let config = SuiteConfig {
        corrupt_auto: Some(3),
        resampling_budget: f64::INFINITY,
        ..SuiteConfig::default()
    };
    let report = verify_relation_suite_with(&t, params(Lambda::Minus), &config).unwrap();
    assert!(!report.passed());
    let pentagons: Vec<_> = report
        .checks
        .iter()
        .filter(|c| c.kind == RelationKind::Pentagon)
        .collect();
    for c in &pentagons {
        assert!(c.residual.unwrap() > 0.5, "{}: {:?}", c.label, c.residual);
        // The exact checks do not see the corruption.
        assert!(c.closes && c.frame_closes && c.linear_identity);
    }
    assert!(RESAMPLING_BUDGET < config.resampling_budget);
}

#[test]
fn suite_json_shape() {
    let config = SuiteConfig {
        numeric: false,
        ..SuiteConfig::default()
    };
    let report = verify_relation_suite_with(&sphere4(), params(Lambda::Zero), &config).unwrap();
    let v = report.to_json();
    assert_eq!(v["surface"]["genus"], 0);
    assert_eq!(v["surface"]["punctures"], 4);
    assert_eq!(v["lambda"], 0);
    assert_eq!(v["passed"], true);
    assert!(v["max_residual"].is_null());
    assert!(v["summary"]["twice-flip"]["instances"].as_u64().unwrap() > 0);
    assert_eq!(v["checks"].as_array().unwrap().len(), report.checks.len());
}

#[test]
fn identity_loop_gives_identity_element() {
    let t = sphere4();
    let e = rho(
        &MappingClassLoop {
            word: GroupoidWord::empty(t.clone()),
            closing_iso: None,
        },
        params(Lambda::Minus),
    )
    .unwrap();
    assert!(e.word.factors.is_empty());
    assert!(e.linear_part().is_identity());
}

#[test]
fn invalid_loop_is_rejected() {
    let t = sphere4();
    let k = legal_flips(&t)[0];
    let lp = MappingClassLoop {
        word: flips(&t, &[k]),
        closing_iso: None,
    };
    assert!(matches!(
        rho(&lp, params(Lambda::Minus)),
        Err(IntertwinerError::InvalidLoop(_))
    ));
}

#[test]
fn element_times_inverse_has_identity_linear_part() {
    let t = sphere4();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let h = random_loop(&t, &mut rng);
        let p = params(Lambda::Minus);
        let e = rho(&h, p).unwrap();
        let inv = rho(&loop_inverse(&h).unwrap(), p).unwrap();
        assert!(e.compose(&inv).unwrap().linear_part().is_identity());
        assert!(inv.compose(&e).unwrap().linear_part().is_identity());
    }
}

#[test]
fn product_matches_research_of_concatenation() {
    let t = sphere4();
    let p = params(Lambda::Zero);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut nontrivial = 0;
    for _ in 0..20 {
        let (h1, h2) = (random_loop(&t, &mut rng), random_loop(&t, &mut rng));
        let (e1, e2) = (rho(&h1, p).unwrap(), rho(&h2, p).unwrap());
        let product = e1.compose(&e2).unwrap();
        let found = rho(
            &research_loop(&loop_product(&h1, &h2).unwrap(), 6).unwrap(),
            p,
        )
        .unwrap();
        assert_eq!(product.linear_part(), found.linear_part());
        // The coordinate change of h₁h₂ is that of h₁ followed by that of h₂.
        assert_eq!(
            product.linear_part(),
            e1.linear_part().then(&e2.linear_part())
        );
        nontrivial += usize::from(!found.linear_part().is_identity());
    }
    assert!(nontrivial > 0);
}

#[test]
fn compose_rejects_mismatched_parameters() {
    let t = sphere4();
    let h = MappingClassLoop {
        word: GroupoidWord::empty(t),
        closing_iso: None,
    };
    let a = rho(&h, params(Lambda::Minus)).unwrap();
    let b = rho(&h, params(Lambda::Zero)).unwrap();
    assert!(matches!(a.compose(&b), Err(IntertwinerError::Mismatch(_))));
}

#[test]
fn linear_parts_are_path_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let all = fixtures::bundled().unwrap();
    for n in 0..50 {
        let t = &all[n % all.len()];
        let mut w = random_flips(t, 5, &mut rng);
        if rng.gen_bool(0.5) {
            let m = t.arc_count();
            let (a, b) = (rng.gen_range(0..m), rng.gen_range(0..m));
            if a != b {
                w.moves
                    .push(Move::Permute(Permutation::transposition(m, a, b)));
            }
        }
        let end = w.end_frame().unwrap();
        let other = find_path_framed(t, &end, 6).unwrap();
        let p = params(Lambda::Minus);
        let (a, b) = (compile(&w, p).unwrap(), compile(&other, p).unwrap());
        assert_eq!(a.target, b.target);
        assert_eq!(
            a.linear_part(),
            b.linear_part(),
            "words {:?} and {:?}",
            w.moves,
            other.moves
        );
    }
}

#[test]
fn exchange_matrix_is_invariant_under_loops() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for t in fixtures::bundled().unwrap() {
        for sigma in automorphisms(&t) {
            let lp = MappingClassLoop {
                word: GroupoidWord::empty(t.clone()),
                closing_iso: Some(sigma),
            };
            assert!(eps_is_invariant(&lp).unwrap());
        }
        for _ in 0..10 {
            assert!(eps_is_invariant(&random_loop(&t, &mut rng)).unwrap());
        }
    }
    // A relabeling that is not an isomorphism moves ε.
    let t = sphere4();
    let bad = Permutation::transposition(6, 0, 1);
    assert!(!automorphisms(&t).contains(&bad));
    let lp = MappingClassLoop {
        word: GroupoidWord::empty(t),
        closing_iso: Some(bad),
    };
    assert!(!eps_is_invariant(&lp).unwrap());
}

#[test]
fn representation_json_shape() {
    let t = sphere4();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let h = (0..100)
        .map(|_| random_loop(&t, &mut rng))
        .find(|h| !h.word.moves.is_empty())
        .unwrap();
    let e = rho(&h, params(Lambda::Minus)).unwrap();
    let v = e.to_json();
    assert_eq!(v["phase"], "undetermined");
    assert_eq!(v["lambda"], -1);
    assert_eq!(v["hbar"], 0.7);
    assert_eq!(v["surface"]["punctures"], 4);
    let rows = v["linear_part"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows
        .iter()
        .all(|r| r.as_array().unwrap().iter().all(|x| x.is_string())));
    let factors = v["factors"].as_array().unwrap();
    assert_eq!(factors.len(), e.word.factors.len());
    assert!(factors
        .iter()
        .all(|f| ["Monomial", "Auto", "Perm"].contains(&f["kind"].as_str().unwrap())));
    assert_eq!(
        v["loop"]["moves"].as_array().unwrap().len(),
        h.word.moves.len()
    );
}

#[test]
fn seeded_suites_pass_and_are_reproducible() {
    let p = params(Lambda::Minus);
    let h = homomorphism_suite(&sphere4(), p, 20, 42);
    assert_eq!(h.checks.len(), 20);
    assert!(h.passed(), "{}", h.to_json());
    assert_eq!(
        h.to_json(),
        homomorphism_suite(&sphere4(), p, 20, 42).to_json()
    );
    let all = fixtures::bundled().unwrap();
    let paths = path_independence_suite(&all, p, 50, 42);
    assert_eq!(paths.checks.len(), 50);
    assert!(paths.passed(), "{}", paths.to_json());
    assert_ne!(
        paths.to_json(),
        path_independence_suite(&all, p, 50, 43).to_json()
    );
}

#[test]
fn linear_parts_multiply_exactly_when_the_first_loop_fixes_the_base_frame() {
    let p = params(Lambda::Minus);
    let (mut fixing, mut moving, mut moving_mismatch) = (0, 0, 0);
    for t in [sphere4(), torus2()] {
        for seed in 0..10 {
            for c in homomorphism_suite(&t, p, 20, seed).checks {
                assert!(c.error.is_none() && c.matches_research, "seed {seed}");
                if c.h1_fixes_base_frame {
                    fixing += 1;
                    assert!(c.matches_product, "seed {seed}");
                } else {
                    moving += 1;
                    moving_mismatch += usize::from(!c.matches_product);
                }
            }
        }
    }
    assert!(fixing > 0 && moving > 0, "{fixing} fixing, {moving} moving");
    assert!(
        moving_mismatch > 0,
        "the frame condition is never exercised"
    );
}
