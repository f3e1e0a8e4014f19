//! Integration tests for triangulation combinatorics on the bundled surfaces.

use proptest::prelude::*;
use qtgrav::exact::Matrix;
use qtgrav::fixtures;
use qtgrav::triangulation::*;
use qtgrav::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn all() -> Vec<LabeledTriangulation> {
    fixtures::bundled().expect("fixtures load")
}

fn sphere4() -> LabeledTriangulation {
    fixtures::load("example_0_4.json").unwrap()
}

/// Hand-derived exchange matrix of the tetrahedral four-punctured sphere.
///
/// Arcs are the tetrahedron edges AB, AC, AD, BC, BD, CD (labels 1..6) and the
/// faces are ABC, ACD, ADB, BDC oriented outward. Each entry was read off the
/// face list by counting, per face, which edge follows which counterclockwise.
const SPHERE4_EPS: [[i64; 6]; 6] = [
    [0, -1, 1, 1, -1, 0],
    [1, 0, -1, -1, 0, 1],
    [-1, 1, 0, 0, 1, -1],
    [-1, 1, 0, 0, 1, -1],
    [1, 0, -1, -1, 0, 1],
    [0, -1, 1, 1, -1, 0],
];

/// Hand-derived valences; punctures are ordered A, D, B, C by their first
/// corner in canonical triangle order.
const SPHERE4_VAL: [[i64; 4]; 6] = [
    [1, 0, 1, 0],
    [1, 0, 0, 1],
    [1, 1, 0, 0],
    [0, 0, 1, 1],
    [0, 1, 1, 0],
    [0, 1, 0, 1],
];

#[test]
fn sphere4_exchange_matrix_matches_hand_count() {
    let e = exchange_matrix(&sphere4());
    let eps: Vec<Vec<i64>> = SPHERE4_EPS.iter().map(|r| r.to_vec()).collect();
    let val: Vec<Vec<i64>> = SPHERE4_VAL.iter().map(|r| r.to_vec()).collect();
    assert_eq!(e.eps, eps);
    assert_eq!(e.valences, val);
    assert_eq!(sphere4().corner_cycles().len(), 4);
}

#[test]
fn fixture_shapes() {
    for (t, (g, n)) in all().iter().zip([(0, 3), (0, 4), (1, 2)]) {
        let sig = t.signature();
        assert_eq!((sig.genus, sig.punctures), (g, n));
        assert_eq!(t.arc_count(), 6 * g + 3 * n - 6);
        assert_eq!(t.triangles().len(), 4 * g + 2 * n - 4);
        let euler =
            t.triangles().len() as i64 - t.arc_count() as i64 + t.corner_cycles().len() as i64;
        assert_eq!(euler, 2 - 2 * g as i64);
    }
}

fn check_kernel(t: &LabeledTriangulation) {
    let e = exchange_matrix(t);
    let m = e.arc_count();
    for i in 0..m {
        for j in 0..m {
            assert_eq!(e.eps[i][j], -e.eps[j][i]);
        }
    }
    for p in 0..e.puncture_count() {
        let v = e.valence_column(p);
        for row in &e.eps {
            assert_eq!(row.iter().zip(&v).map(|(a, b)| a * b).sum::<i64>(), 0);
        }
        assert!(v.iter().all(|&x| (0..=2).contains(&x)));
    }
    let val: Matrix<Rational> = Matrix::from_int_rows(&e.valences);
    let eps: Matrix<Rational> = Matrix::from_int_rows(&e.eps);
    let n = t.signature().punctures;
    assert_eq!(val.rank(), n);
    assert_eq!(eps.kernel_dim(), n);
}

#[test]
fn kernel_properties_on_fixtures_and_random_flips() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for t in all() {
        let mut cur = t.clone();
        check_kernel(&cur);
        for _ in 0..40 {
            let k = rng.gen_range(0..cur.arc_count());
            if let Ok(next) = flip(&cur, k) {
                cur = next;
                check_kernel(&cur);
            }
        }
    }
}

#[test]
fn flip_commutes_with_mutation_on_random_walks() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    for t in all() {
        let mut cur = t;
        for _ in 0..200 {
            let k = rng.gen_range(0..cur.arc_count());
            let Ok(next) = flip(&cur, k) else { continue };
            assert_eq!(
                exchange_matrix(&next).eps,
                mutate_exchange(&exchange_matrix(&cur).eps, k)
            );
            cur = next;
            checked += 1;
        }
    }
    assert!(checked >= 200, "only {checked} flips checked");
}

fn legal_flips(t: &LabeledTriangulation) -> Vec<usize> {
    (0..t.arc_count()).filter(|&k| flip(t, k).is_ok()).collect()
}

#[test]
fn twice_flip_is_identity() {
    for t in all() {
        for k in legal_flips(&t) {
            assert_eq!(flip(&flip(&t, k).unwrap(), k).unwrap(), t);
        }
    }
}

fn flips(
    t: &LabeledTriangulation,
    seq: &[usize],
) -> Result<LabeledTriangulation, TriangulationError> {
    seq.iter().try_fold(t.clone(), |cur, &k| flip(&cur, k))
}

#[test]
fn quadrilateral_relation() {
    let mut instances = 0;
    for t in all() {
        let e = exchange_matrix(&t);
        for i in 0..t.arc_count() {
            for j in 0..t.arc_count() {
                if i == j || e.eps[i][j] != 0 {
                    continue;
                }
                if let Ok(end) = flips(&t, &[i, j, i, j]) {
                    assert_eq!(end, t, "quadrilateral relation at ({i},{j})");
                    instances += 1;
                }
            }
        }
    }
    assert!(instances > 0);
}

#[test]
fn pentagon_relation_from_either_end() {
    let mut instances = 0;
    for t in all() {
        let e = exchange_matrix(&t);
        for i in 0..t.arc_count() {
            for j in 0..t.arc_count() {
                if e.eps[i][j].abs() != 1 {
                    continue;
                }
                // On the tetrahedral sphere the sequence can pass through a
                // puncture of valence one; those instances are skipped.
                let Ok(end) = flips(&t, &[i, j, i, j, i]) else {
                    continue;
                };
                let swap = Permutation::transposition(t.arc_count(), i, j);
                assert_eq!(permute(&end, &swap), t, "pentagon at ({i},{j})");
                instances += 1;
            }
        }
    }
    assert!(instances > 0);
}

#[test]
fn permutation_relations() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for t in all() {
        let m = t.arc_count();
        assert_eq!(permute(&t, &Permutation::identity(m)), t);
        for _ in 0..20 {
            let mut images: Vec<usize> = (0..m).collect();
            for i in (1..m).rev() {
                images.swap(i, rng.gen_range(0..=i));
            }
            let sigma = Permutation::new(images).unwrap();
            assert_eq!(permute(&permute(&t, &sigma), &sigma.inverse()), t);
            let gamma = Permutation::transposition(m, 0, m - 1);
            let lhs = permute(&permute(&t, &gamma), &sigma);
            assert_eq!(lhs, permute(&t, &sigma.compose(&gamma)));
            for i in legal_flips(&t) {
                let a = permute(&flip(&t, i).unwrap(), &sigma);
                let b = flip(&permute(&t, &sigma), sigma.apply(i)).unwrap();
                assert_eq!(a, b);
            }
        }
    }
}

#[test]
fn find_path_trivial_cases() {
    let t = sphere4();
    assert!(find_path(&t, &t, 3).unwrap().moves.is_empty());
    let k = legal_flips(&t)[0];
    let w = find_path(&t, &flip(&t, k).unwrap(), 1).unwrap();
    assert_eq!(w.end().unwrap(), flip(&t, k).unwrap());
    assert_eq!(
        w.moves
            .iter()
            .filter(|m| matches!(m, Move::Flip(_)))
            .count(),
        1
    );
}

#[test]
fn find_path_reports_radius() {
    let t = fixtures::load("example_1_2.json").unwrap();
    let far = flips(&t, &[0, 1, 2, 3]).unwrap_or_else(|_| t.clone());
    if find_path(&t, &far, 0).is_ok() {
        return; // `far` happens to be a relabeling of `t`
    }
    assert_eq!(
        find_path(&t, &far, 0).unwrap_err(),
        TriangulationError::NotFound { radius: 0 }
    );
}

#[test]
fn loops() {
    let t = fixtures::load("example_1_2.json").unwrap();
    let empty = MappingClassLoop {
        word: GroupoidWord::empty(t.clone()),
        closing_iso: None,
    };
    assert!(verify_loop(&empty));
    let k = legal_flips(&t)[0];
    let one = MappingClassLoop {
        word: GroupoidWord {
            start: t.clone(),
            moves: vec![Move::Flip(k)],
        },
        closing_iso: None,
    };
    assert!(!verify_loop(&one));
    let e = exchange_matrix(&t);
    let (i, j) = (0, (0..6).find(|&j| e.eps[0][j].abs() == 1).unwrap());
    let pentagon = MappingClassLoop {
        word: GroupoidWord {
            start: t.clone(),
            moves: [i, j, i, j, i].map(Move::Flip).to_vec(),
        },
        closing_iso: Some(Permutation::transposition(t.arc_count(), i, j)),
    };
    assert!(verify_loop(&pentagon));
}

#[test]
fn pentagon_loop_has_base_frame() {
    // The pentagon returns to the start triangulation and to the base frame,
    // so it is a trivial mapping class.
    let t = fixtures::load("example_1_2.json").unwrap();
    let e = exchange_matrix(&t);
    let j = (0..6).find(|&j| e.eps[0][j].abs() == 1).unwrap();
    let mut w = GroupoidWord {
        start: t.clone(),
        moves: [0, j, 0, j, 0].map(Move::Flip).to_vec(),
    };
    w.moves
        .push(Move::Permute(Permutation::transposition(6, 0, j)));
    assert_eq!(w.end_frame().unwrap(), Frame::base(t.clone()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_words_are_found_again(fixture in 0usize..3, seq in proptest::collection::vec(0usize..6, 0..=6)) {
        let t = all()[fixture].clone();
        let m = t.arc_count();
        let mut cur = t.clone();
        for k in seq {
            if let Ok(next) = flip(&cur, k % m) {
                cur = next;
            }
        }
        let w = find_path(&t, &cur, 6).unwrap();
        prop_assert_eq!(w.end().unwrap(), cur);
    }

    #[test]
    fn framed_search_recovers_frames(seq in proptest::collection::vec(0usize..6, 0..=4)) {
        let t = sphere4();
        let mut f = Frame::base(t.clone());
        for k in seq {
            if let Ok(next) = f.flip(k) {
                f = next;
            }
        }
        let w = find_path_framed(&t, &f, 4).unwrap();
        prop_assert_eq!(w.end_frame().unwrap(), f);
    }
}
