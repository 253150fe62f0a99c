mod common;

use common::*;
use holonomy_core::arrangement::{build_arrangement, build_arrangement_with_segments, EdgeWord, PlanarGraph};
use holonomy_core::geometry::{dyadic_approx, dyadic_approx_on_grid, parse_loop, parse_loops, winding_number, Loop, Point2};
use holonomy_core::lasso::{decompose_loop, facial_lasso_basis, facial_lasso_basis_with, random_spanning_tree, spanning_tree, StartChoice};
use holonomy_core::Error;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

#[test]
fn parse_errors_name_the_token() {
    assert_eq!(parse_loop("(0,0) (1,0)"), Err(Error::LoopNotClosed));
    match parse_loop("(0,0) (1,x) (1,1)") {
        Err(Error::Parse { token, .. }) => assert_eq!(token, "(1,x)"),
        other => panic!("{other:?}"),
    }
    match parse_loop("(0,0) (1,0) (1,0) (0,1)") {
        Err(Error::Parse { token, reason }) => assert!(token == "(1,0)" && reason.contains("repeated")),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse_loop("(1,0) (1,1) (0,1)"), Err(Error::Parse { .. })));
    assert!(matches!(parse_loop("(0,0) (1/0,1) (1,1)"), Err(Error::Parse { .. })));
}

#[test]
fn parse_forms() {
    let a = parse_loop("(0,0) (1/2,0) (0.5,0.25) (0,1/4)").unwrap();
    assert_eq!(a.vertices()[2], Point2::from_ratios(1, 2, 1, 4));
    assert_eq!(a.signed_area(), BigRational::new(1.into(), 8.into()));
    let many = parse_loops("# family\n(0,0) (1,0) (1,1) (0,1)\n\n(0,0) (3,0) (3,4)  # triangle\n").unwrap();
    assert_eq!(many.len(), 2);
    assert!((many[1].length() - 12.0).abs() < 1e-12);
}

#[test]
fn loop_algebra() {
    let sq = lp("(0,0) (1,0) (1,1) (0,1)");
    assert_eq!(sq.reversed().signed_area(), -sq.signed_area());
    assert_eq!(sq.reversed().reversed(), sq);
    let twice = sq.concat(&sq);
    assert_eq!(twice.signed_area(), q(2));
    assert!((twice.length() - 8.0).abs() < 1e-12);
    assert_eq!(twice.winding_number(&Point2::from_ratios(1, 2, 1, 2)), 2);
    let m = [q(2), q(1), q(0), q(3)];
    assert_eq!(sq.map_linear(&m).unwrap().signed_area(), q(6));
    assert_eq!(Loop::constant().concat(&sq), sq);
}

#[test]
fn arrangement_examples() {
    let (g, w) = build_arrangement(&[lp("(0,0) (1,0) (1,1) (0,1)")]).unwrap();
    assert_eq!((g.vertices().len(), g.edges().len(), g.faces().len()), (1, 1, 1));
    assert_eq!(g.faces()[0].area, q(1));
    assert_eq!(w[0].len(), 1);

    let (g, _) = build_arrangement(&[lp("(0,0) (-1,0) (-1,-1) (0,-1)"), lp("(0,0) (1,0) (1,1) (0,1)")]).unwrap();
    assert_eq!((g.vertices().len(), g.edges().len(), g.faces().len()), (1, 2, 2));
    assert!(g.faces().iter().all(|f| f.area == q(1)));

    let loops = [lp("(0,0) (2,0) (2,2) (0,2)"), lp("(0,0) (2,2) (2,0)")];
    let (g, _) = build_arrangement(&loops).unwrap();
    let total: BigRational = g.faces().iter().map(|f| f.area.clone()).sum();
    assert_eq!(total, q(4));
    // (2,0) has degree two after the overlap is merged, so it sits inside an edge
    assert!(g.vertices().contains(&Point2::from_ints(2, 2)));
    assert!(g.edges().iter().any(|e| e.polyline.contains(&Point2::from_ints(2, 0))));
    check_geometry_family(&loops).unwrap();
}

#[test]
fn crossing_loops_get_crossing_vertices() {
    let loops = [lp("(0,0) (2,0) (2,2) (0,2)"), lp("(0,0) (1,-1) (1,3)")];
    let (g, _) = build_arrangement(&loops).unwrap();
    for p in [Point2::from_ints(1, 0), Point2::from_ints(1, 2)] {
        assert!(g.vertices().contains(&p), "{p}");
    }
    check_geometry_family(&loops).unwrap();
}

#[test]
fn collinear_overlaps_are_split() {
    let loops = [lp("(0,0) (3,0) (3,1) (0,1)"), lp("(0,0) (1,0) (2,0) (2,-1)"), lp("(0,0) (3,0) (3,-1)")];
    check_geometry_family(&loops).unwrap();
    let (g, _) = build_arrangement(&loops).unwrap();
    let total: BigRational = g.faces().iter().map(|f| f.area.clone()).sum();
    // rectangle 3, lower triangles 1 + 5/6
    assert_eq!(total, BigRational::new(29.into(), 6.into()));
}

#[test]
fn backtracking_loop() {
    let l = parse_loop("(0,0) (1,0) (0,0)").unwrap();
    let (g, w) = build_arrangement(&[l.clone()]).unwrap();
    assert!(g.faces().is_empty());
    assert_eq!(w[0].reduced(), EdgeWord::default());
    check_geometry_family(&[l, lp("(0,0) (0,1) (-1,1)")]).unwrap();
}

#[test]
fn spanning_tree_examples() {
    let (g, _) = build_arrangement(&[lp("(0,0) (-1,0) (-1,-1) (0,-1)"), lp("(0,0) (1,0) (1,1) (0,1)")]).unwrap();
    assert!(spanning_tree(&g).unwrap().tree_edges().is_empty());
    let (g, _) = build_arrangement(&[lp("(0,0) (1,0) (1,1) (0,1)"), lp("(0,0) (1,0) (0,1)")]).unwrap();
    let t = spanning_tree(&g).unwrap();
    assert_eq!(t.tree_edges().len(), g.vertices().len() - 1);
    for u in 0..g.vertices().len() {
        assert!(t.tree_path(&g, u, u).is_empty());
        for v in 0..g.vertices().len() {
            assert_eq!(t.tree_path(&g, u, v), t.tree_path(&g, v, u).inverse());
        }
    }
}

#[test]
fn graph_json_round_trip() {
    let loops = [lp("(0,0) (2,0) (2,2) (0,2)"), lp("(0,0) (1/3,-1) (1,3)")];
    let (g, w) = build_arrangement(&loops).unwrap();
    let v = g.to_json(&w);
    let text = serde_json::to_string(&v).unwrap();
    let (h, w2) = PlanarGraph::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(w2, w);
    assert_eq!(h.vertices(), g.vertices());
    assert_eq!(h.edges().len(), g.edges().len());
    assert_eq!(h.faces().iter().map(|f| f.area.clone()).collect::<Vec<_>>(), g.faces().iter().map(|f| f.area.clone()).collect::<Vec<_>>());
    for (l, word) in loops.iter().zip(&w) {
        assert_eq!(h.trace_loop(l).unwrap(), *word);
    }
}

#[test]
fn json_keeps_big_integers() {
    let big = "(0,0) (123456789012345678901234567890,0) (0,1)";
    let (g, w) = build_arrangement(&[lp(big)]).unwrap();
    let v = g.to_json(&w);
    assert!(v.to_string().contains("\"123456789012345678901234567890\""));
    let (h, _) = PlanarGraph::from_json(&v).unwrap();
    assert_eq!(h.vertices(), g.vertices());
}

#[test]
fn refinement_chords_split_faces() {
    let loops = [lp("(0,0) (1,0) (1,1) (0,1)"), lp("(0,0) (-1,0) (-1,-1) (0,-1)")];
    let (g, _) = build_arrangement(&loops).unwrap();
    let chords: Vec<_> = g.faces().iter().map(|f| g.face_chord(f)).collect();
    let (h, w) = build_arrangement_with_segments(&loops, &chords).unwrap();
    assert_eq!(h.faces().len(), 2 * g.faces().len());
    let sum = |g: &PlanarGraph| g.faces().iter().map(|f| f.area.clone()).sum::<BigRational>();
    assert_eq!(sum(&h), sum(&g));
    for (l, word) in loops.iter().zip(&w) {
        assert_eq!(h.trace_loop(l).unwrap(), *word);
    }
}

#[test]
fn bases_under_all_choices_are_facial() {
    let loops = [lp("(0,0) (2,0) (2,2) (0,2)"), lp("(0,0) (1,-1) (1,3)"), lp("(0,0) (-1,1) (2,1)")];
    let (g, words) = build_arrangement(&loops).unwrap();
    let k = g.faces().len();
    for seed in 0..6u64 {
        let tree = random_spanning_tree(&g, seed).unwrap();
        assert_eq!(g.edges().len() - tree.tree_edges().len(), k);
        let mut perm: Vec<usize> = (1..=k).collect();
        perm.rotate_left(seed as usize % k);
        let b = facial_lasso_basis_with(&g, &tree, Some(&perm), StartChoice::Random(seed)).unwrap();
        assert_eq!(b.enumeration(), &perm[..]);
        for (i, lasso) in b.lassos().iter().enumerate() {
            assert!(g.is_loop_at_origin(lasso));
            let pts = g.realize(lasso);
            for (j, f) in g.faces().iter().enumerate() {
                assert_eq!(winding_number(&pts, &f.interior_point), (perm[i] == j + 1) as i64);
            }
        }
        for w in &words {
            let fw = decompose_loop(&g, w, &b, &tree).unwrap();
            assert_eq!(b.realize(&fw).reduced(), w.reduced());
        }
    }
}

#[test]
fn dyadic_examples() {
    let sq = lp("(0,0) (1,0) (1,1) (0,1)");
    assert_eq!(dyadic_approx(&sq, 2).unwrap(), sq);
    assert!(dyadic_approx(&sq, 0).unwrap().is_constant());
    let d1 = dyadic_approx(&sq, 1).unwrap();
    assert_eq!(d1.vertices(), &[Point2::origin(), Point2::from_ints(1, 1)]);
    let d3 = dyadic_approx(&sq, 3).unwrap();
    assert_eq!(d3.vertices().len(), 8);
    assert!((d3.length() - 4.0).abs() < 1e-12);
    let tri = lp("(0,0) (3,0) (3,4)");
    assert!(matches!(dyadic_approx_on_grid(&tri, 12, 2), Err(Error::GridTooCoarse(_, _))));
}

#[test]
fn dyadic_lengths_increase() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..20 {
        let l = random_affine_loop(&mut rng, 8);
        let mut prev = 0.0;
        for n in 1..=8 {
            let d = dyadic_approx(&l, n).unwrap();
            assert!(d.length() >= prev - 1e-9 && d.length() <= l.length() + 1e-9, "{l} n={n}");
            prev = d.length();
        }
    }
}

#[test]
fn convex_dyadic_areas_increase() {
    let hexagon = lp("(0,0) (2,0) (3,1) (2,3) (0,3) (-1,1)");
    let mut prev = BigRational::from_integer(0.into());
    for n in 1..=7 {
        let a = dyadic_approx(&hexagon, n).unwrap().signed_area();
        assert!(a >= prev);
        prev = a;
    }
}

#[test]
fn brute_force_intersections_match_graph() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let loops: Vec<Loop> = (0..rng.random_range(2..=3)).map(|_| random_affine_loop(&mut rng, 5)).collect();
        check_geometry_family(&loops).unwrap_or_else(|e| panic!("{e}: {loops:?}"));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn random_grid_families(seed in any::<u64>(), count in 1usize..=3, r in 1i64..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let loops: Vec<Loop> = (0..count).map(|_| random_grid_loop(&mut rng, 6, r)).collect();
        if let Err(e) = check_geometry_family(&loops) {
            prop_assert!(false, "{}: {:?}", e, loops.iter().map(|l| l.to_string()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn winding_adds_under_concatenation(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (random_grid_loop(&mut rng, 5, 3), random_grid_loop(&mut rng, 5, 3));
        let p = Point2::from_ratios(rng.random_range(-7..=7), 2 * rng.random_range(1..=3) + 1, rng.random_range(-7..=7), 2 * rng.random_range(1..=3) + 1);
        let ab = a.concat(&b);
        let on_curve = ab.segments().iter().any(|(s, t)| !segment_meets(s, t, &p, &p).is_empty());
        prop_assume!(!on_curve);
        prop_assert_eq!(ab.winding_number(&p), a.winding_number(&p) + b.winding_number(&p));
        prop_assert_eq!(ab.signed_area(), a.signed_area() + b.signed_area());
    }
}

#[test]
fn edge_word_algebra() {
    let w = EdgeWord::new(vec![(1, 1), (2, -1), (2, 1), (3, 1)]);
    assert_eq!(w.reduced(), EdgeWord::new(vec![(1, 1), (3, 1)]));
    assert_eq!(w.concat(&w.inverse()).reduced(), EdgeWord::default());
    assert_eq!(EdgeWord::from_signed_ids(&w.signed_ids()).unwrap(), w);
    assert!(EdgeWord::from_signed_ids(&[0]).is_err());
    assert_eq!(EdgeWord::new(vec![(1, 1), (2, -1)]).to_string(), "e1 e2^-1");
    let _ = facial_lasso_basis;
}
