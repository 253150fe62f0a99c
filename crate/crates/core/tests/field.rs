mod common;

use common::*;
use holonomy_core::field::*;
use holonomy_core::geometry::{dyadic_approx, Loop, Rational};
use holonomy_core::levy::{first_moment, moments, Atom, CharTriplet};
use holonomy_core::Error;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn jumpy() -> CharTriplet {
    CharTriplet::new(0.4, 0.8, vec![Atom { angle: PI / 2.0, weight: 0.3 }, Atom { angle: -2.0, weight: 0.5 }]).unwrap()
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() < 1e-10
}

#[test]
fn context_examples() {
    let sq = lp("(0,0) (1,0) (1,1) (0,1)");
    let ctx = build_context(&[sq.clone()], &CharTriplet::brownian(1.0)).unwrap();
    assert_eq!(ctx.areas(), &[1.0]);
    assert!(close(ctx.marginals().moment(1, 1).unwrap(), Complex64::new((-0.5f64).exp(), 0.0)));
    assert!(ctx.marginals().moment(1, 16).is_ok());

    let (l1, l2) = (lp("(0,0) (1,0) (1,1) (0,1)"), lp("(0,0) (-2,0) (-2,-1) (0,-1)"));
    let ctx = build_context(&[l1, l2], &CharTriplet::brownian(1.0)).unwrap();
    let mut areas = ctx.areas().to_vec();
    areas.sort_by(f64::total_cmp);
    assert_eq!(areas, vec![1.0, 2.0]);
    assert!(matches!(build_context(&[], &CharTriplet::brownian(1.0)), Err(Error::NoLoops)));
}

#[test]
fn trace_examples() {
    for tr in [CharTriplet::brownian(1.0), jumpy()] {
        let tri = lp("(0,0) (3,0) (3,4)");
        let ctx = build_context(&[tri.clone()], &tr).unwrap();
        assert!(close(master_trace(&ctx, &tri).unwrap(), first_moment(&tr, 6.0)));
        assert!(close(master_trace(&ctx, &tri.concat(&tri)).unwrap(), moments(&tr, 6.0, 4).moments[2]));
        assert!(close(master_trace(&ctx, &tri.reversed()).unwrap(), first_moment(&tr, 6.0).conj()));

        let (l1, l2) = (lp("(0,0) (1,0) (1,1) (0,1)"), lp("(0,0) (-2,0) (-2,-1) (0,-1)"));
        let ctx = build_context(&[l1.clone(), l2.clone()], &tr).unwrap();
        let want = first_moment(&tr, 1.0) * first_moment(&tr, 2.0);
        assert!(close(master_trace(&ctx, &l1.concat(&l2)).unwrap(), want));
    }
}

#[test]
fn clockwise_loop_is_the_inverse() {
    let cw = lp("(0,0) (0,1) (1,1) (1,0)");
    let tr = jumpy();
    let ctx = build_context(&[cw.clone()], &tr).unwrap();
    assert!(close(master_trace(&ctx, &cw).unwrap(), first_moment(&tr, 1.0).conj()));
}

#[test]
fn constant_and_unknown_loops() {
    let sq = lp("(0,0) (1,0) (1,1) (0,1)");
    let ctx = build_context(&[sq.clone()], &jumpy()).unwrap();
    assert_eq!(master_trace(&ctx, &Loop::constant()).unwrap(), Complex64::new(1.0, 0.0));
    assert!(master_trace(&ctx, &lp("(0,0) (5,0) (5,5)")).is_err());
}

#[test]
fn distance_examples() {
    let tr = jumpy();
    let c = tr.b / 2.0 + tr.atoms.iter().map(|a| a.weight * (1.0 - a.angle.cos())).sum::<f64>();
    let big_c = 2.0 * c + tr.alpha * tr.alpha;
    for k in 1..=6 {
        let s = 2f64.powi(-k);
        let l = Loop::new(vec![holonomy_core::geometry::Point2::origin(), pt(s, 0.0), pt(s, s), pt(0.0, s)]).unwrap();
        let ctx = build_context(&[l.clone()], &tr).unwrap();
        assert_eq!(loop_distance(&ctx, &l, &l).unwrap(), 0.0);
        let d = loop_distance(&ctx, &l, &Loop::constant()).unwrap();
        let t = s * s;
        assert!((d - (2.0 - 2.0 * first_moment(&tr, t).re).sqrt()).abs() < 1e-12);
        assert!(d <= (big_c * t).sqrt(), "t={t}: {d}");
        assert!((d - loop_distance(&ctx, &Loop::constant(), &l).unwrap()).abs() < 1e-12);
    }
}

fn pt(x: f64, y: f64) -> holonomy_core::geometry::Point2 {
    let r = |v: f64| Rational::from_float(v).unwrap();
    holonomy_core::geometry::Point2::new(r(x), r(y))
}

#[test]
fn area_preserving_maps_keep_traces() {
    let loops = [lp("(0,0) (2,0) (2,2) (0,2)"), lp("(0,0) (1,-1) (1,3)"), lp("(0,0) (-1,1) (2,1)")];
    let tr = jumpy();
    let base = build_context(&loops, &tr).unwrap();
    let probes: Vec<Loop> = vec![loops[0].clone(), loops[1].clone(), loops[2].clone(), loops[0].concat(&loops[1]).concat(&loops[2].reversed())];
    let want: Vec<Complex64> = probes.iter().map(|l| master_trace(&base, l).unwrap()).collect();
    let q = |n: i64, d: i64| Rational::new(n.into(), d.into());
    let maps = [
        [q(1, 1), q(3, 2), q(0, 1), q(1, 1)],
        [q(0, 1), q(-1, 1), q(1, 1), q(0, 1)],
        [q(3, 1), q(0, 1), q(0, 1), q(1, 3)],
        [q(2, 1), q(1, 1), q(1, 1), q(1, 1)],
    ];
    for m in &maps {
        let mapped: Vec<Loop> = loops.iter().map(|l| l.map_linear(m).unwrap()).collect();
        let ctx = build_context(&mapped, &tr).unwrap();
        for (p, w) in probes.iter().zip(&want) {
            let got = master_trace(&ctx, &p.map_linear(m).unwrap()).unwrap();
            assert!((got - w).norm() < 1e-9, "{m:?}");
        }
    }
}

#[test]
fn evaluation_word_is_reversed() {
    let (l1, l2) = (lp("(0,0) (1,0) (1,1) (0,1)"), lp("(0,0) (-2,0) (-2,-1) (0,-1)"));
    let ctx = build_context(&[l1.clone(), l2.clone()], &CharTriplet::brownian(1.0)).unwrap();
    let w = ctx.word(&l1.concat(&l2)).unwrap();
    let ev = ctx.evaluation_word(&l1.concat(&l2)).unwrap();
    assert_eq!(w.len(), 2);
    let gens: Vec<usize> = w.letters().iter().map(|x| x.0).collect();
    let ev_gens: Vec<usize> = ev.letters().iter().map(|x| x.0).collect();
    assert_eq!(ev_gens, vec![gens[1], gens[0]]);
}

#[test]
fn bound_examples() {
    let tr = CharTriplet::brownian(1.0);
    let sq = lp("(0,0) (1,0) (1,1) (0,1)");
    let r = extension_bound_check(&sq, 2, &tr, 1.0).unwrap();
    assert!(r.lhs.abs() < 1e-12 && r.satisfied);
    let quad = lp("(0,0) (3,0) (4,2) (1,3)");
    let r = extension_bound_check(&quad, 2, &tr, 1.0).unwrap();
    assert!(r.satisfied, "{r:?}");
    assert!(r.approx_length < r.length);
    assert!(matches!(extension_bound_check(&quad, 2, &tr, 0.1), Err(Error::PremiseViolated { .. })));
    assert!(check_premise(&tr, 1.0, 50.0).is_ok());
}

#[test]
fn bound_holds_for_jump_triplet_with_certified_k() {
    let tr = jumpy();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..4 {
        let l = random_affine_loop(&mut rng, 6);
        for n in 2..=4 {
            let r = extension_bound_check(&l, n, &tr, 2.5).unwrap();
            assert!(r.satisfied, "{l} n={n}: {r:?}");
            let d = dyadic_approx(&l, n).unwrap();
            assert!((r.approx_length - d.length()).abs() < 1e-12);
        }
    }
}

#[test]
fn audit_examples() {
    let tr = jumpy();
    let simple = invariance_audit(&[lp("(0,0) (1,0) (1,1) (0,1)")], &tr, 4, 1).unwrap();
    assert!(simple.max_deviation < 1e-12, "{simple:?}");
    let fig8 = invariance_audit(&[lp("(0,0) (1,0) (1,1) (0,1)"), lp("(0,0) (-1,0) (-1,-2) (0,-2)")], &tr, 4, 2).unwrap();
    assert!(fig8.max_deviation <= 1e-9, "{fig8:?}");
    assert!(invariance_audit(&[lp("(0,0) (1,0) (1,1) (0,1)")], &tr, 0, 1).is_err());
}

#[test]
fn deep_words_extend_marginals() {
    let sq = lp("(0,0) (1,0) (1,1) (0,1)");
    let ctx = build_context(&[sq.clone()], &jumpy()).unwrap();
    let mut many = sq.clone();
    for _ in 0..19 {
        many = many.concat(&sq);
    }
    let want = moments(&jumpy(), 1.0, 24).moments[20];
    assert!(close(master_trace(&ctx, &many).unwrap(), want));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn inverse_loop_conjugates(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let loops: Vec<Loop> = (0..rng.random_range(1..=3)).map(|_| random_grid_loop(&mut rng, 5, 2)).collect();
        let tr = CharTriplet::new(rng.random_range(-1.0..1.0), rng.random_range(0.0..1.5), vec![Atom { angle: rng.random_range(0.2..3.0), weight: 0.4 }]).unwrap();
        let ctx = build_context(&loops, &tr).unwrap();
        for l in &loops {
            let a = master_trace(&ctx, l).unwrap();
            prop_assert!((master_trace(&ctx, &l.reversed()).unwrap() - a.conj()).norm() < 1e-9);
            prop_assert!(a.norm() <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn traces_ignore_tree_and_enumeration(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let loops: Vec<Loop> = (0..rng.random_range(1..=3)).map(|_| random_grid_loop(&mut rng, 5, 2)).collect();
        let tr = jumpy();
        let base = build_context(&loops, &tr).unwrap();
        let k = base.graph.faces().len();
        let mut perm: Vec<usize> = (1..=k).collect();
        perm.reverse();
        let opts = ContextOptions {
            tree: TreeChoice::Random(seed),
            enumeration: Some(perm),
            start: holonomy_core::lasso::StartChoice::Random(seed ^ 1),
            ..Default::default()
        };
        let other = build_context_with(&loops, &tr, &opts).unwrap();
        let refined = build_context_with(&loops, &tr, &ContextOptions { extra_segments: refinement_chords(&base.graph), ..Default::default() }).unwrap();
        let joint = loops.iter().fold(Loop::constant(), |a, l| a.concat(l));
        for l in loops.iter().chain([&joint]) {
            let a = master_trace(&base, l).unwrap();
            prop_assert!((master_trace(&other, l).unwrap() - a).norm() < 1e-9);
            prop_assert!((master_trace(&refined, l).unwrap() - a).norm() < 1e-9);
        }
    }
}
