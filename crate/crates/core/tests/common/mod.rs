#![allow(dead_code)]

use holonomy_core::arrangement::build_arrangement;
use holonomy_core::geometry::{parse_loop, winding_number, Loop, Point2};
use holonomy_core::lasso::{decompose_loop, facial_lasso_basis, spanning_tree};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn lp(s: &str) -> Loop {
    parse_loop(s).unwrap()
}

/// (name, loops spanning the graph, probe loops evaluated on it).
pub fn test_graphs() -> Vec<(&'static str, Vec<Loop>, Vec<Loop>)> {
    let sq = lp("(0,0) (1,0) (1,1) (0,1)");
    let left = lp("(0,0) (-1,0) (-1,-1) (0,-1)");
    let tri = lp("(0,0) (1,0) (0,1)");
    let fig8 = vec![left.clone(), sq.clone()];
    let comm = left.concat(&sq).concat(&left.reversed()).concat(&sq.reversed());
    vec![
        ("square", vec![sq.clone()], vec![sq.clone(), sq.concat(&sq), sq.reversed()]),
        ("figure-eight", fig8.clone(), vec![left.clone(), sq.clone(), left.concat(&sq), comm, sq.concat(&left).concat(&left)]),
        (
            "square+chord",
            vec![sq.clone(), tri.clone()],
            vec![sq.clone(), tri.clone(), sq.concat(&tri.reversed()), tri.concat(&sq).concat(&tri.reversed()).concat(&sq.reversed())],
        ),
    ]
}

/// Closed polyline from the origin with up to `max_vertices` vertices on the integer grid `[-r, r]^2`.
pub fn random_grid_loop(rng: &mut ChaCha8Rng, max_vertices: usize, r: i64) -> Loop {
    loop {
        let n = rng.random_range(3..=max_vertices);
        let mut v = vec![Point2::origin()];
        for _ in 1..n {
            v.push(Point2::from_ints(rng.random_range(-r..=r), rng.random_range(-r..=r)));
        }
        if let Ok(l) = Loop::new(v) {
            if !l.signed_area().is_zero() {
                return l;
            }
        }
    }
}

/// Like `random_grid_loop` but with halves and thirds in the coordinates.
pub fn random_affine_loop(rng: &mut ChaCha8Rng, max_vertices: usize) -> Loop {
    loop {
        let n = rng.random_range(3..=max_vertices);
        let mut v = vec![Point2::origin()];
        for _ in 1..n {
            let d = [1, 2, 3][rng.random_range(0..3)];
            v.push(Point2::from_ratios(rng.random_range(-3 * d..=3 * d), d, rng.random_range(-3 * d..=3 * d), d));
        }
        if let Ok(l) = Loop::new(v) {
            if !l.signed_area().is_zero() {
                return l;
            }
        }
    }
}

fn cross(o: &Point2, a: &Point2, b: &Point2) -> BigRational {
    let (ax, ay) = a.sub(o);
    let (bx, by) = b.sub(o);
    ax * by - ay * bx
}

fn on_segment(p: &Point2, a: &Point2, b: &Point2) -> bool {
    cross(a, b, p).is_zero() && p.x >= a.x.clone().min(b.x.clone()) && p.x <= a.x.clone().max(b.x.clone()) && p.y >= a.y.clone().min(b.y.clone()) && p.y <= a.y.clone().max(b.y.clone())
}

/// All proper crossings and touching endpoints between two segments, by brute force.
pub fn segment_meets(a: &Point2, b: &Point2, c: &Point2, d: &Point2) -> Vec<Point2> {
    let mut out = Vec::new();
    let (rx, ry) = b.sub(a);
    let (sx, sy) = d.sub(c);
    let denom = &rx * &sy - &ry * &sx;
    if !denom.is_zero() {
        let (qx, qy) = c.sub(a);
        let t = (&qx * &sy - &qy * &sx) / &denom;
        let u = (&qx * &ry - &qy * &rx) / &denom;
        let unit = BigRational::from_integer(1.into());
        if !t.is_negative() && t <= unit && !u.is_negative() && u <= unit {
            out.push(a.lerp(b, &t));
        }
    } else {
        for (p, s0, s1) in [(a, c, d), (b, c, d), (c, a, b), (d, a, b)] {
            if on_segment(p, s0, s1) {
                out.push(p.clone());
            }
        }
    }
    out
}

/// Removes repeated points and straight-through collinear points.
pub fn simplify(pts: &[Point2]) -> Vec<Point2> {
    let mut out: Vec<Point2> = Vec::new();
    for p in pts {
        if out.last() == Some(p) {
            continue;
        }
        if out.len() >= 2 {
            let (a, b) = (&out[out.len() - 2], &out[out.len() - 1]);
            let (d1x, d1y) = b.sub(a);
            let (d2x, d2y) = p.sub(b);
            if (&d1x * &d2y - &d1y * &d2x).is_zero() && (d1x * d2x + d1y * d2y).is_positive() {
                out.pop();
            }
        }
        out.push(p.clone());
    }
    out
}

/// Euler formula, face invariants, brute-force intersections, realize and decompose round trips, winding vectors.
pub fn check_geometry_family(loops: &[Loop]) -> Result<(), String> {
    let (g, words) = build_arrangement(loops).map_err(|e| e.to_string())?;
    let (v, e, f) = (g.vertices().len() as i64, g.edges().len() as i64, g.faces().len() as i64 + 1);
    if v - e + f != 2 {
        return Err(format!("Euler {v} - {e} + {f} != 2"));
    }
    let mut total = BigRational::zero();
    for face in g.faces() {
        if !face.area.is_positive() {
            return Err(format!("face {} area {}", face.id, face.area));
        }
        if winding_number(&g.realize(&face.boundary), &face.interior_point) != 1 {
            return Err(format!("face {} boundary does not wind once", face.id));
        }
        total += &face.area;
    }
    let outer = winding_free_area(&g.realize(g.outer_boundary()));
    if total != -outer.clone() {
        return Err(format!("face areas {total} vs outer boundary {outer}"));
    }
    let segs: Vec<(Point2, Point2)> = loops.iter().flat_map(|l| l.segments()).collect();
    let poly_pts: Vec<Point2> = g.edges().iter().flat_map(|e| e.polyline.iter().cloned()).chain(g.vertices().iter().cloned()).collect();
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            for p in segment_meets(&segs[i].0, &segs[i].1, &segs[j].0, &segs[j].1) {
                if !poly_pts.contains(&p) {
                    return Err(format!("intersection {p} missing from the graph"));
                }
            }
        }
    }
    for (l, w) in loops.iter().zip(&words) {
        let mut want = l.vertices().to_vec();
        want.push(Point2::origin());
        if simplify(&g.realize(w)) != simplify(&want) {
            return Err(format!("loop {l} not realized by {w}"));
        }
    }
    let tree = spanning_tree(&g).map_err(|e| e.to_string())?;
    if g.edges().len() - tree.tree_edges().len() != g.faces().len() {
        return Err("non-tree edge count differs from face count".into());
    }
    let basis = facial_lasso_basis(&g, &tree).map_err(|e| e.to_string())?;
    for (i, lasso) in basis.lassos().iter().enumerate() {
        let pts = g.realize(lasso);
        for (j, face) in g.faces().iter().enumerate() {
            if winding_number(&pts, &face.interior_point) != (i == j) as i64 {
                return Err(format!("lasso {} winds wrongly around face {}", i + 1, j + 1));
            }
        }
    }
    for w in &words {
        let fw = decompose_loop(&g, w, &basis, &tree).map_err(|e| e.to_string())?;
        if basis.realize(&fw).reduced() != w.reduced() {
            return Err(format!("round trip of {w} gives {fw}"));
        }
    }
    Ok(())
}

fn winding_free_area(pts: &[Point2]) -> BigRational {
    let mut s = BigRational::zero();
    for k in 0..pts.len() {
        let (p, q) = (&pts[k], &pts[(k + 1) % pts.len()]);
        s += &p.x * &q.y - &q.x * &p.y;
    }
    s / BigRational::from_integer(2.into())
}
