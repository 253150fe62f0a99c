//! Planar graph induced by a family of loops: exact splitting, contraction and face tracing.

use crate::error::{Error, Result};
use crate::geometry::{cross, dot, Loop, Point2, Rational};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

/// Path in the graph as signed edge ids (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct EdgeWord {
    letters: Vec<(usize, i8)>,
}

impl EdgeWord {
    pub fn new(letters: Vec<(usize, i8)>) -> Self {
        EdgeWord { letters }
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Removes every backtrack `e e^{-1}`.
    pub fn reduced(&self) -> EdgeWord {
        let mut out: Vec<(usize, i8)> = Vec::with_capacity(self.letters.len());
        for &(e, s) in &self.letters {
            match out.last() {
                Some(&(le, ls)) if le == e && ls == -s => {
                    out.pop();
                }
                _ => out.push((e, s)),
            }
        }
        EdgeWord { letters: out }
    }

    pub fn inverse(&self) -> EdgeWord {
        EdgeWord { letters: self.letters.iter().rev().map(|&(e, s)| (e, -s)).collect() }
    }

    pub fn concat(&self, other: &EdgeWord) -> EdgeWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        EdgeWord { letters }
    }

    pub fn signed_ids(&self) -> Vec<i64> {
        self.letters.iter().map(|&(e, s)| e as i64 * s as i64).collect()
    }

    pub fn from_signed_ids(ids: &[i64]) -> Result<EdgeWord> {
        ids.iter()
            .map(|&i| if i == 0 { Err(Error::Domain("edge id 0".into())) } else { Ok((i.unsigned_abs() as usize, i.signum() as i8)) })
            .collect::<Result<Vec<_>>>()
            .map(EdgeWord::new)
    }
}

impl fmt::Display for EdgeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.letters.iter().map(|&(e, s)| if s > 0 { format!("e{e}") } else { format!("e{e}^-1") }).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Polyline edge between two graph vertices (indices into [`PlanarGraph::vertices`]).
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub id: usize,
    pub from: usize,
    pub to: usize,
    pub polyline: Vec<Point2>,
}

/// Bounded face with its counterclockwise boundary started at the least boundary vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub id: usize,
    pub boundary: EdgeWord,
    pub area: Rational,
    pub interior_point: Point2,
}

impl Face {
    pub fn area_f64(&self) -> f64 {
        self.area.to_f64().unwrap_or(f64::NAN)
    }
}

#[derive(Debug, Clone, Default)]
struct SegGraph {
    points: Vec<Point2>,
    index: HashMap<Point2, usize>,
    adj: Vec<Vec<usize>>,
    vertex_of: Vec<Option<usize>>,
    // directed piece -> (edge index, sign, position along the traversal)
    dir: HashMap<(usize, usize), (usize, i8, usize)>,
}

/// Embedded graph with rational vertices, polyline edges and bounded faces.
#[derive(Debug, Clone)]
pub struct PlanarGraph {
    vertices: Vec<Point2>,
    edges: Vec<Edge>,
    faces: Vec<Face>,
    outer: EdgeWord,
    seg: SegGraph,
}

fn half(d: &(Rational, Rational)) -> u8 {
    if d.1.is_positive() || (d.1.is_zero() && d.0.is_positive()) {
        0
    } else {
        1
    }
}

/// Counterclockwise order of directions starting from the positive x axis.
fn angle_cmp(a: &(Rational, Rational), b: &(Rational, Rational)) -> Ordering {
    half(a).cmp(&half(b)).then_with(|| {
        let c = cross(a, b);
        if c.is_positive() {
            Ordering::Less
        } else if c.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

/// Points of segment `cd` lying on segment `ab`.
fn points_on(a: &Point2, b: &Point2, c: &Point2, d: &Point2, out: &mut Vec<Point2>) {
    let (ax, bx) = if a.x <= b.x { (&a.x, &b.x) } else { (&b.x, &a.x) };
    let (cx, dx) = if c.x <= d.x { (&c.x, &d.x) } else { (&d.x, &c.x) };
    let (ay, by) = if a.y <= b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
    let (cy, dy) = if c.y <= d.y { (&c.y, &d.y) } else { (&d.y, &c.y) };
    if bx < cx || dx < ax || by < cy || dy < ay {
        return;
    }
    let r = b.sub(a);
    let s = d.sub(c);
    let qp = c.sub(a);
    let denom = cross(&r, &s);
    if !denom.is_zero() {
        let t = cross(&qp, &s) / &denom;
        let u = cross(&qp, &r) / &denom;
        let zero = Rational::zero();
        let one = Rational::from_integer(1.into());
        if t >= zero && t <= one && u >= zero && u <= one {
            out.push(a.lerp(b, &t));
        }
    } else if cross(&qp, &r).is_zero() {
        let rr = dot(&r, &r);
        for p in [c, d] {
            let k = dot(&p.sub(a), &r);
            if !k.is_negative() && k <= rr {
                out.push(p.clone());
            }
        }
    }
}

/// Builds the arrangement of `loops`; returns the graph and each loop's (unreduced) edge word.
pub fn build_arrangement(loops: &[Loop]) -> Result<(PlanarGraph, Vec<EdgeWord>)> {
    build_arrangement_with_segments(loops, &[])
}

/// As [`build_arrangement`], with extra segments (for instance chords) added to the drawing.
pub fn build_arrangement_with_segments(loops: &[Loop], extra: &[(Point2, Point2)]) -> Result<(PlanarGraph, Vec<EdgeWord>)> {
    let paths: Vec<Vec<Point2>> = loops.iter().map(|l| l.vertices().to_vec()).collect();
    build(&paths, extra, &[])
}

fn build(paths: &[Vec<Point2>], extra: &[(Point2, Point2)], forced: &[Point2]) -> Result<(PlanarGraph, Vec<EdgeWord>)> {
    let mut input: Vec<(Point2, Point2)> = Vec::new();
    let mut owner: Vec<Vec<usize>> = Vec::new();
    for p in paths {
        let n = p.len();
        let mut ids = Vec::new();
        if n >= 2 {
            for i in 0..n {
                ids.push(input.len());
                input.push((p[i].clone(), p[(i + 1) % n].clone()));
            }
        }
        owner.push(ids);
    }
    for (a, b) in extra {
        if a != b {
            input.push((a.clone(), b.clone()));
        }
    }

    let mut seg = SegGraph::default();
    let intern = |p: &Point2, seg: &mut SegGraph| -> usize {
        if let Some(&i) = seg.index.get(p) {
            return i;
        }
        let i = seg.points.len();
        seg.points.push(p.clone());
        seg.index.insert(p.clone(), i);
        i
    };
    intern(&Point2::origin(), &mut seg);
    for p in forced {
        intern(p, &mut seg);
    }
    let mut pieces_of: Vec<Vec<usize>> = Vec::with_capacity(input.len());
    let mut undirected: HashSet<(usize, usize)> = HashSet::new();
    for (i, (a, b)) in input.iter().enumerate() {
        let mut pts = vec![a.clone(), b.clone()];
        for (j, (c, d)) in input.iter().enumerate() {
            if i != j {
                points_on(a, b, c, d, &mut pts);
            }
        }
        let r = b.sub(a);
        let mut keyed: Vec<(Rational, Point2)> = pts.into_iter().map(|p| (dot(&p.sub(a), &r), p)).collect();
        keyed.sort_by(|x, y| x.0.cmp(&y.0));
        keyed.dedup_by(|x, y| x.0 == y.0);
        let ids: Vec<usize> = keyed.iter().map(|(_, p)| intern(p, &mut seg)).collect();
        for w in ids.windows(2) {
            undirected.insert((w[0].min(w[1]), w[0].max(w[1])));
        }
        pieces_of.push(ids);
    }

    let np = seg.points.len();
    seg.adj = vec![Vec::new(); np];
    let mut und: Vec<(usize, usize)> = undirected.into_iter().collect();
    und.sort();
    for &(u, v) in &und {
        seg.adj[u].push(v);
        seg.adj[v].push(u);
    }
    for u in 0..np {
        let pu = seg.points[u].clone();
        let pts = &seg.points;
        seg.adj[u].sort_by(|&a, &b| angle_cmp(&pts[a].sub(&pu), &pts[b].sub(&pu)));
    }

    // connectivity from the origin
    let mut seen = vec![false; np];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for &v in &seg.adj[u] {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    if let Some(bad) = seen.iter().position(|s| !s) {
        return Err(Error::Geometry(format!("drawing is disconnected from the origin at {}", seg.points[bad])));
    }

    // point sequence of each loop
    let loop_points: Vec<Vec<usize>> = owner
        .iter()
        .map(|ids| {
            let mut seq: Vec<usize> = Vec::new();
            for &s in ids {
                let p = &pieces_of[s];
                if seq.is_empty() {
                    seq.extend_from_slice(p);
                } else {
                    seq.extend_from_slice(&p[1..]);
                }
            }
            seq
        })
        .collect();

    let mut kept = vec![false; np];
    kept[0] = true;
    for p in forced {
        kept[seg.index[p]] = true;
    }
    for (u, a) in seg.adj.iter().enumerate() {
        if a.len() != 2 {
            kept[u] = true;
        }
    }
    for seq in &loop_points {
        // seq is closed: first == last
        let m = seq.len().saturating_sub(1);
        for k in 0..m {
            let prev = seq[(k + m - 1) % m];
            let next = seq[k + 1];
            if prev == next {
                kept[seq[k]] = true;
            }
        }
    }
    let mut order: Vec<usize> = (1..np).filter(|&u| kept[u]).collect();
    order.sort_by(|&a, &b| seg.points[a].cmp(&seg.points[b]));
    order.insert(0, 0);
    seg.vertex_of = vec![None; np];
    for (vi, &u) in order.iter().enumerate() {
        seg.vertex_of[u] = Some(vi);
    }
    let vertices: Vec<Point2> = order.iter().map(|&u| seg.points[u].clone()).collect();

    // contraction into polyline edges
    let mut edges: Vec<Edge> = Vec::new();
    let mut edge_points: Vec<Vec<usize>> = Vec::new();
    for &v in &order {
        for &w0 in &seg.adj[v].clone() {
            if seg.dir.contains_key(&(v, w0)) {
                continue;
            }
            let mut chain = vec![v, w0];
            while !kept[*chain.last().unwrap()] {
                let cur = *chain.last().unwrap();
                let prev = chain[chain.len() - 2];
                let next = if seg.adj[cur][0] == prev { seg.adj[cur][1] } else { seg.adj[cur][0] };
                chain.push(next);
            }
            let ei = edges.len();
            let m = chain.len() - 1;
            for j in 0..m {
                seg.dir.insert((chain[j], chain[j + 1]), (ei, 1, j));
                seg.dir.insert((chain[j + 1], chain[j]), (ei, -1, m - 1 - j));
            }
            edges.push(Edge {
                id: ei + 1,
                from: seg.vertex_of[v].unwrap(),
                to: seg.vertex_of[*chain.last().unwrap()].unwrap(),
                polyline: chain.iter().map(|&u| seg.points[u].clone()).collect(),
            });
            edge_points.push(chain);
        }
    }

    // faces
    let mut visited: HashSet<(usize, usize)> = HashSet::new();
    let mut bounded: Vec<(Vec<(usize, usize)>, Rational)> = Vec::new();
    let mut outer_cycles: Vec<Vec<(usize, usize)>> = Vec::new();
    for chain in &edge_points {
        for dirn in [false, true] {
            for j in 0..chain.len() - 1 {
                let start = if dirn { (chain[j + 1], chain[j]) } else { (chain[j], chain[j + 1]) };
                if visited.contains(&start) {
                    continue;
                }
                let mut cycle = Vec::new();
                let mut h = start;
                loop {
                    visited.insert(h);
                    cycle.push(h);
                    let (u, v) = h;
                    let a = &seg.adj[v];
                    let idx = a.iter().position(|&x| x == u).unwrap();
                    h = (v, a[(idx + a.len() - 1) % a.len()]);
                    if h == start {
                        break;
                    }
                }
                let mut twice = Rational::zero();
                for &(u, v) in &cycle {
                    let (p, q) = (&seg.points[u], &seg.points[v]);
                    twice += &p.x * &q.y - &q.x * &p.y;
                }
                if twice.is_positive() {
                    bounded.push((cycle, twice / Rational::from_integer(2.into())));
                } else {
                    outer_cycles.push(cycle);
                }
            }
        }
    }
    if edges.is_empty() {
        outer_cycles.push(Vec::new());
    }
    if outer_cycles.len() != 1 {
        return Err(Error::Geometry(format!("expected one unbounded face, found {}", outer_cycles.len())));
    }

    let mut graph = PlanarGraph { vertices, edges, faces: Vec::new(), outer: EdgeWord::default(), seg };
    graph.outer = graph.cycle_word(&outer_cycles[0])?;
    let mut faces = Vec::new();
    for (cycle, area) in &bounded {
        let word = graph.cycle_word(cycle)?;
        let boundary = graph.canonical_rotation(&word);
        let interior_point = graph.probe(&boundary);
        faces.push(Face { id: 0, boundary, area: area.clone(), interior_point });
    }
    faces.sort_by(|a, b| (&a.interior_point.y, &a.interior_point.x).cmp(&(&b.interior_point.y, &b.interior_point.x)));
    for (i, f) in faces.iter_mut().enumerate() {
        f.id = i + 1;
    }
    graph.faces = faces;

    let words = loop_points.iter().map(|seq| graph.pieces_to_word(seq)).collect::<Result<Vec<_>>>()?;
    let (v, e, f) = (graph.vertices.len() as i64, graph.edges.len() as i64, graph.faces.len() as i64 + 1);
    if v - e + f != 2 {
        return Err(Error::Geometry(format!("Euler check failed: {v} - {e} + {f} != 2")));
    }
    Ok((graph, words))
}

impl PlanarGraph {
    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Bounded faces in canonical enumeration order.
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    /// Boundary of the unbounded face.
    pub fn outer_boundary(&self) -> &EdgeWord {
        &self.outer
    }

    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id - 1]
    }

    /// Vertex where the letter starts.
    pub fn tail(&self, letter: (usize, i8)) -> usize {
        let e = self.edge(letter.0);
        if letter.1 > 0 {
            e.from
        } else {
            e.to
        }
    }

    pub fn head(&self, letter: (usize, i8)) -> usize {
        self.tail((letter.0, -letter.1))
    }

    /// Whether the word is a path that starts and ends at the origin.
    pub fn is_loop_at_origin(&self, word: &EdgeWord) -> bool {
        let mut cur = 0usize;
        for &l in word.letters() {
            if l.0 == 0 || l.0 > self.edges.len() || self.tail(l) != cur {
                return false;
            }
            cur = self.head(l);
        }
        cur == 0
    }

    /// Polyline traced by a path (consecutive duplicates removed).
    pub fn realize(&self, word: &EdgeWord) -> Vec<Point2> {
        let mut pts = vec![self.vertices[if word.is_empty() { 0 } else { self.tail(word.letters()[0]) }].clone()];
        for &(e, s) in word.letters() {
            let poly = &self.edge(e).polyline;
            let seq: Box<dyn Iterator<Item = &Point2>> = if s > 0 { Box::new(poly.iter()) } else { Box::new(poly.iter().rev()) };
            for p in seq.skip(1) {
                pts.push(p.clone());
            }
        }
        pts
    }

    fn letter_len(&self, e: usize) -> usize {
        self.edges[e - 1].polyline.len() - 1
    }

    fn cycle_word(&self, cycle: &[(usize, usize)]) -> Result<EdgeWord> {
        if cycle.is_empty() {
            return Ok(EdgeWord::default());
        }
        let start = cycle.iter().position(|h| self.seg.dir[h].2 == 0).ok_or_else(|| Error::Geometry("face without a vertex".into()))?;
        let n = cycle.len();
        let mut letters = Vec::new();
        let mut k = 0;
        while k < n {
            let (ei, s, _) = self.seg.dir[&cycle[(start + k) % n]];
            letters.push((ei + 1, s));
            k += self.letter_len(ei + 1);
        }
        Ok(EdgeWord::new(letters))
    }

    /// Rotation of a boundary cycle starting at its least vertex (ties: least letter sequence).
    fn canonical_rotation(&self, word: &EdgeWord) -> EdgeWord {
        let n = word.len();
        let l = word.letters();
        let best_vertex = (0..n).map(|k| &self.vertices[self.tail(l[k])]).min().unwrap();
        let rot = |k: usize| -> Vec<(usize, i8)> { (0..n).map(|i| l[(k + i) % n]).collect() };
        let k = (0..n).filter(|&k| &self.vertices[self.tail(l[k])] == best_vertex).min_by_key(|&k| rot(k)).unwrap();
        EdgeWord::new(rot(k))
    }

    /// Rotations of a face boundary starting at each occurrence of a boundary vertex.
    pub fn boundary_rotations(&self, boundary: &EdgeWord) -> Vec<EdgeWord> {
        let n = boundary.len();
        let l = boundary.letters();
        (0..n).map(|k| EdgeWord::new((0..n).map(|i| l[(k + i) % n]).collect())).collect()
    }

    /// Point inside the face on the left of the first piece of `boundary`.
    fn probe(&self, boundary: &EdgeWord) -> Point2 {
        let (m, hit) = self.probe_ray(boundary);
        m.midpoint(&hit)
    }

    /// Chord of a bounded face from a boundary midpoint to the first boundary point straight across.
    pub fn face_chord(&self, face: &Face) -> (Point2, Point2) {
        self.probe_ray(&face.boundary)
    }

    fn probe_ray(&self, boundary: &EdgeWord) -> (Point2, Point2) {
        let (e, s) = boundary.letters()[0];
        let poly = &self.edge(e).polyline;
        let (a, b) = if s > 0 { (&poly[0], &poly[1]) } else { (&poly[poly.len() - 1], &poly[poly.len() - 2]) };
        let m = a.midpoint(b);
        let d = b.sub(a);
        let n = (-d.1.clone(), d.0.clone());
        let mut best: Option<Rational> = None;
        let mut consider = |t: Rational| {
            if t.is_positive() && best.as_ref().is_none_or(|b| &t < b) {
                best = Some(t);
            }
        };
        for (u, adj) in self.seg.adj.iter().enumerate() {
            for &v in adj {
                if u > v {
                    continue;
                }
                let (p, q) = (&self.seg.points[u], &self.seg.points[v]);
                let r = q.sub(p);
                let denom = cross(&n, &r);
                let mp = p.sub(&m);
                if !denom.is_zero() {
                    let t = cross(&mp, &r) / &denom;
                    let w = cross(&mp, &n) / &denom;
                    if !w.is_negative() && w <= Rational::from_integer(1.into()) {
                        consider(t);
                    }
                } else if cross(&mp, &n).is_zero() {
                    let nn = dot(&n, &n);
                    consider(dot(&mp, &n) / &nn);
                    consider(dot(&q.sub(&m), &n) / &nn);
                }
            }
        }
        let t = best.expect("a ray from a bounded face hits its boundary");
        let hit = Point2::new(&m.x + &n.0 * &t, &m.y + &n.1 * &t);
        (m, hit)
    }

    fn pieces_to_word(&self, seq: &[usize]) -> Result<EdgeWord> {
        let mut letters = Vec::new();
        let mut k = 0;
        while k + 1 < seq.len() {
            let (ei, s, pos) = *self.seg.dir.get(&(seq[k], seq[k + 1])).ok_or_else(|| Error::NotInGraph("missing piece".into()))?;
            if pos != 0 {
                return Err(Error::NotInGraph("path turns inside an edge".into()));
            }
            let m = self.letter_len(ei + 1);
            for j in 1..m {
                match self.seg.dir.get(&(seq[k + j], *seq.get(k + j + 1).unwrap_or(&usize::MAX))) {
                    Some(&(e2, s2, p2)) if e2 == ei && s2 == s && p2 == j => {}
                    _ => return Err(Error::NotInGraph("path turns inside an edge".into())),
                }
            }
            letters.push((ei + 1, s));
            k += m;
        }
        Ok(EdgeWord::new(letters))
    }

    /// Edge word of a loop whose segments are unions of graph pieces.
    pub fn trace_loop(&self, l: &Loop) -> Result<EdgeWord> {
        if l.is_constant() {
            return Ok(EdgeWord::default());
        }
        let mut seq = vec![0usize];
        for (p, q) in l.segments() {
            let target = *self.seg.index.get(&q).ok_or_else(|| Error::NotInGraph(format!("vertex {q}")))?;
            let mut cur = *seq.last().unwrap();
            if self.seg.points[cur] != p {
                return Err(Error::NotInGraph(format!("vertex {p}")));
            }
            let dq = q.sub(&p);
            while cur != target {
                let pc = &self.seg.points[cur];
                let to_q = q.sub(pc);
                let next = self.seg.adj[cur].iter().copied().find(|&w| {
                    let dw = self.seg.points[w].sub(pc);
                    cross(&dw, &dq).is_zero() && dot(&dw, &dq).is_positive() && dot(&q.sub(&self.seg.points[w]), &to_q) >= Rational::zero()
                });
                cur = next.ok_or_else(|| Error::NotInGraph(format!("segment {p}-{q}")))?;
                seq.push(cur);
            }
        }
        self.pieces_to_word(&seq)
    }

    /// Graph JSON with optional loop words.
    pub fn to_json(&self, loop_words: &[EdgeWord]) -> Value {
        let pt = |p: &Point2| json!([big(p.x.numer()), big(p.x.denom()), big(p.y.numer()), big(p.y.denom())]);
        json!({
            "vertices": self.vertices.iter().map(pt).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|e| json!({
                "id": e.id, "from": e.from, "to": e.to,
                "polyline": e.polyline.iter().map(pt).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "faces": self.faces.iter().map(|f| json!({
                "id": f.id,
                "boundary": f.boundary.signed_ids(),
                "area": [big(f.area.numer()), big(f.area.denom())],
                "interior_point": pt(&f.interior_point),
            })).collect::<Vec<_>>(),
            "outer_boundary": self.outer.signed_ids(),
            "loop_words": loop_words.iter().map(|w| w.signed_ids()).collect::<Vec<_>>(),
        })
    }

    /// Rebuilds a graph from its JSON (vertices and edge polylines; faces are recomputed).
    pub fn from_json(v: &Value) -> Result<(PlanarGraph, Vec<EdgeWord>)> {
        let bad = |m: &str| Error::Parse { token: "graph json".into(), reason: m.into() };
        let pt = |x: &Value| -> Result<Point2> {
            let a = x.as_array().filter(|a| a.len() == 4).ok_or_else(|| bad("point must be [xnum,xden,ynum,yden]"))?;
            let n: Vec<BigInt> = a.iter().map(parse_big).collect::<Option<_>>().ok_or_else(|| bad("bad integer"))?;
            if n[1].is_zero() || n[3].is_zero() {
                return Err(bad("zero denominator"));
            }
            Ok(Point2::new(Rational::new(n[0].clone(), n[1].clone()), Rational::new(n[2].clone(), n[3].clone())))
        };
        let verts = v["vertices"].as_array().ok_or_else(|| bad("missing vertices"))?.iter().map(pt).collect::<Result<Vec<_>>>()?;
        let mut segs = Vec::new();
        for e in v["edges"].as_array().ok_or_else(|| bad("missing edges"))? {
            let poly = e["polyline"].as_array().ok_or_else(|| bad("missing polyline"))?.iter().map(pt).collect::<Result<Vec<_>>>()?;
            for w in poly.windows(2) {
                segs.push((w[0].clone(), w[1].clone()));
            }
        }
        let (g, _) = build(&[], &segs, &verts)?;
        let words = match v.get("loop_words").and_then(|w| w.as_array()) {
            Some(ws) => ws
                .iter()
                .map(|w| {
                    let ids: Vec<i64> = w.as_array().ok_or_else(|| bad("loop word"))?.iter().map(|x| x.as_i64().ok_or_else(|| bad("edge id"))).collect::<Result<_>>()?;
                    EdgeWord::from_signed_ids(&ids)
                })
                .collect::<Result<Vec<_>>>()?,
            None => Vec::new(),
        };
        Ok((g, words))
    }
}

fn big(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(i) => json!(i),
        None => json!(n.to_string()),
    }
}

fn parse_big(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
}
