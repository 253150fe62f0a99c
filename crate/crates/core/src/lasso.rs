//! Spanning trees, facial lasso bases and decomposition of loops in them.

use crate::arrangement::{EdgeWord, PlanarGraph};
use crate::braid::FreeWord;
use crate::error::{Error, Result};
use crate::geometry::Point2;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};

/// Spanning tree given by each vertex's edge towards its parent.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanningTree {
    // letter leading from the parent to the vertex
    parent: Vec<Option<(usize, i8)>>,
    tree_edges: BTreeSet<usize>,
}

impl SpanningTree {
    pub fn tree_edges(&self) -> &BTreeSet<usize> {
        &self.tree_edges
    }

    pub fn contains(&self, edge: usize) -> bool {
        self.tree_edges.contains(&edge)
    }

    fn to_root(&self, g: &PlanarGraph, mut u: usize) -> Vec<(usize, i8)> {
        let mut path = Vec::new();
        while let Some((e, s)) = self.parent[u] {
            path.push((e, -s));
            u = g.tail((e, s));
        }
        path
    }

    /// The unique reduced tree path from `u` to `v`.
    pub fn tree_path(&self, g: &PlanarGraph, u: usize, v: usize) -> EdgeWord {
        let up = EdgeWord::new(self.to_root(g, u));
        let down = EdgeWord::new(self.to_root(g, v)).inverse();
        up.concat(&down).reduced()
    }

    fn from_parents(g: &PlanarGraph, parent: Vec<Option<(usize, i8)>>) -> Result<Self> {
        let n = g.vertices().len();
        if parent.iter().skip(1).any(|p| p.is_none()) || parent.len() != n {
            return Err(Error::Geometry("graph is disconnected".into()));
        }
        let tree_edges = parent.iter().flatten().map(|l| l.0).collect();
        Ok(SpanningTree { parent, tree_edges })
    }
}

fn first_direction(g: &PlanarGraph, letter: (usize, i8)) -> (Point2, Point2) {
    let poly = &g.edge(letter.0).polyline;
    if letter.1 > 0 {
        (poly[0].clone(), poly[1].clone())
    } else {
        (poly[poly.len() - 1].clone(), poly[poly.len() - 2].clone())
    }
}

/// Outgoing letters at each vertex in counterclockwise order.
fn incidence(g: &PlanarGraph) -> Vec<Vec<(usize, i8)>> {
    let mut inc: Vec<Vec<(usize, i8)>> = vec![Vec::new(); g.vertices().len()];
    for e in g.edges() {
        inc[e.from].push((e.id, 1));
        inc[e.to].push((e.id, -1));
    }
    for list in inc.iter_mut() {
        list.sort_by(|&a, &b| {
            let (pa, qa) = first_direction(g, a);
            let (pb, qb) = first_direction(g, b);
            let (da, db) = (qa.sub(&pa), qb.sub(&pb));
            let ha = !(da.1 > num_traits::zero() || (da.1 == num_traits::zero() && da.0 > num_traits::zero()));
            let hb = !(db.1 > num_traits::zero() || (db.1 == num_traits::zero() && db.0 > num_traits::zero()));
            ha.cmp(&hb).then_with(|| {
                let c = crate::geometry::cross(&da, &db);
                if c > num_traits::zero() {
                    Ordering::Less
                } else if c < num_traits::zero() {
                    Ordering::Greater
                } else {
                    Ordering::Equal
                }
            })
        });
    }
    inc
}

/// Breadth-first tree from the origin, scanning edges counterclockwise from the positive x axis.
pub fn spanning_tree(g: &PlanarGraph) -> Result<SpanningTree> {
    let inc = incidence(g);
    let n = g.vertices().len();
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for &l in &inc[u] {
            let v = g.head(l);
            if !seen[v] {
                seen[v] = true;
                parent[v] = Some(l);
                queue.push_back(v);
            }
        }
    }
    SpanningTree::from_parents(g, parent)
}

/// Random spanning tree: Kruskal over a seeded shuffle of the edges.
pub fn random_spanning_tree(g: &PlanarGraph, seed: u64) -> Result<SpanningTree> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ids: Vec<usize> = g.edges().iter().map(|e| e.id).collect();
    ids.shuffle(&mut rng);
    let n = g.vertices().len();
    let mut uf: Vec<usize> = (0..n).collect();
    fn find(uf: &mut [usize], mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    let mut chosen = Vec::new();
    for id in ids {
        let e = g.edge(id);
        let (a, b) = (find(&mut uf, e.from), find(&mut uf, e.to));
        if a != b {
            uf[a] = b;
            chosen.push(id);
        }
    }
    let mut adj: Vec<Vec<(usize, i8)>> = vec![Vec::new(); n];
    for &id in &chosen {
        let e = g.edge(id);
        adj[e.from].push((id, 1));
        adj[e.to].push((id, -1));
    }
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for &l in &adj[u] {
            let v = g.head(l);
            if !seen[v] {
                seen[v] = true;
                parent[v] = Some(l);
                queue.push_back(v);
            }
        }
    }
    SpanningTree::from_parents(g, parent)
}

/// How each face boundary cycle is started.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StartChoice {
    /// Least boundary vertex.
    Canonical,
    /// Random boundary position from the seed.
    Random(u64),
}

/// Facial lassos in a chosen enumeration plus the change of basis from non-tree-edge loops.
#[derive(Debug, Clone)]
pub struct LassoBasis {
    lassos: Vec<EdgeWord>,
    enumeration: Vec<usize>,
    // non-tree edge id -> its lasso [0,u]_T e [v,0]_T as a word in the facial lassos
    edge_lassos: HashMap<usize, FreeWord>,
}

impl LassoBasis {
    /// Lasso of generator `i` (1-based, in enumeration order).
    pub fn lasso(&self, i: usize) -> &EdgeWord {
        &self.lassos[i - 1]
    }

    pub fn lassos(&self) -> &[EdgeWord] {
        &self.lassos
    }

    /// Face id attached to each generator.
    pub fn enumeration(&self) -> &[usize] {
        &self.enumeration
    }

    pub fn rank(&self) -> usize {
        self.lassos.len()
    }

    /// Expression of the non-tree edge lasso through `edge` in the facial lassos.
    pub fn edge_lasso_word(&self, edge: usize) -> Option<&FreeWord> {
        self.edge_lassos.get(&edge)
    }

    /// Edge path of a word in the lassos, reduced.
    pub fn realize(&self, w: &FreeWord) -> EdgeWord {
        let mut out = EdgeWord::default();
        for &(g, s) in w.letters() {
            let l = &self.lassos[g - 1];
            out = out.concat(&if s > 0 { l.clone() } else { l.inverse() });
        }
        out.reduced()
    }
}

/// Canonical basis: faces in the graph's order, boundaries from their least vertex.
pub fn facial_lasso_basis(g: &PlanarGraph, tree: &SpanningTree) -> Result<LassoBasis> {
    facial_lasso_basis_with(g, tree, None, StartChoice::Canonical)
}

/// Basis with an optional enumeration (generator `i` is face `enumeration[i-1]`) and start choice.
pub fn facial_lasso_basis_with(
    g: &PlanarGraph,
    tree: &SpanningTree,
    enumeration: Option<&[usize]>,
    start: StartChoice,
) -> Result<LassoBasis> {
    let k = g.faces().len();
    let enumeration: Vec<usize> = match enumeration {
        Some(e) => {
            let mut sorted = e.to_vec();
            sorted.sort();
            if sorted != (1..=k).collect::<Vec<_>>() {
                return Err(Error::Domain(format!("enumeration {e:?} is not a permutation of 1..={k}")));
            }
            e.to_vec()
        }
        None => (1..=k).collect(),
    };
    let mut rng = match start {
        StartChoice::Random(s) => Some(ChaCha8Rng::seed_from_u64(s)),
        StartChoice::Canonical => None,
    };
    // boundary cycles c_F per face id
    let cycles: Vec<EdgeWord> = g
        .faces()
        .iter()
        .map(|f| match rng.as_mut() {
            Some(r) => g.boundary_rotations(&f.boundary).choose(r).cloned().unwrap(),
            None => f.boundary.clone(),
        })
        .collect();
    let lasso_of = |c: &EdgeWord| -> EdgeWord {
        let v = g.tail(c.letters()[0]);
        let to = tree.tree_path(g, 0, v);
        to.concat(c).concat(&to.inverse())
    };
    let face_lassos: Vec<EdgeWord> = cycles.iter().map(lasso_of).collect();

    let non_tree: Vec<usize> = g.edges().iter().map(|e| e.id).filter(|id| !tree.contains(*id)).collect();
    if non_tree.len() != k {
        return Err(Error::Geometry(format!("{} non-tree edges for {k} bounded faces", non_tree.len())));
    }
    // faces on both sides of each non-tree edge (0 = unbounded face)
    let mut sides: HashMap<usize, Vec<usize>> = HashMap::new();
    for (fi, c) in std::iter::once(g.outer_boundary()).chain(g.faces().iter().map(|f| &f.boundary)).enumerate() {
        for &(e, _) in c.letters() {
            if !tree.contains(e) {
                sides.entry(e).or_default().push(fi);
            }
        }
    }
    let mut dual: Vec<Vec<(usize, usize)>> = vec![Vec::new(); k + 1];
    for &e in &non_tree {
        let s = &sides[&e];
        if s.len() != 2 || s[0] == s[1] {
            return Err(Error::Geometry(format!("non-tree edge {e} does not separate two faces")));
        }
        dual[s[0]].push((s[1], e));
        dual[s[1]].push((s[0], e));
    }
    // dual tree rooted at the unbounded face
    let mut parent_edge = vec![None; k + 1];
    let mut order = Vec::with_capacity(k + 1);
    let mut seen = vec![false; k + 1];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(f) = queue.pop_front() {
        order.push(f);
        for &(h, e) in &dual[f] {
            if !seen[h] {
                seen[h] = true;
                parent_edge[h] = Some(e);
                queue.push_back(h);
            }
        }
    }
    if order.len() != k + 1 {
        return Err(Error::Geometry("non-tree edges do not span the dual graph".into()));
    }
    let index_of: HashMap<usize, usize> = non_tree.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let position: HashMap<usize, usize> = enumeration.iter().enumerate().map(|(i, &f)| (f, i + 1)).collect();
    let mut edge_lassos: HashMap<usize, FreeWord> = HashMap::new();
    for &f in order.iter().rev() {
        if f == 0 {
            continue;
        }
        let ef = parent_edge[f].unwrap();
        // lasso of F = X gamma_{e_F}^sigma Y, every other letter already solved
        let letters: Vec<(usize, i8)> = cycles[f - 1].letters().iter().copied().filter(|(e, _)| index_of.contains_key(e)).collect();
        let at = letters.iter().position(|&(e, _)| e == ef).unwrap();
        let sigma = letters[at].1;
        let solve = |part: &[(usize, i8)]| -> FreeWord {
            part.iter().fold(FreeWord::identity(k), |acc, &(e, s)| {
                let w = &edge_lassos[&e];
                acc.mul(&if s > 0 { w.clone() } else { w.inverse() })
            })
        };
        let x = solve(&letters[..at]);
        let y = solve(&letters[at + 1..]);
        let lf = FreeWord::generator(k, position[&f]);
        let mut gamma = x.inverse().mul(&lf).mul(&y.inverse());
        if sigma < 0 {
            gamma = gamma.inverse();
        }
        edge_lassos.insert(ef, gamma);
    }
    let lassos = enumeration.iter().map(|&f| face_lassos[f - 1].clone()).collect();
    Ok(LassoBasis { lassos, enumeration, edge_lassos })
}

/// Reduced word `w` in the facial lassos with `w(lassos) = word` in the fundamental group.
pub fn decompose_loop(g: &PlanarGraph, word: &EdgeWord, basis: &LassoBasis, tree: &SpanningTree) -> Result<FreeWord> {
    if !g.is_loop_at_origin(word) {
        return Err(Error::NotClosedAtOrigin);
    }
    let mut out = FreeWord::identity(basis.rank());
    for &(e, s) in word.letters() {
        if tree.contains(e) {
            continue;
        }
        let w = basis.edge_lassos.get(&e).ok_or_else(|| Error::Geometry(format!("edge {e} missing from basis")))?;
        out = out.mul(&if s > 0 { w.clone() } else { w.inverse() });
    }
    Ok(out)
}
