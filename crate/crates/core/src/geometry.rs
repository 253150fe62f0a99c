//! Exact points and origin-based polygonal loops.

use crate::error::{parse_err, Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};
use std::fmt;

pub type Rational = BigRational;

/// Point with exact rational coordinates; ordered lexicographically by `(x, y)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point2 {
    pub x: Rational,
    pub y: Rational,
}

impl Point2 {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point2 { x, y }
    }

    pub fn origin() -> Self {
        Point2 { x: Rational::zero(), y: Rational::zero() }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point2 { x: Rational::from_integer(x.into()), y: Rational::from_integer(y.into()) }
    }

    /// Point from ratios `xn/xd`, `yn/yd`.
    pub fn from_ratios(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        Point2 { x: Rational::new(xn.into(), xd.into()), y: Rational::new(yn.into(), yd.into()) }
    }

    pub fn is_origin(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64().unwrap_or(f64::NAN), self.y.to_f64().unwrap_or(f64::NAN))
    }

    pub fn sub(&self, o: &Point2) -> (Rational, Rational) {
        (&self.x - &o.x, &self.y - &o.y)
    }

    pub fn lerp(&self, o: &Point2, t: &Rational) -> Point2 {
        Point2 { x: &self.x + (&o.x - &self.x) * t, y: &self.y + (&o.y - &self.y) * t }
    }

    pub fn midpoint(&self, o: &Point2) -> Point2 {
        let two = Rational::from_integer(2.into());
        Point2 { x: (&self.x + &o.x) / &two, y: (&self.y + &o.y) / &two }
    }

    pub fn dist(&self, o: &Point2) -> f64 {
        let (dx, dy) = o.sub(self);
        let (dx, dy) = (dx.to_f64().unwrap_or(f64::NAN), dy.to_f64().unwrap_or(f64::NAN));
        dx.hypot(dy)
    }

    /// Image under `(x, y) -> (a x + b y, c x + d y)`.
    pub fn linear_map(&self, m: &[Rational; 4]) -> Point2 {
        Point2 { x: &m[0] * &self.x + &m[1] * &self.y, y: &m[2] * &self.x + &m[3] * &self.y }
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

pub(crate) fn cross(a: &(Rational, Rational), b: &(Rational, Rational)) -> Rational {
    &a.0 * &b.1 - &a.1 * &b.0
}

pub(crate) fn dot(a: &(Rational, Rational), b: &(Rational, Rational)) -> Rational {
    &a.0 * &b.0 + &a.1 * &b.1
}

/// Closed polyline based at the origin. The closing segment back to the origin is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct Loop {
    vertices: Vec<Point2>,
    length: f64,
}

impl Loop {
    /// Validates a vertex list starting at the origin; a repeated final origin is dropped.
    pub fn new(mut vertices: Vec<Point2>) -> Result<Self> {
        if vertices.first().is_none_or(|p| !p.is_origin()) {
            return Err(Error::Geometry("loop must start at the origin".into()));
        }
        if vertices.len() > 1 && vertices.last().unwrap().is_origin() {
            vertices.pop();
        }
        if vertices.len() == 1 {
            return Err(Error::LoopNotClosed);
        }
        for i in 0..vertices.len() {
            if vertices[i] == vertices[(i + 1) % vertices.len()] {
                return Err(Error::Geometry(format!("repeated consecutive vertex {}", vertices[i])));
            }
        }
        let n = vertices.len();
        let length = (0..n).map(|i| vertices[i].dist(&vertices[(i + 1) % n])).sum();
        Ok(Loop { vertices, length })
    }

    /// The constant loop at the origin.
    pub fn constant() -> Self {
        Loop { vertices: vec![Point2::origin()], length: 0.0 }
    }

    pub fn is_constant(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Segments `(v_i, v_{i+1})` including the closing one.
    pub fn segments(&self) -> Vec<(Point2, Point2)> {
        let n = self.vertices.len();
        if n < 2 {
            return Vec::new();
        }
        (0..n).map(|i| (self.vertices[i].clone(), self.vertices[(i + 1) % n].clone())).collect()
    }

    pub fn reversed(&self) -> Loop {
        if self.is_constant() {
            return self.clone();
        }
        let mut v = vec![self.vertices[0].clone()];
        v.extend(self.vertices[1..].iter().rev().cloned());
        Loop { vertices: v, length: self.length }
    }

    /// Concatenation: first `self`, then `other`.
    pub fn concat(&self, other: &Loop) -> Loop {
        let mut v = self.vertices.clone();
        v.extend(other.vertices.iter().cloned());
        if other.is_constant() {
            v.pop();
        }
        if self.is_constant() {
            v.remove(0);
        }
        if v.len() <= 1 {
            return Loop::constant();
        }
        Loop { length: self.length + other.length, vertices: v }
    }

    /// Signed shoelace area enclosed (with multiplicity).
    pub fn signed_area(&self) -> Rational {
        let n = self.vertices.len();
        let mut acc = Rational::zero();
        for i in 0..n {
            let (a, b) = (&self.vertices[i], &self.vertices[(i + 1) % n]);
            acc += &a.x * &b.y - &b.x * &a.y;
        }
        acc / Rational::from_integer(2.into())
    }

    pub fn map_linear(&self, m: &[Rational; 4]) -> Result<Loop> {
        if self.is_constant() {
            return Ok(self.clone());
        }
        Loop::new(self.vertices.iter().map(|p| p.linear_map(m)).collect())
    }

    /// Exact winding number of the loop around a point not on it.
    pub fn winding_number(&self, p: &Point2) -> i64 {
        winding_number(&self.vertices, p)
    }
}

impl fmt::Display for Loop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Winding number of the closed polyline `pts` (implicitly closed) around `p`.
pub fn winding_number(pts: &[Point2], p: &Point2) -> i64 {
    let n = pts.len();
    let mut w = 0i64;
    for i in 0..n {
        let (a, b) = (&pts[i], &pts[(i + 1) % n]);
        let side = cross(&b.sub(a), &p.sub(a));
        if a.y <= p.y {
            if b.y > p.y && side.is_positive() {
                w += 1;
            }
        } else if b.y <= p.y && side.is_negative() {
            w -= 1;
        }
    }
    w
}

fn parse_rational(tok: &str, whole: &str) -> Result<Rational> {
    let s = tok.trim();
    let bad = || parse_err(whole, format!("non-rational coordinate `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.trim_start().starts_with('-');
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let ip = if ip.is_empty() || ip == "-" || ip == "+" { format!("{ip}0") } else { ip.to_string() };
        let i: BigInt = ip.parse().map_err(|_| bad())?;
        let f: BigInt = fp.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), fp.len());
        let frac = Rational::new(f, scale);
        let int = Rational::from_integer(i);
        return Ok(if neg { int - frac } else { int + frac });
    }
    Ok(Rational::from_integer(s.parse::<BigInt>().map_err(|_| bad())?))
}

/// Parses `"(0,0) (1,0) (1,1) (0,1)"`. The final return to the origin may be written or left implicit;
/// an implicit closure needs at least three vertices.
pub fn parse_loop(text: &str) -> Result<Loop> {
    let mut pts = Vec::new();
    let mut toks = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        if !rest.starts_with('(') {
            let tok = rest.split_whitespace().next().unwrap_or(rest);
            return Err(parse_err(tok, "expected `(x,y)`"));
        }
        let close = rest.find(')').ok_or_else(|| parse_err(rest, "missing `)`"))?;
        let tok = &rest[..=close];
        let inner = &tok[1..tok.len() - 1];
        let (xs, ys) = inner.split_once(',').ok_or_else(|| parse_err(tok, "expected `(x,y)`"))?;
        pts.push(Point2::new(parse_rational(xs, tok)?, parse_rational(ys, tok)?));
        toks.push(tok.to_string());
        rest = rest[close + 1..].trim_start();
    }
    if pts.is_empty() {
        return Err(parse_err(text, "empty loop"));
    }
    if !pts[0].is_origin() {
        return Err(parse_err(&toks[0], "loop must start at (0,0)"));
    }
    for i in 1..pts.len() {
        if pts[i] == pts[i - 1] {
            return Err(parse_err(&toks[i], "repeated consecutive vertex"));
        }
    }
    let explicit = pts.len() > 1 && pts.last().unwrap().is_origin();
    if explicit {
        pts.pop();
        toks.pop();
    }
    if pts.len() < 2 || (!explicit && pts.len() < 3) {
        return Err(Error::LoopNotClosed);
    }
    if pts.last() == pts.first() {
        return Err(parse_err(toks.last().unwrap(), "repeated consecutive vertex"));
    }
    Loop::new(pts)
}

/// Loops file: one loop per line, `#` comments and blank lines ignored.
pub fn parse_loops(text: &str) -> Result<Vec<Loop>> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(parse_loop)
        .collect()
}

/// Default snapping grid for dyadic samples: denominator `2^64`.
pub const DEFAULT_GRID_BITS: u32 = 64;

/// Polygon through the arclength samples at multiples of `2^{-n} length`, snapped to the default grid.
pub fn dyadic_approx(l: &Loop, n: u32) -> Result<Loop> {
    dyadic_approx_on_grid(l, n, DEFAULT_GRID_BITS)
}

pub fn dyadic_approx_on_grid(l: &Loop, n: u32, grid_bits: u32) -> Result<Loop> {
    if l.is_constant() || n == 0 {
        return Ok(Loop::constant());
    }
    if n > 30 {
        return Err(Error::Domain(format!("dyadic level {n} too large")));
    }
    let segs = l.segments();
    let lens: Vec<f64> = segs.iter().map(|(a, b)| a.dist(b)).collect();
    let total = l.length;
    let count = 1usize << n;
    let denom = Rational::from_integer(num_traits::pow(BigInt::from(2), grid_bits as usize));
    let scale = 2f64.powi(grid_bits as i32);
    let snap = |v: f64| -> Rational {
        let k = BigInt::from_f64((v * scale).round()).unwrap_or_default();
        Rational::from_integer(k) / &denom
    };
    let tol = 1e-12 * total;
    let mut pts: Vec<Point2> = Vec::with_capacity(count);
    let mut seg = 0usize;
    let mut start = 0.0f64;
    for k in 0..count {
        let s = total * k as f64 / count as f64;
        while seg + 1 < segs.len() && start + lens[seg] <= s + tol {
            start += lens[seg];
            seg += 1;
        }
        let (a, b) = &segs[seg];
        let p = if (s - start).abs() <= tol {
            a.clone()
        } else if (start + lens[seg] - s).abs() <= tol {
            b.clone()
        } else {
            let u = (s - start) / lens[seg];
            let (ax, ay) = a.to_f64();
            let (bx, by) = b.to_f64();
            Point2::new(snap(ax + u * (bx - ax)), snap(ay + u * (by - ay)))
        };
        pts.push(p);
    }
    for i in 0..count {
        if pts[i] == pts[(i + 1) % count] {
            return Err(Error::GridTooCoarse(i, (i + 1) % count));
        }
    }
    Loop::new(pts)
}
