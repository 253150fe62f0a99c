//! Mixed moments of words in freely independent unitaries.

use crate::error::{parse_err, Error, Result};
use crate::levy::MomentSeries;
use num_complex::Complex64;
use std::collections::HashMap;
use std::fmt;

/// Words longer than this (after cyclic reduction) go to the free-product evaluator.
pub const CENTERING_MAX_LETTERS: usize = 12;
/// Default length bound of [`word_moment_nc`].
pub const NC_MAX_LETTERS: usize = 12;

/// A word `g_{i_1}^{e_1} ... g_{i_n}^{e_n}` in canonical form (1-based generators).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PowerWord {
    letters: Vec<(usize, i64)>,
}

impl PowerWord {
    /// Builds the canonical form: adjacent equal generators merged, zero powers dropped.
    pub fn new(letters: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut out: Vec<(usize, i64)> = Vec::new();
        for (g, e) in letters {
            push_merge(&mut out, g, e);
        }
        PowerWord { letters: out }
    }

    pub fn empty() -> Self {
        PowerWord::default()
    }

    pub fn letters(&self) -> &[(usize, i64)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        PowerWord { letters: self.letters.iter().rev().map(|&(g, e)| (g, -e)).collect() }
    }

    pub fn concat(&self, other: &PowerWord) -> Self {
        PowerWord::new(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn pow(&self, n: usize) -> Self {
        PowerWord::new((0..n).flat_map(|_| self.letters.iter().copied()))
    }

    /// Word read backwards with the same exponents.
    pub fn reversed(&self) -> Self {
        PowerWord::new(self.letters.iter().rev().copied())
    }

    pub fn max_generator(&self) -> usize {
        self.letters.iter().map(|l| l.0).max().unwrap_or(0)
    }

    /// Sum of `|e|` over letters of each generator (index 0 unused).
    pub fn exponent_mass(&self) -> Vec<usize> {
        let mut mass = vec![0usize; self.max_generator() + 1];
        for &(g, e) in &self.letters {
            mass[g] += e.unsigned_abs() as usize;
        }
        mass
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let body = tok.strip_prefix('a').ok_or_else(|| parse_err(tok, "expected a<index>[^<exp>]"))?;
            let (idx, exp) = match body.split_once('^') {
                Some((i, e)) => (i, e.parse::<i64>().map_err(|_| parse_err(tok, "bad exponent"))?),
                None => (body, 1),
            };
            let g: usize = idx.parse().map_err(|_| parse_err(tok, "bad generator index"))?;
            if g == 0 {
                return Err(parse_err(tok, "generator indices start at 1"));
            }
            letters.push((g, exp));
        }
        Ok(PowerWord::new(letters))
    }
}

impl fmt::Display for PowerWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|&(g, e)| if e == 1 { format!("a{g}") } else { format!("a{g}^{e}") })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

fn push_merge(out: &mut Vec<(usize, i64)>, g: usize, e: i64) {
    if e == 0 {
        return;
    }
    match out.last_mut() {
        Some(last) if last.0 == g => {
            last.1 += e;
            if last.1 == 0 {
                out.pop();
            }
        }
        _ => out.push((g, e)),
    }
}

/// Moment sequences of the free generators, generator `i` at index `i - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Marginals {
    pub series: Vec<MomentSeries>,
}

impl Marginals {
    pub fn new(series: Vec<MomentSeries>) -> Self {
        Marginals { series }
    }

    pub fn rank(&self) -> usize {
        self.series.len()
    }

    pub fn moment(&self, g: usize, e: i64) -> Result<Complex64> {
        let s = self.series.get(g.wrapping_sub(1)).ok_or(Error::RankMismatch { expected: self.series.len(), got: g })?;
        s.get(e).ok_or(Error::DepthExhausted { generator: g, needed: e.unsigned_abs() as usize, available: s.depth() })
    }

    /// Fails unless every power reachable while evaluating `word` is available.
    pub fn check_depth(&self, word: &PowerWord) -> Result<()> {
        for (g, &need) in word.exponent_mass().iter().enumerate().skip(1) {
            if need == 0 {
                continue;
            }
            self.moment(g, 0)?;
            let have = self.series[g - 1].depth();
            if have < need {
                return Err(Error::DepthExhausted { generator: g, needed: need, available: have });
            }
        }
        Ok(())
    }
}

/// Cyclically reduced representative with the least rotation.
fn cyclic_canonical(letters: &[(usize, i64)]) -> Vec<(usize, i64)> {
    let mut w: Vec<(usize, i64)> = Vec::with_capacity(letters.len());
    for &(g, e) in letters {
        push_merge(&mut w, g, e);
    }
    while w.len() >= 2 && w[0].0 == w[w.len() - 1].0 {
        let (_, e) = w.pop().unwrap();
        w[0].1 += e;
        if w[0].1 == 0 {
            w.remove(0);
        }
    }
    let n = w.len();
    if n <= 1 {
        return w;
    }
    let best = (0..n)
        .min_by(|&a, &b| (0..n).map(|i| w[(a + i) % n]).cmp((0..n).map(|i| w[(b + i) % n])))
        .unwrap();
    w.rotate_left(best);
    w
}

/// `tau(word)` for freely independent unitaries with the given marginals.
///
/// Short words use the centering recursion; longer ones the reduced free-product evaluator.
pub fn word_moment(word: &PowerWord, marginals: &Marginals) -> Result<Complex64> {
    marginals.check_depth(word)?;
    let mut memo = HashMap::new();
    centering(&cyclic_canonical(&word.letters), marginals, &mut memo, CENTERING_MAX_LETTERS)
}

/// Centering recursion only, for any length.
pub fn word_moment_centering(word: &PowerWord, marginals: &Marginals) -> Result<Complex64> {
    marginals.check_depth(word)?;
    let mut memo = HashMap::new();
    centering(&cyclic_canonical(&word.letters), marginals, &mut memo, usize::MAX)
}

type Memo = HashMap<Vec<(usize, i64)>, Complex64>;

fn centering(w: &[(usize, i64)], marg: &Marginals, memo: &mut Memo, fock_above: usize) -> Result<Complex64> {
    match w.len() {
        0 => return Ok(Complex64::new(1.0, 0.0)),
        1 => return marg.moment(w[0].0, w[0].1),
        _ => {}
    }
    if let Some(v) = memo.get(w) {
        return Ok(*v);
    }
    // a generator occurring once factors out by freeness and traciality
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for &(g, _) in w {
        *counts.entry(g).or_default() += 1;
    }
    let value = if let Some(pos) = w.iter().position(|(g, _)| counts[g] == 1) {
        let n = w.len();
        let rest: Vec<(usize, i64)> = (1..n).map(|i| w[(pos + i) % n]).collect();
        marg.moment(w[pos].0, w[pos].1)? * centering(&cyclic_canonical(&rest), marg, memo, fock_above)?
    } else if w.len() > fock_above {
        fock_moment(w, marg)?
    } else {
        let n = w.len();
        let neg_m: Vec<Complex64> = w.iter().map(|&(g, e)| marg.moment(g, e).map(|m| -m)).collect::<Result<_>>()?;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut rest = Vec::with_capacity(n);
        for mask in 1u64..(1u64 << n) {
            let mut coef = Complex64::new(1.0, 0.0);
            rest.clear();
            for (j, l) in w.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    coef *= neg_m[j];
                } else {
                    rest.push(*l);
                }
            }
            if coef == Complex64::new(0.0, 0.0) {
                continue;
            }
            acc += coef * centering(&cyclic_canonical(&rest), marg, memo, fock_above)?;
        }
        -acc
    };
    memo.insert(w.to_vec(), value);
    Ok(value)
}

/// Vacuum expectation in the reduced free product: letters act right to left on the vacuum,
/// states are stacks of centered powers (top = last).
pub fn word_moment_fock(word: &PowerWord, marginals: &Marginals) -> Result<Complex64> {
    marginals.check_depth(word)?;
    fock_moment(word.letters(), marginals)
}

fn fock_moment(w: &[(usize, i64)], marg: &Marginals) -> Result<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let mut states: HashMap<Vec<(usize, i64)>, Complex64> = HashMap::new();
    states.insert(Vec::new(), Complex64::new(1.0, 0.0));
    for p in (0..w.len()).rev() {
        let (g, e) = w[p];
        let me = marg.moment(g, e)?;
        let mut next: HashMap<Vec<(usize, i64)>, Complex64> = HashMap::with_capacity(states.len() * 2);
        let add = |st: Vec<(usize, i64)>, c: Complex64, next: &mut HashMap<Vec<(usize, i64)>, Complex64>| {
            if c != zero && viable(&st, &w[..p]) {
                *next.entry(st).or_insert(zero) += c;
            }
        };
        for (st, c) in states {
            match st.last() {
                Some(&(tg, f)) if tg == g => {
                    let mf = marg.moment(g, f)?;
                    let mef = marg.moment(g, e + f)?;
                    if e + f != 0 {
                        let mut s1 = st.clone();
                        s1.last_mut().unwrap().1 = e + f;
                        add(s1, c, &mut next);
                    }
                    let mut s2 = st.clone();
                    s2.last_mut().unwrap().1 = e;
                    add(s2, -c * mf, &mut next);
                    let mut s3 = st;
                    s3.pop();
                    add(s3, c * (mef - me * mf), &mut next);
                }
                _ => {
                    let mut s1 = st.clone();
                    s1.push((g, e));
                    add(s1, c, &mut next);
                    add(st, c * me, &mut next);
                }
            }
        }
        states = next;
    }
    Ok(states.get(&Vec::new()).copied().unwrap_or(zero))
}

/// Whether the remaining letters (applied right to left) can still pop every stack entry.
fn viable(stack: &[(usize, i64)], remaining: &[(usize, i64)]) -> bool {
    let mut need = stack.iter().rev().map(|l| l.0).peekable();
    for &(g, _) in remaining.iter().rev() {
        match need.peek() {
            None => return true,
            Some(&n) if n == g => {
                need.next();
            }
            _ => {}
        }
    }
    need.peek().is_none()
}

/// Sum over monochromatic non-crossing partitions of products of free cumulants.
pub fn word_moment_nc(word: &PowerWord, marginals: &Marginals) -> Result<Complex64> {
    word_moment_nc_bounded(word.letters(), marginals, NC_MAX_LETTERS)
}

/// As [`word_moment_nc`] on a raw letter sequence (no canonicalization) with an explicit bound.
pub fn word_moment_nc_bounded(letters: &[(usize, i64)], marginals: &Marginals, bound: usize) -> Result<Complex64> {
    if letters.len() > bound {
        return Err(Error::WordTooLong { len: letters.len(), bound });
    }
    let raw = PowerWord { letters: letters.to_vec() };
    marginals.check_depth(&raw)?;
    let mut nc = NcEval { w: letters, marg: marginals, intervals: HashMap::new(), cumulants: HashMap::new() };
    nc.interval(0, letters.len())
}

struct NcEval<'a> {
    w: &'a [(usize, i64)],
    marg: &'a Marginals,
    intervals: HashMap<(usize, usize), Complex64>,
    cumulants: HashMap<(usize, Vec<i64>), Complex64>,
}

impl NcEval<'_> {
    /// Partition sum over positions `lo..hi`.
    fn interval(&mut self, lo: usize, hi: usize) -> Result<Complex64> {
        if lo >= hi {
            return Ok(Complex64::new(1.0, 0.0));
        }
        if let Some(v) = self.intervals.get(&(lo, hi)) {
            return Ok(*v);
        }
        let g = self.w[lo].0;
        let same: Vec<usize> = (lo + 1..hi).filter(|&i| self.w[i].0 == g).collect();
        let mut total = Complex64::new(0.0, 0.0);
        for mask in 0u64..(1u64 << same.len()) {
            let mut block = vec![lo];
            block.extend(same.iter().enumerate().filter(|(j, _)| mask >> j & 1 == 1).map(|(_, &p)| p));
            let exps: Vec<i64> = block.iter().map(|&p| self.w[p].1).collect();
            let mut term = self.cumulant(g, &exps)?;
            if term == Complex64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..block.len() {
                let end = if k + 1 < block.len() { block[k + 1] } else { hi };
                term *= self.interval(block[k] + 1, end)?;
            }
            total += term;
        }
        self.intervals.insert((lo, hi), total);
        Ok(total)
    }

    /// Free cumulant of `(a^{e_1}, .., a^{e_r})` by Möbius inversion of the moment-cumulant relation.
    fn cumulant(&mut self, g: usize, exps: &[i64]) -> Result<Complex64> {
        let key = (g, exps.to_vec());
        if let Some(v) = self.cumulants.get(&key) {
            return Ok(*v);
        }
        let r = exps.len();
        let mut k = self.marg.moment(g, exps.iter().sum())?;
        // subtract every non-crossing partition other than the full block, grouped by the block of 1
        for mask in 0u64..(1u64 << (r - 1)) {
            let mut block = vec![0usize];
            block.extend((1..r).filter(|j| mask >> (j - 1) & 1 == 1));
            if block.len() == r {
                continue;
            }
            let inner_exps: Vec<i64> = block.iter().map(|&p| exps[p]).collect();
            let mut term = self.cumulant(g, &inner_exps)?;
            for j in 0..block.len() {
                let end = if j + 1 < block.len() { block[j + 1] } else { r };
                if block[j] + 1 < end {
                    term *= self.marg.moment(g, exps[block[j] + 1..end].iter().sum())?;
                }
            }
            k -= term;
        }
        self.cumulants.insert(key, k);
        Ok(k)
    }
}

/// `sqrt(2 - 2 Re tau(w2^{-1} w1))`.
pub fn loop_l2_distance(w1: &PowerWord, w2: &PowerWord, marginals: &Marginals) -> Result<f64> {
    let t = word_moment(&w2.inverse().concat(w1), marginals)?;
    let r = 2.0 - 2.0 * t.re;
    if r < -1e-12 {
        return Err(Error::Numerical(format!("negative squared distance {r}")));
    }
    Ok(r.max(0.0).sqrt())
}
