//! Free group words and the braid group actions on them.

use crate::error::{parse_err, Error, Result};
use crate::words::PowerWord;
use std::fmt;

/// Reduced word in the free group on generators `1..=rank`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreeWord {
    rank: usize,
    letters: Vec<(usize, i8)>,
}

impl FreeWord {
    pub fn new(rank: usize, letters: impl IntoIterator<Item = (usize, i8)>) -> Result<Self> {
        let mut w = FreeWord { rank, letters: Vec::new() };
        for (g, s) in letters {
            if g == 0 || g > rank {
                return Err(Error::RankMismatch { expected: rank, got: g });
            }
            if s != 1 && s != -1 {
                return Err(Error::Domain(format!("exponent {s} is not +-1")));
            }
            w.push(g, s);
        }
        Ok(w)
    }

    pub fn identity(rank: usize) -> Self {
        FreeWord { rank, letters: Vec::new() }
    }

    pub fn generator(rank: usize, g: usize) -> Self {
        assert!(g >= 1 && g <= rank);
        FreeWord { rank, letters: vec![(g, 1)] }
    }

    pub fn rank(&self) -> usize {
        self.rank
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

    fn push(&mut self, g: usize, s: i8) {
        if let Some(&(lg, ls)) = self.letters.last() {
            if lg == g && ls == -s {
                self.letters.pop();
                return;
            }
        }
        self.letters.push((g, s));
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        let mut w = self.clone();
        for &(g, s) in &other.letters {
            w.push(g, s);
        }
        w
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord { rank: self.rank, letters: self.letters.iter().rev().map(|&(g, s)| (g, -s)).collect() }
    }

    /// Homomorphic substitution `e_g -> images[g - 1]`.
    pub fn substitute(&self, images: &[FreeWord]) -> FreeWord {
        let rank = images.first().map_or(self.rank, |w| w.rank);
        let mut out = FreeWord::identity(rank);
        for &(g, s) in &self.letters {
            let img = &images[g - 1];
            out = out.mul(&if s > 0 { img.clone() } else { img.inverse() });
        }
        out
    }

    pub fn to_power_word(&self) -> PowerWord {
        PowerWord::new(self.letters.iter().map(|&(g, s)| (g, s as i64)))
    }

    /// Letters in reverse order, exponents kept.
    pub fn op(&self) -> FreeWord {
        let mut w = FreeWord::identity(self.rank);
        for &(g, s) in self.letters.iter().rev() {
            w.push(g, s);
        }
        w
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.letters.iter().map(|&(g, s)| if s > 0 { format!("b{g}") } else { format!("b{g}^-1") }).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Word in the Artin generators of the braid group on `strands` strands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<(usize, i8)>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<(usize, i8)>) -> Result<Self> {
        if strands < 2 {
            return Err(Error::Domain("a braid needs at least 2 strands".into()));
        }
        for &(i, s) in &letters {
            if i == 0 || i >= strands {
                return Err(Error::RankMismatch { expected: strands - 1, got: i });
            }
            if s != 1 && s != -1 {
                return Err(Error::Domain(format!("braid exponent {s} is not +-1")));
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn parse(strands: usize, text: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let body = tok.strip_prefix('s').ok_or_else(|| parse_err(tok, "expected s<index>[^-1]"))?;
            let (idx, s) = match body.strip_suffix("^-1") {
                Some(i) => (i, -1),
                None => (body, 1),
            };
            let i: usize = idx.parse().map_err(|_| parse_err(tok, "bad braid generator index"))?;
            letters.push((i, s));
        }
        BraidWord::new(strands, letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.letters
    }

    pub fn mul(&self, other: &BraidWord) -> BraidWord {
        assert_eq!(self.strands, other.strands);
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        BraidWord { strands: self.strands, letters }
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord { strands: self.strands, letters: self.letters.iter().rev().map(|&(i, s)| (i, -s)).collect() }
    }
}

/// Images of the free generators under one braid letter.
fn letter_automorphism(k: usize, i: usize, s: i8) -> Vec<FreeWord> {
    let mut img: Vec<FreeWord> = (1..=k).map(|g| FreeWord::generator(k, g)).collect();
    let e = |g: usize, s: i8| FreeWord { rank: k, letters: vec![(g, s)] };
    if s > 0 {
        img[i - 1] = e(i + 1, 1);
        img[i] = e(i + 1, 1).mul(&e(i, 1)).mul(&e(i + 1, -1));
    } else {
        img[i - 1] = e(i, -1).mul(&e(i + 1, 1)).mul(&e(i, 1));
        img[i] = e(i, 1);
    }
    img
}

/// Left action of a braid on the free group: the last braid letter acts first.
pub fn act_free_word(braid: &BraidWord, word: &FreeWord) -> Result<FreeWord> {
    if braid.strands != word.rank {
        return Err(Error::RankMismatch { expected: braid.strands, got: word.rank });
    }
    let mut w = word.clone();
    for &(i, s) in braid.letters.iter().rev() {
        w = w.substitute(&letter_automorphism(braid.strands, i, s));
    }
    Ok(w)
}

/// Left action on tuples: `beta_i . (.., x_i, x_{i+1}, ..) = (.., x_i x_{i+1} x_i^{-1}, x_i, ..)`.
pub fn act_tuple(braid: &BraidWord, tuple: &[FreeWord]) -> Result<Vec<FreeWord>> {
    if tuple.len() != braid.strands {
        return Err(Error::RankMismatch { expected: braid.strands, got: tuple.len() });
    }
    let mut t = tuple.to_vec();
    for &(i, s) in braid.letters.iter().rev() {
        let (x, y) = (t[i - 1].clone(), t[i].clone());
        if s > 0 {
            t[i - 1] = x.mul(&y).mul(&x.inverse());
            t[i] = x;
        } else {
            t[i - 1] = y.clone();
            t[i] = y.inverse().mul(&x).mul(&y);
        }
    }
    Ok(t)
}

/// Permutation of `1..=k`, stored as 0-based images.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(k: usize) -> Self {
        Permutation { images: (0..k).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let k = images.len();
        let mut seen = vec![false; k];
        for &i in &images {
            if i >= k || seen[i] {
                return Err(Error::Domain("not a bijection".into()));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn transposition(k: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(k);
        p.images.swap(a - 1, b - 1);
        p
    }

    /// Image of the 1-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] + 1
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `(self . other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation { images: other.images.iter().map(|&j| self.images[j]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    /// `sigma . (x_1..x_k) = (x_{sigma^{-1}(1)}, .., x_{sigma^{-1}(k)})`.
    pub fn act<T: Clone>(&self, tuple: &[T]) -> Vec<T> {
        let inv = self.inverse();
        (0..tuple.len()).map(|i| tuple[inv.images[i]].clone()).collect()
    }
}

pub fn perm_of_braid(braid: &BraidWord) -> Permutation {
    braid
        .letters
        .iter()
        .fold(Permutation::identity(braid.strands), |acc, &(i, _)| acc.compose(&Permutation::transposition(braid.strands, i, i + 1)))
}
