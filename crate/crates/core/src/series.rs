//! Truncated complex power series.

use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

/// Coefficients `c_0..=c_K` of a series truncated at order `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

impl PowerSeries {
    pub fn zero(order: usize) -> Self {
        PowerSeries { coeffs: vec![Complex64::new(0.0, 0.0); order + 1] }
    }

    pub fn constant(c: Complex64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The series `z`.
    pub fn identity(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = Complex64::new(1.0, 0.0);
        }
        s
    }

    pub fn from_coeffs(mut coeffs: Vec<Complex64>, order: usize) -> Self {
        coeffs.resize(order + 1, Complex64::new(0.0, 0.0));
        PowerSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs.iter().take(order + 1).copied().collect(), order)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn derivative(&self) -> Self {
        let k = self.order();
        let mut out = Self::zero(k);
        for n in 1..=k {
            out.coeffs[n - 1] = self.coeffs[n] * n as f64;
        }
        out
    }

    /// `exp(self)` via `f' = g' f`.
    pub fn exp(&self) -> Self {
        let k = self.order();
        let mut f = Self::zero(k);
        f.coeffs[0] = self.coeffs[0].exp();
        for n in 1..=k {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=n {
                acc += self.coeffs[j] * f.coeffs[n - j] * j as f64;
            }
            f.coeffs[n] = acc / n as f64;
        }
        f
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn recip(&self) -> Self {
        let k = self.order();
        let c0 = self.coeffs[0];
        assert!(c0.norm() > 0.0, "series reciprocal needs c_0 != 0");
        let mut r = Self::zero(k);
        r.coeffs[0] = c0.inv();
        for n in 1..=k {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=n {
                acc += self.coeffs[j] * r.coeffs[n - j];
            }
            r.coeffs[n] = -acc / c0;
        }
        r
    }

    /// `self(inner(z))`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &PowerSeries) -> Self {
        let k = self.order().min(inner.order());
        assert!(inner.coeffs[0].norm() == 0.0, "inner series must vanish at 0");
        let inner = inner.truncate(k);
        let mut acc = Self::constant(self.coeffs[k], k);
        for n in (0..k).rev() {
            acc = &acc * &inner;
            acc.coeffs[0] += self.coeffs[n];
        }
        acc
    }

    /// Compositional inverse of a series `c_1 z + c_2 z^2 + ...` with `c_1 != 0`, by Newton iteration.
    pub fn reversion(&self) -> Self {
        let k = self.order();
        assert!(self.coeffs[0].norm() == 0.0, "reversion needs c_0 = 0");
        let c1 = self.coeffs[1];
        assert!(c1.norm() > 0.0, "reversion needs c_1 != 0");
        let z = Self::identity(k);
        let dself = self.derivative();
        let mut phi = z.scale(c1.inv());
        let mut exact = 1usize;
        while exact < k {
            let resid = &self.compose(&phi) - &z;
            let slope = dself.compose(&phi);
            phi = &phi - &(&resid * &slope.recip());
            exact *= 2;
        }
        phi
    }
}

impl<'a> Mul<&'a PowerSeries> for &'a PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        let k = self.order().min(rhs.order());
        let mut out = PowerSeries::zero(k);
        for (i, a) in self.coeffs.iter().enumerate().take(k + 1) {
            if *a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(k + 1 - i) {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }
}

impl<'a> Add<&'a PowerSeries> for &'a PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        let k = self.order().min(rhs.order());
        PowerSeries { coeffs: (0..=k).map(|n| self.coeffs[n] + rhs.coeffs[n]).collect() }
    }
}

impl<'a> Sub<&'a PowerSeries> for &'a PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        let k = self.order().min(rhs.order());
        PowerSeries { coeffs: (0..=k).map(|n| self.coeffs[n] - rhs.coeffs[n]).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn exp_of_z_is_factorial_series() {
        let e = PowerSeries::identity(8).exp();
        let mut fact = 1.0;
        for n in 0..=8 {
            if n > 0 {
                fact *= n as f64;
            }
            assert!((e.coeff(n) - c(1.0 / fact)).norm() < 1e-15);
        }
    }

    #[test]
    fn reversion_of_z_over_one_plus_z() {
        // z/(1+z) has inverse z/(1-z)
        let f = PowerSeries::from_coeffs((0..=10).map(|n| if n == 0 { c(0.0) } else { c(if n % 2 == 1 { 1.0 } else { -1.0 }) }).collect(), 10);
        let g = f.reversion();
        for n in 1..=10 {
            assert!((g.coeff(n) - c(1.0)).norm() < 1e-12, "n={n} {}", g.coeff(n));
        }
    }

    #[test]
    fn recip_round_trip() {
        let f = PowerSeries::from_coeffs(vec![c(2.0), Complex64::new(0.5, 1.0), c(-0.3)], 6);
        let g = &f * &f.recip();
        assert!((g.coeff(0) - c(1.0)).norm() < 1e-15);
        for n in 1..=6 {
            assert!(g.coeff(n).norm() < 1e-14);
        }
    }
}
