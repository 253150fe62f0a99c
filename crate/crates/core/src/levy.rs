//! Moments of free unitary Lévy processes from their characteristic triplet.

use crate::error::{Error, Result};
use crate::series::PowerSeries;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Atom of the Lévy measure: mass `weight` at `exp(i angle)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub angle: f64,
    pub weight: f64,
}

/// Characteristic triplet `(alpha, b, v)` with a finitely atomic Lévy measure `v`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharTriplet {
    pub alpha: f64,
    pub b: f64,
    #[serde(default)]
    pub atoms: Vec<Atom>,
}

impl CharTriplet {
    pub fn new(alpha: f64, b: f64, atoms: Vec<Atom>) -> Result<Self> {
        let t = CharTriplet { alpha, b, atoms };
        t.validate()?;
        Ok(t)
    }

    /// Free unitary Brownian motion with diffusivity `b`.
    pub fn brownian(b: f64) -> Self {
        CharTriplet { alpha: 0.0, b, atoms: Vec::new() }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() {
            return Err(Error::InvalidTriplet(format!("alpha = {}", self.alpha)));
        }
        if !(self.b.is_finite() && self.b >= 0.0) {
            return Err(Error::InvalidTriplet(format!("b must be >= 0, got {}", self.b)));
        }
        for a in &self.atoms {
            if !(a.weight.is_finite() && a.weight > 0.0) {
                return Err(Error::InvalidTriplet(format!("atom weight must be > 0, got {}", a.weight)));
            }
            if !(a.angle > -PI && a.angle <= PI) {
                return Err(Error::InvalidTriplet(format!("atom angle {} outside (-pi, pi]", a.angle)));
            }
            if a.angle == 0.0 {
                return Err(Error::InvalidTriplet("atom at angle 0 (v({1}) must vanish)".into()));
            }
        }
        Ok(())
    }

    pub fn total_jump_rate(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// `sum_j w_j (cos phi_j - 1)`.
    pub fn jump_damping(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight * (a.angle.cos() - 1.0)).sum()
    }

    /// `alpha - sum_j w_j sin phi_j`.
    pub fn compensated_drift(&self) -> f64 {
        self.alpha - self.atoms.iter().map(|a| a.weight * a.angle.sin()).sum::<f64>()
    }
}

/// Moments `m_0 = 1, m_1, .., m_K` of a unitary element at time `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSeries {
    pub t: f64,
    pub moments: Vec<Complex64>,
}

impl MomentSeries {
    /// Deepest available power.
    pub fn depth(&self) -> usize {
        self.moments.len() - 1
    }

    /// `m_n`, with `m_{-n} = conj(m_n)`.
    pub fn get(&self, n: i64) -> Option<Complex64> {
        let m = *self.moments.get(n.unsigned_abs() as usize)?;
        Some(if n < 0 { m.conj() } else { m })
    }

    /// Moments of a Haar unitary (every nonzero power has trace 0).
    pub fn haar(depth: usize) -> Self {
        let mut moments = vec![Complex64::new(0.0, 0.0); depth + 1];
        moments[0] = Complex64::new(1.0, 0.0);
        MomentSeries { t: f64::NAN, moments }
    }
}

/// Series of `S_{a_t}(z)` to order `order`.
pub fn sigma_series(triplet: &CharTriplet, t: f64, order: usize) -> PowerSeries {
    let i = Complex64::i();
    let mut log = PowerSeries::zero(order);
    let mut c = log.coeffs().to_vec();
    c[0] = -i * triplet.alpha * t + Complex64::new(triplet.b * t / 2.0, 0.0);
    if order >= 1 {
        c[1] += Complex64::new(triplet.b * t, 0.0);
    }
    for a in &triplet.atoms {
        let zeta = Complex64::from_polar(1.0, a.angle);
        let u = Complex64::new(1.0, 0.0) - zeta;
        c[0] += i * (a.weight * a.angle.sin() * t);
        // (1 - zeta) / (1 + z (1 - zeta)) = sum_k u (-u)^k z^k
        let mut p = u;
        for ck in c.iter_mut() {
            *ck += p * (a.weight * t);
            p *= -u;
        }
    }
    log = PowerSeries::from_coeffs(c, order);
    log.exp()
}

/// Moments of the free unitary Lévy process at time `t`, up to power `order`.
pub fn moments(triplet: &CharTriplet, t: f64, order: usize) -> MomentSeries {
    let order = order.max(1);
    if t == 0.0 {
        return MomentSeries { t, moments: vec![Complex64::new(1.0, 0.0); order + 1] };
    }
    let k = order + 8;
    let s = sigma_series(triplet, t, k);
    // chi(z) = z S(z) / (1 + z)
    let one_plus_z = PowerSeries::from_coeffs(vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)], k);
    let q = &s * &one_plus_z.recip();
    let mut chi = vec![Complex64::new(0.0, 0.0)];
    chi.extend_from_slice(&q.coeffs()[..k]);
    let phi = PowerSeries::from_coeffs(chi, k).reversion();
    let mut moments: Vec<Complex64> = phi.coeffs()[..=order].to_vec();
    moments[0] = Complex64::new(1.0, 0.0);
    MomentSeries { t, moments }
}

/// Closed form `tau(a_t) = exp(i alpha t - b t / 2 + t sum_j w_j (cos phi_j - 1))`.
pub fn first_moment(triplet: &CharTriplet, t: f64) -> Complex64 {
    Complex64::new(t * (-triplet.b / 2.0 + triplet.jump_damping()), triplet.alpha * t).exp()
}

/// Half-width of the spectral arc of free unitary Brownian motion and the seminorm distance to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportArc {
    pub theta: f64,
    pub seminorm_dist: f64,
}

pub fn bm_support(alpha: f64, b: f64, t: f64) -> Result<SupportArc> {
    if !(b >= 0.0 && t >= 0.0) {
        return Err(Error::Domain(format!("bm_support needs b >= 0 and t >= 0 (b = {b}, t = {t})")));
    }
    let bt = b * t;
    if bt > 4.0 {
        return Err(Error::SupportWraps(bt));
    }
    let raw = alpha.abs() * t + ((4.0 - bt) * bt).sqrt() / 2.0 + (1.0 - bt / 2.0).clamp(-1.0, 1.0).acos();
    let theta = raw.min(PI);
    Ok(SupportArc { theta, seminorm_dist: 2.0 * (theta / 2.0).sin() })
}
