//! Monte-Carlo `U(N)` Lévy processes and their holonomy fields.

use crate::error::{Error, Result};
use crate::field::{master_trace, HolonomyContext};
use crate::geometry::Loop;
use crate::levy::{bm_support, CharTriplet};
use crate::matrix::{self, CMat};
use crate::seeds::substream;
use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Poisson, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

/// Default diffusion step per unit of time (area).
pub const DEFAULT_DT: f64 = 0.1;
pub const DEFAULT_REUNITARIZE_EVERY: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub n: usize,
    pub triplet: CharTriplet,
    pub dt: f64,
    pub samples: usize,
    pub seed: u64,
    pub reunitarize_every: usize,
}

impl SimConfig {
    pub fn new(n: usize, triplet: CharTriplet) -> Self {
        SimConfig { n, triplet, dt: DEFAULT_DT, samples: 100, seed: 0, reunitarize_every: DEFAULT_REUNITARIZE_EVERY }
    }

    pub fn validate(&self) -> Result<()> {
        self.triplet.validate()?;
        if self.n == 0 || self.dt.is_nan() || self.dt <= 0.0 || self.samples == 0 || self.reunitarize_every == 0 {
            return Err(Error::Domain("need N >= 1, dt > 0, samples >= 1, reunitarize_every >= 1".into()));
        }
        Ok(())
    }
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar unitary: QR of a complex Ginibre matrix with the phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let z = CMat::from_fn(n, n, |_, _| complex_gaussian(rng));
    let qr = z.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Uniform unit vector of `C^n`.
pub fn haar_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n).map(|_| complex_gaussian(rng)).collect();
    let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / norm).collect()
}

/// Standard Gaussian skew-Hermitian matrix for the inner product `N Tr(X^* Y)`.
pub fn gauss_skew<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let mut x = CMat::zeros(n, n);
    let d = 1.0 / (n as f64).sqrt();
    let o = 1.0 / (2.0 * n as f64).sqrt();
    for k in 0..n {
        let g: f64 = rng.sample(StandardNormal);
        x[(k, k)] = Complex64::new(0.0, g * d);
        for l in k + 1..n {
            let g1: f64 = rng.sample(StandardNormal);
            let g2: f64 = rng.sample(StandardNormal);
            x[(k, l)] = Complex64::new(g1 * o, g2 * o);
            x[(l, k)] = Complex64::new(-g1 * o, g2 * o);
        }
    }
    x
}

/// `E[(1/N) Tr exp(s Xi)] = exp(-s^2/2N) L^{(1)}_{N-1}(s^2/N) / N`.
pub fn gaussian_exp_trace(n: usize, s: f64) -> f64 {
    let x = s * s / n as f64;
    let (mut prev, mut cur) = (1.0f64, 2.0 - x);
    if n == 1 {
        return (-x / 2.0).exp();
    }
    for k in 1..n - 1 {
        let next = ((2 * k + 2) as f64 - x) * cur / (k + 1) as f64 - (k + 1) as f64 * prev / (k + 1) as f64;
        prev = cur;
        cur = next;
    }
    (-x / 2.0).exp() * cur / n as f64
}

/// Step scale `s` with `E[(1/N) Tr exp(s Xi)] = exp(-b delta / 2)`.
pub fn calibrated_scale(n: usize, b: f64, delta: f64) -> f64 {
    if b <= 0.0 {
        return 0.0;
    }
    let target = (-b * delta / 2.0).exp();
    let mut hi = (b * delta).sqrt();
    while gaussian_exp_trace(n, hi) > target {
        hi *= 1.5;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if gaussian_exp_trace(n, mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-16 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// `u <- u exp(s Xi)`.
fn diffusion_step<R: Rng + ?Sized>(u: &CMat, s: f64, rng: &mut R) -> CMat {
    let n = u.nrows();
    let x = gauss_skew(n, rng) * Complex64::new(s, 0.0);
    matrix::mul(u, &matrix::expm(&x))
}

/// One sample of `Y_t` for the matrix Lévy process with triplet `(i alpha I, b I, v_N)`.
pub fn levy_increment<R: Rng + ?Sized>(cfg: &SimConfig, t: f64, rng: &mut R) -> CMat {
    let n = cfg.n;
    let tr = &cfg.triplet;
    let mut u = CMat::identity(n, n);
    if t <= 0.0 {
        return u;
    }
    let steps = if tr.b > 0.0 { ((t / cfg.dt).ceil() as usize).max(1) } else { 1 };
    let delta = t / steps as f64;
    let s = calibrated_scale(n, tr.b, delta);
    let rate = n as f64 * tr.total_jump_rate() * t;
    let mut jumps: Vec<(f64, Complex64)> = Vec::new();
    if rate > 0.0 {
        let count = Poisson::new(rate).expect("positive rate").sample(rng) as usize;
        let pick = WeightedIndex::new(tr.atoms.iter().map(|a| a.weight)).expect("positive weights");
        for _ in 0..count {
            let time = rng.random::<f64>() * t;
            let a = tr.atoms[pick.sample(rng)];
            jumps.push((time, Complex64::from_polar(1.0, a.angle)));
        }
        jumps.sort_by(|x, y| x.0.total_cmp(&y.0));
    }
    let mut ops = 0usize;
    let mut next_jump = 0usize;
    for k in 0..steps {
        if s > 0.0 {
            u = diffusion_step(&u, s, rng);
            ops += 1;
        }
        let end = if k + 1 == steps { f64::INFINITY } else { (k + 1) as f64 * delta };
        while next_jump < jumps.len() && jumps[next_jump].0 <= end {
            let zeta = jumps[next_jump].1;
            let v = haar_vector(n, rng);
            // u (I + (zeta - 1) v v^*)
            let uv: Vec<Complex64> = (0..n).map(|i| (0..n).map(|j| u[(i, j)] * v[j]).sum()).collect();
            for j in 0..n {
                let c = (zeta - 1.0) * v[j].conj();
                for i in 0..n {
                    u[(i, j)] += uv[i] * c;
                }
            }
            next_jump += 1;
            ops += 1;
        }
        if ops >= cfg.reunitarize_every {
            project(&mut u);
            ops = 0;
        }
    }
    if ops > 0 && (s > 0.0 || !jumps.is_empty()) {
        project(&mut u);
    }
    let drift = Complex64::from_polar(1.0, tr.compensated_drift() * t);
    if drift != Complex64::new(1.0, 0.0) {
        u *= drift;
    }
    u
}

fn project(u: &mut CMat) {
    let defect = matrix::unitarity_defect(u);
    if defect > 1e-6 {
        log::warn!("unitarity drift {defect:.3e} before projection");
    }
    matrix::reunitarize(u);
}

fn evaluate(ctx: &HolonomyContext, l: &Loop, n: usize, draw: &mut dyn FnMut(usize) -> CMat) -> Result<Complex64> {
    let w = ctx.word(l)?.op();
    let mut acc: Option<CMat> = None;
    for &(g, s) in w.letters() {
        let h = draw(g);
        acc = Some(match acc {
            None if s > 0 => h,
            None => h.adjoint(),
            Some(m) if s > 0 => matrix::mul(&m, &h),
            Some(m) => matrix::mul_adj(&m, &h),
        });
    }
    Ok(match acc {
        None => Complex64::new(1.0, 0.0),
        Some(m) => matrix::trace(&m) / n as f64,
    })
}

/// `(1/N) Tr H_l` with fresh independent increments drawn from `rng` in generator order.
pub fn sample_holonomy_trace<R: Rng + ?Sized>(ctx: &HolonomyContext, l: &Loop, cfg: &SimConfig, rng: &mut R) -> Result<Complex64> {
    let w = ctx.word(l)?;
    let mut gens: Vec<usize> = w.letters().iter().map(|x| x.0).collect();
    gens.sort();
    gens.dedup();
    let incs: Vec<(usize, CMat)> = gens.iter().map(|&g| (g, levy_increment(cfg, ctx.areas()[g - 1], rng))).collect();
    evaluate(ctx, l, cfg.n, &mut |g| incs.iter().find(|x| x.0 == g).unwrap().1.clone())
}

/// Traces of several loops on one joint sample; face increments come from per-(seed, sample, face) streams.
pub fn sample_traces(ctx: &HolonomyContext, loops: &[Loop], cfg: &SimConfig, sample: u64) -> Result<Vec<Complex64>> {
    let mut cache: Vec<Option<CMat>> = vec![None; ctx.areas().len() + 1];
    let mut draw = |g: usize| -> CMat {
        cache[g]
            .get_or_insert_with(|| {
                let mut rng = ChaCha8Rng::seed_from_u64(substream(cfg.seed, sample, g as u64));
                levy_increment(cfg, ctx.areas()[g - 1], &mut rng)
            })
            .clone()
    };
    loops.iter().map(|l| evaluate(ctx, l, cfg.n, &mut draw)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStats {
    pub mean: [f64; 2],
    pub stderr: f64,
    pub samples: usize,
    pub exact: [f64; 2],
    pub sigmas: f64,
}

impl TraceStats {
    pub fn from_samples(xs: &[Complex64], exact: Complex64) -> Self {
        let n = xs.len();
        let mean = pairwise_sum(xs) / n as f64;
        let dev: Vec<Complex64> = xs.iter().map(|x| Complex64::new((x - mean).norm_sqr(), 0.0)).collect();
        let stderr = if n >= 2 { (pairwise_sum(&dev).re / (n - 1) as f64 / n as f64).sqrt() } else { f64::NAN };
        let sigmas = (mean - exact).norm() / stderr;
        TraceStats { mean: [mean.re, mean.im], stderr, samples: n, exact: [exact.re, exact.im], sigmas }
    }

    pub fn deviation(&self) -> f64 {
        Complex64::new(self.mean[0] - self.exact[0], self.mean[1] - self.exact[1]).norm()
    }
}

fn pairwise_sum(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

pub fn mc_compare(ctx: &HolonomyContext, l: &Loop, cfg: &SimConfig) -> Result<TraceStats> {
    Ok(mc_compare_many(ctx, std::slice::from_ref(l), cfg)?.remove(0))
}

/// Monte-Carlo means of several loops on shared samples against the exact traces.
pub fn mc_compare_many(ctx: &HolonomyContext, loops: &[Loop], cfg: &SimConfig) -> Result<Vec<TraceStats>> {
    cfg.validate()?;
    let exact: Vec<Complex64> = loops.iter().map(|l| master_trace(ctx, l)).collect::<Result<_>>()?;
    let rows: Vec<Vec<Complex64>> = (0..cfg.samples as u64).into_par_iter().map(|i| sample_traces(ctx, loops, cfg, i)).collect::<Result<_>>()?;
    Ok((0..loops.len())
        .map(|j| {
            let xs: Vec<Complex64> = rows.iter().map(|r| r[j]).collect();
            TraceStats::from_samples(&xs, exact[j])
        })
        .collect())
}

/// `|theta - center|` (wrapped to `[0, pi]`) for every eigenvalue `e^{i theta}` of a unitary `u`.
pub fn eigen_angle_offsets(u: &CMat, center: f64) -> Vec<f64> {
    let rot = u * Complex64::from_polar(1.0, -center);
    let herm = (&rot + rot.adjoint()) * Complex64::new(0.5, 0.0);
    SymmetricEigen::new(herm).eigenvalues.iter().map(|c| c.clamp(-1.0, 1.0).acos()).collect()
}

/// Eigenvalue angle offsets from `alpha t` of `cfg.samples` simulated `Y_t`.
pub fn simulated_angle_offsets(cfg: &SimConfig, t: f64) -> Result<Vec<f64>> {
    cfg.validate()?;
    let per: Vec<Vec<f64>> = (0..cfg.samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(substream(cfg.seed, i, 0));
            eigen_angle_offsets(&levy_increment(cfg, t, &mut rng), cfg.triplet.alpha * t)
        })
        .collect();
    Ok(per.into_iter().flatten().collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportReport {
    pub t: f64,
    pub theta: f64,
    pub seminorm_dist: f64,
    pub angles: usize,
    pub outside: usize,
    pub fraction_outside: f64,
    pub max_offset: f64,
}

/// Fraction of eigenvalue angles of simulated `Y_t` outside `[alpha t - theta_t, alpha t + theta_t]`.
pub fn spectral_support_check(cfg: &SimConfig, t: f64) -> Result<SupportReport> {
    if !cfg.triplet.atoms.is_empty() {
        return Err(Error::Domain("spectral support check needs v = 0".into()));
    }
    let arc = bm_support(cfg.triplet.alpha, cfg.triplet.b, t)?;
    let offs = simulated_angle_offsets(cfg, t)?;
    let outside = offs.iter().filter(|&&a| a > arc.theta).count();
    Ok(SupportReport {
        t,
        theta: arc.theta,
        seminorm_dist: arc.seminorm_dist,
        angles: offs.len(),
        outside,
        fraction_outside: outside as f64 / offs.len() as f64,
        max_offset: offs.iter().copied().fold(0.0, f64::max),
    })
}
