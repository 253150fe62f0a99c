//! Dense complex matrix kernels.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;

fn gemm(a: &CMat, b: &CMat) -> CMat {
    let (m, k) = a.shape();
    let (k2, n) = b.shape();
    assert_eq!(k, k2, "inner dimensions differ");
    let mut c = CMat::zeros(m, n);
    // SAFETY: column-major buffers of the stated shapes; c does not alias a or b.
    unsafe {
        matrixmultiply::zgemm(
            matrixmultiply::CGemmOption::Standard,
            matrixmultiply::CGemmOption::Standard,
            m,
            k,
            n,
            [1.0, 0.0],
            a.as_ptr() as *const [f64; 2],
            1,
            m as isize,
            b.as_ptr() as *const [f64; 2],
            1,
            k as isize,
            [0.0, 0.0],
            c.as_mut_ptr() as *mut [f64; 2],
            1,
            m as isize,
        );
    }
    c
}

/// `a b`
pub fn mul(a: &CMat, b: &CMat) -> CMat {
    gemm(a, b)
}

/// `a b^*`
pub fn mul_adj(a: &CMat, b: &CMat) -> CMat {
    gemm(a, &b.adjoint())
}

/// `a^* b`
pub fn adj_mul(a: &CMat, b: &CMat) -> CMat {
    gemm(&a.adjoint(), b)
}

/// `max |(U^*U - I)_{ij}|`
pub fn unitarity_defect(u: &CMat) -> f64 {
    let g = adj_mul(u, u);
    let mut worst = 0.0f64;
    for j in 0..g.ncols() {
        for i in 0..g.nrows() {
            let d = if i == j { g[(i, j)] - 1.0 } else { g[(i, j)] };
            worst = worst.max(d.norm());
        }
    }
    worst
}

/// Polar projection by Newton-Schulz iteration `X <- X (3I - X^*X) / 2`.
pub fn reunitarize(u: &mut CMat) {
    for _ in 0..8 {
        let g = adj_mul(u, u);
        let mut r = -g;
        let mut defect = 0.0f64;
        for i in 0..r.nrows() {
            r[(i, i)] += 1.0;
        }
        for x in r.iter() {
            defect = defect.max(x.norm());
        }
        if defect < 1e-15 {
            return;
        }
        for i in 0..r.nrows() {
            r[(i, i)] += 2.0;
        }
        *u = mul(u, &r) * Complex64::new(0.5, 0.0);
    }
}

/// `exp(x)` by scaling and squaring with a degree-12 Taylor polynomial in blocks of four.
///
/// Squarings bring the Frobenius norm (an upper bound for the spectral norm) below 1/2,
/// so the truncation error per factor is below `2^-13 / 13!`.
pub fn expm(x: &CMat) -> CMat {
    let n = x.nrows();
    let norm = x.norm();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let a = x * Complex64::new(0.5f64.powi(squarings), 0.0);
    let a2 = mul(&a, &a);
    let a3 = mul(&a2, &a);
    let a4 = mul(&a3, &a);
    let mut fact = [1.0f64; 13];
    for k in 1..13 {
        fact[k] = fact[k - 1] * k as f64;
    }
    let block = |j: usize| -> CMat {
        let c = |k: usize| Complex64::new(1.0 / fact[k], 0.0);
        let mut b = &a * c(j + 1) + &a2 * c(j + 2) + &a3 * c(j + 3);
        for i in 0..n {
            b[(i, i)] += c(j);
        }
        b
    };
    // sum_k a^k / k! = B0 + a4 (B4 + a4 (B8 + a4 / 12!))
    let mut acc = a4.clone() * Complex64::new(1.0 / fact[12], 0.0);
    for j in [8, 4, 0] {
        acc = block(j) + mul(&a4, &acc);
    }
    for _ in 0..squarings {
        acc = mul(&acc, &acc);
    }
    acc
}

pub fn trace(u: &CMat) -> Complex64 {
    (0..u.nrows()).map(|i| u[(i, i)]).sum()
}
