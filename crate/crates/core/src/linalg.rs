//! Small dense and banded linear-algebra kernels used by the oracles.
//!
//! Everything here works on symmetric (or Hermitian) matrices and relies on
//! Sylvester's law of inertia: the number of negative pivots of an `LDLᵀ`
//! factorization of `A − σI` equals the number of eigenvalues below `σ`.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use crate::C64;

const PIVOT_GUARD: f64 = 1e-300;

fn guard(p: f64) -> f64 {
    if p.abs() < PIVOT_GUARD {
        if p.is_sign_negative() {
            -PIVOT_GUARD
        } else {
            PIVOT_GUARD
        }
    } else {
        p
    }
}

/// Number of eigenvalues strictly below `sigma` of the symmetric tridiagonal
/// matrix with diagonal `diag` and off-diagonal `off` (`off[i]` couples `i`
/// and `i + 1`).
pub fn sturm_count(diag: &[f64], off: &[f64], sigma: f64) -> usize {
    let mut count = 0;
    let mut p = 1.0;
    for (i, &d) in diag.iter().enumerate() {
        let e2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        p = guard(d - sigma - e2 / p);
        if p < 0.0 {
            count += 1;
        }
    }
    count
}

/// Number of eigenvalues strictly below `sigma` of a symmetric tridiagonal
/// matrix with an extra corner entry `corner` at `(0, n−1)` and `(n−1, 0)`.
///
/// The factorization runs without pivoting; fill-in is confined to the last
/// row, which is carried as a single running entry.
pub fn cyclic_sturm_count(diag: &[f64], off: &[f64], corner: f64, sigma: f64) -> usize {
    let n = diag.len();
    assert!(n >= 3, "cyclic chain needs at least three sites");
    assert_eq!(off.len(), n - 1);
    let mut count = 0;
    let mut last = diag[n - 1] - sigma;
    let mut p = guard(diag[0] - sigma);
    // entry (n-1, i) of the partially reduced matrix
    let mut r = corner;
    for i in 0..n - 2 {
        if p < 0.0 {
            count += 1;
        }
        last -= r * r / p;
        let direct = if i + 1 == n - 2 { off[n - 2] } else { 0.0 };
        let next_r = direct - r * off[i] / p;
        p = guard(diag[i + 1] - sigma - off[i] * off[i] / p);
        r = next_r;
    }
    if p < 0.0 {
        count += 1;
    }
    last -= r * r / p;
    if last < 0.0 {
        count += 1;
    }
    count
}

/// Gershgorin interval of a symmetric tridiagonal (optionally cyclic) matrix.
pub fn gershgorin(diag: &[f64], off: &[f64], corner: f64) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let mut r = 0.0;
        if i > 0 {
            r += off[i - 1].abs();
        }
        if i + 1 < n {
            r += off[i].abs();
        }
        if n > 1 && (i == 0 || i == n - 1) {
            r += corner.abs();
        }
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    (lo, hi)
}

/// The `k`-th smallest eigenvalue (0-based) given a counting function
/// `count(σ) = #{λ < σ}` and an enclosing interval.
pub fn bisect_eigenvalue(count: impl Fn(f64) -> usize, k: usize, lo: f64, hi: f64, tol: f64) -> f64 {
    let (mut a, mut b) = (lo, hi);
    while b - a > tol * (1.0 + a.abs().max(b.abs())) {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if count(m) > k {
            b = m;
        } else {
            a = m;
        }
    }
    0.5 * (a + b)
}

/// The `count` smallest eigenvalues of a symmetric tridiagonal matrix.
pub fn tridiagonal_lowest_eigenvalues(diag: &[f64], off: &[f64], count: usize) -> Vec<f64> {
    let (lo, hi) = gershgorin(diag, off, 0.0);
    let pad = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
    (0..count.min(diag.len()))
        .map(|k| bisect_eigenvalue(|s| sturm_count(diag, off, s), k, lo - pad, hi + pad, 1e-15))
        .collect()
}

/// Eigenvalues of a symmetric tridiagonal matrix inside `[lo, hi)`.
pub fn tridiagonal_eigenvalues_in(diag: &[f64], off: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let first = sturm_count(diag, off, lo);
    let last = sturm_count(diag, off, hi);
    (first..last).map(|k| bisect_eigenvalue(|s| sturm_count(diag, off, s), k, lo, hi, 1e-15)).collect()
}

/// Solves the tridiagonal system `sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i]`
/// (`sub[0]` and `sup[n-1]` are ignored) by the Thomas algorithm.
pub fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut beta = guard(diag[0]);
    c[0] = sup[0] / beta;
    d[0] = rhs[0] / beta;
    for i in 1..n {
        beta = guard(diag[i] - sub[i] * c[i - 1]);
        c[i] = if i + 1 < n { sup[i] / beta } else { 0.0 };
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / beta;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        let next = x[i + 1];
        x[i] -= c[i] * next;
    }
    x
}

/// Solves a cyclic tridiagonal system (`sub[0]` couples row 0 to `n−1`,
/// `sup[n−1]` couples row `n−1` to 0) with the Sherman–Morrison correction.
pub fn solve_cyclic_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let alpha = sup[n - 1];
    let beta = sub[0];
    let gamma = -diag[0];
    let mut dd = diag.to_vec();
    dd[0] -= gamma;
    dd[n - 1] -= alpha * beta / gamma;
    let x = solve_tridiagonal(sub, &dd, sup, rhs);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = alpha;
    let z = solve_tridiagonal(sub, &dd, sup, &u);
    let fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
    x.iter().zip(&z).map(|(xi, zi)| xi - fact * zi).collect()
}

/// Normalized eigenvector of a symmetric tridiagonal matrix for the
/// (approximate) eigenvalue `lambda`, by inverse iteration.
pub fn tridiagonal_eigenvector(diag: &[f64], off: &[f64], lambda: f64) -> Vec<f64> {
    let n = diag.len();
    let shift = lambda + 1e-10 * (1.0 + lambda.abs());
    let shifted: Vec<f64> = diag.iter().map(|d| d - shift).collect();
    let mut sub = vec![0.0; n];
    sub[1..].copy_from_slice(off);
    let mut sup = vec![0.0; n];
    sup[..n - 1].copy_from_slice(off);
    // deterministic, non-symmetric start vector
    let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i * 7919) % 97) as f64 / 97.0).collect();
    for _ in 0..3 {
        x = solve_tridiagonal(&sub, &shifted, &sup, &x);
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        x.iter_mut().for_each(|v| *v /= norm);
    }
    x
}

/// Reduces a Hermitian matrix (row-major, `n × n`) to real symmetric
/// tridiagonal form with the same eigenvalues. Returns `(diag, off)`.
pub fn hermitian_tridiagonalize(mut a: Vec<C64>, n: usize) -> (Vec<f64>, Vec<f64>) {
    let idx = |i: usize, j: usize| i * n + j;
    let mut off = vec![0.0; n.saturating_sub(1)];
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let x: Vec<C64> = (0..m).map(|i| a[idx(k + 1 + i, k)]).collect();
        let xnorm = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            off[k] = 0.0;
            continue;
        }
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { C64::new(1.0, 0.0) };
        let alpha = -phase * xnorm;
        let mut v = x.clone();
        v[0] -= alpha;
        let vnorm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            off[k] = xnorm;
            continue;
        }
        v.iter_mut().for_each(|c| *c /= vnorm);
        // p = A22 v
        let mut p = vec![C64::new(0.0, 0.0); m];
        for i in 0..m {
            let row = idx(k + 1 + i, k + 1);
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..m {
                acc += a[row + j] * v[j];
            }
            p[i] = acc;
        }
        let beta: f64 = v.iter().zip(&p).map(|(vi, pi)| (vi.conj() * pi).re).sum();
        let w: Vec<C64> = p.iter().zip(&v).map(|(pi, vi)| (pi - vi * beta) * 2.0).collect();
        for i in 0..m {
            let row = idx(k + 1 + i, k + 1);
            for j in 0..m {
                a[row + j] -= v[i] * w[j].conj() + w[i] * v[j].conj();
            }
        }
        for i in 0..m {
            a[idx(k + 1 + i, k)] = C64::new(0.0, 0.0);
            a[idx(k, k + 1 + i)] = C64::new(0.0, 0.0);
        }
        a[idx(k + 1, k)] = alpha;
        a[idx(k, k + 1)] = alpha.conj();
        off[k] = xnorm;
    }
    if n >= 2 {
        off[n - 2] = a[idx(n - 1, n - 2)].norm();
    }
    let diag = (0..n).map(|i| a[idx(i, i)].re).collect();
    (diag, off)
}
