//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use noisegain::stemgain::Kernel;
use noisegain::FieldGrid;
use num_complex::Complex64;

/// `X(a, b) = sum_{r,c} x(r, c) exp(-2 pi i (a r / H + b c / W))`, evaluated
/// term by term.
pub fn dft2_direct(f: &FieldGrid) -> Vec<Complex64> {
    let (h, w) = (f.height(), f.width());
    let mut out = vec![Complex64::new(0.0, 0.0); h * w];
    for a in 0..h {
        for b in 0..w {
            let mut acc = Complex64::new(0.0, 0.0);
            for r in 0..h {
                for c in 0..w {
                    let phase = -2.0 * PI * ((a * r) as f64 / h as f64 + (b * c) as f64 / w as f64);
                    acc += f.get(r, c) * Complex64::from_polar(1.0, phase);
                }
            }
            out[a * w + b] = acc;
        }
    }
    out
}

/// Periodic `sum_q K(q) f(p - q)` with tap `(a, b)` at offset
/// `(a - k/2, b - k/2)`.
pub fn convolve_direct(f: &FieldGrid, kernel: &Kernel) -> Vec<f64> {
    let (h, w) = (f.height() as i64, f.width() as i64);
    let k = kernel.side() as i64;
    let centre = k / 2;
    let mut out = vec![0.0; (h * w) as usize];
    for r in 0..h {
        for c in 0..w {
            let mut acc = 0.0;
            for a in 0..k {
                for b in 0..k {
                    let rr = (r - (a - centre)).rem_euclid(h) as usize;
                    let cc = (c - (b - centre)).rem_euclid(w) as usize;
                    acc += kernel.weight(a as usize, b as usize) * f.get(rr, cc);
                }
            }
            out[(r * w + c) as usize] = acc;
        }
    }
    out
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn jacobi_eigenvalues(mut a: Vec<f64>, n: usize) -> Vec<f64> {
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum();
        let diag: f64 = (0..n).map(|i| a[i * n + i] * a[i * n + i]).sum();
        if off <= 1e-30 * diag {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

/// `A^T A` of a row-major square matrix.
pub fn gram(entries: &[f64], n: usize) -> Vec<f64> {
    let mut g = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            g[i * n + j] = (0..n)
                .map(|k| entries[k * n + i] * entries[k * n + j])
                .sum();
        }
    }
    g
}
