//! Dense complex eigenvalues via Hessenberg reduction and shifted QR.
//!
//! Matrices here are tiny (at most 16x16 symbol matrices), so an explicit
//! single-shift QR iteration with Givens rotations is plenty. No external
//! linear algebra dependency is used on this path.

use crate::cmat::CMat;
use crate::{Error, Result};
use num_complex::Complex64;

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// Reduce to upper Hessenberg form by complex Householder reflections.
pub fn hessenberg(m: &CMat) -> CMat {
    let n = m.n;
    let mut h = m.clone();
    if n < 3 {
        return h;
    }
    for k in 0..n - 2 {
        // Householder vector for column k below the subdiagonal.
        let mut norm2 = 0.0;
        for i in k + 1..n {
            norm2 += h[(i, k)].norm_sqr();
        }
        let x0 = h[(k + 1, k)];
        let norm = norm2.sqrt();
        if norm <= f64::EPSILON * h.a.iter().map(|z| z.norm()).sum::<f64>() {
            continue;
        }
        // alpha = -exp(i*arg(x0)) * ||x||
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
        let alpha = -phase * norm;
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        for i in k + 1..n {
            v[i] = h[(i, k)];
        }
        v[k + 1] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 <= 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;
        // H <- (I - beta v v^H) H
        for j in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for i in k + 1..n {
                s += v[i].conj() * h[(i, j)];
            }
            s *= beta;
            for i in k + 1..n {
                let d = v[i] * s;
                h[(i, j)] -= d;
            }
        }
        // H <- H (I - beta v v^H)
        for i in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for j in k + 1..n {
                s += h[(i, j)] * v[j];
            }
            s *= beta;
            for j in k + 1..n {
                let d = s * v[j].conj();
                h[(i, j)] -= d;
            }
        }
        // Explicitly zero what the reflection annihilated.
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
    h
}

fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let tr2 = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (tr2 * tr2 - det).sqrt();
    (tr2 + disc, tr2 - disc)
}

/// All eigenvalues of a dense complex matrix.
pub fn eigenvalues(m: &CMat) -> Result<Vec<Complex64>> {
    let n = m.n;
    if n == 0 {
        return Ok(vec![]);
    }
    if n == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    let mut h = hessenberg(m);
    let scale: f64 = h.a.iter().map(|z| z.norm()).sum::<f64>().max(f64::MIN_POSITIVE);
    let mut eigs = Vec::with_capacity(n);
    let mut hi = n - 1;
    let mut sweeps = 0usize;
    loop {
        // Deflate any negligible subdiagonal entries in the active block.
        while hi > 0 {
            let s = h[(hi, hi - 1)].norm();
            let local = h[(hi - 1, hi - 1)].norm() + h[(hi, hi)].norm();
            if s <= f64::EPSILON * (local + scale * 1e-3) {
                h[(hi, hi - 1)] = Complex64::new(0.0, 0.0);
                eigs.push(h[(hi, hi)]);
                hi -= 1;
                sweeps = 0;
            } else {
                break;
            }
        }
        if hi == 0 {
            eigs.push(h[(0, 0)]);
            break;
        }
        // Find the start of the active unreduced block.
        let mut lo = hi;
        while lo > 0 {
            let s = h[(lo, lo - 1)].norm();
            let local = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if s <= f64::EPSILON * (local + scale * 1e-3) {
                h[(lo, lo - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if hi - lo == 1 {
            let (l1, l2) = eig2(h[(lo, lo)], h[(lo, hi)], h[(hi, lo)], h[(hi, hi)]);
            eigs.push(l1);
            eigs.push(l2);
            if lo == 0 {
                break;
            }
            hi = lo - 1;
            sweeps = 0;
            continue;
        }
        sweeps += 1;
        if sweeps > MAX_SWEEPS_PER_EIGENVALUE {
            return Err(Error::Numerical(format!(
                "QR iteration did not converge on a {}x{} block",
                hi - lo + 1,
                hi - lo + 1
            )));
        }
        // Wilkinson shift from the trailing 2x2; exceptional shift now and then.
        let shift = if sweeps % 12 == 0 {
            h[(hi, hi)] + h[(hi, hi - 1)] * 0.75
        } else {
            let (l1, l2) = eig2(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)]);
            if (l1 - h[(hi, hi)]).norm() < (l2 - h[(hi, hi)]).norm() {
                l1
            } else {
                l2
            }
        };
        // Explicit shifted QR step on the block [lo, hi] via Givens rotations.
        for i in lo..=hi {
            h[(i, i)] -= shift;
        }
        let mut rot = Vec::with_capacity(hi - lo);
        for i in lo..hi {
            let a = h[(i, i)];
            let b = h[(i + 1, i)];
            let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let (c, s) = if r > 0.0 {
                (a / r, b / r)
            } else {
                (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
            };
            // rows i, i+1: [c^H s^H; -s c] acting from the left
            for j in i..n {
                let x = h[(i, j)];
                let y = h[(i + 1, j)];
                h[(i, j)] = c.conj() * x + s.conj() * y;
                h[(i + 1, j)] = -s * x + c * y;
            }
            rot.push((c, s));
        }
        for (k, &(c, s)) in rot.iter().enumerate() {
            let i = lo + k;
            // columns i, i+1: right-multiply by the adjoint rotation
            for r in 0..=(i + 1).min(hi) {
                let x = h[(r, i)];
                let y = h[(r, i + 1)];
                h[(r, i)] = c * x + s * y;
                h[(r, i + 1)] = -s.conj() * x + c.conj() * y;
            }
        }
        for i in lo..=hi {
            h[(i, i)] += shift;
        }
    }
    Ok(eigs)
}

/// Largest eigenvalue modulus.
pub fn spectral_radius(m: &CMat) -> Result<f64> {
    Ok(eigenvalues(m)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}
