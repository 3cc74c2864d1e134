//! Small dense complex matrices (up to 16x16) for Fourier symbols.

use num_complex::Complex64;

/// Row-major dense complex square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    pub n: usize,
    pub a: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(n: usize) -> Self {
        CMat { n, a: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Self {
        let n = rows.len();
        let mut m = CMat::zeros(n);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), n);
            m.a[i * n..(i + 1) * n].copy_from_slice(r);
        }
        m
    }

    /// Diagonal matrix from a slice.
    pub fn diag(d: &[Complex64]) -> Self {
        let mut m = CMat::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn mul(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let s = self.a[i * n + k];
                if s == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.a[i * n + j] += s * rhs.a[k * n + j];
                }
            }
        }
        out
    }

    /// Matrix power by repeated multiplication (exponents here are tiny).
    pub fn pow(&self, e: u32) -> CMat {
        let mut out = CMat::identity(self.n);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn sub(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (x, y) in out.a.iter_mut().zip(rhs.a.iter()) {
            *x -= y;
        }
        out
    }

    /// Copy `block` into the square sub-block with top-left corner (r0, c0).
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &CMat) {
        for i in 0..block.n {
            for j in 0..block.n {
                self[(r0 + i, c0 + j)] = block[(i, j)];
            }
        }
    }

    pub fn max_abs_diff(&self, rhs: &CMat) -> f64 {
        self.a
            .iter()
            .zip(rhs.a.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.a[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.a[i * self.n + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_identity() {
        let mut m = CMat::zeros(3);
        m[(0, 1)] = Complex64::new(2.0, -1.0);
        m[(2, 0)] = Complex64::new(0.5, 3.0);
        let i = CMat::identity(3);
        assert_eq!(m.mul(&i), m);
        assert_eq!(i.mul(&m), m);
    }

    #[test]
    fn pow_matches_repeated_mul() {
        let mut m = CMat::identity(2);
        m[(0, 1)] = Complex64::new(1.0, 1.0);
        m[(1, 0)] = Complex64::new(-0.5, 0.25);
        let m3 = m.mul(&m).mul(&m);
        assert!(m.pow(3).max_abs_diff(&m3) < 1e-15);
    }
}
