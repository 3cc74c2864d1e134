//! Shared oracle machinery for the integration tests: periodic-lattice
//! reference implementations that are deliberately independent of the
//! symbol code they validate.

#![allow(dead_code)]

use num_complex::Complex64;
use tetra_lfa::stencil::Stencil15;

pub const Z0: Complex64 = Complex64::new(0.0, 0.0);
pub const Z1: Complex64 = Complex64::new(1.0, 0.0);

// ---------------------------------------------------------------------------
// Dense complex linear algebra (reference-grade, no pivoting tricks)
// ---------------------------------------------------------------------------

/// Solve A x = b by Gaussian elimination with partial pivoting. `a` is
/// row-major n x n and is consumed.
pub fn solve_dense(mut a: Vec<Complex64>, mut b: Vec<Complex64>) -> Vec<Complex64> {
    let n = b.len();
    assert_eq!(a.len(), n * n);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i * n + col].norm().total_cmp(&a[j * n + col].norm()))
            .unwrap();
        assert!(a[piv * n + col].norm() > 1e-300, "singular oracle system");
        if piv != col {
            for j in 0..n {
                a.swap(col * n + j, piv * n + j);
            }
            b.swap(col, piv);
        }
        for row in col + 1..n {
            let f = a[row * n + col] / a[col * n + col];
            if f == Z0 {
                continue;
            }
            for j in col..n {
                let t = f * a[col * n + j];
                a[row * n + j] -= t;
            }
            let t = f * b[col];
            b[row] -= t;
        }
    }
    for col in (0..n).rev() {
        let mut s = b[col];
        for j in col + 1..n {
            s -= a[col * n + j] * b[j];
        }
        b[col] = s / a[col * n + col];
    }
    b
}

// ---------------------------------------------------------------------------
// Periodic lattice fields
// ---------------------------------------------------------------------------

#[inline]
pub fn pidx(n: usize, i: i64, j: i64, k: i64) -> usize {
    let w = |x: i64| x.rem_euclid(n as i64) as usize;
    (w(i) * n + w(j)) * n + w(k)
}

/// Fourier mode e^{i xi . k} on the periodic n^3 lattice.
pub fn mode(n: usize, xi: [f64; 3]) -> Vec<Complex64> {
    let mut u = vec![Z0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let ph = xi[0] * i as f64 + xi[1] * j as f64 + xi[2] * k as f64;
                u[(i * n + j) * n + k] = Complex64::from_polar(1.0, ph);
            }
        }
    }
    u
}

/// <mode(xi), u> / n^3: the coefficient of that mode in u (modes on the
/// lattice frequencies are orthogonal).
pub fn project(n: usize, xi: [f64; 3], u: &[Complex64]) -> Complex64 {
    let m = mode(n, xi);
    let s: Complex64 = m.iter().zip(u).map(|(a, b)| a.conj() * b).sum();
    s / (n * n * n) as f64
}

/// out = L u on the periodic lattice.
pub fn apply_periodic(st: &Stencil15, n: usize, u: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Z0; n * n * n];
    for i in 0..n as i64 {
        for j in 0..n as i64 {
            for k in 0..n as i64 {
                let mut s = st.center * u[pidx(n, i, j, k)];
                for (o, c) in &st.offsets {
                    s += c * u[pidx(n, i + o[0] as i64, j + o[1] as i64, k + o[2] as i64)];
                }
                out[pidx(n, i, j, k)] = s;
            }
        }
    }
    out
}

/// Dense circulant matrix of the operator with the given offset list
/// (offsets given as (offset, coefficient), center included with offset 0).
pub fn circulant(n: usize, entries: &[([i32; 3], f64)]) -> Vec<Complex64> {
    let m = n * n * n;
    let mut a = vec![Z0; m * m];
    for i in 0..n as i64 {
        for j in 0..n as i64 {
            for k in 0..n as i64 {
                let row = pidx(n, i, j, k);
                for (o, c) in entries {
                    let col = pidx(n, i + o[0] as i64, j + o[1] as i64, k + o[2] as i64);
                    a[row * m + col] += Complex64::new(*c, 0.0);
                }
            }
        }
    }
    a
}

/// Offset list of the full operator.
pub fn full_entries(st: &Stencil15) -> Vec<([i32; 3], f64)> {
    let mut v = vec![([0, 0, 0], st.center)];
    v.extend(st.offsets.iter().cloned());
    v
}

// ---------------------------------------------------------------------------
// Periodic discrete sweeps (literal reference implementations)
// ---------------------------------------------------------------------------

/// Four-color sweep on the periodic lattice (n divisible by 4), colors
/// (i+j+k) mod 4 in order, residual recomputed before each partial step.
pub fn sweep_four_color(st: &Stencil15, n: usize, u: &mut [Complex64], omega: &[f64; 4]) {
    assert_eq!(n % 4, 0);
    for (color, &w) in omega.iter().enumerate() {
        let lu = apply_periodic(st, n, u);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if (i + j + k) % 4 == color {
                        let p = (i * n + j) * n + k;
                        u[p] -= w * lu[p] / st.center;
                    }
                }
            }
        }
    }
}

/// Jacobi sweep on the periodic lattice.
pub fn sweep_jacobi(st: &Stencil15, n: usize, u: &mut [Complex64], omega: f64) {
    let lu = apply_periodic(st, n, u);
    for (ui, li) in u.iter_mut().zip(lu.iter()) {
        *ui -= omega * li / st.center;
    }
}

/// Gauss-Seidel (SOR) iteration defined through its periodic splitting:
/// M u_new = (M - L) u_old with M the circulant built from the center
/// (divided by omega) and the already-visited offsets of the (k3,k2,k1)
/// ordering. On the torus this is the translation-invariant operator whose
/// symbol the engine computes.
pub fn sweep_gs_splitting(st: &Stencil15, n: usize, u: &[Complex64], omega: f64) -> Vec<Complex64> {
    let mut m_entries = vec![([0, 0, 0], st.center / omega)];
    for (o, c) in &st.offsets {
        let [k1, k2, k3] = *o;
        if k3 < 0 || (k3 == 0 && k2 < 0) || (k3 == 0 && k2 == 0 && k1 < 0) {
            m_entries.push((*o, *c));
        }
    }
    splitting_step(st, n, u, &m_entries)
}

/// Lexicographic plane (block SOR) iteration through its periodic splitting:
/// M = (in-plane part)/omega + planes below.
pub fn sweep_lex_plane_splitting(
    st: &Stencil15,
    n: usize,
    u: &[Complex64],
    normal: usize,
    omega: f64,
) -> Vec<Complex64> {
    let mut m_entries = vec![([0, 0, 0], st.center / omega)];
    for (o, c) in &st.offsets {
        if o[normal] == 0 {
            m_entries.push((*o, c / omega));
        } else if o[normal] < 0 {
            m_entries.push((*o, *c));
        }
    }
    splitting_step(st, n, u, &m_entries)
}

/// u_new from M u_new = (M - L) u_old, dense periodic solve.
fn splitting_step(
    st: &Stencil15,
    n: usize,
    u: &[Complex64],
    m_entries: &[([i32; 3], f64)],
) -> Vec<Complex64> {
    let lu = apply_periodic(st, n, u);
    let mu = {
        // (M - L) u = M u - L u; apply M via its offsets
        let mut v = vec![Z0; u.len()];
        for i in 0..n as i64 {
            for j in 0..n as i64 {
                for k in 0..n as i64 {
                    let mut s = Z0;
                    for (o, c) in m_entries {
                        s += c * u[pidx(n, i + o[0] as i64, j + o[1] as i64, k + o[2] as i64)];
                    }
                    v[pidx(n, i, j, k)] = s;
                }
            }
        }
        v
    };
    let rhs: Vec<Complex64> = mu.iter().zip(lu.iter()).map(|(a, b)| a - b).collect();
    solve_dense(circulant(n, m_entries), rhs)
}

/// Zebra line sweep along axis d on the periodic lattice (n even): exact
/// periodic line solves, lines of even parity (in coordinate (d+1) mod 3)
/// first, residual frozen per half-sweep.
pub fn sweep_zebra_line(
    st: &Stencil15,
    n: usize,
    u: &mut [Complex64],
    d: usize,
    omega: f64,
) {
    assert_eq!(n % 2, 0);
    let c_axis = (d + 1) % 3;
    // periodic line matrix: center on the diagonal, line coefficient on the
    // cyclic off-diagonals
    let mut dir = [0i32; 3];
    dir[d] = 1;
    let off = st.coefficient(dir);
    let mut line_mat = vec![Z0; n * n];
    for i in 0..n {
        line_mat[i * n + i] = Complex64::new(st.center, 0.0);
        line_mat[i * n + (i + 1) % n] += Complex64::new(off, 0.0);
        line_mat[i * n + (i + n - 1) % n] += Complex64::new(off, 0.0);
    }
    for parity in [0usize, 1] {
        let lu = apply_periodic(st, n, u);
        for t1 in 0..n {
            for t2 in 0..n {
                let mut coord = [0usize; 3];
                coord[(d + 1) % 3] = t1;
                coord[(d + 2) % 3] = t2;
                if coord[c_axis] % 2 != parity {
                    continue;
                }
                let rhs: Vec<Complex64> = (0..n)
                    .map(|li| {
                        coord[d] = li;
                        -lu[(coord[0] * n + coord[1]) * n + coord[2]]
                    })
                    .collect();
                let delta = solve_dense(line_mat.clone(), rhs);
                for (li, dv) in delta.iter().enumerate() {
                    coord[d] = li;
                    u[(coord[0] * n + coord[1]) * n + coord[2]] += omega * dv;
                }
            }
        }
    }
}

/// Zebra plane sweep with normal axis on the periodic lattice: exact dense
/// solves of the in-plane periodic operator, even planes first.
pub fn sweep_zebra_plane(
    st: &Stencil15,
    n: usize,
    u: &mut [Complex64],
    normal: usize,
    omega: f64,
) {
    assert_eq!(n % 2, 0);
    let a1 = (normal + 1) % 3;
    let a2 = (normal + 2) % 3;
    let m = n * n;
    let mut plane_mat = vec![Z0; m * m];
    for i in 0..n as i64 {
        for j in 0..n as i64 {
            let w = |x: i64| x.rem_euclid(n as i64) as usize;
            let row = w(i) * n + w(j);
            plane_mat[row * m + row] += Complex64::new(st.center, 0.0);
            for (o, c) in &st.offsets {
                if o[normal] != 0 {
                    continue;
                }
                let col = w(i + o[a1] as i64) * n + w(j + o[a2] as i64);
                plane_mat[row * m + col] += Complex64::new(*c, 0.0);
            }
        }
    }
    for parity in [0usize, 1] {
        let lu = apply_periodic(st, n, u);
        for pl in 0..n {
            if pl % 2 != parity {
                continue;
            }
            let mut rhs = vec![Z0; m];
            for i in 0..n {
                for j in 0..n {
                    let mut c = [0usize; 3];
                    c[normal] = pl;
                    c[a1] = i;
                    c[a2] = j;
                    rhs[i * n + j] = -lu[(c[0] * n + c[1]) * n + c[2]];
                }
            }
            let delta = solve_dense(plane_mat.clone(), rhs);
            for i in 0..n {
                for j in 0..n {
                    let mut c = [0usize; 3];
                    c[normal] = pl;
                    c[a1] = i;
                    c[a2] = j;
                    u[(c[0] * n + c[1]) * n + c[2]] += omega * delta[i * n + j];
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Characteristic-polynomial eigen-oracle
// ---------------------------------------------------------------------------

/// Characteristic polynomial coefficients by the Faddeev-LeVerrier
/// recurrence: p(x) = x^n - a1 x^{n-1} - ... - an, returned as [a1..an].
pub fn char_poly(n: usize, a: &[Complex64]) -> Vec<Complex64> {
    let mul = |x: &[Complex64], y: &[Complex64]| -> Vec<Complex64> {
        let mut out = vec![Z0; n * n];
        for i in 0..n {
            for k in 0..n {
                let s = x[i * n + k];
                if s == Z0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += s * y[k * n + j];
                }
            }
        }
        out
    };
    let mut mk = a.to_vec();
    let mut coeffs = Vec::with_capacity(n);
    for k in 1..=n {
        let ak: Complex64 = (0..n).map(|i| mk[i * n + i]).sum::<Complex64>() / k as f64;
        coeffs.push(ak);
        if k < n {
            let mut shifted = mk.clone();
            for i in 0..n {
                shifted[i * n + i] -= ak;
            }
            mk = mul(a, &shifted);
        }
    }
    coeffs
}

/// Max-modulus root of the monic polynomial x^n - a1 x^{n-1} - ... - an.
/// Roots are located one at a time: power iteration on the companion matrix
/// of the deflated polynomial supplies an estimate, which is then polished by
/// Maehly-deflated Newton against the original polynomial (so deflation
/// round-off cannot accumulate and no root is found twice).
pub fn companion_max_root(coeffs: Vec<Complex64>) -> f64 {
    let degree = coeffs.len();
    let original = coeffs.clone();
    let mut work = coeffs;
    let mut found: Vec<Complex64> = Vec::with_capacity(degree);
    while !work.is_empty() {
        let n = work.len();
        let estimate = if n == 1 {
            work[0]
        } else {
            power_iteration_estimate(&work)
        };
        let root = polish_root(&original, &found, estimate);
        found.push(root);
        if n == 1 {
            break;
        }
        // synthetic division of the deflated monic polynomial by (x - root)
        let mut poly = vec![Z1];
        for c in &work {
            poly.push(-c);
        }
        let mut q = vec![Z0; n];
        q[0] = poly[0];
        for i in 1..n {
            q[i] = poly[i] + root * q[i - 1];
        }
        work = q[1..].iter().map(|c| -c).collect();
    }
    found.iter().map(|r| r.norm()).fold(0.0, f64::max)
}

/// Evaluate the monic polynomial x^n - a1 x^{n-1} - ... - an and its
/// derivative at z (Horner on the coefficient list [1, -a1, ..., -an]).
fn poly_eval(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Z1;
    let mut dp = Z0;
    for c in coeffs {
        dp = dp * z + p;
        p = p * z - c;
    }
    (p, dp)
}

fn power_iteration_estimate(coeffs: &[Complex64]) -> Complex64 {
    let n = coeffs.len();
    let mut v: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(0.37 + 0.11 * i as f64, 0.71 - 0.06 * i as f64))
        .collect();
    let mut lambda = Z0;
    for _ in 0..5000 {
        // w = C v with C the companion matrix (top row = coefficients)
        let mut w = vec![Z0; n];
        for (j, c) in coeffs.iter().enumerate() {
            w[0] += c * v[j];
        }
        for i in 1..n {
            w[i] = v[i - 1];
        }
        let p = (0..n)
            .max_by(|&i, &j| w[i].norm().total_cmp(&w[j].norm()))
            .unwrap();
        let est = if v[p].norm() > 0.0 { w[p] / v[p] } else { lambda };
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            break;
        }
        for x in w.iter_mut() {
            *x /= norm;
        }
        let done = (est - lambda).norm() < 1e-13 * est.norm().max(1e-30);
        lambda = est;
        v = w;
        if done {
            break;
        }
    }
    lambda
}

/// Maehly-deflated Newton on the original polynomial: the correction divides
/// out the already-found roots implicitly, so iterates are repelled from them.
fn polish_root(original: &[Complex64], found: &[Complex64], z0: Complex64) -> Complex64 {
    let scale: f64 = 1.0 + original.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let starts = [
        z0,
        Complex64::new(0.4, 0.9) * scale,
        Complex64::new(-1.1, 0.3) * scale,
        Complex64::new(0.05, -1.3) * scale,
        Complex64::new(1.3, 1.1) * scale,
    ];
    let mut best = z0;
    let mut best_res = f64::INFINITY;
    for &start in &starts {
        let mut z = start;
        for _ in 0..400 {
            let (p, dp) = poly_eval(original, z);
            let s: Complex64 = found.iter().map(|r| (z - r).finv()).sum();
            let denom = dp - p * s;
            if denom.norm() == 0.0 {
                break;
            }
            let step = p / denom;
            z -= step;
            if !z.is_finite() {
                break;
            }
            if step.norm() < 1e-15 * z.norm().max(1e-30) {
                break;
            }
        }
        if z.is_finite() {
            let (p, _) = poly_eval(original, z);
            // weight the residual so roots close to found ones don't win
            let sep: f64 = found
                .iter()
                .map(|r| (z - r).norm())
                .fold(f64::INFINITY, f64::min);
            let res = if sep < 1e-10 * scale { f64::INFINITY } else { p.norm() };
            if res < best_res {
                best_res = res;
                best = z;
            }
        }
        if best_res < 1e-12 * scale.powi(original.len() as i32) {
            break;
        }
    }
    best
}

// ---------------------------------------------------------------------------
// Independent finite-element oracle
// ---------------------------------------------------------------------------

fn v_sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn v_dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn v_cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// P1 stiffness matrix through the opposite-face area-normal formula:
/// grad phi_i = n_i / (n_i . (v_i - f0)) with n_i the normal of the face not
/// containing v_i. Deliberately a different derivation from the production
/// code (which inverts the edge matrix).
pub fn stiffness_oracle(v: [[f64; 3]; 4]) -> [[f64; 4]; 4] {
    let e1 = v_sub(v[1], v[0]);
    let e2 = v_sub(v[2], v[0]);
    let e3 = v_sub(v[3], v[0]);
    let vol = v_dot(e1, v_cross(e2, e3)).abs() / 6.0;
    assert!(vol > 1e-14, "degenerate oracle tetrahedron");
    let mut grads = [[0.0f64; 3]; 4];
    for i in 0..4 {
        let others: Vec<[f64; 3]> = (0..4).filter(|&j| j != i).map(|j| v[j]).collect();
        let n = v_cross(v_sub(others[1], others[0]), v_sub(others[2], others[0]));
        let d = v_dot(n, v_sub(v[i], others[0]));
        for k in 0..3 {
            grads[i][k] = n[k] / d;
        }
    }
    let mut k = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            k[i][j] = vol * v_dot(grads[i], grads[j]);
        }
    }
    k
}

const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Row of the periodically assembled P1 FEM matrix (n^3 lattice, all six
/// Kuhn tetrahedra per cell) belonging to node (0,0,0), as a dense n^3 vector.
pub fn periodic_fem_row(steps: [[f64; 3]; 3], n: usize) -> Vec<f64> {
    let mut row = vec![0.0; n * n * n];
    let phys = |l: [i64; 3]| -> [f64; 3] {
        std::array::from_fn(|k| {
            (0..3).map(|m| l[m] as f64 * steps[m][k]).sum::<f64>()
        })
    };
    for i in 0..n as i64 {
        for j in 0..n as i64 {
            for k in 0..n as i64 {
                for perm in PERMS {
                    // lattice path p, p+u_{pi0}, ..., adding one unit step at a time
                    let mut lat = [[i, j, k]; 4];
                    for t in 0..3 {
                        lat[t + 1] = lat[t];
                        lat[t + 1][perm[t]] += 1;
                    }
                    let ke = stiffness_oracle(std::array::from_fn(|t| phys(lat[t])));
                    let idx: Vec<usize> =
                        lat.iter().map(|l| pidx(n, l[0], l[1], l[2])).collect();
                    for a in 0..4 {
                        if idx[a] != 0 {
                            continue;
                        }
                        for b in 0..4 {
                            row[idx[b]] += ke[a][b];
                        }
                    }
                }
            }
        }
    }
    row
}
