//! Structured geometric multigrid on a parallelepiped index box with zero
//! Dirichlet boundary, used to measure actual cycle convergence rates
//! against the LFA predictions.
//!
//! The grid is the index box {0..n-1}^3 with n = 2^l + 1; the boundary layer
//! is pinned to zero. Anisotropy lives entirely in the stencil, so the same
//! index-space code serves every tetrahedron shape.

use crate::stencil::Stencil15;
use crate::symbols::{SmootherConfig, SmootherKind};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleKind {
    V,
    W,
}

impl CycleKind {
    fn gamma(self) -> usize {
        match self {
            CycleKind::V => 1,
            CycleKind::W => 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CycleConfig {
    pub kind: CycleKind,
    pub nu1: u32,
    pub nu2: u32,
    pub smoother: SmootherConfig,
    /// Finest-level exponent: n = 2^levels + 1 points per direction.
    pub levels: u32,
    pub cycles: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CycleRecord {
    pub cycle: usize,
    pub error_l2: f64,
    pub rate: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunResult {
    pub records: Vec<CycleRecord>,
    /// Geometric mean of the last (up to) 10 per-cycle rates.
    pub asymptotic_rate: f64,
}

#[derive(Debug, Clone, Copy)]
struct Level {
    n: usize,
    /// Per-level stencil multiplier: coefficients scale like h, so each
    /// coarser level doubles the factor (only ratios matter for rates).
    scale: f64,
}

const COARSEST_N: usize = 5;
const CG_REL_TOL: f64 = 1e-8;

#[inline]
fn at(n: usize, i: usize, j: usize, k: usize) -> usize {
    (i * n + j) * n + k
}

/// Linearized neighbor displacements of the stencil offsets for grid size n.
fn deltas(st: &Stencil15, n: usize) -> Vec<(isize, f64)> {
    st.offsets
        .iter()
        .map(|(o, c)| {
            (
                (o[0] as isize * n as isize + o[1] as isize) * n as isize + o[2] as isize,
                *c,
            )
        })
        .collect()
}

fn zero_boundary(u: &mut [f64], n: usize) {
    for i in 0..n {
        for j in 0..n {
            for (a, b, c) in [(0, i, j), (n - 1, i, j), (i, 0, j), (i, n - 1, j), (i, j, 0), (i, j, n - 1)]
            {
                u[at(n, a, b, c)] = 0.0;
            }
        }
    }
}

/// out = (scale * L) u on the interior, zero on the boundary.
fn apply_op(st: &Stencil15, scale: f64, n: usize, u: &[f64], out: &mut [f64]) {
    let nb = deltas(st, n);
    out.fill(0.0);
    for i in 1..n - 1 {
        for j in 1..n - 1 {
            for k in 1..n - 1 {
                let p = at(n, i, j, k);
                let mut s = st.center * u[p];
                for &(d, c) in &nb {
                    s += c * u[(p as isize + d) as usize];
                }
                out[p] = scale * s;
            }
        }
    }
}

fn residual(st: &Stencil15, scale: f64, n: usize, u: &[f64], f: &[f64], r: &mut [f64]) {
    apply_op(st, scale, n, u, r);
    for (ri, fi) in r.iter_mut().zip(f.iter()) {
        *ri = fi - *ri;
    }
    zero_boundary(r, n);
}

pub fn norm_l2(u: &[f64]) -> f64 {
    u.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Discrete energy <Lu, u> (used by the energy-decrease property checks).
pub fn energy(st: &Stencil15, scale: f64, n: usize, u: &[f64]) -> f64 {
    let mut lu = vec![0.0; u.len()];
    apply_op(st, scale, n, u, &mut lu);
    u.iter().zip(lu.iter()).map(|(a, b)| a * b).sum()
}

// ---------------------------------------------------------------------------
// Smoothers
// ---------------------------------------------------------------------------

fn smooth_jacobi(st: &Stencil15, scale: f64, n: usize, u: &mut [f64], f: &[f64], omega: f64) {
    let mut r = vec![0.0; u.len()];
    residual(st, scale, n, u, f, &mut r);
    let d = st.center * scale;
    for (ui, ri) in u.iter_mut().zip(r.iter()) {
        *ui += omega * ri / d;
    }
    zero_boundary(u, n);
}

/// Lexicographic SOR sweep, ordered by (k3, k2, k1) to match the symbol's
/// triangular splitting.
fn smooth_gs_lex(st: &Stencil15, scale: f64, n: usize, u: &mut [f64], f: &[f64], omega: f64) {
    let nb = deltas(st, n);
    let d = st.center * scale;
    for k in 1..n - 1 {
        for j in 1..n - 1 {
            for i in 1..n - 1 {
                let p = at(n, i, j, k);
                let mut s = st.center * u[p];
                for &(dd, c) in &nb {
                    s += c * u[(p as isize + dd) as usize];
                }
                u[p] += omega * (f[p] - scale * s) / d;
            }
        }
    }
}

/// Four-color sweep: colors (i + j + k) mod 4 updated in order 0..3, each
/// partial step Jacobi-like with the residual recomputed beforehand.
fn smooth_four_color(
    st: &Stencil15,
    scale: f64,
    n: usize,
    u: &mut [f64],
    f: &[f64],
    omega: &[f64],
) {
    let mut r = vec![0.0; u.len()];
    let d = st.center * scale;
    for (color, &w) in omega.iter().enumerate() {
        residual(st, scale, n, u, f, &mut r);
        for i in 1..n - 1 {
            for j in 1..n - 1 {
                for k in 1..n - 1 {
                    if (i + j + k) % 4 == color {
                        let p = at(n, i, j, k);
                        u[p] += w * r[p] / d;
                    }
                }
            }
        }
    }
}

/// Constant-coefficient symmetric tridiagonal solve (Thomas algorithm),
/// in place on `rhs`.
fn thomas(diag: f64, off: f64, rhs: &mut [f64]) {
    let m = rhs.len();
    if m == 0 {
        return;
    }
    let mut cp = vec![0.0; m];
    let mut denom = diag;
    cp[0] = off / denom;
    rhs[0] /= denom;
    for i in 1..m {
        denom = diag - off * cp[i - 1];
        cp[i] = off / denom;
        rhs[i] = (rhs[i] - off * rhs[i - 1]) / denom;
    }
    for i in (0..m - 1).rev() {
        let t = cp[i] * rhs[i + 1];
        rhs[i] -= t;
    }
}

fn axis_index(d: usize, line: usize, t1: usize, t2: usize, a1: usize, a2: usize, n: usize) -> usize {
    let mut c = [0usize; 3];
    c[d] = line;
    c[a1] = t1;
    c[a2] = t2;
    at(n, c[0], c[1], c[2])
}

/// Zebra line relaxation along axis `d`: exact tridiagonal solves on all
/// lines of one parity (parity taken in coordinate (d+1) mod 3, matching the
/// harmonic pairing of the symbol), even lines first.
fn smooth_zebra_line(
    st: &Stencil15,
    scale: f64,
    n: usize,
    u: &mut [f64],
    f: &[f64],
    d: usize,
    omega: f64,
) {
    let a1 = (d + 1) % 3;
    let a2 = (d + 2) % 3;
    let diag = st.center * scale;
    let mut dir = [0i32; 3];
    dir[d] = 1;
    let off = st.coefficient(dir) * scale;
    let mut r = vec![0.0; u.len()];
    let mut line = vec![0.0; n - 2];
    for parity in [0usize, 1] {
        residual(st, scale, n, u, f, &mut r);
        for t1 in 1..n - 1 {
            if t1 % 2 != parity {
                continue;
            }
            for t2 in 1..n - 1 {
                for (s, li) in (1..n - 1).enumerate() {
                    line[s] = r[axis_index(d, li, t1, t2, a1, a2, n)];
                }
                thomas(diag, off, &mut line);
                for (s, li) in (1..n - 1).enumerate() {
                    u[axis_index(d, li, t1, t2, a1, a2, n)] += omega * line[s];
                }
            }
        }
    }
}

/// In-plane stencil entries for planes with normal axis `nn`, as 2D offsets
/// over the remaining axes (a1, a2).
fn plane_stencil(st: &Stencil15, nn: usize) -> Vec<([i32; 2], f64)> {
    let a1 = (nn + 1) % 3;
    let a2 = (nn + 2) % 3;
    st.offsets
        .iter()
        .filter(|(o, _)| o[nn] == 0)
        .map(|(o, c)| ([o[a1], o[a2]], *c))
        .collect()
}

/// Conjugate gradients on one plane: solve (scale * L_plane) x = b to
/// relative residual 1e-8, zero Dirichlet border, x0 = 0. `b` and the
/// returned x are (n x n) plane arrays.
fn plane_solve_cg(
    offs2: &[([i32; 2], f64)],
    center: f64,
    scale: f64,
    n: usize,
    b: &[f64],
    plane_id: usize,
) -> Result<Vec<f64>> {
    let m = n * n;
    let apply = |x: &[f64], out: &mut [f64]| {
        out.fill(0.0);
        for i in 1..n - 1 {
            for j in 1..n - 1 {
                let mut s = center * x[i * n + j];
                for &(o, c) in offs2 {
                    s += c * x[(i as i32 + o[0]) as usize * n + (j as i32 + o[1]) as usize];
                }
                out[i * n + j] = scale * s;
            }
        }
    };
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let bnorm = norm_l2(b);
    if bnorm == 0.0 {
        return Ok(vec![0.0; m]);
    }
    let mut x = vec![0.0; m];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut ap = vec![0.0; m];
    let mut rr = dot(&r, &r);
    for _ in 0..20 * m {
        apply(&p, &mut ap);
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            return Err(Error::Numerical(format!(
                "CG breakdown on plane {plane_id}: non-positive curvature"
            )));
        }
        let alpha = rr / pap;
        for i in 0..m {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rr_new = dot(&r, &r);
        if rr_new.sqrt() <= CG_REL_TOL * bnorm {
            return Ok(x);
        }
        let beta = rr_new / rr;
        rr = rr_new;
        for i in 0..m {
            p[i] = r[i] + beta * p[i];
        }
    }
    Err(Error::Numerical(format!(
        "CG did not converge on plane {plane_id} (relative residual {:.3e})",
        norm_l2(&r) / bnorm
    )))
}

fn gather_plane(u: &[f64], n: usize, nn: usize, pl: usize, out: &mut [f64]) {
    let a1 = (nn + 1) % 3;
    let a2 = (nn + 2) % 3;
    for i in 0..n {
        for j in 0..n {
            let mut c = [0usize; 3];
            c[nn] = pl;
            c[a1] = i;
            c[a2] = j;
            out[i * n + j] = u[at(n, c[0], c[1], c[2])];
        }
    }
}

fn scatter_plane_add(u: &mut [f64], n: usize, nn: usize, pl: usize, x: &[f64], omega: f64) {
    let a1 = (nn + 1) % 3;
    let a2 = (nn + 2) % 3;
    for i in 1..n - 1 {
        for j in 1..n - 1 {
            let mut c = [0usize; 3];
            c[nn] = pl;
            c[a1] = i;
            c[a2] = j;
            u[at(n, c[0], c[1], c[2])] += omega * x[i * n + j];
        }
    }
}

/// Zebra plane relaxation: exact (CG) solves on all even planes with the
/// pre-sweep residual, then on all odd planes.
fn smooth_zebra_plane(
    st: &Stencil15,
    scale: f64,
    n: usize,
    u: &mut [f64],
    f: &[f64],
    nn: usize,
    omega: f64,
) -> Result<()> {
    let offs2 = plane_stencil(st, nn);
    let mut r = vec![0.0; u.len()];
    let mut b = vec![0.0; n * n];
    for parity in [0usize, 1] {
        residual(st, scale, n, u, f, &mut r);
        for pl in 1..n - 1 {
            if pl % 2 != parity {
                continue;
            }
            gather_plane(&r, n, nn, pl, &mut b);
            let x = plane_solve_cg(&offs2, st.center, scale, n, &b, pl)?;
            scatter_plane_add(u, n, nn, pl, &x, omega);
        }
    }
    Ok(())
}

/// Lexicographic plane sweep: ascending planes, each solved exactly against
/// the current iterate (block SOR with the in-plane operator as the block).
fn smooth_lex_plane(
    st: &Stencil15,
    scale: f64,
    n: usize,
    u: &mut [f64],
    f: &[f64],
    nn: usize,
    omega: f64,
) -> Result<()> {
    let offs2 = plane_stencil(st, nn);
    let mut r = vec![0.0; u.len()];
    let mut b = vec![0.0; n * n];
    for pl in 1..n - 1 {
        residual(st, scale, n, u, f, &mut r);
        gather_plane(&r, n, nn, pl, &mut b);
        let x = plane_solve_cg(&offs2, st.center, scale, n, &b, pl)?;
        scatter_plane_add(u, n, nn, pl, &x, omega);
    }
    Ok(())
}

/// One smoothing sweep on a level.
pub fn relax(
    st: &Stencil15,
    scale: f64,
    n: usize,
    u: &mut [f64],
    f: &[f64],
    cfg: &SmootherConfig,
) -> Result<()> {
    match cfg.kind {
        SmootherKind::Jacobi => smooth_jacobi(st, scale, n, u, f, cfg.omega[0]),
        SmootherKind::GsLex => smooth_gs_lex(st, scale, n, u, f, cfg.omega[0]),
        SmootherKind::FourColor => smooth_four_color(st, scale, n, u, f, &cfg.omega),
        SmootherKind::ZebraLine(d) => smooth_zebra_line(st, scale, n, u, f, d, cfg.omega[0]),
        SmootherKind::ZebraPlane(d) => smooth_zebra_plane(st, scale, n, u, f, d, cfg.omega[0])?,
        SmootherKind::LexPlane(d) => smooth_lex_plane(st, scale, n, u, f, d, cfg.omega[0])?,
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Transfers
// ---------------------------------------------------------------------------

/// Restriction = transpose of the prolongation: coarse point 2c collects the
/// fine value there plus half the 14 lattice neighbors.
pub fn restrict(r: &[f64], n: usize) -> Vec<f64> {
    let nc = (n - 1) / 2 + 1;
    let nb = {
        let mut v = Vec::with_capacity(14);
        for d in crate::stencil::DIRECTIONS {
            v.push(d);
            v.push([-d[0], -d[1], -d[2]]);
        }
        v
    };
    let mut out = vec![0.0; nc * nc * nc];
    for ci in 1..nc - 1 {
        for cj in 1..nc - 1 {
            for ck in 1..nc - 1 {
                let (i, j, k) = (2 * ci, 2 * cj, 2 * ck);
                let mut s = r[at(n, i, j, k)];
                for o in &nb {
                    s += 0.5
                        * r[at(
                            n,
                            (i as i32 + o[0]) as usize,
                            (j as i32 + o[1]) as usize,
                            (k as i32 + o[2]) as usize,
                        )];
                }
                out[at(nc, ci, cj, ck)] = s;
            }
        }
    }
    out
}

/// Prolongation: copy at coincident points, average the two coarse endpoints
/// of the lattice edge through every other fine point.
pub fn prolong(uc: &[f64], nc: usize, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let r = [i % 2, j % 2, k % 2];
                let c0 = [i / 2, j / 2, k / 2];
                if r == [0, 0, 0] {
                    out[at(n, i, j, k)] = uc[at(nc, c0[0], c0[1], c0[2])];
                } else {
                    let c1 = [c0[0] + r[0], c0[1] + r[1], c0[2] + r[2]];
                    out[at(n, i, j, k)] = 0.5
                        * (uc[at(nc, c0[0], c0[1], c0[2])] + uc[at(nc, c1[0], c1[1], c1[2])]);
                }
            }
        }
    }
    zero_boundary(&mut out, n);
    out
}

// ---------------------------------------------------------------------------
// Coarsest-grid solve
// ---------------------------------------------------------------------------

/// Dense Gaussian elimination on the interior unknowns (n <= 5, so at most
/// 27 of them).
fn coarsest_solve(st: &Stencil15, scale: f64, n: usize, f: &[f64]) -> Result<Vec<f64>> {
    let m = (n - 2) * (n - 2) * (n - 2);
    let pid = |i: usize, j: usize, k: usize| ((i - 1) * (n - 2) + (j - 1)) * (n - 2) + (k - 1);
    let mut a = vec![0.0; m * m];
    let mut b = vec![0.0; m];
    for i in 1..n - 1 {
        for j in 1..n - 1 {
            for k in 1..n - 1 {
                let row = pid(i, j, k);
                a[row * m + row] = st.center * scale;
                b[row] = f[at(n, i, j, k)];
                for (o, c) in &st.offsets {
                    let (qi, qj, qk) =
                        (i as i32 + o[0], j as i32 + o[1], k as i32 + o[2]);
                    if qi >= 1 && qi < n as i32 - 1 && qj >= 1 && qj < n as i32 - 1 && qk >= 1
                        && qk < n as i32 - 1
                    {
                        a[row * m + pid(qi as usize, qj as usize, qk as usize)] += c * scale;
                    }
                }
            }
        }
    }
    // partial-pivot elimination
    for col in 0..m {
        let piv = (col..m)
            .max_by(|&x, &y| a[x * m + col].abs().total_cmp(&a[y * m + col].abs()))
            .unwrap();
        if a[piv * m + col].abs() < 1e-300 {
            return Err(Error::Numerical("singular coarsest-grid matrix".into()));
        }
        if piv != col {
            for j in 0..m {
                a.swap(col * m + j, piv * m + j);
            }
            b.swap(col, piv);
        }
        for row in col + 1..m {
            let fac = a[row * m + col] / a[col * m + col];
            if fac == 0.0 {
                continue;
            }
            for j in col..m {
                a[row * m + j] -= fac * a[col * m + j];
            }
            b[row] -= fac * b[col];
        }
    }
    for col in (0..m).rev() {
        let mut s = b[col];
        for j in col + 1..m {
            s -= a[col * m + j] * b[j];
        }
        b[col] = s / a[col * m + col];
    }
    let mut u = vec![0.0; n * n * n];
    for i in 1..n - 1 {
        for j in 1..n - 1 {
            for k in 1..n - 1 {
                u[at(n, i, j, k)] = b[pid(i, j, k)];
            }
        }
    }
    Ok(u)
}

// ---------------------------------------------------------------------------
// Cycles
// ---------------------------------------------------------------------------

pub struct MultigridSolver {
    stencil: Stencil15,
    levels: Vec<Level>,
}

impl MultigridSolver {
    /// Build the level hierarchy n = 2^l + 1, l = levels down to 2
    /// (coarsest n = 5).
    pub fn new(stencil: Stencil15, levels: u32) -> Result<Self> {
        if levels < 2 {
            return Err(Error::Config(format!(
                "need at least 2 levels (got {levels}); the coarsest grid is n = 5"
            )));
        }
        let lv = (2..=levels)
            .rev()
            .map(|l| Level { n: (1usize << l) + 1, scale: 0.5f64.powi(l as i32) })
            .collect();
        Ok(MultigridSolver { stencil, levels: lv })
    }

    pub fn finest_n(&self) -> usize {
        self.levels[0].n
    }

    fn cycle(
        &self,
        li: usize,
        u: &mut Vec<f64>,
        f: &[f64],
        cfg: &CycleConfig,
    ) -> Result<()> {
        let lv = self.levels[li];
        if lv.n <= COARSEST_N || li == self.levels.len() - 1 {
            *u = coarsest_solve(&self.stencil, lv.scale, lv.n, f)?;
            return Ok(());
        }
        for _ in 0..cfg.nu1 {
            relax(&self.stencil, lv.scale, lv.n, u, f, &cfg.smoother)?;
        }
        let mut r = vec![0.0; u.len()];
        residual(&self.stencil, lv.scale, lv.n, u, f, &mut r);
        let mut fc = restrict(&r, lv.n);
        zero_boundary(&mut fc, self.levels[li + 1].n);
        let nc = self.levels[li + 1].n;
        let mut ec = vec![0.0; nc * nc * nc];
        for _ in 0..cfg.kind.gamma() {
            self.cycle(li + 1, &mut ec, &fc, cfg)?;
        }
        let corr = prolong(&ec, nc, lv.n);
        for (ui, ci) in u.iter_mut().zip(corr.iter()) {
            *ui += ci;
        }
        zero_boundary(u, lv.n);
        for _ in 0..cfg.nu2 {
            relax(&self.stencil, lv.scale, lv.n, u, f, &cfg.smoother)?;
        }
        Ok(())
    }

    /// Zero right-hand side, seeded random initial error in [-1, 1]: the
    /// iterate is the error, so per-cycle L2 norm ratios are the rates.
    /// Aborts if the rate exceeds 1.5 for three consecutive cycles.
    pub fn run_cycles(&self, cfg: &CycleConfig) -> Result<RunResult> {
        let n = self.finest_n();
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut u = vec![0.0; n * n * n];
        for i in 1..n - 1 {
            for j in 1..n - 1 {
                for k in 1..n - 1 {
                    u[at(n, i, j, k)] = rng.gen_range(-1.0..1.0);
                }
            }
        }
        let f = vec![0.0; n * n * n];
        let mut records = Vec::with_capacity(cfg.cycles);
        let mut err_acc = 1.0;
        let mut diverging = 0;
        for cycle in 1..=cfg.cycles {
            let prev = norm_l2(&u);
            self.cycle(0, &mut u, &f, cfg)?;
            let cur = norm_l2(&u);
            let rate = cur / prev;
            err_acc *= rate;
            records.push(CycleRecord { cycle, error_l2: err_acc, rate });
            if rate > 1.5 {
                diverging += 1;
                if diverging >= 3 {
                    return Err(Error::Numerical(format!(
                        "divergence: rate {rate:.3} exceeded 1.5 for 3 consecutive cycles (cycle {cycle})"
                    )));
                }
            } else {
                diverging = 0;
            }
            // renormalize so long runs cannot underflow
            if cur > 0.0 {
                for x in u.iter_mut() {
                    *x /= cur;
                }
            }
        }
        let tail = records.len().min(10);
        let asymptotic_rate = if tail == 0 {
            f64::NAN
        } else {
            let logsum: f64 = records[records.len() - tail..]
                .iter()
                .map(|r| r.rate.ln())
                .sum();
            (logsum / tail as f64).exp()
        };
        Ok(RunResult { records, asymptotic_rate })
    }
}

/// Predicted-vs-measured comparison record.
#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub predicted_rho: f64,
    pub measured_rho: f64,
    pub gap: f64,
}

/// Run the LFA two-grid prediction and the actual solver side by side.
pub fn measure_vs_prediction(
    st: &Stencil15,
    st_coarse: &Stencil15,
    cfg: &CycleConfig,
    resolution: usize,
) -> Result<(Comparison, crate::analysis::FactorReport, RunResult)> {
    let grid = crate::analysis::SampleGrid::new(
        crate::analysis::Region::LambdaCoarse,
        resolution,
    )?;
    let report =
        crate::analysis::two_grid_factor(st, st_coarse, &cfg.smoother, cfg.nu1, cfg.nu2, &grid)?;
    let solver = MultigridSolver::new(st.clone(), cfg.levels)?;
    let run = solver.run_cycles(cfg)?;
    let cmp = Comparison {
        predicted_rho: report.factor,
        measured_rho: run.asymptotic_rate,
        gap: (report.factor - run.asymptotic_rate).abs(),
    };
    Ok((cmp, report, run))
}
