//! Frequency-domain sampling: smoothing factors, two-grid convergence
//! factors, and damping optimization.
//!
//! Suprema are taken over a half-open frequency lattice (upper box edges
//! included, lower excluded, matching the (-pi, pi] convention) and then
//! refined by a local Nelder-Mead polish started from the best lattice point.

use crate::stencil::Stencil15;
use crate::symbols::{
    self, four_color_smoothing_matrix, in_theta_h, scalar_symbol, smoother_symbol_8,
    two_grid_symbol_16, two_grid_symbol_8, SmootherConfig, SmootherKind,
};
use crate::{eig, Error, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

// ---------------------------------------------------------------------------
// Sampling regions
// ---------------------------------------------------------------------------

/// Frequency boxes the factors are taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// Theta_h \ Theta_H: the full box (-pi, pi]^3 minus the low-frequency
    /// box, for classical smoothing analysis.
    ThetaHMinusThetaH,
    /// Lambda_h = (-pi, pi]^2 x (-pi/2, 0]: base frequencies of the
    /// four-color quadruples (the asymmetric third range is deliberate).
    LambdaFine,
    /// Lambda~_H = (-pi/2, pi/2]^2 x (-pi/2, 0]: base frequencies of the
    /// 16-dimensional four-color two-grid spaces.
    LambdaCoarse,
    /// Theta~_H = (-pi/2, pi/2]^3: base frequencies of the standard
    /// 8-harmonic two-grid spaces.
    ThetaCoarse,
}

impl Region {
    pub fn bounds(self) -> ([f64; 3], [f64; 3]) {
        let p = PI;
        let h = PI / 2.0;
        match self {
            Region::ThetaHMinusThetaH => ([-p, -p, -p], [p, p, p]),
            Region::LambdaFine => ([-p, -p, -h], [p, p, 0.0]),
            Region::LambdaCoarse => ([-h, -h, -h], [h, h, 0.0]),
            Region::ThetaCoarse => ([-h, -h, -h], [h, h, h]),
        }
    }

    /// Extra membership constraint beyond the box (only the punched-out
    /// low-frequency region needs one).
    pub fn admits(self, xi: [f64; 3]) -> bool {
        match self {
            Region::ThetaHMinusThetaH => !in_theta_h(xi),
            _ => true,
        }
    }
}

/// Frequency lattice specification.
#[derive(Debug, Clone, Copy)]
pub struct SampleGrid {
    pub region: Region,
    /// Samples per pi along each axis.
    pub resolution: usize,
    /// Relative threshold for excluding near-singular frequencies.
    pub exclusion_tol: f64,
}

impl SampleGrid {
    pub fn new(region: Region, resolution: usize) -> Result<Self> {
        if resolution < 4 {
            return Err(Error::Config(format!("resolution {resolution} < 4")));
        }
        Ok(SampleGrid { region, resolution, exclusion_tol: 1e-10 })
    }

    pub fn with_exclusion_tol(mut self, tol: f64) -> Self {
        self.exclusion_tol = tol;
        self
    }

    /// Half-open lattice: lo + step, lo + 2 step, ..., hi (upper edge in,
    /// lower edge out). Points failing the region filter are dropped.
    pub fn points(&self) -> Vec<[f64; 3]> {
        let (lo, hi) = self.region.bounds();
        let step = PI / self.resolution as f64;
        let counts: [usize; 3] =
            std::array::from_fn(|k| ((hi[k] - lo[k]) / step).round() as usize);
        let mut pts = Vec::with_capacity(counts[0] * counts[1] * counts[2]);
        for i in 1..=counts[0] {
            for j in 1..=counts[1] {
                for k in 1..=counts[2] {
                    let xi = [
                        lo[0] + step * i as f64,
                        lo[1] + step * j as f64,
                        lo[2] + step * k as f64,
                    ];
                    if self.region.admits(xi) {
                        pts.push(xi);
                    }
                }
            }
        }
        pts
    }
}

/// Result of one factor computation.
#[derive(Debug, Clone, Serialize)]
pub struct FactorReport {
    pub factor: f64,
    pub argmax_frequency: [f64; 3],
    pub samples_used: usize,
    pub samples_excluded: usize,
    /// True when `factor` is a per-sweep quantity (smoothing factors); the
    /// tabulated mu^{nu1+nu2} is then factor^(nu1+nu2).
    pub per_sweep: bool,
}

// ---------------------------------------------------------------------------
// Nelder-Mead
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    pub max_iter: usize,
    /// Stop when the simplex diameter falls below this.
    pub diameter_tol: f64,
    pub f_tol: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions { max_iter: 400, diameter_tol: 1e-8, f_tol: 1e-12 }
    }
}

/// Downhill simplex minimization (reflection 1, expansion 2, contraction 0.5,
/// shrink 0.5). Returns the best point and value seen.
pub fn nelder_mead<F: Fn(&[f64]) -> f64>(
    f: F,
    x0: &[f64],
    opts: SimplexOptions,
) -> (Vec<f64>, f64) {
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..n {
        let mut x = x0.to_vec();
        // initial spread: 5% of the coordinate, or a small absolute step
        x[i] = if x[i] != 0.0 { x[i] * 1.05 } else { 0.00025 };
        simplex.push(x);
    }
    let mut fv: Vec<f64> = simplex.iter().map(|x| f(x)).collect();
    for _ in 0..opts.max_iter {
        // order best..worst
        let mut idx: Vec<usize> = (0..=n).collect();
        idx.sort_by(|&a, &b| fv[a].total_cmp(&fv[b]));
        simplex = idx.iter().map(|&i| simplex[i].clone()).collect();
        fv = idx.iter().map(|&i| fv[i]).collect();

        let diameter = simplex
            .iter()
            .skip(1)
            .map(|x| {
                x.iter()
                    .zip(&simplex[0])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max);
        if diameter < opts.diameter_tol || (fv[n] - fv[0]).abs() < opts.f_tol {
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|x| x[k]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let xr: Vec<f64> = (0..n).map(|k| centroid[k] + (centroid[k] - worst[k])).collect();
        let fr = f(&xr);
        if fr < fv[0] {
            let xe: Vec<f64> =
                (0..n).map(|k| centroid[k] + 2.0 * (centroid[k] - worst[k])).collect();
            let fe = f(&xe);
            if fe < fr {
                simplex[n] = xe;
                fv[n] = fe;
            } else {
                simplex[n] = xr;
                fv[n] = fr;
            }
        } else if fr < fv[n - 1] {
            simplex[n] = xr;
            fv[n] = fr;
        } else {
            let toward = if fr < fv[n] { &xr } else { &worst };
            let xc: Vec<f64> =
                (0..n).map(|k| centroid[k] + 0.5 * (toward[k] - centroid[k])).collect();
            let fc = f(&xc);
            if fc < fr.min(fv[n]) {
                simplex[n] = xc;
                fv[n] = fc;
            } else {
                for i in 1..=n {
                    for k in 0..n {
                        simplex[i][k] = simplex[0][k] + 0.5 * (simplex[i][k] - simplex[0][k]);
                    }
                    fv[i] = f(&simplex[i]);
                }
            }
        }
    }
    let best = (0..=n).min_by(|&a, &b| fv[a].total_cmp(&fv[b])).unwrap();
    (simplex[best].clone(), fv[best])
}

// ---------------------------------------------------------------------------
// Supremum machinery
// ---------------------------------------------------------------------------

const PENALTY: f64 = 1e9;

/// Sup of `value` over the grid, plus a clamped local polish from the best
/// lattice point. `value` returns None on excluded frequencies.
fn supremum<F>(grid: &SampleGrid, value: F) -> Result<FactorReport>
where
    F: Fn([f64; 3]) -> Option<f64> + Sync,
{
    let pts = grid.points();
    let evals: Vec<Option<f64>> = pts.par_iter().map(|&xi| value(xi)).collect();
    let excluded = evals.iter().filter(|v| v.is_none()).count();
    let used = evals.len() - excluded;
    if used == 0 {
        return Err(Error::Numerical(
            "all frequency samples were excluded as singular".into(),
        ));
    }
    let (mut best_i, mut best_v) = (0usize, f64::NEG_INFINITY);
    for (i, v) in evals.iter().enumerate() {
        if let Some(v) = *v {
            if v > best_v {
                best_v = v;
                best_i = i;
            }
        }
    }
    let (lo, hi) = grid.region.bounds();
    let region = grid.region;
    let neg = |y: &[f64]| -> f64 {
        let xi: [f64; 3] =
            std::array::from_fn(|k| y[k].clamp(lo[k], hi[k]));
        if !region.admits(xi) {
            return PENALTY;
        }
        match value(xi) {
            Some(v) => -v,
            None => PENALTY,
        }
    };
    let (xbest, fbest) = nelder_mead(neg, &pts[best_i], SimplexOptions::default());
    let (factor, argmax) = if -fbest > best_v {
        let xi: [f64; 3] = std::array::from_fn(|k| xbest[k].clamp(lo[k], hi[k]));
        (-fbest, xi)
    } else {
        (best_v, pts[best_i])
    };
    Ok(FactorReport {
        factor,
        argmax_frequency: argmax,
        samples_used: used,
        samples_excluded: excluded,
        per_sweep: false,
    })
}

// ---------------------------------------------------------------------------
// Factor computations
// ---------------------------------------------------------------------------

/// Classical smoothing factor: sup over high frequencies of the scalar
/// smoothing symbol modulus (per sweep). Zebra smoothers have no scalar
/// symbol; for them the sup runs over harmonic octets of rho(Q8 S8^nu)^(1/nu)
/// with Q8 zeroing the low-frequency harmonics.
pub fn smoothing_factor_classic(
    st: &Stencil15,
    cfg: &SmootherConfig,
    nu: u32,
    grid: &SampleGrid,
) -> Result<FactorReport> {
    match cfg.kind {
        SmootherKind::Jacobi | SmootherKind::GsLex | SmootherKind::LexPlane(_) => {
            let g = SampleGrid { region: Region::ThetaHMinusThetaH, ..*grid };
            let mut rep =
                supremum(&g, |xi| scalar_symbol(st, xi, cfg).ok().map(|s| s.norm()))?;
            rep.per_sweep = true;
            Ok(rep)
        }
        SmootherKind::ZebraLine(_) | SmootherKind::ZebraPlane(_) => {
            let g = SampleGrid { region: Region::ThetaCoarse, ..*grid };
            let nu = nu.max(1);
            let mut rep = supremum(&g, |xi000| {
                let s = smoother_symbol_8(st, xi000, cfg).ok()?;
                let mut m = s.pow(nu);
                let oct = symbols::harmonic8(xi000);
                for (row, &h) in oct.iter().enumerate() {
                    if in_theta_h(h) {
                        for j in 0..8 {
                            m[(row, j)] = symbols::ZERO;
                        }
                    }
                }
                eig::spectral_radius(&m).ok().map(|r| r.powf(1.0 / nu as f64))
            })?;
            rep.per_sweep = true;
            Ok(rep)
        }
        SmootherKind::FourColor => Err(Error::Config(
            "four-color smoothing uses smoothing_factor_four_color".into(),
        )),
    }
}

/// Four-color smoothing factor per sweep: sup over Lambda_h of
/// rho(Q S^nu)^(1/nu), Q annihilating quadruple members inside Theta_H.
pub fn smoothing_factor_four_color(
    st: &Stencil15,
    omega: &[f64; 4],
    nu: u32,
    grid: &SampleGrid,
) -> Result<FactorReport> {
    let g = SampleGrid { region: Region::LambdaFine, ..*grid };
    let nu = nu.max(1);
    let mut rep = supremum(&g, |xi0| {
        let m = four_color_smoothing_matrix(st, xi0, omega, nu);
        eig::spectral_radius(&m).ok().map(|r| r.powf(1.0 / nu as f64))
    })?;
    rep.per_sweep = true;
    Ok(rep)
}

/// Two-grid convergence factor rho = sup rho(S^nu2 K S^nu1) on the invariant
/// spaces: 16-dimensional for four-color relaxation (over Lambda~_H),
/// 8-dimensional for all other smoothers (over Theta~_H). Frequencies where
/// the fine or coarse symbol is near-singular are excluded.
pub fn two_grid_factor(
    st: &Stencil15,
    st_h: &Stencil15,
    cfg: &SmootherConfig,
    nu1: u32,
    nu2: u32,
    grid: &SampleGrid,
) -> Result<FactorReport> {
    let tol_f = grid.exclusion_tol * st.scale();
    let tol_c = grid.exclusion_tol * st_h.scale();
    match cfg.kind {
        SmootherKind::FourColor => {
            let omega: [f64; 4] = std::array::from_fn(|i| cfg.omega[i]);
            let g = SampleGrid { region: Region::LambdaCoarse, ..*grid };
            supremum(&g, |xi| {
                let sym = two_grid_symbol_16(st, st_h, xi, &omega, nu1, nu2);
                if sym.min_fine < tol_f || sym.min_coarse < tol_c {
                    return None;
                }
                eig::spectral_radius(&sym.matrix).ok()
            })
        }
        _ => {
            let g = SampleGrid { region: Region::ThetaCoarse, ..*grid };
            supremum(&g, |xi000| {
                let sym = two_grid_symbol_8(st, st_h, xi000, cfg, nu1, nu2).ok()?;
                if sym.min_fine < tol_f || sym.min_coarse < tol_c {
                    return None;
                }
                eig::spectral_radius(&sym.matrix).ok()
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Damping optimization
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimizeMethod {
    Grid,
    Simplex,
}

/// Resolution used while scanning damping candidates; winners are re-scored
/// at the requested resolution (a full scan at the final resolution would be
/// prohibitively slow for the four-parameter four-color family).
const SCAN_RESOLUTION: usize = 16;

fn objective(
    st: &Stencil15,
    st_h: &Stencil15,
    kind: SmootherKind,
    nu1: u32,
    nu2: u32,
    resolution: usize,
    omega: &[f64],
) -> f64 {
    let cfg = match SmootherConfig::new(kind, omega.to_vec()) {
        Ok(c) => c,
        Err(_) => return PENALTY,
    };
    let grid = match SampleGrid::new(Region::LambdaCoarse, resolution) {
        Ok(g) => g,
        Err(_) => return PENALTY,
    };
    match two_grid_factor(st, st_h, &cfg, nu1, nu2, &grid) {
        Ok(rep) if rep.factor.is_finite() => rep.factor,
        _ => PENALTY,
    }
}

/// Minimize the two-grid factor over the damping parameters of `kind`
/// (4 parameters for four-color, 1 otherwise).
///
/// Grid method: step 0.05 over (0, 2] per component; the four-parameter case
/// scans by cyclic coordinate descent on that grid instead of the full
/// product. Simplex method: Nelder-Mead started from the grid winner,
/// converged when the simplex diameter drops below 1e-3.
pub fn optimize_damping(
    st: &Stencil15,
    st_h: &Stencil15,
    kind: SmootherKind,
    nu1: u32,
    nu2: u32,
    method: OptimizeMethod,
    resolution: usize,
) -> Result<(Vec<f64>, FactorReport)> {
    optimize_damping_with(st, st_h, kind, nu1, nu2, method, resolution, 0.05, 2.0)
}

/// As [`optimize_damping`], with explicit grid step and upper damping bound.
#[allow(clippy::too_many_arguments)]
pub fn optimize_damping_with(
    st: &Stencil15,
    st_h: &Stencil15,
    kind: SmootherKind,
    nu1: u32,
    nu2: u32,
    method: OptimizeMethod,
    resolution: usize,
    omega_step: f64,
    omega_max: f64,
) -> Result<(Vec<f64>, FactorReport)> {
    if nu1 + nu2 == 0 {
        return Err(Error::Config("at least one smoothing sweep is required".into()));
    }
    if !(omega_step > 0.0 && omega_max > omega_step && omega_max <= 2.0) {
        return Err(Error::Config(format!(
            "invalid damping scan: step {omega_step}, max {omega_max}"
        )));
    }
    let dims = if kind == SmootherKind::FourColor { 4 } else { 1 };
    let scan = |w: &[f64]| objective(st, st_h, kind, nu1, nu2, SCAN_RESOLUTION, w);
    let nsteps = (omega_max / omega_step).round() as usize;
    let steps: Vec<f64> = (1..=nsteps).map(|i| i as f64 * omega_step).collect();

    // coordinate-descent grid scan at the coarse resolution
    let mut best_w = vec![1.0; dims];
    let mut best_f = scan(&best_w);
    let passes = if dims == 1 { 1 } else { 3 };
    let mut candidates: Vec<Vec<f64>> = vec![best_w.clone()];
    for _ in 0..passes {
        for d in 0..dims {
            let trial_best = steps
                .par_iter()
                .map(|&w| {
                    let mut t = best_w.clone();
                    t[d] = w;
                    let f = scan(&t);
                    (t, f)
                })
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            if trial_best.1 < best_f {
                best_f = trial_best.1;
                best_w = trial_best.0;
                candidates.push(best_w.clone());
            }
        }
    }

    let chosen = match method {
        OptimizeMethod::Grid => {
            // re-score the last few distinct candidates at full resolution
            candidates.reverse();
            candidates.truncate(5);
            candidates
                .into_iter()
                .map(|w| {
                    let f = objective(st, st_h, kind, nu1, nu2, resolution, &w);
                    (w, f)
                })
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap()
                .0
        }
        OptimizeMethod::Simplex => {
            let opts = SimplexOptions { max_iter: 200, diameter_tol: 1e-3, f_tol: 0.0 };
            let (w, _) = nelder_mead(
                |w| {
                    if w.iter().any(|&x| !(x > 0.0 && x <= omega_max)) {
                        return PENALTY;
                    }
                    scan(w)
                },
                &best_w,
                opts,
            );
            w
        }
    };

    let cfg = SmootherConfig::new(kind, chosen.clone())?;
    let grid = SampleGrid::new(Region::LambdaCoarse, resolution)?;
    let report = two_grid_factor(st, st_h, &cfg, nu1, nu2, &grid)?;
    Ok((chosen, report))
}
