//! Fourier symbols of the operator, the smoothers and the coarse-grid
//! correction on the invariant harmonic subspaces.
//!
//! Frequencies live in (-pi, pi]^3. Pointwise smoothers act on single
//! frequencies; the four-color sweep couples the quadruple xi + sigma*pi/2*(1,1,1),
//! zebra smoothers couple pairs inside the standard 8-dimensional two-grid
//! harmonic space, and the four-color two-grid operator needs the
//! 16-dimensional union of four such quadruples.

use crate::cmat::CMat;
use crate::stencil::Stencil15;
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Wrap a frequency component into (-pi, pi].
pub fn wrap(x: f64) -> f64 {
    -((-x + PI).rem_euclid(2.0 * PI)) + PI
}

pub fn wrap3(xi: [f64; 3]) -> [f64; 3] {
    xi.map(wrap)
}

/// Membership in the low-frequency box Theta_H = (-pi/2, pi/2]^3, with a small
/// tolerance so lattice points landing exactly on the boundary classify
/// consistently with the half-open convention.
pub fn in_theta_h(xi: [f64; 3]) -> bool {
    const EPS: f64 = 1e-9;
    xi.iter().all(|&x| x > -PI / 2.0 + EPS && x <= PI / 2.0 + EPS)
}

fn phase(xi: [f64; 3], o: [i32; 3]) -> Complex64 {
    Complex64::from_polar(
        1.0,
        xi[0] * o[0] as f64 + xi[1] * o[1] as f64 + xi[2] * o[2] as f64,
    )
}

impl Stencil15 {
    /// Full operator symbol L(xi).
    pub fn symbol(&self, xi: [f64; 3]) -> Complex64 {
        let mut s = Complex64::new(self.center, 0.0);
        for (o, c) in &self.offsets {
            s += c * phase(xi, *o);
        }
        s
    }

    /// Lower-triangular part (center included) for lexicographic Gauss-Seidel:
    /// offsets already visited when sweeping in k3, then k2, then k1 order.
    pub fn symbol_plus(&self, xi: [f64; 3]) -> Complex64 {
        let mut s = Complex64::new(self.center, 0.0);
        for (o, c) in &self.offsets {
            let [k1, k2, k3] = *o;
            if k3 < 0 || (k3 == 0 && k2 < 0) || (k3 == 0 && k2 == 0 && k1 < 0) {
                s += c * phase(xi, *o);
            }
        }
        s
    }

    /// Symbol restricted to the line in lattice direction `d`.
    pub fn symbol_on_line(&self, xi: [f64; 3], d: usize) -> Complex64 {
        let mut s = Complex64::new(self.center, 0.0);
        for (o, c) in &self.offsets {
            if (0..3).all(|i| i == d || o[i] == 0) {
                s += c * phase(xi, *o);
            }
        }
        s
    }

    /// Symbol restricted to the plane with lattice normal `n`.
    pub fn symbol_on_plane(&self, xi: [f64; 3], n: usize) -> Complex64 {
        let mut s = Complex64::new(self.center, 0.0);
        for (o, c) in &self.offsets {
            if o[n] == 0 {
                s += c * phase(xi, *o);
            }
        }
        s
    }

    /// In-plane part plus the already-updated planes of a lexicographic plane
    /// sweep along normal `n`.
    pub fn symbol_plus_plane(&self, xi: [f64; 3], n: usize) -> Complex64 {
        let mut s = Complex64::new(self.center, 0.0);
        for (o, c) in &self.offsets {
            if o[n] <= 0 {
                s += c * phase(xi, *o);
            }
        }
        s
    }
}

/// Prolongation stencil: weight 1 at the coincident coarse node, 1/2 at the
/// 14 neighbors. Its symbol satisfies P(0) = 8.
pub fn prolongation_symbol(xi: [f64; 3]) -> Complex64 {
    let mut s = ONE;
    for d in crate::stencil::DIRECTIONS {
        s += 0.5 * (phase(xi, d) + phase(xi, [-d[0], -d[1], -d[2]]));
    }
    s
}

// ---------------------------------------------------------------------------
// Smoother configuration
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmootherKind {
    Jacobi,
    /// Lexicographic pointwise Gauss-Seidel (k3, then k2, then k1 ordering).
    GsLex,
    /// Four-color Gauss-Seidel, color = (k1 + k2 + k3) mod 4.
    FourColor,
    /// Zebra line relaxation along lattice direction 0, 1 or 2.
    ZebraLine(usize),
    /// Zebra plane relaxation with lattice normal 0, 1 or 2.
    ZebraPlane(usize),
    /// Lexicographic plane sweep with lattice normal 0, 1 or 2.
    LexPlane(usize),
}

impl SmootherKind {
    pub fn axis(&self) -> Option<usize> {
        match self {
            SmootherKind::ZebraLine(d) | SmootherKind::ZebraPlane(d) | SmootherKind::LexPlane(d) => {
                Some(*d)
            }
            _ => None,
        }
    }
}

/// A smoother together with its damping. Four-color relaxation carries one
/// damping factor per color; all other smoothers use a single factor.
#[derive(Debug, Clone, PartialEq)]
pub struct SmootherConfig {
    pub kind: SmootherKind,
    pub omega: Vec<f64>,
}

impl SmootherConfig {
    pub fn new(kind: SmootherKind, omega: Vec<f64>) -> Result<Self> {
        let want = if kind == SmootherKind::FourColor { 4 } else { 1 };
        let omega = if kind == SmootherKind::FourColor && omega.len() == 1 {
            vec![omega[0]; 4]
        } else {
            omega
        };
        if omega.len() != want {
            return Err(Error::Config(format!(
                "{kind:?} expects {want} damping factor(s), got {}",
                omega.len()
            )));
        }
        // SOR-type smoothers divide by omega, so zero is only meaningful for
        // the Jacobi-type updates
        let sor = matches!(kind, SmootherKind::GsLex | SmootherKind::LexPlane(_));
        for &w in &omega {
            if !(0.0..=2.0).contains(&w) || (sor && w == 0.0) {
                return Err(Error::Config(format!("damping factor {w} outside the valid range")));
            }
        }
        if let Some(d) = kind.axis() {
            if d > 2 {
                return Err(Error::Config(format!("lattice axis {d} out of range 0..3")));
            }
        }
        Ok(SmootherConfig { kind, omega })
    }

    pub fn undamped(kind: SmootherKind) -> Self {
        let omega = if kind == SmootherKind::FourColor { vec![1.0; 4] } else { vec![1.0] };
        SmootherConfig { kind, omega }
    }
}

/// Scalar (single-frequency) smoothing symbol for the pointwise and
/// lexicographic-plane smoothers. Damping enters through the SOR splitting
/// M = D/omega + (triangular part), which reduces to the undamped update at
/// omega = 1; here D is the center for Gauss-Seidel and the in-plane operator
/// for plane sweeps.
pub fn scalar_symbol(st: &Stencil15, xi: [f64; 3], cfg: &SmootherConfig) -> Result<Complex64> {
    let l = st.symbol(xi);
    let w = cfg.omega[0];
    match cfg.kind {
        SmootherKind::Jacobi => Ok(ONE - w * l / st.center),
        SmootherKind::GsLex => {
            let m = Complex64::new(st.center / w - st.center, 0.0) + st.symbol_plus(xi);
            Ok(ONE - l / m)
        }
        SmootherKind::LexPlane(n) => {
            let on = st.symbol_on_plane(xi, n);
            let m = on / w - on + st.symbol_plus_plane(xi, n);
            Ok(ONE - l / m)
        }
        _ => Err(Error::Config(format!(
            "{:?} has no scalar symbol; it couples harmonics",
            cfg.kind
        ))),
    }
}

// ---------------------------------------------------------------------------
// Harmonic frequency sets
// ---------------------------------------------------------------------------

/// The four-color quadruple xi + sigma*(pi/2)*(1,1,1), sigma = 0..3, wrapped.
pub fn quad(xi0: [f64; 3]) -> [[f64; 3]; 4] {
    std::array::from_fn(|s| wrap3(xi0.map(|x| x + s as f64 * PI / 2.0)))
}

fn shift_sign(x: f64) -> f64 {
    // shifting by -sign(x)*pi keeps the result in (-pi, pi]; components at
    // exactly 0 shift by +pi to stay inside the half-open box
    if x > 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// The eight standard coarsening harmonics xi - alpha*sign(xi)*pi,
/// alpha in {0,1}^3, indexed as alpha1*4 + alpha2*2 + alpha3.
pub fn harmonic8(xi000: [f64; 3]) -> [[f64; 3]; 8] {
    let sgn = xi000.map(shift_sign);
    std::array::from_fn(|idx| {
        let a = [(idx >> 2) & 1, (idx >> 1) & 1, idx & 1];
        std::array::from_fn(|k| xi000[k] - a[k] as f64 * sgn[k] * PI)
    })
}

/// Base frequencies of the four quadruples making up the 16-dimensional
/// four-color two-grid space: alpha in {000, 110, 100, 010}.
pub fn bases16(xi: [f64; 3]) -> [[f64; 3]; 4] {
    let sgn = xi.map(shift_sign);
    const ALPHAS: [[f64; 3]; 4] = [
        [0.0, 0.0, 0.0],
        [1.0, 1.0, 0.0],
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
    ];
    ALPHAS.map(|a| wrap3(std::array::from_fn(|k| xi[k] - a[k] * sgn[k] * PI)))
}

// ---------------------------------------------------------------------------
// Pattern relaxation symbols
// ---------------------------------------------------------------------------

/// Symbol of one partial step of a pattern relaxation with m colors,
/// updating color j: S[s', s] = delta + (lambda_s - 1)(1/m) e^{2 pi i j (s - s')/m}.
pub fn pattern_partial_symbol(lam: &[Complex64], j: usize, m: usize) -> CMat {
    let mut s = CMat::zeros(m);
    for sp in 0..m {
        for sc in 0..m {
            let delta = if sp == sc { ONE } else { ZERO };
            let ph = Complex64::from_polar(
                1.0,
                2.0 * PI * j as f64 * (sc as f64 - sp as f64) / m as f64,
            );
            s[(sp, sc)] = delta + (lam[sc] - ONE) * ph / m as f64;
        }
    }
    s
}

/// Full four-color sweep symbol on the quadruple of `xi0`, colors updated in
/// order 0,1,2,3; returns the 4x4 matrix and the quadruple frequencies.
pub fn four_color_symbol(
    st: &Stencil15,
    xi0: [f64; 3],
    omega: &[f64; 4],
) -> (CMat, [[f64; 3]; 4]) {
    let q = quad(xi0);
    let lam0: Vec<Complex64> = q
        .iter()
        .map(|&xi| st.symbol(xi))
        .collect();
    let mut s: Option<CMat> = None;
    for (j, &w) in omega.iter().enumerate() {
        let lam: Vec<Complex64> = lam0.iter().map(|&l| ONE - w * l / st.center).collect();
        let sj = pattern_partial_symbol(&lam, j, 4);
        s = Some(match s {
            None => sj,
            Some(prev) => sj.mul(&prev),
        });
    }
    (s.unwrap(), q)
}

/// 8x8 smoothing symbol on the standard harmonics of `xi000`.
///
/// Pointwise and lexicographic-plane smoothers are diagonal. Zebra smoothers
/// couple pairs of harmonics whose coloring index differs: direction-d lines
/// are colored by component (d+1) mod 3, normal-n planes by component n.
pub fn smoother_symbol_8(st: &Stencil15, xi000: [f64; 3], cfg: &SmootherConfig) -> Result<CMat> {
    let oct = harmonic8(xi000);
    match cfg.kind {
        SmootherKind::Jacobi | SmootherKind::GsLex | SmootherKind::LexPlane(_) => {
            let mut s = CMat::zeros(8);
            for (i, &xi) in oct.iter().enumerate() {
                s[(i, i)] = scalar_symbol(st, xi, cfg)?;
            }
            Ok(s)
        }
        SmootherKind::ZebraLine(d) | SmootherKind::ZebraPlane(d) => {
            let c = if matches!(cfg.kind, SmootherKind::ZebraLine(_)) { (d + 1) % 3 } else { d };
            let w = cfg.omega[0];
            let lam: Vec<Complex64> = oct
                .iter()
                .map(|&xi| {
                    let on = match cfg.kind {
                        SmootherKind::ZebraLine(_) => st.symbol_on_line(xi, d),
                        _ => st.symbol_on_plane(xi, d),
                    };
                    ONE - w * st.symbol(xi) / on
                })
                .collect();
            let mut s = CMat::zeros(8);
            let bit = [4usize, 2, 1][c];
            for a in 0..8usize {
                let b = a ^ bit;
                if b < a {
                    continue;
                }
                let pair = [lam[a], lam[b]];
                // even sub-pattern first, then odd
                let m = pattern_partial_symbol(&pair, 1, 2)
                    .mul(&pattern_partial_symbol(&pair, 0, 2));
                s[(a, a)] = m[(0, 0)];
                s[(a, b)] = m[(0, 1)];
                s[(b, a)] = m[(1, 0)];
                s[(b, b)] = m[(1, 1)];
            }
            Ok(s)
        }
        SmootherKind::FourColor => Err(Error::Config(
            "four-color relaxation lives on the 16-dimensional space, not the 8-dimensional one"
                .into(),
        )),
    }
}

// ---------------------------------------------------------------------------
// Coarse-grid correction symbols
// ---------------------------------------------------------------------------

/// Outcome of building a harmonic-space two-grid symbol: the matrix plus the
/// operator magnitudes needed for the near-singular exclusion test.
pub struct HarmonicSymbol {
    pub matrix: CMat,
    /// Smallest |L_h| over the fine harmonics involved.
    pub min_fine: f64,
    /// Smallest |L_H| over the coarse symbols involved.
    pub min_coarse: f64,
}

/// 8x8 coarse-grid correction symbol K = I - P (1/L_H) R diag(L_f) on the
/// standard harmonics, with R = (1/8) P^H.
pub fn cgc_symbol_8(st: &Stencil15, st_h: &Stencil15, xi000: [f64; 3]) -> HarmonicSymbol {
    let oct = harmonic8(xi000);
    let lf: Vec<Complex64> = oct.iter().map(|&xi| st.symbol(xi)).collect();
    let lh = st_h.symbol(wrap3(xi000.map(|x| 2.0 * x)));
    let p: Vec<Complex64> = oct.iter().map(|&xi| prolongation_symbol(xi)).collect();
    let mut k = CMat::identity(8);
    for i in 0..8 {
        for j in 0..8 {
            k[(i, j)] -= p[i] * p[j].conj() * lf[j] / (8.0 * lh);
        }
    }
    HarmonicSymbol {
        matrix: k,
        min_fine: lf.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min),
        min_coarse: lh.norm(),
    }
}

/// 8-dimensional two-grid symbol S^nu2 K S^nu1 for smoothers that keep the
/// standard harmonic space invariant.
pub fn two_grid_symbol_8(
    st: &Stencil15,
    st_h: &Stencil15,
    xi000: [f64; 3],
    cfg: &SmootherConfig,
    nu1: u32,
    nu2: u32,
) -> Result<HarmonicSymbol> {
    let cgc = cgc_symbol_8(st, st_h, xi000);
    let s = smoother_symbol_8(st, xi000, cfg)?;
    let m = s.pow(nu2).mul(&cgc.matrix).mul(&s.pow(nu1));
    Ok(HarmonicSymbol { matrix: m, ..cgc })
}

/// 16-dimensional two-grid symbol for four-color smoothing.
///
/// The space is the union of the quadruples of the four base frequencies of
/// `xi`, ordered (base b, sigma) -> 4b + sigma. Coarsening folds even-sigma
/// members onto coarse frequency 2*xi and odd-sigma members onto
/// 2*(xi + pi/2 (1,1,1)), so the prolongation symbol is a 16x2 matrix and the
/// restriction its scaled adjoint.
pub fn two_grid_symbol_16(
    st: &Stencil15,
    st_h: &Stencil15,
    xi: [f64; 3],
    omega: &[f64; 4],
    nu1: u32,
    nu2: u32,
) -> HarmonicSymbol {
    let bases = bases16(xi);
    let mut s16 = CMat::zeros(16);
    let mut lf = [ZERO; 16];
    let mut p16 = vec![ZERO; 16]; // column index is sigma % 2
    for (b, &base) in bases.iter().enumerate() {
        let (sb, q) = four_color_symbol(st, base, omega);
        s16.set_block(4 * b, 4 * b, &sb);
        for (s, &xiq) in q.iter().enumerate() {
            lf[4 * b + s] = st.symbol(xiq);
            p16[4 * b + s] = prolongation_symbol(xiq);
        }
    }
    let q000 = quad(xi);
    let lh0 = st_h.symbol(wrap3(xi.map(|x| 2.0 * x)));
    let lh1 = st_h.symbol(wrap3(q000[1].map(|x| 2.0 * x)));
    let lh = [lh0, lh1];
    let mut k = CMat::identity(16);
    for row in 0..16 {
        let col = (row % 4) % 2;
        for j in 0..16 {
            if (j % 4) % 2 != col {
                continue;
            }
            k[(row, j)] -= p16[row] * p16[j].conj() / 8.0 / lh[col] * lf[j];
        }
    }
    let m = s16.pow(nu2).mul(&k).mul(&s16.pow(nu1));
    HarmonicSymbol {
        matrix: m,
        min_fine: lf.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min),
        min_coarse: lh0.norm().min(lh1.norm()),
    }
}

/// Projected nu-sweep four-color smoothing symbol Q S^nu on a quadruple,
/// where Q zeroes the members lying in Theta_H.
pub fn four_color_smoothing_matrix(
    st: &Stencil15,
    xi0: [f64; 3],
    omega: &[f64; 4],
    nu: u32,
) -> CMat {
    let (s, q) = four_color_symbol(st, xi0, omega);
    let mut m = s.pow(nu);
    for row in 0..4 {
        if in_theta_h(q[row]) {
            for j in 0..4 {
                m[(row, j)] = ZERO;
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{basis_from_tet, shape_catalog};
    use crate::stencil::assemble_stencil;

    fn regular() -> Stencil15 {
        assemble_stencil(&basis_from_tet(&shape_catalog("regular").unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn wrap_is_half_open() {
        assert!((wrap(PI) - PI).abs() < 1e-15);
        assert!((wrap(-PI) - PI).abs() < 1e-15);
        assert!((wrap(3.0 * PI) - PI).abs() < 1e-12);
        assert!(wrap(1.0).abs() - 1.0 < 1e-15);
        assert!((wrap(2.0 * PI + 0.25) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn theta_h_boundary_convention() {
        assert!(in_theta_h([PI / 2.0, 0.0, 0.0]));
        assert!(!in_theta_h([-PI / 2.0, 0.0, 0.0]));
        assert!(!in_theta_h([PI / 2.0 + 1e-6, 0.0, 0.0]));
        assert!(in_theta_h([0.0, 0.0, 0.0]));
    }

    #[test]
    fn symbol_at_zero_is_row_sum() {
        let st = regular();
        assert!(st.symbol([0.0; 3]).norm() < 1e-12 * st.scale());
        assert!((prolongation_symbol([0.0; 3]).re - 8.0).abs() < 1e-14);
    }

    #[test]
    fn symbol_is_real_for_symmetric_stencil() {
        let st = regular();
        for xi in [[0.3, -1.1, 2.2], [1.0, 1.0, 1.0], [-2.9, 0.4, -0.7]] {
            assert!(st.symbol(xi).im.abs() < 1e-12 * st.scale());
        }
    }

    #[test]
    fn plus_and_minus_parts_sum_to_full() {
        // L = L+ + conj-mirrored remainder; check L+ + (L - L+) trivially and
        // that L+ contains exactly half the off-center mass
        let st = regular();
        let xi = [0.7, -1.3, 0.4];
        let l = st.symbol(xi);
        let lp = st.symbol_plus(xi);
        let lm = l - lp;
        // point symmetry: the strictly-upper part is the conjugate of the
        // strictly-lower part
        assert!((lm - (lp - st.center).conj()).norm() < 1e-12 * st.scale());
    }

    #[test]
    fn quad_members_differ_by_half_pi_shift() {
        let q = quad([0.3, -0.2, 1.0]);
        for s in 0..4 {
            for k in 0..3 {
                let want = wrap(q[0][k] + s as f64 * PI / 2.0);
                assert!((q[s][k] - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn harmonic8_covers_distinct_octants() {
        let h = harmonic8([0.3, -0.2, 1.0]);
        for (i, a) in h.iter().enumerate() {
            assert!(a.iter().all(|&x| x > -PI && x <= PI), "{i}: {a:?}");
            for b in h.iter().skip(i + 1) {
                let d: f64 = (0..3).map(|k| (a[k] - b[k]).abs()).sum();
                assert!(d > 1.0);
            }
        }
    }

    #[test]
    fn jacobi_symbol_matches_hand_formula() {
        let st = regular();
        let xi = [1.1, 0.2, -0.8];
        let cfg = SmootherConfig::new(SmootherKind::Jacobi, vec![0.8]).unwrap();
        let got = scalar_symbol(&st, xi, &cfg).unwrap();
        let want = ONE - 0.8 * st.symbol(xi) / st.center;
        assert!((got - want).norm() < 1e-14);
    }

    #[test]
    fn sor_splitting_reduces_to_plain_gs_at_omega_one() {
        let st = regular();
        let xi = [0.9, -0.4, 2.0];
        let gs1 = scalar_symbol(&st, xi, &SmootherConfig::undamped(SmootherKind::GsLex)).unwrap();
        let want = ONE - st.symbol(xi) / st.symbol_plus(xi);
        assert!((gs1 - want).norm() < 1e-13);
        let lp = scalar_symbol(&st, xi, &SmootherConfig::undamped(SmootherKind::LexPlane(2)))
            .unwrap();
        let want_lp = ONE - st.symbol(xi) / st.symbol_plus_plane(xi, 2);
        assert!((lp - want_lp).norm() < 1e-13);
    }

    #[test]
    fn pattern_partial_rows_fix_untouched_colors() {
        // with lambda = 1 everywhere the partial step is the identity
        let lam = [ONE; 4];
        for j in 0..4 {
            let s = pattern_partial_symbol(&lam, j, 4);
            assert!(s.max_abs_diff(&CMat::identity(4)) < 1e-15);
        }
    }

    #[test]
    fn four_color_sweep_is_product_of_partial_steps() {
        let st = regular();
        let (s, q) = four_color_symbol(&st, [0.5, -1.0, 0.3], &[1.0; 4]);
        assert_eq!(s.n, 4);
        let _ = q;
        // at xi0 = 0 the sigma = 0 member is the constant mode: lambda_0 = 1,
        // so its basis vector is untouched by every partial step
        let (s0, _) = four_color_symbol(&st, [0.0; 3], &[1.0; 4]);
        for row in 0..4 {
            let want = if row == 0 { ONE } else { ZERO };
            assert!((s0[(row, 0)] - want).norm() < 1e-12);
        }
    }

    #[test]
    fn config_validation() {
        assert!(SmootherConfig::new(SmootherKind::Jacobi, vec![0.8]).is_ok());
        assert!(SmootherConfig::new(SmootherKind::Jacobi, vec![0.8, 0.9]).is_err());
        assert!(SmootherConfig::new(SmootherKind::FourColor, vec![1.1]).is_ok());
        assert!(SmootherConfig::new(SmootherKind::FourColor, vec![1.0, 1.0, 1.0, 1.2]).is_ok());
        assert!(SmootherConfig::new(SmootherKind::Jacobi, vec![0.0]).is_ok());
        assert!(SmootherConfig::new(SmootherKind::Jacobi, vec![2.1]).is_err());
        assert!(SmootherConfig::new(SmootherKind::Jacobi, vec![-0.1]).is_err());
        assert!(SmootherConfig::new(SmootherKind::GsLex, vec![0.0]).is_err());
        assert!(SmootherConfig::new(SmootherKind::ZebraLine(3), vec![1.0]).is_err());
    }

    #[test]
    fn cgc_annihilates_smooth_error_limit() {
        // as xi -> 0 along a generic direction the low-frequency component is
        // corrected exactly in the Galerkin limit: K e_0 -> small
        let st = regular();
        let st_h = st.scaled(2.0);
        let t = 1e-4;
        let cgc = cgc_symbol_8(&st, &st_h, [0.731 * t, 0.412 * t, -0.529 * t]);
        // entry (0,0) measures how much of the lowest harmonic survives
        assert!(cgc.matrix[(0, 0)].norm() < 1e-6);
    }

    #[test]
    fn two_grid_16_blocks_are_consistent_with_4() {
        let st = regular();
        let st_h = st.scaled(2.0);
        let xi = [0.4, -0.3, -0.9];
        let sym = two_grid_symbol_16(&st, &st_h, xi, &[1.0; 4], 1, 0);
        assert_eq!(sym.matrix.n, 16);
        assert!(sym.min_fine > 0.0 && sym.min_coarse > 0.0);
    }
}
