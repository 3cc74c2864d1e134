//! 15-point P1 finite-element stencil on the tetrahedral lattice.

use crate::geometry::{LatticeBasis, Vec3};
use crate::{Error, Result};

/// The seven positive offset directions; the stencil support is these and
/// their negatives, plus the center.
pub const DIRECTIONS: [[i32; 3]; 7] = [
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
    [1, 1, 0],
    [0, 1, 1],
    [1, 0, 1],
    [1, 1, 1],
];

/// Constant-coefficient 15-point stencil, stored sparsely by offset.
#[derive(Debug, Clone)]
pub struct Stencil15 {
    pub center: f64,
    /// The 14 non-center entries, (offset, coefficient).
    pub offsets: Vec<([i32; 3], f64)>,
}

impl Stencil15 {
    /// Reference magnitude used for relative tolerances: sum of |coefficients|.
    pub fn scale(&self) -> f64 {
        self.center.abs() + self.offsets.iter().map(|(_, c)| c.abs()).sum::<f64>()
    }

    pub fn coefficient(&self, off: [i32; 3]) -> f64 {
        if off == [0, 0, 0] {
            return self.center;
        }
        self.offsets
            .iter()
            .find(|(o, _)| *o == off)
            .map(|(_, c)| *c)
            .unwrap_or(0.0)
    }

    /// Multiply all coefficients by `c` (used for per-level scaling).
    pub fn scaled(&self, c: f64) -> Stencil15 {
        Stencil15 {
            center: self.center * c,
            offsets: self.offsets.iter().map(|(o, v)| (*o, v * c)).collect(),
        }
    }

    /// Debug dump: CSV rows "k1,k2,k3,coefficient" (center included).
    pub fn dump_csv(&self) -> String {
        let mut out = String::from("k1,k2,k3,coefficient\n");
        out.push_str(&format!("0,0,0,{:.17e}\n", self.center));
        let mut rows = self.offsets.clone();
        rows.sort_by_key(|(o, _)| *o);
        for (o, c) in rows {
            out.push_str(&format!("{},{},{},{:.17e}\n", o[0], o[1], o[2], c));
        }
        out
    }
}

/// Element stiffness matrix of the linear tetrahedral element:
/// K_ij = |T| grad(phi_i) . grad(phi_j) with constant gradients.
pub fn p1_element_stiffness(v: [Vec3; 4]) -> Result<[[f64; 4]; 4]> {
    // columns of m are the edge vectors from v0
    let mut m = [[0.0; 3]; 3];
    for j in 0..3 {
        for i in 0..3 {
            m[i][j] = v[j + 1][i] - v[0][i];
        }
    }
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    let max_edge = (0..3)
        .map(|j| (0..3).map(|i| m[i][j] * m[i][j]).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    if det.abs() < 1e-300 || det.abs() < 1e-14 * max_edge.powi(3) {
        return Err(Error::Geometry("zero-volume element in stiffness assembly".into()));
    }
    let vol = det.abs() / 6.0;
    // rows of m^{-1} are the gradients of phi_1..phi_3
    let inv_det = 1.0 / det;
    let minv = [
        [
            (m[1][1] * m[2][2] - m[1][2] * m[2][1]) * inv_det,
            (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * inv_det,
            (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * inv_det,
        ],
        [
            (m[1][2] * m[2][0] - m[1][0] * m[2][2]) * inv_det,
            (m[0][0] * m[2][2] - m[0][2] * m[2][0]) * inv_det,
            (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * inv_det,
        ],
        [
            (m[1][0] * m[2][1] - m[1][1] * m[2][0]) * inv_det,
            (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * inv_det,
            (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * inv_det,
        ],
    ];
    let mut grads = [[0.0; 3]; 4];
    for i in 0..3 {
        grads[i + 1] = minv[i];
        for k in 0..3 {
            grads[0][k] -= minv[i][k];
        }
    }
    let mut k = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            k[i][j] = vol * (0..3).map(|d| grads[i][d] * grads[j][d]).sum::<f64>();
        }
    }
    Ok(k)
}

/// Assemble the lattice stencil row at node 0 from the Kuhn triangulation of
/// the cells incident to the origin.
///
/// Each parallelepiped cell spanned by the generators splits into six
/// tetrahedra along the main diagonal; a tetrahedron is a lattice path
/// base -> base+e_{p1} -> ... adding one unit step per axis in some
/// permutation order. Summing the stiffness couplings of node 0 over all
/// incident elements yields exactly the 14-offset support.
fn assemble_with_steps(steps: [Vec3; 3]) -> Result<Stencil15> {
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut coeffs = std::collections::BTreeMap::<[i32; 3], f64>::new();
    for b0 in [-1i32, 0] {
        for b1 in [-1i32, 0] {
            for b2 in [-1i32, 0] {
                for perm in perms {
                    let mut lat = [[b0, b1, b2]; 4];
                    for (step, &axis) in perm.iter().enumerate() {
                        lat[step + 1] = lat[step];
                        lat[step + 1][axis] += 1;
                    }
                    let Some(i0) = lat.iter().position(|&p| p == [0, 0, 0]) else {
                        continue;
                    };
                    let mut phys = [[0.0; 3]; 4];
                    for (p, l) in phys.iter_mut().zip(lat.iter()) {
                        for k in 0..3 {
                            p[k] = l[0] as f64 * steps[0][k]
                                + l[1] as f64 * steps[1][k]
                                + l[2] as f64 * steps[2][k];
                        }
                    }
                    let k = p1_element_stiffness(phys)?;
                    for j in 0..4 {
                        *coeffs.entry(lat[j]).or_insert(0.0) += k[i0][j];
                    }
                }
            }
        }
    }
    let center = coeffs.remove(&[0, 0, 0]).unwrap_or(0.0);
    let max_c = coeffs
        .values()
        .fold(center.abs(), |a, c| a.max(c.abs()));
    let offsets: Vec<([i32; 3], f64)> = coeffs
        .into_iter()
        .filter(|(_, c)| c.abs() > 1e-13 * max_c)
        .collect();
    let st = Stencil15 { center, offsets };
    validate(&st)?;
    Ok(st)
}

fn validate(st: &Stencil15) -> Result<()> {
    if st.center <= 0.0 {
        return Err(Error::Numerical("stencil center must be positive".into()));
    }
    let tol = 1e-12 * st.scale();
    let row_sum: f64 = st.center + st.offsets.iter().map(|(_, c)| c).sum::<f64>();
    if row_sum.abs() > tol {
        return Err(Error::Numerical(format!("stencil row sum {row_sum:.3e} not zero")));
    }
    let mut support: Vec<[i32; 3]> = st.offsets.iter().map(|(o, _)| *o).collect();
    support.sort();
    let mut expect: Vec<[i32; 3]> = DIRECTIONS
        .iter()
        .flat_map(|d| [[d[0], d[1], d[2]], [-d[0], -d[1], -d[2]]])
        .collect();
    expect.sort();
    if support != expect {
        return Err(Error::Numerical(format!(
            "stencil support {support:?} does not match the 14 expected offsets"
        )));
    }
    for (o, c) in &st.offsets {
        let mirror = st.coefficient([-o[0], -o[1], -o[2]]);
        if (c - mirror).abs() > tol {
            return Err(Error::Numerical(format!("stencil not point-symmetric at {o:?}")));
        }
    }
    Ok(())
}

/// Fine-grid stencil for the given basis.
pub fn assemble_stencil(basis: &LatticeBasis) -> Result<Stencil15> {
    assemble_with_steps(basis.steps())
}

/// Coarse-grid stencil by rediscretization with doubled spacings. For the 3D
/// P1 Laplacian this equals 2x the fine stencil; that identity is checked.
pub fn coarse_stencil(basis: &LatticeBasis) -> Result<Stencil15> {
    let mut steps = basis.steps();
    for s in steps.iter_mut() {
        for x in s.iter_mut() {
            *x *= 2.0;
        }
    }
    let coarse = assemble_with_steps(steps)?;
    let fine = assemble_with_steps(basis.steps())?;
    let tol = 1e-10 * coarse.scale();
    if (coarse.center - 2.0 * fine.center).abs() > tol {
        return Err(Error::Numerical("coarse stencil is not 2x the fine stencil".into()));
    }
    for (o, c) in &coarse.offsets {
        if (c - 2.0 * fine.coefficient(*o)).abs() > tol {
            return Err(Error::Numerical(format!(
                "coarse stencil entry {o:?} is not 2x the fine entry"
            )));
        }
    }
    Ok(coarse)
}
