//! Tetrahedron shapes and the oblique lattice basis they generate.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

pub type Vec3 = [f64; 3];

fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn det3(c0: Vec3, c1: Vec3, c2: Vec3) -> f64 {
    dot(c0, cross(c1, c2))
}

/// A tetrahedron given by its four vertices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TetGeometry {
    pub vertices: [Vec3; 4],
    #[serde(default)]
    pub label: String,
}

impl TetGeometry {
    /// Relative degeneracy tolerance for the signed volume.
    pub const DEGENERACY_TOL: f64 = 1e-12;

    pub fn new(vertices: [Vec3; 4], label: impl Into<String>) -> Result<Self> {
        let g = TetGeometry { vertices, label: label.into() };
        let max_edge = g
            .edge_lengths()
            .into_iter()
            .fold(0.0, f64::max);
        let vol6 = det3(
            sub(vertices[1], vertices[0]),
            sub(vertices[2], vertices[0]),
            sub(vertices[3], vertices[0]),
        );
        if max_edge <= 0.0 || vol6.abs() < Self::DEGENERACY_TOL * max_edge.powi(3) {
            return Err(Error::Geometry(format!(
                "degenerate tetrahedron '{}': signed volume {:.3e} below tolerance",
                g.label,
                vol6 / 6.0
            )));
        }
        Ok(g)
    }

    /// The six edge lengths (01, 02, 03, 12, 13, 23).
    pub fn edge_lengths(&self) -> [f64; 6] {
        let v = &self.vertices;
        [
            norm(sub(v[1], v[0])),
            norm(sub(v[2], v[0])),
            norm(sub(v[3], v[0])),
            norm(sub(v[2], v[1])),
            norm(sub(v[3], v[1])),
            norm(sub(v[3], v[2])),
        ]
    }

    pub fn edge_ratio(&self) -> f64 {
        let e = self.edge_lengths();
        let max = e.iter().fold(f64::MIN, |a, &b| a.max(b));
        let min = e.iter().fold(f64::MAX, |a, &b| a.min(b));
        max / min
    }

    /// Minimum and maximum face angle in degrees (12 vertex/edge-pair angles).
    pub fn angle_range(&self) -> (f64, f64) {
        let v = &self.vertices;
        let mut min = f64::MAX;
        let mut max = f64::MIN;
        for k in 0..4 {
            let others: Vec<usize> = (0..4).filter(|&x| x != k).collect();
            for a in 0..3 {
                for b in a + 1..3 {
                    let p = sub(v[others[a]], v[k]);
                    let q = sub(v[others[b]], v[k]);
                    let c = (dot(p, q) / (norm(p) * norm(q))).clamp(-1.0, 1.0);
                    let ang = c.acos().to_degrees();
                    min = min.min(ang);
                    max = max.max(ang);
                }
            }
        }
        (min, max)
    }

    pub fn scaled(&self, c: f64) -> TetGeometry {
        let mut vertices = self.vertices;
        for v in vertices.iter_mut() {
            for x in v.iter_mut() {
                *x *= c;
            }
        }
        TetGeometry { vertices, label: self.label.clone() }
    }
}

/// Unit edge directions, spacings, and the reciprocal basis of the lattice.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LatticeBasis {
    pub e: [Vec3; 3],
    pub h: [f64; 3],
    pub ep: [Vec3; 3],
}

impl LatticeBasis {
    /// Lattice step vectors h_i * e_i.
    pub fn steps(&self) -> [Vec3; 3] {
        let mut a = self.e;
        for i in 0..3 {
            for x in a[i].iter_mut() {
                *x *= self.h[i];
            }
        }
        a
    }
}

/// Derive the lattice basis from a tetrahedron.
///
/// The three generators follow the edge chain v0->v1->v2->v3; this is the
/// triangulation convention whose Kuhn cell reproduces the 14-offset stencil
/// support (the fan v0->v_i does not: its cross couplings vanish).
pub fn basis_from_tet(geom: &TetGeometry) -> Result<LatticeBasis> {
    let v = &geom.vertices;
    let steps = [sub(v[1], v[0]), sub(v[2], v[1]), sub(v[3], v[2])];
    let mut e = [[0.0; 3]; 3];
    let mut h = [0.0; 3];
    for i in 0..3 {
        h[i] = norm(steps[i]);
        if h[i] <= 0.0 {
            return Err(Error::Geometry("zero-length lattice generator".into()));
        }
        for k in 0..3 {
            e[i][k] = steps[i][k] / h[i];
        }
    }
    let det = det3(e[0], e[1], e[2]);
    let max_h = h.iter().fold(0.0f64, |a, &b| a.max(b));
    if det.abs() < TetGeometry::DEGENERACY_TOL * (max_h / max_h).powi(3) {
        return Err(Error::Geometry("degenerate lattice basis".into()));
    }
    // reciprocal basis: rows of the inverse of [e1 e2 e3] (as columns)
    let c = [
        cross(e[1], e[2]),
        cross(e[2], e[0]),
        cross(e[0], e[1]),
    ];
    let mut ep = [[0.0; 3]; 3];
    for i in 0..3 {
        for k in 0..3 {
            ep[i][k] = c[i][k] / det;
        }
    }
    Ok(LatticeBasis { e, h, ep })
}

/// JSON geometry config: either explicit vertices or a basis.
#[derive(Deserialize)]
struct GeometryConfig {
    #[serde(default)]
    label: String,
    vertices: Option<[Vec3; 4]>,
    basis: Option<BasisConfig>,
}

#[derive(Deserialize)]
struct BasisConfig {
    e1: Vec3,
    e2: Vec3,
    e3: Vec3,
    h: [f64; 3],
}

/// Parse a geometry config file (JSON with `vertices` or `basis`).
pub fn geometry_from_json(text: &str) -> Result<TetGeometry> {
    let cfg: GeometryConfig =
        serde_json::from_str(text).map_err(|e| Error::Config(format!("geometry config: {e}")))?;
    if let Some(v) = cfg.vertices {
        return TetGeometry::new(v, cfg.label);
    }
    if let Some(b) = cfg.basis {
        // reconstruct the vertex chain from the generators
        let a = [
            [b.e1[0] * b.h[0], b.e1[1] * b.h[0], b.e1[2] * b.h[0]],
            [b.e2[0] * b.h[1], b.e2[1] * b.h[1], b.e2[2] * b.h[1]],
            [b.e3[0] * b.h[2], b.e3[1] * b.h[2], b.e3[2] * b.h[2]],
        ];
        let v0 = [0.0; 3];
        let v1 = a[0];
        let v2 = [v1[0] + a[1][0], v1[1] + a[1][1], v1[2] + a[1][2]];
        let v3 = [v2[0] + a[2][0], v2[1] + a[2][1], v2[2] + a[2][2]];
        return TetGeometry::new([v0, v1, v2, v3], cfg.label);
    }
    Err(Error::Config("geometry config needs 'vertices' or 'basis'".into()))
}

pub const CATALOG_NAMES: [&str; 8] = [
    "regular", "optimized", "needle", "wedge", "spindle", "spade", "sliver", "cap",
];

/// Named shape catalog. Coordinates live in `catalog/*.json` and are
/// test-checked against the published edge-ratio/angle summaries. Vertex
/// ordering is part of the data: the four-color smoother is not invariant
/// under vertex permutations (they permute the colors).
pub fn shape_catalog(name: &str) -> Result<TetGeometry> {
    let text = match name {
        "regular" => include_str!("../catalog/regular.json"),
        "optimized" => include_str!("../catalog/optimized.json"),
        "needle" => include_str!("../catalog/needle.json"),
        "wedge" => include_str!("../catalog/wedge.json"),
        "spindle" => include_str!("../catalog/spindle.json"),
        "spade" => include_str!("../catalog/spade.json"),
        "sliver" => include_str!("../catalog/sliver.json"),
        "cap" => include_str!("../catalog/cap.json"),
        _ => {
            return Err(Error::Config(format!(
                "unknown catalog shape '{name}' (expected one of {})",
                CATALOG_NAMES.join(", ")
            )))
        }
    };
    geometry_from_json(text)
}
