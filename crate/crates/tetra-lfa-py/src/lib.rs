//! Python bindings: thin wrappers over the analysis pipeline.
//!
//! Build with `cargo build -p tetra-lfa-py --release`; the resulting cdylib
//! imports as the module `tetra_lfa_py` (see python/smoke_test.py for a
//! loader that works straight from the target directory).

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use tetra_lfa::analysis::{
    smoothing_factor_classic, smoothing_factor_four_color, two_grid_factor, FactorReport,
    Region, SampleGrid,
};
use tetra_lfa::geometry::{basis_from_tet, geometry_from_json, shape_catalog, TetGeometry};
use tetra_lfa::solver::{measure_vs_prediction, CycleConfig, CycleKind};
use tetra_lfa::stencil::{assemble_stencil, coarse_stencil, Stencil15};
use tetra_lfa::symbols::{SmootherConfig, SmootherKind};
use tetra_lfa::Error;

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Numerical(m) => PyRuntimeError::new_err(m),
        Error::Geometry(m) | Error::Config(m) => PyValueError::new_err(m),
    }
}

fn geometry(spec: &str) -> PyResult<TetGeometry> {
    let g = if let Some(name) = spec.strip_prefix("catalog:") {
        shape_catalog(name)
    } else if spec.trim_start().starts_with('{') {
        geometry_from_json(spec)
    } else {
        let text = std::fs::read_to_string(spec)
            .map_err(|e| PyValueError::new_err(format!("cannot read {spec}: {e}")))?;
        geometry_from_json(&text)
    };
    g.map_err(to_py_err)
}

fn smoother(kind: &str, omega: Option<Vec<f64>>) -> PyResult<SmootherConfig> {
    let (head, axis) = match kind.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (kind, None),
    };
    let axis = |default: usize| -> PyResult<usize> {
        match axis {
            None => Ok(default),
            Some("x") | Some("0") => Ok(0),
            Some("y") | Some("1") => Ok(1),
            Some("z") | Some("2") => Ok(2),
            Some(a) => Err(PyValueError::new_err(format!("unknown axis '{a}'"))),
        }
    };
    let k = match head {
        "jacobi" => SmootherKind::Jacobi,
        "gs-lex" | "gs" => SmootherKind::GsLex,
        "four-color" | "fc" => SmootherKind::FourColor,
        "zebra-line" => SmootherKind::ZebraLine(axis(0)?),
        "zebra-plane" => SmootherKind::ZebraPlane(axis(2)?),
        "lex-plane" => SmootherKind::LexPlane(axis(2)?),
        _ => return Err(PyValueError::new_err(format!("unknown smoother '{kind}'"))),
    };
    match omega {
        None => Ok(SmootherConfig::undamped(k)),
        Some(w) => SmootherConfig::new(k, w).map_err(to_py_err),
    }
}

fn pair(spec: &str) -> PyResult<(Stencil15, Stencil15)> {
    let basis = basis_from_tet(&geometry(spec)?).map_err(to_py_err)?;
    Ok((
        assemble_stencil(&basis).map_err(to_py_err)?,
        coarse_stencil(&basis).map_err(to_py_err)?,
    ))
}

fn report_dict<'py>(py: Python<'py>, rep: &FactorReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new_bound(py);
    d.set_item("factor", rep.factor)?;
    d.set_item("argmax", rep.argmax_frequency.to_vec())?;
    d.set_item("used", rep.samples_used)?;
    d.set_item("excluded", rep.samples_excluded)?;
    d.set_item("per_sweep", rep.per_sweep)?;
    Ok(d)
}

/// Names of the built-in tetrahedron shapes.
#[pyfunction]
fn catalog() -> Vec<String> {
    tetra_lfa::geometry::CATALOG_NAMES.iter().map(|s| s.to_string()).collect()
}

/// The 15-point stencil as a list of ((k1, k2, k3), coefficient).
#[pyfunction]
fn stencil(geometry_spec: &str) -> PyResult<Vec<((i32, i32, i32), f64)>> {
    let (st, _) = pair(geometry_spec)?;
    let mut out = vec![((0, 0, 0), st.center)];
    for (o, c) in &st.offsets {
        out.push(((o[0], o[1], o[2]), *c));
    }
    Ok(out)
}

/// Per-sweep smoothing factor.
#[pyfunction]
#[pyo3(signature = (geometry_spec, kind, omega=None, nu=1, resolution=32))]
fn smoothing_factor<'py>(
    py: Python<'py>,
    geometry_spec: &str,
    kind: &str,
    omega: Option<Vec<f64>>,
    nu: u32,
    resolution: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let (st, _) = pair(geometry_spec)?;
    let cfg = smoother(kind, omega)?;
    let grid = SampleGrid::new(Region::LambdaFine, resolution).map_err(to_py_err)?;
    let rep = match cfg.kind {
        SmootherKind::FourColor => {
            let w: [f64; 4] = std::array::from_fn(|i| cfg.omega[i]);
            smoothing_factor_four_color(&st, &w, nu, &grid).map_err(to_py_err)?
        }
        _ => smoothing_factor_classic(&st, &cfg, nu, &grid).map_err(to_py_err)?,
    };
    report_dict(py, &rep)
}

/// Two-grid convergence factor.
#[pyfunction]
#[pyo3(signature = (geometry_spec, kind, omega=None, nu1=1, nu2=1, resolution=32))]
fn two_grid<'py>(
    py: Python<'py>,
    geometry_spec: &str,
    kind: &str,
    omega: Option<Vec<f64>>,
    nu1: u32,
    nu2: u32,
    resolution: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let (st, st_h) = pair(geometry_spec)?;
    let cfg = smoother(kind, omega)?;
    let grid = SampleGrid::new(Region::LambdaCoarse, resolution).map_err(to_py_err)?;
    let rep = two_grid_factor(&st, &st_h, &cfg, nu1, nu2, &grid).map_err(to_py_err)?;
    report_dict(py, &rep)
}

/// Run W/V-cycles and compare the measured rate with the LFA prediction.
#[pyfunction]
#[pyo3(signature = (geometry_spec, kind, omega=None, nu1=1, nu2=1, levels=5,
                    cycles=30, seed=42, cycle="w", resolution=32))]
#[allow(clippy::too_many_arguments)]
fn solve<'py>(
    py: Python<'py>,
    geometry_spec: &str,
    kind: &str,
    omega: Option<Vec<f64>>,
    nu1: u32,
    nu2: u32,
    levels: u32,
    cycles: usize,
    seed: u64,
    cycle: &str,
    resolution: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let (st, st_h) = pair(geometry_spec)?;
    let cfg = CycleConfig {
        kind: match cycle {
            "v" | "V" => CycleKind::V,
            "w" | "W" => CycleKind::W,
            other => return Err(PyValueError::new_err(format!("unknown cycle '{other}'"))),
        },
        nu1,
        nu2,
        smoother: smoother(kind, omega)?,
        levels,
        cycles,
        seed,
    };
    let (cmp, _, run) =
        py.allow_threads(|| measure_vs_prediction(&st, &st_h, &cfg, resolution))
            .map_err(to_py_err)?;
    let d = PyDict::new_bound(py);
    d.set_item("predicted_rho", cmp.predicted_rho)?;
    d.set_item("measured_rho", cmp.measured_rho)?;
    d.set_item("gap", cmp.gap)?;
    d.set_item("rates", run.records.iter().map(|r| r.rate).collect::<Vec<_>>())?;
    Ok(d)
}

#[pymodule]
fn tetra_lfa_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    m.add_function(wrap_pyfunction!(stencil, m)?)?;
    m.add_function(wrap_pyfunction!(smoothing_factor, m)?)?;
    m.add_function(wrap_pyfunction!(two_grid, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    Ok(())
}
