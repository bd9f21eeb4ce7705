//! Python module `mosaic`. Structured results are returned as plain dicts.

use mosaic_core::decomposable::{self, DecompositionSpec, PlanarComponent, SegmentComponent};
use mosaic_core::tiling;
use mosaic_core::wm_min::{self, FacetMeasure};
use mosaic_core::zonotope::{self, BetaVector, GeneratorSet, WeightPair};
use mosaic_core::{cli, simplex_opt, Vec3};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyModule;
use serde::Serialize;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn weights(alpha6: f64, alpha4: f64) -> PyResult<WeightPair> {
    WeightPair::try_new(alpha6, alpha4).ok_or_else(|| err(format!("weights must be positive (got {alpha6}, {alpha4})")))
}

fn vec3(v: [f64; 3]) -> Vec3 {
    Vec3::new(v[0], v[1], v[2])
}

fn arr(v: &Vec3) -> [f64; 3] {
    [v.x, v.y, v.z]
}

/// Centrally symmetric zonotope, centered at the origin.
#[pyclass(name = "Zonotope", module = "mosaic", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyZonotope(zonotope::Zonotope);

#[pymethods]
impl PyZonotope {
    /// Sum of segments `[-g/2, g/2]` over the given vectors.
    #[new]
    fn new(generators: Vec<[f64; 3]>) -> PyResult<Self> {
        let dirs: Vec<Vec3> = generators.into_iter().map(vec3).collect();
        zonotope::Zonotope::from_vectors(&dirs).map(Self).map_err(err)
    }

    /// Parallelohedron from six coefficients `b12, b13, b14, b23, b24, b34` and
    /// an optional frame of four vectors summing to zero (regular by default).
    #[staticmethod]
    #[pyo3(signature = (beta, frame=None))]
    fn from_parameters(beta: [f64; 6], frame: Option<[[f64; 3]; 4]>) -> PyResult<Self> {
        let g = match frame {
            Some(f) => GeneratorSet::validate(f.map(vec3)).map_err(err)?,
            None => GeneratorSet::regular(),
        };
        let b = BetaVector::new(beta).map_err(err)?;
        zonotope::Zonotope::from_parameters(&g, &b).map(Self).map_err(err)
    }

    /// Unit-volume shape: cube, hexprism, rhombic, elongated, truncocta or file:<path>.
    #[staticmethod]
    fn shape(name: &str) -> PyResult<Self> {
        cli::shape_by_name(name).map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        zonotope::Zonotope::from_json(text).map(Self).map_err(err)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    fn vertices(&self) -> Vec<[f64; 3]> {
        self.0.vertices().iter().map(arr).collect()
    }

    fn generators(&self) -> Vec<[f64; 3]> {
        self.0.generators().iter().map(|s| arr(&s.direction)).collect()
    }

    fn counts(&self) -> (usize, usize, usize) {
        (self.0.vertices().len(), self.0.edges().len(), self.0.facets().len())
    }

    fn volume(&self) -> f64 {
        self.0.volume()
    }

    fn surface_area(&self) -> f64 {
        self.0.surface_area()
    }

    /// Type number 1..=5, or None when the body is not a parallelohedron.
    fn combinatorial_type(&self) -> Option<u8> {
        self.0.combinatorial_type().ok().and_then(|t| t.number())
    }

    fn weighted_edge_functional(&self, alpha6: f64, alpha4: f64) -> PyResult<f64> {
        self.0.weighted_edge_functional(&weights(alpha6, alpha4)?).map_err(err)
    }

    fn total_edge_length(&self) -> PyResult<f64> {
        self.0.total_edge_length().map_err(err)
    }

    fn scaled(&self, s: f64) -> Self {
        Self(self.0.scaled(s))
    }

    fn unit_volume(&self) -> Self {
        Self(self.0.unit_volume())
    }

    /// `(map, iterations, residual)` with `map` a determinant-one 3x3 matrix.
    #[pyo3(signature = (tol=1e-9))]
    fn isotropic_position(&self, tol: f64) -> PyResult<([[f64; 3]; 3], usize, f64)> {
        let fm = FacetMeasure::from_zonotope(&self.0).map_err(err)?;
        let iso = wm_min::isotropic_position(&fm, tol).map_err(err)?;
        let m = iso.map;
        let rows = [0, 1, 2].map(|i| [m[(i, 0)], m[(i, 1)], m[(i, 2)]]);
        Ok((rows, iso.iterations, iso.residual))
    }

    /// Skeleton density of the lattice tiling inside a ball of radius `radius`.
    fn skeleton_density<'py>(&self, py: Python<'py>, radius: f64) -> PyResult<Bound<'py, PyAny>> {
        let z = &self.0;
        let est = py
            .detach(|| {
                let lat = tiling::lattice_from_parallelohedron(z)?;
                tiling::skeleton_density(z, &lat, radius)
            })
            .map_err(err)?;
        to_py(py, &est)
    }

    fn __repr__(&self) -> String {
        let (v, e, f) = self.counts();
        format!("Zonotope(vertices={v}, edges={e}, facets={f}, volume={:.6})", self.0.volume())
    }
}

/// Volume polynomial of the six coefficients.
#[pyfunction]
fn volume_f(beta: [f64; 6]) -> f64 {
    zonotope::volume_f(&beta)
}

/// Minimum of w_m over unit-volume bodies of type `i`.
#[pyfunction]
fn type_minimum<'py>(py: Python<'py>, i: u8, alpha6: f64, alpha4: f64) -> PyResult<Bound<'py, PyAny>> {
    let t = wm_min::type_minimum(i, &weights(alpha6, alpha4)?).map_err(err)?;
    to_py(py, &t)
}

#[pyfunction]
fn all_type_minima<'py>(py: Python<'py>, alpha6: f64, alpha4: f64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &wm_min::all_type_minima(&weights(alpha6, alpha4)?))
}

#[pyfunction]
fn classify_optimal<'py>(py: Python<'py>, alpha6: f64, alpha4: f64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &wm_min::classify_optimal(&weights(alpha6, alpha4)?))
}

#[pyfunction]
fn lemma3_max<'py>(py: Python<'py>, lam: f64, c: f64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &simplex_opt::lemma3_max(lam, c).map_err(err)?)
}

/// Edge density bound for planar components `(area, e_hat)` and an optional segment length.
#[pyfunction]
#[pyo3(signature = (planars, segment=None))]
fn density_bound(planars: Vec<(f64, f64)>, segment: Option<f64>) -> PyResult<f64> {
    let planars = planars
        .into_iter()
        .map(|(a, e)| PlanarComponent::new(a, e))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    let segment = segment.map(SegmentComponent::new).transpose().map_err(err)?;
    let spec = DecompositionSpec::new(planars, segment).map_err(err)?;
    decomposable::density_bound(&spec).map_err(err)
}

#[pyfunction]
fn minimize_density<'py>(py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &decomposable::minimize_density(n).map_err(err)?)
}

/// Runs the command line with `args` (without program name); returns `(status, stdout, stderr)`.
#[pyfunction]
fn run_cli(py: Python<'_>, args: Vec<String>) -> (i32, String, String) {
    py.detach(|| {
        let mut out = Vec::new();
        let mut e = Vec::new();
        let argv = std::iter::once("mosaic".to_string()).chain(args);
        let code = cli::run(argv, &mut out, &mut e);
        (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&e).into_owned())
    })
}

#[pymodule]
pub fn mosaic(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyZonotope>()?;
    m.add_function(wrap_pyfunction!(volume_f, m)?)?;
    m.add_function(wrap_pyfunction!(type_minimum, m)?)?;
    m.add_function(wrap_pyfunction!(all_type_minima, m)?)?;
    m.add_function(wrap_pyfunction!(classify_optimal, m)?)?;
    m.add_function(wrap_pyfunction!(lemma3_max, m)?)?;
    m.add_function(wrap_pyfunction!(density_bound, m)?)?;
    m.add_function(wrap_pyfunction!(minimize_density, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
