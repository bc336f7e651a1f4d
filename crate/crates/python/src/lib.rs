//! Python bindings for `quadrep`.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use quadrep::constructive::{self, AlgorithmId, Domain, Outcome, RestrictionSpec, Target};
use quadrep::forms::{self, DiagonalQuaternary};
use quadrep::{genus, local, scan};

create_exception!(quadrep, QuadrepError, PyValueError);
create_exception!(quadrep, Unavailable, QuadrepError);

fn err(e: quadrep::Error) -> PyErr {
    QuadrepError::new_err(e.to_string())
}

fn json_to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| QuadrepError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn fraction<'py>(py: Python<'py>, r: num_rational::Ratio<i128>) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((*r.numer(), *r.denom()))
}

/// Positive definite `ax^2+by^2+cz^2+ryz+szx+txy`.
#[pyclass(name = "TernaryForm", module = "quadrep", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PyTernaryForm(forms::TernaryForm);

#[pymethods]
impl PyTernaryForm {
    #[new]
    #[pyo3(signature = (a, b, c, r = 0, s = 0, t = 0))]
    fn new(a: i64, b: i64, c: i64, r: i64, s: i64, t: i64) -> PyResult<Self> {
        forms::TernaryForm::new(a, b, c, r, s, t).map(Self).map_err(err)
    }

    /// Parses `"a,b,c"` or `"a,b,c,r,s,t"`.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        text.parse().map(Self).map_err(err)
    }

    #[getter]
    fn coeffs(&self) -> [i64; 6] {
        self.0.coeffs()
    }

    fn discriminant(&self) -> i64 {
        self.0.discriminant()
    }

    fn evaluate(&self, v: [i64; 3]) -> PyResult<i128> {
        self.0.evaluate(v).map_err(err)
    }

    fn represent_all(&self, n: i64) -> PyResult<Vec<[i64; 3]>> {
        self.0.represent_all(n).map_err(err)
    }

    fn represent_count(&self, n: i64) -> PyResult<u64> {
        self.0.represent_count(n).map_err(err)
    }

    fn automorphisms(&self) -> Vec<[[i64; 3]; 3]> {
        self.0.automorphisms()
    }

    fn __repr__(&self) -> String {
        format!("TernaryForm({})", self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

/// A validated restricted decomposition.
#[pyclass(name = "Decomposition", module = "quadrep", frozen, skip_from_py_object)]
pub struct PyDecomposition(constructive::Decomposition);

#[pymethods]
impl PyDecomposition {
    #[getter]
    fn n(&self) -> i64 {
        self.0.n
    }

    #[getter]
    fn variant(&self) -> &'static str {
        self.0.variant.name()
    }

    #[getter]
    fn quad(&self) -> [i64; 4] {
        self.0.quad
    }

    #[getter]
    fn linear_value(&self) -> i64 {
        self.0.linear_value
    }

    #[getter]
    fn trace<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        json_to_py(py, &self.0.trace)
    }

    fn validate(&self) -> bool {
        constructive::validate(&self.0, self.0.n)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0).map_err(|e| QuadrepError::new_err(e.to_string()))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(Self).map_err(|e| QuadrepError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        let [x, y, z, w] = self.0.quad;
        format!("Decomposition({}, n={}, quad=({x}, {y}, {z}, {w}))", self.0.variant, self.0.n)
    }
}

fn variant(name: &str) -> PyResult<AlgorithmId> {
    name.parse().map_err(err)
}

fn restriction(linear: [i64; 4], target: &str, domain: &str) -> PyResult<RestrictionSpec> {
    let target: Target = target.parse().map_err(err)?;
    let domain: Domain = domain.parse().map_err(err)?;
    RestrictionSpec::new(linear, target, domain).map_err(err)
}

/// Restricted decomposition of `n`; raises `Unavailable` when the variant
/// does not apply.
#[pyfunction]
fn decompose(name: &str, n: i64) -> PyResult<PyDecomposition> {
    match constructive::decompose(variant(name)?, n).map_err(err)? {
        Outcome::Found(d) => Ok(PyDecomposition(d)),
        Outcome::Unavailable { variant, n, stage, detail } => {
            Err(Unavailable::new_err(format!("{variant} at n = {n}: {stage} ({detail})")))
        }
    }
}

#[pyfunction]
fn construct_lemma<'py>(py: Python<'py>, name: &str, n: i64) -> PyResult<Bound<'py, PyAny>> {
    let out = constructive::construct_lemma(variant(name)?, n).map_err(err)?;
    json_to_py(py, &out)
}

#[pyfunction]
fn variants() -> Vec<&'static str> {
    AlgorithmId::ALL.iter().map(|v| v.name()).collect()
}

#[pyfunction]
#[pyo3(signature = (form, n, p, k = None))]
fn local_density<'py>(
    py: Python<'py>,
    form: &PyTernaryForm,
    n: i64,
    p: u64,
    k: Option<u32>,
) -> PyResult<Bound<'py, PyAny>> {
    let k = k.unwrap_or_else(|| local::default_depth(&form.0, n, p));
    fraction(py, local::local_density(&form.0, n, p, k).map_err(err)?)
}

#[pyfunction]
fn is_locally_represented(form: &PyTernaryForm, n: i64, p: u64) -> PyResult<bool> {
    local::is_locally_represented(&form.0, n, p).map(|v| v.represented).map_err(err)
}

#[pyfunction]
fn is_eligible(form: &PyTernaryForm, n: i64) -> bool {
    local::is_eligible(&form.0, n)
}

#[pyfunction]
fn dickson_exception_member(a: i64, b: i64, c: i64, n: i64) -> PyResult<bool> {
    local::dickson_exception_member((a, b, c), n).map_err(err)
}

#[pyfunction]
fn reduce(form: &PyTernaryForm) -> PyTernaryForm {
    PyTernaryForm(genus::reduce(&form.0).form)
}

#[pyfunction]
fn is_equivalent(f: &PyTernaryForm, g: &PyTernaryForm) -> bool {
    genus::is_equivalent(&f.0, &g.0)
}

#[pyfunction]
fn enumerate_classes(d: i64) -> PyResult<Vec<PyTernaryForm>> {
    Ok(genus::enumerate_classes(d).map_err(err)?.into_iter().map(PyTernaryForm).collect())
}

/// Dict with `discriminant`, `classes`, `aut_orders` and `spinor_partition`.
#[pyfunction]
fn genus_of<'py>(py: Python<'py>, form: &PyTernaryForm) -> PyResult<Bound<'py, PyDict>> {
    let g = genus::genus_of(&form.0).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("discriminant", g.discriminant)?;
    let classes: Vec<PyTernaryForm> = g.classes.iter().map(|c| PyTernaryForm(c.form)).collect();
    d.set_item("classes", classes)?;
    d.set_item("aut_orders", g.aut_orders)?;
    d.set_item("spinor_partition", g.spinor_partition)?;
    Ok(d)
}

/// Aut-weighted average of representation numbers over `classes`.
#[pyfunction]
fn weighted_average<'py>(py: Python<'py>, classes: Vec<PyRef<'py, PyTernaryForm>>, n: i64) -> PyResult<Bound<'py, PyAny>> {
    let with_aut: Vec<(forms::TernaryForm, u64)> =
        classes.iter().map(|f| (f.0, f.0.automorphisms().len() as u64)).collect();
    fraction(py, genus::weighted_average(&with_aut, n).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (weights, linear, target, n, domain = "int"))]
fn find_restricted(weights: [i64; 4], linear: [i64; 4], target: &str, n: i64, domain: &str) -> PyResult<Option<[i64; 4]>> {
    let form = DiagonalQuaternary::new(weights).map_err(err)?;
    let r = restriction(linear, target, domain)?;
    Ok(scan::find_restricted(&form, &r, n).map_err(err)?.map(|w| w.quad))
}

/// Scans `[lo, hi]` and returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (weights, linear, target, lo, hi, domain = "int", exclude = Vec::new(), workers = 1))]
#[allow(clippy::too_many_arguments)]
fn scan_range<'py>(
    py: Python<'py>,
    weights: [i64; 4],
    linear: [i64; 4],
    target: &str,
    lo: i64,
    hi: i64,
    domain: &str,
    exclude: Vec<String>,
    workers: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let form = DiagonalQuaternary::new(weights).map_err(err)?;
    let mut p = scan::ScanProblem::new(form, restriction(linear, target, domain)?, lo, hi).map_err(err)?;
    p.exclude = exclude.iter().map(|s| s.parse()).collect::<Result<_, _>>().map_err(err)?;
    let rep = py.detach(|| scan::scan_range(&p, workers)).map_err(err)?;
    json_to_py(py, &rep)
}

#[pymodule]
#[pyo3(name = "quadrep")]
fn quadrep_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("QuadrepError", m.py().get_type::<QuadrepError>())?;
    m.add("Unavailable", m.py().get_type::<Unavailable>())?;
    m.add_class::<PyTernaryForm>()?;
    m.add_class::<PyDecomposition>()?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(construct_lemma, m)?)?;
    m.add_function(wrap_pyfunction!(variants, m)?)?;
    m.add_function(wrap_pyfunction!(local_density, m)?)?;
    m.add_function(wrap_pyfunction!(is_locally_represented, m)?)?;
    m.add_function(wrap_pyfunction!(is_eligible, m)?)?;
    m.add_function(wrap_pyfunction!(dickson_exception_member, m)?)?;
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    m.add_function(wrap_pyfunction!(is_equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_classes, m)?)?;
    m.add_function(wrap_pyfunction!(genus_of, m)?)?;
    m.add_function(wrap_pyfunction!(weighted_average, m)?)?;
    m.add_function(wrap_pyfunction!(find_restricted, m)?)?;
    m.add_function(wrap_pyfunction!(scan_range, m)?)?;
    Ok(())
}
