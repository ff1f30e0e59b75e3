//! Python bindings. Structured results come back as plain dicts and lists
//! built from the same JSON the command-line tool prints.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use trihomo::certificate::{self as cert, ReplayOptions};
use trihomo::corpus::{self, CorpusId, DataStore};
use trihomo::diagram::{self, Family, TrisectionMatrix};
use trihomo::exactalg::{self, HClass};
use trihomo::format;
use trihomo::search::{self, SearchBudget, TwistVocabulary};
use trihomo::standardness;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn loads<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

fn to_py<'py>(py: Python<'py>, v: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    loads(py, &serde_json::to_string(v).map_err(err)?)
}

fn family(name: &str) -> PyResult<Family> {
    name.parse().map_err(err)
}

/// One certificate move line, e.g. `slide f=beta i=2 j=1 m=1`.
fn parse_move(genus: usize, line: &str) -> PyResult<trihomo::Move> {
    let c = cert::Certificate::parse(&format!("genus {genus}\n{line}\n")).map_err(err)?;
    match c.steps.as_slice() {
        [step] => Ok(step.mv.clone()),
        _ => Err(err(format!("expected exactly one move, got {line:?}"))),
    }
}

/// A trisection matrix: three families of `g` rows in `Z[n]^{2g}`.
#[pyclass(name = "Matrix", module = "trihomo", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyMatrix(TrisectionMatrix);

#[pymethods]
impl PyMatrix {
    /// Parses a matrix file.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        format::parse_matrix(text).map(PyMatrix).map_err(err)
    }

    /// Integer matrix from three lists of rows.
    #[staticmethod]
    fn from_rows(genus: usize, alpha: Vec<Vec<i64>>, beta: Vec<Vec<i64>>, gamma: Vec<Vec<i64>>) -> PyResult<Self> {
        fn refs(f: &[Vec<i64>]) -> Vec<&[i64]> {
            f.iter().map(Vec::as_slice).collect()
        }
        TrisectionMatrix::from_i64_rows(genus, &refs(&alpha), &refs(&beta), &refs(&gamma))
            .map(PyMatrix)
            .map_err(err)
    }

    /// `gluck-T`, `theorem2-step:S`, `theorem2-final` or `standard-sphere:G:A,B,C`.
    #[staticmethod]
    fn corpus(id: &str) -> PyResult<Self> {
        let id: CorpusId = id.parse().map_err(err)?;
        corpus::build_from(&DataStore::from_env(), &id).map(PyMatrix).map_err(err)
    }

    #[staticmethod]
    fn standard_sphere(genus: usize, counts: [usize; 3]) -> PyResult<Self> {
        corpus::standard_sphere(genus, counts).map(PyMatrix).map_err(err)
    }

    fn to_json(&self) -> String {
        format::write_matrix(&self.0)
    }

    #[getter]
    fn genus(&self) -> usize {
        self.0.genus()
    }

    #[getter]
    fn label(&self) -> String {
        self.0.label().to_string()
    }

    fn is_symbolic(&self) -> bool {
        self.0.is_symbolic()
    }

    /// Entries of one family as polynomial strings.
    fn rows(&self, family_name: &str) -> PyResult<Vec<Vec<String>>> {
        let f = family(family_name)?;
        Ok(self.0.family(f).iter().map(|r| r.entries().iter().map(ToString::to_string).collect()).collect())
    }

    fn evaluate(&self, n: i64) -> Self {
        PyMatrix(self.0.evaluate(n))
    }

    /// Applies one move given as a certificate line.
    fn apply(&self, mv: &str) -> PyResult<Self> {
        let mv = parse_move(self.0.genus(), mv)?;
        trihomo::moves::apply(&self.0, &mv).map(PyMatrix).map_err(err)
    }

    /// Returns the scrambled matrix and the applied moves.
    #[pyo3(signature = (seed, depth, bound=2))]
    fn scramble(&self, seed: u64, depth: usize, bound: i64) -> (Self, Vec<String>) {
        let (d, moves) = corpus::scramble_with_bound(&self.0, seed, depth, bound);
        (PyMatrix(d), moves.iter().map(ToString::to_string).collect())
    }

    #[pyo3(signature = (same_class=false))]
    fn is_standard(&self, same_class: bool) -> bool {
        self.witness_inner(same_class).is_some()
    }

    #[pyo3(signature = (same_class=false))]
    fn witness<'py>(&self, py: Python<'py>, same_class: bool) -> PyResult<Option<Bound<'py, PyAny>>> {
        self.witness_inner(same_class).map(|w| to_py(py, &w)).transpose()
    }

    fn defect(&self) -> u64 {
        standardness::standardness_defect(&self.0)
    }

    #[pyo3(signature = (n=Vec::new()))]
    fn validate<'py>(&self, py: Python<'py>, n: Vec<i64>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &diagram::validate(&self.0, &n))
    }

    /// Invariant factors of the stacked pair `(x, y)`.
    #[pyo3(signature = (x, y, n=None))]
    fn snf(&self, x: &str, y: &str, n: Option<i64>) -> PyResult<Vec<String>> {
        let d = match n {
            Some(n0) => self.0.evaluate(n0),
            None => self.0.clone(),
        };
        let s = exactalg::smith_normal_form(&d.stacked(family(x)?, family(y)?)).map_err(err)?;
        Ok(s.diagonal().iter().map(ToString::to_string).collect())
    }

    fn canonical_key(&self) -> String {
        format!("{:?}", search::canonicalize(&self.0))
    }

    /// Entrywise equality; labels are ignored.
    fn __eq__(&self, other: &Bound<'_, PyAny>) -> bool {
        other.cast::<PyMatrix>().is_ok_and(|o| diagram::equal(&self.0, &o.get().0))
    }

    fn __repr__(&self) -> String {
        format!("Matrix(genus={}, label={:?})", self.0.genus(), self.0.label())
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

impl PyMatrix {
    fn witness_inner(&self, same_class: bool) -> Option<standardness::StandardAssignment> {
        let reading = if same_class { standardness::Reading::SameClass } else { standardness::Reading::AllIndices };
        standardness::is_standard_position_with(&self.0, reading)
    }
}

/// A move script with optional intermediate assertions.
#[pyclass(name = "Certificate", module = "trihomo", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCertificate(cert::Certificate);

#[pymethods]
impl PyCertificate {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        cert::Certificate::parse(text).map(PyCertificate).map_err(err)
    }

    /// The bundled reduction certificate for `T(n)`.
    #[staticmethod]
    fn bundled() -> Self {
        PyCertificate(cert::Certificate::bundled())
    }

    #[staticmethod]
    fn from_moves(genus: usize, moves: Vec<String>) -> PyResult<Self> {
        let moves = moves.iter().map(|m| parse_move(genus, m)).collect::<PyResult<Vec<_>>>()?;
        Ok(PyCertificate(cert::Certificate::from_moves(genus, moves)))
    }

    fn serialize(&self) -> String {
        self.0.serialize()
    }

    fn inverse(&self) -> Self {
        PyCertificate(self.0.inverse())
    }

    #[getter]
    fn genus(&self) -> usize {
        self.0.genus
    }

    #[getter]
    fn moves(&self) -> Vec<String> {
        self.0.moves().map(ToString::to_string).collect()
    }

    /// Replays against `matrix`. Returns `(report, final_matrix)`.
    #[pyo3(signature = (matrix, strict=false, n=None))]
    fn replay<'py>(
        &self,
        py: Python<'py>,
        matrix: &PyMatrix,
        strict: bool,
        n: Option<i64>,
    ) -> PyResult<(Bound<'py, PyAny>, PyMatrix)> {
        let store = DataStore::from_env();
        let r = cert::replay(&matrix.0, &self.0, ReplayOptions { strict, n }, &cert::store_resolver(&store))
            .map_err(err)?;
        let report = to_py(py, &r)?;
        report.set_item("assertions_passed", r.assertions_passed())?;
        Ok((report, PyMatrix(r.final_matrix)))
    }

    fn __len__(&self) -> usize {
        self.0.steps.len()
    }

    fn __repr__(&self) -> String {
        format!("Certificate(genus={}, steps={})", self.0.genus, self.0.steps.len())
    }
}

/// Bounded certificate search. Returns `(certificate or None, stats)`.
#[pyfunction]
#[pyo3(signature = (matrix, max_depth=6, max_states=200_000, beam_width=None, bound=2, vocabulary="basis"))]
fn find_certificate<'py>(
    py: Python<'py>,
    matrix: &PyMatrix,
    max_depth: usize,
    max_states: usize,
    beam_width: Option<usize>,
    bound: i64,
    vocabulary: &str,
) -> PyResult<(Option<PyCertificate>, Bound<'py, PyAny>)> {
    let budget = SearchBudget {
        max_depth,
        max_states,
        beam_width,
        coefficient_bound: bound,
        twist_vocabulary: vocabulary.parse::<TwistVocabulary>().map_err(err)?,
    };
    let out = py.detach(|| search::find_certificate(&matrix.0, &budget)).map_err(err)?;
    Ok((out.certificate.map(PyCertificate), to_py(py, &out.stats)?))
}

/// `Ω(a, b)` for integer vectors of equal even length.
#[pyfunction]
fn pairing(a: Vec<i64>, b: Vec<i64>) -> PyResult<String> {
    exactalg::pairing(&HClass::from_i64s(&a), &HClass::from_i64s(&b)).map(|p| p.to_string()).map_err(err)
}

#[pymodule(name = "trihomo")]
mod trihomo_module {
    #[pymodule_export]
    use super::{find_certificate, pairing, PyCertificate, PyMatrix};
}
