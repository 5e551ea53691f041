//! Python bindings: permutations, groups, multiplicity tables and equivalence verdicts.
//!
//! Reports come back as plain dicts with the same layout as the CLI's JSON output.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use blockfunctor::cli::{self, Formula};
use blockfunctor::ddelta::Registry as CoreRegistry;
use blockfunctor::groupfile::{parse_group_file, GroupForm, GroupSpecFile, LoadedGroup};
use blockfunctor::multiplicity::{self, MultiplicityTable as CoreTable};
use blockfunctor::report::Report;
use blockfunctor::{Error, Permutation as CorePerm};

create_exception!(pyblockfunctor, BlockfunctorError, PyException);
create_exception!(pyblockfunctor, ParseError, BlockfunctorError);
create_exception!(pyblockfunctor, DomainError, BlockfunctorError);
create_exception!(pyblockfunctor, TheoremViolation, BlockfunctorError);

fn err(e: Error) -> PyErr {
    let msg = e.to_string();
    match e.exit_code() {
        2 => ParseError::new_err(msg),
        3 => DomainError::new_err(msg),
        _ => TheoremViolation::new_err(msg),
    }
}

fn to_py(py: Python<'_>, r: &Report) -> PyResult<Py<PyAny>> {
    Ok(py.import("json")?.call_method1("loads", (r.to_json(),))?.unbind())
}

fn formula(name: &str) -> PyResult<Formula> {
    match name {
        "pairs" => Ok(Formula::Pairs),
        "fusion" => Ok(Formula::Fusion),
        "both" => Ok(Formula::Both),
        other => Err(pyo3::exceptions::PyValueError::new_err(format!(
            "formula must be pairs, fusion or both, not {:?}",
            other
        ))),
    }
}

/// A permutation of `{1..n}`, written in 1-based cycle notation.
#[pyclass(frozen, eq, hash, skip_from_py_object, module = "pyblockfunctor")]
#[derive(Clone, PartialEq, Eq, Hash)]
struct Permutation(CorePerm);

#[pymethods]
impl Permutation {
    /// Builds a permutation from 0-based images.
    #[new]
    fn new(images: Vec<usize>) -> PyResult<Self> {
        CorePerm::from_images(images).map(Self).map_err(err)
    }

    #[staticmethod]
    fn parse(degree: usize, text: &str) -> PyResult<Self> {
        CorePerm::parse(degree, text).map(Self).map_err(err)
    }

    #[staticmethod]
    fn identity(degree: usize) -> Self {
        Self(CorePerm::identity(degree))
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.degree()
    }

    #[getter]
    fn images(&self) -> Vec<usize> {
        self.0.images().collect()
    }

    /// Apply `self`, then `other`.
    fn then(&self, other: &Permutation) -> PyResult<Self> {
        if self.0.degree() != other.0.degree() {
            return Err(err(Error::DegreeMismatch { expected: self.0.degree(), got: other.0.degree() }));
        }
        Ok(Self(self.0.then(&other.0)))
    }

    fn inverse(&self) -> Self {
        Self(self.0.inverse())
    }

    fn order(&self) -> u64 {
        self.0.order()
    }

    /// `g self g^-1`.
    fn conjugated_by(&self, g: &Permutation) -> Self {
        Self(self.0.conjugated_by(&g.0))
    }

    /// Cycles of length at least two, 1-based.
    fn cycles(&self) -> Vec<Vec<usize>> {
        self.0.cycles().into_iter().map(|c| c.into_iter().map(|x| x + 1).collect()).collect()
    }

    fn __call__(&self, point: usize) -> PyResult<usize> {
        self.0
            .images()
            .nth(point)
            .ok_or_else(|| pyo3::exceptions::PyIndexError::new_err(point))
    }

    fn __mul__(&self, other: &Permutation) -> PyResult<Self> {
        self.then(other)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Permutation.parse({}, {:?})", self.0.degree(), self.0.to_string())
    }
}

/// A finite group with a chosen prime, loaded from group-file text or generators.
#[pyclass(frozen, skip_from_py_object, module = "pyblockfunctor")]
#[derive(Clone)]
struct Group(LoadedGroup);

#[pymethods]
impl Group {
    #[new]
    #[pyo3(signature = (degree, generators, prime, name = None))]
    fn new(degree: usize, generators: Vec<PyRef<'_, Permutation>>, prime: u64, name: Option<String>) -> PyResult<Self> {
        let spec = GroupSpecFile {
            name,
            prime: Some(prime),
            form: GroupForm::Generators {
                degree,
                generators: generators
                    .iter()
                    .map(|g| g.cycles())
                    .collect(),
            },
        };
        spec.load().map(Self).map_err(err)
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        parse_group_file(text).and_then(|s| s.load()).map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_file(path: std::path::PathBuf) -> PyResult<Self> {
        let text = std::fs::read_to_string(&path)?;
        Self::parse(&text)
    }

    /// One of the built-in fixtures, by file name such as `"s3.grp"`.
    #[staticmethod]
    fn fixture(file: &str) -> PyResult<Self> {
        let fx = blockfunctor::fixtures::by_file(file)
            .ok_or_else(|| pyo3::exceptions::PyKeyError::new_err(file.to_string()))?;
        fx.load().map(Self).map_err(err)
    }

    #[getter]
    fn name(&self) -> String {
        self.0.name.clone()
    }

    #[getter]
    fn prime(&self) -> u64 {
        self.0.prime
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.group.degree()
    }

    #[getter]
    fn order(&self) -> String {
        self.0.group.order().to_string()
    }

    #[getter]
    fn generators(&self) -> Vec<Permutation> {
        self.0.group.generators().iter().cloned().map(Permutation).collect()
    }

    fn __len__(&self) -> PyResult<usize> {
        self.0.group.size().map_err(err)
    }

    fn __contains__(&self, g: &Permutation) -> bool {
        self.0.group.contains(&g.0)
    }

    /// `(k, l, k - l)`.
    fn invariants(&self) -> PyResult<(usize, usize, usize)> {
        multiplicity::invariants_kl(&self.0.group, self.0.prime).map_err(err)
    }

    fn pairs(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &cli::pairs_report(&self.0).map_err(err)?)
    }

    fn character_table(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &cli::chartab_report(&self.0).map_err(err)?)
    }

    /// Multiplicity report; `formula="both"` raises `TheoremViolation` on a mismatch.
    #[pyo3(signature = (formula = "pairs"))]
    fn mult(&self, py: Python<'_>, formula: &str) -> PyResult<Py<PyAny>> {
        to_py(py, &cli::mult_report(&self.0, self::formula(formula)?).map_err(err)?)
    }

    /// Per-class bijection checks as `(report, all_passed)`.
    fn verify_psi(&self, py: Python<'_>) -> PyResult<(Py<PyAny>, bool)> {
        let (r, ok) = cli::verify_psi_report(&self.0).map_err(err)?;
        Ok((to_py(py, &r)?, ok))
    }

    fn to_text(&self) -> String {
        let g = &self.0.group;
        GroupSpecFile {
            name: Some(self.0.name.clone()),
            prime: Some(self.0.prime),
            form: GroupForm::Generators {
                degree: g.degree(),
                generators: g
                    .generators()
                    .iter()
                    .map(|x| x.cycles().into_iter().map(|c| c.into_iter().map(|p| p + 1).collect()).collect())
                    .collect(),
            },
        }
        .to_text()
    }

    fn __repr__(&self) -> String {
        format!("<Group {} of order {} at p={}>", self.0.name, self.0.group.order(), self.0.prime)
    }
}

/// Multiplicities of simple functors indexed by `(class_id, irr_index)`.
#[pyclass(frozen, module = "pyblockfunctor")]
struct MultiplicityTable(CoreTable);

#[pymethods]
impl MultiplicityTable {
    #[getter]
    fn group_name(&self) -> String {
        self.0.group_name.clone()
    }

    #[getter]
    fn p(&self) -> u64 {
        self.0.p
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k
    }

    #[getter]
    fn l(&self) -> usize {
        self.0.l
    }

    #[getter]
    fn defect_order(&self) -> usize {
        self.0.defect_order
    }

    #[getter]
    fn single_block(&self) -> bool {
        self.0.single_block
    }

    #[getter]
    fn rows(&self) -> BTreeMap<(usize, usize), u64> {
        self.0.rows.clone()
    }

    /// Shape of each class: `{class_id: (L_order, u_order, out_order, irr_degrees)}`.
    #[getter]
    fn classes(&self) -> BTreeMap<usize, (usize, u64, usize, Vec<u64>)> {
        self.0
            .classes
            .iter()
            .map(|(&c, s)| (c, (s.l_order, s.u_order, s.out_order, s.irr_degrees.clone())))
            .collect()
    }

    fn get(&self, class_id: usize, irr: usize) -> u64 {
        self.0.get(class_id, irr)
    }

    fn trivial_row(&self) -> u64 {
        self.0.trivial_row()
    }

    fn __repr__(&self) -> String {
        format!("<MultiplicityTable {} p={} rows={}>", self.0.group_name, self.0.p, self.0.rows.len())
    }
}

/// Shared class registry. Tables built against the same registry can be compared.
#[pyclass(module = "pyblockfunctor")]
struct Registry(Arc<Mutex<CoreRegistry>>);

#[pymethods]
impl Registry {
    #[new]
    fn new() -> Self {
        Self(Arc::new(Mutex::new(CoreRegistry::new())))
    }

    fn __len__(&self) -> usize {
        self.0.lock().expect("registry lock").len()
    }

    #[pyo3(signature = (group, formula = "pairs"))]
    fn mult_table(&self, group: &Group, formula: &str) -> PyResult<MultiplicityTable> {
        let g = &group.0;
        let mut reg = self.0.lock().expect("registry lock");
        let t = match self::formula(formula)? {
            Formula::Pairs => multiplicity::mult_table_pairs(&g.name, &g.group, g.prime, &mut reg),
            Formula::Fusion => cli::fusion_for(g).and_then(|f| multiplicity::mult_table_fusion(&g.name, &f, &mut reg)),
            Formula::Both => multiplicity::mult_table_pairs(&g.name, &g.group, g.prime, &mut reg).and_then(|tp| {
                let tf = multiplicity::mult_table_fusion(&g.name, &cli::fusion_for(g)?, &mut reg)?;
                cli::cross_check(&tp, &tf).map(|_| tp)
            }),
        };
        t.map(MultiplicityTable).map_err(err)
    }

    /// Verdict dict with keys `stable`, `functorial`, `defect_isomorphic` and `diff`.
    fn compare<'py>(&self, py: Python<'py>, a: &MultiplicityTable, b: &MultiplicityTable) -> PyResult<Bound<'py, PyDict>> {
        let v = multiplicity::compare(&a.0, &b.0).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("stable", v.stable)?;
        d.set_item("functorial", v.functorial)?;
        d.set_item("defect_isomorphic", v.defect_isomorphic)?;
        let diff: Vec<(usize, usize, u64, u64)> =
            v.diff.iter().map(|r| (r.class_id, r.irr, r.left, r.right)).collect();
        d.set_item("diff", diff)?;
        Ok(d)
    }
}

/// Compares two groups at their common prime and returns the compare report.
#[pyfunction]
fn compare(py: Python<'_>, a: &Group, b: &Group) -> PyResult<Py<PyAny>> {
    to_py(py, &cli::compare_report(&a.0, &b.0).map_err(err)?)
}

/// Runs the fixture battery and returns `(report, all_passed)`.
#[pyfunction]
fn selftest(py: Python<'_>) -> PyResult<(Py<PyAny>, bool)> {
    let (r, ok) = cli::selftest_report();
    Ok((to_py(py, &r)?, ok))
}

#[pymodule]
fn pyblockfunctor(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add_class::<Permutation>()?;
    m.add_class::<Group>()?;
    m.add_class::<MultiplicityTable>()?;
    m.add_class::<Registry>()?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    m.add("BlockfunctorError", py.get_type::<BlockfunctorError>())?;
    m.add("ParseError", py.get_type::<ParseError>())?;
    m.add("DomainError", py.get_type::<DomainError>())?;
    m.add("TheoremViolation", py.get_type::<TheoremViolation>())?;
    m.add("SCHEMA_VERSION", blockfunctor::report::SCHEMA_VERSION)?;
    Ok(())
}
