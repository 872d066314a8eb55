//! Python bindings: `Spec` and `Word` wrap the core types, and the
//! module-level functions mirror the command-line interface. Structured
//! results (reports, evidence, suite outcomes) cross the boundary as plain
//! dicts and lists obtained from their canonical JSON form.

use std::sync::Arc;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use ietlab::classify::{
    classify, non_isomorphism, ClassifyOptions, Report,
};
use ietlab::constructions::{catalog, catalog_entry, solvable_tower, TowerLevelRepr};
use ietlab::exactnum::IrrationalBasis;
use ietlab::haq::{
    default_probes, witness_search, GroupWord, HaqSpec, HaqSpecRepr, WitnessOutcome,
};
use ietlab::permgrp::Perm;
use ietlab::verify::{run_suites, DEFAULT_SEED};
use ietlab::IetError;

fn to_py_err(e: IetError) -> PyErr {
    match e {
        IetError::ClosureCapExceeded { .. }
        | IetError::QuotientTooLarge(_)
        | IetError::OrderCapExceeded(_)
        | IetError::ProbeSearchExhausted(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// Converts any serializable value into the corresponding Python object by
/// round-tripping through its canonical JSON encoding.
fn as_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value)
        .map_err(|e| PyRuntimeError::new_err(format!("serialization failed: {e}")))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn options_from(
    closure_cap: Option<usize>,
    witness_budget: Option<usize>,
    seed: Option<u64>,
) -> ClassifyOptions {
    let mut options = ClassifyOptions::default();
    if let Some(cap) = closure_cap {
        options.closure_cap = cap;
    }
    if let Some(budget) = witness_budget {
        options.witness_budget = budget;
    }
    if let Some(seed) = seed {
        options.seed = seed;
    }
    options
}

fn classify_report(
    spec: &Arc<HaqSpec>,
    closure_cap: Option<usize>,
    witness_budget: Option<usize>,
    seed: Option<u64>,
) -> PyResult<Report> {
    classify(spec, &options_from(closure_cap, witness_budget, seed)).map_err(to_py_err)
}

/// A generating set: q, the listed permutations of {1..q}, and the
/// irrational rotation amounts.
#[pyclass(frozen, name = "Spec")]
struct Spec {
    inner: Arc<HaqSpec>,
}

#[pymethods]
impl Spec {
    /// `Spec(q, qgens, s=None, radicands=None)` — permutations in cycle
    /// notation; rotations default to the fractional parts of the square
    /// roots of the first s primes, or of the given radicands.
    #[new]
    #[pyo3(signature = (q, qgens, s=None, radicands=None))]
    fn new(
        q: u32,
        qgens: Vec<String>,
        s: Option<usize>,
        radicands: Option<Vec<u64>>,
    ) -> PyResult<Self> {
        let basis = match (&radicands, s) {
            (Some(r), Some(s)) if r.len() != s => {
                return Err(PyValueError::new_err(format!(
                    "s={s} disagrees with {} radicands",
                    r.len()
                )));
            }
            (Some(r), _) => IrrationalBasis::from_radicands(r.clone()).map_err(to_py_err)?,
            (None, s) => IrrationalBasis::sqrt_primes(s.unwrap_or(1)).map_err(to_py_err)?,
        };
        let perms = qgens
            .iter()
            .map(|c| Perm::parse_cycles(c, q as usize))
            .collect::<Result<Vec<_>, _>>()
            .map_err(to_py_err)?;
        let inner = HaqSpec::new(q, perms, basis).map_err(to_py_err)?;
        Ok(Spec { inner })
    }

    /// Parses the same JSON form the command-line tool reads.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let repr: HaqSpecRepr =
            serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Spec {
            inner: repr.bind().map_err(to_py_err)?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string_pretty(&HaqSpecRepr::of(&self.inner))
            .map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    #[getter]
    fn q(&self) -> u32 {
        self.inner.q()
    }

    #[getter]
    fn s(&self) -> usize {
        self.inner.s()
    }

    #[getter]
    fn qgens(&self) -> Vec<String> {
        self.inner.qgens().iter().map(|p| p.to_string()).collect()
    }

    /// Full classification report as a dict.
    #[pyo3(signature = (closure_cap=None, witness_budget=None, seed=None))]
    fn analyze<'py>(
        &self,
        py: Python<'py>,
        closure_cap: Option<usize>,
        witness_budget: Option<usize>,
        seed: Option<u64>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let report = classify_report(&self.inner, closure_cap, witness_budget, seed)?;
        as_py(py, &report)
    }

    /// Just the abelianization: `{"free_rank": s, "F": invariants-or-bounds}`.
    #[pyo3(signature = (closure_cap=None, witness_budget=None))]
    fn abelianization<'py>(
        &self,
        py: Python<'py>,
        closure_cap: Option<usize>,
        witness_budget: Option<usize>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let report = classify_report(&self.inner, closure_cap, witness_budget, None)?;
        as_py(py, &report.abelianization)
    }

    /// Searches for a commutator word realizing the grid exchange of the
    /// given permutation. Returns the word, or None if the budget ran out;
    /// raises ValueError when no such word can exist.
    #[pyo3(signature = (target, budget=6))]
    fn witness(&self, target: &str, budget: usize) -> PyResult<Option<Word>> {
        let tau = Perm::parse_cycles(target, self.inner.q() as usize).map_err(to_py_err)?;
        let probes = default_probes(&self.inner).map_err(to_py_err)?;
        match witness_search(&self.inner, &tau, budget, &probes).map_err(to_py_err)? {
            WitnessOutcome::Found(w) => Ok(Some(Word { inner: w.word })),
            WitnessOutcome::Unresolved { .. } => Ok(None),
            WitnessOutcome::Impossible { reason } => Err(PyValueError::new_err(reason)),
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "Spec(q={}, qgens={:?}, s={})",
            self.inner.q(),
            self.qgens(),
            self.inner.s()
        )
    }
}

/// A word over a spec's generators together with its realized interval
/// exchange; equal words realize equal maps.
#[pyclass(frozen, name = "Word")]
struct Word {
    inner: GroupWord,
}

#[pymethods]
impl Word {
    #[staticmethod]
    fn identity(spec: PyRef<'_, Spec>) -> Word {
        Word {
            inner: GroupWord::identity(&spec.inner),
        }
    }

    /// The rotation generator `R_{α_i}` (1-based, matching a1..as).
    #[staticmethod]
    fn rotation(spec: PyRef<'_, Spec>, i: usize) -> PyResult<Word> {
        if i == 0 || i > spec.inner.s() {
            return Err(PyValueError::new_err(format!(
                "rotation index {i} out of range 1..={}",
                spec.inner.s()
            )));
        }
        Ok(Word {
            inner: GroupWord::rotation_gen(&spec.inner, i - 1),
        })
    }

    /// The grid exchange of the i-th listed permutation (0-based).
    #[staticmethod]
    fn generator(spec: PyRef<'_, Spec>, i: usize) -> PyResult<Word> {
        Ok(Word {
            inner: GroupWord::generator(&spec.inner, i).map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn commutator(f: PyRef<'_, Word>, g: PyRef<'_, Word>) -> Word {
        Word {
            inner: GroupWord::commutator(&f.inner, &g.inner),
        }
    }

    fn __mul__(&self, other: PyRef<'_, Word>) -> Word {
        Word {
            inner: self.inner.compose(&other.inner),
        }
    }

    fn inverse(&self) -> Word {
        Word {
            inner: self.inner.inverse(),
        }
    }

    fn pow(&self, exp: i64) -> Word {
        Word {
            inner: self.inner.pow(exp),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __eq__(&self, other: PyRef<'_, Word>) -> bool {
        self.inner.realized() == other.inner.realized()
    }

    /// Exact translation data: the fractional translation class of the word
    /// as a display string, and its integer rotation coefficients.
    fn translation(&self) -> PyResult<(String, Vec<i64>)> {
        let ell = self.inner.ell().map_err(to_py_err)?;
        Ok((ell.to_string(), self.inner.rotation_coefficients()))
    }

    fn is_torsion(&self) -> PyResult<bool> {
        self.inner.is_torsion().map_err(to_py_err)
    }

    fn torsion_order(&self) -> PyResult<u64> {
        self.inner.torsion_order().map_err(to_py_err)
    }

    /// For torsion words: the step profile as a list of (cut, permutation)
    /// pairs, both rendered exactly.
    fn profile(&self) -> PyResult<Vec<(String, String)>> {
        let profile = self.inner.profile().map_err(to_py_err)?;
        Ok(profile
            .cuts()
            .iter()
            .zip(profile.values())
            .map(|(cut, value)| (cut.to_string(), value.to_string()))
            .collect())
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

/// Classification report for a spec, as a dict.
#[pyfunction]
#[pyo3(signature = (spec, closure_cap=None, witness_budget=None, seed=None))]
fn analyze<'py>(
    py: Python<'py>,
    spec: PyRef<'_, Spec>,
    closure_cap: Option<usize>,
    witness_budget: Option<usize>,
    seed: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let report = classify_report(&spec.inner, closure_cap, witness_budget, seed)?;
    as_py(py, &report)
}

/// Non-isomorphism evidence for two specs, as a list of dicts; an empty
/// list means no evidence either way.
#[pyfunction]
fn compare<'py>(
    py: Python<'py>,
    a: PyRef<'_, Spec>,
    b: PyRef<'_, Spec>,
) -> PyResult<Bound<'py, PyAny>> {
    let evidence =
        non_isomorphism(&a.inner, &b.inner, &ClassifyOptions::default()).map_err(to_py_err)?;
    as_py(py, &evidence)
}

/// Level n of the iterated wreath tower: generators, order, derived length.
#[pyfunction]
fn tower_level<'py>(py: Python<'py>, n: u32) -> PyResult<Bound<'py, PyAny>> {
    let level = solvable_tower(n).map_err(to_py_err)?;
    as_py(py, &TowerLevelRepr::of(&level))
}

#[pyfunction]
fn catalog_names() -> Vec<String> {
    catalog().into_iter().map(|e| e.name).collect()
}

#[pyfunction]
fn catalog_spec(name: &str) -> PyResult<Spec> {
    Ok(Spec {
        inner: catalog_entry(name).map_err(to_py_err)?,
    })
}

/// Runs a verification suite ("all" for every suite); returns a list of
/// suite outcomes with per-property pass/fail and case counts.
#[pyfunction]
#[pyo3(signature = (suite, seed=None))]
fn verify<'py>(py: Python<'py>, suite: &str, seed: Option<u64>) -> PyResult<Bound<'py, PyAny>> {
    let outcomes = run_suites(suite, seed.unwrap_or(DEFAULT_SEED)).map_err(to_py_err)?;
    as_py(py, &outcomes)
}

#[pymodule]
fn ietlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Spec>()?;
    m.add_class::<Word>()?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add_function(wrap_pyfunction!(tower_level, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_names, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_spec, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
