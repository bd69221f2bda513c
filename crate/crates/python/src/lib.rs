//! Python bindings. Probabilities cross the boundary as `fractions.Fraction`
//! and partitions as text such as `"1,2|3"`.

use ancillary_core::ancillary::{AncillaryEngine, Limits};
use ancillary_core::evidence::{ev_sc, ev_sc_is_idempotent, sc_equivalent};
use ancillary_core::format::content_hash;
use ancillary_core::rational::{format_exact, parse_rational};
use ancillary_core::reports::{reproduce_report, Reproduction};
use ancillary_core::sufficiency::{ev_ms, mss_partition, s_equivalent, EvidenceBase, Relabeling};
use ancillary_core::{
    example1_model_with, example2_model, parse_model, render_model, Error, FiniteModel,
    InferenceBase, Partition, Rational, Weights,
};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::SizeCapExceeded { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn fraction<'py>(py: Python<'py>, value: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((format_exact(value),))
}

/// Accepts `Fraction`, `int` or a string such as `"1/100"`.
fn rational(value: &Bound<'_, PyAny>) -> PyResult<Rational> {
    parse_rational(&value.str()?.to_string()).map_err(to_py)
}

fn matrix<'py>(py: Python<'py>, rows: &[Vec<Rational>]) -> PyResult<Bound<'py, PyList>> {
    let out = PyList::empty(py);
    for row in rows {
        let r = PyList::empty(py);
        for v in row {
            r.append(fraction(py, v)?)?;
        }
        out.append(r)?;
    }
    Ok(out)
}

/// A finite model: parameters by samples, exact probabilities.
#[pyclass(name = "Model", module = "ancillary", frozen)]
struct PyModel {
    inner: FiniteModel,
}

#[pymethods]
impl PyModel {
    #[new]
    #[pyo3(signature = (thetas, samples, probabilities, name = "model"))]
    fn new(
        thetas: Vec<String>,
        samples: Vec<String>,
        probabilities: Vec<Vec<Bound<'_, PyAny>>>,
        name: &str,
    ) -> PyResult<Self> {
        let rows = probabilities
            .iter()
            .map(|row| row.iter().map(rational).collect::<PyResult<Vec<_>>>())
            .collect::<PyResult<Vec<_>>>()?;
        let inner = FiniteModel::new(thetas, samples, rows).map_err(to_py)?;
        Ok(Self {
            inner: inner.with_name(name),
        })
    }

    /// Parses the line-oriented model text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: parse_model(text).map_err(to_py)?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (epsilon, allow_degenerate = false))]
    fn example1(epsilon: &Bound<'_, PyAny>, allow_degenerate: bool) -> PyResult<Self> {
        Ok(Self {
            inner: example1_model_with(&rational(epsilon)?, allow_degenerate).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn example2() -> Self {
        Self {
            inner: example2_model(),
        }
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    #[getter]
    fn thetas(&self) -> Vec<String> {
        self.inner.theta_labels().to_vec()
    }

    #[getter]
    fn samples(&self) -> Vec<String> {
        self.inner.sample_labels().to_vec()
    }

    fn probabilities<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        matrix(py, self.inner.rows())
    }

    fn render(&self) -> String {
        render_model(&self.inner)
    }

    fn content_hash(&self) -> String {
        content_hash(&self.inner)
    }

    /// Reweights the ancillary `partition` so its blocks get `weights`.
    fn mixture(&self, partition: &str, weights: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        let u = self.partition(partition)?;
        let w =
            Weights::new(weights.iter().map(rational).collect::<PyResult<_>>()?).map_err(to_py)?;
        Ok(Self {
            inner: self.inner.mixture_model(&u, &w).map_err(to_py)?,
        })
    }

    /// Conditions on the event made of the given sample labels.
    fn condition(&self, event: Vec<String>) -> PyResult<Self> {
        let event: Vec<usize> = event
            .iter()
            .map(|l| self.inner.sample_index(l))
            .collect::<Result<_, _>>()
            .map_err(to_py)?;
        Ok(Self {
            inner: self.inner.condition_on_event(&event).map_err(to_py)?,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "Model({:?}, thetas={}, samples={})",
            self.inner.name(),
            self.inner.num_thetas(),
            self.inner.num_samples()
        )
    }
}

impl PyModel {
    fn partition(&self, text: &str) -> PyResult<Partition> {
        Partition::parse_with(text, self.inner.sample_labels()).map_err(to_py)
    }

    fn show(&self, p: &Partition) -> String {
        p.display_with(self.inner.sample_labels())
    }

    fn base(&self, observed: &str) -> PyResult<InferenceBase> {
        InferenceBase::from_label(self.inner.clone(), observed).map_err(to_py)
    }
}

/// The minimal sufficient partition as text.
#[pyfunction]
fn mss(model: &PyModel) -> String {
    model.show(&mss_partition(&model.inner))
}

/// Full ancillary taxonomy; partitions are rendered as text.
#[pyfunction]
#[pyo3(signature = (model, within_mss = true, cap = 13))]
fn classify<'py>(
    py: Python<'py>,
    model: &PyModel,
    within_mss: bool,
    cap: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let mss = mss_partition(&model.inner);
    let limits = Limits {
        partition_cap: cap,
        ..Limits::default()
    };
    let engine =
        AncillaryEngine::new(&model.inner, within_mss.then_some(&mss), limits).map_err(to_py)?;
    let class = engine.classify().map_err(to_py)?;
    let texts = |ps: &[Partition]| ps.iter().map(|p| model.show(p)).collect::<Vec<_>>();
    let out = PyDict::new(py);
    out.set_item("within", model.show(&class.within))?;
    out.set_item("ancillaries", texts(&class.ancillaries))?;
    out.set_item("maximal", texts(&class.maximal))?;
    out.set_item("minimal", texts(&class.minimal))?;
    out.set_item("laminal", model.show(&class.laminal))?;
    out.set_item("stable", texts(&class.stable))?;
    let labels = model.inner.sample_labels();
    let gamma0: Vec<Vec<String>> = class
        .gamma0
        .iter()
        .map(|e| e.iter().map(|&x| labels[x].clone()).collect())
        .collect();
    out.set_item("gamma0", gamma0)?;
    Ok(out)
}

#[pyfunction]
fn is_stable(model: &PyModel, partition: &str) -> PyResult<bool> {
    ancillary_core::is_stable(&model.inner, &model.partition(partition)?).map_err(to_py)
}

#[pyfunction]
fn is_ancillary(model: &PyModel, partition: &str) -> PyResult<bool> {
    ancillary_core::is_ancillary(&model.inner, &model.partition(partition)?).map_err(to_py)
}

fn evidence_dict<'py>(
    py: Python<'py>,
    model: &PyModel,
    e: &EvidenceBase,
) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    out.set_item("mss", model.show(&e.mss))?;
    out.set_item("samples", e.model.sample_labels().to_vec())?;
    out.set_item("probabilities", matrix(py, e.model.rows())?)?;
    out.set_item("observed", e.model.sample_labels()[e.observed].clone())?;
    let contour = e.contour.as_ref().map(|c| {
        c.iter()
            .map(|&b| ancillary_core::sufficiency::block_label(&model.inner, &e.mss.blocks()[b]))
            .collect::<Vec<_>>()
    });
    out.set_item("contour", contour)?;
    Ok(out)
}

/// Minimal-sufficiency evidence base of `(model, observed)`.
#[pyfunction]
fn evidence_ms<'py>(
    py: Python<'py>,
    model: &PyModel,
    observed: &str,
) -> PyResult<Bound<'py, PyDict>> {
    evidence_dict(py, model, &ev_ms(&model.base(observed)?))
}

/// Stable-conditional evidence base of `(model, observed)`.
#[pyfunction]
fn evidence_sc<'py>(
    py: Python<'py>,
    model: &PyModel,
    observed: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let ib = model.base(observed)?;
    let out = evidence_dict(py, model, &ev_sc(&ib).map_err(to_py)?)?;
    out.set_item("idempotent", ev_sc_is_idempotent(&ib).map_err(to_py)?)?;
    Ok(out)
}

fn mapping(h: Option<Relabeling>) -> Option<Vec<usize>> {
    h.map(|h| h.mapping)
}

/// Relabeling of minimal sufficient blocks (second to first) if S-equivalent.
#[pyfunction]
fn s_equivalence(m1: &PyModel, x1: &str, m2: &PyModel, x2: &str) -> PyResult<Option<Vec<usize>>> {
    Ok(mapping(
        s_equivalent(&m1.base(x1)?, &m2.base(x2)?).map_err(to_py)?,
    ))
}

/// Relabeling of minimal sufficient blocks (second to first) if SC-equivalent.
#[pyfunction]
fn sc_equivalence(m1: &PyModel, x1: &str, m2: &PyModel, x2: &str) -> PyResult<Option<Vec<usize>>> {
    Ok(mapping(
        sc_equivalent(&m1.base(x1)?, &m2.base(x2)?).map_err(to_py)?,
    ))
}

type Reproduced = (String, Vec<(String, String)>, bool);

/// Rendered report and CSV attachments for `example1`, `example2`,
/// `example3` or `all`.
#[pyfunction]
#[pyo3(signature = (which = "all", epsilon = "1/100"))]
fn reproduce(which: &str, epsilon: &str) -> PyResult<Reproduced> {
    let which = match which {
        "example1" => Reproduction::Example1,
        "example2" => Reproduction::Example2,
        "example3" => Reproduction::Example3,
        "all" => Reproduction::All,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown reproduction {other:?}"
            )))
        }
    };
    let eps = parse_rational(epsilon).map_err(to_py)?;
    let doc = reproduce_report(which, &eps).map_err(to_py)?;
    let csvs = doc
        .csv_attachments
        .iter()
        .map(|c| (c.name.clone(), c.content.clone()))
        .collect();
    Ok((doc.render(), csvs, doc.all_checks_pass()))
}

#[pymodule]
fn ancillary(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModel>()?;
    m.add_function(wrap_pyfunction!(mss, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(is_stable, m)?)?;
    m.add_function(wrap_pyfunction!(is_ancillary, m)?)?;
    m.add_function(wrap_pyfunction!(evidence_ms, m)?)?;
    m.add_function(wrap_pyfunction!(evidence_sc, m)?)?;
    m.add_function(wrap_pyfunction!(s_equivalence, m)?)?;
    m.add_function(wrap_pyfunction!(sc_equivalence, m)?)?;
    m.add_function(wrap_pyfunction!(reproduce, m)?)?;
    Ok(())
}
