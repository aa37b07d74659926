use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use tvt_core::doodle::{self, DoodleBudget, DoodleVerdict};
use tvt_core::markov::{self, MarkovBudget, MarkovVerdict};
use tvt_core::normalform;
use tvt_core::oracle::{self, Budget, Verdict};
use tvt_core::schreier::{self, PureWord};

fn value_error(e: tvt_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A word in the generators `s<i>`, `r<i>`, `g<j>` on a fixed number of strands.
#[pyclass(name = "Word", module = "tvt", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PyWord(tvt_core::Word);

#[pymethods]
impl PyWord {
    #[new]
    #[pyo3(signature = (text, n))]
    fn new(text: &str, n: usize) -> PyResult<Self> {
        tvt_core::Word::parse(text, n)
            .map(PyWord)
            .map_err(value_error)
    }

    #[staticmethod]
    fn identity(n: usize) -> PyResult<Self> {
        if n == 0 {
            return Err(value_error(tvt_core::Error::NoStrands));
        }
        Ok(PyWord(tvt_core::Word::identity(n)))
    }

    #[getter]
    fn strands(&self) -> usize {
        self.0.strands()
    }

    fn letters(&self) -> Vec<String> {
        self.0.letters().iter().map(ToString::to_string).collect()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Word({:?}, {})", self.0.to_string(), self.0.strands())
    }

    fn __mul__(&self, other: &PyWord) -> PyResult<PyWord> {
        self.0.concat(&other.0).map(PyWord).map_err(value_error)
    }

    fn free_reduce(&self) -> PyWord {
        PyWord(self.0.free_reduce())
    }

    fn invert(&self) -> PyWord {
        PyWord(self.0.invert())
    }

    /// One-line notation, 1-based.
    fn perm_image(&self) -> Vec<usize> {
        let p = self.0.perm_image();
        (1..=p.degree()).map(|i| p.image(i)).collect()
    }

    /// Parities of the numbers of `s`, `r` and `g` letters.
    fn abelianize(&self) -> (u8, u8, u8) {
        self.0.abelianize().bits()
    }

    fn is_pure(&self) -> bool {
        self.0.is_pure()
    }

    fn normal_form(&self) -> String {
        normalform::normal_form(&self.0).to_string()
    }

    fn flip(&self) -> PyWord {
        PyWord(normalform::flip(&self.0))
    }

    fn closure(&self) -> PyGaussData {
        PyGaussData(doodle::closure_gauss(&self.0))
    }
}

/// Gauss data of an oriented twisted virtual doodle diagram.
#[pyclass(name = "GaussData", module = "tvt", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq)]
pub struct PyGaussData(doodle::GaussData);

#[pymethods]
impl PyGaussData {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        doodle::GaussData::from_json(text)
            .map(PyGaussData)
            .map_err(value_error)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    fn components(&self) -> usize {
        doodle::gauss_components(&self.0)
    }

    fn bar_parity(&self) -> u8 {
        doodle::bar_parity(&self.0)
    }

    fn crossings(&self) -> Vec<usize> {
        self.0.crossings().iter().copied().collect()
    }

    fn bars(&self) -> Vec<usize> {
        self.0.bars().iter().copied().collect()
    }

    /// True if the two have the same Gauss data up to renaming of sites.
    fn same_as(&self, other: &PyGaussData) -> bool {
        doodle::same_gauss_data(&self.0, &other.0).is_some()
    }

    /// A word whose closure has this Gauss data.
    fn braid(&self) -> PyResult<PyWord> {
        doodle::braid_gauss(&self.0)
            .map(PyWord)
            .map_err(value_error)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

/// Equality through normal forms.
#[pyfunction]
fn words_equal(a: &PyWord, b: &PyWord) -> PyResult<bool> {
    normalform::words_equal(&a.0, &b.0).map_err(value_error)
}

/// Equality using only the defining relations and finite quotients.
///
/// Returns the verdict (`"equal"`, `"distinct"` or `"unknown"`) and the
/// certificate as text lines.
#[pyfunction]
#[pyo3(signature = (a, b, budget=None))]
fn decide_equal(a: &PyWord, b: &PyWord, budget: Option<usize>) -> PyResult<(String, Vec<String>)> {
    let budget = budget.map_or_else(Budget::default, Budget::with_nodes);
    let verdict = oracle::decide_equal(&a.0, &b.0, &budget).map_err(value_error)?;
    let witness = match &verdict {
        Verdict::Equal(path) => path.steps.iter().map(ToString::to_string).collect(),
        Verdict::Distinct(hom) => vec![hom.to_string()],
        Verdict::Unknown => Vec::new(),
    };
    Ok((verdict.label().to_string(), witness))
}

/// Rewrites a pure word in the generators `L{k,l}` and `g<j>`.
#[pyfunction]
fn rewrite_pure(w: &PyWord) -> PyResult<String> {
    schreier::rewrite_pure(&w.0)
        .map(|p| p.to_string())
        .map_err(value_error)
}

#[pyfunction]
fn eval_pure(text: &str, n: usize) -> PyResult<PyWord> {
    let p = PureWord::parse(text, n).map_err(value_error)?;
    Ok(PyWord(schreier::eval_pure(&p)))
}

#[pyfunction]
fn nabla(n: usize) -> PyResult<PyWord> {
    normalform::nabla(n).map(PyWord).map_err(value_error)
}

/// Bounded search for R1, R2 and T2 moves between two diagrams.
#[pyfunction]
#[pyo3(signature = (a, b, budget=None))]
fn gauss_equivalent(
    a: &PyGaussData,
    b: &PyGaussData,
    budget: Option<usize>,
) -> (String, Vec<String>) {
    let mut bounds = DoodleBudget::default();
    if let Some(nodes) = budget {
        bounds.nodes = nodes;
    }
    match doodle::equivalent_bounded(&a.0, &b.0, &bounds) {
        DoodleVerdict::Equivalent(path) => (
            "equivalent".into(),
            path.iter().map(ToString::to_string).collect(),
        ),
        DoodleVerdict::Distinct(_) => ("distinct".into(), Vec::new()),
        DoodleVerdict::Unknown => ("unknown".into(), Vec::new()),
    }
}

/// Bounded search for a Markov sequence between two words.
#[pyfunction]
#[pyo3(signature = (a, b, budget=None, max_strands=None))]
fn markov_equivalent(
    a: &PyWord,
    b: &PyWord,
    budget: Option<usize>,
    max_strands: Option<usize>,
) -> (String, Vec<String>) {
    let mut bounds = MarkovBudget {
        max_strands,
        ..MarkovBudget::default()
    };
    if let Some(nodes) = budget {
        bounds.nodes = nodes;
    }
    match markov::markov_equivalent_bounded(&a.0, &b.0, &bounds) {
        MarkovVerdict::Equivalent(path) => (
            "equivalent".into(),
            path.iter().map(ToString::to_string).collect(),
        ),
        MarkovVerdict::Distinct(_) => ("distinct".into(), Vec::new()),
        MarkovVerdict::Unknown => ("unknown".into(), Vec::new()),
    }
}

#[pymodule]
pub fn tvt(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWord>()?;
    m.add_class::<PyGaussData>()?;
    m.add_function(wrap_pyfunction!(words_equal, m)?)?;
    m.add_function(wrap_pyfunction!(decide_equal, m)?)?;
    m.add_function(wrap_pyfunction!(rewrite_pure, m)?)?;
    m.add_function(wrap_pyfunction!(eval_pure, m)?)?;
    m.add_function(wrap_pyfunction!(nabla, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(markov_equivalent, m)?)?;
    Ok(())
}
