//! Python bindings: families, JSR bounds, growth diagnostics, sequence
//! generation and the lift correspondence.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use ::extremal::families::{self, parse_family};
use ::extremal::jsr::{self, JsrConfig};
use ::extremal::lift;
use ::extremal::linalg::{format_exact, MatrixFamily};
use ::extremal::precision::{digits_to_bits, BigReal, Constant};
use ::extremal::suite::{self, SuiteKind};
use ::extremal::words::{self, parse_source, SequenceSource, WindowPolicy, Word};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn runtime_err(e: impl std::fmt::Display) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn source(spec: &str) -> PyResult<SequenceSource> {
    parse_source(spec).map_err(value_err)
}

/// A finite family of square matrices with exact (possibly symbolic) entries.
#[pyclass(name = "Family", module = "extremal", frozen)]
struct PyFamily {
    inner: MatrixFamily,
}

#[pymethods]
impl PyFamily {
    /// Parse a family spec such as `btv:1/2`, `kron:alpha-star,alpha-double-star`,
    /// `jb:toy:3`, `example-p2` or `file:path`.
    #[new]
    #[pyo3(signature = (spec, digits = 50))]
    fn new(spec: &str, digits: u32) -> PyResult<Self> {
        Ok(PyFamily { inner: parse_family(spec, digits).map_err(value_err)? })
    }

    #[getter]
    fn tag(&self) -> String {
        self.inner.tag().to_string()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.inner.warnings().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Family({:?}, members={}, dim={})", self.inner.tag(), self.inner.len(), self.inner.dim())
    }

    /// Matrices in the `a,b;c,d` text form, with any scalar factored out.
    fn matrices(&self) -> Vec<String> {
        self.inner.members().iter().map(format_exact).collect()
    }

    /// Matrices evaluated to floats.
    #[pyo3(signature = (digits = 30))]
    fn to_floats(&self, digits: u32) -> PyResult<Vec<Vec<Vec<f64>>>> {
        let ms = self.inner.numeric(digits_to_bits(digits)).map_err(runtime_err)?;
        Ok(ms
            .iter()
            .map(|m| (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).to_f64()).collect()).collect())
            .collect())
    }

    /// The two-matrix block lift of this family.
    fn lift(&self) -> Self {
        PyFamily { inner: families::jb_pair(&self.inner) }
    }

    fn scaled(&self, c: &str) -> PyResult<Self> {
        let q = ::extremal::linalg::parse_decimal_rational(c).ok_or_else(|| value_err(format!("bad scalar {c:?}")))?;
        Ok(PyFamily { inner: families::scale_family(&self.inner, &q).map_err(runtime_err)? })
    }
}

/// Certified JSR bracket from exhaustive product enumeration.
#[pyclass(name = "JsrBounds", module = "extremal", frozen, get_all)]
struct PyJsrBounds {
    lower: String,
    upper: String,
    lower_f64: f64,
    upper_f64: f64,
    depth: usize,
    witness: String,
    partial: bool,
    products: u64,
}

#[pymethods]
impl PyJsrBounds {
    fn gap(&self) -> f64 {
        self.upper_f64 - self.lower_f64
    }

    fn __repr__(&self) -> String {
        format!("JsrBounds(lower={}, upper={}, depth={}, witness={:?})", self.lower_f64, self.upper_f64, self.depth, self.witness)
    }
}

fn bounds_of(fam: &MatrixFamily, depth: usize, budget: u64, digits: u32) -> PyResult<jsr::JsrBounds> {
    jsr::jsr_bounds(fam, &JsrConfig { max_depth: depth, budget, digits }).map_err(runtime_err)
}

#[pyfunction]
#[pyo3(signature = (family, depth = 10, budget = 4_000_000, digits = 50))]
fn jsr_bounds(family: &PyFamily, depth: usize, budget: u64, digits: u32) -> PyResult<PyJsrBounds> {
    let b = bounds_of(&family.inner, depth, budget, digits)?;
    Ok(PyJsrBounds {
        lower: b.lower.to_decimal(digits),
        upper: b.upper.to_decimal(digits),
        lower_f64: b.lower.to_f64(),
        upper_f64: b.upper.to_f64(),
        depth: b.depth,
        witness: b.witness.to_string(),
        partial: b.partial,
        products: b.products,
    })
}

/// `(value, radius)` as decimal strings.
#[pyfunction]
#[pyo3(signature = (which, digits = 50))]
fn constant(which: &str, digits: u32) -> PyResult<(String, String)> {
    let c = Constant::parse(which).ok_or_else(|| value_err(format!("unknown constant {which:?}")))?;
    let v = c.compute(digits).map_err(runtime_err)?;
    Ok((v.value.to_decimal(digits), v.value.radius_string()))
}

#[pyfunction]
fn word(spec: &str, length: usize) -> PyResult<String> {
    Ok(source(spec)?.generate_prefix(length).map_err(runtime_err)?.to_string())
}

/// Rows `(n, count, window, saturated)`.
#[pyfunction]
#[pyo3(signature = (spec, n_max, initial = 1024, cap = 1_000_000))]
fn complexity(spec: &str, n_max: usize, initial: usize, cap: usize) -> PyResult<Vec<(usize, usize, usize, bool)>> {
    let p = words::complexity_profile(&source(spec)?, n_max, WindowPolicy { initial, cap }).map_err(runtime_err)?;
    Ok(p.entries.iter().map(|e| (e.n, e.count, e.window, e.saturated)).collect())
}

#[pyfunction]
fn is_balanced(word: &str) -> PyResult<bool> {
    let w = Word::from_digits(word, 2).map_err(value_err)?;
    Ok(words::is_balanced(&w).map_err(runtime_err)?.balanced)
}

/// Rows `(n, log_norm, r_n, residual)`. `rho` defaults to the lower JSR bound.
#[pyfunction]
#[pyo3(signature = (family, word_spec, n = 2000, rho = None, depth = 10))]
fn growth(family: &PyFamily, word_spec: &str, n: u64, rho: Option<&str>, depth: usize) -> PyResult<Vec<(u64, f64, f64, f64)>> {
    let rho = match rho {
        Some(r) => BigReal::parse_decimal(r, digits_to_bits(50)).map_err(value_err)?,
        None => bounds_of(&family.inner, depth, 4_000_000, 50)?.lower,
    };
    let rep = jsr::growth_report(&family.inner, &source(word_spec)?, n, &rho).map_err(runtime_err)?;
    Ok(rep.records.iter().map(|r| (r.n, r.log_norm, r.r_n, r.residual)).collect())
}

/// One of `consistent-with-strong`, `consistent-with-weak-only`, `inconsistent`.
#[pyfunction]
#[pyo3(signature = (family, word_spec, n = 2000, depth = 10))]
fn extremality(family: &PyFamily, word_spec: &str, n: u64, depth: usize) -> PyResult<String> {
    let b = bounds_of(&family.inner, depth, 4_000_000, 50)?;
    let e = jsr::extremality_diagnostic(&family.inner, &source(word_spec)?, n, &b).map_err(runtime_err)?;
    Ok(e.verdict.as_str().to_string())
}

fn word_over(s: &str, m: u32) -> PyResult<Word> {
    Word::parse(s, m).map_err(value_err)
}

#[pyfunction]
fn encode(word: &str, m: u32) -> PyResult<String> {
    Ok(lift::encode_finite(&word_over(word, m)?, m).map_err(runtime_err)?.to_string())
}

#[pyfunction]
fn decode(word: &str, m: u32) -> PyResult<String> {
    Ok(lift::decode_finite(&word_over(word, 2)?, m).map_err(runtime_err)?.to_string())
}

#[pyfunction]
#[pyo3(signature = (word, m, block = None))]
fn survives(word: &str, m: usize, block: Option<usize>) -> PyResult<bool> {
    if m == 0 {
        return Err(value_err("m must be at least 1"));
    }
    Ok(lift::survives(&word_over(word, 2)?, m, block.unwrap_or(m.saturating_sub(1))))
}

#[pyfunction]
#[pyo3(signature = (word_spec, m, probe = 256))]
fn normalize_phase(word_spec: &str, m: usize, probe: usize) -> PyResult<u64> {
    lift::normalize_phase(&source(word_spec)?, m, probe).map_err(runtime_err)
}

#[pyfunction]
fn verify_feqt(family: &PyFamily, word: &str) -> PyResult<bool> {
    let w = word_over(word, family.inner.len() as u32)?;
    lift::verify_feqt(&family.inner, &w).map_err(runtime_err)
}

#[pyfunction]
fn verify_encode_product(family: &PyFamily, word: &str) -> PyResult<bool> {
    let w = word_over(word, family.inner.len() as u32)?;
    lift::verify_encode_product(&family.inner, &w).map_err(runtime_err)
}

/// `(all_passed, [(id, name, passed), ...])`.
#[pyfunction]
#[pyo3(signature = (kind = "quick"))]
fn run_suite(kind: &str) -> PyResult<(bool, Vec<(u32, String, bool)>)> {
    let k: SuiteKind = kind.parse().map_err(value_err)?;
    let r = suite::run_suite(k);
    Ok((r.passed, r.criteria.into_iter().map(|c| (c.id, c.name, c.passed)).collect()))
}

#[pymodule]
#[pyo3(name = "extremal")]
fn extremal_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFamily>()?;
    m.add_class::<PyJsrBounds>()?;
    m.add_function(wrap_pyfunction!(constant, m)?)?;
    m.add_function(wrap_pyfunction!(word, m)?)?;
    m.add_function(wrap_pyfunction!(complexity, m)?)?;
    m.add_function(wrap_pyfunction!(is_balanced, m)?)?;
    m.add_function(wrap_pyfunction!(jsr_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(growth, m)?)?;
    m.add_function(wrap_pyfunction!(extremality, m)?)?;
    m.add_function(wrap_pyfunction!(encode, m)?)?;
    m.add_function(wrap_pyfunction!(decode, m)?)?;
    m.add_function(wrap_pyfunction!(survives, m)?)?;
    m.add_function(wrap_pyfunction!(normalize_phase, m)?)?;
    m.add_function(wrap_pyfunction!(verify_feqt, m)?)?;
    m.add_function(wrap_pyfunction!(verify_encode_product, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
