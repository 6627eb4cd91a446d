//! Python bindings for `qtrellis`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use qtrellis::code::{builtin_names, load_code, parse_code, LoadedCode};
use qtrellis::decoder::{
    css_dml_decode, dml_decode, ndml_decode, ChannelModel, DecodeMode, DecodeResult, MarginalModel,
};
use qtrellis::oracle;
use qtrellis::pauli::{BinaryVector, PauliVector};
use qtrellis::sim::{run_monte_carlo, Decoder, SimConfig, DEFAULT_TRIALS};
use qtrellis::trellis::{
    build_joint_trellis, build_min_trellis_tof, build_multigoal_trellis, from_json, to_dot,
    to_json, Method, Trellis,
};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

pub fn parse_mode(s: &str) -> Result<DecodeMode, String> {
    match s {
        "ndml" => Ok(DecodeMode::Ndml),
        "dml" => Ok(DecodeMode::Dml),
        "css" => Ok(DecodeMode::Css),
        _ => Err(format!("unknown mode {s:?}")),
    }
}

pub fn parse_marginal(s: &str) -> Result<MarginalModel, String> {
    match s {
        "independent" => Ok(MarginalModel::Independent),
        "exact" => Ok(MarginalModel::Exact),
        _ => Err(format!("unknown marginal model {s:?}")),
    }
}

fn bits(s: &str) -> PyResult<BinaryVector> {
    s.parse().map_err(err)
}

fn pauli(s: &str) -> PyResult<PauliVector> {
    s.parse().map_err(err)
}

/// A stabilizer code, optionally with its CSS structure.
#[pyclass(name = "Code", module = "pyqtrellis", frozen)]
pub struct PyCode {
    inner: LoadedCode,
}

#[pymethods]
impl PyCode {
    /// Built-in code name or path to a code file.
    #[staticmethod]
    fn load(name: &str) -> PyResult<Self> {
        Ok(Self {
            inner: load_code(name).map_err(err)?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (text, name = "custom"))]
    fn parse(text: &str, name: &str) -> PyResult<Self> {
        Ok(Self {
            inner: parse_code(name, text).map_err(err)?,
        })
    }

    #[getter]
    fn name(&self) -> &str {
        &self.inner.name
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.code.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.code.k()
    }

    #[getter]
    fn is_css(&self) -> bool {
        self.inner.css.is_some()
    }

    #[getter]
    fn stabilizers(&self) -> Vec<String> {
        self.inner
            .code
            .stab_gens()
            .iter()
            .map(ToString::to_string)
            .collect()
    }

    /// Logical operators in pairs: x0, z0, x1, z1, ...
    #[getter]
    fn logicals(&self) -> Vec<String> {
        self.inner
            .code
            .logical_gens()
            .iter()
            .map(ToString::to_string)
            .collect()
    }

    fn syndrome(&self, error: &str) -> PyResult<String> {
        Ok(self
            .inner
            .code
            .syndrome(&pauli(error)?)
            .map_err(err)?
            .to_string())
    }

    /// `(X-check bits, Z-check bits)` of a CSS code.
    fn css_syndrome(&self, error: &str) -> PyResult<(String, String)> {
        let css = self
            .inner
            .css
            .as_ref()
            .ok_or_else(|| err("not a CSS code"))?;
        let e = pauli(error)?;
        Ok((
            css.syndrome_x(&e).map_err(err)?.to_string(),
            css.syndrome_z(&e).map_err(err)?.to_string(),
        ))
    }

    fn in_stabilizer(&self, error: &str) -> PyResult<bool> {
        Ok(self.inner.code.in_stabilizer(&pauli(error)?))
    }

    fn logical_label(&self, error: &str) -> PyResult<u64> {
        Ok(self.inner.code.logical_label(&pauli(error)?))
    }

    fn __repr__(&self) -> String {
        format!(
            "Code({:?}, n={}, k={})",
            self.inner.name,
            self.n(),
            self.k()
        )
    }
}

#[pyclass(name = "Trellis", module = "pyqtrellis", frozen)]
pub struct PyTrellis {
    inner: Trellis,
}

#[pymethods]
impl PyTrellis {
    /// `kind` is one of `normalizer`, `multigoal`, `x`, `z`.
    #[staticmethod]
    #[pyo3(signature = (code, kind = "multigoal", method = "extended_shannon"))]
    fn build(code: &PyCode, kind: &str, method: &str) -> PyResult<Self> {
        let m: Method = method.parse().map_err(err)?;
        let css = || code.inner.css.as_ref().ok_or_else(|| err("not a CSS code"));
        let inner = match kind {
            "normalizer" => build_min_trellis_tof(&code.inner.code),
            "multigoal" => build_multigoal_trellis(&code.inner.code, m),
            "x" => build_joint_trellis(&css()?.joint_x(), m),
            "z" => build_joint_trellis(&css()?.joint_z(), m),
            _ => return Err(err(format!("unknown trellis kind {kind:?}"))),
        }
        .map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: from_json(text).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        to_json(&self.inner)
    }

    fn to_dot(&self) -> String {
        to_dot(&self.inner)
    }

    #[getter]
    fn num_vertices(&self) -> usize {
        self.inner.num_vertices()
    }

    #[getter]
    fn num_edges(&self) -> usize {
        self.inner.num_edges()
    }

    #[getter]
    fn num_goals(&self) -> usize {
        self.inner.num_goals()
    }

    #[getter]
    fn viterbi_cost(&self) -> i64 {
        self.inner.complexity().viterbi_cost
    }

    #[getter]
    fn state_profile(&self) -> Vec<usize> {
        self.inner.complexity().state_profile
    }

    #[getter]
    fn edge_profile(&self) -> Vec<usize> {
        self.inner.complexity().edge_profile
    }

    fn is_isomorphic(&self, other: &PyTrellis) -> bool {
        self.inner.is_isomorphic(&other.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "Trellis(|V|={}, |E|={})",
            self.num_vertices(),
            self.num_edges()
        )
    }
}

#[pyclass(name = "DecodeResult", module = "pyqtrellis", frozen, get_all)]
pub struct PyDecodeResult {
    mode: String,
    error_estimate: String,
    log_prob: f64,
    winning_logical: Option<u64>,
    coset_log_probs: Vec<f64>,
    multiplications: u64,
    additions: u64,
}

impl From<DecodeResult> for PyDecodeResult {
    fn from(r: DecodeResult) -> Self {
        Self {
            mode: r.mode.to_string(),
            error_estimate: r.error_estimate.to_string(),
            log_prob: r.log_prob,
            winning_logical: r.winning_logical,
            coset_log_probs: r.coset_log_probs,
            multiplications: r.ops.multiplications,
            additions: r.ops.additions,
        }
    }
}

#[pymethods]
impl PyDecodeResult {
    fn __repr__(&self) -> String {
        format!(
            "DecodeResult({}, {:?}, log_prob={})",
            self.mode, self.error_estimate, self.log_prob
        )
    }
}

/// In css mode the syndrome is `"<X-check bits>/<Z-check bits>"`.
#[pyfunction]
#[pyo3(signature = (code, syndrome, p, mode = "dml", marginal = "independent"))]
fn decode(
    code: &PyCode,
    syndrome: &str,
    p: f64,
    mode: &str,
    marginal: &str,
) -> PyResult<PyDecodeResult> {
    let ch = ChannelModel::depolarizing(p).map_err(err)?;
    let c = &code.inner.code;
    let r = match parse_mode(mode).map_err(err)? {
        DecodeMode::Ndml => {
            let t = build_min_trellis_tof(c).map_err(err)?;
            ndml_decode(&t, c, &bits(syndrome)?, &ch).map_err(err)?
        }
        DecodeMode::Dml => {
            let t = build_multigoal_trellis(c, Method::ExtendedShannon).map_err(err)?;
            dml_decode(&t, c, &bits(syndrome)?, &ch).map_err(err)?
        }
        DecodeMode::Css => {
            let css = code
                .inner
                .css
                .as_ref()
                .ok_or_else(|| err("not a CSS code"))?;
            let (sx, sz) = syndrome
                .split_once('/')
                .ok_or_else(|| err("css mode expects <X bits>/<Z bits>"))?;
            let tx = build_joint_trellis(&css.joint_x(), Method::ExtendedShannon).map_err(err)?;
            let tz = build_joint_trellis(&css.joint_z(), Method::ExtendedShannon).map_err(err)?;
            let m = parse_marginal(marginal).map_err(err)?;
            css_dml_decode(&tx, &tz, css, &bits(sx)?, &bits(sz)?, &ch, m).map_err(err)?
        }
    };
    Ok(r.into())
}

/// Coset probabilities by exhaustive enumeration.
#[pyfunction]
fn brute_force_dml(code: &PyCode, syndrome: &str, p: f64) -> PyResult<Vec<f64>> {
    let ch = ChannelModel::depolarizing(p).map_err(err)?;
    oracle::brute_dml(&code.inner.code, &bits(syndrome)?, &ch).map_err(err)
}

/// Returns one dict per (mode, p) with the CSV columns as keys.
#[pyfunction]
#[pyo3(signature = (code, p_values, mode = "dml", trials = DEFAULT_TRIALS, seed = 0, threads = None, marginal = "independent"))]
#[allow(clippy::too_many_arguments)]
fn simulate<'py>(
    py: Python<'py>,
    code: &PyCode,
    p_values: Vec<f64>,
    mode: &str,
    trials: u64,
    seed: u64,
    threads: Option<usize>,
    marginal: &str,
) -> PyResult<Vec<Bound<'py, pyo3::types::PyDict>>> {
    let d = Decoder::build(
        &code.inner,
        parse_mode(mode).map_err(err)?,
        parse_marginal(marginal).map_err(err)?,
    )
    .map_err(err)?;
    let cfg = SimConfig {
        p_values,
        trials,
        seed,
        threads,
    };
    let name = code.inner.name.clone();
    let report = py
        .detach(|| run_monte_carlo(&name, &d, &cfg))
        .map_err(err)?;
    report
        .rows
        .iter()
        .map(|r| {
            let row = pyo3::types::PyDict::new(py);
            row.set_item("code", &r.code)?;
            row.set_item("mode", &r.mode)?;
            row.set_item("p", r.p)?;
            row.set_item("trials", r.trials)?;
            row.set_item("failures", r.failures)?;
            row.set_item("rate", r.rate)?;
            row.set_item("ci_lo", r.ci_lo)?;
            row.set_item("ci_hi", r.ci_hi)?;
            Ok(row)
        })
        .collect()
}

#[pyfunction]
fn builtin_codes() -> Vec<&'static str> {
    builtin_names()
}

#[pymodule]
fn pyqtrellis(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCode>()?;
    m.add_class::<PyTrellis>()?;
    m.add_class::<PyDecodeResult>()?;
    m.add_function(wrap_pyfunction!(decode, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_dml, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(builtin_codes, m)?)?;
    Ok(())
}
