//! Python bindings for `icc_core`.

use std::collections::{BTreeMap, HashMap};

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyBytes, PyDict};

use icc_core::codec;
use icc_core::oracles::{self, ContainmentVerdict};
use icc_core::schemes;
use icc_core::template::random_template;
use icc_core::{PacketVector, SearchLimits};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Side-information digraph; arc `(u, v)` means receiver `u` holds `x_v`.
#[pyclass(module = "icc_index", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct Digraph {
    inner: icc_core::Digraph,
}

#[pymethods]
impl Digraph {
    #[new]
    fn new(n: usize, arcs: Vec<(usize, usize)>) -> PyResult<Self> {
        icc_core::Digraph::new(n, arcs)
            .map(|inner| Digraph { inner })
            .map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        icc_core::Digraph::from_json(text)
            .map(|inner| Digraph { inner })
            .map_err(err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn arcs(&self) -> Vec<(usize, usize)> {
        self.inner.arcs().collect()
    }

    fn side_info(&self, i: usize) -> PyResult<Vec<usize>> {
        Ok(self
            .inner
            .side_info(i)
            .map_err(err)?
            .iter()
            .copied()
            .collect())
    }

    /// Elementary cycles, plus whether the cap cut the list short.
    #[pyo3(signature = (max_count = 1_000_000))]
    fn enumerate_cycles(&self, max_count: usize) -> (Vec<Vec<usize>>, bool) {
        let e = self.inner.enumerate_cycles(max_count);
        (
            e.cycles.iter().map(|c| c.vertices().to_vec()).collect(),
            e.truncated,
        )
    }

    fn __repr__(&self) -> String {
        format!(
            "Digraph(n={}, arcs={})",
            self.inner.n(),
            self.inner.arc_count()
        )
    }
}

/// Coded symbols: supports and, when encoded from packets, payloads.
#[pyclass(module = "icc_index", frozen, from_py_object)]
#[derive(Clone)]
struct IndexCode {
    inner: icc_core::IndexCode,
}

#[pymethods]
impl IndexCode {
    #[staticmethod]
    fn from_listing(text: &str) -> PyResult<Self> {
        icc_core::IndexCode::from_listing(text)
            .map(|inner| IndexCode { inner })
            .map_err(err)
    }

    fn to_listing(&self) -> String {
        self.inner.to_listing()
    }

    fn supports(&self) -> Vec<Vec<usize>> {
        self.inner
            .supports()
            .into_iter()
            .map(|s| s.into_iter().collect())
            .collect()
    }

    fn payloads<'py>(&self, py: Python<'py>) -> Vec<Option<Bound<'py, PyBytes>>> {
        self.inner
            .symbols
            .iter()
            .map(|s| s.payload.as_deref().map(|p| PyBytes::new(py, p)))
            .collect()
    }

    fn without_symbol(&self, idx: usize) -> PyResult<Self> {
        if idx >= self.inner.len() {
            return Err(err(format!("symbol {idx} out of range")));
        }
        Ok(IndexCode {
            inner: self.inner.without_symbol(idx),
        })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

/// k-ICC template with its canonical labeling (terminals get ids 1..k).
#[pyclass(module = "icc_index", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct IccTemplate {
    inner: icc_core::IccTemplate,
}

impl IccTemplate {
    fn labeling(&self) -> icc_core::Labeling {
        icc_core::Labeling::canonical(&self.inner)
    }
}

#[pymethods]
impl IccTemplate {
    /// `type_ii` and `attach` map ordered pairs `(i, j)` to `n_ij` and
    /// `q_ij`. Without `attach`, every connection lands on position 1.
    #[new]
    #[pyo3(signature = (type_i, type_ii = None, attach = None))]
    fn new(
        type_i: Vec<usize>,
        type_ii: Option<HashMap<(usize, usize), usize>>,
        attach: Option<HashMap<(usize, usize), usize>>,
    ) -> PyResult<Self> {
        let mut t = icc_core::IccTemplate::with_direct_links(type_i);
        if let Some(m) = type_ii {
            t.type_ii = m.into_iter().filter(|&(_, n)| n > 0).collect();
        }
        if let Some(m) = attach {
            t.attach = m.into_iter().collect::<BTreeMap<_, _>>();
        }
        t.validate().map_err(err)?;
        Ok(IccTemplate { inner: t })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let t = icc_core::IccTemplate::from_json(text).map_err(err)?;
        t.validate().map_err(err)?;
        Ok(IccTemplate { inner: t })
    }

    #[staticmethod]
    fn cycle(split: usize, rest: usize) -> PyResult<Self> {
        if split == 0 || rest == 0 {
            return Err(err("both parts of a cycle need a vertex"));
        }
        Ok(IccTemplate {
            inner: icc_core::IccTemplate::cycle(split, rest),
        })
    }

    #[staticmethod]
    fn clique(size: usize) -> PyResult<Self> {
        if size == 0 {
            return Err(err("clique needs a vertex"));
        }
        Ok(IccTemplate {
            inner: icc_core::IccTemplate::clique(size),
        })
    }

    #[staticmethod]
    #[pyo3(signature = (k, seed, max_path_len = 3, density = 0.3))]
    fn random(k: usize, seed: u64, max_path_len: usize, density: f64) -> PyResult<Self> {
        if k == 0 {
            return Err(err("k must be at least 1"));
        }
        Ok(IccTemplate {
            inner: random_template(k, max_path_len, density, seed),
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.vertex_count()
    }

    fn build_digraph(&self) -> PyResult<Digraph> {
        let (g, _) = self.inner.build_digraph().map_err(err)?;
        Ok(Digraph { inner: g })
    }

    fn code_length(&self) -> PyResult<usize> {
        codec::code_length(&self.inner).map_err(err)
    }

    fn xor_op_count(&self, t: usize) -> PyResult<usize> {
        codec::xor_op_count(&self.inner, t).map_err(err)
    }

    /// Supports only when `packets` is omitted; otherwise one `t`-bit
    /// packet per vertex.
    #[pyo3(signature = (packets = None, t = None))]
    fn encode(&self, packets: Option<Vec<Vec<u8>>>, t: Option<usize>) -> PyResult<IndexCode> {
        let l = self.labeling();
        let inner = match packets {
            None => codec::encode_supports(&self.inner, &l).map_err(err)?,
            Some(p) => {
                let bits = t.unwrap_or_else(|| 8 * p.first().map_or(1, Vec::len));
                let x = PacketVector::new(bits, p).map_err(err)?;
                if x.len() != self.inner.vertex_count() {
                    return Err(err(format!(
                        "expected {} packets, got {}",
                        self.inner.vertex_count(),
                        x.len()
                    )));
                }
                codec::encode(&self.inner, &l, &x).map_err(err)?
            }
        };
        Ok(IndexCode { inner })
    }

    /// Recovers `x_receiver` from `code` and the receiver's side packets.
    fn decode<'py>(
        &self,
        py: Python<'py>,
        code: &IndexCode,
        receiver: usize,
        side: HashMap<usize, Vec<u8>>,
    ) -> PyResult<Bound<'py, PyBytes>> {
        let l = self.labeling();
        let bound = codec::bind_listing(&self.inner, &l, &code.inner).map_err(err)?;
        let side: BTreeMap<_, _> = side.into_iter().collect();
        let x = codec::decode_receiver(&self.inner, &l, &bound, receiver, &side).map_err(err)?;
        Ok(PyBytes::new(py, &x))
    }

    /// Code length versus MAIS of the built digraph.
    fn certify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let r = oracles::certify_optimality(&self.inner).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("n", r.n)?;
        d.set_item("k", r.k)?;
        d.set_item("code_length", r.code_length)?;
        d.set_item("mais", r.mais)?;
        d.set_item("optimal", r.is_optimal())?;
        Ok(d)
    }

    /// `None` when cycle enumeration hit its cap.
    fn check_terminal_containment(&self) -> PyResult<Option<bool>> {
        Ok(
            match oracles::check_terminal_containment(&self.inner).map_err(err)? {
                ContainmentVerdict::Holds => Some(true),
                ContainmentVerdict::Violated { .. } => Some(false),
                ContainmentVerdict::Inconclusive => None,
            },
        )
    }

    fn __repr__(&self) -> String {
        format!("IccTemplate({})", self.inner.to_json())
    }
}

/// Receivers that cannot decode (empty when the code is valid).
#[pyfunction]
fn verify_code(g: &Digraph, code: &IndexCode) -> PyResult<Vec<usize>> {
    Ok(oracles::verify_code(&g.inner, &code.inner)
        .map_err(err)?
        .failing())
}

#[pyfunction]
fn mais(g: &Digraph) -> PyResult<usize> {
    oracles::mais(&g.inner).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (g, exact_bound = icc_core::search::DEFAULT_EXACT_BOUND))]
fn compare<'py>(py: Python<'py>, g: &Digraph, exact_bound: usize) -> PyResult<Bound<'py, PyDict>> {
    let r =
        schemes::compare(&g.inner, &SearchLimits::with_exact_bound(exact_bound)).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("n", r.n)?;
    d.set_item("l_cyc", r.l_cyc)?;
    d.set_item("l_cc", r.l_cc)?;
    d.set_item("l_icc", r.l_icc)?;
    d.set_item("mais", r.mais)?;
    d.set_item("optimal", r.optimal)?;
    Ok(d)
}

#[pyfunction]
fn gap_family(k: usize) -> PyResult<Digraph> {
    if k == 0 {
        return Err(err("k must be at least 1"));
    }
    Ok(Digraph {
        inner: schemes::gap_family(k),
    })
}

#[pymodule]
fn icc_index(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Digraph>()?;
    m.add_class::<IndexCode>()?;
    m.add_class::<IccTemplate>()?;
    m.add_function(wrap_pyfunction!(verify_code, m)?)?;
    m.add_function(wrap_pyfunction!(mais, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add_function(wrap_pyfunction!(gap_family, m)?)?;
    Ok(())
}
