//! Python bindings: machines as classes, checks and games as functions.

use std::collections::HashMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use streamfo_core as core;
use streamfo_core::graph::{build_graph, path_characterization_check};
use streamfo_core::monoid::{check_aperiodic, check_one_bounded, enumerate_monoid, nontrivial_cycle_check, DEFAULT_CAP};
use streamfo_core::{Alphabet, EquivVerdict, Transducer};

fn err(e: core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn show(a: &Alphabet, w: &[usize]) -> String {
    a.render(w)
}

#[pyclass(name = "Sst", frozen)]
struct PySst(core::Sst);

#[pymethods]
impl PySst {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        core::parse_sst(text).map(PySst).map_err(err)
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Self::parse(&text)
    }

    #[getter]
    fn states(&self) -> Vec<String> {
        self.0.states().to_vec()
    }

    #[getter]
    fn vars(&self) -> Vec<String> {
        self.0.vars().to_vec()
    }

    /// Output on `word`, or None outside the domain.
    fn transform(&self, word: &str) -> PyResult<Option<String>> {
        self.0.transform(word).map_err(err)
    }

    /// Flow matrix of `word` as rows of `_`, `0`, `1`, `w` symbols.
    fn matrix(&self, word: &str) -> PyResult<Vec<String>> {
        let w = self.0.input().parse_word(word).map_err(err)?;
        Ok(self.0.matrix_of_string(&w).rows())
    }

    fn monoid_size(&self) -> usize {
        enumerate_monoid(&self.0, DEFAULT_CAP).len()
    }

    /// `(one_bounded, witness)`.
    fn check_one_bounded(&self) -> (bool, Option<String>) {
        let v = check_one_bounded(&self.0);
        (v.one_bounded, v.witness.map(|w| show(self.0.input(), &w)))
    }

    /// `(aperiodic, witness, period)`.
    fn check_aperiodic(&self) -> (bool, Option<String>, Option<usize>) {
        let v = check_aperiodic(&self.0);
        let (w, p) = match v.witness {
            Some(w) => (Some(show(self.0.input(), &w.word)), Some(w.period)),
            None => (None, None),
        };
        (v.aperiodic, w, p)
    }

    /// `(word, r)` of a non-trivial cycle, None when there is none.
    fn nontrivial_cycle(&self) -> PyResult<Option<(String, usize)>> {
        let v = nontrivial_cycle_check(&self.0).map_err(err)?;
        Ok(v.cycle.map(|c| (show(self.0.input(), &c.word), c.r)))
    }

    #[pyo3(signature = (word, show_useless=false))]
    fn graph_dot(&self, word: &str, show_useless: bool) -> PyResult<String> {
        let w = self.0.input().parse_word(word).map_err(err)?;
        let g = build_graph(&self.0, &w).map_err(err)?;
        Ok(g.to_dot(self.0.output_alphabet(), show_useless))
    }

    fn readout(&self, word: &str) -> PyResult<String> {
        let w = self.0.input().parse_word(word).map_err(err)?;
        let g = build_graph(&self.0, &w).map_err(err)?;
        Ok(self.0.output_alphabet().render(&g.readout().map_err(err)?))
    }

    fn pathcheck(&self, word: &str) -> PyResult<bool> {
        let w = self.0.input().parse_word(word).map_err(err)?;
        Ok(path_characterization_check(&self.0, &w).map_err(err)?.ok())
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }
}

#[pyclass(name = "SstLa", frozen)]
struct PySstLa(core::SstLa);

#[pymethods]
impl PySstLa {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        core::parse_sstla(text).map(PySstLa).map_err(err)
    }

    fn transform(&self, word: &str) -> PyResult<Option<String>> {
        self.0.transform(word).map_err(err)
    }

    /// `(state, letter, guard1, guard2, witness)` of overlapping guards.
    fn mutual_exclusive_check(&self) -> Option<(String, String, String, String, String)> {
        let t = &self.0;
        t.mutual_exclusive_check().map(|v| {
            (
                t.states()[v.state].clone(),
                t.input().letter(v.letter).to_string(),
                t.la().states()[v.guards.0].clone(),
                t.la().states()[v.guards.1].clone(),
                show(t.input(), &v.witness),
            )
        })
    }

    fn useful_configs(&self) -> Vec<String> {
        self.0.useful_configs().iter().map(|c| self.0.config_name(c)).collect()
    }

    /// Equivalent SST without lookahead.
    fn eliminate(&self) -> PyResult<PySst> {
        self.0.normalize_star().eliminate_lookahead().map(PySst).map_err(err)
    }
}

#[pyclass(name = "FoTransducer", frozen)]
struct PyFot(core::FoTransducer);

#[pymethods]
impl PyFot {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        core::parse_fot(text).map(PyFot).map_err(err)
    }

    fn transform(&self, word: &str) -> PyResult<Option<String>> {
        self.0.transform(word).map_err(err)
    }

    fn qrank(&self) -> usize {
        self.0.qrank()
    }

    /// `(heads, tails, segments)` with nodes written `pos^copy` and
    /// segments as `(head, tail, word)`.
    fn heads_tails(&self, word: &str, i: usize) -> PyResult<(Vec<String>, Vec<String>, Vec<(String, String, String)>)> {
        let w = self.0.input().parse_word(word).map_err(err)?;
        let r = self.0.heads_tails(&w, i).map_err(err)?;
        let out = self.0.output_alphabet();
        Ok((
            r.heads.iter().map(ToString::to_string).collect(),
            r.tails.iter().map(ToString::to_string).collect(),
            r.segments
                .iter()
                .map(|s| (s.head.to_string(), s.tail.to_string(), out.render(&s.word)))
                .collect(),
        ))
    }
}

/// Same k-type; letters are characters.
#[pyfunction]
fn equiv_k(s1: &str, s2: &str, k: usize) -> PyResult<bool> {
    core::logic::equiv_k_str(s1, s2, k).map_err(err)
}

/// Bounded comparison of two machine texts of any kind; None when equal,
/// else `(input, left, right)` with None for undefined outputs.
#[pyfunction]
#[pyo3(signature = (left, right, max_len=6))]
fn equiv_bounded(left: &str, right: &str, max_len: usize) -> PyResult<Option<(String, Option<String>, Option<String>)>> {
    let l = Transducer::parse(left).map_err(err)?;
    let r = Transducer::parse(right).map_err(err)?;
    let render = |w: Vec<String>| core::alphabet::render_tokens(&w);
    Ok(match core::equiv_bounded(&l, &r, max_len).map_err(err)? {
        EquivVerdict::Equal => None,
        EquivVerdict::Counterexample { input, left, right } => Some((render(input), left.map(render), right.map(render))),
    })
}

/// Evaluate a formula on a word (one letter per character) under a
/// valuation of its free variables (positions from 1).
#[pyfunction]
#[pyo3(signature = (formula, word, valuation=None))]
fn eval_formula(formula: &str, word: &str, valuation: Option<HashMap<String, usize>>) -> PyResult<bool> {
    let f = core::parse_formula(formula).map_err(err)?;
    let s = core::StringModel::from_chars(word);
    core::eval(&f, &s, &valuation.unwrap_or_default()).map_err(err)
}

#[pymodule]
fn streamfo(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySst>()?;
    m.add_class::<PySstLa>()?;
    m.add_class::<PyFot>()?;
    m.add_function(wrap_pyfunction!(equiv_k, m)?)?;
    m.add_function(wrap_pyfunction!(equiv_bounded, m)?)?;
    m.add_function(wrap_pyfunction!(eval_formula, m)?)?;
    Ok(())
}
