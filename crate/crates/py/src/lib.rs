//! Python bindings for btlab.
//!
//! Big integers cross the boundary as Python `int`; reports come back as
//! JSON text with every integer written as a decimal string.

use btlab::adversary::{
    self, default_alpha, default_capacity, default_slack, format_ratio, parse_ratio, AdversaryParams, GameState,
};
use btlab::bounds::{self, BoundQuery};
use btlab::bt::{self, ItemOrder, ReferenceAlgorithm};
use btlab::format;
use btlab::knapsack::{self, Limits, Selector};
use btlab::Error;
use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

create_exception!(btlab_py, BtlabError, PyException);
create_exception!(btlab_py, InfeasibleError, BtlabError);
create_exception!(btlab_py, BudgetError, BtlabError);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Infeasible(_) => InfeasibleError::new_err(e.to_string()),
        Error::Budget { .. } => BudgetError::new_err(e.to_string()),
        Error::Input(_) | Error::Domain(_) => PyValueError::new_err(e.to_string()),
        _ => BtlabError::new_err(e.to_string()),
    }
}

fn selector(indices: Vec<usize>) -> Selector {
    Selector::new(indices)
}

fn indices(s: &Selector) -> Vec<usize> {
    s.indices().to_vec()
}

fn order_by_name(name: &str, items: &[BigInt]) -> PyResult<ItemOrder> {
    match name {
        "listed" => Ok(ItemOrder::Listed(items.to_vec())),
        "ascending" => Ok(ItemOrder::Ascending),
        "descending" => Ok(ItemOrder::Descending),
        other => Err(PyValueError::new_err(format!("unknown order {other:?}"))),
    }
}

/// Positive integer items and a capacity `N`.
#[pyclass(module = "btlab_py", name = "Instance", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyInstance {
    inner: knapsack::Instance,
}

#[pymethods]
impl PyInstance {
    #[new]
    fn new(items: Vec<BigInt>, capacity: BigInt) -> PyResult<Self> {
        knapsack::Instance::new(items, capacity).map(|inner| PyInstance { inner }).map_err(to_py)
    }

    /// Parses an instance document; provenance is dropped.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let (inner, _) = format::read_instance(text).map_err(to_py)?;
        Ok(PyInstance { inner })
    }

    fn to_json(&self) -> String {
        format::write_instance(&self.inner, None)
    }

    #[getter]
    fn items(&self) -> Vec<BigInt> {
        self.inner.items().to_vec()
    }

    #[getter]
    fn capacity(&self) -> BigInt {
        self.inner.capacity().clone()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Instance(n={}, capacity={})", self.inner.len(), self.inner.capacity())
    }

    /// Largest feasible subset sum and every selector reaching it.
    fn optimum(&self, py: Python<'_>) -> PyResult<(BigInt, Vec<Vec<usize>>)> {
        let inner = &self.inner;
        let opt = py.detach(|| knapsack::optimum_bruteforce(inner, &Limits::default())).map_err(to_py)?;
        Ok((opt.value, opt.selectors.iter().map(indices).collect()))
    }

    fn subsets_summing_to(&self, py: Python<'_>, target: BigInt) -> PyResult<Vec<Vec<usize>>> {
        let inner = &self.inner;
        let found = py.detach(|| knapsack::subsets_summing_to(inner, &target, &Limits::default())).map_err(to_py)?;
        Ok(found.iter().map(indices).collect())
    }

    /// Brute-force uniqueness check; returns `(verified, found)`.
    fn certify(&self, py: Python<'_>, designated: Vec<usize>) -> PyResult<(bool, Vec<Vec<usize>>)> {
        let inner = &self.inner;
        let cert = py.detach(|| adversary::certify(inner, &selector(designated), &Limits::default())).map_err(to_py)?;
        Ok((cert.verified, cert.found.iter().map(indices).collect()))
    }

    /// Width of a reference algorithm's tree and its best feasible value.
    #[pyo3(signature = (algorithm = "full_backtrack", cap = None, order = "listed"))]
    fn width(
        &self,
        py: Python<'_>,
        algorithm: &str,
        cap: Option<usize>,
        order: &str,
    ) -> PyResult<(usize, Option<BigInt>)> {
        let inner = &self.inner;
        let alg = ReferenceAlgorithm::by_name(algorithm, cap, order_by_name(order, inner.items())?).map_err(to_py)?;
        py.detach(|| {
            let tree = bt::build_tree(&alg, inner)?;
            let best = bt::best_feasible(&bt::extract_solutions(&tree, inner), inner.capacity());
            Ok((bt::tree_width(&tree), best))
        })
        .map_err(to_py)
    }
}

/// Adversary parameters; rationals are given as strings like `"1/2"`.
#[pyclass(module = "btlab_py", name = "Params", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyParams {
    inner: AdversaryParams,
}

#[pymethods]
impl PyParams {
    #[new]
    #[pyo3(signature = (n, beta = "1/2", gamma = "1/4", alpha = None, capacity = None, slack = None))]
    fn new(
        n: usize,
        beta: &str,
        gamma: &str,
        alpha: Option<&str>,
        capacity: Option<BigInt>,
        slack: Option<BigInt>,
    ) -> PyResult<Self> {
        let beta = parse_ratio(beta).map_err(to_py)?;
        let gamma = parse_ratio(gamma).map_err(to_py)?;
        let alpha = match alpha {
            Some(a) => parse_ratio(a).map_err(to_py)?,
            None => default_alpha(&beta, &gamma)
                .ok_or_else(|| InfeasibleError::new_err("beta < 1 and gamma > 0 violated"))?,
        };
        Ok(PyParams {
            inner: AdversaryParams {
                n,
                beta,
                gamma,
                alpha,
                capacity: capacity.unwrap_or_else(|| default_capacity(n)),
                slack: slack.unwrap_or_else(|| default_slack(n)),
            },
        })
    }

    /// Raises `InfeasibleError` naming the first violated inequality.
    fn check(&self) -> PyResult<()> {
        self.inner.check().map_err(|v| to_py(v.into()))
    }

    fn is_feasible(&self) -> bool {
        self.inner.check().is_ok()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn capacity(&self) -> BigInt {
        self.inner.capacity.clone()
    }

    #[getter]
    fn slack(&self) -> BigInt {
        self.inner.slack.clone()
    }

    #[getter]
    fn picks(&self) -> usize {
        self.inner.picks()
    }

    #[getter]
    fn subset_size(&self) -> usize {
        self.inner.subset_size()
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!(
            "Params(n={}, beta={}, gamma={}, alpha={}, capacity={}, slack={})",
            p.n,
            format_ratio(&p.beta),
            format_ratio(&p.gamma),
            format_ratio(&p.alpha),
            p.capacity,
            p.slack
        )
    }
}

/// A finished Solver/Adversary game.
#[pyclass(module = "btlab_py", name = "Game", frozen)]
struct PyGame {
    state: GameState,
    origin: format::Origin,
}

#[pymethods]
impl PyGame {
    #[getter]
    fn picks(&self) -> Vec<BigInt> {
        self.state.picks().to_vec()
    }

    /// `1` or `2` for the removal rule that forbids `x`, `None` if allowed.
    fn forbidden(&self, x: BigInt) -> Option<u8> {
        self.state.forbidden(&x).map(|r| match r {
            adversary::ForbiddenRule::Difference => 1,
            adversary::ForbiddenRule::Completion => 2,
        })
    }

    /// Completes and certifies every designated subset; returns the report as JSON.
    fn witness(&self, py: Python<'_>) -> PyResult<String> {
        let state = &self.state;
        let report = py.detach(|| adversary::witness_all_q(state)).map_err(to_py)?;
        Ok(format::to_pretty(&format::report_json(&report, state.params(), &self.origin)))
    }

    /// Refutes `width_capped(b)`; returns `(refuted, instance, designated)`.
    fn refute(&self, py: Python<'_>, b: usize) -> PyResult<(bool, PyInstance, Vec<usize>)> {
        let state = &self.state;
        let r = py.detach(|| adversary::refute_capped_solver(state, b)).map_err(to_py)?;
        let designated = indices(&r.construction.designated(state.picks().len()));
        Ok((r.refuted(), PyInstance { inner: r.instance.clone() }, designated))
    }

    fn __repr__(&self) -> String {
        let picks: Vec<String> = self.state.picks().iter().map(ToString::to_string).collect();
        format!("Game(solver={}, picks=[{}])", self.origin.solver, picks.join(", "))
    }
}

/// Plays all rounds with `"smallest"` or `"random"` (seeded).
#[pyfunction]
#[pyo3(signature = (params, solver = "smallest", seed = None))]
fn play_game(py: Python<'_>, params: &PyParams, solver: &str, seed: Option<u64>) -> PyResult<PyGame> {
    let mut s = adversary::solver_by_name(solver, seed.unwrap_or(0)).map_err(to_py)?;
    let p = &params.inner;
    let state = py.detach(|| adversary::play_game(s.as_mut(), p, &Limits::default())).map_err(to_py)?;
    Ok(PyGame { state, origin: format::Origin { solver: s.name().to_string(), seed } })
}

/// `(closed_form, bisection)` for the optimal gamma.
#[pyfunction]
fn optimal_gamma() -> PyResult<(f64, f64)> {
    let g = bounds::optimal_gamma().map_err(to_py)?;
    Ok((g.closed_form, g.numeric))
}

#[pyfunction]
fn optimal_base() -> PyResult<f64> {
    bounds::optimal_base().map_err(to_py)
}

#[pyfunction]
fn f(beta: f64, gamma: f64) -> PyResult<f64> {
    bounds::f(beta, gamma).map_err(to_py)
}

#[pyfunction]
fn g(gamma: f64) -> PyResult<f64> {
    bounds::g(gamma).map_err(to_py)
}

#[pyfunction]
fn g_prime(gamma: f64) -> PyResult<f64> {
    bounds::g_prime(gamma).map_err(to_py)
}

#[pyfunction]
fn binomial_exact(a: u64, b: u64) -> PyResult<BigInt> {
    bounds::binomial_exact(a, b).map_err(to_py)
}

/// CSV for `(beta, gamma, n)` rows; `n` may be `None`.
#[pyfunction]
fn bound_table(rows: Vec<(f64, f64, Option<u64>)>) -> String {
    let queries: Vec<BoundQuery> = rows.into_iter().map(|(beta, gamma, n)| BoundQuery { beta, gamma, n }).collect();
    bounds::render_csv(&bounds::bound_table(&queries), &queries)
}

#[pymodule]
fn btlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("BtlabError", py.get_type::<BtlabError>())?;
    m.add("InfeasibleError", py.get_type::<InfeasibleError>())?;
    m.add("BudgetError", py.get_type::<BudgetError>())?;
    m.add_class::<PyInstance>()?;
    m.add_class::<PyParams>()?;
    m.add_class::<PyGame>()?;
    m.add_function(wrap_pyfunction!(play_game, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_base, m)?)?;
    m.add_function(wrap_pyfunction!(f, m)?)?;
    m.add_function(wrap_pyfunction!(g, m)?)?;
    m.add_function(wrap_pyfunction!(g_prime, m)?)?;
    m.add_function(wrap_pyfunction!(binomial_exact, m)?)?;
    m.add_function(wrap_pyfunction!(bound_table, m)?)?;
    Ok(())
}
