//! Riemannian conjugate-gradient minimization on the complex Stiefel manifold
//! `{V : V^dagger V = I}` with polar retraction and multistart.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, real, CMatrix};
use crate::sample;
use crate::scalar::Real;

/// Restarted-search settings.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchOptions {
    /// Ensemble size for EoF, number of POVM outcomes for `C`, Kraus rank for recovery.
    /// Defaults: `min(rank^2, 16)`, `d_B^2` and `d d'`.
    pub size: Option<usize>,
    /// Number of starting points, including the deterministic one.
    pub restarts: usize,
    pub seed: u64,
    /// Stop once the objective improves by less than this over `window` iterations.
    pub tol: f64,
    pub window: usize,
    pub max_iter: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { size: None, restarts: 8, seed: 0, tol: 1e-9, window: 50, max_iter: 5000 }
    }
}

impl SearchOptions {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }
}

/// Diagnostics of a restarted search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchStats {
    pub restarts: usize,
    pub iterations: usize,
    /// Whether the winning restart met the stopping rule before `max_iter`.
    pub converged: bool,
    /// Worst minus best restart objective.
    pub restart_spread: f64,
}

/// Smooth function of an isometry.
pub(crate) trait Objective<T: Real>: Sync {
    fn value(&self, v: &CMatrix<T>) -> T;

    /// Value and Euclidean gradient with respect to `Re Tr X^dagger Y`.
    fn value_and_grad(&self, v: &CMatrix<T>) -> (T, CMatrix<T>);
}

pub(crate) struct Run<T: Real> {
    pub v: CMatrix<T>,
    pub value: T,
    pub iterations: usize,
    pub converged: bool,
}

fn inner<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    linalg::hs_inner(a, b).re
}

/// Projection onto the tangent space at `v`.
fn project<T: Real>(v: &CMatrix<T>, x: &CMatrix<T>) -> CMatrix<T> {
    let s = v.adjoint() * x;
    x - v * linalg::hermitian_part(&s)
}

/// Polak-Ribiere+ conjugate gradient with Armijo backtracking.
pub(crate) fn minimize<T: Real>(obj: &impl Objective<T>, start: CMatrix<T>, opts: &SearchOptions) -> Run<T> {
    let armijo = T::lit(1e-4);
    let tol = T::tol(opts.tol);
    let mut v = start;
    let (mut f, eg) = obj.value_and_grad(&v);
    let mut g = project(&v, &eg);
    let mut d = -g.clone();
    let mut step = T::one();
    let mut history = vec![f];
    let mut steepest = true;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < opts.max_iter {
        iterations += 1;
        let gg = inner(&g, &g);
        if gg.sqrt() < T::tol(1e-13) {
            converged = true;
            break;
        }
        let mut slope = inner(&g, &d);
        if slope >= T::zero() {
            d = -g.clone();
            slope = -gg;
            steepest = true;
        }
        let mut t = step;
        let mut accepted = None;
        for _ in 0..60 {
            let cand = linalg::polar_isometry(&(&v + &d * real(t)));
            if obj.value(&cand) <= f + armijo * t * slope {
                accepted = Some(cand);
                break;
            }
            t *= T::lit(0.5);
        }
        let Some(nv) = accepted else {
            if steepest {
                converged = true;
                break;
            }
            d = -g.clone();
            steepest = true;
            continue;
        };
        step = (t * T::lit(2.0)).min(T::lit(1e3));
        let (nf, eg) = obj.value_and_grad(&nv);
        let ng = project(&nv, &eg);
        let beta = (inner(&ng, &(&ng - project(&nv, &g))) / gg).max(T::zero());
        d = -&ng + project(&nv, &d) * real(beta);
        steepest = beta == T::zero();
        v = nv;
        g = ng;
        f = nf;
        history.push(f);
        if history.len() > opts.window && history[history.len() - 1 - opts.window] - f < tol {
            converged = true;
            break;
        }
    }
    Run { v, value: f, iterations, converged }
}

/// Restart 0 begins at `first`; restart `j > 0` at a Haar isometry seeded by
/// `(opts.seed, j)`. Restarts run in parallel and the lowest value wins, ties
/// going to the lower index, so the result equals the serial one.
pub(crate) fn multistart<T: Real>(
    obj: &impl Objective<T>,
    first: CMatrix<T>,
    opts: &SearchOptions,
) -> Result<(Run<T>, SearchStats)> {
    if opts.restarts == 0 {
        return Err(Error::InvalidParameter("at least one restart is required".into()));
    }
    let (rows, cols) = first.shape();
    let runs: Vec<Run<T>> = (0..opts.restarts)
        .into_par_iter()
        .map(|j| {
            let start = if j == 0 {
                first.clone()
            } else {
                let mut rng = sample::rng_from_seed(sample::derive_seed(opts.seed, j as u64));
                sample::haar_isometry(rows, cols, &mut rng)
            };
            minimize(obj, start, opts)
        })
        .collect();
    let iterations = runs.iter().map(|r| r.iterations).sum();
    let worst = runs.iter().fold(T::zero() - T::infinity(), |a, r| a.max(r.value));
    let best = runs
        .into_iter()
        .reduce(|a, b| if b.value < a.value { b } else { a })
        .expect("at least one restart");
    let stats = SearchStats {
        restarts: opts.restarts,
        iterations,
        converged: best.converged,
        restart_spread: (worst - best.value).as_f64(),
    };
    Ok((best, stats))
}

/// `[I; 0]` pushed off by a small seeded perturbation.
pub(crate) fn perturbed_canonical<T: Real>(rows: usize, cols: usize, seed: u64) -> CMatrix<T> {
    let canonical = CMatrix::from_fn(rows, cols, |i, k| if i == k { real(T::one()) } else { real(T::zero()) });
    let mut rng = sample::rng_from_seed(seed);
    let kick = sample::ginibre_matrix::<T, _>(rows, cols, &mut rng) * real(T::lit(0.05));
    linalg::polar_isometry(&(canonical + kick))
}
