//! Bipartite entanglement and correlation measures.
//!
//! Entanglement of formation and one-way classical correlations are both
//! minimizations of an ensemble-averaged entropy `sum_i p_i S(omega_i / p_i)`
//! over complex isometries `V` (`V^dagger V = I`), with
//! `omega_i = sum_ab V_ia conj(V_ib) B_ab` for a fixed family of blocks `B_ab`:
//!
//! * EoF: `B_kl = Tr_B[sqrt(l_k l_l) |e_k><e_l|]` from the spectral
//!   decomposition, so the rows of `V` mix eigenvectors into an ensemble;
//! * `C^{B->A}`: `B_ab = <a|_B sigma |b>_B` acting on A, and the rows of `V`
//!   define a rank-one POVM on B.
//!
//! The search is a Riemannian conjugate-gradient descent with polar
//! retraction, restarted from seeded random isometries in parallel.

use serde::Serialize;

use crate::error::{dim_mismatch, Error, Result};
use crate::icpovm::Povm;
use crate::linalg::{self, real, CMatrix, CVector};
use crate::qalg::{self, Bipartition, DensityMatrix, PureState, TensorLayout};
use crate::optim::{self, Objective};
use crate::sample;
use crate::scalar::Real;
use crate::channel::{self, KrausChannel};

/// Tolerance on ensemble weights summing to one.
pub const WEIGHT_TOL: f64 = 1e-10;

pub use crate::optim::{SearchOptions, SearchStats};

/// Pure-state ensemble `{p_i, |phi_i>}` on a bipartite space.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleDecomposition<T: Real = f64> {
    weights: Vec<T>,
    states: Vec<PureState<T>>,
}

impl<T: Real> EnsembleDecomposition<T> {
    pub fn new(weights: Vec<T>, states: Vec<PureState<T>>) -> Result<Self> {
        if weights.len() != states.len() || weights.is_empty() {
            return Err(Error::InvalidState("ensemble needs one weight per state".into()));
        }
        if weights.iter().any(|&w| w < T::zero()) {
            return Err(Error::InvalidState("negative ensemble weight".into()));
        }
        let total = weights.iter().fold(T::zero(), |a, &w| a + w);
        if (total - T::one()).abs() > T::tol(WEIGHT_TOL) {
            return Err(Error::InvalidState(format!("ensemble weights sum to {total}")));
        }
        let layout = states[0].layout().clone();
        if states.iter().any(|s| s.layout() != &layout) {
            return Err(dim_mismatch("ensemble states live on different spaces"));
        }
        Ok(Self { weights, states })
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn states(&self) -> &[PureState<T>] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `sum_i p_i |phi_i><phi_i|`
    pub fn reconstruct(&self) -> DensityMatrix<T> {
        let n = self.states[0].vector().len();
        let m = self
            .weights
            .iter()
            .zip(&self.states)
            .fold(CMatrix::zeros(n, n), |acc, (&p, s)| acc + linalg::outer(s.vector(), s.vector()) * real(p));
        DensityMatrix::from_raw(m, self.states[0].layout().clone())
    }

    pub fn certificate(&self) -> EnsembleCertificate {
        EnsembleCertificate {
            weights: self.weights.iter().map(|w| w.as_f64()).collect(),
            states: self
                .states
                .iter()
                .map(|s| s.vector().iter().map(|z| [z.re.as_f64(), z.im.as_f64()]).collect())
                .collect(),
        }
    }
}

/// Serializable form of an ensemble.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleCertificate {
    pub weights: Vec<f64>,
    pub states: Vec<Vec<[f64; 2]>>,
}

/// A POVM on B together with the value `S(A) - sum_i p_i S(A_i)` it attains.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementStrategy<T: Real = f64> {
    pub povm: Povm<T>,
    pub achieved_value: T,
}

impl<T: Real> MeasurementStrategy<T> {
    pub fn certificate(&self) -> MeasurementCertificate {
        MeasurementCertificate {
            achieved_value: self.achieved_value.as_f64(),
            elements: self.povm.elements().iter().map(crate::channel::matrix_to_rows).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasurementCertificate {
    pub achieved_value: f64,
    pub elements: Vec<Vec<Vec<[f64; 2]>>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EofResult<T: Real = f64> {
    /// Upper bound on the entanglement of formation.
    pub value: T,
    pub ensemble: EnsembleDecomposition<T>,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationResult<T: Real = f64> {
    /// Lower bound on `C^{B->A}`.
    pub value: T,
    pub strategy: MeasurementStrategy<T>,
    pub stats: SearchStats,
}

/// Hashing lower bound and EoF upper bound on distillable entanglement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntanglementInterval {
    pub lower: f64,
    pub upper: f64,
}

/// Reorders `sigma` so that all factors of A precede those of B.
fn regroup<T: Real>(sigma: &DensityMatrix<T>, cut: &Bipartition) -> Result<(CMatrix<T>, usize, usize)> {
    let dims = sigma.layout().dims();
    let mut all: Vec<usize> = cut.a().iter().chain(cut.b()).copied().collect();
    all.sort_unstable();
    if all != (0..dims.len()).collect::<Vec<_>>() {
        return Err(Error::InvalidLayout(format!(
            "cut {:?}|{:?} does not partition {} factors",
            cut.a(),
            cut.b(),
            dims.len()
        )));
    }
    let order: Vec<usize> = cut.a().iter().chain(cut.b()).copied().collect();
    let mut strides = vec![1; dims.len()];
    for f in (0..dims.len().saturating_sub(1)).rev() {
        strides[f] = strides[f + 1] * dims[f + 1];
    }
    let n = sigma.dim();
    let perm: Vec<usize> = (0..n)
        .map(|mut i| {
            let mut old = 0;
            for &f in order.iter().rev() {
                old += (i % dims[f]) * strides[f];
                i /= dims[f];
            }
            old
        })
        .collect();
    let da: usize = cut.a().iter().map(|&f| dims[f]).product();
    let m = sigma.matrix();
    Ok((CMatrix::from_fn(n, n, |i, j| m[(perm[i], perm[j])]), da, n / da))
}

/// `E(phi) = S(Tr_B phi)`.
pub fn pure_entanglement<T: Real>(phi: &PureState<T>, cut: &Bipartition) -> Result<T> {
    let (m, da, _) = regroup(&phi.density(), cut)?;
    let (ra, _) = qalg::partial_trace(&m, &TensorLayout::bipartite(da, m.nrows() / da), &[0])?;
    qalg::hermitian_entropy(&ra)
}

/// `sum_i p_i E(phi_i)`, an upper bound on the EoF of the mixture.
pub fn ensemble_average_entanglement<T: Real>(ens: &EnsembleDecomposition<T>, cut: &Bipartition) -> Result<T> {
    let mut acc = T::zero();
    for (&p, s) in ens.weights.iter().zip(&ens.states) {
        acc += p * pure_entanglement(s, cut)?;
    }
    Ok(acc)
}

/// Blocks and isometry shape of one steering problem.
struct Steering<T: Real> {
    blocks: Vec<CMatrix<T>>,
    r: usize,
}

impl<T: Real> Steering<T> {
    fn block(&self, a: usize, b: usize) -> &CMatrix<T> {
        &self.blocks[a * self.r + b]
    }

    fn omegas(&self, v: &CMatrix<T>) -> Vec<CMatrix<T>> {
        let d = self.blocks[0].nrows();
        (0..v.nrows())
            .map(|i| {
                let mut w = CMatrix::zeros(d, d);
                for a in 0..self.r {
                    for b in 0..self.r {
                        let c = v[(i, a)] * v[(i, b)].conj();
                        if c.norm_sqr() > T::zero() {
                            w += self.block(a, b) * c;
                        }
                    }
                }
                linalg::hermitian_part(&w)
            })
            .collect()
    }

    /// `-Tr w log2 w + p log2 p`
    fn h(spectrum: &[T]) -> T {
        let p = spectrum.iter().fold(T::zero(), |a, &l| a + l.max(T::zero()));
        let xlx = |x: T| if x > T::zero() { x * x.log2() } else { T::zero() };
        spectrum.iter().fold(xlx(p), |acc, &l| acc - xlx(l))
    }

}

impl<T: Real> Objective<T> for Steering<T> {
    fn value(&self, v: &CMatrix<T>) -> T {
        self.omegas(v)
            .iter()
            .map(|w| Steering::h(&linalg::herm_eigenvalues(w)))
            .fold(T::zero(), |a, b| a + b)
    }

    fn value_and_grad(&self, v: &CMatrix<T>) -> (T, CMatrix<T>) {
        let floor = T::lit(1e-30);
        let mut total = T::zero();
        let mut grad = CMatrix::zeros(v.nrows(), v.ncols());
        for (i, w) in self.omegas(v).iter().enumerate() {
            let eig = linalg::herm_eig(w);
            total += Steering::h(&eig.values);
            let p = eig.values.iter().fold(T::zero(), |a, &l| a + l.max(T::zero()));
            if p <= floor {
                continue;
            }
            // G = log2(p) I - log2(w)
            let lp = p.log2();
            let logs: Vec<T> = eig.values.iter().map(|&l| lp - l.max(floor).log2()).collect();
            let g = &eig.vectors
                * CMatrix::from_diagonal(&CVector::from_iterator(logs.len(), logs.iter().map(|&x| real(x))))
                * eig.vectors.adjoint();
            for b in 0..self.r {
                let mut acc = real(T::zero());
                for a in 0..self.r {
                    acc += v[(i, a)] * linalg::trace_of_product(self.block(a, b), &g);
                }
                grad[(i, b)] = acc * real(T::lit(2.0));
            }
        }
        (total, grad)
    }
}

fn search<T: Real>(problem: &Steering<T>, size: usize, opts: &SearchOptions) -> Result<(optim::Run<T>, SearchStats)> {
    if size < problem.r {
        return Err(Error::InvalidParameter(format!("size {size} is below the required minimum {}", problem.r)));
    }
    // [I; 0] is a critical point of the objective, hence the perturbation
    let first = optim::perturbed_canonical(size, problem.r, sample::derive_seed(opts.seed, 0));
    optim::multistart(problem, first, opts)
}

/// Numerical entanglement of formation with the ensemble realizing it.
pub fn eof<T: Real>(sigma: &DensityMatrix<T>, cut: &Bipartition, opts: &SearchOptions) -> Result<EofResult<T>> {
    let (m, da, db) = regroup(sigma, cut)?;
    let layout = TensorLayout::bipartite(da, db);
    let eig = linalg::herm_eig(&m);
    let cut_off = T::eig_cutoff();
    let support: Vec<usize> = (0..eig.values.len()).filter(|&k| eig.values[k] > cut_off).collect();
    let r = support.len().max(1);
    let kets: Vec<CVector<T>> = support
        .iter()
        .map(|&k| eig.vectors.column(k) * real(eig.values[k].sqrt()))
        .collect();
    let size = opts.size.unwrap_or((r * r).min(16)).max(r);

    let mut blocks = Vec::with_capacity(r * r);
    for a in 0..r {
        for b in 0..r {
            let (blk, _) = qalg::partial_trace(&linalg::outer(&kets[a], &kets[b]), &layout, &[0])?;
            blocks.push(blk);
        }
    }
    let problem = Steering { blocks, r };
    let (run, stats) = search(&problem, size, opts)?;

    let mut weights = Vec::new();
    let mut states = Vec::new();
    for i in 0..size {
        let ket = (0..r).fold(CVector::zeros(da * db), |acc, k| acc + &kets[k] * run.v[(i, k)]);
        let p = ket.norm_squared();
        if p > T::tol(1e-15) {
            weights.push(p);
            states.push(PureState::normalized(ket, layout.clone())?);
        }
    }
    let total = weights.iter().fold(T::zero(), |a, &w| a + w);
    for w in &mut weights {
        *w /= total;
    }
    Ok(EofResult { value: run.value.max(T::zero()), ensemble: EnsembleDecomposition::new(weights, states)?, stats })
}

/// `S(A) - sum_i p_i S(A_i)` for a measurement `povm` on B.
pub fn conditional_value<T: Real>(sigma: &DensityMatrix<T>, cut: &Bipartition, povm: &Povm<T>) -> Result<T> {
    let (m, da, db) = regroup(sigma, cut)?;
    if povm.dim() != db {
        return Err(dim_mismatch(format!("POVM of dimension {} on a B side of dimension {db}", povm.dim())));
    }
    let layout = TensorLayout::bipartite(da, db);
    let (ra, _) = qalg::partial_trace(&m, &layout, &[0])?;
    let mut value = qalg::hermitian_entropy(&ra)?;
    for p in povm.elements() {
        let lifted = linalg::kron(&linalg::identity(da), p);
        let (w, _) = qalg::partial_trace(&(&m * lifted), &layout, &[0])?;
        value -= Steering::<T>::h(&linalg::herm_eigenvalues(&linalg::hermitian_part(&w)));
    }
    Ok(value)
}

/// One-way classical correlations `C^{B->A}` maximized over rank-one POVMs on B.
pub fn classical_correlations<T: Real>(
    sigma: &DensityMatrix<T>,
    cut: &Bipartition,
    opts: &SearchOptions,
) -> Result<CorrelationResult<T>> {
    let (m, da, db) = regroup(sigma, cut)?;
    let layout = TensorLayout::bipartite(da, db);
    let (ra, _) = qalg::partial_trace(&m, &layout, &[0])?;
    let sa = qalg::hermitian_entropy(&ra)?;
    let mut blocks = Vec::with_capacity(db * db);
    for a in 0..db {
        for b in 0..db {
            blocks.push(CMatrix::from_fn(da, da, |x, y| m[(x * db + a, y * db + b)]));
        }
    }
    let size = opts.size.unwrap_or(db * db).max(db);
    let problem = Steering { blocks, r: db };
    let (run, stats) = search(&problem, size, opts)?;
    let rows: Vec<usize> = (0..size)
        .filter(|&i| (0..db).map(|k| run.v[(i, k)].norm_sqr()).fold(T::zero(), |a, b| a + b) > T::tol(1e-15))
        .collect();
    let v = CMatrix::from_fn(rows.len(), db, |i, k| run.v[(rows[i], k)]);
    let povm = Povm::from_isometry_rows(&v)?;
    let value = (sa - run.value).max(T::zero());
    Ok(CorrelationResult { value, strategy: MeasurementStrategy { povm, achieved_value: value }, stats })
}

fn require_two_qubits<T: Real>(sigma: &DensityMatrix<T>) -> Result<()> {
    if sigma.layout().dims() != [2, 2] {
        return Err(dim_mismatch(format!("two-qubit state required, got layout {:?}", sigma.layout().dims())));
    }
    Ok(())
}

/// Concurrence `max(0, l1 - l2 - l3 - l4)`, with `l_i` the singular values of
/// `W^T (Y⊗Y) W` for any square-root factor `sigma = W W^dagger`.
pub fn wootters_concurrence<T: Real>(sigma: &DensityMatrix<T>) -> Result<T> {
    require_two_qubits(sigma)?;
    let eig = linalg::herm_eig(sigma.matrix());
    // eigenvalues under the cutoff are noise, and the square root would magnify them
    let weight = |v: T| if v > T::eig_cutoff() { v.sqrt() } else { T::zero() };
    let w = CMatrix::from_fn(4, 4, |i, k| eig.vectors[(i, k)] * real(weight(eig.values[k])));
    let y = &linalg::paulis::<T>()[2];
    let yy = linalg::kron(y, y);
    let tau = w.transpose() * yy * w;
    let s = linalg::singular_values(&tau);
    Ok((s[0] - s[1] - s[2] - s[3]).max(T::zero()))
}

/// Closed-form two-qubit entanglement of formation.
pub fn wootters_eof<T: Real>(sigma: &DensityMatrix<T>) -> Result<T> {
    let c = wootters_concurrence(sigma)?.min(T::one());
    let x = (T::one() + (T::one() - c * c).max(T::zero()).sqrt()) / T::lit(2.0);
    Ok(qalg::binary_entropy(x))
}

/// `log2 ||sigma^{T_B}||_1`.
pub fn log_negativity<T: Real>(sigma: &DensityMatrix<T>, cut: &Bipartition) -> Result<T> {
    let pt = qalg::partial_transpose(sigma, cut)?;
    Ok(linalg::hermitian_trace_norm(&pt).log2().max(T::zero()))
}

fn is_two_qubit_cut<T: Real>(sigma: &DensityMatrix<T>, cut: &Bipartition) -> bool {
    let dims = sigma.layout().dims();
    dims == [2, 2] && cut.a().len() == 1 && cut.b().len() == 1
}

/// EoF that uses the closed form for two qubits and the numerical search otherwise.
pub fn best_eof<T: Real>(sigma: &DensityMatrix<T>, cut: &Bipartition, opts: &SearchOptions) -> Result<T> {
    if is_two_qubit_cut(sigma, cut) {
        wootters_eof(sigma)
    } else {
        Ok(eof(sigma, cut, opts)?.value)
    }
}

/// `[max(0, S(B) - S(AB)), EoF]`.
pub fn distillable_interval<T: Real>(
    sigma: &DensityMatrix<T>,
    cut: &Bipartition,
    opts: &SearchOptions,
) -> Result<EntanglementInterval> {
    let (m, da, db) = regroup(sigma, cut)?;
    let (rb, _) = qalg::partial_trace(&m, &TensorLayout::bipartite(da, db), &[1])?;
    let hashing = (qalg::hermitian_entropy(&rb)? - qalg::von_neumann_entropy(sigma)).max(T::zero());
    let upper = best_eof(sigma, cut, opts)?;
    Ok(EntanglementInterval { lower: hashing.as_f64(), upper: upper.max(hashing).as_f64() })
}

/// Components of the monogamy balance `C^{E'->R}(rho^{RE'}) + E_f(rho^{RQ'}) - S(rho^Q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonogamyReport {
    pub classical: f64,
    pub eof: f64,
    pub input_entropy: f64,
    /// `classical + eof - input_entropy`
    pub residual: f64,
}

pub fn koashi_winter<T: Real>(
    rho: &DensityMatrix<T>,
    ch: &KrausChannel<T>,
    opts: &SearchOptions,
) -> Result<MonogamyReport> {
    let tri = channel::global_state(rho, ch)?;
    let cut = Bipartition::two_party();
    let c = classical_correlations(&tri.rho_re, &cut, opts)?.value;
    let e = best_eof(&tri.rho_rq, &cut, opts)?;
    let s = tri.input_entropy;
    Ok(MonogamyReport {
        classical: c.as_f64(),
        eof: e.as_f64(),
        input_entropy: s.as_f64(),
        residual: (c + e - s).as_f64(),
    })
}

/// Signed residual `C^{E'->R}(rho^{RE'}) + E_f(rho^{RQ'}) - S(rho^Q)`.
pub fn koashi_winter_residual<T: Real>(
    rho: &DensityMatrix<T>,
    ch: &KrausChannel<T>,
    opts: &SearchOptions,
) -> Result<T> {
    Ok(T::lit(koashi_winter(rho, ch, opts)?.residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{channel_family, ChannelFamily};
    use crate::linalg::cplx;

    fn two_qubit(v: [f64; 4]) -> PureState {
        PureState::normalized(
            CVector::from_iterator(4, v.iter().map(|&x| cplx(x, 0.0))),
            TensorLayout::bipartite(2, 2),
        )
        .unwrap()
    }

    fn isotropic(p: f64) -> DensityMatrix {
        let phi = two_qubit([1.0, 0.0, 0.0, 1.0]).density();
        let mixed = DensityMatrix::<f64>::maximally_mixed(TensorLayout::bipartite(2, 2));
        DensityMatrix::new(
            phi.matrix() * real(1.0 - p) + mixed.matrix() * real(p),
            TensorLayout::bipartite(2, 2),
        )
        .unwrap()
    }

    fn quick() -> SearchOptions {
        SearchOptions { restarts: 4, ..SearchOptions::with_seed(11) }
    }

    #[test]
    fn pure_entanglement_examples() {
        let cut = Bipartition::two_party();
        assert!(pure_entanglement(&two_qubit([1.0, 0.0, 0.0, 0.0]), &cut).unwrap().abs() < 1e-12);
        assert!((pure_entanglement(&two_qubit([1.0, 0.0, 0.0, 1.0]), &cut).unwrap() - 1.0).abs() < 1e-12);
        let s = pure_entanglement(&two_qubit([0.75f64.sqrt(), 0.0, 0.0, 0.5]), &cut).unwrap();
        assert!((s - 0.811278).abs() < 1e-6);
    }

    #[test]
    fn regroup_handles_reordered_cuts() {
        let psi = two_qubit([0.6, 0.0, 0.0, 0.8]);
        let layout = TensorLayout::new(vec![2, 2, 3]).unwrap();
        let big = psi.tensor(&PureState::basis(TensorLayout::single(3), 1));
        let big = PureState::new(big.vector().clone(), layout.clone()).unwrap();
        let cut = Bipartition::new(&layout, &[1]).unwrap();
        assert!((pure_entanglement(&big, &cut).unwrap() - qalg::binary_entropy(0.36)).abs() < 1e-12);
    }

    #[test]
    fn ensemble_examples() {
        let cut = Bipartition::two_party();
        let prod = EnsembleDecomposition::new(
            vec![0.3, 0.7],
            vec![two_qubit([1.0, 0.0, 0.0, 0.0]), two_qubit([0.0, 0.0, 0.0, 1.0])],
        )
        .unwrap();
        assert!(ensemble_average_entanglement(&prod, &cut).unwrap().abs() < 1e-12);
        assert!(EnsembleDecomposition::new(vec![0.3, 0.3], prod.states().to_vec()).is_err());
        let bell = two_qubit([1.0, 0.0, 0.0, 1.0]);
        let single = EnsembleDecomposition::new(vec![1.0], vec![bell.clone()]).unwrap();
        assert!((ensemble_average_entanglement(&single, &cut).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn wootters_examples() {
        let bell = two_qubit([1.0, 0.0, 0.0, 1.0]).density();
        assert!((wootters_eof(&bell).unwrap() - 1.0).abs() < 1e-12);
        let mixed = DensityMatrix::<f64>::maximally_mixed(TensorLayout::bipartite(2, 2));
        assert!(wootters_eof(&mixed).unwrap().abs() < 1e-12);
        for p in [0.0, 0.1, 0.3, 0.5, 0.8] {
            let c = wootters_concurrence(&isotropic(p)).unwrap();
            assert!((c - (1.0 - 1.5 * p).max(0.0)).abs() < 1e-12, "p={p}");
        }
        assert!(wootters_eof(&DensityMatrix::<f64>::maximally_mixed(TensorLayout::single(4))).is_err());
    }

    #[test]
    fn log_negativity_examples() {
        let cut = Bipartition::two_party();
        let bell = two_qubit([1.0, 0.0, 0.0, 1.0]).density();
        assert!((log_negativity(&bell, &cut).unwrap() - 1.0).abs() < 1e-12);
        assert!(log_negativity(&two_qubit([1.0, 0.0, 0.0, 0.0]).density(), &cut).unwrap().abs() < 1e-12);
        assert!(log_negativity(&isotropic(1.0), &cut).unwrap().abs() < 1e-12);
    }

    #[test]
    fn eof_pure_and_separable() {
        let cut = Bipartition::two_party();
        let psi = two_qubit([0.75f64.sqrt(), 0.0, 0.0, 0.5]);
        let r = eof(&psi.density(), &cut, &quick()).unwrap();
        assert!((r.value - 0.811278).abs() < 1e-6);
        let sep = DensityMatrix::<f64>::diagonal(&[0.5, 0.0, 0.0, 0.5], TensorLayout::bipartite(2, 2)).unwrap();
        let r = eof(&sep, &cut, &quick()).unwrap();
        assert!(r.value < 1e-4, "{}", r.value);
        let back = r.ensemble.reconstruct();
        assert!(linalg::max_abs(&(back.matrix() - sep.matrix())) < 1e-8);
    }

    #[test]
    fn eof_matches_wootters_on_isotropic() {
        let cut = Bipartition::two_party();
        for p in [0.2, 0.5] {
            let s = isotropic(p);
            let r = eof(&s, &cut, &quick()).unwrap();
            let w = wootters_eof(&s).unwrap();
            assert!((r.value - w).abs() < 1e-3, "p={p}: {} vs {w}", r.value);
            let avg = ensemble_average_entanglement(&r.ensemble, &cut).unwrap();
            assert!((avg - r.value).abs() < 1e-8);
        }
    }

    #[test]
    fn classical_correlation_examples() {
        let cut = Bipartition::two_party();
        let bell = two_qubit([1.0, 0.0, 0.0, 1.0]).density();
        let r = classical_correlations(&bell, &cut, &quick()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-6);
        let cq = DensityMatrix::<f64>::diagonal(&[0.5, 0.0, 0.0, 0.5], TensorLayout::bipartite(2, 2)).unwrap();
        let r = classical_correlations(&cq, &cut, &quick()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-6);
        let again = conditional_value(&cq, &cut, &r.strategy.povm).unwrap();
        assert!((again - r.strategy.achieved_value).abs() < 1e-10);
        let prod = isotropic(1.0);
        assert!(classical_correlations(&prod, &cut, &quick()).unwrap().value.abs() < 1e-6);
    }

    #[test]
    fn distillable_interval_examples() {
        let cut = Bipartition::two_party();
        let bell = two_qubit([1.0, 0.0, 0.0, 1.0]).density();
        let i = distillable_interval(&bell, &cut, &quick()).unwrap();
        assert!((i.lower - 1.0).abs() < 1e-12 && (i.upper - 1.0).abs() < 1e-12);
        let i = distillable_interval(&isotropic(1.0), &cut, &quick()).unwrap();
        assert!(i.lower.abs() < 1e-12 && i.upper.abs() < 1e-12);
        let i = distillable_interval(&isotropic(0.2), &cut, &quick()).unwrap();
        assert!(i.lower <= i.upper);
        assert!((i.upper - wootters_eof(&isotropic(0.2)).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn koashi_winter_closed_forms() {
        let rho = DensityMatrix::<f64>::maximally_mixed(TensorLayout::single(2));
        let id = KrausChannel::identity(2);
        assert!(koashi_winter_residual(&rho, &id, &quick()).unwrap().abs() < 1e-9);
        let dep = channel_family::<f64>(&ChannelFamily::Depolarizing { dim: 2, p: 1.0 }).unwrap();
        let r = koashi_winter(&rho, &dep, &quick()).unwrap();
        assert!((r.classical - 1.0).abs() < 1e-6 && r.eof.abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn restarts_are_deterministic() {
        let cut = Bipartition::two_party();
        let s = isotropic(0.3);
        let a = eof(&s, &cut, &quick()).unwrap();
        let b = eof(&s, &cut, &quick()).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }
}
