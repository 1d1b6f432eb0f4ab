//! Informationally complete POVMs and their canonical dual frames.
//!
//! For an IC POVM `{P_i}` the canonical dual is `P~_i = F^+(P_i)` with
//! `F(X) = sum_i Tr[X P_i] P_i`, so that `X = sum_i Tr[X P_i] P~_i` for every
//! operator `X`. The frame constant used in the decoupling chain is
//! `K = max_i ||P~_i||_1^2`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::channel::{matrix_from_rows, matrix_to_rows, weyl_operator};
use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::{self, cplx, real, CMatrix, CVector};
use crate::qalg::{PureState, TensorLayout};
use crate::sample;
use crate::scalar::Real;

/// Tolerance on `sum_i P_i = I`.
pub const POVM_SUM_TOL: f64 = 1e-9;

/// Cutoff for operator-space rank and frame pseudo-inversion.
pub const FRAME_CUTOFF: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Povm<T: Real = f64> {
    elements: Vec<CMatrix<T>>,
    dim: usize,
}

impl<T: Real> Povm<T> {
    pub fn new(elements: Vec<CMatrix<T>>) -> Result<Self> {
        let dim = elements
            .first()
            .ok_or_else(|| Error::InvalidPovm("no elements".into()))?
            .nrows();
        for (i, p) in elements.iter().enumerate() {
            if p.shape() != (dim, dim) {
                return Err(dim_mismatch(format!("POVM element {i} is not {dim}x{dim}")));
            }
            if linalg::hermiticity_defect(p) > T::state_tol() {
                return Err(Error::InvalidPovm(format!("element {i} is not Hermitian")));
            }
            let min = linalg::herm_eigenvalues(p).last().copied().unwrap_or(T::zero());
            if min < -T::state_tol() {
                return Err(Error::InvalidPovm(format!("element {i} has negative eigenvalue {min}")));
            }
        }
        let sum = elements.iter().fold(CMatrix::zeros(dim, dim), |a, p| a + p);
        let defect = linalg::max_abs(&(sum - linalg::identity::<T>(dim)));
        if defect > T::tol(POVM_SUM_TOL) {
            return Err(Error::InvalidPovm(format!("elements sum to identity only within {defect}")));
        }
        Ok(Self { elements: elements.iter().map(linalg::hermitian_part).collect(), dim })
    }

    /// Rank-one POVM `{|v_i><v_i|}` from the rows of an isometry `V`
    /// (`V^dagger V = I`), with `|v_i> = conj(row_i(V))`.
    pub fn from_isometry_rows(v: &CMatrix<T>) -> Result<Self> {
        let d = v.ncols();
        let elements = (0..v.nrows())
            .map(|i| CMatrix::from_fn(d, d, |a, b| v[(i, a)].conj() * v[(i, b)]))
            .collect();
        Self::new(elements)
    }

    pub fn elements(&self) -> &[CMatrix<T>] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Outcome probabilities `Tr[rho P_i]`.
    pub fn probabilities(&self, rho: &CMatrix<T>) -> Vec<T> {
        self.elements.iter().map(|p| linalg::trace_of_product(rho, p).re).collect()
    }

    /// Reorders elements by `perm` (a permutation of `0..len`).
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self { elements: perm.iter().map(|&i| self.elements[i].clone()).collect(), dim: self.dim }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IcReport {
    pub rank: usize,
    pub required: usize,
    pub informationally_complete: bool,
}

/// Rank of the Gram matrix `Tr[P_i P_j]`, compared with `d^2`.
pub fn is_informationally_complete<T: Real>(povm: &Povm<T>) -> IcReport {
    let n = povm.len();
    let gram = CMatrix::from_fn(n, n, |i, j| linalg::hs_inner(&povm.elements[i], &povm.elements[j]));
    let cut = T::tol(FRAME_CUTOFF);
    let rank = linalg::herm_eigenvalues(&gram).into_iter().filter(|&l| l > cut).count();
    let required = povm.dim * povm.dim;
    IcReport { rank, required, informationally_complete: rank == required }
}

/// Hermitian dual set of an IC POVM together with its frame constant.
#[derive(Debug, Clone, PartialEq)]
pub struct DualFrame<T: Real = f64> {
    duals: Vec<CMatrix<T>>,
    k_constant: T,
}

impl<T: Real> DualFrame<T> {
    pub fn new(duals: Vec<CMatrix<T>>) -> Self {
        let k_constant = max_trace_norm(&duals).powi(2);
        Self { duals, k_constant }
    }

    pub fn duals(&self) -> &[CMatrix<T>] {
        &self.duals
    }

    pub fn k_constant(&self) -> T {
        self.k_constant
    }

    pub fn trace_norms(&self) -> Vec<T> {
        self.duals.iter().map(linalg::hermitian_trace_norm).collect()
    }

    pub fn max_hermiticity_defect(&self) -> T {
        self.duals
            .iter()
            .map(linalg::hermiticity_defect)
            .fold(T::zero(), |a, b| a.max(b))
    }
}

fn max_trace_norm<T: Real>(duals: &[CMatrix<T>]) -> T {
    duals
        .iter()
        .map(linalg::hermitian_trace_norm)
        .fold(T::zero(), |a, b| a.max(b))
}

/// `K = max_i ||P~_i||_1^2`
pub fn k_constant<T: Real>(dual: &DualFrame<T>) -> T {
    max_trace_norm(&dual.duals).powi(2)
}

/// Canonical dual via the pseudo-inverse of the frame superoperator.
pub fn canonical_dual<T: Real>(povm: &Povm<T>) -> Result<DualFrame<T>> {
    let ic = is_informationally_complete(povm);
    if !ic.informationally_complete {
        return Err(Error::NotInformationallyComplete { rank: ic.rank, required: ic.required });
    }
    let d = povm.dim;
    let vecs: Vec<CVector<T>> = povm.elements.iter().map(linalg::vec_row_major).collect();
    // F = sum_i |P_i>><<P_i| on row-major vectorizations (P_i Hermitian)
    let frame = vecs.iter().fold(CMatrix::zeros(d * d, d * d), |acc, v| acc + v * v.adjoint());
    let cut = T::tol(FRAME_CUTOFF);
    let pinv = linalg::herm_apply(&frame, |l| if l > cut { T::one() / l } else { T::zero() });
    let duals = vecs
        .iter()
        .map(|v| linalg::hermitian_part(&linalg::unvec_row_major(&(&pinv * v), d, d)))
        .collect();
    Ok(DualFrame::new(duals))
}

/// `sum_i Tr[X P_i] P~_i`
pub fn reconstruct<T: Real>(x: &CMatrix<T>, povm: &Povm<T>, dual: &DualFrame<T>) -> Result<CMatrix<T>> {
    if povm.len() != dual.duals.len() {
        return Err(dim_mismatch(format!(
            "{} POVM elements but {} duals",
            povm.len(),
            dual.duals.len()
        )));
    }
    if x.shape() != (povm.dim, povm.dim) {
        return Err(dim_mismatch("operator does not match the POVM dimension"));
    }
    Ok(povm
        .elements
        .iter()
        .zip(&dual.duals)
        .fold(CMatrix::zeros(povm.dim, povm.dim), |acc, (p, q)| {
            acc + q * linalg::trace_of_product(x, p)
        }))
}

/// Largest entry of `reconstruct(X) - X`.
pub fn reconstruction_residual<T: Real>(x: &CMatrix<T>, povm: &Povm<T>, dual: &DualFrame<T>) -> Result<T> {
    Ok(linalg::max_abs(&(reconstruct(x, povm, dual)? - x)))
}

fn projector<T: Real>(v: &CVector<T>) -> CMatrix<T> {
    let n = v.norm();
    let u = v / real(n);
    linalg::outer(&u, &u)
}

fn bloch_projector<T: Real>(n: [f64; 3]) -> CMatrix<T> {
    let [i, x, y, z] = linalg::paulis::<T>();
    (i + x * real(T::lit(n[0])) + y * real(T::lit(n[1])) + z * real(T::lit(n[2]))) * real(T::lit(0.5))
}

/// Qubit tetrahedron SIC `{Π_i / 2}`, Bloch vectors `(±1,±1,±1)/√3` with even parity.
pub fn qubit_tetrahedron_sic<T: Real>() -> Povm<T> {
    let s = 1.0 / 3f64.sqrt();
    let dirs = [[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]];
    Povm::new(dirs.iter().map(|&n| bloch_projector::<T>(n) * real(T::lit(0.5))).collect())
        .expect("tetrahedron resolves the identity")
}

/// Weyl-Heisenberg orbit `{(1/d) D_ab |φ><φ| D_ab^dagger}`; sums to `I` for any `φ`.
pub fn weyl_heisenberg_povm<T: Real>(fiducial: &PureState<T>) -> Result<Povm<T>> {
    let d = fiducial.vector().len();
    let phi = projector(fiducial.vector());
    let w = real(T::lit(1.0 / d as f64));
    let mut elements = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            let dab = weyl_operator::<T>(d, a, b);
            elements.push(&dab * &phi * dab.adjoint() * w);
        }
    }
    Povm::new(elements)
}

/// Hesse SIC fiducial `(0, 1, -1)/√2` for `d = 3`
/// (Renes, Blume-Kohout, Scott, Caves, J. Math. Phys. 45, 2171 (2004)).
pub fn sic_fiducial_d3<T: Real>() -> PureState<T> {
    let s = 1.0 / 2f64.sqrt();
    PureState::new(
        CVector::from_vec(vec![cplx(0.0, 0.0), cplx(s, 0.0), cplx(-s, 0.0)]),
        TensorLayout::single(3),
    )
    .expect("unit vector")
}

/// SIC POVM for `d = 2` (tetrahedron) or `d = 3` (Hesse).
pub fn sic_povm<T: Real>(d: usize) -> Result<Povm<T>> {
    match d {
        2 => Ok(qubit_tetrahedron_sic()),
        3 => weyl_heisenberg_povm(&sic_fiducial_d3()),
        _ => Err(Error::InvalidParameter(format!("no SIC fiducial embedded for d = {d}"))),
    }
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| !n.is_multiple_of(k))
}

/// Complete set of `d+1` mutually unbiased bases for prime `d`, each
/// projector weighted `1/(d+1)`. For `d = 2` these are the eigenbases of X, Y, Z.
pub fn mub_povm<T: Real>(d: usize) -> Result<Povm<T>> {
    if !is_prime(d) {
        return Err(Error::InvalidParameter(format!("MUB construction needs prime d, got {d}")));
    }
    let mut vectors: Vec<CVector<T>> = (0..d).map(|i| linalg::basis_ket(d, i)).collect();
    if d == 2 {
        let s = 1.0 / 2f64.sqrt();
        for v in [[s, 0.0, s, 0.0], [s, 0.0, -s, 0.0], [s, 0.0, 0.0, s], [s, 0.0, 0.0, -s]] {
            vectors.push(CVector::from_vec(vec![cplx(v[0], v[1]), cplx(v[2], v[3])]));
        }
    } else {
        // |v_j^k> = d^{-1/2} sum_n ω^{k n^2 + j n} |n>
        let omega = 2.0 * std::f64::consts::PI / d as f64;
        let amp = 1.0 / (d as f64).sqrt();
        for k in 0..d {
            for j in 0..d {
                vectors.push(CVector::from_fn(d, |n, _| {
                    let ph = omega * ((k * n * n + j * n) % d) as f64;
                    cplx(amp * ph.cos(), amp * ph.sin())
                }));
            }
        }
    }
    let w = real(T::lit(1.0 / (d + 1) as f64));
    Povm::new(vectors.iter().map(|v| projector(v) * w).collect())
}

/// The 24-element single-qubit Clifford group modulo phases, generated by H and S.
pub fn qubit_clifford_group<T: Real>() -> Vec<CMatrix<T>> {
    let s = 1.0 / 2f64.sqrt();
    let h = CMatrix::from_row_slice(2, 2, &[cplx::<T>(s, 0.), cplx(s, 0.), cplx(s, 0.), cplx(-s, 0.)]);
    let p = CMatrix::from_row_slice(2, 2, &[cplx::<T>(1., 0.), cplx(0., 0.), cplx(0., 0.), cplx(0., 1.)]);
    let key = |u: &CMatrix<T>| -> Vec<i64> {
        // fix the global phase by making the first nonzero entry real positive
        let pivot = *u
            .iter()
            .find(|z| z.norm_sqr() > T::lit(1e-12))
            .expect("unitary is nonzero");
        let ph = pivot.conj() / real(pivot.norm_sqr().sqrt());
        u.iter()
            .flat_map(|z| {
                let w = *z * ph;
                [(w.re.as_f64() * 1e6).round() as i64, (w.im.as_f64() * 1e6).round() as i64]
            })
            .collect()
    };
    let mut group = vec![linalg::identity::<T>(2)];
    let mut seen: HashSet<Vec<i64>> = group.iter().map(key).collect();
    let mut frontier = group.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for g in &frontier {
            for gen in [&h, &p] {
                let u = gen * g;
                if seen.insert(key(&u)) {
                    next.push(u);
                }
            }
        }
        group.extend(next.iter().cloned());
        frontier = next;
    }
    group
}

/// Frame potential `(1/N^2) sum_ij |Tr[U_i^dagger U_j]|^4`; equals 2 exactly
/// for a unitary 2-design in dimension `d >= 2`.
pub fn frame_potential<T: Real>(design: &[CMatrix<T>]) -> T {
    let n = design.len();
    let mut acc = T::zero();
    for a in design {
        for b in design {
            acc += linalg::hs_inner(a, b).norm_sqr().powi(2);
        }
    }
    acc / T::lit((n * n) as f64)
}

/// Orbit POVM `{(d/N) U_g |φ><φ| U_g^dagger}` of a unitary 2-design.
/// The canonical dual of each element is `(d+1) U_g φ U_g^dagger - I`.
pub fn covariant_design_povm<T: Real>(design: &[CMatrix<T>], fiducial: &PureState<T>) -> Result<Povm<T>> {
    let d = fiducial.vector().len();
    if design.is_empty() || design.iter().any(|u| u.shape() != (d, d)) {
        return Err(dim_mismatch("design elements must be d x d unitaries"));
    }
    if d >= 2 {
        let fp = frame_potential(design);
        if (fp - T::lit(2.0)).abs() > T::tol(1e-9) {
            return Err(Error::InvalidParameter(format!(
                "set fails the unitary 2-design moment test (frame potential {fp}, expected 2)"
            )));
        }
    }
    let phi = projector(fiducial.vector());
    let w = real(T::lit(d as f64 / design.len() as f64));
    Povm::new(design.iter().map(|u| u * &phi * u.adjoint() * w).collect())
}

/// A fixed generic fiducial for Weyl-Heisenberg frames where no SIC is embedded.
pub fn generic_fiducial<T: Real>(d: usize) -> PureState<T> {
    sample::random_pure_state(TensorLayout::single(d), &mut sample::rng_from_seed(0x5EED_F1D0 + d as u64))
}

/// IC POVM used on environments of dimension `d`: trivial for `d = 1`,
/// SIC for `d = 2, 3`, otherwise the Weyl-Heisenberg orbit of a fixed generic fiducial.
pub fn default_ic_povm<T: Real>(d: usize) -> Result<Povm<T>> {
    match d {
        0 => Err(Error::InvalidParameter("dimension must be positive".into())),
        1 => Povm::new(vec![linalg::identity(1)]),
        2 | 3 => sic_povm(d),
        _ => weyl_heisenberg_povm(&generic_fiducial(d)),
    }
}

/// Named frames offered for reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameKind {
    Sic,
    Mub,
    Clifford,
    WeylHeisenberg,
    Default,
}

impl std::str::FromStr for FrameKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sic" => Ok(Self::Sic),
            "mub" => Ok(Self::Mub),
            "clifford" | "design" => Ok(Self::Clifford),
            "wh" | "weyl_heisenberg" => Ok(Self::WeylHeisenberg),
            "default" => Ok(Self::Default),
            other => Err(Error::InvalidParameter(format!("unknown frame '{other}'"))),
        }
    }
}

impl std::fmt::Display for FrameKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Self::Sic => "sic",
            Self::Mub => "mub",
            Self::Clifford => "clifford",
            Self::WeylHeisenberg => "weyl_heisenberg",
            Self::Default => "default",
        };
        f.write_str(s)
    }
}

pub fn named_frame<T: Real>(kind: FrameKind, d: usize) -> Result<Povm<T>> {
    match kind {
        FrameKind::Sic => sic_povm(d),
        FrameKind::Mub => mub_povm(d),
        FrameKind::Clifford if d == 2 => {
            covariant_design_povm(&qubit_clifford_group(), &PureState::basis(TensorLayout::single(2), 0))
        }
        FrameKind::Clifford => Err(Error::InvalidParameter("Clifford 2-design shipped for d = 2 only".into())),
        FrameKind::WeylHeisenberg => weyl_heisenberg_povm(&generic_fiducial(d)),
        FrameKind::Default => default_ic_povm(d),
    }
}

/// Summary of one frame: IC rank, dual norms, `K`, reconstruction residual.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameReport {
    pub frame: String,
    pub dim: usize,
    pub num_elements: usize,
    pub rank: usize,
    pub informationally_complete: bool,
    pub max_dual_trace_norm: f64,
    pub min_dual_trace_norm: f64,
    pub k_constant: f64,
    pub dual_hermiticity_defect: f64,
    pub reconstruction_residual: f64,
}

/// Reconstruction residual is the maximum over `samples` random complex matrices.
pub fn frame_report<T: Real>(name: &str, povm: &Povm<T>, samples: usize, seed: u64) -> Result<FrameReport> {
    let ic = is_informationally_complete(povm);
    let dual = canonical_dual(povm)?;
    let norms = dual.trace_norms();
    let mut rng = sample::rng_from_seed(seed);
    let mut residual = T::zero();
    for _ in 0..samples {
        let x = sample::ginibre_matrix::<T, _>(povm.dim(), povm.dim(), &mut rng);
        residual = residual.max(reconstruction_residual(&x, povm, &dual)?);
    }
    Ok(FrameReport {
        frame: name.to_string(),
        dim: povm.dim(),
        num_elements: povm.len(),
        rank: ic.rank,
        informationally_complete: ic.informationally_complete,
        max_dual_trace_norm: norms.iter().fold(T::zero(), |a, &b| a.max(b)).as_f64(),
        min_dual_trace_norm: norms.iter().fold(T::infinity(), |a, &b| a.min(b)).as_f64(),
        k_constant: dual.k_constant().as_f64(),
        dual_hermiticity_defect: dual.max_hermiticity_defect().as_f64(),
        reconstruction_residual: residual.as_f64(),
    })
}

/// On-disk POVM: `{ "dim": d, "elements": [matrix, ...] }` with the channel
/// file's matrix encoding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PovmSpec {
    pub dim: usize,
    pub elements: Vec<Vec<Vec<[f64; 2]>>>,
}

impl PovmSpec {
    pub fn to_povm<T: Real>(&self) -> Result<Povm<T>> {
        if self.elements.is_empty() {
            return Err(Error::Schema { path: "elements".into(), message: "no elements".into() });
        }
        let elements = self
            .elements
            .iter()
            .enumerate()
            .map(|(i, rows)| matrix_from_rows(rows, self.dim, self.dim, &format!("elements[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        Povm::new(elements)
    }

    pub fn from_povm<T: Real>(p: &Povm<T>) -> Self {
        Self { dim: p.dim, elements: p.elements.iter().map(matrix_to_rows).collect() }
    }
}

pub fn povm_from_json<T: Real>(text: &str) -> Result<Povm<T>> {
    serde_json::from_str::<PovmSpec>(text)?.to_povm()
}

pub fn povm_to_json<T: Real>(p: &Povm<T>) -> String {
    serde_json::to_string_pretty(&PovmSpec::from_povm(p)).expect("plain data serializes")
}
