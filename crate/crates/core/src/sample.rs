//! Seeded random unitaries, states and channels.

use nalgebra::{Complex, ComplexField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{self, real, CMatrix, CVector};
use crate::qalg::{DensityMatrix, PureState, TensorLayout};
use crate::scalar::Real;

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent per-item seed derived from a base seed (splitmix64 finalizer).
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(T::lit(re), T::lit(im))
}

/// Matrix of i.i.d. standard complex Gaussians.
pub fn ginibre_matrix<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix<T> {
    let mut m = CMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = gaussian(rng);
        }
    }
    m
}

/// Haar-distributed unitary (QR of a Ginibre matrix with the phases of R removed).
pub fn haar_unitary<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix<T> {
    let qr = ginibre_matrix::<T, _>(dim, dim, rng).qr();
    let q = qr.q();
    let r = qr.r();
    let mut u = q;
    for j in 0..dim {
        let d = r[(j, j)];
        let n = d.modulus();
        let phase = if n > T::zero() { d / real(n) } else { real(T::one()) };
        for i in 0..dim {
            u[(i, j)] *= phase;
        }
    }
    u
}

/// Haar-random isometry `rows x cols` (`rows >= cols`).
pub fn haar_isometry<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix<T> {
    let u = haar_unitary::<T, _>(rows, rng);
    u.columns(0, cols).into_owned()
}

pub fn random_pure_state<T: Real, R: Rng + ?Sized>(layout: TensorLayout, rng: &mut R) -> PureState<T> {
    let v = CVector::from_fn(layout.total(), |_, _| gaussian::<T, _>(rng));
    PureState::normalized(v, layout).expect("Gaussian vector is nonzero")
}

/// Rank-`k` induced-measure state `G G^dagger / Tr` with `G` of shape `dim x k`.
pub fn random_rank_k_state<T: Real, R: Rng + ?Sized>(
    layout: TensorLayout,
    k: usize,
    rng: &mut R,
) -> DensityMatrix<T> {
    let g = ginibre_matrix::<T, _>(layout.total(), k.max(1), rng);
    DensityMatrix::from_raw(&g * g.adjoint(), layout)
}

/// Full-rank Ginibre (Hilbert-Schmidt measure) state.
pub fn ginibre_state<T: Real, R: Rng + ?Sized>(layout: TensorLayout, rng: &mut R) -> DensityMatrix<T> {
    let d = layout.total();
    random_rank_k_state(layout, d, rng)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleKind {
    HaarUnitary,
    GinibreState,
    PureState,
    RankKState(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Sample<T: Real = f64> {
    Unitary(CMatrix<T>),
    Mixed(DensityMatrix<T>),
    Pure(PureState<T>),
}

/// Deterministic draw of `kind` on a `dim`-dimensional space.
pub fn sample<T: Real>(kind: SampleKind, dim: usize, seed: u64) -> Sample<T> {
    let mut rng = rng_from_seed(seed);
    let layout = TensorLayout::single(dim.max(1));
    match kind {
        SampleKind::HaarUnitary => Sample::Unitary(haar_unitary(dim, &mut rng)),
        SampleKind::GinibreState => Sample::Mixed(ginibre_state(layout, &mut rng)),
        SampleKind::PureState => Sample::Pure(random_pure_state(layout, &mut rng)),
        SampleKind::RankKState(k) => Sample::Mixed(random_rank_k_state(layout, k, &mut rng)),
    }
}

/// Unitarity defect `|| U^dagger U - I ||_max`.
pub fn unitarity_defect<T: Real>(u: &CMatrix<T>) -> T {
    linalg::isometry_defect(u)
}
