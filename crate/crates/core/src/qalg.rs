//! Quantum states on tensor-product spaces and the information quantities
//! defined on them. Entropies are in bits.

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::{self, real, CMatrix, CVector};
use crate::scalar::Real;

/// Ordered subsystem dimensions; factor 0 is the most significant index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TensorLayout {
    local_dims: Vec<usize>,
}

impl TensorLayout {
    pub fn new(local_dims: Vec<usize>) -> Result<Self> {
        if local_dims.is_empty() {
            return Err(Error::InvalidLayout("no factors".into()));
        }
        if local_dims.contains(&0) {
            return Err(Error::InvalidLayout(format!("zero dimension in {local_dims:?}")));
        }
        Ok(Self { local_dims })
    }

    pub fn single(dim: usize) -> Self {
        Self::new(vec![dim]).expect("positive dimension")
    }

    pub fn bipartite(da: usize, db: usize) -> Self {
        Self::new(vec![da, db]).expect("positive dimensions")
    }

    pub fn dims(&self) -> &[usize] {
        &self.local_dims
    }

    pub fn num_factors(&self) -> usize {
        self.local_dims.len()
    }

    pub fn total(&self) -> usize {
        self.local_dims.iter().product()
    }

    pub fn dim_of(&self, factors: &[usize]) -> usize {
        factors.iter().map(|&f| self.local_dims[f]).product()
    }

    pub fn concat(&self, other: &TensorLayout) -> TensorLayout {
        let mut dims = self.local_dims.clone();
        dims.extend_from_slice(&other.local_dims);
        TensorLayout { local_dims: dims }
    }

    fn digits(&self, mut index: usize, out: &mut [usize]) {
        for (slot, &d) in out.iter_mut().zip(&self.local_dims).rev() {
            *slot = index % d;
            index /= d;
        }
    }

    fn index_of(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.local_dims).fold(0, |acc, (&x, &d)| acc * d + x)
    }

    fn check_subset(&self, factors: &[usize]) -> Result<()> {
        if factors.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidLayout(format!(
                "factor indices {factors:?} must be strictly increasing"
            )));
        }
        if let Some(&f) = factors.iter().find(|&&f| f >= self.num_factors()) {
            return Err(Error::InvalidLayout(format!(
                "factor {f} out of range for {} factors",
                self.num_factors()
            )));
        }
        Ok(())
    }
}

/// A split of a layout's factors into parties A and B.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    a: Vec<usize>,
    b: Vec<usize>,
}

impl Bipartition {
    /// Party A holds `a`; party B holds every remaining factor.
    pub fn new(layout: &TensorLayout, a: &[usize]) -> Result<Self> {
        layout.check_subset(a)?;
        let b: Vec<usize> = (0..layout.num_factors()).filter(|f| !a.contains(f)).collect();
        if a.is_empty() || b.is_empty() {
            return Err(Error::InvalidLayout("both sides of a cut must be nonempty".into()));
        }
        Ok(Self { a: a.to_vec(), b })
    }

    /// Factor 0 against factor 1 of a two-factor layout.
    pub fn two_party() -> Self {
        Self { a: vec![0], b: vec![1] }
    }

    pub fn a(&self) -> &[usize] {
        &self.a
    }

    pub fn b(&self) -> &[usize] {
        &self.b
    }

    pub fn swapped(&self) -> Self {
        Self { a: self.b.clone(), b: self.a.clone() }
    }

    fn check(&self, layout: &TensorLayout) -> Result<()> {
        let mut all: Vec<usize> = self.a.iter().chain(&self.b).copied().collect();
        all.sort_unstable();
        if all != (0..layout.num_factors()).collect::<Vec<_>>() {
            return Err(Error::InvalidLayout(format!(
                "cut {:?}|{:?} does not partition {} factors",
                self.a,
                self.b,
                layout.num_factors()
            )));
        }
        Ok(())
    }
}

/// Hermitian, positive semidefinite, unit-trace operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real = f64> {
    matrix: CMatrix<T>,
    layout: TensorLayout,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(matrix: CMatrix<T>, layout: TensorLayout) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() != layout.total() {
            return Err(dim_mismatch(format!(
                "{}x{} matrix for layout {:?}",
                matrix.nrows(),
                matrix.ncols(),
                layout.dims()
            )));
        }
        let tol = T::state_tol();
        let herm = linalg::hermiticity_defect(&matrix);
        if herm > tol {
            return Err(Error::InvalidState(format!("not Hermitian (defect {herm})")));
        }
        let tr = linalg::trace(&matrix).re;
        if (tr - T::one()).abs() > tol {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = linalg::herm_eigenvalues(&matrix).last().copied().unwrap_or(T::zero());
        if min < -tol {
            return Err(Error::InvalidState(format!("negative eigenvalue {min}")));
        }
        Ok(Self { matrix: linalg::hermitian_part(&matrix), layout })
    }

    /// Wraps a matrix known to be a state up to rounding; Hermitizes and
    /// renormalizes the trace.
    pub(crate) fn from_raw(matrix: CMatrix<T>, layout: TensorLayout) -> Self {
        debug_assert_eq!(matrix.nrows(), layout.total());
        let m = linalg::hermitian_part(&matrix);
        let tr = linalg::trace(&m).re;
        let m = if tr > T::zero() { m / real(tr) } else { m };
        Self { matrix: m, layout }
    }

    pub fn maximally_mixed(layout: TensorLayout) -> Self {
        let d = layout.total();
        Self { matrix: linalg::identity::<T>(d) / real(T::lit(d as f64)), layout }
    }

    pub fn diagonal(probs: &[T], layout: TensorLayout) -> Result<Self> {
        let m = CMatrix::from_fn(probs.len(), probs.len(), |i, j| {
            if i == j {
                real(probs[i])
            } else {
                real(T::zero())
            }
        });
        Self::new(m, layout)
    }

    pub fn from_pure(psi: &PureState<T>) -> Self {
        Self { matrix: linalg::outer(&psi.vector, &psi.vector), layout: psi.layout.clone() }
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.matrix
    }

    pub fn layout(&self) -> &TensorLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Same matrix, relabelled factors (total dimension must agree).
    pub fn with_layout(&self, layout: TensorLayout) -> Result<Self> {
        if layout.total() != self.dim() {
            return Err(dim_mismatch("relabelled layout has a different total dimension"));
        }
        Ok(Self { matrix: self.matrix.clone(), layout })
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        linalg::herm_eigenvalues(&self.matrix)
    }

    pub fn rank(&self) -> usize {
        let cut = T::eig_cutoff();
        self.eigenvalues().into_iter().filter(|&l| l > cut).count()
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            matrix: linalg::kron(&self.matrix, &other.matrix),
            layout: self.layout.concat(&other.layout),
        }
    }

    /// Reduced state on `keep` (strictly increasing factor indices).
    pub fn reduce(&self, keep: &[usize]) -> Result<Self> {
        let (m, layout) = partial_trace(&self.matrix, &self.layout, keep)?;
        Ok(Self { matrix: linalg::hermitian_part(&m), layout })
    }
}

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T: Real = f64> {
    vector: CVector<T>,
    layout: TensorLayout,
}

impl<T: Real> PureState<T> {
    pub fn new(vector: CVector<T>, layout: TensorLayout) -> Result<Self> {
        if vector.len() != layout.total() {
            return Err(dim_mismatch(format!(
                "vector of length {} for layout {:?}",
                vector.len(),
                layout.dims()
            )));
        }
        let n = vector.norm();
        if (n - T::one()).abs() > T::state_tol() {
            return Err(Error::InvalidState(format!("vector norm {n} differs from 1")));
        }
        Ok(Self { vector, layout })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(vector: CVector<T>, layout: TensorLayout) -> Result<Self> {
        let n = vector.norm();
        if n <= T::eig_cutoff() {
            return Err(Error::InvalidState("zero vector".into()));
        }
        Self::new(vector / real(n), layout)
    }

    pub fn basis(layout: TensorLayout, index: usize) -> Self {
        let v = linalg::basis_ket(layout.total(), index);
        Self { vector: v, layout }
    }

    pub fn vector(&self) -> &CVector<T> {
        &self.vector
    }

    pub fn layout(&self) -> &TensorLayout {
        &self.layout
    }

    pub fn density(&self) -> DensityMatrix<T> {
        DensityMatrix::from_pure(self)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self { vector: self.vector.kronecker(&other.vector), layout: self.layout.concat(&other.layout) }
    }
}

/// `-sum p log2 p` over entries above the eigenvalue cutoff.
pub fn entropy_of_spectrum<T: Real>(spectrum: &[T]) -> T {
    let cut = T::eig_cutoff();
    spectrum
        .iter()
        .filter(|&&l| l > cut)
        .fold(T::zero(), |acc, &l| acc - l * l.log2())
}

/// Shannon entropy of a probability vector, in bits.
pub fn shannon_entropy<T: Real>(probs: &[T]) -> T {
    entropy_of_spectrum(probs)
}

/// Entropy of a Hermitian PSD matrix; eigenvalues in `[-tol, 0)` are clamped.
pub fn hermitian_entropy<T: Real>(m: &CMatrix<T>) -> Result<T> {
    let ev = linalg::herm_eigenvalues(m);
    if let Some(&min) = ev.last() {
        if min < -T::state_tol() {
            return Err(Error::InvalidState(format!("negative eigenvalue {min}")));
        }
    }
    Ok(entropy_of_spectrum(&ev))
}

pub fn von_neumann_entropy<T: Real>(rho: &DensityMatrix<T>) -> T {
    entropy_of_spectrum(&rho.eigenvalues())
}

/// Binary entropy `h(p)` in bits.
pub fn binary_entropy<T: Real>(p: T) -> T {
    entropy_of_spectrum(&[p, T::one() - p])
}

/// `D(rho||sigma) = Tr[rho log2 rho - rho log2 sigma]`, infinite when the
/// support of `rho` is not contained in that of `sigma`.
pub fn relative_entropy<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    if rho.dim() != sigma.dim() {
        return Err(dim_mismatch("relative entropy of states with different dimensions"));
    }
    relative_entropy_raw(&rho.matrix, &sigma.matrix)
}

pub(crate) fn relative_entropy_raw<T: Real>(rho: &CMatrix<T>, sigma: &CMatrix<T>) -> Result<T> {
    let cut = T::eig_cutoff();
    let s = linalg::herm_eig(sigma);
    // Tr[rho log sigma] = sum_k <s_k|rho|s_k> log lambda_k over the support of sigma;
    // any weight of rho outside the support makes the divergence infinite.
    let mut cross = T::zero();
    let mut outside = T::zero();
    for (k, &lam) in s.values.iter().enumerate() {
        let v = s.vectors.column(k);
        let w = (v.adjoint() * rho * v)[(0, 0)].re;
        if lam > cut {
            cross += w * lam.log2();
        } else {
            outside += w;
        }
    }
    if outside > T::tol(1e-10) {
        return Ok(T::infinity());
    }
    let neg_s = -hermitian_entropy(rho)?;
    Ok((neg_s - cross).max(T::zero()))
}

/// `I(A:B) = S(A) + S(B) - S(AB)`.
pub fn mutual_information<T: Real>(sigma: &DensityMatrix<T>, cut: &Bipartition) -> Result<T> {
    cut.check(&sigma.layout)?;
    let sa = von_neumann_entropy(&sigma.reduce(&sorted(cut.a()))?);
    let sb = von_neumann_entropy(&sigma.reduce(&sorted(cut.b()))?);
    let sab = von_neumann_entropy(sigma);
    Ok((sa + sb - sab).max(T::zero()))
}

fn sorted(f: &[usize]) -> Vec<usize> {
    let mut v = f.to_vec();
    v.sort_unstable();
    v
}

pub use crate::linalg::trace_norm;

/// `Tr sqrt(sqrt(rho) sigma sqrt(rho))` (root fidelity).
pub fn fidelity<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    if rho.dim() != sigma.dim() {
        return Err(dim_mismatch("fidelity of states with different dimensions"));
    }
    Ok(fidelity_raw(&rho.matrix, &sigma.matrix))
}

pub(crate) fn fidelity_raw<T: Real>(rho: &CMatrix<T>, sigma: &CMatrix<T>) -> T {
    let sr = linalg::psd_sqrt(rho);
    let inner = &sr * sigma * &sr;
    let f = linalg::herm_eigenvalues(&inner)
        .into_iter()
        .filter(|&l| l > T::zero())
        .fold(T::zero(), |acc, l| acc + l.sqrt());
    f.min(T::one())
}

/// Traces out every factor not listed in `keep`.
pub fn partial_trace<T: Real>(
    x: &CMatrix<T>,
    layout: &TensorLayout,
    keep: &[usize],
) -> Result<(CMatrix<T>, TensorLayout)> {
    if !x.is_square() || x.nrows() != layout.total() {
        return Err(dim_mismatch("matrix does not match its layout"));
    }
    if keep.is_empty() {
        return Err(Error::InvalidLayout("keep must name at least one factor".into()));
    }
    layout.check_subset(keep)?;
    let kept_dims: Vec<usize> = keep.iter().map(|&f| layout.dims()[f]).collect();
    let kept_layout = TensorLayout::new(kept_dims)?;
    let traced: Vec<usize> = (0..layout.num_factors()).filter(|f| !keep.contains(f)).collect();
    if traced.is_empty() {
        return Ok((x.clone(), kept_layout));
    }
    let traced_layout = TensorLayout::new(traced.iter().map(|&f| layout.dims()[f]).collect())?;

    let n = layout.total();
    let mut digits = vec![0; layout.num_factors()];
    let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::new(); traced_layout.total()];
    let mut kd = vec![0; keep.len()];
    let mut td = vec![0; traced.len()];
    for i in 0..n {
        layout.digits(i, &mut digits);
        for (slot, &f) in kd.iter_mut().zip(keep) {
            *slot = digits[f];
        }
        for (slot, &f) in td.iter_mut().zip(&traced) {
            *slot = digits[f];
        }
        groups[traced_layout.index_of(&td)].push((i, kept_layout.index_of(&kd)));
    }
    let dk = kept_layout.total();
    let mut out = CMatrix::zeros(dk, dk);
    for g in &groups {
        for &(i, ki) in g {
            for &(j, kj) in g {
                out[(ki, kj)] += x[(i, j)];
            }
        }
    }
    Ok((out, kept_layout))
}

/// Transpose on the B side of `cut`.
pub fn partial_transpose<T: Real>(sigma: &DensityMatrix<T>, cut: &Bipartition) -> Result<CMatrix<T>> {
    cut.check(&sigma.layout)?;
    Ok(partial_transpose_raw(&sigma.matrix, &sigma.layout, cut.b()))
}

pub(crate) fn partial_transpose_raw<T: Real>(
    x: &CMatrix<T>,
    layout: &TensorLayout,
    factors: &[usize],
) -> CMatrix<T> {
    let n = layout.total();
    let nf = layout.num_factors();
    let mut di = vec![0; nf];
    let mut dj = vec![0; nf];
    CMatrix::from_fn(n, n, |i, j| {
        layout.digits(i, &mut di);
        layout.digits(j, &mut dj);
        for &f in factors {
            std::mem::swap(&mut di[f], &mut dj[f]);
        }
        x[(layout.index_of(&di), layout.index_of(&dj))]
    })
}

/// Spectral purification on (R, Q) with `dim R = dim Q`:
/// `sum_k sqrt(lambda_k) |k>_R |e_k>_Q`.
pub fn purify<T: Real>(rho: &DensityMatrix<T>) -> PureState<T> {
    let d = rho.dim();
    let eig = linalg::herm_eig(&rho.matrix);
    let mut v = CVector::zeros(d * d);
    for (k, &lam) in eig.values.iter().enumerate() {
        if lam <= T::zero() {
            continue;
        }
        let amp = real(lam.sqrt());
        for q in 0..d {
            v[k * d + q] = amp * eig.vectors[(q, k)];
        }
    }
    let layout = TensorLayout::single(d).concat(rho.layout());
    let n = v.norm();
    PureState { vector: v / real(n), layout }
}

/// `Tr[rho X]` for Hermitian `X`.
pub fn expectation<T: Real>(rho: &DensityMatrix<T>, x: &CMatrix<T>) -> Complex<T> {
    linalg::trace_of_product(&rho.matrix, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cplx;

    fn bell() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = CVector::from_vec(vec![cplx(s, 0.), cplx(0., 0.), cplx(0., 0.), cplx(s, 0.)]);
        PureState::new(v, TensorLayout::bipartite(2, 2)).unwrap().density()
    }

    fn diag(p: &[f64]) -> DensityMatrix {
        DensityMatrix::diagonal(p, TensorLayout::single(p.len())).unwrap()
    }

    #[test]
    fn entropy_examples() {
        let pure = diag(&[1.0, 0.0]);
        assert_eq!(von_neumann_entropy(&pure), 0.0);
        let mixed = DensityMatrix::<f64>::maximally_mixed(TensorLayout::single(4));
        assert!((von_neumann_entropy(&mixed) - 2.0).abs() < 1e-12);
        // -(3/4)log2(3/4) - (1/4)log2(1/4)
        let h = -(0.75f64 * 0.75f64.log2()) - 0.25 * 0.25f64.log2();
        assert!((h - 0.811278).abs() < 1e-6);
        assert!((von_neumann_entropy(&diag(&[0.75, 0.25])) - h).abs() < 1e-12);
    }

    #[test]
    fn raw_entropy_rejects_negative_spectrum() {
        let m: CMatrix = CMatrix::from_row_slice(
            2,
            2,
            &[cplx(1.1, 0.), cplx(0., 0.), cplx(0., 0.), cplx(-0.1, 0.)],
        );
        assert!(hermitian_entropy(&m).is_err());
        let m: CMatrix = CMatrix::from_row_slice(
            2,
            2,
            &[cplx(1.0, 0.), cplx(0., 0.), cplx(0., 0.), cplx(-1e-11, 0.)],
        );
        assert_eq!(hermitian_entropy(&m).unwrap(), 0.0);
    }

    #[test]
    fn relative_entropy_examples() {
        let zero = diag(&[1.0, 0.0]);
        let one = diag(&[0.0, 1.0]);
        let mixed = diag(&[0.5, 0.5]);
        assert!(relative_entropy(&mixed, &mixed).unwrap().abs() < 1e-12);
        assert!((relative_entropy(&zero, &mixed).unwrap() - 1.0).abs() < 1e-12);
        assert!(relative_entropy(&zero, &one).unwrap().is_infinite());
        assert!(relative_entropy(&zero, &diag(&[0.25, 0.25, 0.5])).is_err());
    }

    #[test]
    fn mutual_information_examples() {
        let cut = Bipartition::two_party();
        let prod = diag(&[0.3, 0.7]).tensor(&diag(&[0.6, 0.4]));
        assert!(mutual_information(&prod, &cut).unwrap().abs() < 1e-12);
        assert!((mutual_information(&bell(), &cut).unwrap() - 2.0).abs() < 1e-12);
        let classical: DensityMatrix = DensityMatrix::diagonal(&[0.5, 0.0, 0.0, 0.5], TensorLayout::bipartite(2, 2)).unwrap();
        assert!((mutual_information(&classical, &cut).unwrap() - 1.0).abs() < 1e-12);
        let bad = Bipartition::new(&TensorLayout::bipartite(2, 2), &[0, 1]);
        assert!(bad.is_err());
    }

    #[test]
    fn trace_norm_examples() {
        let z: CMatrix = CMatrix::zeros(3, 3);
        assert_eq!(trace_norm(&z), 0.0);
        let diff = diag(&[1.0, 0.0]).matrix() - diag(&[0.0, 1.0]).matrix();
        assert!((trace_norm(&diff) - 2.0).abs() < 1e-14);
        assert!((trace_norm(bell().matrix()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fidelity_examples() {
        let zero = diag(&[1.0, 0.0]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = PureState::new(
            CVector::from_vec(vec![cplx(s, 0.), cplx(s, 0.)]),
            TensorLayout::single(2),
        )
        .unwrap()
        .density();
        assert!((fidelity(&bell(), &bell()).unwrap() - 1.0).abs() < 1e-7);
        assert!((fidelity(&zero, &plus).unwrap() - s).abs() < 1e-10);
        assert!((fidelity(&zero, &diag(&[0.5, 0.5])).unwrap() - s).abs() < 1e-10);
    }

    #[test]
    fn partial_trace_examples() {
        let a = diag(&[0.3, 0.7]);
        let b = diag(&[0.1, 0.2, 0.7]);
        let ab = a.tensor(&b);
        let ra = ab.reduce(&[0]).unwrap();
        assert!(linalg::max_abs(&(ra.matrix() - a.matrix())) < 1e-14);
        let rb = ab.reduce(&[1]).unwrap();
        assert!(linalg::max_abs(&(rb.matrix() - b.matrix())) < 1e-14);
        let half = bell().reduce(&[0]).unwrap();
        assert!(linalg::max_abs(&(half.matrix() - diag(&[0.5, 0.5]).matrix())) < 1e-14);
        let all = bell().reduce(&[0, 1]).unwrap();
        assert_eq!(all.matrix(), bell().matrix());
        assert!(bell().reduce(&[]).is_err());
        assert!(bell().reduce(&[1, 0]).is_err());
        assert!(bell().reduce(&[2]).is_err());
    }

    #[test]
    fn partial_trace_middle_factor() {
        let a = diag(&[0.3, 0.7]);
        let b = diag(&[0.1, 0.2, 0.7]);
        let c = diag(&[0.5, 0.25, 0.25]);
        let abc = a.tensor(&b).tensor(&c);
        let ac = abc.reduce(&[0, 2]).unwrap();
        let expect = a.tensor(&c);
        assert!(linalg::max_abs(&(ac.matrix() - expect.matrix())) < 1e-14);
        assert_eq!(ac.layout().dims(), &[2, 3]);
    }

    #[test]
    fn partial_transpose_examples() {
        let cut = Bipartition::two_party();
        let pt = partial_transpose(&bell(), &cut).unwrap();
        let ev = linalg::herm_eigenvalues(&pt);
        assert!((ev[3] + 0.5).abs() < 1e-12);
        let classical: DensityMatrix = DensityMatrix::diagonal(&[0.5, 0.0, 0.0, 0.5], TensorLayout::bipartite(2, 2)).unwrap();
        assert_eq!(&partial_transpose(&classical, &cut).unwrap(), classical.matrix());
    }

    #[test]
    fn purify_examples() {
        let rho = diag(&[0.75, 0.25]);
        let psi = purify(&rho);
        let v = psi.vector();
        assert!((v[0].re - 0.75f64.sqrt()).abs() < 1e-14);
        assert!((v[3].re - 0.5).abs() < 1e-14);
        assert!(v[1].norm() < 1e-14 && v[2].norm() < 1e-14);
        let back = psi.density().reduce(&[1]).unwrap();
        assert!(linalg::max_abs(&(back.matrix() - rho.matrix())) < 1e-12);

        let pure = diag(&[0.0, 1.0]);
        let p = purify(&pure);
        let marg_r = p.density().reduce(&[0]).unwrap();
        assert!(von_neumann_entropy(&marg_r).abs() < 1e-12);
    }
}
