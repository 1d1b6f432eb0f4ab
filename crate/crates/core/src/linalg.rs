//! Dense complex-matrix helpers built on nalgebra.

use nalgebra::{Complex, ComplexField, DMatrix, DVector};

use crate::scalar::Real;

pub type CMatrix<T = f64> = DMatrix<Complex<T>>;
pub type CVector<T = f64> = DVector<Complex<T>>;

#[inline]
pub fn cplx<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

#[inline]
pub fn real<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

pub fn identity<T: Real>(n: usize) -> CMatrix<T> {
    CMatrix::identity(n, n)
}

pub fn basis_ket<T: Real>(n: usize, i: usize) -> CVector<T> {
    let mut v = CVector::zeros(n);
    v[i] = Complex::new(T::one(), T::zero());
    v
}

/// `|a><b|`
pub fn outer<T: Real>(a: &CVector<T>, b: &CVector<T>) -> CMatrix<T> {
    a * b.adjoint()
}

pub fn trace<T: Real>(m: &CMatrix<T>) -> Complex<T> {
    m.diagonal().iter().fold(Complex::new(T::zero(), T::zero()), |acc, z| acc + z)
}

/// Hilbert-Schmidt inner product `Tr[a^dagger b]`.
pub fn hs_inner<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> Complex<T> {
    a.iter()
        .zip(b.iter())
        .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y)
}

/// `Tr[a b]` without forming the product.
pub fn trace_of_product<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> Complex<T> {
    let n = a.nrows();
    let mut acc = Complex::new(T::zero(), T::zero());
    for i in 0..n {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub fn kron<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    a.kronecker(b)
}

pub fn max_abs<T: Real>(m: &CMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, z| acc.max(z.modulus()))
}

pub fn hermitian_part<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    (m + m.adjoint()) * real(T::lit(0.5))
}

/// Largest entry of `m - m^dagger`.
pub fn hermiticity_defect<T: Real>(m: &CMatrix<T>) -> T {
    if !m.is_square() {
        return T::infinity();
    }
    max_abs(&(m - m.adjoint()))
}

/// Spectral decomposition of a Hermitian matrix, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct HermEig<T: Real> {
    pub values: Vec<T>,
    /// Columns are eigenvectors, with the largest-magnitude component of
    /// each made real and positive.
    pub vectors: CMatrix<T>,
}

pub fn herm_eig<T: Real>(m: &CMatrix<T>) -> HermEig<T> {
    let n = m.nrows();
    if n == 0 {
        return HermEig { values: vec![], vectors: CMatrix::zeros(0, 0) };
    }
    let eig = hermitian_part(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[j]
            .partial_cmp(&eig.eigenvalues[i])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut vectors = CMatrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        values.push(eig.eigenvalues[src]);
        let col = eig.eigenvectors.column(src);
        let (mut best, mut best_abs) = (0, T::zero());
        for (i, z) in col.iter().enumerate() {
            if z.modulus() > best_abs + T::lit(1e-12) {
                best = i;
                best_abs = z.modulus();
            }
        }
        let phase = if best_abs > T::zero() {
            col[best].conj() / real(best_abs)
        } else {
            real(T::one())
        };
        for i in 0..n {
            vectors[(i, dst)] = col[i] * phase;
        }
    }
    HermEig { values, vectors }
}

pub fn herm_eigenvalues<T: Real>(m: &CMatrix<T>) -> Vec<T> {
    if m.nrows() == 0 {
        return vec![];
    }
    let mut v: Vec<T> = hermitian_part(m).symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    v
}

/// `V f(Λ) V^dagger` for Hermitian `m`.
pub fn herm_apply<T: Real>(m: &CMatrix<T>, f: impl Fn(T) -> T) -> CMatrix<T> {
    let HermEig { values, vectors } = herm_eig(m);
    let mut scaled = vectors.clone();
    for (j, &lam) in values.iter().enumerate() {
        let fl = real(f(lam));
        for i in 0..scaled.nrows() {
            scaled[(i, j)] *= fl;
        }
    }
    scaled * vectors.adjoint()
}

/// Square root of a positive semidefinite matrix; negative eigenvalues are clamped.
pub fn psd_sqrt<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    herm_apply(m, |x| if x > T::zero() { x.sqrt() } else { T::zero() })
}

/// Pseudo-inverse square root on the support above `cutoff`.
pub fn psd_inv_sqrt<T: Real>(m: &CMatrix<T>, cutoff: T) -> CMatrix<T> {
    herm_apply(m, |x| if x > cutoff { T::one() / x.sqrt() } else { T::zero() })
}

pub fn singular_values<T: Real>(m: &CMatrix<T>) -> Vec<T> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return vec![];
    }
    m.clone().svd(false, false).singular_values.iter().copied().collect()
}

/// Sum of singular values.
pub fn trace_norm<T: Real>(m: &CMatrix<T>) -> T {
    singular_values(m).into_iter().fold(T::zero(), |a, s| a + s)
}

/// Trace norm of a Hermitian matrix, from its spectrum.
pub fn hermitian_trace_norm<T: Real>(m: &CMatrix<T>) -> T {
    herm_eigenvalues(m).into_iter().fold(T::zero(), |a, s| a + s.abs())
}

/// Closest matrix with orthonormal columns (polar factor), for `rows >= cols`.
pub fn polar_isometry<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("u requested");
    let vt = svd.v_t.expect("v_t requested");
    u * vt
}

/// `|| V^dagger V - I ||_max`
pub fn isometry_defect<T: Real>(v: &CMatrix<T>) -> T {
    max_abs(&(v.adjoint() * v - identity::<T>(v.ncols())))
}

/// Number of singular values above `cutoff`.
pub fn numerical_rank<T: Real>(m: &CMatrix<T>, cutoff: T) -> usize {
    singular_values(m).into_iter().filter(|&s| s > cutoff).count()
}

/// Row-major vectorization.
pub fn vec_row_major<T: Real>(m: &CMatrix<T>) -> CVector<T> {
    let (r, c) = m.shape();
    CVector::from_fn(r * c, |k, _| m[(k / c, k % c)])
}

pub fn unvec_row_major<T: Real>(v: &CVector<T>, rows: usize, cols: usize) -> CMatrix<T> {
    CMatrix::from_fn(rows, cols, |i, j| v[i * cols + j])
}

/// The single-qubit Pauli matrices `[I, X, Y, Z]`.
pub fn paulis<T: Real>() -> [CMatrix<T>; 4] {
    let z = cplx::<T>(0.0, 0.0);
    let o = cplx::<T>(1.0, 0.0);
    let i = cplx::<T>(0.0, 1.0);
    [
        CMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        CMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        CMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        CMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eig_sorted_and_phase_fixed() {
        let m: CMatrix = CMatrix::from_row_slice(
            2,
            2,
            &[cplx(0.25, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0), cplx(0.75, 0.0)],
        );
        let e = herm_eig(&m);
        assert!((e.values[0] - 0.75).abs() < 1e-14);
        assert!((e.vectors[(1, 0)].re - 1.0).abs() < 1e-14);
        assert!(e.vectors[(1, 0)].im.abs() < 1e-14);
    }

    #[test]
    fn trace_norm_of_pauli_z_is_two() {
        let [_, _, _, z] = paulis::<f64>();
        assert!((trace_norm(&z) - 2.0).abs() < 1e-14);
        assert!((hermitian_trace_norm(&z) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn polar_factor_is_isometry() {
        let m: CMatrix = CMatrix::from_fn(4, 2, |i, j| cplx((i + 2 * j) as f64, (i * j) as f64 - 1.0));
        let v = polar_isometry(&m);
        assert!(isometry_defect(&v) < 1e-13);
    }

    #[test]
    fn f32_eigenvalues() {
        let m: CMatrix<f32> = CMatrix::from_row_slice(
            2,
            2,
            &[cplx(0.5, 0.0), cplx(0.5, 0.0), cplx(0.5, 0.0), cplx(0.5, 0.0)],
        );
        let v = herm_eigenvalues(&m);
        assert!((v[0] - 1.0).abs() < 1e-6 && v[1].abs() < 1e-6);
    }
}
