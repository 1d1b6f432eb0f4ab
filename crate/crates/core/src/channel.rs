//! Channels as Kraus families, their Stinespring isometries, and the
//! reference/output/environment pure state produced by sending half of a
//! purification through a channel.

use std::fmt;

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::{self, cplx, real, CMatrix};
use crate::qalg::{self, DensityMatrix, PureState, TensorLayout};
use crate::sample;
use crate::scalar::Real;

/// Tolerance on `sum_m E_m^dagger E_m = I`.
pub const CPTP_TOL: f64 = 1e-9;

/// Kraus operators are dropped below this Frobenius norm when composing.
pub const PRUNE_TOL: f64 = 1e-12;

/// `rho -> sum_m E_m rho E_m^dagger`, each `E_m` of shape `out_dim x in_dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel<T: Real = f64> {
    ops: Vec<CMatrix<T>>,
    in_dim: usize,
    out_dim: usize,
}

/// Outcome of [`validate_cptp`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CptpReport<T: Real = f64> {
    /// `|| sum E^dagger E - I ||_max`
    pub trace_defect: T,
    /// Smallest eigenvalue of the (unnormalized) Choi matrix.
    pub choi_min_eigenvalue: T,
    pub num_ops: usize,
    pub valid: bool,
}

impl<T: Real> KrausChannel<T> {
    /// Builds a channel and checks trace preservation to [`CPTP_TOL`].
    pub fn new(ops: Vec<CMatrix<T>>) -> Result<Self> {
        let ch = Self::from_ops_unchecked(ops)?;
        let report = validate_cptp(&ch);
        if report.trace_defect > T::tol(CPTP_TOL) {
            return Err(Error::InvalidChannel(format!(
                "sum of E_m^dagger E_m deviates from identity by {}",
                report.trace_defect
            )));
        }
        Ok(ch)
    }

    /// Only checks that the operators share a shape; use [`validate_cptp`]
    /// for the rest.
    pub fn from_ops_unchecked(ops: Vec<CMatrix<T>>) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::InvalidChannel("no Kraus operators".into()))?;
        let (out_dim, in_dim) = first.shape();
        if in_dim == 0 || out_dim == 0 {
            return Err(Error::InvalidChannel("empty Kraus operator".into()));
        }
        if let Some((m, op)) = ops.iter().enumerate().find(|(_, op)| op.shape() != (out_dim, in_dim)) {
            return Err(dim_mismatch(format!(
                "Kraus operator {m} is {}x{}, expected {out_dim}x{in_dim}",
                op.nrows(),
                op.ncols()
            )));
        }
        Ok(Self { ops, in_dim, out_dim })
    }

    pub fn identity(dim: usize) -> Self {
        Self { ops: vec![linalg::identity(dim)], in_dim: dim, out_dim: dim }
    }

    /// Single-operator channel `rho -> U rho U^dagger` (`U` may be an isometry).
    pub fn unitary(u: CMatrix<T>) -> Result<Self> {
        Self::new(vec![u])
    }

    pub fn ops(&self) -> &[CMatrix<T>] {
        &self.ops
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn num_ops(&self) -> usize {
        self.ops.len()
    }

    pub fn apply(&self, x: &CMatrix<T>) -> CMatrix<T> {
        self.ops
            .iter()
            .fold(CMatrix::zeros(self.out_dim, self.out_dim), |acc, e| acc + e * x * e.adjoint())
    }

    /// Heisenberg-picture action `X -> sum_m E_m^dagger X E_m`.
    pub fn apply_adjoint(&self, x: &CMatrix<T>) -> CMatrix<T> {
        self.ops
            .iter()
            .fold(CMatrix::zeros(self.in_dim, self.in_dim), |acc, e| acc + e.adjoint() * x * e)
    }

    pub fn apply_state(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        if rho.dim() != self.in_dim {
            return Err(dim_mismatch(format!(
                "state of dimension {} into a channel with input dimension {}",
                rho.dim(),
                self.in_dim
            )));
        }
        Ok(DensityMatrix::from_raw(self.apply(rho.matrix()), TensorLayout::single(self.out_dim)))
    }

    /// `after ∘ self`, with Kraus products `{A_j E_m}` and numerically zero
    /// products pruned. When more than `in*out` operators survive, the family
    /// is compressed through the Choi matrix.
    pub fn then(&self, after: &KrausChannel<T>) -> Result<Self> {
        if after.in_dim != self.out_dim {
            return Err(dim_mismatch("composed channels do not chain"));
        }
        let prune = T::tol(PRUNE_TOL);
        let ops: Vec<CMatrix<T>> = after
            .ops
            .iter()
            .flat_map(|a| self.ops.iter().map(move |e| a * e))
            .filter(|k| k.norm() >= prune)
            .collect();
        if ops.is_empty() {
            return Err(Error::InvalidChannel("composition annihilates every input".into()));
        }
        let composed = Self { ops, in_dim: self.in_dim, out_dim: after.out_dim };
        if composed.num_ops() > composed.in_dim * composed.out_dim {
            let choi = choi_from_kraus(&composed);
            return kraus_from_choi(&choi, composed.in_dim, composed.out_dim);
        }
        Ok(composed)
    }

    /// Converts the scalar type.
    pub fn cast<U: Real>(&self) -> KrausChannel<U> {
        KrausChannel {
            ops: self
                .ops
                .iter()
                .map(|m| m.map(|z| Complex::new(U::lit(z.re.as_f64()), U::lit(z.im.as_f64()))))
                .collect(),
            in_dim: self.in_dim,
            out_dim: self.out_dim,
        }
    }
}

/// Trace-preservation defect and Choi positivity of a Kraus family.
pub fn validate_cptp<T: Real>(ch: &KrausChannel<T>) -> CptpReport<T> {
    let sum = ch
        .ops
        .iter()
        .fold(CMatrix::zeros(ch.in_dim, ch.in_dim), |acc, e| acc + e.adjoint() * e);
    let trace_defect = linalg::max_abs(&(sum - linalg::identity::<T>(ch.in_dim)));
    let choi_min_eigenvalue = linalg::herm_eigenvalues(&choi_from_kraus(ch))
        .last()
        .copied()
        .unwrap_or(T::zero());
    let valid = trace_defect <= T::tol(CPTP_TOL)
        && choi_min_eigenvalue >= -T::state_tol()
        && ch.num_ops() <= ch.in_dim * ch.out_dim;
    CptpReport { trace_defect, choi_min_eigenvalue, num_ops: ch.num_ops(), valid }
}

/// Unnormalized Choi matrix `sum_ij |i><j| ⊗ E(|i><j|)` on (input, output);
/// the identity channel maps to `d |Φ+><Φ+|`.
pub fn choi_from_kraus<T: Real>(ch: &KrausChannel<T>) -> CMatrix<T> {
    let (d, dp) = (ch.in_dim, ch.out_dim);
    let mut j = CMatrix::zeros(d * dp, d * dp);
    for e in &ch.ops {
        // vec(E) with input index major: v[i*dp + a] = E[a, i]
        for i in 0..d {
            for a in 0..dp {
                let x = e[(a, i)];
                if x == Complex::new(T::zero(), T::zero()) {
                    continue;
                }
                for k in 0..d {
                    for b in 0..dp {
                        j[(i * dp + a, k * dp + b)] += x * e[(b, k)].conj();
                    }
                }
            }
        }
    }
    j
}

/// Minimal Kraus family from an unnormalized Choi matrix on (input, output).
pub fn kraus_from_choi<T: Real>(choi: &CMatrix<T>, in_dim: usize, out_dim: usize) -> Result<KrausChannel<T>> {
    if choi.nrows() != in_dim * out_dim || !choi.is_square() {
        return Err(dim_mismatch("Choi matrix does not match the given dimensions"));
    }
    let eig = linalg::herm_eig(choi);
    let scale = eig.values.first().copied().unwrap_or(T::zero()).max(T::one());
    if let Some(&min) = eig.values.last() {
        if min < -T::tol(1e-9) * scale {
            return Err(Error::InvalidChannel(format!("Choi matrix has negative eigenvalue {min}")));
        }
    }
    let cut = T::eig_cutoff() * scale;
    let ops: Vec<CMatrix<T>> = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > cut)
        .map(|(k, &l)| {
            let s = real(l.sqrt());
            CMatrix::from_fn(out_dim, in_dim, |a, i| eig.vectors[(i * out_dim + a, k)] * s)
        })
        .collect();
    KrausChannel::from_ops_unchecked(ops)
}

/// Isometry `V |psi> = sum_m (E_m |psi>) ⊗ |m>` into (Q', E').
#[derive(Debug, Clone, PartialEq)]
pub struct StinespringDilation<T: Real = f64> {
    isometry: CMatrix<T>,
    in_dim: usize,
    out_dim: usize,
    env_dim: usize,
}

impl<T: Real> StinespringDilation<T> {
    pub fn isometry(&self) -> &CMatrix<T> {
        &self.isometry
    }

    pub fn env_dim(&self) -> usize {
        self.env_dim
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn output_layout(&self) -> TensorLayout {
        TensorLayout::bipartite(self.out_dim, self.env_dim)
    }

    /// `V rho V^dagger` on (Q', E').
    pub fn dilate(&self, x: &CMatrix<T>) -> CMatrix<T> {
        &self.isometry * x * self.isometry.adjoint()
    }

    /// `Tr_{E'}[V X V^dagger]`
    pub fn channel_output(&self, x: &CMatrix<T>) -> CMatrix<T> {
        qalg::partial_trace(&self.dilate(x), &self.output_layout(), &[0])
            .expect("layout matches isometry")
            .0
    }

    /// `Tr_{Q'}[V X V^dagger]`, the complementary channel.
    pub fn environment_output(&self, x: &CMatrix<T>) -> CMatrix<T> {
        qalg::partial_trace(&self.dilate(x), &self.output_layout(), &[1])
            .expect("layout matches isometry")
            .0
    }
}

pub fn stinespring_dilate<T: Real>(ch: &KrausChannel<T>) -> Result<StinespringDilation<T>> {
    let report = validate_cptp(ch);
    if report.trace_defect > T::tol(CPTP_TOL) {
        return Err(Error::InvalidChannel(format!(
            "cannot dilate a non-trace-preserving map (defect {})",
            report.trace_defect
        )));
    }
    let (d, dp, de) = (ch.in_dim, ch.out_dim, ch.num_ops());
    let mut v = CMatrix::zeros(dp * de, d);
    for (m, e) in ch.ops.iter().enumerate() {
        for a in 0..dp {
            for i in 0..d {
                v[(a * de + m, i)] = e[(a, i)];
            }
        }
    }
    Ok(StinespringDilation { isometry: v, in_dim: d, out_dim: dp, env_dim: de })
}

/// Pure state on (R, Q', E') after half of a purification of `rho` has been
/// sent through the dilation, with all reduced states cached.
#[derive(Debug, Clone)]
pub struct TripartiteOutput<T: Real = f64> {
    pub psi: PureState<T>,
    pub rho_r: DensityMatrix<T>,
    /// Channel output `E(rho)`.
    pub rho_q: DensityMatrix<T>,
    pub rho_e: DensityMatrix<T>,
    pub rho_rq: DensityMatrix<T>,
    pub rho_re: DensityMatrix<T>,
    pub input_entropy: T,
}

impl<T: Real> TripartiteOutput<T> {
    /// `I(R:Q')`
    pub fn mutual_info_rq(&self) -> T {
        mutual_info_of(&self.rho_r, &self.rho_q, &self.rho_rq)
    }

    /// `I(R:E')`
    pub fn mutual_info_re(&self) -> T {
        mutual_info_of(&self.rho_r, &self.rho_e, &self.rho_re)
    }

    /// `S(Q') - S(RQ')`
    pub fn coherent_information(&self) -> T {
        qalg::von_neumann_entropy(&self.rho_q) - qalg::von_neumann_entropy(&self.rho_rq)
    }

    /// `rho^R ⊗ rho^{E'}`
    pub fn decoupled_re(&self) -> DensityMatrix<T> {
        self.rho_r.tensor(&self.rho_e)
    }
}

fn mutual_info_of<T: Real>(a: &DensityMatrix<T>, b: &DensityMatrix<T>, ab: &DensityMatrix<T>) -> T {
    qalg::von_neumann_entropy(a) + qalg::von_neumann_entropy(b) - qalg::von_neumann_entropy(ab)
}

/// `(I^R ⊗ V) |Ψ^{RQ}>` with the spectral purification of `rho`.
pub fn global_state<T: Real>(rho: &DensityMatrix<T>, ch: &KrausChannel<T>) -> Result<TripartiteOutput<T>> {
    if rho.dim() != ch.in_dim {
        return Err(dim_mismatch(format!(
            "input state of dimension {} for channel input dimension {}",
            rho.dim(),
            ch.in_dim
        )));
    }
    let purif = qalg::purify(rho);
    global_state_from_purification(&purif, ch, qalg::von_neumann_entropy(rho))
}

/// Same as [`global_state`] starting from any purification on (R, Q).
pub fn global_state_from_purification<T: Real>(
    purif: &PureState<T>,
    ch: &KrausChannel<T>,
    input_entropy: T,
) -> Result<TripartiteOutput<T>> {
    let dims = purif.layout().dims();
    if dims.len() != 2 || dims[1] != ch.in_dim {
        return Err(dim_mismatch("purification must live on (R, Q) with Q the channel input"));
    }
    let dr = dims[0];
    let dil = stinespring_dilate(ch)?;
    let width = dil.out_dim * dil.env_dim;
    let psi_mat = CMatrix::from_fn(dr, ch.in_dim, |r, q| purif.vector()[r * ch.in_dim + q]);
    let out = psi_mat * dil.isometry.transpose();
    let vec = linalg::vec_row_major(&out);
    let layout = TensorLayout::new(vec![dr, dil.out_dim, dil.env_dim])?;
    debug_assert_eq!(vec.len(), dr * width);
    let psi = PureState::normalized(vec, layout)?;
    let full = psi.density();
    Ok(TripartiteOutput {
        rho_r: full.reduce(&[0])?,
        rho_q: full.reduce(&[1])?,
        rho_e: full.reduce(&[2])?,
        rho_rq: full.reduce(&[0, 1])?,
        rho_re: full.reduce(&[0, 2])?,
        psi,
        input_entropy,
    })
}

fn require_same_dims<T: Real>(ch: &KrausChannel<T>) -> Result<()> {
    if ch.in_dim != ch.out_dim {
        return Err(dim_mismatch(format!(
            "entanglement fidelity needs output dimension {} to equal input dimension {}",
            ch.out_dim, ch.in_dim
        )));
    }
    Ok(())
}

/// `F(rho, E) = sum_m |Tr[rho E_m]|^2`.
pub fn entanglement_fidelity<T: Real>(rho: &DensityMatrix<T>, ch: &KrausChannel<T>) -> Result<T> {
    require_same_dims(ch)?;
    if rho.dim() != ch.in_dim {
        return Err(dim_mismatch("state does not match channel input"));
    }
    Ok(ch
        .ops
        .iter()
        .map(|e| qalg::expectation(rho, e).norm_sqr())
        .fold(T::zero(), |a, b| a + b)
        .min(T::one()))
}

/// `<Ψ|(id ⊗ E)(Ψ)|Ψ>` evaluated on the given purification.
pub fn entanglement_fidelity_on_purification<T: Real>(
    purif: &PureState<T>,
    ch: &KrausChannel<T>,
) -> Result<T> {
    require_same_dims(ch)?;
    let dims = purif.layout().dims();
    if dims.len() != 2 || dims[1] != ch.in_dim {
        return Err(dim_mismatch("purification must live on (R, Q)"));
    }
    let dr = dims[0];
    let psi = CMatrix::from_fn(dr, ch.in_dim, |r, q| purif.vector()[r * ch.in_dim + q]);
    let mut f = T::zero();
    for e in &ch.ops {
        // <Ψ|(I ⊗ E_m)|Ψ> = Tr[Ψ^dagger Ψ E_m^T] in matrix form
        let moved = &psi * e.transpose();
        f += linalg::hs_inner(&psi, &moved).norm_sqr();
    }
    Ok(f)
}

/// Entanglement fidelity of `recovery ∘ ch` without forming the composition.
pub fn composed_entanglement_fidelity<T: Real>(
    rho: &DensityMatrix<T>,
    ch: &KrausChannel<T>,
    recovery: &KrausChannel<T>,
) -> Result<T> {
    if recovery.in_dim != ch.out_dim || recovery.out_dim != ch.in_dim {
        return Err(dim_mismatch("recovery does not invert the channel's dimensions"));
    }
    if rho.dim() != ch.in_dim {
        return Err(dim_mismatch("state does not match channel input"));
    }
    let mut f = T::zero();
    for e in &ch.ops {
        let a = e * rho.matrix();
        for r in &recovery.ops {
            f += linalg::trace_of_product(r, &a).norm_sqr();
        }
    }
    Ok(f.min(T::one()))
}

/// `I_c = S(E(rho)) - S((id ⊗ E)(Ψ))`, in bits.
pub fn coherent_information<T: Real>(rho: &DensityMatrix<T>, ch: &KrausChannel<T>) -> Result<T> {
    Ok(global_state(rho, ch)?.coherent_information())
}

/// Named channel families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ChannelFamily {
    /// `rho -> (1-p) rho + p I/d`, Weyl-operator Kraus form.
    Depolarizing { dim: usize, p: f64 },
    /// Qubit `K0 = [[1,0],[0,sqrt(1-g)]]`, `K1 = [[0,sqrt(g)],[0,0]]`.
    AmplitudeDamping { gamma: f64 },
    /// Qubit `K0 = [[1,0],[0,sqrt(1-l)]]`, `K1 = [[0,0],[0,sqrt(l)]]`.
    PhaseDamping { lambda: f64 },
    /// Kraus family cut from a Haar isometry `C^d -> C^{d'} ⊗ C^k`.
    RandomRankK { in_dim: usize, out_dim: usize, k: usize, seed: u64 },
}

impl fmt::Display for ChannelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Depolarizing { dim, p } => write!(f, "depolarizing(d={dim},p={p})"),
            Self::AmplitudeDamping { gamma } => write!(f, "amplitude_damping(gamma={gamma})"),
            Self::PhaseDamping { lambda } => write!(f, "phase_damping(lambda={lambda})"),
            Self::RandomRankK { in_dim, out_dim, k, seed } => {
                write!(f, "random_rank_k(d={in_dim},d'={out_dim},k={k},seed={seed})")
            }
        }
    }
}

fn unit_interval(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) || x.is_nan() {
        return Err(Error::InvalidParameter(format!("{name} = {x} outside [0, 1]")));
    }
    Ok(())
}

/// Generalized Pauli `X^a Z^b` on `C^d`.
pub fn weyl_operator<T: Real>(d: usize, a: usize, b: usize) -> CMatrix<T> {
    let omega = 2.0 * std::f64::consts::PI / d as f64;
    CMatrix::from_fn(d, d, |row, col| {
        if row == (col + a) % d {
            let ph = omega * ((b * col) % d) as f64;
            cplx(ph.cos(), ph.sin())
        } else {
            cplx(0.0, 0.0)
        }
    })
}

pub fn channel_family<T: Real>(family: &ChannelFamily) -> Result<KrausChannel<T>> {
    match *family {
        ChannelFamily::Depolarizing { dim, p } => {
            unit_interval("p", p)?;
            if dim < 2 {
                return Err(Error::InvalidParameter("depolarizing needs dim >= 2".into()));
            }
            let d2 = (dim * dim) as f64;
            let mut ops = Vec::with_capacity(dim * dim);
            for a in 0..dim {
                for b in 0..dim {
                    let w = if a == 0 && b == 0 { 1.0 - p + p / d2 } else { p / d2 };
                    if w == 0.0 && !(a == 0 && b == 0) {
                        continue;
                    }
                    ops.push(weyl_operator::<T>(dim, a, b) * real(T::lit(w.sqrt())));
                }
            }
            KrausChannel::new(ops)
        }
        ChannelFamily::AmplitudeDamping { gamma } => {
            unit_interval("gamma", gamma)?;
            let z = cplx::<T>(0.0, 0.0);
            let k0 = CMatrix::from_row_slice(2, 2, &[cplx(1.0, 0.0), z, z, cplx((1.0 - gamma).sqrt(), 0.0)]);
            let k1 = CMatrix::from_row_slice(2, 2, &[z, cplx(gamma.sqrt(), 0.0), z, z]);
            KrausChannel::new(if gamma == 0.0 { vec![k0] } else { vec![k0, k1] })
        }
        ChannelFamily::PhaseDamping { lambda } => {
            unit_interval("lambda", lambda)?;
            let z = cplx::<T>(0.0, 0.0);
            let k0 = CMatrix::from_row_slice(2, 2, &[cplx(1.0, 0.0), z, z, cplx((1.0 - lambda).sqrt(), 0.0)]);
            let k1 = CMatrix::from_row_slice(2, 2, &[z, z, z, cplx(lambda.sqrt(), 0.0)]);
            KrausChannel::new(if lambda == 0.0 { vec![k0] } else { vec![k0, k1] })
        }
        ChannelFamily::RandomRankK { in_dim, out_dim, k, seed } => {
            if in_dim == 0 || out_dim == 0 || k == 0 || k > in_dim * out_dim {
                return Err(Error::InvalidParameter(format!(
                    "random_rank_k needs 1 <= k <= d*d' (got d={in_dim}, d'={out_dim}, k={k})"
                )));
            }
            if out_dim * k < in_dim {
                return Err(Error::InvalidParameter(format!(
                    "no isometry from dimension {in_dim} into {out_dim}x{k}"
                )));
            }
            let mut rng = sample::rng_from_seed(seed);
            let v = sample::haar_isometry::<T, _>(out_dim * k, in_dim, &mut rng);
            let ops = (0..k)
                .map(|m| CMatrix::from_fn(out_dim, in_dim, |a, i| v[(a * k + m, i)]))
                .collect();
            KrausChannel::new(ops)
        }
    }
}

/// `{|0><0|, |1><1|, ...}`: full dephasing in the computational basis.
pub fn complete_dephasing<T: Real>(dim: usize) -> KrausChannel<T> {
    let ops = (0..dim)
        .map(|i| {
            let k = linalg::basis_ket::<T>(dim, i);
            linalg::outer(&k, &k)
        })
        .collect();
    KrausChannel::new(ops).expect("projectors resolve the identity")
}

/// On-disk channel description; matrices are row-major lists of `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    pub in_dim: usize,
    pub out_dim: usize,
    pub kraus: Vec<Vec<Vec<[f64; 2]>>>,
}

pub(crate) fn matrix_from_rows<T: Real>(
    rows: &[Vec<[f64; 2]>],
    nrows: usize,
    ncols: usize,
    path: &str,
) -> Result<CMatrix<T>> {
    if rows.len() != nrows {
        return Err(Error::Schema {
            path: path.to_string(),
            message: format!("expected {nrows} rows, found {}", rows.len()),
        });
    }
    for (r, row) in rows.iter().enumerate() {
        if row.len() != ncols {
            return Err(Error::Schema {
                path: format!("{path}[{r}]"),
                message: format!("expected {ncols} entries, found {}", row.len()),
            });
        }
        if let Some((c, _)) = row.iter().enumerate().find(|(_, z)| !z[0].is_finite() || !z[1].is_finite()) {
            return Err(Error::Schema {
                path: format!("{path}[{r}][{c}]"),
                message: "non-finite entry".into(),
            });
        }
    }
    Ok(CMatrix::from_fn(nrows, ncols, |i, j| cplx(rows[i][j][0], rows[i][j][1])))
}

pub(crate) fn matrix_to_rows<T: Real>(m: &CMatrix<T>) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re.as_f64(), m[(i, j)].im.as_f64()]).collect())
        .collect()
}

impl ChannelSpec {
    pub fn to_channel<T: Real>(&self) -> Result<KrausChannel<T>> {
        if self.in_dim == 0 || self.out_dim == 0 {
            return Err(Error::Schema { path: "in_dim/out_dim".into(), message: "must be positive".into() });
        }
        if self.kraus.is_empty() {
            return Err(Error::Schema { path: "kraus".into(), message: "no Kraus operators".into() });
        }
        let ops = self
            .kraus
            .iter()
            .enumerate()
            .map(|(m, rows)| matrix_from_rows(rows, self.out_dim, self.in_dim, &format!("kraus[{m}]")))
            .collect::<Result<Vec<_>>>()?;
        KrausChannel::new(ops)
    }

    pub fn from_channel<T: Real>(ch: &KrausChannel<T>) -> Self {
        Self {
            in_dim: ch.in_dim,
            out_dim: ch.out_dim,
            kraus: ch.ops.iter().map(matrix_to_rows).collect(),
        }
    }
}

/// Parses and validates a JSON channel description.
pub fn channel_from_json<T: Real>(text: &str) -> Result<KrausChannel<T>> {
    let spec: ChannelSpec = serde_json::from_str(text)?;
    spec.to_channel()
}

pub fn channel_to_json<T: Real>(ch: &KrausChannel<T>) -> String {
    serde_json::to_string_pretty(&ChannelSpec::from_channel(ch)).expect("plain data serializes")
}
