//! Recovery channels `R: Q' -> Q` and the full per-instance bound report.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::bounds::{self, BoundReport, Certificates, LossReport};
use crate::channel::{self, choi_from_kraus, kraus_from_choi, KrausChannel, PRUNE_TOL};
use crate::entmeas::{self, EntanglementInterval, SearchOptions, SearchStats};
use crate::error::{dim_mismatch, Result};
use crate::icpovm::{self, Povm};
use crate::linalg::{self, real, CMatrix};
use crate::optim::{self, Objective};
use crate::qalg::{self, Bipartition, DensityMatrix};
use crate::sample;
use crate::scalar::Real;

/// Pseudo-inverse cutoff on the spectrum of `E(rho)`.
pub const PINV_CUTOFF: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RecoveryMethod {
    Petz,
    Optimized,
}

impl std::fmt::Display for RecoveryMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Petz => "petz",
            Self::Optimized => "optimized",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryChannel<T: Real = f64> {
    pub kraus: KrausChannel<T>,
    pub method: RecoveryMethod,
    /// Entanglement fidelity of `R ∘ E` on the input state.
    pub achieved_f: T,
    /// `E(rho)` was singular and the map was completed on its kernel.
    pub restricted_support: bool,
    pub stats: Option<SearchStats>,
}

/// Petz map `R_m = rho^{1/2} E_m^dagger E(rho)^{-1/2}`, completed on the kernel
/// of `E(rho)` by `|0><k|` so that it is trace preserving.
pub fn petz_recovery<T: Real>(rho: &DensityMatrix<T>, ch: &KrausChannel<T>) -> Result<RecoveryChannel<T>> {
    if rho.dim() != ch.in_dim() {
        return Err(dim_mismatch("state does not match channel input"));
    }
    let d = ch.in_dim();
    let out = linalg::hermitian_part(&ch.apply(rho.matrix()));
    let eig = linalg::herm_eig(&out);
    let cut = T::tol(PINV_CUTOFF);
    let inv_sqrt = linalg::herm_apply(&out, |l| if l > cut { T::one() / l.sqrt() } else { T::zero() });
    let sqrt_rho = linalg::psd_sqrt(rho.matrix());
    let mut ops: Vec<CMatrix<T>> = ch
        .ops()
        .iter()
        .map(|e| &sqrt_rho * e.adjoint() * &inv_sqrt)
        .filter(|r| linalg::max_abs(r) > T::tol(PRUNE_TOL))
        .collect();
    let zero_ket = linalg::basis_ket::<T>(d, 0);
    let mut restricted = false;
    for (k, &l) in eig.values.iter().enumerate() {
        if l <= cut {
            restricted = true;
            let kernel_vec = eig.vectors.column(k).into_owned();
            ops.push(linalg::outer(&zero_ket, &kernel_vec));
        }
    }
    let kraus = KrausChannel::new(ops)?;
    let achieved_f = channel::composed_entanglement_fidelity(rho, ch, &kraus)?;
    Ok(RecoveryChannel { kraus, method: RecoveryMethod::Petz, achieved_f, restricted_support: restricted, stats: None })
}

/// `-sum_{j,m} |Tr[R_j E_m rho]|^2` with the `R_j` stacked as `d x d'` blocks of an isometry.
struct NegFidelity<T: Real> {
    a: Vec<CMatrix<T>>,
    d: usize,
}

impl<T: Real> NegFidelity<T> {
    fn overlaps(&self, w: &CMatrix<T>) -> Vec<Vec<nalgebra::Complex<T>>> {
        (0..w.nrows() / self.d)
            .map(|j| {
                let r = w.rows(j * self.d, self.d);
                self.a.iter().map(|a| (r * a).trace()).collect()
            })
            .collect()
    }
}

impl<T: Real> Objective<T> for NegFidelity<T> {
    fn value(&self, w: &CMatrix<T>) -> T {
        -self
            .overlaps(w)
            .iter()
            .flatten()
            .fold(T::zero(), |acc, t| acc + t.norm_sqr())
    }

    fn value_and_grad(&self, w: &CMatrix<T>) -> (T, CMatrix<T>) {
        let t = self.overlaps(w);
        let mut grad = CMatrix::zeros(w.nrows(), w.ncols());
        let mut f = T::zero();
        for (j, tj) in t.iter().enumerate() {
            let mut block = CMatrix::zeros(self.d, w.ncols());
            for (tjm, a) in tj.iter().zip(&self.a) {
                f += tjm.norm_sqr();
                block += a.adjoint() * (*tjm * real(T::lit(-2.0)));
            }
            grad.rows_mut(j * self.d, self.d).copy_from(&block);
        }
        (-f, grad)
    }
}

/// Maximizes the entanglement fidelity of `R ∘ E` over recoveries of Kraus
/// rank `opts.size` (default `d d'`). Restart 0 starts from the Petz map and
/// the Petz map itself is returned if nothing beats it.
pub fn optimize_recovery<T: Real>(
    rho: &DensityMatrix<T>,
    ch: &KrausChannel<T>,
    opts: &SearchOptions,
) -> Result<RecoveryChannel<T>> {
    let petz = petz_recovery(rho, ch)?;
    let (d, dp) = (ch.in_dim(), ch.out_dim());
    let rank = opts.size.unwrap_or(d * dp).max(1);
    let mut warm = petz.kraus.clone();
    if warm.num_ops() > rank {
        warm = kraus_from_choi(&choi_from_kraus(&warm), dp, d)?;
    }
    let first = if warm.num_ops() <= rank {
        let mut w = CMatrix::zeros(rank * d, dp);
        for (j, r) in warm.ops().iter().enumerate() {
            w.rows_mut(j * d, d).copy_from(r);
        }
        linalg::polar_isometry(&w)
    } else {
        optim::perturbed_canonical(rank * d, dp, sample::derive_seed(opts.seed, 0))
    };
    let obj = NegFidelity { a: ch.ops().iter().map(|e| e * rho.matrix()).collect(), d };
    let (run, stats) = optim::multistart(&obj, first, opts)?;
    let ops: Vec<CMatrix<T>> = (0..rank)
        .map(|j| run.v.rows(j * d, d).into_owned())
        .filter(|r| linalg::max_abs(r) > T::tol(PRUNE_TOL))
        .collect();
    let kraus = KrausChannel::new(ops)?;
    let achieved_f = channel::composed_entanglement_fidelity(rho, ch, &kraus)?;
    if achieved_f < petz.achieved_f {
        return Ok(RecoveryChannel { method: RecoveryMethod::Optimized, stats: Some(stats), ..petz });
    }
    Ok(RecoveryChannel {
        kraus,
        method: RecoveryMethod::Optimized,
        achieved_f,
        restricted_support: petz.restricted_support,
        stats: Some(stats),
    })
}

/// Optimizer settings and frame choice for [`verify_instance`].
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions<T: Real = f64> {
    pub eof: SearchOptions,
    pub classical: SearchOptions,
    pub recovery: SearchOptions,
    /// IC POVM on `E'` for the chain; defaults to [`icpovm::default_ic_povm`].
    pub povm: Option<Povm<T>>,
    pub certificates: bool,
}

impl<T: Real> VerifyOptions<T> {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            eof: SearchOptions::with_seed(sample::derive_seed(seed, 1)),
            classical: SearchOptions::with_seed(sample::derive_seed(seed, 2)),
            recovery: SearchOptions::with_seed(sample::derive_seed(seed, 3)),
            povm: None,
            certificates: false,
        }
    }
}

impl<T: Real> Default for VerifyOptions<T> {
    fn default() -> Self {
        Self::with_seed(0)
    }
}

/// Runs both recoveries, every measure and every bound on `(rho, E)`.
pub fn verify_instance<T: Real>(
    rho: &DensityMatrix<T>,
    ch: &KrausChannel<T>,
    opts: &VerifyOptions<T>,
) -> Result<BoundReport> {
    let tri = channel::global_state(rho, ch)?;
    let (d, dp) = (ch.in_dim(), ch.out_dim());
    let de = tri.rho_e.dim();
    let cut = Bipartition::two_party();
    let s = tri.input_entropy;
    let ic = tri.coherent_information();
    let i_rq = tri.mutual_info_rq();
    let i_re = tri.mutual_info_re();

    let eof_exact = tri.rho_rq.layout().dims() == [2, 2];
    let (eof, ensemble) = if eof_exact {
        // the closed form carries no ensemble; a certificate needs the search
        let ensemble = match opts.certificates {
            true => Some(entmeas::eof(&tri.rho_rq, &cut, &opts.eof)?.ensemble),
            false => None,
        };
        (entmeas::wootters_eof(&tri.rho_rq)?, ensemble)
    } else {
        let r = entmeas::eof(&tri.rho_rq, &cut, &opts.eof)?;
        (r.value, Some(r.ensemble))
    };
    let cc = entmeas::classical_correlations(&tri.rho_re, &cut, &opts.classical)?;
    let hashing = ic.max(T::zero());

    let petz = petz_recovery(rho, ch)?;
    let opt = optimize_recovery(rho, ch, &opts.recovery)?;

    let eps_c = s - ic;
    let eps_f = s - eof;
    let eps_half = s - i_rq / T::lit(2.0);
    let eps_hash = s - hashing;
    let mut eps_custom = BTreeMap::new();
    eps_custom.insert("half_mutual_information".to_string(), eps_half.as_f64());
    eps_custom.insert("hashing".to_string(), eps_hash.as_f64());

    let povm = match &opts.povm {
        Some(p) => p.clone(),
        None => icpovm::default_ic_povm(de)?,
    };
    let dual = icpovm::canonical_dual(&povm)?;
    let chain = bounds::chain_verify_with(&tri, &povm, &dual, eof, eof_exact)?;
    let gap = bounds::gap_bound_with_eof(&tri.rho_rq, &cut, eof)?;
    let decoupled = tri.decoupled_re();
    let fid = qalg::fidelity(&tri.rho_re, &decoupled)?;

    let converse = [&petz, &opt]
        .iter()
        .map(|r| bounds::converse_check(&r.method.to_string(), r.achieved_f, d, eps_c, eps_f))
        .collect::<Result<Vec<_>>>()?;

    let certificates = opts.certificates.then(|| Certificates {
        ensemble: ensemble.as_ref().map(|e| e.certificate()),
        measurement: cc.strategy.certificate(),
    });

    Ok(BoundReport {
        input_dim: d,
        output_dim: dp,
        env_dim: de,
        input_entropy: s.as_f64(),
        coherent_information: ic.as_f64(),
        mutual_information_rq: i_rq.as_f64(),
        mutual_information_re: i_re.as_f64(),
        eof: eof.as_f64(),
        eof_exact,
        classical_correlations: cc.value.as_f64(),
        log_negativity: entmeas::log_negativity(&tri.rho_rq, &cut)?.as_f64(),
        distillable: EntanglementInterval { lower: hashing.as_f64(), upper: eof.max(hashing).as_f64() },
        losses: LossReport { input_entropy: s.as_f64(), eps_c: eps_c.as_f64(), eps_f: eps_f.as_f64(), eps_custom },
        f_petz: petz.achieved_f.as_f64(),
        f_opt: opt.achieved_f.as_f64(),
        sw_direct: bounds::sw_direct_from_loss(eps_c)?.as_f64(),
        thm1: bounds::theorem1_bound(eps_f, d, dp)?.as_f64(),
        thm2: bounds::theorem2_bound(eps_half)?.as_f64(),
        cor1: bounds::corollary1_bound(eps_hash, d, dp)?.as_f64(),
        converse,
        gap,
        chain,
        factorization_t: bounds::factorization_distance(&tri).as_f64(),
        decoupling_fidelity_sq: (fid * fid).as_f64(),
        assumptions: vec![
            "thm2 uses E = I(R:Q')/2, which meets E <= I(R:Q')/2 with equality".to_string(),
            "cor1 uses E = max(0, I_c), which lies below E_f by the hashing inequality".to_string(),
        ],
        certificates,
        tolerance: bounds::report_tol::<T>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{channel_family, ChannelFamily};
    use crate::qalg::TensorLayout;

    fn half() -> DensityMatrix {
        DensityMatrix::maximally_mixed(TensorLayout::single(2))
    }

    #[test]
    fn petz_inverts_unitaries_and_isometries() {
        let mut rng = sample::rng_from_seed(2);
        let u = sample::haar_unitary::<f64, _>(2, &mut rng);
        let r = petz_recovery(&half(), &KrausChannel::unitary(u.clone()).unwrap()).unwrap();
        assert!((r.achieved_f - 1.0).abs() < 1e-9);
        assert_eq!(r.kraus.num_ops(), 1);
        assert!(linalg::max_abs(&(&r.kraus.ops()[0] - u.adjoint())) < 1e-9);
        let v = sample::haar_isometry::<f64, _>(3, 2, &mut rng);
        let r = petz_recovery(&half(), &KrausChannel::new(vec![v]).unwrap()).unwrap();
        assert!((r.achieved_f - 1.0).abs() < 1e-9);
        assert!(r.restricted_support);
    }

    #[test]
    fn petz_on_depolarizing() {
        let dep = channel_family(&ChannelFamily::Depolarizing { dim: 2, p: 0.1 }).unwrap();
        let r = petz_recovery(&half(), &dep).unwrap();
        assert!(r.achieved_f >= bounds::sw_direct_bound(&half(), &dep).unwrap());
        let again = channel::composed_entanglement_fidelity(&half(), &dep, &r.kraus).unwrap();
        assert!((again - r.achieved_f).abs() < 1e-10);
    }

    #[test]
    fn optimizer_examples() {
        let opts = SearchOptions { restarts: 3, ..SearchOptions::with_seed(4) };
        let r = optimize_recovery(&half(), &KrausChannel::identity(2), &opts).unwrap();
        assert!((r.achieved_f - 1.0).abs() < 1e-9);
        // isometric encoding followed by a fixed environment state is exactly correctable
        let mut rng = sample::rng_from_seed(8);
        let v = sample::haar_isometry::<f64, _>(3, 2, &mut rng);
        let ch = KrausChannel::new(vec![v * real(0.6), sample::haar_isometry(3, 2, &mut rng) * real(0.8)]).unwrap();
        let petz = petz_recovery(&half(), &ch).unwrap();
        let r = optimize_recovery(&half(), &ch, &opts).unwrap();
        assert!(r.achieved_f >= petz.achieved_f - 1e-9);
        let mut prev = 1.0;
        for p in [0.05, 0.1, 0.2] {
            let dep = channel_family(&ChannelFamily::Depolarizing { dim: 2, p }).unwrap();
            let f = optimize_recovery(&half(), &dep, &opts).unwrap().achieved_f;
            assert!((f - (1.0 - 0.75 * p)).abs() < 1e-8, "p={p}: {f}");
            assert!(f <= prev + 1e-12);
            prev = f;
        }
    }

    #[test]
    fn verify_identity_channel() {
        let r = verify_instance(&half(), &KrausChannel::identity(2), &VerifyOptions::default()).unwrap();
        assert!(r.losses.eps_c.abs() < 1e-12 && r.losses.eps_f.abs() < 1e-12);
        for (_, b) in r.bounds() {
            assert!((b - 1.0).abs() < 1e-9);
        }
        assert!((r.f_opt - 1.0).abs() < 1e-12);
        assert!(r.violations().is_empty(), "{:?}", r.violations());
    }

    #[test]
    fn verify_noisy_qubit_channels() {
        for fam in [
            ChannelFamily::Depolarizing { dim: 2, p: 0.05 },
            ChannelFamily::AmplitudeDamping { gamma: 0.1 },
        ] {
            let ch = channel_family(&fam).unwrap();
            let r = verify_instance(&half(), &ch, &VerifyOptions::default()).unwrap();
            assert!(r.violations().is_empty(), "{fam}: {:?}", r.violations());
        }
    }

    #[test]
    fn verify_qutrit_channel_uses_numerical_eof() {
        let ch = channel_family::<f64>(&ChannelFamily::Depolarizing { dim: 3, p: 0.05 }).unwrap();
        let rho = DensityMatrix::maximally_mixed(TensorLayout::single(3));
        let mut opts = VerifyOptions::with_seed(1);
        opts.certificates = true;
        let r = verify_instance(&rho, &ch, &opts).unwrap();
        assert!(!r.eof_exact);
        assert!(r.violations().is_empty(), "{:?}", r.violations());
        let cert = r.certificates.unwrap();
        let total: f64 = cert.ensemble.unwrap().weights.iter().sum();
        assert!((total - 1.0).abs() < 1e-10);
    }
}
