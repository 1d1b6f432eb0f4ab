//! Direct, converse and gap bounds for approximate error correction, and a
//! line-by-line evaluation of the decoupling chain
//!
//! ```text
//! ||rho^{RE'} - rho^R ⊗ rho^{E'}||_1^2
//!   = ||sum_i p_i (rho_i^R - rho^R) ⊗ P~_i||_1^2
//!  <= sum_i p_i ||rho_i^R - rho^R||_1^2 ||P~_i||_1^2
//!  <= K sum_i p_i ||rho_i^R - rho^R||_1^2
//!  <= 2K sum_i p_i D(rho_i^R || rho^R)
//!  <= 2K C^{E'->R}(rho^{RE'})
//!   = 2K (S(rho^Q) - E_f(rho^{RQ'}))
//! ```
//!
//! All entropies are in bits. Bound values below zero are returned as is.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::channel::{self, KrausChannel, TripartiteOutput};
use crate::entmeas::{self, EnsembleCertificate, EntanglementInterval, MeasurementCertificate, SearchOptions};
use crate::error::{dim_mismatch, Error, Result};
use crate::icpovm::{self, DualFrame, Povm};
use crate::linalg::{self, real, CMatrix};
use crate::qalg::{self, Bipartition, DensityMatrix, TensorLayout};
use crate::scalar::Real;

/// Slack allowed on every certified inequality.
pub const SLACK_TOL: f64 = 1e-9;

/// Slack allowed when comparing achieved fidelities with direct bounds.
pub const DIRECT_TOL: f64 = 1e-6;

/// Loss values in `[-EPS_CLAMP, 0)` are numerical noise and clamp to zero.
pub const EPS_CLAMP: f64 = 1e-9;

/// Positive losses up to this size are rounding noise of an entropy
/// difference and count as zero; the square roots in the bounds would
/// otherwise magnify them to about `1e-7`.
pub const EPS_ZERO: f64 = 1e-12;

/// Slack for the invariants of a report computed in scalar `T`; single
/// precision accumulates error over a dozen entropies.
pub fn report_tol<T: Real>() -> f64 {
    SLACK_TOL.max(10.0 * T::TOL_FLOOR)
}

/// Value of the Fano-type function `g`, or a marker that its argument left
/// the interval `[0, 1/2]` on which `g` is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GBound<T: Real = f64> {
    Value(T),
    Vacuous,
}

impl<T: Real> GBound<T> {
    pub fn value(self) -> Option<T> {
        match self {
            Self::Value(v) => Some(v),
            Self::Vacuous => None,
        }
    }

    pub fn is_vacuous(self) -> bool {
        matches!(self, Self::Vacuous)
    }

    /// `lhs <= g + tol`; always true when vacuous.
    pub fn admits(self, lhs: T, tol: T) -> bool {
        match self {
            Self::Value(v) => lhs <= v + tol,
            Self::Vacuous => true,
        }
    }
}

impl<T: Real> Serialize for GBound<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.value().map(|v| v.as_f64()).serialize(s)
    }
}

/// `g(x, d) = 4x log2(d/x)` for `0 < x <= 1/2`, `g(0) = 0`, vacuous beyond 1/2.
pub fn g<T: Real>(x: T, d: usize) -> Result<GBound<T>> {
    if x < T::zero() || !x.is_finite_real() {
        return Err(Error::InvalidParameter(format!("g is defined for x >= 0, got {x}")));
    }
    if d == 0 {
        return Err(Error::InvalidParameter("g needs a positive dimension".into()));
    }
    if x == T::zero() {
        return Ok(GBound::Value(T::zero()));
    }
    if x > T::lit(0.5) {
        return Ok(GBound::Vacuous);
    }
    Ok(GBound::Value(T::lit(4.0) * x * (T::lit(d as f64) / x).log2()))
}

/// Clamps noise-level negatives; a clearly negative loss is a caller error.
fn clamp_eps<T: Real>(eps: T, what: &str) -> Result<T> {
    if eps.abs() <= T::tol(EPS_ZERO) {
        Ok(T::zero())
    } else if eps >= T::zero() {
        Ok(eps)
    } else if eps >= -T::tol(EPS_CLAMP) {
        Ok(T::zero())
    } else {
        Err(Error::InvalidParameter(format!("{what} = {eps} is negative")))
    }
}

fn decoupling_constant<T: Real>(d: usize, dp: usize) -> Result<T> {
    if d < 2 || dp < 2 {
        return Err(Error::InvalidParameter(format!("dimensions must be at least 2 (got d={d}, d'={dp})")));
    }
    Ok(T::lit((2 * d * dp - 1) as f64).powi(2))
}

/// `1 - sqrt(2 eps_c)` with `eps_c = S(rho^Q) - I_c`.
pub fn sw_direct_from_loss<T: Real>(eps_c: T) -> Result<T> {
    Ok(T::one() - (T::lit(2.0) * clamp_eps(eps_c, "eps_c")?).sqrt())
}

pub fn sw_direct_bound<T: Real>(rho: &DensityMatrix<T>, ch: &KrausChannel<T>) -> Result<T> {
    let tri = channel::global_state(rho, ch)?;
    sw_direct_from_loss(tri.input_entropy - tri.coherent_information())
}

/// `1 - sqrt(2 (2 d d' - 1)^2 eps_f)`, with `d = dim Q` and `d' = dim Q'`.
pub fn theorem1_bound<T: Real>(eps_f: T, d: usize, dp: usize) -> Result<T> {
    let c = decoupling_constant::<T>(d, dp)?;
    Ok(T::one() - (T::lit(2.0) * c * clamp_eps(eps_f, "eps_f")?).sqrt())
}

/// `1 - 2 sqrt(eps)` for `eps = S - E` with a measure satisfying `E <= I(R:Q')/2`.
pub fn theorem2_bound<T: Real>(eps: T) -> Result<T> {
    Ok(T::one() - T::lit(2.0) * clamp_eps(eps, "eps")?.sqrt())
}

/// Theorem 1's formula applied to `eps = S - E` for a measure with `E <= E_f`.
pub fn corollary1_bound<T: Real>(eps_dot: T, d: usize, dp: usize) -> Result<T> {
    theorem1_bound(eps_dot, d, dp)
}

/// `g(1 - F, d)`: any recovery reaching fidelity `F` forces every loss below this.
pub fn converse_bound<T: Real>(f: T, d: usize) -> Result<GBound<T>> {
    if f < -T::tol(EPS_CLAMP) || f > T::one() + T::tol(EPS_CLAMP) || !f.is_finite_real() {
        return Err(Error::InvalidParameter(format!("fidelity {f} outside [0, 1]")));
    }
    g((T::one() - f).max(T::zero()), d)
}

/// `||rho^{RE'} - rho^R ⊗ rho^{E'}||_1`.
pub fn factorization_distance<T: Real>(tri: &TripartiteOutput<T>) -> T {
    linalg::hermitian_trace_norm(&(tri.rho_re.matrix() - tri.decoupled_re().matrix()))
}

/// Both sides of the entanglement-gap inequality
/// `S(A) - I_c^{A->B} <= g(sqrt(2 (2 d_A d_B - 1)^2 eps_f), d_A)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapReport {
    /// Parties were exchanged to satisfy `S(A) <= S(B)`.
    pub swapped: bool,
    pub entropy_a: f64,
    pub coherent_information: f64,
    pub eof: f64,
    pub eps_f: f64,
    pub lhs: f64,
    pub argument: f64,
    /// `None` when the argument exceeds 1/2.
    pub rhs: Option<f64>,
    pub holds: bool,
}

/// Gap inequality with `eps_f` from `eof_value`.
pub fn gap_bound_with_eof<T: Real>(sigma: &DensityMatrix<T>, cut: &Bipartition, eof_value: T) -> Result<GapReport> {
    let ra = sigma.reduce(&sorted(cut.a()))?;
    let rb = sigma.reduce(&sorted(cut.b()))?;
    let (sa0, sb0) = (qalg::von_neumann_entropy(&ra), qalg::von_neumann_entropy(&rb));
    let swapped = sa0 > sb0;
    let (sa, sb, da, db) = if swapped { (sb0, sa0, rb.dim(), ra.dim()) } else { (sa0, sb0, ra.dim(), rb.dim()) };
    let sab = qalg::von_neumann_entropy(sigma);
    let ic = sb - sab;
    let lhs = sa - ic;
    let eps_f = clamp_eps(sa - eof_value, "eps_f")?;
    let c = T::lit((2 * da * db - 1) as f64).powi(2);
    let argument = (T::lit(2.0) * c * eps_f).sqrt();
    let rhs = g(argument, da)?;
    Ok(GapReport {
        swapped,
        entropy_a: sa.as_f64(),
        coherent_information: ic.as_f64(),
        eof: eof_value.as_f64(),
        eps_f: eps_f.as_f64(),
        lhs: lhs.as_f64(),
        argument: argument.as_f64(),
        rhs: rhs.value().map(|v| v.as_f64()),
        holds: rhs.admits(lhs, T::tol(SLACK_TOL)),
    })
}

/// Gap inequality with the EoF from [`entmeas::best_eof`].
pub fn gap_bound<T: Real>(sigma: &DensityMatrix<T>, cut: &Bipartition, opts: &SearchOptions) -> Result<GapReport> {
    let e = entmeas::best_eof(sigma, cut, opts)?;
    gap_bound_with_eof(sigma, cut, e)
}

fn sorted(f: &[usize]) -> Vec<usize> {
    let mut v = f.to_vec();
    v.sort_unstable();
    v
}

/// One inequality of the chain: `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainStep {
    pub step: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`
    pub slack: f64,
    /// Whether a negative slack would demonstrate a genuine violation. False
    /// only for the monogamy step when the EoF is a numerical upper bound.
    pub sound: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    /// The six chain values, top to bottom.
    pub lines: Vec<f64>,
    pub steps: Vec<ChainStep>,
    /// Largest entry of `sum_i p_i (rho_i^R - rho^R) ⊗ P~_i - (rho^{RE'} - rho^R ⊗ rho^{E'})`.
    pub identity_residual: f64,
    pub k_constant: f64,
    /// `sum_i p_i D(rho_i^R || rho^R)` for the supplied POVM.
    pub povm_value: f64,
    pub eof: f64,
    pub eof_exact: bool,
    /// Smallest slack among sound steps.
    pub min_slack: f64,
}

impl ChainReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.steps.iter().filter(|s| s.sound).all(|s| s.slack >= -tol) && self.identity_residual <= tol
    }
}

/// Evaluates the chain with an IC POVM on `E'` and a dual frame for it.
pub fn chain_verify<T: Real>(
    rho: &DensityMatrix<T>,
    ch: &KrausChannel<T>,
    povm: &Povm<T>,
    dual: &DualFrame<T>,
    opts: &SearchOptions,
) -> Result<ChainReport> {
    let tri = channel::global_state(rho, ch)?;
    let eof_exact = tri.rho_rq.layout().dims() == [2, 2];
    let e = entmeas::best_eof(&tri.rho_rq, &Bipartition::two_party(), opts)?;
    chain_verify_with(&tri, povm, dual, e, eof_exact)
}

/// Chain evaluation on a prepared global state with a given EoF value.
pub fn chain_verify_with<T: Real>(
    tri: &TripartiteOutput<T>,
    povm: &Povm<T>,
    dual: &DualFrame<T>,
    eof_value: T,
    eof_exact: bool,
) -> Result<ChainReport> {
    let dr = tri.rho_r.dim();
    let de = tri.rho_e.dim();
    if povm.dim() != de {
        return Err(dim_mismatch(format!("POVM of dimension {} on an environment of dimension {de}", povm.dim())));
    }
    if dual.duals().len() != povm.len() {
        return Err(dim_mismatch("dual frame and POVM differ in length"));
    }
    let ic = icpovm::is_informationally_complete(povm);
    if !ic.informationally_complete {
        return Err(Error::NotInformationallyComplete { rank: ic.rank, required: ic.required });
    }
    let re = tri.rho_re.matrix();
    let rho_r = tri.rho_r.matrix();
    let layout = TensorLayout::bipartite(dr, de);
    let k = dual.k_constant();
    let two = T::lit(2.0);
    let cutoff = T::eig_cutoff();

    let diff = re - tri.decoupled_re().matrix();
    let line1 = linalg::hermitian_trace_norm(&diff).powi(2);

    let mut rebuilt = CMatrix::zeros(dr * de, dr * de);
    let (mut line2, mut line3, mut line4) = (T::zero(), T::zero(), T::zero());
    let mut povm_value = T::zero();
    for (p_el, p_dual) in povm.elements().iter().zip(dual.duals()) {
        let lifted = linalg::kron(&linalg::identity(dr), p_el);
        let (unnorm, _) = qalg::partial_trace(&(re * lifted), &layout, &[0])?;
        let unnorm = linalg::hermitian_part(&unnorm);
        let p = linalg::trace(&unnorm).re;
        rebuilt += linalg::kron(&(&unnorm - rho_r * real(p)), p_dual);
        if p <= cutoff {
            continue;
        }
        let rho_i = unnorm / real(p);
        let dist = linalg::hermitian_trace_norm(&(&rho_i - rho_r)).powi(2);
        let dual_norm = linalg::hermitian_trace_norm(p_dual);
        line2 += p * dist * dual_norm.powi(2);
        line3 += p * dist;
        let d_rel = qalg::relative_entropy_raw(&rho_i, rho_r)?;
        line4 += p * d_rel;
        povm_value += p * d_rel;
    }
    let identity_residual = linalg::max_abs(&(rebuilt - &diff));
    line3 *= k;
    line4 *= two * k;
    // step v evaluated with the supplied POVM: S(R) - sum_i p_i S(rho_i^R)
    let holevo = entmeas::conditional_value(&tri.rho_re, &Bipartition::two_party(), povm)?;
    let line5 = two * k * holevo;
    let line6 = two * k * (tri.input_entropy - eof_value);

    let lines = [line1, line2, line3, line4, line5, line6].map(|x| x.as_f64());
    let names = ["convexity", "frame_constant", "pinsker", "measurement", "monogamy"];
    let steps: Vec<ChainStep> = (0..5)
        .map(|i| ChainStep {
            step: names[i],
            lhs: lines[i],
            rhs: lines[i + 1],
            slack: lines[i + 1] - lines[i],
            sound: i < 4 || eof_exact,
        })
        .collect();
    let min_slack = steps.iter().filter(|s| s.sound).map(|s| s.slack).fold(f64::INFINITY, f64::min);
    Ok(ChainReport {
        lines: lines.to_vec(),
        steps,
        identity_residual: identity_residual.as_f64(),
        k_constant: k.as_f64(),
        povm_value: povm_value.as_f64(),
        eof: eof_value.as_f64(),
        eof_exact,
        min_slack,
    })
}

/// Information losses relative to `S(rho^Q)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LossReport {
    pub input_entropy: f64,
    /// `S - I_c`
    pub eps_c: f64,
    /// `S - E_f`
    pub eps_f: f64,
    /// `S - E` for further measures, by name.
    pub eps_custom: BTreeMap<String, f64>,
}

/// Converse check for one recovery channel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConverseCheck {
    pub method: String,
    pub fidelity: f64,
    /// `g(1 - F, d)`, `None` when vacuous.
    pub g: Option<f64>,
    /// `S - I_c <= g`
    pub coherent_holds: bool,
    /// `S - E_f <= g`
    pub eof_holds: bool,
}

pub fn converse_check<T: Real>(method: &str, fidelity: T, d: usize, eps_c: T, eps_f: T) -> Result<ConverseCheck> {
    let gb = converse_bound(fidelity.min(T::one()), d)?;
    let tol = T::tol(SLACK_TOL);
    Ok(ConverseCheck {
        method: method.to_string(),
        fidelity: fidelity.as_f64(),
        g: gb.value().map(|v| v.as_f64()),
        coherent_holds: gb.admits(eps_c, tol),
        eof_holds: gb.admits(eps_f, tol),
    })
}

/// Optimal ensemble and measurement behind a report's EoF and `C` values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificates {
    /// Ensemble found by the numerical search; for two-qubit states it
    /// certifies an upper bound that matches the closed-form value.
    pub ensemble: Option<EnsembleCertificate>,
    pub measurement: MeasurementCertificate,
}

/// A failed invariant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub invariant: &'static str,
    pub detail: String,
}

/// Every bound and check on one `(rho, E)` instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub input_dim: usize,
    pub output_dim: usize,
    pub env_dim: usize,
    pub input_entropy: f64,
    pub coherent_information: f64,
    pub mutual_information_rq: f64,
    pub mutual_information_re: f64,
    pub eof: f64,
    /// EoF from the two-qubit closed form rather than the numerical search.
    pub eof_exact: bool,
    /// Optimized `C^{E'->R}(rho^{RE'})`.
    pub classical_correlations: f64,
    pub log_negativity: f64,
    pub distillable: EntanglementInterval,
    pub losses: LossReport,
    pub f_petz: f64,
    pub f_opt: f64,
    pub sw_direct: f64,
    pub thm1: f64,
    pub thm2: f64,
    pub cor1: f64,
    pub converse: Vec<ConverseCheck>,
    pub gap: GapReport,
    pub chain: ChainReport,
    pub factorization_t: f64,
    /// `F(rho^{RE'}, rho^R ⊗ rho^{E'})^2`, recorded without asserting an order against `f_petz`.
    pub decoupling_fidelity_sq: f64,
    /// Measure conditions taken as given by the bound evaluators.
    pub assumptions: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificates: Option<Certificates>,
    /// Slack used by [`BoundReport::violations`].
    #[serde(skip)]
    pub tolerance: f64,
}

impl BoundReport {
    /// Invariants that must hold on every instance.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut fail = |invariant: &'static str, detail: String| out.push(Violation { invariant, detail });
        let tol = self.tolerance.max(SLACK_TOL);
        let s = self.input_entropy;

        for st in self.chain.steps.iter().filter(|st| st.sound && st.slack < -tol) {
            fail("chain_slack", format!("step {} has slack {:e}", st.step, st.slack));
        }
        if self.chain.identity_residual > tol {
            fail("chain_identity", format!("reconstruction residual {:e}", self.chain.identity_residual));
        }
        for (name, b) in self.bounds() {
            if b > 1.0 + tol.max(1e-12) {
                fail("bound_at_most_one", format!("{name} = {b}"));
            }
            if self.f_opt < b - tol.max(DIRECT_TOL) {
                fail("direct_vs_achieved", format!("F_opt = {} below {name} = {b}", self.f_opt));
            }
        }
        if self.f_opt < self.f_petz - tol {
            fail("optimized_vs_petz", format!("F_opt = {} < F_petz = {}", self.f_opt, self.f_petz));
        }
        for c in &self.converse {
            if !c.coherent_holds {
                fail("converse_coherent", format!("{}: S - I_c = {} > g = {:?}", c.method, self.losses.eps_c, c.g));
            }
            if !c.eof_holds && self.eof_exact {
                fail("converse_eof", format!("{}: S - E_f = {} > g = {:?}", c.method, self.losses.eps_f, c.g));
            }
        }
        if self.coherent_information > self.eof + tol {
            fail("coherent_vs_eof", format!("I_c = {} > E_f = {}", self.coherent_information, self.eof));
        }
        if self.classical_correlations > self.mutual_information_re + tol {
            fail(
                "classical_vs_mutual",
                format!("C = {} > I(R:E') = {}", self.classical_correlations, self.mutual_information_re),
            );
        }
        if self.eof_exact && self.classical_correlations > s - self.eof + tol {
            fail("monogamy", format!("C = {} > S - E_f = {}", self.classical_correlations, s - self.eof));
        }
        let t2 = self.factorization_t.powi(2);
        if self.eof_exact && self.input_dim >= 2 && self.output_dim >= 2 {
            let c = ((2 * self.input_dim * self.output_dim - 1) as f64).powi(2);
            if t2 > 2.0 * c * self.losses.eps_f + tol {
                fail("decoupling_eof", format!("t^2 = {t2:e} > 2(2dd'-1)^2 eps_f"));
            }
        }
        if 0.5 * t2 > 2.0 * s - self.mutual_information_rq + tol {
            fail("decoupling_mutual", format!("t^2/2 = {:e} > 2S - I(R:Q')", 0.5 * t2));
        }
        if !self.gap.holds {
            fail("gap", format!("lhs {} > rhs {:?}", self.gap.lhs, self.gap.rhs));
        }
        if self.distillable.lower > self.distillable.upper + tol {
            fail("distillable_interval", format!("{:?}", self.distillable));
        }
        out
    }

    /// The four direct bounds by name.
    pub fn bounds(&self) -> [(&'static str, f64); 4] {
        [("sw_direct", self.sw_direct), ("thm1", self.thm1), ("thm2", self.thm2), ("cor1", self.cor1)]
    }

    /// Flat `(column, value)` list for one CSV row; `None` marks a vacuous bound.
    pub fn csv_fields(&self) -> Vec<(&'static str, Option<f64>)> {
        let conv = |m: &str| self.converse.iter().find(|c| c.method == m).and_then(|c| c.g);
        vec![
            ("S", Some(self.input_entropy)),
            ("I_c", Some(self.coherent_information)),
            ("E_f", Some(self.eof)),
            ("C", Some(self.classical_correlations)),
            ("E_N", Some(self.log_negativity)),
            ("hashing", Some(self.distillable.lower)),
            ("eps_c", Some(self.losses.eps_c)),
            ("eps_f", Some(self.losses.eps_f)),
            ("F_petz", Some(self.f_petz)),
            ("F_opt", Some(self.f_opt)),
            ("sw_direct", Some(self.sw_direct)),
            ("thm1", Some(self.thm1)),
            ("thm2", Some(self.thm2)),
            ("cor1", Some(self.cor1)),
            ("g_petz", conv("petz")),
            ("g_opt", conv("optimized")),
            ("gap_lhs", Some(self.gap.lhs)),
            ("gap_rhs", self.gap.rhs),
            ("factorization_t", Some(self.factorization_t)),
            ("K", Some(self.chain.k_constant)),
            ("min_chain_slack", Some(self.chain.min_slack)),
        ]
    }
}
