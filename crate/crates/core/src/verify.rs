//! Seeded invariant suites over random and swept instances.
//!
//! Every suite is a pure function of its [`SuiteConfig`]: instances are drawn
//! from seeds derived per row, evaluated in parallel and gathered in row order,
//! so reports do not depend on the number of worker threads.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{self, BoundReport, SLACK_TOL};
use crate::channel::{self, channel_family, ChannelFamily, KrausChannel};
use crate::entmeas::{self, SearchOptions};
use crate::error::{Error, Result};
use crate::icpovm::{self, FrameKind, Povm};
use crate::linalg::{self, real};
use crate::qalg::{self, Bipartition, DensityMatrix, TensorLayout};
use crate::recovery::{self, VerifyOptions};
use crate::report::{Cell, Table};
use crate::sample::{self, derive_seed, rng_from_seed};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    /// `I(R:Q') + I(R:E') = 2 S` and related entropy identities.
    Identities,
    /// Pinsker and Fuchs-van de Graaf on random state pairs.
    Pinsker,
    /// Reconstruction and dual norms of the shipped frames.
    Frames,
    /// Numerical EoF against the two-qubit closed form.
    Eof,
    /// One-sided monogamy with the numerical classical correlations.
    Monogamy,
    /// The six-line chain, the decoupling bound and the converse on random qubit channels.
    Chain,
    /// Direct and converse bounds along a depolarizing sweep.
    Bounds,
    /// Entanglement-gap inequality on two-qubit states.
    Gap,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Identities,
        Suite::Pinsker,
        Suite::Frames,
        Suite::Eof,
        Suite::Monogamy,
        Suite::Chain,
        Suite::Bounds,
        Suite::Gap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Pinsker => "pinsker",
            Suite::Frames => "frames",
            Suite::Eof => "eof",
            Suite::Monogamy => "monogamy",
            Suite::Chain => "chain",
            Suite::Bounds => "bounds",
            Suite::Gap => "gap",
        }
    }

    /// Instance count used when [`SuiteConfig::samples`] is unset.
    pub fn default_samples(self) -> usize {
        match self {
            Suite::Identities | Suite::Pinsker | Suite::Chain | Suite::Gap => 200,
            Suite::Frames => 100,
            Suite::Eof => 100,
            Suite::Monogamy => 50,
            Suite::Bounds => 21,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Instances per suite (per dimension pair for `identities`, grid points for `bounds`).
    pub samples: Option<usize>,
    /// Templates for the three searches; their seeds are replaced per instance.
    pub eof: SearchOptions,
    pub classical: SearchOptions,
    pub recovery: SearchOptions,
}

impl SuiteConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            samples: None,
            eof: SearchOptions::default(),
            classical: SearchOptions::default(),
            recovery: SearchOptions::default(),
        }
    }

    /// Options for [`recovery::verify_instance`] with the templates reseeded from `seed`.
    pub fn verify_options(&self, seed: u64) -> VerifyOptions<f64> {
        let base = VerifyOptions::<f64>::with_seed(seed);
        VerifyOptions {
            eof: reseeded(&self.eof, base.eof.seed),
            classical: reseeded(&self.classical, base.classical.seed),
            recovery: reseeded(&self.recovery, base.recovery.seed),
            ..base
        }
    }
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self::with_seed(0)
    }
}

fn reseeded(template: &SearchOptions, seed: u64) -> SearchOptions {
    SearchOptions { seed, ..template.clone() }
}

/// Largest observed value of a quantity that must not exceed `tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub tolerance: f64,
    pub samples: usize,
    /// `None` when no instance produced an observation.
    pub worst: Option<f64>,
    /// Table row holding the worst observation.
    pub worst_row: Option<usize>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub table: Table,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// One row per check.
    pub fn checks_table(&self) -> Table {
        let mut t = Table::new(["check", "samples", "worst", "tolerance", "worst_row", "passed"]);
        for c in &self.checks {
            t.push(vec![
                c.name.into(),
                c.samples.into(),
                Cell::opt(c.worst),
                c.tolerance.into(),
                c.worst_row.map_or(Cell::Missing, Cell::from),
                c.passed.into(),
            ]);
        }
        t
    }
}

struct Row {
    cells: Vec<Cell>,
    obs: Vec<(&'static str, f64)>,
}

fn assemble(suite: Suite, cfg: &SuiteConfig, columns: &[&str], checks: &[(&'static str, f64)], rows: Vec<Row>) -> SuiteReport {
    let mut out: Vec<Check> = checks
        .iter()
        .map(|&(name, tolerance)| Check { name, tolerance, samples: 0, worst: None, worst_row: None, passed: true })
        .collect();
    let mut table = Table::new(columns.iter().copied());
    for (i, row) in rows.into_iter().enumerate() {
        for (name, value) in row.obs {
            let c = out.iter_mut().find(|c| c.name == name).expect("observation of a declared check");
            c.samples += 1;
            let worse = match c.worst {
                None => true,
                Some(w) => !w.is_nan() && (value.is_nan() || value > w),
            };
            if worse {
                c.worst = Some(value);
                c.worst_row = Some(i);
            }
        }
        table.push(row.cells);
    }
    for c in &mut out {
        c.passed = c.worst.is_none_or(|w| w <= c.tolerance);
    }
    SuiteReport { suite, seed: cfg.seed, checks: out, table }
}

fn par_rows(n: usize, f: impl Fn(usize) -> Result<Row> + Sync + Send) -> Result<Vec<Row>> {
    (0..n).into_par_iter().map(f).collect()
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let n = cfg.samples.unwrap_or(suite.default_samples());
    if n == 0 {
        return Err(Error::InvalidParameter("a suite needs at least one sample".into()));
    }
    match suite {
        Suite::Identities => identities(cfg, n),
        Suite::Pinsker => pinsker(cfg, n),
        Suite::Frames => frames(cfg, n),
        Suite::Eof => eof_oracle(cfg, n),
        Suite::Monogamy => monogamy(cfg, n),
        Suite::Chain => chain(cfg, n),
        Suite::Bounds => bounds_sweep(cfg, n),
        Suite::Gap => gap(cfg, n),
    }
}

fn random_channel(din: usize, dout: usize, rng: &mut impl Rng) -> Result<(usize, KrausChannel)> {
    let k = rng.random_range(din.div_ceil(dout)..=din * dout);
    let seed = rng.random();
    Ok((k, channel_family(&ChannelFamily::RandomRankK { in_dim: din, out_dim: dout, k, seed })?))
}

const PAIRS: [(usize, usize); 4] = [(2, 2), (2, 3), (3, 2), (3, 3)];

fn identities(cfg: &SuiteConfig, n: usize) -> Result<SuiteReport> {
    let rows = par_rows(PAIRS.len() * n, |i| {
        let (d, dp) = PAIRS[i / n];
        let mut rng = rng_from_seed(derive_seed(cfg.seed, i as u64));
        let rho = sample::ginibre_state::<f64, _>(TensorLayout::single(d), &mut rng);
        let (k, ch) = random_channel(d, dp, &mut rng)?;
        let tri = channel::global_state(&rho, &ch)?;
        let s = tri.input_entropy;
        let (i_rq, i_re, ic) = (tri.mutual_info_rq(), tri.mutual_info_re(), tri.coherent_information());
        let residual = (i_rq + i_re - 2.0 * s).abs();
        let mut row = Row {
            cells: vec![i.into(), d.into(), dp.into(), k.into(), s.into(), i_rq.into(), i_re.into(), ic.into(), residual.into()],
            obs: vec![
                ("mutual_information_sum", residual),
                ("loss_is_environment_information", ((s - ic) - i_re).abs()),
                ("coherent_information_range", ic.abs() - s),
            ],
        };
        if d == dp {
            let f = channel::entanglement_fidelity(&rho, &ch)?;
            let f_purif = channel::entanglement_fidelity_on_purification(&qalg::purify(&rho), &ch)?;
            row.obs.push(("fidelity_on_purification", (f - f_purif).abs()));
        }
        Ok(row)
    })?;
    Ok(assemble(
        Suite::Identities,
        cfg,
        &["index", "d", "d_out", "k", "S", "I_RQ", "I_RE", "I_c", "residual"],
        &[
            ("mutual_information_sum", SLACK_TOL),
            ("loss_is_environment_information", SLACK_TOL),
            ("coherent_information_range", SLACK_TOL),
            ("fidelity_on_purification", SLACK_TOL),
        ],
        rows,
    ))
}

fn pinsker(cfg: &SuiteConfig, n: usize) -> Result<SuiteReport> {
    let ln2 = std::f64::consts::LN_2;
    let rows = par_rows(n, |i| {
        let d = 2 + i % 3;
        let mut rng = rng_from_seed(derive_seed(cfg.seed, i as u64));
        let layout = TensorLayout::single(d);
        let rho = sample::ginibre_state::<f64, _>(layout.clone(), &mut rng);
        let sigma = sample::ginibre_state::<f64, _>(layout, &mut rng);
        let norm = qalg::trace_norm(&(rho.matrix() - sigma.matrix()));
        let rel = qalg::relative_entropy(&rho, &sigma)?;
        let f = qalg::fidelity(&rho, &sigma)?;
        let half = 0.5 * norm;

        let (din, dout) = PAIRS[i % PAIRS.len()];
        let input = sample::ginibre_state::<f64, _>(TensorLayout::single(din), &mut rng);
        let (_, ch) = random_channel(din, dout, &mut rng)?;
        let tri = channel::global_state(&input, &ch)?;
        let t = bounds::factorization_distance(&tri);
        let budget = 2.0 * tri.input_entropy - tri.mutual_info_rq();
        let joint = sample::ginibre_state::<f64, _>(TensorLayout::bipartite(din, dout), &mut rng);
        let product = joint.reduce(&[0])?.tensor(&joint.reduce(&[1])?);
        let info_gap = qalg::relative_entropy(&joint, &product)? - qalg::mutual_information(&joint, &Bipartition::two_party())?;
        Ok(Row {
            cells: vec![i.into(), d.into(), half.into(), rel.into(), f.into(), t.into(), budget.into()],
            obs: vec![
                ("pinsker", norm * norm - 2.0 * ln2 * rel),
                ("pinsker_bits", norm * norm - 2.0 * rel),
                ("mutual_information_as_divergence", info_gap.abs()),
                ("fuchs_van_de_graaf_lower", (1.0 - f) - half),
                ("fuchs_van_de_graaf_upper", half - (1.0 - f * f).max(0.0).sqrt()),
                ("decoupling_mutual", 0.5 * t * t - budget),
            ],
        })
    })?;
    Ok(assemble(
        Suite::Pinsker,
        cfg,
        &["index", "d", "trace_distance", "relative_entropy", "fidelity", "factorization_t", "2S_minus_I_RQ"],
        &[
            ("pinsker", SLACK_TOL),
            ("pinsker_bits", SLACK_TOL),
            ("mutual_information_as_divergence", SLACK_TOL),
            ("fuchs_van_de_graaf_lower", SLACK_TOL),
            ("fuchs_van_de_graaf_upper", SLACK_TOL),
            ("decoupling_mutual", SLACK_TOL),
        ],
        rows,
    ))
}

fn frames(cfg: &SuiteConfig, n: usize) -> Result<SuiteReport> {
    let design = icpovm::qubit_clifford_group::<f64>();
    let fiducial = qalg::PureState::basis(TensorLayout::single(2), 0);
    let shipped: Vec<(&str, Povm)> = vec![
        ("sic_d2", icpovm::named_frame(FrameKind::Sic, 2)?),
        ("mub_d2", icpovm::named_frame(FrameKind::Mub, 2)?),
        ("clifford_orbit_d2", icpovm::covariant_design_povm(&design, &fiducial)?),
        ("sic_d3", icpovm::named_frame(FrameKind::Sic, 3)?),
        ("mub_d3", icpovm::named_frame(FrameKind::Mub, 3)?),
    ];
    let thirteen_thirds = 13.0 / 3.0;
    let rows = shipped
        .par_iter()
        .enumerate()
        .map(|(i, (name, povm))| {
            let r = icpovm::frame_report(name, povm, n, derive_seed(cfg.seed, i as u64))?;
            let mut obs = vec![("reconstruction", r.reconstruction_residual)];
            match *name {
                "clifford_orbit_d2" => {
                    obs.push(("clifford_orbit_dual_norm", (r.max_dual_trace_norm - 3.0).abs()));
                    obs.push(("clifford_orbit_dual_norm", (r.min_dual_trace_norm - 3.0).abs()));
                }
                "sic_d2" => obs.push(("sic_d2_k_constant", (r.k_constant - 9.0).abs())),
                "sic_d3" => {
                    obs.push(("sic_d3_dual_norm", (r.max_dual_trace_norm - thirteen_thirds).abs()));
                    obs.push(("sic_d3_k_constant", (r.k_constant - thirteen_thirds.powi(2)).abs()));
                }
                _ => {}
            }
            if !r.informationally_complete {
                obs.push(("informationally_complete", 1.0));
            } else {
                obs.push(("informationally_complete", 0.0));
            }
            Ok(Row {
                cells: vec![
                    (*name).into(),
                    r.dim.into(),
                    r.num_elements.into(),
                    r.rank.into(),
                    r.max_dual_trace_norm.into(),
                    r.min_dual_trace_norm.into(),
                    r.k_constant.into(),
                    r.reconstruction_residual.into(),
                ],
                obs,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(
        Suite::Frames,
        cfg,
        &["frame", "d", "elements", "rank", "max_dual_norm", "min_dual_norm", "K", "reconstruction_residual"],
        &[
            ("informationally_complete", 0.0),
            ("reconstruction", SLACK_TOL),
            ("clifford_orbit_dual_norm", SLACK_TOL),
            ("sic_d2_k_constant", SLACK_TOL),
            ("sic_d3_dual_norm", SLACK_TOL),
            ("sic_d3_k_constant", SLACK_TOL),
        ],
        rows,
    ))
}

/// Tolerance of the numerical EoF against the two-qubit closed form.
pub const EOF_ORACLE_TOL: f64 = 1e-3;

/// Allowed shortfall of the numerical classical correlations below `S - E_f`.
pub const MONOGAMY_GAP_TOL: f64 = 5e-3;

fn two_qubit_state(i: usize, rng: &mut impl Rng) -> DensityMatrix {
    let rank = 1 + i % 4;
    sample::random_rank_k_state(TensorLayout::bipartite(2, 2), rank, rng)
}

fn eof_oracle(cfg: &SuiteConfig, n: usize) -> Result<SuiteReport> {
    let cut = Bipartition::two_party();
    let rows = par_rows(n, |i| {
        let seed = derive_seed(cfg.seed, i as u64);
        let sigma = two_qubit_state(i, &mut rng_from_seed(seed));
        let exact = entmeas::wootters_eof(&sigma)?;
        let r = entmeas::eof(&sigma, &cut, &reseeded(&cfg.eof, derive_seed(seed, 1)))?;
        let diff = r.value - exact;
        Ok(Row {
            cells: vec![
                i.into(),
                sigma.rank().into(),
                r.value.into(),
                exact.into(),
                diff.into(),
                r.stats.restart_spread.into(),
            ],
            obs: vec![("eof_vs_wootters", diff.abs()), ("eof_not_below_wootters", -diff)],
        })
    })?;
    Ok(assemble(
        Suite::Eof,
        cfg,
        &["index", "rank", "eof_numerical", "eof_wootters", "difference", "restart_spread"],
        &[("eof_vs_wootters", EOF_ORACLE_TOL), ("eof_not_below_wootters", SLACK_TOL)],
        rows,
    ))
}

fn half_qubit() -> DensityMatrix {
    DensityMatrix::maximally_mixed(TensorLayout::single(2))
}

fn monogamy(cfg: &SuiteConfig, n: usize) -> Result<SuiteReport> {
    let rho = half_qubit();
    let cut = Bipartition::two_party();
    let rows = par_rows(n, |i| {
        let seed = derive_seed(cfg.seed, i as u64);
        let (k, ch) = random_channel(2, 2, &mut rng_from_seed(seed))?;
        let tri = channel::global_state(&rho, &ch)?;
        let e = entmeas::wootters_eof(&tri.rho_rq)?;
        let c = entmeas::classical_correlations(&tri.rho_re, &cut, &reseeded(&cfg.classical, derive_seed(seed, 2)))?;
        let budget = tri.input_entropy - e;
        Ok(Row {
            cells: vec![i.into(), k.into(), c.value.into(), e.into(), budget.into(), (budget - c.value).into()],
            obs: vec![("monogamy_one_sided", c.value - budget), ("monogamy_gap", budget - c.value)],
        })
    })?;
    Ok(assemble(
        Suite::Monogamy,
        cfg,
        &["index", "k", "C", "E_f", "S_minus_E_f", "gap"],
        &[("monogamy_one_sided", SLACK_TOL), ("monogamy_gap", MONOGAMY_GAP_TOL)],
        rows,
    ))
}

/// Converse observations for one recovery fidelity; nothing when `g` is vacuous.
fn converse_obs(obs: &mut Vec<(&'static str, f64)>, f: f64, d: usize, eps_c: f64, eps_f: f64) -> Result<()> {
    if let Some(g) = bounds::converse_bound(f.min(1.0), d)?.value() {
        obs.push(("converse_coherent", eps_c - g));
        obs.push(("converse_eof", eps_f - g));
    }
    Ok(())
}

fn chain(cfg: &SuiteConfig, n: usize) -> Result<SuiteReport> {
    let rows = par_rows(n, |i| {
        let seed = derive_seed(cfg.seed, i as u64);
        let mut rng = rng_from_seed(seed);
        let rho = sample::ginibre_state::<f64, _>(TensorLayout::single(2), &mut rng);
        let (k, ch) = random_channel(2, 2, &mut rng)?;
        let tri = channel::global_state(&rho, &ch)?;
        let povm = icpovm::default_ic_povm::<f64>(tri.rho_e.dim())?;
        let dual = icpovm::canonical_dual(&povm)?;
        let e = entmeas::wootters_eof(&tri.rho_rq)?;
        let rep = bounds::chain_verify_with(&tri, &povm, &dual, e, true)?;
        let s = tri.input_entropy;
        let eps_c = s - tri.coherent_information();
        let eps_f = s - e;
        let t = bounds::factorization_distance(&tri);
        let petz = recovery::petz_recovery(&rho, &ch)?;
        let opt = recovery::optimize_recovery(&rho, &ch, &reseeded(&cfg.recovery, derive_seed(seed, 3)))?;

        let mut obs = vec![
            ("chain_slack", -rep.min_slack),
            ("chain_identity", rep.identity_residual),
            ("decoupling_eof", t * t - 2.0 * 49.0 * eps_f),
            ("optimized_vs_petz", petz.achieved_f - opt.achieved_f),
        ];
        converse_obs(&mut obs, petz.achieved_f, 2, eps_c, eps_f)?;
        converse_obs(&mut obs, opt.achieved_f, 2, eps_c, eps_f)?;
        let mut cells: Vec<Cell> = vec![i.into(), k.into(), tri.rho_e.dim().into(), s.into(), e.into(), rep.k_constant.into()];
        cells.extend(rep.lines.iter().map(|&x| Cell::from(x)));
        cells.extend([
            rep.min_slack.into(),
            rep.identity_residual.into(),
            t.into(),
            petz.achieved_f.into(),
            opt.achieved_f.into(),
        ]);
        Ok(Row { cells, obs })
    })?;
    Ok(assemble(
        Suite::Chain,
        cfg,
        &[
            "index",
            "k",
            "env_dim",
            "S",
            "E_f",
            "K",
            "line1",
            "line2",
            "line3",
            "line4",
            "line5",
            "line6",
            "min_slack",
            "identity_residual",
            "factorization_t",
            "F_petz",
            "F_opt",
        ],
        &[
            ("chain_slack", SLACK_TOL),
            ("chain_identity", SLACK_TOL),
            ("decoupling_eof", SLACK_TOL),
            ("optimized_vs_petz", SLACK_TOL),
            ("converse_coherent", SLACK_TOL),
            ("converse_eof", SLACK_TOL),
        ],
        rows,
    ))
}

/// `p_i = 0.2 i / (n - 1)`, or `{0}` for a single point.
pub fn depolarizing_grid(n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.0];
    }
    (0..n).map(|i| 0.2 * i as f64 / (n - 1) as f64).collect()
}

fn bounds_sweep(cfg: &SuiteConfig, n: usize) -> Result<SuiteReport> {
    let rho = half_qubit();
    let grid = depolarizing_grid(n);
    let field_names: Vec<&'static str> = {
        let probe = recovery::verify_instance(&rho, &KrausChannel::identity(2), &cfg.verify_options(0))?;
        probe.csv_fields().into_iter().map(|(k, _)| k).collect()
    };
    let rows = par_rows(grid.len(), |i| {
        let p = grid[i];
        let ch = channel_family::<f64>(&ChannelFamily::Depolarizing { dim: 2, p })?;
        let rep = recovery::verify_instance(&rho, &ch, &cfg.verify_options(derive_seed(cfg.seed, i as u64)))?;
        let mut obs: Vec<(&'static str, f64)> = Vec::new();
        for (name, b) in rep.bounds() {
            let key = match name {
                "sw_direct" => "direct_sw",
                "thm1" => "direct_thm1",
                "thm2" => "direct_thm2",
                _ => "direct_cor1",
            };
            obs.push((key, b - rep.f_opt));
        }
        if p == 0.0 {
            let losses = [rep.losses.eps_c, rep.losses.eps_f]
                .into_iter()
                .chain(rep.losses.eps_custom.values().copied());
            obs.push(("zero_noise_losses", losses.fold(0.0, |a: f64, x| a.max(x.abs()))));
            let dev = rep.bounds().iter().fold(0.0, |a: f64, (_, b)| a.max((b - 1.0).abs()));
            obs.push(("zero_noise_bounds", dev));
        }
        let f = channel::entanglement_fidelity(&rho, &ch)?;
        obs.push(("closed_form_fidelity", (f - (1.0 - 0.75 * p)).abs()));
        let ic_closed = 1.0 - qalg::shannon_entropy(&[1.0 - 0.75 * p, p / 4.0, p / 4.0, p / 4.0]);
        obs.push(("closed_form_coherent_information", (rep.coherent_information - ic_closed).abs()));
        for c in &rep.converse {
            converse_obs(&mut obs, c.fidelity, rep.input_dim, rep.losses.eps_c, rep.losses.eps_f)?;
        }
        let violations = rep.violations();
        obs.push(("report_invariants", violations.len() as f64));
        let mut cells: Vec<Cell> = vec![p.into()];
        cells.extend(rep.csv_fields().into_iter().map(|(_, v)| Cell::opt(v)));
        cells.push(violations.len().into());
        Ok(Row { cells, obs })
    })?;
    let mut columns = vec!["p"];
    columns.extend(field_names);
    columns.push("violations");
    Ok(assemble(
        Suite::Bounds,
        cfg,
        &columns,
        &[
            ("direct_sw", bounds::DIRECT_TOL),
            ("direct_thm1", bounds::DIRECT_TOL),
            ("direct_thm2", bounds::DIRECT_TOL),
            ("direct_cor1", bounds::DIRECT_TOL),
            ("zero_noise_losses", SLACK_TOL),
            ("zero_noise_bounds", SLACK_TOL),
            ("closed_form_fidelity", SLACK_TOL),
            ("closed_form_coherent_information", SLACK_TOL),
            ("converse_coherent", SLACK_TOL),
            ("converse_eof", SLACK_TOL),
            ("report_invariants", 0.0),
        ],
        rows,
    ))
}

/// Half Hilbert-Schmidt states of rank 2 to 4, half slight mixtures of a pure
/// state, where the gap bound is not vacuous.
fn gap_state(i: usize, rng: &mut impl Rng) -> DensityMatrix {
    let layout = TensorLayout::bipartite(2, 2);
    if i.is_multiple_of(2) {
        return sample::random_rank_k_state(layout, 2 + (i / 2) % 3, rng);
    }
    let psi = sample::random_pure_state::<f64, _>(layout.clone(), rng).density();
    let noise = sample::ginibre_state::<f64, _>(layout.clone(), rng);
    let q = 10f64.powf(-3.0 - 3.0 * rng.random::<f64>());
    let m = psi.matrix() * real(1.0 - q) + noise.matrix() * real(q);
    DensityMatrix::new(linalg::hermitian_part(&m), layout).expect("convex mixture of states")
}

fn gap(cfg: &SuiteConfig, n: usize) -> Result<SuiteReport> {
    let cut = Bipartition::two_party();
    let pure = n.div_ceil(10);
    let rows = par_rows(n + pure, |i| {
        let mut rng = rng_from_seed(derive_seed(cfg.seed, i as u64));
        let is_pure = i >= n;
        let sigma = if is_pure {
            sample::random_pure_state::<f64, _>(TensorLayout::bipartite(2, 2), &mut rng).density()
        } else {
            gap_state(i, &mut rng)
        };
        let e = entmeas::wootters_eof(&sigma)?;
        let r = bounds::gap_bound_with_eof(&sigma, &cut, e)?;
        let mut obs = Vec::new();
        if let Some(rhs) = r.rhs {
            obs.push(("gap", r.lhs - rhs));
        }
        if is_pure {
            obs.push(("pure_lhs_zero", r.lhs.abs()));
            obs.push(("pure_rhs_zero", r.rhs.map_or(f64::INFINITY, f64::abs)));
        }
        Ok(Row {
            cells: vec![
                i.into(),
                is_pure.into(),
                sigma.rank().into(),
                r.eps_f.into(),
                r.lhs.into(),
                r.argument.into(),
                Cell::opt(r.rhs),
            ],
            obs,
        })
    })?;
    Ok(assemble(
        Suite::Gap,
        cfg,
        &["index", "pure", "rank", "eps_f", "lhs", "argument", "rhs"],
        &[("gap", SLACK_TOL), ("pure_lhs_zero", SLACK_TOL), ("pure_rhs_zero", SLACK_TOL)],
        rows,
    ))
}

/// Deep report on one instance, as produced by [`recovery::verify_instance`].
pub fn inspect(rho: &DensityMatrix, ch: &KrausChannel, opts: &VerifyOptions<f64>) -> Result<BoundReport> {
    recovery::verify_instance(rho, ch, opts)
}
