use std::fs;
use std::path::{Path, PathBuf};

use aqec::channel::{self, channel_family, ChannelFamily, KrausChannel};
use aqec::entmeas::SearchOptions;
use aqec::qalg::{DensityMatrix, TensorLayout};
use aqec::sample;
use aqec::verify::SuiteConfig;
use serde::Deserialize;

use crate::CliError;

/// Default cap on `d' * d_E'`, the dimension of the dilated output.
pub const DEFAULT_MAX_DIM: usize = 36;

/// Settings read from `--config`; any flag given on the command line wins.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub channel: Option<String>,
    pub param: Option<String>,
    pub dim: Option<usize>,
    pub out_dim: Option<usize>,
    pub input: Option<String>,
    pub max_dim: Option<usize>,
    pub seed: Option<u64>,
    pub eof_restarts: Option<usize>,
    pub eof_ensemble_size: Option<usize>,
    pub cc_restarts: Option<usize>,
    pub recovery_restarts: Option<usize>,
    pub tol: Option<f64>,
}

pub fn load_file_config(path: &Path) -> Result<FileConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Reads and validates a JSON channel description.
pub fn load_channel(path: &Path) -> Result<KrausChannel, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    channel::channel_from_json(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChannelSource {
    Family(String),
    File(PathBuf),
}

impl ChannelSource {
    fn parse(s: &str) -> Result<Self, CliError> {
        if s.ends_with(".json") {
            return Ok(Self::File(PathBuf::from(s)));
        }
        let name = s.to_ascii_lowercase().replace('-', "_");
        if default_param(&name).is_none() {
            return Err(CliError::Config(format!(
                "unknown channel '{s}' (expected depolarizing, amplitude_damping, phase_damping, random_rank_k or a .json file)"
            )));
        }
        Ok(Self::Family(name))
    }

    pub fn label(&self) -> String {
        match self {
            Self::Family(name) => name.clone(),
            Self::File(p) => p.display().to_string(),
        }
    }
}

fn default_param(family: &str) -> Option<&'static str> {
    match family {
        "depolarizing" => Some("p"),
        "amplitude_damping" => Some("gamma"),
        "phase_damping" => Some("lambda"),
        "random_rank_k" => Some("k"),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputSpec {
    MaximallyMixed,
    Pure,
    Random,
}

impl InputSpec {
    fn parse(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_lowercase().as_str() {
            "maximally_mixed" | "mixed" => Ok(Self::MaximallyMixed),
            "pure" => Ok(Self::Pure),
            "random" => Ok(Self::Random),
            other => Err(CliError::Config(format!("unknown input state '{other}' (maximally_mixed, pure, random)"))),
        }
    }

    pub fn state(self, dim: usize, seed: u64) -> DensityMatrix {
        let layout = TensorLayout::single(dim);
        match self {
            Self::MaximallyMixed => DensityMatrix::maximally_mixed(layout),
            Self::Pure => aqec::qalg::PureState::basis(layout, 0).density(),
            Self::Random => sample::ginibre_state(layout, &mut sample::rng_from_seed(seed)),
        }
    }
}

/// `name=v`, `name=v1,v2,...` or `name=start:stop:step` (both ends included).
pub fn parse_param(s: &str) -> Result<(String, Vec<f64>), CliError> {
    let bad = |why: &str| CliError::Config(format!("--param '{s}': {why}"));
    let (name, spec) = s.split_once('=').ok_or_else(|| bad("expected name=values"))?;
    let name = name.trim();
    if name.is_empty() {
        return Err(bad("missing parameter name"));
    }
    let num = |t: &str| t.trim().parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| bad("not a number"));
    let values = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("a range needs start:stop:step"));
        }
        let (a, b, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if step <= 0.0 || b < a {
            return Err(bad("a range needs step > 0 and stop >= start"));
        }
        let intervals = ((b - a) / step).round();
        if (a + intervals * step - b).abs() > 1e-9 * step.max(b.abs()).max(1.0) {
            return Err(bad("stop - start is not a multiple of step"));
        }
        if intervals > 100_000.0 {
            return Err(bad("too many grid points"));
        }
        let n = intervals as usize;
        if n == 0 {
            vec![a]
        } else {
            (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect()
        }
    } else {
        spec.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if values.is_empty() {
        return Err(bad("empty grid"));
    }
    Ok((name.to_string(), values))
}

/// Search settings shared by every subcommand that optimizes.
#[derive(Debug, Clone, Default)]
pub struct SearchFlags {
    pub seed: Option<u64>,
    pub eof_restarts: Option<usize>,
    pub eof_ensemble_size: Option<usize>,
    pub cc_restarts: Option<usize>,
    pub recovery_restarts: Option<usize>,
    pub tol: Option<f64>,
}

impl SearchFlags {
    pub fn merged(&self, file: &FileConfig) -> Self {
        Self {
            seed: self.seed.or(file.seed),
            eof_restarts: self.eof_restarts.or(file.eof_restarts),
            eof_ensemble_size: self.eof_ensemble_size.or(file.eof_ensemble_size),
            cc_restarts: self.cc_restarts.or(file.cc_restarts),
            recovery_restarts: self.recovery_restarts.or(file.recovery_restarts),
            tol: self.tol.or(file.tol),
        }
    }

    pub fn suite_config(&self, samples: Option<usize>) -> Result<SuiteConfig, CliError> {
        let tol = self.tol.unwrap_or(SearchOptions::default().tol);
        if !(tol.is_finite() && tol > 0.0) {
            return Err(CliError::Config(format!("--tol must be positive (got {tol})")));
        }
        let template = |restarts: Option<usize>, size: Option<usize>, flag: &str| {
            let restarts = restarts.unwrap_or(SearchOptions::default().restarts);
            if restarts == 0 {
                return Err(CliError::Config(format!("{flag} must be at least 1")));
            }
            if size == Some(0) {
                return Err(CliError::Config("--eof-ensemble-size must be at least 1".into()));
            }
            Ok(SearchOptions { restarts, size, tol, ..SearchOptions::default() })
        };
        if samples == Some(0) {
            return Err(CliError::Config("--seeds must be at least 1".into()));
        }
        Ok(SuiteConfig {
            seed: self.seed.unwrap_or(0),
            samples,
            eof: template(self.eof_restarts, self.eof_ensemble_size, "--eof-restarts")?,
            classical: template(self.cc_restarts, None, "--cc-restarts")?,
            recovery: template(self.recovery_restarts, None, "--recovery-restarts")?,
        })
    }
}

/// Instance flags for `run` and `inspect` before validation.
#[derive(Debug, Clone, Default)]
pub struct InstanceFlags {
    pub channel: Option<String>,
    pub param: Option<String>,
    pub dim: Option<usize>,
    pub out_dim: Option<usize>,
    pub input: Option<String>,
    pub max_dim: Option<usize>,
}

/// A validated sweep: one channel per grid value, a fixed input state and search settings.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub source: ChannelSource,
    pub param_name: String,
    pub grid: Vec<Option<f64>>,
    pub dim: usize,
    pub out_dim: usize,
    pub input: InputSpec,
    pub max_dim: usize,
    pub search: SuiteConfig,
}

impl SweepConfig {
    pub fn resolve(flags: &InstanceFlags, search: &SearchFlags, file: &FileConfig) -> Result<Self, CliError> {
        let channel = flags
            .channel
            .clone()
            .or_else(|| file.channel.clone())
            .ok_or_else(|| CliError::Config("--channel is required".into()))?;
        let source = ChannelSource::parse(&channel)?;
        let param = flags.param.clone().or_else(|| file.param.clone());
        let dim = flags.dim.or(file.dim).unwrap_or(2);
        let out_dim = flags.out_dim.or(file.out_dim).unwrap_or(dim);
        let input = InputSpec::parse(flags.input.as_deref().or(file.input.as_deref()).unwrap_or("maximally_mixed"))?;
        let max_dim = flags.max_dim.or(file.max_dim).unwrap_or(DEFAULT_MAX_DIM);
        let search = search.merged(file).suite_config(None)?;
        if dim < 2 || out_dim < 2 {
            return Err(CliError::Config(format!("dimensions must be at least 2 (got --dim {dim}, --out-dim {out_dim})")));
        }

        let (param_name, grid) = match (&source, param) {
            (ChannelSource::File(_), Some(_)) => {
                return Err(CliError::Config("--param does not apply to a channel file".into()));
            }
            (ChannelSource::File(_), None) => ("param".to_string(), vec![None]),
            (ChannelSource::Family(name), param) => {
                let expected = default_param(name).expect("family checked on parse");
                let Some(param) = param else {
                    return Err(CliError::Config(format!("--param {expected}=... is required for {name}")));
                };
                let (pname, values) = parse_param(&param)?;
                if pname != expected {
                    return Err(CliError::Config(format!("{name} takes parameter '{expected}', not '{pname}'")));
                }
                (pname, values.into_iter().map(Some).collect())
            }
        };
        let cfg = Self { source, param_name, grid, dim, out_dim, input, max_dim, search };
        // build every channel once up front so a bad grid fails before any work
        for i in 0..cfg.grid.len() {
            cfg.channel(i)?;
        }
        Ok(cfg)
    }

    /// Channel at grid point `i`, checked against the dimension cap.
    pub fn channel(&self, i: usize) -> Result<KrausChannel, CliError> {
        let value = self.grid[i];
        let ch = match &self.source {
            ChannelSource::File(path) => load_channel(path)?,
            ChannelSource::Family(name) => {
                let v = value.expect("families always carry a value");
                let family = match name.as_str() {
                    "depolarizing" => ChannelFamily::Depolarizing { dim: self.dim, p: v },
                    "amplitude_damping" | "phase_damping" if self.dim != 2 => {
                        return Err(CliError::Config(format!("{name} is a qubit channel; use --dim 2")));
                    }
                    "amplitude_damping" => ChannelFamily::AmplitudeDamping { gamma: v },
                    "phase_damping" => ChannelFamily::PhaseDamping { lambda: v },
                    _ => {
                        if v.fract() != 0.0 || v < 1.0 {
                            return Err(CliError::Config(format!("k must be a positive integer (got {v})")));
                        }
                        ChannelFamily::RandomRankK {
                            in_dim: self.dim,
                            out_dim: self.out_dim,
                            k: v as usize,
                            seed: self.search.seed,
                        }
                    }
                };
                channel_family(&family).map_err(|e| CliError::Config(e.to_string()))?
            }
        };
        if ch.in_dim() < 2 || ch.out_dim() < 2 {
            return Err(CliError::Config("channel dimensions must be at least 2".into()));
        }
        let total = ch.out_dim() * ch.num_ops();
        if total > self.max_dim {
            return Err(CliError::Config(format!(
                "output times environment dimension {total} exceeds the cap {} (raise --max-dim)",
                self.max_dim
            )));
        }
        Ok(ch)
    }

    pub fn input_state(&self, in_dim: usize) -> DensityMatrix {
        self.input.state(in_dim, sample::derive_seed(self.search.seed, 0))
    }
}
