//! Declarative experiment configuration: a TOML document plus
//! command-line overrides, resolved into a ready-to-run experiment.

use std::path::PathBuf;

use serde::Deserialize;

use shapley_effects::{
    models, Algorithm, DependenceSpec, Error, InputTransform, MarginalSpec, ModelHandle,
    OwenSelection, SubsetMask,
};

/// Which estimator rows the outputs should carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EstimatorChoice {
    Subset,
    Superset,
    Both,
}

impl EstimatorChoice {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "subset" => Ok(EstimatorChoice::Subset),
            "superset" => Ok(EstimatorChoice::Superset),
            "both" => Ok(EstimatorChoice::Both),
            other => Err(format!(
                "unknown estimator '{other}' (expected subset, superset, or both)"
            )),
        }
    }

    pub fn includes_subset(self) -> bool {
        matches!(self, EstimatorChoice::Subset | EstimatorChoice::Both)
    }

    pub fn includes_superset(self) -> bool {
        matches!(self, EstimatorChoice::Superset | EstimatorChoice::Both)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Report,
    Csv,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "report" => Ok(OutputFormat::Report),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("unknown format '{other}' (expected csv or report)")),
        }
    }
}

/// The TOML document. Every field is optional; command-line flags win.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileSpec {
    pub model: Option<String>,
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub replicates: Option<usize>,
    pub algorithm: Option<String>,
    pub estimator: Option<String>,
    pub owen: Option<OwenField>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
    pub correlation: Option<CorrelationSpec>,
    /// Full marginal override, one entry per input in model order.
    pub marginals: Option<Vec<MarginalSpec>>,
    /// Attach per-mask value and Moebius tables to each report.
    pub emit_tables: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum OwenField {
    Named(String),
    Groups(Vec<String>),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrelationSpec {
    /// Named scenario: `none`, or the fire-spread `weak` / `strong`
    /// shortcuts for the dead-moisture / wind pair.
    pub scenario: Option<String>,
    /// Explicit rank-correlation pairs (one-based input indices).
    pub pairs: Option<Vec<PairSpec>>,
    /// Full Spearman matrix, row by row.
    pub spearman: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Deserialize)]
pub struct PairSpec {
    pub i: usize,
    pub j: usize,
    pub rho: f64,
}

/// Flag-level view of a run request (everything optional so the file
/// can fill the gaps).
#[derive(Debug, Default)]
pub struct Overrides {
    pub model: Option<String>,
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub replicates: Option<usize>,
    pub algorithm: Option<String>,
    pub estimator: Option<String>,
    pub owen: Option<String>,
    pub scenario: Option<String>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
    pub emit_tables: bool,
}

/// A fully resolved experiment.
pub struct Experiment {
    pub model_name: String,
    pub model: ModelHandle,
    pub marginals: Vec<MarginalSpec>,
    pub dependence: DependenceSpec,
    pub n: usize,
    pub seed: u64,
    pub replicates: usize,
    pub algorithms: Vec<Algorithm>,
    pub estimator: EstimatorChoice,
    pub owen: OwenSelection,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub emit_tables: bool,
}

/// Anything that stops a run before models execute.
#[derive(Debug)]
pub enum ConfigError {
    Message(String),
    Engine(Error),
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Message(m) => write!(f, "{m}"),
            ConfigError::Engine(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for ConfigError {
    fn from(e: Error) -> Self {
        ConfigError::Engine(e)
    }
}

fn msg(s: impl Into<String>) -> ConfigError {
    ConfigError::Message(s.into())
}

fn parse_owen(text: &str, k: usize) -> Result<OwenSelection, ConfigError> {
    match text {
        "none" => Ok(OwenSelection::None),
        "all-pairs" => Ok(OwenSelection::AllPairs),
        list => {
            let mut groups = Vec::new();
            for part in list.split(',') {
                let mask = SubsetMask::parse_label(part.trim())
                    .ok_or_else(|| msg(format!("bad group '{part}' (expected e.g. 1+3)")))?;
                if mask.members().any(|i| i >= k) {
                    return Err(msg(format!(
                        "group '{part}' references an input beyond the model's {k}"
                    )));
                }
                groups.push(mask);
            }
            Ok(OwenSelection::Groups(groups))
        }
    }
}

fn parse_algorithms(text: &str) -> Result<Vec<Algorithm>, ConfigError> {
    match text {
        "moebius" => Ok(vec![Algorithm::Moebius]),
        "permutation" => Ok(vec![Algorithm::Permutation]),
        "both" => Ok(vec![Algorithm::Moebius, Algorithm::Permutation]),
        other => Err(msg(format!(
            "unknown algorithm '{other}' (expected moebius, permutation, or both)"
        ))),
    }
}

fn resolve_dependence(
    k: usize,
    model_name: &str,
    scenario: Option<&str>,
    correlation: Option<&CorrelationSpec>,
) -> Result<DependenceSpec, ConfigError> {
    // A scenario flag beats the correlation table; inside the table,
    // the most specific entry wins.
    let scenario = scenario.or(correlation.and_then(|c| c.scenario.as_deref()));
    if let Some(name) = scenario {
        if name == "none" {
            return Ok(DependenceSpec::independent(k));
        }
        if model_name != "fire-spread" {
            return Err(msg(format!(
                "scenario '{name}' is a fire-spread shortcut; model '{model_name}' needs explicit correlation pairs"
            )));
        }
        return Ok(models::fire_spread::scenario(name)?);
    }
    let Some(correlation) = correlation else {
        return Ok(DependenceSpec::independent(k));
    };
    if let Some(rows) = &correlation.spearman {
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        if rows.len() != k || flat.len() != k * k {
            return Err(ConfigError::Engine(Error::DimensionMismatch {
                expected: k,
                got: rows.len(),
            }));
        }
        return Ok(DependenceSpec::from_spearman(k, flat)?);
    }
    let mut dep = DependenceSpec::independent(k);
    if let Some(pairs) = &correlation.pairs {
        for p in pairs {
            if p.i == 0 || p.j == 0 || p.i > k || p.j > k {
                return Err(ConfigError::Engine(Error::DimensionMismatch {
                    expected: k,
                    got: p.i.max(p.j),
                }));
            }
            dep = dep.with_pair(p.i - 1, p.j - 1, p.rho)?;
        }
    }
    Ok(dep)
}

/// Merge the optional file with the flag overrides and resolve.
pub fn resolve(file: FileSpec, flags: Overrides) -> Result<Experiment, ConfigError> {
    let model_name = flags
        .model
        .or(file.model)
        .ok_or_else(|| msg("no model given (use --model or the config file)"))?;
    let setup = models::by_name(&model_name)?;
    let k = setup.model.dim();

    let marginals = match file.marginals {
        Some(list) => {
            if list.len() != k {
                return Err(ConfigError::Engine(Error::DimensionMismatch {
                    expected: k,
                    got: list.len(),
                }));
            }
            list
        }
        None => setup.marginals,
    };

    let dependence = resolve_dependence(
        k,
        &model_name,
        flags.scenario.as_deref(),
        file.correlation.as_ref(),
    )?;

    let owen = match (flags.owen, file.owen) {
        (Some(text), _) => parse_owen(&text, k)?,
        (None, Some(OwenField::Named(text))) => parse_owen(&text, k)?,
        (None, Some(OwenField::Groups(list))) => parse_owen(&list.join(","), k)?,
        (None, None) => OwenSelection::None,
    };

    let algorithms = parse_algorithms(
        flags
            .algorithm
            .or(file.algorithm)
            .as_deref()
            .unwrap_or("moebius"),
    )?;
    let estimator = EstimatorChoice::parse(
        flags
            .estimator
            .or(file.estimator)
            .as_deref()
            .unwrap_or("both"),
    )
    .map_err(msg)?;
    let format = OutputFormat::parse(flags.format.or(file.format).as_deref().unwrap_or("report"))
        .map_err(msg)?;

    let n = flags.n.or(file.n).unwrap_or(1024);
    let seed = flags.seed.or(file.seed).unwrap_or(0);
    let replicates = flags.replicates.or(file.replicates).unwrap_or(1);
    if n < 2 {
        return Err(ConfigError::Engine(Error::SampleTooSmall(n)));
    }
    if replicates < 1 {
        return Err(msg("replicates must be at least 1"));
    }

    Ok(Experiment {
        model_name,
        model: setup.model,
        marginals,
        dependence,
        n,
        seed,
        replicates,
        algorithms,
        estimator,
        owen,
        format,
        out: flags.out.or(file.out),
        emit_tables: flags.emit_tables || file.emit_tables.unwrap_or(false),
    })
}

impl Experiment {
    pub fn transform(&self) -> Result<InputTransform, Error> {
        InputTransform::new(self.marginals.clone(), self.dependence.clone())
    }

    /// Copy of the experiment (model handles are shared).
    pub fn shallow_clone(&self) -> Experiment {
        Experiment {
            model_name: self.model_name.clone(),
            model: self.model.clone(),
            marginals: self.marginals.clone(),
            dependence: self.dependence.clone(),
            n: self.n,
            seed: self.seed,
            replicates: self.replicates,
            algorithms: self.algorithms.clone(),
            estimator: self.estimator,
            owen: self.owen.clone(),
            format: self.format,
            out: self.out.clone(),
            emit_tables: self.emit_tables,
        }
    }
}
