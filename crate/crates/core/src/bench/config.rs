use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::datasets::{DatasetKind, DatasetSpec};
use crate::error::{Error, Result};
use crate::han::{HanConfig, DEFAULT_ORACLE_CAP};
use crate::kernel::KernelSpec;

/// Environment variable overriding the oracle cap.
pub const ORACLE_CAP_ENV: &str = "HAN_ORACLE_CAP";

/// Every key accepted in a config file or as a flag (without the dashes).
pub const KEYS: [&str; 24] = [
    "dataset",
    "m",
    "n",
    "dataset-seed",
    "symbol",
    "jitter",
    "standardize",
    "kernel",
    "method",
    "samples",
    "steps",
    "stepsize",
    "tau",
    "max-samples",
    "max-rank",
    "hits",
    "repeats",
    "seed",
    "out",
    "plot",
    "oracle-cap",
    "errors",
    "timing",
    "power-iters",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    NysB,
    NysP,
    NysR,
    HanB,
    HanU,
    HanUEff,
    HanA,
}

impl Method {
    pub const ALL: [Method; 7] =
        [Self::NysB, Self::NysP, Self::NysR, Self::HanB, Self::HanU, Self::HanUEff, Self::HanA];

    /// Baselines run once per sample size; HAN schemes report every iteration.
    pub fn is_baseline(self) -> bool {
        matches!(self, Self::NysB | Self::NysP | Self::NysR)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::NysB => "nys-b",
            Self::NysP => "nys-p",
            Self::NysR => "nys-r",
            Self::HanB => "han-b",
            Self::HanU => "han-u",
            Self::HanUEff => "han-u-eff",
            Self::HanA => "han-a",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown method '{s}'")))
    }
}

/// Which iterates get a reference error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorReport {
    All,
    Final,
    None,
}

impl FromStr for ErrorReport {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Self::All),
            "final" => Ok(Self::Final),
            "none" => Ok(Self::None),
            _ => Err(Error::Config(format!("errors must be all, final or none, got '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub dataset: DatasetSpec,
    pub kernel: KernelSpec,
    pub methods: Vec<Method>,
    /// Total sample sizes for the baselines.
    pub sample_sizes: Vec<usize>,
    /// Rounds for `nys-r`.
    pub refine_steps: usize,
    pub han: HanConfig,
    pub repeats: usize,
    /// Repeat `r` runs with seed `seed + r`.
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub plot: Option<PathBuf>,
    /// Largest `m * n` for dense reference errors and the SVD curve.
    pub oracle_cap: usize,
    pub errors: ErrorReport,
    /// Record wall-clock times; off gives byte-identical output across runs.
    pub timing: bool,
    /// Power iterations per reference error above the oracle cap.
    pub power_iters: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            dataset: DatasetSpec::new(DatasetKind::Flower),
            kernel: KernelSpec::InvDiff,
            methods: vec![Method::HanA],
            sample_sizes: vec![100, 200, 300, 400],
            refine_steps: 10,
            han: HanConfig::default(),
            repeats: 100,
            seed: 0,
            out: None,
            plot: None,
            oracle_cap: DEFAULT_ORACLE_CAP,
            errors: ErrorReport::All,
            timing: true,
            power_iters: 30,
        }
    }
}

fn parse<V: FromStr>(key: &str, value: &str) -> Result<V> {
    value.trim().parse().map_err(|_| Error::Config(format!("bad value for {key}: '{value}'")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.trim() {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        _ => Err(Error::Config(format!("bad value for {key}: '{value}' (expected true or false)"))),
    }
}

fn parse_list<V: FromStr>(key: &str, value: &str) -> Result<Vec<V>> {
    value.split(',').filter(|s| !s.trim().is_empty()).map(|s| parse(key, s)).collect()
}

/// Reads a flat `key = value` file; `#` starts a comment line.
pub fn parse_kv(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse { line: i + 1, msg: format!("expected key = value, got '{line}'") })?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Merges settings with precedence defaults < config file < environment < flags.
/// Repeated `method` entries within one layer accumulate.
pub fn merge_settings(
    file: &[(String, String)],
    env_oracle_cap: Option<&str>,
    flags: &[(String, String)],
) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    let mut layer = |pairs: &[(String, String)]| -> Result<()> {
        let mut methods: Vec<&str> = Vec::new();
        for (k, v) in pairs {
            if !KEYS.contains(&k.as_str()) {
                return Err(Error::Config(format!("unknown setting '{k}'")));
            }
            if k == "method" {
                methods.push(v);
            } else {
                out.insert(k.clone(), v.clone());
            }
        }
        if !methods.is_empty() {
            out.insert("method".to_string(), methods.join(","));
        }
        Ok(())
    };
    layer(file)?;
    if let Some(cap) = env_oracle_cap {
        layer(&[("oracle-cap".to_string(), cap.to_string())])?;
    }
    layer(flags)?;
    Ok(out)
}

impl ExperimentConfig {
    /// Builds a config from merged settings; unspecified keys keep their defaults.
    pub fn from_settings(s: &BTreeMap<String, String>) -> Result<Self> {
        let mut cfg = Self::default();
        let get = |k: &str| s.get(k).map(String::as_str);
        if let Some(v) = get("dataset") {
            cfg.dataset = DatasetSpec::new(v.parse()?);
        }
        if let Some(v) = get("m") {
            cfg.dataset.m = parse("m", v)?;
        }
        if let Some(v) = get("n") {
            cfg.dataset.n = parse("n", v)?;
        }
        if let Some(v) = get("dataset-seed") {
            cfg.dataset.seed = parse("dataset-seed", v)?;
        }
        if let Some(v) = get("symbol") {
            cfg.dataset.params.symbol = v.parse()?;
        }
        if let Some(v) = get("jitter") {
            cfg.dataset.params.jitter = parse("jitter", v)?;
        }
        if let Some(v) = get("standardize") {
            cfg.dataset.params.standardize = parse_bool("standardize", v)?;
        }
        if let Some(v) = get("kernel") {
            cfg.kernel = v.parse()?;
        }
        if let Some(v) = get("method") {
            let mut methods: Vec<Method> = parse_list("method", v)?;
            methods.sort();
            methods.dedup();
            cfg.methods = methods;
        }
        if let Some(v) = get("samples") {
            cfg.sample_sizes = parse_list("samples", v)?;
        }
        if let Some(v) = get("steps") {
            cfg.refine_steps = parse("steps", v)?;
        }
        if let Some(v) = get("stepsize") {
            cfg.han.b = parse("stepsize", v)?;
        }
        if let Some(v) = get("tau") {
            cfg.han.tau = parse("tau", v)?;
        }
        if let Some(v) = get("max-samples") {
            cfg.han.max_samples = Some(parse("max-samples", v)?);
        }
        if let Some(v) = get("max-rank") {
            cfg.han.max_rank = Some(parse("max-rank", v)?);
        }
        if let Some(v) = get("hits") {
            cfg.han.consecutive_hits = parse("hits", v)?;
        }
        if let Some(v) = get("repeats") {
            cfg.repeats = parse("repeats", v)?;
        }
        if let Some(v) = get("seed") {
            cfg.seed = parse("seed", v)?;
        }
        if let Some(v) = get("out") {
            cfg.out = Some(PathBuf::from(v));
        }
        if let Some(v) = get("plot") {
            cfg.plot = Some(PathBuf::from(v));
        }
        if let Some(v) = get("oracle-cap") {
            cfg.oracle_cap = parse("oracle-cap", v)?;
        }
        if let Some(v) = get("errors") {
            cfg.errors = v.parse()?;
        }
        if let Some(v) = get("timing") {
            cfg.timing = parse_bool("timing", v)?;
        }
        if let Some(v) = get("power-iters") {
            cfg.power_iters = parse("power-iters", v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks everything that does not need the data.
    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::Config("at least one method is required".into()));
        }
        if self.repeats == 0 {
            return Err(Error::Config("repeats must be at least 1".into()));
        }
        if self.methods.iter().any(|m| m.is_baseline()) {
            if self.sample_sizes.is_empty() || self.sample_sizes.contains(&0) {
                return Err(Error::Config("baselines need positive sample sizes".into()));
            }
            if self.refine_steps == 0 {
                return Err(Error::Config("steps must be at least 1".into()));
            }
        }
        if self.power_iters < 10 {
            return Err(Error::Config(format!("power-iters must be at least 10, got {}", self.power_iters)));
        }
        self.dataset.validate()?;
        self.han.validate()
    }

    /// The dataset column of the output.
    pub fn dataset_label(&self) -> String {
        match &self.dataset.kind {
            DatasetKind::CsvFile(p) => {
                format!("csv:{}", p.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default())
            }
            k => k.to_string(),
        }
    }

    /// The kernel column of the output; circulant corners report their symbol.
    pub fn kernel_label(&self) -> String {
        match self.dataset.kind {
            DatasetKind::CirculantCorner => format!("symbol:{}", self.dataset.params.symbol),
            _ => self.kernel.to_string(),
        }
    }
}
