//! Line-based `key = value` configuration with `#` comments.

use std::path::{Path, PathBuf};

use super::{PipelineError, StageId};
use crate::mlcore::{CvConfig, Family, SearchSpace};
use crate::oracle::{OracleConfig, OracleKind};
use crate::polysys::{GenConfig, ParamDist};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputFormat {
    Terms,
    Infix,
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub train_path: Option<PathBuf>,
    pub test_path: Option<PathBuf>,
    pub input_format: InputFormat,
    /// Variable names for the infix format.
    pub variables: Vec<String>,
    pub out_dir: PathBuf,
    pub oracle: OracleConfig,
    pub cv: CvConfig,
    pub search: SearchSpace,
    pub models: Vec<Family>,
    pub within_x: Vec<f64>,
    pub seed: u64,
    /// Synthetic problem count; two thirds go to training.
    pub generate: Option<usize>,
    pub generator: GenConfig,
    pub per_problem_timings: bool,
    pub stages: Vec<StageId>,
    pub stamp: Option<String>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            train_path: None,
            test_path: None,
            input_format: InputFormat::Terms,
            variables: Vec::new(),
            out_dir: PathBuf::from("out"),
            oracle: OracleConfig::default(),
            cv: CvConfig::default(),
            search: SearchSpace::default(),
            models: Family::ALL.to_vec(),
            within_x: vec![0.0, 5.0, 20.0],
            seed: 0,
            generate: None,
            generator: GenConfig::default(),
            per_problem_timings: false,
            stages: StageId::ALL.to_vec(),
            stamp: None,
        }
    }
}

fn bad(line: usize, msg: impl Into<String>) -> PipelineError {
    PipelineError::Config(format!("line {line}: {}", msg.into()))
}

fn num<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T, PipelineError> {
    v.parse().map_err(|_| bad(line, format!("`{key}`: cannot parse `{v}`")))
}

fn param_dist(line: usize, key: &str, v: &str) -> Result<ParamDist, PipelineError> {
    let parts: Vec<&str> = v.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(bad(line, format!("`{key}` expects mean, stddev, cap")));
    }
    Ok(ParamDist::new(num(line, key, parts[0])?, num(line, key, parts[1])?, num(line, key, parts[2])?))
}

pub fn parse_models(v: &str) -> Result<Vec<Family>, String> {
    let mut out = Vec::new();
    for name in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let f: Family = name.parse().map_err(|e: crate::mlcore::MlError| e.to_string())?;
        if !out.contains(&f) {
            out.push(f);
        }
    }
    out.sort();
    Ok(out)
}

pub fn parse_stages(v: &str) -> Result<Vec<StageId>, String> {
    let mut out = Vec::new();
    for name in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let s: StageId = name.parse()?;
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out.sort();
    Ok(out)
}

pub fn parse_oracle_kind(v: &str, command: Option<&str>) -> Result<OracleKind, String> {
    match v {
        "surrogate" => Ok(OracleKind::Surrogate),
        "external" => match command {
            Some(c) => Ok(OracleKind::External { command_template: c.to_string() }),
            None => Err("external oracle needs `oracle_command`".into()),
        },
        other => Err(format!("unknown oracle `{other}` (surrogate|external)")),
    }
}

impl PipelineConfig {
    /// Relative paths are resolved against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self, PipelineError> {
        let mut cfg = PipelineConfig { out_dir: base.join("out"), ..Default::default() };
        let mut oracle_name = String::from("surrogate");
        let mut oracle_command: Option<String> = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(bad(line_no, format!("expected `key = value`, found `{line}`")));
            };
            let (key, v) = (key.trim(), value.trim());
            match key {
                "train" => cfg.train_path = Some(base.join(v)),
                "test" => cfg.test_path = Some(base.join(v)),
                "input_format" => {
                    cfg.input_format = match v {
                        "terms" => InputFormat::Terms,
                        "infix" => InputFormat::Infix,
                        _ => return Err(bad(line_no, format!("unknown input_format `{v}` (terms|infix)"))),
                    }
                }
                "variables" => cfg.variables = v.split(',').map(|s| s.trim().to_string()).collect(),
                "out" => cfg.out_dir = base.join(v),
                "seed" => cfg.seed = num(line_no, key, v)?,
                "oracle" => oracle_name = v.to_string(),
                "oracle_command" => oracle_command = Some(v.to_string()),
                "timeout" => cfg.oracle.timeout_seconds = num(line_no, key, v)?,
                "surrogate_unit" => cfg.oracle.surrogate_unit = num(line_no, key, v)?,
                "max_parallel" => cfg.oracle.max_parallel = num(line_no, key, v)?,
                "max_polys" => cfg.oracle.caps.max_polys = num(line_no, key, v)?,
                "max_tdeg" => cfg.oracle.caps.max_tdeg = num(line_no, key, v)?,
                "cv" => cfg.cv.objective = v.parse().map_err(|e: String| bad(line_no, e))?,
                "folds" => cfg.cv.folds = num(line_no, key, v)?,
                "candidates" => cfg.cv.n_candidates = num(line_no, key, v)?,
                "models" => cfg.models = parse_models(v).map_err(|e| bad(line_no, e))?,
                "within" => {
                    cfg.within_x = v
                        .split(',')
                        .map(|s| num::<f64>(line_no, key, s.trim()))
                        .collect::<Result<_, _>>()?;
                }
                "generate" => cfg.generate = Some(num(line_no, key, v)?),
                "gen_n_vars" => cfg.generator.n_vars = num(line_no, key, v)?,
                "gen_degree" => cfg.generator.degree = param_dist(line_no, key, v)?,
                "gen_coeff" => cfg.generator.coeff = param_dist(line_no, key, v)?,
                "gen_terms" => cfg.generator.terms = param_dist(line_no, key, v)?,
                "gen_polys" => cfg.generator.polys = param_dist(line_no, key, v)?,
                "per_problem_timings" => cfg.per_problem_timings = num(line_no, key, v)?,
                "stages" => cfg.stages = parse_stages(v).map_err(|e| bad(line_no, e))?,
                "stamp" => cfg.stamp = Some(v.to_string()),
                _ if key.starts_with("search.") => {
                    if !cfg.search.set(&key["search.".len()..], v) {
                        return Err(bad(line_no, format!("bad search range `{key} = {v}`")));
                    }
                }
                _ => return Err(bad(line_no, format!("unknown key `{key}`"))),
            }
        }
        cfg.oracle.kind =
            parse_oracle_kind(&oracle_name, oracle_command.as_deref()).map_err(PipelineError::Config)?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, PipelineError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PipelineError::Config(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, &base)
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        let cfg_err = |m: String| Err(PipelineError::Config(m));
        self.oracle.validate().map_err(|e| PipelineError::Config(e.to_string()))?;
        if self.cv.folds < 2 || self.cv.n_candidates == 0 {
            return cfg_err("folds must be >= 2 and candidates >= 1".into());
        }
        if self.models.is_empty() {
            return cfg_err("no model families selected".into());
        }
        if self.within_x.iter().any(|x| !(*x >= 0.0 && x.is_finite())) {
            return cfg_err("within-x values must be finite and nonnegative".into());
        }
        match self.generate {
            Some(n) if n < 3 => return cfg_err("generate needs at least 3 problems".into()),
            Some(_) => self.generator.validate().map_err(PipelineError::Config)?,
            None => {}
        }
        if self.input_format == InputFormat::Infix && self.variables.is_empty() && self.generate.is_none() {
            return cfg_err("infix input needs `variables`".into());
        }
        if let Some(s) = &self.stamp {
            if s.is_empty() || !s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
                return cfg_err(format!("stamp `{s}` must be nonempty [A-Za-z0-9_-]"));
            }
        }
        Ok(())
    }
}
