//! Stage orchestration. Training stages 1a-1d build a model from the training
//! problems; stages 2a-2e evaluate it, together with the heuristics and the
//! virtual solvers, on the test problems.
//!
//! Every stage reads and writes files in the output directory only, so any
//! subset can be rerun as long as the inputs of the skipped stages exist.

mod config;
mod report;

pub use config::{parse_models, parse_oracle_kind, parse_stages, InputFormat, PipelineConfig};
pub use report::{
    baseline_random, baseline_virtual, build_report, ComparativeReport, SolverInput, SolverResult, Virtual,
    REPORT_CSV_HEADER, ROW_LABELS, SOLVER_COLUMNS,
};

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::featgen::{evaluate_matrix, generate_raw_descriptors, simplify_descriptors, DescriptorSet, FeatureMatrix};
use crate::mlcore::{cv_search_detailed, predict, train, Family, TrainedModel, TrainingSet};
use crate::oracle::{
    label_best, measure_all_orderings, parse_labels, parse_timings_csv, per_problem_timing_text, write_labels,
    write_timings_csv, OracleKind, TimingRecord,
};
use crate::polysys::{generate_random_dataset, parse_infix, parse_problem, serialize_problem, GenConfig, PolySystem};
use crate::projection::{brown_choose, sotd_choose};
use crate::seeds::derive_seed;

pub const TERMS_TRAIN: &str = "terms_train.txt";
pub const TERMS_TEST: &str = "terms_test.txt";
pub const Y_TRAIN: &str = "y_train.txt";
pub const TIMINGS_TRAIN: &str = "timings_train.csv";
pub const TIMINGS_TEST: &str = "timings_test.csv";
pub const FEATURES_DESCRIPTIONS: &str = "features_descriptions.txt";
pub const FEATURES_DESCRIPTIONS_FINAL: &str = "features_descriptions_final.txt";
pub const FEATURES_TRAIN_RAW: &str = "features_train_raw.txt";
pub const FEATURES_TRAIN: &str = "features_train.txt";
pub const FEATURES_TEST: &str = "features_test.txt";
pub const Y_BROWN_TEST: &str = "y_brown_test.txt";
pub const Y_SOTD_TEST: &str = "y_sotd_test.txt";
pub const GENERATED_TRAIN: &str = "generated_train.txt";
pub const GENERATED_TEST: &str = "generated_test.txt";
/// Wall-clock prediction times, one `solver seconds` pair per line.
pub const PREDICTION_TIMES_ML: &str = "prediction_times_ml.txt";
pub const PREDICTION_TIMES_HEURISTICS: &str = "prediction_times_heuristics.txt";
pub const MODEL_FILE_FORMAT: &str = "ordpick-models";
pub const MODEL_FILE_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StageId {
    S1a,
    S1b,
    S1c,
    S1d,
    S2a,
    S2b,
    S2c,
    S2d,
    S2e,
}

impl StageId {
    pub const ALL: [StageId; 9] = [
        StageId::S1a,
        StageId::S1b,
        StageId::S1c,
        StageId::S1d,
        StageId::S2a,
        StageId::S2b,
        StageId::S2c,
        StageId::S2d,
        StageId::S2e,
    ];

    pub fn name(self) -> &'static str {
        ["1a", "1b", "1c", "1d", "2a", "2b", "2c", "2d", "2e"][self as usize]
    }
}

impl fmt::Display for StageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StageId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim().to_ascii_lowercase();
        StageId::ALL.into_iter().find(|id| id.name() == s).ok_or_else(|| format!("unknown stage `{s}` (1a..1d, 2a..2e)"))
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("stage {stage} needs {file}, which stage {producer} produces; run stage {producer} first")]
    MissingDependency { stage: StageId, file: String, producer: StageId },
    #[error("{file}:{line}: {msg}")]
    Malformed { file: String, line: usize, msg: String },
    #[error("stage {stage} failed: {msg}")]
    Stage { stage: StageId, msg: String },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(_) => 2,
            PipelineError::MissingDependency { .. } => 3,
            _ => 4,
        }
    }
}

/// A file a stage reads: an exact name, or `prefix*suffix` for stamped names.
#[derive(Clone, Debug)]
enum Input {
    File(&'static str),
    Stamped(String, &'static str),
}

impl Input {
    fn describe(&self) -> String {
        match self {
            Input::File(f) => f.to_string(),
            Input::Stamped(p, s) => format!("{p}*{s}"),
        }
    }
}

fn stage_inputs(stage: StageId, models: &[Family]) -> Vec<(Input, StageId)> {
    use StageId::*;
    match stage {
        S1a | S2a => vec![],
        S1b => vec![(Input::File(TIMINGS_TRAIN), S1a)],
        S1c => vec![(Input::File(TERMS_TRAIN), S1b)],
        S1d => vec![
            (Input::File(FEATURES_TRAIN), S1c),
            (Input::File(Y_TRAIN), S1b),
            (Input::File(TIMINGS_TRAIN), S1a),
        ],
        S2b => vec![(Input::File(TERMS_TEST), S2a), (Input::File(FEATURES_DESCRIPTIONS_FINAL), S1c)],
        S2c => vec![(Input::Stamped("par_".into(), ".txt"), S1d), (Input::File(FEATURES_TEST), S2b)],
        S2d => vec![(Input::File(TERMS_TEST), S2a)],
        S2e => {
            let mut v = vec![
                (Input::File(TERMS_TEST), S2a),
                (Input::File(Y_BROWN_TEST), S2d),
                (Input::File(Y_SOTD_TEST), S2d),
                (Input::File(PREDICTION_TIMES_HEURISTICS), S2d),
                (Input::File(PREDICTION_TIMES_ML), S2c),
            ];
            for f in models {
                v.push((Input::Stamped(format!("y_{f}_"), "_test.txt"), S2c));
            }
            v
        }
    }
}

/// `prefix<stamp>suffix` if present, else the most recently modified match.
fn resolve_stamped(dir: &Path, prefix: &str, suffix: &str, stamp: &str) -> Option<PathBuf> {
    let exact = dir.join(format!("{prefix}{stamp}{suffix}"));
    if exact.is_file() {
        return Some(exact);
    }
    let mut best: Option<(std::time::SystemTime, String)> = None;
    for e in fs::read_dir(dir).ok()?.flatten() {
        let name = e.file_name().to_string_lossy().into_owned();
        if name.len() <= prefix.len() + suffix.len() || !name.starts_with(prefix) || !name.ends_with(suffix) {
            continue;
        }
        let mtime = e.metadata().and_then(|m| m.modified()).unwrap_or(std::time::UNIX_EPOCH);
        if best.as_ref().is_none_or(|b| (mtime, &name) > (b.0, &b.1)) {
            best = Some((mtime, name));
        }
    }
    best.map(|(_, n)| dir.join(n))
}

fn input_exists(dir: &Path, input: &Input, stamp: &str) -> bool {
    match input {
        Input::File(f) => dir.join(f).is_file(),
        Input::Stamped(p, s) => resolve_stamped(dir, p, s, stamp).is_some(),
    }
}

/// Fails on the first requested stage whose input neither exists nor comes
/// from an earlier requested stage.
pub fn check_dependencies(cfg: &PipelineConfig, stamp: &str) -> Result<(), PipelineError> {
    for &stage in &cfg.stages {
        for (input, producer) in stage_inputs(stage, &cfg.models) {
            let produced = producer < stage && cfg.stages.contains(&producer);
            if !produced && !input_exists(&cfg.out_dir, &input, stamp) {
                return Err(PipelineError::MissingDependency { stage, file: input.describe(), producer });
            }
        }
    }
    Ok(())
}

pub fn timestamp_now() -> String {
    chrono::Local::now().format("D%m_%d_T%H_%M").to_string()
}

#[derive(Debug, Default)]
pub struct RunSummary {
    pub stamp: String,
    pub written: Vec<PathBuf>,
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format: String,
    version: u32,
    models: Vec<TrainedModel>,
}

struct Ctx<'a> {
    cfg: &'a PipelineConfig,
    stamp: String,
    written: Vec<PathBuf>,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> PipelineError + '_ {
    move |source| PipelineError::Io { path: path.display().to_string(), source }
}

fn stage_err(stage: StageId) -> impl Fn(String) -> PipelineError {
    move |msg| PipelineError::Stage { stage, msg }
}

impl Ctx<'_> {
    fn path(&self, name: &str) -> PathBuf {
        self.cfg.out_dir.join(name)
    }

    fn read(&self, name: &str) -> Result<String, PipelineError> {
        let p = self.path(name);
        fs::read_to_string(&p).map_err(io_err(&p))
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<(), PipelineError> {
        let p = self.path(name);
        if let Some(dir) = p.parent() {
            fs::create_dir_all(dir).map_err(io_err(dir))?;
        }
        fs::write(&p, contents).map_err(io_err(&p))?;
        log::info!("wrote {}", p.display());
        self.written.push(p);
        Ok(())
    }

    fn stamped(&self, prefix: &str, suffix: &str) -> Result<PathBuf, PipelineError> {
        resolve_stamped(&self.cfg.out_dir, prefix, suffix, &self.stamp).ok_or_else(|| PipelineError::Config(format!(
            "no {prefix}*{suffix} in {}",
            self.cfg.out_dir.display()
        )))
    }

    fn raw_input(&self, train: bool) -> Result<(PathBuf, InputFormat), PipelineError> {
        if self.cfg.generate.is_some() {
            let name = if train { GENERATED_TRAIN } else { GENERATED_TEST };
            return Ok((self.path(name), InputFormat::Terms));
        }
        let p = if train { &self.cfg.train_path } else { &self.cfg.test_path };
        let which = if train { "train" } else { "test" };
        let p = p.clone().ok_or_else(|| PipelineError::Config(format!("no `{which}` input and no `generate` count")))?;
        if !p.is_file() {
            return Err(PipelineError::Config(format!("{which} input {} does not exist", p.display())));
        }
        Ok((p, self.cfg.input_format))
    }
}

fn parse_problem_file(path: &Path, format: InputFormat, vars: &[String]) -> Result<Vec<PolySystem>, PipelineError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let file = path.file_name().map_or_else(|| path.display().to_string(), |f| f.to_string_lossy().into_owned());
    let mut out: Vec<PolySystem> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let malformed = |msg: String| PipelineError::Malformed { file: file.clone(), line: i + 1, msg };
        let p = match format {
            InputFormat::Terms => parse_problem(line),
            InputFormat::Infix => parse_infix(line, vars),
        }
        .map_err(|e| malformed(e.to_string()))?;
        if let Some(first) = out.first() {
            if first.n_vars() != p.n_vars() {
                return Err(malformed(format!("{} variables, earlier problems have {}", p.n_vars(), first.n_vars())));
            }
        }
        out.push(p);
    }
    if out.is_empty() {
        return Err(PipelineError::Malformed { file, line: 0, msg: "no problems".into() });
    }
    Ok(out)
}

fn malformed_from<E: ToString>(file: &str) -> impl Fn(E) -> PipelineError + '_ {
    move |e| {
        let msg = e.to_string();
        let line = msg
            .strip_prefix("line ")
            .and_then(|r| r.split(':').next())
            .and_then(|n| n.parse().ok())
            .unwrap_or(0);
        PipelineError::Malformed { file: file.to_string(), line, msg }
    }
}

fn terms_text(problems: &[PolySystem]) -> String {
    problems.iter().map(|p| serialize_problem(p) + "\n").collect()
}

impl Ctx<'_> {
    fn write_generated(&mut self) -> Result<(), PipelineError> {
        let count = self.cfg.generate.expect("generation requested");
        let gen = GenConfig { seed: derive_seed(self.cfg.seed, "generation"), ..self.cfg.generator.clone() };
        let all = generate_random_dataset(&gen, count);
        let n_train = count * 2 / 3;
        self.write(GENERATED_TRAIN, &terms_text(&all[..n_train]))?;
        self.write(GENERATED_TEST, &terms_text(&all[n_train..]))
    }

    fn measure(&mut self, stage: StageId, problems: &[PolySystem], dir: &str) -> Result<Vec<TimingRecord>, PipelineError> {
        let oracle = &self.cfg.oracle;
        let run = |(i, p): (usize, &PolySystem)| measure_all_orderings(p, i, oracle);
        let records: Result<Vec<TimingRecord>, _> = match oracle.kind {
            OracleKind::Surrogate => problems.par_iter().enumerate().map(run).collect(),
            OracleKind::External { .. } => problems.iter().enumerate().map(run).collect(),
        };
        let records = records.map_err(|e| PipelineError::Stage { stage, msg: e.to_string() })?;
        if self.cfg.per_problem_timings {
            for r in &records {
                self.write(&format!("{dir}/problem_{}.txt", r.problem_id), &per_problem_timing_text(r))?;
            }
        }
        Ok(records)
    }

    fn stage_1a(&mut self) -> Result<(), PipelineError> {
        let (path, fmt) = self.raw_input(true)?;
        let problems = parse_problem_file(&path, fmt, &self.cfg.variables)?;
        let records = self.measure(StageId::S1a, &problems, "runtimes_train")?;
        self.write(TIMINGS_TRAIN, &write_timings_csv(&records))
    }

    fn stage_1b(&mut self) -> Result<(), PipelineError> {
        let (path, fmt) = self.raw_input(true)?;
        let problems = parse_problem_file(&path, fmt, &self.cfg.variables)?;
        let timings = parse_timings_csv(&self.read(TIMINGS_TRAIN)?).map_err(malformed_from(TIMINGS_TRAIN))?;
        if timings.len() != problems.len() {
            return Err(stage_err(StageId::S1b)(format!(
                "{TIMINGS_TRAIN} has {} problems, training input has {}",
                timings.len(),
                problems.len()
            )));
        }
        let labels: Vec<usize> = timings.iter().map(label_best).collect();
        self.write(TERMS_TRAIN, &terms_text(&problems))?;
        self.write(Y_TRAIN, &write_labels(&labels))
    }

    fn stage_1c(&mut self) -> Result<(), PipelineError> {
        let err = stage_err(StageId::S1c);
        let problems = parse_problem_file(&self.path(TERMS_TRAIN), InputFormat::Terms, &[])?;
        let n = problems[0].n_vars();
        let raw = generate_raw_descriptors(n);
        self.write(FEATURES_DESCRIPTIONS, &raw.to_text())?;
        let raw_m = evaluate_matrix(&raw, &problems).map_err(|e| err(e.to_string()))?;
        self.write(FEATURES_TRAIN_RAW, &raw_m.to_text())?;
        let fin = simplify_descriptors(&raw, &raw_m).map_err(|e| err(e.to_string()))?;
        self.write(FEATURES_DESCRIPTIONS_FINAL, &fin.to_text())?;
        // evaluated again from the file so hand-edited descriptor lists behave the same
        let fin = DescriptorSet::from_text(&self.read(FEATURES_DESCRIPTIONS_FINAL)?, n)
            .map_err(malformed_from(FEATURES_DESCRIPTIONS_FINAL))?;
        let m = evaluate_matrix(&fin, &problems).map_err(|e| err(e.to_string()))?;
        log::info!("{} of {} features kept", fin.len(), raw.len());
        self.write(FEATURES_TRAIN, &m.to_text())
    }

    fn stage_1d(&mut self) -> Result<(), PipelineError> {
        let err = stage_err(StageId::S1d);
        let x = FeatureMatrix::from_text(&self.read(FEATURES_TRAIN)?).map_err(malformed_from(FEATURES_TRAIN))?;
        let y = parse_labels(&self.read(Y_TRAIN)?).map_err(malformed_from(Y_TRAIN))?;
        let t = parse_timings_csv(&self.read(TIMINGS_TRAIN)?).map_err(malformed_from(TIMINGS_TRAIN))?;
        let data = TrainingSet::new(x, y, t).map_err(|e| err(e.to_string()))?;
        let cv = crate::mlcore::CvConfig { seed: derive_seed(self.cfg.seed, "cv"), ..self.cfg.cv.clone() };
        let train_seed = derive_seed(cv.seed, "train");
        let mut hyper = String::new();
        let mut models = Vec::new();
        for &family in &self.cfg.models {
            log::info!("stage 1d: {family}: {} candidates, {}-fold", cv.n_candidates, cv.folds);
            let outcome = cv_search_detailed(family, &data, &cv, &self.cfg.search).map_err(|e| err(e.to_string()))?;
            hyper.push_str(&format!(
                "{family} {} {} {} {} -> chosen: {} cv_score={}\n",
                cv.objective.name(),
                cv.folds,
                cv.n_candidates,
                cv.seed,
                outcome.best,
                outcome.best_scores().score(cv.objective)
            ));
            let m = train(&outcome.best, &data.x, &data.y, data.n_classes, train_seed).map_err(|e| err(e.to_string()))?;
            models.push(m);
        }
        let file = ModelFile { format: MODEL_FILE_FORMAT.into(), version: MODEL_FILE_VERSION, models };
        let json = serde_json::to_string(&file).map_err(|e| err(e.to_string()))?;
        self.write(&format!("hyperpar_{}.txt", self.stamp), &hyper)?;
        self.write(&format!("par_{}.txt", self.stamp), &(json + "\n"))
    }

    fn stage_2a(&mut self) -> Result<(), PipelineError> {
        let (path, fmt) = self.raw_input(false)?;
        let problems = parse_problem_file(&path, fmt, &self.cfg.variables)?;
        self.write(TERMS_TEST, &terms_text(&problems))
    }

    fn stage_2b(&mut self) -> Result<(), PipelineError> {
        let problems = parse_problem_file(&self.path(TERMS_TEST), InputFormat::Terms, &[])?;
        let ds = DescriptorSet::from_text(&self.read(FEATURES_DESCRIPTIONS_FINAL)?, problems[0].n_vars())
            .map_err(malformed_from(FEATURES_DESCRIPTIONS_FINAL))?;
        let m = evaluate_matrix(&ds, &problems).map_err(|e| stage_err(StageId::S2b)(e.to_string()))?;
        self.write(FEATURES_TEST, &m.to_text())
    }

    fn stage_2c(&mut self) -> Result<(), PipelineError> {
        let err = stage_err(StageId::S2c);
        let par = self.stamped("par_", ".txt")?;
        let par_name = par.file_name().unwrap().to_string_lossy().into_owned();
        let text = fs::read_to_string(&par).map_err(io_err(&par))?;
        let file: ModelFile = serde_json::from_str(&text)
            .map_err(|e| PipelineError::Malformed { file: par_name.clone(), line: e.line(), msg: e.to_string() })?;
        if file.format != MODEL_FILE_FORMAT || file.version != MODEL_FILE_VERSION {
            return Err(PipelineError::Malformed {
                file: par_name,
                line: 1,
                msg: format!("unsupported model file {} v{}", file.format, file.version),
            });
        }
        let x = FeatureMatrix::from_text(&self.read(FEATURES_TEST)?).map_err(malformed_from(FEATURES_TEST))?;
        let mut times = String::new();
        for &family in &self.cfg.models {
            let model = file
                .models
                .iter()
                .find(|m| m.spec.family() == family)
                .ok_or_else(|| err(format!("{par_name} has no {family} model")))?;
            let start = Instant::now();
            let pred = predict(model, &x).map_err(|e| err(format!("{family}: {e}")))?;
            let secs = start.elapsed().as_secs_f64();
            times.push_str(&format!("{family} {secs}\n"));
            self.write(&format!("y_{family}_{}_test.txt", self.stamp), &write_labels(&pred))?;
        }
        self.write(PREDICTION_TIMES_ML, &times)
    }

    fn stage_2d(&mut self) -> Result<(), PipelineError> {
        let problems = parse_problem_file(&self.path(TERMS_TEST), InputFormat::Terms, &[])?;
        let mut brown = Vec::with_capacity(problems.len());
        let mut sotd = Vec::with_capacity(problems.len());
        let (mut t_brown, mut t_sotd) = (0.0, 0.0);
        for p in &problems {
            let b = brown_choose(p);
            t_brown += b.prediction_seconds;
            brown.push(b.ordering.index());
            let s = sotd_choose(p, &self.cfg.oracle.caps).map_err(|e| stage_err(StageId::S2d)(e.to_string()))?;
            t_sotd += s.prediction_seconds;
            sotd.push(s.ordering.index());
        }
        self.write(Y_BROWN_TEST, &write_labels(&brown))?;
        self.write(Y_SOTD_TEST, &write_labels(&sotd))?;
        self.write(PREDICTION_TIMES_HEURISTICS, &format!("Brown {t_brown}\nsotd {t_sotd}\n"))
    }

    fn prediction_times(&self, name: &str) -> Result<Vec<(String, f64)>, PipelineError> {
        let mut out = Vec::new();
        for (i, line) in self.read(name)?.lines().enumerate() {
            let parsed = line.split_once(' ').and_then(|(s, t)| Some((s.to_string(), t.trim().parse().ok()?)));
            out.push(parsed.ok_or_else(|| PipelineError::Malformed {
                file: name.into(),
                line: i + 1,
                msg: format!("expected `solver seconds`, found `{line}`"),
            })?);
        }
        Ok(out)
    }

    fn labels(&self, path: &Path) -> Result<Vec<usize>, PipelineError> {
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        parse_labels(&text).map_err(|e| malformed_from(&name)(e))
    }

    fn stage_2e(&mut self) -> Result<(), PipelineError> {
        let problems = parse_problem_file(&self.path(TERMS_TEST), InputFormat::Terms, &[])?;
        let records = self.measure(StageId::S2e, &problems, "runtimes_test")?;
        let csv = write_timings_csv(&records);
        self.write(TIMINGS_TEST, &csv)?;
        // costs as stored, so the report is recomputable from the file
        let timings = parse_timings_csv(&csv).map_err(malformed_from(TIMINGS_TEST))?;
        let mut times = self.prediction_times(PREDICTION_TIMES_ML)?;
        times.extend(self.prediction_times(PREDICTION_TIMES_HEURISTICS)?);
        let time_of = |name: &str| -> Result<f64, PipelineError> {
            times.iter().find(|(n, _)| n == name).map(|(_, t)| *t).ok_or_else(|| PipelineError::Malformed {
                file: PREDICTION_TIMES_ML.into(),
                line: 0,
                msg: format!("no prediction time for {name}"),
            })
        };
        let mut inputs = Vec::new();
        for f in Family::ALL {
            let run = if self.cfg.models.contains(&f) {
                let path = self.stamped(&format!("y_{f}_"), "_test.txt")?;
                Some((self.labels(&path)?, time_of(f.name())?))
            } else {
                None
            };
            inputs.push(SolverInput { name: f.name().into(), run });
        }
        inputs.push(SolverInput {
            name: "Brown".into(),
            run: Some((self.labels(&self.path(Y_BROWN_TEST))?, time_of("Brown")?)),
        });
        inputs.push(SolverInput {
            name: "sotd".into(),
            run: Some((self.labels(&self.path(Y_SOTD_TEST))?, time_of("sotd")?)),
        });
        inputs.push(SolverInput { name: "rand".into(), run: Some((baseline_random(&timings, self.cfg.seed), 0.0)) });
        inputs.push(SolverInput { name: "VB".into(), run: Some((baseline_virtual(&timings, Virtual::Best), 0.0)) });
        inputs.push(SolverInput { name: "VW".into(), run: Some((baseline_virtual(&timings, Virtual::Worst), 0.0)) });
        let report = build_report(&inputs, &timings, &self.cfg.within_x)?;
        self.write(&format!("comparative_results_{}.txt", self.stamp), &report.to_text())?;
        self.write(&format!("comparative_results_{}.csv", self.stamp), &report.to_csv())
    }
}

/// Runs `cfg.stages` in order.
pub fn run(cfg: &PipelineConfig) -> Result<RunSummary, PipelineError> {
    cfg.validate()?;
    let stamp = cfg.stamp.clone().unwrap_or_else(timestamp_now);
    check_dependencies(cfg, &stamp)?;
    fs::create_dir_all(&cfg.out_dir).map_err(io_err(&cfg.out_dir))?;
    let mut ctx = Ctx { cfg, stamp, written: Vec::new() };
    let reads_input = cfg.stages.iter().any(|s| matches!(s, StageId::S1a | StageId::S1b | StageId::S2a));
    if cfg.generate.is_some() && reads_input {
        ctx.write_generated()?;
    }
    for &stage in &cfg.stages {
        log::info!("stage {stage}");
        match stage {
            StageId::S1a => ctx.stage_1a()?,
            StageId::S1b => ctx.stage_1b()?,
            StageId::S1c => ctx.stage_1c()?,
            StageId::S1d => ctx.stage_1d()?,
            StageId::S2a => ctx.stage_2a()?,
            StageId::S2b => ctx.stage_2b()?,
            StageId::S2c => ctx.stage_2c()?,
            StageId::S2d => ctx.stage_2d()?,
            StageId::S2e => ctx.stage_2e()?,
        }
    }
    Ok(RunSummary { stamp: ctx.stamp, written: ctx.written })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stage_names_round_trip() {
        for s in StageId::ALL {
            assert_eq!(s.name().parse::<StageId>().unwrap(), s);
        }
        assert!("3a".parse::<StageId>().is_err());
        assert_eq!(parse_stages("2e, 1a,1a").unwrap(), vec![StageId::S1a, StageId::S2e]);
    }

    #[test]
    fn missing_model_names_stage_1d() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = PipelineConfig {
            out_dir: dir.path().to_path_buf(),
            stages: vec![StageId::S2c],
            ..Default::default()
        };
        let err = run(&cfg).unwrap_err();
        assert!(matches!(err, PipelineError::MissingDependency { producer: StageId::S1d, .. }), "{err}");
        assert_eq!(err.exit_code(), 3);
        assert!(err.to_string().contains("stage 1d"));
    }
}
