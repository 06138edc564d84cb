//! Batch experiments: sweep algorithms, durations and seeds over a scenario,
//! aggregate the repetitions and emit comparison tables and per-duration
//! series.

pub mod reference;
mod scenarios;

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use scenarios::{
    builtin_plan_text, builtin_scenario, builtin_scenario_text, BUILTIN_PLANS, BUILTIN_SCENARIOS,
};

use crate::config::{Algorithm, ConfigError, ScenarioConfig};
use crate::metrics::{aggregate, scale_rule_of_three, MetricsError, RunReport, Summary};
use crate::simnet::{self, SimError};

/// Default reference duration for rescaled columns, in minutes.
pub const DEFAULT_REFERENCE_MIN: f64 = 3.33;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("invalid plan: {0}")]
    Plan(String),
    #[error("run failed ({algorithm}, {duration_min} min, seed {seed}) with config:\n{config}")]
    Run {
        algorithm: Algorithm,
        duration_min: f64,
        seed: u64,
        /// The failing run's scenario, as TOML.
        config: String,
        source: Box<SimError>,
    },
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("io error on {path}")]
    Io { path: PathBuf, source: io::Error },
    #[error("cannot parse plan")]
    Parse(#[from] toml::de::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> ExperimentError + '_ {
    move |source| ExperimentError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// On-disk plan description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanFile {
    #[serde(default)]
    pub name: String,
    /// Built-in scenario name, or a path relative to the plan file.
    pub scenario: String,
    pub algorithms: Vec<Algorithm>,
    pub durations_min: Vec<f64>,
    pub repetitions: u32,
    #[serde(default)]
    pub seeds: Option<Vec<u64>>,
    #[serde(default)]
    pub seed_base: Option<u64>,
    #[serde(default)]
    pub reference_min: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentPlan {
    pub name: String,
    pub scenario: ScenarioConfig,
    pub algorithms: Vec<Algorithm>,
    pub durations_min: Vec<f64>,
    pub repetitions: u32,
    /// One seed per repetition, shared by every algorithm and duration.
    pub seeds: Vec<u64>,
    pub reference_min: Option<f64>,
}

impl ExperimentPlan {
    /// Seeds `base, base + 1, ...`, one per repetition.
    pub fn seeds_from_base(base: u64, repetitions: u32) -> Vec<u64> {
        (0..repetitions as u64)
            .map(|i| base.wrapping_add(i))
            .collect()
    }

    pub fn from_file(plan: PlanFile, base_dir: Option<&Path>) -> Result<Self, ExperimentError> {
        let scenario = match builtin_scenario_text(&plan.scenario) {
            Some(text) => ScenarioConfig::from_toml(text)?,
            None => {
                let dir = base_dir.ok_or_else(|| {
                    ExperimentError::Plan(format!("unknown built-in scenario `{}`", plan.scenario))
                })?;
                let path = dir.join(&plan.scenario);
                let text = fs::read_to_string(&path).map_err(io_err(&path))?;
                ScenarioConfig::from_toml(&text)?
            }
        };
        let seeds = match (plan.seeds, plan.seed_base) {
            (Some(_), Some(_)) => {
                return Err(ExperimentError::Plan(
                    "give either `seeds` or `seed_base`, not both".into(),
                ))
            }
            (Some(seeds), None) => seeds,
            (None, base) => {
                Self::seeds_from_base(base.unwrap_or(scenario.rng_seed), plan.repetitions)
            }
        };
        let out = ExperimentPlan {
            name: plan.name,
            scenario,
            algorithms: plan.algorithms,
            durations_min: plan.durations_min,
            repetitions: plan.repetitions,
            seeds,
            reference_min: plan.reference_min,
        };
        out.validate()?;
        Ok(out)
    }

    pub fn from_toml(text: &str, base_dir: Option<&Path>) -> Result<Self, ExperimentError> {
        Self::from_file(toml::from_str(text)?, base_dir)
    }

    pub fn load(path: &Path) -> Result<Self, ExperimentError> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        Self::from_toml(&text, path.parent())
    }

    pub fn builtin(name: &str) -> Result<Self, ExperimentError> {
        let text = builtin_plan_text(name)
            .ok_or_else(|| ExperimentError::Plan(format!("unknown built-in plan `{name}`")))?;
        Self::from_toml(text, None)
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.algorithms.is_empty() {
            return Err(ExperimentError::Plan("no algorithms".into()));
        }
        if self.durations_min.is_empty() {
            return Err(ExperimentError::Plan("no durations".into()));
        }
        if self
            .durations_min
            .iter()
            .any(|d| !d.is_finite() || *d <= 0.0)
        {
            return Err(ExperimentError::Plan("durations must be positive".into()));
        }
        if self.repetitions == 0 {
            return Err(ExperimentError::Plan("repetitions must be positive".into()));
        }
        if self.seeds.len() != self.repetitions as usize {
            return Err(ExperimentError::Plan(format!(
                "{} seeds for {} repetitions",
                self.seeds.len(),
                self.repetitions
            )));
        }
        if let Some(r) = self.reference_min {
            if !r.is_finite() || r <= 0.0 {
                return Err(ExperimentError::Plan(
                    "reference_min must be positive".into(),
                ));
            }
        }
        Ok(())
    }

    /// Every run of the plan, algorithm-major, then duration, then seed.
    pub fn runs(&self) -> Vec<RunSpec> {
        let mut runs = Vec::new();
        for &algorithm in &self.algorithms {
            for &duration_min in &self.durations_min {
                for &seed in &self.seeds {
                    runs.push(RunSpec {
                        algorithm,
                        duration_min,
                        seed,
                    });
                }
            }
        }
        runs
    }

    pub fn config_for(&self, run: &RunSpec) -> ScenarioConfig {
        ScenarioConfig {
            algorithm: run.algorithm,
            duration_ms: minutes_to_ms(run.duration_min),
            rng_seed: run.seed,
            ..self.scenario.clone()
        }
    }
}

pub fn minutes_to_ms(minutes: f64) -> u64 {
    (minutes * 60_000.0).round() as u64
}

/// Minutes without trailing zeros: `5`, `3.33`.
pub fn format_minutes(minutes: f64) -> String {
    let s = format!("{minutes:.2}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunSpec {
    pub algorithm: Algorithm,
    pub duration_min: f64,
    pub seed: u64,
}

impl RunSpec {
    pub fn label(&self) -> String {
        format!(
            "{}_{}min_seed{}",
            self.algorithm.slug(),
            format_minutes(self.duration_min),
            self.seed
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub algorithm: Algorithm,
    pub duration_min: f64,
    pub runs: usize,
    pub unique: Summary,
    pub duplicate: Summary,
    pub tx_total: Summary,
    pub rx_total: Summary,
    /// Mean unique count rescaled to the table's reference duration.
    pub scaled_unique: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub reference_min: Option<f64>,
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonTable {
    /// Re-derives every scaled column from its unscaled mean.
    pub fn verify_scaling(&self, tolerance: f64) -> Result<(), String> {
        let Some(reference) = self.reference_min else {
            return Ok(());
        };
        for row in &self.rows {
            let expected = scale_rule_of_three(row.unique.mean, row.duration_min, reference)
                .map_err(|e| e.to_string())?;
            match row.scaled_unique {
                Some(v) if (v - expected).abs() <= tolerance => {}
                other => {
                    return Err(format!(
                        "{} {} min: scaled {:?}, expected {expected:.4}",
                        row.algorithm, row.duration_min, other
                    ))
                }
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let scaled_header = self
            .reference_min
            .map(|r| format!("Unique @{}min", format_minutes(r)));
        let mut out = String::new();
        let _ = write!(
            out,
            "{:<9} {:>7}  {:<24} {:<24} {:>10} {:>10}",
            "Algorithm", "Minutes", "Unique (mean)", "Duplicate (mean)", "tx_total", "rx_total"
        );
        if let Some(h) = &scaled_header {
            let _ = write!(out, " {h:>16}");
        }
        out.push('\n');
        for row in &self.rows {
            let _ = write!(
                out,
                "{:<9} {:>7}  {:<24} {:<24} {:>10.2} {:>10.2}",
                row.algorithm.to_string(),
                format_minutes(row.duration_min),
                format!("{:.2} (stdev={:.2})", row.unique.mean, row.unique.stdev),
                format!(
                    "{:.2} (stdev={:.2})",
                    row.duplicate.mean, row.duplicate.stdev
                ),
                row.tx_total.mean,
                row.rx_total.mean,
            );
            if let Some(v) = row.scaled_unique {
                let _ = write!(out, " {v:>16.2}");
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "algorithm",
            "minutes",
            "runs",
            "unique_mean",
            "unique_stdev",
            "duplicate_mean",
            "duplicate_stdev",
            "tx_total_mean",
            "rx_total_mean",
            "scaled_unique",
        ])?;
        for row in &self.rows {
            w.write_record([
                row.algorithm.slug().to_string(),
                format_minutes(row.duration_min),
                row.runs.to_string(),
                format!("{:.2}", row.unique.mean),
                format!("{:.2}", row.unique.stdev),
                format!("{:.2}", row.duplicate.mean),
                format!("{:.2}", row.duplicate.stdev),
                format!("{:.2}", row.tx_total.mean),
                format!("{:.2}", row.rx_total.mean),
                row.scaled_unique
                    .map(|v| format!("{v:.2}"))
                    .unwrap_or_default(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Accumulated series of one algorithm, read off the table rows.
    pub fn series(&self, algorithm: Algorithm) -> Vec<SeriesPoint> {
        let mut points: Vec<SeriesPoint> = self
            .rows
            .iter()
            .filter(|r| r.algorithm == algorithm)
            .map(|r| SeriesPoint {
                minutes: r.duration_min,
                unique: r.unique.mean,
                duplicate: r.duplicate.mean,
            })
            .collect();
        points.sort_by(|a, b| a.minutes.total_cmp(&b.minutes));
        points
    }
}

/// One bar of an accumulated-messages chart.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub minutes: f64,
    pub unique: f64,
    pub duplicate: f64,
}

/// `(minutes, unique, duplicate)` per duration group, sorted by duration.
/// Groups with several reports contribute their mean.
pub fn emit_accumulated_series(groups: &[(f64, &[RunReport])]) -> Vec<SeriesPoint> {
    let mut points: Vec<SeriesPoint> = groups
        .iter()
        .filter(|(_, reports)| !reports.is_empty())
        .map(|&(minutes, reports)| {
            let n = reports.len() as f64;
            SeriesPoint {
                minutes,
                unique: reports
                    .iter()
                    .map(|r| r.unique_received as f64)
                    .sum::<f64>()
                    / n,
                duplicate: reports
                    .iter()
                    .map(|r| r.duplicate_received as f64)
                    .sum::<f64>()
                    / n,
            }
        })
        .collect();
    points.sort_by(|a, b| a.minutes.total_cmp(&b.minutes));
    points
}

pub fn write_series_csv<W: io::Write>(points: &[SeriesPoint], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["minutes", "unique", "duplicate"])?;
    for p in points {
        w.write_record([
            format_minutes(p.minutes),
            format!("{:.2}", p.unique),
            format!("{:.2}", p.duplicate),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlanRun {
    pub spec: RunSpec,
    pub report: RunReport,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlanOutcome {
    pub plan_name: String,
    pub table: ComparisonTable,
    pub runs: Vec<PlanRun>,
}

/// Executes every run of `plan` (in parallel) and aggregates per
/// algorithm and duration.
pub fn run_plan(plan: &ExperimentPlan) -> Result<PlanOutcome, ExperimentError> {
    plan.validate()?;
    let specs = plan.runs();
    let results: Vec<Result<RunReport, SimError>> = specs
        .par_iter()
        .map(|spec| simnet::run(&plan.config_for(spec)))
        .collect();

    let mut runs = Vec::with_capacity(specs.len());
    for (spec, result) in specs.into_iter().zip(results) {
        let report = result.map_err(|source| ExperimentError::Run {
            algorithm: spec.algorithm,
            duration_min: spec.duration_min,
            seed: spec.seed,
            config: plan
                .config_for(&spec)
                .to_toml()
                .unwrap_or_else(|e| format!("<unprintable: {e}>")),
            source: Box::new(source),
        })?;
        runs.push(PlanRun { spec, report });
    }

    let mut rows = Vec::new();
    for &algorithm in &plan.algorithms {
        for &duration_min in &plan.durations_min {
            let group: Vec<RunReport> = runs
                .iter()
                .filter(|r| r.spec.algorithm == algorithm && r.spec.duration_min == duration_min)
                .map(|r| r.report.clone())
                .collect();
            let agg = aggregate(&group)?;
            let scaled_unique = plan
                .reference_min
                .map(|reference| {
                    scale_rule_of_three(agg.unique_received.mean, duration_min, reference)
                })
                .transpose()?;
            rows.push(ComparisonRow {
                algorithm,
                duration_min,
                runs: agg.runs,
                unique: agg.unique_received,
                duplicate: agg.duplicate_received,
                tx_total: agg.tx_total,
                rx_total: agg.rx_total,
                scaled_unique,
            });
        }
    }

    Ok(PlanOutcome {
        plan_name: plan.name.clone(),
        table: ComparisonTable {
            reference_min: plan.reference_min,
            rows,
        },
        runs,
    })
}

impl PlanOutcome {
    /// Writes `table.txt`, `table.csv`, `series_<algo>.csv` and one
    /// `report_<run>.json` per run into `dir`. Returns the written paths.
    pub fn write_to(&self, dir: &Path) -> Result<Vec<PathBuf>, ExperimentError> {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        let mut written = Vec::new();
        let mut put = |name: String, bytes: Vec<u8>| -> Result<(), ExperimentError> {
            let path = dir.join(name);
            fs::write(&path, bytes).map_err(io_err(&path))?;
            written.push(path);
            Ok(())
        };

        put("table.txt".into(), self.table.to_text().into_bytes())?;
        let mut csv_buf = Vec::new();
        self.table.write_csv(&mut csv_buf)?;
        put("table.csv".into(), csv_buf)?;

        let mut algorithms: Vec<Algorithm> = self.table.rows.iter().map(|r| r.algorithm).collect();
        algorithms.dedup();
        for algorithm in algorithms {
            let mut buf = Vec::new();
            write_series_csv(&self.table.series(algorithm), &mut buf)?;
            put(format!("series_{}.csv", algorithm.slug()), buf)?;
        }
        for run in &self.runs {
            let mut json = run.report.to_json();
            json.push('\n');
            put(
                format!("report_{}.json", run.spec.label()),
                json.into_bytes(),
            )?;
        }
        Ok(written)
    }
}
