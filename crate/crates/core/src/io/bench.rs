//! Benchmark suites: method × instance grid with per-method averages.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::instance::{build_problem, derive_seeds, generate_instance, load_instance, Caps, InstanceFile, OracleSpec, Parameters, Problem, ProblemKind};
use super::report::{average_rows, ReportRow};
use crate::dcg::{DcgConfig, DcgMode};
use crate::error::{GsoError, Result};
use crate::functions::GenParams;

/// Instance given by path (relative to the suite file) or inline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SuiteEntry {
    Path(PathBuf),
    Inline(Box<InstanceFile>),
}

/// `count` seeded instances from [`generate_instance`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerateSpec {
    pub kind: ProblemKind,
    pub n: usize,
    pub count: usize,
    #[serde(default)]
    pub seed: u64,
    /// Replaces the generated parameters.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameters: Option<Parameters>,
    /// Replaces the generator knobs, for generated oracles.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<GenParams>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub instances: Vec<SuiteEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generate: Vec<GenerateSpec>,
    /// Also run exhaustive search and fill the `exact` column.
    #[serde(default)]
    pub exhaustive: bool,
    /// DCG modes to run; empty means the automatic choice.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modes: Vec<DcgMode>,
}

pub fn parse_suite(text: &str) -> Result<SuiteConfig> {
    let mut de = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| GsoError::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

pub fn load_suite(path: &Path) -> Result<SuiteConfig> {
    parse_suite(&std::fs::read_to_string(path).map_err(GsoError::file(path))?)
}

impl GenerateSpec {
    pub fn files(&self) -> Result<Vec<InstanceFile>> {
        derive_seeds(self.seed, self.count)
            .into_iter()
            .map(|s| {
                let mut f = generate_instance(self.kind, self.n, s)?;
                if let Some(p) = &self.parameters {
                    f.parameters = p.clone();
                }
                if let (Some(p), OracleSpec::Generated { params, .. }) = (&self.params, &mut f.oracle) {
                    *params = p.clone();
                }
                Ok(f)
            })
            .collect()
    }
}

/// Sensor placement at `n = 20`, two types, 100 rows and caps `(2, 2)`, on
/// readings kept at near-raw resolution (64 bins).
pub fn table2_suite(count: usize, seed: u64) -> SuiteConfig {
    SuiteConfig {
        name: "table2".into(),
        instances: Vec::new(),
        generate: vec![GenerateSpec {
            kind: ProblemKind::Sensor,
            n: 20,
            count,
            seed,
            parameters: Some(Parameters {
                caps: Some(vec![2, 2]),
                ..Parameters::default()
            }),
            params: Some(GenParams {
                types: Some(2),
                rows: Some(100),
                bins: Some(64),
                ..GenParams::default()
            }),
        }],
        exhaustive: true,
        modes: Vec::new(),
    }
}

#[derive(Clone, Debug)]
pub struct BenchOptions {
    pub cfg: DcgConfig,
    pub caps: Caps,
    pub jobs: usize,
    /// Overrides the suite's `exhaustive` flag.
    pub exhaustive: Option<bool>,
    /// Replaces the seed of every `generate` block.
    pub seed: Option<u64>,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            cfg: DcgConfig::default(),
            caps: Caps::default(),
            jobs: 1,
            exhaustive: None,
            seed: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchOutcome {
    pub name: String,
    pub rows: Vec<ReportRow>,
    pub averages: Vec<ReportRow>,
}

impl BenchOutcome {
    /// Rows followed by averages.
    pub fn all_rows(&self) -> Vec<ReportRow> {
        self.rows.iter().chain(&self.averages).cloned().collect()
    }

    /// True when every DCG row terminated optimally.
    pub fn all_optimal(&self) -> bool {
        self.rows
            .iter()
            .filter(|r| r.method.starts_with("dcg"))
            .all(|r| r.status == "optimal")
    }
}

fn method_name(mode: Option<DcgMode>) -> String {
    match mode {
        None => "dcg".into(),
        Some(m) => format!("dcg-{}", m.as_str()),
    }
}

fn run_one(name: &str, problem: &Result<Problem>, modes: &[Option<DcgMode>], es: bool, opts: &BenchOptions) -> Vec<ReportRow> {
    let problem = match problem {
        Ok(p) => p,
        Err(e) => return modes.iter().map(|m| ReportRow::from_error(name, &method_name(*m), e)).collect(),
    };
    let mut rows: Vec<ReportRow> = modes
        .iter()
        .map(|&m| {
            let cfg = DcgConfig { mode: m, ..opts.cfg.clone() };
            match problem.solve(&cfg, &opts.caps) {
                Ok(s) => ReportRow::from_report(name, &method_name(m), &s.report),
                Err(e) => ReportRow::from_error(name, &method_name(m), &e),
            }
        })
        .collect();
    if es {
        match problem.exhaustive(&opts.caps) {
            Ok(e) => {
                let tol = 1e-9 * e.value.abs().max(1.0);
                for r in &mut rows {
                    if r.is_error() {
                        continue;
                    }
                    r.exact = Some(if r.status != "optimal" {
                        "open".into()
                    } else if r.value.is_some_and(|v| (v - e.value).abs() <= tol) {
                        "exact".into()
                    } else {
                        "mismatch".into()
                    });
                }
                rows.push(ReportRow {
                    instance: name.into(),
                    method: "es".into(),
                    status: "optimal".into(),
                    time_s: e.time_s,
                    end_gap: Some(0.0),
                    nodes: Some(e.evaluated as f64),
                    cuts: Default::default(),
                    value: Some(e.value),
                    exact: None,
                });
            }
            Err(e) => rows.push(ReportRow::from_error(name, "es", &e)),
        }
    }
    rows
}

/// Runs the suite. Instances run in parallel on `jobs` threads; each solve
/// stays single-threaded and rows come out in suite order.
pub fn run_bench(suite: &SuiteConfig, base: Option<&Path>, opts: &BenchOptions) -> Result<BenchOutcome> {
    let mut entries: Vec<(String, Result<Problem>)> = Vec::new();
    for (j, e) in suite.instances.iter().enumerate() {
        match e {
            SuiteEntry::Path(p) => {
                let full = match base {
                    Some(dir) if p.is_relative() => dir.join(p),
                    _ => p.clone(),
                };
                let name = full
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| format!("instance-{}", j));
                let loaded = load_instance(&full);
                let name = loaded.as_ref().ok().and_then(|l| l.file.id.clone()).unwrap_or(name);
                entries.push((name, loaded.map(|l| l.problem)));
            }
            SuiteEntry::Inline(f) => entries.push((f.name(), build_problem(f, base))),
        }
    }
    for g in &suite.generate {
        let mut g = g.clone();
        if let Some(s) = opts.seed {
            g.seed = s;
        }
        for f in g.files()? {
            entries.push((f.name(), build_problem(&f, base)));
        }
    }
    let modes: Vec<Option<DcgMode>> = if suite.modes.is_empty() {
        vec![None]
    } else {
        suite.modes.iter().map(|&m| Some(m)).collect()
    };
    let es = opts.exhaustive.unwrap_or(suite.exhaustive);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| GsoError::InvalidArgument(format!("thread pool: {}", e)))?;
    let per: Vec<Vec<ReportRow>> = pool.install(|| {
        entries
            .par_iter()
            .map(|(name, p)| run_one(name, p, &modes, es, opts))
            .collect()
    });
    let rows: Vec<ReportRow> = per.into_iter().flatten().collect();
    let averages = average_rows(&rows);
    Ok(BenchOutcome {
        name: suite.name.clone(),
        rows,
        averages,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::report::report_csv_string;

    fn toy_suite() -> SuiteConfig {
        SuiteConfig {
            name: "toy".into(),
            instances: Vec::new(),
            generate: vec![GenerateSpec {
                kind: ProblemKind::SubmodMin,
                n: 5,
                count: 3,
                seed: 4,
                parameters: None,
                params: None,
            }],
            exhaustive: true,
            modes: Vec::new(),
        }
    }

    #[test]
    fn three_rows_and_an_average() {
        let out = run_bench(&toy_suite(), None, &BenchOptions::default()).unwrap();
        let dcg: Vec<_> = out.rows.iter().filter(|r| r.method == "dcg").collect();
        assert_eq!(dcg.len(), 3);
        assert!(dcg.iter().all(|r| r.exact.as_deref() == Some("exact")));
        assert_eq!(out.averages.len(), 2);
        assert!(out.all_optimal());
    }

    #[test]
    fn parallel_rows_match_serial() {
        let serial = run_bench(&toy_suite(), None, &BenchOptions::default()).unwrap();
        let par = run_bench(
            &toy_suite(),
            None,
            &BenchOptions {
                jobs: 3,
                ..BenchOptions::default()
            },
        )
        .unwrap();
        assert_eq!(
            report_csv_string(&serial.all_rows(), false),
            report_csv_string(&par.all_rows(), false)
        );
    }

    #[test]
    fn suite_round_trip() {
        let s = table2_suite(2, 5);
        let text = serde_json::to_string_pretty(&s).unwrap();
        assert_eq!(parse_suite(&text).unwrap(), s);
        assert!(parse_suite(r#"{"name": "x", "generate": [{"kind": "sensor"}]}"#).is_err());
    }

    #[test]
    fn broken_entries_become_error_rows() {
        let mut bad = InstanceFile::new(ProblemKind::Sensor, 0, OracleSpec::RandomSubmodular { n: 3 });
        bad.id = Some("bad".into());
        let suite = SuiteConfig {
            name: "mixed".into(),
            instances: vec![SuiteEntry::Inline(Box::new(bad))],
            generate: Vec::new(),
            exhaustive: false,
            modes: vec![DcgMode::Iterative],
        };
        let out = run_bench(&suite, None, &BenchOptions::default()).unwrap();
        assert_eq!(out.rows.len(), 1);
        assert!(out.rows[0].is_error());
        assert!(!out.all_optimal());
    }
}
