use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use gso_core::cuts::{Family, DEFAULT_LIFT_CAP, DEFAULT_XI_CAP};
use gso_core::dcg::{DcgConfig, DcgMode, InitialCuts};
use gso_core::functions::synthetic_raw;
use gso_core::io::{
    build_problem, generate_instance, load_suite, parse_instance, render_table, run_bench,
    table2_suite, write_raw_readings, write_report_csv, BenchOptions, Caps, GenerateSpec, InstanceFile, OracleSpec,
    Problem, ProblemKind, ReportRow, SuiteConfig,
};
use gso_core::oracle::{verify_property, PropertyKind};

mod cuts;

#[derive(Parser)]
#[command(name = "gso", version, about = "Exact generalized submodular optimization by delayed constraint generation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve instance files, or a generated instance with --kind/--n.
    Solve(SolveArgs),
    /// Check the property the solver relies on by enumeration.
    Verify(VerifyArgs),
    /// Generate or separate one cut family at a point.
    Cuts(cuts::CutsArgs),
    /// Run a benchmark suite and report per-instance rows and averages.
    Bench(BenchArgs),
    /// Write synthetic instances, readings or suites.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
}

#[derive(Args, Clone)]
struct SolverArgs {
    /// Relative gap tolerance.
    #[arg(long, default_value_t = 1e-6)]
    eps: f64,
    /// Wall-clock limit per solve, in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long)]
    node_limit: Option<u64>,
    #[arg(long)]
    max_iterations: Option<usize>,
    /// iterative or single-tree; default picks by integrality.
    #[arg(long, value_parser = parse_mode)]
    mode: Option<DcgMode>,
    /// Seed the master with a single bounding cut.
    #[arg(long)]
    bounding_only: bool,
    /// Disable a cut family (repeatable).
    #[arg(long, value_parser = parse_family)]
    skip_family: Vec<Family>,
}

#[derive(Args, Clone)]
struct CapArgs {
    /// Exhaustive-search enumeration cap.
    #[arg(long, default_value_t = gso_core::apps::DEFAULT_ES_CAP)]
    cap_es: u128,
    /// Robust outer enumeration cap.
    #[arg(long, default_value_t = gso_core::apps::DEFAULT_OUTER_CAP)]
    cap_outer: u128,
    /// Property-check domain cap.
    #[arg(long, default_value_t = gso_core::oracle::DEFAULT_DOMAIN_CAP)]
    cap_verify: u64,
    /// k-submodular ξ enumeration cap.
    #[arg(long, default_value_t = DEFAULT_XI_CAP)]
    cap_xi: u128,
    /// Exact lifting subset budget.
    #[arg(long, default_value_t = DEFAULT_LIFT_CAP)]
    cap_lift: u128,
}

impl CapArgs {
    fn caps(&self) -> Caps {
        Caps {
            es: self.cap_es,
            outer: self.cap_outer,
            verify: self.cap_verify,
        }
    }
}

fn dcg_config(s: &SolverArgs, c: &CapArgs) -> Result<DcgConfig> {
    let mut cfg = DcgConfig {
        eps: s.eps,
        time_limit: s.time_limit.map(Duration::from_secs_f64),
        node_limit: s.node_limit,
        mode: s.mode,
        initial: if s.bounding_only { InitialCuts::Bounding } else { InitialCuts::Standard },
        xi_cap: c.cap_xi,
        lift_cap: c.cap_lift,
        skip_families: s.skip_family.iter().copied().collect(),
        ..DcgConfig::default()
    };
    if let Some(m) = s.max_iterations {
        cfg.max_iterations = m;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn parse_mode(s: &str) -> Result<DcgMode, String> {
    DcgMode::parse(s).map_err(|e| e.to_string())
}

fn parse_family(s: &str) -> Result<Family, String> {
    Family::parse(s).map_err(|e| e.to_string())
}

fn parse_kind(s: &str) -> Result<ProblemKind, String> {
    ProblemKind::parse(s).map_err(|_| {
        let all: Vec<&str> = ProblemKind::ALL.iter().map(|k| k.as_str()).collect();
        format!("unknown kind `{}`; expected one of {}", s, all.join(", "))
    })
}

fn parse_property(s: &str) -> Result<PropertyKind, String> {
    PropertyKind::parse(s).map_err(|e| e.to_string())
}

/// Instance files or a generated instance.
#[derive(Args, Clone)]
struct Source {
    files: Vec<PathBuf>,
    /// Generate an instance of this kind instead of reading files.
    #[arg(long, value_parser = parse_kind, conflicts_with = "files", requires = "n")]
    kind: Option<ProblemKind>,
    /// Size of the generated instance.
    #[arg(long)]
    n: Option<usize>,
    /// Overrides the seed in every instance.
    #[arg(long)]
    seed: Option<u64>,
}

struct Named {
    name: String,
    problem: gso_core::Result<Problem>,
}

impl Source {
    fn load(&self) -> Result<Vec<Named>> {
        if let Some(kind) = self.kind {
            let n = self.n.context("--n is required with --kind")?;
            let f = generate_instance(kind, n, self.seed.unwrap_or(0))?;
            return Ok(vec![Named {
                name: f.name(),
                problem: build_problem(&f, None),
            }]);
        }
        if self.files.is_empty() {
            bail!("give instance files or --kind with --n");
        }
        Ok(self.files.iter().map(|p| load_named(p, self.seed)).collect())
    }
}

fn load_named(path: &Path, seed: Option<u64>) -> Named {
    let fallback = path.display().to_string();
    let loaded = std::fs::read_to_string(path)
        .map_err(gso_core::GsoError::file(path))
        .and_then(|text| parse_instance(&text));
    match loaded {
        Ok(mut file) => {
            if let Some(s) = seed {
                file.seed = s;
            }
            Named {
                name: file.id.clone().unwrap_or(fallback),
                problem: build_problem(&file, path.parent()),
            }
        }
        Err(e) => Named {
            name: fallback,
            problem: Err(e),
        },
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    caps: CapArgs,
    /// Also run exhaustive search and fill the `exact` column.
    #[arg(long)]
    es: bool,
    /// Write the report CSV here (`-` for stdout).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Blank the time column so outputs compare byte for byte.
    #[arg(long)]
    no_time: bool,
    /// Print each solver report as JSON.
    #[arg(long)]
    json: bool,
}

fn method_name(mode: Option<DcgMode>) -> String {
    mode.map_or_else(|| "dcg".to_string(), |m| format!("dcg-{}", m.as_str()))
}

fn solve(args: &SolveArgs) -> Result<bool> {
    let cfg = dcg_config(&args.solver, &args.caps)?;
    let caps = args.caps.caps();
    let method = method_name(cfg.mode);
    let mut rows = Vec::new();
    let mut lines = Vec::new();
    let mut all_ok = true;
    for Named { name, problem } in args.source.load()? {
        let problem = match problem {
            Ok(p) => p,
            Err(e) => {
                all_ok = false;
                rows.push(ReportRow::from_error(&name, &method, &e));
                continue;
            }
        };
        let solved = match problem.solve(&cfg, &caps) {
            Ok(s) => s,
            Err(e) => {
                all_ok = false;
                rows.push(ReportRow::from_error(&name, &method, &e));
                continue;
            }
        };
        let mut row = ReportRow::from_report(&name, &method, &solved.report);
        all_ok &= solved.report.is_optimal() && solved.report.gap <= cfg.eps;
        let mut line = format!("{}: value = {}, point = {}", name, solved.report.value, solved.point);
        for (k, v) in &solved.notes {
            line.push_str(&format!(", {} = {}", k, v));
        }
        lines.push(line);
        if args.json {
            lines.push(serde_json::to_string(&solved.report)?);
        }
        let mut es_row = None;
        if args.es {
            match problem.exhaustive(&caps) {
                Ok(e) => {
                    let tol = 1e-9 * e.value.abs().max(1.0);
                    row.exact = Some(if !solved.report.is_optimal() {
                        "open".into()
                    } else if (solved.report.value - e.value).abs() <= tol {
                        "exact".into()
                    } else {
                        "mismatch".into()
                    });
                    lines.push(format!("{}: exhaustive value = {}, point = {}", name, e.value, e.point));
                    es_row = Some(ReportRow {
                        instance: name.clone(),
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
                Err(e) => es_row = Some(ReportRow::from_error(&name, "es", &e)),
            }
        }
        rows.push(row);
        rows.extend(es_row);
    }
    emit(&rows, &lines, args.csv.as_deref(), args.no_time)?;
    Ok(all_ok)
}

fn emit(rows: &[ReportRow], lines: &[String], csv: Option<&Path>, no_time: bool) -> Result<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match csv {
        Some(p) if p == Path::new("-") => write_report_csv(rows, &mut out, !no_time)?,
        Some(p) => {
            let f = std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?;
            write_report_csv(rows, f, !no_time)?;
            write!(out, "{}", render_table(rows, !no_time))?;
        }
        None => write!(out, "{}", render_table(rows, !no_time))?,
    }
    if csv != Some(Path::new("-")) {
        for l in lines {
            writeln!(out, "{}", l)?;
        }
    }
    Ok(())
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    source: Source,
    /// Property to check (repeatable); defaults to the one the solver uses.
    #[arg(long, value_parser = parse_property)]
    property: Vec<PropertyKind>,
    /// Property-check domain cap.
    #[arg(long, default_value_t = gso_core::oracle::DEFAULT_DOMAIN_CAP)]
    cap_verify: u64,
}

fn verify(args: &VerifyArgs) -> Result<bool> {
    let mut all = true;
    for Named { name, problem } in args.source.load()? {
        let problem = problem.with_context(|| format!("loading {}", name))?;
        let oracle = problem.oracle()?;
        let props = if args.property.is_empty() {
            vec![problem.default_property()]
        } else {
            args.property.clone()
        };
        for p in props {
            let v = verify_property(oracle.as_ref(), p, args.cap_verify)?;
            all &= v.holds;
            match &v.witness {
                None => println!("{}: {} holds ({} points)", name, p.as_str(), v.domain_size),
                Some(w) => println!("{}: {} fails ({} points): {}", name, p.as_str(), v.domain_size, w),
            }
        }
    }
    Ok(all)
}

#[derive(Args)]
struct BenchArgs {
    /// Suite file (JSON).
    suite: Option<PathBuf>,
    /// Built-in suite instead of a file.
    #[arg(long, conflicts_with = "suite", value_parser = ["table2"])]
    builtin: Option<String>,
    /// Instances in the built-in suite.
    #[arg(long, default_value_t = 10)]
    count: usize,
    /// Instances solved in parallel.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Force exhaustive search on.
    #[arg(long, conflicts_with = "no_es")]
    es: bool,
    /// Force exhaustive search off.
    #[arg(long)]
    no_es: bool,
    /// Replaces the seed of every generated block.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    no_time: bool,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    caps: CapArgs,
}

fn bench(args: &BenchArgs) -> Result<bool> {
    let (suite, base): (SuiteConfig, Option<PathBuf>) = match (&args.suite, &args.builtin) {
        (Some(p), _) => (
            load_suite(p).with_context(|| format!("reading suite {}", p.display()))?,
            p.parent().map(Path::to_path_buf),
        ),
        (None, Some(_)) => (table2_suite(args.count, 0), None),
        (None, None) => bail!("give a suite file or --builtin"),
    };
    let opts = BenchOptions {
        cfg: dcg_config(&args.solver, &args.caps)?,
        caps: args.caps.caps(),
        jobs: args.jobs,
        exhaustive: if args.es {
            Some(true)
        } else if args.no_es {
            Some(false)
        } else {
            None
        },
        seed: args.seed,
    };
    let out = run_bench(&suite, base.as_deref(), &opts)?;
    let rows = out.all_rows();
    emit(&rows, &[], args.csv.as_deref(), args.no_time)?;
    let exact_ok = out.rows.iter().all(|r| r.exact.as_deref().is_none_or(|e| e == "exact"));
    Ok(out.all_optimal() && exact_ok)
}

#[derive(Subcommand)]
enum GenCommand {
    /// A seeded instance file.
    Instance {
        #[arg(long, value_parser = parse_kind)]
        kind: ProblemKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Readings: bins per column.
        #[arg(long)]
        bins: Option<u16>,
        /// Readings: rows.
        #[arg(long)]
        rows: Option<usize>,
        /// Per-type caps, comma separated.
        #[arg(long, value_delimiter = ',')]
        caps: Option<Vec<usize>>,
        /// Cardinality cap for set problems and ccmin.
        #[arg(long)]
        cardinality: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Raw readings CSV with `loc<id>_<type>` columns.
    Readings {
        #[arg(long)]
        locations: usize,
        #[arg(long, default_value_t = 2)]
        types: usize,
        #[arg(long, default_value_t = 100)]
        rows: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A suite file: the built-in Table-2 analogue, or `count` generated
    /// instances of one kind.
    Suite {
        #[arg(long, value_parser = ["table2"], conflicts_with = "kind")]
        builtin: Option<String>,
        #[arg(long, value_parser = parse_kind, requires = "n")]
        kind: Option<ProblemKind>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also run exhaustive search.
        #[arg(long)]
        es: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn write_out(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

fn gen(cmd: &GenCommand) -> Result<()> {
    match cmd {
        GenCommand::Instance {
            kind,
            n,
            seed,
            bins,
            rows,
            caps,
            cardinality,
            out,
        } => {
            let mut f: InstanceFile = generate_instance(*kind, *n, *seed)?;
            if let OracleSpec::Generated { params, .. } = &mut f.oracle {
                params.bins = bins.or(params.bins);
                params.rows = rows.or(params.rows);
            } else if bins.is_some() || rows.is_some() {
                bail!("--bins and --rows apply to readings-based kinds only");
            }
            if caps.is_some() {
                f.parameters.caps = caps.clone();
            }
            if cardinality.is_some() {
                f.parameters.cardinality = *cardinality;
            }
            build_problem(&f, None)?;
            write_out(out.as_deref(), &f.to_canonical())
        }
        GenCommand::Readings {
            locations,
            types,
            rows,
            seed,
            out,
        } => {
            let raw = synthetic_raw(*locations, *types, *rows, *seed)?;
            let mut buf = Vec::new();
            write_raw_readings(&raw, &mut buf)?;
            write_out(out.as_deref(), &String::from_utf8(buf)?)
        }
        GenCommand::Suite {
            builtin,
            kind,
            n,
            count,
            seed,
            es,
            out,
        } => {
            let suite = match (builtin, kind) {
                (Some(_), _) => table2_suite(*count, *seed),
                (None, Some(kind)) => SuiteConfig {
                    name: format!("{}-n{}", kind.as_str(), n.unwrap_or(0)),
                    instances: Vec::new(),
                    generate: vec![GenerateSpec {
                        kind: *kind,
                        n: n.context("--n is required with --kind")?,
                        count: *count,
                        seed: *seed,
                        parameters: None,
                        params: None,
                    }],
                    exhaustive: *es,
                    modes: Vec::new(),
                },
                (None, None) => bail!("give --builtin or --kind"),
            };
            let mut text = serde_json::to_string_pretty(&suite)?;
            text.push('\n');
            write_out(out.as_deref(), &text)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Solve(a) => solve(&a),
        Command::Verify(a) => verify(&a),
        Command::Cuts(a) => cuts::run(&a).map(|()| true),
        Command::Bench(a) => bench(&a),
        Command::Gen { what } => gen(&what).map(|()| true),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_is_well_formed() {
        Cli::command().debug_assert();
    }

    #[test]
    fn load_errors_keep_the_path() {
        let n = load_named(Path::new("/nonexistent/x.json"), None);
        assert_eq!(n.name, "/nonexistent/x.json");
        assert!(n.problem.is_err());
        assert!(gso_core::io::load_instance(Path::new("/nonexistent/x.json")).is_err());
    }
}
