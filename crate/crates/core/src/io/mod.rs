//! Instance files, readings CSV, result reports and benchmark suites.

pub mod bench;
pub mod instance;
pub mod readings;
pub mod report;

pub use bench::{load_suite, parse_suite, run_bench, table2_suite, BenchOptions, BenchOutcome, GenerateSpec, SuiteConfig, SuiteEntry};
pub use instance::{
    build_problem, derive_seeds, generate_instance, load_instance, parse_instance, Caps, Exhaustive, FunctionSpec,
    AnyOracle, InstanceFile, Loaded, OracleSpec, Parameters, Problem, ProblemKind, Solved, SCHEMA_VERSION,
};
pub use readings::{parse_header, read_raw_readings, read_readings_csv, write_raw_readings};
pub use report::{average_rows, render_table, report_csv_string, report_header, write_report_csv, ReportRow};
