//! JSON instance files and the problem descriptors they resolve to.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::apps::{
    es_ccmin, es_ksets, es_sets, es_ternary, feature_exhaustive, mean_risk_exhaustive, robust_exhaustive,
    sensor_exhaustive, solve_feature_selection, solve_mean_risk, solve_robust_coupled, solve_sensor_placement,
    FeatureInstance, RobustInstance, SensorInstance,
};
use crate::dcg::{
    ccmin_branch_and_cut, dcg_max_ksub, dcg_max_submodular, dcg_min_bisub, dcg_min_submodular, DcgConfig,
    DcgReport,
};
use crate::error::{GsoError, Result};
use crate::functions::{
    gen_random_instance, random_bisubmodular, random_ksubmodular, random_submodular, ConcaveOfLinear, Coverage,
    GenKind, GenParams, GeneratedInstance, GraphCut, MeanRiskSpec, Modular, MutualInfo, ReadingsTable,
};
use crate::milp::{LinearConstraint, Sense};
use crate::oracle::{BisetOracle, KPoint, KSetOracle, OracleRef, PropertyKind, SetOracle, SetPoint, TernaryPoint};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    SubmodMin,
    SubmodMax,
    KsubMax,
    BisubMin,
    Ccmin,
    MeanRisk,
    Sensor,
    RobustSensor,
    FeatureSel,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 9] = [
        ProblemKind::SubmodMin,
        ProblemKind::SubmodMax,
        ProblemKind::KsubMax,
        ProblemKind::BisubMin,
        ProblemKind::Ccmin,
        ProblemKind::MeanRisk,
        ProblemKind::Sensor,
        ProblemKind::RobustSensor,
        ProblemKind::FeatureSel,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProblemKind::SubmodMin => "submod-min",
            ProblemKind::SubmodMax => "submod-max",
            ProblemKind::KsubMax => "ksub-max",
            ProblemKind::BisubMin => "bisub-min",
            ProblemKind::Ccmin => "ccmin",
            ProblemKind::MeanRisk => "mean-risk",
            ProblemKind::Sensor => "sensor",
            ProblemKind::RobustSensor => "robust-sensor",
            ProblemKind::FeatureSel => "feature-sel",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        ProblemKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| GsoError::UnknownKind(s.to_string()))
    }

    pub fn sense(self) -> Sense {
        match self {
            ProblemKind::SubmodMin | ProblemKind::BisubMin | ProblemKind::Ccmin | ProblemKind::MeanRisk => {
                Sense::Minimize
            }
            _ => Sense::Maximize,
        }
    }
}

/// Constraint parameters. Which fields apply depends on the kind; unused
/// fields are rejected when the problem is built.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Parameters {
    /// `Σx ≤ cardinality` for set problems; the cap `k` for ccmin.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cardinality: Option<usize>,
    /// Per-type caps for k-set problems.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub caps: Option<Vec<usize>>,
    /// Modular term added to the ccmin objective.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modular: Option<Vec<f64>>,
    /// Robust placement sizes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<[usize; 2]>,
    /// Robust functioning lower bounds.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_prime: Option<[usize; 2]>,
    /// Robust wrong-type budget.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<usize>,
    /// Class locations for feature selection.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classes: Option<[usize; 2]>,
    /// Extra rows over the solver's variable layout.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub constraints: Vec<LinearConstraint>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum FunctionSpec {
    Coverage(Coverage),
    Modular(Modular),
    GraphCut(GraphCut),
    ConcaveOfLinear(ConcaveOfLinear),
    MeanRisk(MeanRiskSpec),
    Readings(ReadingsTable),
}

fn default_bins() -> u16 {
    4
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case", deny_unknown_fields)]
pub enum OracleSpec {
    Inline {
        function: FunctionSpec,
    },
    /// Path relative to the instance file.
    ReadingsCsv {
        path: PathBuf,
        #[serde(default = "default_bins")]
        bins: u16,
    },
    Generated {
        generator: GenKind,
        n: usize,
        #[serde(default, skip_serializing_if = "is_default_params")]
        params: GenParams,
    },
    RandomSubmodular {
        n: usize,
    },
    RandomKsubmodular {
        n: usize,
        k: usize,
    },
    RandomBisubmodular {
        n: usize,
    },
}

fn is_default_params(p: &GenParams) -> bool {
    *p == GenParams::default()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub kind: ProblemKind,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub parameters: Parameters,
    pub oracle: OracleSpec,
}

impl InstanceFile {
    pub fn new(kind: ProblemKind, seed: u64, oracle: OracleSpec) -> Self {
        InstanceFile {
            schema_version: SCHEMA_VERSION,
            id: None,
            kind,
            seed,
            parameters: Parameters::default(),
            oracle,
        }
    }

    /// Display name: the `id` field, else `<kind>-<seed>`.
    pub fn name(&self) -> String {
        self.id
            .clone()
            .unwrap_or_else(|| format!("{}-{}", self.kind.as_str(), self.seed))
    }

    /// Canonical text: pretty JSON with a trailing newline.
    pub fn to_canonical(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance files always serialize");
        s.push('\n');
        s
    }
}

/// Parses an instance file, reporting the failing field path and position.
pub fn parse_instance(text: &str) -> Result<InstanceFile> {
    let mut de = serde_json::Deserializer::from_str(text);
    let file: InstanceFile = serde_path_to_error::deserialize(&mut de).map_err(|e| GsoError::Schema {
        path: schema_path(e.path()),
        message: e.inner().to_string(),
    })?;
    de.end().map_err(|e| GsoError::Schema {
        path: ".".into(),
        message: e.to_string(),
    })?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(GsoError::Schema {
            path: "schema_version".into(),
            message: format!("unsupported version {}, expected {}", file.schema_version, SCHEMA_VERSION),
        });
    }
    Ok(file)
}

fn schema_path(p: &serde_path_to_error::Path) -> String {
    let s = p.to_string();
    if s.is_empty() {
        ".".into()
    } else {
        s
    }
}

fn schema_err(path: &str, message: impl Into<String>) -> GsoError {
    GsoError::Schema {
        path: path.into(),
        message: message.into(),
    }
}

/// A fully built problem: oracle plus constraints.
#[derive(Clone, Debug)]
pub enum Problem {
    SubmodMin {
        f: SetOracle,
        extra: Vec<LinearConstraint>,
    },
    SubmodMax {
        f: SetOracle,
        extra: Vec<LinearConstraint>,
    },
    KsubMax {
        f: KSetOracle,
        caps: Vec<usize>,
        extra: Vec<LinearConstraint>,
    },
    BisubMin {
        f: BisetOracle,
        extra: Vec<LinearConstraint>,
    },
    Ccmin {
        spec: ConcaveOfLinear,
        modular: Option<Vec<f64>>,
        k: usize,
        extra: Vec<LinearConstraint>,
    },
    MeanRisk {
        spec: MeanRiskSpec,
        extra: Vec<LinearConstraint>,
    },
    Sensor(SensorInstance),
    RobustSensor(RobustInstance),
    FeatureSel(FeatureInstance),
}

/// Enumeration caps used by solvers and baselines.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Caps {
    pub es: u128,
    pub outer: u128,
    pub verify: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            es: crate::apps::DEFAULT_ES_CAP,
            outer: crate::apps::DEFAULT_OUTER_CAP,
            verify: crate::oracle::DEFAULT_DOMAIN_CAP,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Solved {
    pub report: DcgReport,
    /// Human-readable optimal point.
    pub point: String,
    /// `(key, value)` details specific to the kind.
    pub notes: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Exhaustive {
    pub value: f64,
    pub point: String,
    pub evaluated: u64,
    pub time_s: f64,
}

enum Resolved {
    Set(SetOracle),
    Concave(ConcaveOfLinear),
    MeanRisk(MeanRiskSpec),
    Table(ReadingsTable),
    KSet(KSetOracle),
    Biset(BisetOracle),
}

impl Resolved {
    fn describe(&self) -> &'static str {
        match self {
            Resolved::Set(_) => "a set function",
            Resolved::Concave(_) => "a concave-of-linear function",
            Resolved::MeanRisk(_) => "a mean-risk function",
            Resolved::Table(_) => "a readings table",
            Resolved::KSet(_) => "a k-set function",
            Resolved::Biset(_) => "a biset function",
        }
    }
}

fn resolve(spec: &OracleSpec, seed: u64, base: Option<&Path>) -> Result<Resolved> {
    Ok(match spec {
        OracleSpec::Inline { function } => match function {
            FunctionSpec::Coverage(c) => Resolved::Set(Coverage::new(c.sets.clone()).oracle()),
            FunctionSpec::Modular(m) => Resolved::Set(m.oracle()),
            FunctionSpec::GraphCut(g) => Resolved::Set(GraphCut::new(g.n, g.arcs.clone())?.oracle()),
            FunctionSpec::ConcaveOfLinear(c) => {
                Resolved::Concave(ConcaveOfLinear::new(c.weights.clone(), c.g.clone())?)
            }
            FunctionSpec::MeanRisk(m) => {
                Resolved::MeanRisk(MeanRiskSpec::new(m.mu.clone(), m.a.clone(), m.omega, m.k)?)
            }
            FunctionSpec::Readings(t) => Resolved::Table(t.clone()),
        },
        OracleSpec::ReadingsCsv { path, bins } => {
            let full = match base {
                Some(dir) if path.is_relative() => dir.join(path),
                _ => path.clone(),
            };
            Resolved::Table(super::read_readings_csv(&full, *bins)?)
        }
        OracleSpec::Generated { generator, n, params } => match gen_random_instance(*generator, *n, seed, params)? {
            GeneratedInstance::Coverage(c) => Resolved::Set(c.oracle()),
            GeneratedInstance::ConcaveOfLinear(c) => Resolved::Concave(c),
            GeneratedInstance::MeanRisk(m) => Resolved::MeanRisk(m),
            GeneratedInstance::ReadingsTable(t) => Resolved::Table(t),
        },
        OracleSpec::RandomSubmodular { n } => Resolved::Set(random_submodular(*n, seed)),
        OracleSpec::RandomKsubmodular { n, k } => Resolved::KSet(random_ksubmodular(*n, *k, seed)),
        OracleSpec::RandomBisubmodular { n } => Resolved::Biset(random_bisubmodular(*n, seed)),
    })
}

fn reject_unused(p: &Parameters, kind: ProblemKind, allowed: &[&str]) -> Result<()> {
    let present = [
        ("cardinality", p.cardinality.is_some()),
        ("caps", p.caps.is_some()),
        ("modular", p.modular.is_some()),
        ("b", p.b.is_some()),
        ("b_prime", p.b_prime.is_some()),
        ("w", p.w.is_some()),
        ("classes", p.classes.is_some()),
        ("constraints", !p.constraints.is_empty()),
    ];
    for (name, set) in present {
        if set && !allowed.contains(&name) {
            return Err(schema_err(
                &format!("parameters.{}", name),
                format!("not used by kind {}", kind.as_str()),
            ));
        }
    }
    Ok(())
}

fn check_rows(rows: &[LinearConstraint], nvars: usize) -> Result<()> {
    for (r, c) in rows.iter().enumerate() {
        for &(j, _) in &c.coeffs {
            if j >= nvars {
                return Err(schema_err(
                    &format!("parameters.constraints[{}]", r),
                    format!("variable {} out of range for {} variables", j, nvars),
                ));
            }
        }
    }
    Ok(())
}

fn set_oracle_of(r: Resolved, kind: ProblemKind) -> Result<SetOracle> {
    match r {
        Resolved::Set(f) => Ok(f),
        Resolved::Concave(c) => Ok(c.oracle()),
        Resolved::MeanRisk(m) => Ok(m.oracle()),
        other => Err(mismatch(kind, &other)),
    }
}

fn table_of(r: Resolved, kind: ProblemKind) -> Result<ReadingsTable> {
    match r {
        Resolved::Table(t) => Ok(t),
        other => Err(mismatch(kind, &other)),
    }
}

fn mismatch(kind: ProblemKind, r: &Resolved) -> GsoError {
    schema_err("oracle", format!("kind {} cannot use {}", kind.as_str(), r.describe()))
}

fn default_caps(n: usize, k: usize) -> Vec<usize> {
    vec![(n / 10).max(1); k]
}

/// Builds the problem a file describes. `base` resolves relative CSV paths.
pub fn build_problem(file: &InstanceFile, base: Option<&Path>) -> Result<Problem> {
    let kind = file.kind;
    let p = &file.parameters;
    let r = resolve(&file.oracle, file.seed, base)?;
    let cardinality_row = |n: usize| -> Vec<LinearConstraint> {
        p.cardinality
            .map(|k| LinearConstraint::le((0..n).map(|j| (j, 1.0)).collect(), k as f64))
            .into_iter()
            .collect()
    };
    Ok(match kind {
        ProblemKind::SubmodMin | ProblemKind::SubmodMax => {
            reject_unused(p, kind, &["cardinality", "constraints"])?;
            let f = set_oracle_of(r, kind)?;
            let mut extra = cardinality_row(f.n());
            check_rows(&p.constraints, f.n())?;
            extra.extend(p.constraints.iter().cloned());
            if kind == ProblemKind::SubmodMin {
                Problem::SubmodMin { f, extra }
            } else {
                Problem::SubmodMax { f, extra }
            }
        }
        ProblemKind::KsubMax => {
            reject_unused(p, kind, &["caps", "constraints"])?;
            let f = match r {
                Resolved::KSet(f) => f,
                Resolved::Table(t) => t.entropy_oracle()?,
                other => return Err(mismatch(kind, &other)),
            };
            let caps = p.caps.clone().unwrap_or_else(|| vec![f.n(); f.k()]);
            if caps.len() != f.k() {
                return Err(schema_err("parameters.caps", format!("expected {} caps, got {}", f.k(), caps.len())));
            }
            check_rows(&p.constraints, f.n() * f.k())?;
            Problem::KsubMax {
                f,
                caps,
                extra: p.constraints.clone(),
            }
        }
        ProblemKind::BisubMin => {
            reject_unused(p, kind, &["constraints"])?;
            let f = match r {
                Resolved::Biset(f) => f,
                Resolved::Table(t) => t.entropy_oracle()?.as_biset()?,
                other => return Err(mismatch(kind, &other)),
            };
            check_rows(&p.constraints, 2 * f.n())?;
            Problem::BisubMin {
                f,
                extra: p.constraints.clone(),
            }
        }
        ProblemKind::Ccmin => {
            reject_unused(p, kind, &["cardinality", "modular", "constraints"])?;
            let spec = match r {
                Resolved::Concave(c) => c,
                other => return Err(mismatch(kind, &other)),
            };
            let k = p
                .cardinality
                .ok_or_else(|| schema_err("parameters.cardinality", "required for ccmin"))?;
            if let Some(m) = &p.modular {
                if m.len() != spec.n() {
                    return Err(schema_err(
                        "parameters.modular",
                        format!("expected {} entries, got {}", spec.n(), m.len()),
                    ));
                }
            }
            check_rows(&p.constraints, spec.n())?;
            Problem::Ccmin {
                spec,
                modular: p.modular.clone(),
                k,
                extra: p.constraints.clone(),
            }
        }
        ProblemKind::MeanRisk => {
            reject_unused(p, kind, &["constraints"])?;
            let spec = match r {
                Resolved::MeanRisk(m) => m,
                other => return Err(mismatch(kind, &other)),
            };
            check_rows(&p.constraints, spec.n())?;
            Problem::MeanRisk {
                spec,
                extra: p.constraints.clone(),
            }
        }
        ProblemKind::Sensor => {
            reject_unused(p, kind, &["caps"])?;
            let t = table_of(r, kind)?;
            let caps = p
                .caps
                .clone()
                .unwrap_or_else(|| default_caps(t.n_locations(), t.n_types()));
            Problem::Sensor(SensorInstance::new(t, caps).map_err(|e| schema_err("parameters.caps", e.to_string()))?)
        }
        ProblemKind::RobustSensor => {
            reject_unused(p, kind, &["b", "b_prime", "w"])?;
            let t = table_of(r, kind)?;
            match (p.b, p.b_prime, p.w) {
                (None, None, None) => Problem::RobustSensor(RobustInstance::with_recipe(t)?),
                (Some(b), Some(bp), Some(w)) => Problem::RobustSensor(RobustInstance::new(t, b, bp, w)?),
                _ => {
                    return Err(schema_err(
                        "parameters",
                        "robust-sensor needs all of b, b_prime and w, or none of them",
                    ))
                }
            }
        }
        ProblemKind::FeatureSel => {
            reject_unused(p, kind, &["caps", "classes"])?;
            let t = table_of(r, kind)?;
            let [c1, c2] = p.classes.unwrap_or([0, 1]);
            if c1 == c2 || c1.max(c2) >= t.n_locations() {
                return Err(schema_err(
                    "parameters.classes",
                    format!("need two distinct locations below {}", t.n_locations()),
                ));
            }
            let mi = MutualInfo::from_table(&t, c1, c2)?;
            let caps = match &p.caps {
                None => {
                    let b = (mi.n() / 10).max(1);
                    [b, b]
                }
                Some(c) if c.len() == 2 => [c[0], c[1]],
                Some(c) => return Err(schema_err("parameters.caps", format!("expected 2 caps, got {}", c.len()))),
            };
            Problem::FeatureSel(FeatureInstance { mi, caps })
        }
    })
}

/// A parsed file together with the problem it builds.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub file: InstanceFile,
    pub problem: Problem,
}

pub fn load_instance(path: &Path) -> Result<Loaded> {
    let text = std::fs::read_to_string(path).map_err(GsoError::file(path))?;
    let file = parse_instance(&text)?;
    let problem = build_problem(&file, path.parent())?;
    Ok(Loaded { file, problem })
}

fn fmt_set(items: &[usize]) -> String {
    let parts: Vec<String> = items.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

fn fmt_setpoint(x: &[f64]) -> String {
    SetPoint::from_values(x, 1e-6).map_or_else(|| format!("{:?}", x), |s| fmt_set(&s.items()))
}

fn fmt_kpoint(x: &[f64], n: usize, k: usize) -> String {
    match KPoint::from_binary(n, k, x, 1e-6) {
        Some(s) => {
            let parts: Vec<String> = (0..k).map(|q| fmt_set(&s.component(q))).collect();
            format!("({})", parts.join(","))
        }
        None => format!("{:?}", x),
    }
}

fn fmt_ternary(x: &[f64]) -> String {
    match TernaryPoint::from_values(x, 1e-6) {
        Some(t) => {
            let pos: Vec<usize> = (0..t.len()).filter(|&i| t.vals()[i] == 1).collect();
            let neg: Vec<usize> = (0..t.len()).filter(|&i| t.vals()[i] == -1).collect();
            format!("({},{})", fmt_set(&pos), fmt_set(&neg))
        }
        None => format!("{:?}", x),
    }
}

/// The objective oracle of a problem, owned.
#[derive(Clone, Debug)]
pub enum AnyOracle {
    Set(SetOracle),
    KSet(KSetOracle),
    Biset(BisetOracle),
}

impl AnyOracle {
    pub fn as_ref(&self) -> OracleRef<'_> {
        match self {
            AnyOracle::Set(f) => OracleRef::Set(f),
            AnyOracle::KSet(f) => OracleRef::KSet(f),
            AnyOracle::Biset(f) => OracleRef::Biset(f),
        }
    }
}

impl Problem {
    /// The oracle the solver optimizes. For ccmin and mean-risk this is the
    /// concave part only.
    pub fn oracle(&self) -> Result<AnyOracle> {
        Ok(match self {
            Problem::SubmodMin { f, .. } | Problem::SubmodMax { f, .. } => AnyOracle::Set(f.clone()),
            Problem::KsubMax { f, .. } => AnyOracle::KSet(f.clone()),
            Problem::BisubMin { f, .. } => AnyOracle::Biset(f.clone()),
            Problem::Ccmin { spec, .. } => AnyOracle::Set(spec.oracle()),
            Problem::MeanRisk { spec, .. } => AnyOracle::Set(spec.risk_part().oracle()),
            Problem::Sensor(s) => AnyOracle::KSet(s.oracle()?),
            Problem::RobustSensor(r) => AnyOracle::Biset(r.base.oracle()?.as_biset()?),
            Problem::FeatureSel(f) => AnyOracle::KSet(f.oracle()),
        })
    }

    /// The property the solver's cut family relies on.
    pub fn default_property(&self) -> PropertyKind {
        match self.kind() {
            ProblemKind::SubmodMin | ProblemKind::SubmodMax | ProblemKind::Ccmin | ProblemKind::MeanRisk => {
                PropertyKind::Submodular
            }
            ProblemKind::KsubMax | ProblemKind::Sensor | ProblemKind::FeatureSel => PropertyKind::KSubmodular,
            ProblemKind::BisubMin | ProblemKind::RobustSensor => PropertyKind::Bisubmodular,
        }
    }

    pub fn kind(&self) -> ProblemKind {
        match self {
            Problem::SubmodMin { .. } => ProblemKind::SubmodMin,
            Problem::SubmodMax { .. } => ProblemKind::SubmodMax,
            Problem::KsubMax { .. } => ProblemKind::KsubMax,
            Problem::BisubMin { .. } => ProblemKind::BisubMin,
            Problem::Ccmin { .. } => ProblemKind::Ccmin,
            Problem::MeanRisk { .. } => ProblemKind::MeanRisk,
            Problem::Sensor(_) => ProblemKind::Sensor,
            Problem::RobustSensor(_) => ProblemKind::RobustSensor,
            Problem::FeatureSel(_) => ProblemKind::FeatureSel,
        }
    }

    /// Ground-set size.
    pub fn n(&self) -> usize {
        match self {
            Problem::SubmodMin { f, .. } | Problem::SubmodMax { f, .. } => f.n(),
            Problem::KsubMax { f, .. } => f.n(),
            Problem::BisubMin { f, .. } => f.n(),
            Problem::Ccmin { spec, .. } => spec.n(),
            Problem::MeanRisk { spec, .. } => spec.n(),
            Problem::Sensor(s) => s.n(),
            Problem::RobustSensor(r) => r.n(),
            Problem::FeatureSel(f) => f.mi.n(),
        }
    }

    pub fn solve(&self, cfg: &DcgConfig, caps: &Caps) -> Result<Solved> {
        let plain = |report: DcgReport, point: String| Solved {
            report,
            point,
            notes: Vec::new(),
        };
        Ok(match self {
            Problem::SubmodMin { f, extra } => {
                let r = dcg_min_submodular(f, extra, cfg)?;
                let p = fmt_setpoint(&r.x);
                plain(r, p)
            }
            Problem::SubmodMax { f, extra } => {
                let r = dcg_max_submodular(f, extra, cfg)?;
                let p = fmt_setpoint(&r.x);
                plain(r, p)
            }
            Problem::KsubMax { f, caps: c, extra } => {
                let r = dcg_max_ksub(f, c, extra, cfg)?;
                let p = fmt_kpoint(&r.x, f.n(), f.k());
                plain(r, p)
            }
            Problem::BisubMin { f, extra } => {
                let r = dcg_min_bisub(f, extra, cfg)?;
                let p = fmt_ternary(&r.x);
                plain(r, p)
            }
            Problem::Ccmin { spec, modular, k, extra } => {
                let r = ccmin_branch_and_cut(spec, modular.as_deref(), *k, extra, cfg)?;
                let p = fmt_setpoint(&r.x);
                plain(r, p)
            }
            Problem::MeanRisk { spec, extra } => {
                let r = solve_mean_risk(spec, extra, cfg)?;
                let p = fmt_setpoint(&r.x);
                plain(r, p)
            }
            Problem::Sensor(inst) => {
                let s = solve_sensor_placement(inst, cfg)?;
                let p = fmt_kpoint(&s.report.x, inst.n(), inst.k());
                plain(s.report, p)
            }
            Problem::RobustSensor(inst) => {
                let o = solve_robust_coupled(inst, cfg, caps.outer)?;
                let worst: Vec<f64> = o.worst.vals().iter().map(|&v| v as f64).collect();
                Solved {
                    point: format!("({},{})", fmt_set(&o.s1), fmt_set(&o.s2)),
                    notes: vec![
                        ("worst".into(), fmt_ternary(&worst)),
                        ("plans".into(), o.plans.to_string()),
                    ],
                    report: o.report,
                }
            }
            Problem::FeatureSel(inst) => {
                let o = solve_feature_selection(inst, cfg, caps.verify)?;
                let mut notes = vec![("method".to_string(), o.method.as_str().to_string())];
                if let Some(h) = o.checked {
                    notes.push(("2-submodular".into(), h.to_string()));
                }
                Solved {
                    point: fmt_kpoint(&o.report.x, inst.mi.n(), 2),
                    notes,
                    report: o.report,
                }
            }
        })
    }

    pub fn exhaustive(&self, caps: &Caps) -> Result<Exhaustive> {
        let from = |r: crate::apps::EsResult, point: String| Exhaustive {
            value: r.value,
            point,
            evaluated: r.evaluated,
            time_s: r.time_s,
        };
        Ok(match self {
            Problem::SubmodMin { f, extra } => {
                let r = es_sets(f, Sense::Minimize, extra, caps.es)?;
                let p = fmt_setpoint(&r.x);
                from(r, p)
            }
            Problem::SubmodMax { f, extra } => {
                let r = es_sets(f, Sense::Maximize, extra, caps.es)?;
                let p = fmt_setpoint(&r.x);
                from(r, p)
            }
            Problem::KsubMax { f, caps: c, extra } => {
                let r = es_ksets(f, Sense::Maximize, c, extra, caps.es)?;
                let p = fmt_kpoint(&r.x, f.n(), f.k());
                from(r, p)
            }
            Problem::BisubMin { f, extra } => {
                let r = es_ternary(f, Sense::Minimize, extra, caps.es)?;
                let p = fmt_ternary(&r.x);
                from(r, p)
            }
            Problem::Ccmin { spec, modular, k, extra } => {
                let r = es_ccmin(spec, modular.as_deref(), *k, extra, caps.es)?;
                let p = fmt_setpoint(&r.x);
                from(r, p)
            }
            Problem::MeanRisk { spec, extra } => {
                let r = mean_risk_exhaustive(spec, extra, caps.es)?;
                let p = fmt_setpoint(&r.x);
                from(r, p)
            }
            Problem::Sensor(inst) => {
                let r = sensor_exhaustive(inst, caps.es)?;
                let p = fmt_kpoint(&r.x, inst.n(), inst.k());
                from(r, p)
            }
            Problem::RobustSensor(inst) => {
                let start = Instant::now();
                let r = robust_exhaustive(inst, caps.outer)?;
                Exhaustive {
                    value: r.value,
                    point: format!("({},{})", fmt_set(&r.s1), fmt_set(&r.s2)),
                    evaluated: r.evaluated,
                    time_s: start.elapsed().as_secs_f64(),
                }
            }
            Problem::FeatureSel(inst) => {
                let r = feature_exhaustive(inst, caps.es)?;
                let p = fmt_kpoint(&r.x, inst.mi.n(), 2);
                from(r, p)
            }
        })
    }
}

/// Seeded instance file for `kind` of size `n`, using a generator that
/// matches the kind.
pub fn generate_instance(kind: ProblemKind, n: usize, seed: u64) -> Result<InstanceFile> {
    if n == 0 {
        return Err(GsoError::InvalidArgument("instance size must be positive".into()));
    }
    let readings = |types: usize| OracleSpec::Generated {
        generator: GenKind::ReadingsTable,
        n,
        params: GenParams {
            types: Some(types),
            ..GenParams::default()
        },
    };
    let mut file = match kind {
        ProblemKind::SubmodMin | ProblemKind::SubmodMax => {
            InstanceFile::new(kind, seed, OracleSpec::RandomSubmodular { n })
        }
        ProblemKind::KsubMax => InstanceFile::new(kind, seed, OracleSpec::RandomKsubmodular { n, k: 2 }),
        ProblemKind::BisubMin => InstanceFile::new(kind, seed, OracleSpec::RandomBisubmodular { n }),
        ProblemKind::Ccmin => {
            let mut f = InstanceFile::new(
                kind,
                seed,
                OracleSpec::Generated {
                    generator: GenKind::ConcaveOfLinear,
                    n,
                    params: GenParams::default(),
                },
            );
            f.parameters.cardinality = Some((n / 3).max(1));
            f
        }
        ProblemKind::MeanRisk => InstanceFile::new(
            kind,
            seed,
            OracleSpec::Generated {
                generator: GenKind::MeanRisk,
                n,
                params: GenParams::default(),
            },
        ),
        ProblemKind::Sensor | ProblemKind::RobustSensor => InstanceFile::new(kind, seed, readings(2)),
        ProblemKind::FeatureSel => {
            if n < 3 {
                return Err(GsoError::InvalidArgument(
                    "feature selection needs at least three locations".into(),
                ));
            }
            InstanceFile::new(kind, seed, readings(1))
        }
    };
    file.id = Some(format!("{}-n{}-s{}", kind.as_str(), n, seed));
    Ok(file)
}

/// Deterministic sub-seeds for suites of generated instances.
pub fn derive_seeds(seed: u64, count: usize) -> Vec<u64> {
    use rand::Rng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.random_range(0..1u64 << 32)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_round_trip() {
        for k in ProblemKind::ALL {
            assert_eq!(ProblemKind::parse(k.as_str()).unwrap(), k);
            let json = serde_json::to_string(&k).unwrap();
            assert_eq!(json, format!("\"{}\"", k.as_str()));
        }
        assert!(ProblemKind::parse("nope").is_err());
    }

    #[test]
    fn canonical_round_trip() {
        for kind in ProblemKind::ALL {
            let f = generate_instance(kind, 6, 3).unwrap();
            let text = f.to_canonical();
            let back = parse_instance(&text).unwrap();
            assert_eq!(back, f);
            assert_eq!(back.to_canonical(), text);
            build_problem(&back, None).unwrap();
        }
    }

    #[test]
    fn schema_errors_name_the_field() {
        let text = r#"{"schema_version": 1, "kind": "ccmin", "seed": 1,
            "parameters": {"cardinality": "two"},
            "oracle": {"source": "random-submodular", "n": 3}}"#;
        match parse_instance(text) {
            Err(GsoError::Schema { path, message }) => {
                assert_eq!(path, "parameters.cardinality");
                assert!(message.contains("line 2"), "{}", message);
            }
            other => panic!("{:?}", other),
        }
        let unknown = r#"{"schema_version": 1, "kind": "sensor", "oracle": {"source": "random-submodular", "n": 3}, "extra": 1}"#;
        assert!(matches!(parse_instance(unknown), Err(GsoError::Schema { .. })));
        let version = r#"{"schema_version": 7, "kind": "sensor", "oracle": {"source": "random-submodular", "n": 3}}"#;
        match parse_instance(version) {
            Err(GsoError::Schema { path, .. }) => assert_eq!(path, "schema_version"),
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn kind_oracle_mismatch() {
        let f = InstanceFile::new(ProblemKind::Sensor, 0, OracleSpec::RandomSubmodular { n: 4 });
        assert!(matches!(build_problem(&f, None), Err(GsoError::Schema { .. })));
        let mut g = InstanceFile::new(ProblemKind::SubmodMax, 0, OracleSpec::RandomSubmodular { n: 4 });
        g.parameters.caps = Some(vec![1]);
        match build_problem(&g, None) {
            Err(GsoError::Schema { path, .. }) => assert_eq!(path, "parameters.caps"),
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn solve_matches_exhaustive_on_generated() {
        let cfg = DcgConfig::default();
        let caps = Caps::default();
        for kind in ProblemKind::ALL {
            let f = generate_instance(kind, 6, 11).unwrap();
            let p = build_problem(&f, None).unwrap();
            let s = p.solve(&cfg, &caps).unwrap();
            let e = p.exhaustive(&caps).unwrap();
            assert!(s.report.is_optimal(), "{}", kind.as_str());
            assert!(
                (s.report.value - e.value).abs() <= 1e-9 * e.value.abs().max(1.0),
                "{}: {} vs {}",
                kind.as_str(),
                s.report.value,
                e.value
            );
        }
    }
}
