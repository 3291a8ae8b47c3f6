//! Seeded instance generators. Every generator draws from a ChaCha8 stream
//! keyed by the seed alone, so instances are reproducible across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::basic::{Coverage, GraphCut, Modular};
use super::concave::{Concave, ConcaveOfLinear};
use super::entropy::ReadingsTable;
use super::mean_risk::{omega_from_confidence, MeanRiskSpec};
use crate::error::{GsoError, Result};
use crate::oracle::{BisetOracle, KPoint, KSetOracle, SetOracle, SetPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenKind {
    Coverage,
    ConcaveOfLinear,
    ReadingsTable,
    MeanRisk,
}

impl GenKind {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "coverage" => GenKind::Coverage,
            "concave-of-linear" => GenKind::ConcaveOfLinear,
            "readings-table" => GenKind::ReadingsTable,
            "mean-risk" => GenKind::MeanRisk,
            other => return Err(GsoError::UnknownKind(other.to_string())),
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            GenKind::Coverage => "coverage",
            GenKind::ConcaveOfLinear => "concave-of-linear",
            GenKind::ReadingsTable => "readings-table",
            GenKind::MeanRisk => "mean-risk",
        }
    }
}

/// Optional knobs; unset fields take per-kind defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenParams {
    /// Coverage universe size (default `2n`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub universe: Option<usize>,
    /// Coverage membership probability (default 0.3).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub density: Option<f64>,
    /// Mean-risk cardinality cap (default `max(1, n/3)`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Mean-risk confidence level (default 0.95).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub confidence: Option<f64>,
    /// Readings: measurement types (default 2).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub types: Option<usize>,
    /// Readings: rows (default 100).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rows: Option<usize>,
    /// Readings: bins per column (default 4).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bins: Option<u16>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GeneratedInstance {
    Coverage(Coverage),
    ConcaveOfLinear(ConcaveOfLinear),
    ReadingsTable(ReadingsTable),
    MeanRisk(MeanRiskSpec),
}

impl GeneratedInstance {
    pub fn kind(&self) -> GenKind {
        match self {
            GeneratedInstance::Coverage(_) => GenKind::Coverage,
            GeneratedInstance::ConcaveOfLinear(_) => GenKind::ConcaveOfLinear,
            GeneratedInstance::ReadingsTable(_) => GenKind::ReadingsTable,
            GeneratedInstance::MeanRisk(_) => GenKind::MeanRisk,
        }
    }

    /// Set-function view, for the kinds that have one.
    pub fn set_oracle(&self) -> Option<SetOracle> {
        match self {
            GeneratedInstance::Coverage(c) => Some(c.oracle()),
            GeneratedInstance::ConcaveOfLinear(c) => Some(c.oracle()),
            GeneratedInstance::MeanRisk(m) => Some(m.oracle()),
            GeneratedInstance::ReadingsTable(_) => None,
        }
    }

    pub fn kset_oracle(&self) -> Option<Result<KSetOracle>> {
        match self {
            GeneratedInstance::ReadingsTable(t) => Some(t.entropy_oracle()),
            _ => None,
        }
    }
}

pub fn gen_random_instance(
    kind: GenKind,
    n: usize,
    seed: u64,
    params: &GenParams,
) -> Result<GeneratedInstance> {
    if n == 0 {
        return Err(GsoError::InvalidArgument("instance size must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(match kind {
        GenKind::Coverage => {
            let universe = params.universe.unwrap_or(2 * n).max(1);
            let density = params.density.unwrap_or(0.3);
            GeneratedInstance::Coverage(random_coverage(&mut rng, n, universe, density))
        }
        GenKind::ConcaveOfLinear => {
            let weights: Vec<f64> = (0..n).map(|_| round3(rng.random_range(0.0..10.0))).collect();
            let span: f64 = weights.iter().sum();
            let g = random_concave(&mut rng, span.max(1.0));
            GeneratedInstance::ConcaveOfLinear(ConcaveOfLinear::new(weights, g)?)
        }
        GenKind::ReadingsTable => GeneratedInstance::ReadingsTable(ReadingsTable::synthetic(
            n,
            params.types.unwrap_or(2),
            params.rows.unwrap_or(100),
            params.bins.unwrap_or(4),
            rng.random(),
        )?),
        GenKind::MeanRisk => {
            let k = params.k.unwrap_or((n / 3).max(1)).clamp(1, n);
            let omega = omega_from_confidence(params.confidence.unwrap_or(0.95))?;
            let mu = (0..n).map(|_| round3(rng.random_range(0.0..1.0))).collect();
            let a = (0..n).map(|_| round3(rng.random_range(0.0..0.4))).collect();
            GeneratedInstance::MeanRisk(MeanRiskSpec::new(mu, a, omega, k)?)
        }
    })
}

fn round3(v: f64) -> f64 {
    (v * 1000.0).round() / 1000.0
}

fn random_coverage(rng: &mut ChaCha8Rng, n: usize, universe: usize, density: f64) -> Coverage {
    let sets = (0..n)
        .map(|_| {
            let mut s: Vec<usize> = (0..universe).filter(|_| rng.random_bool(density)).collect();
            if s.is_empty() {
                s.push(rng.random_range(0..universe));
            }
            s
        })
        .collect();
    Coverage::new(sets)
}

/// A random concave function meant to be evaluated on `[0, span]`. Not
/// necessarily monotone.
pub fn random_concave(rng: &mut impl Rng, span: f64) -> Concave {
    let lin = Concave::Linear {
        slope: round3(rng.random_range(-1.0..0.5)),
    };
    match rng.random_range(0..4) {
        0 => {
            let pieces = rng.random_range(2..6);
            let mut ts: Vec<f64> = (0..pieces - 1).map(|_| rng.random_range(0.0..span)).collect();
            ts.sort_by(f64::total_cmp);
            ts.dedup();
            let mut points = vec![[0.0, 0.0]];
            let mut slope = rng.random_range(0.5..3.0);
            let mut t0 = 0.0;
            let mut v = 0.0;
            for t in ts.into_iter().chain([span.max(1.0)]) {
                if t <= t0 {
                    continue;
                }
                v += slope * (t - t0);
                points.push([t, v]);
                t0 = t;
                slope -= rng.random_range(0.1..1.5);
            }
            Concave::PiecewiseLinear { points }
        }
        1 => Concave::Sum {
            terms: vec![
                Concave::Scaled {
                    factor: round3(rng.random_range(0.5..3.0)),
                    inner: Box::new(Concave::Sqrt),
                },
                lin,
            ],
        },
        2 => Concave::Sum {
            terms: vec![
                Concave::Scaled {
                    factor: round3(rng.random_range(0.5..3.0)),
                    inner: Box::new(Concave::Log1p),
                },
                lin,
            ],
        },
        _ => Concave::Sum {
            terms: vec![
                Concave::Scaled {
                    factor: round3(rng.random_range(0.5..3.0)),
                    inner: Box::new(Concave::Power {
                        p: round3(rng.random_range(0.3..0.9)),
                    }),
                },
                lin,
            ],
        },
    }
}

/// Nondecreasing concave `g` with `g(0) = 0`.
fn random_monotone_concave(rng: &mut impl Rng) -> Concave {
    let factor = round3(rng.random_range(0.5..2.0));
    let inner = match rng.random_range(0..3) {
        0 => Concave::Sqrt,
        1 => Concave::Log1p,
        _ => Concave::Power {
            p: round3(rng.random_range(0.3..0.9)),
        },
    };
    Concave::Scaled {
        factor,
        inner: Box::new(inner),
    }
}

/// A random normalized submodular set function: coverage, concave of
/// linear, or an undirected cut, each plus a modular term.
pub fn random_submodular(n: usize, seed: u64) -> SetOracle {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let family = rng.random_range(0..3);
    let modular = Modular::new((0..n).map(|_| round3(rng.random_range(-2.0..1.0))).collect());
    let (name, base): (&str, SetOracle) = match family {
        0 => ("coverage", random_coverage(&mut rng, n, 2 * n, 0.3).oracle()),
        1 => {
            let weights: Vec<f64> = (0..n).map(|_| round3(rng.random_range(0.0..4.0))).collect();
            let span = weights.iter().sum::<f64>().max(1.0);
            let g = random_concave(&mut rng, span);
            ("concave_of_linear", ConcaveOfLinear::new(weights, g).expect("valid").oracle())
        }
        _ => {
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.random_bool(0.4) {
                        edges.push((i, j, round3(rng.random_range(0.0..2.0))));
                    }
                }
            }
            ("graph_cut", GraphCut::undirected(n, &edges).expect("valid").oracle())
        }
    };
    SetOracle::builder(SetPoint::empty(n), move |x: &SetPoint| base.value(x) + modular.eval(x))
        .name(format!("random_{}_{}", name, seed))
        .normalize(true)
        .build()
}

/// A random normalized `k`-submodular function
/// `h(a(∪_q X_q)) + Σ_q g_q(b_q(X_q)) + Σ_q Σ_{i∈X_q} c_qi`
/// with `h`, `g_q` nondecreasing concave and `c_pi + c_qi ≥ 0` for `p ≠ q`.
/// The modular part may be negative, so the result need not be monotone.
pub fn random_ksubmodular(n: usize, k: usize, seed: u64) -> KSetOracle {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = ConcaveOfLinear::new(
        (0..n).map(|_| round3(rng.random_range(0.0..2.0))).collect(),
        random_monotone_concave(&mut rng),
    )
    .expect("valid");
    let gs: Vec<ConcaveOfLinear> = (0..k)
        .map(|_| {
            ConcaveOfLinear::new(
                (0..n).map(|_| round3(rng.random_range(0.0..2.0))).collect(),
                random_monotone_concave(&mut rng),
            )
            .expect("valid")
        })
        .collect();
    let mut c = vec![vec![0.0; n]; k];
    for i in 0..n {
        for row in c.iter_mut() {
            row[i] = round3(rng.random_range(0.0..1.5));
        }
        let neg = rng.random_range(0..k);
        let room = (0..k)
            .filter(|&q| q != neg)
            .map(|q| c[q][i])
            .fold(f64::INFINITY, f64::min);
        let room = if room.is_finite() { room } else { 2.0 };
        c[neg][i] = -round3(rng.random_range(0.0..1.0) * room).min(room);
    }
    KSetOracle::builder(KPoint::empty(n, k), move |x: &KPoint| {
        let union = SetPoint::from_bits(x.codes().iter().map(|&c| c != 0).collect());
        let mut v = h.eval(&union).expect("shape");
        for (q, g) in gs.iter().enumerate() {
            let comp = SetPoint::from_bits(x.codes().iter().map(|&c| c as usize == q + 1).collect());
            v += g.eval(&comp).expect("shape");
        }
        for (i, &code) in x.codes().iter().enumerate() {
            if code != 0 {
                v += c[code as usize - 1][i];
            }
        }
        v
    })
    .name(format!("random_ksub_{}_{}", k, seed))
    .normalize(true)
    .build()
}

/// [`random_ksubmodular`] with `k = 2`, on ternary vectors.
pub fn random_bisubmodular(n: usize, seed: u64) -> BisetOracle {
    random_ksubmodular(n, 2, seed)
        .as_biset()
        .expect("k = 2")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{verify_property, OracleRef, PropertyKind};

    #[test]
    fn generators_are_deterministic() {
        for kind in [
            GenKind::Coverage,
            GenKind::ConcaveOfLinear,
            GenKind::ReadingsTable,
            GenKind::MeanRisk,
        ] {
            let a = gen_random_instance(kind, 6, 42, &GenParams::default()).unwrap();
            let b = gen_random_instance(kind, 6, 42, &GenParams::default()).unwrap();
            let c = gen_random_instance(kind, 6, 43, &GenParams::default()).unwrap();
            assert_eq!(a, b);
            assert_ne!(a, c);
        }
        assert!(matches!(GenKind::parse("nope"), Err(GsoError::UnknownKind(_))));
    }

    #[test]
    fn random_families_have_their_class() {
        for seed in 0..12 {
            let f = random_submodular(6, seed);
            assert!(verify_property(OracleRef::Set(&f), PropertyKind::Submodular, 1 << 8)
                .unwrap()
                .holds);
            let g = random_ksubmodular(4, 3, seed);
            assert!(verify_property(OracleRef::KSet(&g), PropertyKind::KSubmodular, 1 << 8)
                .unwrap()
                .holds);
            let b = random_bisubmodular(4, seed);
            assert!(verify_property(OracleRef::Biset(&b), PropertyKind::Bisubmodular, 1 << 8)
                .unwrap()
                .holds);
        }
    }
}
