//! `gso cuts`: one family at one point, printed in cut-pool line format.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;

use gso_core::cuts::{
    ali_generate, bisub_separate, epbm_generate, epi_generate, epi_separate, ksub_cut_generate, lift_epi_exact,
    mir_generate, nogood_cut, si_separate, submax_cut_generate, Cut, Family, MonotoneForest, XiTable,
    DEFAULT_LIFT_CAP, DEFAULT_XI_CAP,
};
use gso_core::functions::ConcaveOfLinear;
use gso_core::io::{load_instance, AnyOracle, Problem};
use gso_core::oracle::{KPoint, Permutation, SetPoint};

#[derive(Args)]
pub struct CutsArgs {
    /// Instance file; not needed for MIR.
    instance: Option<PathBuf>,
    #[arg(long, value_parser = parse_family)]
    family: Family,
    /// Point, comma separated. k-set points use type codes (0 = unassigned,
    /// q = type q).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    point: Option<Vec<f64>>,
    /// 1-based permutation for EPI, EPBM, ALI and LEPI.
    #[arg(long, value_delimiter = ',')]
    perm: Option<Vec<usize>>,
    /// Signs for EPBM, one `+` or `-` per position of the permutation.
    #[arg(long)]
    sign: Option<String>,
    /// Upper bound on f for NOGOOD.
    #[arg(long)]
    bound: Option<f64>,
    /// MIR: vertex upper bounds.
    #[arg(long, value_delimiter = ',')]
    upper: Option<Vec<f64>>,
    /// MIR: arcs `p>c`, 1-based.
    #[arg(long, value_delimiter = ',')]
    arcs: Vec<String>,
    /// MIR: integer vertices, 1-based.
    #[arg(long, value_delimiter = ',')]
    integer: Vec<usize>,
    /// MIR: also use continuous children.
    #[arg(long)]
    permissive: bool,
    #[arg(long, default_value_t = DEFAULT_XI_CAP)]
    cap_xi: u128,
    #[arg(long, default_value_t = DEFAULT_LIFT_CAP)]
    cap_lift: u128,
}

fn parse_family(s: &str) -> Result<Family, String> {
    Family::parse(s).map_err(|e| e.to_string())
}

fn perm_or_point(args: &CutsArgs, n: usize) -> Result<Permutation> {
    match (&args.perm, &args.point) {
        (Some(p), _) => Ok(Permutation::from_one_based(p)?),
        (None, Some(x)) => Ok(Permutation::descending(x)),
        (None, None) => bail!("give --perm or --point"),
    }
    .and_then(|p| {
        if p.len() != n {
            bail!("permutation has {} entries, expected {}", p.len(), n);
        }
        Ok(p)
    })
}

fn point(args: &CutsArgs) -> Result<&[f64]> {
    args.point.as_deref().context("--point is required for this family")
}

fn binary(x: &[f64]) -> Result<SetPoint> {
    SetPoint::from_values(x, 1e-9).context("--point must be 0/1 for this family")
}

fn concave_part(p: &Problem) -> Result<(ConcaveOfLinear, usize)> {
    match p {
        Problem::Ccmin { spec, k, .. } => Ok((spec.clone(), *k)),
        Problem::MeanRisk { spec, .. } => Ok((spec.risk_part(), spec.k)),
        _ => bail!("SI, ALI and LEPI need a ccmin or mean-risk instance"),
    }
}

fn mir(args: &CutsArgs) -> Result<Vec<Cut>> {
    let u = args.upper.as_deref().context("MIR needs --upper")?;
    let v = u.len();
    let mut arcs = Vec::new();
    for a in &args.arcs {
        let (p, c) = a.split_once('>').with_context(|| format!("arc `{}` is not of the form p>c", a))?;
        let (p, c): (usize, usize) = (p.trim().parse()?, c.trim().parse()?);
        if p == 0 || c == 0 {
            bail!("arc `{}`: vertices are 1-based", a);
        }
        arcs.push((p - 1, c - 1));
    }
    let mut integer = vec![false; v];
    for &i in &args.integer {
        if i == 0 || i > v {
            bail!("integer vertex {} out of range 1..={}", i, v);
        }
        integer[i - 1] = true;
    }
    let forest = MonotoneForest::from_arcs(v, &arcs, integer)?;
    Ok(mir_generate(&forest, u, args.permissive)?)
}

pub fn run(args: &CutsArgs) -> Result<()> {
    let cuts: Vec<Cut> = if args.family == Family::Mir {
        mir(args)?
    } else {
        let path = args.instance.as_ref().context("this family needs an instance file")?;
        let problem = load_instance(path)?.problem;
        let oracle = problem.oracle()?;
        let n = problem.n();
        match (args.family, &oracle) {
            (Family::Epi, AnyOracle::Set(f)) => vec![match &args.perm {
                Some(_) => epi_generate(f, &perm_or_point(args, n)?)?,
                None => epi_separate(f, point(args)?)?,
            }],
            (Family::Submax, AnyOracle::Set(f)) => vec![submax_cut_generate(f, &binary(point(args)?)?)?],
            (Family::Ksub, AnyOracle::KSet(f)) => {
                let codes: Vec<u8> = point(args)?
                    .iter()
                    .map(|&c| {
                        if c.fract() != 0.0 || !(0.0..=f.k() as f64).contains(&c) {
                            bail!("k-set codes must be integers in 0..={}", f.k());
                        }
                        Ok(c as u8)
                    })
                    .collect::<Result<_>>()?;
                let s = KPoint::from_codes(f.k(), codes)?;
                let mut xi = XiTable::new(f, args.cap_xi);
                vec![ksub_cut_generate(f, &mut xi, &s)?]
            }
            (Family::Epbm, AnyOracle::Biset(f)) => vec![match (&args.perm, &args.sign) {
                (Some(_), Some(sign)) => {
                    let sigma: Vec<i8> = sign
                        .chars()
                        .map(|c| match c {
                            '+' => Ok(1),
                            '-' => Ok(-1),
                            other => bail!("sign `{}` must be + or -", other),
                        })
                        .collect::<Result<_>>()?;
                    epbm_generate(f, &perm_or_point(args, n)?, &sigma)?
                }
                (Some(_), None) => bail!("EPBM with --perm also needs --sign"),
                _ => bisub_separate(f, point(args)?)?,
            }],
            (Family::Si, _) => {
                let (spec, k) = concave_part(&problem)?;
                let alpha = spec.weights.first().copied().unwrap_or(0.0);
                if spec.weights.iter().any(|&a| a != alpha) {
                    bail!("SI needs equal weights");
                }
                vec![si_separate(&spec.g, alpha, k, point(args)?)?]
            }
            (Family::Ali, _) => {
                let (spec, k) = concave_part(&problem)?;
                vec![ali_generate(&spec, k, &perm_or_point(args, n)?)?]
            }
            (Family::Lepi, _) => {
                let (spec, k) = concave_part(&problem)?;
                let perm = perm_or_point(args, n)?;
                let k = k.min(n);
                let seed = perm.order()[..k].to_vec();
                vec![lift_epi_exact(&spec, k, &seed, &perm, args.cap_lift)?]
            }
            (Family::Nogood, AnyOracle::Set(f)) => {
                let s = binary(point(args)?)?;
                let bound = args.bound.context("NOGOOD needs --bound")?;
                vec![nogood_cut(s.bits(), f.value(&s), bound, "cli")]
            }
            (fam, _) => bail!("family {} does not apply to a {} instance", fam, problem.kind().as_str()),
        }
    };
    for c in &cuts {
        println!("{}", c.to_line());
        if let Some(x) = args.point.as_deref().filter(|x| x.len() == c.dim()) {
            println!("  at point: {} {}", c.orientation.as_str(), c.affine(x));
        }
    }
    if cuts.is_empty() {
        println!("no cuts");
    }
    Ok(())
}
