use super::driver::{run, Formulation, Separation};
use super::{DcgConfig, DcgReport, InitialCuts};
use crate::cuts::{
    ali_generate, bisub_separate, epbm_generate, epi_generate, epi_separate, ksub_cut_generate,
    lift_epi_exact, lifting_budget, nogood_cut, si_separate, submax_cut_generate, Cut, Family,
    Orientation, XiTable,
};
use crate::error::{GsoError, Result};
use crate::functions::ConcaveOfLinear;
use crate::milp::{LinearConstraint, MilpModel, Sense};
use crate::oracle::{
    lovasz_permutation, BisetOracle, KPoint, KSetOracle, Permutation, SetOracle, SetPoint,
    TernaryPoint,
};

const INT_TOL: f64 = 1e-6;

fn check_extra(extra: &[LinearConstraint], nx: usize) -> Result<()> {
    for c in extra {
        for &(j, _) in &c.coeffs {
            if j >= nx {
                return Err(GsoError::IndexOutOfRange { index: j, len: nx });
            }
        }
    }
    Ok(())
}

/// Master with `nx` bounded decision variables and a free `w` at index `nx`.
fn master(sense: Sense, prefix: &str, nx: usize, integer: bool, extra: &[LinearConstraint]) -> Result<MilpModel> {
    check_extra(extra, nx)?;
    let mut m = MilpModel::new(sense);
    for j in 0..nx {
        m.add_var(format!("{}{}", prefix, j + 1), 0.0, 1.0, integer, 0.0);
    }
    m.add_var("w", f64::NEG_INFINITY, f64::INFINITY, false, 1.0);
    for c in extra {
        m.add_constraint(c.clone());
    }
    Ok(m)
}

fn identity_vars(n: usize) -> Vec<usize> {
    (0..n).collect()
}

fn chain_candidates(perm: &Permutation, width: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(perm.len() + 1);
    let mut cur = vec![0.0; width];
    out.push(cur.clone());
    for &i in perm.order() {
        cur[i] = 1.0;
        out.push(cur.clone());
    }
    out
}

struct MinSub {
    f: SetOracle,
    model: MilpModel,
}

impl Formulation for MinSub {
    fn name(&self) -> String {
        "submod-min".into()
    }

    fn base(&self) -> &MilpModel {
        &self.model
    }

    fn cut_row(&self, cut: &Cut) -> Result<LinearConstraint> {
        let n = self.f.n();
        cut.to_constraint(&identity_vars(n), Some(n))
    }

    fn initial_cuts(&mut self, recipe: InitialCuts) -> Result<Vec<Cut>> {
        let n = self.f.n();
        let mut cuts = vec![epi_generate(&self.f, &Permutation::identity(n))?];
        if recipe == InitialCuts::Standard {
            cuts.push(epi_generate(&self.f, &Permutation::new((0..n).rev().collect())?)?);
        }
        Ok(cuts)
    }

    fn evaluate(&mut self, x: &[f64]) -> Result<Option<f64>> {
        Ok(SetPoint::from_values(&x[..self.f.n()], INT_TOL).map(|s| self.f.value(&s)))
    }

    fn separate(&mut self, x: &[f64], integral: bool) -> Result<Separation> {
        let n = self.f.n();
        let xb = &x[..n];
        let candidates = if integral {
            Vec::new()
        } else {
            chain_candidates(&lovasz_permutation(xb), n + 1)
        };
        Ok(Separation {
            cuts: vec![epi_separate(&self.f, xb)?],
            candidates,
        })
    }

    fn fractional_separation(&self) -> bool {
        true
    }

    fn report_point(&self, x: &[f64]) -> Vec<f64> {
        x[..self.f.n()].to_vec()
    }

    fn oracle_calls(&self) -> u64 {
        self.f.call_count()
    }
}

/// Minimizes a submodular `f` over `{0,1}ⁿ` (plus `extra` rows over `x`)
/// with EPI cuts. Without extra rows the master stays an LP.
pub fn dcg_min_submodular(f: &SetOracle, extra: &[LinearConstraint], cfg: &DcgConfig) -> Result<DcgReport> {
    let model = master(Sense::Minimize, "x", f.n(), !extra.is_empty(), extra)?;
    run(&mut MinSub { f: f.clone(), model }, cfg)
}

struct MaxSub {
    f: SetOracle,
    model: MilpModel,
}

impl Formulation for MaxSub {
    fn name(&self) -> String {
        "submod-max".into()
    }

    fn base(&self) -> &MilpModel {
        &self.model
    }

    fn cut_row(&self, cut: &Cut) -> Result<LinearConstraint> {
        let n = self.f.n();
        cut.to_constraint(&identity_vars(n), Some(n))
    }

    fn initial_cuts(&mut self, recipe: InitialCuts) -> Result<Vec<Cut>> {
        let n = self.f.n();
        let mut cuts = vec![submax_cut_generate(&self.f, &SetPoint::empty(n))?];
        if recipe == InitialCuts::Standard {
            cuts.push(submax_cut_generate(&self.f, &SetPoint::full(n))?);
        }
        Ok(cuts)
    }

    fn evaluate(&mut self, x: &[f64]) -> Result<Option<f64>> {
        Ok(SetPoint::from_values(&x[..self.f.n()], INT_TOL).map(|s| self.f.value(&s)))
    }

    fn separate(&mut self, x: &[f64], _integral: bool) -> Result<Separation> {
        let mut sep = Separation::default();
        if let Some(s) = SetPoint::from_values(&x[..self.f.n()], INT_TOL) {
            sep.cuts.push(submax_cut_generate(&self.f, &s)?);
        }
        Ok(sep)
    }

    fn fractional_separation(&self) -> bool {
        false
    }

    fn report_point(&self, x: &[f64]) -> Vec<f64> {
        x[..self.f.n()].to_vec()
    }

    fn oracle_calls(&self) -> u64 {
        self.f.call_count()
    }
}

/// Maximizes `f` over `{0,1}ⁿ` (plus `extra` rows) with submodular
/// inequalities generated at integer incumbents.
pub fn dcg_max_submodular(f: &SetOracle, extra: &[LinearConstraint], cfg: &DcgConfig) -> Result<DcgReport> {
    let model = master(Sense::Maximize, "x", f.n(), true, extra)?;
    run(&mut MaxSub { f: f.clone(), model }, cfg)
}

enum KCuts {
    Ksub(Box<XiTable>),
    Nogood { upper: f64 },
}

struct MaxKsub {
    f: KSetOracle,
    model: MilpModel,
    cuts: KCuts,
}

impl MaxKsub {
    fn decode(&self, x: &[f64]) -> Option<KPoint> {
        let (n, k) = (self.f.n(), self.f.k());
        KPoint::from_binary(n, k, &x[..n * k], INT_TOL)
    }

    fn cut_at(&mut self, s: &KPoint) -> Result<Cut> {
        match &mut self.cuts {
            KCuts::Ksub(xi) => ksub_cut_generate(&self.f, xi, s),
            KCuts::Nogood { upper } => {
                let bits: Vec<bool> = s.to_binary().iter().map(|&v| v > 0.5).collect();
                let tag: String = s.codes().iter().map(|c| char::from(b'0' + *c)).collect();
                Ok(nogood_cut(&bits, self.f.value(s), *upper, &format!("codes={}", tag)))
            }
        }
    }
}

impl Formulation for MaxKsub {
    fn name(&self) -> String {
        match self.cuts {
            KCuts::Ksub(_) => "ksub-max".into(),
            KCuts::Nogood { .. } => "kset-max-nogood".into(),
        }
    }

    fn base(&self) -> &MilpModel {
        &self.model
    }

    fn cut_row(&self, cut: &Cut) -> Result<LinearConstraint> {
        let d = self.f.n() * self.f.k();
        cut.to_constraint(&identity_vars(d), Some(d))
    }

    fn initial_cuts(&mut self, recipe: InitialCuts) -> Result<Vec<Cut>> {
        let (n, k) = (self.f.n(), self.f.k());
        if let KCuts::Nogood { .. } = self.cuts {
            return Ok(Vec::new());
        }
        let mut cuts = vec![self.cut_at(&KPoint::empty(n, k))?];
        if recipe == InitialCuts::Standard {
            // Complete assignment to the first type, when its ξ column fits.
            let full = KPoint::from_codes(k, vec![1; n])?;
            match self.cut_at(&full) {
                Ok(c) => cuts.push(c),
                Err(GsoError::CapExceeded { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(cuts)
    }

    fn evaluate(&mut self, x: &[f64]) -> Result<Option<f64>> {
        Ok(self.decode(x).map(|s| self.f.value(&s)))
    }

    fn separate(&mut self, x: &[f64], _integral: bool) -> Result<Separation> {
        let mut sep = Separation::default();
        if let Some(s) = self.decode(x) {
            sep.cuts.push(self.cut_at(&s)?);
        }
        Ok(sep)
    }

    fn fractional_separation(&self) -> bool {
        false
    }

    fn report_point(&self, x: &[f64]) -> Vec<f64> {
        x[..self.f.n() * self.f.k()].to_vec()
    }

    fn oracle_calls(&self) -> u64 {
        self.f.call_count()
    }
}

fn kset_master(f: &KSetOracle, caps: &[usize], extra: &[LinearConstraint]) -> Result<MilpModel> {
    let (n, k) = (f.n(), f.k());
    if !caps.is_empty() && caps.len() != k {
        return Err(GsoError::DimensionMismatch {
            expected: k,
            got: caps.len(),
        });
    }
    let mut m = master(Sense::Maximize, "x", n * k, true, extra)?;
    for (q, name) in m.names.iter_mut().take(n * k).enumerate() {
        *name = format!("x{}_{}", q % n + 1, q / n + 1);
    }
    for i in 0..n {
        m.add_constraint(LinearConstraint::le((0..k).map(|q| (q * n + i, 1.0)).collect(), 1.0));
    }
    for (q, &b) in caps.iter().enumerate() {
        if b < n {
            m.add_constraint(LinearConstraint::le((0..n).map(|i| (q * n + i, 1.0)).collect(), b as f64));
        }
    }
    Ok(m)
}

/// Maximizes a k-submodular `f` over k-sets with per-type caps `caps`
/// (empty for none) and `extra` rows over the `q·n + i` variable layout,
/// using k-submodular inequalities at integer incumbents.
pub fn dcg_max_ksub(
    f: &KSetOracle,
    caps: &[usize],
    extra: &[LinearConstraint],
    cfg: &DcgConfig,
) -> Result<DcgReport> {
    let model = kset_master(f, caps, extra)?;
    let xi = Box::new(XiTable::new(f, cfg.xi_cap));
    run(
        &mut MaxKsub {
            f: f.clone(),
            model,
            cuts: KCuts::Ksub(xi),
        },
        cfg,
    )
}

/// Same master as [`dcg_max_ksub`] but cut with big-M no-good cuts, which
/// only need `f ≤ upper`; exact for any function, at enumeration-like cost.
pub fn dcg_max_ksub_nogood(
    f: &KSetOracle,
    upper: f64,
    caps: &[usize],
    extra: &[LinearConstraint],
    cfg: &DcgConfig,
) -> Result<DcgReport> {
    if !upper.is_finite() {
        return Err(GsoError::InvalidArgument("no-good cuts need a finite upper bound".into()));
    }
    let mut model = kset_master(f, caps, extra)?;
    let w = f.n() * f.k();
    model.upper[w] = upper;
    run(
        &mut MaxKsub {
            f: f.clone(),
            model,
            cuts: KCuts::Nogood { upper },
        },
        cfg,
    )
}

struct MinBisub {
    f: BisetOracle,
    model: MilpModel,
}

impl MinBisub {
    fn ternary(&self, y: &[f64]) -> Vec<f64> {
        let n = self.f.n();
        (0..n).map(|i| (y[i] - y[n + i]).clamp(-1.0, 1.0)).collect()
    }

    fn lift(&self, t: &TernaryPoint) -> Vec<f64> {
        let n = self.f.n();
        let mut y = vec![0.0; 2 * n + 1];
        for (i, &v) in t.vals().iter().enumerate() {
            match v {
                1 => y[i] = 1.0,
                -1 => y[n + i] = 1.0,
                _ => {}
            }
        }
        y
    }
}

impl Formulation for MinBisub {
    fn name(&self) -> String {
        "bisub-min".into()
    }

    fn base(&self) -> &MilpModel {
        &self.model
    }

    fn cut_row(&self, cut: &Cut) -> Result<LinearConstraint> {
        let n = self.f.n();
        if cut.orientation != Orientation::Epigraph || cut.dim() != n {
            return Err(GsoError::InvalidArgument("expected an epigraph cut over x".into()));
        }
        let mut coeffs = vec![(2 * n, 1.0)];
        for (i, &p) in cut.pi.iter().enumerate() {
            if p != 0.0 {
                coeffs.push((i, -p));
                coeffs.push((n + i, p));
            }
        }
        Ok(LinearConstraint::ge(coeffs, cut.beta))
    }

    fn initial_cuts(&mut self, recipe: InitialCuts) -> Result<Vec<Cut>> {
        let n = self.f.n();
        let id = Permutation::identity(n);
        let mut cuts = vec![epbm_generate(&self.f, &id, &vec![1; n])?];
        if recipe == InitialCuts::Standard {
            cuts.push(epbm_generate(&self.f, &id, &vec![-1; n])?);
        }
        Ok(cuts)
    }

    fn evaluate(&mut self, x: &[f64]) -> Result<Option<f64>> {
        let n = self.f.n();
        let binary = x[..2 * n].iter().all(|&v| v.abs() <= INT_TOL || (v - 1.0).abs() <= INT_TOL);
        if !binary || (0..n).any(|i| x[i] + x[n + i] > 1.0 + INT_TOL) {
            return Ok(None);
        }
        Ok(TernaryPoint::from_values(&self.ternary(x), INT_TOL).map(|t| self.f.value(&t)))
    }

    fn separate(&mut self, x: &[f64], integral: bool) -> Result<Separation> {
        let n = self.f.n();
        let t = self.ternary(x);
        let cut = bisub_separate(&self.f, &t)?;
        let mut candidates = Vec::new();
        if !integral {
            let abs: Vec<f64> = t.iter().map(|v| v.abs()).collect();
            let mut cur = TernaryPoint::zero(n);
            candidates.push(self.lift(&cur));
            for &i in Permutation::descending(&abs).order() {
                cur.set(i, if t[i] >= 0.0 { 1 } else { -1 });
                candidates.push(self.lift(&cur));
            }
        }
        Ok(Separation {
            cuts: vec![cut],
            candidates,
        })
    }

    fn fractional_separation(&self) -> bool {
        true
    }

    fn report_point(&self, x: &[f64]) -> Vec<f64> {
        self.ternary(x).iter().map(|v| v.round()).collect()
    }

    fn oracle_calls(&self) -> u64 {
        self.f.call_count()
    }
}

/// Minimizes a bisubmodular `f` over `{−1,0,1}ⁿ` written as
/// `x = y¹ − y²`, `y¹ + y² ≤ 1`. `extra` rows use the layout `y¹_i ↦ i`,
/// `y²_i ↦ n + i`. Without extra rows the master stays an LP.
pub fn dcg_min_bisub(f: &BisetOracle, extra: &[LinearConstraint], cfg: &DcgConfig) -> Result<DcgReport> {
    let n = f.n();
    let mut model = master(Sense::Minimize, "y", 2 * n, !extra.is_empty(), extra)?;
    for i in 0..n {
        model.names[i] = format!("y{}_1", i + 1);
        model.names[n + i] = format!("y{}_2", i + 1);
        model.add_constraint(LinearConstraint::le(vec![(i, 1.0), (n + i, 1.0)], 1.0));
    }
    run(&mut MinBisub { f: f.clone(), model }, cfg)
}

struct CcMin {
    spec: ConcaveOfLinear,
    f: SetOracle,
    modular: Vec<f64>,
    k: usize,
    lepi: bool,
    ali: bool,
    si: Option<f64>,
    lift_cap: u128,
    model: MilpModel,
}

impl CcMin {
    fn cuts_along(&self, xb: &[f64]) -> Result<Vec<Cut>> {
        let perm = Permutation::descending(xb);
        let mut cuts = Vec::new();
        if self.lepi {
            let seed = &perm.order()[..self.k];
            cuts.push(lift_epi_exact(&self.spec, self.k, seed, &perm, self.lift_cap)?);
        }
        if self.ali {
            cuts.push(ali_generate(&self.spec, self.k, &perm)?);
        }
        if let Some(alpha) = self.si {
            cuts.push(si_separate(&self.spec.g, alpha, self.k, xb)?);
        }
        Ok(cuts)
    }
}

impl Formulation for CcMin {
    fn name(&self) -> String {
        "ccmin".into()
    }

    fn base(&self) -> &MilpModel {
        &self.model
    }

    fn cut_row(&self, cut: &Cut) -> Result<LinearConstraint> {
        let n = self.spec.n();
        cut.to_constraint(&identity_vars(n), Some(n))
    }

    fn initial_cuts(&mut self, recipe: InitialCuts) -> Result<Vec<Cut>> {
        let n = self.spec.n();
        let mut cuts = self.cuts_along(&vec![0.0; n])?;
        if recipe == InitialCuts::Standard && n > 1 {
            let ramp: Vec<f64> = (0..n).map(|i| (i + 1) as f64 / n as f64).collect();
            cuts.extend(self.cuts_along(&ramp)?);
        }
        Ok(cuts)
    }

    fn evaluate(&mut self, x: &[f64]) -> Result<Option<f64>> {
        let n = self.spec.n();
        Ok(SetPoint::from_values(&x[..n], INT_TOL).map(|s| ccmin_value(&self.f, &self.modular, &s)))
    }

    fn separate(&mut self, x: &[f64], _integral: bool) -> Result<Separation> {
        let n = self.spec.n();
        Ok(Separation {
            cuts: self.cuts_along(&x[..n])?,
            candidates: Vec::new(),
        })
    }

    fn fractional_separation(&self) -> bool {
        true
    }

    fn report_point(&self, x: &[f64]) -> Vec<f64> {
        x[..self.spec.n()].to_vec()
    }

    fn oracle_calls(&self) -> u64 {
        self.f.call_count()
    }
}

/// `cᵀx + f(S)`, summed in item order.
pub fn ccmin_value(f: &SetOracle, modular: &[f64], s: &SetPoint) -> f64 {
    let lin: f64 = s.items().iter().map(|&i| modular[i]).sum();
    lin + f.value(s)
}

/// Minimizes `cᵀx + g(aᵀx)` over binary `x` with `Σx ≤ k` and `extra` rows,
/// by branch and cut with exactly lifted EPIs, ALIs and (for equal weights)
/// SIs. Falls back to ALI alone when exact lifting exceeds `cfg.lift_cap`.
pub fn ccmin_branch_and_cut(
    spec: &ConcaveOfLinear,
    modular: Option<&[f64]>,
    k: usize,
    extra: &[LinearConstraint],
    cfg: &DcgConfig,
) -> Result<DcgReport> {
    let n = spec.n();
    if k == 0 {
        return Err(GsoError::InvalidArgument("cardinality cap must be positive".into()));
    }
    let modular = match modular {
        Some(c) if c.len() != n => {
            return Err(GsoError::DimensionMismatch {
                expected: n,
                got: c.len(),
            })
        }
        Some(c) => c.to_vec(),
        None => vec![0.0; n],
    };
    let k = k.min(n);
    let mut model = master(Sense::Minimize, "x", n, true, extra)?;
    for (j, &c) in modular.iter().enumerate() {
        model.objective[j] = c;
    }
    model.add_constraint(LinearConstraint::le((0..n).map(|i| (i, 1.0)).collect(), k as f64));
    let skip = &cfg.skip_families;
    let lepi = !skip.contains(&Family::Lepi) && lifting_budget(n, k) <= cfg.lift_cap;
    let ali = !skip.contains(&Family::Ali);
    let equal = n > 0 && spec.weights.iter().all(|&a| a == spec.weights[0]);
    let si = (equal && !skip.contains(&Family::Si)).then(|| spec.weights[0]);
    if !lepi && !ali && si.is_none() {
        return Err(GsoError::InvalidArgument(
            "every applicable cut family is disabled".into(),
        ));
    }
    let mut form = CcMin {
        spec: spec.clone(),
        f: spec.oracle(),
        modular,
        k,
        lepi,
        ali,
        si,
        lift_cap: cfg.lift_cap,
        model,
    };
    run(&mut form, cfg)
}
