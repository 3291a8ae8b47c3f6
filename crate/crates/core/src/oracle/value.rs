use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use parking_lot::Mutex;

use super::points::{KPoint, LatticePoint, SetPoint, TernaryPoint};
use crate::error::{GsoError, Result};

/// Anything an oracle can be evaluated on.
pub trait Point: Clone + Eq + Hash + fmt::Debug + Send + Sync + 'static {
    /// True when `other` lives in the same space (same length, same k, same mask).
    fn same_shape(&self, other: &Self) -> bool;
}

impl Point for SetPoint {
    fn same_shape(&self, other: &Self) -> bool {
        self.len() == other.len()
    }
}

impl Point for KPoint {
    fn same_shape(&self, other: &Self) -> bool {
        self.len() == other.len() && self.k() == other.k()
    }
}

impl Point for TernaryPoint {
    fn same_shape(&self, other: &Self) -> bool {
        self.len() == other.len()
    }
}

impl Point for LatticePoint {
    fn same_shape(&self, other: &Self) -> bool {
        self.integer_mask == other.integer_mask
    }
}

type EvalFn<P> = dyn Fn(&P) -> f64 + Send + Sync;

struct Inner<P: Point> {
    name: String,
    eval: Box<EvalFn<P>>,
    origin: P,
    offset: f64,
    normalized: bool,
    memo: Option<Mutex<HashMap<P, f64>>>,
    calls: AtomicU64,
    marginal_floor: Option<f64>,
}

/// A deterministic, evaluation-counted value oracle.
///
/// Clones share the memo table and the call counter, so a solver and its
/// brute-force baseline see bit-identical values.
pub struct ValueOracle<P: Point> {
    inner: Arc<Inner<P>>,
}

impl<P: Point> Clone for ValueOracle<P> {
    fn clone(&self) -> Self {
        ValueOracle {
            inner: Arc::clone(&self.inner),
        }
    }
}

impl<P: Point> fmt::Debug for ValueOracle<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ValueOracle")
            .field("name", &self.inner.name)
            .field("normalized", &self.inner.normalized)
            .field("calls", &self.call_count())
            .finish()
    }
}

pub type SetOracle = ValueOracle<SetPoint>;
pub type KSetOracle = ValueOracle<KPoint>;
pub type BisetOracle = ValueOracle<TernaryPoint>;
pub type LatticeOracle = ValueOracle<LatticePoint>;

/// Builder for [`ValueOracle`].
pub struct OracleBuilder<P: Point> {
    name: String,
    eval: Box<EvalFn<P>>,
    origin: P,
    normalize: bool,
    memoize: bool,
    marginal_floor: Option<f64>,
}

impl<P: Point> OracleBuilder<P> {
    pub fn name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Shift values so that the origin evaluates to exactly zero.
    pub fn normalize(mut self, yes: bool) -> Self {
        self.normalize = yes;
        self
    }

    pub fn memoize(mut self, yes: bool) -> Self {
        self.memoize = yes;
        self
    }

    /// A proven lower bound on every marginal return (0 for monotone
    /// functions). Minimizers over marginals may stop once they reach it.
    pub fn marginal_floor(mut self, floor: f64) -> Self {
        self.marginal_floor = Some(floor);
        self
    }

    pub fn build(self) -> ValueOracle<P> {
        let inner = Inner {
            name: self.name,
            eval: self.eval,
            origin: self.origin,
            offset: 0.0,
            normalized: false,
            memo: if self.memoize {
                Some(Mutex::new(HashMap::new()))
            } else {
                None
            },
            calls: AtomicU64::new(0),
            marginal_floor: self.marginal_floor,
        };
        let oracle = ValueOracle {
            inner: Arc::new(inner),
        };
        if self.normalize {
            oracle.normalized_copy()
        } else {
            oracle
        }
    }
}

impl<P: Point> ValueOracle<P> {
    /// `origin` is the empty/zero point of the domain; it fixes the shape
    /// accepted by the oracle and is the normalization anchor.
    pub fn builder<F>(origin: P, eval: F) -> OracleBuilder<P>
    where
        F: Fn(&P) -> f64 + Send + Sync + 'static,
    {
        OracleBuilder {
            name: "oracle".into(),
            eval: Box::new(eval),
            origin,
            normalize: false,
            memoize: true,
            marginal_floor: None,
        }
    }

    pub fn new<F>(origin: P, eval: F) -> Self
    where
        F: Fn(&P) -> f64 + Send + Sync + 'static,
    {
        ValueOracle::builder(origin, eval).build()
    }

    fn normalized_copy(self) -> Self {
        let offset = self.raw(&self.inner.origin);
        let inner = Arc::try_unwrap(self.inner)
            .unwrap_or_else(|_| unreachable!("oracle still private during build"));
        ValueOracle {
            inner: Arc::new(Inner {
                offset,
                normalized: true,
                ..inner
            }),
        }
    }

    fn raw(&self, p: &P) -> f64 {
        let inner = &self.inner;
        match &inner.memo {
            None => {
                inner.calls.fetch_add(1, Ordering::Relaxed);
                (inner.eval)(p)
            }
            Some(memo) => {
                if let Some(&v) = memo.lock().get(p) {
                    return v;
                }
                let v = (inner.eval)(p);
                let mut guard = memo.lock();
                if !guard.contains_key(p) {
                    guard.insert(p.clone(), v);
                    inner.calls.fetch_add(1, Ordering::Relaxed);
                }
                v
            }
        }
    }

    /// Value at `p`. Panics in debug builds on a shape mismatch; use
    /// [`ValueOracle::eval`] for a checked call.
    pub fn value(&self, p: &P) -> f64 {
        debug_assert!(p.same_shape(&self.inner.origin), "point shape mismatch");
        if self.inner.normalized && *p == self.inner.origin {
            return 0.0;
        }
        self.raw(p) - self.inner.offset
    }

    pub fn eval(&self, p: &P) -> Result<f64> {
        if !p.same_shape(&self.inner.origin) {
            return Err(GsoError::InvalidArgument(format!(
                "point does not match the domain of oracle `{}`",
                self.inner.name
            )));
        }
        Ok(self.value(p))
    }

    /// Number of distinct underlying evaluations performed so far.
    pub fn call_count(&self) -> u64 {
        self.inner.calls.load(Ordering::Relaxed)
    }

    pub fn is_normalized(&self) -> bool {
        self.inner.normalized
    }

    /// Raw value subtracted from every evaluation (0 when not normalized).
    pub fn offset(&self) -> f64 {
        self.inner.offset
    }

    pub fn origin(&self) -> &P {
        &self.inner.origin
    }

    pub fn name(&self) -> &str {
        &self.inner.name
    }

    pub fn marginal_floor(&self) -> Option<f64> {
        self.inner.marginal_floor
    }

    /// A new oracle with the same function, shifted so the origin maps to 0.
    /// The copy gets its own memo table and counter.
    pub fn normalize(&self) -> Self {
        let src = self.clone();
        let builder = OracleBuilder {
            name: self.inner.name.clone(),
            eval: Box::new(move |p: &P| src.value(p)),
            origin: self.inner.origin.clone(),
            normalize: true,
            memoize: self.inner.memo.is_some(),
            marginal_floor: self.inner.marginal_floor,
        };
        builder.build()
    }
}

impl SetOracle {
    pub fn n(&self) -> usize {
        self.origin().len()
    }
}

impl KSetOracle {
    pub fn n(&self) -> usize {
        self.origin().len()
    }

    pub fn k(&self) -> usize {
        self.origin().k()
    }
}

impl BisetOracle {
    pub fn n(&self) -> usize {
        self.origin().len()
    }

    /// The same function viewed on 2-sets (type 0 is the `+1` side).
    pub fn as_kset(&self) -> KSetOracle {
        let src = self.clone();
        let n = self.n();
        ValueOracle::builder(KPoint::empty(n, 2), move |p: &KPoint| {
            src.value(&TernaryPoint::from_kpoint(p).expect("k = 2"))
        })
        .name(self.name())
        .build()
    }
}

impl KSetOracle {
    /// The same function on ternary vectors. Requires `k = 2`.
    pub fn as_biset(&self) -> Result<BisetOracle> {
        if self.k() != 2 {
            return Err(GsoError::InvalidArgument(format!(
                "biset view needs k = 2, got {}",
                self.k()
            )));
        }
        let src = self.clone();
        let mut b = ValueOracle::builder(TernaryPoint::zero(self.n()), move |p: &TernaryPoint| {
            src.value(&p.to_kpoint())
        })
        .name(self.name());
        if let Some(fl) = self.marginal_floor() {
            b = b.marginal_floor(fl);
        }
        Ok(b.build())
    }
}

/// `f(X ∪ {i}) − f(X)`; zero when `i` is already in `X`.
pub fn marginal_return(f: &SetOracle, x: &SetPoint, i: usize) -> Result<f64> {
    if i >= x.len() {
        return Err(GsoError::IndexOutOfRange {
            index: i,
            len: x.len(),
        });
    }
    if x.contains(i) {
        return Ok(0.0);
    }
    Ok(f.eval(&x.with(i))? - f.value(x))
}

/// Gain of placing item `i` into component `q` of `x`.
pub fn k_marginal_return(f: &KSetOracle, x: &KPoint, q: usize, i: usize) -> Result<f64> {
    if i >= x.len() {
        return Err(GsoError::IndexOutOfRange {
            index: i,
            len: x.len(),
        });
    }
    if q >= x.k() {
        return Err(GsoError::TypeOutOfRange { q, k: x.k() });
    }
    if x.type_of(i).is_some() {
        return Err(GsoError::AlreadyAssigned(i));
    }
    Ok(f.eval(&x.with(i, q))? - f.value(x))
}
