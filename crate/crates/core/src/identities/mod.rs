//! The identity registry and the coefficient checker.
//!
//! Every entry pairs a left and a right side builder with the variables it
//! needs, the integer parameters it is swept over, and the points where it
//! is undefined. [`verify`] builds both sides on one context and compares
//! them coefficient by coefficient on the window both sides know.

use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::series::{Binding, Difference, EvalContext, Exp, Monomial, Rat, Series, INF};

mod registry;

pub use registry::registry;

/// Whether an identity can run with `a`, `b` kept formal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    SymbolicOk,
    SpecializeOnly,
}

/// A variable an identity depends on. `A` and `B` are the series variables
/// `a`, `b`; the others are always bound to rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    A,
    B,
    C,
    T,
    X,
    UpperA,
    UpperB,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::A => "a",
            Var::B => "b",
            Var::C => "c",
            Var::T => "t",
            Var::X => "x",
            Var::UpperA => "A",
            Var::UpperB => "B",
        }
    }

    pub const ALL: [Var; 7] = [Var::A, Var::B, Var::C, Var::T, Var::X, Var::UpperA, Var::UpperB];

    pub fn is_series_var(self) -> bool {
        matches!(self, Var::A | Var::B)
    }
}

impl std::str::FromStr for Var {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Var::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown variable {s}")))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Values where an identity is undefined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pole {
    Zero(Var),
    One(Var),
    Equal(Var, Var),
    ProductOne(Var, Var),
}

impl Pole {
    fn hits(&self, point: &Point) -> bool {
        let v = |x: Var| point.rational(x);
        match *self {
            Pole::Zero(x) => v(x).is_some_and(|r| r.is_zero()),
            Pole::One(x) => v(x).is_some_and(|r| r.is_one()),
            Pole::Equal(x, y) => matches!((v(x), v(y)), (Some(p), Some(q)) if p == q),
            Pole::ProductOne(x, y) => matches!((v(x), v(y)), (Some(p), Some(q)) if (p * q).is_one()),
        }
    }
}

impl fmt::Display for Pole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pole::Zero(x) => write!(f, "{x} = 0"),
            Pole::One(x) => write!(f, "{x} = 1"),
            Pole::Equal(x, y) => write!(f, "{x} = {y}"),
            Pole::ProductOne(x, y) => write!(f, "{x}{y} = 1"),
        }
    }
}

/// Integer parameters of a parametrised identity, such as `m` or `r, s`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Params(pub Vec<(&'static str, i64)>);

impl Params {
    pub fn none() -> Self {
        Params(Vec::new())
    }

    pub fn get(&self, name: &str) -> Option<i64> {
        self.0.iter().find(|(k, _)| *k == name).map(|(_, v)| *v)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        f.write_str(&parts.join(","))
    }
}

/// Bindings of the variables an identity uses, in the descriptor's order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Point(pub Vec<(Var, Binding)>);

impl Point {
    pub fn get(&self, v: Var) -> Option<&Binding> {
        self.0.iter().find(|(k, _)| *k == v).map(|(_, b)| b)
    }

    pub fn rational(&self, v: Var) -> Option<&Rat> {
        self.get(v).and_then(Binding::value)
    }

    pub fn has_formal(&self) -> bool {
        self.0.iter().any(|(_, b)| b.is_formal())
    }

    pub fn with(mut self, v: Var, b: Binding) -> Self {
        match self.0.iter_mut().find(|(k, _)| *k == v) {
            Some(slot) => slot.1 = b,
            None => self.0.push((v, b)),
        }
        self
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("-");
        }
        let parts: Vec<String> = self.0.iter().map(|(k, b)| format!("{k}={b:?}")).collect();
        f.write_str(&parts.join(","))
    }
}

/// What a side builder gets to work with.
pub struct Inputs<'a> {
    pub params: &'a Params,
    pub point: &'a Point,
    pub ctx: &'a EvalContext,
}

impl Inputs<'_> {
    pub fn int(&self, name: &str) -> Result<i64> {
        self.params.get(name).ok_or_else(|| Error::InvalidParameter(format!("missing integer parameter {name}")))
    }

    /// The variable as a monomial: `a` and `b` stay symbolic and are bound
    /// through the context, the others are their rational values.
    pub fn mono(&self, v: Var) -> Result<Monomial> {
        match v {
            Var::A => Ok(Monomial::a()),
            Var::B => Ok(Monomial::b()),
            _ => Ok(Monomial::constant(self.value(v)?)),
        }
    }

    pub fn value(&self, v: Var) -> Result<Rat> {
        self.point
            .rational(v)
            .cloned()
            .ok_or_else(|| Error::InvalidParameter(format!("{v} needs a rational value here")))
    }
}

pub type SidesFn = fn(&Inputs) -> Result<(Series, Series)>;

pub struct IdentityDescriptor {
    pub name: &'static str,
    /// The identity written out, `lhs = rhs`.
    pub formula: &'static str,
    pub engine: Engine,
    pub vars: &'static [Var],
    pub poles: &'static [Pole],
    /// Integer parameter assignments the identity is checked at.
    pub grid: fn() -> Vec<Params>,
    pub sides: SidesFn,
    pub notes: &'static str,
}

impl fmt::Debug for IdentityDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IdentityDescriptor")
            .field("name", &self.name)
            .field("engine", &self.engine)
            .field("vars", &self.vars)
            .finish()
    }
}

impl IdentityDescriptor {
    pub fn params(&self) -> Vec<Params> {
        (self.grid)()
    }

    fn rational_vars(&self, symbolic: bool) -> Vec<Var> {
        self.vars
            .iter()
            .copied()
            .filter(|v| !(symbolic && self.engine == Engine::SymbolicOk && v.is_series_var()))
            .collect()
    }
}

pub fn find(name: &str) -> Result<&'static IdentityDescriptor> {
    registry().iter().find(|d| d.name == name).ok_or_else(|| Error::UnknownIdentity(name.to_string()))
}

/// One row of `list`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentitySummary {
    pub name: &'static str,
    pub formula: &'static str,
    pub engine: Engine,
    pub vars: Vec<&'static str>,
    pub params: Vec<String>,
    pub poles: Vec<String>,
    pub notes: &'static str,
}

pub fn list_identities() -> Vec<IdentitySummary> {
    registry()
        .iter()
        .map(|d| IdentitySummary {
            name: d.name,
            formula: d.formula,
            engine: d.engine,
            vars: d.vars.iter().map(|v| v.name()).collect(),
            params: d.params().iter().filter(|p| !p.is_empty()).map(|p| p.to_string()).collect(),
            poles: d.poles.iter().map(|p| p.to_string()).collect(),
            notes: d.notes,
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

/// FNV-1a, used to give every identity its own random stream.
fn stream_id(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// `count` points for `desc`, drawn as `p/p'` with `2 <= p, p' <= 50` and
/// redrawn while they hit a pole. In symbolic mode `a` and `b` stay formal
/// for identities that allow it. Identities with nothing left to sample get
/// a single point.
pub fn sample_points(desc: &IdentityDescriptor, count: usize, seed: u64, symbolic: bool) -> Vec<Point> {
    let sampled = desc.rational_vars(symbolic);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id(desc.name));
    let count = if sampled.is_empty() { 1 } else { count };
    (0..count)
        .map(|_| loop {
            let point = Point(
                desc.vars
                    .iter()
                    .map(|&v| {
                        if sampled.contains(&v) {
                            let p = rng.gen_range(2..=50);
                            let d = rng.gen_range(2..=50);
                            (v, Binding::Rational(Rat::new(p, d).expect("nonzero denominator")))
                        } else {
                            (v, Binding::Formal)
                        }
                    })
                    .collect(),
            );
            if !desc.poles.iter().any(|p| p.hits(&point)) {
                break point;
            }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub order: i64,
    pub degree_cap: i64,
    pub slack: i64,
    /// Add `q^e` to the right side before comparing. Only meant for
    /// exercising the failure path.
    pub perturb_rhs: Option<i64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            order: 30,
            degree_cap: crate::series::DEFAULT_DEGREE_CAP,
            slack: crate::series::DEFAULT_SLACK,
            perturb_rhs: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(Difference),
    /// Both sides agree, but only up to `q^achieved`.
    Insufficient {
        achieved: i64,
    },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail(_) => "fail",
            Verdict::Insufficient { .. } => "insufficient",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub identity: &'static str,
    pub params: Params,
    pub point: Point,
    pub order: i64,
    pub q_lo: i64,
    pub q_hi: i64,
    pub verdict: Verdict,
    pub elapsed: Duration,
}

/// The evaluation context for `point`: `a` and `b` take their bindings,
/// and whichever of them the identity does not use is set to zero.
pub fn context_for(desc: &IdentityDescriptor, point: &Point, opts: &VerifyOptions) -> Result<EvalContext> {
    let slot = |v: Var| -> Binding {
        if desc.vars.contains(&v) {
            point.get(v).cloned().unwrap_or(Binding::Formal)
        } else {
            Binding::Rational(Rat::zero())
        }
    };
    let ctx = EvalContext::symbolic(opts.order, opts.degree_cap)
        .with_slack(opts.slack)
        .with_a(slot(Var::A))
        .with_b(slot(Var::B));
    ctx.validate()?;
    Ok(ctx)
}

/// Checks that `point` binds every variable `desc` needs, in a form it
/// accepts, and avoids its poles.
pub fn check_point(desc: &IdentityDescriptor, point: &Point) -> Result<()> {
    for &v in desc.vars {
        match point.get(v) {
            None => {
                return Err(Error::InvalidParameter(format!("{} needs a value for {v}", desc.name)));
            }
            Some(Binding::Formal) if !v.is_series_var() || desc.engine == Engine::SpecializeOnly => {
                return Err(Error::InvalidParameter(format!("{} needs a rational value for {v}", desc.name)));
            }
            _ => {}
        }
    }
    if let Some(p) = desc.poles.iter().find(|p| p.hits(point)) {
        return Err(Error::PoleAtRequestedPoint(format!("{}: {p} at {point}", desc.name)));
    }
    Ok(())
}

/// Build both sides of `desc` at `point` and compare them.
pub fn verify(
    desc: &'static IdentityDescriptor,
    params: &Params,
    point: &Point,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let start = Instant::now();
    check_point(desc, point)?;
    let ctx = context_for(desc, point, opts)?;
    let (lhs, mut rhs) = (desc.sides)(&Inputs { params, point, ctx: &ctx })?;
    if let Some(e) = opts.perturb_rhs {
        rhs = &rhs + &Series::term(Rat::one(), Exp::q(e), ctx.working_hi());
    }
    let (q_lo, q_hi, verdict) = compare(&lhs, &rhs, &ctx);
    Ok(VerificationReport {
        identity: desc.name,
        params: params.clone(),
        point: point.clone(),
        order: opts.order,
        q_lo,
        q_hi,
        verdict,
        elapsed: start.elapsed(),
    })
}

pub fn verify_named(name: &str, params: &Params, point: &Point, opts: &VerifyOptions) -> Result<VerificationReport> {
    verify(find(name)?, params, point, opts)
}

/// Compare on the window both sides know, clipped to the reported corner.
fn compare(lhs: &Series, rhs: &Series, ctx: &EvalContext) -> (i64, i64, Verdict) {
    let want = ctx.report_hi();
    let known = lhs.window().hi.meet(&rhs.window().hi);
    let limit = known.meet(&want);
    let lo = lhs.window().lo.q.min(rhs.window().lo.q);
    let q_lo = if lo >= INF { 0 } else { lo.min(0) };
    let verdict = match lhs.first_difference(rhs, limit) {
        Some(d) => Verdict::Fail(d),
        None if known.q < want.q || known.a < want.a || known.b < want.b => Verdict::Insufficient { achieved: known.q },
        None => Verdict::Pass,
    };
    (q_lo, limit.q, verdict)
}

/// Every (params, point) pair `verify all` runs for `desc`, in order.
pub fn plan(desc: &IdentityDescriptor, points: usize, seed: u64, symbolic: bool) -> Vec<(Params, Point)> {
    let pts = sample_points(desc, points, seed, symbolic);
    desc.params().into_iter().flat_map(|p| pts.iter().map(move |pt| (p.clone(), pt.clone()))).collect()
}

// ---------------------------------------------------------------------------
// Expansion
// ---------------------------------------------------------------------------

/// A coefficient of an expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub exp: Exp,
    pub coeff: Rat,
}

/// Named kernels `expand` understands besides `<identity>:lhs|rhs`.
pub const EXPAND_TARGETS: &[&str] = &["theta", "L", "P", "poch_inf_q", "psi", "U:<m>", "V:<m>:<n>"];

fn parse_index(s: Option<&str>, target: &str) -> Result<i64> {
    s.and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::InvalidParameter(format!("malformed expansion target {target}")))
}

/// The series named by `target` on `ctx`.
///
/// `point` supplies the extra variables of an identity side; `a` and `b`
/// always come from the context.
pub fn expand_series(
    target: &str,
    ctx: &EvalContext,
    point: Option<&Point>,
    params: Option<&Params>,
) -> Result<Series> {
    use crate::{kernels, qfun};
    let (a, b) = (Monomial::a(), Monomial::b());
    let mut parts = target.split(':');
    let head = parts.next().unwrap_or_default();
    match head {
        "theta" => qfun::partial_theta(&a, ctx),
        "L" => kernels::big_l(&a, &b, ctx),
        "P" => kernels::big_p(&a, &b, ctx),
        "poch_inf_q" => qfun::poch_inf(&Monomial::q_pow(1), qfun::BaseExp::Q, ctx),
        "psi" => qfun::psi(ctx),
        "U" => kernels::u_m(parse_index(parts.next(), target)?, &b, ctx),
        "V" => {
            let m = parse_index(parts.next(), target)?;
            let n = parse_index(parts.next(), target)?;
            Ok(kernels::v_mn(m, n, &a, &b, ctx)?.value)
        }
        name => {
            let desc = find(name)?;
            let side = parts.next().unwrap_or("lhs");
            let default_params = desc.params().into_iter().next().unwrap_or_default();
            let params = params.unwrap_or(&default_params);
            let mut pt = point.cloned().unwrap_or_default();
            for (v, binding) in [(Var::A, &ctx.a), (Var::B, &ctx.b)] {
                if desc.vars.contains(&v) {
                    pt = pt.with(v, binding.clone());
                }
            }
            check_point(desc, &pt)?;
            let (l, r) = (desc.sides)(&Inputs { params, point: &pt, ctx })?;
            match side {
                "lhs" => Ok(l),
                "rhs" => Ok(r),
                other => Err(Error::InvalidParameter(format!("side must be lhs or rhs, got {other}"))),
            }
        }
    }
}

/// In-window coefficients ordered by `(q, a, b)`. A series in `q` alone is
/// listed densely from its floor (or `q^0`) up to the reported order.
pub fn expansion_rows(s: &Series, ctx: &EvalContext) -> Vec<Row> {
    let hi = s.window().hi.meet(&ctx.report_hi());
    let univariate = hi.a <= 0 && hi.b <= 0;
    if univariate {
        let lo = s.window().lo.q.min(0);
        return (lo..=hi.q)
            .map(|q| {
                let exp = Exp::q(q);
                Row { exp, coeff: s.coeff(&exp) }
            })
            .collect();
    }
    s.sorted_terms().into_iter().filter(|(e, _)| e.le_all(&hi)).map(|(exp, coeff)| Row { exp, coeff }).collect()
}
