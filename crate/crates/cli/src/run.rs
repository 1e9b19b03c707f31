//! Executes a parsed command line.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::time::{Duration, Instant};

use qtheta::identities::{
    self, check_point, context_for, expansion_rows, find, list_identities, plan, registry, verify, IdentityDescriptor,
    Params, Point, Var, Verdict, VerificationReport, VerifyOptions,
};
use qtheta::{Binding, Error, EvalContext, Rat};
use rayon::prelude::*;

use crate::args::{Assignment, BenchArgs, Cli, Command, Common, ExpandArgs, OutputFormat, ParamFilter, VerifyArgs};
use crate::output::{self, BenchRow};

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Fail = 1,
    Usage = 2,
    Insufficient = 3,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

fn usage(msg: impl std::fmt::Display) -> Exit {
    eprintln!("error: {msg}");
    Exit::Usage
}

fn open_output(common: &Common) -> io::Result<Box<dyn Write>> {
    Ok(match &common.output_file {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(common: &Common, f: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<(), Exit> {
    let mut out = open_output(common).map_err(|e| usage(format!("cannot open output: {e}")))?;
    f(&mut *out).and_then(|_| out.flush()).map_err(|e| usage(format!("cannot write output: {e}")))
}

/// Runs `cli` and returns the exit status.
pub fn run(cli: &Cli) -> Exit {
    let result = match &cli.command {
        Command::List => {
            emit(&cli.common, |out| output::write_list(out, cli.common.output, &list_identities())).map(|_| Exit::Ok)
        }
        Command::Verify(args) => run_verify(&cli.common, args),
        Command::Expand(args) => run_expand(&cli.common, args),
        Command::Bench(args) => run_bench(&cli.common, args),
    };
    result.unwrap_or_else(|e| e)
}

/// Registry entries named by `names`, in registry order; `all` selects everything.
pub fn select(names: &[String]) -> Result<Vec<&'static IdentityDescriptor>, Error> {
    for n in names {
        if n != "all" {
            find(n)?;
        }
    }
    let all = names.is_empty() || names.iter().any(|n| n == "all");
    Ok(registry().iter().filter(|d| all || names.iter().any(|n| n == d.name)).collect())
}

fn filter_params(desc: &IdentityDescriptor, filters: &[ParamFilter]) -> Vec<Params> {
    desc.params().into_iter().filter(|p| filters.iter().all(|f| p.get(&f.name).is_none_or(|v| v == f.value))).collect()
}

fn apply_overrides(desc: &IdentityDescriptor, point: Point, at: &[Assignment]) -> Point {
    at.iter().filter(|a| desc.vars.contains(&a.var)).fold(point, |p, a| p.with(a.var, a.binding.clone()))
}

/// One unit of work for the verifier.
#[derive(Clone, Debug)]
pub struct Task {
    pub desc: &'static IdentityDescriptor,
    pub params: Params,
    pub point: Point,
}

/// Every check `verify` runs, in output order. Overridden variables can
/// make sampled points coincide; duplicates are dropped.
pub fn build_tasks(args: &VerifyArgs) -> Result<Vec<Task>, Error> {
    let mut tasks = Vec::new();
    for desc in select(&args.names)? {
        let grid = filter_params(desc, &args.params);
        let mut points: Vec<Point> = Vec::new();
        for pt in identities::sample_points(desc, args.points as usize, args.seed, args.symbolic) {
            let pt = apply_overrides(desc, pt, &args.at);
            if !points.contains(&pt) {
                points.push(pt);
            }
        }
        for params in &grid {
            for pt in &points {
                check_point(desc, pt)?;
                tasks.push(Task { desc, params: params.clone(), point: pt.clone() });
            }
        }
    }
    if tasks.is_empty() {
        return Err(Error::InvalidParameter("no identity matches the requested parameters".into()));
    }
    Ok(tasks)
}

fn pool(common: &Common) -> Result<rayon::ThreadPool, Exit> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(j) = common.jobs {
        b = b.num_threads(j as usize);
    }
    b.build().map_err(|e| usage(format!("cannot start workers: {e}")))
}

fn options(common: &Common) -> VerifyOptions {
    VerifyOptions { order: common.order, degree_cap: common.degree_cap, slack: common.slack, perturb_rhs: None }
}

/// Runs `tasks` on the pool; results come back in task order.
pub fn verify_tasks(
    tasks: &[Task],
    opts: &VerifyOptions,
    perturb: Option<(&str, i64)>,
    pool: &rayon::ThreadPool,
) -> Vec<Result<VerificationReport, Error>> {
    pool.install(|| {
        tasks
            .par_iter()
            .map(|t| {
                let mut o = opts.clone();
                if let Some((name, e)) = perturb {
                    if name == t.desc.name {
                        o.perturb_rhs = Some(e);
                    }
                }
                verify(t.desc, &t.params, &t.point, &o)
            })
            .collect()
    })
}

fn run_verify(common: &Common, args: &VerifyArgs) -> Result<Exit, Exit> {
    let tasks = build_tasks(args).map_err(usage)?;
    if let Some(p) = &args.perturb_rhs {
        find(&p.identity).map_err(usage)?;
    }
    let pool = pool(common)?;
    let start = Instant::now();
    let perturb = args.perturb_rhs.as_ref().map(|p| (p.identity.as_str(), p.e_q));
    let results = verify_tasks(&tasks, &options(common), perturb, &pool);
    let wall = start.elapsed();

    let mut reports = Vec::new();
    let mut errors = 0;
    for (t, r) in tasks.iter().zip(results) {
        match r {
            Ok(rep) => reports.push(rep),
            Err(e) => {
                errors += 1;
                eprintln!("error: {} [{}] at {}: {e}", t.desc.name, t.params, t.point);
            }
        }
    }
    let timing = !common.no_timing;
    emit(common, |out| output::write_reports(out, common.output, &reports, timing))?;

    let count = |f: fn(&Verdict) -> bool| reports.iter().filter(|r| f(&r.verdict)).count();
    let (pass, fail, short) = (
        count(|v| matches!(v, Verdict::Pass)),
        count(|v| matches!(v, Verdict::Fail(_))),
        count(|v| matches!(v, Verdict::Insufficient { .. })),
    );
    let identities = {
        let mut names: Vec<_> = tasks.iter().map(|t| t.desc.name).collect();
        names.dedup();
        names.len()
    };
    let mut summary =
        format!("{identities} identities, {} checks: {pass} pass, {fail} fail, {short} insufficient", tasks.len());
    if errors > 0 {
        summary.push_str(&format!(", {errors} errors"));
    }
    summary.push_str(&format!(" (order {}, seed {})", common.order, args.seed));
    if timing {
        summary.push_str(&format!(" in {:.2} s", wall.as_secs_f64()));
    }
    write_summary(common, &summary);

    Ok(if fail > 0 {
        Exit::Fail
    } else if errors > 0 {
        Exit::Usage
    } else if short > 0 {
        eprintln!("hint: raise --order or --slack");
        Exit::Insufficient
    } else {
        Exit::Ok
    })
}

/// The summary joins the report on stdout only when it cannot corrupt a
/// machine-readable stream.
fn write_summary(common: &Common, summary: &str) {
    if common.output == OutputFormat::Human && common.output_file.is_none() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
}

/// Which of `a`, `b` a named kernel depends on.
fn kernel_vars(head: &str) -> Option<(bool, bool)> {
    match head {
        "theta" => Some((true, false)),
        "L" | "P" | "V" => Some((true, true)),
        "U" => Some((false, true)),
        "poch_inf_q" | "psi" => Some((false, false)),
        _ => None,
    }
}

fn run_expand(common: &Common, args: &ExpandArgs) -> Result<Exit, Exit> {
    let head = args.target.split(':').next().unwrap_or_default();
    let binding = |v: Var, used: bool| -> Binding {
        match args.at.iter().rev().find(|a| a.var == v) {
            Some(a) if used => a.binding.clone(),
            _ if used => Binding::Formal,
            _ => Binding::Rational(Rat::zero()),
        }
    };
    let opts = options(common);
    let (ctx, point, params) = match kernel_vars(head) {
        Some((ua, ub)) => {
            let ctx = EvalContext::symbolic(opts.order, opts.degree_cap)
                .with_slack(opts.slack)
                .with_a(binding(Var::A, ua))
                .with_b(binding(Var::B, ub));
            ctx.validate().map_err(usage)?;
            (ctx, None, None)
        }
        None => {
            let desc = find(head).map_err(usage)?;
            let sampled = identities::sample_points(desc, 1, args.seed, true).remove(0);
            let point = apply_overrides(desc, sampled, &args.at);
            let params = filter_params(desc, &args.params)
                .into_iter()
                .next()
                .ok_or_else(|| usage("no parameter setting matches"))?;
            let ctx = context_for(desc, &point, &opts).map_err(usage)?;
            (ctx, Some(point), Some(params))
        }
    };
    let series = identities::expand_series(&args.target, &ctx, point.as_ref(), params.as_ref()).map_err(usage)?;
    let rows = expansion_rows(&series, &ctx);
    emit(common, |out| output::write_rows(out, common.output, &rows))?;
    Ok(Exit::Ok)
}

fn run_bench(common: &Common, args: &BenchArgs) -> Result<Exit, Exit> {
    let opts = options(common);
    let mut rows = Vec::new();
    let mut worst = Exit::Ok;
    for desc in select(&args.names).map_err(usage)? {
        let (params, point) = plan(desc, 1, args.seed, false).remove(0);
        let mut times = Vec::new();
        let mut verdict = "pass";
        for _ in 0..args.repeats {
            let rep = verify(desc, &params, &point, &opts).map_err(usage)?;
            verdict = rep.verdict.label();
            times.push(rep.elapsed);
        }
        match verdict {
            "fail" => worst = Exit::Fail,
            "insufficient" if worst == Exit::Ok => worst = Exit::Insufficient,
            _ => {}
        }
        times.sort();
        let ms = |d: Duration| if common.no_timing { 0.0 } else { d.as_secs_f64() * 1e3 };
        rows.push(BenchRow {
            identity: desc.name,
            params: params.to_string(),
            point: point.to_string(),
            order: opts.order,
            verdict,
            min_ms: ms(times[0]),
            median_ms: ms(times[times.len() / 2]),
        });
    }
    emit(common, |out| output::write_bench(out, common.output, &rows))?;
    Ok(worst)
}
