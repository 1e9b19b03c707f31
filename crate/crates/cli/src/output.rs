//! Report records and their human, JSON and CSV renderings.

use std::io::{self, Write};

use qtheta::identities::{IdentitySummary, Params, Point, Row, Verdict, VerificationReport};
use qtheta::{Binding, Exp};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::args::OutputFormat;

/// Integer parameters as a JSON object, in grid order.
struct ParamsObj<'a>(&'a Params);

impl Serialize for ParamsObj<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0 .0.len()))?;
        for (k, v) in &self.0 .0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

/// `"symbolic"` when every variable is formal, otherwise `{var: "p/q" | "formal"}`.
struct PointObj<'a>(&'a Point);

impl Serialize for PointObj<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let pt = &self.0 .0;
        if !pt.is_empty() && pt.iter().all(|(_, b)| b.is_formal()) {
            return s.serialize_str("symbolic");
        }
        let mut map = s.serialize_map(Some(pt.len()))?;
        for (v, b) in pt {
            map.serialize_entry(v.name(), &binding_str(b))?;
        }
        map.end()
    }
}

/// `a=2/3 b=formal`, or `symbolic` as in the JSON report.
fn point_cell(point: &Point) -> String {
    let pt = &point.0;
    if !pt.is_empty() && pt.iter().all(|(_, b)| b.is_formal()) {
        return "symbolic".into();
    }
    pt.iter().map(|(v, b)| format!("{v}={}", binding_str(b))).collect::<Vec<_>>().join(" ")
}

fn binding_str(b: &Binding) -> String {
    match b {
        Binding::Formal => "formal".into(),
        Binding::Rational(r) => r.to_ratio_string(),
    }
}

#[derive(Serialize)]
struct WindowObj {
    q_lo: i64,
    q_hi: i64,
}

#[derive(Serialize)]
struct DiffObj {
    e_q: i64,
    e_a: i64,
    e_b: i64,
    lhs: String,
    rhs: String,
}

#[derive(Serialize)]
struct ReportObj<'a> {
    identity: &'a str,
    params: ParamsObj<'a>,
    point: PointObj<'a>,
    order: i64,
    window: WindowObj,
    verdict: &'static str,
    first_diff: Option<DiffObj>,
    elapsed_ms: u64,
}

fn first_diff(r: &VerificationReport) -> Option<DiffObj> {
    match &r.verdict {
        Verdict::Fail(d) => Some(DiffObj {
            e_q: d.exp.q,
            e_a: d.exp.a,
            e_b: d.exp.b,
            lhs: d.lhs.to_ratio_string(),
            rhs: d.rhs.to_ratio_string(),
        }),
        _ => None,
    }
}

fn elapsed_ms(r: &VerificationReport, timing: bool) -> u64 {
    if timing {
        r.elapsed.as_millis() as u64
    } else {
        0
    }
}

fn report_obj(r: &VerificationReport, timing: bool) -> ReportObj<'_> {
    ReportObj {
        identity: r.identity,
        params: ParamsObj(&r.params),
        point: PointObj(&r.point),
        order: r.order,
        window: WindowObj { q_lo: r.q_lo, q_hi: r.q_hi },
        verdict: r.verdict.label(),
        first_diff: first_diff(r),
        elapsed_ms: elapsed_ms(r, timing),
    }
}

fn to_io(e: serde_json::Error) -> io::Error {
    io::Error::other(e)
}

fn monomial(e: &Exp) -> String {
    let mut parts = vec![format!("q^{}", e.q)];
    if e.a != 0 {
        parts.push(format!("a^{}", e.a));
    }
    if e.b != 0 {
        parts.push(format!("b^{}", e.b));
    }
    parts.join(" ")
}

pub fn write_reports(
    out: &mut dyn Write,
    format: OutputFormat,
    reports: &[VerificationReport],
    timing: bool,
) -> io::Result<()> {
    match format {
        OutputFormat::Json => {
            let objs: Vec<_> = reports.iter().map(|r| report_obj(r, timing)).collect();
            serde_json::to_writer_pretty(&mut *out, &objs).map_err(to_io)?;
            writeln!(out)
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record([
                "identity",
                "params",
                "point",
                "order",
                "q_lo",
                "q_hi",
                "verdict",
                "e_q",
                "e_a",
                "e_b",
                "lhs",
                "rhs",
                "elapsed_ms",
            ])?;
            for r in reports {
                let d = first_diff(r);
                let field = |f: fn(&DiffObj) -> String| d.as_ref().map(f).unwrap_or_default();
                w.write_record([
                    r.identity.to_string(),
                    r.params.to_string(),
                    point_cell(&r.point),
                    r.order.to_string(),
                    r.q_lo.to_string(),
                    r.q_hi.to_string(),
                    r.verdict.label().to_string(),
                    field(|d| d.e_q.to_string()),
                    field(|d| d.e_a.to_string()),
                    field(|d| d.e_b.to_string()),
                    field(|d| d.lhs.clone()),
                    field(|d| d.rhs.clone()),
                    elapsed_ms(r, timing).to_string(),
                ])?;
            }
            w.flush()
        }
        OutputFormat::Human => {
            for r in reports {
                let params = if r.params.is_empty() { String::new() } else { format!(" [{}]", r.params) };
                write!(
                    out,
                    "{:<12} {}{} at {}  q^{}..q^{}",
                    r.verdict.label().to_uppercase(),
                    r.identity,
                    params,
                    r.point,
                    r.q_lo,
                    r.q_hi
                )?;
                if timing {
                    write!(out, "  {} ms", r.elapsed.as_millis())?;
                }
                writeln!(out)?;
                match &r.verdict {
                    Verdict::Fail(d) => writeln!(
                        out,
                        "             first difference at {}: lhs {}, rhs {}",
                        monomial(&d.exp),
                        d.lhs,
                        d.rhs
                    )?,
                    Verdict::Insufficient { achieved } => writeln!(
                        out,
                        "             sides only known through q^{achieved} of q^{}; raise --order or --slack",
                        r.order
                    )?,
                    Verdict::Pass => {}
                }
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct RowObj {
    e_q: i64,
    e_a: i64,
    e_b: i64,
    coeff: String,
}

pub fn write_rows(out: &mut dyn Write, format: OutputFormat, rows: &[Row]) -> io::Result<()> {
    let objs: Vec<RowObj> = rows
        .iter()
        .map(|r| RowObj { e_q: r.exp.q, e_a: r.exp.a, e_b: r.exp.b, coeff: r.coeff.to_ratio_string() })
        .collect();
    match format {
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, &objs).map_err(to_io)?;
            writeln!(out)
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for o in &objs {
                w.serialize(o).map_err(io::Error::from)?;
            }
            w.flush()
        }
        OutputFormat::Human => {
            for r in rows {
                writeln!(out, "{:<20} {}", monomial(&r.exp), r.coeff)?;
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct SummaryObj<'a> {
    name: &'a str,
    engine: &'static str,
    vars: &'a [&'static str],
    params: &'a [String],
    poles: &'a [String],
    formula: &'a str,
    notes: &'a str,
}

fn engine_label(s: &IdentitySummary) -> &'static str {
    match s.engine {
        qtheta::identities::Engine::SymbolicOk => "symbolic",
        qtheta::identities::Engine::SpecializeOnly => "specialize",
    }
}

pub fn write_list(out: &mut dyn Write, format: OutputFormat, list: &[IdentitySummary]) -> io::Result<()> {
    let objs: Vec<SummaryObj> = list
        .iter()
        .map(|s| SummaryObj {
            name: s.name,
            engine: engine_label(s),
            vars: &s.vars,
            params: &s.params,
            poles: &s.poles,
            formula: s.formula,
            notes: s.notes,
        })
        .collect();
    match format {
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, &objs).map_err(to_io)?;
            writeln!(out)
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["name", "engine", "vars", "params", "poles", "formula", "notes"])?;
            for o in &objs {
                w.write_record([
                    o.name,
                    o.engine,
                    &o.vars.join(" "),
                    &o.params.join(" "),
                    &o.poles.join("; "),
                    o.formula,
                    o.notes,
                ])?;
            }
            w.flush()
        }
        OutputFormat::Human => {
            for o in &objs {
                let grid = if o.params.is_empty() { String::new() } else { format!("  {} settings", o.params.len()) };
                let poles =
                    if o.poles.is_empty() { String::new() } else { format!("  excludes {}", o.poles.join(", ")) };
                writeln!(out, "{:<26} {:<10} vars: {}{grid}{poles}", o.name, o.engine, o.vars.join(" "))?;
                writeln!(out, "    {}", o.formula)?;
                if !o.notes.is_empty() {
                    writeln!(out, "    note: {}", o.notes)?;
                }
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
pub struct BenchRow {
    pub identity: &'static str,
    pub params: String,
    pub point: String,
    pub order: i64,
    pub verdict: &'static str,
    pub min_ms: f64,
    pub median_ms: f64,
}

pub fn write_bench(out: &mut dyn Write, format: OutputFormat, rows: &[BenchRow]) -> io::Result<()> {
    match format {
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, rows).map_err(to_io)?;
            writeln!(out)
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(r).map_err(io::Error::from)?;
            }
            w.flush()
        }
        OutputFormat::Human => {
            writeln!(out, "{:<26} {:>10} {:>10}  verdict", "identity", "median ms", "min ms")?;
            for r in rows {
                writeln!(out, "{:<26} {:>10.1} {:>10.1}  {}", r.identity, r.median_ms, r.min_ms, r.verdict)?;
            }
            Ok(())
        }
    }
}
