//! Command bodies. Each returns the rendered stdout text and whether the
//! command's own checks passed; the binary maps that onto exit codes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use anyhow::{bail, Result};
use modhyp::distances::{distance_profile, gap_experiment, GapReport};
use modhyp::geometry::census_summary;
use modhyp::hyperbola::{enumerate_points, HyperbolaSpec};
use modhyp::ntcore::gcd;
use modhyp::{Int, MAX_MODULUS};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cache::Cache;
use crate::report::VerificationReport;
use crate::suites::{self, Suite, SuiteParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

pub struct Output {
    pub stdout: String,
    pub pass: bool,
}

#[derive(Serialize)]
struct Envelope<'a, R: Serialize> {
    command: &'a str,
    params: Value,
    result: R,
    #[serde(skip_serializing_if = "Option::is_none")]
    pass: Option<bool>,
}

fn envelope<R: Serialize>(command: &str, params: Value, result: R, pass: Option<bool>) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&Envelope {
        command,
        params,
        result,
        pass,
    })?;
    s.push('\n');
    Ok(s)
}

fn csv_text<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn check_modulus(n: Int) -> Result<()> {
    if !(2..=MAX_MODULUS).contains(&n) {
        bail!("n must lie in [2, 2^31], got {n}");
    }
    Ok(())
}

/// The requested `a`, or every unit mod `n` with `all_a`.
fn a_values(a: Int, n: Int, all_a: bool) -> Result<Vec<Int>> {
    check_modulus(n)?;
    if all_a {
        Ok((1..n).filter(|&x| gcd(x, n) == 1).collect())
    } else {
        HyperbolaSpec::new(a, n)?;
        Ok(vec![a])
    }
}

pub fn points(a: Int, n: Int, format: Format) -> Result<Output> {
    check_modulus(n)?;
    let ps = enumerate_points(HyperbolaSpec::new(a, n)?);
    let stdout = match format {
        Format::Json => envelope(
            "points",
            json!({"a": a, "n": n}),
            json!({"a": ps.spec.a(), "n": n, "count": ps.len(), "points": ps.points}),
            None,
        )?,
        Format::Csv => ps.to_csv(),
        Format::Text => {
            let mut s = format!("# {} points on xy = {} (mod {n})\n", ps.len(), ps.spec.a());
            for p in &ps.points {
                writeln!(s, "{} {}", p.x, p.y)?;
            }
            s
        }
    };
    Ok(Output { stdout, pass: true })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusOut {
    pub n: Int,
    pub a: Int,
    pub ordinary: u64,
    pub histogram: BTreeMap<usize, u64>,
    pub max_collinear: usize,
}

#[derive(Serialize)]
struct CensusRow {
    n: Int,
    a: Int,
    ordinary: u64,
    max_collinear: usize,
}

pub fn census_one(a: Int, n: Int) -> Result<CensusOut> {
    let ps = enumerate_points(HyperbolaSpec::new(a, n)?);
    let s = census_summary(&ps.points)?;
    Ok(CensusOut {
        n,
        a: ps.spec.a(),
        ordinary: s.ordinary_count(),
        max_collinear: s.max_collinear(),
        histogram: s.histogram,
    })
}

pub fn census(a: Int, n: Int, all_a: bool, format: Format) -> Result<Output> {
    let avals = a_values(a, n, all_a)?;
    let results: Vec<CensusOut> = avals.par_iter().map(|&a| census_one(a, n)).collect::<Result<_>>()?;
    let stdout = match format {
        Format::Json => {
            let params = json!({"a": if all_a { Value::Null } else { json!(a) }, "n": n, "all_a": all_a});
            if all_a {
                envelope("census", params, &results, None)?
            } else {
                envelope("census", params, &results[0], None)?
            }
        }
        Format::Csv => csv_text(
            &results
                .iter()
                .map(|c| CensusRow {
                    n: c.n,
                    a: c.a,
                    ordinary: c.ordinary,
                    max_collinear: c.max_collinear,
                })
                .collect::<Vec<_>>(),
        )?,
        Format::Text => {
            let mut s = String::new();
            for c in &results {
                let hist: Vec<String> = c.histogram.iter().map(|(k, v)| format!("{k}:{v}")).collect();
                writeln!(
                    s,
                    "n={} a={} ordinary={} max_collinear={} histogram={}",
                    c.n,
                    c.a,
                    c.ordinary,
                    c.max_collinear,
                    hist.join(",")
                )?;
            }
            s
        }
    };
    Ok(Output { stdout, pass: true })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistancesOut {
    pub a: Int,
    pub n: Int,
    pub count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<u64>>,
}

pub fn distances(a: Int, n: Int, all_a: bool, with_values: bool, format: Format) -> Result<Output> {
    let avals = a_values(a, n, all_a)?;
    let results: Vec<DistancesOut> = avals
        .par_iter()
        .map(|&a| {
            let prof = distance_profile(HyperbolaSpec::new(a, n)?);
            Ok(DistancesOut {
                a: prof.spec.a(),
                n,
                count: prof.distinct_count(),
                values: with_values.then(|| prof.values().collect()),
            })
        })
        .collect::<Result<_>>()?;
    let stdout = match format {
        Format::Json => {
            let params = json!({"a": if all_a { Value::Null } else { json!(a) }, "n": n, "all_a": all_a});
            if all_a {
                envelope("distances", params, &results, None)?
            } else {
                envelope("distances", params, &results[0], None)?
            }
        }
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                a: Int,
                n: Int,
                count: usize,
            }
            csv_text(&results.iter().map(|d| Row { a: d.a, n: d.n, count: d.count }).collect::<Vec<_>>())?
        }
        Format::Text => {
            let mut s = String::new();
            for d in &results {
                write!(s, "a={} n={} count={}", d.a, d.n, d.count)?;
                if let Some(v) = &d.values {
                    let v: Vec<String> = v.iter().map(u64::to_string).collect();
                    write!(s, " values={}", v.join(","))?;
                }
                s.push('\n');
            }
            s
        }
    };
    Ok(Output { stdout, pass: true })
}

pub fn render_report(report: &VerificationReport, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => envelope(
            "verify",
            json!({"suite": report.suite, "range": report.params}),
            report,
            Some(report.pass()),
        )?,
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                case: usize,
                pass: bool,
                inputs: String,
                expected: String,
                computed: String,
            }
            let rows: Vec<Row> = report
                .cases
                .iter()
                .enumerate()
                .map(|(i, c)| Row {
                    case: i,
                    pass: c.pass,
                    inputs: c.inputs.to_string(),
                    expected: c.expected.to_string(),
                    computed: c.computed.to_string(),
                })
                .collect();
            csv_text(&rows)?
        }
        Format::Text => {
            let mut s = String::new();
            for c in &report.cases {
                let tag = if c.pass { "PASS" } else { "FAIL" };
                writeln!(s, "{tag} {} expected {} computed {}", c.inputs, c.expected, c.computed)?;
            }
            writeln!(
                s,
                "{}: {}/{} passed",
                report.suite, report.summary.passed, report.summary.total
            )?;
            s
        }
    })
}

pub struct VerifyOptions<'a> {
    pub cache: Option<&'a Cache>,
    pub verbose: bool,
}

pub fn verify(suite: Suite, params: &SuiteParams, format: Format, opts: VerifyOptions) -> Result<Output> {
    let start = Instant::now();
    let report = suites::run(suite, params)?;
    let elapsed = start.elapsed();
    if opts.verbose {
        eprintln!(
            "{}: {} cases, {} failed, {:.3} s",
            report.suite,
            report.summary.total,
            report.summary.failed,
            elapsed.as_secs_f64()
        );
    }
    if let Some(cache) = opts.cache {
        match cache.latest_matching(&report)? {
            Some((path, previous)) => {
                let diff = report.diff(&previous.report);
                if diff.is_empty() {
                    eprintln!("cache: no change against {}", path.display());
                } else {
                    eprintln!("cache: {} change(s) against {}", diff.len(), path.display());
                    for line in diff {
                        eprintln!("  {line}");
                    }
                }
            }
            None => eprintln!("cache: no previous report for these parameters"),
        }
        let path = cache.write(&report, elapsed.as_millis())?;
        if opts.verbose {
            eprintln!("cache: wrote {}", path.display());
        }
    }
    Ok(Output {
        stdout: render_report(&report, format)?,
        pass: report.pass(),
    })
}

pub fn gap(k: u32, format: Format) -> Result<Output> {
    let r: GapReport = gap_experiment(k)?;
    let pass = r.pass();
    let stdout = match format {
        Format::Json => envelope("gap", json!({"k": k}), &r, Some(pass))?,
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                k: u32,
                a: Int,
                p: Int,
                s_size: usize,
                gap: Int,
                pass: bool,
            }
            csv_text(&[Row {
                k,
                a: r.a,
                p: r.p,
                s_size: r.s.len(),
                gap: r.gap,
                pass,
            }])?
        }
        Format::Text => format!(
            "k={k} a={} p={} s_size={} gap={} {}\n",
            r.a,
            r.p,
            r.s.len(),
            r.gap,
            if pass { "PASS" } else { "FAIL" }
        ),
    };
    Ok(Output { stdout, pass })
}
