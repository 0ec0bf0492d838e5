//! Command-line front end. Every command prints one JSON document; exit code 0
//! on success, 1 on usage errors, 2 on domain errors.

pub mod json;
pub mod verify;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::addconst;
use crate::field::{is_prime, FieldCtx, DEFAULT_MAX_EXT_DEGREE};
use crate::multconst::{self, BadCase, FourPointType, LambdaMap};
use crate::poly::ProjPoint;
use crate::ramify::NormalizedCover;
use crate::symhurwitz;
use crate::threepoint::{solve_three_point, ThreePointSpec};
use crate::Error;
use json::{cover_json, elem_json, point_json, points_json, ratfunc_json};
use verify::{Bounds, Suite};

#[derive(Parser, Debug)]
#[command(name = "tamecover", version, about = "Tame single-cycle covers of P^1 in characteristic p")]
struct Cli {
    /// Indented JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Out {
    /// Also write the JSON document to this path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct Ext {
    /// Largest extension degree searched for roots.
    #[arg(long, default_value_t = DEFAULT_MAX_EXT_DEGREE)]
    ext: u32,
    /// Degree over F_p of the field that --mu, --lambda and --c live in.
    #[arg(long, default_value_t = 1)]
    field_degree: u32,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hurwitz number in characteristic 0 by tuple enumeration.
    HurwitzChar0 {
        #[arg(long)]
        d: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        cycles: Vec<usize>,
        #[command(flatten)]
        out: Out,
    },
    /// Generic cover count for a four-point type with one index p - 1.
    HurwitzP {
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        cycles: Vec<usize>,
        /// The listed cycles omit the final index p - 1.
        #[arg(long)]
        with_pminus1: bool,
        #[arg(long)]
        sweep: Option<String>,
        #[command(flatten)]
        ext: Ext,
        #[command(flatten)]
        out: Out,
    },
    /// Normalized three-point cover; --p 0 works over Q.
    ThreePoint {
        #[arg(long)]
        p: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        cycles: Vec<usize>,
        #[command(flatten)]
        out: Out,
    },
    LambdaMap {
        #[arg(long)]
        p: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        cycles: Vec<usize>,
        #[command(flatten)]
        ext: Ext,
        #[command(flatten)]
        out: Out,
    },
    /// Four-point cover from a three-point cover and a point mu.
    Lift {
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        cycles: Vec<usize>,
        #[arg(long)]
        mu: String,
        /// Three-point cover file; defaults to the one solved from --cycles.
        #[arg(long)]
        cover: Option<PathBuf>,
        #[command(flatten)]
        ext: Ext,
        #[command(flatten)]
        out: Out,
    },
    /// Inverse of lift.
    Contract {
        #[arg(long)]
        cover: PathBuf,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        mu: String,
        #[command(flatten)]
        ext: Ext,
        #[command(flatten)]
        out: Out,
    },
    /// Covers over a branch value lambda; all of F_{p^k} without --lambda.
    FiberCount {
        #[arg(long)]
        p: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        cycles: Vec<usize>,
        #[arg(long)]
        lambda: Option<String>,
        #[command(flatten)]
        ext: Ext,
        #[command(flatten)]
        out: Out,
    },
    BadDegree {
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        cycles: Vec<usize>,
        #[arg(long)]
        sweep: Option<String>,
        #[command(flatten)]
        out: Out,
    },
    /// Polynomial covers with a merged branch point; --cycles e3,e4.
    AdditiveFamily {
        #[arg(long)]
        p: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        cycles: Vec<usize>,
        #[command(flatten)]
        out: Out,
    },
    AdditiveTwist {
        #[arg(long)]
        p: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        cycles: Vec<usize>,
        #[arg(long)]
        c: String,
        #[command(flatten)]
        ext: Ext,
        #[command(flatten)]
        out: Out,
    },
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, alias = "p_max")]
        p_max: Option<u64>,
        #[arg(long, alias = "d_max")]
        d_max: Option<usize>,
        #[arg(long)]
        sweep: Option<String>,
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl<E: Into<Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Domain(e.into())
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

/// Exit code and standard output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome {
                    code: 0,
                    stdout: e.render().to_string(),
                };
            }
            let doc = json!({ "error": "Usage", "detail": e.render().to_string().trim() });
            return Outcome {
                code: 1,
                stdout: json::render(&doc, false) + "\n",
            };
        }
    };
    let pretty = cli.pretty;
    let (code, doc) = match dispatch(cli.command) {
        Ok((code, doc, out)) => match write_out(out.as_ref(), &doc, pretty) {
            Ok(()) => (code, doc),
            Err(e) => (2, error_doc(&e)),
        },
        Err(Failure::Usage(msg)) => (1, json!({ "error": "Usage", "detail": msg })),
        Err(Failure::Domain(e)) => (2, error_doc(&e)),
    };
    Outcome {
        code,
        stdout: json::render(&doc, pretty) + "\n",
    }
}

fn error_doc(e: &Error) -> Value {
    json!({ "error": e.code(), "detail": e.to_string() })
}

fn write_out(path: Option<&PathBuf>, doc: &Value, pretty: bool) -> Result<(), Error> {
    if let Some(path) = path {
        std::fs::write(path, json::render(doc, pretty) + "\n")
            .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

type Dispatched = (i32, Value, Option<PathBuf>);

fn ok(doc: Value, out: Out) -> Result<Dispatched, Failure> {
    Ok((0, doc, out.out))
}

fn dispatch(cmd: Command) -> Result<Dispatched, Failure> {
    match cmd {
        Command::HurwitzChar0 { d, cycles, out } => {
            let c = symhurwitz::hurwitz_char0(d, &cycles)?;
            ok(json!({ "count": c.count }), out)
        }
        Command::HurwitzP {
            p,
            cycles,
            with_pminus1,
            sweep,
            ext,
            out,
        } => {
            if let Some(s) = sweep {
                let primes = parse_sweep(&s)?;
                let types: Vec<FourPointType> = primes
                    .iter()
                    .flat_map(|&p| FourPointType::admissible_types(p))
                    .collect();
                let rows = types
                    .par_iter()
                    .map(|t| {
                        let mut row = hurwitz_p_doc(t, ext.ext)?;
                        let obj = row.as_object_mut().expect("object");
                        obj.insert("p".into(), json!(t.p));
                        obj.insert("cycles".into(), json!([t.e[0], t.e[1], t.e[2], t.p - 1]));
                        obj.insert("d".into(), json!(t.degree()));
                        Ok(row)
                    })
                    .collect::<Result<Vec<_>, Error>>()?;
                return ok(json!({ "sweep": rows }), out);
            }
            let Some(p) = p else {
                return usage("hurwitz-p needs --p or --sweep");
            };
            let e = match (with_pminus1, cycles.as_slice()) {
                (true, &[a, b, c]) => [a, b, c],
                (false, &[a, b, c, last]) => {
                    if last as u64 + 1 != p {
                        return Err(multconst::MultError::InvalidType(format!(
                            "last index {last} is not p - 1 = {}",
                            p - 1
                        ))
                        .into());
                    }
                    [a, b, c]
                }
                (true, _) => return usage("--with-pminus1 takes three cycle lengths"),
                (false, _) => return usage("--cycles takes four lengths ending in p - 1, or three with --with-pminus1"),
            };
            let t = FourPointType::new(p, e[0], e[1], e[2])?;
            ok(hurwitz_p_doc(&t, ext.ext)?, out)
        }
        Command::ThreePoint { p, cycles, out } => {
            let spec = three_spec(&cycles)?;
            let ctx = field(p)?;
            let h = solve_three_point(&ctx, &spec)?;
            let t = [spec.d, spec.e[0], spec.e[1], spec.e[2]];
            ok(cover_json(&h.cover, &t), out)
        }
        Command::LambdaMap { p, cycles, ext, out } => {
            let t = four_type(p, &cycles)?;
            let lm = multconst::lambda_map_with(&field(p)?, &t, ext.ext)?;
            let tilde = t.tilde()?;
            ok(
                json!({
                    "type": t.to_string(),
                    "lambda": ratfunc_json(&lm.map),
                    "lambda_text": lm.map.to_text("mu"),
                    "degree": lm.degree,
                    "h_p": multconst::p_hurwitz_4pt(&t),
                    "supersingular": points_json(&lm.supersingular),
                    "separable": lm.is_separable(),
                    "base": cover_json(&lm.base.cover, &[tilde.d, tilde.e[0], tilde.e[1], tilde.e[2]]),
                }),
                out,
            )
        }
        Command::Lift {
            p,
            cycles,
            mu,
            cover,
            ext,
            out,
        } => {
            let h = match (cover, p) {
                (Some(path), _) => NormalizedCover::new(json::read_cover(&path)?)?,
                (None, Some(p)) => {
                    let t = four_type(p, &cycles)?;
                    solve_three_point(&field(p)?, &t.tilde()?)?
                }
                (None, None) => return usage("lift needs --cover or --p with --cycles"),
            };
            let ctx = elem_field(h.ctx(), ext.field_degree)?;
            let mu = ProjPoint::parse(&ctx, &mu)?;
            let lifted = multconst::lift_with(&h, &mu, ext.ext)?;
            let f = &lifted.f;
            let pm1 = f.ctx().characteristic() as usize - 1;
            let d = f.cover.map_degree()?;
            let t = [d, f.indices[0], f.indices[1], f.indices[2], pm1];
            ok(
                json!({
                    "cover": cover_json(&f.cover, &t),
                    "lambda": elem_json(&lifted.lambda),
                    "mu": point_json(&mu),
                }),
                out,
            )
        }
        Command::Contract {
            cover,
            lambda,
            mu,
            ext,
            out,
        } => {
            let f = NormalizedCover::new(json::read_cover(&cover)?)?;
            let ctx = elem_field(f.ctx(), ext.field_degree)?;
            let lambda = ProjPoint::parse(&ctx, &lambda)?;
            let mu = ProjPoint::parse(&ctx, &mu)?;
            let h = multconst::contract(&f, &lambda, &mu)?;
            let d = h.cover.map_degree()?;
            ok(
                cover_json(&h.cover, &[d, h.indices[0], h.indices[1], h.indices[2]]),
                out,
            )
        }
        Command::FiberCount {
            p,
            cycles,
            lambda,
            ext,
            out,
        } => {
            let t = four_type(p, &cycles)?;
            let base = field(p)?;
            let lm = multconst::lambda_map_with(&base, &t, ext.ext)?;
            let ctx = elem_field(&base, ext.field_degree)?;
            if let Some(l) = lambda {
                let l = ProjPoint::parse(&ctx, &l)?;
                return ok(fiber_doc(&lm, &l, ext.ext)?, out);
            }
            let values: Vec<ProjPoint> = ctx
                .elements()
                .filter(|x| !x.is_zero() && !x.is_one())
                .map(ProjPoint::Finite)
                .collect();
            let fibers = values
                .par_iter()
                .map(|l| fiber_doc(&lm, l, ext.ext))
                .collect::<Result<Vec<_>, Error>>()?;
            ok(
                json!({
                    "type": t.to_string(),
                    "h_p": lm.degree,
                    "supersingular": points_json(&lm.supersingular),
                    "fibers": fibers,
                }),
                out,
            )
        }
        Command::BadDegree {
            p,
            cycles,
            sweep,
            out,
        } => {
            if let Some(s) = sweep {
                let points: Vec<(u64, [usize; 3])> = parse_sweep(&s)?
                    .into_iter()
                    .flat_map(|p| multconst::bad_degree_types(p).into_iter().map(move |e| (p, e)))
                    .collect();
                let rows = points
                    .par_iter()
                    .map(|&(p, e)| bad_degree_doc(p, e))
                    .collect::<Result<Vec<_>, Error>>()?;
                return ok(json!({ "sweep": rows }), out);
            }
            let Some(p) = p else {
                return usage("bad-degree needs --p with --cycles, or --sweep");
            };
            let &[a, b, c] = cycles.as_slice() else {
                return usage("bad-degree takes three cycle lengths; the fourth is p - 1");
            };
            ok(bad_degree_doc(p, multconst::sort_for_bad_degree(p, [a, b, c]))?, out)
        }
        Command::AdditiveFamily { p, cycles, out } => {
            let (e3, e4) = pair(&cycles)?;
            let fams = addconst::construct_family(p, e3, e4)?;
            let rows: Vec<Value> = fams
                .iter()
                .map(|f| {
                    json!({
                        "a": elem_json(&f.a),
                        "rho": elem_json(&f.rho),
                        "c": elem_json(&f.c),
                        "exceptional": f.a_exceptional,
                        "field_degree": f.a.ctx().degree(),
                        "cover": cover_json(f.f(), &additive_type(p, e3, e4)),
                    })
                })
                .collect();
            let hp = addconst::hp_transfer(p, fams.len() as u64);
            ok(json!({ "families": rows, "h_p": hp.h_p }), out)
        }
        Command::AdditiveTwist {
            p,
            cycles,
            c,
            ext,
            out,
        } => {
            let (e3, e4) = pair(&cycles)?;
            let fams = addconst::construct_family(p, e3, e4)?;
            let mut rows = Vec::new();
            let mut first_err = None;
            for fam in &fams {
                let ctx = elem_field(fam.a.ctx(), ext.field_degree)?;
                let cv = ctx.parse(&c)?;
                match addconst::additive_twist(&fam.cover, &cv) {
                    Ok(t) => rows.push(json!({
                        "a": elem_json(&fam.a),
                        "c": elem_json(&t.c),
                        "lambda": elem_json(&t.lambda),
                        "cover": cover_json(&t.g.cover, &additive_type(p, e3, e4)),
                    })),
                    Err(e) => {
                        rows.push(json!({ "a": elem_json(&fam.a), "error": e.code(), "detail": e.to_string() }));
                        first_err.get_or_insert(e);
                    }
                }
            }
            if let (Some(e), true) = (first_err, rows.iter().all(|r| r.get("error").is_some())) {
                return Err(e.into());
            }
            ok(json!({ "twists": rows }), out)
        }
        Command::Verify {
            suite,
            p,
            p_max,
            d_max,
            sweep,
            seed,
            out,
        } => {
            let mut bounds = Bounds {
                seed,
                ..Bounds::default()
            };
            if let Some(s) = sweep {
                bounds.primes = parse_sweep(&s)?;
            } else if let Some(p) = p {
                if !is_prime(p) || p < 5 {
                    return usage(format!("--p {p} must be a prime >= 5"));
                }
                bounds.primes = vec![p];
            } else if let Some(m) = p_max {
                bounds.primes = (5..=m).filter(|&q| is_prime(q)).collect();
            }
            if let Some(d) = d_max {
                bounds.d_max = d;
            }
            let checks = verify::run_suite(suite, &bounds);
            let (passed, failed) = verify::summary(&checks);
            let doc = json!({
                "suite": suite.to_possible_value().map(|v| v.get_name().to_string()),
                "primes": bounds.primes,
                "checks": checks,
                "passed": passed,
                "failed": failed,
            });
            Ok((if failed == 0 { 0 } else { 2 }, doc, out.out))
        }
    }
}

fn field(p: u64) -> Result<FieldCtx, Error> {
    if p == 0 {
        Ok(FieldCtx::rationals())
    } else {
        Ok(FieldCtx::prime(p)?)
    }
}

/// The field for parsed elements: `base`, or F_{p^k} when `k` is larger.
fn elem_field(base: &FieldCtx, k: u32) -> Result<FieldCtx, Error> {
    if k <= base.degree() || !base.is_finite() {
        Ok(base.clone())
    } else {
        Ok(FieldCtx::extension(base.characteristic(), k)?)
    }
}

fn three_spec(cycles: &[usize]) -> Result<ThreePointSpec, Failure> {
    match cycles {
        &[a, b, c] => Ok(ThreePointSpec::new(a, b, c)?),
        _ => usage("three-point takes three cycle lengths"),
    }
}

fn four_type(p: u64, cycles: &[usize]) -> Result<FourPointType, Failure> {
    match cycles {
        &[a, b, c] => Ok(FourPointType::new(p, a, b, c)?),
        &[a, b, c, last] if last as u64 + 1 == p => Ok(FourPointType::new(p, a, b, c)?),
        _ => usage("--cycles takes e1,e2,e3 (the index p - 1 is implicit)"),
    }
}

fn pair(cycles: &[usize]) -> Result<(usize, usize), Failure> {
    match cycles {
        &[a, b] => Ok((a, b)),
        _ => usage("--cycles takes e3,e4"),
    }
}

fn additive_type(p: u64, e3: usize, e4: usize) -> [usize; 5] {
    let d = p as usize + 2;
    [d, d, 3, e3, e4]
}

/// `p=5..13` or `5..13`, inclusive, primes only.
fn parse_sweep(s: &str) -> Result<Vec<u64>, Failure> {
    let body = s.strip_prefix("p=").unwrap_or(s);
    let Some((lo, hi)) = body.split_once("..") else {
        return usage(format!("sweep {s:?} is not of the form p=a..b"));
    };
    let (Ok(lo), Ok(hi)) = (lo.trim().parse::<u64>(), hi.trim().trim_start_matches('=').parse::<u64>()) else {
        return usage(format!("sweep {s:?} has non-numeric bounds"));
    };
    let primes: Vec<u64> = (lo.max(5)..=hi).filter(|&p| is_prime(p)).collect();
    if primes.is_empty() {
        return usage(format!("sweep {s:?} contains no prime >= 5"));
    }
    Ok(primes)
}

fn hurwitz_p_doc(t: &FourPointType, ext: u32) -> Result<Value, Error> {
    let h_p = multconst::p_hurwitz_4pt(t);
    if let Err(e) = t.admissible() {
        return Ok(json!({
            "h_p": h_p,
            "degree_check": Value::Null,
            "supersingular": [],
            "no_covers": e.to_string(),
        }));
    }
    let lm = multconst::lambda_map_with(&FieldCtx::prime(t.p)?, t, ext)?;
    Ok(json!({
        "h_p": h_p,
        "degree_check": lm.degree,
        "supersingular": points_json(&lm.supersingular),
    }))
}

fn fiber_doc(lm: &LambdaMap, l: &ProjPoint, ext: u32) -> Result<Value, Error> {
    let count = multconst::count_covers_at(lm, l, ext)?;
    let ctx = l.finite().map(|x| x.ctx().clone()).expect("finite after count");
    let supersingular = lm
        .supersingular
        .iter()
        .any(|s| s.lift_to(&ctx).ok().as_ref() == Some(l));
    let critical = lm.is_critical_value(l.finite().expect("finite"))?;
    Ok(json!({
        "lambda": point_json(l),
        "count": count,
        "supersingular": supersingular,
        "critical": critical,
    }))
}

fn bad_degree_doc(p: u64, e: [usize; 3]) -> Result<Value, Error> {
    let b = multconst::bad_degree(p, e)?;
    let case = match b.case {
        BadCase::Good => "good",
        BadCase::Mixed => "mixed",
        BadCase::AllBad => "all-bad",
    };
    let mut doc = json!({
        "p": p,
        "cycles": [e[0], e[1], e[2], p - 1],
        "d": b.d,
        "case": case,
        "value": b.value,
        "h": b.h,
        "h_p": b.h_p,
    });
    if b.case == BadCase::Mixed && b.h_p != 0 && b.h != b.h_p {
        let dv = multconst::divisibility_check(p, e)?;
        doc["quotient"] = json!(dv.quotient);
    }
    Ok(doc)
}
