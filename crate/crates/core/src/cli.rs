//! The `harmonic` command line. Every invocation writes one JSON report to
//! stdout and a one-line summary to stderr. Exit codes: 0 verified or
//! observed, 1 falsified, 2 error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::closure::{h_closure_with, h_step, ClosureOptions, ConjugateMethod, SearchAmbient};
use crate::constructions::{build_named, Embedding, LabeledStructure, Named};
use crate::field::{is_prime, Field};
use crate::geometry::{build_pg_bounded, harmonic_conjugate_cr, CoordinatePlane, DEFAULT_MAX_PG_ORDER};
use crate::hp::{conjugate_search, harmonic_audit, DEFAULT_MAX_AUDIT_POINTS};
use crate::incfile::{emit_incidence, parse_incidence};
use crate::incidence::IncidenceStructure;
use crate::pointset::PointSet;
use crate::report::{ReportBuilder, Verdict, VerificationReport};
use crate::sequences::{conjugate_sequence, verify_sequence_plane};
use crate::synthesis::{staged_synthesis_with, DEFAULT_MAX_SYNTHESIS_PRIME};
use crate::verify::{verify_minimality, verify_oracle, verify_sequence_plane_std, verify_symmetry, verify_theorem_pp};
use crate::{Error, Result};

pub const ENV_MAX_PG_ORDER: &str = "HARMONIC_MAX_PG_ORDER";
pub const ENV_MAX_AUDIT_POINTS: &str = "HARMONIC_MAX_AUDIT_POINTS";
pub const ENV_MAX_SYNTHESIS_PRIME: &str = "HARMONIC_MAX_SYNTHESIS_PRIME";

fn env_bound<T: std::str::FromStr>(var: &str, default: T) -> T {
    std::env::var(var).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(default)
}

#[derive(Debug, Parser)]
#[command(name = "harmonic", version, about = "Harmonic conjugation and harmonic closure in finite projective planes")]
pub struct Cli {
    /// Seed for every random choice (Desargues sampling, law sampling).
    #[arg(long, global = true, default_value_t = 0)]
    pub rng_seed: u64,
    /// Pretty-print the JSON report.
    #[arg(long, global = true)]
    pub json: bool,
    /// No summary line on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Coordinate,
    Quadrangle,
}

impl From<MethodArg> for ConjugateMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Coordinate => ConjugateMethod::Coordinate,
            MethodArg::Quadrangle => ConjugateMethod::Quadrangle,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConjMethodArg {
    Quadrangle,
    Crossratio,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyClaim {
    TheoremPp,
    Minimality,
    Symmetry,
    SequencePlane,
    Oracle,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchTask {
    /// h∞(L_p) inside PG(2,p).
    ClosureLp,
    /// Build PG(2,q) and run one h step on a full line.
    StepLine,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a named structure: fano, nonfano, lp, reid, reid_in_lp, group_expansion.
    Build {
        name: String,
        #[arg(short)]
        p: Option<u32>,
        #[arg(short)]
        n: Option<u32>,
        /// Write the `.inc` file here.
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Harmonic closure of a seed inside a coordinate plane.
    Closure {
        #[arg(long)]
        ambient: String,
        /// A name such as `lp:5` or a `.inc` file with coordinate labels.
        #[arg(long)]
        seed: String,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        max_stages: Option<usize>,
        #[arg(long, value_enum, default_value_t = MethodArg::Coordinate)]
        method: MethodArg,
    },
    /// Harmonic conjugate of x with respect to y and z.
    Conjugate {
        #[arg(long)]
        ambient: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        z: String,
        #[arg(long)]
        x: String,
        #[arg(long, value_enum, default_value_t = ConjMethodArg::Both)]
        method: ConjMethodArg,
    },
    /// Conjugate sequence a_{i+1} = conj(base, a_i; a_{i-1}).
    Sequence {
        #[arg(long)]
        ambient: String,
        #[arg(long)]
        base: String,
        #[arg(long)]
        a0: String,
        #[arg(long)]
        a1: String,
        #[arg(long)]
        limit: Option<usize>,
        /// Also check that the sequence spans a plane of prime order.
        #[arg(long)]
        verify_plane: bool,
    },
    /// Exhaustive HP audit of a structure.
    Audit {
        /// A name, a `.inc` file, or `pg:<field>`.
        structure: String,
        #[arg(long)]
        max_points: Option<usize>,
    },
    /// Run one of the verifiers.
    Verify {
        #[arg(value_enum)]
        claim: VerifyClaim,
        #[arg(short)]
        p: u32,
        /// Ambient for symmetry, oracle and sequence-plane (default pg:p).
        #[arg(long)]
        ambient: Option<String>,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Staged reconstruction of PG(2,p) from L_p by conjugation.
    Synthesize {
        #[arg(short)]
        p: u32,
        #[arg(long)]
        certificate: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = MethodArg::Coordinate)]
        method: MethodArg,
    },
    /// Timing runs.
    Bench {
        #[arg(value_enum)]
        task: BenchTask,
        #[arg(short)]
        p: u32,
    },
}

/// Parses `pg:<field>` where the field is `p`, `q` (a prime power),
/// `p^m` or `p^m:c0,c1,...`.
pub fn parse_ambient(text: &str) -> Result<CoordinatePlane> {
    let desc = text
        .strip_prefix("pg:")
        .ok_or_else(|| Error::Usage(format!("ambient {text:?} must look like pg:<field>")))?;
    let f = parse_field(desc)?;
    Ok(build_pg_bounded(&f, env_bound(ENV_MAX_PG_ORDER, DEFAULT_MAX_PG_ORDER))?)
}

/// Field descriptor, also accepting a bare prime power such as `9`.
pub fn parse_field(desc: &str) -> Result<Field> {
    if !desc.contains('^') && !desc.contains(':') {
        if let Ok(q) = desc.trim().parse::<u32>() {
            if q >= 2 && !is_prime(q) {
                if let Some((p, m)) = prime_power(q) {
                    return Ok(Field::new(p, m, None)?);
                }
            }
        }
    }
    Ok(desc.parse::<Field>()?)
}

fn prime_power(q: u32) -> Option<(u32, u32)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut r, mut m) = (q, 0);
    while r % p == 0 {
        r /= p;
        m += 1;
    }
    (r == 1).then_some((p, m))
}

fn point_arg(plane: &CoordinatePlane, text: &str) -> Result<u32> {
    Ok(plane.parse_point(text)?)
}

/// A seed given by name or file, mapped into `plane`.
fn seed_in(plane: &CoordinatePlane, seed: &str) -> Result<(String, PointSet)> {
    let path = Path::new(seed);
    let ls = if seed.ends_with(".inc") || path.is_file() {
        let text = std::fs::read_to_string(path)?;
        LabeledStructure {
            name: seed.to_string(),
            structure: parse_incidence(&text)?,
            embedding: None,
        }
    } else {
        build_named(seed.parse::<Named>()?)?
    };
    if let Some(e) = &ls.embedding {
        if e.ambient.field() == plane.field() {
            return Ok((ls.name, e.image()));
        }
    }
    // fall back to coordinate labels
    let st = &ls.structure;
    let mut map = Vec::with_capacity(st.point_count());
    for p in 0..st.point_count() as u32 {
        let label = st
            .label(p)
            .ok_or_else(|| Error::Usage(format!("seed point {p} has no coordinate label")))?;
        map.push(plane.parse_point(label)?);
    }
    let e = Embedding {
        ambient: plane.clone(),
        map,
    };
    if let Err(t) = e.check(st) {
        return Err(Error::Usage(format!(
            "seed {seed:?} does not embed in {plane:?}: points {t:?} change rank"
        )));
    }
    Ok((ls.name, e.image()))
}

fn labels(plane: &CoordinatePlane, s: &PointSet) -> Vec<String> {
    s.iter().map(|p| plane.label(p)).collect()
}

fn structure_arg(text: &str) -> Result<(String, IncidenceStructure)> {
    if text.starts_with("pg:") {
        let pl = parse_ambient(text)?;
        return Ok((text.to_string(), pl.structure().clone()));
    }
    if text.ends_with(".inc") || Path::new(text).is_file() {
        let s = parse_incidence(&std::fs::read_to_string(text)?)?;
        return Ok((text.to_string(), s));
    }
    let ls = build_named(text.parse::<Named>()?)?;
    Ok((ls.name, ls.structure))
}

fn write_json(path: &Path, v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v).expect("json");
    std::fs::write(path, text + "\n")?;
    Ok(())
}

fn cmd_build(name: &str, p: Option<u32>, n: Option<u32>, o: Option<&Path>, seed: u64) -> Result<VerificationReport> {
    let named = if name.contains(':') {
        name.parse::<Named>()?
    } else {
        Named::from_parts(name, p, n)?
    };
    let ls = build_named(named)?;
    let st = &ls.structure;
    let text = emit_incidence(st, Some(&ls.name));
    let mut rb = ReportBuilder::new("build", seed);
    rb.observed();
    rb.size("points", st.point_count());
    rb.size("lines", st.line_count());
    if let Some(e) = &ls.embedding {
        rb.check("embedding preserves ranks", e.check(st).is_ok(), None);
    }
    match o {
        Some(path) => {
            std::fs::write(path, &text)?;
            rb.details(json!({ "name": ls.name, "file": path.display().to_string() }));
        }
        None => rb.details(json!({ "name": ls.name, "incidence": text })),
    }
    Ok(rb.finish())
}

fn cmd_closure(
    ambient: &str,
    seed_arg: &str,
    trace_path: Option<&Path>,
    max_stages: Option<usize>,
    method: MethodArg,
    seed: u64,
) -> Result<VerificationReport> {
    let plane = parse_ambient(ambient)?;
    let (name, s) = seed_in(&plane, seed_arg)?;
    let st = plane.structure();
    let opts = ClosureOptions {
        max_stages,
        shuffle_seed: None,
    };
    let trace = match method {
        MethodArg::Coordinate => h_closure_with(&plane, &s, opts)?,
        MethodArg::Quadrangle => h_closure_with(&SearchAmbient(st), &s, opts)?,
    };
    let fin = &trace.final_set;
    let mut rb = ReportBuilder::new("closure", seed);
    rb.observed();
    rb.size("seed_points", s.len());
    rb.size("closure_points", fin.len());
    rb.size("plane_points", plane.point_count());
    rb.stages(trace.stages.len());
    rb.check("fixpoint reached", trace.fixpoint, None);
    rb.check("provenance replays", trace.replay(&plane).is_ok(), None);
    let (sub, _) = st.restrict(fin);
    let pr = sub.plane_check(crate::verify::DESARGUES_SAMPLES, seed);
    rb.details(json!({
        "seed": name,
        "ambient": plane.field().descriptor(),
        "closure_is_plane": pr.is_plane,
        "closure_plane_order": pr.order,
        "closure_rank": st.rank(fin),
        "stage_sizes": (0..=trace.stages.len()).map(|k| trace.after_stage(k).len()).collect::<Vec<_>>(),
        "closure": labels(&plane, fin),
    }));
    if let Some(path) = trace_path {
        let stages: Vec<Value> = trace
            .stages
            .iter()
            .map(|stage| {
                json!({
                    "stage": stage.stage,
                    "added": stage.added.iter().map(|a| json!({
                        "point": plane.label(a.point),
                        "a": plane.label(a.a),
                        "b": plane.label(a.b),
                        "c": plane.label(a.c),
                    })).collect::<Vec<_>>(),
                })
            })
            .collect();
        write_json(
            path,
            &json!({
                "ambient": plane.field().descriptor(),
                "method": trace.method,
                "initial": labels(&plane, &trace.initial),
                "stages": stages,
                "final": labels(&plane, fin),
                "fixpoint": trace.fixpoint,
            }),
        )?;
    }
    Ok(rb.finish())
}

fn cmd_conjugate(ambient: &str, y: &str, z: &str, x: &str, method: ConjMethodArg, seed: u64) -> Result<VerificationReport> {
    let plane = parse_ambient(ambient)?;
    let (yi, zi, xi) = (point_arg(&plane, y)?, point_arg(&plane, z)?, point_arg(&plane, x)?);
    let mut rb = ReportBuilder::new("conjugate", seed);
    rb.size("order", plane.order());
    let mut details = serde_json::Map::new();
    let mut cr = None;
    let mut quad = None;
    if method != ConjMethodArg::Quadrangle {
        let f = plane.field();
        let pt = harmonic_conjugate_cr(f, &plane.point(yi), &plane.point(zi), &plane.point(xi))?;
        let idx = plane.index_of(&pt)?;
        details.insert("crossratio".into(), json!(plane.label(idx)));
        cr = Some(idx);
    }
    if method != ConjMethodArg::Crossratio {
        let r = conjugate_search(plane.structure(), yi, zi, xi)?;
        details.insert(
            "quadrangle".into(),
            json!({
                "status": r.status,
                "conjugate": r.conjugate.map(|c| plane.label(c)),
                "witnesses": r.witnesses,
            }),
        );
        rb.size("witnesses", r.witnesses);
        rb.check("quadrangle conjugate is unique", r.conjugate.is_some() && r.unresolved == 0, None);
        quad = r.conjugate;
    }
    if let (Some(a), Some(b)) = (cr, quad) {
        rb.check("methods agree", a == b, Some(format!("{} vs {}", plane.label(a), plane.label(b))));
    }
    if let Some(c) = cr.or(quad) {
        details.insert("conjugate".into(), json!(plane.label(c)));
    }
    rb.details(Value::Object(details));
    Ok(rb.finish())
}

fn cmd_sequence(
    ambient: &str,
    base: &str,
    a0: &str,
    a1: &str,
    limit: Option<usize>,
    verify_plane: bool,
    seed: u64,
) -> Result<VerificationReport> {
    let plane = parse_ambient(ambient)?;
    let (b, x0, x1) = (point_arg(&plane, base)?, point_arg(&plane, a0)?, point_arg(&plane, a1)?);
    let seq = conjugate_sequence(&plane, b, x0, x1, limit)?;
    let summary = json!({
        "base": plane.label(b),
        "terms": seq.terms.iter().map(|&t| plane.label(t)).collect::<Vec<_>>(),
        "modular": seq.modular,
        "repeat": seq.repeat,
        "period": seq.period,
        "characteristic": plane.field().characteristic(),
    });
    if verify_plane {
        let mut r = verify_sequence_plane(&plane, b, x0, x1, limit, seed)?;
        r.details = Some(json!({ "sequence": summary, "plane": r.details.take() }));
        return Ok(r);
    }
    let mut rb = ReportBuilder::new("sequence", seed);
    rb.observed();
    rb.size("terms", seq.terms.len());
    if let Some(n) = seq.period {
        rb.size("period", n);
    }
    rb.details(summary);
    Ok(rb.finish())
}

fn cmd_audit(structure: &str, max_points: Option<usize>, seed: u64) -> Result<VerificationReport> {
    let (name, st) = structure_arg(structure)?;
    let bound = max_points.unwrap_or_else(|| env_bound(ENV_MAX_AUDIT_POINTS, DEFAULT_MAX_AUDIT_POINTS));
    let rep = harmonic_audit(&st, bound)?;
    let mut rb = ReportBuilder::new("harmonic-audit", seed);
    rb.size("points", rep.points);
    rb.size("triples_checked", rep.triples_checked);
    rb.size("triples_with_witness", rep.triples_with_witness);
    rb.size("witness_free", rep.witness_free_count);
    rb.size("unresolved", rep.unresolved_count);
    rb.check_with("structure is harmonic", rep.is_harmonic(), || {
        json!({ "verdict": rep.verdict, "unresolved": rep.unresolved, "disagreements": rep.disagreements })
    });
    rb.details(json!({ "structure": name, "audit": rep }));
    Ok(rb.finish())
}

fn sub_ambient(ambient: Option<&str>, p: u32) -> Result<CoordinatePlane> {
    parse_ambient(ambient.unwrap_or(&format!("pg:{p}")))
}

/// Runs one verifier claim.
pub fn run_verify(claim: VerifyClaim, p: u32, ambient: Option<&str>, samples: usize, seed: u64) -> Result<VerificationReport> {
    Ok(match claim {
        VerifyClaim::TheoremPp => verify_theorem_pp(p, seed),
        VerifyClaim::Minimality => verify_minimality(p, seed),
        VerifyClaim::Symmetry => verify_symmetry(&sub_ambient(ambient, p)?, samples, seed),
        VerifyClaim::Oracle => verify_oracle(&sub_ambient(ambient, p)?, samples, seed),
        VerifyClaim::SequencePlane => verify_sequence_plane_std(&sub_ambient(ambient, p)?, seed),
        VerifyClaim::All => {
            let start = Instant::now();
            let mut parts = vec![
                verify_theorem_pp(p, seed),
                verify_minimality(p, seed),
                verify_symmetry(&sub_ambient(ambient, p)?, samples, seed),
                verify_sequence_plane_std(&sub_ambient(ambient, p)?, seed),
            ];
            if p == 2 {
                // minimality needs an odd prime
                parts.remove(1);
            }
            let mut rb = ReportBuilder::new("all", seed);
            rb.size("p", p);
            for r in &parts {
                rb.check(&r.claim, r.verdict == Verdict::Verified, Some(format!("{:?}", r.verdict)));
            }
            rb.details(json!({ "reports": parts.iter().map(|r| r.to_json()).collect::<Vec<_>>() }));
            let mut r = rb.finish();
            if parts.iter().any(|r| r.verdict == Verdict::Error) {
                r.verdict = Verdict::Error;
            }
            r.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
            r
        }
    })
}

fn cmd_synthesize(p: u32, certificate: Option<&Path>, method: MethodArg, seed: u64) -> Result<VerificationReport> {
    let bound = env_bound(ENV_MAX_SYNTHESIS_PRIME, DEFAULT_MAX_SYNTHESIS_PRIME);
    let mut rb = ReportBuilder::new("synthesis", seed);
    let cert = match staged_synthesis_with(p, method.into(), bound) {
        Ok(c) => c,
        Err(crate::synthesis::SynthesisError::ClaimFailed {
            k,
            claim,
            detail,
            certificate: partial,
        }) => {
            // keep the partial certificate for inspection
            if let Some(path) = certificate {
                write_json(path, &serde_json::to_value(&partial).expect("json"))?;
            }
            rb.check(&format!("k = {k}: {claim}"), false, Some(detail));
            return Ok(rb.finish());
        }
        Err(e) => return Err(e.into()),
    };
    rb.size("p", p);
    rb.size("plane_points", cert.plane_points);
    rb.size("covered", cert.covered);
    rb.stages(cert.stages.len());
    for stage in &cert.stages {
        let c = &stage.claims;
        let ok = c.intersection && c.collinear_triples && c.new_points != Some(false) && c.family_line && c.consistent;
        let matched = stage.points.iter().all(|pt| pt.coordinate_match);
        rb.check(&format!("k = {} claims", stage.k), ok, None);
        rb.check(&format!("k = {} coordinate names", stage.k), matched, None);
    }
    rb.check("wrap-around", cert.wrap_check == Some(true), None);
    rb.check("every plane point covered", cert.covered == cert.plane_points, None);
    if let Some(path) = certificate {
        write_json(path, &serde_json::to_value(&cert).expect("json"))?;
    }
    Ok(rb.finish())
}

fn cmd_bench(task: BenchTask, p: u32, seed: u64) -> Result<VerificationReport> {
    let mut rb = ReportBuilder::new("bench", seed);
    rb.observed();
    rb.size("order", p);
    match task {
        BenchTask::ClosureLp => {
            let ls = build_named(Named::Lp(p))?;
            let e = ls.embedding.expect("lp is embedded");
            let t = Instant::now();
            let trace = h_closure_with(&e.ambient, &e.image(), ClosureOptions::default())?;
            rb.size("closure_ms", t.elapsed().as_secs_f64() * 1e3);
            rb.size("closure_points", trace.final_set.len());
            rb.stages(trace.stages.len());
            rb.check("closure is the whole plane", trace.final_set.len() == e.ambient.point_count(), None);
        }
        BenchTask::StepLine => {
            let t = Instant::now();
            let plane = parse_ambient(&format!("pg:{p}"))?;
            rb.size("build_ms", t.elapsed().as_secs_f64() * 1e3);
            let st = plane.structure();
            let line = st.set_of(st.line(0).iter().copied());
            let t = Instant::now();
            let next = h_step(&plane, &line)?;
            rb.size("step_ms", t.elapsed().as_secs_f64() * 1e3);
            rb.size("line_points", line.len());
            rb.check("a full line is closed under h", next == line, None);
        }
    }
    Ok(rb.finish())
}

/// Dispatches a parsed command.
pub fn execute(cli: &Cli) -> Result<VerificationReport> {
    let seed = cli.rng_seed;
    match &cli.command {
        Command::Build { name, p, n, o } => cmd_build(name, *p, *n, o.as_deref(), seed),
        Command::Closure {
            ambient,
            seed: s,
            trace,
            max_stages,
            method,
        } => cmd_closure(ambient, s, trace.as_deref(), *max_stages, *method, seed),
        Command::Conjugate { ambient, y, z, x, method } => cmd_conjugate(ambient, y, z, x, *method, seed),
        Command::Sequence {
            ambient,
            base,
            a0,
            a1,
            limit,
            verify_plane,
        } => cmd_sequence(ambient, base, a0, a1, *limit, *verify_plane, seed),
        Command::Audit { structure, max_points } => cmd_audit(structure, *max_points, seed),
        Command::Verify {
            claim,
            p,
            ambient,
            samples,
        } => run_verify(*claim, *p, ambient.as_deref(), *samples, seed),
        Command::Synthesize { p, certificate, method } => cmd_synthesize(*p, certificate.as_deref(), *method, seed),
        Command::Bench { task, p } => cmd_bench(*task, *p, seed),
    }
}

fn claim_of(cmd: &Command) -> &'static str {
    match cmd {
        Command::Build { .. } => "build",
        Command::Closure { .. } => "closure",
        Command::Conjugate { .. } => "conjugate",
        Command::Sequence { .. } => "sequence",
        Command::Audit { .. } => "harmonic-audit",
        Command::Verify { .. } => "verify",
        Command::Synthesize { .. } => "synthesis",
        Command::Bench { .. } => "bench",
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// the report. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    let report = execute(&cli).unwrap_or_else(|e| ReportBuilder::new(claim_of(&cli.command), cli.rng_seed).error(e.to_string()));
    let v = report.to_json();
    let text = if cli.json {
        serde_json::to_string_pretty(&v)
    } else {
        serde_json::to_string(&v)
    }
    .expect("json");
    let _ = writeln!(out, "{text}");
    if !cli.quiet {
        let failed: Vec<&str> = report.failed_checks().map(|c| c.name.as_str()).collect();
        let _ = write!(err, "{}: {:?} in {:.1} ms", report.claim, report.verdict, report.elapsed_ms);
        if !failed.is_empty() {
            let _ = write!(err, " (failed: {})", failed.join("; "));
        }
        let _ = writeln!(err);
    }
    report.verdict.exit_code()
}
