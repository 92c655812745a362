use std::fs::File;
use std::io::{BufWriter, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use lensknot::bqf::{
    bound_u, divisibility_scan, fundamental_unit_with_cap, generate_solutions,
    orbit_representatives, QuadForm, DEFAULT_UNIT_SEARCH_CAP,
};
use lensknot::dual::{
    basic_stats_cancellable, kplus_dual, BasicSequenceStats, DualError, DualKnotTriple,
};
use lensknot::knots::{lens_surgery, natural_slope, Knot, KnotFamily, Slope, SurgeryResult};
use lensknot::lens::{homeomorphic, oriented_homeomorphic, LensSpace};
use lensknot::search::{
    find_coincidences, json_int, summarize, verify_family, verify_no_nonintegral_pairs, FamilyTag,
    SearchConfig,
};
use lensknot::sequences::{check_identity, Identity};

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "lensknot",
    version,
    about = "Lens space surgeries, dual knots and quadratic forms"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Jsonl,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lens space surgery on a knot, e.g. `surgery torus 3 4 --slope 13/1`.
    #[command(allow_negative_numbers = true)]
    Surgery {
        /// torus, cable, kplus, tangleHH or tangleTH.
        family: KnotFamily,
        /// Family parameters; the cable sign is +1 or -1.
        #[arg(required = true)]
        params: Vec<BigInt>,
        /// Slope m/n or m. Defaults to the family's lens space slope.
        #[arg(long)]
        slope: Option<Slope>,
    },
    /// Whether L(p1,q1) and L(p2,q2) are homeomorphic. Exits 1 when not.
    #[command(allow_negative_numbers = true)]
    Homeo {
        p1: BigInt,
        q1: BigInt,
        p2: BigInt,
        q2: BigInt,
        /// Require an orientation-preserving homeomorphism.
        #[arg(long)]
        oriented: bool,
    },
    /// Dual knot triple of kplus(a,b) with its basic sequence counts.
    Dual {
        a: BigInt,
        b: BigInt,
        #[command(flatten)]
        timeout: Timeout,
    },
    /// Basic sequence counts of an arbitrary triple (p,q,k).
    Phi {
        p: BigInt,
        q: BigInt,
        k: BigInt,
        #[command(flatten)]
        timeout: Timeout,
    },
    /// Binary quadratic forms.
    Bqf {
        #[command(subcommand)]
        command: BqfCommand,
    },
    /// Checks the closed-form identities for every index up to N.
    Identities {
        #[arg(long, value_name = "N")]
        range: u64,
        /// Only this identity.
        #[arg(long)]
        identity: Option<Identity>,
    },
    /// Checks a coincidence family over an index range, e.g. `--range 1..20`.
    Verify {
        family: FamilyTag,
        #[arg(long, value_parser = parse_range)]
        range: RangeInclusive<u64>,
    },
    /// Checks that equal-pq torus knots never share non-integral lens surgeries.
    Nonintegral {
        #[arg(long, default_value_t = 40)]
        p_max: u64,
        #[arg(long, value_parser = parse_range, default_value = "3..6")]
        n: RangeInclusive<u64>,
    },
    /// Searches for knots with homeomorphic surgeries at the same slope.
    Search(SearchArgs),
}

#[derive(Args, Debug)]
struct Timeout {
    /// Abandon the scan after this many seconds.
    #[arg(long, value_name = "SECS")]
    timeout: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum BqfCommand {
    /// Solves Ax^2 + Bxy + Cy^2 = m.
    #[command(allow_negative_numbers = true)]
    Solve {
        a: BigInt,
        b: BigInt,
        c: BigInt,
        m: BigInt,
        /// Solutions generated per orbit.
        #[arg(long, default_value_t = 3)]
        count: usize,
    },
    /// The fundamental norm-one unit of discriminant delta.
    #[command(allow_negative_numbers = true)]
    Unit {
        delta: BigInt,
        /// Largest v tried.
        #[arg(long, default_value_t = DEFAULT_UNIT_SEARCH_CAP)]
        cap: u64,
    },
    /// Scans for nabc +- 1 dividing b^2 +- c^2. Exits 1 on any hit.
    Prop31 {
        #[arg(long, default_value_t = 2)]
        a_min: u64,
        #[arg(long, default_value_t = 8)]
        a_max: u64,
        #[arg(long, default_value_t = 30)]
        bc_max: u64,
        #[arg(long, value_parser = parse_range, default_value = "3..5")]
        n: RangeInclusive<u64>,
    },
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// Comma-separated families; all by default.
    #[arg(long, value_delimiter = ',')]
    families: Option<Vec<KnotFamily>>,
    #[arg(long, default_value_t = 500)]
    order_max: u64,
    /// Comma-separated torus slope denominators; 1..16 by default.
    #[arg(long, value_delimiter = ',')]
    denominators: Option<Vec<u64>>,
    #[arg(long)]
    torus_max: Option<u64>,
    #[arg(long)]
    cable_max: Option<u64>,
    #[arg(long)]
    kplus_max: Option<u64>,
    #[arg(long)]
    tangle_max: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
    /// Write the records as JSON lines to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

/// Parses `a..b` or `a..=b` as an inclusive range.
fn parse_range(s: &str) -> Result<RangeInclusive<u64>, String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected a..b, got {s:?}"))?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let parse = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("{t:?}: {e}"));
    let (lo, hi) = (parse(lo)?, parse(hi)?);
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok(lo..=hi)
}

struct Output {
    format: Format,
    out: std::io::StdoutLock<'static>,
}

impl Output {
    fn emit(&mut self, text: impl AsRef<str>, value: Value) -> Result<()> {
        match self.format {
            Format::Text => writeln!(self.out, "{}", text.as_ref())?,
            Format::Jsonl => writeln!(self.out, "{value}")?,
        }
        Ok(())
    }
}

#[derive(Debug, PartialEq, Eq)]
enum Status {
    Ok,
    Failed,
}

impl Status {
    fn from_ok(ok: bool) -> Self {
        if ok {
            Status::Ok
        } else {
            Status::Failed
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let mut out = Output {
        format: cli.format,
        out: std::io::stdout().lock(),
    };
    match run(cli.command, &mut out) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(EXIT_FAILED),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(command: Command, out: &mut Output) -> Result<Status> {
    match command {
        Command::Surgery {
            family,
            params,
            slope,
        } => surgery(out, family, &params, slope),
        Command::Homeo {
            p1,
            q1,
            p2,
            q2,
            oriented,
        } => homeo(out, p1, q1, p2, q2, oriented),
        Command::Dual { a, b, timeout } => {
            let triple = kplus_dual(&a, &b)?;
            dual_stats(out, &triple, timeout, Some(format!("kplus({a},{b})")))
        }
        Command::Phi { p, q, k, timeout } => {
            dual_stats(out, &DualKnotTriple::new(p, q, k)?, timeout, None)
        }
        Command::Bqf { command } => bqf(out, command),
        Command::Identities { range, identity } => identities(out, range, identity),
        Command::Verify { family, range } => {
            let report = verify_family(family, range)?;
            for c in &report.checks {
                let value = json!({
                    "status": if c.passed { "PASS" } else { "FAIL" },
                    "name": c.family.tag(),
                    "n": c.n,
                    "witness": c.witness,
                    "reason": c.failure,
                });
                out.emit(c.to_string(), value)?;
            }
            let passed = report.checks.iter().filter(|c| c.passed).count();
            let value = json!({
                "summary": report.family.tag(),
                "checked": report.checks.len(),
                "passed": passed,
                "failed": report.checks.len() - passed,
            });
            out.emit(report.summary(), value)?;
            Ok(Status::from_ok(report.passed()))
        }
        Command::Nonintegral { p_max, n } => {
            let report = verify_no_nonintegral_pairs(p_max, *n.start(), *n.end())?;
            for v in &report.violations {
                out.emit(
                    format!("FAIL nonintegral {v}"),
                    json!({"status": "FAIL", "case": v.to_string()}),
                )?;
            }
            let ok = report.violations.is_empty();
            let text = format!(
                "SUMMARY nonintegral p_max={p_max} n={}..{} checked={} violations={}",
                n.start(),
                n.end(),
                report.tuples_checked,
                report.violations.len()
            );
            let value = json!({
                "summary": "nonintegral",
                "checked": report.tuples_checked,
                "violations": report.violations.len(),
            });
            out.emit(text, value)?;
            Ok(Status::from_ok(ok))
        }
        Command::Search(args) => search(out, args),
    }
}

fn lens_json(l: &LensSpace) -> Value {
    json!({"p": json_int(l.p()), "q": json_int(l.q())})
}

fn surgery(
    out: &mut Output,
    family: KnotFamily,
    params: &[BigInt],
    slope: Option<Slope>,
) -> Result<Status> {
    let knot = Knot::from_params(family, params)?;
    let slope = match slope.or_else(|| natural_slope(&knot)) {
        Some(s) => s,
        None => bail!("{family} knots need --slope"),
    };
    let result = lens_surgery(&knot, &slope);
    let mut value = json!({"knot": knot.to_string(), "slope": slope.to_string()});
    match &result {
        SurgeryResult::Lens(l) => {
            let class = l.canonical_form();
            value["result"] = json!("lens");
            value["lens"] = lens_json(l);
            value["canonical"] = json!({"p": json_int(&class.p), "q_min": json_int(&class.q_min)});
        }
        SurgeryResult::ReducibleTwoLens { p, q } => {
            value["result"] = json!("reducible");
            value["summands"] = json!([[json_int(p), json_int(q)], [json_int(q), json_int(p)]]);
        }
        SurgeryResult::NotLens { reason, note } => {
            value["result"] = json!("not-lens");
            value["reason"] = json!(reason.tag());
            value["note"] = json!(note);
        }
    }
    out.emit(result.to_string(), value)?;
    Ok(Status::Ok)
}

fn homeo(
    out: &mut Output,
    p1: BigInt,
    q1: BigInt,
    p2: BigInt,
    q2: BigInt,
    oriented: bool,
) -> Result<Status> {
    let (l1, l2) = (LensSpace::new(p1, q1)?, LensSpace::new(p2, q2)?);
    let (yes, label) = if oriented {
        (oriented_homeomorphic(&l1, &l2), "oriented-homeomorphic")
    } else {
        (homeomorphic(&l1, &l2), "homeomorphic")
    };
    let text = if yes {
        label.to_owned()
    } else {
        format!("not-{label}")
    };
    let value = json!({
        "first": lens_json(&l1),
        "second": lens_json(&l2),
        "oriented": oriented,
        "homeomorphic": yes,
    });
    out.emit(text, value)?;
    Ok(Status::from_ok(yes))
}

fn dual_stats(
    out: &mut Output,
    triple: &DualKnotTriple,
    timeout: Timeout,
    knot: Option<String>,
) -> Result<Status> {
    let cancel = Arc::new(AtomicBool::new(false));
    if let Some(secs) = timeout.timeout {
        let flag = Arc::clone(&cancel);
        std::thread::spawn(move || {
            std::thread::sleep(Duration::from_secs(secs));
            flag.store(true, Ordering::Relaxed);
        });
    }
    let stats = match basic_stats_cancellable(triple, &cancel) {
        Ok(s) => s,
        Err(DualError::Cancelled) => {
            eprintln!("basic sequence scan timed out");
            return Ok(Status::Failed);
        }
        Err(e) => return Err(e.into()),
    };
    let BasicSequenceStats {
        h,
        s,
        ell,
        s_prime,
        ell_prime,
        phi,
    } = &stats;
    let hyperbolic = stats.is_hyperbolic();
    let mut text = String::new();
    if let Some(k) = &knot {
        text.push_str(&format!("{k}\n"));
    }
    text.push_str(&format!(
        "p={} q={} k={}\nh={h} s={s} ell={ell} s'={s_prime} ell'={ell_prime}\nPhi={phi} {}",
        triple.p(),
        triple.q(),
        triple.k(),
        if hyperbolic {
            "hyperbolic"
        } else {
            "not-certified-hyperbolic"
        }
    ));
    let value = json!({
        "knot": knot,
        "p": json_int(triple.p()),
        "q": json_int(triple.q()),
        "k": json_int(triple.k()),
        "h": json_int(h),
        "s": json_int(s),
        "ell": json_int(ell),
        "s_prime": json_int(s_prime),
        "ell_prime": json_int(ell_prime),
        "phi": json_int(phi),
        "hyperbolic": hyperbolic,
    });
    out.emit(text, value)?;
    Ok(Status::Ok)
}

fn bqf(out: &mut Output, command: BqfCommand) -> Result<Status> {
    match command {
        BqfCommand::Solve { a, b, c, m, count } => {
            let form = QuadForm::new(a, b, c)?;
            let bound = bound_u(&form, &m)?;
            let tau = lensknot::bqf::fundamental_unit(form.delta())?;
            let reps = orbit_representatives(&form, &m)?;
            let sols = generate_solutions(&form, &m, count)?;
            let pairs = |v: &[lensknot::bqf::FormSolution]| -> Vec<Value> {
                v.iter()
                    .map(|s| json!([json_int(&s.x), json_int(&s.y)]))
                    .collect()
            };
            let list = |v: &[lensknot::bqf::FormSolution]| {
                v.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            let text = format!(
                "form {form} = {m}\ndelta={} tau={tau}\nU^2={} floor(U)={}\nrepresentatives: {}\nsolutions: {}",
                form.delta(),
                bound.u_squared,
                bound.floor,
                list(&reps),
                list(&sols)
            );
            let value = json!({
                "form": [json_int(form.a()), json_int(form.b()), json_int(form.c())],
                "m": json_int(&m),
                "delta": json_int(form.delta()),
                "tau": [json_int(&tau.u), json_int(&tau.v)],
                "u_squared": bound.u_squared.to_string(),
                "u_floor": json_int(&bound.floor),
                "representatives": pairs(&reps),
                "solutions": pairs(&sols),
            });
            out.emit(text, value)?;
            Ok(Status::Ok)
        }
        BqfCommand::Unit { delta, cap } => {
            let tau = fundamental_unit_with_cap(&delta, cap)?;
            let value =
                json!({"delta": json_int(&delta), "u": json_int(&tau.u), "v": json_int(&tau.v)});
            out.emit(format!("u={} v={}", tau.u, tau.v), value)?;
            Ok(Status::Ok)
        }
        BqfCommand::Prop31 {
            a_min,
            a_max,
            bc_max,
            n,
        } => {
            if a_min > a_max {
                bail!("--a-min must not exceed --a-max");
            }
            let report = divisibility_scan(a_min..=a_max, 1..=bc_max, 1..=bc_max, n.clone())?;
            for hit in &report.counterexamples {
                let value = json!({
                    "status": "FAIL",
                    "a": hit.a, "b": hit.b, "c": hit.c, "n": hit.n,
                    "square_sign": hit.square_sign, "divisor_sign": hit.divisor_sign,
                });
                out.emit(format!("FAIL {hit}"), value)?;
            }
            let text = format!(
                "SUMMARY prop31 a={a_min}..{a_max} b,c=1..{bc_max} n={}..{} checked={} counterexamples={}",
                n.start(),
                n.end(),
                report.tuples_checked,
                report.counterexamples.len()
            );
            let value = json!({
                "summary": "prop31",
                "checked": report.tuples_checked,
                "counterexamples": report.counterexamples.len(),
            });
            out.emit(text, value)?;
            Ok(Status::from_ok(report.counterexamples.is_empty()))
        }
    }
}

fn identities(out: &mut Output, range: u64, only: Option<Identity>) -> Result<Status> {
    let mut all_ok = true;
    for id in Identity::ALL
        .into_iter()
        .filter(|id| only.map_or(true, |o| o == *id))
    {
        let lo = id.min_index();
        if range < lo {
            bail!("--range {range} is below the first index {lo} of {id}");
        }
        let mut failures = Vec::new();
        for n in lo..=range {
            if !check_identity(id, n)? {
                failures.push(n);
            }
        }
        let ok = failures.is_empty();
        all_ok &= ok;
        let status = if ok { "PASS" } else { "FAIL" };
        let mut text = format!("{status} {id} n={lo}..{range}");
        if !ok {
            text.push_str(&format!(" failing={failures:?}"));
        }
        let value = json!({"status": status, "name": id.tag(), "from": lo, "to": range, "failing": failures});
        out.emit(text, value)?;
    }
    Ok(Status::from_ok(all_ok))
}

fn search(out: &mut Output, args: SearchArgs) -> Result<Status> {
    let mut config = SearchConfig::covering(args.order_max).with_workers(args.workers);
    if let Some(families) = args.families {
        config = config.with_families(families);
    }
    if let Some(d) = args.denominators {
        config = config.with_denominators(d);
    }
    let overrides = [
        (args.torus_max, &mut config.torus_max),
        (args.cable_max, &mut config.cable_max),
        (args.kplus_max, &mut config.kplus_max),
        (args.tangle_max, &mut config.tangle_max),
    ];
    for (value, slot) in overrides {
        if let Some(v) = value {
            *slot = v;
        }
    }
    let records = find_coincidences(&config)?;
    if let Some(path) = &args.out {
        let file =
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
        let mut w = BufWriter::new(file);
        for r in &records {
            writeln!(w, "{}", r.to_json_line())?;
        }
        w.flush()?;
    }
    for r in &records {
        out.emit(r.to_string(), r.to_json())?;
    }
    let summary = summarize(&records);
    let value = json!({
        "summary": "search",
        "records": summary.records,
        "certified": summary.certified,
        "distinct_unknown": summary.distinct_unknown,
        "max_multiplicity": summary.max_multiplicity,
    });
    out.emit(
        format!("SUMMARY search order_max={} {summary}", config.order_max),
        value,
    )?;
    // three or more inequivalent knots in one group would answer the open question
    Ok(Status::from_ok(summary.max_multiplicity <= 2))
}
