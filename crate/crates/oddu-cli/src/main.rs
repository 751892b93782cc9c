//! `oddu`: batch front end over oddu-core. Reports go to stdout (or --out) as JSON;
//! timings go to stderr so reports stay byte-identical for a fixed seed.

use clap::{Parser, Subcommand, ValueEnum};
use oddu_core::extraction::{
    extract_linear, extract_q0, extract_step, extract_v0_defect, level_of, sandwich_certificate, Extraction, LinearKind,
};
use oddu_core::group::{is_unitary, unitary_failure, UElem};
use oddu_core::ideals::{
    cu_max_failure, in_full_congruence, in_normalizer, principal_failure, OddFormIdeal,
};
use oddu_core::io::{
    build_space, form_ideal_to_json, parse_element, parse_form_ideal, parse_json, parse_ring_arg, read_file, V0Spec,
};
use oddu_core::quadratic::{Idx, OddQuadSpace};
use oddu_core::selftest::{run_criterion, CRITERIA};
use oddu_core::transvections::relations::{relation_suite_with_fault, Fault, SuiteMode};
use oddu_core::OdduError;
use serde_json::{json, Value};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(name = "oddu", version, about = "Odd unitary groups over Z/m: relations, membership, extraction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Ring: zmod:m:lambda, inline JSON, or a JSON file.
    #[arg(long, global = true, default_value = "zmod:4:1")]
    ring: String,
    /// Hyperbolic rank.
    #[arg(long, global = true, default_value_t = 3)]
    n: usize,
    /// V0 JSON file, or `none` for V0 = 0.
    #[arg(long, global = true, default_value = "none")]
    v0: String,
    /// Form ideal JSON file.
    #[arg(long, global = true)]
    ideal: Option<PathBuf>,
    /// Element JSON file.
    #[arg(long, global = true)]
    element: Option<PathBuf>,
    /// Command-specific mode (see each command's help).
    #[arg(long, global = true)]
    mode: Option<String>,
    /// Comma-separated integers, e.g. 2,3,1,-2.
    #[arg(long, global = true, allow_hyphen_values = true)]
    indices: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 200)]
    samples: usize,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the relation suite. --mode exhaustive|sampled (default sampled).
    VerifyRelations {
        #[arg(long, hide = true, value_enum)]
        inject_fault: Option<FaultArg>,
    },
    /// Membership predicate. --mode unitary|principal|normalizer|cu-max|full-congruence.
    Member,
    /// Word of σ-conjugates for a transvection. --mode step|entry|antidiag|zero-column|
    /// zero-row|diag-diff|diag-diff-opp|q0|v0-defect, parameters in --indices.
    Extract,
    /// Level of the normal closure of the element.
    Level,
    /// Sandwich certificate for the element.
    Sandwich,
    /// Acceptance criteria; --indices selects criterion ids (default all).
    Selftest,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FaultArg {
    R1,
}

/// A failed run: exit code and a message for stderr, plus a report when one is meaningful.
struct Failure {
    code: u8,
    message: String,
    report: Option<Value>,
}

impl From<OdduError> for Failure {
    fn from(e: OdduError) -> Self {
        let code = match e {
            OdduError::NotUnitary
            | OdduError::NotInvertible
            | OdduError::PreconditionViolated(_)
            | OdduError::PayloadNotInFormParameter { .. }
            | OdduError::NotInIdeal(_)
            | OdduError::NotAUnit { .. } => 1,
            _ => 2,
        };
        let report = (code == 1).then(|| json!({ "status": "fail", "error": e.to_string() }));
        Failure { code, message: e.to_string(), report }
    }
}

fn config_err(msg: impl Into<String>) -> Failure {
    Failure { code: 2, message: msg.into(), report: None }
}

type Outcome = std::result::Result<(Value, bool), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let res = run(&cli);
    eprintln!("elapsed {:.2}s", start.elapsed().as_secs_f64());
    let (report, code, message) = match res {
        Ok((report, ok)) => (Some(report), u8::from(!ok), None),
        Err(f) => (f.report, f.code, Some(f.message)),
    };
    if let Some(m) = message {
        eprintln!("error: {m}");
    }
    if let Some(r) = report {
        let text = format!("{}\n", serde_json::to_string_pretty(&r).expect("report serializes"));
        if let Err(e) = emit(cli.out.as_deref(), &text) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}

fn emit(out: Option<&Path>, text: &str) -> std::io::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text),
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            r => r,
        },
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::VerifyRelations { inject_fault } => verify_relations(cli, *inject_fault),
        Command::Member => member(cli),
        Command::Extract => extract(cli),
        Command::Level => level(cli),
        Command::Sandwich => sandwich(cli),
        Command::Selftest => selftest(cli),
    }
}

fn space(cli: &Cli) -> Result<OddQuadSpace, Failure> {
    let ring = parse_ring_arg(&cli.ring)?;
    let v0 = if cli.v0 == "none" {
        None
    } else {
        Some(parse_json::<V0Spec>(&read_file(Path::new(&cli.v0))?, "v0")?)
    };
    Ok(build_space(ring, cli.n, v0.as_ref())?)
}

fn element(cli: &Cli, s: &OddQuadSpace) -> Result<UElem, Failure> {
    let path = cli.element.as_ref().ok_or_else(|| config_err("--element is required"))?;
    Ok(parse_element(s, &read_file(path)?)?)
}

fn form_ideal(cli: &Cli, s: &OddQuadSpace) -> Result<OddFormIdeal, Failure> {
    let path = cli.ideal.as_ref().ok_or_else(|| config_err("--ideal is required"))?;
    Ok(parse_form_ideal(s, &read_file(path)?)?)
}

fn indices(cli: &Cli) -> Result<Vec<i64>, Failure> {
    let Some(list) = &cli.indices else { return Ok(Vec::new()) };
    list.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| config_err(format!("bad --indices entry {t:?}"))))
        .collect()
}

fn ring_json(s: &OddQuadSpace) -> Value {
    json!({ "type": "zmod", "modulus": s.ring().modulus(), "lambda": s.ring().lambda() })
}

fn verify_relations(cli: &Cli, fault: Option<FaultArg>) -> Outcome {
    let s = space(cli)?;
    let mode_name = cli.mode.as_deref().unwrap_or("sampled");
    let mode = match mode_name {
        "exhaustive" => SuiteMode::Exhaustive,
        "sampled" => SuiteMode::Sampled { seed: cli.seed, count: cli.samples },
        other => return Err(config_err(format!("unknown relation mode {other:?}"))),
    };
    let fault = match fault {
        Some(FaultArg::R1) => Fault::R1Product,
        None => Fault::None,
    };
    let report = relation_suite_with_fault(&s, mode, fault);
    let ok = report.all_pass();
    let out = json!({
        "command": "verify-relations",
        "ring": ring_json(&s),
        "n": s.n(),
        "rank": s.rank(),
        "mode": mode_name,
        "seed": cli.seed,
        "samples": cli.samples,
        "status": if ok { "pass" } else { "fail" },
        "relations": report.entries,
    });
    Ok((out, ok))
}

fn member(cli: &Cli) -> Outcome {
    let s = space(cli)?;
    let sigma = element(cli, &s)?;
    let predicate = cli.mode.as_deref().ok_or_else(|| config_err("--mode <predicate> is required"))?;
    // every predicate other than `unitary` presupposes a unitary element
    if predicate != "unitary" && !is_unitary(&s, &sigma)? {
        let cond = unitary_failure(&s, &sigma)?.map(|c| c.label());
        let out = json!({
            "command": "member",
            "predicate": predicate,
            "status": "fail",
            "error": "element is not unitary",
            "failed_condition": cond,
        });
        return Ok((out, false));
    }
    let failed: Option<&str> = match predicate {
        "unitary" => unitary_failure(&s, &sigma)?.map(|c| c.label()),
        "principal" => principal_failure(&s, &sigma, &form_ideal(cli, &s)?)?.map(|c| c.label()),
        "normalizer" => (!in_normalizer(&s, &sigma, &form_ideal(cli, &s)?)?).then_some("normalizer"),
        "cu-max" => {
            let ideal = form_ideal(cli, &s)?.ideal;
            cu_max_failure(&s, &sigma, ideal)?.map(|c| c.label())
        }
        "full-congruence" => {
            (!in_full_congruence(&s, &sigma, &form_ideal(cli, &s)?)?).then_some("full-congruence")
        }
        other => return Err(config_err(format!("unknown predicate {other:?}"))),
    };
    let ok = failed.is_none();
    let out = json!({
        "command": "member",
        "predicate": predicate,
        "status": if ok { "pass" } else { "fail" },
        "failed_condition": failed,
    });
    Ok((out, ok))
}

fn want<T>(ix: &[T], n: usize, usage: &str) -> Result<(), Failure> {
    if ix.len() != n {
        return Err(config_err(format!("--indices expects {usage}")));
    }
    Ok(())
}

fn residues(s: &OddQuadSpace, xs: &[i64]) -> Vec<u64> {
    xs.iter().map(|&x| s.ring().reduce(x)).collect()
}

fn extract(cli: &Cli) -> Outcome {
    let s = space(cli)?;
    let sigma = element(cli, &s)?;
    let raw = indices(cli)?;
    let ix: Vec<Idx> = raw.iter().map(|&v| Idx::try_from(v).unwrap_or(Idx::MAX)).collect();
    let mode = cli.mode.as_deref().ok_or_else(|| config_err("--mode is required"))?;
    let r = s.rank();
    let linear = |kind: LinearKind, k: Idx, l: Idx| extract_linear(&s, &sigma, &kind, k, l, 1);
    let ex: Extraction = match mode {
        "step" => {
            want(&ix, 2, "step,x")?;
            let step = u8::try_from(ix[0]).map_err(|_| config_err("step must be 1, 2 or 3"))?;
            extract_step(&s, &sigma, step, s.ring().reduce(raw[1]))?
        }
        "entry" => {
            want(&ix, 4, "i,j,k,l")?;
            linear(LinearKind::Entry { i: ix[0], j: ix[1] }, ix[2], ix[3])?
        }
        "antidiag" => {
            want(&ix, 3, "i,k,l")?;
            linear(LinearKind::AntiDiag { i: ix[0] }, ix[1], ix[2])?
        }
        "zero-column" => {
            want(&ix, 3 + r, "i,k,l followed by the V0 coordinates")?;
            linear(LinearKind::ZeroColumn { v0: residues(&s, &raw[3..]), i: ix[0] }, ix[1], ix[2])?
        }
        "zero-row" => {
            want(&ix, 3 + r, "j,k,l followed by the V0 coordinates")?;
            linear(LinearKind::ZeroRow { v0: residues(&s, &raw[3..]), j: ix[0] }, ix[1], ix[2])?
        }
        "diag-diff" => {
            want(&ix, 4, "i,j,k,l")?;
            linear(LinearKind::DiagDiff { i: ix[0], j: ix[1] }, ix[2], ix[3])?
        }
        "diag-diff-opp" => {
            want(&ix, 3, "i,k,l")?;
            linear(LinearKind::DiagDiffOpp { i: ix[0] }, ix[1], ix[2])?
        }
        "q0" => {
            want(&ix, 2, "j,k")?;
            extract_q0(&s, &sigma, ix[0], ix[1])?
        }
        "v0-defect" => {
            want(&ix, 2 + r, "j,k followed by the V0 coordinates")?;
            extract_v0_defect(&s, &sigma, &residues(&s, &raw[2..]), ix[0], ix[1])?
        }
        other => return Err(config_err(format!("unknown extraction mode {other:?}"))),
    };
    let ok = ex.verified;
    let out = serde_json::to_value(&ex).expect("extraction serializes");
    Ok((out, ok))
}

fn level(cli: &Cli) -> Outcome {
    let s = space(cli)?;
    let sigma = element(cli, &s)?;
    let j0 = level_of(&s, &sigma)?;
    Ok((form_ideal_to_json(&s, &j0), true))
}

fn sandwich(cli: &Cli) -> Outcome {
    let s = space(cli)?;
    let sigma = element(cli, &s)?;
    let cert = sandwich_certificate(&s, &sigma)?;
    let ok = cert.checks.all();
    let out = json!({
        "level": form_ideal_to_json(&s, &cert.level),
        "checks": cert.checks,
        "words": cert.words,
    });
    Ok((out, ok))
}

fn selftest(cli: &Cli) -> Outcome {
    let ids: Vec<u8> = if cli.indices.is_none() {
        CRITERIA.iter().map(|c| c.0).collect()
    } else {
        indices(cli)?
            .into_iter()
            .map(|i| {
                u8::try_from(i)
                    .ok()
                    .filter(|i| CRITERIA.iter().any(|c| c.0 == *i))
                    .ok_or_else(|| config_err(format!("no criterion {i}")))
            })
            .collect::<Result<_, _>>()?
    };
    let mut results = Vec::new();
    let mut ok = true;
    for id in ids {
        let t = Instant::now();
        let res = run_criterion(id, cli.seed)?;
        let secs = t.elapsed().as_secs_f64();
        let in_budget = secs <= res.budget as f64;
        eprintln!("criterion {id}: {} in {secs:.2}s (budget {}s)", if res.passed { "pass" } else { "fail" }, res.budget);
        ok &= res.passed && in_budget;
        results.push(res);
    }
    let out = json!({
        "command": "selftest",
        "seed": cli.seed,
        "status": if ok { "pass" } else { "fail" },
        "criteria": results,
    });
    Ok((out, ok))
}
