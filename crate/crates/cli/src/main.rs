use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use amalgam_core::certificate::{
    check_record, derived_record, element_expr, escape_record, CertificateRecord,
};
use amalgam_core::expr::parse_word;
use amalgam_core::hom::{DefaultHom, LevelwiseHom, Phi};
use amalgam_core::instances::{
    check_conformance, make_instance, InstanceDescriptor, InstanceKind, DEFAULT_CYCLIC_LENGTH,
};
use amalgam_core::suites::{
    axioms_suite, centrality_suite, hom_suite, lemma21_suite, oracle_suite, SuiteReport, MAX_LEVEL,
};
use amalgam_core::witness::{derived_escape, escape_witness};
use amalgam_core::{with_instance, Amalgam, Error, FactorSystem, GroupElement};
use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

const DEFAULT_SEED: u64 = 0x5eed;

/// Exit codes.
const EXIT_FALSE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;
const EXIT_INVALID: u8 = 4;

#[derive(Parser)]
#[command(
    name = "amalgam",
    version,
    about = "Normal forms in iterated central amalgams"
)]
struct Cli {
    /// Prime p of the instance.
    #[arg(long, global = true, default_value_t = 5)]
    prime: u64,
    /// dense, heisenberg or cyclic.
    #[arg(long, global = true, default_value = "dense")]
    instance: InstanceKind,
    /// Exponent L of the cyclic instance Z/p^L.
    #[arg(long, global = true, default_value_t = DEFAULT_CYCLIC_LENGTH)]
    length: u32,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Emit a JSON envelope instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Report elapsed_ms as 0 so JSON output is reproducible.
    #[arg(long, global = true)]
    stable: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical form and level of an expression.
    Reduce {
        expr: String,
    },
    /// Exit 0 if both expressions denote the same element, 1 otherwise.
    Eq {
        left: String,
        right: String,
    },
    Level {
        expr: String,
    },
    Phi {
        expr: String,
    },
    Psi {
        expr: String,
    },
    #[command(subcommand)]
    Witness(WitnessCommand),
    #[command(subcommand)]
    Check(CheckCommand),
    /// Replay a certificate file.
    Verify {
        file: PathBuf,
    },
}

#[derive(Subcommand)]
enum WitnessCommand {
    /// A conjugate of H outside G_K.
    Escape {
        #[arg(long)]
        h: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// An iterated commutator of depth D outside G_K.
    Derived {
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CheckCommand {
    Lemma21 {
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    Axioms {
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    Oracle {
        #[arg(long, default_value_t = 1_000)]
        samples: usize,
    },
    Centrality {
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    Hom {
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Conformance of the instance to the factor-system contract.
    Instance {
        #[arg(long, default_value_t = MAX_LEVEL)]
        levels: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Reduce { .. } => "reduce",
            Command::Eq { .. } => "eq",
            Command::Level { .. } => "level",
            Command::Phi { .. } => "phi",
            Command::Psi { .. } => "psi",
            Command::Witness(WitnessCommand::Escape { .. }) => "witness escape",
            Command::Witness(WitnessCommand::Derived { .. }) => "witness derived",
            Command::Check(CheckCommand::Lemma21 { .. }) => "check lemma21",
            Command::Check(CheckCommand::Axioms { .. }) => "check axioms",
            Command::Check(CheckCommand::Oracle { .. }) => "check oracle",
            Command::Check(CheckCommand::Centrality { .. }) => "check centrality",
            Command::Check(CheckCommand::Hom { .. }) => "check hom",
            Command::Check(CheckCommand::Instance { .. }) => "check instance",
            Command::Verify { .. } => "verify",
        }
    }
}

struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotPrime(_)
            | Error::Literal { .. }
            | Error::Syntax { .. }
            | Error::UnsupportedLevel { .. }
            | Error::InvalidParams(_) => EXIT_PARSE,
            Error::PreconditionViolated(_)
            | Error::IdentityInput
            | Error::RetryExhausted(_)
            | Error::IncompatibleHom(_)
            | Error::NoMatrixEmbedding => EXIT_PRECONDITION,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

/// A command's result: JSON payload, text rendering and exit code.
struct Output {
    result: Value,
    text: String,
    code: u8,
    instance: Option<InstanceDescriptor>,
}

impl Output {
    fn ok(result: Value, text: impl Into<String>) -> Self {
        Output {
            result,
            text: text.into(),
            code: 0,
            instance: None,
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    command: &'a str,
    instance: InstanceKind,
    prime: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    length: Option<u32>,
    result: &'a Value,
    elapsed_ms: u64,
}

fn element<S: FactorSystem>(am: &Amalgam<S>, src: &str) -> Result<GroupElement<S::Elem>, Failure> {
    Ok(am.reduce(&parse_word(src, am.system())?)?)
}

fn write_out(path: &PathBuf, rec: &CertificateRecord) -> Result<(), Failure> {
    fs::write(path, rec.to_json() + "\n").map_err(|e| Failure {
        code: EXIT_PARSE,
        msg: format!("cannot write {}: {e}", path.display()),
    })
}

fn certificate_output(rec: CertificateRecord, out: &Option<PathBuf>) -> Result<Output, Failure> {
    let text = match out {
        Some(path) => {
            write_out(path, &rec)?;
            format!(
                "wrote {}: level(result) = {} > k = {}",
                path.display(),
                rec.result.level,
                rec.k
            )
        }
        None => rec.to_json(),
    };
    let value = serde_json::to_value(&rec).expect("record serializes");
    Ok(Output::ok(value, text))
}

fn suite_output(reports: Vec<SuiteReport>) -> Output {
    let mut lines = Vec::new();
    for r in &reports {
        lines.push(format!(
            "{} {}: {} samples, {} failures [{}]",
            r.suite,
            r.instance,
            r.samples,
            r.failures,
            if r.passed() { "ok" } else { "FAILED" }
        ));
        if let Some(f) = &r.first_failure {
            lines.push(format!("  first failure: {f}"));
        }
    }
    let passed = reports.iter().all(SuiteReport::passed);
    Output {
        result: serde_json::to_value(&reports).expect("reports serialize"),
        text: lines.join("\n"),
        code: if passed { 0 } else { EXIT_FALSE },
        instance: None,
    }
}

fn run<S>(am: &Amalgam<S>, cli: &Cli) -> Result<Output, Failure>
where
    S: DefaultHom,
    <S::Hom as LevelwiseHom<S>>::Value: Send,
    S::Hom: Sync,
{
    let seed = cli.seed;
    let phi = || Phi::new(am, am.system().default_hom(), MAX_LEVEL, 64, seed);
    Ok(match &cli.command {
        Command::Reduce { expr } => {
            let g = element(am, expr)?;
            let form = am.format(&g);
            Output::ok(
                json!({
                    "canonical": form,
                    "expr": element_expr(am, &g),
                    "level": g.level(),
                }),
                format!("{form}, level={}", g.level()),
            )
        }
        Command::Eq { left, right } => {
            let equal = am.eq(&element(am, left)?, &element(am, right)?);
            Output {
                code: if equal { 0 } else { EXIT_FALSE },
                ..Output::ok(json!(equal), equal.to_string())
            }
        }
        Command::Level { expr } => {
            let level = element(am, expr)?.level();
            Output::ok(json!(level), level.to_string())
        }
        Command::Phi { expr } => {
            let g = element(am, expr)?;
            let phi = phi()?;
            let v = phi.hom().format_value(&phi.eval(&g));
            Output::ok(json!(v), v)
        }
        Command::Psi { expr } => {
            let g = element(am, expr)?;
            let m = phi()?.psi(&g)?;
            let rows = [[&m.a, &m.b], [&m.c, &m.d]].map(|r| r.map(ToString::to_string));
            Output::ok(json!(rows), m.to_string())
        }
        Command::Witness(WitnessCommand::Escape { h, k, out }) => {
            let h = element(am, h)?;
            let cert = escape_witness(am, &h, *k)?;
            certificate_output(escape_record(am, &cert, seed), out)?
        }
        Command::Witness(WitnessCommand::Derived { depth, k, out }) => {
            let cert = derived_escape(am, *depth, *k)?;
            certificate_output(derived_record(am, &cert, seed), out)?
        }
        Command::Check(CheckCommand::Lemma21 { samples }) => {
            suite_output(vec![lemma21_suite(am, *samples, seed)])
        }
        Command::Check(CheckCommand::Axioms { samples }) => {
            suite_output(vec![axioms_suite(am, *samples, seed)])
        }
        Command::Check(CheckCommand::Oracle { samples }) => {
            suite_output(vec![oracle_suite(am, *samples, seed)])
        }
        Command::Check(CheckCommand::Centrality { samples }) => {
            suite_output(vec![centrality_suite(am, *samples, seed)])
        }
        Command::Check(CheckCommand::Hom { samples }) => {
            let report = hom_suite(am, *samples, (*samples / 10).max(1), seed)?;
            suite_output(report.reports().into_iter().cloned().collect())
        }
        Command::Check(CheckCommand::Instance { levels, samples }) => {
            let r = check_conformance(am.system(), *levels, *samples, seed);
            let mut text = format!(
                "instance {}: {} checks, {} failures [{}]",
                am.system().descriptor(),
                r.checks,
                r.failures.len(),
                if r.passed() { "ok" } else { "FAILED" }
            );
            for f in &r.failures {
                text.push_str(&format!("\n  {f}"));
            }
            Output {
                code: if r.passed() { 0 } else { EXIT_FALSE },
                ..Output::ok(serde_json::to_value(&r).expect("report serializes"), text)
            }
        }
        Command::Verify { .. } => unreachable!("handled before instance dispatch"),
    })
}

fn verify(file: &PathBuf) -> Result<Output, Failure> {
    let src = fs::read_to_string(file).map_err(|e| Failure {
        code: EXIT_PARSE,
        msg: format!("cannot read {}: {e}", file.display()),
    })?;
    let rec = CertificateRecord::from_json(&src)?;
    let outcome = check_record(&rec);
    let (text, code) = match &outcome {
        Ok(()) => ("valid".to_string(), 0),
        Err(reason) => (format!("invalid: {reason}"), EXIT_INVALID),
    };
    Ok(Output {
        result: json!({ "valid": outcome.is_ok(), "reason": outcome.err() }),
        text,
        code,
        instance: Some(rec.descriptor()),
    })
}

fn descriptor(cli: &Cli) -> InstanceDescriptor {
    InstanceDescriptor {
        kind: cli.instance,
        prime: cli.prime,
        length: (cli.instance == InstanceKind::Cyclic).then_some(cli.length),
    }
}

fn execute(cli: &Cli) -> Result<Output, Failure> {
    if let Command::Verify { file } = &cli.command {
        return verify(file);
    }
    let inst = make_instance(&descriptor(cli))?;
    with_instance!(inst, sys => run(&Amalgam::new(sys), cli))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = execute(&cli);
    let elapsed_ms = if cli.stable {
        0
    } else {
        start.elapsed().as_millis() as u64
    };
    match outcome {
        Ok(out) => {
            if cli.json {
                let desc = out.instance.unwrap_or_else(|| descriptor(&cli));
                let env = Envelope {
                    command: cli.command.name(),
                    instance: desc.kind,
                    prime: desc.prime,
                    length: desc.length,
                    result: &out.result,
                    elapsed_ms,
                };
                println!(
                    "{}",
                    serde_json::to_string(&env).expect("envelope serializes")
                );
            } else {
                println!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
