use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bincover::codec::{decode_advice, encode_advice, read_tape, write_tape, TapeCursor};
use bincover::generators::{
    random_instance, tightness_certificate, tightness_family, worked_example,
    worked_example_certificate, RandomSpec,
};
use bincover::harness::{
    resolve_opt, verify_bounds, write_csv, Family, OptKind, RunReport, VerifyOptions,
};
use bincover::model::{format_instance, normalize_sequence, read_instance, Normalized};
use bincover::opt::{Certificate, DEFAULT_SIZE_LIMIT};
use bincover::{compute_advice, AdvicePayload, BitString, Error, Rational, StrategyConfig};

const EXIT_USAGE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_VIOLATION: u8 = 3;
const EXIT_LIMIT: u8 = 4;

/// Online bin covering: strategies, advice oracle, exact optimum and bound checks.
#[derive(Parser)]
#[command(name = "bincover", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a strategy on an instance file.
    Run(RunArgs),
    /// Compute the advice (m, x_m) for an instance.
    Oracle(OracleArgs),
    /// Solve an instance exactly or check a certificate.
    Opt(OptArgs),
    /// Write a generated instance.
    Gen(GenArgs),
    /// Run the advised strategy over an instance family and check the competitive bounds.
    VerifyBounds(VerifyArgs),
    /// Encode an advice payload as a bit tape.
    EncodeAdvice(EncodeArgs),
    /// Decode an advice tape.
    DecodeAdvice(DecodeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyName {
    Dnf,
    Dh,
    Adh,
}

#[derive(Args)]
struct RunArgs {
    /// Instance file, or `builtin:example`.
    instance: String,
    #[arg(long, value_enum, default_value = "adh")]
    strategy: StrategyName,
    #[arg(long, default_value_t = 3)]
    k: u32,
    /// Read the advice from this tape instead of asking the oracle.
    #[arg(long, conflicts_with_all = ["m", "x"])]
    tape: Option<PathBuf>,
    /// Explicit number of critical bins (requires --x).
    #[arg(long, requires = "x")]
    m: Option<usize>,
    /// Explicit threshold x_m (requires --m).
    #[arg(long, requires = "m")]
    x: Option<Rational>,
    /// Optimal covering used to fill the opt column.
    #[arg(long)]
    certificate: Option<PathBuf>,
    /// Solve the optimum exactly up to this many items for the report.
    #[arg(long, default_value_t = DEFAULT_SIZE_LIMIT)]
    limit: usize,
    /// Append the report as a CSV row (with header) to this file.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    timing: bool,
    /// Do not print the covering.
    #[arg(long)]
    quiet: bool,
}

#[derive(Args)]
struct OracleArgs {
    instance: String,
    #[arg(long, default_value_t = 3)]
    k: u32,
    /// Write the advice tape here (`.bin` for the packed form).
    #[arg(long, visible_alias = "tape")]
    emit_tape: Option<PathBuf>,
}

#[derive(Args)]
struct OptArgs {
    instance: String,
    #[arg(long)]
    certificate: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SIZE_LIMIT)]
    limit: usize,
    /// Write the optimal covering here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    family: GenFamily,
    /// Output file; standard output when absent.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    /// Also write the known optimal covering (example and tightness only).
    #[arg(long, global = true)]
    certificate: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenFamily {
    /// The 28-item worked example.
    Example,
    /// N·r small items followed by N big items.
    Tightness {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "11/20")]
        big: Rational,
        #[arg(long, default_value = "9/100")]
        small: Rational,
    },
    /// Seeded uniform values on a grid j/D.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "1/20")]
        min: Rational,
        #[arg(long, default_value = "19/20")]
        max: Rational,
        #[arg(long, default_value_t = 100)]
        denominator: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyName {
    Example,
    Tightness,
    Random,
    Dir,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "random")]
    family: FamilyName,
    /// Comma-separated class counts.
    #[arg(long = "k", value_delimiter = ',', default_value = "2,3,4")]
    ks: Vec<u32>,
    /// Number of random instances.
    #[arg(long, default_value_t = 500)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    n_min: usize,
    #[arg(long, default_value_t = 12)]
    n_max: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated N values for the tightness family.
    #[arg(long = "n", value_delimiter = ',', default_value = "3,6,12,30,60")]
    ns: Vec<usize>,
    /// Instance directory for `--family dir`.
    #[arg(long)]
    dir: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SIZE_LIMIT)]
    limit: usize,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    timing: bool,
    /// Treat count-identity failures as violations.
    #[arg(long)]
    strict_identities: bool,
}

#[derive(Args)]
struct EncodeArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    x: Rational,
    #[arg(long)]
    tape: Option<PathBuf>,
}

#[derive(Args)]
struct DecodeArgs {
    /// Tape file (`.bin` for the packed form).
    #[arg(required_unless_present = "bits")]
    tape: Option<PathBuf>,
    /// Tape given inline as 0/1 characters.
    #[arg(long, conflicts_with = "tape")]
    bits: Option<BitString>,
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Usage(String),
    Violation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Lib(e.into())
    }
}

type CliResult = std::result::Result<(), Failure>;

struct Loaded {
    id: String,
    normalized: Normalized,
    certificate: Option<Certificate>,
}

fn load(instance: &str) -> Result<Loaded, Failure> {
    if let Some(name) = instance.strip_prefix("builtin:") {
        return match name {
            "example" => Ok(Loaded {
                id: "example".into(),
                normalized: normalize_sequence(
                    &worked_example().values().cloned().collect::<Vec<_>>(),
                )?,
                certificate: Some(worked_example_certificate()),
            }),
            _ => Err(Failure::Usage(format!("unknown builtin instance {name:?}"))),
        };
    }
    let path = Path::new(instance);
    let values = read_instance(path)?;
    Ok(Loaded {
        id: path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| instance.to_string()),
        normalized: normalize_sequence(&values)?,
        certificate: None,
    })
}

fn read_certificate(
    path: Option<&PathBuf>,
    fallback: Option<Certificate>,
) -> Result<Option<Certificate>, Failure> {
    Ok(match path {
        Some(p) => Some(Certificate::read(p)?),
        None => fallback,
    })
}

fn cmd_run(args: RunArgs) -> CliResult {
    let start = std::time::Instant::now();
    let loaded = load(&args.instance)?;
    let seq = &loaded.normalized.sequence;
    let config = match args.strategy {
        StrategyName::Dnf => StrategyConfig::Dnf,
        StrategyName::Dh => StrategyConfig::Dh { k: args.k },
        StrategyName::Adh => {
            let payload = if let Some(tape) = &args.tape {
                let bits = read_tape(tape)?;
                decode_advice(&mut TapeCursor::new(&bits))?
            } else if let (Some(m), Some(x)) = (args.m, args.x.clone()) {
                AdvicePayload::new(m, x)?
            } else {
                compute_advice(seq, args.k)?.payload()
            };
            StrategyConfig::AdviceDh {
                k: args.k,
                m: payload.m,
                x_m: payload.x_m,
            }
        }
    };
    let mut covering = config.run(seq)?;
    covering.absorb(&loaded.normalized);

    let certificate = read_certificate(args.certificate.as_ref(), loaded.certificate)?;
    // the optimum is stated for the normalized sequence; prepacked bins add to both sides
    let opt = if loaded.normalized.prepacked.is_empty() {
        Some(resolve_opt(seq, certificate.as_ref(), args.limit)?)
    } else {
        None
    };
    let mut report = RunReport::new(
        &loaded.id,
        seq.n(),
        &config,
        covering.covered_count,
        opt.as_ref(),
    );
    if args.timing {
        report.millis = Some(start.elapsed().as_millis());
    }

    let stdout = io::stdout();
    let mut out = stdout.lock();
    write!(out, "{report}")?;
    if !args.quiet {
        for bin in &covering.bins {
            let values: Vec<String> = bin.items.iter().map(|i| i.value.to_string()).collect();
            writeln!(
                out,
                "bin {} [{}] load {}: {}",
                bin.id,
                bin.kind,
                bin.load(),
                values.join(" ")
            )?;
        }
        if !covering.leftover.is_empty() {
            let values: Vec<String> = covering
                .leftover
                .iter()
                .map(|i| i.value.to_string())
                .collect();
            writeln!(out, "uncovered: {}", values.join(" "))?;
        }
    }
    if let Some(path) = &args.csv {
        write_csv(std::slice::from_ref(&report), fs::File::create(path)?)?;
    }
    Ok(())
}

fn cmd_oracle(args: OracleArgs) -> CliResult {
    let loaded = load(&args.instance)?;
    let result = compute_advice(&loaded.normalized.sequence, args.k)?;
    if let Some(path) = &args.emit_tape {
        write_tape(path, &encode_advice(&result.payload()))?;
    }
    let stdout = io::stdout();
    let mut out = stdout.lock();
    writeln!(out, "m = {}", result.m)?;
    writeln!(out, "x_m = {}", result.x_m)?;
    writeln!(out, "covered = {}", result.covered)?;
    writeln!(out, "m,covered")?;
    for (m, covered) in &result.sweep {
        writeln!(out, "{m},{covered}")?;
    }
    Ok(())
}

fn cmd_opt(args: OptArgs) -> CliResult {
    let loaded = load(&args.instance)?;
    let seq = &loaded.normalized.sequence;
    let extra = loaded.normalized.prepacked.len();
    let certificate = read_certificate(args.certificate.as_ref(), None)?;
    let certified = match &certificate {
        Some(c) => Some(bincover::opt::verify_certificate(seq, c)?),
        None => None,
    };
    let info = resolve_opt(seq, certificate.as_ref(), args.limit)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match (info.kind, certified) {
        (OptKind::Exact, Some(c)) if c == info.floor_bound => writeln!(
            out,
            "OPT = {} (certificate {c} = floor bound {})",
            info.value + extra,
            info.floor_bound + extra
        )?,
        (OptKind::Exact, _) => writeln!(
            out,
            "OPT = {} (exact search; floor bound {})",
            info.value + extra,
            info.floor_bound + extra
        )?,
        (OptKind::BoundOnly, c) => {
            write!(
                out,
                "OPT <= {} (bound only: {} items above limit {}",
                info.value + extra,
                seq.n(),
                args.limit
            )?;
            if let Some(c) = c {
                write!(out, "; certificate gives OPT >= {}", c + extra)?;
            }
            writeln!(out, ")")?;
        }
    }
    if info.kind == OptKind::BoundOnly {
        return Err(Error::LimitExceeded {
            n: seq.n(),
            limit: args.limit,
        }
        .into());
    }
    if let (Some(path), Some(cert)) = (&args.out, &info.certificate) {
        if extra > 0 {
            return Err(Failure::Usage(
                "cannot write a certificate for an instance with items of size >= 1".into(),
            ));
        }
        fs::write(path, cert.to_string())?;
    }
    Ok(())
}

fn cmd_gen(args: GenArgs) -> CliResult {
    let (seq, cert) = match args.family {
        GenFamily::Example => (worked_example(), Some(worked_example_certificate())),
        GenFamily::Tightness { n, big, small } => (
            tightness_family(n, &big, &small)?,
            Some(tightness_certificate(n, &big, &small)?),
        ),
        GenFamily::Random {
            n,
            min,
            max,
            denominator,
            seed,
        } => (
            random_instance(&RandomSpec {
                n,
                value_min: min,
                value_max: max,
                denominator_bound: denominator,
                seed,
            })?,
            None,
        ),
    };
    let text = format_instance(seq.values());
    match &args.out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    if let Some(path) = &args.certificate {
        let cert =
            cert.ok_or_else(|| Failure::Usage("no known certificate for random instances".into()))?;
        fs::write(path, cert.to_string())?;
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> CliResult {
    let family = match args.family {
        FamilyName::Example => Family::Example,
        FamilyName::Tightness => Family::Tightness(args.ns.clone()),
        FamilyName::Random => Family::Random {
            trials: args.trials,
            n_min: args.n_min,
            n_max: args.n_max,
            seed: args.seed,
        },
        FamilyName::Dir => Family::Dir(
            args.dir
                .clone()
                .ok_or_else(|| Failure::Usage("--family dir needs --dir".into()))?,
        ),
    };
    if args.n_min > args.n_max {
        return Err(Failure::Usage("--n-min exceeds --n-max".into()));
    }
    let instances = family.instances()?;
    let outcome = verify_bounds(
        &instances,
        &VerifyOptions {
            ks: args.ks.clone(),
            limit: args.limit,
            timing: args.timing,
        },
    )?;
    match &args.csv {
        Some(path) => write_csv(&outcome.reports, fs::File::create(path)?)?,
        None => write_csv(&outcome.reports, io::stdout().lock())?,
    }
    let mut err = io::stderr().lock();
    writeln!(
        err,
        "{} instances, {} runs, {} bound violations, {} bound-only",
        instances.len(),
        outcome.reports.len(),
        outcome.violations.len(),
        outcome.bound_only.len()
    )?;
    for (k, r) in &outcome.min_ratio {
        writeln!(err, "k = {k}: min ratio {r} ~ {}", r.to_decimal(4))?;
    }
    let unavoidable = outcome
        .identity_failures
        .iter()
        .filter(|f| f.unavoidable)
        .count();
    writeln!(
        err,
        "count identities: {} checked, {} failed ({} with t-items outside every canonical optimum)",
        outcome.identity_checks,
        outcome.identity_failures.len(),
        unavoidable
    )?;
    for f in &outcome.identity_failures {
        writeln!(
            err,
            "  {} k={} unplaced={}: {}",
            f.instance_id, f.k, f.unplaced_t_items, f.check
        )?;
    }
    for v in &outcome.violations {
        writeln!(
            err,
            "VIOLATION {} k={} covered={}",
            v.instance_id,
            v.k.unwrap_or(0),
            v.covered
        )?;
    }
    if !outcome.violations.is_empty() {
        let ids: Vec<&str> = outcome
            .violations
            .iter()
            .map(|v| v.instance_id.as_str())
            .collect();
        return Err(Failure::Violation(format!(
            "bound violated on {}",
            ids.join(", ")
        )));
    }
    if args.strict_identities && !outcome.identity_failures.is_empty() {
        return Err(Failure::Violation("count identities failed".into()));
    }
    Ok(())
}

fn cmd_encode(args: EncodeArgs) -> CliResult {
    let tape = encode_advice(&AdvicePayload::new(args.m, args.x)?);
    println!("{tape}");
    if let Some(path) = &args.tape {
        write_tape(path, &tape)?;
    }
    Ok(())
}

fn cmd_decode(args: DecodeArgs) -> CliResult {
    let bits = match (&args.tape, args.bits) {
        (Some(path), _) => read_tape(path)?,
        (None, Some(bits)) => bits,
        (None, None) => unreachable!("clap requires one of them"),
    };
    let mut cursor = TapeCursor::new(&bits);
    let payload = decode_advice(&mut cursor)?;
    println!("m = {}", payload.m);
    println!("x_m = {}", payload.x_m);
    println!("bits read = {}", cursor.position());
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. }
        | Error::Truncated { .. }
        | Error::MalformedAdvice(_)
        | Error::Certificate { .. }
        | Error::Io(_) => EXIT_PARSE,
        Error::LimitExceeded { .. } => EXIT_LIMIT,
        Error::Domain(_) => EXIT_USAGE,
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
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Opt(a) => cmd_opt(a),
        Command::Gen(a) => cmd_gen(a),
        Command::VerifyBounds(a) => cmd_verify(a),
        Command::EncodeAdvice(a) => cmd_encode(a),
        Command::DecodeAdvice(a) => cmd_decode(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Violation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_VIOLATION)
        }
    }
}
