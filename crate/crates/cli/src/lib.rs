//! The `gadtcheck` command line.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gadtcheck::driver::{
    build_env, check_match, check_program, Config as DriverConfig, Diagnostic, DiagnosticKind,
    MatchReport, ProgramError, ProgramReport, Severity, DEFAULT_PRELUDE,
};
use gadtcheck::horn::{encode, sld_inhabited, sld_inhabited_matching, ResolutionResult};
use gadtcheck::search::{SearchOutcome, SplitPolicy, DEFAULT_FUEL};
use gadtcheck::syntax::{parse_type, Span};
use gadtcheck::tycore::Session;

pub const EXIT_CLEAN: i32 = 0;
pub const EXIT_WARNINGS: i32 = 1;
pub const EXIT_ERRORS: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 66;

#[derive(Parser, Debug)]
#[command(
    name = "gadtcheck",
    version,
    about = "Exhaustiveness checking for GADT pattern matches"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Report non-exhaustive matches, unreachable cases and failed refutations.
    Check { file: PathBuf },
    /// Print the declarations as Prolog clauses.
    Clauses { file: PathBuf },
    /// Search for an inhabitant of a type by bounded resolution.
    Oracle {
        file: PathBuf,
        #[arg(long = "type", value_name = "TYPE")]
        ty: String,
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
        depth: u32,
    },
    /// Time each check of a file.
    Bench { file: PathBuf },
}

#[derive(Args, Debug, Clone)]
struct Options {
    /// Splitting policy for the exhaustiveness query. Without it, single-arm
    /// matches split once and others never.
    #[arg(long, global = true, value_enum)]
    split: Option<SplitArg>,
    /// Split budget for `--split full`.
    #[arg(long, global = true, default_value_t = DEFAULT_FUEL,
          value_parser = clap::value_parser!(u32).range(1..))]
    fuel: u32,
    /// Verify every emptiness verdict against the resolution oracle.
    #[arg(long, global = true)]
    oracle_check: bool,
    /// Depth bound used by `--oracle-check`.
    #[arg(long, global = true, default_value_t = 6,
          value_parser = clap::value_parser!(u32).range(1..))]
    oracle_depth: u32,
    /// Print warnings in the OCaml compiler's wording.
    #[arg(long, global = true)]
    ocaml_compat_messages: bool,
    /// Declarations to load instead of the built-in prelude.
    #[arg(long, global = true, value_name = "FILE")]
    prelude: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SplitArg {
    Never,
    Once,
    Full,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Human,
    Machine,
}

/// Settings shared by the subcommands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub split_policy: Option<SplitPolicy>,
    pub oracle_check: bool,
    pub oracle_depth: u32,
    pub ocaml_compat_messages: bool,
    pub format: Format,
}

impl Options {
    fn config(&self) -> Config {
        Config {
            split_policy: self.split.map(|s| match s {
                SplitArg::Never => SplitPolicy::Never,
                SplitArg::Once => SplitPolicy::Once,
                SplitArg::Full => SplitPolicy::Full { fuel: self.fuel },
            }),
            oracle_check: self.oracle_check,
            oracle_depth: self.oracle_depth,
            ocaml_compat_messages: self.ocaml_compat_messages,
            format: self.format,
        }
    }
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

/// Runs the command line `args` (including the program name) and returns
/// the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_CLEAN
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    let mut io = Io { out, err };
    match execute(&cli, &mut io) {
        Ok(code) => code,
        Err(Failure::Io(path, e)) => {
            let _ = writeln!(io.err, "gadtcheck: {}: {e}", path.display());
            EXIT_IO
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(io.err, "gadtcheck: {msg}");
            EXIT_USAGE
        }
    }
}

enum Failure {
    Io(PathBuf, std::io::Error),
    Usage(String),
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn execute(cli: &Cli, io: &mut Io) -> Result<i32, Failure> {
    let config = cli.opts.config();
    let prelude = match &cli.opts.prelude {
        Some(p) => read(p)?,
        None => DEFAULT_PRELUDE.to_string(),
    };
    let code = match &cli.command {
        Command::Check { file } => {
            let src = read(file)?;
            check(file, &src, &prelude, &config, io)
        }
        Command::Clauses { file } => {
            let src = read(file)?;
            match build_env(&prelude, &src) {
                Ok((env, _)) => {
                    let _ = write!(io.out, "{}", encode(&env));
                    EXIT_CLEAN
                }
                Err(e) => program_error(file, &e, io),
            }
        }
        Command::Oracle { file, ty, depth } => {
            let src = read(file)?;
            let (env, _) = match build_env(&prelude, &src) {
                Ok(x) => x,
                Err(e) => return Ok(program_error(file, &e, io)),
            };
            let syntax = parse_type(ty).map_err(|e| Failure::Usage(format!("--type: {e}")))?;
            let mut session = Session::new();
            let t = env
                .lower_open_type(&syntax, Span::default(), &mut session)
                .map_err(|e| Failure::Usage(format!("--type: {e}")))?;
            let line = match sld_inhabited(&env, &encode(&env), &t, *depth) {
                ResolutionResult::Witness(v) => format!("witness {}", env.show_pat(&v.to_pat())),
                ResolutionResult::NoProofWithinDepth(d) => format!("no-proof-within-depth {d}"),
                ResolutionResult::DepthExhausted => format!("depth-exhausted {depth}"),
            };
            let _ = writeln!(io.out, "{line}");
            EXIT_CLEAN
        }
        Command::Bench { file } => {
            let src = read(file)?;
            bench(file, &src, &prelude, &config, io)
        }
    };
    Ok(code)
}

fn driver_config(config: &Config) -> DriverConfig {
    DriverConfig {
        exhaustiveness_policy: config.split_policy,
    }
}

fn program_error(file: &Path, e: &ProgramError, io: &mut Io) -> i32 {
    let _ = writeln!(io.err, "{}:{e}", file.display());
    EXIT_ERRORS
}

fn check(file: &Path, src: &str, prelude: &str, config: &Config, io: &mut Io) -> i32 {
    let report = match check_program(src, prelude, &driver_config(config)) {
        Ok(r) => r,
        Err(e) => return program_error(file, &e, io),
    };
    for (i, m) in report.matches.iter().enumerate() {
        for d in &m.diagnostics {
            let _ = writeln!(io.out, "{}", render(file, i, d, config));
        }
    }
    let mut code = match report.max_severity() {
        None => EXIT_CLEAN,
        Some(Severity::Warning) => EXIT_WARNINGS,
        Some(Severity::Error) => EXIT_ERRORS,
    };
    if config.oracle_check && oracle_check(file, &report, config, io) > 0 {
        code = EXIT_ERRORS;
    }
    code
}

/// Human or machine rendering of one diagnostic.
pub fn render(file: &Path, check: usize, d: &Diagnostic, config: &Config) -> String {
    match config.format {
        Format::Machine => machine_line(file, check, d),
        Format::Human if config.ocaml_compat_messages => format!(
            "File \"{}\", line {}, characters {}:\n{}",
            file.display(),
            d.span.line,
            d.span.col,
            d.ocaml_message()
        ),
        Format::Human => format!("{}:{d}", file.display()),
    }
}

/// `key=value` fields separated by spaces; the free-text field comes last.
pub fn machine_line(file: &Path, check: usize, d: &Diagnostic) -> String {
    let sev = match d.severity() {
        Severity::Warning => "warning",
        Severity::Error => "error",
    };
    let mut line = format!(
        "file={} check={} line={} col={} severity={sev} kind={}",
        file.display(),
        check,
        d.span.line,
        d.span.col,
        d.code()
    );
    match &d.kind {
        DiagnosticKind::NonExhaustive { witness } => line += &format!(" witness={witness}"),
        DiagnosticKind::UnreachableCase {
            arm,
            suggest_refutation,
        } => line += &format!(" arm={arm} suggest_refutation={suggest_refutation}"),
        DiagnosticKind::RefutationFailed { arm, witness } => {
            line += &format!(" arm={arm} witness={witness}")
        }
        DiagnosticKind::TypeError { message } => line += &format!(" message={message}"),
    }
    line
}

/// Re-checks every emptiness verdict with the resolution oracle; returns
/// the number of disagreements.
fn oracle_check(file: &Path, report: &ProgramReport, config: &Config, io: &mut Io) -> usize {
    let env = &report.env;
    let clauses = encode(env);
    let (mut checked, mut disagreements) = (0, 0);
    for (i, m) in report.matches.iter().enumerate() {
        for q in m
            .queries
            .iter()
            .filter(|q| q.outcome == SearchOutcome::Empty)
        {
            checked += 1;
            let ty = m.session.zonk(&q.ty);
            let r = sld_inhabited_matching(env, &clauses, &ty, &q.pattern, config.oracle_depth);
            if let ResolutionResult::Witness(v) = r {
                disagreements += 1;
                let _ = writeln!(
                    io.out,
                    "{}: oracle disagreement in check {i}: {} was judged empty but {} inhabits it",
                    file.display(),
                    env.show_pat(&q.pattern),
                    env.show_pat(&v.to_pat())
                );
            }
        }
    }
    let _ = match config.format {
        Format::Machine => writeln!(
            io.out,
            "file={} kind=oracle-summary checked={checked} disagreements={disagreements} depth={}",
            file.display(),
            config.oracle_depth
        ),
        Format::Human => writeln!(
            io.out,
            "{}: oracle: {checked} empty verdict(s) checked to depth {}, {disagreements} disagreement(s)",
            file.display(),
            config.oracle_depth
        ),
    };
    disagreements
}

fn verdict(m: &MatchReport) -> &'static str {
    match m.diagnostics.iter().map(Diagnostic::severity).max() {
        None => "clean",
        Some(Severity::Warning) => "warnings",
        Some(Severity::Error) => "errors",
    }
}

fn bench(file: &Path, src: &str, prelude: &str, config: &Config, io: &mut Io) -> i32 {
    let (env, checks) = match build_env(prelude, src) {
        Ok(x) => x,
        Err(e) => return program_error(file, &e, io),
    };
    let dc = driver_config(config);
    for (i, c) in checks.iter().enumerate() {
        let start = Instant::now();
        let m = check_match(c, &env, &dc);
        let ms = start.elapsed().as_secs_f64() * 1000.0;
        let _ = writeln!(
            io.out,
            "{}: check {i} (line {}): {ms:.3} ms, queries={} leaves={} splits={} verdict={}",
            file.display(),
            c.span.line,
            m.stats.queries,
            m.stats.leaves,
            m.stats.splits,
            verdict(&m)
        );
    }
    EXIT_CLEAN
}
