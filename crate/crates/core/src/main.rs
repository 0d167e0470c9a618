use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use pllab::cli::{run, Command, Format, InputSource, JobSpec};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CommandArg {
    Norm,
    Pl,
    L,
    Compare,
    VerifyPaper,
    Properties,
}

impl From<CommandArg> for Command {
    fn from(c: CommandArg) -> Self {
        match c {
            CommandArg::Norm => Command::Norm,
            CommandArg::Pl => Command::Pl,
            CommandArg::L => Command::L,
            CommandArg::Compare => Command::Compare,
            CommandArg::VerifyPaper => Command::VerifyPaper,
            CommandArg::Properties => Command::Properties,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

/// Norm brackets for pl- and l-tensor products of quantized spaces.
///
/// Exit codes: 0 all cases pass, 1 assertion violation, 2 unresolved bracket
/// gap only, 3 input error. PLLAB_THREADS caps the worker count.
#[derive(Debug, Parser)]
#[command(name = "pllab", version)]
struct Cli {
    /// Command to run (may also be given with --command).
    #[arg(value_enum)]
    command_pos: Option<CommandArg>,
    #[arg(long, value_enum)]
    command: Option<CommandArg>,
    /// Input document: a path, or inline JSON starting with `{`.
    #[arg(long)]
    input: Option<String>,
    #[arg(long, default_value_t = 200)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Largest n of the V example (verify-paper).
    #[arg(long, default_value_t = 4)]
    n_max: usize,
    /// Trials per sweep (properties).
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Run only the case with this id.
    #[arg(long)]
    case: Option<String>,
    /// Record wall time per case (reports are then not byte-reproducible).
    #[arg(long)]
    timing: bool,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

const EXIT_INPUT: u8 = 3;

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("PLLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| format!("PLLAB_THREADS must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("pllab: {msg}");
        return ExitCode::from(EXIT_INPUT);
    }
    let command = match (cli.command_pos, cli.command) {
        (Some(_), Some(_)) => {
            eprintln!("pllab: give the command either positionally or with --command, not both");
            return ExitCode::from(EXIT_INPUT);
        }
        (Some(c), None) | (None, Some(c)) => Command::from(c),
        (None, None) => {
            eprintln!("pllab: no command given (norm, pl, l, compare, verify-paper, properties)");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let job = JobSpec {
        command,
        input: cli.input.as_deref().map(InputSource::from_arg),
        budget: cli.budget,
        seed: cli.seed,
        format: match cli.format {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        },
        tolerance: cli.tolerance,
        n_max: cli.n_max,
        trials: cli.trials,
        case: cli.case,
        timing: cli.timing,
    };
    let report = match run(&job) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("pllab: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let text = report.render(job.format);
    let written = match &cli.output {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("pllab: cannot write report: {e}");
        return ExitCode::from(EXIT_INPUT);
    }
    ExitCode::from(report.exit_code() as u8)
}
