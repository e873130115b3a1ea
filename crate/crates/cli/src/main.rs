use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hopf_radical_cli::report::{
    analyze_args, parse_base, render_csv_row, render_text, verify, VerifyError, CSV_HEADER,
};
use hopf_radical_cli::sweep::{run_sweep, Format, SweepConfig, SweepError, DEFAULT_CHUNK};
use hopf_radical_cli::{
    exit_code_for, EXIT_FREE, EXIT_INPUT, EXIT_VERIFY_FAILED, MAX_NORM_ENV,
};

#[derive(Parser)]
#[command(
    name = "radhopf",
    version,
    about = "Freeness of rings of integers over the associated order in tame radical extensions of prime degree"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Text => Format::Text,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one extension K(a^(1/p)).
    Analyze {
        /// `Q` or `Qsqrt<d>` with d < 0 squarefree.
        #[arg(long)]
        base: String,
        #[arg(long)]
        p: u64,
        /// Radicand `x+y*w` with w the standard integral generator of K.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
        #[arg(long, env = MAX_NORM_ENV)]
        max_norm: Option<u128>,
        /// Record elapsed time in the report.
        #[arg(long)]
        timing: bool,
        /// Write the report here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Tabulate rational-integer radicands in [from, to].
    Sweep {
        #[arg(long)]
        base: String,
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        from: i64,
        #[arg(long, allow_hyphen_values = true)]
        to: i64,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, env = MAX_NORM_ENV)]
        max_norm: Option<u128>,
        #[arg(long, default_value_t = DEFAULT_CHUNK)]
        chunk: usize,
        /// Stop after this many chunks; resume later from the checkpoint.
        #[arg(long, hide = true)]
        max_chunks: Option<usize>,
    },
    /// Re-check a JSON report produced by `analyze`.
    Verify { report: PathBuf },
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("radhopf: {msg}");
    ExitCode::from(code)
}

fn emit(output: &Option<PathBuf>, text: &str) -> io::Result<()> {
    match output {
        Some(path) => fs::write(path, text),
        None => io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_FREE };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Analyze {
            base,
            p,
            a,
            format,
            max_norm,
            timing,
            output,
        } => {
            let report = match analyze_args(&base, p, &a, max_norm, timing) {
                Ok(r) => r,
                Err(e) => return fail(exit_code_for(&e), e),
            };
            let text = match format {
                FormatArg::Json => report.to_json() + "\n",
                FormatArg::Text => render_text(&report),
                FormatArg::Csv => format!("{CSV_HEADER}\n{}\n", render_csv_row(&report)),
            };
            if let Err(e) = emit(&output, &text) {
                return fail(EXIT_INPUT, e);
            }
            ExitCode::from(report.exit_code())
        }
        Command::Sweep {
            base,
            p,
            from,
            to,
            format,
            checkpoint,
            output,
            max_norm,
            chunk,
            max_chunks,
        } => {
            let k = match parse_base(&base, max_norm) {
                Ok(k) => k,
                Err(e) => return fail(exit_code_for(&e), e),
            };
            let cfg = SweepConfig {
                base: k,
                p,
                from,
                to,
                format: format.into(),
                chunk,
                max_chunks,
            };
            let mut stdout = io::stdout().lock();
            match run_sweep(&cfg, output.as_deref(), checkpoint.as_deref(), &mut stdout) {
                Ok(_) => ExitCode::from(EXIT_FREE),
                Err(SweepError::Core(e)) => fail(exit_code_for(&e), e),
                Err(e) => fail(EXIT_INPUT, e),
            }
        }
        Command::Verify { report } => {
            let text = match fs::read_to_string(&report) {
                Ok(t) => t,
                Err(e) => return fail(EXIT_INPUT, format!("{}: {e}", report.display())),
            };
            match verify(&text) {
                Ok(outcome) => {
                    for (name, ok) in &outcome.checks {
                        println!("{} {name}", if *ok { "ok  " } else { "FAIL" });
                    }
                    if outcome.passed() {
                        println!("verification passed");
                        ExitCode::from(EXIT_FREE)
                    } else {
                        println!("verification failed");
                        ExitCode::from(EXIT_VERIFY_FAILED)
                    }
                }
                Err(VerifyError::Schema(e)) => fail(EXIT_INPUT, e),
                Err(VerifyError::Core(e)) => fail(exit_code_for(&e), e),
            }
        }
    }
}
