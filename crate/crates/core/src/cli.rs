//! `lpmask` command-line front end.
//!
//! Exit codes: 0 success (any solver verdict counts as success), 1 usage or
//! parse error, 2 validation failure, 3 resampling exhaustion or an internal
//! invariant violation.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::audit::{
    builtin_counterexample, builtin_key, builtin_problem, explain_trial, generate_instance,
    run_audit, AuditError, BMode, MAX_GENERATED_VARS,
};
use crate::io::{
    describe_outcome, format_scalar, from_json, to_canonical, CounterexampleFile, FormatError,
    KeyFile, ProblemDoc, RecoveredFile, ReportFile, SolutionFile, TrialBody,
};
use crate::masking::{decrypt_solution, encrypt, keygen, MaskingError};
use crate::model::PeculiarProblem;
use crate::simplex::{solve_general, solve_nonneg};

#[derive(Debug, Parser)]
#[command(
    name = "lpmask",
    version,
    about = "Exact LP masking and its nonnegativity audit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BModeArg {
    Identity,
    Random,
}

impl From<BModeArg> for BMode {
    fn from(b: BModeArg) -> Self {
        match b {
            BModeArg::Identity => BMode::IdentityB,
            BModeArg::Random => BMode::RandomB,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Form {
    /// Append `x ≥ 0` to client/masked problems and run the simplex directly.
    Nonneg,
    /// Solve with free variables split into nonnegative parts.
    General,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a random client problem.
    Gen {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "identity")]
        b_mode: BModeArg,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Generate a masking key for a client problem.
    Keygen {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Mask a client problem with a key.
    Encrypt {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        key: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Solve a problem file.
    Solve {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "nonneg")]
        form: Form,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Map a server solution back to the client's variables.
    Decrypt {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Run the masking pipeline on random instances and count outcomes.
    Audit {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "identity")]
        b_mode: BModeArg,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Write the built-in counterexample trial with an explanation.
    Counterexample {
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
        /// Also write the client problem file.
        #[arg(long)]
        problem_out: Option<PathBuf>,
        /// Also write the key file.
        #[arg(long)]
        key_out: Option<PathBuf>,
        /// Also write the masked problem file.
        #[arg(long)]
        masked_out: Option<PathBuf>,
    },
    /// Check problem, key and report files against their invariants.
    Verify {
        #[arg(long)]
        problem: Option<PathBuf>,
        #[arg(long)]
        key: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure {
            code: e.exit_code(),
            message: e.to_string(),
        }
    }
}

impl From<MaskingError> for Failure {
    fn from(e: MaskingError) -> Self {
        match e {
            MaskingError::ResamplingExhausted { .. } => Failure::internal(e.to_string()),
            _ => Failure::invalid(e.to_string()),
        }
    }
}

impl From<AuditError> for Failure {
    fn from(e: AuditError) -> Self {
        match e {
            AuditError::BadDimensions { .. } | AuditError::NoTrials => {
                Failure::usage(e.to_string())
            }
            _ => Failure::internal(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CmdResult {
    fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_client_problem(path: &Path) -> Result<PeculiarProblem, Failure> {
    match ProblemDoc::from_text(&read(path)?)? {
        ProblemDoc::Peculiar(p) => Ok(p),
        _ => Err(Failure::usage(format!(
            "{}: expected a problem of kind \"peculiar\"",
            path.display()
        ))),
    }
}

fn load_key(path: &Path, problem: &PeculiarProblem) -> Result<crate::masking::MaskingKey, Failure> {
    let file: KeyFile = from_json(&read(path)?)?;
    Ok(file.load_for(problem)?)
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::Gen {
            m,
            n,
            seed,
            b_mode,
            output,
        } => cmd_gen(m, n, seed, b_mode.into(), &output, out),
        Command::Keygen {
            problem,
            seed,
            output,
        } => cmd_keygen(&problem, seed, &output, out),
        Command::Encrypt {
            problem,
            key,
            output,
        } => cmd_encrypt(&problem, &key, &output, out),
        Command::Solve { path, form, output } => cmd_solve(&path, form, output.as_deref(), out),
        Command::Decrypt {
            problem,
            key,
            solution,
            output,
        } => cmd_decrypt(&problem, &key, &solution, output.as_deref(), out),
        Command::Audit {
            m,
            n,
            trials,
            seed,
            b_mode,
            output,
        } => cmd_audit(m, n, trials, seed, b_mode.into(), &output, out),
        Command::Counterexample {
            output,
            problem_out,
            key_out,
            masked_out,
        } => cmd_counterexample(
            &output,
            problem_out.as_deref(),
            key_out.as_deref(),
            masked_out.as_deref(),
            out,
        ),
        Command::Verify {
            problem,
            key,
            report,
        } => cmd_verify(problem.as_deref(), key.as_deref(), report.as_deref(), out),
    }
}

fn check_dims(m: usize, n: usize) -> CmdResult {
    if m < 1 || m >= n || n > MAX_GENERATED_VARS {
        return Err(Failure::usage(format!(
            "need 1 <= m < n <= {MAX_GENERATED_VARS} (m < n), got m={m}, n={n}"
        )));
    }
    Ok(())
}

fn cmd_gen(
    m: usize,
    n: usize,
    seed: u64,
    b_mode: BMode,
    output: &Path,
    out: &mut dyn Write,
) -> CmdResult {
    check_dims(m, n)?;
    let p = generate_instance(m, n, seed, b_mode)?;
    write(output, &ProblemDoc::Peculiar(p).to_text())?;
    let _ = writeln!(out, "wrote {}", output.display());
    Ok(())
}

fn cmd_keygen(problem: &Path, seed: u64, output: &Path, out: &mut dyn Write) -> CmdResult {
    let p = load_client_problem(problem)?;
    let key = keygen(&p, seed)?;
    write(output, &to_canonical(&KeyFile::new(&key, &p, Some(seed))))?;
    let _ = writeln!(out, "wrote {}", output.display());
    Ok(())
}

fn cmd_encrypt(problem: &Path, key: &Path, output: &Path, out: &mut dyn Write) -> CmdResult {
    let p = load_client_problem(problem)?;
    let k = load_key(key, &p)?;
    let masked = encrypt(&p, &k)?;
    write(output, &ProblemDoc::Masked(masked).to_text())?;
    let _ = writeln!(out, "wrote {}", output.display());
    Ok(())
}

fn cmd_solve(path: &Path, form: Form, output: Option<&Path>, out: &mut dyn Write) -> CmdResult {
    let doc = ProblemDoc::from_text(&read(path)?)?;
    let outcome = match form {
        Form::Nonneg => {
            solve_nonneg(&doc.as_general(true)).map_err(|e| Failure::usage(e.to_string()))?
        }
        Form::General => solve_general(&doc.as_general(false)),
    };
    let _ = writeln!(out, "{}", describe_outcome(&outcome));
    if let Some(path) = output {
        let n = doc.as_general(false).n();
        write(path, &to_canonical(&SolutionFile::new(&outcome, n)))?;
    }
    Ok(())
}

fn cmd_decrypt(
    problem: &Path,
    key: &Path,
    solution: &Path,
    output: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    let p = load_client_problem(problem)?;
    let k = load_key(key, &p)?;
    let sol: SolutionFile = from_json(&read(solution)?)?;
    if sol.n != p.n() {
        return Err(Failure::invalid(format!(
            "solution has {} variables, problem has {}",
            sol.n,
            p.n()
        )));
    }
    let outcome = sol.to_outcome()?;
    let y = outcome.x_opt().ok_or_else(|| {
        Failure::invalid(format!(
            "solution verdict is {}, nothing to decrypt",
            outcome.verdict_name()
        ))
    })?;
    let (x, value) = decrypt_solution(y, &p, &k)?;
    let _ = writeln!(out, "x = {x}");
    let _ = writeln!(out, "value {value}");
    if let Some(path) = output {
        let file = RecoveredFile {
            x: x.iter().map(format_scalar).collect(),
            value: format_scalar(&value),
        };
        write(path, &to_canonical(&file))?;
    }
    Ok(())
}

fn cmd_audit(
    m: usize,
    n: usize,
    trials: u64,
    seed: u64,
    b_mode: BMode,
    output: &Path,
    out: &mut dyn Write,
) -> CmdResult {
    if trials == 0 {
        return Err(Failure::usage("--trials must be at least 1"));
    }
    check_dims(m, n)?;
    let report = run_audit(m, n, trials, seed, b_mode)?;
    report
        .revalidate()
        .map_err(|e| Failure::internal(e.to_string()))?;
    write(output, &to_canonical(&ReportFile::from_report(&report)))?;
    let _ = write!(out, "{}", report.summary());
    Ok(())
}

fn cmd_counterexample(
    output: &Path,
    problem_out: Option<&Path>,
    key_out: Option<&Path>,
    masked_out: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    let trial = builtin_counterexample();
    trial
        .revalidate()
        .map_err(|e| Failure::internal(e.to_string()))?;
    let explanation = explain_trial(&trial);
    let file = CounterexampleFile {
        trial: TrialBody::from_trial(&trial),
        explanation: explanation.clone(),
    };
    write(output, &to_canonical(&file))?;
    if let Some(path) = problem_out {
        write(path, &ProblemDoc::Peculiar(builtin_problem()).to_text())?;
    }
    if let Some(path) = key_out {
        write(
            path,
            &to_canonical(&KeyFile::new(&builtin_key(), &builtin_problem(), None)),
        )?;
    }
    if let Some(path) = masked_out {
        write(path, &ProblemDoc::Masked(trial.masked.clone()).to_text())?;
    }
    for line in &explanation {
        let _ = writeln!(out, "{line}");
    }
    let true_value = trial
        .true_outcome
        .value()
        .expect("builtin true problem is optimal");
    let recovered = trial
        .recovered_value()
        .expect("builtin server answer is optimal");
    let _ = writeln!(
        out,
        "true value {true_value} vs recovered value {recovered}: {}",
        trial.classification
    );
    Ok(())
}

fn cmd_verify(
    problem: Option<&Path>,
    key: Option<&Path>,
    report: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    if problem.is_none() && report.is_none() {
        return Err(Failure::usage(
            "nothing to verify: pass --problem and/or --report",
        ));
    }
    if key.is_some() && problem.is_none() {
        return Err(Failure::usage("--key requires --problem"));
    }
    if let Some(path) = problem {
        let doc = ProblemDoc::from_text(&read(path)?)?;
        let _ = writeln!(out, "problem ok: {}", path.display());
        if let Some(kpath) = key {
            let ProblemDoc::Peculiar(p) = doc else {
                return Err(Failure::usage("--key needs a problem of kind \"peculiar\""));
            };
            load_key(kpath, &p)?;
            let _ = writeln!(out, "key ok: {}", kpath.display());
        }
    }
    if let Some(path) = report {
        let file: ReportFile = from_json(&read(path)?)?;
        let report = file.to_report()?;
        report
            .revalidate()
            .map_err(|e| Failure::internal(e.to_string()))?;
        let _ = writeln!(out, "report ok: {}", path.display());
    }
    Ok(())
}

/// Entry point for the `lpmask` binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
