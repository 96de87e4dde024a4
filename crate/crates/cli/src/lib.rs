//! Command-line front end.
//!
//! Exit codes follow one convention everywhere: 0 for an affirmative result
//! (LTI, all checks pass, violation demonstrated), 2 for a well-formed
//! negative result, 1 for usage or input errors. JSON goes to stdout,
//! human diagnostics to stderr.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use lti_core::analyzer::{analyze, canonicalize, report_to_json};
use lti_core::corpus::{builtin_corpus, parse_corpus_file, render_table, run_corpus};
use lti_core::numeric::{
    demonstrate_fixed_y0_shift_failure, empirical_shift_test, empirical_superposition_test,
    simulate, to_state_space, zero_input_zero_output_test, ParameterBinding, PropertyReport,
    TestSignal, DEFAULT_DT, DEFAULT_T_END, TOL_GRID_IDENTITY,
};
use lti_core::parser::parse_system;
use lti_core::system::SystemDef;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NEGATIVE: i32 = 2;

#[derive(Parser)]
#[command(
    name = "lti",
    about = "Decide whether a system definition is linear time-invariant",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct BindArgs {
    /// Parameter values, e.g. `--bind a=-1,b=2`.
    #[arg(long)]
    bind: Option<String>,
    /// File of `name=value` lines; `--bind` entries override it.
    #[arg(long)]
    bind_file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and classify a definition; prints the verdict report as JSON.
    Check {
        /// The definition, e.g. "y = a*D[y,1] + b*x".
        system: String,
    },
    /// Run empirical superposition, shift, and zero-input checks.
    Verify {
        system: String,
        #[command(flatten)]
        bind: BindArgs,
        /// First test input.
        #[arg(long, default_value = "step@1")]
        x1: String,
        /// Second test input (superposition only).
        #[arg(long, default_value = "sine@1:f=1")]
        x2: String,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(long, default_value_t = -3.0)]
        beta: f64,
        /// Shift amount; must be a grid multiple and fit the quiet prefix.
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        /// Input for the shift check (needs a quiet prefix of at least
        /// `delta`; the superposition inputs often have none).
        #[arg(long, default_value = "step@1")]
        shift_signal: String,
        #[arg(long, default_value_t = DEFAULT_DT)]
        dt: f64,
        #[arg(long, default_value_t = DEFAULT_T_END)]
        t_end: f64,
        #[arg(long, default_value_t = TOL_GRID_IDENTITY)]
        tol: f64,
    },
    /// Check every built-in (or provided) corpus entry; prints a table.
    Corpus {
        /// Corpus file: one `<system> => <verdict>` per line, `#` comments.
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Integrate an LTI definition and write the trajectory as CSV.
    Simulate {
        system: String,
        #[command(flatten)]
        bind: BindArgs,
        #[arg(long, default_value = "step@0")]
        signal: String,
        #[arg(long, default_value_t = DEFAULT_DT)]
        dt: f64,
        #[arg(long, default_value_t = DEFAULT_T_END)]
        t_end: f64,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Show that pinning the first-order solution's initial condition
    /// breaks shift-equivariance.
    DemoShiftFailure {
        #[arg(long, default_value_t = -1.0)]
        a: f64,
        #[arg(long, default_value_t = 2.0)]
        b: f64,
        #[arg(long, default_value_t = 0.0)]
        y0: f64,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[arg(long, default_value = "step@0")]
        signal: String,
        #[arg(long, default_value_t = DEFAULT_DT)]
        dt: f64,
        #[arg(long, default_value_t = DEFAULT_T_END)]
        t_end: f64,
    },
}

fn parse_binding_text(text: &str, into: &mut ParameterBinding) -> Result<(), String> {
    for pair in text.split(',') {
        let pair = pair.trim();
        if pair.is_empty() {
            continue;
        }
        let (name, value) = pair
            .split_once('=')
            .ok_or_else(|| format!("binding `{pair}` is not name=value"))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| format!("binding value `{value}` is not a number"))?;
        into.insert(name.trim().to_string(), value);
    }
    Ok(())
}

fn resolve_binding(args: &BindArgs) -> Result<ParameterBinding, String> {
    let mut binding = ParameterBinding::new();
    if let Some(path) = &args.bind_file {
        let text = fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            parse_binding_text(line, &mut binding)
                .map_err(|e| format!("{}:{}: {e}", path.display(), lineno + 1))?;
        }
    }
    if let Some(text) = &args.bind {
        parse_binding_text(text, &mut binding)?;
    }
    Ok(binding)
}

fn parse_or_report(text: &str, stderr: &mut dyn Write) -> Result<SystemDef, i32> {
    parse_system(text).map_err(|e| {
        let _ = writeln!(stderr, "parse error: {e}");
        EXIT_USAGE
    })
}

fn cmd_check(system: &str, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let sys = match parse_or_report(system, stderr) {
        Ok(sys) => sys,
        Err(code) => return code,
    };
    let report = analyze(&sys);
    let canonical = if report.verdict.is_lti() {
        match canonicalize(&sys) {
            Ok(cf) => Some(cf),
            Err(e) => {
                let _ = writeln!(stderr, "canonicalization failed: {e}");
                return EXIT_USAGE;
            }
        }
    } else {
        None
    };
    let value = report_to_json(&report, canonical.as_ref());
    let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&value).unwrap());
    if report.verdict.is_lti() {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    system: &str,
    bind: &BindArgs,
    x1: &str,
    x2: &str,
    alpha: f64,
    beta: f64,
    delta: f64,
    shift_signal: &str,
    dt: f64,
    t_end: f64,
    tol: f64,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let sys = match parse_or_report(system, stderr) {
        Ok(sys) => sys,
        Err(code) => return code,
    };
    let binding = match resolve_binding(bind) {
        Ok(b) => b,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            return EXIT_USAGE;
        }
    };
    let x1 = match TestSignal::from_spec(x1) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            return EXIT_USAGE;
        }
    };
    let x2 = match TestSignal::from_spec(x2) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            return EXIT_USAGE;
        }
    };
    let shift_input = match TestSignal::from_spec(shift_signal) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            return EXIT_USAGE;
        }
    };

    let mut checks: Vec<PropertyReport> = Vec::new();
    let runs: [Result<PropertyReport, _>; 3] = [
        empirical_superposition_test(&sys, &binding, &x1, &x2, alpha, beta, t_end, dt, tol),
        empirical_shift_test(&sys, &binding, &shift_input, delta, t_end, dt, tol),
        zero_input_zero_output_test(&sys, &binding, t_end, dt),
    ];
    for run in runs {
        match run {
            Ok(report) => checks.push(report),
            Err(e) => {
                let _ = writeln!(stderr, "verification failed: {e}");
                return EXIT_USAGE;
            }
        }
    }

    let report = analyze(&sys);
    let mut value = report_to_json(&report, None);
    value["numeric_checks"] = serde_json::to_value(&checks).unwrap();
    let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&value).unwrap());
    if checks.iter().all(|c| c.passed) {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    }
}

fn cmd_corpus(file: Option<&PathBuf>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let entries = match file {
        None => builtin_corpus(),
        Some(path) => {
            let text = match fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => {
                    let _ = writeln!(stderr, "cannot read {}: {e}", path.display());
                    return EXIT_USAGE;
                }
            };
            match parse_corpus_file(&text) {
                Ok(entries) => entries,
                Err(e) => {
                    let _ = writeln!(stderr, "corpus file: {e}");
                    return EXIT_USAGE;
                }
            }
        }
    };
    let outcomes = run_corpus(&entries);
    let _ = write!(stdout, "{}", render_table(&outcomes));
    if outcomes.iter().all(|o| o.all_ok()) {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    }
}

fn cmd_simulate(
    system: &str,
    bind: &BindArgs,
    signal: &str,
    dt: f64,
    t_end: f64,
    out_path: &PathBuf,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let sys = match parse_or_report(system, stderr) {
        Ok(sys) => sys,
        Err(code) => return code,
    };
    let binding = match resolve_binding(bind) {
        Ok(b) => b,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            return EXIT_USAGE;
        }
    };
    let signal = match TestSignal::from_spec(signal) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            return EXIT_USAGE;
        }
    };
    let cf = match canonicalize(&sys) {
        Ok(cf) => cf,
        Err(e) => {
            let _ = writeln!(stderr, "cannot simulate: {e}");
            return EXIT_USAGE;
        }
    };
    let ss = match to_state_space(&cf, &binding) {
        Ok(ss) => ss,
        Err(e) => {
            let _ = writeln!(stderr, "cannot simulate: {e}");
            return EXIT_USAGE;
        }
    };
    let traj = match simulate(&ss, &signal, t_end, dt) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(stderr, "simulation failed: {e}");
            return EXIT_USAGE;
        }
    };
    let file = match fs::File::create(out_path) {
        Ok(f) => f,
        Err(e) => {
            let _ = writeln!(stderr, "cannot write {}: {e}", out_path.display());
            return EXIT_USAGE;
        }
    };
    if let Err(e) = traj.write_csv(std::io::BufWriter::new(file)) {
        let _ = writeln!(stderr, "cannot write {}: {e}", out_path.display());
        return EXIT_USAGE;
    }
    let summary = json!({
        "samples": traj.len(),
        "dt": traj.dt,
        "t_end": t_end,
        "final_value": traj.final_value(),
        "max_abs": traj.max_abs(),
        "out": out_path.display().to_string(),
    });
    let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&summary).unwrap());
    EXIT_OK
}

#[allow(clippy::too_many_arguments)]
fn cmd_demo_shift_failure(
    a: f64,
    b: f64,
    y0: f64,
    delta: f64,
    signal: &str,
    dt: f64,
    t_end: f64,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let signal = match TestSignal::from_spec(signal) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            return EXIT_USAGE;
        }
    };
    match demonstrate_fixed_y0_shift_failure(a, b, y0, &signal, delta, t_end, dt) {
        Ok(report) => {
            let _ = writeln!(
                stdout,
                "{}",
                serde_json::to_string_pretty(&serde_json::to_value(&report).unwrap()).unwrap()
            );
            if report.passed {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "demo failed: {e}");
            EXIT_USAGE
        }
    }
}

/// Entry point shared by `main` and the tests; returns the exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match cli.command {
        Command::Check { system } => cmd_check(&system, stdout, stderr),
        Command::Verify {
            system,
            bind,
            x1,
            x2,
            alpha,
            beta,
            delta,
            shift_signal,
            dt,
            t_end,
            tol,
        } => cmd_verify(
            &system,
            &bind,
            &x1,
            &x2,
            alpha,
            beta,
            delta,
            &shift_signal,
            dt,
            t_end,
            tol,
            stdout,
            stderr,
        ),
        Command::Corpus { file } => cmd_corpus(file.as_ref(), stdout, stderr),
        Command::Simulate {
            system,
            bind,
            signal,
            dt,
            t_end,
            out,
        } => cmd_simulate(&system, &bind, &signal, dt, t_end, &out, stdout, stderr),
        Command::DemoShiftFailure {
            a,
            b,
            y0,
            delta,
            signal,
            dt,
            t_end,
        } => cmd_demo_shift_failure(a, b, y0, delta, &signal, dt, t_end, stdout, stderr),
    }
}

