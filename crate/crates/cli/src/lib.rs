//! Command-line front end for `css-purify`.
//!
//! Exit codes: 0 success, 1 I/O failure or `verify` mismatch, 2 invalid
//! configuration, 3 physics-domain error (degenerate state, zero-density
//! outcome).

pub mod config;
mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use css_purify::sweep::{self, SweepError, SweepSpec};
use css_purify::verify::{run_verify, VerifyConfig};
use css_purify::{
    amplification_threshold, amplify, apply_loss, concatenate, optimal_k, purify_with_inefficiency,
    ChannelSetting, CssError, CssParams, MixedCss, TapSetting,
};

use config::{CliConfig, Command, ConfigError, KSetting, ParamBuilder, Params};
use report::{Field, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_PHYSICS: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "css-purify",
    version,
    about = "Purify, amplify and sweep coherent-state superpositions"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Tap a mixed CSS and condition on a homodyne outcome k.
    Purify(Flags),
    /// Two-copy linear-optical amplifier (phi = 0 or pi).
    Amplify(Flags),
    /// Purify two copies, then amplify them back to the input amplitude.
    Concat(Flags),
    /// Tabulate a figure to CSV.
    Sweep(Flags),
    /// Cross-check closed forms against the dyad simulator on random draws.
    Verify(Flags),
}

#[derive(Debug, Args)]
struct Flags {
    /// JSON file of parameters; flags override its values.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Coherent amplitude.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Superposition phase: radians, or 0, pi, pi/2, ...
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<String>,
    /// Input CSS fraction.
    #[arg(long = "p-in", allow_hyphen_values = true)]
    p_in: Option<String>,
    /// Tap transmittance.
    #[arg(long = "T", allow_hyphen_values = true)]
    t: Option<String>,
    /// Transmittance of a loss channel applied before the tap.
    #[arg(long, allow_hyphen_values = true)]
    eta: Option<String>,
    /// Homodyne detector efficiency.
    #[arg(long = "eta-H", allow_hyphen_values = true)]
    eta_h: Option<String>,
    /// Homodyne outcome, or "optimal".
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,
    /// Figure to tabulate.
    #[arg(long = "figure-id")]
    figure_id: Option<String>,
    /// CSV destination (file, directory, or - for stdout).
    #[arg(long)]
    output: Option<String>,
    /// json, csv or plain.
    #[arg(long)]
    format: Option<String>,
    /// Omit the timestamp line from CSV output.
    #[arg(long)]
    reproducible: bool,
    /// Random seed for verify.
    #[arg(long)]
    seed: Option<String>,
    /// Number of single-copy draws for verify.
    #[arg(long)]
    draws: Option<String>,
}

impl Flags {
    fn params(&self) -> Result<Params, ConfigError> {
        let mut b = ParamBuilder::default();
        let pairs = [
            ("alpha", &self.alpha),
            ("phi", &self.phi),
            ("p_in", &self.p_in),
            ("T", &self.t),
            ("eta", &self.eta),
            ("eta_H", &self.eta_h),
            ("k", &self.k),
            ("figure_id", &self.figure_id),
            ("output", &self.output),
            ("format", &self.format),
            ("seed", &self.seed),
            ("draws", &self.draws),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                b.set_text(key, v);
            }
        }
        if self.reproducible {
            b.set_text("reproducible", "true");
        }
        b.finish()
    }
}

#[derive(Debug)]
enum RunError {
    Config(ConfigError),
    Physics(CssError),
    Sweep(SweepError),
    Io(std::io::Error),
    Mismatch(String),
}

impl RunError {
    fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => EXIT_INVALID,
            RunError::Physics(
                CssError::InvalidParameter { .. } | CssError::UnsupportedPhase { .. },
            ) => EXIT_INVALID,
            RunError::Physics(_) => EXIT_PHYSICS,
            RunError::Sweep(SweepError::Schema { .. } | SweepError::UnknownFigure(_)) => {
                EXIT_INVALID
            }
            RunError::Sweep(_) | RunError::Io(_) | RunError::Mismatch(_) => EXIT_FAILURE,
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "{e}"),
            RunError::Physics(e) => write!(f, "{e}"),
            RunError::Sweep(e) => write!(f, "{e}"),
            RunError::Io(e) => write!(f, "{e}"),
            RunError::Mismatch(m) => write!(f, "{m}"),
        }
    }
}

impl From<CssError> for RunError {
    fn from(e: CssError) -> Self {
        RunError::Physics(e)
    }
}

impl From<SweepError> for RunError {
    fn from(e: SweepError) -> Self {
        RunError::Sweep(e)
    }
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e)
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run_with_args<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
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
    let (command, flags) = match &cli.command {
        Sub::Purify(f) => (Command::Purify, f),
        Sub::Amplify(f) => (Command::Amplify, f),
        Sub::Concat(f) => (Command::Concat, f),
        Sub::Sweep(f) => (Command::Sweep, f),
        Sub::Verify(f) => (Command::Verify, f),
    };
    match parse_config(command, flags).and_then(|config| run(&config, out, err)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn parse_config(command: Command, flags: &Flags) -> Result<CliConfig, RunError> {
    let file = flags.config.as_deref().map(config::params_from_file);
    let from_flags = flags.params();
    let params = match (file, from_flags) {
        (None, Ok(f)) => f,
        (Some(Ok(file)), Ok(f)) => file.overridden_by(f),
        (file, from_flags) => {
            let mut problems = Vec::new();
            if let Some(Err(e)) = file {
                problems.extend(e.problems);
            }
            if let Err(e) = from_flags {
                problems.extend(e.problems);
            }
            return Err(ConfigError { problems }.into());
        }
    };
    Ok(config::validate(command, params)?)
}

fn run(config: &CliConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), RunError> {
    let p = &config.params;
    let report = match config.command {
        Command::Purify => run_purify(p, err)?,
        Command::Amplify => run_amplify(p)?,
        Command::Concat => run_concat(p)?,
        Command::Sweep => match run_sweep(p, out)? {
            Some(r) => r,
            None => return Ok(()),
        },
        Command::Verify => return run_verify_command(config, out),
    };
    out.write_all(report.render(config.format()).as_bytes())?;
    Ok(())
}

fn run_purify(p: &Params, err: &mut dyn Write) -> Result<Report, RunError> {
    let (alpha, phi, p_in, t) = (
        p.alpha.unwrap(),
        p.phi.unwrap(),
        p.p_in.unwrap(),
        p.t.unwrap(),
    );
    let eta_h = p.eta_h.unwrap_or(1.0);
    let mut state = MixedCss::new(CssParams::new(alpha, phi)?, p_in)?;
    if let Some(eta) = p.eta {
        state = apply_loss(&state, &ChannelSetting::new(eta)?)?;
    }
    let k = match p.k.unwrap() {
        KSetting::Value(k) => k,
        KSetting::Optimal => optimal_k(&state.params(), eta_h * (1.0 - t))?,
    };
    if t == 1.0 {
        let _ = writeln!(
            err,
            "warning: T = 1 sends no light to the detector; every outcome leaves the state unchanged"
        );
    }
    let tap = TapSetting::with_efficiency(t, eta_h, k)?;
    let out = purify_with_inefficiency(&state, &tap)?;
    let mut r = Report::new();
    r.push("p_in", Field::Num(p_in));
    if p.eta.is_some() {
        r.push("p_after_loss", Field::Num(state.p()));
    }
    r.push("p_out", Field::Num(out.state.p()));
    r.push("gain", Field::Num(out.state.p() / state.p()));
    r.push("out_alpha", Field::Num(out.state.alpha()));
    r.push("out_phi", Field::Num(out.state.phi()));
    r.push("k", Field::Num(k));
    r.push("theta", Field::Num(out.theta));
    r.push("density_css", Field::Num(out.density_css));
    r.push("density_mix", Field::Num(out.density_mix));
    r.push(
        "acceptance_density",
        Field::Num(out.acceptance_density(state.p())),
    );
    Ok(r)
}

fn run_amplify(p: &Params) -> Result<Report, RunError> {
    let (alpha, phi, p_in) = (p.alpha.unwrap(), p.phi.unwrap(), p.p_in.unwrap());
    let input = MixedCss::new(CssParams::new(alpha, phi)?, p_in)?;
    let out = amplify(&input)?;
    let mut r = Report::new();
    r.push("p_in", Field::Num(p_in));
    r.push("p_out", Field::Num(out.p()));
    r.push("gain", Field::Num(out.p() / p_in));
    r.push("out_alpha", Field::Num(out.alpha()));
    r.push("out_phi", Field::Num(out.phi()));
    if input.phi() != 0.0 {
        r.push("threshold", Field::Num(amplification_threshold(alpha)));
    }
    r.push("amplifies", Field::Bool(out.p() > p_in));
    Ok(r)
}

fn run_concat(p: &Params) -> Result<Report, RunError> {
    let (alpha, p_in) = (p.alpha.unwrap(), p.p_in.unwrap());
    let p_final = concatenate(p_in, alpha)?;
    let mut r = Report::new();
    r.push("alpha", Field::Num(alpha));
    r.push("p_in", Field::Num(p_in));
    r.push("p_final", Field::Num(p_final));
    r.push("delta", Field::Num(p_final - p_in));
    let verdict = if p_final > p_in {
        "net purification"
    } else {
        "no net purification"
    };
    r.push("verdict", Field::Text(verdict.to_string()));
    Ok(r)
}

fn run_sweep(p: &Params, out: &mut dyn Write) -> Result<Option<Report>, RunError> {
    let figure = p.figure_id.unwrap();
    let mut spec = SweepSpec::default_for(figure);
    let mut problems = Vec::new();
    for (key, value) in [
        ("alpha", p.alpha),
        ("phi", p.phi),
        ("p_in", p.p_in),
        ("T", p.t),
    ] {
        let Some(v) = value else { continue };
        match spec.fixed.get_mut(key) {
            Some(slot) => *slot = v,
            None => problems.push(format!("{key}: {figure} has no fixed parameter {key}")),
        }
    }
    if !problems.is_empty() {
        return Err(ConfigError { problems }.into());
    }
    let mut table = sweep::run_sweep(&spec)?;
    if p.reproducible.unwrap_or(false) {
        table = table.reproducible();
    }
    let target = p
        .output
        .clone()
        .unwrap_or_else(|| PathBuf::from(figure.file_name()));
    if target.as_os_str() == "-" {
        sweep::write_csv(&table, out)?;
        return Ok(None);
    }
    let path = if target.is_dir() {
        target.join(figure.file_name())
    } else {
        target
    };
    sweep::emit_csv(&table, &path)?;
    let degenerate = table
        .column("degenerate")
        .map(|c| c.iter().filter(|f| **f != 0.0).count())
        .unwrap_or(0);
    let mut r = Report::new();
    r.push("figure_id", Field::Text(figure.to_string()));
    r.push("path", Field::Text(path.display().to_string()));
    r.push("rows", Field::Num(table.rows().len() as f64));
    r.push("degenerate_rows", Field::Num(degenerate as f64));
    Ok(Some(r))
}

fn run_verify_command(config: &CliConfig, out: &mut dyn Write) -> Result<(), RunError> {
    let mut vc = VerifyConfig::default();
    if let Some(seed) = config.params.seed {
        vc.seed = seed;
    }
    if let Some(draws) = config.params.draws {
        vc.draws = draws;
    }
    let result = run_verify(&vc)?;
    out.write_all(report::render_verify(&result, config.format()).as_bytes())?;
    if result.passed() {
        Ok(())
    } else {
        let failed: Vec<_> = result
            .checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.name)
            .collect();
        Err(RunError::Mismatch(format!(
            "tolerance exceeded in {}",
            failed.join(", ")
        )))
    }
}
