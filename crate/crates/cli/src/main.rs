//! `qres` — compute information-based resource quantifiers of finite
//! dimensional quantum states, sweep resource-destroying monitorings, balance
//! the information books of a monitoring through its dilation, and run the
//! randomized property suites.

mod report;
mod statefile;
mod suites;

use std::f64::consts::LN_2;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use qres::channels::{self, Destroyer, MonitoringStrength};
use qres::dilation::flow_ledger;
use qres::entropy::information;
use qres::quantifiers::{self, Context, Scope};
use qres::{Diagnostics, Dims, Nats, ObservableBasis, PureState, QState, SearchConfig, Subsystem};

use report::{Format, LedgerOut, MonitorRow, Report};
use statefile::{load_state, parse_side, preset_state, resolve_basis};

/// A user-facing failure carrying the process exit code: 2 for parse errors,
/// 3 for dimension errors, 4 for an unknown quantifier.
#[derive(Debug, Clone)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> CliError {
        CliError { code: 2, message: message.into() }
    }

    pub fn dimension(message: impl Into<String>) -> CliError {
        CliError { code: 3, message: message.into() }
    }

    pub fn unknown(message: impl Into<String>) -> CliError {
        CliError { code: 4, message: message.into() }
    }
}

impl From<qres::Error> for CliError {
    fn from(e: qres::Error) -> CliError {
        use qres::Error as E;
        let code = match &e {
            E::DimensionMismatch(_)
            | E::NotBipartite(_)
            | E::WrongDimensions(_)
            | E::DimensionUnsupported(_) => 3,
            E::UnknownPairing(_) => 4,
            _ => 2,
        };
        CliError { code, message: e.to_string() }
    }
}

const LONG_HELP: &str = "\
State files are JSON documents:
  {\"dims\": [dA, dB], \"label\": \"optional\", \"matrix\": [[[re, im], ...], ...]}
with a (dA*dB) x (dA*dB) density matrix of [re, im] pairs; basis indices run
over |a>|b> with b fastest. Single-partite states use dims [d, 1].

Basis files are JSON documents:
  {\"subsystem\": \"a\"|\"b\", \"vectors\": [[[re, im], ...], ...]}
listing orthonormal column vectors. Named bases: z (computational),
x (qubit Fourier), fourier (dimension-matched Fourier).

Presets: bell | ghz2 | werner:p | product:a,b (symbols 0 1 + -) | maxmixed:d.

CSV columns:
  compute  command,state,quantifier,value_nats,value_bits
  monitor  command,state,quantifier,eps,value_nats,value_bits,info_nats
  flow     command,state,eps,ancilla_dim,i_initial_nats,i_final_nats,\
delta_i_x_nats,delta_i_mutual_nats,delta_i_cond_nats,conservation_residual
  verify   suite,property,pass,worst_residual,tolerance

Exit codes: 0 success; 1 verification or monotonicity failure; 2 parse error;
3 dimension error; 4 unknown quantifier; 141 output pipe closed early.";

#[derive(Parser)]
#[command(
    name = "qres",
    version,
    about = "Information-based resource quantifiers for finite-dimensional quantum states",
    after_long_help = LONG_HELP
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "table")]
    format: Format,

    /// Seed for every randomized search and sampled check.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,

    /// Tolerance for the monitor sweep's non-increase check.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one quantifier on a state.
    Compute(ComputeArgs),
    /// Sweep a monitoring strength and track a quantifier along it.
    Monitor(MonitorArgs),
    /// Balance the information books of one monitoring via its dilation.
    Flow(FlowArgs),
    /// Run the randomized property suites.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct StateArgs {
    /// Path to a state file (see --help for the format).
    #[arg(long, value_name = "FILE", conflicts_with = "preset")]
    state: Option<PathBuf>,

    /// Built-in state: bell | ghz2 | werner:p | product:a,b | maxmixed:d.
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
}

impl StateArgs {
    fn resolve(&self) -> Result<(QState, String), CliError> {
        match (&self.state, &self.preset) {
            (Some(path), None) => load_state(path),
            (None, Some(name)) => preset_state(name),
            _ => Err(CliError::parse("provide exactly one of --state or --preset")),
        }
    }
}

#[derive(Args)]
struct SearchArgs {
    /// Qubit search grid as "THETA,PHI" point counts.
    #[arg(long, value_name = "T,P")]
    grid: Option<String>,

    /// Random restarts for searches on sides of dimension > 2.
    #[arg(long)]
    restarts: Option<usize>,
}

impl SearchArgs {
    fn config(&self, seed: u64) -> Result<SearchConfig, CliError> {
        let mut cfg = SearchConfig { seed, ..SearchConfig::default() };
        if let Some(spec) = &self.grid {
            let (t, p) = spec
                .split_once(',')
                .ok_or_else(|| CliError::parse(format!("--grid expects \"THETA,PHI\", got {spec:?}")))?;
            cfg.grid_theta = t
                .trim()
                .parse()
                .map_err(|_| CliError::parse(format!("--grid theta count {t:?} is not a whole number")))?;
            cfg.grid_phi = p
                .trim()
                .parse()
                .map_err(|_| CliError::parse(format!("--grid phi count {p:?} is not a whole number")))?;
            if cfg.grid_theta < 2 || cfg.grid_phi < 2 {
                return Err(CliError::parse("--grid needs at least 2 points per angle"));
            }
        }
        if let Some(r) = self.restarts {
            if r == 0 {
                return Err(CliError::parse("--restarts must be at least 1"));
            }
            cfg.restarts = r;
        }
        Ok(cfg)
    }
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    state: StateArgs,

    /// One of: info, coherence, entanglement, eof, discord, discord-sym,
    /// irreality, rbn, generic.
    #[arg(long, short = 'q')]
    quantifier: String,

    /// Side the quantifier refers to: a | b (generic also accepts global).
    #[arg(long, default_value = "a")]
    side: String,

    /// Basis for the chosen side: z | x | fourier | FILE. Omitting it selects
    /// the computational basis for coherence/irreality and the optimized
    /// quantity for discord, discord-sym and rbn.
    #[arg(long)]
    basis: Option<String>,

    /// B-side basis for the two-sided quantifiers (discord-sym, rbn).
    #[arg(long)]
    basis_b: Option<String>,

    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args)]
struct MonitorArgs {
    #[command(flatten)]
    state: StateArgs,

    /// Quantifier tracked along the sweep (same names as compute).
    #[arg(long, short = 'q')]
    quantifier: String,

    /// Side the quantifier refers to: a | b (generic also accepts global).
    #[arg(long, default_value = "a")]
    side: String,

    /// Basis for the tracked quantifier: z | x | fourier | FILE.
    #[arg(long)]
    basis: Option<String>,

    /// B-side basis for the two-sided quantifiers.
    #[arg(long)]
    basis_b: Option<String>,

    /// What the monitoring destroys: z | x | fourier | inc | FILE.
    #[arg(long, default_value = "z")]
    destroyer: String,

    /// Side the destroyer acts on: a | b.
    #[arg(long, default_value = "a")]
    destroyer_side: String,

    /// Strength grid "START:STOP:STEPS" (STEPS points, ends included) or a
    /// single value.
    #[arg(long, default_value = "0:1:11")]
    eps: String,

    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args)]
struct FlowArgs {
    #[command(flatten)]
    state: StateArgs,

    /// What the monitoring destroys: z | x | fourier | inc | FILE.
    #[arg(long, default_value = "z")]
    destroyer: String,

    /// Side the destroyer acts on: a | b.
    #[arg(long, default_value = "a")]
    destroyer_side: String,

    /// Monitoring strength in [0, 1].
    #[arg(long, default_value_t = 1.0)]
    eps: f64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite: entropy | channels | dilation | quantifiers | optimize | all.
    #[arg(long, default_value = "all")]
    suite: String,

    /// Sample count per randomized property.
    #[arg(long, default_value_t = 50)]
    samples: usize,
}

/// A quantifier with its side/basis arguments resolved against the state's
/// dimensions, ready to evaluate (repeatedly, for sweeps).
#[derive(Debug)]
enum ResolvedQuantifier {
    Info,
    Coherence(ObservableBasis),
    Irreality(ObservableBasis),
    Entanglement,
    Eof,
    DiscordBasis(ObservableBasis),
    DiscordOptimized(Subsystem),
    DiscordSymBasis(Context),
    DiscordSymOptimized,
    RbnContext(Context),
    RbnOptimized,
    Generic(Scope),
}

struct Evaluated {
    value: Nats,
    basis: Option<ObservableBasis>,
    context: Option<Context>,
    diagnostics: Option<Diagnostics>,
}

fn resolve_quantifier(
    name: &str,
    side_arg: &str,
    basis_arg: Option<&str>,
    basis_b_arg: Option<&str>,
    dims: Dims,
) -> Result<ResolvedQuantifier, CliError> {
    let one_sided_basis = |default: Option<&str>| -> Result<ObservableBasis, CliError> {
        let side = parse_side(side_arg)?;
        let arg = basis_arg.or(default).ok_or_else(|| {
            CliError::parse(format!("quantifier {name:?} needs --basis (z | x | fourier | FILE)"))
        })?;
        resolve_basis(arg, side, dims.dim_of(side))
    };
    let context = || -> Result<Option<Context>, CliError> {
        match (basis_arg, basis_b_arg) {
            (Some(a), Some(b)) => {
                let ba = resolve_basis(a, Subsystem::A, dims.d_a)?;
                let bb = resolve_basis(b, Subsystem::B, dims.d_b)?;
                Ok(Some(Context::new(ba, bb)?))
            }
            (None, None) => Ok(None),
            _ => Err(CliError::parse(format!(
                "quantifier {name:?} takes --basis and --basis-b together, or neither"
            ))),
        }
    };

    Ok(match name {
        "info" => ResolvedQuantifier::Info,
        "coherence" => ResolvedQuantifier::Coherence(one_sided_basis(Some("z"))?),
        "irreality" => ResolvedQuantifier::Irreality(one_sided_basis(Some("z"))?),
        "entanglement" => ResolvedQuantifier::Entanglement,
        "eof" => ResolvedQuantifier::Eof,
        "discord" => match basis_arg {
            Some(_) => ResolvedQuantifier::DiscordBasis(one_sided_basis(None)?),
            None => ResolvedQuantifier::DiscordOptimized(parse_side(side_arg)?),
        },
        "discord-sym" => match context()? {
            Some(ctx) => ResolvedQuantifier::DiscordSymBasis(ctx),
            None => ResolvedQuantifier::DiscordSymOptimized,
        },
        "rbn" => match context()? {
            Some(ctx) => ResolvedQuantifier::RbnContext(ctx),
            None => ResolvedQuantifier::RbnOptimized,
        },
        "generic" => ResolvedQuantifier::Generic(match side_arg {
            "a" | "A" => Scope::A,
            "b" | "B" => Scope::B,
            "global" => Scope::Global,
            other => {
                return Err(CliError::parse(format!(
                    "--side for generic must be a, b or global, got {other:?}"
                )))
            }
        }),
        other => {
            return Err(CliError::unknown(format!(
                "unknown quantifier {other:?} (expected info, coherence, entanglement, eof, \
                 discord, discord-sym, irreality, rbn or generic)"
            )))
        }
    })
}

fn evaluate(s: &QState, q: &ResolvedQuantifier, cfg: &SearchConfig) -> Result<Evaluated, CliError> {
    let plain = |value: Nats| Evaluated { value, basis: None, context: None, diagnostics: None };
    let with_basis = |value: Nats, basis: &ObservableBasis| Evaluated {
        value,
        basis: Some(basis.clone()),
        context: None,
        diagnostics: None,
    };
    let with_context = |value: Nats, ctx: &Context| Evaluated {
        value,
        basis: None,
        context: Some(ctx.clone()),
        diagnostics: None,
    };
    let from_report = |r: quantifiers::QuantifierReport| Evaluated {
        value: r.value,
        basis: r.basis,
        context: r.context,
        diagnostics: r.diagnostics,
    };

    Ok(match q {
        ResolvedQuantifier::Info => plain(information(s)),
        ResolvedQuantifier::Coherence(b) => with_basis(quantifiers::coherence(s, b)?, b),
        ResolvedQuantifier::Irreality(b) => with_basis(quantifiers::irreality(s, b)?, b),
        ResolvedQuantifier::Entanglement => {
            let psi = PureState::from_state(s)?;
            plain(quantifiers::entanglement_pure(&psi)?)
        }
        ResolvedQuantifier::Eof => plain(quantifiers::eof_two_qubit(s)?),
        ResolvedQuantifier::DiscordBasis(b) => with_basis(quantifiers::discord_basis(s, b)?, b),
        ResolvedQuantifier::DiscordOptimized(side) => {
            from_report(quantifiers::discord_oneway(s, *side, cfg)?)
        }
        ResolvedQuantifier::DiscordSymBasis(ctx) => {
            with_context(quantifiers::discord_symmetric_basis(s, ctx)?, ctx)
        }
        ResolvedQuantifier::DiscordSymOptimized => {
            from_report(quantifiers::discord_symmetric(s, cfg)?)
        }
        ResolvedQuantifier::RbnContext(ctx) => {
            with_context(quantifiers::rbn_contextual(s, ctx)?, ctx)
        }
        ResolvedQuantifier::RbnOptimized => from_report(quantifiers::rbn(s, cfg)?),
        ResolvedQuantifier::Generic(scope) => {
            from_report(quantifiers::generic_correlation(s, *scope, cfg)?)
        }
    })
}

fn resolve_destroyer(arg: &str, side_arg: &str, dims: Dims) -> Result<Destroyer, CliError> {
    if arg == "inc" {
        return Ok(Destroyer::Incompatible);
    }
    let side = parse_side(side_arg)?;
    Ok(Destroyer::Basis(resolve_basis(arg, side, dims.dim_of(side))?))
}

/// Parses "START:STOP:STEPS" into STEPS evenly spaced points with both ends
/// included, or a bare number into a single point.
fn parse_eps_spec(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = |what: &str| CliError::parse(format!("--eps {spec:?}: {what}"));
    if !spec.contains(':') {
        let v: f64 = spec.trim().parse().map_err(|_| bad("not a number"))?;
        return Ok(vec![v]);
    }
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad("expected START:STOP:STEPS"));
    }
    let start: f64 = parts[0].trim().parse().map_err(|_| bad("START is not a number"))?;
    let stop: f64 = parts[1].trim().parse().map_err(|_| bad("STOP is not a number"))?;
    let steps: usize = parts[2].trim().parse().map_err(|_| bad("STEPS is not a whole number"))?;
    if steps == 0 {
        return Err(bad("STEPS must be at least 1"));
    }
    if steps == 1 {
        if (start - stop).abs() > f64::EPSILON {
            return Err(bad("a single step needs START = STOP"));
        }
        return Ok(vec![start]);
    }
    Ok((0..steps)
        .map(|i| start + (stop - start) * i as f64 / (steps - 1) as f64)
        .collect())
}

fn cmd_compute(args: &ComputeArgs, cli: &Cli) -> Result<i32, CliError> {
    let (s, label) = args.state.resolve()?;
    let cfg = args.search.config(cli.seed)?;
    let resolved = resolve_quantifier(
        &args.quantifier,
        &args.side,
        args.basis.as_deref(),
        args.basis_b.as_deref(),
        s.dims(),
    )?;
    let ev = evaluate(&s, &resolved, &cfg)?;

    let mut report = Report::new("compute", &label, cli.seed).with_value(ev.value);
    report.quantifier = Some(args.quantifier.clone());
    if let Some(b) = &ev.basis {
        report = report.with_basis(b);
    }
    if let Some(ctx) = &ev.context {
        report = report.with_context(ctx);
    }
    report = report.with_diagnostics(ev.diagnostics.as_ref());
    emit(&report.render(cli.format));
    Ok(0)
}

fn cmd_monitor(args: &MonitorArgs, cli: &Cli) -> Result<i32, CliError> {
    let (s, label) = args.state.resolve()?;
    let cfg = args.search.config(cli.seed)?;
    let resolved = resolve_quantifier(
        &args.quantifier,
        &args.side,
        args.basis.as_deref(),
        args.basis_b.as_deref(),
        s.dims(),
    )?;
    let destroyer = resolve_destroyer(&args.destroyer, &args.destroyer_side, s.dims())?;
    let eps_grid = parse_eps_spec(&args.eps)?;

    let mut rows = Vec::with_capacity(eps_grid.len());
    let mut max_step_increase = 0.0f64;
    let mut prev: Option<f64> = None;
    for &e in &eps_grid {
        let eps = MonitoringStrength::new(e)?;
        let monitored = channels::monitoring(&s, &destroyer, eps)?;
        let ev = evaluate(&monitored, &resolved, &cfg)?;
        rows.push(MonitorRow {
            eps: e,
            value_nats: ev.value.0,
            value_bits: ev.value.0 / LN_2,
            info_nats: information(&monitored).0,
        });
        if let Some(p) = prev {
            max_step_increase = max_step_increase.max(ev.value.0 - p);
        }
        prev = Some(ev.value.0);
    }
    let monotone = max_step_increase <= cli.tol;

    let mut report = Report::new("monitor", &label, cli.seed);
    report.quantifier = Some(args.quantifier.clone());
    report.rows = Some(rows);
    report.max_step_increase = Some(max_step_increase);
    report.monotone = Some(monotone);
    emit(&report.render(cli.format));

    if monotone {
        Ok(0)
    } else {
        eprintln!(
            "error: quantifier increased by {max_step_increase:.3e} along the sweep (tolerance {:.1e})",
            cli.tol
        );
        Ok(1)
    }
}

fn cmd_flow(args: &FlowArgs, cli: &Cli) -> Result<i32, CliError> {
    let (s, label) = args.state.resolve()?;
    let destroyer = resolve_destroyer(&args.destroyer, &args.destroyer_side, s.dims())?;
    let eps = MonitoringStrength::new(args.eps)?;
    let ledger = flow_ledger(&s, &destroyer, eps)?;

    let mut report = Report::new("flow", &label, cli.seed);
    report.ledger = Some(LedgerOut::from_core(&ledger));
    emit(&report.render(cli.format));
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs, cli: &Cli) -> Result<i32, CliError> {
    let results = suites::run_suite(&args.suite, args.samples, cli.seed)?;
    let passed = results.iter().filter(|r| r.pass).count();
    let all_pass = passed == results.len();

    match cli.format {
        Format::Json => {
            let doc = serde_json::json!({
                "tool_version": env!("CARGO_PKG_VERSION"),
                "command": "verify",
                "suite": args.suite,
                "samples": args.samples,
                "seed": cli.seed,
                "results": results,
                "passed": all_pass,
            });
            emit(&serde_json::to_string_pretty(&doc).expect("serializable report"));
        }
        Format::Csv => {
            emit("suite,property,pass,worst_residual,tolerance");
            for r in &results {
                emit(&format!(
                    "{},{},{},{},{}",
                    r.suite, r.name, r.pass, r.worst_residual, r.tolerance
                ));
            }
        }
        Format::Table => {
            for r in &results {
                emit(&format!(
                    "{} {:<12} {:<26} worst {:>12.3e}  (tol {:.1e})",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.suite,
                    r.name,
                    r.worst_residual,
                    r.tolerance
                ));
            }
            emit(&format!(
                "{passed}/{} properties passed  (suite {}, samples {}, seed {}, version {})",
                results.len(),
                args.suite,
                args.samples,
                cli.seed,
                env!("CARGO_PKG_VERSION")
            ));
        }
    }
    Ok(if all_pass { 0 } else { 1 })
}

/// Writes one line to stdout. When the consumer has closed the pipe (for
/// example `qres ... | head`), exits with the conventional 128+SIGPIPE code
/// instead of panicking.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if writeln!(out, "{text}").is_err() {
        std::process::exit(141);
    }
}

fn dispatch(cli: &Cli) -> Result<i32, CliError> {
    match &cli.command {
        Command::Compute(args) => cmd_compute(args, cli),
        Command::Monitor(args) => cmd_monitor(args, cli),
        Command::Flow(args) => cmd_flow(args, cli),
        Command::Verify(args) => cmd_verify(args, cli),
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    };
    std::process::exit(code);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eps_spec_parses_sweeps_and_single_values() {
        assert_eq!(parse_eps_spec("0:1:5").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_eps_spec("0.5").unwrap(), vec![0.5]);
        assert_eq!(parse_eps_spec("1:1:1").unwrap(), vec![1.0]);
        let eleven = parse_eps_spec("0:1:11").unwrap();
        assert_eq!(eleven.len(), 11);
        assert!((eleven[1] - 0.1).abs() < 1e-15);
        assert_eq!(parse_eps_spec("0:1:0").unwrap_err().code, 2);
        assert_eq!(parse_eps_spec("0:1").unwrap_err().code, 2);
        assert_eq!(parse_eps_spec("a:1:3").unwrap_err().code, 2);
    }

    #[test]
    fn unknown_quantifier_maps_to_exit_code_4() {
        let dims = Dims { d_a: 2, d_b: 2 };
        let err = resolve_quantifier("bogus", "a", None, None, dims).unwrap_err();
        assert_eq!(err.code, 4);
        assert!(err.message.contains("bogus"));
    }

    #[test]
    fn two_sided_quantifiers_reject_half_a_context() {
        let dims = Dims { d_a: 2, d_b: 2 };
        let err = resolve_quantifier("rbn", "a", Some("z"), None, dims).unwrap_err();
        assert_eq!(err.code, 2);
        let err = resolve_quantifier("discord-sym", "a", None, Some("z"), dims).unwrap_err();
        assert_eq!(err.code, 2);
    }

    #[test]
    fn core_errors_map_to_documented_exit_codes() {
        let dims_err: CliError = qres::Error::DimensionMismatch("x".into()).into();
        assert_eq!(dims_err.code, 3);
        let pairing_err: CliError = qres::Error::UnknownPairing("x".into()).into();
        assert_eq!(pairing_err.code, 4);
        let eps_err: CliError = qres::Error::EpsilonOutOfRange(1.5).into();
        assert_eq!(eps_err.code, 2);
    }

    #[test]
    fn grid_override_parses_and_validates() {
        let search = SearchArgs { grid: Some("31,61".into()), restarts: Some(4) };
        let cfg = search.config(9).unwrap();
        assert_eq!((cfg.grid_theta, cfg.grid_phi, cfg.restarts, cfg.seed), (31, 61, 4, 9));
        let bad = SearchArgs { grid: Some("31".into()), restarts: None };
        assert_eq!(bad.config(9).unwrap_err().code, 2);
        let tiny = SearchArgs { grid: Some("1,5".into()), restarts: None };
        assert_eq!(tiny.config(9).unwrap_err().code, 2);
    }
}
