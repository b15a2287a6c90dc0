//! `guesswork` — exponents and finite-length moments of multi-agent
//! brute-force guessing with erasure or bit-flip side information.
//!
//! Subcommands: `exponent` (one analytic rate), `sweep` (figure-ready
//! CSV over a channel-parameter grid), `exact` (exact finite-n moments),
//! `simulate` (seeded Monte Carlo with bootstrap intervals), `verify`
//! (the self-check suite). Exit codes: 0 success, 1 verification
//! failure, 2 usage or configuration error, 3 capacity cap.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use guesswork::channels::{AgentCount, ChannelSpec};
use guesswork::exponents::{exponent, MomentOrder, SchemeSpec};
use guesswork::moments::{exact_moment, mc_estimate_moment, slope_report, MomentRecord};
use guesswork::verify::{run as run_verification, FaultInjection, GridDensity, VerifyOptions};

mod output;
use output::{
    write_csv, write_json, write_verify_json, write_verify_text, ResolvedConfig, ResultRow,
};

#[derive(Parser, Debug)]
#[command(name = "guesswork", version, about)]
struct Cli {
    /// JSON file with default option values; command-line flags override it.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Asymptotic exponent of E[G^alpha] for one parameter point.
    Exponent(PointArgs),
    /// Exponents for all three schemes over a channel-parameter grid.
    Sweep(SweepArgs),
    /// Exact finite-n moments E[G^alpha].
    Exact(ExactArgs),
    /// Seeded Monte Carlo moment estimates with bootstrap intervals.
    Simulate(SimulateArgs),
    /// Run the cross-check suite.
    Verify(VerifyArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SchemeArg {
    Single,
    Centralized,
    Decentralized,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ChannelArg {
    Bec,
    Bsc,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum GridArg {
    Normal,
    Fine,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FaultArg {
    TieBreak,
}

#[derive(Args, Debug, Clone)]
struct CommonArgs {
    /// Attack scheme.
    #[arg(long, value_enum)]
    scheme: Option<SchemeArg>,

    /// Side-information channel family.
    #[arg(long, value_enum)]
    channel: Option<ChannelArg>,

    /// Channel parameter: erasure probability (bec) or flip probability (bsc).
    #[arg(long)]
    param: Option<f64>,

    /// Number of agents. Defaults to 1 for --scheme single.
    #[arg(long)]
    m: Option<u32>,

    /// Moment order alpha of the guess count (default 1).
    #[arg(long)]
    alpha: Option<f64>,

    /// Output file; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Output format (default csv).
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Args, Debug)]
struct PointArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Channel-parameter grid as start:stop:step (default 0:1:0.01 for
    /// bec, 0:0.5:0.005 for bsc).
    #[arg(long, value_name = "START:STOP:STEP")]
    grid: Option<String>,
}

#[derive(Args, Debug)]
struct ExactArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// String length, a single value like 12 or an inclusive range 4:22.
    #[arg(long, value_name = "N or A:B")]
    n: Option<String>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// String length.
    #[arg(long, value_name = "N")]
    n: Option<String>,

    /// Monte Carlo trials.
    #[arg(long)]
    trials: Option<u64>,

    /// Base seed for the deterministic trial streams (default 0).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Grid density for the continuous checks.
    #[arg(long, value_enum)]
    grid: Option<GridArg>,

    /// Largest string length for the exhaustive rank-vs-oracle sweeps.
    #[arg(long, value_name = "N")]
    max_rank_n: Option<u32>,

    /// Negative control: inject a deliberate fault and expect failure.
    #[arg(long, value_enum)]
    inject_fault: Option<FaultArg>,

    /// Output file; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Output format (default human-readable text; json for a report).
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

/// Optional JSON defaults, mirroring the command-line flags. A `command`
/// field is accepted for round-tripping saved configurations, but the
/// subcommand always comes from the command line.
#[derive(Deserialize, Debug, Default, Clone)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    #[serde(default)]
    #[allow(dead_code)]
    command: Option<String>,
    scheme: Option<String>,
    channel: Option<String>,
    param: Option<f64>,
    m: Option<u32>,
    alpha: Option<f64>,
    n: Option<String>,
    grid: Option<String>,
    trials: Option<u64>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    format: Option<String>,
}

#[derive(Debug)]
enum CliError {
    /// Bad flags or configuration: exit 2.
    Usage(String),
    /// A documented size cap was exceeded: exit 3.
    Capacity(String),
    /// Verification found failures: exit 1.
    VerificationFailed,
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::VerificationFailed => 1,
            CliError::Usage(_) => 2,
            CliError::Capacity(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Capacity(msg) => write!(f, "{msg}"),
            CliError::VerificationFailed => write!(f, "verification failed"),
        }
    }
}

impl From<guesswork::Error> for CliError {
    fn from(e: guesswork::Error) -> Self {
        match e {
            guesswork::Error::Capacity { .. } => CliError::Capacity(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("i/o error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::VerificationFailed) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Exponent(args) => cmd_exponent(args, &file),
        Command::Sweep(args) => cmd_sweep(args, &file),
        Command::Exact(args) => cmd_exact(args, &file),
        Command::Simulate(args) => cmd_simulate(args, &file),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn load_config(path: Option<&std::path::Path>) -> Result<FileConfig, CliError> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

struct Resolved {
    scheme: Option<SchemeSpec>,
    channel: Option<ChannelSpec>,
    alpha: MomentOrder,
    out: Option<PathBuf>,
    format: FormatArg,
    m: u32,
}

/// Merge command-line flags over config-file defaults and validate the
/// shared fields. `default_m` supplies the agent count for multi-agent
/// schemes when neither source names one.
fn resolve_common(
    common: &CommonArgs,
    file: &FileConfig,
    default_m: Option<u32>,
) -> Result<Resolved, CliError> {
    let scheme_arg = match (common.scheme, file.scheme.as_deref()) {
        (Some(s), _) => Some(s),
        (None, Some(text)) => Some(parse_scheme(text)?),
        (None, None) => None,
    };
    let channel_arg = match (common.channel, file.channel.as_deref()) {
        (Some(c), _) => Some(c),
        (None, Some(text)) => Some(parse_channel_kind(text)?),
        (None, None) => None,
    };
    let format = match (common.format, file.format.as_deref()) {
        (Some(f), _) => f,
        (None, Some(text)) => parse_format(text)?,
        (None, None) => FormatArg::Csv,
    };
    let param = common.param.or(file.param);
    let alpha = MomentOrder::new(common.alpha.or(file.alpha).unwrap_or(1.0))?;

    let m_flag = common.m.or(file.m);
    let m = match scheme_arg {
        Some(SchemeArg::Single) => match m_flag {
            Some(1) | None => 1,
            Some(_) => return Err(usage("--scheme single requires --m 1")),
        },
        Some(_) => m_flag
            .or(default_m)
            .ok_or_else(|| usage("--m is required for multi-agent schemes"))?,
        // No scheme flag (sweep covers all three schemes itself).
        None => m_flag.or(default_m).unwrap_or(1),
    };
    let agents = AgentCount::new(m)?;
    let scheme = scheme_arg.map(|s| match s {
        SchemeArg::Single => SchemeSpec::single(),
        SchemeArg::Centralized => SchemeSpec::centralized(agents),
        SchemeArg::Decentralized => SchemeSpec::decentralized(agents),
    });
    let channel = match (channel_arg, param) {
        (Some(kind), Some(p)) => Some(build_channel(kind, p)?),
        (Some(_), None) => None,
        _ => None,
    };
    Ok(Resolved {
        scheme,
        channel,
        alpha,
        out: common.out.clone().or_else(|| file.out.clone()),
        format,
        m,
    })
}

fn parse_scheme(text: &str) -> Result<SchemeArg, CliError> {
    match text {
        "single" => Ok(SchemeArg::Single),
        "centralized" => Ok(SchemeArg::Centralized),
        "decentralized" => Ok(SchemeArg::Decentralized),
        other => Err(usage(format!("unknown scheme {other:?}"))),
    }
}

fn parse_channel_kind(text: &str) -> Result<ChannelArg, CliError> {
    match text {
        "bec" => Ok(ChannelArg::Bec),
        "bsc" => Ok(ChannelArg::Bsc),
        other => Err(usage(format!("unknown channel {other:?}"))),
    }
}

fn parse_format(text: &str) -> Result<FormatArg, CliError> {
    match text {
        "csv" => Ok(FormatArg::Csv),
        "json" => Ok(FormatArg::Json),
        other => Err(usage(format!("unknown format {other:?}"))),
    }
}

fn build_channel(kind: ChannelArg, param: f64) -> Result<ChannelSpec, CliError> {
    Ok(match kind {
        ChannelArg::Bec => ChannelSpec::bec(param)?,
        ChannelArg::Bsc => ChannelSpec::bsc(param)?,
    })
}

/// Inclusive `a:b` range or a single value.
fn parse_n_spec(text: &str) -> Result<(u32, u32), CliError> {
    let parse_u32 = |s: &str| {
        s.trim()
            .parse::<u32>()
            .map_err(|_| usage(format!("invalid length {s:?}")))
    };
    match text.split_once(':') {
        None => {
            let n = parse_u32(text)?;
            Ok((n, n))
        }
        Some((a, b)) => {
            let (a, b) = (parse_u32(a)?, parse_u32(b)?);
            if a > b {
                return Err(usage(format!("empty length range {text:?}")));
            }
            Ok((a, b))
        }
    }
}

fn parse_grid_spec(text: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        return Err(usage(format!("grid must be start:stop:step, got {text:?}")));
    };
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| usage(format!("invalid grid number {s:?}")))
    };
    let (start, stop, step) = (parse(start)?, parse(stop)?, parse(step)?);
    if !step.is_finite() || step <= 0.0 || stop < start {
        return Err(usage("grid requires step > 0 and stop >= start"));
    }
    let count = ((stop - start) / step).round().max(0.0) as u64;
    let mut values = Vec::new();
    for i in 0..=count {
        let v = start + i as f64 * step;
        if v > stop + step * 1e-6 {
            break;
        }
        values.push(v.min(stop));
    }
    if values.is_empty() {
        return Err(usage("grid is empty"));
    }
    Ok(values)
}

fn write_output(
    out: Option<&PathBuf>,
    write: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let mut file = fs::File::create(path)
                .map_err(|e| usage(format!("cannot create {}: {e}", path.display())))?;
            write(&mut file)?;
            Ok(())
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)?;
            Ok(())
        }
    }
}

fn exponent_row(scheme: &SchemeSpec, channel: &ChannelSpec, alpha: MomentOrder) -> Result<ResultRow, CliError> {
    let result = exponent(scheme, channel, alpha)?;
    Ok(ResultRow {
        scheme: scheme.mode_name().to_string(),
        channel_kind: channel.kind_name().to_string(),
        channel_param: channel.param(),
        m: scheme.agents().get(),
        alpha: alpha.get(),
        n: None,
        value: result.value,
        method: result.method.name().to_string(),
        lambda_star: result.lambda_star,
        ci_low: None,
        ci_high: None,
        seed: None,
    })
}

fn cmd_exponent(args: PointArgs, file: &FileConfig) -> Result<(), CliError> {
    let resolved = resolve_common(&args.common, file, None)?;
    let scheme = resolved.scheme.ok_or_else(|| usage("--scheme is required"))?;
    let channel = resolved
        .channel
        .ok_or_else(|| usage("--channel and --param are required"))?;
    let rows = vec![exponent_row(&scheme, &channel, resolved.alpha)?];
    let config = ResolvedConfig {
        command: "exponent".into(),
        scheme: Some(scheme.mode_name().into()),
        channel: Some(channel.kind_name().into()),
        param: Some(channel.param()),
        m: Some(scheme.agents().get()),
        alpha: Some(resolved.alpha.get()),
        format: format_name(resolved.format).into(),
        ..ResolvedConfig::default()
    };
    emit_rows(&resolved, &config, &rows, None)
}

fn cmd_sweep(args: SweepArgs, file: &FileConfig) -> Result<(), CliError> {
    let resolved = resolve_common(&args.common, file, Some(2))?;
    let kind = match (args.common.channel, file.channel.as_deref()) {
        (Some(c), _) => c,
        (None, Some(text)) => parse_channel_kind(text)?,
        (None, None) => return Err(usage("--channel is required")),
    };
    let grid_text = args
        .grid
        .or_else(|| file.grid.clone())
        .unwrap_or_else(|| match kind {
            ChannelArg::Bec => "0:1:0.01".to_string(),
            ChannelArg::Bsc => "0:0.5:0.005".to_string(),
        });
    let params = parse_grid_spec(&grid_text)?;
    let agents = AgentCount::new(resolved.m)?;
    let schemes = [
        SchemeSpec::single(),
        SchemeSpec::centralized(agents),
        SchemeSpec::decentralized(agents),
    ];
    let mut rows = Vec::with_capacity(params.len() * schemes.len());
    for &p in &params {
        let channel = build_channel(kind, p)?;
        for scheme in &schemes {
            rows.push(exponent_row(scheme, &channel, resolved.alpha)?);
        }
    }
    let config = ResolvedConfig {
        command: "sweep".into(),
        channel: Some(match kind {
            ChannelArg::Bec => "bec".into(),
            ChannelArg::Bsc => "bsc".into(),
        }),
        m: Some(resolved.m),
        alpha: Some(resolved.alpha.get()),
        grid: Some(grid_text),
        format: format_name(resolved.format).into(),
        ..ResolvedConfig::default()
    };
    emit_rows(&resolved, &config, &rows, None)
}

fn cmd_exact(args: ExactArgs, file: &FileConfig) -> Result<(), CliError> {
    let resolved = resolve_common(&args.common, file, None)?;
    let scheme = resolved.scheme.ok_or_else(|| usage("--scheme is required"))?;
    let channel = resolved
        .channel
        .ok_or_else(|| usage("--channel and --param are required"))?;
    let n_text = args
        .n
        .or_else(|| file.n.clone())
        .ok_or_else(|| usage("--n is required"))?;
    let (n_lo, n_hi) = parse_n_spec(&n_text)?;

    let mut records: Vec<MomentRecord> = Vec::new();
    for n in n_lo..=n_hi {
        records.push(exact_moment(&scheme, &channel, resolved.alpha, n)?);
    }
    let rows: Vec<ResultRow> = records.iter().map(ResultRow::from_moment).collect();
    let slopes = if records.len() >= 2 {
        let analytic = exponent(&scheme, &channel, resolved.alpha)?;
        Some(slope_report(&records, &analytic)?)
    } else {
        None
    };
    let config = ResolvedConfig {
        command: "exact".into(),
        scheme: Some(scheme.mode_name().into()),
        channel: Some(channel.kind_name().into()),
        param: Some(channel.param()),
        m: Some(scheme.agents().get()),
        alpha: Some(resolved.alpha.get()),
        n: Some(n_text),
        format: format_name(resolved.format).into(),
        ..ResolvedConfig::default()
    };
    emit_rows(&resolved, &config, &rows, slopes.as_ref())
}

fn cmd_simulate(args: SimulateArgs, file: &FileConfig) -> Result<(), CliError> {
    let resolved = resolve_common(&args.common, file, None)?;
    let scheme = resolved.scheme.ok_or_else(|| usage("--scheme is required"))?;
    let channel = resolved
        .channel
        .ok_or_else(|| usage("--channel and --param are required"))?;
    let n_text = args
        .n
        .or_else(|| file.n.clone())
        .ok_or_else(|| usage("--n is required"))?;
    let (n_lo, n_hi) = parse_n_spec(&n_text)?;
    let trials = args.trials.or(file.trials).ok_or_else(|| usage("--trials is required"))?;
    if trials == 0 {
        return Err(usage("--trials must be >= 1"));
    }
    let seed = args.seed.or(file.seed).unwrap_or(0);

    let mut records: Vec<MomentRecord> = Vec::new();
    for n in n_lo..=n_hi {
        records.push(mc_estimate_moment(&scheme, &channel, resolved.alpha, n, trials, seed)?);
    }
    let rows: Vec<ResultRow> = records.iter().map(ResultRow::from_moment).collect();
    let slopes = if records.len() >= 2 {
        let analytic = exponent(&scheme, &channel, resolved.alpha)?;
        Some(slope_report(&records, &analytic)?)
    } else {
        None
    };
    let config = ResolvedConfig {
        command: "simulate".into(),
        scheme: Some(scheme.mode_name().into()),
        channel: Some(channel.kind_name().into()),
        param: Some(channel.param()),
        m: Some(scheme.agents().get()),
        alpha: Some(resolved.alpha.get()),
        n: Some(n_text),
        trials: Some(trials),
        seed: Some(seed),
        format: format_name(resolved.format).into(),
        ..ResolvedConfig::default()
    };
    emit_rows(&resolved, &config, &rows, slopes.as_ref())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    let options = VerifyOptions {
        grid: match args.grid.unwrap_or(GridArg::Normal) {
            GridArg::Normal => GridDensity::Normal,
            GridArg::Fine => GridDensity::Fine,
        },
        max_rank_len: args.max_rank_n.unwrap_or(10).min(12),
        fault: args.inject_fault.map(|FaultArg::TieBreak| FaultInjection::TieBreak),
    };
    let report = run_verification(&options);
    let config = ResolvedConfig {
        command: "verify".into(),
        grid: Some(match options.grid {
            GridDensity::Normal => "normal".into(),
            GridDensity::Fine => "fine".into(),
        }),
        format: match args.format {
            Some(FormatArg::Json) => "json".into(),
            _ => "text".into(),
        },
        ..ResolvedConfig::default()
    };
    write_output(args.out.as_ref(), |w| match args.format {
        Some(FormatArg::Json) => write_verify_json(w, &config, &report),
        _ => write_verify_text(w, &report),
    })?;
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::VerificationFailed)
    }
}

fn format_name(format: FormatArg) -> &'static str {
    match format {
        FormatArg::Csv => "csv",
        FormatArg::Json => "json",
    }
}

fn emit_rows(
    resolved: &Resolved,
    config: &ResolvedConfig,
    rows: &[ResultRow],
    slopes: Option<&guesswork::moments::SlopeReport>,
) -> Result<(), CliError> {
    write_output(resolved.out.as_ref(), |w| match resolved.format {
        FormatArg::Csv => write_csv(w, rows),
        FormatArg::Json => write_json(w, config, rows, slopes),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use output::fmt_f64;

    #[test]
    fn grid_parsing_includes_endpoints() {
        let g = parse_grid_spec("0:1:0.01").unwrap();
        assert_eq!(g.len(), 101);
        assert_eq!(g[0], 0.0);
        assert_eq!(*g.last().unwrap(), 1.0);
        let g = parse_grid_spec("0:0.5:0.005").unwrap();
        assert_eq!(g.len(), 101);
        assert_eq!(*g.last().unwrap(), 0.5);
    }

    #[test]
    fn grid_parsing_rejects_bad_specs() {
        assert!(parse_grid_spec("0:1").is_err());
        assert!(parse_grid_spec("0:1:0").is_err());
        assert!(parse_grid_spec("1:0:0.1").is_err());
        assert!(parse_grid_spec("a:b:c").is_err());
    }

    #[test]
    fn n_spec_parsing() {
        assert_eq!(parse_n_spec("12").unwrap(), (12, 12));
        assert_eq!(parse_n_spec("4:22").unwrap(), (4, 22));
        assert!(parse_n_spec("5:3").is_err());
        assert!(parse_n_spec("x").is_err());
    }

    #[test]
    fn float_formatting_round_trips() {
        for v in [0.1, 1.0 / 3.0, 0.8999686269529916, 1e-12, 65.373] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
            assert!(!s.contains(','));
        }
    }
}
