//! Command-line front end for the analysis and synthesis library.
//!
//! Six subcommands: `dof` (bound summary for one configuration),
//! `feasible` (stream-count verdicts), `chain` (interference subspace
//! chain and genie dimensions), `sequences` (boundary ratio tables),
//! `synth` (closed-form transceiver synthesis plus numerical
//! verification), and `sweep` (batch grids as CSV or JSON rows).
//!
//! Output contract: every command is deterministic given its flags, and
//! identical invocations produce byte-identical output. Exact rationals
//! are rendered as `{"exact": "num/den", "approx": float}` objects so
//! that no precision is lost at the interface while plots stay cheap.
//! Errors go to stderr as one JSON object `{"error": {"kind", "message",
//! ...}}`.
//!
//! Exit codes: 0 success, 2 usage error, 3 infeasible or refused
//! configuration, 4 verification or build failure.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ia_dof::bounds::{AchievableBy, DoFReport, Region, Subcase};
use ia_dof::chain::{genie_dims, subspace_chain, ChainError};
use ia_dof::channel::gen_channels;
use ia_dof::config::SystemConfig;
use ia_dof::feasibility::{
    feasible_linear, min_spatial_extension, AsymptoticFeasibility, FeasibilityVerdict,
    LinearFeasibility,
};
use ia_dof::linalg::write_matrix;
use ia_dof::rational::Rat;
use ia_dof::sequence::{c_limit, discriminant, has_rational_limit, pq_sequence, Side};
use ia_dof::synth::{synthesize, verify_ia, SynthError, Transceiver};

const EXIT_USAGE: u8 = 2;
const EXIT_REFUSED: u8 = 3;
const EXIT_VERIFICATION: u8 = 4;

/// Environment variable capping sweep parallelism.
const THREADS_ENV: &str = "IA_DOF_THREADS";

#[derive(Parser)]
#[command(
    name = "ia-dof",
    about = "Degrees-of-freedom analysis and interference-alignment synthesis \
             for symmetric multicell MIMO networks",
    version
)]
struct Cli {
    /// Force compact single-line JSON output everywhere.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Region classification and the three per-user DoF bounds.
    Dof(NetArgs),
    /// Linear and asymptotic feasibility of a requested stream count.
    Feasible {
        #[command(flatten)]
        net: NetArgs,
        /// Streams per user, an integer or an exact fraction "p/q".
        #[arg(long)]
        d: String,
    },
    /// Interference subspace chain, genie bound and genie dimensions.
    Chain {
        #[command(flatten)]
        net: NetArgs,
        /// Optional candidate streams per user to evaluate the genie
        /// dimensions at (integer or "p/q"); defaults to the bound itself.
        #[arg(long)]
        d: Option<String>,
    },
    /// Boundary ratio sequences of both families, with convergents.
    Sequences {
        #[arg(long = "G", value_name = "G")]
        g: u64,
        #[arg(long = "K", value_name = "K")]
        k: u64,
        /// Largest sequence index to emit.
        #[arg(long, default_value_t = 8)]
        count: i64,
    },
    /// Synthesize a closed-form transceiver and verify it numerically.
    #[command(after_help = "\
With --dump DIR the channel draw and the transceiver are written as text \
matrices: channel_c{cell}_u{user}_b{bs}.txt, precoder_b{bs}.txt and \
filter_c{cell}_u{user}.txt, each a \"rows cols\" header line followed by \
one line per row of \"re,im\" entries.")]
    Synth {
        #[command(flatten)]
        net: NetArgs,
        /// Seed for the channel draw.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Zero-forcing residual tolerance for the verification verdict.
        #[arg(long = "zf-tol", default_value_t = 1e-8)]
        zf_tol: f64,
        /// Relative singular-value cutoff for rank checks.
        #[arg(long = "rank-tol", default_value_t = 1e-6)]
        rank_tol: f64,
        /// Directory to write the channels and transceiver matrices to.
        #[arg(long)]
        dump: Option<PathBuf>,
        /// Spatial extension factor; defaults to the smallest factor that
        /// makes the closed-form design integral.
        #[arg(long)]
        extension: Option<u64>,
    },
    /// Batch grid over antenna counts, one row per configuration.
    #[command(after_help = "\
CSV columns in bounds mode: M,N,region,bracket_side,bracket_index,subcase,\
d_decomposition,d_proper,d_quantity,d_upper,d_decomposition_approx,\
d_proper_approx,d_quantity_approx,d_upper_approx,achievable_by. Rational \
columns hold exact \"num/den\" strings; _approx columns hold decimals; \
d_quantity cells are empty in Region I.

CSV columns in feasibility mode: M,N,linear,asymptotic,proper_holds,\
binding_side,binding_index,binding_p,binding_q. The binding columns name \
the first violated antenna pair and are empty when linear IA is feasible.

Rows are emitted M-major, then N. JSON format emits one object per line \
with the same information.")]
    Sweep {
        #[arg(long = "G", value_name = "G")]
        g: u64,
        #[arg(long = "K", value_name = "K")]
        k: u64,
        /// Inclusive range of base-station antennas, "a..b" or a single
        /// value.
        #[arg(long = "M", value_name = "RANGE")]
        m_range: String,
        /// Inclusive range of user antennas, "a..b" or a single value.
        #[arg(long = "N", value_name = "RANGE")]
        n_range: String,
        #[arg(long, value_enum, default_value_t = SweepMode::Bounds)]
        mode: SweepMode,
        /// Streams per user; required in feasibility mode.
        #[arg(long)]
        d: Option<String>,
        #[arg(long, value_enum, default_value_t = SweepFormat::Csv)]
        format: SweepFormat,
    },
}

/// The four network dimensions common to single-shot commands.
#[derive(Args)]
struct NetArgs {
    #[arg(long = "G", value_name = "G")]
    g: u64,
    #[arg(long = "K", value_name = "K")]
    k: u64,
    #[arg(long = "M", value_name = "M")]
    m: u64,
    #[arg(long = "N", value_name = "N")]
    n: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepMode {
    Bounds,
    Feasibility,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepFormat {
    Csv,
    Json,
}

/// A failed command: JSON payload for stderr plus the process exit code.
#[derive(Debug)]
struct CmdError {
    kind: &'static str,
    message: String,
    extra: Vec<(&'static str, Value)>,
    code: u8,
}

impl CmdError {
    fn usage(message: impl Into<String>) -> Self {
        CmdError { kind: "usage", message: message.into(), extra: Vec::new(), code: EXIT_USAGE }
    }

    fn refused(kind: &'static str, message: impl Into<String>) -> Self {
        CmdError { kind, message: message.into(), extra: Vec::new(), code: EXIT_REFUSED }
    }

    fn with(mut self, key: &'static str, value: Value) -> Self {
        self.extra.push((key, value));
        self
    }

    fn to_json(&self) -> Value {
        let mut error = serde_json::Map::new();
        error.insert("kind".into(), json!(self.kind));
        error.insert("message".into(), json!(self.message));
        for (key, value) in &self.extra {
            error.insert((*key).into(), value.clone());
        }
        json!({ "error": Value::Object(error) })
    }
}

impl From<std::io::Error> for CmdError {
    fn from(e: std::io::Error) -> Self {
        let kind =
            if e.kind() == std::io::ErrorKind::BrokenPipe { "broken-pipe" } else { "io" };
        CmdError { kind, message: e.to_string(), extra: Vec::new(), code: 1 }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                e.exit();
            }
            let err = CmdError::usage(e.to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        // A closed pipe on stdout (e.g. piping into head) is not an error.
        Err(e) if e.kind == "broken-pipe" => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), CmdError> {
    match cli.command {
        Command::Dof(net) => {
            let cfg = parse_config(&net)?;
            print_doc(&dof_doc(&DoFReport::compute(&cfg)), cli.json)
        }
        Command::Feasible { net, d } => {
            let cfg = parse_config(&net)?;
            let d = parse_rat(&d, "d")?;
            let verdict = feasible_linear(&cfg, &d)
                .map_err(|e| CmdError::usage(e.to_string()))?;
            print_doc(&feasible_doc(&cfg, &d, &verdict), cli.json)
        }
        Command::Chain { net, d } => {
            let cfg = parse_config(&net)?;
            let d = d.map(|s| parse_rat(&s, "d")).transpose()?;
            print_doc(&chain_doc(&cfg, d.as_ref())?, cli.json)
        }
        Command::Sequences { g, k, count } => {
            // Reuses the configuration validator for the G and K domain.
            SystemConfig::new(g, k, 1, 1).map_err(|e| CmdError::usage(e.to_string()))?;
            if count < 0 {
                return Err(CmdError::usage(format!("count must be nonnegative, got {count}")));
            }
            print_doc(&sequences_doc(g, k, count), cli.json)
        }
        Command::Synth { net, seed, zf_tol, rank_tol, dump, extension } => {
            let cfg = parse_config(&net)?;
            cmd_synth(&cfg, seed, zf_tol, rank_tol, dump, extension, cli.json)
        }
        Command::Sweep { g, k, m_range, n_range, mode, d, format } => {
            SystemConfig::new(g, k, 1, 1).map_err(|e| CmdError::usage(e.to_string()))?;
            let m_range = parse_range(&m_range, "M")?;
            let n_range = parse_range(&n_range, "N")?;
            let format = if cli.json { SweepFormat::Json } else { format };
            cmd_sweep(g, k, m_range, n_range, mode, d, format)
        }
    }
}

fn parse_config(net: &NetArgs) -> Result<SystemConfig, CmdError> {
    SystemConfig::new(net.g, net.k, net.m, net.n).map_err(|e| CmdError::usage(e.to_string()))
}

/// Parses an exact rational flag value and requires it positive.
fn parse_rat(s: &str, flag: &str) -> Result<Rat, CmdError> {
    let r = Rat::from_str(s).map_err(|e| CmdError::usage(format!("--{flag}: {e}")))?;
    if !r.is_positive() {
        return Err(CmdError::usage(format!("--{flag} must be positive, got {r}")));
    }
    Ok(r)
}

/// Parses an inclusive "a..b" range (or a single value) and requires it
/// nonempty with a positive start.
fn parse_range(s: &str, flag: &str) -> Result<(u64, u64), CmdError> {
    let bad = || CmdError::usage(format!("--{flag}: expected \"a..b\" or a single integer, got {s:?}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let v: u64 = s.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo < 1 {
        return Err(CmdError::usage(format!("--{flag} must start at 1 or above, got {lo}")));
    }
    if lo > hi {
        return Err(CmdError::usage(format!("--{flag}: empty range {lo}..{hi}")));
    }
    Ok((lo, hi))
}

/// Pretty JSON by default, compact single-line JSON under `--json`.
fn print_doc(doc: &Value, compact: bool) -> Result<(), CmdError> {
    let mut out = std::io::stdout().lock();
    if compact {
        writeln!(out, "{doc}")?;
    } else {
        writeln!(out, "{}", serde_json::to_string_pretty(doc).expect("document serializes"))?;
    }
    Ok(())
}

fn rat_json(r: &Rat) -> Value {
    json!({ "exact": r.to_string(), "approx": r.to_f64() })
}

fn opt_rat_json(r: Option<&Rat>) -> Value {
    r.map(rat_json).unwrap_or(Value::Null)
}

fn config_json(cfg: &SystemConfig) -> Value {
    json!({ "G": cfg.g, "K": cfg.k, "M": cfg.m, "N": cfg.n })
}

fn subcase_str(s: Subcase) -> &'static str {
    match s {
        Subcase::MLimited => "M-limited",
        Subcase::NLimited => "N-limited",
    }
}

fn region_json(region: &Region) -> Value {
    json!({
        "label": region.label(),
        "side": region.side().map(|s| s.to_string()),
        "index": region.index(),
        "subcase": region.subcase().map(subcase_str),
    })
}

fn achievable_str(a: AchievableBy) -> &'static str {
    match a {
        AchievableBy::Linear => "linear",
        AchievableBy::AsymptoticOnly => "asymptotic-only",
    }
}

fn linear_str(v: LinearFeasibility) -> &'static str {
    match v {
        LinearFeasibility::Feasible => "feasible",
        LinearFeasibility::Infeasible => "infeasible",
        LinearFeasibility::ConjecturedFeasible => "conjectured-feasible",
    }
}

fn asymptotic_str(v: AsymptoticFeasibility) -> &'static str {
    match v {
        AsymptoticFeasibility::Feasible => "feasible",
        AsymptoticFeasibility::Infeasible => "infeasible",
    }
}

fn dof_doc(report: &DoFReport) -> Value {
    json!({
        "config": config_json(&report.config),
        "region": region_json(&report.region),
        "d_decomposition": rat_json(&report.d_decomposition),
        "d_proper": rat_json(&report.d_proper),
        "d_quantity": opt_rat_json(report.d_quantity.as_ref()),
        "d_upper": rat_json(&report.d_upper),
        "achievable_by": achievable_str(report.achievable_by),
    })
}

fn binding_pair_json(verdict: &FeasibilityVerdict) -> Value {
    match &verdict.binding_pair {
        None => Value::Null,
        Some(pair) => json!({
            "side": pair.side.map(|s| s.to_string()),
            "index": pair.index,
            "p": pair.p.to_string(),
            "q": pair.q.to_string(),
        }),
    }
}

fn feasible_doc(cfg: &SystemConfig, d: &Rat, verdict: &FeasibilityVerdict) -> Value {
    json!({
        "config": config_json(cfg),
        "d": rat_json(d),
        "linear": linear_str(verdict.linear),
        "asymptotic": asymptotic_str(verdict.asymptotic),
        "proper_holds": verdict.proper_holds,
        "binding_pair": binding_pair_json(verdict),
    })
}

fn chain_doc(cfg: &SystemConfig, d: Option<&Rat>) -> Result<Value, CmdError> {
    let report = subspace_chain(cfg).map_err(chain_refusal)?;
    let candidate = match d {
        None => Value::Null,
        Some(d) => {
            let genie = genie_dims(cfg, d).map_err(chain_refusal)?;
            json!({
                "d": rat_json(&genie.d),
                "dims": genie.dims.iter().map(rat_json).collect::<Vec<_>>(),
                "absorption_slack": rat_json(&genie.absorption_slack),
                "containment_slack": rat_json(&genie.containment_slack),
            })
        }
    };
    Ok(json!({
        "config": config_json(cfg),
        "side": report.side.to_string(),
        "length": report.length,
        "dims": report.dims.iter().map(rat_json).collect::<Vec<_>>(),
        "genie_bound": rat_json(&report.genie_bound),
        "genie_dims": report.genie_dims.iter().map(rat_json).collect::<Vec<_>>(),
        "candidate": candidate,
    }))
}

fn chain_refusal(e: ChainError) -> CmdError {
    match &e {
        ChainError::NonPositiveD { .. } => CmdError::usage(e.to_string()),
        ChainError::ExceedsBound { broken, margin, .. } => {
            CmdError::refused("refused", e.to_string())
                .with("broken", serde_json::to_value(broken).expect("constraint serializes"))
                .with("margin", rat_json(margin))
        }
        _ => CmdError::refused("refused", e.to_string()),
    }
}

fn sequences_doc(g: u64, k: u64, count: i64) -> Value {
    let side_doc = |side: Side| -> Value {
        let entries: Vec<Value> = pq_sequence(g, k, side, count)
            .iter()
            .filter(|pair| pair.n >= 0)
            .map(|pair| {
                json!({
                    "n": pair.n,
                    "p": pair.p.to_string(),
                    "q": pair.q.to_string(),
                    "c": rat_json(&pair.ratio()),
                })
            })
            .collect();
        json!(entries)
    };
    json!({
        "G": g,
        "K": k,
        "discriminant": discriminant(g, k).to_string(),
        "has_rational_limit": has_rational_limit(g, k),
        "limits": {
            "A": c_limit(g, k, Side::A).ok(),
            "B": c_limit(g, k, Side::B).ok(),
        },
        "side_a": side_doc(Side::A),
        "side_b": side_doc(Side::B),
    })
}

fn cmd_synth(
    cfg: &SystemConfig,
    seed: u64,
    zf_tol: f64,
    rank_tol: f64,
    dump: Option<PathBuf>,
    extension: Option<u64>,
    compact: bool,
) -> Result<(), CmdError> {
    let report = DoFReport::compute(cfg);
    if !report.region.is_region_two() {
        return Err(CmdError::refused(
            "infeasible",
            format!("{cfg} admits no finite-dimensional alignment (Region I)"),
        )
        .with("report", dof_doc(&report)));
    }
    let extension = match extension {
        Some(0) => return Err(CmdError::usage("--extension must be positive")),
        Some(m) => m,
        None => min_spatial_extension(cfg)
            .map_err(|e| CmdError::refused("infeasible", e.to_string()))?,
    };
    let ecfg = cfg.extended(extension);
    let channels = gen_channels(&ecfg, seed);
    let transceiver = synthesize(&ecfg, &channels).map_err(|e| match e {
        SynthError::RankDeficiency { .. } => CmdError {
            kind: "build-failure",
            message: e.to_string(),
            extra: Vec::new(),
            code: EXIT_VERIFICATION,
        },
        other => CmdError::refused("infeasible", other.to_string()),
    })?;
    let verification = verify_ia(&ecfg, &channels, &transceiver, zf_tol, rank_tol);
    if let Some(dir) = &dump {
        dump_run(dir, &ecfg, seed, &transceiver)?;
    }
    let doc = json!({
        "config": config_json(cfg),
        "extension": extension,
        "extended_config": config_json(&ecfg),
        "d": transceiver.d,
        "seed": seed,
        "verification": serde_json::to_value(&verification).expect("report serializes"),
        "dump": dump.as_ref().map(|p| p.display().to_string()),
    });
    print_doc(&doc, compact)?;
    if verification.pass {
        Ok(())
    } else {
        Err(CmdError {
            kind: "verification-failed",
            message: format!(
                "zero-forcing residual {} or rank targets missed at zf_tol {zf_tol}, rank_tol {rank_tol}",
                verification.zf_residual
            ),
            extra: Vec::new(),
            code: EXIT_VERIFICATION,
        })
    }
}

/// Writes the channel draw and the transceiver as text matrices.
fn dump_run(
    dir: &PathBuf,
    cfg: &SystemConfig,
    seed: u64,
    t: &Transceiver,
) -> Result<(), CmdError> {
    let channels = gen_channels(cfg, seed);
    std::fs::create_dir_all(dir)?;
    let write = |name: String, a: &ia_dof::linalg::CMat| -> Result<(), CmdError> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(dir.join(name))?);
        write_matrix(&mut f, a)?;
        f.flush()?;
        Ok(())
    };
    let (g, k) = (cfg.g as usize, cfg.k as usize);
    for cell in 0..g {
        for user in 0..k {
            for bs in 0..g {
                write(
                    format!("channel_c{cell}_u{user}_b{bs}.txt"),
                    channels.channel(cell, user, bs),
                )?;
            }
        }
    }
    for (bs, v) in t.v.iter().enumerate() {
        write(format!("precoder_b{bs}.txt"), v)?;
    }
    for (cell, users) in t.u.iter().enumerate() {
        for (user, u) in users.iter().enumerate() {
            write(format!("filter_c{cell}_u{user}.txt"), u)?;
        }
    }
    Ok(())
}

/// One computed sweep row, ready for either output format.
enum SweepRow {
    Bounds(DoFReport),
    Feasibility { cfg: SystemConfig, verdict: FeasibilityVerdict },
}

fn cmd_sweep(
    g: u64,
    k: u64,
    m_range: (u64, u64),
    n_range: (u64, u64),
    mode: SweepMode,
    d: Option<String>,
    format: SweepFormat,
) -> Result<(), CmdError> {
    let d = match (mode, d) {
        (SweepMode::Feasibility, None) => {
            return Err(CmdError::usage("feasibility mode requires --d"));
        }
        (SweepMode::Feasibility, Some(s)) => Some(parse_rat(&s, "d")?),
        (SweepMode::Bounds, _) => None,
    };
    let grid: Vec<SystemConfig> = (m_range.0..=m_range.1)
        .flat_map(|m| (n_range.0..=n_range.1).map(move |n| (m, n)))
        .map(|(m, n)| SystemConfig::new(g, k, m, n).expect("validated dimensions"))
        .collect();
    let compute = |cfg: &SystemConfig| -> SweepRow {
        match &d {
            None => SweepRow::Bounds(DoFReport::compute(cfg)),
            Some(d) => SweepRow::Feasibility {
                cfg: *cfg,
                verdict: feasible_linear(cfg, d).expect("d validated positive"),
            },
        }
    };
    // Rows are computed in parallel but emitted in grid order, so output
    // bytes are independent of the thread count.
    let rows: Vec<SweepRow> = match read_thread_cap()? {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| CmdError::usage(format!("{THREADS_ENV}: {e}")))?
            .install(|| {
                use rayon::prelude::*;
                grid.par_iter().map(compute).collect()
            }),
        None => {
            use rayon::prelude::*;
            grid.par_iter().map(compute).collect()
        }
    };
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    match format {
        SweepFormat::Csv => write_csv(&mut out, mode, &rows)?,
        SweepFormat::Json => {
            for row in &rows {
                writeln!(out, "{}", row_json(row))?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn read_thread_cap() -> Result<Option<usize>, CmdError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(raw) => match raw.parse::<usize>() {
            Ok(t) if t >= 1 => Ok(Some(t)),
            _ => Err(CmdError::usage(format!(
                "{THREADS_ENV} must be a positive integer, got {raw:?}"
            ))),
        },
    }
}

fn write_csv(out: &mut impl Write, mode: SweepMode, rows: &[SweepRow]) -> Result<(), CmdError> {
    match mode {
        SweepMode::Bounds => {
            writeln!(
                out,
                "M,N,region,bracket_side,bracket_index,subcase,d_decomposition,d_proper,\
                 d_quantity,d_upper,d_decomposition_approx,d_proper_approx,d_quantity_approx,\
                 d_upper_approx,achievable_by"
            )?;
            for row in rows {
                let SweepRow::Bounds(r) = row else { unreachable!("mode fixes the row kind") };
                let quantity_exact =
                    r.d_quantity.as_ref().map(Rat::to_string).unwrap_or_default();
                let quantity_approx =
                    r.d_quantity.as_ref().map(|q| q.to_f64().to_string()).unwrap_or_default();
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                    r.config.m,
                    r.config.n,
                    r.region.label(),
                    r.region.side().map(|s| s.to_string()).unwrap_or_default(),
                    r.region.index().map(|i| i.to_string()).unwrap_or_default(),
                    r.region.subcase().map(subcase_str).unwrap_or_default(),
                    r.d_decomposition,
                    r.d_proper,
                    quantity_exact,
                    r.d_upper,
                    r.d_decomposition.to_f64(),
                    r.d_proper.to_f64(),
                    quantity_approx,
                    r.d_upper.to_f64(),
                    achievable_str(r.achievable_by),
                )?;
            }
        }
        SweepMode::Feasibility => {
            writeln!(
                out,
                "M,N,linear,asymptotic,proper_holds,binding_side,binding_index,binding_p,binding_q"
            )?;
            for row in rows {
                let SweepRow::Feasibility { cfg, verdict } = row else {
                    unreachable!("mode fixes the row kind")
                };
                let (bside, bindex, bp, bq) = match &verdict.binding_pair {
                    None => (String::new(), String::new(), String::new(), String::new()),
                    Some(pair) => (
                        pair.side.map(|s| s.to_string()).unwrap_or_default(),
                        pair.index.map(|i| i.to_string()).unwrap_or_default(),
                        pair.p.to_string(),
                        pair.q.to_string(),
                    ),
                };
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    cfg.m,
                    cfg.n,
                    linear_str(verdict.linear),
                    asymptotic_str(verdict.asymptotic),
                    verdict.proper_holds,
                    bside,
                    bindex,
                    bp,
                    bq,
                )?;
            }
        }
    }
    Ok(())
}

fn row_json(row: &SweepRow) -> Value {
    match row {
        SweepRow::Bounds(r) => json!({
            "M": r.config.m,
            "N": r.config.n,
            "region": region_json(&r.region),
            "d_decomposition": rat_json(&r.d_decomposition),
            "d_proper": rat_json(&r.d_proper),
            "d_quantity": opt_rat_json(r.d_quantity.as_ref()),
            "d_upper": rat_json(&r.d_upper),
            "achievable_by": achievable_str(r.achievable_by),
        }),
        SweepRow::Feasibility { cfg, verdict } => json!({
            "M": cfg.m,
            "N": cfg.n,
            "linear": linear_str(verdict.linear),
            "asymptotic": asymptotic_str(verdict.asymptotic),
            "proper_holds": verdict.proper_holds,
            "binding_pair": binding_pair_json(verdict),
        }),
    }
}
