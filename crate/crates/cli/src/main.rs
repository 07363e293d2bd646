//! Command-line front end: capacity curves, phase sweeps, decoupling Monte
//! Carlo, the classical-transmission protocol, and resource verdicts.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 when an internal
//! numerical assertion fails (oracle disagreement or monotonicity).

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use alphabit::channels::Channel;
use alphabit::decouple::{
    decoupling_mc, ea_decoupling_mc, random_code, CodeSpec, DecouplingDims, Ensemble,
};
use alphabit::entropix::{
    capacity_curve, critical_region, damping_optimal_inputs, CapacityPoint, ChannelKind,
    CurveMethod, OptimizerConfig,
};
use alphabit::protosim::alphadit_classical_protocol;
use alphabit::resource::{compare, gap, vectorize, RelOp, Statement, Verdict};

#[derive(Parser)]
#[command(name = "alphabit", version, about = "Subspace error correction workbench")]
struct Cli {
    /// Worker threads for parallel sections (results are identical for any
    /// thread count).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Optional JSON config supplying defaults; explicit flags win.
    #[arg(long, global = true)]
    config: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Capacity over an α grid as CSV or JSON.
    Capacity(CapacityArgs),
    /// Critical-region sweep over the channel parameter as CSV.
    Phase(PhaseArgs),
    /// Decoupling Monte Carlo against the exact Haar oracle, as JSON.
    Decouple(DecoupleArgs),
    /// Classical transmission protocol, as JSON.
    Protocol(ProtocolArgs),
    /// Evaluate a resource expression or relation.
    Resource(ResourceArgs),
}

#[derive(Args)]
struct CapacityArgs {
    #[arg(long, value_enum)]
    channel: Option<ChannelFlag>,
    #[arg(long)]
    eta: Option<f64>,
    /// Kraus operators in the JSON wire format (for --channel kraus-file).
    #[arg(long)]
    kraus_file: Option<String>,
    /// Grid lo:hi:step, or a single value.
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long, value_enum)]
    method: Option<MethodFlag>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long, value_enum)]
    format: Option<FormatFlag>,
}

#[derive(Args)]
struct PhaseArgs {
    #[arg(long, value_enum)]
    channel: Option<ChannelFlag>,
    /// Grid lo:hi:step over the channel parameter.
    #[arg(long)]
    eta: Option<String>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct DecoupleArgs {
    /// Dimensions Â,B̂,Ê,R.
    #[arg(long)]
    dims: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, value_enum)]
    ensemble: Option<EnsembleFlag>,
    /// Entanglement-assistance dimension; values above 1 switch to the
    /// assisted variant.
    #[arg(long)]
    dl: Option<usize>,
    /// Code-space dimension for the assisted variant.
    #[arg(long)]
    ds: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct ProtocolArgs {
    #[arg(long)]
    d: Option<usize>,
    /// α as a float or a rational like 1/3.
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long, value_enum)]
    transport: Option<TransportFlag>,
    /// Total qubits of the random code (haar-code transport).
    #[arg(long)]
    code_qubits: Option<usize>,
    /// Qubits kept by the random code (haar-code transport).
    #[arg(long)]
    keep: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct ResourceArgs {
    /// Expression, relation, or gap(…, …) in the resource mini-language.
    expr: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChannelFlag {
    Erasure,
    Damping,
    KrausFile,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodFlag {
    Closed,
    Scan,
    Generic,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatFlag {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum EnsembleFlag {
    Haar,
    Clifford,
}

#[derive(Clone, Copy, ValueEnum)]
enum TransportFlag {
    Noiseless,
    Constant,
    HaarCode,
}

/// Optional JSON config mirroring the flag names; any present field becomes
/// the default for the matching flag.
#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    channel: Option<String>,
    eta: Option<f64>,
    alpha: Option<String>,
    method: Option<String>,
    seed: Option<u64>,
    samples: Option<usize>,
    ensemble: Option<String>,
    dims: Option<String>,
    format: Option<String>,
    out: Option<String>,
}

enum AppError {
    Usage(String),
    Numerical(String),
}

impl From<alphabit::Error> for AppError {
    fn from(e: alphabit::Error) -> Self {
        AppError::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap already formats help/version on their own paths.
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    if let Some(threads) = cli.threads {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .is_err()
        {
            eprintln!("warning: thread pool already initialised");
        }
    }
    let config = match load_config(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let result = match cli.command {
        Command::Capacity(args) => run_capacity(args, &config),
        Command::Phase(args) => run_phase(args, &config),
        Command::Decouple(args) => run_decouple(args, &config),
        Command::Protocol(args) => run_protocol(args, &config),
        Command::Resource(args) => run_resource(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e),
    }
}

fn fail(e: AppError) -> ExitCode {
    match e {
        AppError::Usage(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        AppError::Numerical(msg) => {
            eprintln!("numerical assertion failed: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_config(path: Option<&str>) -> Result<FileConfig, AppError> {
    match path {
        None => Ok(FileConfig::default()),
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| AppError::Usage(format!("cannot read config {p}: {e}")))?;
            serde_json::from_str(&text)
                .map_err(|e| AppError::Usage(format!("bad config {p}: {e}")))
        }
    }
}

/// 9 significant digits, locale-independent.
fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-4..=12).contains(&mag) {
        format!("{x:.8e}")
    } else {
        let decimals = (8 - mag).max(0) as usize;
        format!("{x:.decimals$}")
    }
}

fn emit(out: Option<&str>, body: &str) -> Result<(), AppError> {
    match out {
        None => {
            std::io::stdout()
                .write_all(body.as_bytes())
                .map_err(|e| AppError::Usage(e.to_string()))?;
            Ok(())
        }
        Some(path) => {
            fs::write(path, body).map_err(|e| AppError::Usage(format!("cannot write {path}: {e}")))
        }
    }
}

fn parse_grid(spec: &str) -> Result<Vec<f64>, AppError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = |m: &str| AppError::Usage(format!("bad grid `{spec}`: {m}"));
    match parts.len() {
        1 => {
            let v: f64 = parts[0].parse().map_err(|_| bad("not a number"))?;
            Ok(vec![v])
        }
        3 => {
            let lo: f64 = parts[0].parse().map_err(|_| bad("bad lower bound"))?;
            let hi: f64 = parts[1].parse().map_err(|_| bad("bad upper bound"))?;
            let step: f64 = parts[2].parse().map_err(|_| bad("bad step"))?;
            if step <= 0.0 || hi < lo {
                return Err(bad("need step > 0 and lo <= hi"));
            }
            let n = ((hi - lo) / step + 1e-9).floor() as usize;
            Ok((0..=n).map(|i| lo + i as f64 * step).collect())
        }
        _ => Err(bad("expected value or lo:hi:step")),
    }
}

fn parse_alpha(spec: &str) -> Result<f64, AppError> {
    if let Some((n, d)) = spec.split_once('/') {
        let n: f64 = n
            .trim()
            .parse()
            .map_err(|_| AppError::Usage(format!("bad rational `{spec}`")))?;
        let d: f64 = d
            .trim()
            .parse()
            .map_err(|_| AppError::Usage(format!("bad rational `{spec}`")))?;
        if d == 0.0 {
            return Err(AppError::Usage("zero denominator".into()));
        }
        Ok(n / d)
    } else {
        spec.parse()
            .map_err(|_| AppError::Usage(format!("bad alpha `{spec}`")))
    }
}

fn run_capacity(args: CapacityArgs, config: &FileConfig) -> Result<(), AppError> {
    let channel = args
        .channel
        .or(match config.channel.as_deref() {
            Some("erasure") => Some(ChannelFlag::Erasure),
            Some("damping") => Some(ChannelFlag::Damping),
            Some("kraus-file") => Some(ChannelFlag::KrausFile),
            _ => None,
        })
        .ok_or_else(|| AppError::Usage("--channel is required".into()))?;
    let alpha_spec = args
        .alpha
        .or_else(|| config.alpha.clone())
        .ok_or_else(|| AppError::Usage("--alpha is required".into()))?;
    let alphas = parse_grid(&alpha_spec)?;
    let seed = args.seed.or(config.seed).unwrap_or(0);
    let format = args.format.unwrap_or(match config.format.as_deref() {
        Some("json") => FormatFlag::Json,
        _ => FormatFlag::Csv,
    });

    let (kind, default_method, eta_col) = match channel {
        ChannelFlag::Erasure => {
            let eta = args
                .eta
                .or(config.eta)
                .ok_or_else(|| AppError::Usage("--eta is required for erasure".into()))?;
            (ChannelKind::Erasure { eta }, MethodFlag::Closed, Some(eta))
        }
        ChannelFlag::Damping => {
            let eta = args
                .eta
                .or(config.eta)
                .ok_or_else(|| AppError::Usage("--eta is required for damping".into()))?;
            (ChannelKind::Damping { eta }, MethodFlag::Scan, Some(eta))
        }
        ChannelFlag::KrausFile => {
            let path = args
                .kraus_file
                .ok_or_else(|| AppError::Usage("--kraus-file is required".into()))?;
            let text = fs::read_to_string(&path)
                .map_err(|e| AppError::Usage(format!("cannot read {path}: {e}")))?;
            let ch = Channel::from_json_str(&text)?;
            (ChannelKind::Custom(ch), MethodFlag::Generic, args.eta)
        }
    };
    let method_flag = args.method.or(match config.method.as_deref() {
        Some("closed") => Some(MethodFlag::Closed),
        Some("scan") => Some(MethodFlag::Scan),
        Some("generic") => Some(MethodFlag::Generic),
        _ => None,
    });
    let method = match method_flag.unwrap_or(default_method) {
        MethodFlag::Closed => CurveMethod::Closed,
        MethodFlag::Scan => CurveMethod::Scan,
        MethodFlag::Generic => CurveMethod::Generic,
    };
    let cfg = OptimizerConfig {
        seed,
        assume_degradable: !matches!(kind, ChannelKind::Custom(_)),
        ..OptimizerConfig::default()
    };
    let points = capacity_curve(&kind, &alphas, method, &cfg)?;

    for w in points.windows(2) {
        if w[1].value > w[0].value + 1e-6 {
            return Err(AppError::Numerical(format!(
                "capacity curve increased from {} to {} between alpha {} and {}",
                w[0].value, w[1].value, w[0].alpha, w[1].alpha
            )));
        }
    }

    let body = match format {
        FormatFlag::Csv => {
            let mut s = String::from("alpha,eta,value_bits,phase,witness_p\n");
            for p in &points {
                s.push_str(&format_capacity_row(p, eta_col));
            }
            s
        }
        FormatFlag::Json => {
            let rows: Vec<serde_json::Value> = points
                .iter()
                .map(|p| {
                    serde_json::json!({
                        "alpha": p.alpha,
                        "eta": eta_col,
                        "value_bits": p.value,
                        "phase": p.phase.tag(),
                        "witness_p": p.witness_p(),
                    })
                })
                .collect();
            let mut s = serde_json::to_string(&rows).expect("json rows");
            s.push('\n');
            s
        }
    };
    emit(args.out.as_deref().or(config.out.as_deref()), &body)
}

fn format_capacity_row(p: &CapacityPoint, eta: Option<f64>) -> String {
    format!(
        "{},{},{},{},{}\n",
        fmt_float(p.alpha),
        eta.map(fmt_float).unwrap_or_default(),
        fmt_float(p.value),
        p.phase.tag(),
        fmt_float(p.witness_p()),
    )
}

fn run_phase(args: PhaseArgs, config: &FileConfig) -> Result<(), AppError> {
    let channel = args
        .channel
        .or(match config.channel.as_deref() {
            Some("erasure") => Some(ChannelFlag::Erasure),
            Some("damping") => Some(ChannelFlag::Damping),
            _ => None,
        })
        .ok_or_else(|| AppError::Usage("--channel is required".into()))?;
    let eta_spec = args
        .eta
        .or_else(|| config.eta.map(|e| e.to_string()))
        .ok_or_else(|| AppError::Usage("--eta grid is required".into()))?;
    let etas = parse_grid(&eta_spec)?;

    let mut rows = Vec::with_capacity(etas.len());
    for &eta in &etas {
        let (lo, hi) = match channel {
            ChannelFlag::Damping => critical_region(eta)?,
            ChannelFlag::Erasure => {
                // Mutual and coherent information share the maximally mixed
                // optimum, so the region is the single point 2η−1.
                let a = 2.0 * eta - 1.0;
                (a, a)
            }
            ChannelFlag::KrausFile => {
                return Err(AppError::Usage(
                    "phase sweeps support erasure and damping only".into(),
                ))
            }
        };
        if matches!(channel, ChannelFlag::Damping) {
            let (p0, p1) = damping_optimal_inputs(eta)?;
            if eta < 1.0 && (p0 - 0.5).abs() > (p1 - 0.5).abs() + 1e-9 {
                return Err(AppError::Numerical(format!(
                    "mutual-optimal input {p0} strays further from 1/2 than coherent-optimal {p1} at eta {eta}"
                )));
            }
        }
        rows.push((eta, lo, hi, hi - lo));
    }
    let max_width = rows.iter().map(|r| r.3).fold(0.0f64, f64::max);

    let mut body = String::from("eta,alpha_lo,alpha_hi,width\n");
    for (eta, lo, hi, width) in &rows {
        body.push_str(&format!(
            "{},{},{},{}\n",
            fmt_float(*eta),
            fmt_float(*lo),
            fmt_float(*hi),
            fmt_float(*width)
        ));
    }
    body.push_str(&format!("max,,,{}\n", fmt_float(max_width)));
    emit(args.out.as_deref().or(config.out.as_deref()), &body)
}

fn run_decouple(args: DecoupleArgs, config: &FileConfig) -> Result<(), AppError> {
    let dims_spec = args
        .dims
        .or_else(|| config.dims.clone())
        .ok_or_else(|| AppError::Usage("--dims is required (Â,B̂,Ê,R)".into()))?;
    let parts: Result<Vec<usize>, _> = dims_spec.split(',').map(|p| p.trim().parse()).collect();
    let parts = parts.map_err(|_| AppError::Usage(format!("bad dims `{dims_spec}`")))?;
    if parts.len() != 4 {
        return Err(AppError::Usage("dims must have four entries".into()));
    }
    let dims = DecouplingDims::new(parts[0], parts[1], parts[2], parts[3])?;
    let samples = args.samples.or(config.samples).unwrap_or(2000);
    let seed = args.seed.or(config.seed).unwrap_or(0);
    let ensemble = match args.ensemble.unwrap_or(match config.ensemble.as_deref() {
        Some("clifford") => EnsembleFlag::Clifford,
        _ => EnsembleFlag::Haar,
    }) {
        EnsembleFlag::Haar => Ensemble::Haar,
        EnsembleFlag::Clifford => Ensemble::Clifford,
    };
    let d_l = args.dl.unwrap_or(1);

    let report = if d_l > 1 {
        let d_s = args.ds.unwrap_or(dims.d_hat_a / d_l);
        ea_decoupling_mc(dims, d_s, d_l, samples, seed)?
    } else {
        decoupling_mc(dims, ensemble, samples, seed)?
    };

    if (report.two_norm_mean - report.oracle_mean).abs() > 4.0 * report.sigma.max(1e-15) {
        return Err(AppError::Numerical(format!(
            "monte carlo mean {} disagrees with oracle {} beyond 4 sigma ({})",
            report.two_norm_mean, report.oracle_mean, report.sigma
        )));
    }

    #[derive(serde::Serialize)]
    struct ReportWire {
        mean: f64,
        oracle: f64,
        bound: f64,
        sigma: f64,
        samples: usize,
        ensemble: String,
        dims: Vec<usize>,
        seed: u64,
    }
    let wire = ReportWire {
        mean: report.two_norm_mean,
        oracle: report.oracle_mean,
        bound: report.bound_value,
        sigma: report.sigma,
        samples: report.samples,
        ensemble: ensemble.to_string(),
        dims: dims.as_vec(),
        seed,
    };
    let mut body = serde_json::to_string(&wire).expect("report json");
    body.push('\n');
    emit(args.out.as_deref().or(config.out.as_deref()), &body)
}

fn run_protocol(args: ProtocolArgs, config: &FileConfig) -> Result<(), AppError> {
    let d = args.d.unwrap_or(8);
    let alpha_spec = args
        .alpha
        .or_else(|| config.alpha.clone())
        .unwrap_or_else(|| "1/3".to_string());
    let alpha = parse_alpha(&alpha_spec)?;
    let seed = args.seed.or(config.seed).unwrap_or(0);
    let transport = match args.transport.unwrap_or(TransportFlag::Noiseless) {
        TransportFlag::Noiseless => Channel::identity(d),
        TransportFlag::Constant => {
            let omega = alphabit::qcore::identity(d) * alphabit::qcore::c(1.0 / d as f64, 0.0);
            Channel::constant(&omega, d)?
        }
        TransportFlag::HaarCode => {
            let code_qubits = args.code_qubits.unwrap_or(3);
            let keep = args
                .keep
                .unwrap_or(code_qubits.saturating_sub(1).max(1));
            if keep > code_qubits {
                return Err(AppError::Usage("--keep cannot exceed --code-qubits".into()));
            }
            if d != 1 << code_qubits {
                return Err(AppError::Usage(format!(
                    "--d must equal 2^code_qubits, got {d} vs {}",
                    1 << code_qubits
                )));
            }
            let spec = CodeSpec::unassisted(d, 1 << (code_qubits - keep), 1, alpha);
            let mut rng = alphabit::qcore::rng_stream(seed, 0);
            random_code(&Channel::identity(1 << keep), 1, spec, Ensemble::Haar, &mut rng)?
                .effective
        }
    };
    let result = alphadit_classical_protocol(d, alpha, &transport)?;
    let consistency = (result.success_prob
        - result.per_message.iter().sum::<f64>() / result.per_message.len() as f64)
        .abs();
    if consistency > 1e-12 {
        return Err(AppError::Numerical(format!(
            "success probability inconsistent with per-message mean by {consistency}"
        )));
    }
    let mut body = serde_json::to_string(&result).expect("protocol json");
    body.push('\n');
    emit(args.out.as_deref().or(config.out.as_deref()), &body)
}

fn run_resource(args: ResourceArgs) -> Result<(), AppError> {
    let statement = alphabit::resource::parse_statement(&args.expr)?;
    let verdict = match statement {
        Statement::Expr(bundle) => {
            let v = vectorize(&bundle);
            format!("{v}\n")
        }
        Statement::Gap(lhs, rhs) => {
            let g = gap(&lhs, &rhs);
            let tag = if g.is_proper() { "proper" } else { "improper" };
            format!("{g} {tag}\n")
        }
        Statement::Relation(lhs, op, rhs) => {
            let order = compare(&vectorize(&lhs), &vectorize(&rhs));
            let holds = matches!(
                (op, order),
                (RelOp::Eq, Verdict::Equal)
                    | (RelOp::Geq, Verdict::Equal | Verdict::Geq)
                    | (RelOp::Leq, Verdict::Equal | Verdict::Leq)
            );
            format!("{order}\nrelation {}\n", if holds { "holds" } else { "fails" })
        }
    };
    print!("{verdict}");
    Ok(())
}
