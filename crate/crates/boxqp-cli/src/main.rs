//! Command-line driver around the `boxqp` library.
//!
//! Every command prints exactly one JSON document to stdout; diagnostics go
//! to stderr. Exit codes: 0 on success, 1 when a verification or supplied
//! piece of evidence fails, 2 on usage or file-format problems, 3 on
//! numerical failures or dimensions beyond the enumeration cap.

use std::num::NonZeroUsize;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use boxqp::{classify, forge, io, oracle, rlt, sdprlt};
use boxqp::{Error, ForgeSpec, ForgedInstance, ForgedKind, Result};

/// Generate, solve, verify, and classify box-constrained quadratic programs
/// of the form `minimize 1/2 x'Qx + c'x over [0,1]^n`.
///
/// Commands print a single JSON document to stdout. Set the BOXQP_THREADS
/// environment variable to parallelize the enumeration solvers; results do
/// not depend on the thread count. Index lists in files and flags are
/// 1-based.
#[derive(Parser)]
#[command(name = "boxqp", version, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance with known relaxation behavior
    Gen(GenArgs),
    /// Solve the relaxation and/or the exact problem by enumeration
    Solve(SolveArgs),
    /// Check a dual certificate against an instance
    Verify(VerifyArgs),
    /// Label how tight the relaxations are, using embedded evidence
    Classify(ClassifyArgs),
    /// Evaluate the objective and its convex underestimator at a point
    Eval(EvalArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Generator kind: exact-rlt, inexact-rlt, exact-sdp-rlt,
    /// exact-sdp-rlt-inexact-rlt, or inexact-sdp-rlt-family
    #[arg(long)]
    kind: ForgedKind,
    /// Number of variables
    #[arg(long)]
    n: usize,
    /// Seed for the multiplier sampler (unused by the family generator)
    #[arg(long)]
    seed: Option<u64>,
    /// 1-based partition "lower:interior:upper", e.g. "1,3::2,4"
    /// (exact-rlt and inexact-rlt; sampled from the seed when omitted)
    #[arg(long)]
    partition: Option<String>,
    /// Designated point, comma-separated, e.g. "0,0.5,1"
    /// (exact-sdp-rlt kinds; sampled from the seed when omitted)
    #[arg(long)]
    point: Option<String>,
    /// Magnitude of sampled multipliers [default: 1]
    #[arg(long)]
    magnitude: Option<f64>,
    /// Probability that a permitted multiplier is nonzero [default: 1]
    #[arg(long)]
    density: Option<f64>,
    /// Lower bound for multipliers that must stay strictly positive
    /// [default: 0.1]
    #[arg(long)]
    strict_floor: Option<f64>,
    /// Also write the document to this file
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file
    file: PathBuf,
    /// Solve the linear relaxation over its half-integral lattice
    #[arg(long)]
    rlt: bool,
    /// Find the exact optimum by face enumeration
    #[arg(long)]
    global: bool,
    /// Also scan a uniform grid with this many points per axis
    #[arg(long)]
    grid: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Instance file
    file: PathBuf,
    /// Which relaxation the certificate addresses
    #[arg(long)]
    kind: CertKind,
    /// Certificate file (defaults to the certificate embedded in FILE)
    #[arg(long)]
    cert: Option<PathBuf>,
    /// Residual tolerance, scaled by the data magnitude
    #[arg(long, default_value_t = rlt::DEFAULT_CERT_TOL)]
    tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum CertKind {
    Rlt,
    Sdprlt,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Instance file; embedded certificates and witnesses are used as
    /// evidence for the strengthened relaxation's value
    file: PathBuf,
    /// Relative tolerance for value comparisons
    #[arg(long, default_value_t = classify::DEFAULT_CLASSIFY_TOL)]
    tol: f64,
}

#[derive(Args)]
struct EvalArgs {
    /// Instance file
    file: PathBuf,
    /// Point to evaluate, comma-separated, e.g. "0.5,0.5"
    #[arg(long)]
    point: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Classify(args) => cmd_classify(args),
        Command::Eval(args) => cmd_eval(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::CertificateInvalid(_)
        | Error::InfeasibleWitness(_)
        | Error::InconsistentReport(_) => 1,
        Error::NumericalFailure(_) | Error::DimensionCap { .. } => 3,
        _ => 2,
    }
}

/// Worker count for the enumeration solvers, from BOXQP_THREADS.
fn thread_count() -> Option<NonZeroUsize> {
    std::env::var("BOXQP_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .and_then(NonZeroUsize::new)
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

/// Defaults omitted flags from the seed, on a stream separate from the one
/// the multiplier sampler itself draws on.
fn default_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    rng
}

fn sample_lower_set(n: usize, seed: u64) -> Vec<usize> {
    let mut rng = default_rng(seed);
    (0..n).filter(|_| rng.random::<bool>()).collect()
}

fn sample_bands(n: usize, seed: u64) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let mut rng = default_rng(seed);
    let (mut lower, mut interior, mut upper) = (Vec::new(), Vec::new(), Vec::new());
    for j in 0..n {
        match rng.random_range(0..3u32) {
            0 => lower.push(j),
            1 => interior.push(j),
            _ => upper.push(j),
        }
    }
    if interior.is_empty() {
        // This kind needs a fractional coordinate; promote the first one.
        lower.retain(|&j| j != 0);
        upper.retain(|&j| j != 0);
        interior.push(0);
    }
    (lower, interior, upper)
}

fn sample_designated_point(n: usize, seed: u64, need_interior: bool) -> Vec<f64> {
    let mut rng = default_rng(seed);
    let mut point: Vec<f64> = (0..n)
        .map(|_| {
            let toss: f64 = rng.random();
            if toss < 0.25 {
                0.0
            } else if toss < 0.5 {
                1.0
            } else {
                rng.random_range(0.0..1.0)
            }
        })
        .collect();
    if need_interior && !point.iter().any(|&v| v > 1e-9 && v < 1.0 - 1e-9) {
        point[0] = 0.5;
    }
    point
}

fn parse_partition(text: &str, n: usize) -> Result<boxqp::IndexPartition> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidParameter(format!(
            "--partition needs three ':'-separated sections (lower:interior:upper), got {}",
            parts.len()
        )));
    }
    let parse_list = |section: &str, name: &str| -> Result<Vec<usize>> {
        if section.trim().is_empty() {
            return Ok(Vec::new());
        }
        section
            .split(',')
            .map(|tok| {
                tok.trim().parse::<usize>().map_err(|_| {
                    Error::InvalidParameter(format!("bad index {:?} in the {name} list", tok.trim()))
                })
            })
            .collect()
    };
    let dto = io::PartitionDto {
        lower: parse_list(parts[0], "lower")?,
        interior: parse_list(parts[1], "interior")?,
        upper: parse_list(parts[2], "upper")?,
    };
    dto.to_partition(n)
}

fn parse_point(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|tok| {
            tok.trim().parse::<f64>().map_err(|_| {
                Error::InvalidParameter(format!("bad coordinate {:?} in --point", tok.trim()))
            })
        })
        .collect()
}

fn reject_flag(given: bool, flag: &str, kind: ForgedKind) -> Result<()> {
    if given {
        return Err(Error::InvalidParameter(format!("{flag} is not used by --kind {kind}")));
    }
    Ok(())
}

fn cmd_gen(args: GenArgs) -> Result<u8> {
    let kind = args.kind;
    let fi: ForgedInstance = if kind == ForgedKind::InexactSdpRltFamily {
        // The family is parameter-free beyond its dimension.
        reject_flag(args.seed.is_some(), "--seed", kind)?;
        reject_flag(args.partition.is_some(), "--partition", kind)?;
        reject_flag(args.point.is_some(), "--point", kind)?;
        reject_flag(args.magnitude.is_some(), "--magnitude", kind)?;
        reject_flag(args.density.is_some(), "--density", kind)?;
        reject_flag(args.strict_floor.is_some(), "--strict-floor", kind)?;
        forge::inexact_sdprlt_family(args.n)?
    } else {
        let seed = args.seed.ok_or_else(|| {
            Error::InvalidParameter(format!("--kind {kind} requires --seed"))
        })?;
        let mut spec = ForgeSpec::new(seed);
        if let Some(m) = args.magnitude {
            spec.magnitude = m;
        }
        if let Some(d) = args.density {
            spec.density = d;
        }
        if let Some(f) = args.strict_floor {
            spec.strict_floor = f;
        }
        spec.validate()?;
        match kind {
            ForgedKind::ExactRlt => {
                reject_flag(args.point.is_some(), "--point", kind)?;
                let lower = match &args.partition {
                    Some(text) => {
                        let partition = parse_partition(text, args.n)?;
                        if !partition.interior().is_empty() {
                            return Err(Error::InvalidParameter(
                                "--kind exact-rlt certifies a vertex; the interior section \
                                 of --partition must be empty"
                                    .into(),
                            ));
                        }
                        partition.lower()
                    }
                    None => sample_lower_set(args.n, seed),
                };
                forge::exact_rlt(args.n, &lower, &spec)?
            }
            ForgedKind::InexactRlt => {
                reject_flag(args.point.is_some(), "--point", kind)?;
                let (lower, interior, _upper) = match &args.partition {
                    Some(text) => {
                        let partition = parse_partition(text, args.n)?;
                        (partition.lower(), partition.interior(), partition.upper())
                    }
                    None => sample_bands(args.n, seed),
                };
                // The strictly-positive diagonal pair lands on the smallest
                // interior index.
                let pivot = interior.first().copied().unwrap_or(0);
                forge::inexact_rlt(args.n, &lower, &interior, pivot, &spec)?
            }
            ForgedKind::ExactSdpRlt | ForgedKind::ExactSdpRltInexactRlt => {
                reject_flag(args.partition.is_some(), "--partition", kind)?;
                let need_interior = kind == ForgedKind::ExactSdpRltInexactRlt;
                let point = match &args.point {
                    Some(text) => parse_point(text)?,
                    None => sample_designated_point(args.n, seed, need_interior),
                };
                if kind == ForgedKind::ExactSdpRlt {
                    forge::exact_sdprlt(args.n, &point, &spec)?
                } else {
                    forge::exact_sdprlt_inexact_rlt(args.n, &point, &spec)?
                }
            }
            ForgedKind::InexactSdpRltFamily => unreachable!("handled above"),
        }
    };

    let file = io::InstanceFile::from(&fi);
    let text = io::to_json(&file)?;
    if let Some(path) = &args.out {
        std::fs::write(path, &text)?;
    }
    print!("{text}");
    Ok(0)
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

fn cmd_solve(args: SolveArgs) -> Result<u8> {
    let inst = io::load_instance(&args.file)?.instance()?;
    let threads = thread_count();
    let default_both = !args.rlt && !args.global && args.grid.is_none();

    let mut doc = serde_json::Map::new();
    if args.rlt || default_both {
        let sol = rlt::solve_with_threads(&inst, threads)?;
        doc.insert("rlt_value".into(), json!(sol.value));
        doc.insert("rlt_argmin".into(), json!(sol.argmin.x));
        doc.insert("rlt_lattice_minimizers".into(), json!(sol.lattice_minimizers));
    }
    if args.global || default_both {
        let sol = oracle::solve_global_with_threads(&inst, oracle::DEFAULT_ORACLE_TOL, threads)?;
        doc.insert("global_value".into(), json!(sol.value));
        doc.insert("global_argmin".into(), json!(sol.argmin));
        doc.insert("global_candidates_examined".into(), json!(sol.candidates_examined));
        doc.insert("global_degenerate_faces".into(), json!(sol.degenerate_faces));
    }
    if let Some(k) = args.grid {
        let sol = oracle::solve_grid(&inst, k)?;
        doc.insert("grid_value".into(), json!(sol.value));
        doc.insert("grid_point".into(), json!(sol.argmin));
    }
    print!("{}", io::to_json(&doc)?);
    Ok(0)
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn cmd_verify(args: VerifyArgs) -> Result<u8> {
    let file = io::load_instance(&args.file)?;
    let inst = file.instance()?;

    let (kind_name, dual, check) = match args.kind {
        CertKind::Rlt => {
            let (point, cert) = match &args.cert {
                Some(path) => io::load_certificate(path)?.rlt_pair()?,
                None => file.rlt_certificate()?.ok_or_else(|| {
                    Error::InvalidParameter(
                        "instance file embeds no rlt certificate; pass --cert".into(),
                    )
                })?,
            };
            let check = rlt::verify_certificate(&inst, &point, &cert, args.tol)?;
            ("rlt", rlt::dual_objective(&cert), check)
        }
        CertKind::Sdprlt => {
            let (point, cert) = match &args.cert {
                Some(path) => io::load_certificate(path)?.sdprlt_pair()?,
                None => file.sdprlt_certificate()?.ok_or_else(|| {
                    Error::InvalidParameter(
                        "instance file embeds no sdprlt certificate; pass --cert".into(),
                    )
                })?,
            };
            let check = sdprlt::verify_certificate(&inst, &point, &cert, args.tol)?;
            ("sdprlt", sdprlt::dual_objective(&cert), check)
        }
    };

    let doc = json!({
        "kind": kind_name,
        "verified": check.verified,
        "dual_objective": dual,
        "scale": check.scale,
        "conditions": check
            .conditions
            .iter()
            .map(|c| json!({"name": c.name, "residual": c.residual, "ok": c.ok}))
            .collect::<Vec<_>>(),
        "failing": check.failing(),
    });
    print!("{}", io::to_json(&doc)?);
    Ok(if check.verified { 0 } else { 1 })
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

fn cmd_classify(args: ClassifyArgs) -> Result<u8> {
    let file = io::load_instance(&args.file)?;
    let inst = file.instance()?;
    let hints = classify::Hints {
        pinned: file.sdprlt_certificate()?,
        witness: file.feasible_witness()?,
    };
    let report = classify::classify(&inst, &hints, args.tol)?;
    print!("{}", io::to_json(&io::ReportFile::from_report(&report))?);
    Ok(0)
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

fn cmd_eval(args: EvalArgs) -> Result<u8> {
    let inst = io::load_instance(&args.file)?.instance()?;
    let x = parse_point(&args.point)?;
    let doc = json!({
        "objective": inst.objective(&x)?,
        "underestimator": rlt::underestimator(&inst, &x)?,
    });
    print!("{}", io::to_json(&doc)?);
    Ok(0)
}
