//! `satgeom`: construct, verify, count, and bound saturating sets from the
//! command line, with reproducible seeds and machine-readable output.
//!
//! Exit codes: 0 success, 1 verification-false, 2 usage or precondition
//! error, 3 budget exhaustion. Errors print JSON on stderr.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use satgeom::bounds;
use satgeom::codes::{
    check_mcf, check_mcf_direct, export_parity_check, length_function_table,
    write_length_table_csv, ParityCheckMatrix,
};
use satgeom::geometry::IncidencePlane;
use satgeom::gf::{prime_power, FieldSpec};
use satgeom::oracle::{
    brute_covering_radius, brute_min_saturating, brute_pi, brute_t, EnumerationBudget,
};
use satgeom::randomized::{
    construct_mu_direct, construct_mu_iterative, construct_saturating, monte_carlo,
    ConstructionResult, ConstructorParams,
};
use satgeom::saturation::{is_mu_saturating, PointSet};
use satgeom::Error;

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(
    name = "satgeom",
    version,
    about = "Saturating sets in projective planes and spaces: randomized construction, \
             verification, exact bounds, brute-force oracles, covering codes"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Write the primary output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, ValueEnum)]
enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Generate or validate incidence-plane files.
    Plane {
        #[command(subcommand)]
        cmd: PlaneCmd,
    },
    /// Construct a random (1,mu)-saturating set (Las Vegas).
    Construct(ConstructArgs),
    /// Verify a point-set file against a plane.
    Verify(VerifyArgs),
    /// Estimate the random-construction success rate.
    Mc(McArgs),
    /// Evaluate bound formulas or emit the bound table.
    Bounds {
        #[command(subcommand)]
        cmd: BoundsCmd,
    },
    /// Smallest order past which the closed-form inequality holds.
    Threshold(ThresholdArgs),
    /// Brute-force enumeration oracles.
    Oracle {
        #[command(subcommand)]
        cmd: OracleCmd,
    },
    /// Parity-check matrix export and MCF checks.
    Code {
        #[command(subcommand)]
        cmd: CodeCmd,
    },
}

/// Where the plane comes from: generated PG(2,q) or an ingested file.
#[derive(Args)]
struct PlaneSource {
    /// Plane order (prime power); shorthand for --p/--m.
    #[arg(long)]
    q: Option<u64>,
    /// Field characteristic (use with --m).
    #[arg(long, requires = "m")]
    p: Option<u32>,
    /// Field extension degree (use with --p).
    #[arg(long, requires = "p")]
    m: Option<u32>,
    /// Load the plane from a file instead of generating it.
    #[arg(long)]
    plane_file: Option<PathBuf>,
}

impl PlaneSource {
    fn resolve(&self) -> Result<IncidencePlane, Error> {
        if let Some(path) = &self.plane_file {
            let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            return IncidencePlane::load(BufReader::new(file));
        }
        let (p, m) = match (self.p, self.m, self.q) {
            (Some(p), Some(m), _) => (p, m),
            (None, None, Some(q)) => prime_power(q).ok_or(Error::InvalidRange(format!(
                "q = {q} is not a prime power"
            )))?,
            _ => {
                return Err(Error::InvalidRange(
                    "provide --q, --p with --m, or --plane-file".into(),
                ))
            }
        };
        IncidencePlane::generate(&FieldSpec::new(p, m)?)
    }
}

#[derive(Subcommand)]
enum PlaneCmd {
    /// Generate PG(2,q) and write the plane file format.
    Gen {
        #[command(flatten)]
        source: PlaneSource,
    },
    /// Validate a plane file against the incidence axioms.
    Check {
        #[arg(long)]
        plane_file: PathBuf,
    },
}

#[derive(Args)]
struct ConstructArgs {
    #[command(flatten)]
    source: PlaneSource,
    /// Sample-size scaling (>= 1) for the plain construction.
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    /// Target multiplicity.
    #[arg(long, default_value_t = 1)]
    mu: u32,
    /// Construction route for mu >= 2.
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    method: Method,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    retries: u32,
    /// Fail instead of flagging when the proved range condition breaks.
    #[arg(long)]
    enforce_range: bool,
    /// Also write the resulting point set to a file.
    #[arg(long)]
    set_out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, ValueEnum)]
enum Method {
    /// Direct when mu in {2,3,4} and q meets its threshold, else iterative.
    Auto,
    Direct,
    Iterative,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    source: PlaneSource,
    #[arg(long)]
    set_file: PathBuf,
    #[arg(long, default_value_t = 1)]
    mu: u64,
}

#[derive(Args)]
struct McArgs {
    #[command(flatten)]
    source: PlaneSource,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = rayon default); results do not depend on it.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Subcommand)]
enum BoundsCmd {
    /// Evaluate the formulas at one parameter point.
    Eval(BoundsEvalArgs),
    /// Length-function bound table over prime powers.
    Table(BoundsTableArgs),
}

#[derive(Args)]
struct BoundsEvalArgs {
    #[arg(long)]
    q: u32,
    /// Sample size minus one; unlocks the exact probabilities and counts.
    #[arg(long)]
    w: Option<u32>,
    #[arg(long)]
    c: Option<f64>,
    /// Closed-form scaling for (q+1)^2 pi_mu.
    #[arg(long)]
    d: Option<f64>,
    #[arg(long)]
    mu: Option<u32>,
    /// Existing-set size for the disjoint-extension bound.
    #[arg(long)]
    k: Option<u32>,
    /// Space dimension; unlocks the PG(N,q) bound.
    #[arg(long = "N", value_name = "N")]
    n_dim: Option<u32>,
}

#[derive(Args)]
struct BoundsTableArgs {
    #[arg(long, default_value_t = 4)]
    q_min: u32,
    #[arg(long)]
    q_max: u32,
    #[arg(long, default_value_t = 4)]
    mu_max: u32,
    /// Comma-separated list of dimensions.
    #[arg(long, default_value = "2", value_delimiter = ',')]
    n_dims: Vec<u32>,
}

#[derive(Args)]
struct ThresholdArgs {
    #[arg(long)]
    mu: u32,
    #[arg(long)]
    d: f64,
    #[arg(long, default_value_t = 512)]
    qmax: u32,
    /// Accepted for symmetry with `mc`; the scan is cheap and sequential.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Args)]
struct BudgetArgs {
    /// Max subsets to enumerate (env SATGEOM_BUDGET overrides the default).
    #[arg(long)]
    max_subsets: Option<u64>,
    #[arg(long, default_value_t = 600.0)]
    max_seconds: f64,
}

impl BudgetArgs {
    fn resolve(&self) -> EnumerationBudget {
        let default = std::env::var("SATGEOM_BUDGET")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(EnumerationBudget::default().max_subsets);
        EnumerationBudget {
            max_subsets: self.max_subsets.unwrap_or(default),
            max_seconds: self.max_seconds,
        }
    }
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Exact uncovered probability by exhaustive enumeration.
    Pi {
        #[command(flatten)]
        source: PlaneSource,
        #[arg(long)]
        w: u32,
        /// Fixed point index.
        #[arg(long, default_value_t = 0)]
        a: u32,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Coverage-multiplicity histogram over subsets avoiding a point.
    T {
        #[command(flatten)]
        source: PlaneSource,
        #[arg(long)]
        w: u32,
        #[arg(long, default_value_t = 0)]
        a: u32,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Exact minimal (1,mu)-saturating set size on a tiny plane.
    MinSat {
        #[command(flatten)]
        source: PlaneSource,
        #[arg(long, default_value_t = 1)]
        mu: u64,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Covering radius of a parity-check matrix (capped at 3).
    Radius {
        #[arg(long, conflicts_with_all = ["q", "set_file"])]
        matrix_file: Option<PathBuf>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        set_file: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Subcommand)]
enum CodeCmd {
    /// Write the parity-check matrix of a point set.
    Export {
        #[command(flatten)]
        source: PlaneSource,
        #[arg(long)]
        set_file: PathBuf,
    },
    /// Check the (2,mu) multiple-covering property.
    Check {
        #[arg(long, conflicts_with_all = ["q", "set_file"])]
        matrix_file: Option<PathBuf>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        set_file: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        mu: u64,
        /// Use direct syndrome enumeration instead of the geometric check.
        #[arg(long)]
        direct: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            let payload = json!({
                "schema": SCHEMA,
                "error": { "kind": error_kind(&e), "message": e.to_string() },
            });
            eprintln!("{payload}");
            ExitCode::from(match e {
                Error::BudgetExceeded(_) | Error::RetriesExhausted { .. } => 3,
                _ => 2,
            })
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::NotPrime(_) => "not-prime",
        Error::FieldTooLarge { .. } => "field-too-large",
        Error::DivisionByZero { .. } => "division-by-zero",
        Error::SpaceTooLarge { .. } => "space-too-large",
        Error::ParseError { .. } => "parse-error",
        Error::AxiomViolation { .. } => "axiom-violation",
        Error::SamePoint(_) => "same-point",
        Error::GeometryMismatch { .. } => "geometry-mismatch",
        Error::KTooLarge { .. } => "k-too-large",
        Error::RetriesExhausted { .. } => "retries-exhausted",
        Error::RangeViolation(_) => "range-violation",
        Error::PreconditionFailed(_) => "precondition-failed",
        Error::QBelowThreshold { .. } => "q-below-threshold",
        Error::UnsupportedMu(_) => "unsupported-mu",
        Error::InvalidRange(_) => "invalid-range",
        Error::NoApplicableRow { .. } => "no-applicable-row",
        Error::ConstraintViolated(_) => "constraint-violated",
        Error::BudgetExceeded(_) => "budget-exceeded",
        Error::NoCoordinates => "no-coordinates",
        Error::EmptySet => "empty-set",
        Error::EmptyExperiment => "empty-experiment",
        Error::NotFound(_) => "not-found",
        Error::Io(_) => "io",
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::Plane { cmd } => plane_cmd(cli, cmd),
        Command::Construct(args) => construct_cmd(cli, args),
        Command::Verify(args) => verify_cmd(cli, args),
        Command::Mc(args) => mc_cmd(cli, args),
        Command::Bounds { cmd } => bounds_cmd(cli, cmd),
        Command::Threshold(args) => threshold_cmd(cli, args),
        Command::Oracle { cmd } => oracle_cmd(cli, cmd),
        Command::Code { cmd } => code_cmd(cli, cmd),
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), Error> {
    match &cli.out {
        Some(path) => {
            let file =
                File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            w.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                w.write_all(b"\n")?;
            }
            Ok(())
        }
        None => {
            println!("{}", text.trim_end_matches('\n'));
            Ok(())
        }
    }
}

/// Renders a JSON payload per the requested format; `human` builds the
/// plain-text alternative.
fn emit_result(cli: &Cli, payload: &Value, human: String) -> Result<(), Error> {
    match cli.format {
        Format::Json => emit(cli, &payload.to_string()),
        _ => emit(cli, &human),
    }
}

fn plane_cmd(cli: &Cli, cmd: &PlaneCmd) -> Result<ExitCode, Error> {
    match cmd {
        PlaneCmd::Gen { source } => {
            let plane = source.resolve()?;
            let mut buf = Vec::new();
            plane.write(&mut buf)?;
            emit(cli, std::str::from_utf8(&buf).expect("ascii"))?;
            Ok(ExitCode::SUCCESS)
        }
        PlaneCmd::Check { plane_file } => {
            let file = File::open(plane_file)
                .map_err(|e| Error::Io(format!("{}: {e}", plane_file.display())))?;
            match IncidencePlane::load(BufReader::new(file)) {
                Ok(plane) => {
                    let payload = json!({
                        "schema": SCHEMA,
                        "command": "plane-check",
                        "valid": true,
                        "q": plane.q(),
                        "points": plane.point_count(),
                        "lines": plane.line_count(),
                        "geometry": plane.geometry_id(),
                    });
                    emit_result(
                        cli,
                        &payload,
                        format!(
                            "valid plane of order {} ({} points, {} lines): {}",
                            plane.q(),
                            plane.point_count(),
                            plane.line_count(),
                            plane.geometry_id()
                        ),
                    )?;
                    Ok(ExitCode::SUCCESS)
                }
                Err(e @ Error::AxiomViolation { .. }) => {
                    let payload = json!({
                        "schema": SCHEMA,
                        "command": "plane-check",
                        "valid": false,
                        "violation": e.to_string(),
                    });
                    emit_result(cli, &payload, format!("invalid plane: {e}"))?;
                    Ok(ExitCode::from(1))
                }
                Err(other) => Err(other),
            }
        }
    }
}

fn construction_payload(
    command: &str,
    plane: &IncidencePlane,
    args_mu: u32,
    c: f64,
    seed: u64,
    method: &str,
    out: &ConstructionResult,
) -> Value {
    json!({
        "schema": SCHEMA,
        "command": command,
        "q": plane.q(),
        "mu": args_mu,
        "c": c,
        "seed": seed,
        "method": method,
        "w": out.w,
        "size": out.set.len(),
        "trials_used": out.trials_used,
        "bound": out.size_bound,
        "verified": out.verified,
        "theorem_range_ok": out.theorem_range_ok,
        "d_sequence": out.d_sequence,
        "set": out.set.indices(),
    })
}

fn construct_cmd(cli: &Cli, args: &ConstructArgs) -> Result<ExitCode, Error> {
    let plane = args.source.resolve()?;
    let params = ConstructorParams {
        c: args.c,
        mu: args.mu,
        seed: args.seed,
        max_retries: args.retries,
        enforce_range: args.enforce_range,
        reverify_prev: true,
    };
    let (out, method) = if args.mu <= 1 {
        (construct_saturating(&plane, &params)?, "plain")
    } else {
        let threshold = match args.mu {
            2 => Some(97),
            3 => Some(181),
            4 => Some(125),
            _ => None,
        };
        let direct_ready = threshold.is_some_and(|t| plane.q() >= t);
        match args.method {
            Method::Direct => (construct_mu_direct(&plane, args.mu, &params)?, "direct"),
            Method::Iterative => (
                construct_mu_iterative(&plane, args.mu, &params)?,
                "iterative",
            ),
            Method::Auto if direct_ready => {
                (construct_mu_direct(&plane, args.mu, &params)?, "direct")
            }
            Method::Auto => (
                construct_mu_iterative(&plane, args.mu, &params)?,
                "iterative",
            ),
        }
    };
    if let Some(path) = &args.set_out {
        let file = File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        out.set.write(BufWriter::new(file))?;
    }
    let payload = construction_payload("construct", &plane, args.mu, args.c, args.seed, method, &out);
    let human = format!(
        "constructed (1,{})-saturating set: size {} = w+1 with w = {}, bound {:.4}, \
         trials {}, seed {}, method {}{}",
        args.mu.max(1),
        out.set.len(),
        out.w,
        out.size_bound,
        out.trials_used,
        args.seed,
        method,
        if out.theorem_range_ok {
            String::new()
        } else {
            "\nwarning: sampled size is outside the proved range condition".to_string()
        }
    );
    emit_result(cli, &payload, human)?;
    Ok(ExitCode::SUCCESS)
}

fn verify_cmd(cli: &Cli, args: &VerifyArgs) -> Result<ExitCode, Error> {
    let plane = args.source.resolve()?;
    let file = File::open(&args.set_file)
        .map_err(|e| Error::Io(format!("{}: {e}", args.set_file.display())))?;
    let set = PointSet::load(BufReader::new(file), plane.point_count() as u64)?;
    let check = is_mu_saturating(&plane, &set, args.mu)?;
    let payload = json!({
        "schema": SCHEMA,
        "command": "verify",
        "q": plane.q(),
        "mu": args.mu,
        "size": set.len(),
        "saturating": check.saturating,
        "witness": check.witness.map(|w| json!({
            "point": w.point,
            "multiplicity": w.multiplicity,
            "deficit": w.deficit,
        })),
    });
    let human = if check.saturating {
        format!("set of size {} is (1,{})-saturating", set.len(), args.mu)
    } else {
        let w = check.witness.unwrap();
        format!(
            "set of size {} is NOT (1,{})-saturating: point {} has multiplicity {} (deficit {})",
            set.len(),
            args.mu,
            w.point,
            w.multiplicity,
            w.deficit
        )
    };
    emit_result(cli, &payload, human)?;
    Ok(if check.saturating {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T, Error> {
    if jobs == 0 {
        Ok(f())
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Io(e.to_string()))?;
        Ok(pool.install(f))
    }
}

fn mc_cmd(cli: &Cli, args: &McArgs) -> Result<ExitCode, Error> {
    let plane = args.source.resolve()?;
    let params = ConstructorParams {
        seed: args.seed,
        ..Default::default()
    };
    let report = with_pool(args.jobs, || monte_carlo(&plane, args.c, args.trials, &params))??;
    let payload = json!({
        "schema": SCHEMA,
        "command": "mc",
        "q": plane.q(),
        "c": args.c,
        "report": report,
    });
    let human = format!(
        "{} / {} trials saturating (rate {:.4}); proved bound {:.4}; \
         sample size {} (w = {}), seed {}",
        report.successes,
        report.trials,
        report.empirical_rate,
        report.theorem2_bound,
        report.sample_size,
        report.w,
        report.seed
    );
    emit_result(cli, &payload, human)?;
    Ok(ExitCode::SUCCESS)
}

fn bounds_cmd(cli: &Cli, cmd: &BoundsCmd) -> Result<ExitCode, Error> {
    match cmd {
        BoundsCmd::Eval(args) => bounds_eval(cli, args),
        BoundsCmd::Table(args) => bounds_table(cli, args),
    }
}

fn bounds_eval(cli: &Cli, args: &BoundsEvalArgs) -> Result<ExitCode, Error> {
    let q = args.q;
    let mut payload = serde_json::Map::new();
    payload.insert("schema".into(), json!(SCHEMA));
    payload.insert("command".into(), json!("bounds-eval"));
    payload.insert("q".into(), json!(q));
    let mut human = Vec::new();
    let t1 = bounds::theorem1_bound(q);
    payload.insert("theorem1_bound".into(), json!(t1));
    human.push(format!("saturating-set size bound: {t1:.6}"));
    let del = bounds::delta(q);
    payload.insert("delta".into(), json!(del));
    human.push(format!("delta: {del:.6}"));
    if let Some(c) = args.c {
        let t2 = bounds::theorem2_bound(q, c);
        payload.insert("c".into(), json!(c));
        payload.insert("theorem2_bound".into(), json!(t2));
        human.push(format!("success-probability bound at c={c}: {t2:.6}"));
    }
    if let Some(w) = args.w {
        payload.insert("w".into(), json!(w));
        let pi = bounds::pi_exact(q, w)?;
        payload.insert("pi_exact".into(), json!(pi.to_string()));
        payload.insert("pi_exact_f64".into(), json!(pi.to_f64()));
        let up = bounds::pi_upper(q, w);
        payload.insert("pi_upper".into(), json!(up.value));
        payload.insert("pi_upper_valid".into(), json!(up.valid));
        human.push(format!(
            "pi(q={q}, w={w}) = {pi} ~ {:.6e}; upper bound {:.6e} (range ok: {})",
            pi.to_f64().unwrap_or(f64::NAN),
            up.value,
            up.valid
        ));
        let ts: Vec<String> = (0..=3).map(|i| bounds::t_count(q, w, i).to_string()).collect();
        human.push(format!("T_0..T_3: {}", ts.join(", ")));
        payload.insert("t_counts".into(), json!(ts));
        if let Some(k) = args.k {
            if let Ok(lambda) = bounds::lambda_upper(q, w, k) {
                payload.insert("k".into(), json!(k));
                payload.insert("lambda_upper".into(), json!(lambda));
                human.push(format!("lambda upper bound at k={k}: {lambda:.6e}"));
            }
        }
        if let Some(mu) = args.mu {
            let pim = bounds::pi_mu_exact(q, w, mu)?;
            payload.insert("pi_mu_exact".into(), json!(pim.to_string()));
            payload.insert("pi_mu_exact_f64".into(), json!(pim.to_f64()));
            human.push(format!(
                "pi_mu(q={q}, w={w}, mu={mu}) = {pim} ~ {:.6e}",
                pim.to_f64().unwrap_or(f64::NAN)
            ));
        }
    }
    if let Some(mu) = args.mu {
        payload.insert("mu".into(), json!(mu));
        let seq = bounds::d_sequence(q, mu);
        payload.insert("d_sequence".into(), json!(seq));
        human.push(format!("D sequence: {seq:?}"));
        match bounds::d_closed(q, mu) {
            Ok(d) => {
                payload.insert(
                    "d_closed".into(),
                    json!({ "value": d.value, "row": d.row }),
                );
                human.push(format!("closed D_mu: {} ({:?} row)", d.value, d.row));
            }
            Err(e) => {
                payload.insert("d_closed_error".into(), json!(e.to_string()));
                human.push(format!("closed D_mu: {e}"));
            }
        }
        if let Some(d) = args.d {
            let closed = bounds::pi_mu_closed(q, d, mu)?;
            payload.insert("d".into(), json!(d));
            payload.insert("pi_mu_closed".into(), json!(closed));
            human.push(format!("(q+1)^2 pi_mu closed form at d={d}: {closed:.6}"));
        }
        if let Some(n_dim) = args.n_dim {
            payload.insert("N".into(), json!(n_dim));
            match bounds::space_bounds(n_dim, q, mu) {
                Ok(v) => {
                    payload.insert("space_bound".into(), json!(v));
                    human.push(format!("PG({n_dim},{q}) size bound: {v:.4}"));
                }
                Err(e) => {
                    payload.insert("space_bound_error".into(), json!(e.to_string()));
                    human.push(format!("PG({n_dim},{q}) size bound: {e}"));
                }
            }
        }
        let cmp = bounds::comparison_bounds(q, mu);
        payload.insert("comparison".into(), json!(cmp));
        if let (Some(bound), Some(improves)) = (cmp.paper_bound, cmp.improves) {
            human.push(format!(
                "bound {bound:.4} vs prior {:.4}: improves = {improves}",
                if mu == 1 { cmp.prior_3sqrt2 } else { cmp.prior_66sqrt }
            ));
        }
    }
    emit_result(cli, &Value::Object(payload), human.join("\n"))?;
    Ok(ExitCode::SUCCESS)
}

fn bounds_table(cli: &Cli, args: &BoundsTableArgs) -> Result<ExitCode, Error> {
    let qs: Vec<u32> = (args.q_min..=args.q_max)
        .filter(|&q| prime_power(q as u64).is_some())
        .collect();
    let mus: Vec<u32> = (1..=args.mu_max).collect();
    let rows = length_function_table(&qs, &mus, &args.n_dims);
    match cli.format {
        Format::Json => {
            let payload = json!({
                "schema": SCHEMA,
                "command": "bounds-table",
                "rows": rows,
            });
            emit(cli, &payload.to_string())?;
        }
        _ => {
            let mut buf = Vec::new();
            write_length_table_csv(&rows, &mut buf)?;
            emit(cli, std::str::from_utf8(&buf).expect("ascii"))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn threshold_cmd(cli: &Cli, args: &ThresholdArgs) -> Result<ExitCode, Error> {
    let scan = with_pool(args.jobs, || {
        bounds::threshold_scan(args.mu, args.d, args.qmax)
    })??;
    let payload = json!({
        "schema": SCHEMA,
        "command": "threshold",
        "mu": scan.mu,
        "d": scan.d,
        "q_max": scan.q_max,
        "q_star": scan.q_star_prime_power,
        "q_star_integer": scan.q_star_integer,
        "last_fail_prime_power": scan.last_fail_prime_power,
        "last_fail_integer": scan.last_fail_integer,
        "hp_rechecks": scan.hp_rechecks,
    });
    let human = format!(
        "mu={} d={}: inequality holds for every prime power q >= {} (last failing prime \
         power: {}; integer crossing: {}; {} boundary cases re-checked at 50+ digits)",
        scan.mu,
        scan.d,
        scan.q_star_prime_power,
        scan.last_fail_prime_power
            .map_or("none".into(), |v| v.to_string()),
        scan.q_star_integer.map_or("none".into(), |v| v.to_string()),
        scan.hp_rechecks
    );
    emit_result(cli, &payload, human)?;
    Ok(ExitCode::SUCCESS)
}

fn oracle_cmd(cli: &Cli, cmd: &OracleCmd) -> Result<ExitCode, Error> {
    match cmd {
        OracleCmd::Pi {
            source,
            w,
            a,
            budget,
        } => {
            let plane = source.resolve()?;
            let budget = budget.resolve();
            let pi = brute_pi(&plane, *a, *w, &budget)?;
            let formula = bounds::pi_exact(plane.q(), *w)?;
            let payload = json!({
                "schema": SCHEMA,
                "command": "oracle-pi",
                "q": plane.q(),
                "w": w,
                "a": a,
                "pi": pi.to_string(),
                "pi_f64": pi.to_f64(),
                "formula": formula.to_string(),
                "agrees": pi == formula,
            });
            let human = format!(
                "enumerated pi = {pi} ~ {:.6e}; closed formula {} (agrees: {})",
                pi.to_f64().unwrap_or(f64::NAN),
                formula,
                pi == formula
            );
            emit_result(cli, &payload, human)?;
            Ok(ExitCode::SUCCESS)
        }
        OracleCmd::T {
            source,
            w,
            a,
            budget,
        } => {
            let plane = source.resolve()?;
            let budget = budget.resolve();
            let hist = brute_t(&plane, *a, *w, &budget)?;
            let mut agree = true;
            for i in 0..=3u32 {
                let counted = hist.get(&(i as u64)).cloned().unwrap_or_default();
                agree &= counted == bounds::t_count(plane.q(), *w, i);
            }
            let hist_json: serde_json::Map<String, Value> = hist
                .iter()
                .map(|(m, c)| (m.to_string(), json!(c.to_string())))
                .collect();
            let payload = json!({
                "schema": SCHEMA,
                "command": "oracle-t",
                "q": plane.q(),
                "w": w,
                "a": a,
                "histogram": hist_json,
                "agrees_with_t_counts": agree,
            });
            let human = format!(
                "coverage histogram over subsets avoiding point {a}: {}\nmatches T_0..T_3: {agree}",
                hist.iter()
                    .map(|(m, c)| format!("{m}:{c}"))
                    .collect::<Vec<_>>()
                    .join(" ")
            );
            emit_result(cli, &payload, human)?;
            Ok(ExitCode::SUCCESS)
        }
        OracleCmd::MinSat { source, mu, budget } => {
            let plane = source.resolve()?;
            let budget = budget.resolve();
            let found = brute_min_saturating(&plane, *mu, &budget)?;
            let payload = json!({
                "schema": SCHEMA,
                "command": "oracle-min-sat",
                "q": plane.q(),
                "mu": mu,
                "size": found.size,
                "witness": found.witness.indices(),
                "subsets_checked": found.subsets_checked,
            });
            let human = format!(
                "minimal (1,{mu})-saturating size in order-{} plane: {} (witness {:?}, \
                 {} subsets checked)",
                plane.q(),
                found.size,
                found.witness.indices(),
                found.subsets_checked
            );
            emit_result(cli, &payload, human)?;
            Ok(ExitCode::SUCCESS)
        }
        OracleCmd::Radius {
            matrix_file,
            q,
            set_file,
            budget,
        } => {
            let h = load_matrix(matrix_file.as_deref(), *q, set_file.as_deref())?;
            let budget = budget.resolve();
            let radius = brute_covering_radius(&h, &budget)?;
            let payload = json!({
                "schema": SCHEMA,
                "command": "oracle-radius",
                "q": h.q(),
                "r": h.r(),
                "n": h.n(),
                "radius": radius,
            });
            emit_result(
                cli,
                &payload,
                format!(
                    "covering radius of the [{}, {}]_{} code: {radius} (capped at 3)",
                    h.n(),
                    h.n() as i64 - h.r() as i64,
                    h.q()
                ),
            )?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn load_matrix(
    matrix_file: Option<&std::path::Path>,
    q: Option<u64>,
    set_file: Option<&std::path::Path>,
) -> Result<ParityCheckMatrix, Error> {
    match (matrix_file, q, set_file) {
        (Some(path), _, _) => {
            let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            ParityCheckMatrix::load(BufReader::new(file))
        }
        (None, Some(q), Some(set_path)) => {
            let (p, m) = prime_power(q).ok_or(Error::InvalidRange(format!(
                "q = {q} is not a prime power"
            )))?;
            let plane = IncidencePlane::generate(&FieldSpec::new(p, m)?)?;
            let file = File::open(set_path)
                .map_err(|e| Error::Io(format!("{}: {e}", set_path.display())))?;
            let set = PointSet::load(BufReader::new(file), plane.point_count() as u64)?;
            export_parity_check(&plane, &set)
        }
        _ => Err(Error::InvalidRange(
            "provide --matrix-file, or --q with --set-file".into(),
        )),
    }
}

fn code_cmd(cli: &Cli, cmd: &CodeCmd) -> Result<ExitCode, Error> {
    match cmd {
        CodeCmd::Export { source, set_file } => {
            let plane = source.resolve()?;
            let file = File::open(set_file)
                .map_err(|e| Error::Io(format!("{}: {e}", set_file.display())))?;
            let set = PointSet::load(BufReader::new(file), plane.point_count() as u64)?;
            let h = export_parity_check(&plane, &set)?;
            let mut buf = Vec::new();
            h.write(&mut buf)?;
            emit(cli, std::str::from_utf8(&buf).expect("ascii"))?;
            Ok(ExitCode::SUCCESS)
        }
        CodeCmd::Check {
            matrix_file,
            q,
            set_file,
            mu,
            direct,
            budget,
        } => {
            let h = load_matrix(matrix_file.as_deref(), *q, set_file.as_deref())?;
            let ok = if *direct {
                check_mcf_direct(&h, *mu, &budget.resolve())?
            } else {
                check_mcf(&h, *mu)?
            };
            let payload = json!({
                "schema": SCHEMA,
                "command": "code-check",
                "q": h.q(),
                "r": h.r(),
                "n": h.n(),
                "mu": mu,
                "route": if *direct { "syndrome" } else { "geometric" },
                "mcf": ok,
            });
            let human = format!(
                "[{}, {}]_{} code is a (2,{mu})-MCF code: {ok}",
                h.n(),
                h.n() as i64 - h.r() as i64,
                h.q()
            );
            emit_result(cli, &payload, human)?;
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}
