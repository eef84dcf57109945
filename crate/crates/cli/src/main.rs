use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use flatmorse::betti::{self, BaseCaseProvider};
use flatmorse::report::{CheckResult, SCHEMA_VERSION};
use flatmorse::verify::{self, ProbeConfig, ProbeOutcome, VerifyConfig};
use flatmorse::weights::{self, Regularity};
use flatmorse::{Error, IntPolynomial, Mode, Subset, WeightConfig};

#[derive(Parser, Debug)]
#[command(
    name = "flatmorse",
    version,
    about = "Betti numbers of SU(2) flat connection moduli on punctured surfaces"
)]
#[command(args_override_self = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(clap::Args, Debug, Clone)]
struct Opts {
    /// Genus of the surface.
    #[arg(long, global = true, default_value_t = 1)]
    g: u32,
    /// Comma-separated puncture weights `p/q` in [0, 1]; omitted means the classic `-I` puncture.
    #[arg(long, global = true)]
    weights: Option<String>,
    /// Genus-0 base case: `empty`, `poly:<c0,c1,...>` or `probe`.
    #[arg(long, global = true, default_value = "empty")]
    base: String,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// File of `key = value` lines using the flag names; flags given on the command line win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true)]
    probe_starts: Option<usize>,
    #[arg(long, global = true)]
    residual_tol: Option<f64>,
    #[arg(long, global = true)]
    critical_tol: Option<f64>,
    #[arg(long, global = true)]
    fd_step: Option<f64>,
    #[arg(long, global = true)]
    fd_rel_tol: Option<f64>,
    #[arg(long, global = true)]
    split_tol: Option<f64>,
    #[arg(long, global = true)]
    symmetry_tol: Option<f64>,
    #[arg(long, global = true)]
    rank_threshold: Option<f64>,
    #[arg(long, global = true)]
    hessian_step: Option<f64>,
    #[arg(long, global = true)]
    hessian_zero: Option<f64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq)]
enum Command {
    /// Poincaré polynomial of the moduli space.
    Betti,
    /// Critical strata of `½ tr A_g` with indices.
    Strata,
    /// Poincaré polynomial of the classic space (`--g` only).
    Hn,
    /// Regularity of the weights; exit 2 with a witness when irregular.
    Regular,
    /// Drop point weights and absorb `-I`.
    Normalize,
    /// Real dimension of the moduli space.
    Dim,
    /// Poincaré polynomial of the U(2) space.
    U2,
    /// Hessian indices at the explicit critical tuples.
    VerifyCritical,
    /// Newton solves onto the fiber and rank of the derivative.
    VerifyRegular,
    /// Multi-start search for a genus-0 flat connection.
    ProbeEmpty,
    /// All acceptance checks at desk scale.
    Selftest,
}

/// Result of a command: what to print and whether its checks passed.
struct Output {
    json: Value,
    text: String,
    passed: bool,
}

impl Output {
    fn ok(json: Value, text: impl Into<String>) -> Self {
        Self {
            json,
            text: text.into(),
            passed: true,
        }
    }

    fn checks(mut json: Value, checks: &[CheckResult], header: String) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        json["checks"] = serde_json::to_value(checks).unwrap_or_default();
        json["passed"] = passed.into();
        let mut text = header;
        for c in checks {
            text.push('\n');
            text.push_str(&c.line());
        }
        Self { json, text, passed }
    }
}

enum Failure {
    Input(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::FloatWeight(_)
            | Error::WeightParse(_)
            | Error::WeightOutOfRange(_)
            | Error::NotNormalized
            | Error::SubsetOverflow { .. }
            | Error::NoInteriorWeight
            | Error::NotClassic
            | Error::IrregularWeights { .. }
            | Error::GenusZero
            | Error::InvalidBaseCase
            | Error::NotParabolic
            | Error::NotGenusZero
            | Error::ShapeMismatch
            | Error::SignLength { .. } => Failure::Input(e.to_string()),
            _ => Failure::Check(e.to_string()),
        }
    }
}

/// Reads `key = value` lines into `--key=value` tokens.
fn config_tokens(path: &PathBuf) -> Result<Vec<String>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!(
                "{}:{}: expected key = value",
                path.display(),
                k + 1
            ));
        };
        let key = key.trim().replace('_', "-");
        if key == "config" {
            return Err(format!(
                "{}:{}: nested config files are not supported",
                path.display(),
                k + 1
            ));
        }
        out.push(format!("--{key}={}", value.trim()));
    }
    Ok(out)
}

fn parse_cli() -> Result<Cli, ExitCode> {
    let args: Vec<String> = std::env::args().collect();
    let first = Cli::try_parse_from(&args).map_err(|e| {
        let _ = e.print();
        ExitCode::from(if e.use_stderr() { 2 } else { 0 })
    })?;
    let Some(path) = first.opts.config.clone() else {
        return Ok(first);
    };
    let tokens = config_tokens(&path).map_err(|msg| {
        eprintln!("error: {msg}");
        ExitCode::from(2)
    })?;
    // file values first so the command line overrides them
    let mut merged = vec![args[0].clone()];
    merged.extend(tokens);
    merged.extend(args[1..].iter().cloned());
    Cli::try_parse_from(&merged).map_err(|e| {
        let _ = e.print();
        ExitCode::from(2)
    })
}

fn verify_config(o: &Opts) -> VerifyConfig {
    let mut vc = VerifyConfig::default();
    let set = |dst: &mut f64, v: Option<f64>| {
        if let Some(v) = v {
            *dst = v;
        }
    };
    set(&mut vc.residual_tol, o.residual_tol);
    set(&mut vc.critical_tol, o.critical_tol);
    set(&mut vc.fd_step, o.fd_step);
    set(&mut vc.fd_rel_tol, o.fd_rel_tol);
    set(&mut vc.split_tol, o.split_tol);
    set(&mut vc.symmetry_tol, o.symmetry_tol);
    set(&mut vc.rank_threshold, o.rank_threshold);
    set(&mut vc.hessian.step, o.hessian_step);
    set(&mut vc.hessian.zero_threshold, o.hessian_zero);
    if let Some(n) = o.samples {
        vc.samples = n;
    }
    if let Some(n) = o.probe_starts {
        vc.probe.starts = n;
    }
    vc.probe.seed = o.seed;
    vc
}

fn raw_config(o: &Opts) -> Result<WeightConfig, Failure> {
    match &o.weights {
        None => Ok(WeightConfig::classic(o.g)),
        Some(w) => Ok(WeightConfig::parse(o.g, w)?),
    }
}

fn normalized(o: &Opts) -> Result<weights::Normalized, Failure> {
    Ok(weights::normalize(&raw_config(o)?)?)
}

fn base_provider(o: &Opts, vc: &VerifyConfig) -> Result<BaseCaseProvider, Failure> {
    let s = o.base.trim();
    if s == "empty" {
        return Ok(BaseCaseProvider::EmptyAsserted);
    }
    if s == "probe" {
        return Ok(BaseCaseProvider::NumericProbe(vc.probe));
    }
    if let Some(coeffs) = s.strip_prefix("poly:") {
        let p: IntPolynomial = coeffs
            .parse()
            .map_err(|_| Failure::Input(format!("could not parse base polynomial `{coeffs}`")))?;
        return Ok(BaseCaseProvider::UserSupplied(p));
    }
    Err(Failure::Input(format!(
        "unknown base `{s}` (expected empty, poly:<coeffs> or probe)"
    )))
}

fn header(command: &str, cfg: Option<&WeightConfig>) -> Value {
    let mut v = json!({ "schema": SCHEMA_VERSION, "command": command });
    if let Some(cfg) = cfg {
        v["config"] = serde_json::to_value(cfg).unwrap_or_default();
    }
    v
}

fn run(command: Command, o: &Opts) -> Result<Output, Failure> {
    let vc = verify_config(o);
    match command {
        Command::Hn => {
            let p = betti::hn_poincare(o.g)?;
            let mut j = header("hn", None);
            j["g"] = o.g.into();
            j["poincare"] = serde_json::to_value(&p).unwrap_or_default();
            Ok(Output::ok(j, p.to_string()))
        }
        Command::Betti | Command::U2 => {
            let n = normalized(o)?;
            let base = base_provider(o, &vc)?;
            let (name, p) = if command == Command::Betti {
                ("betti", betti::poincare(&n.config, &base)?)
            } else {
                ("u2", betti::u2_poincare(&n.config, &base)?)
            };
            let mut j = header(name, Some(&n.config));
            j["normalization"] = json!(n.transcript);
            j["poincare"] = serde_json::to_value(&p).unwrap_or_default();
            j["betti"] = json!(p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>());
            Ok(Output::ok(j, p.to_string()))
        }
        Command::Strata => {
            let n = normalized(o)?;
            let base = base_provider(o, &vc)?;
            let strata = betti::strata(&n.config, &base)?;
            let mut j = header("strata", Some(&n.config));
            j["strata"] = serde_json::to_value(&strata).unwrap_or_default();
            let text = strata
                .iter()
                .map(|s| {
                    let label = match (&s.subset, &s.kappa) {
                        (Some(j), Some(k)) => format!("torus J={j} kappa={}", k.value),
                        _ => format!("{:?}", s.kind),
                    };
                    format!(
                        "{label}: index {}, dim {}, P = {}",
                        s.index, s.dim, s.poincare
                    )
                })
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Output::ok(j, text))
        }
        Command::Regular => {
            let n = normalized(o)?;
            let r = weights::is_regular(&n.config)?;
            if let Regularity::Irregular { witness } = r {
                return Err(Failure::Input(format!(
                    "irregular weights: kappa_J is an integer for witness J = {witness}"
                )));
            }
            let mut j = header("regular", Some(&n.config));
            j["regularity"] = serde_json::to_value(&r).unwrap_or_default();
            Ok(Output::ok(j, "regular"))
        }
        Command::Normalize => {
            let n = normalized(o)?;
            let mut j = header("normalize", Some(&n.config));
            j["transcript"] = json!(n.transcript);
            let mut text = n.config.to_string();
            for line in &n.transcript {
                text.push_str("\n  ");
                text.push_str(line);
            }
            Ok(Output::ok(j, text))
        }
        Command::Dim => {
            let n = normalized(o)?;
            let d = betti::dimension(&n.config);
            let mut j = header("dim", Some(&n.config));
            j["dimension"] = d.into();
            Ok(Output::ok(j, d.to_string()))
        }
        Command::VerifyCritical => verify_critical(o, &vc),
        Command::VerifyRegular => verify_regular(o, &vc),
        Command::ProbeEmpty => {
            let cfg = raw_config(o)?;
            if cfg.genus() != 0 {
                return Err(Error::NotGenusZero.into());
            }
            let cfg = weights::normalize(&cfg)?.config;
            let probe = ProbeConfig {
                seed: o.seed,
                ..vc.probe
            };
            let outcome = verify::nonempty_probe(&cfg, &probe)?;
            let mut j = header("probe-empty", Some(&cfg));
            j["seed"] = o.seed.into();
            j["outcome"] = serde_json::to_value(&outcome).unwrap_or_default();
            let text = match &outcome {
                ProbeOutcome::Witness {
                    residual, start, ..
                } => {
                    format!("witness found at start {start} (residual {residual:e})")
                }
                ProbeOutcome::ProbablyEmpty {
                    best_residual,
                    starts,
                } => {
                    format!("probably empty: no convergence from {starts} starts (best residual {best_residual:e})")
                }
            };
            Ok(Output::ok(j, text))
        }
        Command::Selftest => {
            let r = flatmorse::selftest::run(o.seed, &vc);
            let mut j = serde_json::to_value(&r).unwrap_or_default();
            j["command"] = "selftest".into();
            Ok(Output::checks(
                j,
                &r.checks,
                format!("selftest seed {}", o.seed),
            ))
        }
    }
}

fn verify_critical(o: &Opts, vc: &VerifyConfig) -> Result<Output, Failure> {
    let cfg = normalized(o)?.config;
    weights::require_regular(&cfg)?;
    let mut checks = Vec::new();
    let mut j = header("verify-critical", Some(&cfg));
    j["seed"] = o.seed.into();
    j["hessian"] = serde_json::to_value(vc.hessian).unwrap_or_default();

    let mut worst = 0.0f64;
    for s in Subset::all(cfg.punctures()) {
        for lift in 0..2 {
            worst = worst.max(verify::critical_tuple(&cfg, s, lift)?.mu_residual());
        }
    }
    checks.push(CheckResult::below(
        "critical tuples on the fiber",
        worst,
        vc.critical_tol,
    ));

    if cfg.mode() == Mode::Classic {
        if cfg.genus() >= 2 {
            let p = verify::critical_tuple(&cfg, Subset::empty(), 0)?;
            let r = verify::hessian_report(&p, &vc.hessian)?;
            let expected = 2 * cfg.genus() as usize - 2;
            checks.push(CheckResult::new(
                "middle critical set index and nullity",
                r.index == expected && r.nullity == expected,
                json!({ "index": r.index, "nullity": r.nullity, "expected": expected }),
            ));
            j["hessian_report"] = serde_json::to_value(&r).unwrap_or_default();
        }
    } else {
        let census = verify::census_report(&cfg, &vc.hessian)?;
        let mismatch = census.mismatch();
        checks.push(
            CheckResult::new(
                "torus census",
                mismatch.is_none(),
                json!({ "classes": census.classes.len(), "indices": census.indices }),
            )
            .with_detail(
                mismatch
                    .unwrap_or_else(|| format!("expected indices {:?}", census.expected_indices)),
            ),
        );
        j["census"] = serde_json::to_value(&census).unwrap_or_default();
    }
    Ok(Output::checks(j, &checks, format!("verify-critical {cfg}")))
}

fn verify_regular(o: &Opts, vc: &VerifyConfig) -> Result<Output, Failure> {
    let cfg = normalized(o)?.config;
    weights::require_regular(&cfg)?;
    let results = verify::sample_fiber(&cfg, vc.samples, o.seed, &vc.solver);
    let mut converged = 0;
    let mut full_rank = 0;
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for (k, r) in results.iter().enumerate() {
        match r {
            Ok(p) => {
                let res = p.mu_residual();
                worst = worst.max(res);
                if res < vc.residual_tol {
                    converged += 1;
                }
                if verify::rank_dmu(p, vc.rank_threshold) == 3 {
                    full_rank += 1;
                }
            }
            Err(e) => failures.push(format!("start {k}: {e}")),
        }
    }
    let n = results.len();
    let mut starts = CheckResult::new(
        "converged starts",
        converged == n && failures.is_empty(),
        json!({ "converged": converged, "starts": n }),
    );
    if !failures.is_empty() {
        starts = starts.with_detail(failures.join("; "));
    }
    let checks = vec![
        CheckResult::below("max residual", worst, vc.residual_tol),
        starts,
        CheckResult::new(
            "rank 3 at every solution",
            full_rank == n,
            json!({ "full_rank": full_rank }),
        )
        .with_tolerance(vc.rank_threshold),
    ];
    let mut j = header("verify-regular", Some(&cfg));
    j["seed"] = o.seed.into();
    j["samples"] = n.into();
    Ok(Output::checks(
        j,
        &checks,
        format!("verify-regular {cfg} seed {}", o.seed),
    ))
}

fn main() -> ExitCode {
    let cli = match parse_cli() {
        Ok(cli) => cli,
        Err(code) => return code,
    };
    match run(cli.command, &cli.opts) {
        Ok(out) => {
            let body = match cli.opts.format {
                Format::Json => serde_json::to_string_pretty(&out.json).unwrap_or_default(),
                Format::Text => out.text,
            };
            // a closed pipe (e.g. `| head`) is not an error
            let _ = writeln!(std::io::stdout().lock(), "{body}");
            if out.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("some checks failed");
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
    }
}
