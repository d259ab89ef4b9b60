//! zeroscope command line: characters, certified zeros, density statistics,
//! explicit-formula checks, dispersion sums, the combinatorial classifier
//! and the exact exponent solver, with JSON/CSV/gnuplot-ready output.
//!
//! Every JSON document embeds the run configuration, so a run can be
//! reproduced from its own output. Outputs are deterministic for a fixed
//! configuration (the `timestamp` field aside), independent of the
//! parallelism degree; `ZEROSCOPE_THREADS` caps the worker pool.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use zeroscope::bandlimited::{fourier_quadrature, FejerKernel, SmoothBump};
use zeroscope::characters::{enumerate_characters, primitive_characters};
use zeroscope::density::{
    explicit_balance, nonvanishing_proportion, one_level_density, s_kappa_two_ways, BalanceMode,
};
use zeroscope::dispersion::{
    classify, delta_w, heath_brown_check, kloosterman, large_sieve_ratio, poisson_check, t_kappa,
    weil_bound, witness_is_valid, Case, DispersionParams, ExponentTuple,
};
use zeroscope::exponents::{
    k_function, majorization_check, nonvanishing_bound, nonvanishing_bound_limit,
    nonvanishing_denominator_note, rat, tii_thresholds, ConstraintSystem, MajorizationRegion,
    Param, Rat,
};
use zeroscope::lfunc::CompletedLContext;
use zeroscope::util::{csv_field, SplitMix64};
use zeroscope::Error;

#[derive(Parser)]
#[command(name = "zeroscope", version, about = "desk-scale L-function zero statistics")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// optional key=value config file mirroring the flags
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// output path (stdout when omitted)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// output format where a choice exists
    #[arg(long, global = true, default_value = "json")]
    format: Format,
    /// seed for the randomized property sweeps
    #[arg(long, global = true, default_value_t = 0xA11CE)]
    seed: u64,
    /// worker threads (ZEROSCOPE_THREADS overrides; 0 = rayon default)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
}

#[derive(clap::ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
enum Format {
    Json,
    Csv,
    Gnuplot,
}

#[derive(Subcommand)]
enum Command {
    /// List Dirichlet characters mod q (id, order, parity, conductor).
    Chars {
        #[arg(long)]
        q: u64,
        /// keep the primitive ones only
        #[arg(long)]
        primitive: bool,
    },
    /// Certified critical-line zeros for characters mod q.
    Zeros {
        #[arg(long)]
        q: u64,
        #[arg(long = "T", default_value_t = 30.0)]
        t_height: f64,
        /// restrict to the k-th primitive character (enumeration order)
        #[arg(long)]
        index: Option<usize>,
    },
    /// Family 1-level density statistic.
    Density {
        #[arg(long = "Q")]
        q_scale: f64,
        #[arg(long, default_value_t = 1.0)]
        nu: f64,
        #[arg(long = "T")]
        t_height: f64,
        /// exclude (and list) uncertified characters instead of failing
        #[arg(long)]
        skip_uncertified: bool,
    },
    /// Explicit-formula balance for one modulus.
    ExplicitCheck {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1.0)]
        nu: f64,
        #[arg(long, default_value = "exact")]
        mode: String,
        #[arg(long = "T", default_value_t = 50.0)]
        t_height: f64,
        /// family scale Q; defaults to q
        #[arg(long = "Q")]
        q_scale: Option<f64>,
        /// restrict to the k-th primitive character
        #[arg(long)]
        index: Option<usize>,
    },
    /// S_κ(Q) computed two ways; the difference is the orthogonality oracle.
    Skappa {
        #[arg(long = "Q")]
        q_scale: f64,
        #[arg(long, default_value_t = 1.0)]
        nu: f64,
    },
    /// Arithmetic-progression dispersion sums and exponential-sum checks.
    #[command(subcommand)]
    Apsums(Apsums),
    /// Combinatorial decomposition: the three-case classifier and the
    /// Heath-Brown identity.
    #[command(subcommand)]
    Decomp(Decomp),
    /// Exact exponent-constraint calculus.
    #[command(subcommand)]
    Exponents(Exponents),
    /// Evaluate a test function and its Fourier transform on a grid.
    Testfn {
        /// fejer | bump
        #[arg(long)]
        phi: String,
        /// support radius of the Fejér transform
        #[arg(long)]
        nu: Option<f64>,
        /// bump support as a,b (plateau defaults to 1/8 transitions)
        #[arg(long)]
        support: Option<String>,
        /// sample points, comma-separated (defaults to a small grid)
        #[arg(long)]
        at: Option<String>,
    },
    /// Empirical non-vanishing proportion at the central point.
    Nonvanishing {
        #[arg(long = "Q")]
        q_scale: f64,
        #[arg(long, default_value_t = 1e-8)]
        threshold: f64,
        /// Fejér support radius for the zero-side bound (default 2 + 50/1093)
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long = "T", default_value_t = 12.0)]
        t_height: f64,
        #[arg(long)]
        skip_uncertified: bool,
    },
}

#[derive(Subcommand)]
enum Apsums {
    /// Δ(w) for one w, or a sweep `w, X, R, delta` up to --sweep.
    Delta {
        #[arg(long)]
        w: Option<u64>,
        #[arg(long = "X")]
        x: f64,
        #[arg(long = "R")]
        r: u64,
        #[arg(long)]
        sweep: Option<u64>,
    },
    /// T_κ(Q, X, R), the Ψ-weighted modulus average of Δ.
    Tkappa {
        #[arg(long = "Q")]
        q: f64,
        #[arg(long = "X")]
        x: f64,
        #[arg(long = "R")]
        r: u64,
    },
    /// Large-sieve ratio diagnostic.
    Lsratio {
        #[arg(long = "Q")]
        q: f64,
        #[arg(long = "X")]
        x: f64,
        #[arg(long = "R")]
        r: u64,
    },
    /// Kloosterman sum with its Weil bound.
    Kloosterman {
        #[arg(long)]
        m: i64,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        c: u64,
    },
    /// Truncated Poisson-summation identity for a smooth bump.
    Poisson {
        #[arg(long = "N")]
        n_scale: f64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        mu: u64,
        #[arg(long = "H")]
        h: u64,
    },
}

#[derive(Subcommand)]
enum Decomp {
    /// Classify an exponent tuple into d1 / d2 / Type II.
    Classify {
        /// comma-separated masses, e.g. 0.3,0.3,0.4
        #[arg(long)]
        t: String,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        delta: f64,
    },
    /// Seeded random classification sweep; failures are replayable.
    Fuzz {
        #[arg(long, default_value_t = 100_000)]
        rounds: u64,
    },
    /// Heath-Brown identity check at n (or a sweep up to n).
    Heathbrown {
        #[arg(long)]
        n: u64,
        #[arg(long = "J", default_value_t = 3)]
        j: u32,
        #[arg(long)]
        z: u64,
        #[arg(long)]
        sweep: bool,
    },
}

#[derive(Subcommand)]
enum Exponents {
    /// Supremum of ϖ over the full constraint system.
    Solve {
        /// spectral-gap parameter as p/q (bookkeeping only; the system's
        /// thresholds are instantiated at 7/64)
        #[arg(long, default_value = "7/64")]
        theta: String,
    },
    /// Exact feasibility intervals at a rational ϖ = p/q.
    Feasible {
        #[arg(long)]
        varpi: String,
    },
    /// The four N-thresholds as exponents of X at a rational θ.
    Thresholds {
        #[arg(long, default_value = "7/64")]
        theta: String,
    },
    /// Majorization check of term k against term 1.
    Majorize {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "7/64")]
        theta: String,
    },
    /// The K-function of the exponential-sum bound.
    Kfunction {
        #[arg(long = "C")]
        c: f64,
        #[arg(long = "D")]
        d: f64,
        #[arg(long = "N")]
        n: f64,
        #[arg(long = "R")]
        r: f64,
        #[arg(long = "S")]
        s: f64,
        #[arg(long)]
        q: f64,
        #[arg(long, default_value = "7/64")]
        theta: String,
    },
    /// The non-vanishing proportion bound (1+κ)/(2+κ), exact.
    NonvanishingBound {
        /// κ as p/q; omit for the κ → 50/1093 limit
        #[arg(long)]
        kappa: Option<String>,
    },
}

fn main() {
    let mut argv: Vec<String> = std::env::args().collect();
    // a config file may inject defaults: parse it early and append any
    // key=value pairs that are not already present as flags
    if let Some(pos) = argv.iter().position(|a| a == "--config") {
        if let Some(path) = argv.get(pos + 1).cloned() {
            match std::fs::read_to_string(&path) {
                Ok(body) => {
                    for line in body.lines() {
                        let line = line.trim();
                        if line.is_empty() || line.starts_with('#') {
                            continue;
                        }
                        if let Some((k, v)) = line.split_once('=') {
                            let flag = format!("--{}", k.trim());
                            if !argv.iter().any(|a| a == &flag) {
                                argv.push(flag);
                                argv.push(v.trim().to_string());
                            }
                        }
                    }
                }
                Err(e) => {
                    emit_error_json(&Error::Resource(format!("config file {path}: {e}")));
                    std::process::exit(1);
                }
            }
        }
    }
    let cli = Cli::parse_from(argv);

    let threads = std::env::var("ZEROSCOPE_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .unwrap_or(cli.common.threads);
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .ok();
    }

    match run(&cli) {
        Ok(()) => {}
        Err(e) => {
            emit_error_json(&e);
            std::process::exit(1);
        }
    }
}

fn emit_error_json(e: &Error) {
    let kind = match e {
        Error::Domain(_) => "domain",
        Error::Resource(_) => "resource",
        Error::Numeric(_) => "numeric",
        Error::Range(_) => "range",
        Error::Completeness { .. } => "completeness",
        Error::Inconsistent(_) => "inconsistency",
        Error::Indeterminate(_) => "indeterminate",
        Error::InvariantViolation(_) => "invariant-violation",
    };
    let doc = json!({"error": {"kind": kind, "detail": e.to_string()}});
    eprintln!("{}", serde_json::to_string_pretty(&doc).unwrap());
}

fn config_echo(cli: &Cli) -> Value {
    json!({
        "argv": std::env::args().skip(1).collect::<Vec<_>>(),
        "seed": cli.common.seed,
        "threads": cli.common.threads,
        "format": format!("{:?}", cli.common.format).to_lowercase(),
    })
}

fn write_output(cli: &Cli, body: &str) -> Result<(), Error> {
    match &cli.common.out {
        None => {
            print!("{body}");
            if !body.ends_with('\n') {
                println!();
            }
            Ok(())
        }
        Some(path) => {
            let mut f = std::fs::File::create(path)
                .map_err(|e| Error::Resource(format!("cannot create {path:?}: {e}")))?;
            f.write_all(body.as_bytes())
                .map_err(|e| Error::Resource(format!("write {path:?}: {e}")))?;
            Ok(())
        }
    }
}

fn emit_json(cli: &Cli, result: Value) -> Result<(), Error> {
    let doc = json!({
        "config": config_echo(cli),
        "timestamp": std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        "result": result,
    });
    write_output(cli, &serde_json::to_string_pretty(&doc).unwrap())
}

fn emit_table(cli: &Cli, header: &[&str], rows: &[Vec<String>], json_result: Value) -> Result<(), Error> {
    match cli.common.format {
        Format::Json => emit_json(cli, json_result),
        Format::Csv => {
            let mut out = String::new();
            out.push_str(&header.join(","));
            out.push('\n');
            for r in rows {
                let quoted: Vec<String> = r.iter().map(|f| csv_field(f)).collect();
                out.push_str(&quoted.join(","));
                out.push('\n');
            }
            write_output(cli, &out)
        }
        Format::Gnuplot => {
            let mut out = String::new();
            out.push_str(&format!("# {}\n", header.join(" ")));
            for r in rows {
                out.push_str(&r.join(" "));
                out.push('\n');
            }
            write_output(cli, &out)
        }
    }
}

fn parse_rational(s: &str) -> Result<Rat, Error> {
    let parts: Vec<&str> = s.split('/').collect();
    let parse = |t: &str| {
        t.trim()
            .parse::<i64>()
            .map_err(|_| Error::Domain(format!("bad rational component `{t}`")))
    };
    match parts.as_slice() {
        [a] => Ok(rat(parse(a)?, 1)),
        [a, b] => {
            let den = parse(b)?;
            if den == 0 {
                return Err(Error::Domain("zero denominator".into()));
            }
            Ok(rat(parse(a)?, den))
        }
        _ => Err(Error::Domain(format!("cannot parse rational `{s}`"))),
    }
}

fn sieve_for(limit: f64) -> Result<zeroscope::arith::SieveTable, Error> {
    zeroscope::arith::build_sieve(limit.ceil() as usize + 8)
}

fn run(cli: &Cli) -> Result<(), Error> {
    match &cli.command {
        Command::Chars { q, primitive } => {
            let chars = if *primitive {
                primitive_characters(*q)?
            } else {
                enumerate_characters(*q)?
            };
            let rows: Vec<Vec<String>> = chars
                .iter()
                .map(|c| {
                    vec![
                        c.id(),
                        c.order.to_string(),
                        c.parity.to_string(),
                        c.conductor.to_string(),
                        c.is_primitive().to_string(),
                    ]
                })
                .collect();
            let jrows: Vec<Value> = chars
                .iter()
                .map(|c| {
                    json!({
                        "id": c.id(),
                        "order": c.order,
                        "parity": c.parity,
                        "conductor": c.conductor,
                        "primitive": c.is_primitive(),
                    })
                })
                .collect();
            emit_table(
                cli,
                &["char_id", "order", "parity", "conductor", "primitive"],
                &rows,
                json!({"q": q, "characters": jrows}),
            )
        }
        Command::Zeros { q, t_height, index } => {
            let prims = primitive_characters(*q)?;
            if prims.is_empty() {
                return Err(Error::Domain(format!("no primitive characters mod {q}")));
            }
            let picked: Vec<_> = match index {
                Some(i) => vec![prims
                    .get(*i)
                    .ok_or_else(|| Error::Domain(format!("index {i} out of range")))?
                    .clone()],
                None => prims,
            };
            let mut rows = Vec::new();
            let mut jsets = Vec::new();
            for chi in picked {
                let ctx = CompletedLContext::new(chi)?;
                let zs = ctx.find_zeros(*t_height)?;
                for g in &zs.ordinates {
                    rows.push(vec![
                        zs.q.to_string(),
                        zs.char_id.clone(),
                        format!("{g:.12}"),
                        format!("{}", zs.height),
                        zs.certificate.matched.to_string(),
                    ]);
                }
                jsets.push(serde_json::to_value(&zs).unwrap());
            }
            emit_table(
                cli,
                &["q", "char_id", "gamma", "T", "matched"],
                &rows,
                json!({"zero_sets": jsets}),
            )
        }
        Command::Density {
            q_scale,
            nu,
            t_height,
            skip_uncertified,
        } => {
            let phi = FejerKernel::new(*nu)?;
            let big_phi = SmoothBump::standard_phi();
            let rep = one_level_density(*q_scale, &phi, &big_phi, *t_height, !skip_uncertified)?;
            let rows: Vec<Vec<String>> = rep
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.q.to_string(),
                        r.n_primitive.to_string(),
                        format!("{:.12}", r.weight),
                        format!("{:.12}", r.lhs_q),
                    ]
                })
                .collect();
            emit_table(
                cli,
                &["q", "n_primitive", "weight", "lhs_q"],
                &rows,
                serde_json::to_value(&rep).unwrap(),
            )
        }
        Command::ExplicitCheck {
            q,
            nu,
            mode,
            t_height,
            q_scale,
            index,
        } => {
            let mode = match mode.as_str() {
                "exact" => BalanceMode::Exact,
                "approx" | "approximate" => BalanceMode::Approximate,
                other => {
                    return Err(Error::Domain(format!(
                        "mode must be exact|approx, got `{other}`"
                    )))
                }
            };
            let scale = q_scale.unwrap_or(*q as f64);
            let phi = FejerKernel::new(*nu)?;
            let sieve = sieve_for(scale.powf(*nu))?;
            let prims = primitive_characters(*q)?;
            if prims.is_empty() {
                return Err(Error::Domain(format!("no primitive characters mod {q}")));
            }
            let picked: Vec<_> = match index {
                Some(i) => vec![prims
                    .get(*i)
                    .ok_or_else(|| Error::Domain(format!("index {i} out of range")))?
                    .clone()],
                None => prims,
            };
            let mut reports = Vec::new();
            for chi in &picked {
                reports.push(explicit_balance(chi, scale, &phi, *t_height, mode, &sieve)?);
            }
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        r.q.to_string(),
                        r.char_id.clone(),
                        format!("{:.12}", r.zero_side),
                        format!("{:.12}", r.prime_side),
                        format!("{:.3e}", r.residual),
                        format!("{:.3e}", r.zero_tail_estimate),
                    ]
                })
                .collect();
            emit_table(
                cli,
                &["q", "char_id", "zero_side", "prime_side", "residual", "tail"],
                &rows,
                serde_json::to_value(&reports).unwrap(),
            )
        }
        Command::Skappa { q_scale, nu } => {
            let phi = FejerKernel::new(*nu)?;
            let big_phi = SmoothBump::standard_phi();
            let need = q_scale.powf(*nu).max(2.3 * q_scale);
            let sieve = sieve_for(need)?;
            let rep = s_kappa_two_ways(*q_scale, &phi, &big_phi, &sieve)?;
            emit_json(cli, serde_json::to_value(&rep).unwrap())
        }
        Command::Testfn { phi, nu, support, at } => {
            let points: Vec<f64> = match at {
                Some(s) => s
                    .split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<f64>()
                            .map_err(|_| Error::Domain(format!("bad sample point `{x}`")))
                    })
                    .collect::<Result<_, _>>()?,
                None => (-8..=8).map(|i| i as f64 * 0.25).collect(),
            };
            match phi.as_str() {
                "fejer" => {
                    let k = FejerKernel::new(nu.unwrap_or(1.0))?;
                    let rows: Vec<Vec<String>> = points
                        .iter()
                        .map(|&x| {
                            vec![
                                format!("{x}"),
                                format!("{:.12}", k.eval(x)),
                                format!("{:.12}", k.hat(x)),
                            ]
                        })
                        .collect();
                    let jrows: Vec<Value> = points
                        .iter()
                        .map(|&x| json!({"x": x, "phi": k.eval(x), "phi_hat": k.hat(x)}))
                        .collect();
                    emit_table(
                        cli,
                        &["x", "phi", "phi_hat"],
                        &rows,
                        json!({"phi": "fejer", "nu": k.nu, "samples": jrows}),
                    )
                }
                "bump" => {
                    let (a, b) = match support {
                        Some(s) => {
                            let parts: Vec<&str> = s.split(',').collect();
                            if parts.len() != 2 {
                                return Err(Error::Domain("support must be a,b".into()));
                            }
                            let pa = parts[0].trim().parse::<f64>();
                            let pb = parts[1].trim().parse::<f64>();
                            match (pa, pb) {
                                (Ok(a), Ok(b)) => (a, b),
                                _ => return Err(Error::Domain(format!("bad support `{s}`"))),
                            }
                        }
                        None => (0.5, 3.0),
                    };
                    let g = SmoothBump::with_default_plateau((a, b))?;
                    let rows: Vec<Vec<String>> = points
                        .iter()
                        .map(|&x| {
                            let hat = fourier_quadrature(&|y| g.eval(y), x, g.support, 1e-10)
                                .map(|v| v.re)
                                .unwrap_or(f64::NAN);
                            vec![
                                format!("{x}"),
                                format!("{:.12}", g.eval(x)),
                                format!("{:.12}", hat),
                            ]
                        })
                        .collect();
                    let jrows: Vec<Value> = rows
                        .iter()
                        .map(|r| json!({"x": r[0], "value": r[1], "hat_re": r[2]}))
                        .collect();
                    emit_table(
                        cli,
                        &["x", "value", "hat_re"],
                        &rows,
                        json!({"phi": "bump", "support": [a, b], "samples": jrows}),
                    )
                }
                other => Err(Error::Domain(format!("phi must be fejer|bump, got `{other}`"))),
            }
        }
        Command::Apsums(ap) => run_apsums(cli, ap),
        Command::Decomp(d) => run_decomp(cli, d),
        Command::Exponents(e) => run_exponents(cli, e),
        Command::Nonvanishing {
            q_scale,
            threshold,
            nu,
            t_height,
            skip_uncertified,
        } => {
            let nu = nu.unwrap_or(2.0 + 50.0 / 1093.0);
            let rep =
                nonvanishing_proportion(*q_scale, *threshold, nu, *t_height, !skip_uncertified)?;
            emit_json(cli, serde_json::to_value(&rep).unwrap())
        }
    }
}

fn run_apsums(cli: &Cli, ap: &Apsums) -> Result<(), Error> {
    match ap {
        Apsums::Delta { w, x, r, sweep } => {
            let f = SmoothBump::standard_f();
            let sieve = sieve_for(3.0 * x)?;
            let ws: Vec<u64> = match (w, sweep) {
                (Some(w), None) => vec![*w],
                (None, Some(hi)) => (1..=*hi).collect(),
                _ => {
                    return Err(Error::Domain(
                        "give exactly one of --w or --sweep".into(),
                    ))
                }
            };
            let mut rows = Vec::new();
            let mut jrows = Vec::new();
            for w in ws {
                let d = delta_w(w, *x, *r, &f, &sieve)?;
                rows.push(vec![
                    w.to_string(),
                    format!("{x}"),
                    r.to_string(),
                    format!("{d:.12}"),
                ]);
                jrows.push(json!({"w": w, "X": x, "R": r, "delta": d}));
            }
            emit_table(cli, &["w", "X", "R", "delta"], &rows, json!({"delta": jrows}))
        }
        Apsums::Tkappa { q, x, r } => {
            let f = SmoothBump::standard_f();
            let psi = SmoothBump::standard_f();
            let sieve = sieve_for((3.0 * x).max(3.0 * q))?;
            let params = DispersionParams::new(*q, *x, *r)?;
            let v = t_kappa(&params, &psi, &f, &sieve)?;
            emit_json(
                cli,
                json!({"Q": q, "X": x, "R": r, "varpi": params.varpi, "t_kappa": v}),
            )
        }
        Apsums::Lsratio { q, x, r } => {
            let f = SmoothBump::standard_f();
            let sieve = sieve_for(3.0 * x)?;
            let v = large_sieve_ratio(*q, *x, *r, &f, &sieve)?;
            emit_json(cli, json!({"Q": q, "X": x, "R": r, "ratio": v}))
        }
        Apsums::Kloosterman { m, n, c } => {
            let s = kloosterman(*m, *n, *c)?;
            let b = weil_bound(*m, *n, *c);
            emit_json(
                cli,
                json!({"m": m, "n": n, "c": c, "sum": s, "weil_bound": b, "within_bound": s.abs() <= b + 1e-9}),
            )
        }
        Apsums::Poisson { n_scale, q, mu, h } => {
            let g = SmoothBump::standard_f();
            let (lhs, rhs, resid) = poisson_check(&g, *n_scale, *q, *mu, *h)?;
            emit_json(
                cli,
                json!({"N": n_scale, "q": q, "mu": mu, "H": h, "lhs": lhs, "rhs": rhs, "residual": resid}),
            )
        }
    }
}

fn case_to_line(case: &Case) -> String {
    match case {
        Case::D1 { index } => format!("type=d1 witness={index}"),
        Case::D2 { indices } => format!(
            "type=d2 witness={},{},{}",
            indices[0], indices[1], indices[2]
        ),
        Case::TypeII { subset } => {
            let s: Vec<String> = subset.iter().map(|i| i.to_string()).collect();
            format!("type=II witness={}", s.join(","))
        }
    }
}

fn run_decomp(cli: &Cli, d: &Decomp) -> Result<(), Error> {
    match d {
        Decomp::Classify {
            t,
            lambda,
            sigma,
            delta,
        } => {
            let masses: Result<Vec<f64>, Error> = t
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Domain(format!("bad mass `{s}`")))
                })
                .collect();
            let tuple = ExponentTuple::new(masses?, *lambda, *sigma, *delta)?;
            let case = classify(&tuple)?;
            println!("{}", case_to_line(&case));
            if cli.common.out.is_some() {
                emit_json(cli, json!({"case": case, "line": case_to_line(&case)}))?;
            }
            Ok(())
        }
        Decomp::Fuzz { rounds } => {
            let mut rng = SplitMix64::new(cli.common.seed);
            let mut counts = [0u64; 3];
            for round in 0..*rounds {
                let tuple = random_tuple(&mut rng);
                let case = classify(&tuple).map_err(|e| {
                    Error::InvariantViolation(format!(
                        "round {round} (seed {}): {e}",
                        cli.common.seed
                    ))
                })?;
                if !witness_is_valid(&tuple, &case) {
                    return Err(Error::InvariantViolation(format!(
                        "round {round} (seed {}): invalid witness",
                        cli.common.seed
                    )));
                }
                match case {
                    Case::D1 { .. } => counts[0] += 1,
                    Case::D2 { .. } => counts[1] += 1,
                    Case::TypeII { .. } => counts[2] += 1,
                }
            }
            emit_json(
                cli,
                json!({
                    "rounds": rounds,
                    "seed": cli.common.seed,
                    "d1": counts[0],
                    "d2": counts[1],
                    "type_ii": counts[2],
                    "failures": 0,
                }),
            )
        }
        Decomp::Heathbrown { n, j, z, sweep } => {
            if *sweep {
                let table = zeroscope::dispersion::heath_brown_table(*n as usize, *j, *z);
                let sieve = zeroscope::arith::build_sieve(*n as usize)?;
                let mut worst = 0.0f64;
                for m in 1..=*n as usize {
                    worst = worst.max((table[m] - sieve.lambda[m]).abs());
                }
                emit_json(
                    cli,
                    json!({"n_max": n, "J": j, "z": z, "max_abs_difference": worst, "all_within_1e9": worst < 1e-9}),
                )
            } else {
                let (lhs, rhs, ok) = heath_brown_check(*n, *j, *z)?;
                emit_json(
                    cli,
                    json!({"n": n, "J": j, "z": z, "lambda": lhs, "identity": rhs, "equal": ok}),
                )
            }
        }
    }
}

fn random_tuple(rng: &mut SplitMix64) -> ExponentTuple {
    loop {
        let j = rng.range_u64(1, 13) as usize;
        let mut t: Vec<f64> = (0..j).map(|_| rng.next_exp()).collect();
        let total: f64 = t.iter().sum();
        t.iter_mut().for_each(|x| *x /= total);
        let delta = rng.range_f64(0.0, 1.0 / 12.0 - 1e-9);
        let sigma = rng.range_f64(0.0, 1.0 / 6.0 - delta / 2.0);
        let lambda = rng.range_f64(0.0, (1.0 / 3.0 - sigma) / 2.0 - 1e-9);
        if let Ok(tuple) = ExponentTuple::new(t, lambda, sigma, delta) {
            return tuple;
        }
    }
}

fn run_exponents(cli: &Cli, e: &Exponents) -> Result<(), Error> {
    match e {
        Exponents::Solve { theta } => {
            let _theta = parse_rational(theta)?;
            let sys = ConstraintSystem::paper_system();
            let report = sys.sup_varpi()?;
            let binding = match report.binding {
                Some(Param::Delta) => "delta",
                Some(Param::Lambda) => "lambda",
                Some(Param::Rho) => "rho",
                None => "domain-cap",
            };
            println!("sup_varpi = {} (binding: {}-interval)", report.sup, binding);
            let probe = &report.sup * rat(9, 10);
            let mut intervals = serde_json::Map::new();
            for p in [Param::Lambda, Param::Delta, Param::Rho] {
                let (lo, hi) = sys.interval_for(p, &probe)?;
                intervals.insert(
                    p.name().to_string(),
                    json!({"at": probe.to_string(), "lo": lo.to_string(), "hi": hi.to_string()}),
                );
            }
            if cli.common.out.is_some() {
                emit_json(
                    cli,
                    json!({
                        "sup_varpi": report.sup.to_string(),
                        "binding": binding,
                        "intervals": intervals,
                    }),
                )?;
            }
            Ok(())
        }
        Exponents::Feasible { varpi } => {
            let v = parse_rational(varpi)?;
            let sys = ConstraintSystem::paper_system();
            let mut intervals = serde_json::Map::new();
            for p in [Param::Lambda, Param::Delta, Param::Rho] {
                let (lo, hi) = sys.interval_for(p, &v)?;
                intervals.insert(
                    p.name().to_string(),
                    json!({"lo": lo.to_string(), "hi": hi.to_string(), "nonempty": lo < hi}),
                );
            }
            emit_json(
                cli,
                json!({
                    "varpi": v.to_string(),
                    "feasible": sys.feasible(&v)?,
                    "intervals": intervals,
                }),
            )
        }
        Exponents::Thresholds { theta } => {
            let th = parse_rational(theta)?;
            let entries = tii_thresholds(&th)?;
            let printed: Vec<String> = entries
                .iter()
                .map(|e| {
                    let n: Vec<String> = e.num.coeffs.iter().map(|c| c.to_string()).collect();
                    let d: Vec<String> = e.den.coeffs.iter().map(|c| c.to_string()).collect();
                    format!("({}) / ({})", n.join(" + varpi*"), d.join(" + varpi*"))
                })
                .collect();
            emit_json(cli, json!({"theta": th.to_string(), "x_exponents": printed}))
        }
        Exponents::Majorize { k, theta } => {
            let th = parse_rational(theta)?;
            let region = MajorizationRegion::default();
            let verdict = majorization_check(*k, &region, &th)?;
            emit_json(
                cli,
                json!({
                    "k": k,
                    "theta": th.to_string(),
                    "majorized_by_first_term": verdict.majorized,
                    "ascent_direction": verdict
                        .ascent_direction
                        .map(|d| d.iter().map(|r| r.to_string()).collect::<Vec<_>>()),
                }),
            )
        }
        Exponents::Kfunction {
            c,
            d,
            n,
            r,
            s,
            q,
            theta,
        } => {
            let th = parse_rational(theta)?;
            let v = k_function(*c, *d, *n, *r, *s, *q, &th)?;
            emit_json(cli, json!({"K": v, "theta": th.to_string()}))
        }
        Exponents::NonvanishingBound { kappa } => {
            let (value, kappa_str) = match kappa {
                Some(s) => {
                    let k = parse_rational(s)?;
                    (nonvanishing_bound(&k)?, k.to_string())
                }
                None => (nonvanishing_bound_limit(), "50/1093 (limit)".to_string()),
            };
            emit_json(
                cli,
                json!({
                    "kappa": kappa_str,
                    "bound": value.to_string(),
                    "bound_decimal": zeroscope::exponents::rat_to_f64(&value),
                    "note": nonvanishing_denominator_note(),
                }),
            )
        }
    }
}
