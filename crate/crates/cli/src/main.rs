//! Command-line front end: local invariants of cyclic p-group actions
//! on formal branches and nodes, global dimension reports from JSON
//! curve descriptions, and a formula-vs-oracle verification sweep.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use equideform_core::error::{Error, Result};
use equideform_core::node::{
    classify_relevability, h1_ext0_dimension, lift_first_order, phi_kernel_dimension, verify_lift,
    CyclicNodeAction,
};
use equideform_core::oracle::{default_window, h1_dimension_bruteforce, OracleInput};
use equideform_core::smooth::{
    ext1_dimension_smooth, order_p2_tower, trace_zero_basis_construct, trace_zero_basis_exists,
    CyclicSmoothAction,
};
use equideform_core::{DimensionReport, GlobalCurveSpec, TruncatedSeries};

#[derive(Parser)]
#[command(
    name = "equideform",
    about = "Equivariant deformation invariants of curves in characteristic p"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Invariants of a cyclic action on one formal branch k[[x]].
    Smooth {
        #[arg(long)]
        p: u64,
        /// Conductor (first ramification jump).
        #[arg(long)]
        m: u64,
        /// Group exponent: the group is Z/p^n.
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// Second upper jump for n = 2 towers.
        #[arg(long)]
        u1: Option<u64>,
        #[arg(long)]
        precision: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Invariants of a cyclic action on the node xy = 0.
    Node {
        #[arg(long)]
        p: u64,
        /// Conductor of the x-branch, or `inf`.
        #[arg(long)]
        m: String,
        /// Conductor of the y-branch, or `inf`.
        #[arg(long)]
        mp: String,
        #[arg(long)]
        precision: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Dimension report for a decorated stable curve (JSON file).
    Global {
        /// Path to the curve description.
        spec: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Formula-vs-oracle verification sweep.
    Sweep {
        /// Comma-separated primes.
        #[arg(long = "p-list", value_delimiter = ',')]
        p_list: Vec<u64>,
        #[arg(long = "m-max")]
        m_max: u64,
        #[arg(long)]
        precision: Option<usize>,
        /// Seed recorded in the output for reproducibility.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

fn effective_precision(cli: Option<usize>, fallback: usize) -> usize {
    if let Some(n) = cli {
        return n;
    }
    if let Ok(v) = std::env::var("EQUIDEFORM_PRECISION") {
        if let Ok(n) = v.parse::<usize>() {
            return n;
        }
    }
    fallback
}

fn series_text(s: &TruncatedSeries, limit: usize) -> String {
    let mut parts = Vec::new();
    for i in 0..s.precision().min(limit) {
        let c = s.coeff(i);
        if c != 0 {
            parts.push(match i {
                0 => format!("{c}"),
                1 if c == 1 => "x".to_string(),
                1 => format!("{c}*x"),
                _ if c == 1 => format!("x^{i}"),
                _ => format!("{c}*x^{i}"),
            });
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        let tail = if s.precision() > limit { " + ..." } else { "" };
        format!("{}{}", parts.join(" + "), tail)
    }
}

fn series_json(s: &TruncatedSeries) -> serde_json::Value {
    json!({ "p": s.p(), "precision": s.precision(), "coefficients": s.coeffs() })
}

fn cmd_smooth(p: u64, m: u64, n: u32, u1: Option<u64>, precision: Option<usize>, as_json: bool) -> Result<()> {
    let default = (4 * ((p.saturating_sub(1)) * (m + 1) + 1) as usize).max(48);
    let prec = effective_precision(precision, default);
    let action = match n {
        1 => CyclicSmoothAction::standard_action(p, m, prec)?,
        2 => {
            let u1 = u1.ok_or_else(|| {
                Error::hypothesis("--u1 is required for n = 2 towers".to_string())
            })?;
            order_p2_tower(p, m, u1, prec)?
        }
        _ => {
            return Err(Error::hypothesis(format!(
                "only n = 1 and n = 2 are supported, got {n}"
            )))
        }
    };
    let profile = action.ramification_profile()?;
    let dim = ext1_dimension_smooth(&profile, n)?;
    let exists = trace_zero_basis_exists(&action)?;
    let witness = if exists {
        Some(trace_zero_basis_construct(&action)?)
    } else {
        None
    };
    if as_json {
        let out = json!({
            "p": p,
            "group_order": action.group_order(),
            "jumps": profile.jumps,
            "conductor": profile.conductor,
            "different": profile.different,
            "ext1_dimension": dim,
            "trace_zero_exists": exists,
            "witness": witness.as_ref().map(|w| series_json(w.series())),
        });
        println!("{}", serde_json::to_string_pretty(&out).map_err(|e| Error::internal(e.to_string()))?);
    } else {
        println!("p = {p}, group Z/{}", action.group_order());
        println!("jumps = {:?}", profile.jumps);
        match profile.conductor {
            Some(c) => println!("conductor = {c}"),
            None => println!("conductor = inf"),
        }
        println!("different = {}", profile.different);
        println!("ext1 dimension = {dim}");
        println!("trace-zero unit basis exists = {exists}");
        if let Some(w) = &witness {
            println!("witness (verified) = {}", series_text(w.series(), 24));
        }
    }
    Ok(())
}

fn parse_conductor(s: &str) -> Result<Option<u64>> {
    if s == "inf" {
        return Ok(None);
    }
    s.parse::<u64>()
        .map(Some)
        .map_err(|_| Error::data(format!("conductor must be an integer or `inf`, got {s}")))
}

fn cmd_node(p: u64, m: &str, mp: &str, precision: Option<usize>, as_json: bool) -> Result<()> {
    let m = parse_conductor(m)?;
    let mp = parse_conductor(mp)?;
    let biggest = m.unwrap_or(0).max(mp.unwrap_or(0));
    let default = (4 * ((p.saturating_sub(1)) * (biggest + 1) + 1) as usize).max(60);
    let prec = effective_precision(precision, default);
    let action = CyclicNodeAction::standard_node_action(p, m, mp, prec)?;
    let profile = action.profile()?;
    let h1 = h1_ext0_dimension(&action).ok();
    let kernel = phi_kernel_dimension(&action)?;
    let class = classify_relevability(&action)?;
    let lift = match lift_first_order(&action) {
        Ok(l) => {
            if !verify_lift(&action, &l)? {
                return Err(Error::internal(
                    "lift produced by the solver failed verification".to_string(),
                ));
            }
            Some(l)
        }
        Err(e) if e.is_hypothesis_violation() => None,
        Err(e) => return Err(e),
    };
    let fmt_c = |c: Option<u64>| c.map(|v| v.to_string()).unwrap_or_else(|| "inf".to_string());
    if as_json {
        let out = json!({
            "p": p,
            "group_order": profile.group_order,
            "conductors": [profile.conductors.0, profile.conductors.1],
            "differents": [profile.differents.0, profile.differents.1],
            "image_orders": [profile.image_orders.0, profile.image_orders.1],
            "h1_ext0_dimension": h1,
            "phi_kernel_dimension": kernel,
            "relevability": class.to_string(),
            "lift": lift.as_ref().map(|l| json!({
                "lambda": l.lambda.value(),
                "f0": series_json(&l.f0),
                "f1": series_json(&l.f1),
            })),
        });
        println!("{}", serde_json::to_string_pretty(&out).map_err(|e| Error::internal(e.to_string()))?);
    } else {
        println!("p = {p}, group Z/{}", profile.group_order);
        println!(
            "conductors = ({}, {})",
            fmt_c(profile.conductors.0),
            fmt_c(profile.conductors.1)
        );
        println!(
            "differents = ({}, {})",
            profile.differents.0, profile.differents.1
        );
        match h1 {
            Some(d) => println!("H1 dimension = {d}"),
            None => println!("H1 dimension = (formula not applicable)"),
        }
        println!("phi kernel dimension = {kernel}");
        println!("relevability = {class}");
        match &lift {
            Some(l) => {
                println!("lift witness (verified): lambda = {}", l.lambda.value());
                println!("  f0 = {}", series_text(&l.f0, 24));
                println!("  f1 = {}", series_text(&l.f1, 24));
            }
            None => println!("no first-order lift exists"),
        }
    }
    Ok(())
}

fn cmd_global(path: &PathBuf, as_json: bool) -> Result<()> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::data(format!("cannot read {}: {e}", path.display())))?;
    let spec = GlobalCurveSpec::from_json_str(&text)?;
    let report: DimensionReport = equideform_core::global::dim_ext1_stable_curve(&spec)?;
    if as_json {
        println!("{}", report.to_json_string()?);
    } else {
        if let Some(d) = report.dim_smooth_global {
            println!("smooth-curve dimension = {d}");
        }
        println!("local node term = {}", report.dim_h1_local_global_term);
        println!("F dimension = {}", report.f_dimension);
        println!("G dimension = {}", report.g_dimension);
        println!("unconditional nodes = {}", report.unconditional_count);
        if let Some(d) = report.dim_ext1_total {
            println!("total dimension = {d}");
        }
        for w in &report.warnings {
            println!("warning: {w}");
        }
    }
    Ok(())
}

fn cmd_sweep(
    p_list: &[u64],
    m_max: u64,
    precision: Option<usize>,
    seed: u64,
    as_json: bool,
) -> Result<()> {
    if p_list.is_empty() {
        return Err(Error::hypothesis("empty prime list".to_string()));
    }
    let mut rows = Vec::new();
    let mut mismatches = 0usize;
    for &p in p_list {
        for m in 1..=m_max {
            if m % p == 0 {
                continue;
            }
            let d = (p - 1) * (m + 1);
            let (window, ambient) = default_window(d, m, p);
            let prec = effective_precision(precision, ambient + 2 + 3 * p as usize);
            let action = CyclicSmoothAction::standard_action(p, m, prec)?;
            let profile = action.ramification_profile()?;
            let formula = ext1_dimension_smooth(&profile, 1)?;
            let oracle = h1_dimension_bruteforce(&OracleInput::Smooth(&action), window, ambient)?;
            let matched = formula == oracle as u64;
            if !matched {
                mismatches += 1;
            }
            rows.push((p, m, formula, oracle, matched));
        }
    }
    rows.sort();
    if as_json {
        let out = json!({
            "seed": seed,
            "rows": rows.iter().map(|(p, m, f, o, ok)| json!({
                "p": p, "m": m, "formula": f, "oracle": o, "match": ok,
            })).collect::<Vec<_>>(),
            "mismatches": mismatches,
        });
        println!("{}", serde_json::to_string_pretty(&out).map_err(|e| Error::internal(e.to_string()))?);
    } else {
        println!("seed = {seed}");
        println!("{:>4} {:>4} {:>8} {:>8} {:>6}", "p", "m", "formula", "oracle", "match");
        for (p, m, f, o, ok) in &rows {
            println!("{p:>4} {m:>4} {f:>8} {o:>8} {ok:>6}");
        }
    }
    if mismatches > 0 {
        return Err(Error::internal(format!("{mismatches} sweep rows disagree")));
    }
    Ok(())
}

fn run() -> Result<()> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Smooth { p, m, n, u1, precision, json } => cmd_smooth(p, m, n, u1, precision, json),
        Cmd::Node { p, m, mp, precision, json } => cmd_node(p, &m, &mp, precision, json),
        Cmd::Global { spec, json } => cmd_global(&spec, json),
        Cmd::Sweep { p_list, m_max, precision, seed, json } => {
            cmd_sweep(&p_list, m_max, precision, seed, json)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is_hypothesis_violation() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("internal error: {e}");
            ExitCode::from(1)
        }
    }
}
