//! Batch front end: classify a nonlinearity, print its regularity verdict,
//! sweep a solution branch to CSV, or run the verification suite.
//!
//! Exit codes: 0 success, 1 error, 2 classification entirely inconclusive.

mod config;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use config::{FamilySpec, RunConfig};
use semistable::analysis::{branch_csv, diagnose_boundedness, track, QuantitySpec};
use semistable::asymptotics::{profile, Confidence, ProfileOptions};
use semistable::eigen::EigenControls;
use semistable::estimates::GChoice;
use semistable::nonlinearity::{geometric_grid, validate};
use semistable::radial::{branch_sweep, OdeControls, SweepOptions};
use semistable::verdict::regularity_verdict;
use semistable::verify::{report_lines, run_all, VerifyConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "semistable", version, about = "Radial semistable branches of -Δu = λf(u) on the unit ball: classification, regularity verdicts, branch sweeps and verification")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// key = value config file; flags override its entries
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// nonlinearity family: exp | pow | linlog | linlogpow | expr
    #[arg(long, global = true)]
    family: Option<String>,
    /// exponent for --family pow (requires p > 1)
    #[arg(long, global = true)]
    p: Option<f64>,
    /// exponent for --family linlogpow (requires 0 < a < 1)
    #[arg(long, global = true)]
    a: Option<f64>,
    /// expression in t, e.g. "exp(t)" or "(1+t)^3"
    #[arg(long, global = true)]
    expr: Option<String>,
    /// space dimension (integer >= 2)
    #[arg(long, global = true)]
    n: Option<u32>,
    #[arg(long = "m-min", global = true)]
    m_min: Option<f64>,
    #[arg(long = "m-max", global = true)]
    m_max: Option<f64>,
    #[arg(long = "m-count", global = true)]
    m_count: Option<usize>,
    /// m grid spacing: linear | geometric
    #[arg(long = "m-spacing", global = true)]
    m_spacing: Option<String>,
    /// comma-separated beta list, each in [0,1)
    #[arg(long, global = true)]
    beta: Option<String>,
    #[arg(long = "tol-ode", global = true)]
    tol_ode: Option<f64>,
    #[arg(long = "tol-quad", global = true)]
    tol_quad: Option<f64>,
    #[arg(long = "tol-eigen", global = true)]
    tol_eigen: Option<f64>,
    /// output directory for report files (defaults to stdout only)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// worker threads for sweeps (output independent of the count)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// seed for the randomized verification samples
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// emit JSON (default for classify/verify)
    #[arg(long, global = true)]
    json: bool,
    /// emit a human-readable markdown table (verdict)
    #[arg(long, global = true)]
    markdown: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Estimate tau and the tail growth conditions of a nonlinearity
    Classify {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Per-dimension regularity guarantees from the generated certificates
    Verdict {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Sweep the solution branch lambda(m) and export CSV + summary JSON
    Branch {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the acceptance criteria
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// run only criteria whose name contains this string (or a numeric id)
        #[arg(long)]
        filter: Option<String>,
    },
}

fn build_config(common: &CommonArgs) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &common.config {
        let map = config::parse_config_file(path)?;
        config::apply_file(&mut cfg, &map)?;
    }
    if let Some(fam) = &common.family {
        cfg.family = config::family_spec(fam, common.p, common.a, common.expr.clone())?;
    } else if let Some(expr) = &common.expr {
        cfg.family = FamilySpec::Expr(expr.clone());
    }
    if let Some(n) = common.n {
        cfg.n = n;
    }
    if let Some(v) = common.m_min {
        cfg.m_min = v;
    }
    if let Some(v) = common.m_max {
        cfg.m_max = v;
    }
    if let Some(v) = common.m_count {
        cfg.m_count = v;
    }
    if let Some(v) = &common.m_spacing {
        cfg.m_spacing = config::parse_spacing(v)?;
    }
    if let Some(v) = &common.beta {
        cfg.betas = config::parse_beta_list(v)?;
    }
    if let Some(v) = common.tol_ode {
        cfg.tol_ode = v;
    }
    if let Some(v) = common.tol_quad {
        cfg.tol_quad = v;
    }
    if let Some(v) = common.tol_eigen {
        cfg.tol_eigen = v;
    }
    if let Some(v) = &common.out {
        cfg.out_dir = Some(v.clone());
    }
    if let Some(v) = common.threads {
        cfg.threads = v;
    }
    if let Some(v) = common.seed {
        cfg.seed = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_out(cfg: &RunConfig, name: &str, content: &str) -> Result<Option<PathBuf>> {
    match &cfg.out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)
                .with_context(|| format!("creating output directory {}", dir.display()))?;
            let path = dir.join(name);
            std::fs::write(&path, content)
                .with_context(|| format!("writing {}", path.display()))?;
            Ok(Some(path))
        }
        None => Ok(None),
    }
}

fn cmd_classify(cfg: &RunConfig) -> Result<u8> {
    let f = cfg.family.build()?;
    let report = validate(&f, &geometric_grid(1e6), 1e3);
    if !report.all_passed() {
        let doc = serde_json::json!({
            "description": f.description(),
            "validation": report,
        });
        let text = serde_json::to_string_pretty(&doc)?;
        println!("{text}");
        write_out(cfg, "classify.json", &text)?;
        return Ok(1);
    }
    let prof = profile(&f, ProfileOptions::default());
    let text = serde_json::to_string_pretty(&prof)?;
    println!("{text}");
    write_out(cfg, "classify.json", &text)?;
    let inconclusive = prof.tau_confidence == Confidence::Inconclusive
        && prof.convex_power_delta.is_none()
        && prof.cond_1_6.is_none()
        && prof.cond_1_7.is_none()
        && prof.cond_1_25.is_none()
        && prof.cond_1_26.is_none()
        && prof.cond_1_32.is_none();
    Ok(if inconclusive { 2 } else { 0 })
}

fn cmd_verdict(cfg: &RunConfig, markdown: bool) -> Result<u8> {
    let f = cfg.family.build()?;
    let prof = profile(&f, ProfileOptions::default());
    let verdict = regularity_verdict(&prof, cfg.n)?;
    if markdown {
        let text = verdict.to_markdown();
        println!("{text}");
        write_out(cfg, "verdict.md", &text)?;
    } else {
        let text = serde_json::to_string_pretty(&verdict)?;
        println!("{text}");
        write_out(cfg, "verdict.json", &text)?;
    }
    Ok(0)
}

fn cmd_branch(cfg: &RunConfig) -> Result<u8> {
    let f = cfg.family.build()?;
    let grid = cfg.m_grid()?;
    let opts = SweepOptions {
        ode: OdeControls {
            rtol: cfg.tol_ode,
            atol: cfg.tol_ode * 1e-2,
            ..OdeControls::default()
        },
        eigen: Some(EigenControls { mu_tol: cfg.tol_eigen, ..EigenControls::default() }),
        threads: cfg.threads,
    };
    let branch = branch_sweep(&f, cfg.n, &grid, &opts);

    let mut specs: Vec<QuantitySpec> = cfg
        .betas
        .iter()
        .map(|b| QuantitySpec::IntHfBeta { beta: *b })
        .collect();
    specs.extend([
        QuantitySpec::IntNedev,
        QuantitySpec::IntFfPrime,
        QuantitySpec::IntLemma21H { g: GChoice::GEqualsF },
        QuantitySpec::IntUf,
        QuantitySpec::LpNorm { r: 2.0 },
        QuantitySpec::GradLpNorm { r: 2.0 },
    ]);
    let table = track(&f, &branch, &specs, cfg.tol_quad)?;
    let csv = branch_csv(&branch, &table);
    let csv_path = write_out(cfg, "branch.csv", &csv)?;
    if csv_path.is_none() {
        print!("{csv}");
    }

    // tail diagnosis per tracked H column, where the sweep supports one
    let lambdas: Vec<f64> = branch.points.iter().map(|p| p.lambda).collect();
    let mut diagnoses = Vec::new();
    for col in &table.columns {
        if !col.label.starts_with("int_H_beta") {
            continue;
        }
        let values: Vec<f64> = col.values.iter().map(|v| v.unwrap_or(f64::NAN)).collect();
        if let Ok(diag) = diagnose_boundedness(&lambdas, &values, branch.lambda_star) {
            diagnoses.push(serde_json::json!({
                "column": col.label,
                "behavior": diag.behavior,
                "empirical_sup": diag.empirical_sup,
            }));
        }
    }

    let failures: Vec<_> = branch
        .points
        .iter()
        .filter(|p| p.error.is_some())
        .map(|p| serde_json::json!({"m": p.m, "error": p.error}))
        .collect();
    let summary = serde_json::json!({
        "family": f.description(),
        "n": cfg.n,
        "points": branch.points.len(),
        "lambda_star": branch.lambda_star,
        "fold_m": branch.fold_m,
        "monotone": branch.monotone,
        "failures": failures,
        "csv": csv_path.as_ref().and_then(|p| p.file_name()).map(|p| p.to_string_lossy().to_string()),
        "tail_diagnoses": diagnoses,
    });
    let text = serde_json::to_string_pretty(&summary)?;
    println!("{text}");
    write_out(cfg, "branch_summary.json", &text)?;
    Ok(0)
}

fn cmd_verify(cfg: &RunConfig, filter: Option<&str>) -> Result<u8> {
    let vcfg = VerifyConfig { threads: cfg.threads, seed: cfg.seed };
    let results = run_all(&vcfg, filter);
    let text = report_lines(&results);
    print!("{text}");
    write_out(cfg, "verify.jsonl", &text)?;
    Ok(if results.iter().all(|r| r.passed) { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = || -> Result<u8> {
        match &cli.cmd {
            Cmd::Classify { common } => cmd_classify(&build_config(common)?),
            Cmd::Verdict { common } => {
                let cfg = build_config(common)?;
                cmd_verdict(&cfg, common.markdown)
            }
            Cmd::Branch { common } => cmd_branch(&build_config(common)?),
            Cmd::Verify { common, filter } => {
                let cfg = build_config(common)?;
                cmd_verify(&cfg, filter.as_deref())
            }
        }
    };
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
