//! `verify`: run the cross-checking suites and emit the JSON report.

use crate::config::Config;
use clap::Args;
use orthoplanar::verify::{
    self, HydroMode, VerifyReport, DEFAULT_FOURIER_ALPHAS,
};
use orthoplanar::ModelParams;
use std::path::PathBuf;

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// quadrature | fourier | pde | hydro | all
    #[arg(long)]
    suite: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo replications per hydrodynamic run
    #[arg(long)]
    n: Option<u64>,
    /// strict gates failures into the exit code; survey only reports them
    #[arg(long)]
    mode: Option<String>,
    /// report file (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn reference_params() -> Vec<ModelParams> {
    verify::reference_grid()
        .iter()
        .map(|&(p, q)| ModelParams::new(1.0, 1.0, p, q).unwrap())
        .collect()
}

fn quadrature_suite() -> VerifyReport {
    let mut report = VerifyReport::default();
    for params in reference_params() {
        for t in verify::reference_times() {
            report.merge(verify::quadrature_consistency(&params, t));
        }
    }
    report
}

fn fourier_suite() -> VerifyReport {
    let mut report = VerifyReport::default();
    for params in reference_params() {
        for t in verify::reference_times() {
            report.merge(verify::fourier_consistency(&params, t, &DEFAULT_FOURIER_ALPHAS));
        }
    }
    report
}

fn pde_suite() -> VerifyReport {
    let mut report = VerifyReport::default();
    for params in reference_params() {
        for t in verify::reference_times() {
            report.merge(verify::pde_residuals(&params, t, 25));
        }
    }
    report
}

fn hydro_suite(n: u64, seed: u64, mode: HydroMode) -> VerifyReport {
    let mut report = VerifyReport::default();
    for (i, (p, q)) in verify::reference_grid().into_iter().enumerate() {
        report.merge(verify::hydro_convergence(
            p,
            q,
            1.0,
            &[10.0, 20.0, 30.0],
            n,
            seed.wrapping_add(1000 * i as u64),
            mode,
        ));
    }
    report
}

/// Ok(true) when every gated check passed.
pub fn run(args: VerifyArgs, cfg: &Config) -> Result<bool, String> {
    let suite = match args.suite.as_deref().or_else(|| cfg.raw("suite")) {
        None => "all".to_string(),
        Some(s) => s.to_string(),
    };
    let seed = cfg.resolve_seed(args.seed)?;
    let n = cfg.resolve(args.n, "n", 200_000)?;
    let mode = match args
        .mode
        .as_deref()
        .or_else(|| cfg.raw("mode"))
        .unwrap_or("strict")
    {
        "strict" => HydroMode::Strict,
        "survey" => HydroMode::Survey,
        other => return Err(format!("unknown --mode '{other}' (strict or survey)")),
    };
    if n == 0 {
        return Err("--n must be positive".to_string());
    }

    let mut report = VerifyReport::default();
    match suite.as_str() {
        "quadrature" => report.merge(quadrature_suite()),
        "fourier" => report.merge(fourier_suite()),
        "pde" => report.merge(pde_suite()),
        "hydro" => report.merge(hydro_suite(n, seed, mode)),
        "all" => {
            report.merge(quadrature_suite());
            report.merge(fourier_suite());
            report.merge(pde_suite());
            report.merge(hydro_suite(n, seed, mode));
        }
        other => {
            return Err(format!(
                "unknown --suite '{other}' (quadrature, fourier, pde, hydro, all)"
            ))
        }
    }

    let doc = report.to_json();
    match &args.out {
        None => println!("{doc}"),
        Some(path) => {
            std::fs::write(path, doc).map_err(|e| format!("write {}: {e}", path.display()))?
        }
    }
    let failed: Vec<&str> = report
        .results
        .iter()
        .filter(|r| !r.pass)
        .map(|r| r.check.as_str())
        .collect();
    eprintln!(
        "verify: suite={suite} seed={seed} checks={} failed={}{}",
        report.results.len(),
        failed.len(),
        if failed.is_empty() {
            String::new()
        } else {
            format!(" [{}]", failed.join(", "))
        }
    );
    Ok(report.all_pass())
}
