//! `analytic`: tabulate any closed-form operation over a parameter grid.

use crate::config::Config;
use crate::grid::parse_axis;
use clap::Args;
use num_complex::Complex64;
use orthoplanar::analytic::{self, AnalyticError};
use orthoplanar::ModelParams;
use std::path::PathBuf;

#[derive(Debug, Args)]
pub struct AnalyticArgs {
    /// operation name; run with an unknown name to get the list
    #[arg(long = "fn")]
    func: Option<String>,
    /// every numeric flag accepts a scalar, a comma list, or lo:hi:n
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    c: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    t: Option<String>,
    /// evaluation point of a density (eta, x, s, or y, per the operation)
    #[arg(long)]
    x: Option<String>,
    /// second spatial argument (joint_hydro_limit only)
    #[arg(long)]
    y: Option<String>,
    /// phase argument of a characteristic function
    #[arg(long)]
    alpha: Option<String>,
    /// second phase argument (interior_charfn_noref only)
    #[arg(long)]
    beta: Option<String>,
    /// output file (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Extra argument axes an operation consumes beyond (lambda, c, p, q, t).
#[derive(Clone, Copy, PartialEq)]
enum Arg {
    X,
    Y,
    Alpha,
    Beta,
}

enum Eval {
    Prob(fn(&ModelParams, f64) -> f64),
    ProbFallible(fn(&ModelParams, f64) -> Result<f64, AnalyticError>),
    Density(fn(&ModelParams, f64, f64) -> Result<f64, AnalyticError>),
    Charfn(fn(&ModelParams, f64, f64) -> Complex64),
    CharfnFallible(fn(&ModelParams, f64, f64) -> Result<Complex64, AnalyticError>),
    Charfn2(fn(&ModelParams, f64, f64, f64) -> Result<Complex64, AnalyticError>),
    HydroCoeff,
    Joint,
}

struct FnSpec {
    name: &'static str,
    args: &'static [Arg],
    eval: Eval,
}

fn table() -> Vec<FnSpec> {
    use Eval::*;
    vec![
        FnSpec { name: "prob_boundary", args: &[], eval: Prob(analytic::prob_boundary) },
        FnSpec { name: "prob_side_interior", args: &[], eval: Prob(analytic::prob_side_interior) },
        FnSpec { name: "prob_diagonals", args: &[], eval: Prob(analytic::prob_diagonals) },
        FnSpec { name: "prob_diag_interior", args: &[], eval: Prob(analytic::prob_diag_interior) },
        FnSpec { name: "t_endpoint_mass", args: &[], eval: Prob(analytic::t_endpoint_mass) },
        FnSpec { name: "oblique_prob_noref", args: &[], eval: ProbFallible(analytic::oblique_prob_noref) },
        FnSpec { name: "oblique_prob_pq", args: &[], eval: ProbFallible(analytic::oblique_prob_pq) },
        FnSpec { name: "side_density", args: &[Arg::X], eval: Density(analytic::side_density) },
        FnSpec { name: "diag_density", args: &[Arg::X], eval: Density(analytic::diag_density) },
        FnSpec { name: "t_density", args: &[Arg::X], eval: Density(analytic::t_density) },
        FnSpec { name: "vertical_side_density", args: &[Arg::X], eval: Density(analytic::vertical_side_density) },
        FnSpec { name: "oblique_density_noref", args: &[Arg::X], eval: Density(analytic::oblique_density_noref) },
        FnSpec { name: "side_charfn", args: &[Arg::Alpha], eval: Charfn(analytic::side_charfn) },
        FnSpec { name: "diag_charfn", args: &[Arg::Alpha], eval: Charfn(analytic::diag_charfn) },
        FnSpec { name: "t_charfn", args: &[Arg::Alpha], eval: Charfn(analytic::t_charfn) },
        FnSpec { name: "vertical_side_charfn", args: &[Arg::Alpha], eval: Charfn(analytic::vertical_side_charfn) },
        FnSpec { name: "oblique_charfn_noref", args: &[Arg::Alpha], eval: CharfnFallible(analytic::oblique_charfn_noref) },
        FnSpec { name: "oblique_charfn_pq", args: &[Arg::Alpha], eval: CharfnFallible(analytic::oblique_charfn_pq) },
        FnSpec { name: "interior_charfn_noref", args: &[Arg::Alpha, Arg::Beta], eval: Charfn2(analytic::interior_charfn_noref) },
        FnSpec { name: "hydro_coeff", args: &[], eval: HydroCoeff },
        FnSpec { name: "joint_hydro_limit", args: &[Arg::X, Arg::Y], eval: Joint },
    ]
}

fn axis_flag(args: &AnalyticArgs, which: Arg) -> (&'static str, Option<&String>) {
    match which {
        Arg::X => ("x", args.x.as_ref()),
        Arg::Y => ("y", args.y.as_ref()),
        Arg::Alpha => ("alpha", args.alpha.as_ref()),
        Arg::Beta => ("beta", args.beta.as_ref()),
    }
}

fn csv_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

/// All index tuples over the axis lengths, odometer order (last axis
/// fastest).
fn odometer(lens: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(lens.iter().product());
    let mut idx = vec![0usize; lens.len()];
    loop {
        out.push(idx.clone());
        let mut k = lens.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < lens[k] {
                break;
            }
            idx[k] = 0;
        }
    }
}

pub fn run(args: AnalyticArgs, cfg: &Config) -> Result<(), String> {
    let name = match args.func.as_deref().or_else(|| cfg.raw("fn")) {
        Some(f) => f.to_string(),
        None => return Err(known_fns("missing --fn")),
    };
    let specs = table();
    let spec = specs
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| known_fns(&format!("unknown --fn '{name}'")))?;

    let axis = |flag: Option<&String>, key: &str, default: Option<&str>| -> Result<Vec<f64>, String> {
        let spec_str = flag
            .map(String::as_str)
            .or_else(|| cfg.raw(key))
            .or(default)
            .ok_or_else(|| format!("missing --{key} for {name}"))?;
        parse_axis(spec_str)
    };

    // Model axes; hydro_coeff only consumes (p, q).
    let coeff_only = matches!(spec.eval, Eval::HydroCoeff);
    let lambdas = axis(args.lambda.as_ref(), "lambda", Some("1"))?;
    let cs = axis(args.c.as_ref(), "c", Some("1"))?;
    let ps = axis(args.p.as_ref(), "p", None)?;
    let qs = axis(args.q.as_ref(), "q", None)?;
    let ts = axis(args.t.as_ref(), "t", Some("1"))?;

    let mut axes: Vec<(&str, Vec<f64>)> = if coeff_only {
        vec![("p", ps), ("q", qs)]
    } else {
        vec![("lambda", lambdas), ("c", cs), ("p", ps), ("q", qs), ("t", ts)]
    };
    for &a in spec.args {
        let (key, flag) = axis_flag(&args, a);
        axes.push((key, axis(flag, key, None)?));
    }

    let value_cols: &[&str] = match spec.eval {
        Eval::Charfn(_) | Eval::CharfnFallible(_) | Eval::Charfn2(_) => &["re", "im"],
        Eval::Joint => &["variance", "s_star", "y_density", "s_gap"],
        _ => &["value"],
    };
    let mut out = String::new();
    out.push_str(
        &axes
            .iter()
            .map(|(k, _)| *k)
            .chain(value_cols.iter().copied())
            .chain(std::iter::once("error"))
            .collect::<Vec<_>>()
            .join(","),
    );
    out.push('\n');

    let lens: Vec<usize> = axes.iter().map(|(_, v)| v.len()).collect();
    for idx in odometer(&lens) {
        let at: Vec<f64> = idx.iter().zip(&axes).map(|(&i, (_, v))| v[i]).collect();
        let mut cells: Vec<String> = at.iter().map(|v| format!("{v}")).collect();
        let get = |key: &str| {
            axes.iter()
                .position(|(k, _)| *k == key)
                .map(|i| at[i])
                .expect("axis present")
        };
        let result: Result<Vec<f64>, String> = if coeff_only {
            let (p, q) = (get("p"), get("q"));
            if p >= 0.0 && q >= 0.0 && p + q <= 1.0 && (1.0 - p) + (1.0 - q) > 0.0 {
                Ok(vec![analytic::hydro_coeff(p, q)])
            } else {
                Err(format!("invalid probabilities p={p} q={q}"))
            }
        } else {
            match ModelParams::new(get("lambda"), get("c"), get("p"), get("q")) {
                Err(e) => Err(e.to_string()),
                Ok(params) => {
                    let t = get("t");
                    match &spec.eval {
                        Eval::Prob(f) => Ok(vec![f(&params, t)]),
                        Eval::ProbFallible(f) => {
                            f(&params, t).map(|v| vec![v]).map_err(|e| e.to_string())
                        }
                        Eval::Density(f) => f(&params, t, get("x"))
                            .map(|v| vec![v])
                            .map_err(|e| e.to_string()),
                        Eval::Charfn(f) => {
                            let z = f(&params, t, get("alpha"));
                            Ok(vec![z.re, z.im])
                        }
                        Eval::CharfnFallible(f) => f(&params, t, get("alpha"))
                            .map(|z| vec![z.re, z.im])
                            .map_err(|e| e.to_string()),
                        Eval::Charfn2(f) => f(&params, t, get("alpha"), get("beta"))
                            .map(|z| vec![z.re, z.im])
                            .map_err(|e| e.to_string()),
                        Eval::Joint => {
                            let j = analytic::joint_hydro_limit(&params, t, get("x"), get("y"));
                            Ok(vec![j.variance, j.s_star, j.y_density, j.s_gap])
                        }
                        Eval::HydroCoeff => unreachable!("handled above"),
                    }
                }
            }
        };
        match result {
            Ok(values) => {
                cells.extend(values.iter().map(|v| format!("{v}")));
                cells.push(String::new());
            }
            Err(message) => {
                cells.extend(value_cols.iter().map(|_| String::new()));
                cells.push(csv_quote(&message));
            }
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }

    match &args.out {
        None => print!("{out}"),
        Some(path) => {
            std::fs::write(path, out).map_err(|e| format!("write {}: {e}", path.display()))?
        }
    }
    Ok(())
}

fn known_fns(prefix: &str) -> String {
    let names: Vec<&str> = table().iter().map(|s| s.name).collect();
    format!("{prefix}; known operations: {}", names.join(", "))
}
