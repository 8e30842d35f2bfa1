//! `simulate`: sample paths to plot-ready CSV.

use crate::config::Config;
use clap::Args;
use orthoplanar::mc::replication_rng;
use orthoplanar::{simulate_with_trajectory, ModelParams, Trajectory};
use rayon::prelude::*;
use std::path::PathBuf;

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Poisson event rate
    #[arg(long)]
    lambda: Option<f64>,
    /// speed
    #[arg(long)]
    c: Option<f64>,
    /// counterclockwise-turn probability
    #[arg(long)]
    p: Option<f64>,
    /// clockwise-turn probability
    #[arg(long)]
    q: Option<f64>,
    /// horizon
    #[arg(long)]
    t: Option<f64>,
    #[arg(long = "n-paths")]
    n_paths: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// --concat: output file (stdout if omitted); otherwise: output
    /// directory for one CSV per path
    #[arg(long)]
    out: Option<PathBuf>,
    /// single CSV with a leading path-id column
    #[arg(long)]
    concat: bool,
    /// also emit the replayed occupation path (t, s, y)
    #[arg(long)]
    triangle: bool,
}

fn triangle_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t,s,y\n");
    for (t, s, y) in traj.triangle_path() {
        out.push_str(&format!("{t},{s},{y}\n"));
    }
    out
}

/// Re-keys a per-path CSV under a leading id column.
fn with_path_column(id: u64, csv: &str) -> String {
    csv.lines()
        .skip(1)
        .map(|row| format!("{id},{row}\n"))
        .collect()
}

pub fn run(args: SimulateArgs, cfg: &Config) -> Result<(), String> {
    let lambda = cfg.resolve(args.lambda, "lambda", 1.0)?;
    let c = cfg.resolve(args.c, "c", 1.0)?;
    let p = cfg.resolve(args.p, "p", 0.25)?;
    let q = cfg.resolve(args.q, "q", 0.25)?;
    let t = cfg.resolve(args.t, "t", 1.0)?;
    let n_paths = cfg.resolve(args.n_paths, "n-paths", 1)?;
    let seed = cfg.resolve_seed(args.seed)?;
    let concat = cfg.resolve_switch(args.concat, "concat")?;
    let triangle = cfg.resolve_switch(args.triangle, "triangle")?;
    let params = ModelParams::new(lambda, c, p, q).map_err(|e| e.to_string())?;
    if !(t.is_finite() && t > 0.0) {
        return Err(format!("horizon t must be positive, got {t}"));
    }
    if n_paths == 0 {
        return Err("need at least one path".to_string());
    }

    let trajectories: Vec<Trajectory> = (0..n_paths)
        .into_par_iter()
        .map(|i| simulate_with_trajectory(&params, t, &mut replication_rng(seed, i)).1)
        .collect();

    if concat {
        let mut body = String::from("path,t,x,y,dir\n");
        for (i, traj) in trajectories.iter().enumerate() {
            body.push_str(&with_path_column(i as u64, &traj.to_csv()));
        }
        match &args.out {
            None => {
                if triangle {
                    return Err("--triangle with --concat needs --out to name the files".into());
                }
                print!("{body}");
            }
            Some(path) => {
                std::fs::write(path, &body).map_err(|e| format!("write {}: {e}", path.display()))?;
                if triangle {
                    let mut tri = String::from("path,t,s,y\n");
                    for (i, traj) in trajectories.iter().enumerate() {
                        tri.push_str(&with_path_column(i as u64, &triangle_csv(traj)));
                    }
                    let tri_path = path.with_extension("triangle.csv");
                    std::fs::write(&tri_path, &tri)
                        .map_err(|e| format!("write {}: {e}", tri_path.display()))?;
                }
            }
        }
    } else {
        let dir = args
            .out
            .clone()
            .ok_or("per-path output needs --out <directory> (or use --concat)")?;
        std::fs::create_dir_all(&dir).map_err(|e| format!("mkdir {}: {e}", dir.display()))?;
        for (i, traj) in trajectories.iter().enumerate() {
            let path = dir.join(format!("path_{i:05}.csv"));
            std::fs::write(&path, traj.to_csv())
                .map_err(|e| format!("write {}: {e}", path.display()))?;
            if triangle {
                let tri_path = dir.join(format!("path_{i:05}.triangle.csv"));
                std::fs::write(&tri_path, triangle_csv(traj))
                    .map_err(|e| format!("write {}: {e}", tri_path.display()))?;
            }
        }
    }
    Ok(())
}
