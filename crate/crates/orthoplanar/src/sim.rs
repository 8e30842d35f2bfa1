//! Exact event-driven simulation of the motion.
//!
//! A path is a finite list of linear segments: the particle keeps its
//! heading for an Exponential(lambda) holding time, then turns according to
//! `sample_turn`. Positions advance by exact segment algebra (unit steps
//! scaled by `c * dt`, no trigonometry), so the support constraint holds to
//! a few ulps and the singular components can be detected from the event
//! history alone.
//!
//! Stream layout: one uniform draw picks the initial heading, then each
//! event consumes exactly two draws (holding time, turn). The layout is
//! fixed so a replication is a pure function of its seed.

use crate::model::{
    sample_turn, Axis, Direction, ModelParams, MotionState, PathHistory, RegionClass, TurnKind,
};
use rand::Rng;
use thiserror::Error;

/// Result of one simulated path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOutcome {
    /// State at the terminal time.
    pub final_state: MotionState,
    /// Event-history classification of the terminal position.
    pub region: RegionClass,
    /// Total time spent moving vertically. Exactly `0.0` for paths that
    /// never moved vertically and exactly `t_end` for paths that never
    /// moved horizontally, so the degenerate occupation-time components
    /// can be counted without tolerances.
    pub t_vertical: f64,
    /// Monotone flags accumulated along the path.
    pub history: PathHistory,
    /// Heading drawn at t = 0.
    pub initial_dir: Direction,
}

impl SimOutcome {
    /// The path stayed on the oblique side of the occupation-position
    /// triangle: every vertical stretch headed upward, hence Y = c T.
    pub fn on_oblique_side(&self) -> bool {
        self.history.vertical_all_up()
    }
}

/// One vertex of the piecewise-linear path: the state at t = 0, at an event
/// epoch, or at the terminal time. `dir` is the heading leaving this point
/// (the terminal point keeps its arrival heading).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Breakpoint {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub dir: Direction,
}

/// A complete sample path, stored as its breakpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    breakpoints: Vec<Breakpoint>,
}

/// Failure to parse a trajectory from its CSV form.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("trajectory csv, line {line}: {what}")]
pub struct TrajectoryParseError {
    pub line: usize,
    pub what: String,
}

impl Trajectory {
    pub fn breakpoints(&self) -> &[Breakpoint] {
        &self.breakpoints
    }

    /// Occupation time replayed from the breakpoints, independently of the
    /// simulator's own accumulator.
    pub fn occupation_time(&self) -> f64 {
        let mut s = 0.0;
        for pair in self.breakpoints.windows(2) {
            if pair[0].dir.is_vertical() {
                s += pair[1].t - pair[0].t;
            }
        }
        s
    }

    /// The path of (T(t), Y(t)) on the occupation-position triangle,
    /// sampled at the breakpoints: rows of (t, occupied-so-far, y).
    pub fn triangle_path(&self) -> Vec<(f64, f64, f64)> {
        let mut rows = Vec::with_capacity(self.breakpoints.len());
        let mut s = 0.0;
        for (i, b) in self.breakpoints.iter().enumerate() {
            if i > 0 {
                let prev = &self.breakpoints[i - 1];
                if prev.dir.is_vertical() {
                    s += b.t - prev.t;
                }
            }
            rows.push((b.t, s, b.y));
        }
        rows
    }

    /// CSV with header `t,x,y,dir`, LF endings, shortest round-trip floats.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x,y,dir\n");
        for b in &self.breakpoints {
            out.push_str(&format!("{},{},{},{}\n", b.t, b.x, b.y, b.dir.index()));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Trajectory, TrajectoryParseError> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, "t,x,y,dir")) => {}
            other => {
                return Err(TrajectoryParseError {
                    line: 1,
                    what: format!("expected header 't,x,y,dir', got {:?}", other.map(|(_, l)| l)),
                })
            }
        }
        let mut breakpoints = Vec::new();
        for (idx, row) in lines {
            let line = idx + 1;
            if row.is_empty() {
                continue;
            }
            let fields: Vec<&str> = row.split(',').collect();
            if fields.len() != 4 {
                return Err(TrajectoryParseError {
                    line,
                    what: format!("expected 4 fields, got {}", fields.len()),
                });
            }
            let parse = |s: &str, what: &str| -> Result<f64, TrajectoryParseError> {
                s.parse::<f64>().map_err(|e| TrajectoryParseError {
                    line,
                    what: format!("bad {what} value {s:?}: {e}"),
                })
            };
            let dir_idx: u8 = fields[3].parse().map_err(|e| TrajectoryParseError {
                line,
                what: format!("bad dir value {:?}: {e}", fields[3]),
            })?;
            if dir_idx > 3 {
                return Err(TrajectoryParseError {
                    line,
                    what: format!("dir must be 0..=3, got {dir_idx}"),
                });
            }
            breakpoints.push(Breakpoint {
                t: parse(fields[0], "t")?,
                x: parse(fields[1], "x")?,
                y: parse(fields[2], "y")?,
                dir: Direction::from_index(dir_idx),
            });
        }
        if breakpoints.len() < 2 {
            return Err(TrajectoryParseError {
                line: 1,
                what: format!("a trajectory needs at least 2 breakpoints, got {}", breakpoints.len()),
            });
        }
        Ok(Trajectory { breakpoints })
    }
}

/// Classify the terminal position from the event history alone. Coordinates
/// are never compared: with continuous event times, the history determines
/// membership in the singular sets almost surely.
pub fn classify(history: &PathHistory, initial_dir: Direction, n_events: u64) -> RegionClass {
    if n_events == 0 {
        return RegionClass::Vertex { dir: initial_dir };
    }
    if history.alternating_turns() {
        // The path uses exactly the headings {j0, j0+1} (first turn Ccw)
        // or {j0-1, j0} (first turn Cw); either pair spans one side.
        let j0 = initial_dir.index();
        let side = match history.first_turn() {
            Some(TurnKind::Ccw) => j0,
            Some(TurnKind::Cw) => (j0 + 3) & 3,
            _ => unreachable!("alternating path with >= 1 event has a rotation first"),
        };
        return RegionClass::SideInterior { side };
    }
    if history.only_reflections() {
        let axis = if initial_dir.is_vertical() {
            Axis::Vertical
        } else {
            Axis::Horizontal
        };
        return RegionClass::DiagonalInterior { axis };
    }
    RegionClass::Interior
}

fn run<R, F>(params: &ModelParams, t_end: f64, rng: &mut R, mut on_point: F) -> SimOutcome
where
    R: Rng + ?Sized,
    F: FnMut(f64, f64, f64, Direction),
{
    assert!(
        t_end > 0.0 && t_end.is_finite(),
        "t_end must be finite and > 0, got {t_end}"
    );
    let (lam, c) = (params.lambda(), params.c());

    let u0: f64 = rng.gen();
    let initial_dir = Direction::from_index((u0 * 4.0) as u8);

    let mut dir = initial_dir;
    let mut t = 0.0_f64;
    let (mut x, mut y) = (0.0_f64, 0.0_f64);
    let mut n_events = 0_u64;
    let mut history = PathHistory::new();
    let mut vertical_sum = 0.0_f64;
    let mut saw_vertical = false;
    let mut saw_horizontal = false;

    on_point(t, x, y, dir);

    loop {
        let u: f64 = rng.gen();
        let hold = -(1.0 - u).ln() / lam;
        let next = t + hold;
        // dt recomputed from the breakpoint times themselves, so a replay
        // from the stored trajectory reproduces every coordinate bitwise.
        let dt = if next < t_end { next - t } else { t_end - t };

        let (sx, sy) = dir.step();
        x += sx * c * dt;
        y += sy * c * dt;
        history.record_segment(dir, dt);
        if dt > 0.0 {
            if dir.is_vertical() {
                saw_vertical = true;
                vertical_sum += dt;
            } else {
                saw_horizontal = true;
            }
        }

        if next < t_end {
            t = next;
            let kind = sample_turn(params, rng.gen());
            history.record_turn(kind);
            dir = dir.turned(kind);
            n_events += 1;
            on_point(t, x, y, dir);
        } else {
            t = t_end;
            on_point(t, x, y, dir);
            break;
        }
    }

    let t_vertical = if !saw_vertical {
        0.0
    } else if !saw_horizontal {
        t_end
    } else {
        vertical_sum
    };

    SimOutcome {
        final_state: MotionState {
            t,
            x,
            y,
            dir,
            n_events,
        },
        region: classify(&history, initial_dir, n_events),
        t_vertical,
        history,
        initial_dir,
    }
}

/// Simulate one path to time `t_end`.
pub fn simulate<R: Rng + ?Sized>(params: &ModelParams, t_end: f64, rng: &mut R) -> SimOutcome {
    run(params, t_end, rng, |_, _, _, _| {})
}

/// Simulate one path and record every breakpoint.
pub fn simulate_with_trajectory<R: Rng + ?Sized>(
    params: &ModelParams,
    t_end: f64,
    rng: &mut R,
) -> (SimOutcome, Trajectory) {
    let mut breakpoints = Vec::new();
    let outcome = run(params, t_end, rng, |t, x, y, dir| {
        breakpoints.push(Breakpoint { t, x, y, dir })
    });
    (outcome, Trajectory { breakpoints })
}

/// Simulate one path and return only its trajectory.
pub fn export_trajectory<R: Rng + ?Sized>(
    params: &ModelParams,
    t_end: f64,
    rng: &mut R,
) -> Trajectory {
    simulate_with_trajectory(params, t_end, rng).1
}
