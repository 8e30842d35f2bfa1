//! Model primitives: validated parameters, headings, turn events, and the
//! event-history bookkeeping the region classifier relies on.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Parameter validation failures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("switching rate and speed must be positive and finite (lambda={lambda}, c={c})")]
    NonPositiveRate { lambda: f64, c: f64 },
    #[error("turn probabilities must satisfy p >= 0, q >= 0, p + q <= 1 (p={p}, q={q})")]
    InvalidProbability { p: f64, q: f64 },
}

/// Validated model parameters: Poisson switching rate `lambda`, speed `c`,
/// and turn probabilities `p` (counterclockwise) and `q` (clockwise).
/// Reflection happens with the remaining probability `1 - p - q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    lambda: f64,
    c: f64,
    p: f64,
    q: f64,
}

impl ModelParams {
    pub fn new(lambda: f64, c: f64, p: f64, q: f64) -> Result<Self, ParamError> {
        if !(lambda > 0.0 && lambda.is_finite() && c > 0.0 && c.is_finite()) {
            return Err(ParamError::NonPositiveRate { lambda, c });
        }
        if !(p >= 0.0 && q >= 0.0 && p + q <= 1.0) || !p.is_finite() || !q.is_finite() {
            return Err(ParamError::InvalidProbability { p, q });
        }
        Ok(Self { lambda, c, p, q })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Probability of a reflection at a switch event.
    pub fn reflect_prob(&self) -> f64 {
        1.0 - self.p - self.q
    }

    /// The motion never reverses direction (every event is a +-90 degree turn).
    pub fn is_reflection_free(&self) -> bool {
        self.p + self.q == 1.0
    }
}

/// One of the four headings d_j = (cos(pi j / 2), sin(pi j / 2)), j = 0..3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Direction(u8);

impl Direction {
    pub fn from_index(j: u8) -> Self {
        Direction(j & 3)
    }

    pub fn index(self) -> u8 {
        self.0
    }

    /// Unit displacement per unit time, exact in {-1, 0, 1}.
    pub fn step(self) -> (f64, f64) {
        match self.0 {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        }
    }

    pub fn is_vertical(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn turned(self, kind: TurnKind) -> Direction {
        let shift = match kind {
            TurnKind::Ccw => 1,
            TurnKind::Cw => 3,
            TurnKind::Reflect => 2,
        };
        Direction((self.0 + shift) & 3)
    }
}

/// Outcome of a switch event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TurnKind {
    Ccw,
    Cw,
    Reflect,
}

/// Maps a uniform draw u in [0, 1) to a turn: [0, p) -> Ccw,
/// [p, p+q) -> Cw, [p+q, 1) -> Reflect.
pub fn sample_turn(params: &ModelParams, u: f64) -> TurnKind {
    if u < params.p {
        TurnKind::Ccw
    } else if u < params.p + params.q {
        TurnKind::Cw
    } else {
        TurnKind::Reflect
    }
}

/// Snapshot of the moving particle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotionState {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub dir: Direction,
    pub n_events: u64,
}

/// Monotone event-history flags. Once false, a flag stays false; with zero
/// events all flags are true.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathHistory {
    only_reflections: bool,
    alternating_turns: bool,
    vertical_all_up: bool,
    first_turn: Option<TurnKind>,
    last_rotation: Option<TurnKind>,
}

impl PathHistory {
    pub fn new() -> Self {
        PathHistory {
            only_reflections: true,
            alternating_turns: true,
            vertical_all_up: true,
            first_turn: None,
            last_rotation: None,
        }
    }

    /// Every event so far was a reflection.
    pub fn only_reflections(&self) -> bool {
        self.only_reflections
    }

    /// No reflections, and rotations strictly alternate Ccw/Cw (either phase).
    pub fn alternating_turns(&self) -> bool {
        self.alternating_turns
    }

    /// Every vertical stretch of positive duration headed upward (d_1).
    pub fn vertical_all_up(&self) -> bool {
        self.vertical_all_up
    }

    pub fn first_turn(&self) -> Option<TurnKind> {
        self.first_turn
    }

    pub(crate) fn record_turn(&mut self, kind: TurnKind) {
        match kind {
            TurnKind::Reflect => {
                self.alternating_turns = false;
            }
            rot => {
                self.only_reflections = false;
                if self.last_rotation == Some(rot) {
                    self.alternating_turns = false;
                }
                self.last_rotation = Some(rot);
            }
        }
        if self.first_turn.is_none() {
            self.first_turn = Some(kind);
        }
    }

    pub(crate) fn record_segment(&mut self, dir: Direction, dt: f64) {
        if dt > 0.0 && dir.index() == 3 {
            self.vertical_all_up = false;
        }
    }
}

impl Default for PathHistory {
    fn default() -> Self {
        Self::new()
    }
}

/// The axis a diagonal-interior path lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    Horizontal,
    Vertical,
}

/// Where the particle sits inside the support square at time t, decided by
/// event history alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegionClass {
    /// No events: the particle sits at c·t·d_j for its initial heading.
    Vertex { dir: Direction },
    /// Alternating rotations: strictly inside the boundary side whose
    /// endpoints are c·t·d_side and c·t·d_(side+1).
    SideInterior { side: u8 },
    /// Only reflections: strictly inside a coordinate-axis diagonal.
    DiagonalInterior { axis: Axis },
    Interior,
}
