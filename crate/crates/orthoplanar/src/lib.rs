//! Planar random motion with four orthogonal directions.
//!
//! A particle moves at constant speed `c` along one of the unit directions
//! `(1,0), (0,1), (-1,0), (0,-1)`. At the epochs of a rate-`lambda` Poisson
//! process it rotates counterclockwise with probability `p`, clockwise with
//! probability `q`, or reverses with probability `1 - p - q`. The crate
//! provides an exact path simulator, the closed-form laws of the position,
//! of the boundary and diagonal singular components, of the vertical
//! occupation time, and of the hydrodynamic (Gaussian) limit, together with
//! the machinery to cross-verify every closed form against quadrature,
//! Fourier inversion, PDEs, and Monte Carlo.

pub mod analytic;
pub mod bessel;
pub mod mc;
pub mod model;
pub mod quad;
pub mod sim;
pub mod verify;

pub use analytic::{AnalyticError, JointHydroLimit};
pub use mc::{Histogram, McEstimate, SampleMoments};
pub use verify::{CheckResult, HydroMode, VerifyError, VerifyReport};
pub use model::{
    Axis, Direction, ModelParams, MotionState, ParamError, PathHistory, RegionClass, TurnKind,
};
pub use sim::{simulate, simulate_with_trajectory, Breakpoint, SimOutcome, Trajectory};
