//! Solvers for the measure-driven frame system `DG = -G DOmega`.

mod config;
mod continuous;
mod frame;
mod jumps;
mod ladder;
mod oracle;
mod planar;
mod residual;

pub use config::SolverConfig;
pub use continuous::solve_continuous;
pub use frame::{FramePath, JumpRecord};
pub use jumps::{jump_step, solve_bv, JumpRotation};
pub use ladder::{solve_bv_general, TruncationLevel};
pub use oracle::solve_mollified_oracle;
pub use planar::solve_2d;
pub use residual::{residual_check, ResidualReport};
