use crate::error::{Error, Result};

/// Integrator settings shared by all solvers.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Number of uniform base-grid intervals.
    pub base_grid: usize,
    /// Mollification half-widths for convergence studies, strictly decreasing.
    pub eps_ladder: Vec<f64>,
    /// Frobenius tolerance for `G^T G - I` on output frames.
    pub ortho_tol: f64,
    /// Jump magnitudes must stay strictly below this (pi minus a margin).
    pub jump_angle_cap: f64,
    /// Substep multiplier for the mollified oracle.
    pub oracle_substeps: usize,
    /// Steps subdivide until the Frobenius norm of each datum increment
    /// stays below this cap.
    pub max_step_increment: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            base_grid: 4096,
            eps_ladder: vec![0.2, 0.1, 0.05, 0.025],
            ortho_tol: 1e-10,
            jump_angle_cap: std::f64::consts::PI - 1e-9,
            oracle_substeps: 4,
            max_step_increment: 1e-2,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.base_grid == 0 {
            return Err(Error::BadConfig("base grid must be positive".into()));
        }
        if self.oracle_substeps == 0 {
            return Err(Error::BadConfig("oracle substeps must be positive".into()));
        }
        for v in [self.ortho_tol, self.jump_angle_cap, self.max_step_increment] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::BadConfig(format!("non-positive tolerance {v}")));
            }
        }
        if self.eps_ladder.is_empty() {
            return Err(Error::BadConfig("empty mollification ladder".into()));
        }
        for w in self.eps_ladder.windows(2) {
            if !(w[1] < w[0]) {
                return Err(Error::BadConfig(
                    "mollification ladder must be strictly decreasing".into(),
                ));
            }
        }
        if self.eps_ladder.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
            return Err(Error::BadConfig("mollification widths must be positive".into()));
        }
        Ok(())
    }

    pub fn with_grid(mut self, base_grid: usize) -> Self {
        self.base_grid = base_grid;
        self
    }
}
