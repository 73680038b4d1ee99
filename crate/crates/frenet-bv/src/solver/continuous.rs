//! Structure-preserving integrator for continuous data.
//!
//! Each step advances `G_{i+1} = G_i exp(-(Omega(s_{i+1}) - Omega(s_i)))`.
//! The step is exact whenever the datum increments commute on the step
//! (planar data, and any segment where `Omega` moves along a fixed skew
//! direction); otherwise the local defect is quadratic in the increment,
//! which the step-size cap keeps small.

use nalgebra::DMatrix;

use crate::bvmeasure::{Side, SkewPath};
use crate::error::{Error, Result};
use crate::liegroup::{exp_skew, RotationMatrix, SkewMatrix};
use crate::solver::config::SolverConfig;
use crate::solver::frame::FramePath;

/// Solves `DG = -G DOmega`, `G(0) = initial`, for a jump-free datum in any
/// dimension `n >= 2`.
pub fn solve_continuous(
    omega: &SkewPath,
    initial: &RotationMatrix,
    cfg: &SolverConfig,
) -> Result<FramePath> {
    cfg.validate()?;
    if !omega.jumps().is_empty() {
        return Err(Error::BadJumpList(
            "solve_continuous requires a jump-free datum".into(),
        ));
    }
    if initial.dim() != omega.dimension() {
        return Err(Error::Dimension {
            expected: omega.dimension(),
            got: initial.dim(),
        });
    }
    let nodes = omega.solver_nodes(cfg.base_grid);
    let mut grid = Vec::with_capacity(nodes.len());
    let mut frames = Vec::with_capacity(nodes.len());
    grid.push(nodes[0]);
    frames.push(initial.clone());
    let end = walk_segment(
        omega,
        &nodes,
        initial.clone(),
        cfg,
        &mut grid,
        &mut frames,
    )?;
    debug_assert_eq!(end.dim(), omega.dimension());
    Ok(FramePath::new(
        omega.dimension(),
        grid,
        frames,
        Vec::new(),
        initial.clone(),
    ))
}

/// Advances the frame across `nodes` (continuous data in the interior),
/// appending one sample per node after the first. The frame at `nodes[0]`
/// must already be the last entry of `frames`. Returns the final frame.
///
/// `Omega` is evaluated from the right at the first node and from the left
/// at the last, so segment boundaries sitting on jump locations pick the
/// correct one-sided values.
pub(crate) fn walk_segment(
    omega: &SkewPath,
    nodes: &[f64],
    start: RotationMatrix,
    cfg: &SolverConfig,
    grid: &mut Vec<f64>,
    frames: &mut Vec<RotationMatrix>,
) -> Result<RotationMatrix> {
    let side_of = |i: usize| -> Side {
        if i == 0 {
            Side::Plus
        } else if i + 1 == nodes.len() {
            Side::Minus
        } else {
            Side::Plus
        }
    };
    let mut g = start;
    let mut value_prev = omega.value_side(nodes[0], side_of(0));
    for i in 1..nodes.len() {
        let value_next = omega.value_side(nodes[i], side_of(i));
        let increment = &value_next - &value_prev;
        let norm = increment.norm();
        let substeps = (norm / cfg.max_step_increment).ceil().max(1.0) as usize;
        if substeps == 1 {
            g = advance(&g, increment);
        } else {
            // refine inside the interval; the datum is continuous here
            let mut v0 = value_prev.clone();
            for k in 1..=substeps {
                let t = nodes[i - 1] + (nodes[i] - nodes[i - 1]) * k as f64 / substeps as f64;
                let v1 = if k == substeps {
                    value_next.clone()
                } else {
                    omega.value_side(t, Side::Plus)
                };
                g = advance(&g, &v1 - &v0);
                v0 = v1;
            }
        }
        grid.push(nodes[i]);
        frames.push(g.clone());
        value_prev = value_next;
    }
    Ok(g)
}

fn advance(g: &RotationMatrix, increment: DMatrix<f64>) -> RotationMatrix {
    let step = exp_skew(&SkewMatrix::new(-increment).expect("datum increment is skew"));
    g.compose(&step)
}
