//! Closed-form planar solver: `G(s)` is the rotation by `theta(s) - theta(0)`
//! applied to the initial frame, with a rotation by the jump value at each
//! jump. Admissible jumps lie in (0, pi).

use nalgebra::Vector3;

use crate::bvmeasure::{BVScalar, Side};
use crate::error::{Error, Result};
use crate::liegroup::RotationMatrix;
use crate::solver::config::SolverConfig;
use crate::solver::frame::{FramePath, JumpRecord};

pub fn solve_2d(
    theta: &BVScalar,
    initial: &RotationMatrix,
    cfg: &SolverConfig,
) -> Result<FramePath> {
    cfg.validate()?;
    if initial.dim() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            got: initial.dim(),
        });
    }
    if !theta.monotone() {
        return Err(Error::NotIncreasing(
            "solve_2d requires a strictly increasing theta".into(),
        ));
    }
    for j in theta.jumps() {
        if !(j.value > 0.0 && j.value < std::f64::consts::PI) {
            return Err(Error::JumpTooLarge {
                location: j.location,
                magnitude: j.value,
            });
        }
    }

    let length = theta.length();
    let mut nodes: Vec<f64> = (0..=cfg.base_grid)
        .map(|i| i as f64 * length / cfg.base_grid as f64)
        .chain(theta.breakpoints().iter().copied())
        .collect();
    nodes.sort_by(f64::total_cmp);
    nodes.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * length.max(1.0));

    let theta0 = theta.value_right(0.0);
    let frame_at = |s: f64, side: Side| -> RotationMatrix {
        RotationMatrix::planar(theta.value_side(s, side) - theta0).compose(initial)
    };

    let mut grid = Vec::with_capacity(nodes.len() + theta.jumps().len());
    let mut frames = Vec::with_capacity(grid.capacity());
    let mut records = Vec::with_capacity(theta.jumps().len());
    for s in nodes {
        let is_jump = theta.jumps().iter().any(|j| j.location == s);
        if is_jump {
            let d = theta
                .jumps()
                .iter()
                .find(|j| j.location == s)
                .unwrap()
                .value;
            let minus = frame_at(s, Side::Minus);
            let plus = frame_at(s, Side::Plus);
            let index_minus = grid.len();
            grid.push(s);
            frames.push(minus.clone());
            grid.push(s);
            frames.push(plus.clone());
            records.push(JumpRecord {
                location: s,
                index_minus,
                d_theta: d,
                d_phi: 0.0,
                angle: d,
                axis: Vector3::new(0.0, 0.0, 1.0),
                rotation: RotationMatrix::planar(d),
                frame_minus: minus,
                frame_plus: plus,
            });
        } else {
            grid.push(s);
            frames.push(frame_at(s, Side::Plus));
        }
    }
    Ok(FramePath::new(2, grid, frames, records, initial.clone()))
}
