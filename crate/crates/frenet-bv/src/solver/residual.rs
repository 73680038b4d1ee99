//! Integral-equation residual: verifies a computed frame path against
//! `G(s) - Gbar + ∫ (G^T)^-1 dOmega_diffuse + Σ (G(s_k)^T)^-1 atom_k = 0`,
//! with the precise representative (and its inverse transpose) at jumps and
//! the atomic skew part `(A^T - A)/2` as the atom.
//!
//! Quadrature: Simpson in Stieltjes form over pairs of equal-width steps
//! (exact through fourth order when the datum moves along a fixed skew
//! direction), trapezoid on leftover unequal steps.

use nalgebra::DMatrix;

use crate::bvmeasure::{Side, SkewPath};
use crate::error::{Error, Result};
use crate::liegroup::atomic_skew;
use crate::liegroup::RotationMatrix;
use crate::solver::frame::FramePath;

/// Result of [`residual_check`]: the largest entrywise residual and where
/// it occurred.
#[derive(Debug, Clone, Copy)]
pub struct ResidualReport {
    pub max_residual: f64,
    pub at_s: f64,
    pub nodes_checked: usize,
}

pub fn residual_check(path: &FramePath, omega: &SkewPath) -> Result<ResidualReport> {
    if path.dimension() != omega.dimension() {
        return Err(Error::Dimension {
            expected: omega.dimension(),
            got: path.dimension(),
        });
    }
    if path.is_empty() {
        return Err(Error::EmptyCurve);
    }
    let n = path.dimension();
    let initial = path.initial().matrix().clone();
    let mut accumulated = DMatrix::<f64>::zeros(n, n);
    let mut report = ResidualReport {
        max_residual: 0.0,
        at_s: 0.0,
        nodes_checked: 0,
    };

    let check = |idx: usize, acc: &DMatrix<f64>, report: &mut ResidualReport| {
        let residual = path.frame(idx).matrix() - &initial + acc;
        let worst = residual.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if worst > report.max_residual {
            report.max_residual = worst;
            report.at_s = path.s(idx);
        }
        report.nodes_checked += 1;
    };
    check(0, &accumulated, &mut report);

    // segment runs split by the stored jump pairs
    let mut boundaries: Vec<usize> = vec![0];
    for rec in path.jump_records() {
        boundaries.push(rec.index_minus);
    }
    boundaries.push(path.len() - 1);

    let omega_at = |idx: usize, run_start: usize, run_end: usize| -> DMatrix<f64> {
        let side = if idx == run_end && path.is_jump_node(idx) {
            Side::Minus
        } else if idx == run_start {
            Side::Plus
        } else {
            Side::Plus
        };
        omega.value_side(path.s(idx), side)
    };

    for (seg, w) in boundaries.windows(2).enumerate() {
        // a run starts at the plus node of the previous jump
        let run_start = if seg == 0 { w[0] } else { w[0] + 1 };
        let run_end = w[1];
        let mut i = run_start;
        while i < run_end {
            let h1 = path.s(i + 1) - path.s(i);
            let paired = i + 2 <= run_end && {
                let h2 = path.s(i + 2) - path.s(i + 1);
                (h1 - h2).abs() <= 1e-9 * h1.max(h2)
            };
            if paired {
                let delta =
                    omega_at(i + 2, run_start, run_end) - omega_at(i, run_start, run_end);
                let weights = path.frame(i).matrix()
                    + path.frame(i + 1).matrix() * 4.0
                    + path.frame(i + 2).matrix();
                accumulated += (weights / 6.0) * delta;
                i += 2;
            } else {
                let delta =
                    omega_at(i + 1, run_start, run_end) - omega_at(i, run_start, run_end);
                let weights = (path.frame(i).matrix() + path.frame(i + 1).matrix()) / 2.0;
                accumulated += weights * delta;
                i += 1;
            }
            check(i, &accumulated, &mut report);
        }
        // apply the atom of the jump that ends this run
        let _ = seg;
        if let Some(rec) = path
            .jump_records()
            .iter()
            .find(|r| r.index_minus == run_end)
        {
            let a = rec.frame_minus.matrix().transpose() * rec.frame_plus.matrix();
            let atom = atomic_skew(&RotationMatrix::new(a).map_err(|_| {
                Error::Numerical("stored jump frames are not rotations".into())
            })?);
            let precise = (rec.frame_minus.matrix() + rec.frame_plus.matrix()) / 2.0;
            let inv_t = precise
                .transpose()
                .lu()
                .try_inverse()
                .ok_or_else(|| {
                    Error::Numerical("precise representative is singular at a jump".into())
                })?;
            accumulated += inv_t * atom.matrix();
            check(run_end + 1, &accumulated, &mut report);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bvmeasure::{BVScalar, Jump};
    use crate::solver::config::SolverConfig;
    use crate::solver::jumps::solve_bv;

    fn helix(grid: usize) -> (SkewPath, FramePath) {
        let l = 4.0 * std::f64::consts::PI;
        let theta = BVScalar::affine(l, 1.0, 0.0, vec![], true).unwrap();
        let phi = BVScalar::affine(l, 0.5, 0.0, vec![], false).unwrap();
        let omega = SkewPath::spatial(theta, phi).unwrap();
        let path = solve_bv(
            &omega,
            &RotationMatrix::identity(3),
            &SolverConfig::default().with_grid(grid),
        )
        .unwrap();
        (omega, path)
    }

    #[test]
    fn zero_data_zero_residual() {
        let theta = BVScalar::affine(1.0, 0.0, 0.0, vec![], false).unwrap();
        let phi = BVScalar::affine(1.0, 0.0, 0.0, vec![], false).unwrap();
        let omega = SkewPath::spatial(theta, phi).unwrap();
        let path = solve_bv(
            &omega,
            &RotationMatrix::identity(3),
            &SolverConfig::default().with_grid(64),
        )
        .unwrap();
        let report = residual_check(&path, &omega).unwrap();
        assert_eq!(report.max_residual, 0.0);
    }

    #[test]
    fn helix_residual_small_and_second_order() {
        let mut residuals = Vec::new();
        for grid in [256, 512, 1024] {
            let (omega, path) = helix(grid);
            let report = residual_check(&path, &omega).unwrap();
            residuals.push(report.max_residual);
        }
        let order1 = (residuals[0] / residuals[1]).log2();
        let order2 = (residuals[1] / residuals[2]).log2();
        assert!(
            order1 >= 1.9 && order2 >= 1.9,
            "orders {order1:.2} {order2:.2}, residuals {residuals:?}"
        );
        let (omega, path) = helix(4096);
        let report = residual_check(&path, &omega).unwrap();
        assert!(report.max_residual <= 1e-6, "{}", report.max_residual);
    }

    #[test]
    fn case_study_residual_below_regression_threshold() {
        let theta = BVScalar::affine(
            2.0,
            1.0,
            -1.0,
            vec![Jump { location: 1.0, value: 1.0 }],
            true,
        )
        .unwrap();
        let phi = BVScalar::affine(
            2.0,
            0.0,
            0.0,
            vec![Jump { location: 1.0, value: 1.0 }],
            false,
        )
        .unwrap();
        let omega = SkewPath::spatial(theta, phi).unwrap();
        let path = solve_bv(
            &omega,
            &RotationMatrix::identity(3),
            &SolverConfig::default(),
        )
        .unwrap();
        let report = residual_check(&path, &omega).unwrap();
        assert!(report.max_residual <= 1e-6, "{}", report.max_residual);
    }
}
