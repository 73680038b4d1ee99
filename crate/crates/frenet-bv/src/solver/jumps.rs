//! Jump handling and the solver for data with finitely many jumps.
//!
//! At a jump with theta/phi increments `(d, tau)` the frame turns by the
//! rotation of angle `2a = sqrt(d^2 + tau^2)` about the axis oriented by
//! `G(s-) v`, `v = (tau, 0, d) / 2a`. Equivalently `G(s+) = G(s-) R(2a, v)`,
//! so the relative rotation `A = G(s-)^T G(s+)` is `R(2a, v)` and its
//! atomic skew part reproduces the sinc-weighted jump of the datum.

use nalgebra::Vector3;

use crate::bvmeasure::{SkewPath, JUMP_CAP_MARGIN};
use crate::error::{Error, Result};
use crate::liegroup::{rodrigues_exp, AxisAngle, RotationMatrix};
use crate::solver::config::SolverConfig;
use crate::solver::continuous::{solve_continuous, walk_segment};
use crate::solver::frame::{FramePath, JumpRecord};

/// Outcome of a single jump: the new frame and the rotation data.
#[derive(Debug, Clone)]
pub struct JumpRotation {
    /// Rotation angle `sqrt(d^2 + tau^2)`.
    pub angle: f64,
    /// Axis in body coordinates, `(tau, 0, d)` normalized.
    pub axis_body: Vector3<f64>,
    /// Axis in world coordinates, `G(s-) axis_body`.
    pub axis_world: Vector3<f64>,
    /// Left factor: `g_plus = rotation * g_minus`.
    pub rotation: RotationMatrix,
}

/// Applies one jump to the frame `g_minus`. Requires
/// `0 < sqrt(d^2 + tau^2) < pi - 1e-9`.
pub fn jump_step(
    g_minus: &RotationMatrix,
    d: f64,
    tau: f64,
) -> Result<(RotationMatrix, JumpRotation)> {
    let angle = d.hypot(tau);
    let cap = std::f64::consts::PI - JUMP_CAP_MARGIN;
    if !(angle > 0.0 && angle < cap) {
        return Err(Error::JumpTooLarge {
            location: f64::NAN,
            magnitude: angle,
        });
    }
    if g_minus.dim() != 3 {
        return Err(Error::Dimension {
            expected: 3,
            got: g_minus.dim(),
        });
    }
    let axis_body = Vector3::new(tau / angle, 0.0, d / angle);
    let world = {
        let c = g_minus.matrix() * axis_body;
        Vector3::new(c[(0, 0)], c[(1, 0)], c[(2, 0)]).normalize()
    };
    let rotation = rodrigues_exp(&AxisAngle::new(world, angle)?)?;
    let g_plus = rotation.compose(g_minus);
    Ok((
        g_plus,
        JumpRotation {
            angle,
            axis_body,
            axis_world: world,
            rotation,
        },
    ))
}

/// Solves `DG = -(G^T)^-1 (diffuse + atomic)` for a 3D datum with finitely
/// many jumps: continuous segments glued by [`jump_step`] at each jump.
/// A jump-free datum falls through to [`solve_continuous`].
pub fn solve_bv(
    omega: &SkewPath,
    initial: &RotationMatrix,
    cfg: &SolverConfig,
) -> Result<FramePath> {
    cfg.validate()?;
    let jumps = omega.jumps();
    if jumps.is_empty() {
        return solve_continuous(omega, initial, cfg);
    }
    if omega.dimension() != 3 {
        return Err(Error::Dimension {
            expected: 3,
            got: omega.dimension(),
        });
    }
    if initial.dim() != 3 {
        return Err(Error::Dimension {
            expected: 3,
            got: initial.dim(),
        });
    }
    let report = omega.validate_jumps();
    if !report.pass() {
        return Err(Error::JumpValidation {
            violations: report.violations(),
            total: report.checks.len(),
        });
    }

    let nodes = omega.solver_nodes(cfg.base_grid);
    let mut grid: Vec<f64> = Vec::with_capacity(nodes.len() + jumps.len());
    let mut frames: Vec<RotationMatrix> = Vec::with_capacity(nodes.len() + jumps.len());
    let mut records: Vec<JumpRecord> = Vec::with_capacity(jumps.len());

    grid.push(nodes[0]);
    frames.push(initial.clone());
    let mut g = initial.clone();
    let mut lo = 0usize;
    for atom in &jumps {
        let hi = nodes
            .iter()
            .position(|s| *s == atom.location)
            .expect("jump locations are solver nodes");
        g = walk_segment(omega, &nodes[lo..=hi], g, cfg, &mut grid, &mut frames)?;
        let g_minus = g.clone();
        let (g_plus, rot) = jump_step(&g_minus, atom.d_theta, atom.d_phi).map_err(|e| {
            match e {
                Error::JumpTooLarge { magnitude, .. } => Error::JumpTooLarge {
                    location: atom.location,
                    magnitude,
                },
                other => other,
            }
        })?;
        let index_minus = grid.len() - 1;
        grid.push(atom.location);
        frames.push(g_plus.clone());
        records.push(JumpRecord {
            location: atom.location,
            index_minus,
            d_theta: atom.d_theta,
            d_phi: atom.d_phi,
            angle: rot.angle,
            axis: rot.axis_world,
            rotation: rot.rotation,
            frame_minus: g_minus,
            frame_plus: g_plus.clone(),
        });
        g = g_plus;
        lo = hi;
    }
    walk_segment(
        omega,
        &nodes[lo..],
        g,
        cfg,
        &mut grid,
        &mut frames,
    )?;
    Ok(FramePath::new(3, grid, frames, records, initial.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bvmeasure::{BVScalar, Jump};
    use crate::liegroup::{atomic_skew, generator, log_rotation};
    use nalgebra::DMatrix;

    fn case_study(d: f64, tau: f64) -> SkewPath {
        let theta = BVScalar::affine(
            2.0,
            1.0,
            -1.0,
            vec![Jump { location: 1.0, value: d }],
            true,
        )
        .unwrap();
        let phi = BVScalar::affine(
            2.0,
            0.0,
            0.0,
            vec![Jump { location: 1.0, value: tau }],
            false,
        )
        .unwrap();
        SkewPath::spatial(theta, phi).unwrap()
    }

    /// One-sided frames of the one-jump datum anchored at the jump:
    /// `G(s0±) = R(±a, u)` with `a = sqrt(d^2+tau^2)/2`, `u = (tau,0,d)/2a`.
    fn closed_form_sides(d: f64, tau: f64) -> (RotationMatrix, RotationMatrix) {
        let two_a = d.hypot(tau);
        let u = Vector3::new(tau / two_a, 0.0, d / two_a);
        let minus = rodrigues_exp(&AxisAngle::new(u, -two_a / 2.0).unwrap()).unwrap();
        let plus = rodrigues_exp(&AxisAngle::new(u, two_a / 2.0).unwrap()).unwrap();
        (minus, plus)
    }

    #[test]
    fn jump_step_pure_curvature() {
        // tau = 0: frames on either side of the jump anchored at the jump
        // have the cos(d/2), ±sin(d/2) planar form
        let d = 1.2;
        let (minus, plus) = closed_form_sides(d, 0.0);
        let (stepped, rot) = jump_step(&minus, d, 0.0).unwrap();
        assert!((stepped.matrix() - plus.matrix()).norm() < 1e-14);
        assert!((rot.angle - d).abs() < 1e-15);
        let m = minus.matrix();
        assert!((m[(0, 0)] - (d / 2.0).cos()).abs() < 1e-14);
        assert!((m[(0, 1)] - (d / 2.0).sin()).abs() < 1e-14);
        assert!((m[(1, 0)] + (d / 2.0).sin()).abs() < 1e-14);
        assert!((m[(2, 2)] - 1.0).abs() < 1e-14);
        let p = plus.matrix();
        assert!((p[(0, 1)] + (d / 2.0).sin()).abs() < 1e-14);
        assert!((p[(1, 0)] - (d / 2.0).sin()).abs() < 1e-14);
    }

    #[test]
    fn jump_step_pure_torsion() {
        // d = 0: lower-right block carries cos(tau/2), ±sin(tau/2) and the
        // tangent does not move
        let tau = 0.9;
        let (minus, plus) = closed_form_sides(0.0, tau);
        let (stepped, _) = jump_step(&minus, 0.0, tau).unwrap();
        assert!((stepped.matrix() - plus.matrix()).norm() < 1e-14);
        let m = minus.matrix();
        assert!((m[(0, 0)] - 1.0).abs() < 1e-14);
        assert!((m[(1, 1)] - (tau / 2.0).cos()).abs() < 1e-14);
        assert!((m[(1, 2)] - (tau / 2.0).sin()).abs() < 1e-14);
        assert!((m[(2, 1)] + (tau / 2.0).sin()).abs() < 1e-14);
        let t_minus = minus.column(0);
        let t_plus = plus.column(0);
        assert!((t_minus - t_plus).norm() < 1e-14);
    }

    #[test]
    fn jump_step_unit_pair_from_identity() {
        // (d, tau) = (1, 1) from the identity: A = R(sqrt(2), (1,0,1)/sqrt(2))
        let (g_plus, rot) = jump_step(&RotationMatrix::identity(3), 1.0, 1.0).unwrap();
        let a = g_plus.clone(); // A = G(-)^T G(+) = G(+) here
        let ax = log_rotation(&a).unwrap();
        assert!((ax.angle() - 2.0f64.sqrt()).abs() < 1e-12);
        let expected_axis = Vector3::new(1.0, 0.0, 1.0) / 2.0f64.sqrt();
        assert!((ax.axis() - expected_axis).norm() < 1e-12);
        assert!((rot.angle - 2.0f64.sqrt()).abs() < 1e-15);
        // angle between the one-sided tangents
        let t_minus = Vector3::new(1.0, 0.0, 0.0);
        let c = g_plus.column(0);
        let cosang = t_minus.dot(&Vector3::new(c[0], c[1], c[2]));
        let expected = (1.0 + 2.0f64.sqrt().cos()) / 2.0;
        assert!((cosang - expected).abs() < 1e-12);
        assert!((cosang.acos() - 0.9545551383383561).abs() < 1e-12);
    }

    #[test]
    fn jump_step_rejects_large_jumps() {
        let init = RotationMatrix::identity(3);
        assert!(jump_step(&init, 3.0, 1.5).is_err());
        assert!(jump_step(&init, std::f64::consts::PI, 0.0).is_err());
        assert!(jump_step(&init, 0.0, 0.0).is_err());
        assert!(jump_step(&init, std::f64::consts::PI - 1e-6, 0.0).is_ok());
    }

    #[test]
    fn solve_bv_without_jumps_is_bitwise_continuous() {
        let theta = BVScalar::affine(2.0, 1.0, 0.0, vec![], true).unwrap();
        let phi = BVScalar::affine(2.0, 0.4, 0.0, vec![], false).unwrap();
        let omega = SkewPath::spatial(theta, phi).unwrap();
        let cfg = SolverConfig::default().with_grid(256);
        let init = RotationMatrix::identity(3);
        let a = solve_bv(&omega, &init, &cfg).unwrap();
        let b = solve_continuous(&omega, &init, &cfg).unwrap();
        assert_eq!(a.grid(), b.grid());
        for i in 0..a.len() {
            assert_eq!(a.frame(i).matrix(), b.frame(i).matrix());
        }
    }

    #[test]
    fn case_study_jump_frames_match_closed_forms() {
        // anchoring the initial frame at G(0-) R(-1, e3) reproduces the
        // one-jump closed forms at the jump exactly
        let (d, tau) = (1.0, 1.0);
        let (minus, plus) = closed_form_sides(d, tau);
        let pre = rodrigues_exp(
            &AxisAngle::new(Vector3::new(0.0, 0.0, 1.0), -1.0).unwrap(),
        )
        .unwrap();
        let initial = minus.compose(&pre);
        let omega = case_study(d, tau);
        let path = solve_bv(&omega, &initial, &SolverConfig::default().with_grid(512)).unwrap();
        let rec = &path.jump_records()[0];
        assert!((rec.frame_minus.matrix() - minus.matrix()).norm() < 1e-12);
        assert!((rec.frame_plus.matrix() - plus.matrix()).norm() < 1e-12);
        // after the jump the frame is G(0+) times a planar rotation
        let s_end = path.s(path.len() - 1);
        let tail = rodrigues_exp(
            &AxisAngle::new(Vector3::new(0.0, 0.0, 1.0), s_end - 1.0).unwrap(),
        )
        .unwrap();
        let expected_end = plus.compose(&tail);
        assert!(
            (path.frame(path.len() - 1).matrix() - expected_end.matrix()).norm() < 1e-11
        );
    }

    #[test]
    fn stored_relative_rotation_reproduces_atoms() {
        // every stored A(s_k) = G(-)^T G(+) must reproduce the sinc-weighted
        // atom through the atomic skew part
        let theta = BVScalar::affine(
            2.0,
            1.0,
            0.0,
            vec![
                Jump { location: 0.5, value: 0.5 },
                Jump { location: 1.5, value: 0.3 },
            ],
            true,
        )
        .unwrap();
        let phi = BVScalar::affine(
            2.0,
            0.0,
            0.0,
            vec![
                Jump { location: 1.0, value: 0.5 },
                Jump { location: 1.5, value: 0.4 },
            ],
            false,
        )
        .unwrap();
        let omega = SkewPath::spatial(theta, phi).unwrap();
        let path = solve_bv(
            &omega,
            &RotationMatrix::identity(3),
            &SolverConfig::default().with_grid(512),
        )
        .unwrap();
        assert_eq!(path.jump_records().len(), 3);
        for rec in path.jump_records() {
            let a = RotationMatrix::new(
                rec.frame_minus.matrix().transpose() * rec.frame_plus.matrix(),
            )
            .unwrap();
            let atom = atomic_skew(&a);
            let two_a = rec.d_theta.hypot(rec.d_phi);
            let sinc = two_a.sin() / two_a;
            let expected = -(generator(3).unwrap().matrix() * (rec.d_theta * sinc)
                + generator(1).unwrap().matrix() * (rec.d_phi * sinc));
            assert!((atom.matrix() - &expected).norm() < 1e-10);
            // the jump consistency invariant: log of A recovers angle/axis
            let ax = log_rotation(&a).unwrap();
            assert!((ax.angle() - two_a).abs() < 1e-10);
            let v = Vector3::new(rec.d_phi / two_a, 0.0, rec.d_theta / two_a);
            assert!((ax.axis() - v).norm() < 1e-10);
            // G(+) = rotation * G(-) exactly as stored
            let recomposed = rec.rotation.compose(&rec.frame_minus);
            assert_eq!(recomposed.matrix(), rec.frame_plus.matrix());
        }
    }

    #[test]
    fn solve_bv_rejects_inadmissible_jumps() {
        let omega = case_study(3.0, 1.5);
        assert!(matches!(
            solve_bv(
                &omega,
                &RotationMatrix::identity(3),
                &SolverConfig::default().with_grid(64)
            ),
            Err(Error::JumpValidation { .. })
        ));
    }

    #[test]
    fn initial_frame_left_composes() {
        // solving with initial Q equals Q times the identity-initial solution
        let omega = case_study(0.8, 0.3);
        let cfg = SolverConfig::default().with_grid(256);
        let q = rodrigues_exp(
            &AxisAngle::new(Vector3::new(1.0, 2.0, -1.0).normalize(), 0.7).unwrap(),
        )
        .unwrap();
        let base = solve_bv(&omega, &RotationMatrix::identity(3), &cfg).unwrap();
        let shifted = solve_bv(&omega, &q, &cfg).unwrap();
        assert_eq!(shifted.frame(0).matrix(), q.matrix());
        for i in (0..base.len()).step_by(41) {
            let expected = q.compose(base.frame(i));
            assert!((shifted.frame(i).matrix() - expected.matrix()).norm() < 1e-12);
        }
    }

    #[test]
    fn left_representative_formulation_is_inconsistent() {
        // Writing the jump equation with the left-continuous representative
        // and M = 2 (A^T + I)^-1 forces a non-skew atom on the right-hand
        // side; the mismatch below is what rules that formulation out.
        let d = 1.0f64;
        let lhs = DMatrix::from_row_slice(2, 2, &[0.0, d.sin(), -d.sin(), 0.0]);
        let lam = d.sin() / (1.0 + d.cos());
        let m = DMatrix::from_row_slice(2, 2, &[1.0, -lam, lam, 1.0]);
        let jump = DMatrix::from_row_slice(2, 2, &[0.0, -d, d, 0.0]);
        let rhs = m * jump;
        // the right-hand side is not even skew-symmetric
        assert!(rhs[(0, 0)].abs() > 0.5);
        assert!((&rhs + &rhs.transpose()).norm() > 1.0);
        assert!((lhs - rhs).norm() > 1.0);
    }
}
