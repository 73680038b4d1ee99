//! Mollified-data oracle: replaces the datum by its box average and
//! integrates the resulting smooth system at substep resolution. Used to
//! cross-check the jump solver by regularization.

use crate::bvmeasure::SkewPath;
use crate::error::Result;
use crate::liegroup::RotationMatrix;
use crate::solver::config::SolverConfig;
use crate::solver::continuous::solve_continuous;
use crate::solver::frame::FramePath;

pub fn solve_mollified_oracle(
    omega: &SkewPath,
    eps: f64,
    initial: &RotationMatrix,
    cfg: &SolverConfig,
) -> Result<FramePath> {
    cfg.validate()?;
    let mollified = omega.mollify(eps)?;
    let refined = SolverConfig {
        base_grid: cfg.base_grid * cfg.oracle_substeps,
        ..cfg.clone()
    };
    solve_continuous(&mollified, initial, &refined)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bvmeasure::{BVScalar, Jump};
    use crate::liegroup::{rodrigues_exp, AxisAngle};
    use crate::solver::config::SolverConfig;
    use nalgebra::{DMatrix, Vector3};

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

    fn frame_at(path: &FramePath, s: f64) -> DMatrix<f64> {
        let i = path
            .grid()
            .iter()
            .position(|x| (*x - s).abs() < 1e-12)
            .unwrap_or_else(|| panic!("no grid node at {s}"));
        path.frame(i).matrix().clone()
    }

    #[test]
    fn band_boundary_matrices_match_closed_form() {
        // Left-normalized at the jump, the oracle frames at s0 ± eps are
        // R(±lambda_eps, w_eps) with
        //   lambda = sqrt((2 eps + d)^2 + tau^2) / 2,
        //   w = (tau, 0, 2 eps + d) normalized.
        let (d, tau) = (1.0, 1.0);
        let eps = 0.125;
        let omega = case_study(d, tau);
        let path = solve_mollified_oracle(
            &omega,
            eps,
            &RotationMatrix::identity(3),
            &SolverConfig::default().with_grid(512),
        )
        .unwrap();
        assert!(path.max_orthogonality_defect() <= 1e-10);
        let center = frame_at(&path, 1.0);
        let lambda = ((2.0 * eps + d).powi(2) + tau * tau).sqrt() / 2.0;
        let w = Vector3::new(tau, 0.0, 2.0 * eps + d).normalize();
        for sign in [-1.0, 1.0] {
            let got = center.transpose() * frame_at(&path, 1.0 + sign * eps);
            let expected = rodrigues_exp(&AxisAngle::new(w, sign * lambda).unwrap()).unwrap();
            assert!(
                (got - expected.matrix()).norm() < 1e-11,
                "side {sign}"
            );
        }
        // k_eps, tau_eps as the axis components against the printed scalars
        let k_eps = (2.0 * eps + d) / (2.0 * lambda);
        let tau_eps = tau / (2.0 * lambda);
        assert!((w.z - k_eps).abs() < 1e-15);
        assert!((w.x - tau_eps).abs() < 1e-15);
    }

    #[test]
    fn smooth_data_oracle_converges_to_direct_solve() {
        // jump-free smooth datum: the mollified solve approaches the direct
        // solve as eps shrinks
        let l = 2.0;
        let n = 2048;
        let theta_vals: Vec<f64> = (0..=n)
            .map(|i| {
                let s = l * i as f64 / n as f64;
                s + 0.2 * (1.5 * s).sin()
            })
            .collect();
        let phi_vals: Vec<f64> = (0..=n)
            .map(|i| {
                let s = l * i as f64 / n as f64;
                0.3 * s + 0.1 * (2.0 * s).cos()
            })
            .collect();
        let theta = BVScalar::from_samples(l, theta_vals, true).unwrap();
        let phi = BVScalar::from_samples(l, phi_vals, false).unwrap();
        let omega = SkewPath::spatial(theta, phi).unwrap();
        let cfg = SolverConfig::default().with_grid(512);
        let direct = solve_continuous(&omega, &RotationMatrix::identity(3), &cfg).unwrap();
        let mut errors = Vec::new();
        for eps in [0.08, 0.04, 0.02] {
            let oracle =
                solve_mollified_oracle(&omega, eps, &RotationMatrix::identity(3), &cfg).unwrap();
            // compare at shared s values
            let mut worst = 0.0f64;
            for i in (0..direct.len()).step_by(23) {
                let s = direct.s(i);
                if let Some(j) = oracle
                    .grid()
                    .iter()
                    .position(|x| (*x - s).abs() < 1e-12)
                {
                    worst = worst
                        .max((direct.frame(i).matrix() - oracle.frame(j).matrix()).norm());
                }
            }
            errors.push(worst);
        }
        assert!(errors[0] > errors[1] && errors[1] > errors[2], "{errors:?}");
    }
}
