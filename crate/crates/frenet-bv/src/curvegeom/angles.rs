//! Jump angles and the closed-form curve invariants.
//!
//! A jump `(d, tau)` rotates the frame by `D = sqrt(d^2 + tau^2)` about the
//! normal-plane axis, turning the tangent and binormal by
//! `arccos((tau^2 + d^2 cos D) / D^2)` and `arccos((d^2 + tau^2 cos D) / D^2)`
//! respectively, both bounded by `D`. Total curvature adds the diffuse mass
//! of `D theta` to the tangent jump angles; total absolute torsion adds the
//! diffuse mass of `|D phi|` to the binormal jump angles.

use serde::Serialize;

use crate::bvmeasure::SkewPath;
use crate::error::{Error, Result};
use crate::solver::FramePath;

/// Total curvature / total absolute torsion summary of a solved scenario.
#[derive(Debug, Clone, Serialize)]
pub struct GeomSummary {
    pub length: f64,
    pub tc_exact: f64,
    pub tat_exact: f64,
    pub diffuse_tc_mass: f64,
    pub diffuse_tat_mass: f64,
    pub jump_tc_sum: f64,
    pub jump_tat_sum: f64,
    pub tc_polygonal: Option<f64>,
    pub tat_polygonal: Option<f64>,
}

/// Angles between the one-sided tangent, normal, and binormal at one jump.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct JumpAngleReport {
    pub location: f64,
    pub d_theta: f64,
    pub d_phi: f64,
    pub angle_t: f64,
    pub angle_n: f64,
    pub angle_b: f64,
    /// Distance of the one-sided binormals in the projective plane,
    /// reported when `d^2 + tau^2 cos D < 0`.
    pub projective_b: Option<f64>,
}

/// Angle triple `(tangent, normal, binormal)` produced by a `(d, tau)` jump
/// with `0 < sqrt(d^2 + tau^2) < pi`.
pub fn jump_angles(d: f64, tau: f64) -> Result<(f64, f64, f64)> {
    let big = d.hypot(tau);
    if !(big > 0.0 && big < std::f64::consts::PI) {
        return Err(Error::JumpTooLarge {
            location: f64::NAN,
            magnitude: big,
        });
    }
    let d2 = d * d;
    let t2 = tau * tau;
    let denom = d2 + t2;
    let c = big.cos();
    let angle_t = ((t2 + d2 * c) / denom).clamp(-1.0, 1.0).acos();
    let angle_b = ((d2 + t2 * c) / denom).clamp(-1.0, 1.0).acos();
    Ok((angle_t, big, angle_b))
}

/// Per-jump angle table for a datum.
pub fn jump_angle_table(omega: &SkewPath) -> Result<Vec<JumpAngleReport>> {
    omega
        .jumps()
        .iter()
        .map(|atom| {
            let (angle_t, angle_n, angle_b) = jump_angles(atom.d_theta, atom.d_phi)?;
            let big = atom.magnitude();
            let projective = atom.d_theta * atom.d_theta
                + atom.d_phi * atom.d_phi * big.cos();
            Ok(JumpAngleReport {
                location: atom.location,
                d_theta: atom.d_theta,
                d_phi: atom.d_phi,
                angle_t,
                angle_n,
                angle_b,
                projective_b: (projective < 0.0).then_some(std::f64::consts::PI - angle_b),
            })
        })
        .collect()
}

/// Closed-form invariants of the solved path:
/// `TC = diffuse(D theta) + Σ angle_t`, `TAT = |diffuse(D phi)| + Σ angle_b`.
/// For continuous data these reduce to `theta(L) - theta(0)` and
/// `|D phi|(I)`. The polygonal fields are left unset.
pub fn invariants_exact(path: &FramePath, omega: &SkewPath) -> Result<GeomSummary> {
    let theta = omega.theta().ok_or(Error::Dimension {
        expected: 3,
        got: omega.dimension(),
    })?;
    let atoms = omega.jumps();
    let records = path.jump_records();
    if records.len() != atoms.len() {
        return Err(Error::JumpMismatch(format!(
            "path has {} jump records, datum has {} atoms",
            records.len(),
            atoms.len()
        )));
    }
    for (r, a) in records.iter().zip(atoms.iter()) {
        if (r.location - a.location).abs() > 1e-9
            || (r.d_theta - a.d_theta).abs() > 1e-12
            || (r.d_phi - a.d_phi).abs() > 1e-12
        {
            return Err(Error::JumpMismatch(format!(
                "record at {} does not match atom at {}",
                r.location, a.location
            )));
        }
    }

    let diffuse_tc_mass = theta.diffuse_signed_mass();
    let diffuse_tat_mass = omega.phi().map(|p| p.ac_mass()).unwrap_or(0.0);
    let mut jump_tc_sum = 0.0;
    let mut jump_tat_sum = 0.0;
    for atom in &atoms {
        let (angle_t, _, angle_b) = jump_angles(atom.d_theta, atom.d_phi)?;
        jump_tc_sum += angle_t;
        jump_tat_sum += angle_b;
    }
    let tc_exact = diffuse_tc_mass + jump_tc_sum;
    let tat_exact = diffuse_tat_mass + jump_tat_sum;

    // the jump angles never exceed the normal angle, so both invariants are
    // bounded by the diffuse mass plus the scaled jump mass of the datum
    let jump_mass = omega.jump_mass();
    let bound_tc = diffuse_tc_mass + jump_mass / std::f64::consts::SQRT_2 + 1e-12;
    let bound_tat = diffuse_tat_mass + jump_mass / std::f64::consts::SQRT_2 + 1e-12;
    if tc_exact > bound_tc || tat_exact > bound_tat {
        return Err(Error::Numerical(format!(
            "invariants exceed their jump-mass bounds: TC {tc_exact} vs {bound_tc}, TAT {tat_exact} vs {bound_tat}"
        )));
    }

    Ok(GeomSummary {
        length: path.length(),
        tc_exact,
        tat_exact,
        diffuse_tc_mass,
        diffuse_tat_mass,
        jump_tc_sum,
        jump_tat_sum,
        tc_polygonal: None,
        tat_polygonal: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bvmeasure::{BVScalar, Jump};
    use crate::liegroup::RotationMatrix;
    use crate::solver::{solve_bv, SolverConfig};

    #[test]
    fn pure_curvature_collapse() {
        for d in [0.3, 1.0, 2.5] {
            let (t, n, b) = jump_angles(d, 0.0).unwrap();
            assert!((t - d).abs() < 1e-12);
            assert!((n - d).abs() < 1e-15);
            assert!(b.abs() < 1e-12);
        }
    }

    #[test]
    fn pure_torsion_collapse() {
        for tau in [0.4, -0.9, 2.0] {
            let (t, n, b) = jump_angles(0.0, tau).unwrap();
            assert!(t.abs() < 1e-12);
            assert!((n - tau.abs()).abs() < 1e-15);
            assert!((b - tau.abs()).abs() < 1e-12);
        }
    }

    #[test]
    fn unit_pair_values() {
        let (t, n, b) = jump_angles(1.0, 1.0).unwrap();
        let expected = ((1.0 + 2.0f64.sqrt().cos()) / 2.0).acos();
        assert!((t - expected).abs() < 1e-12);
        assert!((t - 0.9545551383383561).abs() < 1e-12);
        assert!((n - 2.0f64.sqrt()).abs() < 1e-15);
        assert!((b - t).abs() < 1e-15, "d <-> tau symmetry at (1,1)");
    }

    #[test]
    fn angles_bounded_by_normal_angle() {
        // 50 x 50 admissible grid: angle_t, angle_b <= sqrt(d^2 + tau^2),
        // equality only on the axes
        let m = 50;
        for i in 0..m {
            for j in 0..m {
                let d = 2.2 * i as f64 / (m - 1) as f64;
                let tau = 2.2 * j as f64 / (m - 1) as f64;
                let big = d.hypot(tau);
                if big <= 0.0 || big >= std::f64::consts::PI {
                    continue;
                }
                let (t, n, b) = jump_angles(d, tau).unwrap();
                assert!(t <= n + 1e-12);
                assert!(b <= n + 1e-12);
                if d > 0.0 && tau > 0.0 {
                    assert!(t < n - 1e-12);
                    assert!(b < n - 1e-12);
                }
            }
        }
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(jump_angles(0.0, 0.0).is_err());
        assert!(jump_angles(3.0, 1.5).is_err());
    }

    #[test]
    fn continuous_data_invariants() {
        let l = 2.0;
        let theta = BVScalar::affine(l, 1.3, 0.0, vec![], true).unwrap();
        let phi = BVScalar::affine(l, -0.4, 0.0, vec![], false).unwrap();
        let omega = crate::bvmeasure::SkewPath::spatial(theta, phi).unwrap();
        let path = solve_bv(
            &omega,
            &RotationMatrix::identity(3),
            &SolverConfig::default().with_grid(256),
        )
        .unwrap();
        let summary = invariants_exact(&path, &omega).unwrap();
        assert!((summary.tc_exact - 1.3 * l).abs() < 1e-12);
        assert!((summary.tat_exact - 0.4 * l).abs() < 1e-12);
        assert_eq!(summary.jump_tc_sum, 0.0);
    }

    #[test]
    fn case_study_invariants() {
        let (d, tau) = (1.0, 1.0);
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
        let omega = crate::bvmeasure::SkewPath::spatial(theta, phi).unwrap();
        let path = solve_bv(
            &omega,
            &RotationMatrix::identity(3),
            &SolverConfig::default().with_grid(512),
        )
        .unwrap();
        let summary = invariants_exact(&path, &omega).unwrap();
        let root2 = 2.0f64.sqrt();
        let angle = ((1.0 + root2.cos()) / 2.0).acos();
        assert!((summary.tc_exact - (2.0 + angle)).abs() < 1e-12);
        assert!((summary.tat_exact - angle).abs() < 1e-12);
    }

    #[test]
    fn projective_report_kicks_in_for_large_torsion() {
        let table = jump_angle_table(&{
            let theta = BVScalar::affine(2.0, 1.0, 0.0, vec![], true).unwrap();
            let phi = BVScalar::affine(
                2.0,
                0.0,
                0.0,
                vec![Jump { location: 1.0, value: 3.0 }],
                false,
            )
            .unwrap();
            crate::bvmeasure::SkewPath::spatial(theta, phi).unwrap()
        })
        .unwrap();
        // d = 0, tau = 3: d^2 + tau^2 cos(3) < 0
        let report = table[0];
        assert!(report.projective_b.is_some());
        let pb = report.projective_b.unwrap();
        assert!((pb - (std::f64::consts::PI - report.angle_b)).abs() < 1e-15);
    }
}
