//! Truncation ladder for countable jump sets: solves the system with the
//! jumps of mass above 1/n for n = 1..n_max and reports how the
//! reconstructed curves settle (successive Frechet distances against the
//! discarded jump mass).

use crate::bvmeasure::CountableSkewPath;
use crate::curvegeom::{discrete_frechet, integrate_tangent, Curve};
use crate::error::{Error, Result};
use crate::liegroup::RotationMatrix;
use crate::solver::config::SolverConfig;
use crate::solver::frame::FramePath;
use crate::solver::jumps::solve_bv;

/// One level of the truncation ladder.
#[derive(Debug, Clone)]
pub struct TruncationLevel {
    pub n: u32,
    pub kept_jumps: usize,
    /// `|D^J Omega|` of everything this level drops (analytic tail included).
    pub discarded_mass: f64,
    pub frechet_from_previous: Option<f64>,
    pub path: FramePath,
    pub curve: Curve,
}

pub fn solve_bv_general(
    data: &CountableSkewPath,
    initial: &RotationMatrix,
    cfg: &SolverConfig,
    n_max: u32,
) -> Result<Vec<TruncationLevel>> {
    if n_max == 0 {
        return Err(Error::BadConfig("n_max must be at least 1".into()));
    }
    let materialized = data.materialize(1.0 / n_max as f64)?;
    let theta_increasing = materialized
        .theta()
        .map(|t| t.monotone())
        .unwrap_or(false);
    let mut levels: Vec<TruncationLevel> = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let omega_n = materialized.truncate_jumps(n);
        let path = solve_bv(&omega_n, initial, cfg)?;
        let curve = integrate_tangent(&path, theta_increasing)?;
        let frechet_from_previous = match levels.last() {
            None => None,
            Some(prev) => Some(discrete_frechet(&prev.curve, &curve)?),
        };
        levels.push(TruncationLevel {
            n,
            kept_jumps: omega_n.jumps().len(),
            discarded_mass: data.discarded_mass(n),
            frechet_from_previous,
            path,
            curve,
        });
    }
    Ok(levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bvmeasure::{BVScalar, GeometricJumpFamily, Jump, SkewPath};

    fn base_path() -> SkewPath {
        let theta = BVScalar::affine(2.0, 1.0, 0.0, vec![], true).unwrap();
        let phi = BVScalar::affine(2.0, 0.0, 0.0, vec![], false).unwrap();
        SkewPath::spatial(theta, phi).unwrap()
    }

    #[test]
    fn finite_jump_set_stabilizes() {
        let theta = BVScalar::affine(
            2.0,
            1.0,
            0.0,
            vec![
                Jump { location: 0.7, value: 0.9 },
                Jump { location: 1.4, value: 0.2 },
            ],
            true,
        )
        .unwrap();
        let phi = BVScalar::affine(2.0, 0.0, 0.0, vec![], false).unwrap();
        let data = CountableSkewPath::finite(SkewPath::spatial(theta, phi).unwrap());
        let levels = solve_bv_general(
            &data,
            &RotationMatrix::identity(3),
            &SolverConfig::default().with_grid(256),
            8,
        )
        .unwrap();
        // masses: sqrt(2)*0.9 = 1.27 kept from n = 1; sqrt(2)*0.2 = 0.28
        // kept from n = 4 on; afterwards the ladder is exactly constant
        assert_eq!(levels[0].kept_jumps, 1);
        assert_eq!(levels[7].kept_jumps, 2);
        let stable_from = levels.iter().position(|l| l.kept_jumps == 2).unwrap();
        for l in &levels[stable_from + 1..] {
            assert_eq!(l.frechet_from_previous, Some(0.0));
            assert_eq!(l.discarded_mass, 0.0);
        }
    }

    #[test]
    fn geometric_family_settles_within_discarded_mass() {
        let data = CountableSkewPath {
            base: base_path(),
            tail: Some(GeometricJumpFamily {
                theta_amp: 1.0,
                phi_amp: 0.0,
                ratio: 0.8,
                location_ratio: 0.5,
                start_index: 1,
            }),
        };
        let levels = solve_bv_general(
            &data,
            &RotationMatrix::identity(3),
            &SolverConfig::default().with_grid(512),
            10,
        )
        .unwrap();
        for w in levels.windows(2) {
            let added = w[0].discarded_mass - w[1].discarded_mass;
            let d = w[1].frechet_from_previous.unwrap();
            assert!(
                d <= added + 1e-12,
                "level {}: frechet {d} vs added mass {added}",
                w[1].n
            );
        }
        // the discarded mass vanishes as n grows
        assert!(levels.last().unwrap().discarded_mass < levels[0].discarded_mass);
        assert!(levels.last().unwrap().discarded_mass < 0.6);
    }
}
