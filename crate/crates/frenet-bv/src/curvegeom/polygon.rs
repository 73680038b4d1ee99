//! Inscribed polygons: turning angles, discrete torsion angles between
//! consecutive osculating planes, and the inscription modulus.

use nalgebra::Vector3;

use crate::curvegeom::curve::Curve;
use crate::error::{Error, Result};

/// Polygon inscribed in a curve at uniform arc-length spacing.
#[derive(Debug, Clone)]
pub struct PolygonalCurve {
    pub vertices: Vec<Vector3<f64>>,
    /// Turning angles at interior vertices, in [0, pi].
    pub turning_angles: Vec<f64>,
    /// Angles between consecutive unoriented osculating-plane normals,
    /// in [0, pi/2].
    pub torsion_angles: Vec<f64>,
    /// Torsion angles dropped because consecutive segments were aligned.
    pub skipped_torsion: usize,
    /// Largest diameter of the curve arcs between consecutive vertices.
    pub modulus: f64,
}

impl PolygonalCurve {
    /// Rotation `K(p)`: sum of the turning angles.
    pub fn rotation(&self) -> f64 {
        self.turning_angles.iter().sum()
    }

    /// Sum of the discrete torsion angles.
    pub fn total_torsion(&self) -> f64 {
        self.torsion_angles.iter().sum()
    }

    pub fn polygonal_length(&self) -> f64 {
        self.vertices
            .windows(2)
            .map(|w| (w[1] - w[0]).norm())
            .sum()
    }
}

const ALIGNED_TOL: f64 = 1e-10;

/// Inscribes `k >= 3` uniform segments in the curve.
pub fn inscribe(curve: &Curve, k: usize) -> Result<PolygonalCurve> {
    if k < 3 {
        return Err(Error::BadConfig(format!("need at least 3 segments, got {k}")));
    }
    if curve.is_empty() {
        return Err(Error::EmptyCurve);
    }
    let s0 = curve.s(0);
    let length = curve.length();
    let vertices: Vec<Vector3<f64>> = (0..=k)
        .map(|i| curve.point_at(s0 + length * i as f64 / k as f64))
        .collect();
    let segments: Vec<Vector3<f64>> = vertices.windows(2).map(|w| w[1] - w[0]).collect();
    for (i, seg) in segments.iter().enumerate() {
        if seg.norm() <= f64::EPSILON * length.max(1.0) {
            return Err(Error::DegenerateChord(i, i + 1));
        }
    }

    let turning_angles: Vec<f64> = segments
        .windows(2)
        .map(|w| {
            let cross = w[0].cross(&w[1]).norm();
            let dot = w[0].dot(&w[1]);
            cross.atan2(dot)
        })
        .collect();

    // plane normals of consecutive segment pairs
    let normals: Vec<Option<Vector3<f64>>> = segments
        .windows(2)
        .map(|w| {
            let n = w[0].cross(&w[1]);
            if n.norm() < ALIGNED_TOL * w[0].norm() * w[1].norm() {
                None
            } else {
                Some(n.normalize())
            }
        })
        .collect();
    let mut torsion_angles = Vec::new();
    let mut skipped = 0usize;
    for w in normals.windows(2) {
        match (w[0], w[1]) {
            (Some(a), Some(b)) => {
                let c = a.dot(&b).abs().clamp(0.0, 1.0);
                torsion_angles.push(c.acos());
            }
            _ => skipped += 1,
        }
    }

    // modulus: largest diameter of the arcs cut off by consecutive vertices
    let mut modulus = 0.0f64;
    for i in 0..k {
        let a = s0 + length * i as f64 / k as f64;
        let b = s0 + length * (i + 1) as f64 / k as f64;
        let lo = curve.svals().partition_point(|x| *x < a);
        let hi = curve.svals().partition_point(|x| *x <= b);
        let mut pts: Vec<Vector3<f64>> = vec![curve.point_at(a)];
        let count = hi.saturating_sub(lo);
        let stride = (count / 62).max(1);
        for idx in (lo..hi).step_by(stride) {
            pts.push(curve.point(idx));
        }
        pts.push(curve.point_at(b));
        for x in 0..pts.len() {
            for y in (x + 1)..pts.len() {
                modulus = modulus.max((pts[x] - pts[y]).norm());
            }
        }
    }

    Ok(PolygonalCurve {
        vertices,
        turning_angles,
        torsion_angles,
        skipped_torsion: skipped,
        modulus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle_curve(n: usize) -> Curve {
        let l = 2.0 * std::f64::consts::PI;
        let svals: Vec<f64> = (0..=n).map(|i| l * i as f64 / n as f64).collect();
        let points = svals
            .iter()
            .map(|s| Vector3::new(s.sin(), 1.0 - s.cos(), 0.0))
            .collect();
        Curve::from_samples(svals, points).unwrap()
    }

    fn helix_curve(k: f64, tau: f64, l: f64, n: usize) -> Curve {
        // unit-speed circular helix with curvature k and torsion tau
        let c = (k * k + tau * tau).sqrt();
        let a = k / (c * c);
        let b = tau / (c * c);
        let svals: Vec<f64> = (0..=n).map(|i| l * i as f64 / n as f64).collect();
        let points = svals
            .iter()
            .map(|s| Vector3::new(a * (c * s).cos(), a * (c * s).sin(), b * c * s))
            .collect();
        Curve::from_samples(svals, points).unwrap()
    }

    #[test]
    fn square_in_circle_is_planar() {
        let curve = circle_curve(4096);
        let poly = inscribe(&curve, 4).unwrap();
        assert_eq!(poly.turning_angles.len(), 3);
        for t in &poly.turning_angles {
            assert!((t - std::f64::consts::FRAC_PI_2).abs() < 1e-6);
        }
        for psi in &poly.torsion_angles {
            assert!(psi.abs() < 1e-10);
        }
        assert_eq!(poly.skipped_torsion, 0);
        // arcs of a quarter circle have diameter sqrt(2)
        assert!((poly.modulus - 2.0f64.sqrt()).abs() < 1e-3);
    }

    #[test]
    fn helix_polygonal_invariants_converge() {
        let (k, tau, l) = (1.0f64, 0.5f64, 4.0 * std::f64::consts::PI);
        let curve = helix_curve(k, tau, l, 16384);
        let poly = inscribe(&curve, 2048).unwrap();
        let tc = k * l;
        let tat = tau.abs() * l;
        assert!((poly.polygonal_length() - l).abs() / l < 1e-3);
        assert!((poly.rotation() - tc).abs() / tc < 0.01);
        assert!((poly.total_torsion() - tat).abs() / tat < 0.01);
        assert!(poly.modulus < l / 2048.0 * 1.01);
    }

    #[test]
    fn refuses_tiny_polygons() {
        let curve = circle_curve(64);
        assert!(inscribe(&curve, 2).is_err());
    }
}
