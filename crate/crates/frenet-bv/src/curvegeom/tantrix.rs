//! Variation of the tangent indicatrix: geodesic (angle) versus total
//! variation (chord) bookkeeping, split into diffuse and jump parts.

use crate::error::{Error, Result};
use crate::solver::FramePath;

/// Returns `(Var_S2(t), |Dt|(I))`: the spherical variation of the tangent
/// (geodesic angles at jumps) and its total variation (Euclidean chords at
/// jumps). The diffuse part sums consecutive-sample rotation angles in
/// both. Always `(2/pi) Var <= |Dt| <= Var`.
pub fn tantrix_variation(path: &FramePath) -> Result<(f64, f64)> {
    if path.dimension() != 3 && path.dimension() != 2 {
        return Err(Error::Dimension {
            expected: 3,
            got: path.dimension(),
        });
    }
    let jump_minus: std::collections::BTreeSet<usize> = path
        .jump_records()
        .iter()
        .map(|r| r.index_minus)
        .collect();
    let mut var = 0.0;
    let mut tv = 0.0;
    for i in 0..path.len() - 1 {
        let a = path.tangent(i);
        let b = path.tangent(i + 1);
        let angle = a.cross(&b).norm().atan2(a.dot(&b));
        if jump_minus.contains(&i) {
            var += angle;
            tv += (b - a).norm();
        } else {
            var += angle;
            tv += angle;
        }
    }
    debug_assert!(tv <= var + 1e-12);
    debug_assert!(2.0 / std::f64::consts::PI * var <= tv + 1e-12);
    Ok((var, tv))
}
