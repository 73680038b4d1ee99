//! Discrete Frechet distance between sampled curves (two-row dynamic
//! program over the coupling lattice). Upper-bounds the continuous
//! distance, is symmetric, and vanishes exactly on identical samples.

use crate::curvegeom::curve::Curve;
use crate::error::{Error, Result};

pub fn discrete_frechet(a: &Curve, b: &Curve) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyCurve);
    }
    let n = a.len();
    let m = b.len();
    let dist = |i: usize, j: usize| (a.point(i) - b.point(j)).norm();
    let mut prev = vec![0.0f64; m];
    let mut row = vec![0.0f64; m];
    prev[0] = dist(0, 0);
    for j in 1..m {
        prev[j] = prev[j - 1].max(dist(0, j));
    }
    for i in 1..n {
        row[0] = prev[0].max(dist(i, 0));
        for j in 1..m {
            let reach = prev[j].min(row[j - 1]).min(prev[j - 1]);
            row[j] = reach.max(dist(i, j));
        }
        std::mem::swap(&mut prev, &mut row);
    }
    Ok(prev[m - 1])
}
