//! Curve reconstruction from a frame path.

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::liegroup::RotationMatrix;
use crate::solver::FramePath;

/// Arc-length sampled curve in R^3 (planar curves embed with z = 0).
#[derive(Debug, Clone)]
pub struct Curve {
    svals: Vec<f64>,
    points: Vec<Vector3<f64>>,
    length: f64,
    frames: Option<FramePath>,
}

impl Curve {
    pub fn from_samples(svals: Vec<f64>, points: Vec<Vector3<f64>>) -> Result<Self> {
        if svals.len() != points.len() || svals.is_empty() {
            return Err(Error::EmptyCurve);
        }
        let length = svals.last().unwrap() - svals.first().unwrap();
        Ok(Self {
            svals,
            points,
            length,
            frames: None,
        })
    }

    pub fn len(&self) -> usize {
        self.svals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.svals.is_empty()
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn s(&self, i: usize) -> f64 {
        self.svals[i]
    }

    pub fn svals(&self) -> &[f64] {
        &self.svals
    }

    pub fn point(&self, i: usize) -> Vector3<f64> {
        self.points[i]
    }

    pub fn points(&self) -> &[Vector3<f64>] {
        &self.points
    }

    pub fn frames(&self) -> Option<&FramePath> {
        self.frames.as_ref()
    }

    /// Linear interpolation at arc length `s` (clamped to the domain).
    pub fn point_at(&self, s: f64) -> Vector3<f64> {
        let s0 = *self.svals.first().unwrap();
        let s1 = *self.svals.last().unwrap();
        let s = s.clamp(s0, s1);
        let idx = self.svals.partition_point(|x| *x <= s);
        if idx == 0 {
            return self.points[0];
        }
        if idx >= self.svals.len() {
            return *self.points.last().unwrap();
        }
        let (a, b) = (self.svals[idx - 1], self.svals[idx]);
        if b - a <= 0.0 {
            return self.points[idx];
        }
        let t = (s - a) / (b - a);
        self.points[idx - 1] * (1.0 - t) + self.points[idx] * t
    }

    /// Rigidly moved copy: rotation about the origin plus translation.
    pub fn transformed(&self, q: &RotationMatrix, shift: &Vector3<f64>) -> Result<Curve> {
        if q.dim() != 3 {
            return Err(Error::Dimension {
                expected: 3,
                got: q.dim(),
            });
        }
        let m = q.matrix();
        let points = self
            .points
            .iter()
            .map(|p| {
                let r = m * p;
                Vector3::new(r[(0, 0)], r[(1, 0)], r[(2, 0)]) + shift
            })
            .collect();
        Ok(Curve {
            svals: self.svals.clone(),
            points,
            length: self.length,
            frames: None,
        })
    }
}

/// Integrates the tangent column of the frame path into the solution curve
/// (trapezoid rule, origin start). Requires the declared strictly
/// increasing curvature angle; otherwise only the frame path is meaningful
/// and this refuses.
pub fn integrate_tangent(path: &FramePath, theta_increasing: bool) -> Result<Curve> {
    if !theta_increasing {
        return Err(Error::ThetaNotIncreasing);
    }
    if path.is_empty() {
        return Err(Error::EmptyCurve);
    }
    let mut points = Vec::with_capacity(path.len());
    let mut p = Vector3::zeros();
    points.push(p);
    for i in 1..path.len() {
        let ds = path.s(i) - path.s(i - 1);
        let t_avg = (path.tangent(i - 1) + path.tangent(i)) / 2.0;
        p += t_avg * ds;
        points.push(p);
    }
    Ok(Curve {
        svals: path.grid().to_vec(),
        points,
        length: path.length(),
        frames: Some(path.clone()),
    })
}
