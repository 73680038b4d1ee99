//! The solution object: SO(N) samples on an arc-length grid with one-sided
//! pairs at jump locations.

use nalgebra::Vector3;

use crate::liegroup::RotationMatrix;

/// One jump of the frame: location, one-sided frames, and the connecting
/// rotation `G(s+) = rotation * G(s-)`.
#[derive(Debug, Clone)]
pub struct JumpRecord {
    pub location: f64,
    /// Grid index of the left-limit sample; the right-limit sample follows it.
    pub index_minus: usize,
    pub d_theta: f64,
    pub d_phi: f64,
    /// Rotation angle `sqrt(d^2 + tau^2)`.
    pub angle: f64,
    /// World axis of the connecting rotation (plane normal e3 for N = 2).
    pub axis: Vector3<f64>,
    /// Left rotation factor, exactly `frame_plus = rotation * frame_minus`.
    pub rotation: RotationMatrix,
    pub frame_minus: RotationMatrix,
    pub frame_plus: RotationMatrix,
}

/// Frame path `s -> G(s)` produced by the solvers.
#[derive(Debug, Clone)]
pub struct FramePath {
    dimension: usize,
    grid: Vec<f64>,
    frames: Vec<RotationMatrix>,
    jump_records: Vec<JumpRecord>,
    initial: RotationMatrix,
}

impl FramePath {
    pub(crate) fn new(
        dimension: usize,
        grid: Vec<f64>,
        frames: Vec<RotationMatrix>,
        jump_records: Vec<JumpRecord>,
        initial: RotationMatrix,
    ) -> Self {
        debug_assert_eq!(grid.len(), frames.len());
        Self {
            dimension,
            grid,
            frames,
            jump_records,
            initial,
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn s(&self, i: usize) -> f64 {
        self.grid[i]
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn frame(&self, i: usize) -> &RotationMatrix {
        &self.frames[i]
    }

    pub fn frames(&self) -> &[RotationMatrix] {
        &self.frames
    }

    pub fn jump_records(&self) -> &[JumpRecord] {
        &self.jump_records
    }

    pub fn initial(&self) -> &RotationMatrix {
        &self.initial
    }

    pub fn length(&self) -> f64 {
        self.grid.last().copied().unwrap_or(0.0) - self.grid.first().copied().unwrap_or(0.0)
    }

    /// True when grid node `i` is one side of a jump pair.
    pub fn is_jump_node(&self, i: usize) -> bool {
        self.jump_records
            .iter()
            .any(|r| r.index_minus == i || r.index_minus + 1 == i)
    }

    /// Tangent column `G e1` embedded in R^3 (z = 0 for planar paths).
    pub fn tangent(&self, i: usize) -> Vector3<f64> {
        let c = self.frames[i].column(0);
        if self.dimension == 2 {
            Vector3::new(c[0], c[1], 0.0)
        } else {
            Vector3::new(c[0], c[1], c[2])
        }
    }

    /// Largest `|G^T G - I|_F` over all stored frames.
    pub fn max_orthogonality_defect(&self) -> f64 {
        self.frames
            .iter()
            .map(|f| f.orthogonality_defect())
            .fold(0.0, f64::max)
    }
}
