//! Scalar BV functions and the skew-matrix datum built from them.

mod path;
mod scalar;

pub use path::{
    CountableSkewPath, GeometricJumpFamily, JumpAtom, JumpCheck, JumpValidationReport, SkewPath,
    JUMP_CAP_MARGIN,
};
pub use scalar::{BVScalar, DerivativeDecomposition, GridNode, Jump, Piece, Side};
