//! Curve reconstruction and geometric invariants: exact closed forms and
//! polygonal estimators, plus the Frechet-distance diagnostics used by the
//! convergence studies.

mod angles;
mod curve;
mod frechet;
mod polygon;
mod tantrix;

pub use angles::{invariants_exact, jump_angle_table, jump_angles, GeomSummary, JumpAngleReport};
pub use curve::{integrate_tangent, Curve};
pub use frechet::discrete_frechet;
pub use polygon::{inscribe, PolygonalCurve};
pub use tantrix::tantrix_variation;
