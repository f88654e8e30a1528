//! Boundary curves, the annular coordinate system, the periodic box and
//! point classification.

pub mod annulus;
pub mod classify;
pub mod curve;
pub mod grid;

pub use annulus::{build_annulus, compute_rmax, default_rmax_cap, AnnularGrid, Side};
pub use classify::{classify_points, invert_coordinates, point_in_polygon, Classifier, GridClassification, Label};
pub use curve::{BoundaryCurve, Circle, CurveFrame, Ellipse, Kite, Parametrization, Star};
pub use grid::{build_computational_domain, RegularGrid};
