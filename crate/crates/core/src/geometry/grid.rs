//! The periodic computational box around Ω.

use super::curve::BoundaryCurve;
use crate::numerics::GridSpec;

#[derive(Clone, Copy, Debug)]
pub struct RegularGrid {
    pub spec: GridSpec,
    /// Wiggle room added in +x and +y.
    pub w: f64,
    /// Padded node extrema of Γ before the wiggle room is added.
    pub x_max: f64,
    pub y_max: f64,
}

impl RegularGrid {
    pub fn h(&self) -> f64 {
        self.spec.h
    }

    pub fn len(&self) -> usize {
        self.spec.nx * self.spec.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat index iy·nx + ix to node coordinates.
    pub fn node(&self, idx: usize) -> [f64; 2] {
        self.spec.node(idx % self.spec.nx, idx / self.spec.nx)
    }
}

/// Box [X_min, X_min + hN_x] × [Y_min, Y_min + hN_y] containing Γ with margin
/// h_max, enlarged by `w` in +x and +y, with even node counts.
pub fn build_computational_domain(curve: &BoundaryCurve, h: f64, w: f64) -> RegularGrid {
    assert!(h > 0.0);
    let (lo, hi) = curve.bbox();
    let hm = curve.h_max();
    let (x_min, y_min) = (lo[0] - hm, lo[1] - hm);
    let (x_max, y_max) = (hi[0] + hm, hi[1] + hm);
    let count = |span: f64| 2 * (span / (2.0 * h)).ceil() as usize;
    let nx = count(x_max + w - x_min);
    let ny = count(y_max + w - y_min);
    RegularGrid { spec: GridSpec { x0: x_min, y0: y_min, h, nx, ny }, w, x_max, y_max }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::curve::{Circle, Star};

    #[test]
    fn circle_box_is_square_and_contains_margin() {
        let c = BoundaryCurve::from_parametrization(&Circle { center: [0.0, 0.0], radius: 1.0 }, 64).unwrap();
        let g = build_computational_domain(&c, 0.05, 0.0);
        assert_eq!(g.spec.nx, g.spec.ny);
        assert!(g.spec.nx % 2 == 0);
        assert!(g.spec.lx() >= 2.0 + 2.0 * c.h_max() - 1e-12);
        for p in &c.points {
            assert!(p[0] - g.spec.x0 >= c.h_max() - 1e-12);
            assert!(g.spec.x0 + g.spec.lx() - p[0] >= c.h_max() - 1e-12);
        }
    }

    #[test]
    fn wiggle_room_extends_positive_sides() {
        let c = BoundaryCurve::from_parametrization(&Circle { center: [0.0, 0.0], radius: 1.0 }, 64).unwrap();
        let a = build_computational_domain(&c, 0.05, 0.0);
        let b = build_computational_domain(&c, 0.05, 2.0 * 10.0 * 0.05);
        assert_eq!(a.spec.x0, b.spec.x0);
        assert!(b.spec.lx() >= a.spec.lx() + 1.0 - 2.0 * 0.05);
        assert!(b.spec.x0 + b.spec.lx() >= b.x_max + 1.0 - 1e-12);
    }

    #[test]
    fn spacing_is_exact() {
        let c = BoundaryCurve::from_parametrization(&Star::default(), 128).unwrap();
        let g = build_computational_domain(&c, 0.02, 0.0);
        assert!((g.spec.lx() / g.spec.nx as f64 - 0.02).abs() < 1e-16);
        assert!((g.spec.ly() / g.spec.ny as f64 - 0.02).abs() < 1e-16);
    }
}
