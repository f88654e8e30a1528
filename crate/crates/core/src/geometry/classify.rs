//! Grid-point classification into exterior, annulus and faithful regions,
//! with inversion of the (s, r) annular coordinates.

use super::annulus::{AnnularGrid, Side};
use super::curve::BoundaryCurve;
use super::grid::RegularGrid;
use crate::{reject, Error, Result};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Label {
    Exterior = 0,
    Annulus = 1,
    Faithful = 2,
}

#[derive(Clone, Debug)]
pub struct GridClassification {
    /// One label per grid node, flat index iy·nx + ix.
    pub labels: Vec<Label>,
    pub exterior: Vec<usize>,
    pub annulus: Vec<usize>,
    pub faithful: Vec<usize>,
    /// (s, r) of each node in `annulus`, same order.
    pub coords: Vec<(f64, f64)>,
    /// Polygon inflation distance used for the quick tests.
    pub delta: f64,
    /// Nodes resolved by coordinate inversion rather than polygon tests.
    pub newton_count: usize,
}

impl GridClassification {
    pub fn count(&self, label: Label) -> usize {
        match label {
            Label::Exterior => self.exterior.len(),
            Label::Annulus => self.annulus.len(),
            Label::Faithful => self.faithful.len(),
        }
    }
}

/// Sagitta of the chord between adjacent nodes of a curve with curvature
/// κ and spacing `chord`.
fn sagitta(kappa: f64, chord: f64) -> f64 {
    if kappa == 0.0 {
        return 0.0;
    }
    let rho = (1.0 / kappa).abs();
    let d = rho * rho - 0.25 * chord * chord;
    if d < 0.0 {
        rho
    } else {
        rho - d.sqrt()
    }
}

/// Even-odd crossing test.
pub fn point_in_polygon(poly: &[[f64; 2]], p: [f64; 2]) -> bool {
    let mut inside = false;
    let n = poly.len();
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (poly[i], poly[j]);
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let xc = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
            if p[0] < xc {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Closest-point coordinates (s, r) with x = X(s) + r n(s), by safeguarded
/// Newton on d/ds ½|X(s) − x|² started at `s0`.
pub fn invert_coordinates(curve: &BoundaryCurve, x: [f64; 2], s0: f64) -> Result<(f64, f64)> {
    let ds = curve.ds();
    let g = |s: f64| {
        let f = curve.frame(s);
        let d = [f.x[0] - x[0], f.x[1] - x[1]];
        let gv = d[0] * f.d1[0] + d[1] * f.d1[1];
        let gd = f.d1[0].powi(2) + f.d1[1].powi(2) + d[0] * f.d2[0] + d[1] * f.d2[1];
        (gv, gd)
    };
    let (mut a, mut b) = (s0 - 2.0 * ds, s0 + 2.0 * ds);
    let mut width = 2.0 * ds;
    while !(g(a).0 < 0.0 && g(b).0 > 0.0) && width < PI {
        width *= 2.0;
        a = s0 - width;
        b = s0 + width;
    }
    let bracketed = g(a).0 <= 0.0 && g(b).0 >= 0.0;
    let mut s = s0;
    let finish = |s: f64| {
        let f = curve.frame(s);
        let nn = f.normal();
        let r = (x[0] - f.x[0]) * nn[0] + (x[1] - f.x[1]) * nn[1];
        (s.rem_euclid(2.0 * PI), r)
    };
    for _ in 0..50 {
        let (gv, gd) = g(s);
        if gv == 0.0 {
            return Ok(finish(s));
        }
        if bracketed {
            if gv < 0.0 {
                a = s;
            } else {
                b = s;
            }
        }
        let mut next = s - gv / gd;
        if bracketed && (!(gd > 0.0) || next < a || next > b) {
            next = 0.5 * (a + b);
        }
        let step = (next - s).abs();
        s = next;
        if step <= 1e-9 * ds {
            // quadratic convergence: one more step reaches rounding level
            let (gv, gd) = g(s);
            if gd > 0.0 {
                let polished = s - gv / gd;
                if (polished - s).abs() <= step {
                    s = polished;
                }
            }
            return Ok(finish(s));
        }
        if bracketed && b - a <= 4.0 * f64::EPSILON * s.abs().max(1.0) {
            return Ok(finish(s));
        }
    }
    let (sb, rb) = finish(s);
    Err(Error::NoConvergence {
        stage: "coordinate inversion",
        iterations: 50,
        residual: g(s).0.abs(),
        history: vec![],
        best: vec![sb, rb],
    })
}

/// Polygon-accelerated point classifier for one boundary and annulus.
pub struct Classifier<'a> {
    curve: &'a BoundaryCurve,
    side: Side,
    big_r: f64,
    /// Γ pushed 2δ away from the physical domain.
    poly_gamma: Vec<[f64; 2]>,
    /// I pushed 2δ_I further into the physical domain.
    poly_int: Vec<[f64; 2]>,
    pub delta: f64,
    tol: f64,
}

impl<'a> Classifier<'a> {
    pub fn new(annulus: &'a AnnularGrid) -> Result<Self> {
        let curve = annulus.curve.as_ref();
        let n = curve.len();
        let ds = curve.ds();
        let sg = annulus.side.sign();
        let ro = annulus.r_outer();
        let delta = (0..n)
            .map(|j| sagitta(curve.curvature[j], curve.speed[j] * ds))
            .fold(0.0, f64::max);
        let delta_i = (0..n)
            .map(|j| {
                let f = 1.0 + ro * curve.curvature[j];
                sagitta(curve.curvature[j] / f, curve.speed[j] * f * ds)
            })
            .fold(0.0, f64::max);
        let d = delta.max(delta_i);
        if annulus.big_r + 2.0 * d >= annulus.r_max {
            return reject(format!(
                "R + 2δ = {:.6} ≥ R_max = {:.6}; refine the boundary",
                annulus.big_r + 2.0 * d,
                annulus.r_max
            ));
        }
        let shift = |r: f64| -> Vec<[f64; 2]> {
            curve
                .points
                .iter()
                .zip(&curve.normals)
                .map(|(p, nn)| [p[0] + r * nn[0], p[1] + r * nn[1]])
                .collect()
        };
        Ok(Self {
            curve,
            side: annulus.side,
            big_r: annulus.big_r,
            poly_gamma: shift(-sg * 2.0 * delta),
            poly_int: shift(ro + sg * 2.0 * delta_i),
            delta,
            tol: 1e-12 * curve.diameter(),
        })
    }

    fn certainly_exterior(&self, p: [f64; 2]) -> bool {
        let inside = point_in_polygon(&self.poly_gamma, p);
        match self.side {
            Side::Interior => !inside,
            Side::Exterior => inside,
        }
    }

    fn certainly_faithful(&self, p: [f64; 2]) -> bool {
        let inside = point_in_polygon(&self.poly_int, p);
        match self.side {
            Side::Interior => inside,
            Side::Exterior => !inside,
        }
    }

    fn nearest_node(&self, p: [f64; 2]) -> usize {
        let mut best = (0, f64::INFINITY);
        for (j, q) in self.curve.points.iter().enumerate() {
            let d = (q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2);
            if d < best.1 {
                best = (j, d);
            }
        }
        best.0
    }

    /// Label by coordinate inversion.
    pub fn resolve(&self, p: [f64; 2]) -> Result<(Label, Option<(f64, f64)>)> {
        let j = self.nearest_node(p);
        let (s, r) = invert_coordinates(self.curve, p, self.curve.s(j))?;
        let depth = self.side.sign() * r;
        Ok(if depth < -self.tol {
            (Label::Exterior, None)
        } else if depth < self.big_r {
            let r = if depth < 0.0 { 0.0 } else { r };
            (Label::Annulus, Some((s, r)))
        } else {
            (Label::Faithful, None)
        })
    }

    pub fn classify(&self, p: [f64; 2]) -> Result<(Label, Option<(f64, f64)>)> {
        if self.certainly_exterior(p) {
            Ok((Label::Exterior, None))
        } else if self.certainly_faithful(p) {
            Ok((Label::Faithful, None))
        } else {
            self.resolve(p)
        }
    }

    fn segments(poly: &[[f64; 2]]) -> Vec<([f64; 2], [f64; 2])> {
        let n = poly.len();
        (0..n)
            .map(|i| {
                let (a, b) = (poly[i], poly[(i + 1) % n]);
                ([a[0].min(b[0]), a[1].min(b[1])], [a[0].max(b[0]), a[1].max(b[1])])
            })
            .collect()
    }
}

struct Walk<'c, 'a> {
    cl: &'c Classifier<'a>,
    grid: &'c RegularGrid,
    boxes: Vec<([f64; 2], [f64; 2])>,
    labels: Vec<Option<Label>>,
    coords: Vec<Option<(f64, f64)>>,
    newton: usize,
}

impl Walk<'_, '_> {
    fn cell(&mut self, ix: (usize, usize), iy: (usize, usize), edges: Vec<u32>) -> Result<()> {
        if ix.0 >= ix.1 || iy.0 >= iy.1 {
            return Ok(());
        }
        let g = &self.grid.spec;
        let eps = 1e-9 * g.h;
        let lo = [g.x0 + ix.0 as f64 * g.h - eps, g.y0 + iy.0 as f64 * g.h - eps];
        let hi = [g.x0 + (ix.1 - 1) as f64 * g.h + eps, g.y0 + (iy.1 - 1) as f64 * g.h + eps];
        let edges: Vec<u32> = edges
            .into_iter()
            .filter(|&e| {
                let (a, b) = self.boxes[e as usize];
                a[0] <= hi[0] && b[0] >= lo[0] && a[1] <= hi[1] && b[1] >= lo[1]
            })
            .collect();
        let nodes = || (iy.0..iy.1).flat_map(move |y| (ix.0..ix.1).map(move |x| (x, y)));
        if edges.is_empty() {
            let p = g.node(ix.0, iy.0);
            let whole = if self.cl.certainly_exterior(p) {
                Some(Label::Exterior)
            } else if self.cl.certainly_faithful(p) {
                Some(Label::Faithful)
            } else {
                None
            };
            if let Some(l) = whole {
                for (x, y) in nodes() {
                    self.labels[y * g.nx + x] = Some(l);
                }
                return Ok(());
            }
        }
        if (ix.1 - ix.0 <= 4 && iy.1 - iy.0 <= 4) || edges.is_empty() {
            for (x, y) in nodes() {
                let p = g.node(x, y);
                let (l, c) = if edges.is_empty() {
                    self.newton += 1;
                    self.cl.resolve(p)?
                } else {
                    let quick = if self.cl.certainly_exterior(p) {
                        Some(Label::Exterior)
                    } else if self.cl.certainly_faithful(p) {
                        Some(Label::Faithful)
                    } else {
                        None
                    };
                    match quick {
                        Some(l) => (l, None),
                        None => {
                            self.newton += 1;
                            self.cl.resolve(p)?
                        }
                    }
                };
                self.labels[y * g.nx + x] = Some(l);
                self.coords[y * g.nx + x] = c;
            }
            return Ok(());
        }
        let mx = (ix.0 + ix.1) / 2;
        let my = (iy.0 + iy.1) / 2;
        for (a, b) in [((ix.0, mx), (iy.0, my)), ((mx, ix.1), (iy.0, my)), ((ix.0, mx), (my, iy.1)), ((mx, ix.1), (my, iy.1))] {
            self.cell(a, b, edges.clone())?;
        }
        Ok(())
    }
}

/// Label every node of `grid`. Cells of a quadtree that meet neither
/// polygon are labeled wholesale; the rest get per-node polygon tests and,
/// in the uncertain band, coordinate inversion.
pub fn classify_points(annulus: &AnnularGrid, grid: &RegularGrid) -> Result<GridClassification> {
    let cl = Classifier::new(annulus)?;
    let mut boxes = Classifier::segments(&cl.poly_gamma);
    boxes.extend(Classifier::segments(&cl.poly_int));
    let all: Vec<u32> = (0..boxes.len() as u32).collect();
    let total = grid.len();
    let mut walk = Walk { cl: &cl, grid, boxes, labels: vec![None; total], coords: vec![None; total], newton: 0 };
    walk.cell((0, grid.spec.nx), (0, grid.spec.ny), all)?;
    let mut out = GridClassification {
        labels: Vec::with_capacity(total),
        exterior: vec![],
        annulus: vec![],
        faithful: vec![],
        coords: vec![],
        delta: cl.delta,
        newton_count: walk.newton,
    };
    for (i, (l, c)) in walk.labels.into_iter().zip(walk.coords).enumerate() {
        let l = l.expect("quadtree covers every node");
        out.labels.push(l);
        match l {
            Label::Exterior => out.exterior.push(i),
            Label::Faithful => out.faithful.push(i),
            Label::Annulus => {
                out.annulus.push(i);
                out.coords.push(c.expect("annulus nodes carry coordinates"));
            }
        }
    }
    Ok(out)
}
