//! Geometries and manufactured problems known to the front end.

use crate::geometry::{Circle, Ellipse, Kite, Parametrization, Star};
use crate::gridsolve::PdeKind;
use crate::numerics::bessel;
use crate::Error;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveSpec {
    Circle {
        #[serde(default)]
        center: [f64; 2],
        #[serde(default = "one")]
        radius: f64,
    },
    Ellipse {
        #[serde(default)]
        center: [f64; 2],
        a: f64,
        b: f64,
    },
    Star {
        #[serde(default = "one")]
        radius: f64,
        #[serde(default = "star_amplitude")]
        amplitude: f64,
        #[serde(default = "star_lobes")]
        lobes: u32,
    },
    Kite {
        #[serde(default = "one")]
        scale: f64,
        #[serde(default = "kite_k")]
        k: f64,
        #[serde(default = "kite_e")]
        elongation: f64,
    },
}

fn one() -> f64 {
    1.0
}
fn star_amplitude() -> f64 {
    Star::default().amplitude
}
fn star_lobes() -> u32 {
    Star::default().lobes
}
fn kite_k() -> f64 {
    Kite::default().k
}
fn kite_e() -> f64 {
    Kite::default().elongation
}

impl Default for CurveSpec {
    fn default() -> Self {
        let s = Star::default();
        CurveSpec::Star { radius: s.radius, amplitude: s.amplitude, lobes: s.lobes }
    }
}

impl CurveSpec {
    pub fn parametrization(&self) -> Box<dyn Parametrization> {
        match *self {
            CurveSpec::Circle { center, radius } => Box::new(Circle { center, radius }),
            CurveSpec::Ellipse { center, a, b } => Box::new(Ellipse { center, a, b }),
            CurveSpec::Star { radius, amplitude, lobes } => Box::new(Star { radius, amplitude, lobes }),
            CurveSpec::Kite { scale, k, elongation } => Box::new(Kite { scale, k, elongation }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum PdeSpec {
    Poisson,
    ModifiedHelmholtz { alpha: f64 },
}

impl From<PdeSpec> for PdeKind {
    fn from(p: PdeSpec) -> Self {
        match p {
            PdeSpec::Poisson => PdeKind::Poisson,
            PdeSpec::ModifiedHelmholtz { alpha } => PdeKind::ModifiedHelmholtz { alpha },
        }
    }
}

/// Named manufactured solutions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemId {
    /// u = e^{sin x} sin 2y + ln(0.1 + cos² y).
    StarPoisson,
    /// u = cos(20 √(x² + y²)).
    RadialCosine,
    /// L u = 0: e^x cos y + x² − y² for Poisson, an exterior K₀ pole otherwise.
    Homogeneous,
}

/// A manufactured solution u with f = L u and g = u on Γ.
#[derive(Clone, Copy, Debug)]
pub struct Manufactured {
    pub id: ProblemId,
    pub pde: PdeKind,
}

const POLE: [f64; 2] = [1.9, 1.3];

impl Manufactured {
    pub fn new(id: ProblemId, pde: PdeKind) -> Self {
        Self { id, pde }
    }

    pub fn u(&self, x: f64, y: f64) -> f64 {
        match self.id {
            ProblemId::StarPoisson => x.sin().exp() * (2.0 * y).sin() + (0.1 + y.cos().powi(2)).ln(),
            ProblemId::RadialCosine => (20.0 * x.hypot(y)).cos(),
            ProblemId::Homogeneous => match self.pde {
                PdeKind::Poisson => x.exp() * y.cos() + x * x - y * y,
                PdeKind::ModifiedHelmholtz { alpha } => bessel::k0(alpha * (x - POLE[0]).hypot(y - POLE[1])),
            },
        }
    }

    pub fn laplacian(&self, x: f64, y: f64) -> f64 {
        match self.id {
            ProblemId::StarPoisson => {
                let e = x.sin().exp();
                let a = e * (2.0 * y).sin() * (x.cos().powi(2) - x.sin() - 4.0);
                let q = 0.1 + y.cos().powi(2);
                let b = -2.0 * (2.0 * y).cos() / q - ((2.0 * y).sin() / q).powi(2);
                a + b
            }
            ProblemId::RadialCosine => {
                let r = x.hypot(y);
                // sin(20r)/r → 20 at the origin
                let sinc = if r < 1e-8 { 20.0 } else { (20.0 * r).sin() / r };
                -400.0 * (20.0 * r).cos() - 20.0 * sinc
            }
            ProblemId::Homogeneous => self.pde.alpha2() * self.u(x, y),
        }
    }

    /// f = Δu for Poisson, (α² − Δ)u otherwise.
    pub fn f(&self, x: f64, y: f64) -> f64 {
        match self.pde {
            PdeKind::Poisson => self.laplacian(x, y),
            PdeKind::ModifiedHelmholtz { alpha } => alpha * alpha * self.u(x, y) - self.laplacian(x, y),
        }
    }
}

pub fn unknown(kind: &str, name: &str) -> Error {
    Error::Config(format!("unknown {kind} '{name}'"))
}
