//! On-surface single and principal-value double layer matrices by
//! Kress's logarithmic product quadrature.

use super::kernels::KernelSet;
use crate::geometry::BoundaryCurve;
use crate::gridsolve::PdeKind;
use crate::numerics::{bessel, fft};
use crate::Result;
use ndarray::Array2;
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// R_k with ∫ ln(4 sin²((t_i − τ)/2)) f(τ) dτ ≈ Σ_j R_{(i−j) mod N} f(t_j),
/// exact for trigonometric polynomials of degree < N/2.
pub fn kress_weights(n: usize) -> Vec<f64> {
    let mut a = vec![C64::new(0.0, 0.0); n];
    for m in 1..n / 2 {
        a[m] = C64::new(1.0 / m as f64, 0.0);
        a[n - m] = a[m];
    }
    let sums = fft::inverse_complex(a);
    let nf = n as f64;
    (0..n)
        .map(|k| {
            let alt = if k % 2 == 0 { 1.0 } else { -1.0 };
            -(4.0 * PI / nf) * 0.5 * sums[k].re - 4.0 * PI / (nf * nf) * alt
        })
        .collect()
}

/// Single and double layer operators evaluated on a curve.
#[derive(Clone, Debug)]
pub struct LayerMatrices {
    /// Rows: nodes of `check`; columns: density nodes of the input curve.
    pub single: Array2<f64>,
    pub double: Array2<f64>,
    pub check: BoundaryCurve,
}

/// Window for the logarithmic split of the modified Helmholtz kernel: 1
/// near the diagonal and negligible beyond |d| = width, so that the
/// exponentially growing I₀ factor never multiplies the log far away.
#[derive(Clone, Copy, Debug)]
struct Split {
    width: Option<f64>,
}

impl Split {
    fn chi(&self, d: f64) -> f64 {
        match self.width {
            None => 1.0,
            Some(w) => 0.5 * erfc(12.0 * (d.abs() / w - 0.5)),
        }
    }
}

/// Complementary error function: erf Taylor series below 2, Lentz
/// continued fraction above.
fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < 2.0 {
        // erf series
        let mut term = x;
        let mut sum = x;
        let x2 = x * x;
        let mut k = 0.0;
        loop {
            k += 1.0;
            term *= -x2 / k;
            let add = term / (2.0 * k + 1.0);
            sum += add;
            if add.abs() <= 1e-17 * sum.abs() {
                break;
            }
        }
        1.0 - 2.0 / PI.sqrt() * sum
    } else {
        // Lentz continued fraction for erfc
        let x2 = x * x;
        let tiny = 1e-300;
        let mut f = x;
        let mut c = x;
        let mut d = 0.0;
        for n in 1..300 {
            let an = n as f64 * 0.5;
            d = x + an * d;
            if d.abs() < tiny {
                d = tiny;
            }
            c = x + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let delta = c * d;
            f *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        (-x2).exp() / (PI.sqrt() * f)
    }
}

/// Upsampling factor that resolves the modified Helmholtz kernel and its
/// window on a curve of `n` nodes.
fn helmholtz_upsample(curve: &BoundaryCurve, alpha: f64) -> usize {
    if alpha == 0.0 {
        return 1;
    }
    let phi_max = curve.speed.iter().cloned().fold(0.0, f64::max);
    let a = (alpha * curve.h_max()).ceil() as usize;
    let b = (9.0 * alpha * phi_max / curve.len() as f64).ceil() as usize;
    a.max(b).max(1)
}

/// Rows `rows` (node indices of `fine`) of the Kress-discretized single
/// and double layer operators on `fine`.
fn kress_rows(fine: &BoundaryCurve, kernels: &KernelSet, rows: &[usize]) -> (Array2<f64>, Array2<f64>) {
    let n = fine.len();
    let w = 2.0 * PI / n as f64;
    let rk = kress_weights(n);
    let log4sin2: Vec<f64> = (0..n)
        .map(|k| if k == 0 { 0.0 } else { (4.0 * (PI * k as f64 / n as f64).sin().powi(2)).ln() })
        .collect();
    let alpha = kernels.pde.alpha();
    let split = match kernels.pde {
        PdeKind::Poisson => None,
        PdeKind::ModifiedHelmholtz { .. } => {
            let phi_max = fine.speed.iter().cloned().fold(0.0, f64::max);
            let width = if alpha * fine.diameter() <= 10.0 { None } else { Some(PI.min(16.0 / (alpha * phi_max))) };
            Some(Split { width })
        }
    };
    let mut sm = Array2::zeros((rows.len(), n));
    let mut dm = Array2::zeros((rows.len(), n));
    for (row, &i) in rows.iter().enumerate() {
        let x = fine.points[i];
        for j in 0..n {
            let k = (i + n - j) % n;
            let phi = fine.speed[j];
            if k == 0 {
                let kap = fine.curvature[i];
                dm[[row, j]] = w * phi * (-kap / (4.0 * PI));
                sm[[row, j]] = phi
                    * match split {
                        None => rk[0] * (-1.0 / (4.0 * PI)) + w * (-(phi * phi).ln() / (4.0 * PI)),
                        Some(_) => rk[0] * (-1.0 / (4.0 * PI)) + w * (-EULER_GAMMA - (alpha * phi / 2.0).ln()) / (2.0 * PI),
                    };
                continue;
            }
            let y = fine.points[j];
            let d = [x[0] - y[0], x[1] - y[1]];
            let rho2 = d[0] * d[0] + d[1] * d[1];
            let ny = fine.normals[j];
            let dg = kernels.dg_dny(d, ny);
            let lg = log4sin2[k];
            match split {
                None => {
                    sm[[row, j]] = phi * (rk[k] * (-1.0 / (4.0 * PI)) + w * (-(rho2.ln() - lg) / (4.0 * PI)));
                    dm[[row, j]] = w * phi * dg;
                }
                Some(sp) => {
                    let dpar = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 } * w;
                    let chi = sp.chi(dpar);
                    let rho = rho2.sqrt();
                    let (m1, m1d) = if chi < 1e-30 {
                        (0.0, 0.0)
                    } else {
                        let proj = -(d[0] * ny[0] + d[1] * ny[1]);
                        (
                            -bessel::i0(alpha * rho) * chi / (4.0 * PI),
                            -alpha * proj * bessel::i1(alpha * rho) / rho * chi / (4.0 * PI),
                        )
                    };
                    let g = kernels.g(rho2);
                    sm[[row, j]] = phi * (rk[k] * m1 + w * (g - m1 * lg));
                    dm[[row, j]] = phi * (rk[k] * m1d + w * (dg - m1d * lg));
                }
            }
        }
    }
    (sm, dm)
}

/// Layer operators mapping densities at the nodes of `curve` to on-surface
/// values (S and principal-value D) at the nodes of `curve` resampled to
/// `check_upsample`·N points.
pub fn layer_matrices(curve: &BoundaryCurve, kernels: &KernelSet, check_upsample: usize) -> Result<LayerMatrices> {
    let n = curve.len();
    let q = check_upsample.max(1);
    let check = if q == 1 { curve.clone() } else { curve.resample(q * n)? };
    let p = helmholtz_upsample(&check, kernels.pde.alpha());
    let total = q * p;
    let fine = if total == 1 { curve.clone() } else { curve.resample(total * n)? };
    let rows: Vec<usize> = (0..q * n).map(|i| i * p).collect();
    let (sf, df) = kress_rows(&fine, kernels, &rows);
    let (single, double) = if total == 1 {
        (sf, df)
    } else {
        let e = fft::interpolation_matrix(n, total * n);
        (sf.dot(&e), df.dot(&e))
    };
    Ok(LayerMatrices { single, double, check })
}

/// Square on-surface matrices (N × N).
pub fn self_layer_matrices(curve: &BoundaryCurve, kernels: &KernelSet) -> Result<(Array2<f64>, Array2<f64>)> {
    let m = layer_matrices(curve, kernels, 1)?;
    Ok((m.single, m.double))
}

/// On-surface S σ or principal-value D σ.
pub fn singular_selfeval(curve: &BoundaryCurve, density: &[f64], kind: super::LayerKind, kernels: &KernelSet) -> Result<Vec<f64>> {
    let (s, d) = self_layer_matrices(curve, kernels)?;
    let a = match kind {
        super::LayerKind::Single => s,
        super::LayerKind::Double => d,
    };
    let v = ndarray::ArrayView1::from(density);
    Ok(a.dot(&v).to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erfc_values() {
        // mpmath erfc at 40 digits
        for (x, v) in [
            (0.0, 1.0),
            (0.5, 0.4795001221869534623),
            (1.9, 0.007209570764742532763),
            (2.1, 0.002979466656332984286),
            (6.0, 2.151973671249891311e-17),
            (-1.0, 1.8427007929497148693),
        ] {
            assert!((erfc(x) - v).abs() <= 1e-14 * v + 1e-16, "{x}: {} vs {v}", erfc(x));
        }
    }

    #[test]
    fn kress_weights_integrate_log() {
        // ∫₀^{2π} ln(4 sin²(τ/2)) cos(mτ) dτ = −2π/m, and 0 for m = 0
        let n = 32;
        let r = kress_weights(n);
        for m in 0..n / 2 {
            let q: f64 = (0..n).map(|j| r[j] * (m as f64 * 2.0 * PI * j as f64 / n as f64).cos()).sum();
            let exact = if m == 0 { 0.0 } else { -2.0 * PI / m as f64 };
            assert!((q - exact).abs() < 1e-13, "{m}: {q}");
        }
    }
}
