//! Sums of free-space point sources at many targets.
//!
//! Targets are binned into square boxes. Sources at least three box radii
//! from a box center are gathered into a local expansion about that center
//! (Taylor series of the logarithm, Graf's addition theorem for K₀); the
//! rest are summed directly.

use crate::numerics::bessel;
use crate::PdeKind;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Expansion order; far sources sit at ratio ≤ 1/3, and 3⁻³⁶ < 1e-17.
const P: usize = 36;
const FAR_RATIO: f64 = 3.0;
/// Targets per box aimed for.
const PER_BOX: f64 = 100.0;
/// Below this many source-target pairs the direct sum is used.
const DIRECT_PAIRS: usize = 1 << 21;
/// K₀(x) < 1e-18 for x > 40.
const K0_CUTOFF: f64 = 40.0;

/// u(x) = Σ_j q_j G(x − y_j) with G = −ln ρ/(2π) or K₀(αρ)/(2π).
pub fn sum_point_sources(pde: PdeKind, sources: &[[f64; 2]], q: &[f64], targets: &[[f64; 2]]) -> Vec<f64> {
    assert_eq!(sources.len(), q.len());
    if targets.len().saturating_mul(sources.len()) < DIRECT_PAIRS {
        direct(pde, sources, q, targets)
    } else {
        boxed(pde, sources, q, targets)
    }
}

pub fn direct(pde: PdeKind, sources: &[[f64; 2]], q: &[f64], targets: &[[f64; 2]]) -> Vec<f64> {
    let mut out = vec![0.0; targets.len()];
    let idx: Vec<usize> = (0..sources.len()).collect();
    for (o, t) in out.iter_mut().zip(targets) {
        *o = near_sum(pde, sources, q, &idx, *t);
    }
    out
}

fn near_sum(pde: PdeKind, sources: &[[f64; 2]], q: &[f64], idx: &[usize], t: [f64; 2]) -> f64 {
    let mut acc = 0.0;
    match pde {
        PdeKind::Poisson => {
            for &j in idx {
                let (dx, dy) = (t[0] - sources[j][0], t[1] - sources[j][1]);
                acc += q[j] * (dx * dx + dy * dy).ln();
            }
            -acc / (4.0 * PI)
        }
        PdeKind::ModifiedHelmholtz { alpha } => {
            let cut2 = (K0_CUTOFF / alpha).powi(2);
            for &j in idx {
                let (dx, dy) = (t[0] - sources[j][0], t[1] - sources[j][1]);
                let r2 = dx * dx + dy * dy;
                if r2 < cut2 {
                    acc += q[j] * bessel::k0(alpha * r2.sqrt());
                }
            }
            acc / (2.0 * PI)
        }
    }
}

/// The box-partitioned sum regardless of problem size.
pub fn boxed(pde: PdeKind, sources: &[[f64; 2]], q: &[f64], targets: &[[f64; 2]]) -> Vec<f64> {
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for t in targets {
        for d in 0..2 {
            lo[d] = lo[d].min(t[d]);
            hi[d] = hi[d].max(t[d]);
        }
    }
    let nt = targets.len() as f64;
    let (wx, wy) = (hi[0] - lo[0], hi[1] - lo[1]);
    // the second bound keeps the box count near nt/PER_BOX for thin clouds
    let mut side = (PER_BOX * wx * wy / nt).sqrt().max(PER_BOX * wx.max(wy) / nt).max(1e-12);
    if let PdeKind::ModifiedHelmholtz { alpha } = pde {
        // keeps α·(box radius) ≤ √2 so the Graf series does not cancel
        side = side.min(2.0 / alpha);
        if (wx / side + 1.0) * (wy / side + 1.0) > 16.0 * nt {
            return direct(pde, sources, q, targets);
        }
    }
    let nbx = (((hi[0] - lo[0]) / side).floor() as usize + 1).max(1);
    let nby = (((hi[1] - lo[1]) / side).floor() as usize + 1).max(1);
    let cell = |t: &[f64; 2]| {
        let ix = (((t[0] - lo[0]) / side) as usize).min(nbx - 1);
        let iy = (((t[1] - lo[1]) / side) as usize).min(nby - 1);
        iy * nbx + ix
    };
    // counting sort of targets by box
    let mut start = vec![0usize; nbx * nby + 1];
    for t in targets {
        start[cell(t) + 1] += 1;
    }
    for b in 0..nbx * nby {
        start[b + 1] += start[b];
    }
    let mut fill = start.clone();
    let mut order = vec![0usize; targets.len()];
    for (i, t) in targets.iter().enumerate() {
        let c = cell(t);
        order[fill[c]] = i;
        fill[c] += 1;
    }

    let mut out = vec![0.0; targets.len()];
    let mut near = Vec::new();
    let mut coef = vec![Complex64::new(0.0, 0.0); P + 1];
    for b in 0..nbx * nby {
        let members = &order[start[b]..start[b + 1]];
        if members.is_empty() {
            continue;
        }
        let c = [lo[0] + side * ((b % nbx) as f64 + 0.5), lo[1] + side * ((b / nbx) as f64 + 0.5)];
        let rb = side * std::f64::consts::FRAC_1_SQRT_2;
        near.clear();
        coef.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        let mut any_far = false;
        for (j, s) in sources.iter().enumerate() {
            let w = Complex64::new(s[0] - c[0], s[1] - c[1]);
            let d = w.norm();
            if d < FAR_RATIO * rb {
                near.push(j);
                continue;
            }
            match pde {
                PdeKind::Poisson => {
                    any_far = true;
                    laplace_local(&mut coef, q[j], w, rb);
                }
                PdeKind::ModifiedHelmholtz { alpha } => {
                    if alpha * (d - rb) < K0_CUTOFF {
                        any_far = true;
                        graf_local(&mut coef, q[j], w, d, alpha, rb);
                    }
                }
            }
        }
        for &i in members {
            let t = targets[i];
            let mut v = near_sum(pde, sources, q, &near, t);
            if any_far {
                let z = Complex64::new(t[0] - c[0], t[1] - c[1]) / rb;
                v += match pde {
                    PdeKind::Poisson => laplace_eval(&coef, z),
                    PdeKind::ModifiedHelmholtz { alpha } => graf_eval(&coef, z, alpha * rb),
                };
            }
            out[i] = v;
        }
    }
    out
}

// −ln|x − y|/(2π) with w = y − c, z = (x − c)/r_b:
// ln|x − y| = ln|w| − Re Σ_{n≥1} zⁿ (r_b/w)ⁿ/n
fn laplace_local(coef: &mut [Complex64], q: f64, w: Complex64, rb: f64) {
    let c = -q / (2.0 * PI);
    coef[0] += c * w.norm().ln();
    let ratio = rb / w;
    let mut pw = ratio;
    for (n, a) in coef.iter_mut().enumerate().skip(1) {
        *a -= c * pw / n as f64;
        pw *= ratio;
    }
}

fn laplace_eval(coef: &[Complex64], z: Complex64) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for a in coef.iter().rev() {
        acc = acc * z + a;
    }
    acc.re
}

// K₀(α|w − z|) = Σ_n ε_n K_n(α|w|) I_n(α|z|) cos n(θ_z − θ_w), ε₀ = 1, ε_n = 2.
// Stored with K_n scaled by tⁿ and I_n by t⁻ⁿ, t = α r_b/2.
fn graf_local(coef: &mut [Complex64], q: f64, w: Complex64, d: f64, alpha: f64, rb: f64) {
    let c = q / (2.0 * PI);
    let x = alpha * d;
    let t = 0.5 * alpha * rb;
    let (k0, k1) = bessel::k01(x);
    let unit = w.conj() / d;
    let mut e = Complex64::new(1.0, 0.0);
    let (mut km, mut kn) = (k0, k1 * t);
    coef[0] += c * k0;
    for (n, a) in coef.iter_mut().enumerate().skip(1) {
        e *= unit;
        *a += 2.0 * c * kn * e;
        // K_{n+1} = K_{n−1} + (2n/x) K_n, scaled
        let next = t * t * km + 2.0 * n as f64 * t / x * kn;
        km = kn;
        kn = next;
    }
}

fn graf_eval(coef: &[Complex64], z: Complex64, arb: f64) -> f64 {
    // I_n(α|x − c|)/tⁿ = uⁿ/n! Σ_k qᵏ n!/(k!(n+k)!), u = |z|, q = (α|x − c|)²/4
    let u = z.norm();
    let qq = 0.25 * (arb * u).powi(2);
    let unit = if u > 0.0 { z / u } else { Complex64::new(1.0, 0.0) };
    let mut e = Complex64::new(1.0, 0.0);
    let mut lead = 1.0;
    let mut acc = 0.0;
    for (n, a) in coef.iter().enumerate() {
        if n > 0 {
            lead *= u / n as f64;
            e *= unit;
            if lead == 0.0 {
                break;
            }
        }
        let mut term = 1.0;
        let mut s = 1.0;
        let mut k = 1.0;
        while term > 1e-17 * s {
            term *= qq / (k * (n as f64 + k));
            s += term;
            k += 1.0;
        }
        acc += lead * s * (a * e).re;
    }
    acc
}
