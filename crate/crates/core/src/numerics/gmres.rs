//! Left-preconditioned GMRES without restarts.

use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct GmresOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// Relative preconditioned residual after each iteration, starting at 1.
    pub history: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Solves `apply(x) = rhs` to `‖P(rhs − Ax)‖ ≤ tol‖P rhs‖`, starting from zero.
pub fn gmres<A, P>(
    mut apply: A,
    mut precondition: P,
    rhs: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<GmresOutcome>
where
    A: FnMut(&[f64]) -> Vec<f64>,
    P: FnMut(&[f64]) -> Vec<f64>,
{
    let n = rhs.len();
    let r0 = precondition(rhs);
    let beta = norm(&r0);
    if beta == 0.0 {
        return Ok(GmresOutcome { x: vec![0.0; n], iterations: 0, history: vec![0.0] });
    }
    let mut basis: Vec<Vec<f64>> = vec![r0.iter().map(|v| v / beta).collect()];
    // Hessenberg columns, already rotated.
    let mut hcols: Vec<Vec<f64>> = Vec::new();
    let mut cs: Vec<f64> = Vec::new();
    let mut sn: Vec<f64> = Vec::new();
    let mut g = vec![beta];
    let mut history = vec![1.0];

    let solution = |hcols: &Vec<Vec<f64>>, g: &Vec<f64>, basis: &Vec<Vec<f64>>| {
        let k = hcols.len();
        let mut y = vec![0.0; k];
        for i in (0..k).rev() {
            let mut s = g[i];
            for j in i + 1..k {
                s -= hcols[j][i] * y[j];
            }
            y[i] = s / hcols[i][i];
        }
        let mut x = vec![0.0; n];
        for (yj, v) in y.iter().zip(basis) {
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi += yj * vi;
            }
        }
        x
    };

    for j in 0..max_iter {
        let mut w = precondition(&apply(&basis[j]));
        let mut h = vec![0.0; j + 2];
        for _pass in 0..2 {
            for (i, v) in basis.iter().enumerate() {
                let c = dot(&w, v);
                h[i] += c;
                for (wk, vk) in w.iter_mut().zip(v) {
                    *wk -= c * vk;
                }
            }
        }
        let hnext = norm(&w);
        h[j + 1] = hnext;
        for i in 0..j {
            let (a, b) = (h[i], h[i + 1]);
            h[i] = cs[i] * a + sn[i] * b;
            h[i + 1] = -sn[i] * a + cs[i] * b;
        }
        let (a, b) = (h[j], h[j + 1]);
        let r = a.hypot(b);
        let (c, s) = if r == 0.0 { (1.0, 0.0) } else { (a / r, b / r) };
        cs.push(c);
        sn.push(s);
        h[j] = r;
        h[j + 1] = 0.0;
        let gj = g[j];
        g[j] = c * gj;
        g.push(-s * gj);
        hcols.push(h);
        let rel = g[j + 1].abs() / beta;
        history.push(rel);
        if rel <= tol {
            let x = solution(&hcols, &g, &basis);
            return Ok(GmresOutcome { x, iterations: j + 1, history });
        }
        if hnext < 1e-30 || r == 0.0 {
            let best = solution(&hcols, &g, &basis);
            return Err(Error::NoConvergence {
                stage: "gmres breakdown",
                iterations: j + 1,
                residual: rel,
                history,
                best,
            });
        }
        basis.push(w.iter().map(|v| v / hnext).collect());
    }
    let best = solution(&hcols, &g, &basis);
    Err(Error::NoConvergence {
        stage: "gmres",
        iterations: max_iter,
        residual: *history.last().unwrap(),
        history,
        best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{Array1, Array2};
    use ndarray_linalg::Solve;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn id(v: &[f64]) -> Vec<f64> {
        v.to_vec()
    }

    #[test]
    fn identity_one_iteration() {
        let b = vec![1.0, 2.0, 3.0];
        let out = gmres(id, id, &b, 1e-14, 10).unwrap();
        assert_eq!(out.iterations, 1);
        assert!(out.x.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-15));
    }

    #[test]
    fn diagonal_krylov_exactness() {
        let d = 12;
        let b: Vec<f64> = (0..d).map(|i| 1.0 + i as f64).collect();
        let apply = |v: &[f64]| v.iter().enumerate().map(|(i, x)| (i + 1) as f64 * x).collect();
        let out = gmres(apply, id, &b, 1e-14, 50).unwrap();
        assert!(out.iterations <= d);
        assert!(out.x.iter().all(|x| (x - 1.0).abs() < 1e-12));
    }

    #[test]
    fn random_system_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 50;
        let a = Array2::from_shape_fn((n, n), |(i, j)| {
            let diag = if i == j { 4.0 } else { 0.0 };
            diag + rng.gen_range(-0.5..0.5) / (n as f64).sqrt()
        });
        let b = Array1::from_shape_fn(n, |_| rng.gen_range(-1.0..1.0));
        let exact = a.solve(&b).unwrap();
        let out = gmres(|v| a.dot(&Array1::from(v.to_vec())).to_vec(), id, b.as_slice().unwrap(), 1e-15, 100)
            .unwrap();
        let err = out.x.iter().zip(exact.iter()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");
        assert!(out.history.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)));
    }

    #[test]
    fn preconditioner_exact_inverse() {
        let apply = |v: &[f64]| v.iter().map(|x| 3.0 * x).collect();
        let pre = |v: &[f64]| v.iter().map(|x| x / 3.0).collect();
        let out = gmres(apply, pre, &[1.0, -1.0], 1e-14, 5).unwrap();
        assert_eq!(out.iterations, 1);
    }

    #[test]
    fn max_iter_reports_history() {
        let apply = |v: &[f64]| v.iter().enumerate().map(|(i, x)| (i + 1) as f64 * x).collect();
        let b = vec![1.0; 30];
        match gmres(apply, id, &b, 1e-14, 3) {
            Err(Error::NoConvergence { history, best, .. }) => {
                assert_eq!(history.len(), 4);
                assert_eq!(best.len(), 30);
            }
            _ => panic!("expected failure"),
        }
    }

    #[test]
    fn zero_rhs() {
        let out = gmres(id, id, &[0.0; 4], 1e-14, 5).unwrap();
        assert_eq!(out.iterations, 0);
        assert!(out.x.iter().all(|&x| x == 0.0));
    }
}
