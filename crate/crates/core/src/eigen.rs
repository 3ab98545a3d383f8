//! Second-smallest Laplacian eigenpair by restarted Lanczos.
//!
//! Only products with the Laplacian are used. Every Krylov vector is
//! orthogonalized against the constant vector and all earlier basis vectors
//! (twice), and the basis is rebuilt from the current Ritz vector at each
//! restart. The residual test is relative to the Gershgorin bound
//! `max(1, 2 * max weighted degree)` on the spectrum.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{HcError, Result};
use crate::graph::Graph;

const KRYLOV_DIM: usize = 40;
const START_SEED: u64 = 0x5eed_f1ed;

fn laplacian_mul(g: &Graph, x: &[f64], out: &mut [f64]) {
    for v in 0..g.n() {
        let mut acc = 0.0;
        for &(u, w) in g.neighbors(v) {
            acc += w * (x[v] - x[u]);
        }
        out[v] = acc;
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn remove_mean(x: &mut [f64]) {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter_mut().for_each(|v| *v -= mean);
}

fn orthogonalize(x: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        remove_mean(x);
        for q in basis {
            let c = dot(x, q);
            x.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
        }
    }
}

/// Returns `(lambda_2, unit eigenvector orthogonal to the all-ones vector)`.
///
/// Requires `n >= 2`. `max_matvecs` bounds the total number of Laplacian products.
pub fn fiedler_pair(g: &Graph, tol: f64, max_matvecs: usize) -> Result<(f64, Vec<f64>)> {
    let n = g.n();
    assert!(n >= 2, "fiedler_pair needs at least two vertices");
    let scale = (0..n).map(|v| 2.0 * g.weighted_degree(v)).fold(1.0, f64::max);
    let threshold = tol * scale;

    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let mut start: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    orthogonalize(&mut start, &[]);

    let dim = KRYLOV_DIM.min(n - 1);
    let mut matvecs = 0;
    let mut work = vec![0.0; n];
    let mut last_residual = f64::INFINITY;
    loop {
        let s = norm(&start);
        start.iter_mut().for_each(|v| *v /= s);
        let mut basis: Vec<Vec<f64>> = vec![start.clone()];
        let mut alpha = Vec::with_capacity(dim);
        let mut beta: Vec<f64> = Vec::with_capacity(dim);
        for j in 0..dim {
            laplacian_mul(g, &basis[j], &mut work);
            matvecs += 1;
            alpha.push(dot(&work, &basis[j]));
            let mut next = work.clone();
            orthogonalize(&mut next, &basis);
            let b = norm(&next);
            if j + 1 == dim || b <= 1e-12 * scale {
                break;
            }
            next.iter_mut().for_each(|v| *v /= b);
            beta.push(b);
            basis.push(next);
        }
        let k = alpha.len();
        let mut tri = DMatrix::<f64>::zeros(k, k);
        for i in 0..k {
            tri[(i, i)] = alpha[i];
            if i + 1 < k {
                tri[(i, i + 1)] = beta[i];
                tri[(i + 1, i)] = beta[i];
            }
        }
        let eig = SymmetricEigen::new(tri);
        let (idx, _) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty tridiagonal");
        let mut ritz = vec![0.0; n];
        for (i, q) in basis.iter().take(k).enumerate() {
            let c = eig.eigenvectors[(i, idx)];
            ritz.iter_mut().zip(q).for_each(|(r, x)| *r += c * x);
        }
        orthogonalize(&mut ritz, &[]);
        let r = norm(&ritz);
        ritz.iter_mut().for_each(|v| *v /= r);

        laplacian_mul(g, &ritz, &mut work);
        matvecs += 1;
        let lambda = dot(&work, &ritz);
        let residual = work
            .iter()
            .zip(&ritz)
            .map(|(a, b)| (a - lambda * b).powi(2))
            .sum::<f64>()
            .sqrt();
        last_residual = last_residual.min(residual);
        if residual <= threshold {
            return Ok((lambda, ritz));
        }
        if matvecs >= max_matvecs {
            return Err(HcError::EigenNoConvergence { tol, iters: matvecs, residual: last_residual });
        }
        start = ritz;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|i| (i - 1, i, 1.0))).unwrap()
    }

    #[test]
    fn path_eigenvalue_matches_closed_form() {
        for n in [2, 3, 4, 10, 60, 200] {
            let (lambda, x) = fiedler_pair(&path(n), 1e-8, 100_000).unwrap();
            let expected = 2.0 - 2.0 * (std::f64::consts::PI / n as f64).cos();
            assert!((lambda - expected).abs() < 1e-7, "n={n}: {lambda} vs {expected}");
            // monotone along the path
            let increasing = x.windows(2).all(|w| w[0] <= w[1] + 1e-9);
            let decreasing = x.windows(2).all(|w| w[0] >= w[1] - 1e-9);
            assert!(increasing || decreasing);
        }
    }

    #[test]
    fn clique_has_degenerate_eigenvalue_n() {
        let n = 6;
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j, 1.0));
            }
        }
        let (lambda, _) = fiedler_pair(&Graph::new(n, edges).unwrap(), 1e-8, 10_000).unwrap();
        assert!((lambda - n as f64).abs() < 1e-8);
    }

    #[test]
    fn reports_non_convergence() {
        let r = fiedler_pair(&path(400), 1e-14, 3);
        assert!(matches!(r, Err(HcError::EigenNoConvergence { .. })));
    }
}
