//! Gaussian quadrature rules used across the crate.
//!
//! Nodes are obtained with the Golub-Welsch method: the eigenvalues of the
//! symmetric tridiagonal Jacobi matrix of the orthogonal-polynomial family,
//! refined by one or two Newton steps on the three-term recurrence.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Eigenvalues of a symmetric tridiagonal matrix, ascending.
///
/// `diag` has length n, `offdiag` length n-1.
pub(crate) fn sym_tridiag_eigenvalues(diag: &[f64], offdiag: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = diag[i];
        if i + 1 < n {
            m[(i, i + 1)] = offdiag[i];
            m[(i + 1, i)] = offdiag[i];
        }
    }
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

/// Gauss-Legendre rule with `n` nodes on [-1, 1], weight 1.
///
/// Exact for polynomials of degree <= 2n-1. Nodes ascending.
pub(crate) fn gauss_legendre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::domain("Gauss-Legendre rule needs n >= 1"));
    }
    // Jacobi matrix of the Legendre family: zero diagonal,
    // offdiag_k = k / sqrt(4k^2 - 1).
    let diag = vec![0.0; n];
    let offdiag: Vec<f64> = (1..n)
        .map(|k| {
            let k = k as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        })
        .collect();
    let mut nodes = sym_tridiag_eigenvalues(&diag, &offdiag);

    let mut weights = vec![0.0; n];
    for (i, x) in nodes.iter_mut().enumerate() {
        // Newton refinement on P_n, then the classical weight formula
        // w = 2 / ((1 - x^2) P_n'(x)^2).
        for _ in 0..3 {
            let (p, dp) = legendre_and_derivative(n, *x);
            let step = p / dp;
            *x -= step;
            if step.abs() < 1e-15 * x.abs().max(1e-3) {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(n, *x);
        weights[i] = 2.0 / ((1.0 - *x * *x) * dp * dp);
    }
    Ok((nodes, weights))
}

/// Legendre polynomial P_n(x) and its derivative via the standard recurrence.
pub(crate) fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut p_prev = 1.0;
    let mut p_curr = x;
    for k in 1..n {
        let k = k as f64;
        let p_next = ((2.0 * k + 1.0) * x * p_curr - k * p_prev) / (k + 1.0);
        p_prev = p_curr;
        p_curr = p_next;
    }
    let n_f = n as f64;
    let dp = if (x * x - 1.0).abs() < 1e-300 {
        // P_n'(+-1) = (+-1)^{n+1} n(n+1)/2
        let sign = if x > 0.0 || n % 2 == 1 { 1.0 } else { -1.0 };
        sign * n_f * (n_f + 1.0) / 2.0
    } else {
        n_f * (x * p_curr - p_prev) / (x * x - 1.0)
    };
    (p_curr, dp)
}

/// Plain Legendre polynomial P_n(x).
pub(crate) fn legendre(n: usize, x: f64) -> f64 {
    legendre_and_derivative(n, x).0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_small_orders() {
        let x = 0.37;
        assert!((legendre(0, x) - 1.0).abs() < 1e-15);
        assert!((legendre(1, x) - x).abs() < 1e-15);
        assert!((legendre(2, x) - (1.5 * x * x - 0.5)).abs() < 1e-15);
        assert!((legendre(3, x) - (2.5 * x * x * x - 1.5 * x)).abs() < 1e-15);
    }

    #[test]
    fn gauss_legendre_one_point() {
        let (nodes, weights) = gauss_legendre(1).unwrap();
        assert!(nodes[0].abs() < 1e-15);
        assert!((weights[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn gauss_legendre_integrates_monomials_exactly() {
        for n in [2usize, 5, 16, 64] {
            let (nodes, weights) = gauss_legendre(n).unwrap();
            for k in 0..2 * n {
                let quad: f64 = nodes
                    .iter()
                    .zip(&weights)
                    .map(|(x, w)| w * x.powi(k as i32))
                    .sum();
                // integral of x^k over [-1,1]
                let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
                assert!(
                    (quad - exact).abs() < 1e-13,
                    "n={n} k={k}: {quad} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn gauss_legendre_nodes_ascending_and_symmetric() {
        let (nodes, weights) = gauss_legendre(9).unwrap();
        for i in 1..nodes.len() {
            assert!(nodes[i] > nodes[i - 1]);
        }
        for i in 0..nodes.len() {
            assert!((nodes[i] + nodes[nodes.len() - 1 - i]).abs() < 1e-14);
            assert!((weights[i] - weights[nodes.len() - 1 - i]).abs() < 1e-14);
        }
    }
}
