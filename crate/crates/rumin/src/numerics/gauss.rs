//! Gauss–Legendre rules, computed by Newton iteration on the Legendre
//! recurrence and cached per order.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Nodes and weights on `[-1, 1]`.
#[allow(clippy::type_complexity)]
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1);
    static CACHE: OnceLock<Mutex<HashMap<usize, (Vec<f64>, Vec<f64>)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard.entry(order).or_insert_with(|| compute(order)).clone()
}

/// Nodes and weights transported to `[a, b]`.
pub fn gauss_legendre_on(order: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(order);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        x.iter().map(|xi| mid + half * xi).collect(),
        w.iter().map(|wi| wi * half).collect(),
    )
}

fn compute(order: usize) -> (Vec<f64>, Vec<f64>) {
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Chebyshev-based initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_and_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(n, x);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = (n as f64) * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        // order m integrates degree 2m−1 exactly
        for order in [2usize, 8, 16, 24] {
            let (x, w) = gauss_legendre(order);
            assert_eq!(x.len(), order);
            for k in 0..(2 * order) {
                let num: f64 = x
                    .iter()
                    .zip(&w)
                    .map(|(xi, wi)| wi * xi.powi(k as i32))
                    .sum();
                let exact = if k % 2 == 1 {
                    0.0
                } else {
                    2.0 / (k as f64 + 1.0)
                };
                assert!(
                    (num - exact).abs() < 1e-12,
                    "order {order} degree {k}: {num} vs {exact}"
                );
            }
            let s: f64 = w.iter().sum();
            assert!((s - 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn shifted_interval() {
        let (x, w) = gauss_legendre_on(16, 0.0, 1.0);
        let s: f64 = w.iter().sum();
        assert!((s - 1.0).abs() < 1e-13);
        let v: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(3)).sum();
        assert!((v - 0.25).abs() < 1e-14);
        assert!(x.iter().all(|&t| (0.0..=1.0).contains(&t)));
    }
}
