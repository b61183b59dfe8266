//! Tensor quadrature with deterministic parallel reduction, and a smooth
//! parametrized rule for integrals over Korányi balls (n = 1).
//!
//! Parallel sums are chunked by node index with a fixed chunk size and the
//! per-chunk partial sums are combined by a pairwise tree in index order, so
//! results do not depend on the number of worker threads.

use super::gauss::{gauss_legendre, gauss_legendre_on};
use rayon::prelude::*;

/// Resolution of the numerical experiments: tensor grid points per axis for
/// the spatial rule (over the bump support box), the 1-D Gauss order of the
/// segment integral, and the bump radius as a fraction of the domain
/// inradius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub grid: usize,
    pub gauss: usize,
    pub bump_fraction: f64,
}

impl QuadratureSpec {
    pub fn new(grid: usize, gauss: usize) -> Self {
        QuadratureSpec {
            grid,
            gauss,
            bump_fraction: 0.5,
        }
    }

    /// One refinement step used by the monotonicity checks.
    pub fn refine(&self) -> Self {
        QuadratureSpec {
            grid: self.grid + 16,
            gauss: self.gauss + 8,
            bump_fraction: self.bump_fraction,
        }
    }
}

const CHUNK: usize = 4096;

/// Deterministic pairwise reduction of vector partial sums.
pub fn tree_reduce(mut partials: Vec<Vec<f64>>, dim: usize) -> Vec<f64> {
    if partials.is_empty() {
        return vec![0.0; dim];
    }
    while partials.len() > 1 {
        let mut next = Vec::with_capacity(partials.len().div_ceil(2));
        let mut it = partials.into_iter();
        while let Some(mut a) = it.next() {
            if let Some(b) = it.next() {
                for (x, y) in a.iter_mut().zip(&b) {
                    *x += y;
                }
            }
            next.push(a);
        }
        partials = next;
    }
    partials.pop().unwrap()
}

/// Sum `Σ_i contribution(i)` over `count` nodes into a `dim`-vector,
/// parallel over fixed chunks, bit-stable for a fixed node order.
pub fn par_sum<F>(count: usize, dim: usize, contribution: F) -> Vec<f64>
where
    F: Fn(usize, &mut [f64]) + Sync,
{
    let nchunks = count.div_ceil(CHUNK).max(1);
    let partials: Vec<Vec<f64>> = (0..nchunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![0.0; dim];
            let start = c * CHUNK;
            let end = (start + CHUNK).min(count);
            for i in start..end {
                contribution(i, &mut acc);
            }
            acc
        })
        .collect();
    tree_reduce(partials, dim)
}

/// Midpoint tensor grid over a box: flat coordinates (stride `dim`) and the
/// common cell weight.
pub fn midpoint_grid(box_: &[(f64, f64)], per_axis: usize) -> (Vec<f64>, f64) {
    let dim = box_.len();
    let mut cell = 1.0;
    let mut steps = Vec::with_capacity(dim);
    for &(lo, hi) in box_ {
        let h = (hi - lo) / per_axis as f64;
        cell *= h;
        steps.push((lo, h));
    }
    let count = per_axis.pow(dim as u32);
    let mut coords = vec![0.0; count * dim];
    for i in 0..count {
        let mut rem = i;
        for d in (0..dim).rev() {
            let k = rem % per_axis;
            rem /= per_axis;
            let (lo, h) = steps[d];
            coords[i * dim + d] = lo + (k as f64 + 0.5) * h;
        }
    }
    (coords, cell)
}

/// Quadrature nodes and weights for integrals of smooth compactly supported
/// integrands over a Euclidean ball (bump regions).
///
/// For `dim = 3` this is a tensor rule in spherical coordinates — radial
/// Gauss on `[0, R]`, polar Gauss on `[0, π]`, uniform azimuth — with
/// `res` points per parametrization axis; bump-type integrands are smooth
/// in these coordinates, so the rule converges spectrally. Higher
/// dimensions fall back to the midpoint box rule over the support box.
pub fn ball_nodes(center: &[f64], radius: f64, res: usize) -> (Vec<f64>, Vec<f64>) {
    let dim = center.len();
    if dim != 3 {
        let box_: Vec<(f64, f64)> = center.iter().map(|c| (c - radius, c + radius)).collect();
        let (coords, cell) = midpoint_grid(&box_, res);
        let count = coords.len() / dim;
        return (coords, vec![cell; count]);
    }
    let (r_n, r_w) = gauss_legendre_on(res, 0.0, radius);
    let (p_n, p_w) = gauss_legendre_on(res, 0.0, std::f64::consts::PI);
    let da = 2.0 * std::f64::consts::PI / res as f64;
    let mut coords = Vec::with_capacity(res * res * res * 3);
    let mut weights = Vec::with_capacity(res * res * res);
    for (ir, (&r, &wr)) in r_n.iter().zip(&r_w).enumerate() {
        let _ = ir;
        for (&p, &wp) in p_n.iter().zip(&p_w) {
            let (sp, cp) = p.sin_cos();
            for ia in 0..res {
                let a = (ia as f64 + 0.5) * da;
                coords.push(center[0] + r * sp * a.cos());
                coords.push(center[1] + r * sp * a.sin());
                coords.push(center[2] + r * cp);
                weights.push(wr * wp * da * r * r * sp);
            }
        }
    }
    (coords, weights)
}

/// Integral of `f` over the Korányi ball `B(e, r)` in ℍ¹ through the smooth
/// parametrization `(φ, a, τ) ↦ (r sinφ cos a, r sinφ sin a, T(φ) τ)` with
/// `T(φ) = (r²/4) cosφ √(1 + sin²φ)`; every factor is smooth, so the rule
/// converges spectrally. `res` controls all three axes.
pub fn koranyi_ball_integral<F>(r: f64, res: usize, f: F) -> f64
where
    F: Fn(&[f64; 3]) -> f64 + Sync,
{
    let (phi_n, phi_w) = gauss_legendre_on(res, 0.0, std::f64::consts::FRAC_PI_2);
    let (tau_n, tau_w) = gauss_legendre(res);
    let na = res;
    let da = 2.0 * std::f64::consts::PI / na as f64;

    let count = res * res * na;
    let acc = par_sum(count, 1, |idx, acc| {
        let ip = idx / (res * na);
        let rem = idx % (res * na);
        let it = rem / na;
        let ia = rem % na;
        let phi = phi_n[ip];
        let (sphi, cphi) = phi.sin_cos();
        let t_ext = (r * r / 4.0) * cphi * (1.0 + sphi * sphi).sqrt();
        let sigma = r * sphi;
        let a = (ia as f64 + 0.5) * da;
        let p = [sigma * a.cos(), sigma * a.sin(), t_ext * tau_n[it]];
        // measure: r² sinφ cosφ dφ · da · T dτ
        let w = phi_w[ip] * r * r * sphi * cphi * da * t_ext * tau_w[it];
        acc[0] += w * f(&p);
    });
    acc[0]
}

/// `‖g‖_{L^p}` over the Korányi ball in ℍ¹ for finite `p`.
pub fn koranyi_ball_lp_norm<F>(r: f64, res: usize, p: f64, g: F) -> f64
where
    F: Fn(&[f64; 3]) -> f64 + Sync,
{
    assert!(p.is_finite() && p >= 1.0);
    koranyi_ball_integral(r, res, |x| g(x).abs().powf(p)).powf(1.0 / p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heis::{gauge, GroupPoint};

    #[test]
    fn tree_reduce_is_order_fixed() {
        let parts = vec![vec![1.0], vec![2.0], vec![4.0], vec![8.0], vec![16.0]];
        assert_eq!(tree_reduce(parts, 1), vec![31.0]);
        assert_eq!(tree_reduce(vec![], 2), vec![0.0, 0.0]);
    }

    #[test]
    fn par_sum_matches_serial() {
        let v = par_sum(10_000, 2, |i, acc| {
            acc[0] += i as f64;
            acc[1] += 1.0;
        });
        assert_eq!(v[1], 10_000.0);
        assert!((v[0] - (9999.0 * 10_000.0 / 2.0)).abs() < 1e-6);
    }

    #[test]
    fn midpoint_grid_integrates() {
        let (coords, w) = midpoint_grid(&[(0.0, 1.0), (0.0, 2.0)], 64);
        let mut acc = 0.0;
        for i in 0..(coords.len() / 2) {
            let (x, y) = (coords[2 * i], coords[2 * i + 1]);
            acc += w * x * y;
        }
        // ∫₀¹∫₀² xy = 1/2 · 2 = 1
        assert!((acc - 1.0).abs() < 1e-10);
    }

    #[test]
    fn koranyi_quadrature_consistency() {
        // Volume agrees with a brute-force indicator rule, and a smooth
        // moment is stable under refinement (spectral rule).
        let vol33 = koranyi_ball_integral(1.0, 33, |_| 1.0);
        let vol49 = koranyi_ball_integral(1.0, 49, |_| 1.0);
        assert!((vol33 - vol49).abs() / vol49 < 1e-10);

        let (coords, w) = midpoint_grid(&[(-1.0, 1.0), (-1.0, 1.0), (-0.25, 0.25)], 120);
        let mut brute = 0.0;
        for i in 0..(coords.len() / 3) {
            let p = &coords[3 * i..3 * i + 3];
            if gauge(&GroupPoint::from_coords(p)) < 1.0 {
                brute += w;
            }
        }
        assert!(
            (vol49 - brute).abs() / brute < 2e-2,
            "smooth {vol49} vs brute {brute}"
        );

        let m33 = koranyi_ball_integral(2.0, 33, |p| p[0] * p[0] + p[2] * p[2]);
        let m49 = koranyi_ball_integral(2.0, 49, |p| p[0] * p[0] + p[2] * p[2]);
        assert!((m33 - m49).abs() / m49.abs() < 1e-9);

        // homogeneity: |B(e, r)| = r^Q |B(e,1)|, Q = 4
        let v2 = koranyi_ball_integral(2.0, 49, |_| 1.0);
        assert!((v2 - 16.0 * vol49).abs() / v2 < 1e-10);
    }

    #[test]
    fn lp_norm_of_constant() {
        // ‖1‖_{L⁴(B)} = |B|^{1/4}
        let vol = koranyi_ball_integral(1.0, 33, |_| 1.0);
        let n4 = koranyi_ball_lp_norm(1.0, 33, 4.0, |_| 1.0);
        assert!((n4 - vol.powf(0.25)).abs() < 1e-12);
    }
}
