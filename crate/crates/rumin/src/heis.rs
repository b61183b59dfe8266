//! The Heisenberg group ℍⁿ in exponential coordinates: product, inverse,
//! dilations, Cygan–Korányi gauge and distance.
//!
//! Points live on ℝ^{2n+1} as `(x, y, t)` with `x, y ∈ ℝⁿ`, `t ∈ ℝ`. The
//! group can be used in exact mode (`GroupPoint<Rat>`) for algebraic identity
//! checks or in float mode (`GroupPoint<f64>`) for numerics; the mode is
//! chosen by the caller and never mixed.

use crate::error::{Error, Result};
use crate::scalar::Coeff;

/// Group parameters: the integer `n` and the homogeneous dimension `Q = 2n+2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupParams {
    pub n: usize,
}

impl GroupParams {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be >= 1".into()));
        }
        Ok(GroupParams { n })
    }

    /// Homogeneous dimension `Q = 2n + 2`.
    pub fn q(&self) -> usize {
        2 * self.n + 2
    }

    /// Topological dimension `2n + 1`.
    pub fn dim(&self) -> usize {
        2 * self.n + 1
    }
}

/// A point `(x, y, t)` of ℍⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupPoint<C: Coeff> {
    pub x: Vec<C>,
    pub y: Vec<C>,
    pub t: C,
}

impl<C: Coeff> GroupPoint<C> {
    pub fn new(x: Vec<C>, y: Vec<C>, t: C) -> Self {
        assert_eq!(x.len(), y.len(), "x and y must have the same length");
        GroupPoint { x, y, t }
    }

    /// The identity element `e = 0`.
    pub fn identity(n: usize) -> Self {
        GroupPoint {
            x: vec![C::zero(); n],
            y: vec![C::zero(); n],
            t: C::zero(),
        }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// Flat coordinates `(x_1..x_n, y_1..y_n, t)`.
    pub fn coords(&self) -> Vec<C> {
        let mut v = Vec::with_capacity(2 * self.n() + 1);
        v.extend(self.x.iter().cloned());
        v.extend(self.y.iter().cloned());
        v.push(self.t.clone());
        v
    }

    pub fn from_coords(coords: &[C]) -> Self {
        assert!(coords.len() % 2 == 1 && coords.len() >= 3);
        let n = (coords.len() - 1) / 2;
        GroupPoint {
            x: coords[..n].to_vec(),
            y: coords[n..2 * n].to_vec(),
            t: coords[2 * n].clone(),
        }
    }

    /// Group inverse, `p⁻¹ = −p`.
    pub fn inverse(&self) -> Self {
        GroupPoint {
            x: self.x.iter().map(|v| -v.clone()).collect(),
            y: self.y.iter().map(|v| -v.clone()).collect(),
            t: -self.t.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.t.is_zero() && self.x.iter().all(|v| v.is_zero()) && self.y.iter().all(|v| v.is_zero())
    }
}

/// Group product
/// `p·p' = (x+x', y+y', t+t' + ½ Σ_j (x_j y'_j − y_j x'_j))`.
pub fn group_mul<C: Coeff>(p: &GroupPoint<C>, q: &GroupPoint<C>) -> Result<GroupPoint<C>> {
    if p.n() != q.n() {
        return Err(Error::DimensionMismatch {
            expected: p.n(),
            got: q.n(),
        });
    }
    let n = p.n();
    let x: Vec<C> = (0..n).map(|j| p.x[j].clone() + q.x[j].clone()).collect();
    let y: Vec<C> = (0..n).map(|j| p.y[j].clone() + q.y[j].clone()).collect();
    let mut twist = C::zero();
    for j in 0..n {
        twist = twist + p.x[j].clone() * q.y[j].clone() - p.y[j].clone() * q.x[j].clone();
    }
    let t = p.t.clone() + q.t.clone() + C::one_half() * twist;
    Ok(GroupPoint { x, y, t })
}

/// Anisotropic dilation `δ_λ(x, y, t) = (λx, λy, λ²t)`, `λ > 0`.
pub fn dilate<C: Coeff>(lambda: &C, p: &GroupPoint<C>) -> Result<GroupPoint<C>> {
    if !lambda.is_positive() {
        return Err(Error::InvalidParameter(
            "dilation factor must be positive".into(),
        ));
    }
    Ok(GroupPoint {
        x: p.x.iter().map(|v| lambda.clone() * v.clone()).collect(),
        y: p.y.iter().map(|v| lambda.clone() * v.clone()).collect(),
        t: lambda.clone() * lambda.clone() * p.t.clone(),
    })
}

/// Fourth power of the Cygan–Korányi gauge, `ρ(p)⁴ = |(x,y)|⁴ + 16 t²`.
///
/// Exact in both modes; the gauge itself needs a fourth root and is only
/// provided in float form.
pub fn gauge_fourth<C: Coeff>(p: &GroupPoint<C>) -> C {
    let mut sq = C::zero();
    for v in p.x.iter().chain(p.y.iter()) {
        sq = sq + v.clone() * v.clone();
    }
    let sixteen = C::from_int(16);
    sq.clone() * sq + sixteen * p.t.clone() * p.t.clone()
}

/// Cygan–Korányi gauge `ρ(p) = (|(x,y)|⁴ + 16t²)^{1/4}` with a scaling guard
/// against overflow of the fourth powers.
pub fn gauge(p: &GroupPoint<f64>) -> f64 {
    let mut m: f64 = p.t.abs().sqrt();
    for v in p.x.iter().chain(p.y.iter()) {
        m = m.max(v.abs());
    }
    if m == 0.0 || !m.is_finite() {
        return if m == 0.0 { 0.0 } else { f64::INFINITY };
    }
    let inv = 1.0 / m;
    let scaled = GroupPoint {
        x: p.x.iter().map(|v| v * inv).collect(),
        y: p.y.iter().map(|v| v * inv).collect(),
        t: p.t * inv * inv,
    };
    m * gauge_fourth(&scaled).sqrt().sqrt()
}

/// Fourth power of the gauge distance `d(p,q) = ρ(p⁻¹·q)`; exact.
pub fn distance_fourth<C: Coeff>(p: &GroupPoint<C>, q: &GroupPoint<C>) -> Result<C> {
    Ok(gauge_fourth(&group_mul(&p.inverse(), q)?))
}

/// Gauge distance `d(p,q) = ρ(p⁻¹·q)` in float mode.
pub fn gauge_distance(p: &GroupPoint<f64>, q: &GroupPoint<f64>) -> Result<f64> {
    Ok(gauge(&group_mul(&p.inverse(), q)?))
}

/// Euclidean norm of the coordinates of `p`.
pub fn euclidean_norm(p: &GroupPoint<f64>) -> f64 {
    p.coords().iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Empirical constants for the comparison of the gauge with the Euclidean
/// norm near the identity, from a sample of points with `ρ(p) < radius`.
///
/// `c_low` is the least constant with `|p| ≤ c_low² ρ(p)` on the sample,
/// `c_up` the least constant with `ρ(p) ≤ c_up |p|^{1/2}`. Both are finite;
/// no universal numeric value is asserted (the comparison holds only up to
/// constants: on the `t`-axis `ρ = 2|t|^{1/2}` exceeds `|p|^{1/2}`).
#[derive(Debug, Clone, Copy)]
pub struct BallComparison {
    pub c_low: f64,
    pub c_up: f64,
    pub samples: usize,
    pub radius: f64,
}

pub fn ball_comparison(
    n: usize,
    radius: f64,
    samples: usize,
    rng: &mut impl rand::Rng,
) -> BallComparison {
    let mut c_low: f64 = 0.0;
    let mut c_up: f64 = 0.0;
    let mut accepted = 0;
    while accepted < samples {
        let coords: Vec<f64> = (0..2 * n + 1)
            .map(|i| {
                let s = if i == 2 * n { radius * radius } else { radius };
                rng.gen_range(-s..s)
            })
            .collect();
        let p = GroupPoint::from_coords(&coords);
        let rho = gauge(&p);
        if rho >= radius || rho == 0.0 {
            continue;
        }
        accepted += 1;
        let e = euclidean_norm(&p);
        c_low = c_low.max((e / rho).sqrt());
        c_up = c_up.max(rho / e.sqrt());
    }
    BallComparison {
        c_low,
        c_up,
        samples,
        radius,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{rand_rat_point, seeded_rng};
    use crate::scalar::{rat, ratio, Rat};

    fn pt(n: usize, coords: &[i64]) -> GroupPoint<Rat> {
        assert_eq!(coords.len(), 2 * n + 1);
        GroupPoint::from_coords(&coords.iter().map(|&c| rat(c)).collect::<Vec<_>>())
    }

    #[test]
    fn identity_and_inverse() {
        let mut rng = seeded_rng(1);
        for _ in 0..20 {
            let p = rand_rat_point(&mut rng, 2);
            let e = GroupPoint::identity(2);
            assert_eq!(group_mul(&e, &p).unwrap(), p);
            assert_eq!(group_mul(&p, &e).unwrap(), p);
            assert!(group_mul(&p, &p.inverse()).unwrap().is_identity());
        }
    }

    #[test]
    fn product_example_n1() {
        // (1,0,0)·(0,1,0) = (1,1,1/2)
        let p = pt(1, &[1, 0, 0]);
        let q = pt(1, &[0, 1, 0]);
        let r = group_mul(&p, &q).unwrap();
        assert_eq!(r.x[0], rat(1));
        assert_eq!(r.y[0], rat(1));
        assert_eq!(r.t, ratio(1, 2));
    }

    #[test]
    fn associativity_exact() {
        let mut rng = seeded_rng(2);
        for n in [1usize, 2] {
            for _ in 0..30 {
                let (p, q, r) = (
                    rand_rat_point(&mut rng, n),
                    rand_rat_point(&mut rng, n),
                    rand_rat_point(&mut rng, n),
                );
                let a = group_mul(&group_mul(&p, &q).unwrap(), &r).unwrap();
                let b = group_mul(&p, &group_mul(&q, &r).unwrap()).unwrap();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn dilation_is_automorphism() {
        let mut rng = seeded_rng(3);
        let lambda = ratio(7, 3);
        for _ in 0..100 {
            let p = rand_rat_point(&mut rng, 2);
            let q = rand_rat_point(&mut rng, 2);
            let lhs = dilate(&lambda, &group_mul(&p, &q).unwrap()).unwrap();
            let rhs =
                group_mul(&dilate(&lambda, &p).unwrap(), &dilate(&lambda, &q).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
        // dilate(1, p) = p and dilate(2, (1,1,1)) = (2,2,4)
        let p = pt(1, &[1, 1, 1]);
        assert_eq!(dilate(&rat(1), &p).unwrap(), p);
        assert_eq!(dilate(&rat(2), &p).unwrap(), pt(1, &[2, 2, 4]));
        assert!(dilate(&rat(0), &p).is_err());
    }

    #[test]
    fn gauge_values() {
        // ρ((0,0,1)) = 16^{1/4} = 2
        let p = GroupPoint::<f64>::from_coords(&[0.0, 0.0, 1.0]);
        assert!((gauge(&p) - 2.0).abs() < 1e-12);
        let e = GroupPoint::<f64>::identity(1);
        assert_eq!(gauge_distance(&e, &e).unwrap(), 0.0);
    }

    #[test]
    fn gauge_homogeneity() {
        // Exact: ρ⁴(δ_λ p) = λ⁴ ρ⁴(p).
        let mut rng = seeded_rng(4);
        let lambda = ratio(5, 2);
        let l4 = lambda.clone() * lambda.clone() * lambda.clone() * lambda.clone();
        for _ in 0..50 {
            let p = rand_rat_point(&mut rng, 1);
            let d = dilate(&lambda, &p).unwrap();
            assert_eq!(gauge_fourth(&d), l4.clone() * gauge_fourth(&p));
        }
        // Float mode within 1e-12 relative.
        let p = GroupPoint::<f64>::from_coords(&[0.3, -0.7, 0.11]);
        let lam = 1.7;
        let d = dilate(&lam, &p).unwrap();
        assert!((gauge(&d) - lam * gauge(&p)).abs() < 1e-12 * gauge(&p).max(1.0));
    }

    #[test]
    fn distance_left_invariant() {
        let mut rng = seeded_rng(5);
        for _ in 0..40 {
            let g = rand_rat_point(&mut rng, 2);
            let p = rand_rat_point(&mut rng, 2);
            let q = rand_rat_point(&mut rng, 2);
            let d1 = distance_fourth(&p, &q).unwrap();
            let d2 =
                distance_fourth(&group_mul(&g, &p).unwrap(), &group_mul(&g, &q).unwrap()).unwrap();
            assert_eq!(d1, d2);
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let p = GroupPoint::<Rat>::identity(1);
        let q = GroupPoint::<Rat>::identity(2);
        assert!(group_mul(&p, &q).is_err());
    }

    #[test]
    fn ball_comparison_finite() {
        let mut rng = seeded_rng(6);
        let rep = ball_comparison(1, 0.5, 1000, &mut rng);
        assert!(rep.c_low.is_finite() && rep.c_low > 0.0);
        assert!(rep.c_up.is_finite() && rep.c_up >= 1.0);
        // The t-axis forces c_up towards 2 for small radii.
        assert!(rep.c_up <= 2.0 + 1e-9);
    }

    #[test]
    fn gauge_overflow_guard() {
        let p = GroupPoint::<f64>::from_coords(&[1e200, 0.0, 0.0]);
        assert!(gauge(&p).is_finite());
        assert!((gauge(&p) - 1e200).abs() / 1e200 < 1e-12);
    }
}
