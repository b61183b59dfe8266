//! Centered finite differences of order 4 on a lattice, with memoized
//! evaluation keyed by integer offsets so that composed stencils reuse
//! points deterministically.

use std::cell::RefCell;
use std::collections::HashMap;

/// First-derivative weights at offsets −2, −1, 1, 2 (divide by `12h`).
const D1_OFFSETS: [i32; 4] = [-2, -1, 1, 2];
const D1_WEIGHTS: [f64; 4] = [1.0, -8.0, 8.0, -1.0];

/// A vector-valued function evaluated on the lattice `base + step·offset`,
/// with a per-instance cache. Points are always produced as
/// `base[i] + step * offset[i]` so identical offsets give identical floats.
pub struct LatticeFn<'a> {
    base: Vec<f64>,
    step: f64,
    #[allow(clippy::type_complexity)]
    f: Box<dyn Fn(&[i32], &[f64]) -> Vec<f64> + 'a>,
    cache: RefCell<HashMap<Vec<i32>, Vec<f64>>>,
    pub evaluations: RefCell<usize>,
}

impl<'a> LatticeFn<'a> {
    pub fn new(base: Vec<f64>, step: f64, f: impl Fn(&[f64]) -> Vec<f64> + 'a) -> Self {
        Self::from_offsets(base, step, move |_, p| f(p))
    }

    /// A lattice function whose closure also sees the integer offset, so
    /// stacked stencils can share caches keyed by exact lattice positions.
    pub fn from_offsets(
        base: Vec<f64>,
        step: f64,
        f: impl Fn(&[i32], &[f64]) -> Vec<f64> + 'a,
    ) -> Self {
        LatticeFn {
            base,
            step,
            f: Box::new(f),
            cache: RefCell::new(HashMap::new()),
            evaluations: RefCell::new(0),
        }
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn point(&self, offset: &[i32]) -> Vec<f64> {
        self.base
            .iter()
            .zip(offset)
            .map(|(b, &o)| b + self.step * o as f64)
            .collect()
    }

    pub fn eval(&self, offset: &[i32]) -> Vec<f64> {
        if let Some(v) = self.cache.borrow().get(offset) {
            return v.clone();
        }
        let v = (self.f)(offset, &self.point(offset));
        *self.evaluations.borrow_mut() += 1;
        self.cache.borrow_mut().insert(offset.to_vec(), v.clone());
        v
    }

    /// Order-4 first derivative along direction `dir`, around `center`.
    pub fn d1(&self, center: &[i32], dir: usize) -> Vec<f64> {
        let mut acc = vec![0.0; self.eval(center).len()];
        for (o, w) in D1_OFFSETS.iter().zip(D1_WEIGHTS) {
            let mut off = center.to_vec();
            off[dir] += o;
            for (a, v) in acc.iter_mut().zip(self.eval(&off)) {
                *a += w * v;
            }
        }
        let s = 1.0 / (12.0 * self.step);
        acc.iter_mut().for_each(|a| *a *= s);
        acc
    }

    /// Order-4 pure second derivative along `dir`.
    pub fn d2(&self, center: &[i32], dir: usize) -> Vec<f64> {
        const OFFS: [i32; 5] = [-2, -1, 0, 1, 2];
        const W: [f64; 5] = [-1.0, 16.0, -30.0, 16.0, -1.0];
        let mut acc = vec![0.0; self.eval(center).len()];
        for (o, w) in OFFS.iter().zip(W) {
            let mut off = center.to_vec();
            off[dir] += o;
            for (a, v) in acc.iter_mut().zip(self.eval(&off)) {
                *a += w * v;
            }
        }
        let s = 1.0 / (12.0 * self.step * self.step);
        acc.iter_mut().for_each(|a| *a *= s);
        acc
    }

    /// Order-4 mixed second derivative (tensorized first-derivative
    /// stencils).
    pub fn d2_mixed(&self, center: &[i32], a: usize, b: usize) -> Vec<f64> {
        assert_ne!(a, b);
        let mut acc = vec![0.0; self.eval(center).len()];
        for (oa, wa) in D1_OFFSETS.iter().zip(D1_WEIGHTS) {
            for (ob, wb) in D1_OFFSETS.iter().zip(D1_WEIGHTS) {
                let mut off = center.to_vec();
                off[a] += oa;
                off[b] += ob;
                let w = wa * wb;
                for (ac, v) in acc.iter_mut().zip(self.eval(&off)) {
                    *ac += w * v;
                }
            }
        }
        let s = 1.0 / (144.0 * self.step * self.step);
        acc.iter_mut().for_each(|x| *x *= s);
        acc
    }

    /// Value and all first derivatives at `center`.
    pub fn jet1(&self, center: &[i32]) -> (Vec<f64>, Vec<Vec<f64>>) {
        let value = self.eval(center);
        let grads = (0..self.dim()).map(|d| self.d1(center, d)).collect();
        (value, grads)
    }

    /// Value, gradients and the full symmetric Hessian at `center`.
    #[allow(clippy::type_complexity)]
    #[allow(clippy::needless_range_loop, clippy::type_complexity)]
    pub fn jet2(&self, center: &[i32]) -> (Vec<f64>, Vec<Vec<f64>>, Vec<Vec<Vec<f64>>>) {
        let (value, grads) = self.jet1(center);
        let d = self.dim();
        let mut hess = vec![vec![Vec::new(); d]; d];
        for a in 0..d {
            for b in a..d {
                let h = if a == b {
                    self.d2(center, a)
                } else {
                    self.d2_mixed(center, a, b)
                };
                hess[a][b] = h.clone();
                if a != b {
                    hess[b][a] = h;
                }
            }
        }
        (value, grads, hess)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_of_polynomials() {
        // f(x, y) = (x³y + y², x) has exactly representable order-4 FD
        // derivatives up to the stencil's truncation error.
        let f = |p: &[f64]| vec![p[0].powi(3) * p[1] + p[1] * p[1], p[0]];
        let lat = LatticeFn::new(vec![0.4, -0.3], 0.01, f);
        let c = vec![0i32, 0];
        let g0 = lat.d1(&c, 0);
        assert!((g0[0] - 3.0 * 0.4f64.powi(2) * (-0.3)).abs() < 1e-10);
        assert!((g0[1] - 1.0).abs() < 1e-10);
        let g1 = lat.d1(&c, 1);
        assert!((g1[0] - (0.4f64.powi(3) + 2.0 * (-0.3))).abs() < 1e-10);
        let h00 = lat.d2(&c, 0);
        assert!((h00[0] - 6.0 * 0.4 * (-0.3)).abs() < 1e-9);
        let h01 = lat.d2_mixed(&c, 0, 1);
        assert!((h01[0] - 3.0 * 0.4f64.powi(2)).abs() < 1e-9);
        // cubic in each variable: order-4 stencils are exact up to rounding
        let (_, _, hess) = lat.jet2(&c);
        assert!((hess[0][1][0] - hess[1][0][0]).abs() < 1e-12);
    }

    #[test]
    fn cache_reuses_lattice_points() {
        let f = |p: &[f64]| vec![p[0] * p[0]];
        let lat = LatticeFn::new(vec![0.0], 0.1, f);
        let c = vec![0i32];
        let _ = lat.d2(&c, 0);
        let first = *lat.evaluations.borrow();
        let _ = lat.d1(&c, 0); // all points already cached
        assert_eq!(*lat.evaluations.borrow(), first);
    }
}
