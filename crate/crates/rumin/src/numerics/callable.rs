//! Form-valued fields with evaluable first and second derivatives: exact
//! polynomial backing, bump-times-polynomial backing with analytic
//! derivatives, and computed (quadrature) backing differentiated by
//! order-4 finite differences.
//!
//! Coefficients are always dense vectors over the degree-`h` monomial basis
//! in the left-invariant coframe.

use super::bump::Bump;
use super::fd::LatticeFn;
use crate::exterior::basis_monomials;
use crate::forms::PolyForm;
use crate::poly::PolyScalar;
use std::sync::Arc;

/// Value and first coordinate derivatives (`grads[dir][component]`).
#[derive(Debug, Clone)]
pub struct Jet1 {
    pub value: Vec<f64>,
    pub grads: Vec<Vec<f64>>,
}

/// Value, first and second coordinate derivatives
/// (`hess[a][b][component]`, symmetric in `a, b`).
#[derive(Debug, Clone)]
pub struct Jet2 {
    pub value: Vec<f64>,
    pub grads: Vec<Vec<f64>>,
    pub hess: Vec<Vec<Vec<f64>>>,
}

/// A section of `Λʰ` with two derivatives' worth of evaluation access.
pub trait FormField: Sync {
    fn n(&self) -> usize;
    fn degree(&self) -> usize;
    fn value(&self, p: &[f64]) -> Vec<f64>;
    fn jet1(&self, p: &[f64]) -> Jet1;
    fn jet2(&self, p: &[f64]) -> Jet2;
}

/// Exact polynomial coefficients with precomputed partial derivatives.
pub struct PolyField {
    n: usize,
    degree: usize,
    coeffs: Vec<PolyScalar>,
    partials: Vec<Vec<PolyScalar>>,     // [dir][comp]
    seconds: Vec<Vec<Vec<PolyScalar>>>, // [a][b][comp]
}

impl PolyField {
    pub fn new(form: &PolyForm) -> Self {
        let n = form.n();
        let dim = 2 * n + 1;
        let basis = basis_monomials(n, form.degree());
        let coeffs: Vec<PolyScalar> = basis.iter().map(|m| form.coeff(m)).collect();
        let partials: Vec<Vec<PolyScalar>> = (0..dim)
            .map(|d| coeffs.iter().map(|f| f.partial(d)).collect())
            .collect();
        let seconds: Vec<Vec<Vec<PolyScalar>>> = (0..dim)
            .map(|a| {
                (0..dim)
                    .map(|b| partials[a].iter().map(|f| f.partial(b)).collect())
                    .collect()
            })
            .collect();
        PolyField {
            n,
            degree: form.degree(),
            coeffs,
            partials,
            seconds,
        }
    }
}

impl FormField for PolyField {
    fn n(&self) -> usize {
        self.n
    }
    fn degree(&self) -> usize {
        self.degree
    }
    fn value(&self, p: &[f64]) -> Vec<f64> {
        self.coeffs.iter().map(|f| f.eval_f64(p)).collect()
    }
    fn jet1(&self, p: &[f64]) -> Jet1 {
        Jet1 {
            value: self.value(p),
            grads: self
                .partials
                .iter()
                .map(|row| row.iter().map(|f| f.eval_f64(p)).collect())
                .collect(),
        }
    }
    fn jet2(&self, p: &[f64]) -> Jet2 {
        let j1 = self.jet1(p);
        Jet2 {
            value: j1.value,
            grads: j1.grads,
            hess: self
                .seconds
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|col| col.iter().map(|f| f.eval_f64(p)).collect())
                        .collect()
                })
                .collect(),
        }
    }
}

/// `χ·β` with a smooth bump χ and polynomial β; derivatives by the product
/// rule with the analytic bump derivatives.
pub struct BumpedPolyField {
    pub bump: Bump,
    inner: PolyField,
}

impl BumpedPolyField {
    pub fn new(bump: Bump, form: &PolyForm) -> Self {
        BumpedPolyField {
            bump,
            inner: PolyField::new(form),
        }
    }
}

impl FormField for BumpedPolyField {
    fn n(&self) -> usize {
        self.inner.n
    }
    fn degree(&self) -> usize {
        self.inner.degree
    }
    fn value(&self, p: &[f64]) -> Vec<f64> {
        let chi = self.bump.value(p);
        self.inner.value(p).into_iter().map(|v| chi * v).collect()
    }
    fn jet1(&self, p: &[f64]) -> Jet1 {
        let chi = self.bump.value(p);
        let dchi = self.bump.gradient(p);
        let j = self.inner.jet1(p);
        Jet1 {
            value: j.value.iter().map(|v| chi * v).collect(),
            grads: (0..p.len())
                .map(|d| {
                    j.value
                        .iter()
                        .zip(&j.grads[d])
                        .map(|(v, g)| dchi[d] * v + chi * g)
                        .collect()
                })
                .collect(),
        }
    }
    #[allow(clippy::needless_range_loop)]
    fn jet2(&self, p: &[f64]) -> Jet2 {
        let chi = self.bump.value(p);
        let dchi = self.bump.gradient(p);
        let hchi = self.bump.hessian(p);
        let j = self.inner.jet2(p);
        let dim = p.len();
        let j1 = self.jet1(p);
        let hess = (0..dim)
            .map(|a| {
                (0..dim)
                    .map(|b| {
                        j.value
                            .iter()
                            .enumerate()
                            .map(|(k, v)| {
                                hchi[a][b] * v
                                    + dchi[a] * j.grads[b][k]
                                    + dchi[b] * j.grads[a][k]
                                    + chi * j.hess[a][b][k]
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Jet2 {
            value: j1.value,
            grads: j1.grads,
            hess,
        }
    }
}

/// Shared evaluation closure of a computed form.
pub type FormEval = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// A form known only through evaluation (quadrature output);
/// differentiated by order-4 centered finite differences with the declared
/// step.
pub struct ComputedField {
    pub f: FormEval,
    pub n: usize,
    pub degree: usize,
    pub fd_step: f64,
}

impl FormField for ComputedField {
    fn n(&self) -> usize {
        self.n
    }
    fn degree(&self) -> usize {
        self.degree
    }
    fn value(&self, p: &[f64]) -> Vec<f64> {
        (self.f)(p)
    }
    fn jet1(&self, p: &[f64]) -> Jet1 {
        let f = &self.f;
        let lat = LatticeFn::new(p.to_vec(), self.fd_step, move |q| f(q));
        let zero = vec![0i32; p.len()];
        let (value, grads) = lat.jet1(&zero);
        Jet1 { value, grads }
    }
    fn jet2(&self, p: &[f64]) -> Jet2 {
        let f = &self.f;
        let lat = LatticeFn::new(p.to_vec(), self.fd_step, move |q| f(q));
        let zero = vec![0i32; p.len()];
        let (value, grads, hess) = lat.jet2(&zero);
        Jet2 { value, grads, hess }
    }
}

/// A fast flat evaluator for polynomial coefficient vectors (used in the
/// quadrature inner loops); the frame interpretation is the caller's.
pub struct CompiledForm {
    pub n: usize,
    pub degree: usize,
    coeffs: Vec<FlatPoly>,
}

pub struct FlatPoly {
    terms: Vec<(f64, Vec<u16>)>,
}

impl FlatPoly {
    fn from_poly(p: &PolyScalar) -> Self {
        FlatPoly {
            terms: p
                .terms()
                .map(|(e, c)| (crate::scalar::rat_to_f64(c), e.clone()))
                .collect(),
        }
    }

    #[inline]
    pub fn eval(&self, p: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (c, exps) in &self.terms {
            let mut t = *c;
            for (v, &e) in p.iter().zip(exps) {
                if e > 0 {
                    t *= v.powi(e as i32);
                }
            }
            acc += t;
        }
        acc
    }
}

impl CompiledForm {
    /// Compile the dense coefficient vector of a polynomial form. The form
    /// is read in whatever coframe it is given in.
    pub fn new(form: &PolyForm) -> Self {
        let basis = basis_monomials(form.n(), form.degree());
        CompiledForm {
            n: form.n(),
            degree: form.degree(),
            coeffs: basis
                .iter()
                .map(|m| FlatPoly::from_poly(&form.coeff(m)))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    #[inline]
    pub fn eval_into(&self, p: &[f64], out: &mut [f64]) {
        for (o, c) in out.iter_mut().zip(&self.coeffs) {
            *o = c.eval(p);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::Monomial;
    use crate::sampling::{rand_polyform, seeded_rng};

    #[test]
    fn poly_jets_match_fd() {
        let mut rng = seeded_rng(71);
        let form = rand_polyform(&mut rng, 1, 1, 3, 3);
        let field = PolyField::new(&form);
        let p = [0.3, -0.2, 0.1];
        let computed = ComputedField {
            f: {
                let f2 = PolyField::new(&form);
                Arc::new(move |q: &[f64]| f2.value(q))
            },
            n: 1,
            degree: 1,
            fd_step: 0.01,
        };
        let a = field.jet2(&p);
        let b = computed.jet2(&p);
        for k in 0..a.value.len() {
            assert!((a.value[k] - b.value[k]).abs() < 1e-12);
            for d in 0..3 {
                assert!((a.grads[d][k] - b.grads[d][k]).abs() < 1e-8);
                for e in 0..3 {
                    assert!((a.hess[d][e][k] - b.hess[d][e][k]).abs() < 1e-6);
                }
            }
        }
    }

    #[test]
    fn bumped_jets_match_fd() {
        let mut rng = seeded_rng(72);
        let form = rand_polyform(&mut rng, 1, 2, 2, 2);
        let bump = Bump::new(3, 0.6);
        let field = BumpedPolyField::new(bump.clone(), &form);
        let p = [0.1, 0.15, -0.05];
        let computed = ComputedField {
            f: {
                let f2 = BumpedPolyField::new(bump, &form);
                Arc::new(move |q: &[f64]| f2.value(q))
            },
            n: 1,
            degree: 2,
            fd_step: 0.005,
        };
        let a = field.jet2(&p);
        let b = computed.jet2(&p);
        for k in 0..a.value.len() {
            assert!((a.value[k] - b.value[k]).abs() < 1e-12);
            for d in 0..3 {
                assert!((a.grads[d][k] - b.grads[d][k]).abs() < 1e-7, "d1");
                for e in 0..3 {
                    assert!((a.hess[d][e][k] - b.hess[d][e][k]).abs() < 1e-5, "d2");
                }
            }
        }
    }

    #[test]
    fn compiled_form_evaluates() {
        let mut rng = seeded_rng(73);
        let form = rand_polyform(&mut rng, 1, 1, 4, 4);
        let compiled = CompiledForm::new(&form);
        let p = [0.7, -1.3, 0.4];
        let mut out = vec![0.0; compiled.dim()];
        compiled.eval_into(&p, &mut out);
        let basis = basis_monomials(1, 1);
        for (k, m) in basis.iter().enumerate() {
            let direct = form.coeff(m).eval_f64(&p);
            assert!((out[k] - direct).abs() < 1e-12);
        }
        let _ = Monomial::scalar();
    }
}
