//! The intrinsic homotopy `K = Π_{E₀} ∘ Π_E ∘ K_Euc ∘ Π_E` and the pointwise
//! evaluation of `d_c` on numerically-known forms.
//!
//! The inner `Π_E` acts on the polynomial input exactly; the outer `Π_E`
//! acts on the quadrature output through the general formula
//! `Id − d₀⁻¹d − d d₀⁻¹`, with the derivatives taken by finite differences
//! of the quadrature values on a shared lattice. The outer `d_c` of a
//! residual check uses composed order-4 stencils on the same lattice.

use super::callable::{CompiledForm, FormField, Jet2};
use super::fd::LatticeFn;
use super::keuc::{keuc_apply, KeucCtx};
use crate::error::Result;
use crate::exterior::{basis_monomials, coordinate_to_invariant, lambda_dim, Covector, Monomial};
use crate::forms::{d_c_apply, pi_e, to_coordinate_frame, PolyForm};
use crate::projections::tables;
use crate::qlinalg::QMat;
use crate::scalar::rat_to_f64;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Dense float matrix.
#[derive(Debug, Clone)]
pub struct DMat {
    pub rows: usize,
    pub cols: usize,
    a: Vec<f64>,
}

impl DMat {
    pub fn from_qmat(m: &QMat) -> Self {
        let mut a = Vec::with_capacity(m.rows * m.cols);
        for i in 0..m.rows {
            for j in 0..m.cols {
                a.push(rat_to_f64(&m[(i, j)]));
            }
        }
        DMat {
            rows: m.rows,
            cols: m.cols,
            a,
        }
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let row = &self.a[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(v).map(|(a, b)| a * b).sum()
            })
            .collect()
    }
}

/// Float copies of the per-degree projection tables.
pub struct DenseTables {
    pub n: usize,
    pub d0_pinv: Vec<DMat>,
    pub pi_e0: Vec<DMat>,
    pub restrict: Vec<DMat>,
    pub embed: Vec<DMat>,
}

pub fn dense_tables(n: usize) -> Arc<DenseTables> {
    static REGISTRY: OnceLock<Mutex<HashMap<usize, Arc<DenseTables>>>> = OnceLock::new();
    let reg = REGISTRY.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = reg.lock().unwrap();
    guard
        .entry(n)
        .or_insert_with(|| {
            let tab = tables(n);
            Arc::new(DenseTables {
                n,
                d0_pinv: tab
                    .d0_pinv
                    .iter()
                    .map(|m| DMat::from_qmat(&m.matrix))
                    .collect(),
                pi_e0: tab
                    .pi_e0
                    .iter()
                    .map(|m| DMat::from_qmat(&m.matrix))
                    .collect(),
                restrict: tab.restrict.iter().map(DMat::from_qmat).collect(),
                embed: tab.embed.iter().map(DMat::from_qmat).collect(),
            })
        })
        .clone()
}

/// `W_g f` at `x` from the coordinate gradient of `f`.
#[inline]
fn w_value(n: usize, g: usize, x: &[f64], grads_at: impl Fn(usize) -> f64) -> f64 {
    if g < n {
        grads_at(g) - 0.5 * x[n + g] * grads_at(2 * n)
    } else if g < 2 * n {
        grads_at(g) + 0.5 * x[g - n] * grads_at(2 * n)
    } else {
        grads_at(2 * n)
    }
}

/// Structure table of the invariant-frame differential at degree `h`:
/// wedge terms `(src, generator, dst, sign)` and algebraic terms
/// `(src, dst, coefficient)` coming from `d` of the coframe monomials.
struct DStructure {
    wedge: Vec<(usize, usize, usize, f64)>,
    algebraic: Vec<(usize, usize, f64)>,
    dim_out: usize,
}

fn d_structure(n: usize, h: usize) -> DStructure {
    let src = basis_monomials(n, h);
    let tgt = basis_monomials(n, h + 1);
    let index_of = |m: &Monomial| tgt.binary_search(m).unwrap();
    let mut wedge = Vec::new();
    let mut algebraic = Vec::new();
    let theta_idx = (2 * n + 1) as u8;
    let dth = crate::exterior::dtheta(n);
    for (j, m) in src.iter().enumerate() {
        for g in 0..(2 * n + 1) {
            if let Some((sign, wm)) = Monomial::single((g + 1) as u8).wedge(m) {
                wedge.push((j, g, index_of(&wm), sign as f64));
            }
        }
        if m.contains(theta_idx) {
            let rest: Vec<u8> = m
                .indices()
                .iter()
                .copied()
                .filter(|&i| i != theta_idx)
                .collect();
            let sign = if (m.degree() - 1) % 2 == 0 { 1.0 } else { -1.0 };
            let rest_cov = Covector::from_monomial(n, Monomial::new(rest), crate::scalar::rat(1));
            for (mm, c) in dth.wedge(&rest_cov).terms() {
                algebraic.push((j, index_of(mm), sign * rat_to_f64(c)));
            }
        }
    }
    DStructure {
        wedge,
        algebraic,
        dim_out: tgt.len(),
    }
}

/// Invariant-frame `dα` at `x` from the first-derivative jet of the
/// coefficients.
pub fn d_from_jet1(n: usize, h: usize, x: &[f64], value: &[f64], grads: &[Vec<f64>]) -> Vec<f64> {
    let s = d_structure(n, h);
    let mut out = vec![0.0; s.dim_out];
    for &(src, g, dst, sign) in &s.wedge {
        out[dst] += sign * w_value(n, g, x, |d| grads[d][src]);
    }
    for &(src, dst, c) in &s.algebraic {
        out[dst] += c * value[src];
    }
    out
}

/// Invariant-frame `dα` together with its coordinate gradient, from the
/// second-derivative jet of the coefficients.
#[allow(clippy::needless_range_loop)]
fn d_jets_from_jet2(n: usize, h: usize, x: &[f64], jet: &Jet2) -> (Vec<f64>, Vec<Vec<f64>>) {
    let s = d_structure(n, h);
    let dim = 2 * n + 1;
    let mut value = vec![0.0; s.dim_out];
    let mut grads = vec![vec![0.0; s.dim_out]; dim];
    for &(src, g, dst, sign) in &s.wedge {
        value[dst] += sign * w_value(n, g, x, |d| jet.grads[d][src]);
        for dir in 0..dim {
            // ∂_dir (W_g f): hessian part plus the derivative of the frame
            // coefficient (±½ x or y factors)
            let mut v = w_value(n, g, x, |d| jet.hess[dir][d][src]);
            if g < n && dir == n + g {
                v -= 0.5 * jet.grads[2 * n][src];
            } else if (n..2 * n).contains(&g) && dir == g - n {
                v += 0.5 * jet.grads[2 * n][src];
            }
            grads[dir][dst] += sign * v;
        }
    }
    for &(src, dst, c) in &s.algebraic {
        value[dst] += c * jet.value[src];
        for dir in 0..dim {
            grads[dir][dst] += c * jet.grads[dir][src];
        }
    }
    (value, grads)
}

/// General `Π_E u = u − d₀⁻¹(du) − d(d₀⁻¹u)` at a point, from the jet of a
/// (not necessarily Rumin-valued) form.
pub fn pi_e_general_from_jet1(
    n: usize,
    h: usize,
    x: &[f64],
    value: &[f64],
    grads: &[Vec<f64>],
) -> Vec<f64> {
    let dt = dense_tables(n);
    let mut out = value.to_vec();
    if h <= 2 * n {
        let du = d_from_jet1(n, h, x, value, grads);
        for (o, c) in out.iter_mut().zip(dt.d0_pinv[h].mul_vec(&du)) {
            *o -= c;
        }
    }
    if h > 0 {
        let pv: Vec<f64> = dt.d0_pinv[h - 1].mul_vec(value);
        let pg: Vec<Vec<f64>> = grads.iter().map(|g| dt.d0_pinv[h - 1].mul_vec(g)).collect();
        let dpv = d_from_jet1(n, h - 1, x, &pv, &pg);
        for (o, c) in out.iter_mut().zip(dpv) {
            *o -= c;
        }
    }
    out
}

/// `d_c` of an `E₀ʰ`-valued form at `x`, from its second-derivative jet:
/// `Π_{E₀} d (α − d₀⁻¹ d₁ α)` for `h ≤ n` and `Π_{E₀} d α` above.
pub fn dc_from_jet2(n: usize, h: usize, x: &[f64], jet: &Jet2) -> Vec<f64> {
    let dt = dense_tables(n);
    let dim = 2 * n + 1;
    let (pa_value, pa_grads) = if h <= n {
        let (dv, dg) = d_jets_from_jet2(n, h, x, jet);
        // d₁α = weight-(h+1) (θ-free) part of dα for weight-h input
        let tgt = basis_monomials(n, h + 1);
        let mask: Vec<bool> = tgt.iter().map(|m| !m.contains_theta(n)).collect();
        let u: Vec<f64> = dv
            .iter()
            .zip(&mask)
            .map(|(v, keep)| if *keep { *v } else { 0.0 })
            .collect();
        let ug: Vec<Vec<f64>> = dg
            .iter()
            .map(|g| {
                g.iter()
                    .zip(&mask)
                    .map(|(v, keep)| if *keep { *v } else { 0.0 })
                    .collect()
            })
            .collect();
        let corr = dt.d0_pinv[h].mul_vec(&u);
        let corr_g: Vec<Vec<f64>> = ug.iter().map(|g| dt.d0_pinv[h].mul_vec(g)).collect();
        let value: Vec<f64> = jet.value.iter().zip(&corr).map(|(a, b)| a - b).collect();
        let grads: Vec<Vec<f64>> = (0..dim)
            .map(|d| {
                jet.grads[d]
                    .iter()
                    .zip(&corr_g[d])
                    .map(|(a, b)| a - b)
                    .collect()
            })
            .collect();
        (value, grads)
    } else {
        (jet.value.clone(), jet.grads.clone())
    };
    let d = d_from_jet1(n, h, x, &pa_value, &pa_grads);
    dt.pi_e0[h + 1].mul_vec(&d)
}

/// `d_c` at a point of any form field with two derivatives of access.
pub fn dc_at_point(field: &dyn FormField, x: &[f64]) -> Vec<f64> {
    let jet = field.jet2(x);
    dc_from_jet2(field.n(), field.degree(), x, &jet)
}

/// Apply a constant-coefficient operator of order ≤ 2 to a scalar function
/// known through its second-derivative jet at `x`.
pub fn apply_wop_scalar_from_jet2(
    op: &crate::fields::WOp,
    x: &[f64],
    value: f64,
    grad: &[f64],
    hess: &[Vec<f64>],
) -> f64 {
    let n = op.n();
    let dim = 2 * n + 1;
    let mut acc = 0.0;
    for (idx, coeff) in op.terms() {
        let c =
            crate::scalar::rat_to_f64(&coeff.as_constant().expect("constant-coefficient operator"));
        // expand the PBW word, leftmost generator first
        let mut word = Vec::new();
        for (slot, &e) in idx.exps().iter().enumerate() {
            for _ in 0..e {
                word.push(slot);
            }
        }
        let v = match word.len() {
            0 => value,
            1 => w_value(n, word[0], x, |d| grad[d]),
            2 => {
                let (g1, g2) = (word[0], word[1]);
                // u = W_{g2} f, with its coordinate gradient
                let grad_u: Vec<f64> = (0..dim)
                    .map(|dir| {
                        let mut v = w_value(n, g2, x, |d| hess[dir][d]);
                        if g2 < n && dir == n + g2 {
                            v -= 0.5 * grad[2 * n];
                        } else if (n..2 * n).contains(&g2) && dir == g2 - n {
                            v += 0.5 * grad[2 * n];
                        }
                        v
                    })
                    .collect();
                w_value(n, g1, x, |d| grad_u[d])
            }
            _ => panic!("jet application supports order <= 2"),
        };
        acc += c * v;
    }
    acc
}

/// The homotopy `K ω` for a fixed polynomial Rumin form ω, evaluated by
/// quadrature on a lattice around a base point.
pub struct RuminHomotopy {
    pub n: usize,
    /// Degree of ω (the output has degree one less).
    pub degree: usize,
    inner: CompiledForm,
    ctx: Arc<KeucCtx>,
}

impl RuminHomotopy {
    /// Validates ω ∈ E₀ʰ and prepares the exact inner stage `Π_E ω`.
    pub fn new(omega: &PolyForm, ctx: Arc<KeucCtx>) -> Result<Self> {
        let projected = pi_e(omega)?;
        Ok(RuminHomotopy {
            n: omega.n(),
            degree: omega.degree(),
            inner: CompiledForm::new(&to_coordinate_frame(&projected)),
            ctx,
        })
    }

    /// Raw quadrature stage `u = K_Euc(Π_E ω)` at a point, in the invariant
    /// frame.
    pub fn u_value(&self, x: &[f64]) -> Vec<f64> {
        let coord = keuc_apply(&self.ctx, &self.inner, x).expect("x inside the domain");
        let cov = Covector::from_dense(self.n, self.degree - 1, &coord);
        coordinate_to_invariant(&cov, x).to_dense()
    }

    /// Lattice evaluator of `K ω = Π_{E₀} Π_E u` around `base`; all finite
    /// differences (here and in stacked stencils) share the `u` lattice.
    pub fn k_lattice<'a>(&'a self, base: Vec<f64>, step: f64) -> KLattice<'a> {
        let u = LatticeFn::new(base.clone(), step, move |q: &[f64]| self.u_value(q));
        KLattice {
            hom: self,
            u,
            base,
            step,
        }
    }

    /// Convenience single-point evaluation of `K ω`.
    pub fn k_value(&self, x: &[f64], step: f64) -> Vec<f64> {
        self.k_lattice(x.to_vec(), step)
            .k_at(&vec![0; 2 * self.n + 1])
    }
}

pub struct KLattice<'a> {
    hom: &'a RuminHomotopy,
    u: LatticeFn<'a>,
    base: Vec<f64>,
    step: f64,
}

impl<'a> KLattice<'a> {
    /// `K ω` at the lattice point `base + step·offset`.
    pub fn k_at(&self, offset: &[i32]) -> Vec<f64> {
        let n = self.hom.n;
        let h_out = self.hom.degree - 1;
        let x = self.u.point(offset);
        let (value, grads) = self.u.jet1(offset);
        let pe = pi_e_general_from_jet1(n, h_out, &x, &value, &grads);
        dense_tables(n).pi_e0[h_out].mul_vec(&pe)
    }

    /// A lattice view of `x ↦ K ω(x)` sharing the `u` cache, for stacked
    /// stencils.
    pub fn as_lattice(&'a self) -> LatticeFn<'a> {
        LatticeFn::from_offsets(self.base.clone(), self.step, move |off, _| self.k_at(off))
    }
}

/// Evaluate `K ω` at one point per the operator pipeline ([`RuminHomotopy`]
/// owns the caching for repeated use).
pub fn rumin_homotopy_apply(
    omega: &PolyForm,
    x: &[f64],
    ctx: Arc<KeucCtx>,
    fd_step: f64,
) -> Result<Vec<f64>> {
    Ok(RuminHomotopy::new(omega, ctx)?.k_value(x, fd_step))
}

/// Largest pointwise residual `|d_c(K ω) − ω|` over the sample set, for
/// `ω = d_c φ` with polynomial φ.
pub fn homotopy_residual(
    phi: &PolyForm,
    ctx: Arc<KeucCtx>,
    samples: &[Vec<f64>],
    fd_step: f64,
) -> Result<f64> {
    let n = phi.n();
    let omega = d_c_apply(phi)?;
    if omega.is_zero() {
        return Ok(0.0);
    }
    let hom = RuminHomotopy::new(&omega, ctx)?;
    let h_out = omega.degree() - 1;
    let dim = 2 * n + 1;
    let mut worst: f64 = 0.0;
    for x in samples {
        let klat = hom.k_lattice(x.clone(), fd_step);
        let lat = klat.as_lattice();
        let zero = vec![0i32; dim];
        // the Π_E correction inside d_c vanishes on scalars, so only
        // 1 ≤ h_out ≤ n needs the second-derivative jet
        let dck = if (1..=n).contains(&h_out) {
            let (value, grads, hess) = lat.jet2(&zero);
            dc_from_jet2(n, h_out, x, &Jet2 { value, grads, hess })
        } else {
            let (_, grads) = lat.jet1(&zero);
            let kv = lat.eval(&zero);
            let d = d_from_jet1(n, h_out, x, &kv, &grads);
            dense_tables(n).pi_e0[h_out + 1].mul_vec(&d)
        };
        let target = omega.eval_f64(x).to_dense();
        let err = dck
            .iter()
            .zip(&target)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        worst = worst.max(err);
    }
    Ok(worst)
}

/// Deterministic interior sample points of the domain with a stencil margin.
pub fn interior_samples(
    n: usize,
    domain: &super::domain::Domain,
    count: usize,
    margin: f64,
    seed: u64,
) -> Vec<Vec<f64>> {
    use super::domain::Domain;
    use rand::Rng;
    let mut rng = crate::sampling::seeded_rng(seed);
    let scale = match *domain {
        Domain::EuclideanBall { radius } => radius,
        Domain::KoranyiBall { radius } => radius,
        Domain::KoranyiAnnulus { r2, .. } => r2,
    };
    let shrunk = match *domain {
        Domain::EuclideanBall { radius } => Domain::EuclideanBall {
            radius: radius * (1.0 - margin),
        },
        Domain::KoranyiBall { radius } => Domain::KoranyiBall {
            radius: radius * (1.0 - margin),
        },
        Domain::KoranyiAnnulus { r1, r2 } => Domain::KoranyiAnnulus {
            r1: r1 * (1.0 + margin),
            r2: r2 * (1.0 - margin),
        },
    };
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p: Vec<f64> = (0..2 * n + 1)
            .map(|i| {
                let s = if i == 2 * n { scale * scale } else { scale };
                rng.gen_range(-s..s)
            })
            .collect();
        if shrunk.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// Sup of `|ω|` over sample points (dense invariant coefficients).
pub fn sup_norm_on_samples(omega: &PolyForm, samples: &[Vec<f64>]) -> f64 {
    samples
        .iter()
        .map(|x| {
            omega
                .eval_f64(x)
                .to_dense()
                .iter()
                .map(|v| v * v)
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}

/// Check that `lambda_dim` stays consistent with the dense tables (guards
/// the dense copies against accidental reordering).
pub fn dense_tables_consistent(n: usize) -> bool {
    let dt = dense_tables(n);
    (0..=2 * n + 1).all(|h| dt.pi_e0[h].rows == lambda_dim(n, h))
}
