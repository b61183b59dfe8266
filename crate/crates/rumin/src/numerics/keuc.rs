//! The averaged cone homotopy on a convex domain `D`:
//!
//! `K_h ω(x) = ∫_D ψ(y) ∫₀¹ t^{h−1} ι_{x−y} ω(y + t(x−y)) dt dy`,
//!
//! with ψ a smooth unit-mass bump supported in `D`. On closed forms
//! `d K ω = ω`; in general `ω = d K_h ω + K_{h+1} dω`.
//!
//! The spatial rule is a midpoint tensor grid over the bump's support box
//! (the integrand vanishes elsewhere) with the resolution from the
//! [`QuadratureSpec`]; the segment integral uses Gauss–Legendre on `[0, 1]`.
//! ψ is normalized to unit mass by its own grid, so constants are
//! reproduced exactly at the discrete level.

use super::bump::Bump;
use super::callable::CompiledForm;
use super::domain::Domain;
use super::gauss::gauss_legendre_on;
use super::quad::{ball_nodes, tree_reduce, QuadratureSpec};
use crate::error::{Error, Result};
use crate::exterior::{basis_monomials, lambda_dim, Monomial};
use rayon::prelude::*;

/// Precomputed quadrature data for one `(domain, spec)` pair.
pub struct KeucCtx {
    pub n: usize,
    pub domain: Domain,
    pub spec: QuadratureSpec,
    pub bump: Bump,
    dim: usize,
    nodes: Vec<f64>,
    psi_w: Vec<f64>,
    t_nodes: Vec<f64>,
    t_weights: Vec<f64>,
}

impl KeucCtx {
    pub fn new(n: usize, domain: Domain, spec: QuadratureSpec) -> Result<Self> {
        domain.validate()?;
        let dim = 2 * n + 1;
        let radius = spec.bump_fraction * domain.inradius()?;
        let bump = Bump::new(dim, radius);
        let (coords, cell_w) = ball_nodes(&bump.center, radius, spec.grid);
        let mut nodes = Vec::new();
        let mut psi_w = Vec::new();
        let count = coords.len() / dim;
        let mut mass = 0.0;
        for i in 0..count {
            let p = &coords[i * dim..(i + 1) * dim];
            let v = bump.value(p);
            if v > 0.0 {
                nodes.extend_from_slice(p);
                psi_w.push(v * cell_w[i]);
                mass += v * cell_w[i];
            }
        }
        // discrete unit mass
        for w in &mut psi_w {
            *w /= mass;
        }
        let (t_nodes, t_weights) = gauss_legendre_on(spec.gauss, 0.0, 1.0);
        Ok(KeucCtx {
            n,
            domain,
            spec,
            bump,
            dim,
            nodes,
            psi_w,
            t_nodes,
            t_weights,
        })
    }

    pub fn node_count(&self) -> usize {
        self.psi_w.len()
    }
}

/// Contraction table for `ι_v` on the degree-`h` monomial basis:
/// `(source index, vector component, target index, sign)`.
fn contraction_table(n: usize, h: usize) -> Vec<(usize, usize, usize, f64)> {
    assert!(h >= 1);
    let src = basis_monomials(n, h);
    let tgt = basis_monomials(n, h - 1);
    let index_of = |m: &Monomial| tgt.binary_search(m).unwrap();
    let mut table = Vec::new();
    for (j, m) in src.iter().enumerate() {
        for (pos, &i) in m.indices().iter().enumerate() {
            let rest: Vec<u8> = m.indices().iter().copied().filter(|&k| k != i).collect();
            let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
            table.push((j, (i - 1) as usize, index_of(&Monomial::new(rest)), sign));
        }
    }
    table
}

/// Apply the cone homotopy to a compiled coordinate-frame form at `x ∈ D`.
/// Returns the dense coordinate-frame coefficient vector of the degree
/// `h−1` value.
pub fn keuc_apply(ctx: &KeucCtx, form: &CompiledForm, x: &[f64]) -> Result<Vec<f64>> {
    let h = form.degree;
    if h == 0 {
        return Err(Error::InvalidParameter(
            "the cone homotopy needs degree >= 1".into(),
        ));
    }
    if !ctx.domain.contains(x) {
        return Err(Error::PointOutsideDomain);
    }
    assert_eq!(form.n, ctx.n);
    let dim = ctx.dim;
    let dim_out = lambda_dim(ctx.n, h - 1);
    let table = contraction_table(ctx.n, h);
    let tpow: Vec<f64> = ctx.t_nodes.iter().map(|t| t.powi((h - 1) as i32)).collect();

    let count = ctx.node_count();
    const CHUNK: usize = 2048;
    let nchunks = count.div_ceil(CHUNK).max(1);
    let partials: Vec<Vec<f64>> = (0..nchunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![0.0; dim_out];
            let mut buf = vec![0.0; form.dim()];
            let mut yt = vec![0.0; dim];
            let mut v = vec![0.0; dim];
            let start = c * CHUNK;
            let end = (start + CHUNK).min(count);
            for i in start..end {
                let y = &ctx.nodes[i * dim..(i + 1) * dim];
                for d in 0..dim {
                    v[d] = x[d] - y[d];
                }
                let pw = ctx.psi_w[i];
                for (k, (&tk, &tw)) in ctx.t_nodes.iter().zip(&ctx.t_weights).enumerate() {
                    for d in 0..dim {
                        yt[d] = y[d] + tk * v[d];
                    }
                    form.eval_into(&yt, &mut buf);
                    let w = pw * tw * tpow[k];
                    for &(src, comp, dst, sign) in &table {
                        acc[dst] += w * sign * v[comp] * buf[src];
                    }
                }
            }
            acc
        })
        .collect();
    Ok(tree_reduce(partials, dim_out))
}

/// Coordinate-frame exterior differential of a form known through its
/// first-derivative jet: `d u = Σ_v du_v ∧ (∂_v coefficients)`.
#[allow(clippy::needless_range_loop)]
pub fn coordinate_d_from_jet1(n: usize, h: usize, grads: &[Vec<f64>]) -> Vec<f64> {
    let src = basis_monomials(n, h);
    let tgt = basis_monomials(n, h + 1);
    let index_of = |m: &Monomial| tgt.binary_search(m).unwrap();
    let mut out = vec![0.0; tgt.len()];
    for (j, m) in src.iter().enumerate() {
        for v in 0..(2 * n + 1) {
            if let Some((sign, wm)) = Monomial::single((v + 1) as u8).wedge(m) {
                out[index_of(&wm)] += sign as f64 * grads[v][j];
            }
        }
    }
    out
}
