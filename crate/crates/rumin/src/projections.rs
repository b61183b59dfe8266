//! Pointwise layer of the Rumin construction: the algebraic operator `d₀`,
//! its Moore–Penrose pseudo-inverse, the spaces `E₀ʰ = ker d₀ ∩ (Im d₀)^⊥`
//! and the orthogonal projection `Π_{E₀} = Id − d₀⁻¹d₀ − d₀d₀⁻¹`, all as
//! exact rational matrices in the monomial bases.
//!
//! `E₀` bases are stored as rational spanning sets, pairwise orthogonal after
//! Gram–Schmidt over ℚ, together with the diagonal of their Gram matrix;
//! orthonormalization would need square roots and is never performed.

use crate::exterior::{basis_monomials, binomial, dtheta, lambda_dim, Covector, Monomial};
use crate::qlinalg::{dot, gram_schmidt, projector_from_orthogonal, QMat};
use crate::scalar::Rat;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// An exact linear map between graded covector spaces, in the monomial bases.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    pub n: usize,
    pub source_degree: usize,
    pub target_degree: usize,
    pub matrix: QMat,
}

impl LinearMap {
    pub fn apply(&self, v: &Covector<Rat>) -> Covector<Rat> {
        assert_eq!(v.n(), self.n);
        assert_eq!(v.degree(), self.source_degree);
        let out = self.matrix.mul_vec(&v.to_dense());
        Covector::from_dense(self.n, self.target_degree, &out)
    }
}

/// A rational spanning basis of a subspace of `Λʰ`, pairwise orthogonal, with
/// the squared norms on the Gram diagonal.
#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    pub n: usize,
    pub degree: usize,
    pub vectors: Vec<Covector<Rat>>,
    pub gram_diag: Vec<Rat>,
}

impl SubspaceBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Coordinates of `v` with respect to the orthogonal basis
    /// (`c_i = ⟨v, b_i⟩ / ‖b_i‖²`). Only valid on vectors in the span.
    pub fn coords(&self, v: &Covector<Rat>) -> Vec<Rat> {
        self.vectors
            .iter()
            .zip(&self.gram_diag)
            .map(|(b, g)| v.inner(b) / g.clone())
            .collect()
    }

    pub fn combine(&self, coords: &[Rat]) -> Covector<Rat> {
        assert_eq!(coords.len(), self.vectors.len());
        let mut out = Covector::zero(self.n, self.degree);
        for (b, c) in self.vectors.iter().zip(coords) {
            out = out.add(&b.scale(c));
        }
        out
    }
}

/// All per-degree tables for a fixed `n`, built once and shared read-only.
#[derive(Debug)]
pub struct Tables {
    pub n: usize,
    /// `d0[h]: Λʰ → Λ^{h+1}` for `h = 0..=2n+1` (the top one is the zero map).
    pub d0: Vec<LinearMap>,
    /// `d0_pinv[h]: Λ^{h+1} → Λʰ`, the Moore–Penrose inverse of `d0[h]`.
    pub d0_pinv: Vec<LinearMap>,
    /// Orthogonal projection of `Λʰ` onto `E₀ʰ`.
    pub pi_e0: Vec<LinearMap>,
    /// Orthogonal rational bases of `E₀ʰ`.
    pub e0: Vec<SubspaceBasis>,
    /// `embed[h]`: the `dim Λʰ × N_h` matrix whose columns are the basis.
    pub embed: Vec<QMat>,
    /// `restrict[h] = G⁻¹ Bᵀ`: monomial coordinates to `E₀` coordinates
    /// (equals orthogonal projection expressed in basis coordinates).
    pub restrict: Vec<QMat>,
}

/// Shared tables for a given `n`, memoized process-wide.
pub fn tables(n: usize) -> Arc<Tables> {
    static REGISTRY: OnceLock<Mutex<HashMap<usize, Arc<Tables>>>> = OnceLock::new();
    let reg = REGISTRY.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = reg.lock().unwrap();
    guard
        .entry(n)
        .or_insert_with(|| Arc::new(Tables::build(n)))
        .clone()
}

impl Tables {
    fn build(n: usize) -> Tables {
        assert!(n >= 1, "n must be >= 1");
        let top = 2 * n + 1;
        let mut d0 = Vec::with_capacity(top + 1);
        for h in 0..=top {
            d0.push(build_d0(n, h));
        }
        let d0_pinv: Vec<LinearMap> = d0
            .iter()
            .map(|m| LinearMap {
                n,
                source_degree: m.target_degree,
                target_degree: m.source_degree,
                matrix: m.matrix.pinv(),
            })
            .collect();

        let mut pi_e0 = Vec::with_capacity(top + 1);
        let mut e0 = Vec::with_capacity(top + 1);
        let mut embed = Vec::with_capacity(top + 1);
        let mut restrict = Vec::with_capacity(top + 1);
        for h in 0..=top {
            let dim = lambda_dim(n, h);
            // Π_{E₀} = Id − d₀⁻¹d₀ − d₀d₀⁻¹
            let mut p = QMat::identity(dim).sub(&d0_pinv[h].matrix.mul(&d0[h].matrix));
            if h > 0 {
                p = p.sub(&d0[h - 1].matrix.mul(&d0_pinv[h - 1].matrix));
            }
            pi_e0.push(LinearMap {
                n,
                source_degree: h,
                target_degree: h,
                matrix: p,
            });

            // E₀ʰ = ker d₀ ∩ (Im d₀)^⊥ by stacked exact kernel computation.
            let mut rows: Vec<Vec<Rat>> = Vec::new();
            for i in 0..d0[h].matrix.rows {
                rows.push(d0[h].matrix.row(i));
            }
            if h > 0 {
                let tr = d0[h - 1].matrix.transpose();
                for i in 0..tr.rows {
                    rows.push(tr.row(i));
                }
            }
            let stacked = if rows.is_empty() {
                QMat::zeros(0, dim)
            } else {
                QMat::from_rows(rows)
            };
            let kernel = stacked.kernel_basis();
            let ortho = gram_schmidt(&kernel);
            let gram_diag: Vec<Rat> = ortho.iter().map(|v| dot(v, v)).collect();
            let vectors: Vec<Covector<Rat>> = ortho
                .iter()
                .map(|v| Covector::from_dense(n, h, v))
                .collect();
            embed.push(QMat::from_cols(ortho.clone()));
            let g_inv_rows: Vec<Vec<Rat>> = ortho
                .iter()
                .zip(&gram_diag)
                .map(|(v, g)| v.iter().map(|c| c.clone() / g.clone()).collect())
                .collect();
            restrict.push(if g_inv_rows.is_empty() {
                QMat::zeros(0, dim)
            } else {
                QMat::from_rows(g_inv_rows)
            });
            e0.push(SubspaceBasis {
                n,
                degree: h,
                vectors,
                gram_diag,
            });
        }

        Tables {
            n,
            d0,
            d0_pinv,
            pi_e0,
            e0,
            embed,
            restrict,
        }
    }
}

/// The algebraic operator `d₀` on `Λʰ`: zero on weight-`h` monomials and
/// `θ ∧ ω_J ↦ dθ ∧ ω_J` on the weight-`(h+1)` part.
fn build_d0(n: usize, h: usize) -> LinearMap {
    let src = basis_monomials(n, h);
    let tgt_dim = lambda_dim(n, h + 1);
    let mut cols: Vec<Vec<Rat>> = Vec::with_capacity(src.len());
    let dth = dtheta(n);
    let theta_idx = (2 * n + 1) as u8;
    for m in &src {
        match m_remove_theta(m, theta_idx) {
            None => cols.push(vec![Rat::new(0.into(), 1.into()); tgt_dim]),
            Some((sign, rest)) => {
                let rest_cov = Covector::from_monomial(n, rest, crate::scalar::rat(sign as i64));
                let image = dth.wedge(&rest_cov);
                cols.push(image.to_dense());
            }
        }
    }
    LinearMap {
        n,
        source_degree: h,
        target_degree: h + 1,
        matrix: if src.is_empty() {
            QMat::zeros(tgt_dim, 0)
        } else {
            QMat::from_cols(cols)
        },
    }
}

fn m_remove_theta(m: &Monomial, theta_idx: u8) -> Option<(i8, Monomial)> {
    if !m.contains(theta_idx) {
        return None;
    }
    // θ is the largest index, so it sits at the last slot.
    let rest: Vec<u8> = m
        .indices()
        .iter()
        .copied()
        .filter(|&i| i != theta_idx)
        .collect();
    let sign = if (m.degree() - 1).is_multiple_of(2) {
        1
    } else {
        -1
    };
    Some((sign, Monomial::new(rest)))
}

/// Theorem dimension count for `E₀ʰ`:
/// `C(2n,h) − C(2n,h−2)` for `1 ≤ h ≤ n`, Hodge-dual values above, 1 at the
/// endpoints.
pub fn e0_dim_formula(n: usize, h: usize) -> usize {
    let top = 2 * n + 1;
    assert!(h <= top);
    let hh = if h > n { top - h } else { h };
    if hh == 0 {
        1
    } else {
        binomial(2 * n, hh) - if hh >= 2 { binomial(2 * n, hh - 2) } else { 0 }
    }
}

/// Per-degree accessors.
pub fn d0_map(n: usize, h: usize) -> LinearMap {
    tables(n).d0[h].clone()
}

pub fn d0_pinv(n: usize, h: usize) -> LinearMap {
    tables(n).d0_pinv[h].clone()
}

pub fn e0_basis(n: usize, h: usize) -> SubspaceBasis {
    tables(n).e0[h].clone()
}

pub fn pi_e0(n: usize, h: usize) -> LinearMap {
    tables(n).pi_e0[h].clone()
}

/// Independent reconstruction of `Π_{E₀}` as `Σ v vᵀ/‖v‖²` from the basis.
pub fn pi_e0_from_basis(n: usize, h: usize) -> QMat {
    let tab = tables(n);
    let dim = lambda_dim(n, h);
    let vecs: Vec<Vec<Rat>> = tab.e0[h].vectors.iter().map(|v| v.to_dense()).collect();
    projector_from_orthogonal(dim, &vecs)
}
