//! Constant-coefficient operator matrices between the `E₀` spaces: the
//! intrinsic differential `d_c`, its formal adjoint, and the form Laplacians,
//! with entries in the enveloping algebra of the left-invariant frame.
//!
//! Matrices are taken in the deterministic orthogonal bases of
//! [`crate::projections`]; adjoints are Gram-weighted transposes with
//! `W_j* = −W_j`. A documented JSON schema serializes matrices losslessly
//! (rationals as `"p/q"` strings).

use crate::error::{Error, Result};
use crate::exterior::{basis_monomials, lambda_dim, Covector, Monomial};
use crate::fields::{MultiIndex, WOp};
use crate::forms::{from_e0_coords, to_e0_coords, PolyForm};
use crate::projections::tables;
use crate::qlinalg::QMat;
use crate::scalar::{rat, rat_from_string, rat_to_string, Coeff};
use serde::{Deserialize, Serialize};

/// A matrix of left-invariant differential operators.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub n: usize,
    pub source_degree: usize,
    pub target_degree: usize,
    pub rows: usize,
    pub cols: usize,
    entries: Vec<WOp>,
}

impl OperatorMatrix {
    pub fn zero(
        n: usize,
        source_degree: usize,
        target_degree: usize,
        rows: usize,
        cols: usize,
    ) -> Self {
        OperatorMatrix {
            n,
            source_degree,
            target_degree,
            rows,
            cols,
            entries: vec![WOp::zero(n); rows * cols],
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> &WOp {
        &self.entries[i * self.cols + j]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut WOp {
        &mut self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> impl Iterator<Item = &WOp> {
        self.entries.iter()
    }

    /// Constant matrix as an order-0 operator matrix.
    pub fn from_qmat(n: usize, source_degree: usize, target_degree: usize, m: &QMat) -> Self {
        let mut out = Self::zero(n, source_degree, target_degree, m.rows, m.cols);
        for i in 0..m.rows {
            for j in 0..m.cols {
                let c = &m[(i, j)];
                if !Coeff::is_zero(c) {
                    *out.entry_mut(i, j) = WOp::constant(n, c.clone());
                }
            }
        }
        out
    }

    pub fn identity(n: usize, degree: usize, dim: usize) -> Self {
        Self::from_qmat(n, degree, degree, &QMat::identity(dim))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a = a.add(b);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a = a.sub(b);
        }
        out
    }

    /// Composition `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "operator matrix shape mismatch");
        assert_eq!(self.n, other.n);
        let mut out = Self::zero(
            self.n,
            other.source_degree,
            self.target_degree,
            self.rows,
            other.cols,
        );
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.entry(i, k).is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    if other.entry(k, j).is_zero() {
                        continue;
                    }
                    let prod = self.entry(i, k).compose(other.entry(k, j));
                    let e = out.entry_mut(i, j);
                    *e = e.add(&prod);
                }
            }
        }
        out
    }

    /// Apply to the coefficient functions of a form given in the source
    /// coordinates; returns target coordinates.
    pub fn apply_to_coords(
        &self,
        coords: &[crate::poly::PolyScalar],
    ) -> Vec<crate::poly::PolyScalar> {
        assert_eq!(coords.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = crate::poly::PolyScalar::zero(2 * self.n + 1);
                for (j, f) in coords.iter().enumerate() {
                    if !self.entry(i, j).is_zero() && !f.is_zero() {
                        acc = acc.add(&self.entry(i, j).apply(f));
                    }
                }
                acc
            })
            .collect()
    }

    /// Apply an `E₀`-coordinate operator matrix to a section of `E₀^{src}`.
    pub fn apply_to_form(&self, alpha: &PolyForm) -> PolyForm {
        let coords = to_e0_coords(alpha);
        let out = self.apply_to_coords(&coords);
        from_e0_coords(self.n, self.target_degree, &out)
    }

    /// Gram-weighted formal adjoint: maps `E₀^{tgt} → E₀^{src}` with
    /// `(A*)_{ji} = (g_i / g_j) · A_{ij}♯` and `W♯ = −W` reversed.
    #[allow(clippy::needless_range_loop)]
    pub fn formal_adjoint(&self) -> Self {
        let tab = tables(self.n);
        let g_src = &tab.e0[self.source_degree].gram_diag;
        let g_tgt = &tab.e0[self.target_degree].gram_diag;
        let mut out = Self::zero(
            self.n,
            self.target_degree,
            self.source_degree,
            self.cols,
            self.rows,
        );
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.entry(i, j).is_zero() {
                    continue;
                }
                let adj = self.entry(i, j).formal_adjoint();
                let factor = g_tgt[i].clone() / g_src[j].clone();
                *out.entry_mut(j, i) = adj.scale(&factor);
            }
        }
        out
    }

    /// True when every PBW term of every entry has homogeneous degree `d`.
    pub fn is_homogeneous_of_degree(&self, d: usize) -> bool {
        self.entries.iter().all(|e| e.is_homogeneous_of_degree(d))
    }

    pub fn contains_t(&self) -> bool {
        self.entries.iter().any(|e| e.contains_t())
    }

    /// Every entry rewrites as a combination of words in the horizontal
    /// generators only (`T` eliminated through `T = X₁Y₁ − Y₁X₁`), with a
    /// verified witness. First-order entries contain no `T` outright.
    pub fn is_horizontal_operator(&self) -> bool {
        self.entries
            .iter()
            .all(|e| crate::fields::horizontal_witness(e).is_some())
    }

    pub fn max_order(&self) -> usize {
        self.entries
            .iter()
            .map(|e| e.max_order())
            .max()
            .unwrap_or(0)
    }

    /// All entries have constant coefficients (left-invariance).
    pub fn has_constant_coefficients(&self) -> bool {
        self.entries.iter().all(|e| e.as_constant_terms().is_some())
    }
}

/// The exterior differential as an operator matrix in the monomial bases of
/// `Λʰ → Λ^{h+1}`.
pub fn d_monomial_op(n: usize, h: usize) -> OperatorMatrix {
    let src = basis_monomials(n, h);
    let tgt = basis_monomials(n, h + 1);
    let index_of = |m: &Monomial| tgt.binary_search(m).expect("target monomial");
    let mut out = OperatorMatrix::zero(n, h, h + 1, tgt.len(), src.len());
    let dth = crate::exterior::dtheta(n);
    let theta_idx = (2 * n + 1) as u8;
    for (j, m) in src.iter().enumerate() {
        // (W_k f) ω_k ∧ m  and  (T f) θ ∧ m
        for k in 0..(2 * n + 1) {
            if let Some((sign, wm)) = Monomial::single((k + 1) as u8).wedge(m) {
                let gen = WOp::generator(n, k).scale(&rat(sign as i64));
                let e = out.entry_mut(index_of(&wm), j);
                *e = e.add(&gen);
            }
        }
        // f · d(m)
        if m.contains(theta_idx) {
            let rest: Vec<u8> = m
                .indices()
                .iter()
                .copied()
                .filter(|&i| i != theta_idx)
                .collect();
            let sign = if (m.degree() - 1) % 2 == 0 { 1 } else { -1 };
            let rest_cov = Covector::from_monomial(n, Monomial::new(rest), rat(sign as i64));
            for (mm, c) in dth.wedge(&rest_cov).terms() {
                let e = out.entry_mut(index_of(mm), j);
                *e = e.add(&WOp::constant(n, c.clone()));
            }
        }
    }
    out
}

/// `Π_E = Id − d₀⁻¹ d − d d₀⁻¹` as an operator matrix in the monomial basis.
pub fn pi_e_monomial_op(n: usize, h: usize) -> OperatorMatrix {
    let tab = tables(n);
    let dim = lambda_dim(n, h);
    let mut out = OperatorMatrix::identity(n, h, dim);
    if h <= 2 * n {
        let pinv = OperatorMatrix::from_qmat(n, h + 1, h, &tab.d0_pinv[h].matrix);
        out = out.sub(&pinv.compose(&d_monomial_op(n, h)));
    }
    if h > 0 {
        let pinv = OperatorMatrix::from_qmat(n, h, h - 1, &tab.d0_pinv[h - 1].matrix);
        out = out.sub(&d_monomial_op(n, h - 1).compose(&pinv));
    }
    out
}

/// The matrix of `d_c : E₀ʰ → E₀^{h+1}` in the deterministic bases:
/// `restrict ∘ d ∘ Π_E ∘ embed`, all exact.
pub fn d_c_matrix(n: usize, h: usize) -> OperatorMatrix {
    assert!(h <= 2 * n, "d_c is defined for source degree <= 2n");
    let tab = tables(n);
    let embed = OperatorMatrix::from_qmat(n, h, h, &tab.embed[h]);
    let restrict = OperatorMatrix::from_qmat(n, h + 1, h + 1, &tab.restrict[h + 1]);
    let chain = restrict
        .compose(&d_monomial_op(n, h))
        .compose(&pi_e_monomial_op(n, h))
        .compose(&embed);
    OperatorMatrix {
        n,
        source_degree: h,
        target_degree: h + 1,
        ..chain
    }
}

/// The codifferential `d_c* : E₀ʰ → E₀^{h−1}`, the formal adjoint of
/// `d_c_matrix(n, h−1)`. Zero for `h = 0`.
pub fn codifferential_matrix(n: usize, h: usize) -> OperatorMatrix {
    if h == 0 {
        let dim = tables(n).e0[0].dim();
        return OperatorMatrix::zero(n, 0, 0, dim, dim);
    }
    d_c_matrix(n, h - 1).formal_adjoint()
}

/// The form Laplacian on `E₀ʰ`:
/// `d_c d_c* + d_c* d_c` away from the middle degrees,
/// `(d_c d_c*)² + d_c* d_c` at `h = n`, and
/// `d_c d_c* + (d_c* d_c)²` at `h = n+1`.
pub fn laplacian_matrix(n: usize, h: usize) -> OperatorMatrix {
    let tab = tables(n);
    let dim = tab.e0[h].dim();
    let top = 2 * n + 1;
    let lower = if h > 0 {
        let d = d_c_matrix(n, h - 1);
        d.compose(&d.formal_adjoint())
    } else {
        OperatorMatrix::zero(n, h, h, dim, dim)
    };
    let upper = if h < top {
        let d = d_c_matrix(n, h);
        d.formal_adjoint().compose(&d)
    } else {
        OperatorMatrix::zero(n, h, h, dim, dim)
    };
    if h == n {
        lower.compose(&lower).add(&upper)
    } else if h == n + 1 {
        lower.add(&upper.compose(&upper))
    } else {
        lower.add(&upper)
    }
}

/// Homogeneity degree of the Laplacian under group dilations: 4 in the
/// middle degrees `h ∈ {n, n+1}`, otherwise 2.
pub fn laplacian_homogeneity(n: usize, h: usize) -> usize {
    if h == n || h == n + 1 {
        4
    } else {
        2
    }
}

// --- JSON schema ------------------------------------------------------

/// Serialized term `c·W^I` of an entry.
#[derive(Debug, Serialize, Deserialize)]
struct TermJson {
    #[serde(rename = "I")]
    i: Vec<u16>,
    c: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct BasisVectorJson {
    indices: Vec<Vec<u8>>,
    coeffs: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct BasisJson {
    degree: usize,
    vectors: Vec<BasisVectorJson>,
    gram: Vec<String>,
}

/// On-disk form of an operator matrix:
/// `{ "n", "source_degree", "target_degree", "basis": [source, target],
///    "entries": [[ [ {"I": [...], "c": "p/q"}, ... ] ]] }`.
#[derive(Debug, Serialize, Deserialize)]
pub struct OperatorMatrixJson {
    pub n: usize,
    pub source_degree: usize,
    pub target_degree: usize,
    basis: Vec<BasisJson>,
    entries: Vec<Vec<Vec<TermJson>>>,
}

fn basis_json(n: usize, degree: usize) -> BasisJson {
    let tab = tables(n);
    let b = &tab.e0[degree];
    BasisJson {
        degree,
        vectors: b
            .vectors
            .iter()
            .map(|v| {
                let (idx, cf): (Vec<Vec<u8>>, Vec<String>) = v
                    .terms()
                    .map(|(m, c)| (m.indices().to_vec(), rat_to_string(c)))
                    .unzip();
                BasisVectorJson {
                    indices: idx,
                    coeffs: cf,
                }
            })
            .collect(),
        gram: b.gram_diag.iter().map(rat_to_string).collect(),
    }
}

pub fn to_json(op: &OperatorMatrix) -> Result<OperatorMatrixJson> {
    let mut entries = Vec::with_capacity(op.rows);
    for i in 0..op.rows {
        let mut row = Vec::with_capacity(op.cols);
        for j in 0..op.cols {
            let terms = op
                .entry(i, j)
                .as_constant_terms()
                .ok_or(Error::NonConstantEntries)?;
            row.push(
                terms
                    .iter()
                    .map(|(idx, c)| TermJson {
                        i: idx.exps().to_vec(),
                        c: rat_to_string(c),
                    })
                    .collect(),
            );
        }
        entries.push(row);
    }
    Ok(OperatorMatrixJson {
        n: op.n,
        source_degree: op.source_degree,
        target_degree: op.target_degree,
        basis: vec![
            basis_json(op.n, op.source_degree),
            basis_json(op.n, op.target_degree),
        ],
        entries,
    })
}

pub fn from_json(json: &OperatorMatrixJson) -> Result<OperatorMatrix> {
    let rows = json.entries.len();
    let cols = json.entries.first().map_or(0, |r| r.len());
    let mut out = OperatorMatrix::zero(json.n, json.source_degree, json.target_degree, rows, cols);
    for (i, row) in json.entries.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::InvalidParameter("ragged entry matrix".into()));
        }
        for (j, terms) in row.iter().enumerate() {
            let mut op = WOp::zero(json.n);
            for t in terms {
                let c = rat_from_string(&t.c)
                    .ok_or_else(|| Error::InvalidParameter(format!("bad rational '{}'", t.c)))?;
                if t.i.len() != 2 * json.n + 1 {
                    return Err(Error::InvalidParameter("bad multi-index length".into()));
                }
                op = op.add(&WOp::term(json.n, MultiIndex::from_exps(t.i.clone()), c));
            }
            *out.entry_mut(i, j) = op;
        }
    }
    Ok(out)
}

pub fn export_to_writer<W: std::io::Write>(op: &OperatorMatrix, w: W) -> Result<()> {
    let json = to_json(op)?;
    serde_json::to_writer_pretty(w, &json)?;
    Ok(())
}

pub fn import_from_reader<R: std::io::Read>(r: R) -> Result<OperatorMatrix> {
    let json: OperatorMatrixJson = serde_json::from_reader(r)?;
    from_json(&json)
}
