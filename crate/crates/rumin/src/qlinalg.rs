//! Dense exact linear algebra over the rationals: reduced row echelon form,
//! kernels, column spaces, inverses and the Moore–Penrose pseudo-inverse via
//! rank factorization. Everything is deterministic: pivoting follows column
//! order, never magnitude.

use crate::scalar::Rat;
use num::Zero;

#[derive(Debug, Clone, PartialEq)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = crate::scalar::rat(1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c));
        QMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_cols(cols: Vec<Vec<Rat>>) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |col| col.len());
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r);
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Rat> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.clone() * b.clone();
                    m[(i, j)] += prod;
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Rat::zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        acc += self[(i, j)].clone() * v[j].clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(&other.data) {
            *a += b.clone();
        }
        m
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(&other.data) {
            *a -= b.clone();
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// Reduced row echelon form together with the pivot column indices.
    pub fn rref(&self) -> (QMat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // first nonzero entry in column c at or below row r
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = {
                let pv = m[(r, c)].clone();
                Rat::new(pv.denom().clone(), pv.numer().clone())
            };
            for j in c..m.cols {
                let v = m[(r, j)].clone() * inv.clone();
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let factor = m[(i, c)].clone();
                    for j in c..m.cols {
                        let delta = factor.clone() * m[(r, j)].clone();
                        m[(i, j)] -= delta;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the kernel, one vector per free column, in ascending free
    /// column order.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let (r, pivots) = self.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = crate::scalar::rat(1);
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[(row, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Pivot columns of the original matrix: a basis of the column space.
    pub fn col_space_basis(&self) -> Vec<Vec<Rat>> {
        let (_, pivots) = self.rref();
        pivots.iter().map(|&j| self.col(j)).collect()
    }

    /// Inverse of a square matrix; `None` if singular.
    pub fn inverse(&self) -> Option<QMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = QMat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = crate::scalar::rat(1);
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = QMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    /// Moore–Penrose pseudo-inverse through the rank factorization
    /// `A = C·F` (pivot columns times nonzero rref rows):
    /// `A⁺ = Fᵀ (F Fᵀ)⁻¹ (Cᵀ C)⁻¹ Cᵀ`.
    pub fn pinv(&self) -> QMat {
        let (r, pivots) = self.rref();
        let rank = pivots.len();
        if rank == 0 {
            return QMat::zeros(self.cols, self.rows);
        }
        let c = QMat::from_cols(pivots.iter().map(|&j| self.col(j)).collect());
        let f = QMat::from_rows((0..rank).map(|i| r.row(i)).collect());
        debug_assert_eq!(c.mul(&f), *self);
        let fft = f.mul(&f.transpose()).inverse().expect("FFᵀ invertible");
        let ctc = c.transpose().mul(&c).inverse().expect("CᵀC invertible");
        f.transpose().mul(&fft).mul(&ctc).mul(&c.transpose())
    }
}

impl std::ops::Index<(usize, usize)> for QMat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

impl QMat {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    assert_eq!(a.len(), b.len());
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x.clone() * y.clone();
        }
    }
    acc
}

/// Gram–Schmidt orthogonalization over ℚ without normalization. Returns the
/// orthogonal vectors (dropping exact zeros) — norms stay rational because no
/// square roots are taken.
pub fn gram_schmidt(vectors: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let mut ortho: Vec<Vec<Rat>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for u in &ortho {
            let num = dot(&w, u);
            if num.is_zero() {
                continue;
            }
            let den = dot(u, u);
            let coeff = num / den;
            for (wi, ui) in w.iter_mut().zip(u) {
                *wi -= coeff.clone() * ui.clone();
            }
        }
        if w.iter().any(|c| !c.is_zero()) {
            ortho.push(w);
        }
    }
    ortho
}

/// Orthogonal projector `Σ v vᵀ / ⟨v, v⟩` onto the span of pairwise
/// orthogonal vectors.
pub fn projector_from_orthogonal(dim: usize, vectors: &[Vec<Rat>]) -> QMat {
    let mut p = QMat::zeros(dim, dim);
    for v in vectors {
        assert_eq!(v.len(), dim);
        let nrm = dot(v, v);
        for i in 0..dim {
            if v[i].is_zero() {
                continue;
            }
            for j in 0..dim {
                if v[j].is_zero() {
                    continue;
                }
                let add = v[i].clone() * v[j].clone() / nrm.clone();
                p[(i, j)] += add;
            }
        }
    }
    p
}
