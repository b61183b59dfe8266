//! Left-invariant vector fields of ℍⁿ as derivations on polynomials, the
//! multi-index calculus `W^I = W_1^{i_1} ⋯ W_{2n}^{i_{2n}} T^{i_{2n+1}}`, and
//! finite combinations `Σ c_I W^I` with polynomial coefficients.
//!
//! Generators: `X_i = ∂_{x_i} − ½ y_i ∂_t`, `Y_i = ∂_{y_i} + ½ x_i ∂_t`,
//! `T = ∂_t`, with `[X_i, Y_i] = T` the only nontrivial bracket. Products are
//! normal-ordered into the Poincaré–Birkhoff–Witt basis, so composition of
//! operators is exact.

use crate::poly::PolyScalar;
use crate::scalar::{rat, ratio, Rat};
use num::Zero;
use std::collections::BTreeMap;

/// Exponents `(i_1, …, i_{2n+1})` of a PBW monomial `W^I`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex {
    exps: Vec<u16>,
}

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex {
            exps: vec![0; 2 * n + 1],
        }
    }

    pub fn from_exps(exps: Vec<u16>) -> Self {
        assert!(exps.len() % 2 == 1);
        MultiIndex { exps }
    }

    /// The generator `W_{j+1}` (0-based slot `j`).
    pub fn generator(n: usize, j: usize) -> Self {
        let mut m = Self::zero(n);
        m.exps[j] += 1;
        m
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn n(&self) -> usize {
        (self.exps.len() - 1) / 2
    }

    /// Order `|I| = i_1 + … + i_{2n+1}`.
    pub fn order(&self) -> usize {
        self.exps.iter().map(|&e| e as usize).sum()
    }

    /// Homogeneous degree `d(I) = i_1 + … + i_{2n} + 2 i_{2n+1}`.
    pub fn homogeneous_degree(&self) -> usize {
        self.order() + self.exps[self.exps.len() - 1] as usize
    }

    pub fn t_exponent(&self) -> u16 {
        self.exps[self.exps.len() - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }
}

/// Apply one generator to a polynomial.
pub fn apply_generator(n: usize, j: usize, f: &PolyScalar) -> PolyScalar {
    let t = 2 * n;
    if j < n {
        // X_{j+1} = ∂_{x_j} − ½ y_j ∂_t
        let y = PolyScalar::var(2 * n + 1, n + j);
        f.partial(j).sub(&y.mul(&f.partial(t)).scale(&ratio(1, 2)))
    } else if j < 2 * n {
        // Y_{j−n+1} = ∂_{y_j} + ½ x_j ∂_t
        let x = PolyScalar::var(2 * n + 1, j - n);
        f.partial(j).add(&x.mul(&f.partial(t)).scale(&ratio(1, 2)))
    } else {
        f.partial(t)
    }
}

/// Apply `W^I` to a polynomial (rightmost factor of the PBW word first).
pub fn apply_multiindex(i: &MultiIndex, f: &PolyScalar) -> PolyScalar {
    let n = i.n();
    let mut acc = f.clone();
    for j in (0..2 * n + 1).rev() {
        for _ in 0..i.exps[j] {
            acc = apply_generator(n, j, &acc);
        }
    }
    acc
}

/// A finite combination `Σ c_I(x) W^I` of left-invariant derivatives with
/// polynomial coefficients (constant coefficients in the left-invariant
/// operator matrices).
#[derive(Debug, Clone, PartialEq)]
pub struct WOp {
    n: usize,
    terms: BTreeMap<MultiIndex, PolyScalar>,
}

impl WOp {
    pub fn zero(n: usize) -> Self {
        WOp {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::constant(n, rat(1))
    }

    /// Multiplication by a constant.
    pub fn constant(n: usize, c: Rat) -> Self {
        let mut op = Self::zero(n);
        op.insert(MultiIndex::zero(n), PolyScalar::constant(2 * n + 1, c));
        op
    }

    /// Multiplication operator by a polynomial.
    pub fn mul_by(n: usize, f: PolyScalar) -> Self {
        let mut op = Self::zero(n);
        op.insert(MultiIndex::zero(n), f);
        op
    }

    /// A single `c·W^I` term.
    pub fn term(n: usize, i: MultiIndex, c: Rat) -> Self {
        let mut op = Self::zero(n);
        op.insert(i, PolyScalar::constant(2 * n + 1, c));
        op
    }

    /// The generator `W_{j+1}`.
    pub fn generator(n: usize, j: usize) -> Self {
        Self::term(n, MultiIndex::generator(n, j), rat(1))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &PolyScalar)> {
        self.terms.iter()
    }

    pub fn insert(&mut self, i: MultiIndex, c: PolyScalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(i) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().add(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (i, c) in &other.terms {
            out.insert(i.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        WOp {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(i, c)| (i.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        WOp {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(i, k)| (i.clone(), k.scale(c)))
                .collect(),
        }
    }

    /// Apply the operator to a polynomial.
    pub fn apply(&self, f: &PolyScalar) -> PolyScalar {
        let mut acc = PolyScalar::zero(2 * self.n + 1);
        for (i, c) in &self.terms {
            acc = acc.add(&c.mul(&apply_multiindex(i, f)));
        }
        acc
    }

    /// Operator composition `self ∘ other` (apply `other` first), normal
    /// ordered into the PBW basis.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = Self::zero(self.n);
        for (i, g) in &self.terms {
            // Build W^I ∘ other by left-composing the generators of the PBW
            // word from its rightmost factor.
            let mut acc = other.clone();
            for j in (0..2 * self.n + 1).rev() {
                for _ in 0..i.exps[j] {
                    acc = acc.left_compose_generator(j);
                }
            }
            for (k, c) in acc.terms {
                out.insert(k, g.mul(&c));
            }
        }
        out
    }

    /// `W_j ∘ self`: the Leibniz term `(W_j c_K)·W^K` plus the normal-ordered
    /// left product `c_K · (W_j · W^K)`.
    fn left_compose_generator(&self, j: usize) -> Self {
        let n = self.n;
        let mut out = Self::zero(n);
        for (k, c) in &self.terms {
            // derivative of the coefficient
            out.insert(k.clone(), apply_generator(n, j, c));
            // W_j · W^K in the PBW basis
            for (idx, factor) in left_mult_generator(n, j, k) {
                out.insert(idx, c.scale(&factor));
            }
        }
        out
    }

    /// Formal L²(Haar) adjoint of a constant-coefficient operator:
    /// `(c W^I)* = (−1)^{|I|} c · T^{i_T} Y^{b} X^{a}` normal-ordered.
    ///
    /// Panics if a coefficient is non-constant.
    pub fn formal_adjoint(&self) -> Self {
        let n = self.n;
        let mut out = Self::zero(n);
        for (i, c) in &self.terms {
            let c = c
                .as_constant()
                .expect("formal adjoint needs constant coefficients");
            // split I into the X-block, Y-block and T-block
            let mut xpart = MultiIndex::zero(n);
            let mut ypart = MultiIndex::zero(n);
            let mut tpart = MultiIndex::zero(n);
            for j in 0..n {
                xpart.exps[j] = i.exps[j];
                ypart.exps[n + j] = i.exps[n + j];
            }
            tpart.exps[2 * n] = i.exps[2 * n];
            let sign = if i.order() % 2 == 0 { rat(1) } else { rat(-1) };
            // reversed word T^c ∘ Y^b ∘ X^a, using the composition machinery
            // (constant coefficients stay constant)
            let rev = WOp::term(n, tpart, rat(1))
                .compose(&WOp::term(n, ypart, rat(1)))
                .compose(&WOp::term(n, xpart, rat(1)));
            for (k, coeff) in rev.terms {
                out.insert(k, coeff.scale(&(sign.clone() * c.clone())));
            }
        }
        out
    }

    /// Extract the constant coefficients; `None` if any entry depends on the
    /// base point.
    pub fn as_constant_terms(&self) -> Option<BTreeMap<MultiIndex, Rat>> {
        let mut out = BTreeMap::new();
        for (i, c) in &self.terms {
            out.insert(i.clone(), c.as_constant()?);
        }
        Some(out)
    }

    pub fn max_order(&self) -> usize {
        self.terms.keys().map(|i| i.order()).max().unwrap_or(0)
    }

    pub fn contains_t(&self) -> bool {
        self.terms.keys().any(|i| i.t_exponent() > 0)
    }

    /// True when every PBW term has homogeneous degree `d`.
    pub fn is_homogeneous_of_degree(&self, d: usize) -> bool {
        self.terms.keys().all(|i| i.homogeneous_degree() == d)
    }
}

/// Compose a generator word `[g_1, …, g_k]` into the PBW basis
/// (`g_1 ∘ g_2 ∘ …`).
pub fn wop_from_word(n: usize, word: &[usize]) -> WOp {
    let mut acc = WOp::identity(n);
    for &g in word.iter().rev() {
        acc = WOp::generator(n, g).compose(&acc);
    }
    acc
}

/// A representation of a constant-coefficient operator as a combination of
/// words in the horizontal generators only, eliminating `T` through
/// `T = X_1 Y_1 − Y_1 X_1`. Word length never exceeds the homogeneous degree
/// of the term it came from, so a `d(I)`-homogeneous operator is horizontal
/// of order `d(I)`.
///
/// Returns `None` when coefficients are non-constant; otherwise the witness
/// is verified to re-compose exactly to the operator.
pub fn horizontal_witness(op: &WOp) -> Option<Vec<(Vec<usize>, Rat)>> {
    let n = op.n();
    let mut words: Vec<(Vec<usize>, Rat)> = Vec::new();
    for (i, c) in op.terms() {
        let c = c.as_constant()?;
        // horizontal block of the PBW word
        let mut base = Vec::new();
        for (slot, &e) in i.exps().iter().enumerate().take(2 * n) {
            for _ in 0..e {
                base.push(slot);
            }
        }
        // expand T^k into (X1 Y1 − Y1 X1)^k
        let mut expanded: Vec<(Vec<usize>, Rat)> = vec![(base, c)];
        for _ in 0..i.t_exponent() {
            let mut next = Vec::new();
            for (w, cf) in expanded {
                let mut w1 = w.clone();
                w1.extend_from_slice(&[0, n]);
                next.push((w1, cf.clone()));
                let mut w2 = w;
                w2.extend_from_slice(&[n, 0]);
                next.push((w2, -cf));
            }
            expanded = next;
        }
        words.extend(expanded);
    }
    // verify the witness re-composes to the operator
    let mut recomposed = WOp::zero(n);
    for (w, c) in &words {
        recomposed = recomposed.add(&wop_from_word(n, w).scale(c));
    }
    if recomposed == *op {
        Some(words)
    } else {
        None
    }
}

/// `W_j · W^K` in the PBW basis. Only a `Y_i` moving past `X_i^{a}` produces
/// a correction: `Y_i X_i^{a} = X_i^{a} Y_i − a X_i^{a−1} T`.
fn left_mult_generator(n: usize, j: usize, k: &MultiIndex) -> Vec<(MultiIndex, Rat)> {
    let mut main = k.clone();
    main.exps[j] += 1;
    if j >= n && j < 2 * n {
        let xi = j - n;
        let a = k.exps[xi];
        if a > 0 {
            let mut corr = k.clone();
            corr.exps[xi] -= 1;
            corr.exps[2 * n] += 1;
            return vec![(main, rat(1)), (corr, rat(-(a as i64)))];
        }
    }
    vec![(main, rat(1))]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{rand_poly, seeded_rng};

    fn x_op(n: usize, i: usize) -> WOp {
        WOp::generator(n, i)
    }
    fn y_op(n: usize, i: usize) -> WOp {
        WOp::generator(n, n + i)
    }
    fn t_op(n: usize) -> WOp {
        WOp::generator(n, 2 * n)
    }

    #[test]
    fn field_examples() {
        let n = 1;
        let nv = 3;
        let x1 = PolyScalar::var(nv, 0);
        let t = PolyScalar::var(nv, 2);
        // X1(x1) = 1
        assert_eq!(apply_generator(n, 0, &x1), PolyScalar::one(nv));
        // X1(t) = −½ y1
        assert_eq!(
            apply_generator(n, 0, &t),
            PolyScalar::var(nv, 1).scale(&ratio(-1, 2))
        );
    }

    #[test]
    fn commutator_is_t() {
        let mut rng = seeded_rng(21);
        for n in [1usize, 2] {
            for _ in 0..50 {
                let f = rand_poly(&mut rng, n, 4, 5);
                for i in 0..n {
                    let xy = apply_generator(n, i, &apply_generator(n, n + i, &f));
                    let yx = apply_generator(n, n + i, &apply_generator(n, i, &f));
                    let t = apply_generator(n, 2 * n, &f);
                    assert_eq!(xy.sub(&yx), t, "[X,Y] = T at n={n}");
                }
                // all other brackets vanish
                if n == 2 {
                    let xy = apply_generator(n, 0, &apply_generator(n, 3, &f));
                    let yx = apply_generator(n, 3, &apply_generator(n, 0, &f));
                    assert!(xy.sub(&yx).is_zero(), "[X1, Y2] = 0");
                }
            }
        }
    }

    #[test]
    fn composition_matches_application() {
        // Normal-ordered products act like composed applications.
        let mut rng = seeded_rng(22);
        for n in [1usize, 2] {
            let ops = [
                x_op(n, 0).compose(&y_op(n, 0)),
                y_op(n, 0).compose(&x_op(n, 0)),
                y_op(n, 0).compose(&x_op(n, 0)).compose(&x_op(n, 0)),
                t_op(n).compose(&x_op(n, 0)),
                x_op(n, 0).add(&y_op(n, 0).scale(&rat(3))).compose(&t_op(n)),
            ];
            for _ in 0..20 {
                let f = rand_poly(&mut rng, n, 4, 4);
                assert_eq!(
                    ops[0].apply(&f),
                    apply_generator(n, 0, &apply_generator(n, n, &f))
                );
                assert_eq!(
                    ops[1].apply(&f),
                    apply_generator(n, n, &apply_generator(n, 0, &f))
                );
                for op in &ops {
                    // associativity of compose against application
                    let g = op.compose(&x_op(n, 0));
                    assert_eq!(g.apply(&f), op.apply(&apply_generator(n, 0, &f)));
                }
            }
        }
    }

    #[test]
    fn normal_ordering_identity() {
        // YX = XY − T as PBW data.
        let n = 1;
        let yx = y_op(n, 0).compose(&x_op(n, 0));
        let expected = x_op(n, 0).compose(&y_op(n, 0)).sub(&t_op(n));
        assert_eq!(yx, expected);
        // Y X² = X² Y − 2 X T
        let yxx = y_op(n, 0).compose(&x_op(n, 0)).compose(&x_op(n, 0));
        let mut i_xxy = MultiIndex::zero(n);
        i_xxy.exps = vec![2, 1, 0];
        let mut i_xt = MultiIndex::zero(n);
        i_xt.exps = vec![1, 0, 1];
        let expected = WOp::term(n, i_xxy, rat(1)).add(&WOp::term(n, i_xt, rat(-2)));
        assert_eq!(yxx, expected);
    }

    #[test]
    fn adjoint_involution_and_sign() {
        let n = 1;
        // X* = −X, (XY)* = Y*X* = YX = XY − T
        let x = x_op(n, 0);
        assert_eq!(x.formal_adjoint(), x.neg());
        let xy = x_op(n, 0).compose(&y_op(n, 0));
        let adj = xy.formal_adjoint();
        assert_eq!(adj, y_op(n, 0).compose(&x_op(n, 0)));
        // (A*)* = A
        assert_eq!(adj.formal_adjoint(), xy);
    }

    #[test]
    fn grading_bookkeeping() {
        let n = 1;
        let mut i = MultiIndex::zero(n);
        i.exps = vec![1, 2, 1];
        assert_eq!(i.order(), 4);
        assert_eq!(i.homogeneous_degree(), 5);
        let op = WOp::term(n, i, rat(2));
        assert!(op.contains_t());
        assert!(op.is_homogeneous_of_degree(5));
        assert_eq!(op.max_order(), 4);
    }
}
