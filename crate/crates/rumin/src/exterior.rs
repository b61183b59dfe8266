//! Weighted exterior algebra over the left-invariant coframe
//! `{ω_1, …, ω_{2n}, θ}` of ℍⁿ, with `ω_i = dx_i`, `ω_{i+n} = dy_i` and
//! `ω_{2n+1} = θ`.
//!
//! Monomials `ω_{i_1} ∧ … ∧ ω_{i_h}` with strictly increasing indices form
//! the orthonormal basis `Θʰ`; a horizontal factor has weight 1 and `θ` has
//! weight 2. Wedges are normalised to the canonical order
//! `ω_1 < … < ω_{2n} < θ` with the permutation sign, so matrices built on
//! these bases are deterministic.

use crate::poly::PolyScalar;
use crate::scalar::{Coeff, Rat};
use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

/// An exterior monomial, stored as its strictly increasing index list over
/// `{1, …, 2n+1}` (index `2n+1` is `θ`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    indices: Vec<u8>,
}

impl Monomial {
    pub fn new(indices: Vec<u8>) -> Self {
        assert!(
            indices.windows(2).all(|w| w[0] < w[1]),
            "indices must be strictly increasing"
        );
        Monomial { indices }
    }

    pub fn scalar() -> Self {
        Monomial { indices: vec![] }
    }

    pub fn single(i: u8) -> Self {
        Monomial { indices: vec![i] }
    }

    pub fn indices(&self) -> &[u8] {
        &self.indices
    }

    pub fn degree(&self) -> usize {
        self.indices.len()
    }

    pub fn contains(&self, i: u8) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn contains_theta(&self, n: usize) -> bool {
        self.contains((2 * n + 1) as u8)
    }

    /// Weight: degree plus one if `θ` occurs.
    pub fn weight(&self, n: usize) -> usize {
        self.degree() + usize::from(self.contains_theta(n))
    }

    /// Remove an index, returning the sign `(−1)^{position}` of pulling the
    /// corresponding factor to the front.
    fn remove(&self, i: u8) -> Option<(i8, Monomial)> {
        let pos = self.indices.binary_search(&i).ok()?;
        let mut rest = self.indices.clone();
        rest.remove(pos);
        let sign = if pos % 2 == 0 { 1 } else { -1 };
        Some((sign, Monomial { indices: rest }))
    }

    /// Wedge of two monomials: `None` if they share an index, otherwise the
    /// permutation sign and the sorted result.
    pub fn wedge(&self, other: &Monomial) -> Option<(i8, Monomial)> {
        let mut merged = Vec::with_capacity(self.indices.len() + other.indices.len());
        let (mut ai, mut bi) = (0usize, 0usize);
        let mut inversions = 0usize;
        while ai < self.indices.len() && bi < other.indices.len() {
            if self.indices[ai] == other.indices[bi] {
                return None;
            }
            if self.indices[ai] < other.indices[bi] {
                merged.push(self.indices[ai]);
                ai += 1;
            } else {
                // other.indices[bi] jumps over the remaining factors of self
                inversions += self.indices.len() - ai;
                merged.push(other.indices[bi]);
                bi += 1;
            }
        }
        merged.extend_from_slice(&self.indices[ai..]);
        merged.extend_from_slice(&other.indices[bi..]);
        let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
        Some((sign, Monomial { indices: merged }))
    }

    /// Complementary monomial and the sign with `m ∧ m^c = sign · dV`.
    pub fn complement(&self, n: usize) -> (i8, Monomial) {
        let dim = (2 * n + 1) as u8;
        let comp: Vec<u8> = (1..=dim).filter(|i| !self.contains(*i)).collect();
        let comp = Monomial { indices: comp };
        let (sign, full) = self.wedge(&comp).expect("complement is disjoint");
        debug_assert_eq!(full.degree(), 2 * n + 1);
        (sign, comp)
    }
}

/// All degree-`h` basis monomials of `Λʰ`, in lexicographic order.
pub fn basis_monomials(n: usize, h: usize) -> Vec<Monomial> {
    let dim = 2 * n + 1;
    let mut out = Vec::new();
    if h > dim {
        return out;
    }
    let mut idx: Vec<u8> = (1..=h as u8).collect();
    loop {
        out.push(Monomial {
            indices: idx.clone(),
        });
        // next combination in lexicographic order
        let mut i = h;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < (dim - (h - 1 - i)) as u8 {
                idx[i] += 1;
                for j in i + 1..h {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Dimension of `Λʰ` over ℍⁿ, `C(2n+1, h)`.
pub fn lambda_dim(n: usize, h: usize) -> usize {
    binomial(2 * n + 1, h)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1usize;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// A degree-`h` covector: an exact linear combination of basis monomials.
#[derive(Debug, Clone, PartialEq)]
pub struct Covector<C: Coeff> {
    n: usize,
    degree: usize,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> Covector<C> {
    pub fn zero(n: usize, degree: usize) -> Self {
        Covector {
            n,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_monomial(n: usize, m: Monomial, c: C) -> Self {
        let mut v = Covector::zero(n, m.degree());
        v.insert(m, c);
        v
    }

    pub fn basis_element(n: usize, index: u8) -> Self {
        Self::from_monomial(n, Monomial::single(index), C::one())
    }

    /// The volume form `dV = ω_1 ∧ … ∧ ω_{2n+1}`.
    pub fn volume(n: usize) -> Self {
        Self::from_monomial(
            n,
            Monomial::new((1..=(2 * n + 1) as u8).collect()),
            C::one(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn insert(&mut self, m: Monomial, c: C) {
        assert_eq!(m.degree(), self.degree, "monomial degree mismatch");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
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
        assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Covector {
            n: self.n,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Covector::zero(self.n, self.degree);
        }
        Covector {
            n: self.n,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k.clone() * c.clone()))
                .collect(),
        }
    }

    /// Exterior product. Degrees beyond `2n+1` give zero.
    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let deg = self.degree + other.degree;
        let mut out = Covector::zero(self.n, deg.min(2 * self.n + 2));
        if deg > 2 * self.n + 1 {
            out.degree = deg;
            return out;
        }
        out.degree = deg;
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((sign, m)) = ma.wedge(mb) {
                    let c = ca.clone() * cb.clone();
                    out.insert(m, if sign > 0 { c } else { -c });
                }
            }
        }
        out
    }

    /// Inner product for which `Θʰ` is orthonormal.
    pub fn inner(&self, other: &Self) -> C {
        assert_eq!(self.n, other.n);
        assert_eq!(self.degree, other.degree);
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            if let Some(d) = other.terms.get(m) {
                acc = acc + c.clone() * d.clone();
            }
        }
        acc
    }

    /// Hodge star for the orthonormal basis and the volume form `dV`,
    /// determined by `b ∧ ★a = ⟨b, a⟩ dV`.
    pub fn hodge_star(&self) -> Self {
        let mut out = Covector::zero(self.n, 2 * self.n + 1 - self.degree);
        for (m, c) in &self.terms {
            let (sign, comp) = m.complement(self.n);
            let c = c.clone();
            out.insert(comp, if sign > 0 { c } else { -c });
        }
        out
    }

    /// Split into the pure-weight-`h` and pure-weight-`h+1` components.
    pub fn weight_split(&self) -> (Self, Self) {
        let mut low = Covector::zero(self.n, self.degree);
        let mut high = Covector::zero(self.n, self.degree);
        for (m, c) in &self.terms {
            if m.contains_theta(self.n) {
                high.insert(m.clone(), c.clone());
            } else {
                low.insert(m.clone(), c.clone());
            }
        }
        (low, high)
    }

    /// Pure weight of the covector if it has one.
    pub fn pure_weight(&self) -> Option<usize> {
        let mut w = None;
        for m in self.terms.keys() {
            let mw = m.weight(self.n);
            match w {
                None => w = Some(mw),
                Some(prev) if prev != mw => return None,
                _ => {}
            }
        }
        w
    }

    /// Interior product `ι_v` with a constant vector given in the frame dual
    /// to the coframe (component `k` pairs with index `k+1`).
    pub fn interior_product(&self, v: &[C]) -> Self {
        assert_eq!(v.len(), 2 * self.n + 1);
        let mut out = Covector::zero(self.n, self.degree.saturating_sub(1));
        if self.degree == 0 {
            return out;
        }
        for (m, c) in &self.terms {
            for (pos, &i) in m.indices().iter().enumerate() {
                let vk = v[(i - 1) as usize].clone();
                if vk.is_zero() {
                    continue;
                }
                let (sign, rest) = m.remove(i).unwrap();
                debug_assert_eq!(sign, if pos % 2 == 0 { 1 } else { -1 });
                let coeff = vk * c.clone();
                out.insert(rest, if sign > 0 { coeff } else { -coeff });
            }
        }
        out
    }

    /// Dense coefficient vector over `basis_monomials(n, degree)`.
    pub fn to_dense(&self) -> Vec<C> {
        let basis = basis_monomials(self.n, self.degree);
        basis.iter().map(|m| self.coeff(m)).collect()
    }

    pub fn from_dense(n: usize, degree: usize, coeffs: &[C]) -> Self {
        let basis = basis_monomials(n, degree);
        assert_eq!(coeffs.len(), basis.len());
        let mut out = Covector::zero(n, degree);
        for (m, c) in basis.into_iter().zip(coeffs) {
            out.insert(m, c.clone());
        }
        out
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Covector<D> {
        let mut out = Covector::zero(self.n, self.degree);
        for (m, c) in &self.terms {
            out.insert(m.clone(), f(c));
        }
        out
    }
}

/// `dθ` in the invariant coframe, derived once per `n` by exterior
/// differentiation of `θ = dt − ½ Σ (x_j dy_j − y_j dx_j)` in the coordinate
/// coframe, and cached. The value is `−Σ_j ω_j ∧ ω_{j+n}`.
pub fn dtheta(n: usize) -> Covector<Rat> {
    static CACHE: OnceLock<Mutex<BTreeMap<usize, Covector<Rat>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    let mut guard = cache.lock().unwrap();
    guard.entry(n).or_insert_with(|| derive_dtheta(n)).clone()
}

/// Exterior differentiation of the contact form in the coordinate coframe
/// `{dx_1, …, dy_n, dt}` (same index layout, with slot `2n+1` read as `dt`).
fn derive_dtheta(n: usize) -> Covector<Rat> {
    let nvars = 2 * n + 1;
    // θ = dt − ½ Σ_j (x_j dy_j − y_j dx_j) as coefficient functions per slot.
    let mut theta: BTreeMap<Monomial, PolyScalar> = BTreeMap::new();
    theta.insert(Monomial::single((2 * n + 1) as u8), PolyScalar::one(nvars));
    for j in 0..n {
        let xj = PolyScalar::var(nvars, j);
        let yj = PolyScalar::var(nvars, n + j);
        theta.insert(
            Monomial::single((n + j + 1) as u8),
            xj.scale(&crate::scalar::ratio(-1, 2)),
        );
        theta.insert(
            Monomial::single((j + 1) as u8),
            yj.scale(&crate::scalar::ratio(1, 2)),
        );
    }
    // Coordinate exterior differential: d(f du_S) = Σ_v (∂f/∂v) du_v ∧ du_S.
    let mut result: BTreeMap<Monomial, PolyScalar> = BTreeMap::new();
    for (m, f) in &theta {
        for v in 0..nvars {
            let df = f.partial(v);
            if df.is_zero() {
                continue;
            }
            if let Some((sign, wm)) = Monomial::single((v + 1) as u8).wedge(m) {
                let term = if sign > 0 { df } else { df.neg() };
                let entry = result.entry(wm).or_insert_with(|| PolyScalar::zero(nvars));
                *entry = entry.add(&term);
            }
        }
    }
    let mut out = Covector::zero(n, 2);
    for (m, f) in result {
        if f.is_zero() {
            continue;
        }
        // dθ has constant coefficients and no dt factor, so it reads the same
        // in both coframes.
        assert!(!m.contains_theta(n), "dθ must not involve dt");
        let c = f.as_constant().expect("dθ must have constant coefficients");
        out.insert(m, c);
    }
    out
}

/// Lefschetz operator `L ξ = dθ ∧ ξ`.
pub fn lefschetz(a: &Covector<Rat>) -> Covector<Rat> {
    dtheta(a.n()).wedge(a)
}

/// Rewrite an invariant-frame covector in the coordinate coframe at `point`,
/// substituting `θ = dt − ½ Σ (x_j dy_j − y_j dx_j)`.
pub fn invariant_to_coordinate<C: Coeff>(cov: &Covector<C>, point: &[C]) -> Covector<C> {
    substitute_last(cov, point, true)
}

/// Rewrite a coordinate-coframe covector in the invariant coframe at `point`,
/// substituting `dt = θ + ½ Σ (x_j dy_j − y_j dx_j)`.
pub fn coordinate_to_invariant<C: Coeff>(cov: &Covector<C>, point: &[C]) -> Covector<C> {
    substitute_last(cov, point, false)
}

fn substitute_last<C: Coeff>(cov: &Covector<C>, point: &[C], to_coordinate: bool) -> Covector<C> {
    let n = cov.n();
    assert_eq!(point.len(), 2 * n + 1);
    let last = (2 * n + 1) as u8;
    // replacement for the slot-(2n+1) factor
    let mut repl = Covector::from_monomial(n, Monomial::single(last), C::one());
    for j in 0..n {
        let xj = point[j].clone();
        let yj = point[n + j].clone();
        let (cx, cy) = if to_coordinate {
            // θ = dt + ½ y_j dx_j − ½ x_j dy_j
            (C::one_half() * yj, -(C::one_half() * xj))
        } else {
            // dt = θ − ½ y_j dx_j + ½ x_j dy_j
            (-(C::one_half() * yj), C::one_half() * xj)
        };
        repl.insert(Monomial::single((j + 1) as u8), cx);
        repl.insert(Monomial::single((n + j + 1) as u8), cy);
    }
    let mut out = Covector::zero(n, cov.degree());
    for (m, c) in cov.terms() {
        match m.remove(last) {
            None => out.insert(m.clone(), c.clone()),
            Some((sign, rest)) => {
                // m = e_last ∧ rest · sign
                let expanded = repl.wedge(&Covector::from_monomial(n, rest, C::one()));
                let factor = if sign > 0 { c.clone() } else { -c.clone() };
                for (mm, cc) in expanded.terms() {
                    out.insert(mm.clone(), cc.clone() * factor.clone());
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rat};

    fn mono(idx: &[u8]) -> Monomial {
        Monomial::new(idx.to_vec())
    }

    fn basis_cov(n: usize, idx: &[u8]) -> Covector<Rat> {
        Covector::from_monomial(n, mono(idx), rat(1))
    }

    #[test]
    fn wedge_signs_and_nilpotence() {
        let n = 2;
        let w1 = basis_cov(n, &[1]);
        let w2 = basis_cov(n, &[2]);
        let w3 = basis_cov(n, &[3]);
        assert!(w1.wedge(&w1).is_zero());
        assert_eq!(w2.wedge(&w1), w1.wedge(&w2).neg());
        // bilinearity
        let s = w1.add(&w2).wedge(&w3);
        assert_eq!(s, w1.wedge(&w3).add(&w2.wedge(&w3)));
        // associativity on a sample
        let a = w1.add(&w2.scale(&rat(3)));
        let b = w2.add(&w3);
        let c = basis_cov(n, &[4]).add(&basis_cov(n, &[5]));
        assert_eq!(a.wedge(&b).wedge(&c), a.wedge(&b.wedge(&c)));
    }

    #[test]
    fn graded_anticommutativity() {
        let n = 2;
        let a = basis_cov(n, &[1, 2]); // degree 2
        let b = basis_cov(n, &[3]); // degree 1
                                    // a∧b = (−1)^{2·1} b∧a
        assert_eq!(a.wedge(&b), b.wedge(&a));
        let c = basis_cov(n, &[4]);
        assert_eq!(b.wedge(&c), c.wedge(&b).neg());
    }

    #[test]
    fn hodge_star_defining_relation_exhaustive() {
        // b ∧ ★a = ⟨b, a⟩ dV over the monomial bases, n ∈ {1, 2}, all h.
        for n in [1usize, 2] {
            let dv = Covector::<Rat>::volume(n);
            for h in 0..=(2 * n + 1) {
                for a in basis_monomials(n, h) {
                    let av = Covector::from_monomial(n, a.clone(), rat(1));
                    let star = av.hodge_star();
                    for b in basis_monomials(n, h) {
                        let bv = Covector::from_monomial(n, b.clone(), rat(1));
                        let lhs = bv.wedge(&star);
                        let rhs = dv.scale(&bv.inner(&av));
                        assert_eq!(lhs, rhs, "n={n} h={h}");
                    }
                    // ★★ = (−1)^{h(2n+1−h)} = +1 in odd dimension
                    assert_eq!(star.hodge_star(), av);
                }
            }
        }
    }

    #[test]
    fn hodge_star_examples() {
        let n = 1;
        // ★1 = dV, ★dV = 1
        let one = Covector::from_monomial(n, Monomial::scalar(), rat(1));
        assert_eq!(one.hodge_star(), Covector::volume(n));
        assert_eq!(Covector::<Rat>::volume(n).hodge_star(), one);
        // ★dx1 = dy1 ∧ θ
        assert_eq!(basis_cov(n, &[1]).hodge_star(), basis_cov(n, &[2, 3]));
    }

    #[test]
    fn weights_and_split() {
        let n = 1;
        let theta = basis_cov(n, &[3]);
        let dx = basis_cov(n, &[1]);
        assert_eq!(mono(&[3]).weight(n), 2);
        assert_eq!(mono(&[1]).weight(n), 1);
        let mixed = dx.add(&theta);
        let (lo, hi) = mixed.weight_split();
        assert_eq!(lo, dx);
        assert_eq!(hi, theta);
        assert_eq!(dx.weight_split().1, Covector::zero(n, 1));
        assert_eq!(theta.weight_split().0, Covector::zero(n, 1));
        // different weights are orthogonal
        assert_eq!(lo.inner(&hi), rat(0));
    }

    #[test]
    fn dimension_counts() {
        for n in [1usize, 2, 3] {
            for h in 0..=(2 * n + 1) {
                assert_eq!(basis_monomials(n, h).len(), lambda_dim(n, h));
                // Λʰ = Λ^{h,h} ⊕ Λ^{h,h+1} with dims C(2n,h) and C(2n,h−1).
                let horiz = basis_monomials(n, h)
                    .iter()
                    .filter(|m| !m.contains_theta(n))
                    .count();
                assert_eq!(horiz, binomial(2 * n, h));
                assert_eq!(
                    lambda_dim(n, h) - horiz,
                    if h == 0 { 0 } else { binomial(2 * n, h - 1) }
                );
            }
        }
    }

    #[test]
    fn dtheta_value_and_lefschetz() {
        for n in [1usize, 2, 3] {
            let dt = dtheta(n);
            let mut expected = Covector::zero(n, 2);
            for j in 1..=n as u8 {
                expected.insert(mono(&[j, j + n as u8]), rat(-1));
            }
            assert_eq!(dt, expected);
            assert_eq!(dt.pure_weight(), Some(2));
        }
        // L(1) = dθ
        let one = Covector::from_monomial(1, Monomial::scalar(), rat(1));
        assert_eq!(lefschetz(&one), dtheta(1));
        // n=1: L(dx1) = dθ ∧ dx1 = −dx1∧dy1∧dx1 = 0
        assert!(lefschetz(&basis_cov(1, &[1])).is_zero());
        // L(θ∧a) = θ∧L(a): dθ has even degree, so it moves past θ with
        // sign (−1)^{2·1} = +1
        let n = 2;
        let a = basis_cov(n, &[1]);
        let theta = basis_cov(n, &[5]);
        let lhs = lefschetz(&theta.wedge(&a));
        let rhs = theta.wedge(&lefschetz(&a));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn frame_conversion_round_trip() {
        let n = 2;
        let point: Vec<Rat> = vec![rat(1), rat(-2), rat(3), rat(5), rat(7)];
        for h in 0..=5usize {
            for m in basis_monomials(n, h) {
                let cov = Covector::from_monomial(n, m, rat(1));
                let there = invariant_to_coordinate(&cov, &point);
                let back = coordinate_to_invariant(&there, &point);
                assert_eq!(back, cov);
            }
        }
    }

    #[test]
    fn interior_product_basics() {
        let n = 1;
        let a = basis_cov(n, &[1, 2]);
        // ι_{e_1}(ω1∧ω2) = ω2, ι_{e_2}(ω1∧ω2) = −ω1
        let e1 = vec![rat(1), rat(0), rat(0)];
        let e2 = vec![rat(0), rat(1), rat(0)];
        assert_eq!(a.interior_product(&e1), basis_cov(n, &[2]));
        assert_eq!(a.interior_product(&e2), basis_cov(n, &[1]).neg());
    }
}
