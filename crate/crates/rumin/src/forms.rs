//! Differential forms with polynomial coefficients in the left-invariant
//! coframe, the exterior differential with its weight splitting
//! `d = d₀ + d₁ + d₂`, the projections `Π_E` and `Π_{E₀}`, the intrinsic
//! differential `d_c = Π_{E₀} d Π_E`, and dilation pullbacks.

use crate::error::{Error, Result};
use crate::exterior::{basis_monomials, dtheta, Covector, Monomial};
use crate::fields::apply_generator;
use crate::poly::PolyScalar;
use crate::projections::{tables, LinearMap};
use crate::scalar::{Coeff, Rat};
use std::collections::BTreeMap;

/// A degree-`h` form whose coefficients in the left-invariant coframe are
/// polynomials with rational coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyForm {
    n: usize,
    degree: usize,
    terms: BTreeMap<Monomial, PolyScalar>,
}

impl PolyForm {
    pub fn zero(n: usize, degree: usize) -> Self {
        PolyForm {
            n,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(n: usize, f: PolyScalar) -> Self {
        let mut form = Self::zero(n, 0);
        form.set(Monomial::scalar(), f);
        form
    }

    pub fn from_covector(cov: &Covector<Rat>) -> Self {
        let n = cov.n();
        let mut form = Self::zero(n, cov.degree());
        for (m, c) in cov.terms() {
            form.set(m.clone(), PolyScalar::constant(2 * n + 1, c.clone()));
        }
        form
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &PolyScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> PolyScalar {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| PolyScalar::zero(2 * self.n + 1))
    }

    pub fn set(&mut self, m: Monomial, f: PolyScalar) {
        assert_eq!(m.degree(), self.degree);
        if f.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, f);
        }
    }

    pub fn add_term(&mut self, m: Monomial, f: PolyScalar) {
        assert_eq!(m.degree(), self.degree);
        if f.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(f);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().add(&f);
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
        for (m, f) in &other.terms {
            out.add_term(m.clone(), f.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        PolyForm {
            n: self.n,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(m, f)| (m.clone(), f.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = Self::zero(self.n, self.degree);
        for (m, f) in &self.terms {
            out.set(m.clone(), f.scale(c));
        }
        out
    }

    pub fn mul_scalar(&self, g: &PolyScalar) -> Self {
        let mut out = Self::zero(self.n, self.degree);
        for (m, f) in &self.terms {
            out.add_term(m.clone(), f.mul(g));
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let deg = self.degree + other.degree;
        let mut out = Self::zero(self.n, deg);
        if deg > 2 * self.n + 1 {
            return out;
        }
        for (ma, fa) in &self.terms {
            for (mb, fb) in &other.terms {
                if let Some((sign, m)) = ma.wedge(mb) {
                    let f = fa.mul(fb);
                    out.add_term(m, if sign > 0 { f } else { f.neg() });
                }
            }
        }
        out
    }

    /// Evaluate the coefficients at an exact point.
    pub fn eval_rat(&self, point: &[Rat]) -> Covector<Rat> {
        let mut out = Covector::zero(self.n, self.degree);
        for (m, f) in &self.terms {
            out.insert(m.clone(), f.eval_rat(point));
        }
        out
    }

    /// Evaluate the coefficients at a float point.
    pub fn eval_f64(&self, point: &[f64]) -> Covector<f64> {
        let mut out = Covector::zero(self.n, self.degree);
        for (m, f) in &self.terms {
            out.insert(m.clone(), f.eval_f64(point));
        }
        out
    }

    /// Apply an exact linear map pointwise to the coefficient vector.
    pub fn apply_linear_map(&self, map: &LinearMap) -> Self {
        assert_eq!(self.degree, map.source_degree);
        assert_eq!(self.n, map.n);
        let src = basis_monomials(self.n, map.source_degree);
        let tgt = basis_monomials(self.n, map.target_degree);
        let coeffs: Vec<PolyScalar> = src.iter().map(|m| self.coeff(m)).collect();
        let mut out = Self::zero(self.n, map.target_degree);
        for (i, tm) in tgt.iter().enumerate() {
            let mut acc = PolyScalar::zero(2 * self.n + 1);
            for (j, f) in coeffs.iter().enumerate() {
                let c = &map.matrix[(i, j)];
                if !Coeff::is_zero(c) && !f.is_zero() {
                    acc = acc.add(&f.scale(c));
                }
            }
            out.set(tm.clone(), acc);
        }
        out
    }

    /// Interior product with a constant vector in the frame dual to the
    /// coframe the form is written in.
    pub fn interior_product(&self, v: &[Rat]) -> Self {
        assert_eq!(v.len(), 2 * self.n + 1);
        let mut out = Self::zero(self.n, self.degree.saturating_sub(1));
        if self.degree == 0 {
            return out;
        }
        for (m, f) in &self.terms {
            let unit = Covector::from_monomial(self.n, m.clone(), Rat::from_int(1));
            for (mm, c) in unit.interior_product(v).terms() {
                out.add_term(mm.clone(), f.scale(c));
            }
        }
        out
    }

    /// Pure-weight split of the form (weights `h` and `h+1`).
    pub fn weight_split(&self) -> (Self, Self) {
        let mut low = Self::zero(self.n, self.degree);
        let mut high = Self::zero(self.n, self.degree);
        for (m, f) in &self.terms {
            if m.contains_theta(self.n) {
                high.set(m.clone(), f.clone());
            } else {
                low.set(m.clone(), f.clone());
            }
        }
        (low, high)
    }
}

/// Exterior differential in the left-invariant coframe:
/// `d(f·ω_I) = Σ_j (W_j f) ω_j ∧ ω_I + (T f) θ ∧ ω_I + f · d(ω_I)` with
/// `dω_j = 0` and `dθ = −Σ ω_j ∧ ω_{j+n}`.
pub fn exterior_d(alpha: &PolyForm) -> PolyForm {
    let n = alpha.n();
    let h = alpha.degree();
    let mut out = PolyForm::zero(n, h + 1);
    if h > 2 * n {
        return out;
    }
    let dth = dtheta(n);
    let theta_idx = (2 * n + 1) as u8;
    for (m, f) in alpha.terms() {
        // df ∧ m
        for j in 0..(2 * n + 1) {
            let wf = apply_generator(n, j, f);
            if wf.is_zero() {
                continue;
            }
            if let Some((sign, wm)) = Monomial::single((j + 1) as u8).wedge(m) {
                out.add_term(wm, if sign > 0 { wf } else { wf.neg() });
            }
        }
        // f · d(m): only the θ factor contributes
        if m.contains(theta_idx) {
            let rest: Vec<u8> = m
                .indices()
                .iter()
                .copied()
                .filter(|&i| i != theta_idx)
                .collect();
            let sign = if (m.degree() - 1) % 2 == 0 { 1 } else { -1 };
            let rest_cov = Covector::from_monomial(n, Monomial::new(rest), Rat::from_int(sign));
            for (mm, c) in dth.wedge(&rest_cov).terms() {
                out.add_term(mm.clone(), f.scale(c));
            }
        }
    }
    out
}

/// The components of `d = d₀ + d₁ + d₂` (raising weight by 0, 1, 2).
pub fn exterior_d_split(alpha: &PolyForm) -> (PolyForm, PolyForm, PolyForm) {
    let n = alpha.n();
    let h = alpha.degree();
    let mut parts = [
        PolyForm::zero(n, h + 1),
        PolyForm::zero(n, h + 1),
        PolyForm::zero(n, h + 1),
    ];
    let (low, high) = alpha.weight_split();
    for (src, src_w) in [(low, h), (high, h + 1)] {
        if src.is_zero() {
            continue;
        }
        let d = exterior_d(&src);
        for (m, f) in d.terms() {
            let dw = m.weight(n) - src_w;
            debug_assert!(dw <= 2);
            parts[dw].add_term(m.clone(), f.clone());
        }
    }
    let [d0, d1, d2] = parts;
    (d0, d1, d2)
}

/// Pointwise membership in `E₀ʰ`.
pub fn in_e0(alpha: &PolyForm) -> bool {
    let tab = tables(alpha.n());
    alpha.apply_linear_map(&tab.pi_e0[alpha.degree()]) == *alpha
}

/// Rumin's projection `Π_E = Id − d₀⁻¹d − d·d₀⁻¹` on arbitrary forms.
///
/// On `E₀` sections with `h ≤ n` this reduces to `α − d₀⁻¹ d₁ α`, and it is
/// the identity on `E₀` sections of degree `> n`.
pub fn pi_e_full(alpha: &PolyForm) -> PolyForm {
    let n = alpha.n();
    let h = alpha.degree();
    let tab = tables(n);
    let mut out = alpha.clone();
    if h <= 2 * n {
        let da = exterior_d(alpha);
        out = out.sub(&da.apply_linear_map(&tab.d0_pinv[h]));
    }
    if h > 0 {
        let pinv_alpha = alpha.apply_linear_map(&tab.d0_pinv[h - 1]);
        out = out.sub(&exterior_d(&pinv_alpha));
    }
    out
}

/// `Π_E` restricted to `E₀` sections, per the theorem formula:
/// `α − d₀⁻¹ d₁ α` for `h ≤ n` and `α` for `h > n`.
///
/// Errors on input that is not pointwise in `E₀ʰ`.
pub fn pi_e(alpha: &PolyForm) -> Result<PolyForm> {
    if !in_e0(alpha) {
        return Err(Error::NotRuminForm {
            degree: alpha.degree(),
        });
    }
    let n = alpha.n();
    let h = alpha.degree();
    if h > n {
        return Ok(alpha.clone());
    }
    let tab = tables(n);
    let (_, d1, _) = exterior_d_split(alpha);
    Ok(alpha.sub(&d1.apply_linear_map(&tab.d0_pinv[h])))
}

/// Orthogonal projection onto `E₀` applied pointwise.
pub fn pi_e0_apply(alpha: &PolyForm) -> PolyForm {
    let tab = tables(alpha.n());
    alpha.apply_linear_map(&tab.pi_e0[alpha.degree()])
}

/// The intrinsic differential `d_c = Π_{E₀} d Π_E : E₀ʰ → E₀^{h+1}`.
pub fn d_c_apply(alpha: &PolyForm) -> Result<PolyForm> {
    let projected = pi_e(alpha)?;
    Ok(pi_e0_apply(&exterior_d(&projected)))
}

/// Pullback under the dilation `δ_s`: each monomial scales by `s^{weight}`
/// and coefficients compose with `δ_s`.
pub fn dilation_pullback(s: &Rat, alpha: &PolyForm) -> Result<PolyForm> {
    if !Coeff::is_positive(s) {
        return Err(Error::InvalidParameter(
            "dilation factor must be positive".into(),
        ));
    }
    let n = alpha.n();
    let mut out = PolyForm::zero(n, alpha.degree());
    for (m, f) in alpha.terms() {
        let w = m.weight(n);
        let mut factor = Rat::from_int(1);
        for _ in 0..w {
            factor *= s.clone();
        }
        out.add_term(m.clone(), f.compose_dilation(s).scale(&factor));
    }
    Ok(out)
}

/// Coordinates of an `E₀`-valued form against the deterministic orthogonal
/// basis of `E₀ʰ`.
pub fn to_e0_coords(alpha: &PolyForm) -> Vec<PolyScalar> {
    let n = alpha.n();
    let tab = tables(n);
    let restrict = &tab.restrict[alpha.degree()];
    let basis = basis_monomials(n, alpha.degree());
    let coeffs: Vec<PolyScalar> = basis.iter().map(|m| alpha.coeff(m)).collect();
    (0..restrict.rows)
        .map(|i| {
            let mut acc = PolyScalar::zero(2 * n + 1);
            for (j, f) in coeffs.iter().enumerate() {
                let c = &restrict[(i, j)];
                if !Coeff::is_zero(c) && !f.is_zero() {
                    acc = acc.add(&f.scale(c));
                }
            }
            acc
        })
        .collect()
}

/// Rebuild a form from `E₀` coordinates.
pub fn from_e0_coords(n: usize, h: usize, coords: &[PolyScalar]) -> PolyForm {
    let tab = tables(n);
    assert_eq!(coords.len(), tab.e0[h].dim());
    let mut out = PolyForm::zero(n, h);
    for (v, f) in tab.e0[h].vectors.iter().zip(coords) {
        for (m, c) in v.terms() {
            out.add_term(m.clone(), f.scale(c));
        }
    }
    out
}

/// Rewrite in the coordinate coframe `{dx, dy, dt}` (slot `2n+1` become `dt`)
/// by substituting `θ = dt − ½ Σ (x_j dy_j − y_j dx_j)`.
pub fn to_coordinate_frame(alpha: &PolyForm) -> PolyForm {
    substitute_slot(alpha, &theta_in_coordinate_frame(alpha.n()))
}

/// Rewrite a coordinate-coframe form in the invariant coframe by substituting
/// `dt = θ + ½ Σ (x_j dy_j − y_j dx_j)`.
pub fn to_invariant_frame(alpha: &PolyForm) -> PolyForm {
    substitute_slot(alpha, &dt_in_invariant_frame(alpha.n()))
}

fn theta_in_coordinate_frame(n: usize) -> PolyForm {
    let nvars = 2 * n + 1;
    let mut repl = PolyForm::zero(n, 1);
    repl.set(Monomial::single((2 * n + 1) as u8), PolyScalar::one(nvars));
    for j in 0..n {
        repl.add_term(
            Monomial::single((j + 1) as u8),
            PolyScalar::var(nvars, n + j).scale(&crate::scalar::ratio(1, 2)),
        );
        repl.add_term(
            Monomial::single((n + j + 1) as u8),
            PolyScalar::var(nvars, j).scale(&crate::scalar::ratio(-1, 2)),
        );
    }
    repl
}

fn dt_in_invariant_frame(n: usize) -> PolyForm {
    let nvars = 2 * n + 1;
    let mut repl = PolyForm::zero(n, 1);
    repl.set(Monomial::single((2 * n + 1) as u8), PolyScalar::one(nvars));
    for j in 0..n {
        repl.add_term(
            Monomial::single((j + 1) as u8),
            PolyScalar::var(nvars, n + j).scale(&crate::scalar::ratio(-1, 2)),
        );
        repl.add_term(
            Monomial::single((n + j + 1) as u8),
            PolyScalar::var(nvars, j).scale(&crate::scalar::ratio(1, 2)),
        );
    }
    repl
}

fn substitute_slot(alpha: &PolyForm, replacement: &PolyForm) -> PolyForm {
    let n = alpha.n();
    let last = (2 * n + 1) as u8;
    let mut out = PolyForm::zero(n, alpha.degree());
    for (m, f) in alpha.terms() {
        if !m.contains(last) {
            out.add_term(m.clone(), f.clone());
            continue;
        }
        let rest: Vec<u8> = m.indices().iter().copied().filter(|&i| i != last).collect();
        let sign = if (m.degree() - 1) % 2 == 0 { 1 } else { -1 };
        let mut rest_form = PolyForm::zero(n, rest.len());
        rest_form.set(Monomial::new(rest), f.scale(&Rat::from_int(sign)));
        out = out.add(&replacement.wedge(&rest_form));
    }
    out
}

/// Exterior differential in the coordinate coframe (slots read as
/// `dx_1, …, dy_n, dt`): the independent route used to cross-check
/// [`exterior_d`].
pub fn coordinate_exterior_d(alpha: &PolyForm) -> PolyForm {
    let n = alpha.n();
    let h = alpha.degree();
    let mut out = PolyForm::zero(n, h + 1);
    if h > 2 * n {
        return out;
    }
    for (m, f) in alpha.terms() {
        for v in 0..(2 * n + 1) {
            let df = f.partial(v);
            if df.is_zero() {
                continue;
            }
            if let Some((sign, wm)) = Monomial::single((v + 1) as u8).wedge(m) {
                out.add_term(wm, if sign > 0 { df } else { df.neg() });
            }
        }
    }
    out
}
