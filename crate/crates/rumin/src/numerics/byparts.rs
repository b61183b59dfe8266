//! Integration by parts for the intrinsic differential:
//! `∫_U (d_c φ) ∧ α = (−1)^{h+1} ∫_U φ ∧ d_c α` for compactly supported α.
//!
//! φ is a polynomial Rumin `h`-form; α is a bump-times-polynomial Rumin
//! `(2n−h)`-form supported in `U`. Both wedge products are top-degree forms
//! whose integral against `dV` is the Lebesgue integral of the coefficient
//! (the coframe has unit determinant). The integrand is smooth and
//! compactly supported, so the midpoint tensor rule over the support box
//! converges superalgebraically.

use super::bump::Bump;
use super::callable::{BumpedPolyField, FormField};
use super::domain::Domain;
use super::homotopy::dc_at_point;
use super::quad::{ball_nodes, midpoint_grid, par_sum};
use crate::error::{Error, Result};
use crate::exterior::{basis_monomials, Covector, Monomial};
use crate::forms::{d_c_apply, in_e0, PolyForm};
use crate::scalar::rat;

/// Wedge of two dense covector values; returns the coefficient of the
/// volume monomial when the degrees are complementary.
fn wedge_top(n: usize, ha: usize, a: &[f64], hb: usize, b: &[f64]) -> f64 {
    assert_eq!(ha + hb, 2 * n + 1);
    let basis_a = basis_monomials(n, ha);
    let basis_b = basis_monomials(n, hb);
    let mut acc = 0.0;
    for (i, ma) in basis_a.iter().enumerate() {
        if a[i] == 0.0 {
            continue;
        }
        for (j, mb) in basis_b.iter().enumerate() {
            if b[j] == 0.0 {
                continue;
            }
            if let Some((sign, _)) = ma.wedge(mb) {
                acc += sign as f64 * a[i] * b[j];
            }
        }
    }
    acc
}

/// Quadrature of `∫ (d_cφ)∧α − (−1)^{h+1} ∫ φ∧d_cα` with `α = χ·β`.
///
/// Errors when the support of χ is not compactly inside `U`, when the
/// degrees are not complementary, or when a factor is not Rumin-valued.
pub fn byparts_residual(
    phi: &PolyForm,
    beta: &PolyForm,
    bump: &Bump,
    domain: &Domain,
    grid: usize,
) -> Result<f64> {
    let n = phi.n();
    let h = phi.degree();
    if beta.degree() != 2 * n - h {
        return Err(Error::DegreeMismatch {
            expected: 2 * n - h,
            got: beta.degree(),
        });
    }
    if !in_e0(phi) || !in_e0(beta) {
        return Err(Error::NotRuminForm { degree: h });
    }
    // compact support check: the corners of the support box must lie in U
    let box_ = bump.support_box();
    let dim = 2 * n + 1;
    for corner in 0..(1usize << dim) {
        let p: Vec<f64> = (0..dim)
            .map(|d| {
                if corner >> d & 1 == 1 {
                    box_[d].1
                } else {
                    box_[d].0
                }
            })
            .collect();
        if !domain.contains(&p) {
            return Err(Error::InvalidParameter(
                "bump support not compactly contained in the domain".into(),
            ));
        }
    }

    if phi.is_zero() || beta.is_zero() {
        return Ok(0.0);
    }

    let dc_phi = d_c_apply(phi)?;
    let alpha_field = BumpedPolyField::new(bump.clone(), beta);
    let phi_dense = |x: &[f64]| phi.eval_f64(x).to_dense();
    let dcphi_dense = |x: &[f64]| dc_phi.eval_f64(x).to_dense();

    let (coords, weights) = ball_nodes(&bump.center, bump.radius, grid);
    let count = weights.len();
    let sums = par_sum(count, 2, |i, acc| {
        let x = &coords[i * dim..(i + 1) * dim];
        let w = weights[i];
        // I1 integrand: (d_cφ) ∧ χβ
        let av = alpha_field.value(x);
        let i1 = wedge_top(n, h + 1, &dcphi_dense(x), 2 * n - h, &av);
        // I2 integrand: φ ∧ d_c(χβ)
        let dca = dc_at_point(&alpha_field, x);
        let i2 = wedge_top(n, h, &phi_dense(x), 2 * n - h + 1, &dca);
        acc[0] += w * i1;
        acc[1] += w * i2;
    });
    let i1 = sums[0];
    let i2 = sums[1];
    let sign = if (h + 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok((i1 - sign * i2).abs())
}

/// Shared helper for the adjoint quadrature oracle: the L² pairing
/// `∫ ⟨a, b⟩` of two fields over the bump support box.
pub fn l2_pairing(a: &dyn FormField, b: &dyn FormField, box_: &[(f64, f64)], grid: usize) -> f64 {
    assert_eq!(a.degree(), b.degree());
    let dim = box_.len();
    let (coords, cell) = midpoint_grid(box_, grid);
    let count = coords.len() / dim;
    let s = par_sum(count, 1, |i, acc| {
        let x = &coords[i * dim..(i + 1) * dim];
        let av = a.value(x);
        let bv = b.value(x);
        acc[0] += av.iter().zip(&bv).map(|(p, q)| p * q).sum::<f64>();
    });
    s[0] * cell
}

/// Sanity value used in tests: `∫ dV`-coefficient of `ω_full ∧ 1` is the
/// coefficient itself.
pub fn volume_pairing_check(n: usize) -> bool {
    let top = 2 * n + 1;
    let vol = Covector::<crate::scalar::Rat>::volume(n);
    let dense: Vec<f64> = vol
        .to_dense()
        .iter()
        .map(crate::scalar::rat_to_f64)
        .collect();
    let one = [1.0];
    (wedge_top(n, top, &dense, 0, &one) - 1.0).abs() < 1e-15 && {
        let m = Monomial::scalar();
        let _ = rat(1);
        m.degree() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{rand_e0_polyform, seeded_rng};

    #[test]
    fn zero_inputs() {
        let n = 1;
        let bump = Bump::new(3, 0.3);
        let dom = Domain::EuclideanBall { radius: 1.0 };
        let zero1 = PolyForm::zero(n, 1);
        let mut rng = seeded_rng(101);
        let beta = rand_e0_polyform(&mut rng, n, 1, 2, 2);
        assert_eq!(
            byparts_residual(&zero1, &beta, &bump, &dom, 17).unwrap(),
            0.0
        );
        assert_eq!(
            byparts_residual(&beta, &zero1, &bump, &dom, 17).unwrap(),
            0.0
        );
    }

    #[test]
    fn support_containment_enforced() {
        let n = 1;
        let bump = Bump::new(3, 1.5);
        let dom = Domain::EuclideanBall { radius: 1.0 };
        let mut rng = seeded_rng(102);
        let phi = rand_e0_polyform(&mut rng, n, 1, 2, 2);
        let beta = rand_e0_polyform(&mut rng, n, 1, 2, 2);
        assert!(byparts_residual(&phi, &beta, &bump, &dom, 9).is_err());
    }

    #[test]
    fn residual_small_on_coarse_grid() {
        // n=1, h=1: both d_c's are second order; the identity should hold to
        // quadrature accuracy already on a modest grid.
        let n = 1;
        let bump = Bump::new(3, 0.4);
        let dom = Domain::EuclideanBall { radius: 1.0 };
        let mut rng = seeded_rng(103);
        let phi = rand_e0_polyform(&mut rng, n, 1, 2, 2);
        let beta = rand_e0_polyform(&mut rng, n, 1, 2, 2);
        let res = byparts_residual(&phi, &beta, &bump, &dom, 33).unwrap();
        assert!(res < 1e-4, "residual {res}");
    }

    #[test]
    fn wedge_top_orientation() {
        assert!(volume_pairing_check(1));
        assert!(volume_pairing_check(2));
    }
}
