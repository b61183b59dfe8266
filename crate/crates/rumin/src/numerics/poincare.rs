//! Empirical interior Poincaré ratios: for a family of exact forms
//! `ω = d_c φ`, the quotient `‖Kω‖_{L^∞(B)} / ‖ω‖_{L^p(B_λ)}` bounds the
//! interior constant from below. The constants themselves are existence
//! results, so only finiteness, stability and the maximum over the family
//! are reported.

use super::domain::Domain;
use super::homotopy::{interior_samples, RuminHomotopy};
use super::keuc::KeucCtx;
use super::quad::koranyi_ball_lp_norm;
use crate::error::{Error, Result};
use crate::forms::{d_c_apply, PolyForm};
use std::sync::Arc;

/// One row of the ratio table.
#[derive(Debug, Clone)]
pub struct RatioRow {
    pub form_id: usize,
    pub h: usize,
    pub n: usize,
    /// `‖ω‖_{L^p(B_λ)}`.
    pub norm_p: f64,
    /// `‖Kω‖_{L^∞(B)}` over the interior sample set.
    pub norm_inf_primitive: f64,
    pub ratio: f64,
    /// `|d_c(Kω) − ω|` at the first sample point (primitive check);
    /// `NaN`-free: 0 when the residual pass is skipped.
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct RatioTable {
    pub n: usize,
    pub h: usize,
    pub p: f64,
    pub lambda: f64,
    pub rows: Vec<RatioRow>,
    pub max_ratio: f64,
}

/// Admissible Lebesgue exponents for the ratio experiments: `Q`, `Q/2` or
/// `∞` (the sharp interior exponents, plus the sup norm).
pub fn validate_exponent(n: usize, p: f64) -> Result<()> {
    let q = (2 * n + 2) as f64;
    if p == f64::INFINITY || p == q || p == q / 2.0 {
        Ok(())
    } else {
        Err(Error::BadLebesgueExponent(p))
    }
}

pub struct RatioConfig {
    pub lambda: f64,
    pub lp_resolution: usize,
    pub sup_samples: usize,
    pub fd_step: f64,
    pub seed: u64,
    pub with_residual: bool,
}

impl Default for RatioConfig {
    fn default() -> Self {
        RatioConfig {
            lambda: 2.0,
            lp_resolution: 33,
            sup_samples: 8,
            fd_step: 0.02,
            seed: 7,
            with_residual: true,
        }
    }
}

/// Compute the ratio table for a family of polynomial primitives φ (each
/// row uses `ω = d_c φ`). Finite `p` norms are evaluated with the smooth
/// Korányi-ball rule (n = 1); `p = ∞` uses the sample sup.
pub fn poincare_ratio_estimate(
    family: &[PolyForm],
    h: usize,
    p: f64,
    ctx: Arc<KeucCtx>,
    cfg: &RatioConfig,
) -> Result<RatioTable> {
    let n = ctx.n;
    validate_exponent(n, p)?;
    if p.is_finite() && n != 1 {
        return Err(Error::InvalidParameter(
            "finite-p Korányi norms are implemented for n = 1".into(),
        ));
    }
    let radius = match ctx.domain {
        Domain::KoranyiBall { radius } => radius,
        _ => {
            return Err(Error::InvalidParameter(
                "ratio experiments run on a Korányi ball".into(),
            ))
        }
    };
    let samples = interior_samples(n, &ctx.domain, cfg.sup_samples, 0.2, cfg.seed);
    let mut rows = Vec::with_capacity(family.len());
    let mut max_ratio: f64 = 0.0;
    for (id, phi) in family.iter().enumerate() {
        if phi.degree() + 1 != h {
            return Err(Error::DegreeMismatch {
                expected: h,
                got: phi.degree() + 1,
            });
        }
        let omega = d_c_apply(phi)?;
        if omega.is_zero() {
            rows.push(RatioRow {
                form_id: id,
                h,
                n,
                norm_p: 0.0,
                norm_inf_primitive: 0.0,
                ratio: 0.0,
                residual: 0.0,
            });
            continue;
        }
        let norm_p = if p.is_finite() {
            koranyi_ball_lp_norm(radius * cfg.lambda, cfg.lp_resolution, p, |x| {
                omega
                    .eval_f64(x)
                    .to_dense()
                    .iter()
                    .map(|v| v * v)
                    .sum::<f64>()
                    .sqrt()
            })
        } else {
            super::homotopy::sup_norm_on_samples(
                &omega,
                &interior_samples(
                    n,
                    &Domain::KoranyiBall {
                        radius: radius * cfg.lambda,
                    },
                    200,
                    0.02,
                    cfg.seed ^ 0x5eed,
                ),
            )
        };
        let hom = RuminHomotopy::new(&omega, ctx.clone())?;
        let mut sup_k: f64 = 0.0;
        let mut residual = 0.0;
        for (si, x) in samples.iter().enumerate() {
            let klat = hom.k_lattice(x.clone(), cfg.fd_step);
            let kv = klat.k_at(&vec![0; 2 * n + 1]);
            sup_k = sup_k.max(kv.iter().map(|v| v * v).sum::<f64>().sqrt());
            if si == 0 && cfg.with_residual {
                let lat = klat.as_lattice();
                let zero = vec![0i32; 2 * n + 1];
                let h_out = h - 1;
                let dck = if h_out <= n {
                    let (value, grads, hess) = lat.jet2(&zero);
                    super::homotopy::dc_from_jet2(
                        n,
                        h_out,
                        x,
                        &super::callable::Jet2 { value, grads, hess },
                    )
                } else {
                    let (kv0, grads) = lat.jet1(&zero);
                    let d = super::homotopy::d_from_jet1(n, h_out, x, &kv0, &grads);
                    super::homotopy::dense_tables(n).pi_e0[h_out + 1].mul_vec(&d)
                };
                let target = omega.eval_f64(x).to_dense();
                residual = dck
                    .iter()
                    .zip(&target)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
            }
        }
        let ratio = if norm_p > 0.0 { sup_k / norm_p } else { 0.0 };
        max_ratio = max_ratio.max(ratio);
        rows.push(RatioRow {
            form_id: id,
            h,
            n,
            norm_p,
            norm_inf_primitive: sup_k,
            ratio,
            residual,
        });
    }
    Ok(RatioTable {
        n,
        h,
        p,
        lambda: cfg.lambda,
        rows,
        max_ratio,
    })
}

/// Deterministic family of polynomial primitives of degree `h−1` in `E₀`
/// with nonvanishing `d_c` (degenerate draws are skipped).
pub fn polynomial_family(n: usize, h: usize, count: usize, seed: u64) -> Vec<PolyForm> {
    let mut rng = crate::sampling::seeded_rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let phi = crate::sampling::rand_e0_polyform(&mut rng, n, h - 1, 3, 3);
        if !d_c_apply(&phi).expect("family member is Rumin-valued").is_zero() {
            out.push(phi);
        }
    }
    out
}

/// Empirical sup-operator-norm data for the cone homotopy: the ratios
/// `‖K_Euc ω‖_∞ / ‖ω‖_∞` over a family, which should stay below a fixed
/// finite bound as the grid refines.
pub fn keuc_operator_ratios(
    ctx: &KeucCtx,
    family: &[PolyForm],
    samples: &[Vec<f64>],
) -> Result<Vec<f64>> {
    use super::callable::CompiledForm;
    use crate::forms::to_coordinate_frame;
    let mut out = Vec::with_capacity(family.len());
    for omega in family {
        let compiled = CompiledForm::new(&to_coordinate_frame(omega));
        let mut sup_k: f64 = 0.0;
        let mut sup_w: f64 = 0.0;
        for x in samples {
            let kv = super::keuc::keuc_apply(ctx, &compiled, x)?;
            sup_k = sup_k.max(kv.iter().map(|v| v * v).sum::<f64>().sqrt());
            let wv = omega.eval_f64(x).to_dense();
            sup_w = sup_w.max(wv.iter().map(|v| v * v).sum::<f64>().sqrt());
        }
        out.push(if sup_w > 0.0 { sup_k / sup_w } else { 0.0 });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quad::QuadratureSpec;

    #[test]
    fn exponent_validation() {
        assert!(validate_exponent(1, 4.0).is_ok());
        assert!(validate_exponent(1, 2.0).is_ok());
        assert!(validate_exponent(1, f64::INFINITY).is_ok());
        assert!(validate_exponent(1, 3.0).is_err());
        assert!(validate_exponent(2, 6.0).is_ok());
    }

    #[test]
    fn trivial_and_scaling_rows() {
        let ctx = Arc::new(
            KeucCtx::new(
                1,
                Domain::KoranyiBall { radius: 1.0 },
                QuadratureSpec::new(13, 6),
            )
            .unwrap(),
        );
        let cfg = RatioConfig {
            sup_samples: 3,
            lp_resolution: 17,
            with_residual: false,
            ..Default::default()
        };
        // family = {0}: ratio 0
        let zero = PolyForm::zero(1, 1);
        let table = poincare_ratio_estimate(&[zero], 2, 4.0, ctx.clone(), &cfg).unwrap();
        assert_eq!(table.rows[0].ratio, 0.0);

        // scaling invariance: 2ω leaves the ratio unchanged
        let fam = polynomial_family(1, 2, 1, 3);
        let scaled: Vec<PolyForm> = fam
            .iter()
            .map(|f| f.scale(&crate::scalar::rat(2)))
            .collect();
        let t1 = poincare_ratio_estimate(&fam, 2, 4.0, ctx.clone(), &cfg).unwrap();
        let t2 = poincare_ratio_estimate(&scaled, 2, 4.0, ctx, &cfg).unwrap();
        let (r1, r2) = (t1.rows[0].ratio, t2.rows[0].ratio);
        assert!((r1 - r2).abs() <= 1e-9 * r1.max(1.0), "{r1} vs {r2}");
    }

    #[test]
    fn sup_norm_exponent_path() {
        // p = ∞ uses sup-norm sampling on both sides
        let ctx = Arc::new(
            KeucCtx::new(
                1,
                Domain::KoranyiBall { radius: 1.0 },
                QuadratureSpec::new(13, 6),
            )
            .unwrap(),
        );
        let cfg = RatioConfig {
            sup_samples: 3,
            with_residual: false,
            ..Default::default()
        };
        let fam = polynomial_family(1, 2, 2, 9);
        let t = poincare_ratio_estimate(&fam, 2, f64::INFINITY, ctx, &cfg).unwrap();
        assert!(t
            .rows
            .iter()
            .all(|r| r.ratio.is_finite() && r.norm_p > 0.0));
        assert!(t.max_ratio.is_finite() && t.max_ratio > 0.0);
    }
}
