//! Seeded random generators for test sweeps and verification suites.
//!
//! Everything here is deterministic for a fixed seed; suites re-use these
//! helpers so that reports are reproducible byte for byte.

use crate::exterior::{basis_monomials, Monomial};
use crate::forms::PolyForm;
use crate::heis::GroupPoint;
use crate::poly::PolyScalar;
use crate::projections::tables;
use crate::scalar::{ratio, Rat};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small random rational with numerator in `[-9, 9]` and denominator in
/// `{1, 2, 3, 4}`.
pub fn rand_rat(rng: &mut impl Rng) -> Rat {
    let p = rng.gen_range(-9i64..=9);
    let q = rng.gen_range(1i64..=4);
    ratio(p, q)
}

pub fn rand_nonzero_rat(rng: &mut impl Rng) -> Rat {
    loop {
        let r = rand_rat(rng);
        if !num::Zero::is_zero(&r) {
            return r;
        }
    }
}

pub fn rand_rat_point(rng: &mut impl Rng, n: usize) -> GroupPoint<Rat> {
    let coords: Vec<Rat> = (0..2 * n + 1).map(|_| rand_rat(rng)).collect();
    GroupPoint::from_coords(&coords)
}

/// Random polynomial of total degree at most `max_deg` with at most `terms`
/// monomials.
pub fn rand_poly(rng: &mut impl Rng, n: usize, max_deg: usize, terms: usize) -> PolyScalar {
    let nvars = 2 * n + 1;
    let mut p = PolyScalar::zero(nvars);
    for _ in 0..terms {
        let mut exps = vec![0u16; nvars];
        let mut budget = rng.gen_range(0..=max_deg);
        while budget > 0 {
            let v = rng.gen_range(0..nvars);
            exps[v] += 1;
            budget -= 1;
        }
        p = p.add(&PolyScalar::monomial(nvars, exps, rand_rat(rng)));
    }
    p
}

/// Random polynomial form of degree `h` over the full coframe.
pub fn rand_polyform(
    rng: &mut impl Rng,
    n: usize,
    h: usize,
    max_deg: usize,
    terms: usize,
) -> PolyForm {
    let mut form = PolyForm::zero(n, h);
    for m in basis_monomials(n, h) {
        form.set(m, rand_poly(rng, n, max_deg, terms));
    }
    form
}

/// Random polynomial section of `E₀ʰ`: random polynomial coordinates against
/// the deterministic spanning basis.
pub fn rand_e0_polyform(
    rng: &mut impl Rng,
    n: usize,
    h: usize,
    max_deg: usize,
    terms: usize,
) -> PolyForm {
    let tab = tables(n);
    let basis = &tab.e0[h].vectors;
    let mut form = PolyForm::zero(n, h);
    for v in basis {
        let coeff = rand_poly(rng, n, max_deg, terms);
        for (m, c) in v.terms() {
            form.add_term(m.clone(), coeff.scale(c));
        }
    }
    form
}

/// Random monomial of `Λʰ` (uniform over the basis).
pub fn rand_monomial(rng: &mut impl Rng, n: usize, h: usize) -> Monomial {
    let basis = basis_monomials(n, h);
    basis[rng.gen_range(0..basis.len())].clone()
}

/// Random float point in the box `[-r, r]^{2n}×[-r², r²]`.
pub fn rand_box_point(rng: &mut impl Rng, n: usize, r: f64) -> Vec<f64> {
    (0..2 * n + 1)
        .map(|i| {
            let s = if i == 2 * n { r * r } else { r };
            rng.gen_range(-s..s)
        })
        .collect()
}
