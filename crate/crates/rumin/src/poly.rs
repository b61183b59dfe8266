//! Multivariate polynomials with rational coefficients in the variables
//! `x_1..x_n, y_1..y_n, t` of ℍⁿ.
//!
//! Variable layout: indices `0..n` are `x_i`, `n..2n` are `y_i`, `2n` is `t`.
//! Terms are kept in a canonical (lexicographic exponent) order and zero
//! coefficients are pruned, so equality is structural.

use crate::scalar::{rat, rat_to_f64, Rat};
use num::Zero;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyScalar {
    nvars: usize,
    terms: BTreeMap<Vec<u16>, Rat>,
}

impl PolyScalar {
    pub fn zero(nvars: usize) -> Self {
        PolyScalar {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, rat(1))
    }

    /// The coordinate variable with the given index.
    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index < nvars);
        let mut e = vec![0u16; nvars];
        e[index] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(e, rat(1));
        p
    }

    pub fn monomial(nvars: usize, exps: Vec<u16>, c: Rat) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    /// The constant coefficient if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rat> {
        if self.terms.is_empty() {
            return Some(Rat::zero());
        }
        if self.is_constant() {
            Some(self.terms.values().next().unwrap().clone())
        } else {
            None
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u16>, &Rat)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&k| k as usize).sum())
            .max()
            .unwrap_or(0)
    }

    fn insert(&mut self, exps: Vec<u16>, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
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
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        PolyScalar {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        PolyScalar {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, k)| (e.clone(), k.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u16> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert(e, ca.clone() * cb.clone());
            }
        }
        out
    }

    /// Partial derivative with respect to the variable `index`.
    pub fn partial(&self, index: usize) -> Self {
        assert!(index < self.nvars);
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e[index];
            if k == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[index] = k - 1;
            out.insert(e2, c.clone() * rat(k as i64));
        }
        out
    }

    pub fn eval_rat(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    term *= point[i].clone();
                }
            }
            acc += term;
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.nvars);
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut term = rat_to_f64(c);
            for (i, &k) in e.iter().enumerate() {
                term *= point[i].powi(k as i32);
            }
            acc += term;
        }
        acc
    }

    /// Composition with the dilation `δ_s`: `x ↦ sx, y ↦ sy, t ↦ s²t`.
    ///
    /// A term with exponents `(a, b, c)` picks up the factor
    /// `s^{|a| + |b| + 2c}`.
    pub fn compose_dilation(&self, s: &Rat) -> Self {
        let n = (self.nvars - 1) / 2;
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut deg = 0usize;
            for (i, &k) in e.iter().enumerate() {
                deg += (k as usize) * if i == 2 * n { 2 } else { 1 };
            }
            let mut factor = rat(1);
            for _ in 0..deg {
                factor *= s.clone();
            }
            out.insert(e.clone(), c.clone() * factor);
        }
        out
    }
}

impl fmt::Display for PolyScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let n = (self.nvars - 1) / 2;
        let name = |i: usize| -> String {
            if i < n {
                format!("x{}", i + 1)
            } else if i < 2 * n {
                format!("y{}", i - n + 1)
            } else {
                "t".into()
            }
        };
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", c)?;
            for (i, &k) in e.iter().enumerate() {
                if k == 1 {
                    write!(f, "*{}", name(i))?;
                } else if k > 1 {
                    write!(f, "*{}^{}", name(i), k)?;
                }
            }
        }
        Ok(())
    }
}
