//! Integration domains centred at the identity: Euclidean balls, Korányi
//! balls and Korányi annuli.

use crate::error::{Error, Result};
use crate::heis::{gauge, GroupPoint};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    EuclideanBall { radius: f64 },
    KoranyiBall { radius: f64 },
    KoranyiAnnulus { r1: f64, r2: f64 },
}

impl Domain {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Domain::EuclideanBall { radius } | Domain::KoranyiBall { radius } => {
                if radius > 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter("radius must be positive".into()))
                }
            }
            Domain::KoranyiAnnulus { r1, r2 } => {
                if 0.0 < r1 && r1 < r2 {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter("annulus needs 0 < r1 < r2".into()))
                }
            }
        }
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        match *self {
            Domain::EuclideanBall { radius } => {
                p.iter().map(|v| v * v).sum::<f64>() < radius * radius
            }
            Domain::KoranyiBall { radius } => gauge(&GroupPoint::from_coords(p)) < radius,
            Domain::KoranyiAnnulus { r1, r2 } => {
                let rho = gauge(&GroupPoint::from_coords(p));
                r1 < rho && rho < r2
            }
        }
    }

    /// Radius of the largest Euclidean ball centred at `e` inside the
    /// domain. For the Korányi ball of radius `r` the closest boundary point
    /// sits on the `t`-axis at distance `r²/4` (for `r < 4`).
    pub fn inradius(&self) -> Result<f64> {
        match *self {
            Domain::EuclideanBall { radius } => Ok(radius),
            Domain::KoranyiBall { radius } => Ok((radius * radius / 4.0).min(radius)),
            Domain::KoranyiAnnulus { .. } => Err(Error::InvalidParameter(
                "annuli do not contain a ball centred at e".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn containment_and_inradius() {
        let b = Domain::KoranyiBall { radius: 1.0 };
        assert!(b.contains(&[0.1, 0.1, 0.0]));
        // t-axis point at t = 1/4 has gauge exactly 1
        assert!(!b.contains(&[0.0, 0.0, 0.251]));
        assert!(b.contains(&[0.0, 0.0, 0.249]));
        let r = b.inradius().unwrap();
        assert!((r - 0.25).abs() < 1e-15);
        // the inradius ball really is inside
        for p in [[0.24, 0.0, 0.0], [0.0, 0.24, 0.0], [0.0, 0.0, 0.24]] {
            assert!(b.contains(&p));
        }
        let a = Domain::KoranyiAnnulus { r1: 1.0, r2: 2.0 };
        assert!(a.validate().is_ok());
        assert!(a.inradius().is_err());
        assert!(Domain::KoranyiAnnulus { r1: 2.0, r2: 1.0 }
            .validate()
            .is_err());
    }
}
