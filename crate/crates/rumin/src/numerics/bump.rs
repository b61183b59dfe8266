//! The smooth bump profile `exp(−1/(1−|p/R|²))` on a Euclidean ball, with
//! analytic first and second derivatives. Normalization to unit mass is done
//! by the quadrature that uses the bump, not here.

#[derive(Debug, Clone)]
pub struct Bump {
    pub radius: f64,
    pub center: Vec<f64>,
}

impl Bump {
    pub fn new(dim: usize, radius: f64) -> Self {
        assert!(radius > 0.0);
        Bump {
            radius,
            center: vec![0.0; dim],
        }
    }

    pub fn centered_at(center: Vec<f64>, radius: f64) -> Self {
        assert!(radius > 0.0);
        Bump { radius, center }
    }

    fn rel(&self, p: &[f64]) -> (Vec<f64>, f64) {
        let d: Vec<f64> = p.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        let s = d.iter().map(|v| v * v).sum::<f64>() / (self.radius * self.radius);
        (d, s)
    }

    pub fn value(&self, p: &[f64]) -> f64 {
        let (_, s) = self.rel(p);
        if s >= 1.0 {
            0.0
        } else {
            (-1.0 / (1.0 - s)).exp()
        }
    }

    pub fn gradient(&self, p: &[f64]) -> Vec<f64> {
        let (d, s) = self.rel(p);
        if s >= 1.0 {
            return vec![0.0; p.len()];
        }
        let g = (-1.0 / (1.0 - s)).exp();
        let gp = -g / ((1.0 - s) * (1.0 - s));
        let r2 = self.radius * self.radius;
        d.iter().map(|di| gp * 2.0 * di / r2).collect()
    }

    pub fn hessian(&self, p: &[f64]) -> Vec<Vec<f64>> {
        let dim = p.len();
        let (d, s) = self.rel(p);
        if s >= 1.0 {
            return vec![vec![0.0; dim]; dim];
        }
        let g = (-1.0 / (1.0 - s)).exp();
        let u = 1.0 - s;
        let gp = -g / (u * u);
        let gpp = g / (u * u * u * u) - 2.0 * g / (u * u * u);
        let r2 = self.radius * self.radius;
        let mut h = vec![vec![0.0; dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                h[i][j] = gpp * (2.0 * d[i] / r2) * (2.0 * d[j] / r2);
                if i == j {
                    h[i][j] += gp * 2.0 / r2;
                }
            }
        }
        h
    }

    /// Support box `[c_i − R, c_i + R]` per axis.
    pub fn support_box(&self) -> Vec<(f64, f64)> {
        self.center
            .iter()
            .map(|c| (c - self.radius, c + self.radius))
            .collect()
    }
}
