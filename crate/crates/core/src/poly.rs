//! Dense polynomials with coefficients in ascending order.

use nalgebra::DMatrix;
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Poly(pub Vec<f64>);

impl Poly {
    pub fn new(coeffs: &[f64]) -> Self {
        Poly(coeffs.to_vec())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&0.0) + other.0.get(i).unwrap_or(&0.0))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly(self.0.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.0.is_empty() || other.0.is_empty() {
            return Poly(vec![]);
        }
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.0
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    fn derivative(&self) -> Poly {
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * i as f64)
                .collect(),
        )
    }

    /// Drops leading coefficients that are negligible against the largest one.
    pub fn trimmed(&self) -> Poly {
        let scale = self.0.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
        let mut v = self.0.clone();
        while v.len() > 1 && v.last().is_some_and(|c| c.abs() <= 1e-14 * scale) {
            v.pop();
        }
        Poly(v)
    }

    /// Exact division by (x - r); the remainder is discarded.
    pub fn deflate(&self, r: f64) -> Poly {
        let n = self.0.len();
        if n < 2 {
            return Poly(vec![]);
        }
        let mut out = vec![0.0; n - 1];
        let mut carry = 0.0;
        for i in (1..n).rev() {
            carry = self.0[i] + carry * r;
            out[i - 1] = carry;
        }
        Poly(out)
    }

    /// All complex roots from the eigenvalues of the companion matrix,
    /// each refined by a couple of Newton steps.
    pub fn roots(&self) -> Vec<Complex64> {
        let p = self.trimmed();
        let deg = p.0.len().saturating_sub(1);
        if deg == 0 {
            return vec![];
        }
        let lead = p.0[deg];
        let mut c = DMatrix::<f64>::zeros(deg, deg);
        for i in 1..deg {
            c[(i, i - 1)] = 1.0;
        }
        for i in 0..deg {
            c[(i, deg - 1)] = -p.0[i] / lead;
        }
        let dp = p.derivative();
        c.complex_eigenvalues()
            .iter()
            .map(|&z0| {
                let mut z = z0;
                for _ in 0..3 {
                    let d = dp.eval(z);
                    if d.norm() == 0.0 {
                        break;
                    }
                    let step = p.eval(z) / d;
                    if !step.re.is_finite() || !step.im.is_finite() || step.norm() > 1e-3 * (1.0 + z.norm()) {
                        break;
                    }
                    z -= step;
                }
                z
            })
            .collect()
    }
}
