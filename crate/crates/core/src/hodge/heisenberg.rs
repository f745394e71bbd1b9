//! The unipotent group of `3×3` upper triangular matrices acting on the
//! period coordinates `(α, β, λ)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::paths::TruncatedSeries;
use crate::words::{Letter, Word};

/// The matrix `[[1, β, λ], [0, 1, α], [0, 0, 1]]`; it carries the reference
/// flag to the Hodge filtration with coordinates `(α, β, λ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeisenbergPoint {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub lambda: Complex64,
}

impl HeisenbergPoint {
    pub fn new(alpha: Complex64, beta: Complex64, lambda: Complex64) -> Self {
        HeisenbergPoint { alpha, beta, lambda }
    }

    pub fn identity() -> Self {
        let z = Complex64::new(0.0, 0.0);
        HeisenbergPoint::new(z, z, z)
    }

    /// `α = S(ω₀)/2πi`, `β = S(ω₁)/2πi`, `λ = S(ω₁ω₀)/(2πi)²`. This is a
    /// homomorphism from group-like series to the group.
    pub fn from_signature(s: &TruncatedSeries) -> Self {
        let tau = Complex64::new(0.0, 2.0 * PI);
        let w10 = Word::new(vec![Letter::One, Letter::Zero]);
        HeisenbergPoint {
            alpha: s.coefficient(&Word::letter(Letter::Zero)) / tau,
            beta: s.coefficient(&Word::letter(Letter::One)) / tau,
            lambda: s.coefficient(&w10) / (tau * tau),
        }
    }

    pub fn mul(&self, o: &HeisenbergPoint) -> HeisenbergPoint {
        HeisenbergPoint {
            alpha: self.alpha + o.alpha,
            beta: self.beta + o.beta,
            lambda: self.lambda + o.lambda + self.beta * o.alpha,
        }
    }

    pub fn inverse(&self) -> HeisenbergPoint {
        HeisenbergPoint {
            alpha: -self.alpha,
            beta: -self.beta,
            lambda: self.beta * self.alpha - self.lambda,
        }
    }

    /// `g · self`, i.e. `(α + a, β + b, λ + bα + c)`.
    pub fn act(&self, g: &IntegerUnipotent) -> HeisenbergPoint {
        g.to_point().mul(self)
    }

    pub fn matrix(&self) -> [[Complex64; 3]; 3] {
        let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        [[o, self.beta, self.lambda], [z, o, self.alpha], [z, z, o]]
    }

    /// Reads `(α, β, λ)` off a unipotent upper triangular matrix.
    pub fn from_matrix(m: &[[Complex64; 3]; 3]) -> Self {
        HeisenbergPoint::new(m[1][2], m[0][1], m[0][2])
    }

    pub fn max_diff(&self, o: &HeisenbergPoint) -> f64 {
        (self.alpha - o.alpha)
            .norm()
            .max((self.beta - o.beta).norm())
            .max((self.lambda - o.lambda).norm())
    }
}

/// The integer matrix `[[1, b, c], [0, 1, a], [0, 0, 1]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct IntegerUnipotent {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl IntegerUnipotent {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        IntegerUnipotent { a, b, c }
    }

    pub fn identity() -> Self {
        IntegerUnipotent::new(0, 0, 0)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn mul(&self, o: &IntegerUnipotent) -> IntegerUnipotent {
        IntegerUnipotent {
            a: self.a + o.a,
            b: self.b + o.b,
            c: self.c + o.c + self.b * o.a,
        }
    }

    pub fn inverse(&self) -> IntegerUnipotent {
        IntegerUnipotent {
            a: -self.a,
            b: -self.b,
            c: self.b * self.a - self.c,
        }
    }

    /// Central elements are exactly those with `a = b = 0`.
    pub fn is_central(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn matrix(&self) -> [[i64; 3]; 3] {
        [[1, self.b, self.c], [0, 1, self.a], [0, 0, 1]]
    }

    pub fn to_point(&self) -> HeisenbergPoint {
        let r = |v: i64| Complex64::new(v as f64, 0.0);
        HeisenbergPoint::new(r(self.a), r(self.b), r(self.c))
    }

    /// The nearest integer matrix and the entry that is furthest from it.
    pub fn nearest(p: &HeisenbergPoint) -> (IntegerUnipotent, (&'static str, f64)) {
        let round = |z: Complex64| {
            let n = z.re.round();
            (n as i64, Complex64::new(z.re - n, z.im).norm())
        };
        let (a, da) = round(p.alpha);
        let (b, db) = round(p.beta);
        let (c, dc) = round(p.lambda);
        let worst = [("a", da), ("b", db), ("c", dc)]
            .into_iter()
            .fold(("a", 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        (IntegerUnipotent::new(a, b, c), worst)
    }
}

/// Whether `p` and `q` lie in the same orbit of the integer group, i.e.
/// `p q⁻¹` is within `tol` of an integer matrix. Comparing orbits this way
/// avoids spurious mismatches when a real part sits on an integer.
pub fn same_class(p: &HeisenbergPoint, q: &HeisenbergPoint, tol: f64) -> bool {
    IntegerUnipotent::nearest(&p.mul(&q.inverse())).1 .1 <= tol
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mat_mul(x: [[Complex64; 3]; 3], y: [[Complex64; 3]; 3]) -> [[Complex64; 3]; 3] {
        let mut out = [[c(0.0, 0.0); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    out[i][j] += x[i][k] * y[k][j];
                }
            }
        }
        out
    }

    #[test]
    fn group_law_is_matrix_product() {
        let p = HeisenbergPoint::new(c(0.3, 1.0), c(-0.2, 0.5), c(1.5, -0.7));
        let q = HeisenbergPoint::new(c(-1.1, 0.2), c(0.4, 0.0), c(0.1, 0.9));
        let prod = HeisenbergPoint::from_matrix(&mat_mul(p.matrix(), q.matrix()));
        assert!(prod.max_diff(&p.mul(&q)) < 1e-15);
        assert!(p.mul(&p.inverse()).max_diff(&HeisenbergPoint::identity()) < 1e-15);
    }

    #[test]
    fn integer_action_formula() {
        let p = HeisenbergPoint::new(c(0.3, 1.0), c(-0.2, 0.5), c(1.5, -0.7));
        let g = IntegerUnipotent::new(2, -3, 5);
        let moved = p.act(&g);
        let expected = HeisenbergPoint::new(
            p.alpha + 2.0,
            p.beta - 3.0,
            p.lambda - 3.0 * p.alpha + 5.0,
        );
        assert!(moved.max_diff(&expected) < 1e-14);
        assert!(same_class(&moved, &p, 1e-12));
        let h = IntegerUnipotent::new(-1, 4, 0);
        assert_eq!(g.mul(&h).to_point().max_diff(&g.to_point().mul(&h.to_point())), 0.0);
        assert!(g.mul(&g.inverse()).is_identity());
    }

    #[test]
    fn commutator_is_central() {
        let x = IntegerUnipotent::new(1, 0, 0);
        let y = IntegerUnipotent::new(0, 1, 0);
        let k = x.mul(&y).mul(&x.inverse()).mul(&y.inverse());
        assert!(k.is_central());
        assert_eq!(k.c.abs(), 1);
    }
}
