//! The boundary chart `Y = {(q, β, λ) : β = 0 if q = 0}` and a fundamental
//! domain for the integer unipotent group.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::heisenberg::{HeisenbergPoint, IntegerUnipotent};
use super::lambda::NilpotentEndo;
use super::HodgeError;

/// A point `(q, β, λ)` of the chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryChartPoint {
    pub q: Complex64,
    pub beta: Complex64,
    pub lambda: Complex64,
}

impl BoundaryChartPoint {
    pub fn new(q: Complex64, beta: Complex64, lambda: Complex64) -> Result<Self, HodgeError> {
        if q == Complex64::new(0.0, 0.0) && beta != Complex64::new(0.0, 0.0) {
            return Err(HodgeError::BoundaryBeta);
        }
        Ok(BoundaryChartPoint { q, beta, lambda })
    }

    pub fn max_diff(&self, o: &BoundaryChartPoint) -> f64 {
        (self.q - o.q)
            .norm()
            .max((self.beta - o.beta).norm())
            .max((self.lambda - o.lambda).norm())
    }
}

/// Shifts `x` by the integer `n` with `x + n ∈ [0, 1)`.
fn unit_shift(x: f64) -> i64 {
    let n = -x.floor();
    if x + n >= 1.0 {
        n as i64 - 1
    } else {
        n as i64
    }
}

/// The representative with `Re α, Re β, Re λ ∈ [0, 1)` in the orbit of
/// `(α, β, λ)`, and the integer matrix `g` with `reduced = g · input`.
pub fn reduce_mod_integral(p: &HeisenbergPoint) -> (HeisenbergPoint, IntegerUnipotent) {
    let a = unit_shift(p.alpha.re);
    let b = unit_shift(p.beta.re);
    let c = unit_shift((p.lambda + b as f64 * p.alpha).re);
    let g = IntegerUnipotent::new(a, b, c);
    (p.act(&g), g)
}

/// Class of a chart point in the partial compactification.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChartClass {
    /// `q ≠ 0`: the class of `F(α, β, λ)` with `q = e^{2πiα}`.
    Interior {
        #[serde(serialize_with = "ser_point")]
        reduced: HeisenbergPoint,
        reduction: IntegerUnipotent,
    },
    /// `q = 0`: the nilpotent orbit generated by `N = (1, 0, 0)` and
    /// `F(0, 0, λ)`, with `λ` taken modulo integers.
    NilpotentOrbit {
        n: NilpotentEndo,
        #[serde(serialize_with = "ser_complex")]
        lambda: Complex64,
    },
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

fn ser_point<S: serde::Serializer>(p: &HeisenbergPoint, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("point", 3)?;
    st.serialize_field("alpha", &[p.alpha.re, p.alpha.im])?;
    st.serialize_field("beta", &[p.beta.re, p.beta.im])?;
    st.serialize_field("lambda", &[p.lambda.re, p.lambda.im])?;
    st.end()
}

/// `α` with `e^{2πiα} = q` (principal logarithm).
pub fn alpha_of_q(q: Complex64) -> Complex64 {
    q.ln() / Complex64::new(0.0, 2.0 * PI)
}

pub fn boundary_chart_point(y: &BoundaryChartPoint) -> Result<ChartClass, HodgeError> {
    let y = BoundaryChartPoint::new(y.q, y.beta, y.lambda)?;
    if y.q == Complex64::new(0.0, 0.0) {
        let shift = unit_shift(y.lambda.re);
        return Ok(ChartClass::NilpotentOrbit {
            n: NilpotentEndo::from_ints(1, 0, 0),
            lambda: y.lambda + shift as f64,
        });
    }
    let p = HeisenbergPoint::new(alpha_of_q(y.q), y.beta, y.lambda);
    let (reduced, reduction) = reduce_mod_integral(&p);
    Ok(ChartClass::Interior { reduced, reduction })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hodge::heisenberg::same_class;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn reduction_example() {
        let p = HeisenbergPoint::new(c(1.5, 0.0), c(-0.25, 1.0), c(2.0, 0.5));
        let (r, g) = reduce_mod_integral(&p);
        assert_eq!(g, IntegerUnipotent::new(-1, 1, -3));
        assert!(r.max_diff(&HeisenbergPoint::new(c(0.5, 0.0), c(0.75, 1.0), c(0.5, 0.5))) < 1e-15);
        let (z, g) = reduce_mod_integral(&HeisenbergPoint::identity());
        assert!(g.is_identity());
        assert_eq!(z, HeisenbergPoint::identity());
    }

    #[test]
    fn reduction_is_orbit_invariant_and_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let mut z = || c(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            let p = HeisenbergPoint::new(z(), z(), z());
            let g = IntegerUnipotent::new(rng.gen_range(-9..=9), rng.gen_range(-9..=9), rng.gen_range(-9..=9));
            let (r1, _) = reduce_mod_integral(&p);
            let (r2, _) = reduce_mod_integral(&p.act(&g));
            assert!(r1.max_diff(&r2) < 1e-9);
            let (r3, h) = reduce_mod_integral(&r1);
            assert!(h.is_identity());
            assert_eq!(r3, r1);
            for v in [r1.alpha.re, r1.beta.re, r1.lambda.re] {
                assert!((0.0..1.0).contains(&v));
            }
        }
    }

    #[test]
    fn chart_examples() {
        let y = BoundaryChartPoint::new(c(1.0, 0.0), c(0.3, 0.0), c(0.0, 0.7)).unwrap();
        let ChartClass::Interior { reduced, .. } = boundary_chart_point(&y).unwrap() else {
            panic!("interior expected");
        };
        assert!(reduced.max_diff(&HeisenbergPoint::new(c(0.0, 0.0), c(0.3, 0.0), c(0.0, 0.7))) < 1e-15);

        let y0 = BoundaryChartPoint::new(c(0.0, 0.0), c(0.0, 0.0), c(0.25, 1.0)).unwrap();
        assert_eq!(
            boundary_chart_point(&y0).unwrap(),
            ChartClass::NilpotentOrbit {
                n: NilpotentEndo::from_ints(1, 0, 0),
                lambda: c(0.25, 1.0)
            }
        );
        assert!(BoundaryChartPoint::new(c(0.0, 0.0), c(0.1, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn choice_of_alpha_does_not_matter() {
        let alpha = c(0.3, 0.4);
        let (beta, lambda) = (c(0.2, -0.1), c(0.6, 0.3));
        let p = HeisenbergPoint::new(alpha, beta, lambda);
        let p1 = HeisenbergPoint::new(alpha + 1.0, beta, lambda);
        assert!(same_class(&reduce_mod_integral(&p).0, &reduce_mod_integral(&p1).0, 1e-12));
        let y = BoundaryChartPoint::new((Complex64::new(0.0, 2.0 * PI) * alpha).exp(), beta, lambda).unwrap();
        let ChartClass::Interior { reduced, .. } = boundary_chart_point(&y).unwrap() else {
            panic!()
        };
        assert!(same_class(&reduced, &p, 1e-12));
    }

    #[test]
    fn approach_to_the_boundary() {
        // q = e^{2πiα} with Im α → ∞: Re α stays put and (q, β, λ) → (0, 0, λ)
        let lambda = c(0.4, 0.2);
        let mut last = f64::INFINITY;
        for t in 1..8 {
            let alpha = c(0.3, t as f64);
            let q = (Complex64::new(0.0, 2.0 * PI) * alpha).exp();
            let ChartClass::Interior { reduced, .. } =
                boundary_chart_point(&BoundaryChartPoint::new(q, c(0.0, 0.0), lambda).unwrap()).unwrap()
            else {
                panic!()
            };
            assert!((reduced.alpha.re - 0.3).abs() < 1e-12);
            let d = q.norm() + (reduced.lambda - lambda).norm();
            assert!(d < last);
            last = d;
        }
    }
}
