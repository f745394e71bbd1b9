//! The rank-3 lattice `Λ` with weights `-4, -2, 0`, its Hodge filtrations
//! `F(α, β, λ)`, and the nilpotent endomorphisms `N = (a, b, c)`.

use num_complex::Complex;
use num_rational::BigRational;
use serde::Serialize;

use super::rmf::{relative_monodromy_filtration, WeightFiltrationGeneric};
use super::HodgeError;
use crate::linalg::{mat_vec, Field, Matrix, Subspace};
use crate::words::format_rational;

/// Static description of `Λ` in the basis `e₁, e₂, e₃` (coordinates are
/// listed in that order).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LambdaData;

impl LambdaData {
    pub const RANK: usize = 3;
    /// Weight of `e₁, e₂, e₃`.
    pub const WEIGHTS: [i64; 3] = [-4, -2, 0];
    /// `e_i` spans the `(p, p)` part with these `p`.
    pub const HODGE_P: [i64; 3] = [-2, -1, 0];

    /// `W₋₄ = ⟨e₁⟩ ⊂ W₋₂ = ⟨e₁, e₂⟩ ⊂ W₀ = Λ`.
    pub fn weight_filtration() -> WeightFiltrationGeneric {
        WeightFiltrationGeneric::split_standard(&Self::WEIGHTS)
    }

    /// Polarization of `gr^W_w` on its generator: always 1.
    pub fn graded_pairing(w: i64) -> Option<i64> {
        Self::WEIGHTS.contains(&w).then_some(1)
    }

    /// `h^{p,q}` is 1 for `p = q ∈ {0, -1, -2}` and 0 otherwise.
    pub fn hodge_number(p: i64, q: i64) -> usize {
        usize::from(p == q && Self::HODGE_P.contains(&p))
    }
}

/// Decreasing flag `F⁰ ⊂ F⁻¹ ⊂ F⁻² = ℂ³` with `F¹ = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct HodgeFiltration<K: Field> {
    f0: Subspace<K>,
    f_minus1: Subspace<K>,
}

impl<K: Field> HodgeFiltration<K> {
    pub fn new(f0: Subspace<K>, f_minus1: Subspace<K>) -> Result<Self, HodgeError> {
        if f0.ambient() != 3 || f_minus1.ambient() != 3 || f0.dim() != 1 || f_minus1.dim() != 2 {
            return Err(HodgeError::BadFlag("dimensions must be (1, 2, 3)".into()));
        }
        if !f_minus1.contains_space(&f0) {
            return Err(HodgeError::BadFlag("F⁰ ⊄ F⁻¹".into()));
        }
        Ok(HodgeFiltration { f0, f_minus1 })
    }

    /// `F^p` for any integer `p`.
    pub fn level(&self, p: i64) -> Subspace<K> {
        match p {
            p if p >= 1 => Subspace::zero(3),
            0 => self.f0.clone(),
            -1 => self.f_minus1.clone(),
            _ => Subspace::full(3),
        }
    }

    /// Recovers `(α, β, λ)` from the flag, or `None` when the flag is not in
    /// the orbit of the reference flag.
    pub fn coordinates(&self) -> Option<(K, K, K)> {
        // F⁰: the generator with e₃-coefficient 1
        let v = self.f0.basis()[0].clone();
        if v[2].is_zero() {
            return None;
        }
        let inv = K::one().div(&v[2]);
        let (lambda, alpha) = (v[0].mul(&inv), v[1].mul(&inv));
        // F⁻¹ ∩ {e₃ = 0}: must be ⟨e₂ + β e₁⟩
        let plane = Subspace::span(3, vec![vec![K::one(), K::zero(), K::zero()], vec![K::zero(), K::one(), K::zero()]]);
        let line = self.f_minus1.intersect(&plane);
        if line.dim() != 1 {
            return None;
        }
        let u = &line.basis()[0];
        if u[1].is_zero() {
            return None;
        }
        Some((alpha, u[0].div(&u[1]), lambda))
    }

    /// `g F` for an invertible `3×3` matrix.
    pub fn transformed(&self, g: &Matrix<K>) -> Self {
        HodgeFiltration {
            f0: self.f0.image(g),
            f_minus1: self.f_minus1.image(g),
        }
    }
}

/// `F⁰ = ⟨e₃ + α e₂ + λ e₁⟩`, `F⁻¹ = F⁰ + ⟨e₂ + β e₁⟩`.
pub fn hodge_filtration_from<K: Field>(alpha: K, beta: K, lambda: K) -> HodgeFiltration<K> {
    let v0 = vec![lambda, alpha, K::one()];
    let v1 = vec![beta, K::one(), K::zero()];
    HodgeFiltration {
        f0: Subspace::span(3, vec![v0.clone()]),
        f_minus1: Subspace::span(3, vec![v0, v1]),
    }
}

/// `N e₃ = a e₂ + c e₁`, `N e₂ = b e₁`, `N e₁ = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NilpotentEndo {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
}

impl NilpotentEndo {
    pub fn new(a: BigRational, b: BigRational, c: BigRational) -> Self {
        NilpotentEndo { a, b, c }
    }

    pub fn from_ints(a: i64, b: i64, c: i64) -> Self {
        let q = |v: i64| BigRational::from_integer(v.into());
        NilpotentEndo::new(q(a), q(b), q(c))
    }

    pub fn is_zero(&self) -> bool {
        Field::is_zero(&self.a) && Field::is_zero(&self.b) && Field::is_zero(&self.c)
    }

    /// Matrix acting on coordinate columns `(e₁, e₂, e₃)`.
    pub fn matrix<K: Field>(&self) -> Matrix<K> {
        let (a, b, c) = (K::from_rational(&self.a), K::from_rational(&self.b), K::from_rational(&self.c));
        vec![
            vec![K::zero(), b, c],
            vec![K::zero(), K::zero(), a],
            vec![K::zero(), K::zero(), K::zero()],
        ]
    }
}

impl Serialize for NilpotentEndo {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [format_rational(&self.a), format_rational(&self.b), format_rational(&self.c)].serialize(s)
    }
}

/// `N F^p ⊆ F^{p-1}` for every `p`, decided by rank computations in `K`.
pub fn griffiths_transversal<K: Field>(n: &NilpotentEndo, f: &HodgeFiltration<K>) -> bool {
    let m = n.matrix::<K>();
    (-2..=1).all(|p| {
        let target = f.level(p - 1);
        f.level(p).basis().iter().all(|v| target.contains(&mat_vec(&m, v)))
    })
}

/// Outcome of the nilpotent-orbit test with the reason behind it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitVerdict {
    pub generates: bool,
    /// `c = aβ − bα`.
    pub criterion: bool,
    /// `N F^p ⊆ F^{p-1}`, computed independently.
    pub transversal: bool,
    /// The relative monodromy filtration of `N` and `W` exists.
    pub admissible: bool,
    pub reason: String,
}

/// Whether `(N, F)` generates a nilpotent orbit. In this example the period
/// domain is the whole unipotent orbit, so the positivity condition holds
/// for every `F`; admissibility is checked by constructing the relative
/// monodromy filtration, and the remaining condition is `c = aβ − bα`.
pub fn generates_nilpotent_orbit<K: Field>(n: &NilpotentEndo, f: &HodgeFiltration<K>) -> Result<OrbitVerdict, HodgeError> {
    let (alpha, beta, _) = f.coordinates().ok_or(HodgeError::NotInPeriodDomain)?;
    let transversal = griffiths_transversal(n, f);
    let admissible = relative_monodromy_filtration(&n.matrix::<BigRational>(), &LambdaData::weight_filtration())?.is_some();
    if n.is_zero() {
        return Ok(OrbitVerdict {
            generates: admissible,
            criterion: true,
            transversal,
            admissible,
            reason: "N = 0: the cone is {0}".into(),
        });
    }
    let rhs = K::from_rational(&n.a).mul(&beta).sub(&K::from_rational(&n.b).mul(&alpha));
    let criterion = K::from_rational(&n.c).sub(&rhs).is_zero();
    let reason = if criterion {
        "c = aβ − bα".to_string()
    } else {
        "c ≠ aβ − bα".to_string()
    };
    Ok(OrbitVerdict {
        generates: criterion && admissible,
        criterion,
        transversal,
        admissible,
        reason,
    })
}

/// Exact complex rationals `p + q i`.
pub fn gaussian(re: BigRational, im: BigRational) -> Complex<BigRational> {
    Complex::new(re, im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, mat_mul};
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type Q = Complex<BigRational>;

    fn q(p: i64, d: i64) -> Q {
        gaussian(BigRational::new(p.into(), d.into()), BigRational::zero())
    }

    fn rand_q<R: Rng>(rng: &mut R) -> Q {
        let r = |rng: &mut R| BigRational::new(rng.gen_range(-4i64..=4).into(), rng.gen_range(1i64..=3).into());
        gaussian(r(rng), r(rng))
    }

    #[test]
    fn reference_flag() {
        let f = hodge_filtration_from(q(0, 1), q(0, 1), q(0, 1));
        assert_eq!(f.level(0), Subspace::span(3, vec![vec![q(0, 1), q(0, 1), q(1, 1)]]));
        assert_eq!(f.level(-1).dim(), 2);
        assert!(f.level(-1).contains(&[q(0, 1), q(1, 1), q(0, 1)]));
        assert_eq!(f.level(1).dim(), 0);
        assert_eq!(f.level(-2).dim(), 3);
    }

    #[test]
    fn unipotent_matrices_act_on_coordinates() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let (al, be, la) = (rand_q(&mut rng), rand_q(&mut rng), rand_q(&mut rng));
            let f = hodge_filtration_from(al.clone(), be.clone(), la.clone());
            assert_eq!(f.coordinates(), Some((al.clone(), be.clone(), la.clone())));
            let (a, b, c) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3), rng.gen_range(-3..=3));
            let g: Matrix<Q> = vec![
                vec![q(1, 1), q(b, 1), q(c, 1)],
                vec![q(0, 1), q(1, 1), q(a, 1)],
                vec![q(0, 1), q(0, 1), q(1, 1)],
            ];
            let moved = f.transformed(&g);
            let expected = hodge_filtration_from(
                al.clone() + q(a, 1),
                be + q(b, 1),
                la + q(b, 1) * al + q(c, 1),
            );
            assert_eq!(moved, expected);
            assert_eq!(mat_mul(&g, &identity(3)), g);
        }
    }

    #[test]
    fn transversality_examples() {
        let f = |al, be, la| hodge_filtration_from(q(al, 1), q(be, 1), q(la, 1));
        assert!(griffiths_transversal(&NilpotentEndo::from_ints(0, 0, 0), &f(3, -2, 5)));
        // N = (1, 0, 0): transversal iff β = 0
        assert!(griffiths_transversal(&NilpotentEndo::from_ints(1, 0, 0), &f(3, 0, 5)));
        assert!(!griffiths_transversal(&NilpotentEndo::from_ints(1, 0, 0), &f(3, 1, 5)));
        // N = (1, 1, c): transversal iff c = β − α
        assert!(griffiths_transversal(&NilpotentEndo::from_ints(1, 1, -5), &f(3, -2, 7)));
        assert!(!griffiths_transversal(&NilpotentEndo::from_ints(1, 1, -4), &f(3, -2, 7)));
    }

    #[test]
    fn orbit_criterion_agrees_with_transversality() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let n = NilpotentEndo::new(
                BigRational::from_integer(rng.gen_range(-2i64..=2).into()),
                BigRational::from_integer(rng.gen_range(-2i64..=2).into()),
                BigRational::from_integer(rng.gen_range(-2i64..=2).into()),
            );
            let f = hodge_filtration_from(rand_q(&mut rng), rand_q(&mut rng), rand_q(&mut rng));
            let v = generates_nilpotent_orbit(&n, &f).unwrap();
            assert_eq!(v.criterion, v.transversal);
            assert!(v.admissible);
        }
        let v = generates_nilpotent_orbit(&NilpotentEndo::from_ints(1, 0, 0), &hodge_filtration_from(q(2, 1), q(1, 1), q(0, 1))).unwrap();
        assert!(!v.generates);
    }

    #[test]
    fn float_flags_use_tolerance() {
        let c = |re: f64| Complex64::new(re, 0.0);
        let f = hodge_filtration_from(c(0.1), c(0.7), c(-0.3));
        // c = aβ − bα = 0.7 - 0.1 = 0.6
        let n = NilpotentEndo::new(
            BigRational::from_integer(1.into()),
            BigRational::from_integer(1.into()),
            BigRational::new(3.into(), 5.into()),
        );
        assert!(griffiths_transversal(&n, &f));
        assert!(generates_nilpotent_orbit(&n, &f).unwrap().generates);
    }

    #[test]
    fn static_data() {
        assert_eq!(LambdaData::hodge_number(-1, -1), 1);
        assert_eq!(LambdaData::hodge_number(-1, 0), 0);
        assert_eq!(LambdaData::graded_pairing(-2), Some(1));
        assert_eq!(LambdaData::weight_filtration().level(-3).dim(), 1);
    }
}
