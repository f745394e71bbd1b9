//! The level-2 higher Albanese map of `ℙ¹ ∖ {0, 1, ∞}` based at the
//! tangential base point `(0, 1)`.
//!
//! In the primary coordinates a point `x`, reached along a path in a given
//! homotopy class, goes to the class of `F(α, β, λ)` with
//! `α = log x / 2πi`, `β = l₁(x) / 2πi`, `λ = l₂(x) / (2πi)²`, where
//! `l₁ = -log(1 - x)` and `l₂ = Li₂`. The alternative coordinates invert the
//! period matrix of the dilogarithm variation instead.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hodge::{
    reduce_mod_integral, BoundaryChartPoint, HeisenbergPoint, HodgeError, IntegerUnipotent,
};
use crate::linalg::{inverse, Matrix};
use crate::malcev::GroupWord;
use crate::paths::{
    loop_path, monodromy_matrix, path_to, regularized_signature, signature, MonodromyMatrix, PathError,
    QuadratureConfig, Segment, Step, TruncatedSeries,
};

/// Frozen regression constants with their provenance.
pub const REGRESSION_FIXTURE: &str = include_str!("../fixtures/regression.json");

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct FrozenMonodromy {
    pub gamma0: [i64; 3],
    pub gamma1: [i64; 3],
    pub commutator: [i64; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct RegressionConstants {
    pub monodromy: FrozenMonodromy,
    pub alternative_coordinates: FrozenMonodromy,
    pub differential_relation: String,
    pub dilogarithm_word: String,
}

impl FrozenMonodromy {
    pub fn get(&self, name: &str) -> Option<IntegerUnipotent> {
        let [a, b, c] = match name {
            "gamma0" => self.gamma0,
            "gamma1" => self.gamma1,
            "commutator" => self.commutator,
            _ => return None,
        };
        Some(IntegerUnipotent::new(a, b, c))
    }
}

pub fn regression_constants() -> RegressionConstants {
    serde_json::from_str(REGRESSION_FIXTURE).expect("checked-in fixture parses")
}

/// Largest `|x|` accepted by [`extended_albanese`].
pub const BOUNDARY_DISK_RADIUS: f64 = 0.5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlbaneseError {
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Hodge(#[from] HodgeError),
    #[error("|x| = {0} is outside the boundary disk of radius 1/2")]
    OutOfRange(f64),
    #[error("period matrix is singular")]
    Singular,
}

/// Reduced Albanese coordinates with the homotopy class that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct AlbanesePoint {
    pub x: Complex64,
    /// Loop word traversed before the standard path.
    pub loop_prefix: GroupWord,
    /// Coordinates before reduction.
    pub raw: HeisenbergPoint,
    pub reduced: HeisenbergPoint,
    /// `reduced = reduction · raw`.
    pub reduction: IntegerUnipotent,
}

impl Serialize for AlbanesePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let c = |z: Complex64| [z.re, z.im];
        let mut st = s.serialize_struct("AlbanesePoint", 7)?;
        st.serialize_field("x", &c(self.x))?;
        st.serialize_field("loop_prefix", &self.loop_prefix)?;
        st.serialize_field("alpha", &c(self.reduced.alpha))?;
        st.serialize_field("beta", &c(self.reduced.beta))?;
        st.serialize_field("lambda", &c(self.reduced.lambda))?;
        st.serialize_field("reduction_matrix", &self.reduction.matrix())?;
        st.serialize_field(
            "raw",
            &[c(self.raw.alpha), c(self.raw.beta), c(self.raw.lambda)],
        )?;
        st.end()
    }
}

fn reduced_point(x: Complex64, word: &GroupWord, raw: HeisenbergPoint) -> AlbanesePoint {
    let (reduced, reduction) = reduce_mod_integral(&raw);
    AlbanesePoint {
        x,
        loop_prefix: word.clone(),
        raw,
        reduced,
        reduction,
    }
}

/// Unreduced primary coordinates along `word` then the standard path.
pub fn period_point(x: Complex64, word: &GroupWord, cfg: &QuadratureConfig) -> Result<HeisenbergPoint, AlbaneseError> {
    let s = regularized_signature(x, 2, cfg, word)?;
    Ok(HeisenbergPoint::from_signature(&s))
}

pub fn albanese_point(x: Complex64, word: &GroupWord, cfg: &QuadratureConfig) -> Result<AlbanesePoint, AlbaneseError> {
    Ok(reduced_point(x, word, period_point(x, word, cfg)?))
}

/// The inverse of `[[1, -α, λ], [0, 1, -β], [0, 0, 1]]` read as a point of
/// the same group.
pub fn alternative_from_primary(p: &HeisenbergPoint) -> Result<HeisenbergPoint, AlbaneseError> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let m: Matrix<Complex64> = vec![
        vec![one, -p.alpha, p.lambda],
        vec![zero, one, -p.beta],
        vec![zero, zero, one],
    ];
    let inv = inverse(&m).ok_or(AlbaneseError::Singular)?;
    let arr = [
        [inv[0][0], inv[0][1], inv[0][2]],
        [inv[1][0], inv[1][1], inv[1][2]],
        [inv[2][0], inv[2][1], inv[2][2]],
    ];
    Ok(HeisenbergPoint::from_matrix(&arr))
}

/// Alternative coordinates, reduced.
pub fn albanese_point_alt(x: Complex64, word: &GroupWord, cfg: &QuadratureConfig) -> Result<AlbanesePoint, AlbaneseError> {
    let raw = alternative_from_primary(&period_point(x, word, cfg)?)?;
    Ok(reduced_point(x, word, raw))
}

/// The comparison between the two coordinate systems,
/// `(α, β, λ) ↦ (β, α, αβ − λ)`; it intertwines the integer actions via
/// `(a, b, c) ↦ (b, a, ab − c)`. Frozen in the regression fixture.
pub fn primary_to_alternative(p: &HeisenbergPoint) -> HeisenbergPoint {
    HeisenbergPoint::new(p.beta, p.alpha, p.alpha * p.beta - p.lambda)
}

pub fn transport_integer_action(g: &IntegerUnipotent) -> IntegerUnipotent {
    IntegerUnipotent::new(g.b, g.a, g.a * g.b - g.c)
}

/// `(q, β, λ) = (x, l₁(x)/2πi, l₂(x)/(2πi)²)` for `|x| < 1/2`, and the
/// boundary point `(0, 0, 0)` at `x = 0`.
pub fn extended_albanese(x: Complex64, cfg: &QuadratureConfig) -> Result<BoundaryChartPoint, AlbaneseError> {
    let zero = Complex64::new(0.0, 0.0);
    if x == zero {
        return Ok(BoundaryChartPoint::new(zero, zero, zero)?);
    }
    if x.norm() >= BOUNDARY_DISK_RADIUS {
        return Err(AlbaneseError::OutOfRange(x.norm()));
    }
    let p = period_point(x, &GroupWord::identity(), cfg)?;
    Ok(BoundaryChartPoint::new(x, p.beta, p.lambda)?)
}

/// Reference point whose signature is continued by [`monodromy_action`].
pub const MONODROMY_BASE_POINT: Complex64 = Complex64::new(0.5, 0.0);

/// Integer matrix by which continuing the primary period matrix along the
/// loop of `word` multiplies it on the left.
pub fn monodromy_action(word: &GroupWord, cfg: &QuadratureConfig) -> Result<MonodromyMatrix, AlbaneseError> {
    let base = regularized_signature(MONODROMY_BASE_POINT, 2, cfg, &GroupWord::identity())?;
    Ok(monodromy_matrix(&loop_path(word), &base, cfg)?)
}

/// The same for the alternative coordinates, computed from the continued
/// matrices directly.
pub fn monodromy_action_alt(word: &GroupWord, cfg: &QuadratureConfig) -> Result<MonodromyMatrix, AlbaneseError> {
    let before = alternative_from_primary(&period_point(MONODROMY_BASE_POINT, &GroupWord::identity(), cfg)?)?;
    let after = alternative_from_primary(&period_point(MONODROMY_BASE_POINT, word, cfg)?)?;
    let (g, dev) = IntegerUnipotent::nearest(&after.mul(&before.inverse()));
    if dev.1 > 1e-3 {
        return Err(PathError::NonIntegral {
            entry: dev.0,
            value: dev.1,
        }
        .into());
    }
    Ok(MonodromyMatrix {
        g,
        max_deviation: dev.1,
    })
}

// ---------------------------------------------------------------------------
// Lie algebra action

/// `Lie` of the level-2 quotient: basis `N₀, N₁, [N₁, N₀]` with weights
/// `-2, -2, -4` and Hodge types `(-1,-1), (-1,-1), (-2,-2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LieMHSExample;

impl LieMHSExample {
    pub const NAMES: [&'static str; 3] = ["N0", "N1", "[N1,N0]"];
    pub const WEIGHTS: [i64; 3] = [-2, -2, -4];
    pub const HODGE_P: [i64; 3] = [-1, -1, -2];

    /// `W₋₄ = ⟨[N₁,N₀]⟩ ⊂ W₋₂ = everything`.
    pub fn weight_filtration() -> crate::hodge::WeightFiltrationGeneric {
        crate::hodge::WeightFiltrationGeneric::split_standard(&Self::WEIGHTS)
    }
}

/// Action of `N₀`, `N₁` on `Λ` as integer matrices in the basis
/// `e₁, e₂, e₃`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionTable {
    pub name: &'static str,
    pub n0: [[i64; 3]; 3],
    pub n1: [[i64; 3]; 3],
}

impl ActionTable {
    /// `N₀ e₃ = e₂`, `N₁ e₂ = e₁`, all else 0.
    pub fn primary() -> Self {
        ActionTable {
            name: "primary",
            n0: [[0, 0, 0], [0, 0, 1], [0, 0, 0]],
            n1: [[0, 1, 0], [0, 0, 0], [0, 0, 0]],
        }
    }

    /// `N₀ e₂ = e₁`, `N₁ e₃ = e₂`, all else 0.
    pub fn alternative() -> Self {
        ActionTable {
            name: "alternative",
            n0: [[0, 1, 0], [0, 0, 0], [0, 0, 0]],
            n1: [[0, 0, 0], [0, 0, 1], [0, 0, 0]],
        }
    }

    /// The primary table with `N₀ e₃ = e₁ + e₂`: still weight-compatible
    /// but the `e₁` part has the wrong Hodge type.
    pub fn perturbed() -> Self {
        ActionTable {
            name: "perturbed",
            n0: [[0, 0, 1], [0, 0, 1], [0, 0, 0]],
            ..Self::primary()
        }
    }

    fn bracket(&self) -> [[i64; 3]; 3] {
        let ab = mul3(&self.n1, &self.n0);
        let ba = mul3(&self.n0, &self.n1);
        let mut out = [[0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = ab[i][j] - ba[i][j];
            }
        }
        out
    }
}

fn mul3(a: &[[i64; 3]; 3], b: &[[i64; 3]; 3]) -> [[i64; 3]; 3] {
    let mut out = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MhsCheck {
    pub table: &'static str,
    /// Image weights never exceed the sum of weights.
    pub weight_compatible: bool,
    /// Image Hodge levels never drop below the sum of levels.
    pub hodge_compatible: bool,
    /// `[N₁, N₀]` acts by a nonzero operator commuting with `N₀`, `N₁`.
    pub bracket_central: bool,
}

impl MhsCheck {
    pub fn passes(&self) -> bool {
        self.weight_compatible && self.hodge_compatible && self.bracket_central
    }
}

/// Checks that `Lie ⊗ Λ → Λ` respects `W` and `F` on the explicit bases.
pub fn check_action(table: &ActionTable) -> MhsCheck {
    use crate::hodge::LambdaData;
    let ops = [table.n0, table.n1, table.bracket()];
    let mut weight_compatible = true;
    let mut hodge_compatible = true;
    for (g, op) in ops.iter().enumerate() {
        for j in 0..3 {
            for i in 0..3 {
                if op[i][j] == 0 {
                    continue;
                }
                if LambdaData::WEIGHTS[i] > LieMHSExample::WEIGHTS[g] + LambdaData::WEIGHTS[j] {
                    weight_compatible = false;
                }
                if LambdaData::HODGE_P[i] < LieMHSExample::HODGE_P[g] + LambdaData::HODGE_P[j] {
                    hodge_compatible = false;
                }
            }
        }
    }
    let b = ops[2];
    let commutes = |x: &[[i64; 3]; 3]| mul3(x, &b) == mul3(&b, x);
    let bracket_central = b != [[0; 3]; 3] && commutes(&table.n0) && commutes(&table.n1);
    MhsCheck {
        table: table.name,
        weight_compatible,
        hodge_compatible,
        bracket_central,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MhsReport {
    pub primary: MhsCheck,
    pub alternative: MhsCheck,
    /// A deliberately wrong table, expected to fail the Hodge check.
    pub perturbed: MhsCheck,
}

impl MhsReport {
    pub fn passes(&self) -> bool {
        self.primary.passes() && self.alternative.passes() && self.perturbed.weight_compatible && !self.perturbed.hodge_compatible
    }
}

pub fn lie_action_is_mhs_morphism() -> MhsReport {
    MhsReport {
        primary: check_action(&ActionTable::primary()),
        alternative: check_action(&ActionTable::alternative()),
        perturbed: check_action(&ActionTable::perturbed()),
    }
}

// ---------------------------------------------------------------------------
// Differential relations

/// Finite-difference derivatives of the coordinates at one point of a path,
/// compared with the integrands.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DifferentialSample {
    /// `|dα/dt − (2πi)⁻¹ x'/x|`.
    pub alpha_error: f64,
    /// `|dβ/dt − (2πi)⁻¹ x'/(1 − x)|`.
    pub beta_error: f64,
    /// `|dλ/dt − β dα/dt|`.
    pub lambda_error: f64,
    /// `|dλ/dt − α dβ/dt|`, the relation that does not hold.
    pub swapped_error: f64,
}

impl DifferentialSample {
    pub fn max_error(&self) -> f64 {
        self.alpha_error.max(self.beta_error).max(self.lambda_error)
    }
}

/// Samples the coordinates along the segment `x0 → x1` (reached by `word`
/// and the standard path to `x0`) at `fractions`, using central differences
/// of step `h` in the segment parameter.
pub fn differential_check(
    word: &GroupWord,
    x0: Complex64,
    x1: Complex64,
    fractions: &[f64],
    h: f64,
    cfg: &QuadratureConfig,
) -> Result<Vec<DifferentialSample>, AlbaneseError> {
    let tau = Complex64::new(0.0, 2.0 * PI);
    let start = signature(&path_to(x0, word)?, 2, cfg)?;
    let dir = x1 - x0;
    let at = |t: f64| -> Result<HeisenbergPoint, AlbaneseError> {
        let z = x0 + dir * t;
        let line = crate::paths::Path::new(vec![Step::Segment(Segment::Line { from: x0, to: z })])?;
        let s: TruncatedSeries = if t == 0.0 { start.clone() } else { start.mul(&signature(&line, 2, cfg)?) };
        Ok(HeisenbergPoint::from_signature(&s))
    };
    fractions
        .iter()
        .map(|&t| {
            let z = x0 + dir * t;
            let mid = at(t)?;
            let (plus, minus) = (at(t + h)?, at(t - h)?);
            let d = |f: fn(&HeisenbergPoint) -> Complex64| (f(&plus) - f(&minus)) / (2.0 * h);
            let (da, db, dl) = (d(|p| p.alpha), d(|p| p.beta), d(|p| p.lambda));
            Ok(DifferentialSample {
                alpha_error: (da - dir / z / tau).norm(),
                beta_error: (db - dir / (1.0 - z) / tau).norm(),
                lambda_error: (dl - mid.beta * da).norm(),
                swapped_error: (dl - mid.alpha * db).norm(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hodge::same_class;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn point_at_one_half() {
        let tau = c(0.0, 2.0 * PI);
        let ln2 = 2f64.ln();
        let p = albanese_point(c(0.5, 0.0), &GroupWord::identity(), &cfg()).unwrap();
        let expected = HeisenbergPoint::new(
            c(-ln2, 0.0) / tau,
            c(ln2, 0.0) / tau,
            c(PI * PI / 12.0 - ln2 * ln2 / 2.0, 0.0) / (tau * tau),
        );
        assert!(p.raw.max_diff(&expected) < 1e-8);
        assert!(same_class(&p.reduced, &expected, 1e-8));
    }

    #[test]
    fn homotopy_class_does_not_change_the_class() {
        let x = c(0.3, -0.4);
        let a = albanese_point(x, &GroupWord::identity(), &cfg()).unwrap();
        let b = albanese_point(x, &"0 1 0^-1".parse().unwrap(), &cfg()).unwrap();
        assert!(a.raw.max_diff(&b.raw) > 0.5);
        assert!(same_class(&a.reduced, &b.reduced, 1e-8));
    }

    #[test]
    fn alternative_coordinates_match_the_frozen_transform() {
        for x in [c(0.5, 0.0), c(0.2, 0.7), c(-1.5, 0.3), c(2.5, -0.1)] {
            let p = period_point(x, &GroupWord::identity(), &cfg()).unwrap();
            let alt = alternative_from_primary(&p).unwrap();
            assert!(alt.max_diff(&primary_to_alternative(&p)) < 1e-12);
        }
        for w in ["0", "1", "0 1 0^-1 1^-1"] {
            let word: GroupWord = w.parse().unwrap();
            let g = monodromy_action(&word, &cfg()).unwrap().g;
            let h = monodromy_action_alt(&word, &cfg()).unwrap().g;
            assert_eq!(h, transport_integer_action(&g), "{w}");
        }
    }

    #[test]
    fn extension_to_the_boundary() {
        let zero = c(0.0, 0.0);
        assert_eq!(extended_albanese(zero, &cfg()).unwrap(), BoundaryChartPoint::new(zero, zero, zero).unwrap());
        assert!(matches!(extended_albanese(c(0.6, 0.0), &cfg()), Err(AlbaneseError::OutOfRange(_))));
        let y = extended_albanese(c(0.1, 0.0), &cfg()).unwrap();
        let tau = c(0.0, 2.0 * PI);
        let li2: f64 = (1..60).map(|n| 0.1f64.powi(n) / (n * n) as f64).sum();
        assert!((y.beta - c(-(0.9f64).ln(), 0.0) / tau).norm() < 1e-10);
        assert!((y.lambda - c(li2, 0.0) / (tau * tau)).norm() < 1e-10);
    }

    #[test]
    fn frozen_monodromy() {
        let frozen = regression_constants();
        let words = [("gamma0", "0"), ("gamma1", "1"), ("commutator", "0 1 0^-1 1^-1")];
        for (name, w) in words {
            let word: GroupWord = w.parse().unwrap();
            let m = monodromy_action(&word, &cfg()).unwrap();
            assert!(m.max_deviation < 1e-6);
            assert_eq!(Some(m.g), frozen.monodromy.get(name), "{name}");
            let alt = monodromy_action_alt(&word, &cfg()).unwrap();
            assert_eq!(Some(alt.g), frozen.alternative_coordinates.get(name), "{name}");
        }
        assert_eq!(frozen.differential_relation, "dlambda = beta dalpha");
    }

    #[test]
    fn mhs_tables() {
        let r = lie_action_is_mhs_morphism();
        assert!(r.primary.passes());
        assert!(r.alternative.passes());
        assert!(r.perturbed.weight_compatible);
        assert!(!r.perturbed.hodge_compatible);
        assert!(r.passes());
    }

    #[test]
    fn lambda_follows_beta_d_alpha() {
        let samples = differential_check(
            &GroupWord::identity(),
            c(0.3, 0.2),
            c(-0.4, 0.6),
            &[0.25, 0.5, 0.75],
            1e-4,
            &cfg(),
        )
        .unwrap();
        for s in samples {
            assert!(s.max_error() < 1e-6, "{s:?}");
            assert!(s.swapped_error > 1e-3);
        }
    }
}
