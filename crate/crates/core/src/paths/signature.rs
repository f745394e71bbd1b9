//! Signatures by adaptive transport, single iterated integrals by an
//! independent panel rule, and continuation around the punctures.

use num_complex::Complex64;
use serde::Serialize;

use super::quadrature::{chebyshev_rule, legendre_rule, PanelRule};
use super::series::{basis_len, TruncatedSeries};
use super::tangential::regularized_lead_in;
use super::{path_to, Anchor, Path, PathError, Puncture, QuadratureConfig, Segment, Step, BASE_VECTOR};
use crate::hodge::{HeisenbergPoint, IntegerUnipotent};
use crate::malcev::GroupWord;
use crate::words::{Letter, Word};

/// Largest radius at which the lead-in series is used directly.
const SERIES_RADIUS: f64 = 0.5;

/// Panels shorter than this (in segment parameter) signal a stuck refinement.
const MIN_PANEL: f64 = 1e-13;

/// Relative roundoff floor for the local error test.
const ROUNDOFF: f64 = 1e-14;

fn integrands(z: Complex64, dz: Complex64) -> [Complex64; 2] {
    [dz / z, dz / (1.0 - z)]
}

/// Something transported along a parameter interval and composed by
/// concatenation.
trait Transport: Sized {
    fn compose(&self, other: &Self) -> Self;
    fn distance(&self, other: &Self) -> f64;
    fn size(&self) -> f64;
}

impl Transport for TruncatedSeries {
    fn compose(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn distance(&self, other: &Self) -> f64 {
        self.max_diff(other)
    }
    fn size(&self) -> f64 {
        self.max_norm()
    }
}

/// Step-doubling refinement of `[a, b]`: a panel is accepted once it agrees
/// with the composite of its halves to `tol_density · (b - a)`.
struct Adaptive<'a, T> {
    panel: &'a dyn Fn(f64, f64) -> T,
    tol_density: f64,
    budget: usize,
    limit: usize,
}

impl<T: Transport> Adaptive<'_, T> {
    fn run(&mut self, a: f64, b: f64) -> Result<(T, f64), PathError> {
        let whole = (self.panel)(a, b);
        self.refine(a, b, whole)
    }

    fn refine(&mut self, a: f64, b: f64, whole: T) -> Result<(T, f64), PathError> {
        let m = 0.5 * (a + b);
        let left = (self.panel)(a, m);
        let right = (self.panel)(m, b);
        let combined = left.compose(&right);
        let diff = whole.distance(&combined);
        let tol = (self.tol_density * (b - a)).max(ROUNDOFF * combined.size().max(1.0));
        if diff <= tol {
            return Ok((combined, diff));
        }
        if self.budget == 0 || b - a < MIN_PANEL {
            return Err(PathError::NotConverged(self.limit));
        }
        self.budget -= 1;
        let (l, el) = self.refine(a, m, left)?;
        let (r, er) = self.refine(m, b, right)?;
        Ok((l.compose(&r), el + er))
    }
}

/// Transport of the full truncated series across `[a, b]` on one panel.
fn chebyshev_panel(seg: &Segment, a: f64, b: f64, level: usize, rule: &PanelRule) -> TruncatedSeries {
    let n = rule.len();
    let h = 0.5 * (b - a);
    let f: Vec<[Complex64; 2]> = rule
        .nodes
        .iter()
        .map(|x| {
            let t = a + h * (x + 1.0);
            integrands(seg.point(t), seg.derivative(t))
        })
        .collect();
    let words = basis_len(level);
    let mut vals: Vec<Vec<Complex64>> = Vec::with_capacity(words);
    vals.push(vec![Complex64::new(1.0, 0.0); n]);
    let mut g = vec![Complex64::new(0.0, 0.0); n];
    for idx in 1..words {
        // w = prefix · last, prefix index = (idx - 1) / 2 in shortlex order
        let prefix = (idx - 1) / 2;
        let last = (idx - 1) % 2;
        for k in 0..n {
            g[k] = vals[prefix][k] * f[k][last];
        }
        let v: Vec<Complex64> = rule
            .cumulative
            .iter()
            .map(|row| row.iter().zip(&g).map(|(w, gk)| gk * *w).sum::<Complex64>() * h)
            .collect();
        vals.push(v);
    }
    TruncatedSeries::from_coeffs(level, vals.iter().map(|v| v[n - 1]).collect())
}

fn segment_signature(
    seg: &Segment,
    level: usize,
    tol: f64,
    cfg: &QuadratureConfig,
) -> Result<(TruncatedSeries, f64), PathError> {
    let rule = chebyshev_rule();
    let panel = |a: f64, b: f64| chebyshev_panel(seg, a, b, level, rule);
    Adaptive {
        panel: &panel,
        tol_density: tol,
        budget: cfg.max_subdivisions,
        limit: cfg.max_subdivisions,
    }
    .run(0.0, 1.0)
}

/// Lead-in from the tangential point to radius `rho` along the direction of
/// `to`, followed by the straight line to `to`.
fn depart_at_radius(
    puncture: Puncture,
    vector: Complex64,
    to: Complex64,
    rho: f64,
    level: usize,
    tol: f64,
    cfg: &QuadratureConfig,
) -> Result<(TruncatedSeries, f64), PathError> {
    let d = to - puncture.point();
    let r = d.norm();
    let junction = puncture.point() + d * (rho / r);
    let lead = regularized_lead_in(puncture, vector, junction, level);
    if rho >= r {
        return Ok((lead, 0.0));
    }
    let (line, err) = segment_signature(&Segment::Line { from: junction, to }, level, tol, cfg)?;
    Ok((lead.mul(&line), err))
}

/// Regularized signature of a `Depart` step. The value uses the series up to
/// radius 1/2; the same step recomputed with the junction moved in to the
/// last three regularization radii must agree within `10 · abs_tol`.
fn depart_signature(
    puncture: Puncture,
    vector: Complex64,
    to: Complex64,
    level: usize,
    cfg: &QuadratureConfig,
) -> Result<(TruncatedSeries, f64), PathError> {
    let tol = 0.1 * cfg.abs_tol;
    let r = (to - puncture.point()).norm();
    let rho0 = r.min(SERIES_RADIUS);
    let (value, err) = depart_at_radius(puncture, vector, to, rho0, level, tol, cfg)?;
    let eps = &cfg.regularization_epsilons;
    let mut spread = 0.0f64;
    for &e in &eps[eps.len().saturating_sub(3)..] {
        let rho = e.min(rho0);
        if rho == rho0 {
            continue;
        }
        let (v, _) = depart_at_radius(puncture, vector, to, rho, level, tol, cfg)?;
        spread = spread.max(v.max_diff(&value));
    }
    if spread > 10.0 * cfg.abs_tol {
        return Err(PathError::NotStabilized { spread });
    }
    Ok((value, err + spread))
}

/// Truncated signature of `path` with an estimate of its absolute error.
pub fn signature_with_estimate(
    path: &Path,
    level: usize,
    cfg: &QuadratureConfig,
) -> Result<(TruncatedSeries, f64), PathError> {
    cfg.validate()?;
    let steps = path.steps();
    let tol = 0.1 * cfg.abs_tol / steps.len().max(1) as f64;
    let mut s = TruncatedSeries::identity(level);
    let mut err = 0.0;
    for step in steps {
        let (t, e) = match step {
            Step::Segment(seg) => segment_signature(seg, level, tol, cfg)?,
            Step::Depart { puncture, vector, to } => depart_signature(*puncture, *vector, *to, level, cfg)?,
            Step::Arrive { from, puncture, vector } => {
                let (t, e) = depart_signature(*puncture, *vector, *from, level, cfg)?;
                (t.inverse(), e)
            }
        };
        s = s.mul(&t);
        err += e;
    }
    Ok((s, err))
}

/// Truncated signature: the coefficient of each word `a₁…a_r` is
/// `∫ω_{a₁}…ω_{a_r}` with `a₁` integrated first.
pub fn signature(path: &Path, level: usize, cfg: &QuadratureConfig) -> Result<TruncatedSeries, PathError> {
    signature_with_estimate(path, level, cfg).map(|(s, _)| s)
}

// ---------------------------------------------------------------------------
// Single iterated integrals

/// Values `m[i][j]` of the iterated integral of the subword `w[i..j]`; upper
/// unitriangular, composed under concatenation by matrix product.
#[derive(Debug, Clone)]
struct SubwordMatrix(Vec<Vec<Complex64>>);

impl SubwordMatrix {
    fn from_series(w: &Word, s: &TruncatedSeries) -> Self {
        let r = w.len();
        let mut m = vec![vec![Complex64::new(0.0, 0.0); r + 1]; r + 1];
        for i in 0..=r {
            for j in i..=r {
                m[i][j] = s.coefficient(&w.slice(i, j));
            }
        }
        SubwordMatrix(m)
    }

    fn top(&self) -> Complex64 {
        self.0[0][self.0.len() - 1]
    }
}

impl Transport for SubwordMatrix {
    fn compose(&self, other: &Self) -> Self {
        let n = self.0.len();
        let mut m = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for i in 0..n {
            for k in i..n {
                let a = self.0[i][k];
                for j in k..n {
                    m[i][j] += a * other.0[k][j];
                }
            }
        }
        SubwordMatrix(m)
    }

    fn distance(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn size(&self) -> f64 {
        self.0.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

fn legendre_panel(seg: &Segment, a: f64, b: f64, w: &[Letter], rule: &PanelRule) -> SubwordMatrix {
    let n = rule.len();
    let r = w.len();
    let h = 0.5 * (b - a);
    let f: Vec<[Complex64; 2]> = rule
        .nodes
        .iter()
        .map(|x| {
            let t = a + h * (x + 1.0);
            integrands(seg.point(t), seg.derivative(t))
        })
        .collect();
    let mut m = vec![vec![Complex64::new(0.0, 0.0); r + 1]; r + 1];
    let mut g = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..=r {
        m[i][i] = Complex64::new(1.0, 0.0);
        let mut vals = vec![Complex64::new(1.0, 0.0); n];
        for j in i..r {
            let l = w[j].index();
            for k in 0..n {
                g[k] = vals[k] * f[k][l];
            }
            m[i][j + 1] = rule.total.iter().zip(&g).map(|(wt, gk)| gk * *wt).sum::<Complex64>() * h;
            if j + 1 < r {
                vals = rule
                    .cumulative
                    .iter()
                    .map(|row| row.iter().zip(&g).map(|(wt, gk)| gk * *wt).sum::<Complex64>() * h)
                    .collect();
            }
        }
    }
    SubwordMatrix(m)
}

/// One iterated integral with its error estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IteratedIntegral {
    pub word: Word,
    #[serde(serialize_with = "serialize_complex")]
    pub value: Complex64,
    pub abs_err_est: f64,
}

fn serialize_complex<S: serde::Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

/// `∫ω_{a₁}…ω_{a_r}` over the simplex `t₁ ≤ … ≤ t_r`, by Gauss–Legendre
/// panels carrying all contiguous subwords. This route shares no
/// quadrature code with [`signature`]. At a tangential end the regularizing
/// series is used only below the smallest regularization radius.
pub fn iterated_integral(w: &Word, path: &Path, cfg: &QuadratureConfig) -> Result<IteratedIntegral, PathError> {
    cfg.validate()?;
    let steps = path.steps();
    let tol = 0.1 * cfg.abs_tol / steps.len().max(1) as f64;
    let rule = legendre_rule();
    let eps = *cfg.regularization_epsilons.last().expect("validated");

    let line_matrix_for = |u: &Word, seg: &Segment| {
        let panel = |a: f64, b: f64| legendre_panel(seg, a, b, u.letters(), rule);
        Adaptive {
            panel: &panel,
            tol_density: tol,
            budget: cfg.max_subdivisions,
            limit: cfg.max_subdivisions,
        }
        .run(0.0, 1.0)
    };
    let depart_matrix = |u: &Word, puncture: Puncture, vector: Complex64, to: Complex64| {
        let d = to - puncture.point();
        let rho = eps.min(d.norm());
        let junction = puncture.point() + d * (rho / d.norm());
        let lead = SubwordMatrix::from_series(u, &regularized_lead_in(puncture, vector, junction, u.len()));
        if rho >= d.norm() {
            return Ok((lead, 0.0));
        }
        let (line, e) = line_matrix_for(u, &Segment::Line { from: junction, to })?;
        Ok::<_, PathError>((lead.compose(&line), e))
    };

    let mut total = SubwordMatrix::from_series(w, &TruncatedSeries::identity(w.len()));
    let mut err = 0.0;
    for step in steps {
        let (m, e) = match step {
            Step::Segment(seg) => line_matrix_for(w, seg)?,
            Step::Depart { puncture, vector, to } => depart_matrix(w, *puncture, *vector, *to)?,
            Step::Arrive { from, puncture, vector } => {
                // S(γ⁻¹)(u) = (-1)^{|u|} S(γ)(reverse u) for the departure γ
                let rev = w.reversed();
                let (d, e) = depart_matrix(&rev, *puncture, *vector, *from)?;
                let r = w.len();
                let mut m = d.clone();
                for i in 0..=r {
                    for j in i..=r {
                        let v = d.0[r - j][r - i];
                        m.0[i][j] = if (j - i) % 2 == 1 { -v } else { v };
                    }
                }
                (m, e)
            }
        };
        total = total.compose(&m);
        err += e;
    }
    Ok(IteratedIntegral {
        word: w.clone(),
        value: total.top(),
        abs_err_est: err,
    })
}

// ---------------------------------------------------------------------------
// Continuation

/// Signature from the tangential base point `(0, 1)` to `x` along the loop
/// `word` followed by the standard path.
pub fn regularized_signature(
    x: Complex64,
    level: usize,
    cfg: &QuadratureConfig,
    word: &GroupWord,
) -> Result<TruncatedSeries, PathError> {
    signature(&path_to(x, word)?, level, cfg)
}

/// Integer matrix by which continuing along a loop changes a period matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonodromyMatrix {
    pub g: IntegerUnipotent,
    /// Largest distance of a computed entry from its rounded value.
    pub max_deviation: f64,
}

/// Deviations beyond this are reported as a branch-tracking failure.
const INTEGRALITY_LIMIT: f64 = 1e-3;

/// `g` with `M(loop · base) = g · M(base)` in the `(α, β, λ)` coordinates.
pub fn monodromy_matrix(
    loop_path: &Path,
    base_signature: &TruncatedSeries,
    cfg: &QuadratureConfig,
) -> Result<MonodromyMatrix, PathError> {
    let base_anchor = Anchor::Tangential {
        puncture: Puncture::Zero,
        vector: BASE_VECTOR,
    };
    if !loop_path.is_empty()
        && !(loop_path.start().is_some_and(|a| a.matches(&base_anchor))
            && loop_path.end().is_some_and(|a| a.matches(&base_anchor)))
    {
        return Err(PathError::NotALoop);
    }
    if base_signature.level() < 2 {
        return Err(PathError::LevelMismatch(2, base_signature.level()));
    }
    let base = base_signature.truncate(2);
    let continued = signature(loop_path, 2, cfg)?.mul(&base);
    let m = HeisenbergPoint::from_signature(&continued).mul(&HeisenbergPoint::from_signature(&base).inverse());
    let (g, dev) = IntegerUnipotent::nearest(&m);
    if dev.1 > INTEGRALITY_LIMIT {
        return Err(PathError::NonIntegral {
            entry: dev.0,
            value: dev.1,
        });
    }
    Ok(MonodromyMatrix { g, max_deviation: dev.1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::{gamma0, gamma1, make_path};
    use serde_json::json;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn word(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn empty_word_is_one() {
        let p = make_path(&json!({"waypoints": [0.25, [0.3, 0.4]]})).unwrap();
        assert_eq!(iterated_integral(&Word::empty(), &p, &cfg()).unwrap().value, c(1.0, 0.0));
    }

    #[test]
    fn residue_and_logarithm() {
        let circle = make_path(&json!({"circle": {"center": 0, "radius": 0.5, "start_angle": 1.0}})).unwrap();
        let v = iterated_integral(&word("0"), &circle, &cfg()).unwrap();
        assert!((v.value - c(0.0, 2.0 * PI)).norm() < 1e-10);
        let seg = make_path(&json!({"waypoints": [0.25, 0.5]})).unwrap();
        let v = iterated_integral(&word("0"), &seg, &cfg()).unwrap();
        assert!((v.value - c(2f64.ln(), 0.0)).norm() < 1e-10);
    }

    #[test]
    fn dilogarithm_by_simplex_quadrature() {
        let li2 = PI * PI / 12.0 - 2f64.ln().powi(2) / 2.0;
        let p = make_path(&json!({"waypoints": [0.5], "tangential_start": {"at": 0}})).unwrap();
        let v = iterated_integral(&word("10"), &p, &cfg()).unwrap();
        assert!((v.value - c(li2, 0.0)).norm() < 1e-9, "{}", v.value);
        // an interior start close to 0 approaches the same value
        let p = make_path(&json!({"waypoints": [1e-9, 0.5]})).unwrap();
        let v = iterated_integral(&word("10"), &p, &cfg()).unwrap();
        assert!((v.value - c(li2, 0.0)).norm() < 1e-7);
    }

    #[test]
    fn transport_matches_simplex_quadrature() {
        let p = make_path(&json!({"waypoints": [[0.2, 0.3], [1.5, 0.5], [0.8, -0.7], [-0.5, -0.2]]})).unwrap();
        let s = signature(&p, 3, &cfg()).unwrap();
        for w in crate::words::word_basis(3) {
            let v = iterated_integral(&w, &p, &cfg()).unwrap();
            assert!((v.value - s.coefficient(&w)).norm() < 1e-9, "{w}");
        }
    }

    #[test]
    fn loop_about_zero_is_an_exponential() {
        let s = signature(&gamma0(1), 2, &cfg()).unwrap();
        let expected = TruncatedSeries::exp_letter(Letter::Zero, c(0.0, 2.0 * PI), 2);
        assert!(s.max_diff(&expected) < 1e-9);
    }

    #[test]
    fn path_and_reverse_cancel() {
        let p = make_path(&json!({"waypoints": [[0.2, 0.3], [1.5, 0.5], [0.8, -0.7]]})).unwrap();
        let q = p.then(&p.reversed()).unwrap();
        let s = signature(&q, 3, &cfg()).unwrap();
        assert!(s.max_diff(&TruncatedSeries::identity(3)) < 1e-9);
    }

    #[test]
    fn regularized_values_at_one_half() {
        let s = regularized_signature(c(0.5, 0.0), 2, &cfg(), &GroupWord::identity()).unwrap();
        let ln2 = 2f64.ln();
        assert!((s.coefficient(&word("0")) - c(-ln2, 0.0)).norm() < 1e-9);
        assert!((s.coefficient(&word("1")) - c(ln2, 0.0)).norm() < 1e-9);
        assert!((s.coefficient(&word("10")) - c(PI * PI / 12.0 - ln2 * ln2 / 2.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn loop_prefix_shifts_logarithm() {
        let x = c(0.3, 0.2);
        let plain = regularized_signature(x, 2, &cfg(), &GroupWord::identity()).unwrap();
        let looped = regularized_signature(x, 2, &cfg(), &"0".parse().unwrap()).unwrap();
        let d0 = looped.coefficient(&word("0")) - plain.coefficient(&word("0"));
        let d1 = looped.coefficient(&word("1")) - plain.coefficient(&word("1"));
        assert!((d0 - c(0.0, 2.0 * PI)).norm() < 1e-9);
        assert!(d1.norm() < 1e-9);
    }

    #[test]
    fn monodromy_of_the_generators() {
        let base = regularized_signature(c(0.5, 0.0), 2, &cfg(), &GroupWord::identity()).unwrap();
        let m0 = monodromy_matrix(&gamma0(1), &base, &cfg()).unwrap();
        assert_eq!(m0.g, IntegerUnipotent::new(1, 0, 0));
        assert!(m0.max_deviation < 1e-6);
        let m1 = monodromy_matrix(&gamma1(1), &base, &cfg()).unwrap();
        assert_eq!(m1.g, IntegerUnipotent::new(0, -1, 0));
        let triv = monodromy_matrix(&Path::constant(), &base, &cfg()).unwrap();
        assert_eq!(triv.g, IntegerUnipotent::identity());
    }

    #[test]
    fn approaching_zero_kills_nonempty_words() {
        let s = regularized_signature(c(1e-8, 0.0), 2, &cfg(), &GroupWord::identity()).unwrap();
        // ω₀ gives log x, which does not vanish; ω₁ and ω₁ω₀ do
        assert!(s.coefficient(&word("1")).norm() < 1e-7);
        assert!(s.coefficient(&word("10")).norm() < 1e-7);
    }
}
