//! Paths in `ℂ ∖ {0, 1}` and the iterated integrals of `ω₀ = dx/x`,
//! `ω₁ = dx/(1-x)` along them.
//!
//! A [`Path`] is a chain of [`Step`]s. Ordinary steps are smooth
//! [`Segment`]s; a [`Step::Depart`] leaves a puncture along a tangent vector
//! and a [`Step::Arrive`] comes back to one, so loops can be based at a
//! tangential base point.

mod quadrature;
mod series;
mod signature;
mod tangential;

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde_json::Value;
use thiserror::Error;

use crate::json::{parse_complex, ComplexParseError};
use crate::malcev::GroupWord;
use crate::words::Letter;

pub use quadrature::PanelRule;
pub use series::{compose_signatures, TruncatedSeries};
pub use signature::{
    iterated_integral, monodromy_matrix, regularized_signature, signature,
    signature_with_estimate, IteratedIntegral, MonodromyMatrix,
};

/// Closest a segment may come to a puncture.
pub const MIN_CLEARANCE: f64 = 1e-9;

/// Tolerance for matching consecutive endpoints.
const JOIN_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PathError {
    #[error("signature levels differ: {0} vs {1}")]
    LevelMismatch(usize, usize),
    #[error("quadrature did not converge within {0} subdivisions")]
    NotConverged(usize),
    #[error("regularized values spread by {spread:e} across the regularization radii")]
    NotStabilized { spread: f64 },
    #[error("waypoint {0} is a puncture")]
    WaypointIsPuncture(String),
    #[error("step {0} does not start where the previous step ends")]
    Disconnected(usize),
    #[error("step {step} passes within {distance:e} of a puncture")]
    TooClose { step: usize, distance: f64 },
    #[error("invalid path spec: {0}")]
    InvalidSpec(String),
    #[error("invalid quadrature config: {0}")]
    InvalidConfig(String),
    #[error("monodromy entry {entry} = {value} is not close to an integer")]
    NonIntegral { entry: &'static str, value: f64 },
    #[error("loop must start and end at the tangential base point")]
    NotALoop,
    #[error(transparent)]
    Complex(#[from] ComplexParseError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Decreasing regularization radii near tangential base points.
    pub regularization_epsilons: Vec<f64>,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-10,
            max_subdivisions: 20_000,
            regularization_epsilons: vec![1e-3, 1e-4, 1e-5, 1e-6],
        }
    }
}

impl QuadratureConfig {
    pub fn with_tol(abs_tol: f64) -> Self {
        QuadratureConfig {
            abs_tol,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), PathError> {
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(PathError::InvalidConfig(format!("abs_tol = {}", self.abs_tol)));
        }
        if self.max_subdivisions == 0 {
            return Err(PathError::InvalidConfig("max_subdivisions = 0".into()));
        }
        let eps = &self.regularization_epsilons;
        if eps.is_empty() || eps.iter().any(|e| !(*e > 0.0)) {
            return Err(PathError::InvalidConfig("epsilons must be positive".into()));
        }
        if eps.windows(2).any(|w| w[1] >= w[0]) {
            return Err(PathError::InvalidConfig("epsilons must strictly decrease".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Puncture {
    Zero,
    One,
}

impl Puncture {
    pub fn point(self) -> Complex64 {
        match self {
            Puncture::Zero => Complex64::new(0.0, 0.0),
            Puncture::One => Complex64::new(1.0, 0.0),
        }
    }

    pub fn letter(self) -> Letter {
        match self {
            Puncture::Zero => Letter::Zero,
            Puncture::One => Letter::One,
        }
    }
}

fn distance_to_punctures(z: Complex64) -> f64 {
    z.norm().min((z - 1.0).norm())
}

/// Start or end of a path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Anchor {
    Point(Complex64),
    Tangential { puncture: Puncture, vector: Complex64 },
}

impl Anchor {
    fn matches(&self, other: &Anchor) -> bool {
        match (self, other) {
            (Anchor::Point(a), Anchor::Point(b)) => (a - b).norm() <= JOIN_TOL * (1.0 + a.norm()),
            (
                Anchor::Tangential { puncture: p, vector: v },
                Anchor::Tangential { puncture: q, vector: w },
            ) => p == q && (v - w).norm() <= JOIN_TOL * v.norm(),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Segment {
    Line {
        from: Complex64,
        to: Complex64,
    },
    Arc {
        center: Complex64,
        radius: f64,
        start_angle: f64,
        sweep: f64,
    },
    /// `inner` traversed with the parameter `t + κ sin(2πt)/(2π)`, `|κ| < 1`.
    Warped { inner: Box<Segment>, kappa: f64 },
}

impl Segment {
    pub fn point(&self, t: f64) -> Complex64 {
        match self {
            Segment::Line { from, to } => from + (to - from) * t,
            Segment::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => center + Complex64::from_polar(*radius, start_angle + sweep * t),
            Segment::Warped { inner, kappa } => inner.point(warp(t, *kappa).0),
        }
    }

    pub fn derivative(&self, t: f64) -> Complex64 {
        match self {
            Segment::Line { from, to } => to - from,
            Segment::Arc {
                radius,
                start_angle,
                sweep,
                ..
            } => Complex64::i() * sweep * Complex64::from_polar(*radius, start_angle + sweep * t),
            Segment::Warped { inner, kappa } => {
                let (s, ds) = warp(t, *kappa);
                inner.derivative(s) * ds
            }
        }
    }

    pub fn start(&self) -> Complex64 {
        self.point(0.0)
    }

    pub fn end(&self) -> Complex64 {
        self.point(1.0)
    }

    pub fn reversed(&self) -> Segment {
        match self {
            Segment::Line { from, to } => Segment::Line { from: *to, to: *from },
            Segment::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => Segment::Arc {
                center: *center,
                radius: *radius,
                start_angle: start_angle + sweep,
                sweep: -sweep,
            },
            Segment::Warped { inner, kappa } => Segment::Warped {
                inner: Box::new(inner.reversed()),
                kappa: *kappa,
            },
        }
    }

    /// Smallest distance from the trace to `{0, 1}`.
    pub fn clearance(&self) -> f64 {
        match self {
            Segment::Line { from, to } => {
                let d = to - from;
                let len2 = d.norm_sqr();
                [Puncture::Zero, Puncture::One]
                    .iter()
                    .map(|p| {
                        let t = if len2 == 0.0 {
                            0.0
                        } else {
                            ((p.point() - from) * d.conj()).re / len2
                        };
                        (self.point(t.clamp(0.0, 1.0)) - p.point()).norm()
                    })
                    .fold(f64::INFINITY, f64::min)
            }
            Segment::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => [Puncture::Zero, Puncture::One]
                .iter()
                .map(|p| {
                    let rel = p.point() - center;
                    if rel.norm() == 0.0 {
                        return *radius;
                    }
                    // closest point on the full circle, if the arc reaches it
                    let angle = rel.arg();
                    let mut best = (self.start() - p.point()).norm().min((self.end() - p.point()).norm());
                    let (lo, hi) = if *sweep >= 0.0 {
                        (*start_angle, start_angle + sweep)
                    } else {
                        (start_angle + sweep, *start_angle)
                    };
                    let mut a = angle + 2.0 * PI * ((lo - angle) / (2.0 * PI)).ceil();
                    while a <= hi {
                        best = best.min((rel.norm() - radius).abs());
                        a += 2.0 * PI;
                    }
                    best
                })
                .fold(f64::INFINITY, f64::min),
            Segment::Warped { inner, .. } => inner.clearance(),
        }
    }
}

fn warp(t: f64, kappa: f64) -> (f64, f64) {
    let s = t + kappa * (2.0 * PI * t).sin() / (2.0 * PI);
    let ds = 1.0 + kappa * (2.0 * PI * t).cos();
    (s, ds)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    Segment(Segment),
    /// Straight path from the tangential base point `(puncture, vector)` to
    /// `to`.
    Depart {
        puncture: Puncture,
        vector: Complex64,
        to: Complex64,
    },
    /// Straight path from `from` into the tangential base point
    /// `(puncture, vector)`; the reverse of a `Depart`.
    Arrive {
        from: Complex64,
        puncture: Puncture,
        vector: Complex64,
    },
}

impl Step {
    pub fn start(&self) -> Anchor {
        match self {
            Step::Segment(s) => Anchor::Point(s.start()),
            Step::Depart { puncture, vector, .. } => Anchor::Tangential {
                puncture: *puncture,
                vector: *vector,
            },
            Step::Arrive { from, .. } => Anchor::Point(*from),
        }
    }

    pub fn end(&self) -> Anchor {
        match self {
            Step::Segment(s) => Anchor::Point(s.end()),
            Step::Depart { to, .. } => Anchor::Point(*to),
            Step::Arrive { puncture, vector, .. } => Anchor::Tangential {
                puncture: *puncture,
                vector: *vector,
            },
        }
    }

    pub fn reversed(&self) -> Step {
        match self {
            Step::Segment(s) => Step::Segment(s.reversed()),
            Step::Depart { puncture, vector, to } => Step::Arrive {
                from: *to,
                puncture: *puncture,
                vector: *vector,
            },
            Step::Arrive { from, puncture, vector } => Step::Depart {
                puncture: *puncture,
                vector: *vector,
                to: *from,
            },
        }
    }
}

/// A validated chain of steps. The empty path is the constant path.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Path {
    steps: Vec<Step>,
}

impl Path {
    pub fn constant() -> Path {
        Path::default()
    }

    pub fn new(steps: Vec<Step>) -> Result<Path, PathError> {
        for (i, step) in steps.iter().enumerate() {
            check_step(i, step)?;
            if i > 0 && !steps[i - 1].end().matches(&step.start()) {
                return Err(PathError::Disconnected(i));
            }
        }
        Ok(Path { steps })
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn start(&self) -> Option<Anchor> {
        self.steps.first().map(Step::start)
    }

    pub fn end(&self) -> Option<Anchor> {
        self.steps.last().map(Step::end)
    }

    pub fn is_closed(&self) -> bool {
        match (self.start(), self.end()) {
            (Some(a), Some(b)) => a.matches(&b),
            _ => true,
        }
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Path) -> Result<Path, PathError> {
        let mut steps = self.steps.clone();
        steps.extend(other.steps.iter().cloned());
        Path::new(steps)
    }

    pub fn reversed(&self) -> Path {
        Path {
            steps: self.steps.iter().rev().map(Step::reversed).collect(),
        }
    }

    /// Every segment reparametrized by `t + κ sin(2πt)/(2π)` with `κ` drawn
    /// from `kappas` cyclically.
    pub fn reparametrized(&self, kappas: &[f64]) -> Path {
        let mut k = kappas.iter().cycle();
        Path {
            steps: self
                .steps
                .iter()
                .map(|s| match s {
                    Step::Segment(seg) => Step::Segment(Segment::Warped {
                        inner: Box::new(seg.clone()),
                        kappa: *k.next().unwrap_or(&0.0),
                    }),
                    other => other.clone(),
                })
                .collect(),
        }
    }

    /// Splits segment `index` at parameter `t` into two warped-free pieces;
    /// returns the path up to the split point and the rest.
    pub fn split_at(&self, index: usize, t: f64) -> Option<(Path, Path)> {
        let Step::Segment(seg) = self.steps.get(index)? else {
            return None;
        };
        let (a, b) = split_segment(seg, t)?;
        let mut head = self.steps[..index].to_vec();
        head.push(Step::Segment(a));
        let mut tail = vec![Step::Segment(b)];
        tail.extend(self.steps[index + 1..].iter().cloned());
        Some((Path { steps: head }, Path { steps: tail }))
    }
}

fn split_segment(seg: &Segment, t: f64) -> Option<(Segment, Segment)> {
    match seg {
        Segment::Line { from, to } => {
            let m = seg.point(t);
            Some((Segment::Line { from: *from, to: m }, Segment::Line { from: m, to: *to }))
        }
        Segment::Arc {
            center,
            radius,
            start_angle,
            sweep,
        } => Some((
            Segment::Arc {
                center: *center,
                radius: *radius,
                start_angle: *start_angle,
                sweep: sweep * t,
            },
            Segment::Arc {
                center: *center,
                radius: *radius,
                start_angle: start_angle + sweep * t,
                sweep: sweep * (1.0 - t),
            },
        )),
        Segment::Warped { .. } => None,
    }
}

fn check_step(i: usize, step: &Step) -> Result<(), PathError> {
    match step {
        Step::Segment(seg) => {
            if let Segment::Warped { kappa, .. } = seg {
                if kappa.abs() >= 1.0 {
                    return Err(PathError::InvalidSpec(format!("warp κ = {kappa} not in (-1, 1)")));
                }
            }
            let d = seg.clearance();
            if d < MIN_CLEARANCE {
                return Err(PathError::TooClose { step: i, distance: d });
            }
        }
        Step::Depart { puncture, vector, to } | Step::Arrive { from: to, puncture, vector } => {
            if vector.norm() == 0.0 || !vector.is_finite() {
                return Err(PathError::InvalidSpec("tangent vector must be nonzero".into()));
            }
            if distance_to_punctures(*to) < MIN_CLEARANCE {
                return Err(PathError::WaypointIsPuncture(format!("{to}")));
            }
            let line = Segment::Line {
                from: puncture.point(),
                to: *to,
            };
            // the straight piece may only touch its own puncture
            let other = match puncture {
                Puncture::Zero => Puncture::One,
                Puncture::One => Puncture::Zero,
            };
            let d = (line.point(
                (((other.point() - puncture.point()) * (to - puncture.point()).conj()).re
                    / (to - puncture.point()).norm_sqr())
                .clamp(0.0, 1.0),
            ) - other.point())
            .norm();
            if d < MIN_CLEARANCE {
                return Err(PathError::TooClose { step: i, distance: d });
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Named paths

/// The tangential base point `(0, v = 1)`.
pub const BASE_VECTOR: Complex64 = Complex64::new(1.0, 0.0);

const LOOP_RADIUS: f64 = 0.5;

/// Loop based at `(0, 1)` going `turns` times counterclockwise around `0`.
pub fn gamma0(turns: i64) -> Path {
    if turns == 0 {
        return Path::constant();
    }
    let p = Complex64::new(LOOP_RADIUS, 0.0);
    Path {
        steps: vec![
            Step::Depart {
                puncture: Puncture::Zero,
                vector: BASE_VECTOR,
                to: p,
            },
            Step::Segment(Segment::Arc {
                center: Complex64::new(0.0, 0.0),
                radius: LOOP_RADIUS,
                start_angle: 0.0,
                sweep: 2.0 * PI * turns as f64,
            }),
            Step::Arrive {
                from: p,
                puncture: Puncture::Zero,
                vector: BASE_VECTOR,
            },
        ],
    }
}

/// Loop based at `(0, 1)` running out to `1/2`, `turns` times
/// counterclockwise around `1`, and back.
pub fn gamma1(turns: i64) -> Path {
    if turns == 0 {
        return Path::constant();
    }
    let p = Complex64::new(LOOP_RADIUS, 0.0);
    Path {
        steps: vec![
            Step::Depart {
                puncture: Puncture::Zero,
                vector: BASE_VECTOR,
                to: p,
            },
            Step::Segment(Segment::Arc {
                center: Complex64::new(1.0, 0.0),
                radius: LOOP_RADIUS,
                start_angle: PI,
                sweep: 2.0 * PI * turns as f64,
            }),
            Step::Arrive {
                from: p,
                puncture: Puncture::Zero,
                vector: BASE_VECTOR,
            },
        ],
    }
}

/// The loop of a word in `γ₀`, `γ₁`, read left to right.
pub fn loop_path(word: &GroupWord) -> Path {
    let mut steps = Vec::new();
    for &(l, e) in word.syllables() {
        let p = match l {
            Letter::Zero => gamma0(e),
            Letter::One => gamma1(e),
        };
        steps.extend(p.steps);
    }
    Path { steps }
}

/// Path from `(0, 1)` to `x` used for the principal branches: straight when
/// that avoids the real rays `(-∞, 0]` and `[1, ∞)`, otherwise through the
/// upper half plane.
pub fn standard_path(x: Complex64) -> Result<Path, PathError> {
    if distance_to_punctures(x) < MIN_CLEARANCE {
        return Err(PathError::WaypointIsPuncture(format!("{x}")));
    }
    let depart = |to| Step::Depart {
        puncture: Puncture::Zero,
        vector: BASE_VECTOR,
        to,
    };
    let on_cut = x.im == 0.0 && (x.re < 0.0 || x.re > 1.0);
    if !on_cut {
        return Path::new(vec![depart(x)]);
    }
    let via = if x.re < 0.0 {
        Complex64::new(0.0, x.re.abs() / 2.0)
    } else {
        Complex64::new(0.5, 0.5)
    };
    Path::new(vec![depart(via), Step::Segment(Segment::Line { from: via, to: x })])
}

/// `loop_path(word)` followed by `standard_path(x)`.
pub fn path_to(x: Complex64, word: &GroupWord) -> Result<Path, PathError> {
    loop_path(word).then(&standard_path(x)?)
}

/// Random closed-or-open interior path: a chain of lines and arcs through
/// points of `[-1.5, 2.5] × [-1.5, 1.5]` that keeps `clearance` from the
/// punctures.
pub fn random_interior_path<R: Rng>(rng: &mut R, segments: usize, clearance: f64) -> Path {
    let sample_point = |rng: &mut R| loop {
        let z = Complex64::new(rng.gen_range(-1.5..2.5), rng.gen_range(-1.5..1.5));
        if distance_to_punctures(z) > 2.0 * clearance {
            return z;
        }
    };
    let mut current = sample_point(rng);
    let mut steps = Vec::with_capacity(segments);
    while steps.len() < segments {
        let seg = if rng.gen_bool(0.6) {
            Segment::Line {
                from: current,
                to: sample_point(rng),
            }
        } else {
            let radius = rng.gen_range(0.2..1.0);
            let start_angle = rng.gen_range(0.0..2.0 * PI);
            let center = current - Complex64::from_polar(radius, start_angle);
            Segment::Arc {
                center,
                radius,
                start_angle,
                sweep: rng.gen_range(-1.5 * PI..1.5 * PI),
            }
        };
        if seg.clearance() > clearance {
            current = seg.end();
            steps.push(Step::Segment(seg));
        }
    }
    Path { steps }
}

// ---------------------------------------------------------------------------
// JSON path specs

fn spec_err(msg: impl Into<String>) -> PathError {
    PathError::InvalidSpec(msg.into())
}

fn parse_puncture(v: &Value) -> Result<Puncture, PathError> {
    match v.as_f64() {
        Some(x) if x == 0.0 => Ok(Puncture::Zero),
        Some(x) if x == 1.0 => Ok(Puncture::One),
        _ => Err(spec_err(format!("tangential anchor must sit at 0 or 1, got {v}"))),
    }
}

fn parse_tangential(v: &Value) -> Result<(Puncture, Complex64), PathError> {
    let at = v.get("at").ok_or_else(|| spec_err("tangential anchor needs \"at\""))?;
    let vector = match v.get("vector") {
        Some(x) => parse_complex(x)?,
        None => BASE_VECTOR,
    };
    Ok((parse_puncture(at)?, vector))
}

fn get_turns(v: &Value) -> Result<i64, PathError> {
    match v.get("turns") {
        None => Ok(1),
        Some(t) => t.as_i64().ok_or_else(|| spec_err("turns must be an integer")),
    }
}

/// Builds a path from its JSON description:
///
/// * `{"waypoints": [z, …]}` with optional `"tangential_start"` /
///   `"tangential_end"` anchors `{"at": 0|1, "vector": [re, im]}`,
/// * `{"loop": "gamma0"|"gamma1", "turns": k}`,
/// * `{"circle": {"center": z, "radius": r, "turns": k}}`,
/// * `{"compose": [spec, …]}`.
///
/// Points may be numbers, `[re, im]` pairs or strings like `"1+2i"`.
pub fn make_path(spec: &Value) -> Result<Path, PathError> {
    if let Some(name) = spec.get("loop") {
        let turns = get_turns(spec)?;
        return match name.as_str() {
            Some("gamma0") => Ok(gamma0(turns)),
            Some("gamma1") => Ok(gamma1(turns)),
            _ => Err(spec_err(format!("unknown loop {name}"))),
        };
    }
    if let Some(parts) = spec.get("compose") {
        let parts = parts.as_array().ok_or_else(|| spec_err("compose must be a list"))?;
        let mut path = Path::constant();
        for p in parts {
            path = path.then(&make_path(p)?)?;
        }
        return Ok(path);
    }
    if let Some(c) = spec.get("circle") {
        let center = parse_complex(c.get("center").unwrap_or(&Value::from(0.0)))?;
        let radius = c
            .get("radius")
            .and_then(Value::as_f64)
            .filter(|r| *r > 0.0)
            .ok_or_else(|| spec_err("circle needs a positive radius"))?;
        let turns = get_turns(c)?;
        let start_angle = c.get("start_angle").and_then(Value::as_f64).unwrap_or(0.0);
        return Path::new(vec![Step::Segment(Segment::Arc {
            center,
            radius,
            start_angle,
            sweep: 2.0 * PI * turns as f64,
        })]);
    }
    let points = spec
        .get("waypoints")
        .and_then(Value::as_array)
        .ok_or_else(|| spec_err("expected one of waypoints, loop, circle, compose"))?
        .iter()
        .map(parse_complex)
        .collect::<Result<Vec<_>, _>>()?;
    if points.is_empty() {
        return Err(spec_err("waypoints must be nonempty"));
    }
    for z in &points {
        if distance_to_punctures(*z) < MIN_CLEARANCE {
            return Err(PathError::WaypointIsPuncture(format!("{z}")));
        }
    }
    let mut steps = Vec::new();
    if let Some(t) = spec.get("tangential_start") {
        let (puncture, vector) = parse_tangential(t)?;
        steps.push(Step::Depart {
            puncture,
            vector,
            to: points[0],
        });
    }
    for w in points.windows(2) {
        steps.push(Step::Segment(Segment::Line { from: w[0], to: w[1] }));
    }
    if let Some(t) = spec.get("tangential_end") {
        let (puncture, vector) = parse_tangential(t)?;
        steps.push(Step::Arrive {
            from: points[points.len() - 1],
            puncture,
            vector,
        });
    }
    Path::new(steps)
}

/// Winding numbers of a closed path about `0` and `1`, read off its level-1
/// signature.
pub fn winding_numbers(path: &Path, cfg: &QuadratureConfig) -> Result<(f64, f64), PathError> {
    let s = signature(path, 1, cfg)?;
    let w0 = s.coefficient(&crate::words::Word::letter(Letter::Zero)).im / (2.0 * PI);
    let w1 = -s.coefficient(&crate::words::Word::letter(Letter::One)).im / (2.0 * PI);
    Ok((w0, w1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn named_loop_winds_once_about_zero() {
        let p = make_path(&json!({"loop": "gamma0", "turns": 1})).unwrap();
        assert!(p.is_closed());
        let (w0, w1) = winding_numbers(&p, &QuadratureConfig::default()).unwrap();
        assert!((w0 - 1.0).abs() < 1e-9);
        assert!(w1.abs() < 1e-9);
        let (w0, w1) = winding_numbers(&gamma1(2), &QuadratureConfig::default()).unwrap();
        assert!(w0.abs() < 1e-9);
        assert!((w1 - 2.0).abs() < 1e-9);
    }

    #[test]
    fn waypoints_on_real_axis() {
        let p = make_path(&json!({"waypoints": [0.25, 0.5]})).unwrap();
        assert_eq!(p.steps().len(), 1);
        assert_eq!(
            p.steps()[0],
            Step::Segment(Segment::Line {
                from: Complex64::new(0.25, 0.0),
                to: Complex64::new(0.5, 0.0)
            })
        );
    }

    #[test]
    fn puncture_waypoint_is_rejected() {
        assert!(matches!(
            make_path(&json!({"waypoints": [0.5, 1.0]})),
            Err(PathError::WaypointIsPuncture(_))
        ));
        assert!(matches!(
            make_path(&json!({"waypoints": [-0.5, 0.5]})),
            Err(PathError::TooClose { .. })
        ));
    }

    #[test]
    fn disconnected_steps_are_rejected() {
        let a = Step::Segment(Segment::Line {
            from: Complex64::new(0.25, 0.0),
            to: Complex64::new(0.5, 0.0),
        });
        let b = Step::Segment(Segment::Line {
            from: Complex64::new(0.5, 0.1),
            to: Complex64::new(0.5, 0.5),
        });
        assert_eq!(Path::new(vec![a, b]), Err(PathError::Disconnected(1)));
    }

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig::default().validate().is_ok());
        assert!(QuadratureConfig::with_tol(0.0).validate().is_err());
        let mut c = QuadratureConfig::default();
        c.regularization_epsilons = vec![1e-3, 1e-3];
        assert!(c.validate().is_err());
    }

    #[test]
    fn arc_clearance() {
        let arc = Segment::Arc {
            center: Complex64::new(0.0, 0.0),
            radius: 1.0,
            start_angle: 0.5,
            sweep: 1.0,
        };
        // closest approach to 1 is the start point
        let d = (Complex64::from_polar(1.0, 0.5) - 1.0).norm();
        assert!((arc.clearance() - d.min(1.0)).abs() < 1e-15);
        let full = Segment::Arc {
            center: Complex64::new(0.0, 0.0),
            radius: 1.0,
            start_angle: 0.5,
            sweep: 2.0 * PI,
        };
        assert!(full.clearance() < 1e-15);
    }

    #[test]
    fn standard_paths_avoid_cuts() {
        for x in [-2.0, -1e-3, 3.0, 0.5] {
            let p = standard_path(Complex64::new(x, 0.0)).unwrap();
            assert!(matches!(p.end(), Some(Anchor::Point(z)) if (z - x).norm() < 1e-15));
        }
        assert!(standard_path(Complex64::new(1.0, 0.0)).is_err());
    }
}
