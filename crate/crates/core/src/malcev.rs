//! Exact truncated tensor algebra on two letters `e₀`, `e₁`.
//!
//! This is the completed group ring of the free group on `γ₀, γ₁` through
//! `γ_i ↦ exp(e_i)`, truncated at level `r`. Group-like elements are the
//! images of group elements (and their Malcev completion); primitive
//! elements form the free nilpotent Lie algebra of class `r`.
//!
//! The coproduct is the one making the letters primitive (unshuffle), which
//! corresponds to `Δ(γ) = γ ⊗ γ` on the group ring.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::linalg::{rank, solve, Matrix};
use crate::words::{format_rational, parse_rational, words_of_length, Letter, Word, WordError};

/// Largest level the crate documents performance for.
pub const DEFAULT_MAX_LEVEL: usize = 6;

/// For the second higher Albanese manifold of the thrice-punctured line the
/// Hodge filtration step `F⁰` of the unipotent group is trivial, so the
/// Albanese manifold is the plain quotient `Γ \ 𝒢(ℂ)`.
pub const F0_SUBGROUP_IS_TRIVIAL: bool = true;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MalcevError {
    #[error("exp needs a series with zero constant term")]
    NonzeroConstantTerm,
    #[error("log needs a series with constant term 1")]
    ConstantTermNotOne,
    #[error("series levels differ ({0} vs {1})")]
    LevelMismatch(usize, usize),
    #[error("word {word} is longer than the truncation level {level}")]
    WordTooLong { word: String, level: usize },
    #[error("element is not primitive (not a Lie element)")]
    NotPrimitive,
    #[error("level must be at least 1")]
    ZeroLevel,
    #[error("bad group word {0:?}")]
    BadGroupWord(String),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Element of the tensor algebra on `e₀, e₁` truncated above degree `level`,
/// with exact rational coefficients stored densely in shortlex word order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactSeries {
    level: usize,
    coeffs: Vec<BigRational>,
}

fn basis_len(level: usize) -> usize {
    (1usize << (level + 1)) - 1
}

fn start_of_length(k: usize) -> usize {
    (1usize << k) - 1
}

impl ExactSeries {
    pub fn zero(level: usize) -> Self {
        ExactSeries {
            level,
            coeffs: vec![BigRational::zero(); basis_len(level)],
        }
    }

    pub fn one(level: usize) -> Self {
        let mut s = Self::zero(level);
        s.coeffs[0] = BigRational::one();
        s
    }

    pub fn letter(l: Letter, level: usize) -> Self {
        let mut s = Self::zero(level);
        if level >= 1 {
            s.coeffs[Word::letter(l).index()] = BigRational::one();
        }
        s
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn coefficient(&self, w: &Word) -> BigRational {
        if w.len() > self.level {
            return BigRational::zero();
        }
        self.coeffs[w.index()].clone()
    }

    pub fn set(&mut self, w: &Word, c: BigRational) -> Result<(), MalcevError> {
        if w.len() > self.level {
            return Err(MalcevError::WordTooLong {
                word: w.to_string(),
                level: self.level,
            });
        }
        self.coeffs[w.index()] = c;
        Ok(())
    }

    /// Nonzero terms in shortlex order.
    pub fn terms(&self) -> impl Iterator<Item = (Word, &BigRational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (Word::from_index(i), c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn constant_term(&self) -> &BigRational {
        &self.coeffs[0]
    }

    /// Part of homogeneous degree `k`.
    pub fn homogeneous(&self, k: usize) -> ExactSeries {
        let mut out = Self::zero(self.level);
        if k <= self.level {
            let s = start_of_length(k);
            out.coeffs[s..s + (1 << k)].clone_from_slice(&self.coeffs[s..s + (1 << k)]);
        }
        out
    }

    /// Re-truncates to a different level (padding with zeros when raising).
    pub fn with_level(&self, level: usize) -> ExactSeries {
        let mut out = Self::zero(level);
        let n = basis_len(level.min(self.level));
        out.coeffs[..n].clone_from_slice(&self.coeffs[..n]);
        out
    }

    fn check_level(&self, other: &ExactSeries) -> Result<(), MalcevError> {
        if self.level != other.level {
            Err(MalcevError::LevelMismatch(self.level, other.level))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &ExactSeries) -> Result<ExactSeries, MalcevError> {
        self.check_level(other)?;
        Ok(ExactSeries {
            level: self.level,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &ExactSeries) -> Result<ExactSeries, MalcevError> {
        self.check_level(other)?;
        Ok(ExactSeries {
            level: self.level,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, c: &BigRational) -> ExactSeries {
        ExactSeries {
            level: self.level,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Truncated concatenation product.
    pub fn mul(&self, other: &ExactSeries) -> Result<ExactSeries, MalcevError> {
        self.check_level(other)?;
        let r = self.level;
        let mut out = Self::zero(r);
        for la in 0..=r {
            let sa = start_of_length(la);
            for ia in 0..(1usize << la) {
                let a = &self.coeffs[sa + ia];
                if a.is_zero() {
                    continue;
                }
                for lb in 0..=(r - la) {
                    let sb = start_of_length(lb);
                    let so = start_of_length(la + lb);
                    for ib in 0..(1usize << lb) {
                        let b = &other.coeffs[sb + ib];
                        if b.is_zero() {
                            continue;
                        }
                        out.coeffs[so + ((ia << lb) | ib)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `[a, b] = ab - ba`.
    pub fn bracket(&self, other: &ExactSeries) -> Result<ExactSeries, MalcevError> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn to_map(&self) -> BTreeMap<String, String> {
        self.terms()
            .map(|(w, c)| (w.to_string(), format_rational(c)))
            .collect()
    }

    pub fn from_map(map: &BTreeMap<String, String>, level: usize) -> Result<Self, MalcevError> {
        let mut s = Self::zero(level);
        for (w, c) in map {
            let word: Word = w.parse()?;
            let c = parse_rational(c)?;
            let cur = s.coefficient(&word);
            s.set(&word, cur + c)?;
        }
        Ok(s)
    }
}

impl Serialize for ExactSeries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_map().serialize(s)
    }
}

/// `Σ_{k≤r} h^k / k!`.
pub fn exp_trunc(h: &ExactSeries) -> Result<ExactSeries, MalcevError> {
    if !h.constant_term().is_zero() {
        return Err(MalcevError::NonzeroConstantTerm);
    }
    let mut out = ExactSeries::one(h.level);
    let mut power = ExactSeries::one(h.level);
    for k in 1..=h.level {
        power = power.mul(h)?;
        let inv_fact = BigRational::new(One::one(), factorial(k));
        out = out.add(&power.scale(&inv_fact))?;
    }
    Ok(out)
}

/// `Σ_{k≤r} (-1)^{k+1} (g - 1)^k / k`.
pub fn log_trunc(g: &ExactSeries) -> Result<ExactSeries, MalcevError> {
    if !g.constant_term().is_one() {
        return Err(MalcevError::ConstantTermNotOne);
    }
    let x = g.sub(&ExactSeries::one(g.level))?;
    let mut out = ExactSeries::zero(g.level);
    let mut power = ExactSeries::one(g.level);
    for k in 1..=g.level {
        power = power.mul(&x)?;
        let sign = if k % 2 == 1 { 1 } else { -1 };
        out = out.add(&power.scale(&BigRational::new(sign.into(), (k as i64).into())))?;
    }
    Ok(out)
}

fn factorial(k: usize) -> num_bigint::BigInt {
    (1..=k as u64).fold(num_bigint::BigInt::one(), |acc, i| acc * i)
}

/// Unshuffle coproduct of a single word: all ways to split its letters into
/// two complementary subsequences.
pub fn unshuffle(w: &Word) -> Vec<(Word, Word)> {
    let n = w.len();
    (0..(1usize << n))
        .map(|mask| {
            let (mut a, mut b) = (Vec::new(), Vec::new());
            for (i, &l) in w.letters().iter().enumerate() {
                if mask >> i & 1 == 1 {
                    a.push(l);
                } else {
                    b.push(l);
                }
            }
            (Word::new(a), Word::new(b))
        })
        .collect()
}

type TensorSquare = BTreeMap<(Word, Word), BigRational>;

fn insert(t: &mut TensorSquare, key: (Word, Word), c: BigRational) {
    if c.is_zero() {
        return;
    }
    let e = t.entry(key).or_insert_with(BigRational::zero);
    *e += c;
}

fn cleaned(t: TensorSquare) -> TensorSquare {
    t.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// `Δ(h)` truncated to total degree `≤ level`.
pub fn coproduct(h: &ExactSeries) -> TensorSquare {
    let mut t = TensorSquare::new();
    for (w, c) in h.terms() {
        for pair in unshuffle(&w) {
            insert(&mut t, pair, c.clone());
        }
    }
    cleaned(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CoproductClass {
    Primitive,
    Grouplike,
    Neither,
}

/// Decides whether `Δh = h⊗1 + 1⊗h` or `Δh = h⊗h` (within the truncation).
pub fn classify_coproduct(h: &ExactSeries) -> CoproductClass {
    let delta = coproduct(h);
    let empty = Word::empty();

    let mut prim = TensorSquare::new();
    for (w, c) in h.terms() {
        insert(&mut prim, (w.clone(), empty.clone()), c.clone());
        insert(&mut prim, (empty.clone(), w), c.clone());
    }
    if delta == cleaned(prim) {
        return CoproductClass::Primitive;
    }

    if h.constant_term().is_one() {
        let mut sq = TensorSquare::new();
        let terms: Vec<_> = h.terms().collect();
        for (u, cu) in &terms {
            for (v, cv) in &terms {
                if u.len() + v.len() <= h.level {
                    insert(&mut sq, (u.clone(), v.clone()), *cu * *cv);
                }
            }
        }
        if delta == cleaned(sq) {
            return CoproductClass::Grouplike;
        }
    }
    CoproductClass::Neither
}

pub fn is_primitive(h: &ExactSeries) -> bool {
    classify_coproduct(h) == CoproductClass::Primitive
}

/// `log(exp(A) exp(B))` for primitive `A`, `B`.
pub fn bch(a: &ExactSeries, b: &ExactSeries) -> Result<ExactSeries, MalcevError> {
    a.check_level(b)?;
    if !is_primitive(a) || !is_primitive(b) {
        return Err(MalcevError::NotPrimitive);
    }
    log_trunc(&exp_trunc(a)?.mul(&exp_trunc(b)?)?)
}

// ---------------------------------------------------------------------------
// Lyndon (Hall) basis

/// Lyndon words of length exactly `n` over `{0 < 1}`, in lexicographic order
/// (Duval's generation algorithm).
pub fn lyndon_words(n: usize) -> Vec<Word> {
    if n == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut w: Vec<usize> = vec![0];
    loop {
        if w.len() == n {
            out.push(Word::new(w.iter().map(|&i| Letter::from_index(i)).collect()));
        }
        // extend periodically to length n
        let m = w.len();
        while w.len() < n {
            let c = w[w.len() - m];
            w.push(c);
        }
        while let Some(&last) = w.last() {
            if last == 1 {
                w.pop();
            } else {
                break;
            }
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
    out
}

fn is_lyndon(w: &[Letter]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w[i..] > *w)
}

/// Standard bracketing of a Lyndon word, e.g. `001 ↦ [0,[0,1]]`.
pub fn standard_bracketing(w: &Word) -> String {
    let l = w.letters();
    if l.len() == 1 {
        return l[0].as_char().to_string();
    }
    let split = (1..l.len()).find(|&i| is_lyndon(&l[i..])).unwrap_or(1);
    format!(
        "[{},{}]",
        standard_bracketing(&w.slice(0, split)),
        standard_bracketing(&w.slice(split, l.len()))
    )
}

/// Expansion of the standard bracketing of a Lyndon word in the tensor basis.
pub fn lyndon_polynomial(w: &Word, level: usize) -> ExactSeries {
    let l = w.letters();
    if l.len() == 1 {
        return ExactSeries::letter(l[0], level);
    }
    let split = (1..l.len()).find(|&i| is_lyndon(&l[i..])).unwrap_or(1);
    let left = lyndon_polynomial(&w.slice(0, split), level);
    let right = lyndon_polynomial(&w.slice(split, l.len()), level);
    left.bracket(&right).expect("same level")
}

/// Witt's necklace formula: dimension of the degree-`d` piece of the free
/// Lie algebra on two generators.
pub fn witt_dimension(d: usize) -> usize {
    let mut total: i64 = 0;
    for k in 1..=d {
        if d % k == 0 {
            total += mobius(k) * (1i64 << (d / k));
        }
    }
    (total / d as i64) as usize
}

fn mobius(n: usize) -> i64 {
    let mut n = n;
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HallDegree {
    pub degree: usize,
    pub dim: usize,
    pub representatives: Vec<String>,
}

/// Graded dimensions of the free nilpotent Lie algebra of class `r` on two
/// generators, with Lyndon-bracket representatives.
pub fn hall_dims(r: usize) -> Result<Vec<HallDegree>, MalcevError> {
    if r == 0 {
        return Err(MalcevError::ZeroLevel);
    }
    Ok((1..=r)
        .map(|d| {
            let reps: Vec<String> = lyndon_words(d).iter().map(standard_bracketing).collect();
            debug_assert_eq!(reps.len(), witt_dimension(d));
            HallDegree {
                degree: d,
                dim: reps.len(),
                representatives: reps,
            }
        })
        .collect())
}

/// Dimension of the degree-`d` primitives, computed as the kernel of
/// `h ↦ (⟨h, u ⧢ v⟩)_{u,v nonempty}` on homogeneous degree-`d` elements.
pub fn primitive_dimension(d: usize) -> usize {
    if d == 0 {
        return 0;
    }
    let cols = words_of_length(d);
    let index: BTreeMap<Word, usize> = cols.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let mut rows: Matrix<BigRational> = Vec::new();
    for k in 1..d {
        for u in words_of_length(k) {
            for v in words_of_length(d - k) {
                let mut row = vec![BigRational::zero(); cols.len()];
                for w in crate::words::shuffle_words(&u, &v) {
                    row[index[&w]] += BigRational::one();
                }
                rows.push(row);
            }
        }
    }
    cols.len() - rank(&rows)
}

/// Coordinates of a primitive element in the Lyndon–Hall basis, degree by
/// degree; pairs are `(bracketing, coefficient)` with zero coefficients
/// omitted.
pub fn hall_coordinates(h: &ExactSeries) -> Result<Vec<(String, BigRational)>, MalcevError> {
    if !is_primitive(h) {
        return Err(MalcevError::NotPrimitive);
    }
    let level = h.level;
    let mut out = Vec::new();
    for d in 1..=level {
        let lyndon = lyndon_words(d);
        let polys: Vec<ExactSeries> = lyndon.iter().map(|w| lyndon_polynomial(w, level)).collect();
        let words = words_of_length(d);
        let a: Matrix<BigRational> = words
            .iter()
            .map(|w| polys.iter().map(|p| p.coefficient(w)).collect())
            .collect();
        let b: Vec<BigRational> = words.iter().map(|w| h.coefficient(w)).collect();
        let x = solve(&a, &b).ok_or(MalcevError::NotPrimitive)?;
        for (w, c) in lyndon.iter().zip(x) {
            if !c.is_zero() {
                out.push((standard_bracketing(w), c));
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Group words

/// Freely reduced word in `γ₀^{±1}`, `γ₁^{±1}`, stored as `(generator,
/// exponent)` syllables with nonzero exponents and no repeated generator in
/// adjacent syllables.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct GroupWord(Vec<(Letter, i64)>);

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord(Vec::new())
    }

    pub fn generator(l: Letter) -> Self {
        GroupWord(vec![(l, 1)])
    }

    pub fn from_syllables(s: impl IntoIterator<Item = (Letter, i64)>) -> Self {
        let mut w = GroupWord::identity();
        for (l, e) in s {
            w.push(l, e);
        }
        w
    }

    fn push(&mut self, l: Letter, e: i64) {
        if e == 0 {
            return;
        }
        if let Some(last) = self.0.last_mut() {
            if last.0 == l {
                last.1 += e;
                if last.1 == 0 {
                    self.0.pop();
                }
                return;
            }
        }
        self.0.push((l, e));
    }

    pub fn syllables(&self) -> &[(Letter, i64)] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    /// Word length counting each generator occurrence.
    pub fn length(&self) -> usize {
        self.0.iter().map(|(_, e)| e.unsigned_abs() as usize).sum()
    }

    pub fn mul(&self, other: &GroupWord) -> GroupWord {
        let mut out = self.clone();
        for &(l, e) in &other.0 {
            out.push(l, e);
        }
        out
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord(self.0.iter().rev().map(|&(l, e)| (l, -e)).collect())
    }

    pub fn commutator(a: &GroupWord, b: &GroupWord) -> GroupWord {
        a.mul(b).mul(&a.inverse()).mul(&b.inverse())
    }

    /// Sequence of single letters with signs `±1`.
    pub fn letters(&self) -> Vec<(Letter, i64)> {
        self.0
            .iter()
            .flat_map(|&(l, e)| std::iter::repeat((l, e.signum())).take(e.unsigned_abs() as usize))
            .collect()
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(l, e)| {
                if e == 1 {
                    l.as_char().to_string()
                } else {
                    format!("{}^{}", l.as_char(), e)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for GroupWord {
    type Err = MalcevError;

    /// Parses space-separated syllables `0`, `1`, `0^-1`, `1^3`, ...
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || MalcevError::BadGroupWord(s.to_string());
        let mut w = GroupWord::identity();
        for tok in s.split_whitespace() {
            let (g, e) = match tok.split_once('^') {
                Some((g, e)) => (g, e.parse::<i64>().map_err(|_| bad())?),
                None => (tok, 1),
            };
            let l = match g {
                "0" => Letter::Zero,
                "1" => Letter::One,
                _ => return Err(bad()),
            };
            w.push(l, e);
        }
        Ok(w)
    }
}

impl Serialize for GroupWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Image of a group word under `γ_i ↦ exp(e_i)` in the level-`r` truncation.
pub fn group_element(w: &GroupWord, level: usize) -> Result<ExactSeries, MalcevError> {
    let mut g = ExactSeries::one(level);
    for &(l, e) in w.syllables() {
        let gen = ExactSeries::letter(l, level).scale(&BigRational::from_integer(e.into()));
        g = g.mul(&exp_trunc(&gen)?)?;
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MalcevCoordinates {
    pub level: usize,
    /// The Lie element in the tensor basis.
    pub lie_element: ExactSeries,
    /// The same element in the Lyndon–Hall basis.
    pub hall: Vec<(String, BigRational)>,
}

impl Serialize for MalcevCoordinates {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let hall: BTreeMap<String, String> = self
            .hall
            .iter()
            .map(|(k, v)| (k.clone(), format_rational(v)))
            .collect();
        let mut st = s.serialize_struct("MalcevCoordinates", 3)?;
        st.serialize_field("level", &self.level)?;
        st.serialize_field("lie_element", &self.lie_element)?;
        st.serialize_field("hall", &hall)?;
        st.end()
    }
}

/// Logarithm of the image of `w` in the class-`r` free nilpotent quotient.
pub fn malcev_coordinates(w: &GroupWord, level: usize) -> Result<MalcevCoordinates, MalcevError> {
    if level == 0 {
        return Err(MalcevError::ZeroLevel);
    }
    let lie_element = log_trunc(&group_element(w, level)?)?;
    let hall = hall_coordinates(&lie_element)?;
    Ok(MalcevCoordinates {
        level,
        lie_element,
        hall,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    fn word(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn e(l: usize, level: usize) -> ExactSeries {
        ExactSeries::letter(Letter::from_index(l), level)
    }

    #[test]
    fn exp_examples() {
        assert_eq!(exp_trunc(&ExactSeries::zero(3)).unwrap(), ExactSeries::one(3));
        let x = exp_trunc(&e(0, 2)).unwrap();
        assert_eq!(x.coefficient(&word("")), q(1, 1));
        assert_eq!(x.coefficient(&word("0")), q(1, 1));
        assert_eq!(x.coefficient(&word("00")), q(1, 2));
        assert_eq!(x.terms().count(), 3);
        assert_eq!(exp_trunc(&ExactSeries::one(2)), Err(MalcevError::NonzeroConstantTerm));
    }

    #[test]
    fn log_examples() {
        assert_eq!(log_trunc(&ExactSeries::one(3)).unwrap(), ExactSeries::zero(3));
        let g = ExactSeries::one(2).add(&e(1, 2)).unwrap();
        let l = log_trunc(&g).unwrap();
        assert_eq!(l.coefficient(&word("1")), q(1, 1));
        assert_eq!(l.coefficient(&word("11")), q(-1, 2));
        assert_eq!(log_trunc(&ExactSeries::zero(2)), Err(MalcevError::ConstantTermNotOne));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_coproduct(&e(0, 3)), CoproductClass::Primitive);
        let g = exp_trunc(&e(0, 3).add(&e(1, 3)).unwrap()).unwrap();
        assert_eq!(classify_coproduct(&g), CoproductClass::Grouplike);
        let mut h = ExactSeries::one(2);
        h.set(&word("01"), q(1, 1)).unwrap();
        assert_eq!(classify_coproduct(&h), CoproductClass::Neither);
        let br = e(0, 2).bracket(&e(1, 2)).unwrap();
        assert_eq!(classify_coproduct(&br), CoproductClass::Primitive);
    }

    #[test]
    fn bch_low_degree() {
        let a = e(0, 2);
        assert_eq!(bch(&a, &ExactSeries::zero(2)).unwrap(), a);

        let z = bch(&e(0, 2), &e(1, 2)).unwrap();
        let expected = e(0, 2)
            .add(&e(1, 2))
            .unwrap()
            .add(&e(0, 2).bracket(&e(1, 2)).unwrap().scale(&q(1, 2)))
            .unwrap();
        assert_eq!(z, expected);

        let z3 = bch(&e(0, 3), &e(1, 3)).unwrap();
        let coords: BTreeMap<String, BigRational> = hall_coordinates(&z3).unwrap().into_iter().collect();
        assert_eq!(coords["[0,[0,1]]"], q(1, 12));
        assert_eq!(coords["[[0,1],1]"], q(1, 12));
        assert_eq!(coords["[0,1]"], q(1, 2));

        let mut not_prim = ExactSeries::zero(2);
        not_prim.set(&word("01"), q(1, 1)).unwrap();
        assert_eq!(bch(&not_prim, &a), Err(MalcevError::NotPrimitive));
    }

    #[test]
    fn lyndon_counts_match_witt_and_primitives() {
        let expected = [2, 1, 2, 3, 6, 9];
        for d in 1..=6 {
            assert_eq!(lyndon_words(d).len(), expected[d - 1]);
            assert_eq!(witt_dimension(d), expected[d - 1]);
            assert_eq!(primitive_dimension(d), expected[d - 1], "degree {d}");
        }
        let dims: Vec<usize> = hall_dims(4).unwrap().iter().map(|h| h.dim).collect();
        assert_eq!(dims, vec![2, 1, 2, 3]);
        let h2 = hall_dims(2).unwrap();
        assert_eq!(h2.iter().map(|h| h.dim).sum::<usize>(), 3);
        assert_eq!(h2[1].representatives, vec!["[0,1]"]);
        assert_eq!(hall_dims(1).unwrap()[0].dim, 2);
        assert_eq!(hall_dims(0), Err(MalcevError::ZeroLevel));
    }

    #[test]
    fn lyndon_polynomials_are_primitive() {
        for d in 1..=5 {
            for w in lyndon_words(d) {
                assert!(is_primitive(&lyndon_polynomial(&w, 5)), "{w}");
            }
        }
    }

    #[test]
    fn group_words_parse_and_reduce() {
        let w: GroupWord = "0 1 0^-1 1^-1".parse().unwrap();
        assert_eq!(w.length(), 4);
        assert_eq!(w.to_string(), "0 1 0^-1 1^-1");
        let v: GroupWord = "0 1 1^-1 0^-1".parse().unwrap();
        assert!(v.is_identity());
        assert!("2".parse::<GroupWord>().is_err());
        assert_eq!(w.mul(&w.inverse()), GroupWord::identity());
    }

    #[test]
    fn malcev_examples() {
        let g0 = GroupWord::generator(Letter::Zero);
        assert_eq!(malcev_coordinates(&g0, 2).unwrap().lie_element, e(0, 2));

        let comm: GroupWord = "0 1 0^-1 1^-1".parse().unwrap();
        let c = malcev_coordinates(&comm, 2).unwrap();
        assert_eq!(c.lie_element, e(0, 2).bracket(&e(1, 2)).unwrap());
        assert_eq!(c.hall, vec![("[0,1]".to_string(), q(1, 1))]);

        let prod: GroupWord = "0 1".parse().unwrap();
        assert_eq!(
            malcev_coordinates(&prod, 2).unwrap().lie_element,
            bch(&e(0, 2), &e(1, 2)).unwrap()
        );
    }

    #[test]
    fn json_map_round_trip() {
        let z = bch(&e(0, 2), &e(1, 2)).unwrap();
        let m = z.to_map();
        assert_eq!(m["01"], "1/2");
        assert_eq!(m["10"], "-1/2");
        assert_eq!(ExactSeries::from_map(&m, 2).unwrap(), z);
    }
}
