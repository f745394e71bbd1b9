//! Words in the two logarithmic 1-forms `ω₀ = dx/x`, `ω₁ = dx/(1-x)` and
//! exact rational linear combinations of them.
//!
//! The same alphabet indexes the noncommutative letters `e₀`, `e₁` used by
//! [`crate::malcev`] and the complex signatures of [`crate::paths`]; a word
//! `a₁…a_r` stands for the iterated integral `∫ω_{a₁}…ω_{a_r}`, with `a₁`
//! integrated first.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("invalid letter {0:?}: words are strings over {{0, 1}}")]
    InvalidLetter(char),
    #[error("invalid rational {0:?}: expected \"p/q\"")]
    InvalidRational(String),
    #[error("form symbol {0:?} is missing from the form table")]
    MissingForm(String),
}

/// One of the two letters of the alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Zero,
    One,
}

impl Letter {
    pub const ALL: [Letter; 2] = [Letter::Zero, Letter::One];

    pub fn index(self) -> usize {
        match self {
            Letter::Zero => 0,
            Letter::One => 1,
        }
    }

    pub fn from_index(i: usize) -> Letter {
        if i == 0 {
            Letter::Zero
        } else {
            Letter::One
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::Zero => '0',
            Letter::One => '1',
        }
    }

    /// The other letter.
    pub fn swapped(self) -> Letter {
        match self {
            Letter::Zero => Letter::One,
            Letter::One => Letter::Zero,
        }
    }
}

/// A finite word over `{0, 1}`; the empty word is the unit.
///
/// Words are ordered by length first, then lexicographically with `0 < 1`.
/// This is the order [`word_basis`] enumerates and the order in which
/// coefficient maps are stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    pub fn letter(l: Letter) -> Word {
        Word(vec![l])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&self, l: Letter) -> Word {
        let mut v = self.0.clone();
        v.push(l);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Exchanges the two letters.
    pub fn swapped(&self) -> Word {
        Word(self.0.iter().map(|l| l.swapped()).collect())
    }

    /// Position of this word in the shortlex enumeration of [`word_basis`].
    pub fn index(&self) -> usize {
        let k = self.len();
        let mut b = 0usize;
        for l in &self.0 {
            b = (b << 1) | l.index();
        }
        (1usize << k) - 1 + b
    }

    /// Inverse of [`Word::index`].
    pub fn from_index(mut idx: usize) -> Word {
        let mut k = 0;
        while idx >= (1usize << k) {
            idx -= 1usize << k;
            k += 1;
        }
        let letters = (0..k)
            .map(|i| Letter::from_index((idx >> (k - 1 - i)) & 1))
            .collect();
        Word(letters)
    }

    pub fn slice(&self, from: usize, to: usize) -> Word {
        Word(self.0[from..to].to_vec())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(Letter::Zero),
                '1' => Ok(Letter::One),
                other => Err(WordError::InvalidLetter(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All words of length at most `r`, shortest first; `2^{r+1} - 1` of them.
pub fn word_basis(r: usize) -> Vec<Word> {
    (0..(1usize << (r + 1)) - 1).map(Word::from_index).collect()
}

/// All words of length exactly `k`, in lexicographic order.
pub fn words_of_length(k: usize) -> Vec<Word> {
    let start = (1usize << k) - 1;
    (start..start + (1usize << k)).map(Word::from_index).collect()
}

/// Riffle shuffles of two words, with multiplicity.
pub fn shuffle_words(u: &Word, v: &Word) -> Vec<Word> {
    fn go(u: &[Letter], v: &[Letter], prefix: &mut Vec<Letter>, out: &mut Vec<Word>) {
        if u.is_empty() || v.is_empty() {
            let mut w = prefix.clone();
            w.extend_from_slice(u);
            w.extend_from_slice(v);
            out.push(Word(w));
            return;
        }
        prefix.push(u[0]);
        go(&u[1..], v, prefix, out);
        prefix.pop();
        prefix.push(v[0]);
        go(u, &v[1..], prefix, out);
        prefix.pop();
    }
    let mut out = Vec::new();
    go(u.letters(), v.letters(), &mut Vec::new(), &mut out);
    out
}

/// All `r + 1` splittings `(prefix, suffix)` of `w`, shortest prefix first.
pub fn deconcat_coproduct(w: &Word) -> Vec<(Word, Word)> {
    (0..=w.len())
        .map(|k| (w.slice(0, k), w.slice(k, w.len())))
        .collect()
}

/// A finitely supported rational combination of words (an element of the
/// degree-0 bar construction). Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ShuffleElement {
    terms: BTreeMap<Word, BigRational>,
}

impl ShuffleElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::word(Word::empty())
    }

    pub fn word(w: Word) -> Self {
        Self::term(w, BigRational::one())
    }

    pub fn term(w: Word, c: BigRational) -> Self {
        let mut e = Self::zero();
        e.add_term(w, c);
        e
    }

    pub fn add_term(&mut self, w: Word, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn coefficient(&self, w: &Word) -> BigRational {
        self.terms.get(w).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximum word length in the support (0 for the zero element).
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn add(&self, other: &ShuffleElement) -> ShuffleElement {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> ShuffleElement {
        let mut out = ShuffleElement::zero();
        for (w, v) in &self.terms {
            out.add_term(w.clone(), v * c);
        }
        out
    }
}

/// Bilinear extension of the riffle shuffle.
pub fn shuffle_product(a: &ShuffleElement, b: &ShuffleElement) -> ShuffleElement {
    let mut out = ShuffleElement::zero();
    for (u, cu) in a.terms() {
        for (v, cv) in b.terms() {
            let c = cu * cv;
            for w in shuffle_words(u, v) {
                out.add_term(w, c.clone());
            }
        }
    }
    out
}

pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(s: &str) -> Result<BigRational, WordError> {
    let bad = || WordError::InvalidRational(s.to_string());
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

impl Serialize for ShuffleElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.terms.len()))?;
        for (w, c) in &self.terms {
            m.serialize_entry(&w.to_string(), &format_rational(c))?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for ShuffleElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(d)?;
        let mut out = ShuffleElement::zero();
        for (w, c) in raw {
            let w: Word = w.parse().map_err(serde::de::Error::custom)?;
            let c = parse_rational(&c).map_err(serde::de::Error::custom)?;
            out.add_term(w, c);
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Bar differential

/// A word over an open alphabet of named differential forms.
pub type FormWord = Vec<String>;

/// Formal rational combination of [`FormWord`]s.
pub type FormSum = BTreeMap<FormWord, BigRational>;

/// A formal rational combination of form symbols.
pub type FormCombination = BTreeMap<String, BigRational>;

#[derive(Debug, Clone)]
struct FormEntry {
    degree: usize,
    differential: FormCombination,
}

/// Symbolic exterior calculus on a finite set of named forms: each symbol has
/// a degree and an exterior derivative; pairs have a wedge product. Wedges
/// not set explicitly are zero.
#[derive(Debug, Clone, Default)]
pub struct SymbolicFormTable {
    forms: BTreeMap<String, FormEntry>,
    wedges: BTreeMap<(String, String), FormCombination>,
}

impl SymbolicFormTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// The closed forms `ω₀`, `ω₁` on the thrice-punctured line: every
    /// derivative and every wedge vanishes.
    pub fn punctured_line() -> Self {
        let mut t = Self::new();
        t.insert_form("w0", 1, FormCombination::new());
        t.insert_form("w1", 1, FormCombination::new());
        t
    }

    pub fn insert_form(&mut self, name: &str, degree: usize, differential: FormCombination) {
        self.forms.insert(
            name.to_string(),
            FormEntry {
                degree,
                differential: prune(differential),
            },
        );
    }

    /// Sets `a ∧ b`; the reversed product is filled in with the graded sign
    /// `b ∧ a = (-1)^{deg a · deg b} a ∧ b`. Both symbols must already be
    /// registered.
    pub fn set_wedge(&mut self, a: &str, b: &str, value: FormCombination) -> Result<(), WordError> {
        let da = self.degree(a)?;
        let db = self.degree(b)?;
        let value = prune(value);
        let sign = if (da * db) % 2 == 1 {
            -BigRational::one()
        } else {
            BigRational::one()
        };
        let reversed = value
            .iter()
            .map(|(k, v)| (k.clone(), v * &sign))
            .collect();
        self.wedges
            .insert((b.to_string(), a.to_string()), reversed);
        self.wedges.insert((a.to_string(), b.to_string()), value);
        Ok(())
    }

    pub fn degree(&self, name: &str) -> Result<usize, WordError> {
        self.forms
            .get(name)
            .map(|e| e.degree)
            .ok_or_else(|| WordError::MissingForm(name.to_string()))
    }

    fn differential(&self, name: &str) -> Result<&FormCombination, WordError> {
        self.forms
            .get(name)
            .map(|e| &e.differential)
            .ok_or_else(|| WordError::MissingForm(name.to_string()))
    }

    fn wedge(&self, a: &str, b: &str) -> Option<&FormCombination> {
        self.wedges.get(&(a.to_string(), b.to_string()))
    }
}

fn prune(c: FormCombination) -> FormCombination {
    c.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// Symbol names of `ω₀`, `ω₁` in [`SymbolicFormTable::punctured_line`].
pub fn form_word_of(w: &Word) -> FormWord {
    w.letters()
        .iter()
        .map(|l| format!("w{}", l.index()))
        .collect()
}

/// Exterior differential of the iterated integral `∫ω₁…ω_r`:
///
/// ```text
/// d∫ω₁…ω_r = Σ_{j=1..r}   (-1)^{ν_{j-1}+1} ∫ω₁…ω_{j-1}(dω_j)ω_{j+1}…ω_r
///          + Σ_{j=1..r-1} (-1)^{ν_j+1}     ∫ω₁…ω_{j-1}(ω_j∧ω_{j+1})ω_{j+2}…ω_r
/// ```
///
/// with `ν_j = Σ_{k≤j} (deg ω_k - 1)`.
pub fn bar_differential(w: &[String], table: &SymbolicFormTable) -> Result<FormSum, WordError> {
    let degrees = w
        .iter()
        .map(|s| table.degree(s))
        .collect::<Result<Vec<_>, _>>()?;
    // nu[j] = ν_j for j = 0..=r
    let mut nu = vec![0usize; w.len() + 1];
    for j in 1..=w.len() {
        nu[j] = nu[j - 1] + degrees[j - 1] - 1;
    }
    let sign = |n: usize| {
        if (n + 1) % 2 == 0 {
            BigRational::one()
        } else {
            -BigRational::one()
        }
    };

    let mut out = FormSum::new();
    let mut push = |word: FormWord, c: BigRational| {
        let e = out.entry(word).or_insert_with(BigRational::zero);
        *e += c;
    };
    for j in 0..w.len() {
        for (sym, c) in table.differential(&w[j])? {
            let mut word = w[..j].to_vec();
            word.push(sym.clone());
            word.extend_from_slice(&w[j + 1..]);
            push(word, sign(nu[j]) * c);
        }
    }
    for j in 0..w.len().saturating_sub(1) {
        if let Some(prod) = table.wedge(&w[j], &w[j + 1]) {
            for (sym, c) in prod {
                let mut word = w[..j].to_vec();
                word.push(sym.clone());
                word.extend_from_slice(&w[j + 2..]);
                push(word, sign(nu[j + 1]) * c);
            }
        }
    }
    Ok(out.into_iter().filter(|(_, c)| !c.is_zero()).collect())
}
