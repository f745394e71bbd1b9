use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use super::PathError;
use crate::words::{shuffle_words, Letter, Word};

/// Noncommutative series in `e₀`, `e₁` truncated above degree `level`, with
/// complex double coefficients stored densely in shortlex word order.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    level: usize,
    coeffs: Vec<Complex64>,
}

pub(crate) fn basis_len(level: usize) -> usize {
    (1usize << (level + 1)) - 1
}

fn start_of_length(k: usize) -> usize {
    (1usize << k) - 1
}

impl TruncatedSeries {
    pub fn zero(level: usize) -> Self {
        TruncatedSeries {
            level,
            coeffs: vec![Complex64::new(0.0, 0.0); basis_len(level)],
        }
    }

    pub fn identity(level: usize) -> Self {
        let mut s = Self::zero(level);
        s.coeffs[0] = Complex64::new(1.0, 0.0);
        s
    }

    pub(crate) fn from_coeffs(level: usize, coeffs: Vec<Complex64>) -> Self {
        debug_assert_eq!(coeffs.len(), basis_len(level));
        TruncatedSeries { level, coeffs }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coefficient(&self, w: &Word) -> Complex64 {
        if w.len() > self.level {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[w.index()]
    }

    pub fn set(&mut self, w: &Word, c: Complex64) {
        assert!(w.len() <= self.level, "word {w} beyond level {}", self.level);
        self.coeffs[w.index()] = c;
    }

    /// `exp(c · e_l)` truncated.
    pub fn exp_letter(l: Letter, c: Complex64, level: usize) -> Self {
        let mut s = Self::zero(level);
        let mut term = Complex64::new(1.0, 0.0);
        let mut w = Word::empty();
        for k in 0..=level {
            if k > 0 {
                term = term * c / k as f64;
                w = w.push(l);
            }
            s.set(&w, term);
        }
        s
    }

    pub fn truncate(&self, level: usize) -> Self {
        assert!(level <= self.level);
        TruncatedSeries {
            level,
            coeffs: self.coeffs[..basis_len(level)].to_vec(),
        }
    }

    /// Concatenation product in the truncated tensor algebra; this is the
    /// signature of the composite path when `self` and `other` are the
    /// signatures of the two halves.
    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        debug_assert_eq!(self.level, other.level);
        let r = self.level;
        let mut out = Self::zero(r);
        for la in 0..=r {
            let sa = start_of_length(la);
            for ia in 0..(1usize << la) {
                let a = self.coeffs[sa + ia];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for lb in 0..=(r - la) {
                    let sb = start_of_length(lb);
                    let so = start_of_length(la + lb);
                    for ib in 0..(1usize << lb) {
                        out.coeffs[so + ((ia << lb) | ib)] += a * other.coeffs[sb + ib];
                    }
                }
            }
        }
        out
    }

    /// Multiplicative inverse of a series with constant term 1.
    pub fn inverse(&self) -> TruncatedSeries {
        let one = Self::identity(self.level);
        let mut x = self.clone();
        x.coeffs[0] -= Complex64::new(1.0, 0.0);
        for c in x.coeffs.iter_mut() {
            *c = -*c;
        }
        // Σ_k (1 - S)^k
        let mut out = one.clone();
        let mut power = one;
        for _ in 0..self.level {
            power = power.mul(&x);
            for (o, p) in out.coeffs.iter_mut().zip(&power.coeffs) {
                *o += p;
            }
        }
        out
    }

    /// Largest coefficientwise difference.
    pub fn max_diff(&self, other: &TruncatedSeries) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Worst violation of `S(u) S(v) = Σ_{w ∈ u ⧢ v} S(w)` over nonempty word
    /// pairs with `|u| + |v| ≤ max_total`.
    pub fn shuffle_defect(&self, max_total: usize) -> f64 {
        let max_total = max_total.min(self.level);
        let words = crate::words::word_basis(max_total);
        let mut worst = 0.0f64;
        for u in words.iter().filter(|w| !w.is_empty()) {
            for v in words.iter().filter(|w| !w.is_empty()) {
                if u.len() + v.len() > max_total {
                    continue;
                }
                let lhs = self.coefficient(u) * self.coefficient(v);
                let rhs: Complex64 = shuffle_words(u, v).iter().map(|w| self.coefficient(w)).sum();
                worst = worst.max((lhs - rhs).norm());
            }
        }
        worst
    }

    /// Coefficients keyed by word string.
    pub fn to_map(&self) -> BTreeMap<String, [f64; 2]> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (Word::from_index(i).to_string(), [c.re, c.im]))
            .collect()
    }

    /// Builds a series from word-string keys; absent words are zero.
    pub fn from_map(map: &BTreeMap<String, Complex64>, level: usize) -> Result<Self, PathError> {
        let mut s = Self::zero(level);
        for (k, v) in map {
            let w: Word = k
                .parse()
                .map_err(|e| PathError::InvalidSpec(format!("{e}")))?;
            if w.len() > level {
                return Err(PathError::InvalidSpec(format!("word {k} exceeds level {level}")));
            }
            s.set(&w, *v);
        }
        Ok(s)
    }
}

impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_map().serialize(s)
    }
}

/// `a · b` for signatures of equal level.
pub fn compose_signatures(
    a: &TruncatedSeries,
    b: &TruncatedSeries,
) -> Result<TruncatedSeries, PathError> {
    if a.level != b.level {
        return Err(PathError::LevelMismatch(a.level, b.level));
    }
    Ok(a.mul(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_is_neutral() {
        let mut b = TruncatedSeries::identity(3);
        b.set(&"01".parse().unwrap(), c(0.5, -1.0));
        b.set(&"1".parse().unwrap(), c(2.0, 0.0));
        let id = TruncatedSeries::identity(3);
        assert_eq!(compose_signatures(&id, &b).unwrap(), b);
        assert!(compose_signatures(&id, &TruncatedSeries::identity(2)).is_err());
    }

    #[test]
    fn commuting_exponentials_add() {
        let s = c(0.3, 1.2);
        let t = c(-0.7, 0.4);
        let a = TruncatedSeries::exp_letter(Letter::Zero, s, 2);
        let b = TruncatedSeries::exp_letter(Letter::Zero, t, 2);
        let ab = compose_signatures(&a, &b).unwrap();
        let expected = TruncatedSeries::exp_letter(Letter::Zero, s + t, 2);
        assert!(ab.max_diff(&expected) < 1e-15);
    }

    #[test]
    fn inverse_of_grouplike() {
        let a = TruncatedSeries::exp_letter(Letter::Zero, c(0.3, 1.2), 4);
        let b = TruncatedSeries::exp_letter(Letter::One, c(-0.2, 0.5), 4);
        let g = a.mul(&b);
        let id = g.mul(&g.inverse());
        assert!(id.max_diff(&TruncatedSeries::identity(4)) < 1e-14);
        assert!(g.shuffle_defect(4) < 1e-14);
    }
}
