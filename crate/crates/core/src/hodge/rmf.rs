//! Increasing filtrations on `ℚⁿ` and the relative monodromy filtration of a
//! nilpotent endomorphism with respect to a weight filtration.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{identity, is_zero_matrix, mat_mul, mat_pow, mat_vec, solve, Field, Matrix, Subspace};
use crate::words::format_rational;

type Q = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RmfError {
    #[error("N is not nilpotent")]
    NotNilpotent,
    #[error("N does not preserve W_{0}")]
    NotWeightPreserving(i64),
    #[error("dimension mismatch: N is {0}×{0}, W lives in dimension {1}")]
    DimensionMismatch(usize, usize),
    #[error("filtration is not increasing at index {0}")]
    NotNested(i64),
    #[error("filtration does not exhaust the space")]
    NotExhaustive,
}

/// Increasing, exhaustive filtration: `F_j` is the subspace stored at the
/// largest key `≤ j`, and `0` below the smallest key.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightFiltrationGeneric {
    dim: usize,
    jumps: BTreeMap<i64, Subspace<Q>>,
}

impl WeightFiltrationGeneric {
    /// From spanning sets indexed by weight; each listed level must contain
    /// the previous one and the last must be everything.
    pub fn from_spans(dim: usize, spans: BTreeMap<i64, Vec<Vec<Q>>>) -> Result<Self, RmfError> {
        let mut jumps = BTreeMap::new();
        let mut prev = Subspace::zero(dim);
        for (w, vecs) in spans {
            let s = Subspace::span(dim, vecs);
            if !s.contains_space(&prev) {
                return Err(RmfError::NotNested(w));
            }
            prev = s.clone();
            jumps.insert(w, s);
        }
        if prev.dim() != dim {
            return Err(RmfError::NotExhaustive);
        }
        Ok(Self::normalized(dim, jumps))
    }

    /// `F_j` spanned by the basis vectors of weight `≤ j`.
    pub fn split(basis: &[Vec<Q>], weights: &[i64]) -> Self {
        let dim = basis.first().map_or(0, Vec::len);
        let mut ws: Vec<i64> = weights.to_vec();
        ws.sort_unstable();
        ws.dedup();
        let jumps = ws
            .into_iter()
            .map(|j| {
                let vecs = basis
                    .iter()
                    .zip(weights)
                    .filter(|(_, w)| **w <= j)
                    .map(|(b, _)| b.clone())
                    .collect();
                (j, Subspace::span(dim, vecs))
            })
            .collect();
        Self::normalized(dim, jumps)
    }

    /// Split along the standard basis.
    pub fn split_standard(weights: &[i64]) -> Self {
        Self::split(&identity::<Q>(weights.len()), weights)
    }

    fn normalized(dim: usize, jumps: BTreeMap<i64, Subspace<Q>>) -> Self {
        let mut out: BTreeMap<i64, Subspace<Q>> = BTreeMap::new();
        let mut last_dim = 0;
        for (j, s) in jumps {
            if s.dim() > last_dim {
                last_dim = s.dim();
                out.insert(j, s);
            }
        }
        WeightFiltrationGeneric { dim, jumps: out }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn level(&self, j: i64) -> Subspace<Q> {
        self.jumps
            .range(..=j)
            .next_back()
            .map(|(_, s)| s.clone())
            .unwrap_or_else(|| Subspace::zero(self.dim))
    }

    /// Indices where the filtration grows.
    pub fn jumps(&self) -> Vec<i64> {
        self.jumps.keys().copied().collect()
    }

    pub fn lowest(&self) -> Option<i64> {
        self.jumps.keys().next().copied()
    }

    pub fn highest(&self) -> Option<i64> {
        self.jumps.keys().next_back().copied()
    }

    /// `dim gr_j`.
    pub fn graded_dim(&self, j: i64) -> usize {
        self.level(j).dim() - self.level(j - 1).dim()
    }

    /// `{ "j": [[p/q, …], …] }` at each jump.
    pub fn to_map(&self) -> BTreeMap<String, Vec<Vec<String>>> {
        self.jumps
            .iter()
            .map(|(j, s)| {
                let vecs = s.basis().iter().map(|v| v.iter().map(format_rational).collect()).collect();
                (j.to_string(), vecs)
            })
            .collect()
    }
}

impl Serialize for WeightFiltrationGeneric {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_map().serialize(s)
    }
}

fn check_input(n: &Matrix<Q>, w: &WeightFiltrationGeneric) -> Result<(), RmfError> {
    let dim = w.dim();
    if n.len() != dim || n.iter().any(|r| r.len() != dim) {
        return Err(RmfError::DimensionMismatch(n.len(), dim));
    }
    if !is_zero_matrix(&mat_pow(n, dim.max(1))) {
        return Err(RmfError::NotNilpotent);
    }
    for j in w.jumps() {
        let wj = w.level(j);
        if !wj.contains_space(&wj.image(n)) {
            return Err(RmfError::NotWeightPreserving(j));
        }
    }
    Ok(())
}

/// Extends a basis of `sub` to one of `sup` and returns the added vectors.
fn complement(sub: &Subspace<Q>, sup: &Subspace<Q>) -> Vec<Vec<Q>> {
    let mut acc = sub.clone();
    let mut out = Vec::new();
    for v in sup.basis() {
        if !acc.contains(v) {
            acc = acc.sum(&Subspace::span(sup.ambient(), vec![v.clone()]));
            out.push(v.clone());
        }
    }
    out
}

/// Heads of the Jordan strings of a nilpotent `d×d` matrix, with the string
/// length minus one.
fn jordan_heads(nbar: &Matrix<Q>) -> Vec<(Vec<Q>, usize)> {
    let d = nbar.len();
    if d == 0 {
        return Vec::new();
    }
    let kernels: Vec<Subspace<Q>> = (0..=d + 1)
        .map(|k| Subspace::zero(d).preimage(&mat_pow(nbar, k)))
        .collect();
    let mut heads = Vec::new();
    for k in (0..d).rev() {
        // heads of strings of length k+1 complement ker N^k + N(ker N^{k+2}) in ker N^{k+1}
        let lower = kernels[k].sum(&kernels[(k + 2).min(d + 1)].image(nbar));
        for v in complement(&lower, &kernels[k + 1]) {
            heads.push((v, k));
        }
    }
    heads
}

fn lincomb(coeffs: &[Q], vecs: &[Vec<Q>], dim: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); dim];
    for (c, v) in coeffs.iter().zip(vecs) {
        for (o, x) in out.iter_mut().zip(v) {
            *o = Field::add(o, &Field::mul(c, x));
        }
    }
    out
}

/// The relative monodromy filtration `M(N, W)`, or `None` when it does not
/// exist. Built by induction on the top weight of `W`: the Jordan strings of
/// `N` on `gr^W_l` are lifted to `W_l`, each head corrected by an element of
/// the filtration already built on `W_{l-1}` so that it is killed by the
/// right power of `N` modulo the right step.
pub fn relative_monodromy_filtration(
    n: &Matrix<Q>,
    w: &WeightFiltrationGeneric,
) -> Result<Option<WeightFiltrationGeneric>, RmfError> {
    check_input(n, w)?;
    let dim = w.dim();
    let mut m = WeightFiltrationGeneric {
        dim,
        jumps: BTreeMap::new(),
    };
    let mut prev = Subspace::zero(dim);
    for l in w.jumps() {
        let wl = w.level(l);
        let c = complement(&prev, &wl);
        let d = c.len();
        // matrix of N on gr_l in the basis c
        let mut cols = c.clone();
        cols.extend(prev.basis().iter().cloned());
        let sys: Matrix<Q> = (0..dim).map(|i| cols.iter().map(|v| v[i].clone()).collect()).collect();
        let mut nbar = vec![vec![Q::zero(); d]; d];
        for (j, cj) in c.iter().enumerate() {
            let x = solve(&sys, &mat_vec(n, cj)).expect("N preserves W");
            for i in 0..d {
                nbar[i][j] = x[i].clone();
            }
        }
        let mut new_vectors: Vec<(i64, Vec<Q>)> = Vec::new();
        for (head, k) in jordan_heads(&nbar) {
            let lift = lincomb(&head, &c, dim);
            let nk1 = mat_pow(n, k + 1);
            let target = mat_vec(&nk1, &lift);
            let top = m.level(l + k as i64);
            let bottom = m.level(l - k as i64 - 2);
            let b_img: Vec<Vec<Q>> = top.basis().iter().map(|v| mat_vec(&nk1, v)).collect();
            let mut gens = b_img.clone();
            gens.extend(bottom.basis().iter().cloned());
            let ncols = gens.len();
            let a: Matrix<Q> = (0..dim).map(|i| gens.iter().map(|g| g[i].clone()).collect()).collect();
            let sol = if ncols == 0 {
                target.iter().all(|t| Field::is_zero(t)).then(Vec::new)
            } else {
                solve(&a, &target)
            };
            let Some(sol) = sol else {
                return Ok(None);
            };
            let x = lincomb(&sol[..top.dim()], top.basis(), dim);
            let mut u: Vec<Q> = lift.iter().zip(&x).map(|(p, q)| Field::sub(p, q)).collect();
            for i in 0..=k {
                new_vectors.push((l + k as i64 - 2 * i as i64, u.clone()));
                u = mat_vec(n, &u);
            }
        }
        let mut indices: Vec<i64> = m.jumps();
        indices.extend(new_vectors.iter().map(|(j, _)| *j));
        indices.sort_unstable();
        indices.dedup();
        let jumps = indices
            .into_iter()
            .map(|j| {
                let extra: Vec<Vec<Q>> = new_vectors.iter().filter(|(wt, _)| *wt <= j).map(|(_, v)| v.clone()).collect();
                (j, m.level(j).sum(&Subspace::span(dim, extra)))
            })
            .collect();
        m = WeightFiltrationGeneric::normalized(dim, jumps);
        prev = wl;
    }
    Ok(Some(m))
}

/// Result of checking the two defining properties of `M(N, W)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RmfCheck {
    /// `N M_k ⊆ M_{k-2}` for all `k`.
    pub shifts_by_two: bool,
    /// `N^k : gr^M_{w+k} gr^W_w → gr^M_{w-k} gr^W_w` is an isomorphism.
    pub graded_isomorphisms: bool,
}

impl RmfCheck {
    pub fn ok(&self) -> bool {
        self.shifts_by_two && self.graded_isomorphisms
    }
}

/// Verifies a candidate `M` directly.
pub fn verify_relative_monodromy(n: &Matrix<Q>, w: &WeightFiltrationGeneric, m: &WeightFiltrationGeneric) -> RmfCheck {
    let (Some(mlo), Some(mhi)) = (m.lowest(), m.highest()) else {
        return RmfCheck {
            shifts_by_two: w.dim() == 0,
            graded_isomorphisms: w.dim() == 0,
        };
    };
    let shifts_by_two = (mlo..=mhi + 2).all(|j| m.level(j - 2).contains_space(&m.level(j).image(n)));
    let span = mhi - mlo + 2;
    let mut graded_isomorphisms = true;
    'outer: for wt in w.jumps() {
        let ww = w.level(wt);
        let below = w.level(wt - 1);
        let piece = |j: i64| m.level(j).intersect(&ww).sum(&below);
        for k in 1..=span {
            let nk = mat_pow(n, k as usize);
            let (src, src_den) = (piece(wt + k), piece(wt + k - 1));
            let (tgt, tgt_den) = (piece(wt - k), piece(wt - k - 1));
            if src.dim() - src_den.dim() != tgt.dim() - tgt_den.dim() {
                graded_isomorphisms = false;
                break 'outer;
            }
            let kernel = src.intersect(&tgt_den.preimage(&nk));
            if kernel.dim() != src_den.dim() {
                graded_isomorphisms = false;
                break 'outer;
            }
        }
    }
    RmfCheck {
        shifts_by_two,
        graded_isomorphisms,
    }
}

/// `g N g⁻¹` for a unimodular `g`.
pub fn conjugate(n: &Matrix<Q>, g: &Matrix<Q>, g_inv: &Matrix<Q>) -> Matrix<Q> {
    mat_mul(&mat_mul(g, n), g_inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Q {
        Q::from_integer(v.into())
    }

    fn mat(rows: &[&[i64]]) -> Matrix<Q> {
        rows.iter().map(|r| r.iter().map(|v| q(*v)).collect()).collect()
    }

    #[test]
    fn zero_endomorphism_gives_w() {
        let w = WeightFiltrationGeneric::split_standard(&[-4, -2, 0]);
        let m = relative_monodromy_filtration(&mat(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]]), &w).unwrap().unwrap();
        assert_eq!(m, w);
    }

    #[test]
    fn single_block_in_pure_weight() {
        let w = WeightFiltrationGeneric::split_standard(&[3, 3]);
        // N e₂ = e₁
        let n = mat(&[&[0, 1], &[0, 0]]);
        let m = relative_monodromy_filtration(&n, &w).unwrap().unwrap();
        assert_eq!(m.jumps(), vec![2, 4]);
        assert_eq!(m.level(2).basis(), &[vec![q(1), q(0)]]);
        assert!(verify_relative_monodromy(&n, &w, &m).ok());
    }

    #[test]
    fn lattice_example_has_m_equal_w() {
        let w = WeightFiltrationGeneric::split_standard(&[-4, -2, 0]);
        // N e₃ = e₂
        let n = mat(&[&[0, 0, 0], &[0, 0, 1], &[0, 0, 0]]);
        let m = relative_monodromy_filtration(&n, &w).unwrap().unwrap();
        assert_eq!(m, w);
        assert!(verify_relative_monodromy(&n, &w, &m).ok());
    }

    #[test]
    fn nonexistence_is_detected() {
        // W₀ = ⟨e₁⟩, W₁ = all, N e₂ = e₁
        let w = WeightFiltrationGeneric::split_standard(&[0, 1]);
        let n = mat(&[&[0, 1], &[0, 0]]);
        assert_eq!(relative_monodromy_filtration(&n, &w).unwrap(), None);
    }

    #[test]
    fn bad_inputs() {
        let w = WeightFiltrationGeneric::split_standard(&[0, 1]);
        assert_eq!(
            relative_monodromy_filtration(&mat(&[&[1, 0], &[0, 0]]), &w),
            Err(RmfError::NotNilpotent)
        );
        // N e₁ = e₂ moves W₀ = ⟨e₁⟩ out of itself
        assert_eq!(
            relative_monodromy_filtration(&mat(&[&[0, 0], &[1, 0]]), &w),
            Err(RmfError::NotWeightPreserving(0))
        );
        let spans = BTreeMap::from([(0, vec![vec![q(1), q(0)]]), (1, vec![vec![q(0), q(1)]])]);
        assert_eq!(WeightFiltrationGeneric::from_spans(2, spans), Err(RmfError::NotNested(1)));
    }

    #[test]
    fn jordan_heads_of_mixed_blocks() {
        // blocks of sizes 2 and 1
        let n = mat(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 0]]);
        let mut lens: Vec<usize> = jordan_heads(&n).into_iter().map(|(_, k)| k).collect();
        lens.sort_unstable();
        assert_eq!(lens, vec![0, 1]);
    }
}
