//! Small dense linear algebra over exact or floating-point fields.
//!
//! Everything here works on row-major `Vec<Vec<K>>` matrices and column
//! vectors `Vec<K>`. Exact fields decide zero-ness exactly; the float field
//! uses an absolute threshold of `1e-12`.

use std::fmt::Debug;

use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Threshold below which a floating-point entry counts as zero.
pub const FLOAT_ZERO_TOL: f64 = 1e-12;

pub trait Field: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_rational(q: &BigRational) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// Size used to choose pivots.
    fn magnitude(&self) -> f64;
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(v.into())
    }
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::MAX)
    }
}

/// Exact Gaussian rationals.
impl Field for Complex<BigRational> {
    fn zero() -> Self {
        Complex::new(Zero::zero(), Zero::zero())
    }
    fn one() -> Self {
        Complex::new(One::one(), Zero::zero())
    }
    fn from_i64(v: i64) -> Self {
        Complex::new(BigRational::from_integer(v.into()), Zero::zero())
    }
    fn from_rational(q: &BigRational) -> Self {
        Complex::new(q.clone(), Zero::zero())
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }
    fn magnitude(&self) -> f64 {
        self.re.magnitude() + self.im.magnitude()
    }
}

impl Field for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn from_rational(q: &BigRational) -> Self {
        Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        self.norm() <= FLOAT_ZERO_TOL
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

pub type Matrix<K> = Vec<Vec<K>>;

pub fn identity<K: Field>(n: usize) -> Matrix<K> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { K::one() } else { K::zero() }).collect())
        .collect()
}

pub fn zeros<K: Field>(rows: usize, cols: usize) -> Matrix<K> {
    vec![vec![K::zero(); cols]; rows]
}

pub fn mat_mul<K: Field>(a: &Matrix<K>, b: &Matrix<K>) -> Matrix<K> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(K::zero(), |acc, (x, brow)| acc.add(&x.mul(&brow[j])))
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec<K: Field>(a: &Matrix<K>, v: &[K]) -> Vec<K> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(K::zero(), |acc, (x, y)| acc.add(&x.mul(y)))
        })
        .collect()
}

pub fn mat_pow<K: Field>(a: &Matrix<K>, k: usize) -> Matrix<K> {
    let mut out = identity(a.len());
    for _ in 0..k {
        out = mat_mul(&out, a);
    }
    out
}

pub fn mat_sub<K: Field>(a: &Matrix<K>, b: &Matrix<K>) -> Matrix<K> {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.sub(y)).collect())
        .collect()
}

pub fn is_zero_matrix<K: Field>(a: &Matrix<K>) -> bool {
    a.iter().all(|r| r.iter().all(Field::is_zero))
}

pub fn transpose<K: Field>(a: &Matrix<K>) -> Matrix<K> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| a.iter().map(|r| r[j].clone()).collect())
        .collect()
}

/// Reduced row echelon form; returns the nonzero rows and their pivot
/// columns.
pub fn rref<K: Field>(mut m: Matrix<K>) -> (Matrix<K>, Vec<usize>) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let best = (r..rows)
            .filter(|&i| !m[i][c].is_zero())
            .max_by(|&i, &j| {
                m[i][c]
                    .magnitude()
                    .partial_cmp(&m[j][c].magnitude())
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
        let Some(p) = best else { continue };
        m.swap(r, p);
        let inv = K::one().div(&m[r][c]);
        for x in m[r].iter_mut() {
            *x = x.mul(&inv);
        }
        m[r][c] = K::one();
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let v = m[i][j].sub(&f.mul(&m[r][j]));
                    m[i][j] = v;
                }
                m[i][c] = K::zero();
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank<K: Field>(m: &Matrix<K>) -> usize {
    rref(m.clone()).1.len()
}

/// Basis of `{x : A x = 0}`.
pub fn nullspace<K: Field>(a: &Matrix<K>, cols: usize) -> Vec<Vec<K>> {
    let (r, pivots) = rref(a.clone());
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![K::zero(); cols];
            x[f] = K::one();
            for (row, &p) in r.iter().zip(&pivots) {
                x[p] = row[f].neg();
            }
            x
        })
        .collect()
}

/// Some solution of `A x = b`, if one exists.
pub fn solve<K: Field>(a: &Matrix<K>, b: &[K]) -> Option<Vec<K>> {
    let cols = a.first().map_or(0, Vec::len);
    let aug: Matrix<K> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![K::zero(); cols];
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[cols].clone();
    }
    Some(x)
}

pub fn inverse<K: Field>(a: &Matrix<K>) -> Option<Matrix<K>> {
    let n = a.len();
    let aug: Matrix<K> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { K::one() } else { K::zero() }));
            r
        })
        .collect();
    let (r, pivots) = rref(aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// A linear subspace of `K^n`, stored as an RREF basis (so equal subspaces
/// have equal representations in exact fields).
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace<K: Field> {
    ambient: usize,
    basis: Vec<Vec<K>>,
}

impl<K: Field> Subspace<K> {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::span(ambient, identity::<K>(ambient))
    }

    pub fn span(ambient: usize, vectors: Vec<Vec<K>>) -> Self {
        let (basis, _) = rref(vectors);
        Subspace { ambient, basis }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<K>] {
        &self.basis
    }

    pub fn contains(&self, v: &[K]) -> bool {
        if v.iter().all(Field::is_zero) {
            return true;
        }
        let mut m = self.basis.clone();
        m.push(v.to_vec());
        rank(&m) == self.dim()
    }

    pub fn contains_space(&self, other: &Subspace<K>) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace<K>) -> Subspace<K> {
        let mut v = self.basis.clone();
        v.extend(other.basis.iter().cloned());
        Self::span(self.ambient, v)
    }

    pub fn intersect(&self, other: &Subspace<K>) -> Subspace<K> {
        if self.dim() == 0 || other.dim() == 0 {
            return Self::zero(self.ambient);
        }
        let k = self.dim();
        let cols = k + other.dim();
        // columns: basis of self, then minus basis of other
        let a: Matrix<K> = (0..self.ambient)
            .map(|i| {
                self.basis
                    .iter()
                    .map(|b| b[i].clone())
                    .chain(other.basis.iter().map(|b| b[i].neg()))
                    .collect()
            })
            .collect();
        let vecs = nullspace(&a, cols)
            .into_iter()
            .map(|coef| {
                let mut v = vec![K::zero(); self.ambient];
                for (c, b) in coef[..k].iter().zip(&self.basis) {
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi = vi.add(&c.mul(bi));
                    }
                }
                v
            })
            .collect();
        Self::span(self.ambient, vecs)
    }

    /// Image under a square matrix.
    pub fn image(&self, m: &Matrix<K>) -> Subspace<K> {
        Self::span(
            self.ambient,
            self.basis.iter().map(|b| mat_vec(m, b)).collect(),
        )
    }

    /// Preimage `{x : m x ∈ self}`.
    pub fn preimage(&self, m: &Matrix<K>) -> Subspace<K> {
        // x ∈ preimage  <=>  m x = Σ c_i b_i  <=>  [m | -B] (x, c) = 0
        let n = self.ambient;
        let a: Matrix<K> = (0..n)
            .map(|i| {
                m[i].iter()
                    .cloned()
                    .chain(self.basis.iter().map(|b| b[i].neg()))
                    .collect()
            })
            .collect();
        let vecs = nullspace(&a, n + self.dim())
            .into_iter()
            .map(|v| v[..n].to_vec())
            .collect();
        Self::span(n, vecs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_i64(n)
    }

    #[test]
    fn rref_rank_and_solve() {
        let a = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(0), q(1), q(1)]];
        assert_eq!(rank(&a), 2);
        let x = solve(&a, &[q(6), q(12), q(2)]).unwrap();
        assert_eq!(mat_vec(&a, &x), vec![q(6), q(12), q(2)]);
        assert!(solve(&a, &[q(1), q(1), q(1)]).is_none());
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 1);
        assert!(mat_vec(&a, &ns[0]).iter().all(|v| Field::is_zero(v)));
    }

    #[test]
    fn inverse_exact() {
        let a = vec![vec![q(2), q(1)], vec![q(1), q(1)]];
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(2));
        assert!(inverse(&vec![vec![q(1), q(1)], vec![q(1), q(1)]]).is_none());
    }

    #[test]
    fn subspace_lattice_operations() {
        let u = Subspace::span(3, vec![vec![q(1), q(0), q(0)], vec![q(0), q(1), q(0)]]);
        let v = Subspace::span(3, vec![vec![q(0), q(1), q(0)], vec![q(0), q(0), q(1)]]);
        let i = u.intersect(&v);
        assert_eq!(i, Subspace::span(3, vec![vec![q(0), q(5), q(0)]]));
        assert_eq!(u.sum(&v), Subspace::full(3));
        let n = vec![vec![q(0), q(1), q(0)], vec![q(0), q(0), q(1)], vec![q(0), q(0), q(0)]];
        // N e2 = e1, N e3 = e2 (columns), so N^{-1}(span e1) = span(e1, e2)
        let e1 = Subspace::span(3, vec![vec![q(1), q(0), q(0)]]);
        assert_eq!(e1.preimage(&n), u);
        assert_eq!(v.image(&n), u);
    }

    #[test]
    fn float_field_tolerance() {
        let a: Matrix<Complex64> = vec![
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)],
            vec![Complex64::new(0.0, 1.0), Complex64::new(-1.0, 1e-15)],
        ];
        assert_eq!(rank(&a), 1);
    }
}
