//! Randomized small instances with a known answer, and an exhaustive search
//! over filtrations split by the instance basis. Used as the oracle for
//! [`relative_monodromy_filtration`](super::relative_monodromy_filtration).

use num_rational::BigRational;
use rand::Rng;

use super::rmf::{conjugate, verify_relative_monodromy, WeightFiltrationGeneric};
use crate::linalg::{identity, inverse, mat_mul, Field, Matrix};

type Q = BigRational;

/// A nilpotent `N` and weight filtration `W` obtained by conjugating a block
/// model by a random unimodular `g`. Both `W` and every filtration that can
/// be `M(N, W)` are split by the columns of `g`.
#[derive(Debug, Clone)]
pub struct RmfInstance {
    pub n: Matrix<Q>,
    pub w: WeightFiltrationGeneric,
    /// Columns of `g`, the adapted basis.
    pub basis: Vec<Vec<Q>>,
    /// `W`-weight of each basis vector.
    pub w_weights: Vec<i64>,
    /// `N` in the adapted basis.
    pub model_n: Matrix<Q>,
    /// Whether the block model admits `M(N, W)`.
    pub exists: bool,
}

fn q(v: i64) -> Q {
    Q::from_integer(v.into())
}

/// Random unimodular matrix: a product of elementary integer shears.
fn unimodular<R: Rng>(rng: &mut R, n: usize) -> Matrix<Q> {
    let mut g: Matrix<Q> = identity(n);
    if n < 2 {
        return g;
    }
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let t = rng.gen_range(-2i64..=2);
        // row_i += t row_j
        let row_j = g[j].clone();
        for (x, y) in g[i].iter_mut().zip(&row_j) {
            *x = Field::add(x, &Field::mul(&q(t), y));
        }
    }
    g
}

/// Random instance of dimension `dim` (1 to 4). With probability about
/// `p_bad` a block without a relative monodromy filtration is included.
pub fn random_instance<R: Rng>(rng: &mut R, dim: usize, p_bad: f64) -> RmfInstance {
    let mut weights: Vec<i64> = Vec::with_capacity(dim);
    let mut edges: Vec<(usize, usize)> = Vec::new(); // N e_from = e_to
    let mut exists = true;
    while weights.len() < dim {
        let room = dim - weights.len();
        let base = rng.gen_range(-2i64..=2);
        let start = weights.len();
        match rng.gen_range(0..4) {
            0 if room >= 2 && rng.gen_bool(p_bad) => {
                // W_base = ⟨u⟩, v of weight base + 1, N v = u
                weights.push(base);
                weights.push(base + 1);
                edges.push((start + 1, start));
                exists = false;
            }
            1 if room >= 2 => {
                // N v = u with W(u) ≤ W(v) - 2
                let gap = rng.gen_range(2i64..=3);
                weights.push(base - gap);
                weights.push(base);
                edges.push((start + 1, start));
            }
            2 if room >= 2 => {
                // Jordan string in pure weight
                let len = rng.gen_range(2..=room);
                for i in 0..len {
                    weights.push(base);
                    if i > 0 {
                        edges.push((start + i - 1, start + i));
                    }
                }
            }
            _ => weights.push(base),
        }
    }
    let mut model_n: Matrix<Q> = vec![vec![q(0); dim]; dim];
    for &(from, to) in &edges {
        model_n[to][from] = q(1);
    }
    let g = unimodular(rng, dim);
    let g_inv = inverse(&g).expect("unimodular");
    let n = conjugate(&model_n, &g, &g_inv);
    let basis: Vec<Vec<Q>> = (0..dim).map(|j| (0..dim).map(|i| g[i][j].clone()).collect()).collect();
    let w = WeightFiltrationGeneric::split(&basis, &weights);
    debug_assert_eq!(mat_mul(&g, &g_inv), identity(dim));
    RmfInstance {
        n,
        w,
        basis,
        w_weights: weights,
        model_n,
        exists,
    }
}

/// Every filtration split by `inst.basis` that satisfies both defining
/// properties of `M(N, W)`. Weight assignments are searched in a window of
/// `±(dim - 1)` around the `W`-weights; a cheap combinatorial filter in the
/// adapted basis runs before the exact verification.
pub fn brute_force(inst: &RmfInstance) -> Vec<WeightFiltrationGeneric> {
    let dim = inst.basis.len();
    let spread = dim.saturating_sub(1) as i64;
    let width = (2 * spread + 1) as usize;
    let total = width.pow(dim as u32);
    let mut found = Vec::new();
    let mut m = vec![0i64; dim];
    for code in 0..total {
        let mut c = code;
        for i in 0..dim {
            m[i] = inst.w_weights[i] - spread + (c % width) as i64;
            c /= width;
        }
        if !prefilter(inst, &m) {
            continue;
        }
        let candidate = WeightFiltrationGeneric::split(&inst.basis, &m);
        if verify_relative_monodromy(&inst.n, &inst.w, &candidate).ok() {
            found.push(candidate);
        }
    }
    found
}

/// Necessary conditions for a split candidate: `N` lowers the weight of
/// every basis vector by two, and the graded pieces have symmetric
/// dimensions about each `W`-weight.
fn prefilter(inst: &RmfInstance, m: &[i64]) -> bool {
    let dim = m.len();
    for j in 0..dim {
        for i in 0..dim {
            if !Field::is_zero(&inst.model_n[i][j]) && m[i] > m[j] - 2 {
                return false;
            }
        }
    }
    for i in 0..dim {
        let w = inst.w_weights[i];
        let k = m[i] - w;
        let count = |target: i64| {
            (0..dim)
                .filter(|&t| inst.w_weights[t] == w && m[t] == target)
                .count()
        };
        if count(w + k) != count(w - k) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hodge::rmf::relative_monodromy_filtration;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn two_dimensional_single_block() {
        let inst = RmfInstance {
            n: vec![vec![q(0), q(1)], vec![q(0), q(0)]],
            w: WeightFiltrationGeneric::split_standard(&[0, 0]),
            basis: identity(2),
            w_weights: vec![0, 0],
            model_n: vec![vec![q(0), q(1)], vec![q(0), q(0)]],
            exists: true,
        };
        let found = brute_force(&inst);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].jumps(), vec![-1, 1]);
    }

    #[test]
    fn construction_matches_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let dim = rng.gen_range(1..=4);
            let inst = random_instance(&mut rng, dim, 0.3);
            let found = brute_force(&inst);
            let built = relative_monodromy_filtration(&inst.n, &inst.w).unwrap();
            match built {
                Some(m) => {
                    assert!(inst.exists);
                    assert_eq!(found, vec![m]);
                }
                None => {
                    assert!(!inst.exists);
                    assert!(found.is_empty());
                }
            }
        }
    }
}
