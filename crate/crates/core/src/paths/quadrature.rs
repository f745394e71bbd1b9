//! Panel rules for nested (cumulative) integration on `[-1, 1]`.
//!
//! A rule maps samples `f(x_k)` to `∫_{-1}^{x_k} f` at every node and to
//! `∫_{-1}^{1} f`. Iterating the cumulative map integrates a whole chain of
//! iterated integrals on one panel.

use std::f64::consts::PI;
use std::sync::OnceLock;

#[derive(Debug, Clone)]
pub struct PanelRule {
    pub nodes: Vec<f64>,
    /// `cumulative[k][j]`: weight of `f(x_j)` in `∫_{-1}^{x_k} f`.
    pub cumulative: Vec<Vec<f64>>,
    /// Weights of `∫_{-1}^{1} f`.
    pub total: Vec<f64>,
}

impl PanelRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Chebyshev–Lobatto nodes `x_k = -cos(πk/N)`, integrated through the
    /// Chebyshev expansion of the interpolant.
    pub fn chebyshev_lobatto(n: usize) -> PanelRule {
        assert!(n >= 3);
        let big_n = n - 1;
        let theta: Vec<f64> = (0..n).map(|k| PI * (big_n - k) as f64 / big_n as f64).collect();
        let nodes: Vec<f64> = theta.iter().map(|t| t.cos()).collect();

        let mut cumulative = vec![vec![0.0; n]; n];
        for j in 0..n {
            // Chebyshev coefficients a_m of the interpolant of the unit vector e_j
            let mut a = vec![0.0; n];
            for (m, am) in a.iter_mut().enumerate() {
                let half = if j == 0 || j == big_n { 0.5 } else { 1.0 };
                *am = 2.0 / big_n as f64 * half * (m as f64 * theta[j]).cos();
                if m == 0 || m == big_n {
                    *am *= 0.5;
                }
            }
            // antiderivative coefficients b (degree up to n)
            let mut b = vec![0.0; n + 1];
            for (m, &am) in a.iter().enumerate() {
                match m {
                    0 => b[1] += am,
                    1 => b[2] += am / 4.0,
                    _ => {
                        b[m + 1] += am / (2.0 * (m + 1) as f64);
                        b[m - 1] -= am / (2.0 * (m - 1) as f64);
                    }
                }
            }
            let at_minus_one: f64 = b
                .iter()
                .enumerate()
                .map(|(m, bm)| if m % 2 == 0 { *bm } else { -*bm })
                .sum();
            for k in 0..n {
                let v: f64 = b
                    .iter()
                    .enumerate()
                    .map(|(m, bm)| bm * (m as f64 * theta[k]).cos())
                    .sum();
                cumulative[k][j] = v - at_minus_one;
            }
        }
        let total = cumulative[n - 1].clone();
        PanelRule {
            nodes,
            cumulative,
            total,
        }
    }

    /// Gauss–Legendre nodes, integrated through the Legendre expansion of the
    /// interpolant.
    pub fn gauss_legendre(n: usize) -> PanelRule {
        assert!(n >= 2);
        let (nodes, weights) = gauss_legendre_nodes(n);
        let mut cumulative = vec![vec![0.0; n]; n];
        for j in 0..n {
            // Legendre coefficients of the interpolant of e_j
            let c: Vec<f64> = (0..n)
                .map(|m| (2 * m + 1) as f64 / 2.0 * weights[j] * legendre(m, nodes[j]).0)
                .collect();
            for k in 0..n {
                let x = nodes[k];
                let mut v = c[0] * (x + 1.0);
                for (m, cm) in c.iter().enumerate().skip(1) {
                    v += cm * (legendre(m + 1, x).0 - legendre(m - 1, x).0) / (2 * m + 1) as f64;
                }
                cumulative[k][j] = v;
            }
        }
        PanelRule {
            nodes,
            cumulative,
            total: weights,
        }
    }
}

/// `(P_n(x), P_n'(x))`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = if (1.0 - x * x).abs() < 1e-300 {
        0.0
    } else {
        n as f64 * (p0 - x * p1) / (1.0 - x * x)
    };
    (p1, dp)
}

fn gauss_legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 1..=n {
        let mut x = (PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    // ascending order
    nodes.reverse();
    weights.reverse();
    (nodes, weights)
}

pub(crate) const CHEBYSHEV_NODES: usize = 24;
pub(crate) const LEGENDRE_NODES: usize = 20;

pub(crate) fn chebyshev_rule() -> &'static PanelRule {
    static RULE: OnceLock<PanelRule> = OnceLock::new();
    RULE.get_or_init(|| PanelRule::chebyshev_lobatto(CHEBYSHEV_NODES))
}

pub(crate) fn legendre_rule() -> &'static PanelRule {
    static RULE: OnceLock<PanelRule> = OnceLock::new();
    RULE.get_or_init(|| PanelRule::gauss_legendre(LEGENDRE_NODES))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_rule(rule: &PanelRule) {
        // f(x) = cos(3x): antiderivative sin(3x)/3
        let f: Vec<f64> = rule.nodes.iter().map(|x| (3.0 * x).cos()).collect();
        for (k, row) in rule.cumulative.iter().enumerate() {
            let approx: f64 = row.iter().zip(&f).map(|(w, v)| w * v).sum();
            let exact = ((3.0 * rule.nodes[k]).sin() + 3.0f64.sin()) / 3.0;
            assert!((approx - exact).abs() < 1e-13, "node {k}: {approx} vs {exact}");
        }
        let total: f64 = rule.total.iter().zip(&f).map(|(w, v)| w * v).sum();
        assert!((total - 2.0 * 3.0f64.sin() / 3.0).abs() < 1e-13);
    }

    #[test]
    fn chebyshev_integrates_smooth_functions() {
        check_rule(&PanelRule::chebyshev_lobatto(24));
    }

    #[test]
    fn legendre_integrates_smooth_functions() {
        check_rule(&PanelRule::gauss_legendre(20));
    }

    #[test]
    fn legendre_weights_sum_to_two() {
        let (x, w) = gauss_legendre_nodes(12);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }
}
