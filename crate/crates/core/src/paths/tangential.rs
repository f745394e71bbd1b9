//! Regularized signatures of straight paths leaving a puncture along a
//! tangent vector.
//!
//! Near `0` every coefficient of the generating series is a polynomial in
//! `log x` whose coefficients are power series in `x`. Integrating term by
//! term with zero constants of integration gives the solution normalized by
//! `S(x) ~ exp(e₀ log x)` as `x → 0` (tangent vector 1); other tangent
//! vectors multiply on the left by `exp(-e₀ log v)`. Paths leaving `1` are
//! reduced to paths leaving `0` through `y = 1 - x`, which exchanges
//! `ω₀ ↔ -ω₁`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::series::{basis_len, TruncatedSeries};
use super::Puncture;
use crate::words::{Letter, Word};

/// Coefficients `a[n][j]` of `Σ a[n][j] xⁿ (log x)^j`.
type LogPowerSeries = Vec<Vec<f64>>;

/// Number of power-series terms needed at radius `rho` (< 1).
fn terms_needed(rho: f64) -> usize {
    if rho <= 0.0 {
        return 1;
    }
    let n = (41.0 / -rho.log(2.0)).ceil() as usize + 4;
    n.clamp(4, 400)
}

fn integrate_x_power(out: &mut [Vec<f64>], n: usize, j: usize, c: f64) {
    // ∫ x^{n-1} L^j dx = x^n Σ_{i≤j} (-1)^i j!/(j-i)! / n^{i+1} L^{j-i},  n ≥ 1
    let nf = n as f64;
    let mut factor = c / nf;
    for i in 0..=j {
        out[n][j - i] += factor;
        factor *= -((j - i) as f64) / nf;
    }
}

/// Regularized series coefficients at the puncture `0` with tangent vector 1,
/// for every word of length `≤ level`, truncated at `x^max_n`.
fn log_power_series(level: usize, max_n: usize) -> Vec<LogPowerSeries> {
    let zero = || vec![vec![0.0; level + 1]; max_n + 1];
    let mut out: Vec<LogPowerSeries> = Vec::with_capacity(basis_len(level));
    let mut unit = zero();
    unit[0][0] = 1.0;
    out.push(unit);
    for idx in 1..basis_len(level) {
        let w = Word::from_index(idx);
        let letters = w.letters();
        let prefix = Word::new(letters[..letters.len() - 1].to_vec());
        let src = &out[prefix.index()];
        let mut b = zero();
        match letters[letters.len() - 1] {
            Letter::Zero => {
                for n in 0..=max_n {
                    for j in 0..=level {
                        let c = src[n][j];
                        if c == 0.0 {
                            continue;
                        }
                        if n == 0 {
                            if j < level {
                                b[0][j + 1] += c / (j + 1) as f64;
                            }
                        } else {
                            integrate_x_power(&mut b, n, j, c);
                        }
                    }
                }
            }
            Letter::One => {
                let mut acc = vec![0.0; level + 1];
                for n in 0..max_n {
                    for j in 0..=level {
                        acc[j] += src[n][j];
                    }
                    for (j, &c) in acc.iter().enumerate() {
                        if c != 0.0 {
                            integrate_x_power(&mut b, n + 1, j, c);
                        }
                    }
                }
            }
        }
        out.push(b);
    }
    out
}

/// The angle in `(-π, π]` from direction `v` to direction `d`.
pub(crate) fn turning_angle(v: Complex64, d: Complex64) -> f64 {
    let a = (d / v).arg();
    if a <= -PI {
        a + 2.0 * PI
    } else {
        a
    }
}

/// Regularized signature of the straight path from the tangential base point
/// `(0, v)` to `q`, `0 < |q| < 1`. The path leaves `0` along `v` and turns
/// by the angle in `(-π, π]` to the direction of `q`.
fn from_zero(q: Complex64, v: Complex64, level: usize) -> TruncatedSeries {
    let rho = q.norm();
    let max_n = terms_needed(rho);
    let series = log_power_series(level, max_n);
    // branch of log q continued from the ray along v
    let log_v = Complex64::new(v.norm().ln(), v.arg());
    let log_q = Complex64::new(rho.ln(), v.arg() + turning_angle(v, q));

    let mut powers_q = vec![Complex64::new(1.0, 0.0); max_n + 1];
    for n in 1..=max_n {
        powers_q[n] = powers_q[n - 1] * q;
    }
    let mut powers_l = vec![Complex64::new(1.0, 0.0); level + 1];
    for j in 1..=level {
        powers_l[j] = powers_l[j - 1] * log_q;
    }
    let values: Vec<Complex64> = series
        .iter()
        .map(|a| {
            let mut s = Complex64::new(0.0, 0.0);
            for n in (0..=max_n).rev() {
                let mut inner = Complex64::new(0.0, 0.0);
                for j in 0..=level {
                    if a[n][j] != 0.0 {
                        inner += powers_l[j] * a[n][j];
                    }
                }
                s += inner * powers_q[n];
            }
            s
        })
        .collect();
    let base = TruncatedSeries::from_coeffs(level, values);
    TruncatedSeries::exp_letter(Letter::Zero, -log_v, level).mul(&base)
}

/// Regularized signature from the tangential base point `(puncture, v)` to
/// the point `q` with `0 < |q - puncture| < 1`.
pub(crate) fn regularized_lead_in(
    puncture: Puncture,
    v: Complex64,
    q: Complex64,
    level: usize,
) -> TruncatedSeries {
    match puncture {
        Puncture::Zero => from_zero(q, v, level),
        Puncture::One => {
            let t = from_zero(Complex64::new(1.0, 0.0) - q, -v, level);
            let coeffs = (0..basis_len(level))
                .map(|i| {
                    let w = Word::from_index(i);
                    let c = t.coefficient(&w.swapped());
                    if w.len() % 2 == 1 {
                        -c
                    } else {
                        c
                    }
                })
                .collect();
            TruncatedSeries::from_coeffs(level, coeffs)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dilog_series(x: f64) -> f64 {
        (1..2000).map(|n| x.powi(n) / (n * n) as f64).sum()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn classical_coefficients_at_one_half() {
        let s = regularized_lead_in(Puncture::Zero, c(1.0, 0.0), c(0.5, 0.0), 3);
        let w = |t: &str| s.coefficient(&t.parse().unwrap());
        let ln2 = 2f64.ln();
        assert!((w("0") - c(-ln2, 0.0)).norm() < 1e-15);
        assert!((w("1") - c(ln2, 0.0)).norm() < 1e-15);
        let li2 = PI * PI / 12.0 - ln2 * ln2 / 2.0;
        assert!((w("10") - c(li2, 0.0)).norm() < 1e-15);
        assert!((w("10").re - dilog_series(0.5)).abs() < 1e-15);
        assert!(s.shuffle_defect(3) < 1e-13);
    }

    #[test]
    fn tangent_vector_rescales_log() {
        let v = c(0.0, 2.0);
        let q = c(0.0, 0.25);
        let s = regularized_lead_in(Puncture::Zero, v, q, 2);
        // log(q / v) along the ray = log(1/8)
        assert!((s.coefficient(&"0".parse().unwrap()) - c((0.125f64).ln(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn leaving_one_towards_zero() {
        // tangent -1 at 1: y = 1 - x leaves 0 along +1
        let s = regularized_lead_in(Puncture::One, c(-1.0, 0.0), c(0.5, 0.0), 2);
        let ln2 = 2f64.ln();
        // ∫ dx/x from 1 to 1/2 = -log 2; regularized ∫ dx/(1-x) = -log(1/2)
        assert!((s.coefficient(&"0".parse().unwrap()) - c(-ln2, 0.0)).norm() < 1e-15);
        assert!((s.coefficient(&"1".parse().unwrap()) - c(ln2, 0.0)).norm() < 1e-15);
    }
}
