use std::f64::consts::PI;

use alblab::malcev::{exp_trunc, ExactSeries};
use alblab::paths::{
    compose_signatures, gamma0, make_path, random_interior_path, signature, Path, QuadratureConfig,
    TruncatedSeries,
};
use alblab::words::{Letter, Word};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

const TOL: f64 = 1e-9; // 10 · abs_tol

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn to_float(s: &ExactSeries, scale: Complex64) -> TruncatedSeries {
    let mut out = TruncatedSeries::zero(s.level());
    for (w, c) in s.terms() {
        out.set(&w, scale.powu(w.len() as u32) * c.to_f64().unwrap());
    }
    out
}

#[test]
fn loop_about_zero_matches_exact_exponential() {
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let s = signature(&gamma0(1), 3, &cfg()).unwrap();
    let e = exp_trunc(&ExactSeries::letter(Letter::Zero, 3)).unwrap();
    assert!(s.max_diff(&to_float(&e, two_pi_i)) < TOL);
}

#[test]
fn commuting_exponentials_compose() {
    let (s, t) = (Complex64::new(0.3, -1.0), Complex64::new(-2.0, 0.5));
    let a = TruncatedSeries::exp_letter(Letter::Zero, s, 2);
    let b = TruncatedSeries::exp_letter(Letter::Zero, t, 2);
    let ab = compose_signatures(&a, &b).unwrap();
    assert!(ab.max_diff(&TruncatedSeries::exp_letter(Letter::Zero, s + t, 2)) < 1e-14);
    assert!(compose_signatures(&a, &TruncatedSeries::identity(3)).is_err());
}

#[test]
fn reparametrization_does_not_change_signatures() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..10 {
        let p = random_interior_path(&mut rng, 3, 0.1);
        let kappas: Vec<f64> = (0..p.steps().len()).map(|_| rng.gen_range(-0.9..0.9)).collect();
        let q = p.reparametrized(&kappas);
        let (a, b) = (signature(&p, 3, &cfg()).unwrap(), signature(&q, 3, &cfg()).unwrap());
        assert!(a.max_diff(&b) < TOL, "{}", a.max_diff(&b));
    }
}

#[test]
fn homotopic_paths_agree() {
    // both pass above 0 and 1 without separating them from each other
    let straight = make_path(&json!({"waypoints": [[2.0, 0.5], [-1.0, 0.5]]})).unwrap();
    let bent = make_path(&json!({"waypoints": [[2.0, 0.5], [1.5, 2.0], [0.0, 3.0], [-1.0, 0.5]]})).unwrap();
    let (a, b) = (signature(&straight, 4, &cfg()).unwrap(), signature(&bent, 4, &cfg()).unwrap());
    assert!(a.max_diff(&b) < TOL);

    // going below 1 instead picks up the residue at 1
    let below = make_path(&json!({"waypoints": [[2.0, 0.5], [1.5, -1.0], [0.5, -0.5], [0.5, 0.5], [-1.0, 0.5]]})).unwrap();
    let c = signature(&below, 1, &cfg()).unwrap();
    let w1: Word = "1".parse().unwrap();
    let jump = c.coefficient(&w1) - a.coefficient(&w1);
    assert!((jump.im.abs() - 2.0 * PI).abs() < TOL, "{jump}");
}

/// `Σ_{S ⊆ {1..k}} (-1)^{k-|S|} I_w(Π_{j∈S} γ_j)` for loops at a common point.
fn chen_pairing(w: &Word, loops: &[&Path]) -> Complex64 {
    let k = loops.len();
    let mut total = Complex64::new(0.0, 0.0);
    for mask in 0u32..(1 << k) {
        let mut p = Path::constant();
        for (j, l) in loops.iter().enumerate() {
            if mask & (1 << j) != 0 {
                p = p.then(l).unwrap();
            }
        }
        let sign = if (k - mask.count_ones() as usize) % 2 == 0 { 1.0 } else { -1.0 };
        let value = if p.is_empty() {
            if w.is_empty() { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }
        } else {
            signature(&p, w.len(), &cfg()).unwrap().coefficient(w)
        };
        total += sign * value;
    }
    total
}

#[test]
fn chen_pairing_vanishes_beyond_the_word_length() {
    let a = make_path(&json!({"circle": {"center": 0, "radius": 0.5, "start_angle": 0.0}})).unwrap();
    let b = make_path(&json!({"circle": {"center": 1, "radius": 0.5, "start_angle": PI}})).unwrap();
    for w in ["0", "1"] {
        let w: Word = w.parse().unwrap();
        assert!(chen_pairing(&w, &[&a, &b]).norm() < TOL);
        assert!(chen_pairing(&w, &[&b, &b]).norm() < TOL);
    }
    for w in ["00", "01", "10", "11"] {
        let w: Word = w.parse().unwrap();
        for loops in [[&a, &b, &a], [&b, &a, &a], [&a, &b, &b]] {
            assert!(chen_pairing(&w, &loops).norm() < TOL);
        }
    }
    // with k = |w| the pairing sees the loops
    let w01: Word = "01".parse().unwrap();
    assert!(chen_pairing(&w01, &[&a, &b]).norm() > 1.0);
}

#[test]
fn path_spec_examples() {
    assert!(make_path(&json!({"waypoints": [0.5, 1.0]})).is_err());
    let p = make_path(&json!({"waypoints": [0.25, 0.5]})).unwrap();
    assert_eq!(p.steps().len(), 1);
    let p = make_path(&json!({"compose": [{"loop": "gamma0"}, {"loop": "gamma1", "turns": -1}]})).unwrap();
    assert!(p.is_closed());
    let s = signature(&p, 1, &cfg()).unwrap();
    let i = |w: &str| s.coefficient(&w.parse().unwrap());
    assert!((i("0") - Complex64::new(0.0, 2.0 * PI)).norm() < TOL);
    assert!((i("1") - Complex64::new(0.0, 2.0 * PI)).norm() < TOL);
}
