//! Li₂(1/2) as the iterated integral of ω₁ω₀ from the tangential base point.

use std::f64::consts::PI;

use alblab::paths::{iterated_integral, make_path, QuadratureConfig};
use serde_json::json;

fn main() {
    let cfg = QuadratureConfig::default();
    let path = make_path(&json!({"waypoints": [0.5], "tangential_start": {"at": 0}})).unwrap();
    let v = iterated_integral(&"10".parse().unwrap(), &path, &cfg).unwrap();
    let series: f64 = (1..100).map(|n| 0.5f64.powi(n) / (n * n) as f64).sum();
    let closed = PI * PI / 12.0 - 2f64.ln().powi(2) / 2.0;
    println!("iterated integral  {:.16}", v.value.re);
    println!("series             {series:.16}");
    println!("closed form        {closed:.16}");
    println!("error estimate     {:.1e}", v.abs_err_est);

    // the same value from an interior start close to 0
    for eps in [1e-3, 1e-6, 1e-9] {
        let p = make_path(&json!({"waypoints": [eps, 0.5]})).unwrap();
        let v = iterated_integral(&"10".parse().unwrap(), &p, &cfg).unwrap();
        println!("start at {eps:e}: {:.3e} off", (v.value.re - series).abs());
    }
}
