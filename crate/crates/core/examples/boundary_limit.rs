//! The extended map near the boundary point x = 0.

use alblab::albanese::extended_albanese;
use alblab::hodge::boundary_chart_point;
use alblab::paths::QuadratureConfig;
use num_complex::Complex64;

fn main() {
    let cfg = QuadratureConfig::default();
    for k in 1..=6 {
        let x = Complex64::new(10f64.powi(-k), 0.0);
        let y = extended_albanese(x, &cfg).unwrap();
        println!("x = 1e-{k}: |β| = {:.3e}, |λ| = {:.3e}", y.beta.norm(), y.lambda.norm());
    }
    let y0 = extended_albanese(Complex64::new(0.0, 0.0), &cfg).unwrap();
    println!("x = 0: {}", serde_json::to_string(&boundary_chart_point(&y0).unwrap()).unwrap());
}
