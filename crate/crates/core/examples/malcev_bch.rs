//! Exact BCH, Hall dimensions and Malcev coordinates of group words.

use alblab::malcev::{bch, hall_dims, malcev_coordinates, ExactSeries, GroupWord};
use alblab::words::{format_rational, Letter};

fn main() {
    for r in 1..=5 {
        let dims: Vec<usize> = hall_dims(r).unwrap().iter().map(|d| d.dim).collect();
        println!("class {r}: graded dims {dims:?}, total {}", dims.iter().sum::<usize>());
    }
    let a = ExactSeries::letter(Letter::Zero, 3);
    let b = ExactSeries::letter(Letter::One, 3);
    println!("bch(e0, e1) = {}", serde_json::to_string(&bch(&a, &b).unwrap()).unwrap());

    for w in ["0", "0 1", "0 1 0^-1 1^-1", "0 1 0^-1 1^-1 0 1 0 1^-1 0^-2"] {
        let g: GroupWord = w.parse().unwrap();
        let m = malcev_coordinates(&g, 2).unwrap();
        let coords: Vec<String> = m.hall.iter().map(|(b, c)| format!("{b}: {}", format_rational(c))).collect();
        println!("{w:>28} -> {}", if coords.is_empty() { "identity".into() } else { coords.join(", ") });
    }
}
