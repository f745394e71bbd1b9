//! Words, shuffles and the symbolic bar differential.

use alblab::words::{
    bar_differential, deconcat_coproduct, format_rational, parse_rational, shuffle_product, word_basis,
    FormCombination, ShuffleElement, SymbolicFormTable,
};

fn main() {
    let basis = word_basis(3);
    println!("{} words of length <= 3: {:?}", basis.len(), basis.iter().map(|w| w.to_string()).collect::<Vec<_>>());

    let a = ShuffleElement::word("10".parse().unwrap());
    let b = ShuffleElement::word("0".parse().unwrap());
    println!("10 ш 0 = {}", serde_json::to_string(&shuffle_product(&a, &b)).unwrap());

    for (l, r) in deconcat_coproduct(&"101".parse().unwrap()) {
        println!("  ({l:?}, {r:?})");
    }

    // da = η, db = 0, a ∧ b = θ
    let one = || parse_rational("1").unwrap();
    let mut table = SymbolicFormTable::new();
    table.insert_form("eta", 2, FormCombination::new());
    table.insert_form("theta", 2, FormCombination::new());
    table.insert_form("a", 1, FormCombination::from([("eta".to_string(), one())]));
    table.insert_form("b", 1, FormCombination::new());
    table.set_wedge("a", "b", FormCombination::from([("theta".to_string(), one())])).unwrap();
    let d = bar_differential(&["a".into(), "b".into()], &table).unwrap();
    for (w, c) in d {
        println!("d∫ab ∋ {} · ∫{}", format_rational(&c), w.join(" "));
    }
}
