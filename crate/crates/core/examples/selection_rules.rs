//! Selection rules on bit strings and exact bounds on the measure of the
//! sequences whose selection starts with a given word.

use ait::bitcore::{bits, Dyadic};
use ait::randomness::{preimage_measure, select, SelectionRule};

fn main() {
    println!("even positions of 00100100: {}", select(&SelectionRule::EvenPositions, &bits("00100100")));
    println!("after zeros in 00101100:   {}", select(&SelectionRule::AfterZeros, &bits("00101100")));
    let x = bits("011");
    for rule in SelectionRule::builtins() {
        let b = preimage_measure(&rule, &x, 12);
        println!(
            "{rule:?}: measure in [{}, {}], cylinder {}",
            b.lower,
            b.upper,
            Dyadic::pow2_neg(x.len() as u32)
        );
    }
}
