//! Bounded plain, conditional, prefix and pair complexity, the monotone
//! approximation k(x, t), and the KT upper bound for long strings.

use ait::bitcore::bits;
use ait::complexity::{c_cond, c_pair, c_plain, deficiency, k_approx, k_prefix, kt_estimate, Budgets, Estimator};
use ait::prng::bernoulli_bits;

fn main() {
    let b = Budgets::new(16, 128);
    for x in ["", "0", "1", "0000", "0101"] {
        let x = bits(x);
        let c = c_plain(&x, b, &bits(""));
        let k = k_prefix(&x, b);
        println!(
            "x={:<5} C={:?} witness={:?}  K={:?}",
            x.to_string(),
            c.value,
            c.witness.map(|w| w.to_string()),
            k.value
        );
    }
    let y = bits("110100");
    println!("C(y | y) = {:?}", c_cond(&y, &y, Budgets::new(26, 64)).value);
    println!("C(0, 1) = {:?}", c_pair(&bits("0"), &bits("1"), Budgets::new(24, 256)).value);
    for t in [0, 8, 32, 128] {
        println!("k(0000, {t}) = {}", k_approx(&bits("0000"), t, 29));
    }
    let long = bernoulli_bits(0.9, 7, 10_000);
    println!("KT bound for 10^4 Bernoulli(0.9) bits: {:?}", kt_estimate(&long).value);
    println!("deficiency under KT: {:?}", deficiency(&long, Estimator::Kt));
}
