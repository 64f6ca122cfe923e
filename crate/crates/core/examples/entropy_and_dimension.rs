//! KT codelength against the entropy bound, and complexity rates of long
//! prefixes.

use ait::prng::{bernoulli, bernoulli_bits, splitmix};
use ait::randomness::{dimension_estimate, entropy_bound_report, shannon_entropy, DimensionEstimator};

fn main() {
    for p in [0.5, 0.75, 0.9] {
        let r = entropy_bound_report(&bernoulli_bits(p, 1, 10_000));
        println!(
            "p={p}: KT={} bound={:.1} slack={:.1} pass={}",
            r.estimate, r.bound, r.slack, r.pass
        );
    }
    let lengths: Vec<usize> = (1..=10).map(|k| k * 10_000).collect();
    let mut rng = splitmix(3);
    let mut stream = move || bernoulli(&mut rng, 0.11);
    let est = dimension_estimate(&mut stream, &lengths, DimensionEstimator::Kt, 1024).unwrap();
    println!("Bernoulli(0.11): H = {:.4}", shannon_entropy(0.11));
    for (n, r) in &est.per_n {
        println!("  n={n:>6} rate={r:.4}");
    }
    println!("  tail minimum {:.4}", est.running_min_tail.unwrap());
}
