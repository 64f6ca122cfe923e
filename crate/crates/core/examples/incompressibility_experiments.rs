//! Matrix rank, graph connectivity, transitive sub-tournaments and heapsort
//! on pseudo-random inputs.

use ait::experiments::{
    connectivity_experiment, heapsort_experiment, rank_experiment, tournament_experiment, transitive_witness,
    Tournament,
};
use ait::prng::splitmix;

fn main() {
    let seed = 1;
    for r in [
        rank_experiment(64, 50, seed),
        connectivity_experiment(64, 50, seed),
        tournament_experiment(12, 50, seed),
        heapsort_experiment(1 << 12, 10, seed),
    ] {
        println!("{:<10} pass={} {:?}", r.name, r.pass, r.metrics);
    }
    let t = Tournament::random(40, &mut splitmix(5));
    let w = transitive_witness(&t);
    println!("transitive chain in a random 40-vertex tournament: {w:?}");
}
