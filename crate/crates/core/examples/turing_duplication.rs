//! The one-tape duplicator: output, step counts and crossing counts.

use ait::experiments::turing::{parse_tape, render};
use ait::experiments::{duplicator, tm_duplication_experiment};

fn main() {
    let tm = duplicator();
    let run = tm.run(&parse_tape("0011"), 10_000).unwrap();
    println!("0011 -> {} in {} steps", render(&run.output), run.steps);
    println!("crossings per boundary: {:?}", run.crossings);
    let r = tm_duplication_experiment(&[32, 64, 128, 256], 1);
    for (k, v) in &r.metrics {
        println!("  {k} = {v}");
    }
    println!("pass = {}", r.pass);
}
