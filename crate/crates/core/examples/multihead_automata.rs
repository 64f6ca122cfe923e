//! Two- and three-head one-way automata for x#x and x#y#z#z#y#x.

use ait::experiments::{copy_recognizer, mirror_recognizer, multihead_experiment, simulate_multihead};

fn main() {
    let two = copy_recognizer();
    let three = mirror_recognizer();
    for s in ["01#01", "01#10", "011#011", "#"] {
        println!("2 heads, {s:<12} {}", simulate_multihead(&two, s));
    }
    for s in ["1#0#11#11#0#1", "1#0#11#11#1#1", "#####"] {
        println!("3 heads, {s:<14} {}", simulate_multihead(&three, s));
    }
    let r = multihead_experiment(1000, 8, 1);
    println!("{:?} pass={}", r.metrics, r.pass);
}
