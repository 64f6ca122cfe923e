//! Runs TBF-1 programs in each mode and lists the shortest halting
//! descriptions.

use ait::bitcore::bits;
use ait::toyvm::{
    assemble, condition_copier, enumerate_halting, literal_program, run, run_plain, Coins, Instr, MachineMode, RunBudget,
};

fn main() {
    let x = bits("1011");
    let lit = literal_program(&x);
    println!("literal program for {x}: {lit} ({} bits)", lit.len());
    println!("  {:?}", run_plain(&lit, MachineMode::Plain, 100));

    let copier = condition_copier();
    let out = run(&copier, MachineMode::Plain, &bits("0110"), Coins::None, RunBudget::new(100));
    println!("condition copier on 0110: {out:?}");

    use Instr::*;
    let coin = assemble(&[ReadData, Out, End]);
    for c in ["0", "1"] {
        let out = run(&coin, MachineMode::Coin, &bits(""), Coins::Bits(&bits(c)), RunBudget::new(10));
        println!("coin machine READD OUT END with coin {c}: {out:?}");
    }

    println!("halting prefix descriptions up to 8 bits:");
    for e in enumerate_halting(MachineMode::Prefix, &bits(""), 8, RunBudget::new(64)) {
        println!("  {:>8} -> {:?} in {} steps", e.description.to_string(), e.output.to_string(), e.steps);
    }
}
