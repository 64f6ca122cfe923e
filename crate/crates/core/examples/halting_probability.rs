//! Exact halting bounds of coin machines, a machine halting with a given
//! lower-semicomputable probability, and a priori lower bounds.

use ait::bitcore::bits;
use ait::complexity::Budgets;
use ait::semimeasure::{
    apriori_lower, coding_gaps, gap_histogram, halting_bounds, lsc_halting_bounds, output_distribution, LscSequence,
};
use ait::toyvm::{assemble, Instr::*};
use num_bigint::BigInt;
use num_rational::BigRational;

fn main() {
    for prog in [vec![End], vec![ReadData, Open, Close, End], vec![ReadData, Out, End]] {
        let code = assemble(&prog);
        let b = halting_bounds(&code, 12).unwrap();
        let d = output_distribution(&code, 12).unwrap();
        println!("{code}: halts with probability in [{}, {}], outputs {:?}", b.lower, b.upper, d.entries);
    }
    let p = LscSequence::constant(BigRational::new(BigInt::from(5), BigInt::from(8))).unwrap();
    let b = lsc_halting_bounds(&p, 20);
    println!("p = 5/8 at depth 20: [{}, {}]", b.lower.to_f64(), b.upper.to_f64());

    let budgets = Budgets::new(12, 128);
    println!("m(\"\") >= {}", apriori_lower(&bits(""), budgets));
    let gaps = coding_gaps(budgets);
    println!("{} outputs, coding inequality holds for all: {}", gaps.len(), gaps.iter().all(|g| g.holds));
    println!("gap histogram {:?}", gap_histogram(&gaps));
}
