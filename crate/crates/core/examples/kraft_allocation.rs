//! Online Kraft–Chaitin allocation with the best-fit rule.

use ait::kraft::{allocator_new, kraft_code};

fn main() {
    let mut s = allocator_new();
    for n in [3, 1, 4, 2, 5, 5] {
        let c = s.allocate(n).expect("total stays below one");
        let free: Vec<String> = s.free().map(|f| f.to_string()).collect();
        println!("request {n}: {c:<6} free segments {free:?}");
    }
    println!("allocated measure {}", s.allocated_measure());
    match kraft_code(&[1, 2, 2, 3]) {
        Ok(c) => println!("{c:?}"),
        Err(e) => println!("overflow at request {} after granting {:?}", e.index, e.granted),
    }
}
