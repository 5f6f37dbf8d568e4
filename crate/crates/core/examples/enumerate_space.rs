//! Sizes of the bounded formula spaces and the index of a formula.
//!
//! ```bash
//! cargo run --example enumerate_space
//! ```

use num_bigint::BigUint;
use proof_speedup::formula::{count, index_of, parse, Enumeration, GenerationParams};

fn main() {
    for (n, m) in [(0, 2), (1, 1), (1, 2), (2, 1), (2, 2), (3, 2)] {
        let p = GenerationParams::new(n, m).unwrap();
        println!("|P({n}, {m})| = {}", count(&p));
    }

    let p = GenerationParams::new(1, 2).unwrap();
    println!("\nfirst ten of P(1, 2):");
    for (i, phi) in Enumeration::new(&p).take(10).enumerate() {
        println!("{:>3}  {phi}", i + 1);
    }
    println!("\nlast three:");
    let total = count(&p);
    for phi in Enumeration::new(&p).range(&total - 2u32, total.clone()) {
        println!("{:>3}  {phi}", index_of(&phi, &p).unwrap());
    }

    let phi = parse("~p2 -> (p1 & ~p1)").unwrap();
    let p2 = GenerationParams::new(2, 2).unwrap();
    let i = index_of(&phi, &p2).unwrap();
    println!("\n{phi} has depth {} and index {i} in P(2, 2)", phi.depth());
    assert!(i <= count(&p2) && i > BigUint::from(68u32));
}
