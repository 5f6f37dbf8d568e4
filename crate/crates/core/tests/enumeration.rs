//! The closed-form enumeration against a direct set construction.

use std::collections::HashSet;

use num_bigint::BigUint;
use proof_speedup::formula::{count, formula_at, index_of, Connective, Enumeration, Formula, GenerationParams};

/// `P(0)` is the variables. `P(k)` adds the negations of `P(k-1)` and every
/// binary formula over `P(k-1)` and its negations.
fn brute_force(depth: u32, vars: u32, ops: &[Connective]) -> HashSet<Formula> {
    let mut level: HashSet<Formula> = (1..=vars).map(Formula::var).collect();
    for _ in 0..depth {
        let negated: Vec<Formula> = level.iter().map(|f| Formula::not(f.clone())).collect();
        let mut operands: Vec<Formula> = level.iter().cloned().collect();
        operands.extend(negated.iter().cloned());
        let mut next = level.clone();
        next.extend(negated);
        for &op in ops {
            for l in &operands {
                for r in &operands {
                    next.insert(Formula::binary(op, l.clone(), r.clone()));
                }
            }
        }
        level = next;
    }
    level
}

fn params(n: u32, m: u32) -> GenerationParams {
    GenerationParams::new(n, m).unwrap()
}

#[test]
fn counts_match_direct_construction() {
    for (n, m) in [(0, 1), (0, 3), (1, 1), (1, 2), (1, 3), (2, 1), (2, 2)] {
        let set = brute_force(n, m, &Connective::ALL);
        assert_eq!(count(&params(n, m)), BigUint::from(set.len()), "P({n}, {m})");
    }
}

#[test]
fn frozen_sizes() {
    // From `brute_force` above.
    let sizes = [((1, 1), 18u64), ((1, 2), 68), ((2, 1), 4919), ((2, 2), 71894)];
    for ((n, m), size) in sizes {
        assert_eq!(count(&params(n, m)), BigUint::from(size));
    }
}

#[test]
fn enumeration_is_the_whole_space_without_repeats() {
    let p = params(2, 1);
    let listed: Vec<Formula> = Enumeration::new(&p).collect();
    let unique: HashSet<Formula> = listed.iter().cloned().collect();
    assert_eq!(unique.len(), listed.len());
    assert_eq!(unique, brute_force(2, 1, &Connective::ALL));
}

#[test]
fn restricted_connectives() {
    let ops = [Connective::Implies, Connective::And];
    let p = GenerationParams::with_ops(2, 1, "implies,and".parse().unwrap()).unwrap();
    let listed: HashSet<Formula> = Enumeration::new(&p).collect();
    assert_eq!(listed, brute_force(2, 1, &ops));
}

#[test]
fn index_roundtrip_over_p21() {
    let p = params(2, 1);
    let total = count(&p);
    let mut i = BigUint::from(1u32);
    while i <= total {
        let phi = formula_at(&i, &p).unwrap();
        assert_eq!(index_of(&phi, &p).unwrap(), i);
        i += 1u32;
    }
    assert!(formula_at(&(total + 1u32), &p).is_err());
}
