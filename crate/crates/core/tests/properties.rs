use num_bigint::BigUint;
use num_rational::Rational64;
use proptest::prelude::*;

use proof_speedup::experiment::{
    audit, incidence, read_matrix, read_results, speedup_matrix, write_matrix, write_results, CaseResult, Cell, Column,
    Incidence, Layout, Outcome,
};
use proof_speedup::formula::{count, formula_at, index_of, GenerationParams};
use proof_speedup::report::{emit_config, parse_config, read_tptp, export_tptp, render_incidence, RenderSpec};

fn family_results() -> impl Strategy<Value = (Layout, Vec<CaseResult>)> {
    (1usize..4, 1usize..4, 1usize..4).prop_flat_map(|(families, prefixes, rows)| {
        let cols = families * (prefixes + 1);
        let outcome = prop_oneof![
            4 => (1usize..12).prop_map(|d| (Outcome::Proved, Some(d))),
            1 => Just((Outcome::Unprovable, None)),
            1 => Just((Outcome::Budget, None)),
        ];
        let first = proptest::option::of(0..=prefixes);
        (
            proptest::collection::vec(outcome, cols * rows),
            proptest::collection::vec(proptest::collection::vec(first, rows), families),
        )
            .prop_map(move |(outs, first_containing)| {
                let columns = (0..families)
                    .flat_map(|f| (0..=prefixes).map(move |q| Column { family: f, prefix: q, size: 2 + q }))
                    .collect();
                let results = outs
                    .into_iter()
                    .enumerate()
                    .map(|(k, (outcome, length))| CaseResult {
                        column: k / rows,
                        row: k % rows,
                        outcome,
                        length,
                        states: k,
                        millis: None,
                    })
                    .collect();
                (Layout { columns, rows, first_containing }, results)
            })
    })
}

proptest! {
    #[test]
    fn index_roundtrip_in_p22(i in 1u64..=71894) {
        let p = GenerationParams::new(2, 2).unwrap();
        prop_assert_eq!(count(&p), BigUint::from(71894u32));
        let phi = formula_at(&BigUint::from(i), &p).unwrap();
        prop_assert_eq!(index_of(&phi, &p).unwrap(), BigUint::from(i));
    }

    #[test]
    fn matrix_invariants((layout, results) in family_results()) {
        let m = speedup_matrix(&layout, &results).unwrap();
        let inc = incidence(&m);
        let a = audit(&m);
        let total = layout.columns.len() * layout.rows;
        let classes = [Incidence::Positive, Incidence::Zero, Incidence::Negative, Incidence::Undefined];
        prop_assert_eq!(classes.iter().map(|&c| inc.count(c)).sum::<usize>(), total);
        prop_assert_eq!(a.total(), total);
        prop_assert_eq!(a.counts.positive + a.counts.negative + a.zero + a.no_reference, a.counts.provable);
        let proved = results.iter().filter(|r| r.outcome == Outcome::Proved).count();
        prop_assert_eq!(a.counts.provable, proved);
        for r in &results {
            let e = m.get(r.row, r.column);
            let c = layout.columns[r.column];
            if c.prefix == 0 && r.outcome == Outcome::Proved {
                prop_assert_eq!(e.cell, Cell::Value(Rational64::from_integer(0)));
            }
            if r.outcome != Outcome::Proved {
                prop_assert!(matches!(e.cell, Cell::Undefined(_)));
            }
            if c.prefix == 1 && e.cell.value().is_some() {
                prop_assert_eq!(e.reference, Some(r.column - 1));
            }
        }

        let text = write_matrix(&m, "seed = 1").unwrap();
        let (back, _) = read_matrix(&text).unwrap();
        prop_assert_eq!(incidence(&back), inc);
        prop_assert_eq!(audit(&back), a);
        let csv = write_results(&layout.columns, &results, 3).unwrap();
        prop_assert_eq!(read_results(&csv).unwrap(), results);

        let spec = RenderSpec { cell: 2, grayscale: false };
        let img = render_incidence(&m, &spec).unwrap();
        prop_assert_eq!(&img, &render_incidence(&back, &spec).unwrap());
        let header = format!("P6\n{} {}\n255\n", layout.columns.len() * 2, layout.rows * 2);
        prop_assert_eq!(img.len(), header.len() + total * 4 * 3);
    }

    #[test]
    fn config_roundtrip(depth in 0u32..3, vars in 1u32..4, j in 1usize..4, x in 1usize..20, o in 1usize..8,
                        seed in any::<u64>(), states in 1usize..1_000_000, resolution in any::<bool>()) {
        let engine = if resolution { "resolution" } else { "exact" };
        let text = format!(
            "[space]\ndepth = {depth}\nvars = {vars}\n[sampling]\nj = {j}\nx = {x}\no = {o}\nseed = {seed}\n[prover]\nengine = \"{engine}\"\nmax_states = {states}\n"
        );
        let c = parse_config(&text).unwrap();
        let once = emit_config(&c);
        prop_assert_eq!(&parse_config(&once).unwrap(), &c);
        prop_assert_eq!(emit_config(&parse_config(&once).unwrap()), once);
    }

    #[test]
    fn tptp_roundtrip(indices in proptest::collection::vec(1u64..=71894, 1..5)) {
        let p = GenerationParams::new(2, 2).unwrap();
        let mut fs: Vec<_> = indices.iter().map(|&i| formula_at(&BigUint::from(i), &p).unwrap()).collect();
        let goal = fs.pop().unwrap();
        let (t, g) = read_tptp(&export_tptp(&fs, &goal)).unwrap();
        prop_assert_eq!(t, fs);
        prop_assert_eq!(g, goal);
    }
}
