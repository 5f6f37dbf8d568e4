//! Writing an argument for external provers and reading it back.
//!
//! ```bash
//! cargo run --example tptp_export
//! ```

use proof_speedup::formula::{parse, parse_list};
use proof_speedup::report::{export_tptp, read_tptp};

fn main() {
    let t = parse_list("p1 <-> ~p2, (p1 -> p3) & (p2 -> p3)").unwrap();
    let g = parse("p3 | ~p3").unwrap();
    let text = export_tptp(&t, &g);
    print!("{text}");
    let (t2, g2) = read_tptp(&format!("% comments are skipped\n{text}")).unwrap();
    assert_eq!((t2, g2), (t, g));
}
