//! Prints value-set sizes of `P_k` over small fields, with the exhaustive
//! count next to the closed formula.
//!
//! ```text
//! cargo run --release -p folding --example value_table -- g2 12
//! ```

use folding::field::{field_of_order, prime_powers};
use folding::formulas::cardinality;
use folding::value_set::exhaustive_count;
use folding::AlgebraId;

fn main() {
    let mut args = std::env::args().skip(1);
    let alg: AlgebraId = args.next().as_deref().unwrap_or("b2").parse().expect("algebra name");
    let kmax: u64 = args.next().map(|s| s.parse().expect("kmax")).unwrap_or(8);

    print!("{:>4}", "q\\k");
    for k in 1..=kmax {
        print!("{k:>6}");
    }
    println!();
    for q in prime_powers(2, 16) {
        let field = field_of_order(q).unwrap();
        print!("{q:>4}");
        for k in 1..=kmax {
            let seen = exhaustive_count(alg, &field, k).unwrap();
            let predicted = cardinality(alg, q, k).unwrap();
            let mark = if seen == predicted { ' ' } else { '!' };
            print!("{seen:>5}{mark}");
        }
        println!();
    }
}
