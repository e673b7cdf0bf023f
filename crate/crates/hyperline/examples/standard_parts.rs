//! Standard parts relative to a viewpoint: convergent presentations have a
//! unique one, oscillating presentations branch, and each branch resolves
//! under the extension carved out by its cell.
//!
//! Run with `cargo run --example standard_parts`.

use hyperline::calculus::{standard_part, StResult};
use hyperline::filter::Filter;
use hyperline::index_set::IndexSet;
use hyperline::ratfunc::RationalFunc;
use hyperline::rational::{qi, qr};
use hyperline::seq::Seq;

fn main() -> hyperline::Result<()> {
    let f0 = Filter::frechet();
    let recip = RationalFunc::constant(qi(1))
        .div(&RationalFunc::var().add(&RationalFunc::constant(qi(1))))?;
    let eps = Seq::piecewise(vec![(IndexSet::universe(), recip)])?;

    let above = Seq::constant(qi(3)).add(&eps);
    println!("st(3 + eps) at F0: {}", standard_part(&above, &f0)?);

    let alternating = Seq::piecewise(vec![
        (IndexSet::residue(0, 2)?, RationalFunc::constant(qr(1, 2))),
        (IndexSet::residue(1, 2)?, RationalFunc::constant(qr(-1, 2))),
    ])?;
    let st = standard_part(&alternating, &f0)?;
    println!("st(alternating) at F0: {st}");
    if let StResult::Branches(branches) = st {
        for (cell, limit) in branches {
            let extension = f0.extend(&cell)?;
            println!(
                "  extending by {cell}: {} (limit was {limit})",
                standard_part(&alternating, &extension)?
            );
        }
    }

    // three distinct cluster values over residue classes mod 3
    let three_way = Seq::piecewise(vec![
        (IndexSet::residue(0, 3)?, RationalFunc::constant(qi(0))),
        (IndexSet::residue(1, 3)?, RationalFunc::constant(qi(1))),
        (IndexSet::residue(2, 3)?, RationalFunc::constant(qi(2))),
    ])?;
    println!("st(three-way) at F0: {}", standard_part(&three_way, &f0)?);

    let unbounded = Seq::piecewise(vec![(IndexSet::universe(), RationalFunc::var())])?;
    println!("st(n) at F0: {}", standard_part(&unbounded, &f0)?);
    Ok(())
}
