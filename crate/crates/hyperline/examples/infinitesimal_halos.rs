//! Every presentation has strictly more neighbors in its halo than
//! presentations it is identified with: nudging by 1/(n+1) lands inside
//! every halo while being nowhere equal.
//!
//! Run with `cargo run --example infinitesimal_halos`.

use hyperline::calculus::{in_halo, is_finite_at, is_infinitesimal};
use hyperline::filter::Filter;
use hyperline::index_set::IndexSet;
use hyperline::ratfunc::RationalFunc;
use hyperline::rational::{qi, qr};
use hyperline::seq::{RelOp, Seq};

fn main() -> hyperline::Result<()> {
    let f0 = Filter::frechet();
    let eps = Seq::piecewise(vec![(
        IndexSet::universe(),
        RationalFunc::constant(qi(1)).div(&RationalFunc::var().add(&RationalFunc::constant(qi(1))))?,
    )])?;
    println!("eps = {eps}");
    println!("eps infinitesimal at F0: {}", is_infinitesimal(&eps, &f0)?);

    let a = Seq::constant(qr(3, 2));
    let b = a.add(&eps);
    println!("b = a + eps lies in the halo of a: {}", in_halo(&b, &a, &f0)?);
    println!(
        "yet ||a = b|| = {} (they are nowhere equal)",
        a.truth_set(RelOp::Eq, &b)?
    );

    // a presentation that is infinitesimal only from some viewpoints
    let evens = IndexSet::residue(0, 2)?;
    let odds = IndexSet::residue(1, 2)?;
    let mixed = Seq::piecewise(vec![
        (evens.clone(), RationalFunc::constant(qi(2))),
        (odds.clone(), RationalFunc::constant(qi(0))),
    ])?;
    println!(
        "mixed infinitesimal at F0: {}, at F0 + res(1,2): {}",
        is_infinitesimal(&mixed, &f0)?,
        is_infinitesimal(&mixed, &f0.extend(&odds)?)?,
    );

    // finiteness is also viewpoint-relative
    let grows_on_evens = Seq::piecewise(vec![
        (evens, RationalFunc::var()),
        (odds.clone(), RationalFunc::constant(qr(1, 3))),
    ])?;
    println!(
        "grows-on-evens finite at F0: {}, at F0 + res(1,2): {}",
        is_finite_at(&grows_on_evens, &f0)?,
        is_finite_at(&grows_on_evens, &f0.extend(&odds)?)?,
    );
    Ok(())
}
