//! Passing to a subsequence as filter extension: a fact left undecided at
//! the cofinite viewpoint becomes decided after restricting the index
//! parameter to the set where it holds, and anything already forced
//! persists along the way.
//!
//! Run with `cargo run --example passing_to_subsequences`.

use hyperline::filter::Filter;
use hyperline::forcing::{forces, Env};
use hyperline::index_set::IndexSet;
use hyperline::parser::parse_formula;
use hyperline::ratfunc::RationalFunc;
use hyperline::rational::qi;
use hyperline::seq::{RelOp, Seq};

fn main() -> hyperline::Result<()> {
    let f0 = Filter::frechet();
    let evens = IndexSet::residue(0, 2)?;
    let odds = IndexSet::residue(1, 2)?;

    // x y = 0 pointwise, but neither factor is zero cofinitely
    let x = Seq::piecewise(vec![
        (evens.clone(), RationalFunc::constant(qi(2))),
        (odds.clone(), RationalFunc::constant(qi(0))),
    ])?;
    let y = Seq::piecewise(vec![
        (evens.clone(), RationalFunc::constant(qi(0))),
        (odds.clone(), RationalFunc::constant(qi(2))),
    ])?;
    let env = Env::new().with_var("x", x.clone()).with_var("y", y);

    println!(
        "F0 ||- x*y = 0 : {}",
        forces(&f0, &parse_formula("x * y = 0")?, &env)?.value
    );
    println!(
        "F0 ||- x = 0   : {}",
        forces(&f0, &parse_formula("x = 0")?, &env)?.value
    );

    // pass to the subsequence where x vanishes: extend by its zero set
    let zero_set = x.truth_set(RelOp::Eq, &Seq::zero())?;
    println!("||x = 0|| = {zero_set}");
    let restricted = f0.extend(&zero_set)?;
    println!(
        "{restricted} ||- x = 0 : {}",
        forces(&restricted, &parse_formula("x = 0")?, &env)?.value
    );

    // persistence: the product fact survives the restriction
    println!(
        "{restricted} ||- x*y = 0 : {}",
        forces(&restricted, &parse_formula("x * y = 0")?, &env)?.value
    );

    // incompatible restrictions cannot be combined
    match restricted.extend(&evens) {
        Err(e) => println!("restricting again to the evens fails: {e}"),
        Ok(_) => unreachable!("odds and evens are incompatible"),
    }

    // compatibility is decidable up front
    let ge = f0.extend(&evens)?;
    let g4 = f0.extend(&IndexSet::residue(0, 4)?)?;
    println!(
        "compatible(F0 + res(0,2), F0 + res(0,4)) = {}",
        ge.compatible(&g4)
    );
    println!(
        "refines(F0 + res(0,4), F0 + res(0,2)) = {}",
        g4.refines(&ge)
    );
    Ok(())
}
