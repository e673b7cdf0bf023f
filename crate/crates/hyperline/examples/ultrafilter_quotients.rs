//! Ultrafilter-style oracles on the residue-class algebra: coherent residue
//! choosers give a classical two-valued quotient in which every decidable
//! question gets an answer, extending every compatible forcing verdict.
//!
//! Run with `cargo run --example ultrafilter_quotients`.

use std::collections::BTreeMap;

use hyperline::filter::Filter;
use hyperline::forcing::{forces, Env};
use hyperline::index_set::IndexSet;
use hyperline::parser::parse_formula;
use hyperline::ratfunc::RationalFunc;
use hyperline::rational::qi;
use hyperline::seq::Seq;
use hyperline::ultra::UltraOracle;

fn main() -> hyperline::Result<()> {
    let zero = UltraOracle::zero();
    let five = UltraOracle::padic(3, &[2, 1])?; // tracks 5 = 2 + 1*3

    let evens = IndexSet::residue(0, 2)?;
    println!("zero accepts res(0,2): {}", zero.accepts(&evens)?);
    println!("five accepts res(0,2): {}", five.accepts(&evens)?);
    println!(
        "five accepts res(2,3): {}  (5 = 2 mod 3)",
        five.accepts(&IndexSet::residue(2, 3)?)?
    );

    // incoherent choosers are rejected at construction
    let mut table = BTreeMap::new();
    table.insert(2u64, 1u64);
    table.insert(4u64, 0u64);
    match UltraOracle::from_table(table, "broken") {
        Err(e) => println!("broken table rejected: {e}"),
        Ok(_) => unreachable!("incoherence must be caught"),
    }

    // the quotient decides what forcing leaves open
    let a = Seq::piecewise(vec![
        (evens.clone(), RationalFunc::constant(qi(2))),
        (IndexSet::residue(1, 2)?, RationalFunc::constant(qi(0))),
    ])?;
    let env = Env::new().with_var("a", a);
    let phi = parse_formula("a = 2")?;
    let f0 = Filter::frechet();
    println!(
        "\nF0 ||- a = 2: {}   F0 ||- ~(a = 2): {}",
        forces(&f0, &phi, &env)?.value,
        forces(&f0, &phi.clone().not(), &env)?.value,
    );
    println!(
        "zero-quotient |= a = 2: {}   (totality: exactly one of a sentence and its negation)",
        zero.quotient_sat(&phi, &env)?
    );

    // quotient satisfaction extends forcing along compatible viewpoints
    let ge = f0.extend(&evens)?;
    println!(
        "zero extends F0 + res(0,2): {}",
        zero.extends_filter(&ge)?
    );
    println!(
        "F0 + res(0,2) ||- a = 2: {}",
        forces(&ge, &phi, &env)?.value
    );
    Ok(())
}
