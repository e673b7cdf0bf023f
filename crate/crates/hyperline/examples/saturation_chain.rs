//! The countable saturation witness: a decreasing chain of nonempty
//! internal sets has a common element, built by the diagonal construction
//! with a deterministic element selector and re-verified link by link.
//!
//! Run with `cargo run --example saturation_chain`.

use std::collections::BTreeMap;

use hyperline::filter::Filter;
use hyperline::index_set::IndexSet;
use hyperline::internal::{saturation_witness, Chain, InternalPred};
use hyperline::parser::parse_formula;
use hyperline::ratfunc::RationalFunc;
use hyperline::rational::{qi, qr, show_rational};
use hyperline::seq::Seq;

fn strip(hi: Seq) -> hyperline::Result<InternalPred> {
    let mut params = BTreeMap::new();
    params.insert("hi".to_string(), hi);
    InternalPred::new("x", &parse_formula("0 < x /\\ x < hi")?, &params)
}

fn main() -> hyperline::Result<()> {
    let f0 = Filter::frechet();
    let recip = RationalFunc::constant(qi(1))
        .div(&RationalFunc::var().add(&RationalFunc::constant(qi(1))))?;
    let eps = Seq::piecewise(vec![(IndexSet::universe(), recip)])?;

    // every link the shrinking strip (0, 1/(n+1)): already self-diagonal
    let chain = Chain::generate(100, |_| strip(eps.clone()))?;
    let outcome = saturation_witness(&chain, &f0)?;
    println!("witness = {}", outcome.witness);
    println!(
        "first values: {}",
        (0..8)
            .map(|n| show_rational(&outcome.witness.eval(n)))
            .collect::<Vec<_>>()
            .join(", ")
    );
    println!(
        "membership verified for all {} links: {}",
        outcome.checks.len(),
        outcome.all_verified()
    );

    // a genuinely shrinking chain: link k is the strip (0, 1/k)
    let chain = Chain::generate(12, |k| strip(Seq::constant(qr(1, k as i64))))?;
    let outcome = saturation_witness(&chain, &f0)?;
    println!("\nnested constant strips: witness = {}", outcome.witness);
    println!("verified: {}", outcome.all_verified());

    // a broken chain is rejected with the offending link named
    let broken = Chain::finite(vec![
        strip(Seq::constant(qi(1)))?,
        strip(Seq::constant(qr(1, 2)))?,
        strip(Seq::constant(qi(1)))?, // wider again: not a chain
    ]);
    match saturation_witness(&broken, &f0) {
        Err(e) => println!("\nbroken chain rejected: {e}"),
        Ok(_) => unreachable!("the fault must be detected"),
    }
    Ok(())
}
