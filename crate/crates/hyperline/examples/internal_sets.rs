//! Internal predicates: per-index interval extensions, membership filtered
//! through a viewpoint, and the hypernatural-style example where membership
//! turns on which residue class the viewpoint keeps.
//!
//! Run with `cargo run --example internal_sets`.

use std::collections::BTreeMap;

use hyperline::filter::Filter;
use hyperline::formula::{Formula, Term};
use hyperline::index_set::IndexSet;
use hyperline::internal::InternalPred;
use hyperline::parser::parse_formula;
use hyperline::ratfunc::RationalFunc;
use hyperline::rational::{qi, qr};
use hyperline::seq::{RelOp, Seq};

fn main() -> hyperline::Result<()> {
    let f0 = Filter::frechet();

    // a shrinking strip: extension (0, 1/(n+1)) at index n
    let recip = RationalFunc::constant(qi(1))
        .div(&RationalFunc::var().add(&RationalFunc::constant(qi(1))))?;
    let mut params = BTreeMap::new();
    params.insert(
        "hi".to_string(),
        Seq::piecewise(vec![(IndexSet::universe(), recip)])?,
    );
    let strip = InternalPred::new("x", &parse_formula("0 < x /\\ x < hi")?, &params)?;
    for i in [0, 3, 9] {
        println!("strip extension at {i}: {}", strip.extension_at(i));
    }
    println!("strip nonempty on {}", strip.emptiness_set()?);

    // membership of a presentation is a filter question
    let probe = Seq::constant(qr(1, 100));
    println!(
        "delta(1/100) in strip at F0: {}",
        strip.member_at(&probe, &f0)?
    );

    // the hypernatural-style test: b follows n/2 on evens and 1/2 on odds;
    // a tracker matching b exactly on the evens makes membership turn on
    // the even class being kept
    let evens = IndexSet::residue(0, 2)?;
    let odds = IndexSet::residue(1, 2)?;
    let half_n = RationalFunc::var().div(&RationalFunc::constant(qi(2)))?;
    let b = Seq::piecewise(vec![
        (evens.clone(), half_n.clone()),
        (odds.clone(), RationalFunc::constant(qr(1, 2))),
    ])?;
    let tracker = Seq::piecewise(vec![
        (evens.clone(), half_n),
        (odds, RationalFunc::constant(qi(0))),
    ])?;
    let mut params = BTreeMap::new();
    params.insert("t".to_string(), tracker);
    let tracked = InternalPred::new(
        "x",
        &Formula::Rel(Term::var("x"), RelOp::Eq, Term::var("t")),
        &params,
    )?;
    println!("||b in tracked|| = {}", tracked.membership_set(&b)?);
    println!("b in tracked at F0: {}", tracked.member_at(&b, &f0)?);
    println!(
        "b in tracked at F0 + res(0,2): {}",
        tracked.member_at(&b, &f0.extend(&evens)?)?
    );

    // the template algebra: conjunction, disjunction, negation
    let left = InternalPred::new("x", &parse_formula("x < 1")?, &BTreeMap::new())?;
    let right = InternalPred::new("x", &parse_formula("x > 0")?, &BTreeMap::new())?;
    let both = left.and(&right);
    println!("conjunction extension at 5: {}", both.extension_at(5));
    println!(
        "contradiction nonempty on {}",
        both.and(&both.negate()).emptiness_set()?
    );
    Ok(())
}
