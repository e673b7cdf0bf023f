//! Two presentations whose product vanishes identically even though
//! neither factor vanishes cofinitely: the disjunction "a = 0 or b = 0" is
//! forced while neither disjunct is, and restricting the index parameter
//! settles it either way.
//!
//! Run with `cargo run --example zero_divisors`.

use hyperline::filter::Filter;
use hyperline::forcing::{forces, Env};
use hyperline::index_set::IndexSet;
use hyperline::parser::parse_formula;
use hyperline::ratfunc::RationalFunc;
use hyperline::rational::qi;
use hyperline::seq::Seq;

fn main() -> hyperline::Result<()> {
    let evens = IndexSet::residue(0, 2)?;
    let odds = IndexSet::residue(1, 2)?;

    let a = Seq::piecewise(vec![
        (evens.clone(), RationalFunc::constant(qi(2))),
        (odds.clone(), RationalFunc::constant(qi(0))),
    ])?;
    let b = Seq::piecewise(vec![
        (evens.clone(), RationalFunc::constant(qi(0))),
        (odds.clone(), RationalFunc::constant(qi(2))),
    ])?;
    println!("a = {a}");
    println!("b = {b}");
    println!("a * b = {}", a.mul(&b));

    let env = Env::new().with_var("a", a).with_var("b", b);
    let f0 = Filter::frechet();

    for src in ["a * b = 0", "a = 0", "b = 0", "a = 0 \\/ b = 0"] {
        let phi = parse_formula(src)?;
        let verdict = forces(&f0, &phi, &env)?;
        print!("F0 ||- {src:24} : {}", verdict.value);
        if let Some(cert) = &verdict.certificate {
            print!("   ({cert})");
        }
        println!();
    }

    // each factor is identified with zero under the matching restriction
    let at_odds = f0.extend(&odds)?;
    let at_evens = f0.extend(&evens)?;
    println!(
        "F0 + res(1,2) ||- a = 0 : {}",
        forces(&at_odds, &parse_formula("a = 0")?, &env)?.value
    );
    println!(
        "F0 + res(0,2) ||- b = 0 : {}",
        forces(&at_evens, &parse_formula("b = 0")?, &env)?.value
    );
    Ok(())
}
