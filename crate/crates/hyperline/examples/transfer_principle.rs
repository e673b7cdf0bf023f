//! Sentences about constant presentations are all-or-nothing: their truth
//! sets are empty or everything, so every viewpoint agrees with direct
//! evaluation over the rationals. Ordered-field axioms, in witnessed form,
//! are forced at every viewpoint even for badly behaved presentations.
//!
//! Run with `cargo run --example transfer_principle`.

use hyperline::filter::Filter;
use hyperline::forcing::{forces, truth_index_set, Env};
use hyperline::formula::{Formula, Term};
use hyperline::index_set::IndexSet;
use hyperline::parser::parse_formula;
use hyperline::rational::{qi, qr};
use hyperline::sample::{random_filter, Sampler};
use hyperline::seq::Seq;

fn main() -> hyperline::Result<()> {
    // constant sentences transfer verbatim
    let env = Env::new();
    for src in ["2 + 3 = 5", "2 + 3 = 6", "1/2 < 2/3", "abs(-3) = 3"] {
        let phi = parse_formula(src)?;
        let ts = truth_index_set(&phi, &env)?;
        println!("||{src}|| = {ts}");
    }

    // field axioms hold at the weakest viewpoint and at random ones
    let mut rng = Sampler::new(7).rng();
    let mut filters = vec![Filter::frechet()];
    for _ in 0..5 {
        filters.push(random_filter(&mut rng, 12));
    }
    let env = Env::new()
        .with_var("a", Seq::constant(qr(3, 4)))
        .with_var(
            "b",
            Seq::piecewise(vec![(
                IndexSet::universe(),
                hyperline::ratfunc::RationalFunc::var(),
            )])?,
        )
        .with_var("c", Seq::constant(qi(-2)));
    for src in [
        "a + b = b + a",
        "(a + b) + c = a + (b + c)",
        "a * (b + c) = a * b + a * c",
        "a < b \\/ a = b \\/ a > b",
    ] {
        let phi = parse_formula(src)?;
        for f in &filters {
            assert!(forces(f, &phi, &env)?.value);
        }
        println!("forced at every sampled viewpoint: {src}");
    }

    // the additive inverse axiom with its explicit witness
    let inverse = Formula::Exists(
        "y".into(),
        Some(Term::Sub(
            Box::new(Term::Const(qi(0))),
            Box::new(Term::var("b")),
        )),
        Box::new(parse_formula("b + y = 0")?),
    );
    for f in &filters {
        assert!(forces(f, &inverse, &env)?.value);
    }
    println!("forced at every sampled viewpoint: exists y := -b (b + y = 0)");
    Ok(())
}
