//! The two forcing evaluators side by side: membership of the truth set in
//! the filter, versus direct evaluation of the forcing clauses with
//! dense witness search. They agree — and the clause route shows *why* a
//! negation fails by exhibiting the extension that revives the formula.
//!
//! Run with `cargo run --example forcing_clauses`.

use hyperline::filter::Filter;
use hyperline::forcing::{check_structure_axioms, forces, forces_clausal, Env};
use hyperline::index_set::IndexSet;
use hyperline::parser::parse_formula;
use hyperline::ratfunc::RationalFunc;
use hyperline::rational::qi;
use hyperline::sample::{random_filter, Sampler};
use hyperline::seq::Seq;

fn main() -> hyperline::Result<()> {
    let evens = IndexSet::residue(0, 2)?;
    let odds = IndexSet::residue(1, 2)?;
    let a = Seq::piecewise(vec![
        (evens.clone(), RationalFunc::constant(qi(2))),
        (odds.clone(), RationalFunc::constant(qi(0))),
    ])?;
    let env = Env::new().with_var("a", a);
    let f0 = Filter::frechet();
    let sampler = Sampler::new(42);

    for src in [
        "a = 0",
        "~(a = 0)",
        "a = 0 \\/ ~(a = 0)",
        "a = 0 -> a * a = 0",
    ] {
        let phi = parse_formula(src)?;
        let direct = forces(&f0, &phi, &env)?.value;
        let clausal = forces_clausal(&f0, &phi, &env, &sampler)?;
        println!("F0 ||- {src:22} membership: {direct:5}  clauses: {clausal}");
        assert_eq!(direct, clausal);
    }

    // neither a = 0 nor its negation is forced: the viewpoint is undecided,
    // but excluded middle still holds by density
    println!();
    println!("the law of excluded middle is forced even though neither disjunct is:");
    for (label, filter) in [
        ("F0            ", f0.clone()),
        ("F0 + res(1,2) ", f0.extend(&odds)?),
        ("F0 + res(0,2) ", f0.extend(&evens)?),
    ] {
        let d = forces(&filter, &parse_formula("a = 0")?, &env)?.value;
        let n = forces(&filter, &parse_formula("~(a = 0)")?, &env)?.value;
        println!("  {label} a = 0: {d:5}  ~(a = 0): {n:5}");
    }

    // the structure axioms hold over a filter sample
    let mut rng = Sampler::new(11).rng();
    let filters: Vec<Filter> = std::iter::once(f0)
        .chain((0..6).map(|_| random_filter(&mut rng, 12)))
        .collect();
    let report = check_structure_axioms(&parse_formula("a < 1")?, &env, &filters, 11)?;
    println!("\nstructure axioms for the atom a < 1 over {} viewpoints:", filters.len());
    print!("{report}");
    Ok(())
}
