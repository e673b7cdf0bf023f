//! Continuity decided through halo mapping, with re-verifiable
//! certificates: per-modulus witness sets for continuous points, an
//! explicit offending probe for discontinuous ones. The verdict does not
//! depend on the viewpoint.
//!
//! Run with `cargo run --example continuity_certificates`.

use hyperline::calculus::{check_continuity, continuity_at_filter};
use hyperline::filter::Filter;
use hyperline::parser::parse_real_func;
use hyperline::rational::{qi, qr};
use hyperline::sample::{random_filter, Sampler};

fn main() -> hyperline::Result<()> {
    let cases = [
        ("x*x", qi(1)),
        ("abs(x)", qi(0)),
        ("fun{x < 0 -> 0, else -> 1}", qi(0)),
        ("fun{x <= 1/2 -> -1, else -> x}", qr(1, 2)),
        ("fun{x = 1 -> 2, else -> (x*x - 1)/(x - 1)}", qi(1)),
        ("fun{x = 1 -> 5, else -> (x*x - 1)/(x - 1)}", qi(1)),
        ("min(x, 1 - x)", qr(1, 2)),
    ];

    let mut rng = Sampler::new(3).rng();
    let filters: Vec<Filter> = (0..8).map(|_| random_filter(&mut rng, 12)).collect();

    for (src, point) in cases {
        let f = parse_real_func(src)?;
        let report = check_continuity(&f, &point)?;
        println!("--- {src} at {point}");
        print!("{report}");
        // the verdict is invariant across viewpoints
        let invariant = filters
            .iter()
            .map(|filter| continuity_at_filter(&f, &point, filter))
            .collect::<hyperline::Result<Vec<_>>>()?
            .iter()
            .all(|&v| v == report.continuous);
        println!("  same verdict at 8 random viewpoints: {invariant}");
    }
    Ok(())
}
