//! Deterministic, seed-driven samplers for filters, index sets and
//! presentations. The clausal forcing evaluator and the structure-axiom
//! checker use these for probe extensions; the test suites reuse them so
//! every randomized suite replays from its seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::filter::Filter;
use crate::formula::{Formula, Term};
use crate::index_set::IndexSet;
use crate::ratfunc::{Poly, RationalFunc};
use crate::rational::{qi, Q};
use crate::seq::{RelOp, Seq};

/// Probe policy for the clausal evaluator: the exact algebraic extension is
/// always tried; this adds `probes` random residue-class extensions at the
/// outer connective levels.
#[derive(Clone, Debug)]
pub struct Sampler {
    pub seed: u64,
    pub probes: usize,
    /// Random probes are used while the connective depth is below this.
    pub probe_depth: usize,
}

impl Sampler {
    pub fn new(seed: u64) -> Sampler {
        Sampler {
            seed,
            probes: 8,
            probe_depth: 2,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// A residue class with modulus at most `max_modulus`.
pub fn random_residue_set(rng: &mut impl Rng, max_modulus: u64) -> IndexSet {
    let m = rng.gen_range(1..=max_modulus);
    let r = rng.gen_range(0..m);
    IndexSet::residue(r, m).expect("residue below modulus")
}

/// A random member of the index algebra: a residue class, possibly
/// complemented, with up to two exceptional indices toggled.
pub fn random_index_set(rng: &mut impl Rng, max_modulus: u64) -> IndexSet {
    let mut s = random_residue_set(rng, max_modulus);
    if rng.gen_bool(0.3) {
        s = s.complement();
    }
    for _ in 0..rng.gen_range(0..=2u32) {
        let n = rng.gen_range(0..24u64);
        let point = IndexSet::finite([n]);
        s = if rng.gen_bool(0.5) {
            s.union(&point).expect("small moduli")
        } else {
            s.difference(&point).expect("small moduli")
        };
    }
    s
}

/// A proper extension of `f` by a random residue class, when one of the
/// attempts stays infinite.
pub fn random_extension(rng: &mut impl Rng, f: &Filter, max_modulus: u64) -> Option<Filter> {
    for _ in 0..8 {
        let s = random_residue_set(rng, max_modulus);
        if let Ok(g) = f.extend(&s) {
            return Some(g);
        }
    }
    None
}

/// A random viewpoint: the cofinite filter extended by up to two residue
/// classes.
pub fn random_filter(rng: &mut impl Rng, max_modulus: u64) -> Filter {
    let mut f = Filter::frechet();
    for _ in 0..rng.gen_range(0..=2u32) {
        if let Some(g) = random_extension(rng, &f, max_modulus) {
            f = g;
        }
    }
    f
}

/// A random rational with small numerator and denominator.
pub fn random_rational(rng: &mut impl Rng) -> Q {
    let num = rng.gen_range(-8i64..=8);
    let den = rng.gen_range(1i64..=6);
    Q::new(num.into(), den.into())
}

/// A random polynomial of degree at most `max_degree`.
pub fn random_poly(rng: &mut impl Rng, max_degree: usize) -> Poly {
    let deg = rng.gen_range(0..=max_degree);
    let coeffs: Vec<Q> = (0..=deg).map(|_| random_rational(rng)).collect();
    Poly::new(coeffs)
}

/// A random rational function with nonzero denominator.
pub fn random_ratfunc(rng: &mut impl Rng, max_degree: usize) -> RationalFunc {
    let num = random_poly(rng, max_degree);
    loop {
        let den = if rng.gen_bool(0.7) {
            Poly::constant(qi(1))
        } else {
            random_poly(rng, max_degree.min(1))
        };
        if !den.is_zero() {
            return RationalFunc::new(num, den).expect("nonzero denominator");
        }
    }
}

/// A random presentation: one or two residue cells carrying random rational
/// functions (denominator zeros repaired by construction).
pub fn random_seq(rng: &mut impl Rng, max_modulus: u64, max_degree: usize) -> Seq {
    let m = rng.gen_range(1..=max_modulus);
    if m == 1 || rng.gen_bool(0.3) {
        return Seq::piecewise(vec![(IndexSet::universe(), random_ratfunc(rng, max_degree))])
            .expect("single total piece");
    }
    let r = rng.gen_range(0..m);
    let cell = IndexSet::residue(r, m).expect("residue below modulus");
    Seq::piecewise(vec![
        (cell.clone(), random_ratfunc(rng, max_degree)),
        (cell.complement(), random_ratfunc(rng, max_degree)),
    ])
    .expect("cell and complement partition the index space")
}

/// An environment binding `a`, `b`, `c` to random presentations.
pub fn random_env(rng: &mut impl Rng, max_modulus: u64, max_degree: usize) -> crate::forcing::Env {
    crate::forcing::Env::new()
        .with_var("a", random_seq(rng, max_modulus, max_degree))
        .with_var("b", random_seq(rng, max_modulus, max_degree))
        .with_var("c", random_seq(rng, max_modulus, max_degree))
}

fn random_term(rng: &mut impl Rng, depth: usize) -> Term {
    if depth == 0 || rng.gen_bool(0.45) {
        return match rng.gen_range(0..4u8) {
            0 => Term::Var("a".into()),
            1 => Term::Var("b".into()),
            2 => Term::Var("c".into()),
            _ => Term::Const(random_rational(rng)),
        };
    }
    let l = Box::new(random_term(rng, depth - 1));
    let r = Box::new(random_term(rng, depth - 1));
    match rng.gen_range(0..3u8) {
        0 => Term::Add(l, r),
        1 => Term::Sub(l, r),
        _ => Term::Mul(l, r),
    }
}

fn random_atom(rng: &mut impl Rng) -> Formula {
    let ops = [RelOp::Eq, RelOp::Ne, RelOp::Lt, RelOp::Le, RelOp::Gt, RelOp::Ge];
    Formula::Rel(
        random_term(rng, 2),
        ops[rng.gen_range(0..ops.len())],
        random_term(rng, 2),
    )
}

/// A random quantifier-free formula over `a`, `b`, `c` with at most
/// `connectives` connectives.
pub fn random_formula(rng: &mut impl Rng, connectives: usize) -> Formula {
    if connectives == 0 || rng.gen_bool(0.35) {
        return random_atom(rng);
    }
    match rng.gen_range(0..4u8) {
        0 => random_formula(rng, connectives - 1).not(),
        1 => random_formula(rng, connectives / 2).and(random_formula(rng, connectives / 2)),
        2 => random_formula(rng, connectives / 2).or(random_formula(rng, connectives / 2)),
        _ => random_formula(rng, connectives / 2)
            .implies(random_formula(rng, connectives / 2)),
    }
}
