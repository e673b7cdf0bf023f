//! Viewpoint-relative infinitesimal calculus: halos, finiteness, standard
//! parts and continuity certificates.
//!
//! Halo questions reduce to limit analysis: a piecewise-rational difference
//! is within every `1/n` at a viewpoint exactly when each of its cells
//! meeting the viewpoint's core infinitely has limit zero. Standard parts
//! come from grouping cell limits over the core; a single finite limit is a
//! standard part, several distinct limits split into branches realized by
//! extending the viewpoint with a branch cell, and infinite limits mark
//! unbounded behavior with no standard part at all.

use std::fmt;

use num_traits::Zero;

use crate::error::{EngineError, Result};
use crate::filter::Filter;
use crate::index_set::IndexSet;
use crate::rational::{show_rational, Q};
use crate::seq::{Limit, RelOp, Seq};

/// True when the presentation is infinitely close to 0 at the viewpoint.
pub fn is_infinitesimal(a: &Seq, filter: &Filter) -> Result<bool> {
    Ok(filter.contains(&a.infinitesimal_support()?))
}

/// True when `b` lies in the halo of `a` at the viewpoint.
pub fn in_halo(b: &Seq, a: &Seq, filter: &Filter) -> Result<bool> {
    is_infinitesimal(&a.sub(b), filter)
}

/// True when the presentation is squeezed between two rationals at the
/// viewpoint: every core cell has a finite limit.
pub fn is_finite_at(a: &Seq, filter: &Filter) -> Result<bool> {
    Ok(a.cluster_limits(filter.core())?
        .iter()
        .all(|(_, l)| matches!(l, Limit::Finite(_))))
}

/// Standard-part analysis at a viewpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StResult {
    /// Exactly one finite limit over the core: the standard part.
    Unique(Q),
    /// At least two distinct limits; each branch cell realizes one of them
    /// under extension.
    Branches(Vec<(IndexSet, Limit)>),
    /// The core sees only unbounded behavior; the offending cells.
    Unbounded(Vec<IndexSet>),
}

impl fmt::Display for StResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StResult::Unique(q) => write!(f, "st = {}", show_rational(q)),
            StResult::Branches(bs) => {
                write!(f, "branches:")?;
                for (cell, lim) in bs {
                    write!(f, "\n  {cell}  ->  {lim}")?;
                }
                Ok(())
            }
            StResult::Unbounded(cells) => {
                write!(f, "unbounded on ")?;
                let parts: Vec<String> = cells.iter().map(|c| c.to_string()).collect();
                write!(f, "{}", parts.join(", "))
            }
        }
    }
}

/// Compute the standard part of a presentation at a viewpoint.
pub fn standard_part(a: &Seq, filter: &Filter) -> Result<StResult> {
    let groups = a.cluster_limits(filter.core())?;
    match groups.as_slice() {
        [] => Err(EngineError::Internal(
            "infinite core met no cell infinitely".into(),
        )),
        [(_, Limit::Finite(q))] => Ok(StResult::Unique(q.clone())),
        [(cell, _)] => Ok(StResult::Unbounded(vec![cell.clone()])),
        _ => Ok(StResult::Branches(groups)),
    }
}

/// Which side of a point a probe approaches from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Below,
    Above,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Below => write!(f, "below"),
            Side::Above => write!(f, "above"),
        }
    }
}

/// An interval guard on the function argument; `None` bounds are unbounded.
/// The pair's boolean is strictness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Guard {
    pub lo: Option<(Q, bool)>,
    pub hi: Option<(Q, bool)>,
}

impl Guard {
    pub fn always() -> Guard {
        Guard { lo: None, hi: None }
    }

    pub fn admits(&self, x: &Q) -> bool {
        let lo_ok = match &self.lo {
            None => true,
            Some((q, true)) => x > q,
            Some((q, false)) => x >= q,
        };
        let hi_ok = match &self.hi {
            None => true,
            Some((q, true)) => x < q,
            Some((q, false)) => x <= q,
        };
        lo_ok && hi_ok
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.lo, &self.hi) {
            (None, None) => write!(f, "else"),
            (Some((q, s)), None) => write!(f, "x {} {}", if *s { ">" } else { ">=" }, show_rational(q)),
            (None, Some((q, s))) => write!(f, "x {} {}", if *s { "<" } else { "<=" }, show_rational(q)),
            (Some((a, sa)), Some((b, sb))) => write!(
                f,
                "{} {} x {} {}",
                show_rational(a),
                if *sa { "<" } else { "<=" },
                if *sb { "<" } else { "<=" },
                show_rational(b)
            ),
        }
    }
}

/// A symbolic real function of one variable: rational arithmetic, absolute
/// value, min/max, and finite piecewise definitions over rational-endpoint
/// guards (first matching piece governs).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealFunc {
    Var,
    Const(Q),
    Add(Box<RealFunc>, Box<RealFunc>),
    Sub(Box<RealFunc>, Box<RealFunc>),
    Mul(Box<RealFunc>, Box<RealFunc>),
    Div(Box<RealFunc>, Box<RealFunc>),
    Neg(Box<RealFunc>),
    Abs(Box<RealFunc>),
    Min(Box<RealFunc>, Box<RealFunc>),
    Max(Box<RealFunc>, Box<RealFunc>),
    Piecewise(Vec<(Guard, RealFunc)>),
}

impl RealFunc {
    /// Exact value at a rational point.
    pub fn eval_at(&self, x: &Q) -> Result<Q> {
        match self {
            RealFunc::Var => Ok(x.clone()),
            RealFunc::Const(q) => Ok(q.clone()),
            RealFunc::Add(f, g) => Ok(f.eval_at(x)? + g.eval_at(x)?),
            RealFunc::Sub(f, g) => Ok(f.eval_at(x)? - g.eval_at(x)?),
            RealFunc::Mul(f, g) => Ok(f.eval_at(x)? * g.eval_at(x)?),
            RealFunc::Div(f, g) => {
                let d = g.eval_at(x)?;
                if d.is_zero() {
                    return Err(EngineError::Domain(format!(
                        "division by zero at x = {}",
                        show_rational(x)
                    )));
                }
                Ok(f.eval_at(x)? / d)
            }
            RealFunc::Neg(f) => Ok(-f.eval_at(x)?),
            RealFunc::Abs(f) => {
                let v = f.eval_at(x)?;
                Ok(if v < Q::zero() { -v } else { v })
            }
            RealFunc::Min(f, g) => Ok(f.eval_at(x)?.min(g.eval_at(x)?)),
            RealFunc::Max(f, g) => Ok(f.eval_at(x)?.max(g.eval_at(x)?)),
            RealFunc::Piecewise(pieces) => {
                for (guard, body) in pieces {
                    if guard.admits(x) {
                        return body.eval_at(x);
                    }
                }
                Err(EngineError::Domain(format!(
                    "no piece covers x = {}",
                    show_rational(x)
                )))
            }
        }
    }

    /// Compose with a presentation pointwise. Guards split the index space
    /// by the argument's comparison truth sets; indices left uncovered by a
    /// piecewise body are an error when infinite in number, and repaired to
    /// 0 when finitely many.
    pub fn compose(&self, arg: &Seq) -> Result<Seq> {
        match self {
            RealFunc::Var => Ok(arg.clone()),
            RealFunc::Const(q) => Ok(Seq::constant(q.clone())),
            RealFunc::Add(f, g) => Ok(f.compose(arg)?.add(&g.compose(arg)?)),
            RealFunc::Sub(f, g) => Ok(f.compose(arg)?.sub(&g.compose(arg)?)),
            RealFunc::Mul(f, g) => Ok(f.compose(arg)?.mul(&g.compose(arg)?)),
            RealFunc::Div(f, g) => f
                .compose(arg)?
                .try_div(&g.compose(arg)?)
                .map_err(|e| match e {
                    EngineError::Division(d) => {
                        EngineError::Domain(format!("composition divides by zero on {d}"))
                    }
                    other => other,
                }),
            RealFunc::Neg(f) => Ok(f.compose(arg)?.neg()),
            RealFunc::Abs(f) => f.compose(arg)?.abs(),
            RealFunc::Min(f, g) => f.compose(arg)?.min(&g.compose(arg)?),
            RealFunc::Max(f, g) => f.compose(arg)?.max(&g.compose(arg)?),
            RealFunc::Piecewise(pieces) => {
                let mut remaining = IndexSet::universe();
                let mut parts: Vec<(IndexSet, Seq)> = Vec::new();
                for (guard, body) in pieces {
                    let mut region = remaining.clone();
                    if let Some((q, strict)) = &guard.lo {
                        let op = if *strict { RelOp::Gt } else { RelOp::Ge };
                        region =
                            region.intersect(&arg.truth_set(op, &Seq::constant(q.clone()))?)?;
                    }
                    if let Some((q, strict)) = &guard.hi {
                        let op = if *strict { RelOp::Lt } else { RelOp::Le };
                        region =
                            region.intersect(&arg.truth_set(op, &Seq::constant(q.clone()))?)?;
                    }
                    if region.is_empty() {
                        continue;
                    }
                    parts.push((region.clone(), body.compose(arg)?));
                    remaining = remaining.difference(&region)?;
                }
                if !remaining.is_empty() {
                    if !remaining.is_finite() {
                        return Err(EngineError::Domain(format!(
                            "piecewise function undefined on {remaining}"
                        )));
                    }
                    parts.push((remaining, Seq::zero()));
                }
                Seq::patchwork(&parts)
            }
        }
    }

    /// One-sided limit at a rational point, computed by composing with the
    /// probe approaching from that side.
    pub fn one_sided_limit(&self, c: &Q, side: Side) -> Result<Limit> {
        let probe = side_probe(c, side);
        let image = self.compose(&probe)?;
        let groups = image.cluster_limits(&IndexSet::universe())?;
        let infinite: Vec<_> = groups
            .iter()
            .filter(|(cell, _)| !cell.is_finite())
            .collect();
        match infinite.as_slice() {
            [(_, lim)] => Ok(lim.clone()),
            _ => Err(EngineError::Internal(
                "one-sided probe has no dominant cell".into(),
            )),
        }
    }
}

/// The strictly monotone probe `c ± 1/(n+1)`.
fn side_probe(c: &Q, side: Side) -> Seq {
    let eps = unit_recip();
    match side {
        Side::Below => Seq::constant(c.clone()).sub(&eps),
        Side::Above => Seq::constant(c.clone()).add(&eps),
    }
}

/// 1/(n+1).
fn unit_recip() -> Seq {
    use crate::ratfunc::RationalFunc;
    let rf = RationalFunc::constant(Q::from_integer(1.into()))
        .div(&RationalFunc::var().add(&RationalFunc::constant(Q::from_integer(1.into()))))
        .expect("n + 1 is nonzero");
    Seq::piecewise(vec![(IndexSet::universe(), rf)]).expect("single total piece")
}

/// The two-sided alternating probe around `c`.
fn alternating_probe(c: &Q) -> Result<Seq> {
    let eps = unit_recip();
    let evens = IndexSet::residue(0, 2)?;
    Seq::patchwork(&[
        (evens.clone(), Seq::constant(c.clone()).add(&eps)),
        (evens.complement(), Seq::constant(c.clone()).sub(&eps)),
    ])
}

/// Certificate attached to a continuity verdict.
#[derive(Clone, Debug)]
pub enum ContCertificate {
    /// For each modulus m, the index set where the probe image stays within
    /// 1/m of the value; each is cofinite for a continuous function.
    Witness { moduli: Vec<(u64, IndexSet)> },
    /// A probe breaking the halo-mapping property at the cofinite
    /// viewpoint, with its re-verification results.
    Counterexample {
        probe: Seq,
        side: Side,
        probe_in_halo: bool,
        image_in_halo: bool,
    },
}

/// Outcome of a continuity query at a rational point.
#[derive(Clone, Debug)]
pub struct ContinuityReport {
    pub continuous: bool,
    pub point: Q,
    pub value: Q,
    pub left: Limit,
    pub right: Limit,
    pub certificate: ContCertificate,
}

impl fmt::Display for ContinuityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} at {} (value {}, limit from below {}, from above {})",
            if self.continuous {
                "continuous"
            } else {
                "discontinuous"
            },
            show_rational(&self.point),
            show_rational(&self.value),
            self.left,
            self.right
        )?;
        match &self.certificate {
            ContCertificate::Witness { moduli } => {
                for (m, set) in moduli {
                    writeln!(f, "  |f(x_n) - f(c)| < 1/{m} on {set}")?;
                }
            }
            ContCertificate::Counterexample {
                probe,
                side,
                probe_in_halo,
                image_in_halo,
            } => {
                writeln!(f, "  counterexample from {side}: x = {probe}")?;
                writeln!(
                    f,
                    "  x in halo of point: {probe_in_halo}; f(x) in halo of value: {image_in_halo}"
                )?;
            }
        }
        Ok(())
    }
}

/// How many halo moduli a continuity witness records.
const WITNESS_MODULI: u64 = 5;

/// Decide continuity of a library function at a rational point, with a
/// re-verifiable certificate either way.
pub fn check_continuity(f: &RealFunc, c: &Q) -> Result<ContinuityReport> {
    let value = f.eval_at(c)?;
    let left = f.one_sided_limit(c, Side::Below)?;
    let right = f.one_sided_limit(c, Side::Above)?;
    let continuous =
        left == Limit::Finite(value.clone()) && right == Limit::Finite(value.clone());
    let f0 = Filter::frechet();
    let certificate = if continuous {
        let probe = alternating_probe(c)?;
        let image = f.compose(&probe)?;
        let gap = image.sub(&Seq::constant(value.clone())).abs()?;
        let mut moduli = Vec::new();
        for m in 1..=WITNESS_MODULI {
            let bound = Seq::constant(Q::new(1.into(), (m as i64).into()));
            moduli.push((m, gap.truth_set(RelOp::Lt, &bound)?));
        }
        ContCertificate::Witness { moduli }
    } else {
        // prefer the side whose limit differs from the value; ties toward
        // the left
        let side = if left != Limit::Finite(value.clone()) {
            Side::Below
        } else {
            Side::Above
        };
        let probe = side_probe(c, side);
        let image = f.compose(&probe)?;
        let probe_in_halo = in_halo(&probe, &Seq::constant(c.clone()), &f0)?;
        let image_in_halo = in_halo(&image, &Seq::constant(value.clone()), &f0)?;
        ContCertificate::Counterexample {
            probe,
            side,
            probe_in_halo,
            image_in_halo,
        }
    };
    Ok(ContinuityReport {
        continuous,
        point: c.clone(),
        value,
        left,
        right,
        certificate,
    })
}

/// The halo-mapping continuity check at an arbitrary viewpoint, driven by
/// the canonical probes from both sides and alternating.
pub fn continuity_at_filter(f: &RealFunc, c: &Q, filter: &Filter) -> Result<bool> {
    let value = f.eval_at(c)?;
    let probes = [
        side_probe(c, Side::Below),
        side_probe(c, Side::Above),
        alternating_probe(c)?,
    ];
    for probe in probes {
        debug_assert!(in_halo(&probe, &Seq::constant(c.clone()), filter)?);
        let image = f.compose(&probe)?;
        if !in_halo(&image, &Seq::constant(value.clone()), filter)? {
            return Ok(false);
        }
    }
    Ok(true)
}
