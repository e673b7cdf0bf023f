//! Hyperreal presentations: total maps from the naturals into the rationals,
//! given piecewise by rational-function expressions over cells of the index
//! algebra.
//!
//! The cells of a value partition the index space exactly, and no
//! denominator vanishes anywhere inside its cell: integer zeros of a
//! denominator are carved out into finite exception pieces holding the value
//! 0 at construction time, and the carved indices are remembered on the
//! value as repairs. Finite sets lie in no viewpoint the engine works with,
//! so a repair never changes any forcing verdict.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;

use crate::error::{EngineError, Result};
use crate::index_set::IndexSet;
use crate::ratfunc::RationalFunc;
use crate::rational::{show_rational, sign, Q};

/// Exact limit of a rational-function expression along an infinite cell.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Limit {
    MinusInfinity,
    Finite(Q),
    PlusInfinity,
}

impl Limit {
    pub fn as_finite(&self) -> Option<&Q> {
        match self {
            Limit::Finite(q) => Some(q),
            _ => None,
        }
    }
}

impl fmt::Display for Limit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Limit::MinusInfinity => write!(f, "-oo"),
            Limit::Finite(q) => write!(f, "{}", show_rational(q)),
            Limit::PlusInfinity => write!(f, "+oo"),
        }
    }
}

/// Comparison relations between sequences.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl RelOp {
    pub fn holds(&self, s: i32) -> bool {
        match self {
            RelOp::Eq => s == 0,
            RelOp::Ne => s != 0,
            RelOp::Lt => s < 0,
            RelOp::Le => s <= 0,
            RelOp::Gt => s > 0,
            RelOp::Ge => s >= 0,
        }
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            RelOp::Eq => "=",
            RelOp::Ne => "#",
            RelOp::Lt => "<",
            RelOp::Le => "<=",
            RelOp::Gt => ">",
            RelOp::Ge => ">=",
        }
    }
}

/// Pointwise arithmetic operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// A hyperreal presentation.
#[derive(Clone)]
pub struct Seq {
    /// Cells partition the index space; each carries its governing
    /// expression. Sorted by least cell member, equal expressions merged.
    pieces: Vec<(IndexSet, RationalFunc)>,
    /// Indices whose value was replaced by 0 to dodge a denominator zero.
    repaired: BTreeSet<u64>,
    /// Optional display name (provenance only; ignored by equality).
    name: Option<String>,
}

impl PartialEq for Seq {
    /// Canonical pieces make structural equality extensional equality.
    fn eq(&self, other: &Self) -> bool {
        self.pieces == other.pieces
    }
}

impl Eq for Seq {}

impl Seq {
    /// The constant presentation of a rational (the standard embedding).
    pub fn constant(q: Q) -> Seq {
        Seq {
            pieces: vec![(IndexSet::universe(), RationalFunc::constant(q))],
            repaired: BTreeSet::new(),
            name: None,
        }
    }

    pub fn zero() -> Seq {
        Seq::constant(Q::zero())
    }

    /// Build from raw pieces. The cells must partition the index space;
    /// denominator zeros inside a cell are repaired to 0 and recorded.
    pub fn piecewise(raw: Vec<(IndexSet, RationalFunc)>) -> Result<Seq> {
        // partition check: pairwise disjoint and jointly exhaustive
        for (i, (a, _)) in raw.iter().enumerate() {
            for (b, _) in raw.iter().skip(i + 1) {
                if !a.intersect(b)?.is_empty() {
                    return Err(EngineError::Partition(format!(
                        "cells {a} and {b} overlap"
                    )));
                }
            }
        }
        let mut cover = IndexSet::empty();
        for (c, _) in &raw {
            cover = cover.union(c)?;
        }
        if cover != IndexSet::universe() {
            return Err(EngineError::Partition(format!(
                "cells leave {} uncovered",
                cover.complement()
            )));
        }
        Seq::assemble(raw)
    }

    /// Shared back end: repair denominator zeros, canonicalize.
    fn assemble(raw: Vec<(IndexSet, RationalFunc)>) -> Result<Seq> {
        let mut pieces: Vec<(IndexSet, RationalFunc)> = Vec::new();
        let mut repaired = BTreeSet::new();
        for (cell, expr) in raw {
            if cell.is_empty() {
                continue;
            }
            let bad: Vec<u64> = expr
                .denominator_roots()?
                .into_iter()
                .filter(|&n| cell.member(n))
                .collect();
            if bad.is_empty() {
                pieces.push((cell, expr));
            } else {
                let carved = IndexSet::finite(bad.iter().copied());
                let rest = cell.difference(&carved)?;
                if !rest.is_empty() {
                    pieces.push((rest, expr));
                }
                pieces.push((carved, RationalFunc::zero()));
                repaired.extend(bad);
            }
        }
        // merge pieces sharing an expression
        let mut merged: Vec<(IndexSet, RationalFunc)> = Vec::new();
        for (cell, expr) in pieces {
            match merged.iter_mut().find(|(_, e)| *e == expr) {
                Some((c, _)) => *c = c.union(&cell)?,
                None => merged.push((cell, expr)),
            }
        }
        merged.retain(|(c, _)| !c.is_empty());
        merged.sort_by_key(|(c, _)| c.min_member().expect("nonempty cell"));
        Ok(Seq {
            pieces: merged,
            repaired,
            name: None,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Seq {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn pieces(&self) -> &[(IndexSet, RationalFunc)] {
        &self.pieces
    }

    /// Indices repaired to 0 during construction.
    pub fn repairs(&self) -> impl Iterator<Item = u64> + '_ {
        self.repaired.iter().copied()
    }

    fn piece_at(&self, n: u64) -> &(IndexSet, RationalFunc) {
        self.pieces
            .iter()
            .find(|(c, _)| c.member(n))
            .expect("cells partition the index space")
    }

    /// Exact value at an index; total by construction.
    pub fn eval(&self, n: u64) -> Q {
        let (_, expr) = self.piece_at(n);
        expr.eval(n)
            .expect("denominators have no zeros inside their cells")
    }

    /// Common-refinement cells of two presentations with both expressions.
    fn refine<'a>(
        &'a self,
        other: &'a Seq,
    ) -> Result<Vec<(IndexSet, &'a RationalFunc, &'a RationalFunc)>> {
        let mut out = Vec::new();
        for (ca, fa) in &self.pieces {
            for (cb, fb) in &other.pieces {
                let cell = ca.intersect(cb)?;
                if !cell.is_empty() {
                    out.push((cell, fa, fb));
                }
            }
        }
        Ok(out)
    }

    /// Pointwise arithmetic. Division by a presentation that vanishes on an
    /// infinite cell of the common refinement is an error; finitely many
    /// zero divisors are repaired to 0.
    pub fn arith(op: ArithOp, a: &Seq, b: &Seq) -> Result<Seq> {
        let mut raw = Vec::new();
        let mut extra_repairs: BTreeSet<u64> = BTreeSet::new();
        for (cell, fa, fb) in a.refine(b)? {
            let expr = match op {
                ArithOp::Add => fa.add(fb),
                ArithOp::Sub => fa.sub(fb),
                ArithOp::Mul => fa.mul(fb),
                ArithOp::Div => {
                    if fb.is_zero() {
                        if !cell.is_finite() {
                            return Err(EngineError::Division(format!("cell {cell}")));
                        }
                        extra_repairs.extend(cell.members_below(cell.scan_bound()));
                        raw.push((cell, RationalFunc::zero()));
                        continue;
                    }
                    // nonzero divisor: its isolated integer zeros become
                    // denominator roots and are carved by `assemble`
                    fa.div(fb)?
                }
            };
            raw.push((cell, expr));
        }
        let mut out = Seq::assemble(raw)?;
        out.repaired.extend(a.repaired.iter().copied());
        out.repaired.extend(b.repaired.iter().copied());
        out.repaired.extend(extra_repairs);
        Ok(out)
    }

    pub fn add(&self, other: &Seq) -> Seq {
        Seq::arith(ArithOp::Add, self, other).expect("addition is total")
    }

    pub fn sub(&self, other: &Seq) -> Seq {
        Seq::arith(ArithOp::Sub, self, other).expect("subtraction is total")
    }

    pub fn mul(&self, other: &Seq) -> Seq {
        Seq::arith(ArithOp::Mul, self, other).expect("multiplication is total")
    }

    pub fn try_div(&self, other: &Seq) -> Result<Seq> {
        Seq::arith(ArithOp::Div, self, other)
    }

    pub fn neg(&self) -> Seq {
        Seq::zero().sub(self)
    }

    /// The exact index set where `self R other` holds pointwise.
    ///
    /// On each common-refinement cell the difference is a single rational
    /// function; beyond its sign-stability bound one evaluation settles the
    /// whole tail, below it indices are checked one by one.
    pub fn truth_set(&self, op: RelOp, other: &Seq) -> Result<IndexSet> {
        let mut out = IndexSet::empty();
        for (cell, fa, fb) in self.refine(other)? {
            let h = fa.sub(fb);
            let part = if h.is_zero() {
                if op.holds(0) {
                    cell
                } else {
                    IndexSet::empty()
                }
            } else {
                let bound = h.sign_stable_bound()?;
                let head: Vec<u64> = cell
                    .members_below(bound + 1)
                    .filter(|&n| {
                        let v = h.eval(n).expect("no denominator zeros inside cells");
                        op.holds(sign(&v))
                    })
                    .collect();
                let tail_sign = sign(
                    &h.eval(bound + 1)
                        .expect("sign-stable tail avoids denominator zeros"),
                );
                let mut part = IndexSet::finite(head);
                if op.holds(tail_sign) {
                    let tail = cell.difference(&IndexSet::finite(0..=bound))?;
                    part = part.union(&tail)?;
                }
                part
            };
            out = out.union(&part)?;
        }
        Ok(out)
    }

    /// Exact limits along the pieces that meet `within` infinitely, grouped
    /// so cells sharing a limit are unioned; groups are ordered by least
    /// member. Errors when `within` is finite.
    pub fn cluster_limits(&self, within: &IndexSet) -> Result<Vec<(IndexSet, Limit)>> {
        if within.is_finite() {
            return Err(EngineError::Argument(
                "cluster limits need an infinite index set".into(),
            ));
        }
        let mut groups: Vec<(IndexSet, Limit)> = Vec::new();
        for (cell, expr) in &self.pieces {
            if cell.intersect(within)?.is_finite() {
                continue;
            }
            let lim = expr.limit();
            match groups.iter_mut().find(|(_, l)| *l == lim) {
                Some((c, _)) => *c = c.union(cell)?,
                None => groups.push((cell.clone(), lim)),
            }
        }
        groups.sort_by_key(|(c, _)| c.min_member().expect("infinite cell"));
        Ok(groups)
    }

    /// Union of all pieces whose expression tends to 0; for every engine
    /// filter F, membership of this set in F decides whether the
    /// presentation is F-infinitesimal.
    pub fn infinitesimal_support(&self) -> Result<IndexSet> {
        let mut out = IndexSet::empty();
        for (cell, expr) in &self.pieces {
            if expr.limit() == Limit::Finite(Q::zero()) {
                out = out.union(cell)?;
            }
        }
        Ok(out)
    }

    /// Union of all pieces with a constant expression; for every engine
    /// filter F, membership in F decides whether the presentation is
    /// F-standard (identified with the constant embedding of some rational).
    pub fn standard_support(&self) -> Result<IndexSet> {
        let mut out = IndexSet::empty();
        for (cell, expr) in &self.pieces {
            if expr.is_constant() {
                out = out.union(cell)?;
            }
        }
        Ok(out)
    }

    /// Pointwise absolute value (splits cells by sign).
    pub fn abs(&self) -> Result<Seq> {
        let negative = self.truth_set(RelOp::Lt, &Seq::zero())?;
        let mut raw = Vec::new();
        for (cell, expr) in &self.pieces {
            let neg_part = cell.intersect(&negative)?;
            let pos_part = cell.difference(&negative)?;
            raw.push((neg_part, expr.neg()));
            raw.push((pos_part, expr.clone()));
        }
        let mut out = Seq::assemble(raw)?;
        out.repaired = self.repaired.clone();
        Ok(out)
    }

    /// Pointwise minimum.
    pub fn min(&self, other: &Seq) -> Result<Seq> {
        self.select(other, RelOp::Le)
    }

    /// Pointwise maximum.
    pub fn max(&self, other: &Seq) -> Result<Seq> {
        self.select(other, RelOp::Ge)
    }

    fn select(&self, other: &Seq, keep_self_when: RelOp) -> Result<Seq> {
        let mine = self.truth_set(keep_self_when, other)?;
        let mut raw = Vec::new();
        for (cell, fa, fb) in self.refine(other)? {
            raw.push((cell.intersect(&mine)?, fa.clone()));
            raw.push((cell.difference(&mine)?, fb.clone()));
        }
        let mut out = Seq::assemble(raw)?;
        out.repaired.extend(self.repaired.iter().copied());
        out.repaired.extend(other.repaired.iter().copied());
        Ok(out)
    }

    /// Stitch restrictions of several presentations into one; the cells must
    /// partition the index space.
    pub fn patchwork(parts: &[(IndexSet, Seq)]) -> Result<Seq> {
        let mut raw = Vec::new();
        let mut repaired = BTreeSet::new();
        for (i, (region, _)) in parts.iter().enumerate() {
            for (other, _) in parts.iter().skip(i + 1) {
                if !region.intersect(other)?.is_empty() {
                    return Err(EngineError::Partition(format!(
                        "regions {region} and {other} overlap"
                    )));
                }
            }
        }
        let mut cover = IndexSet::empty();
        for (region, seq) in parts {
            cover = cover.union(region)?;
            for (cell, expr) in &seq.pieces {
                raw.push((cell.intersect(region)?, expr.clone()));
            }
            repaired.extend(seq.repaired.iter().copied());
        }
        if cover != IndexSet::universe() {
            return Err(EngineError::Partition(format!(
                "regions leave {} uncovered",
                cover.complement()
            )));
        }
        let mut out = Seq::assemble(raw)?;
        out.repaired = repaired;
        Ok(out)
    }

    /// `Some(q)` when the presentation is the constant embedding of `q`.
    pub fn as_constant(&self) -> Option<Q> {
        match self.pieces.as_slice() {
            [(_, expr)] => expr.as_constant(),
            _ => None,
        }
    }
}

impl fmt::Display for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_constant() {
            return write!(f, "delta({})", show_rational(&q));
        }
        let body: Vec<String> = self
            .pieces
            .iter()
            .map(|(c, e)| format!("{c} -> {e}"))
            .collect();
        write!(f, "seq{{{}}}", body.join(", "))
    }
}

impl fmt::Debug for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)?;
        if !self.repaired.is_empty() {
            write!(f, " [repaired at {:?}]", self.repaired)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{qi, qr};

    fn evens() -> IndexSet {
        IndexSet::residue(0, 2).unwrap()
    }

    fn odds() -> IndexSet {
        IndexSet::residue(1, 2).unwrap()
    }

    fn rf_const(v: i64) -> RationalFunc {
        RationalFunc::constant(qi(v))
    }

    /// n/2 as a rational function.
    fn half_n() -> RationalFunc {
        RationalFunc::var()
            .div(&RationalFunc::constant(qi(2)))
            .unwrap()
    }

    /// 1/(n+1).
    fn recip_succ() -> RationalFunc {
        RationalFunc::constant(qi(1))
            .div(&RationalFunc::var().add(&RationalFunc::constant(qi(1))))
            .unwrap()
    }

    pub(crate) fn laugwitz_a() -> Seq {
        Seq::piecewise(vec![(evens(), rf_const(2)), (odds(), rf_const(0))]).unwrap()
    }

    pub(crate) fn laugwitz_b() -> Seq {
        Seq::piecewise(vec![(evens(), rf_const(0)), (odds(), rf_const(2))]).unwrap()
    }

    #[test]
    fn constant_evaluates_everywhere() {
        let c = Seq::constant(qi(5));
        assert_eq!(c.eval(17), qi(5));
        assert_eq!(c.as_constant(), Some(qi(5)));
    }

    #[test]
    fn piecewise_requires_partition() {
        let err = Seq::piecewise(vec![(evens(), rf_const(1))]);
        assert!(matches!(err, Err(EngineError::Partition(_))));
        let err = Seq::piecewise(vec![
            (IndexSet::universe(), rf_const(1)),
            (evens(), rf_const(2)),
        ]);
        assert!(matches!(err, Err(EngineError::Partition(_))));
    }

    #[test]
    fn hypernatural_test_sequence() {
        // n/2 on evens, 1/2 on odds
        let s = Seq::piecewise(vec![
            (evens(), half_n()),
            (odds(), RationalFunc::constant(qr(1, 2))),
        ])
        .unwrap();
        assert_eq!(s.eval(6), qi(3));
        assert_eq!(s.eval(7), qr(1, 2));
    }

    #[test]
    fn denominator_zero_repaired() {
        // 1/n is undefined at 0: repaired to a finite exception piece
        let recip = RationalFunc::constant(qi(1))
            .div(&RationalFunc::var())
            .unwrap();
        let s = Seq::piecewise(vec![(IndexSet::universe(), recip)]).unwrap();
        assert_eq!(s.eval(0), qi(0));
        assert_eq!(s.eval(4), qr(1, 4));
        assert_eq!(s.repairs().collect::<Vec<_>>(), vec![0]);
        assert_eq!(s.pieces().len(), 2);
    }

    #[test]
    fn zero_divisor_product_vanishes() {
        let prod = laugwitz_a().mul(&laugwitz_b());
        assert_eq!(prod, Seq::zero());
    }

    #[test]
    fn subtraction_cancels() {
        let s = Seq::piecewise(vec![(evens(), half_n()), (odds(), rf_const(7))]).unwrap();
        assert_eq!(s.sub(&s), Seq::zero());
    }

    #[test]
    fn division_by_infinite_zero_cell_fails() {
        let err = Seq::constant(qi(1)).try_div(&laugwitz_a());
        assert!(matches!(err, Err(EngineError::Division(_))));
    }

    #[test]
    fn division_with_finite_zeros_repairs() {
        // divide by (n - 3): single zero at 3 gets repaired
        let d = Seq::piecewise(vec![(
            IndexSet::universe(),
            RationalFunc::var().sub(&rf_const(3)),
        )])
        .unwrap();
        let q = Seq::constant(qi(1)).try_div(&d).unwrap();
        assert_eq!(q.eval(3), qi(0));
        assert_eq!(q.eval(4), qi(1));
        assert!(q.repairs().any(|n| n == 3));
    }

    #[test]
    fn truth_set_monotone_threshold() {
        // 1/(n+1) < 1/3 exactly when n >= 3
        let s = Seq::piecewise(vec![(IndexSet::universe(), recip_succ())]).unwrap();
        let t = s
            .truth_set(RelOp::Lt, &Seq::constant(qr(1, 3)))
            .unwrap();
        let expected = IndexSet::finite([0, 1, 2]).complement();
        assert_eq!(t, expected);
        // brute-force cross-check
        for n in 0..=10 {
            assert_eq!(t.member(n), s.eval(n) < qr(1, 3), "n = {n}");
        }
    }

    #[test]
    fn truth_set_equality_picks_out_odds() {
        let t = laugwitz_a().truth_set(RelOp::Eq, &Seq::zero()).unwrap();
        assert_eq!(t, odds());
    }

    #[test]
    fn truth_set_reflexive() {
        let s = laugwitz_a();
        assert_eq!(s.truth_set(RelOp::Eq, &s).unwrap(), IndexSet::universe());
        assert!(s.truth_set(RelOp::Lt, &s).unwrap().is_empty());
    }

    #[test]
    fn cluster_limits_alternating() {
        // (-1)^n / 2: +1/2 on evens, -1/2 on odds
        let s = Seq::piecewise(vec![
            (evens(), RationalFunc::constant(qr(1, 2))),
            (odds(), RationalFunc::constant(qr(-1, 2))),
        ])
        .unwrap();
        let groups = s.cluster_limits(&IndexSet::universe()).unwrap();
        assert_eq!(
            groups,
            vec![
                (evens(), Limit::Finite(qr(1, 2))),
                (odds(), Limit::Finite(qr(-1, 2)))
            ]
        );
    }

    #[test]
    fn cluster_limits_constant_and_unbounded() {
        let c = Seq::constant(qr(3, 4));
        assert_eq!(
            c.cluster_limits(&IndexSet::universe()).unwrap(),
            vec![(IndexSet::universe(), Limit::Finite(qr(3, 4)))]
        );
        let n = Seq::piecewise(vec![(IndexSet::universe(), RationalFunc::var())]).unwrap();
        assert_eq!(
            n.cluster_limits(&IndexSet::universe()).unwrap(),
            vec![(IndexSet::universe(), Limit::PlusInfinity)]
        );
        assert!(n.cluster_limits(&IndexSet::finite([1, 2])).is_err());
    }

    #[test]
    fn cluster_limits_restricted_to_a_cell() {
        let s = Seq::piecewise(vec![(evens(), half_n()), (odds(), rf_const(7))]).unwrap();
        let groups = s.cluster_limits(&odds()).unwrap();
        assert_eq!(groups, vec![(odds(), Limit::Finite(qi(7)))]);
    }

    #[test]
    fn cluster_limits_ignore_finite_edits() {
        let s = Seq::piecewise(vec![
            (evens(), RationalFunc::constant(qr(1, 2))),
            (odds(), RationalFunc::constant(qr(-1, 2))),
        ])
        .unwrap();
        let edited = Seq::patchwork(&[
            (IndexSet::finite([0, 2, 4]), Seq::constant(qi(99))),
            (IndexSet::finite([0, 2, 4]).complement(), s.clone()),
        ])
        .unwrap();
        // same limits, and each group's cell differs only finitely
        let before = s.cluster_limits(&IndexSet::universe()).unwrap();
        let after = edited.cluster_limits(&IndexSet::universe()).unwrap();
        assert_eq!(before.len(), after.len());
        for (cell_b, lim_b) in &before {
            let (cell_a, _) = after
                .iter()
                .find(|(_, l)| l == lim_b)
                .expect("limit survives finite edits");
            assert!(cell_b.difference(cell_a).unwrap().is_finite());
            assert!(cell_a.difference(cell_b).unwrap().is_finite());
        }
    }

    #[test]
    fn abs_min_max_pointwise() {
        let s = Seq::piecewise(vec![
            (evens(), RationalFunc::constant(qr(1, 2))),
            (odds(), RationalFunc::constant(qr(-1, 2))),
        ])
        .unwrap();
        let a = s.abs().unwrap();
        assert_eq!(a, Seq::constant(qr(1, 2)));
        let m = s.min(&Seq::zero()).unwrap();
        assert_eq!(m.eval(0), qi(0));
        assert_eq!(m.eval(1), qr(-1, 2));
        let x = s.max(&Seq::zero()).unwrap();
        assert_eq!(x.eval(0), qr(1, 2));
        assert_eq!(x.eval(1), qi(0));
    }

    #[test]
    fn infinitesimal_and_standard_support() {
        let eps = Seq::piecewise(vec![(IndexSet::universe(), recip_succ())]).unwrap();
        assert_eq!(eps.infinitesimal_support().unwrap(), IndexSet::universe());
        assert_eq!(
            laugwitz_a().infinitesimal_support().unwrap(),
            odds()
        );
        assert_eq!(
            laugwitz_a().standard_support().unwrap(),
            IndexSet::universe()
        );
        let mixed = Seq::piecewise(vec![(evens(), half_n()), (odds(), rf_const(7))]).unwrap();
        assert_eq!(mixed.standard_support().unwrap(), odds());
    }

    #[test]
    fn canonical_form_ignores_construction_order() {
        let pieces = vec![
            (IndexSet::residue(1, 3).unwrap(), rf_const(7)),
            (IndexSet::residue(0, 3).unwrap(), half_n()),
            (IndexSet::residue(2, 3).unwrap(), rf_const(7)),
        ];
        let mut reordered = pieces.clone();
        reordered.rotate_left(1);
        let a = Seq::piecewise(pieces).unwrap();
        let b = Seq::piecewise(reordered).unwrap();
        assert_eq!(a, b);
        // equal expressions merged into one cell
        assert_eq!(a.pieces().len(), 2);
    }

    #[test]
    fn oracle_membership_agreement() {
        // randomized-ish cross-check on a fixed pair: truth set vs direct eval
        let a = Seq::piecewise(vec![(evens(), half_n()), (odds(), recip_succ())]).unwrap();
        let b = Seq::constant(qi(1));
        for op in [RelOp::Eq, RelOp::Ne, RelOp::Lt, RelOp::Le, RelOp::Gt, RelOp::Ge] {
            let t = a.truth_set(op, &b).unwrap();
            for n in 0..200 {
                let s = sign(&(a.eval(n) - b.eval(n)));
                assert_eq!(t.member(n), op.holds(s), "op {op:?}, n = {n}");
            }
        }
    }
}
