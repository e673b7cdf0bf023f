//! Internal predicates: one-variable quantifier-free templates whose
//! per-index extension is a finite union of rational intervals, together
//! with the constructive countable-saturation witness.
//!
//! A template's atoms compare the distinguished variable against
//! sequence-valued terms, so the extension at index `i` is assembled from
//! intervals with endpoints evaluated at `i`. Emptiness and containment
//! between two predicates are decided symbolically: the pairwise comparison
//! truth sets of all endpoint sequences carve the index space into cells on
//! which the interval arrangement has constant shape, and one representative
//! index per cell settles the whole cell.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{EngineError, Result};
use crate::filter::Filter;
use crate::formula::{Formula, Term};
use crate::index_set::IndexSet;
use crate::interval::{Hi, IntervalSet, Lo, Marked, Pick};
use crate::rational::{qi, Q};
use crate::seq::{RelOp, Seq};

/// Template body; atom endpoints are indices into the owning predicate's
/// endpoint list.
#[derive(Clone, Debug, PartialEq)]
enum Body {
    /// `x R endpoints[k]`, with the distinguished variable on the left.
    Atom(RelOp, usize),
    /// An atom not mentioning the distinguished variable: the extension is
    /// the whole line exactly on this index set, empty off it.
    Index(IndexSet),
    Not(Box<Body>),
    And(Box<Body>, Box<Body>),
    Or(Box<Body>, Box<Body>),
}

/// An internal predicate.
#[derive(Clone, Debug, PartialEq)]
pub struct InternalPred {
    name: Option<String>,
    var: String,
    endpoints: Vec<Seq>,
    body: Body,
}

fn flip(op: RelOp) -> RelOp {
    match op {
        RelOp::Lt => RelOp::Gt,
        RelOp::Le => RelOp::Ge,
        RelOp::Gt => RelOp::Lt,
        RelOp::Ge => RelOp::Le,
        RelOp::Eq => RelOp::Eq,
        RelOp::Ne => RelOp::Ne,
    }
}

impl InternalPred {
    /// Compile a template. Every atom must either isolate the distinguished
    /// variable on one side of a comparison or not mention it at all;
    /// viewpoint-relative atoms, named predicates and quantifiers are
    /// rejected.
    pub fn new(
        var: impl Into<String>,
        template: &Formula,
        params: &BTreeMap<String, Seq>,
    ) -> Result<InternalPred> {
        let var = var.into();
        let mut endpoints = Vec::new();
        let body = compile(&var, template, params, &mut endpoints)?;
        Ok(InternalPred {
            name: None,
            var,
            endpoints,
            body,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> InternalPred {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    /// Exact interval-union form of the extension at one index. Endpoints
    /// carry tags pointing back at their sequence.
    pub fn extension_at(&self, i: u64) -> IntervalSet {
        self.ext(&self.body, i)
    }

    fn ext(&self, body: &Body, i: u64) -> IntervalSet {
        match body {
            Body::Atom(op, k) => {
                let m = Marked::tagged(self.endpoints[*k].eval(i), *k);
                atom_interval(*op, m)
            }
            Body::Index(s) => {
                if s.member(i) {
                    IntervalSet::whole_line()
                } else {
                    IntervalSet::empty()
                }
            }
            Body::Not(b) => self.ext(b, i).complement(),
            Body::And(a, b) => self.ext(a, i).intersect(&self.ext(b, i)),
            Body::Or(a, b) => self.ext(a, i).union(&self.ext(b, i)),
        }
    }

    /// The index set where a presentation satisfies the template pointwise.
    pub fn membership_set(&self, b: &Seq) -> Result<IndexSet> {
        self.mem(&self.body, b)
    }

    fn mem(&self, body: &Body, b: &Seq) -> Result<IndexSet> {
        match body {
            Body::Atom(op, k) => b.truth_set(*op, &self.endpoints[*k]),
            Body::Index(s) => Ok(s.clone()),
            Body::Not(inner) => Ok(self.mem(inner, b)?.complement()),
            Body::And(p, q) => self.mem(p, b)?.intersect(&self.mem(q, b)?),
            Body::Or(p, q) => self.mem(p, b)?.union(&self.mem(q, b)?),
        }
    }

    /// Viewpoint-relative membership of a presentation in the internal set.
    pub fn member_at(&self, b: &Seq, filter: &Filter) -> Result<bool> {
        Ok(filter.contains(&self.membership_set(b)?))
    }

    /// Template-level negation.
    pub fn negate(&self) -> InternalPred {
        InternalPred {
            name: None,
            var: self.var.clone(),
            endpoints: self.endpoints.clone(),
            body: Body::Not(Box::new(self.body.clone())),
        }
    }

    fn combine(&self, other: &InternalPred, conj: bool) -> InternalPred {
        let mut endpoints = self.endpoints.clone();
        let shift = endpoints.len();
        endpoints.extend(other.endpoints.iter().cloned());
        let shifted = shift_body(&other.body, shift);
        let body = if conj {
            Body::And(Box::new(self.body.clone()), Box::new(shifted))
        } else {
            Body::Or(Box::new(self.body.clone()), Box::new(shifted))
        };
        InternalPred {
            name: None,
            var: self.var.clone(),
            endpoints,
            body,
        }
    }

    /// Template-level conjunction.
    pub fn and(&self, other: &InternalPred) -> InternalPred {
        self.combine(other, true)
    }

    /// Template-level disjunction.
    pub fn or(&self, other: &InternalPred) -> InternalPred {
        self.combine(other, false)
    }

    /// Index cells on which the interval arrangement has constant shape:
    /// every pairwise comparison of endpoint sequences is constant, and so
    /// is every variable-free atom.
    fn arrangement(&self, within: &IndexSet) -> Result<Vec<IndexSet>> {
        let mut cells = vec![within.clone()];
        let split = |cells: Vec<IndexSet>, parts: &[IndexSet]| -> Result<Vec<IndexSet>> {
            let mut next = Vec::new();
            for cell in cells {
                for part in parts {
                    let piece = cell.intersect(part)?;
                    if !piece.is_empty() {
                        next.push(piece);
                    }
                }
            }
            Ok(next)
        };
        for s in collect_index_atoms(&self.body) {
            cells = split(cells, &[s.clone(), s.complement()])?;
        }
        for i in 0..self.endpoints.len() {
            for j in (i + 1)..self.endpoints.len() {
                let lt = self.endpoints[i].truth_set(RelOp::Lt, &self.endpoints[j])?;
                let eq = self.endpoints[i].truth_set(RelOp::Eq, &self.endpoints[j])?;
                let gt = lt.union(&eq)?.complement();
                cells = split(cells, &[lt, eq, gt])?;
            }
        }
        Ok(cells)
    }

    /// The exact index set where the extension is nonempty, computed
    /// symbolically: one representative index decides each arrangement cell.
    pub fn emptiness_set(&self) -> Result<IndexSet> {
        let mut out = IndexSet::empty();
        for cell in self.arrangement(&IndexSet::universe())? {
            let rep = cell.min_member().expect("arrangement cells are nonempty");
            if !self.extension_at(rep).is_empty() {
                out = out.union(&cell)?;
            }
        }
        Ok(out)
    }

    /// The exact index set where this predicate's extension is contained in
    /// the other's.
    pub fn subset_set(&self, other: &InternalPred) -> Result<IndexSet> {
        let gap = self.and(&other.negate());
        Ok(gap.emptiness_set()?.complement())
    }
}

fn collect_index_atoms(body: &Body) -> Vec<IndexSet> {
    match body {
        Body::Atom(..) => vec![],
        Body::Index(s) => vec![s.clone()],
        Body::Not(b) => collect_index_atoms(b),
        Body::And(a, b) | Body::Or(a, b) => {
            let mut out = collect_index_atoms(a);
            out.extend(collect_index_atoms(b));
            out
        }
    }
}

fn shift_body(body: &Body, by: usize) -> Body {
    match body {
        Body::Atom(op, k) => Body::Atom(*op, k + by),
        Body::Index(s) => Body::Index(s.clone()),
        Body::Not(b) => Body::Not(Box::new(shift_body(b, by))),
        Body::And(a, b) => Body::And(Box::new(shift_body(a, by)), Box::new(shift_body(b, by))),
        Body::Or(a, b) => Body::Or(Box::new(shift_body(a, by)), Box::new(shift_body(b, by))),
    }
}

fn atom_interval(op: RelOp, m: Marked) -> IntervalSet {
    match op {
        RelOp::Lt => IntervalSet::interval(Lo::NegInf, Hi::Open(m)),
        RelOp::Le => IntervalSet::interval(Lo::NegInf, Hi::Closed(m)),
        RelOp::Gt => IntervalSet::interval(Lo::Open(m), Hi::PosInf),
        RelOp::Ge => IntervalSet::interval(Lo::Closed(m), Hi::PosInf),
        RelOp::Eq => IntervalSet::point(m),
        RelOp::Ne => IntervalSet::point(m).complement(),
    }
}

/// Evaluate a template term to a sequence; only parameter lookups, constants
/// and total arithmetic are allowed.
fn eval_template_term(term: &Term, params: &BTreeMap<String, Seq>) -> Result<Seq> {
    match term {
        Term::Const(q) => Ok(Seq::constant(q.clone())),
        Term::Var(v) => params
            .get(v)
            .cloned()
            .ok_or_else(|| EngineError::Unbound(v.clone())),
        Term::SeqLit(pieces) => Seq::piecewise(pieces.clone()),
        Term::Add(a, b) => Ok(eval_template_term(a, params)?.add(&eval_template_term(b, params)?)),
        Term::Sub(a, b) => Ok(eval_template_term(a, params)?.sub(&eval_template_term(b, params)?)),
        Term::Mul(a, b) => Ok(eval_template_term(a, params)?.mul(&eval_template_term(b, params)?)),
        Term::Div(a, b) => eval_template_term(a, params)?.try_div(&eval_template_term(b, params)?),
        Term::Neg(a) => Ok(eval_template_term(a, params)?.neg()),
        Term::Abs(a) => eval_template_term(a, params)?.abs(),
        Term::Min(a, b) => eval_template_term(a, params)?.min(&eval_template_term(b, params)?),
        Term::Max(a, b) => eval_template_term(a, params)?.max(&eval_template_term(b, params)?),
    }
}

fn compile(
    var: &str,
    phi: &Formula,
    params: &BTreeMap<String, Seq>,
    endpoints: &mut Vec<Seq>,
) -> Result<Body> {
    match phi {
        Formula::Rel(a, op, b) => {
            let a_is_var = matches!(a, Term::Var(v) if v == var);
            let b_is_var = matches!(b, Term::Var(v) if v == var);
            match (a_is_var, b_is_var) {
                (true, true) => {
                    // x R x: constant truth value per relation
                    let holds = op.holds(0);
                    Ok(Body::Index(if holds {
                        IndexSet::universe()
                    } else {
                        IndexSet::empty()
                    }))
                }
                (true, false) => {
                    if b.mentions(var) {
                        return Err(EngineError::Fragment(format!(
                            "template atom must isolate `{var}` on one side"
                        )));
                    }
                    let s = eval_template_term(b, params)?;
                    endpoints.push(s);
                    Ok(Body::Atom(*op, endpoints.len() - 1))
                }
                (false, true) => {
                    if a.mentions(var) {
                        return Err(EngineError::Fragment(format!(
                            "template atom must isolate `{var}` on one side"
                        )));
                    }
                    let s = eval_template_term(a, params)?;
                    endpoints.push(s);
                    Ok(Body::Atom(flip(*op), endpoints.len() - 1))
                }
                (false, false) => {
                    if a.mentions(var) || b.mentions(var) {
                        return Err(EngineError::Fragment(format!(
                            "template atom must isolate `{var}` on one side"
                        )));
                    }
                    let sa = eval_template_term(a, params)?;
                    let sb = eval_template_term(b, params)?;
                    Ok(Body::Index(sa.truth_set(*op, &sb)?))
                }
            }
        }
        Formula::Not(p) => Ok(Body::Not(Box::new(compile(var, p, params, endpoints)?))),
        Formula::And(p, q) => Ok(Body::And(
            Box::new(compile(var, p, params, endpoints)?),
            Box::new(compile(var, q, params, endpoints)?),
        )),
        Formula::Or(p, q) => Ok(Body::Or(
            Box::new(compile(var, p, params, endpoints)?),
            Box::new(compile(var, q, params, endpoints)?),
        )),
        Formula::Implies(p, q) => Ok(Body::Or(
            Box::new(Body::Not(Box::new(compile(var, p, params, endpoints)?))),
            Box::new(compile(var, q, params, endpoints)?),
        )),
        Formula::Close(..) | Formula::Standard(..) | Formula::StandardPart(..) => {
            Err(EngineError::Fragment(
                "templates take comparison atoms only".into(),
            ))
        }
        Formula::Pred(..) => Err(EngineError::Fragment(
            "templates cannot nest internal predicates".into(),
        )),
        Formula::Exists(..) | Formula::Forall(..) => Err(EngineError::Fragment(
            "templates are quantifier-free".into(),
        )),
    }
}

impl fmt::Display for InternalPred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = &self.name {
            write!(f, "{n} := ")?;
        }
        write!(f, "{{{} | ", self.var)?;
        self.fmt_body(&self.body, f)?;
        write!(f, "}}")
    }
}

impl InternalPred {
    fn fmt_body(&self, body: &Body, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match body {
            Body::Atom(op, k) => write!(f, "{} {} {}", self.var, op.symbol(), self.endpoints[*k]),
            Body::Index(s) => write!(f, "[index in {s}]"),
            Body::Not(b) => {
                write!(f, "~(")?;
                self.fmt_body(b, f)?;
                write!(f, ")")
            }
            Body::And(a, b) => {
                write!(f, "(")?;
                self.fmt_body(a, f)?;
                write!(f, " /\\ ")?;
                self.fmt_body(b, f)?;
                write!(f, ")")
            }
            Body::Or(a, b) => {
                write!(f, "(")?;
                self.fmt_body(a, f)?;
                write!(f, " \\/ ")?;
                self.fmt_body(b, f)?;
                write!(f, ")")
            }
        }
    }
}

/// A finite chain of internal predicates intended to be decreasing and
/// nonempty under a viewpoint; index 0 is the first link.
#[derive(Clone, Debug)]
pub struct Chain {
    preds: Vec<InternalPred>,
}

impl Chain {
    pub fn finite(preds: Vec<InternalPred>) -> Chain {
        Chain { preds }
    }

    /// Materialize a generated chain to the given depth; the generator is
    /// called with 1-based link numbers.
    pub fn generate(depth: usize, gen: impl Fn(usize) -> Result<InternalPred>) -> Result<Chain> {
        let preds = (1..=depth).map(gen).collect::<Result<Vec<_>>>()?;
        Ok(Chain { preds })
    }

    pub fn len(&self) -> usize {
        self.preds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.preds.is_empty()
    }

    pub fn links(&self) -> &[InternalPred] {
        &self.preds
    }
}

/// The witness produced by [`saturation_witness`] plus its verification.
#[derive(Clone, Debug)]
pub struct SaturationOutcome {
    pub witness: Seq,
    /// `(k, verified)` for every link `k` of the chain, 1-based.
    pub checks: Vec<(usize, bool)>,
}

impl SaturationOutcome {
    pub fn all_verified(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

/// Diagonal construction of a common element of a decreasing chain of
/// internal sets at a viewpoint.
///
/// After checking the preconditions (each containment set and each
/// nonemptiness set belongs to the filter) the index space is split by how
/// deep an index sits in the chain's agreement sets; on each region the
/// deterministic selector turns the governing extension into a symbolic
/// expression, and the regions are stitched into a single presentation that
/// is then re-verified against every link.
pub fn saturation_witness(chain: &Chain, filter: &Filter) -> Result<SaturationOutcome> {
    let k_max = chain.len();
    if k_max == 0 {
        return Err(EngineError::Argument("empty chain".into()));
    }
    let preds = chain.links();

    // preconditions, named by the failing link
    let mut emp = Vec::with_capacity(k_max);
    for (idx, p) in preds.iter().enumerate() {
        let e = p.emptiness_set()?;
        if !filter.contains(&e) {
            return Err(EngineError::ChainPrecondition {
                k: idx + 1,
                what: format!("nonemptiness set {e} is not in the filter"),
            });
        }
        emp.push(e);
    }
    let mut sub = Vec::with_capacity(k_max.saturating_sub(1));
    for idx in 0..k_max - 1 {
        let s = preds[idx + 1].subset_set(&preds[idx])?;
        if !filter.contains(&s) {
            return Err(EngineError::ChainPrecondition {
                k: idx + 1,
                what: format!("containment set {s} is not in the filter"),
            });
        }
        sub.push(s);
    }

    // agreement sets: J^k = (intersection of the first k-1 containment
    // sets) n (nonemptiness of link k)
    let mut j = Vec::with_capacity(k_max);
    let mut acc = IndexSet::universe();
    for k in 1..=k_max {
        if k >= 2 {
            acc = acc.intersect(&sub[k - 2])?;
        }
        j.push(acc.intersect(&emp[k - 1])?);
    }

    // depth regions: d_k = J^k n {n >= k}; region_k = d_k \ d_{k+1}
    let d: Vec<IndexSet> = (1..=k_max)
        .map(|k| j[k - 1].intersect(&IndexSet::tail(k as u64)))
        .collect::<Result<Vec<_>>>()?;
    let mut regions: Vec<(usize, IndexSet)> = Vec::new();
    for k in 1..=k_max {
        let region = if k < k_max {
            d[k - 1].difference(&d[k])?
        } else {
            d[k - 1].clone()
        };
        if !region.is_empty() {
            regions.push((k, region));
        }
    }
    let mut covered = IndexSet::empty();
    for (_, r) in &regions {
        covered = covered.union(r)?;
    }
    let default_region = covered.complement();

    // per region, pick symbolically on each arrangement cell
    let mut parts: Vec<(IndexSet, Seq)> = Vec::new();
    if !default_region.is_empty() {
        parts.push((default_region, Seq::zero()));
    }
    for (k, region) in &regions {
        let pred = &preds[k - 1];
        for cell in pred.arrangement(region)? {
            let rep = cell.min_member().expect("arrangement cells are nonempty");
            let ext = pred.extension_at(rep);
            let pick = ext.pick().ok_or_else(|| {
                EngineError::Internal(format!(
                    "link {k} has empty extension at agreed index {rep}"
                ))
            })?;
            parts.push((cell, pick_to_seq(&pick, pred)?));
        }
    }
    let witness = Seq::patchwork(&parts)?;

    let mut checks = Vec::with_capacity(k_max);
    for (idx, p) in preds.iter().enumerate() {
        checks.push((idx + 1, p.member_at(&witness, filter)?));
    }
    Ok(SaturationOutcome { witness, checks })
}

fn pick_to_seq(pick: &Pick, pred: &InternalPred) -> Result<Seq> {
    let endpoint = |m: &Marked| -> Result<Seq> {
        match m.tag {
            Some(k) => Ok(pred.endpoints[k].clone()),
            None => Err(EngineError::Internal(
                "finite interval endpoint without a source term".into(),
            )),
        }
    };
    Ok(match pick {
        Pick::LeftEndpoint(a) => endpoint(a)?,
        Pick::Midpoint(a, b) => endpoint(a)?
            .add(&endpoint(b)?)
            .try_div(&Seq::constant(qi(2)))?,
        Pick::RightOfLeft(a) => endpoint(a)?.add(&Seq::constant(qi(1))),
        Pick::LeftOfRight(b) => endpoint(b)?.sub(&Seq::constant(qi(1))),
        Pick::Zero => Seq::zero(),
    })
}

/// The internal predicate `x = r1 \/ ... \/ x = rk` over finitely many
/// standard points.
pub fn finite_standard_pred(points: &[Q]) -> Result<InternalPred> {
    if points.is_empty() {
        return InternalPred::new("x", &Formula::Rel(
            Term::var("x"),
            RelOp::Ne,
            Term::var("x"),
        ), &BTreeMap::new());
    }
    let atom = |q: &Q| Formula::Rel(Term::var("x"), RelOp::Eq, Term::Const(q.clone()));
    let mut phi = atom(&points[0]);
    for p in &points[1..] {
        phi = phi.or(atom(p));
    }
    InternalPred::new("x", &phi, &BTreeMap::new())
}

/// Report of the finite/standard internal-set agreement check: membership
/// in the disjunction-of-points predicate versus direct pointwise equality.
#[derive(Clone, Debug)]
pub struct FiniteStandardReport {
    pub entries: Vec<(String, bool)>,
}

impl FiniteStandardReport {
    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|(_, ok)| *ok)
    }
}

/// For each probe, check that viewpoint membership in the finite standard
/// predicate agrees with the filter seeing an index set where the probe
/// equals one of the points.
pub fn finite_standard_internal_check(
    points: &[Q],
    probes: &[Seq],
    filter: &Filter,
) -> Result<FiniteStandardReport> {
    let pred = finite_standard_pred(points)?;
    let mut entries = Vec::new();
    for probe in probes {
        let via_pred = pred.member_at(probe, filter)?;
        let mut agree = IndexSet::empty();
        for p in points {
            agree = agree.union(&probe.truth_set(RelOp::Eq, &Seq::constant(p.clone()))?)?;
        }
        let direct = filter.contains(&agree);
        entries.push((format!("{probe}"), via_pred == direct));
    }
    Ok(FiniteStandardReport { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::RationalFunc;
    use crate::rational::{qr, Q};

    fn params() -> BTreeMap<String, Seq> {
        BTreeMap::new()
    }

    /// 1/(n+1) as a sequence.
    fn recip_succ() -> Seq {
        let rf = RationalFunc::constant(qi(1))
            .div(&RationalFunc::var().add(&RationalFunc::constant(qi(1))))
            .unwrap();
        Seq::piecewise(vec![(IndexSet::universe(), rf)]).unwrap()
    }

    /// The open strip 0 < x < hi.
    fn strip(hi: Seq) -> InternalPred {
        let mut p = params();
        p.insert("hi".into(), hi);
        let phi = Formula::Rel(Term::Const(Q::from_integer(0.into())), RelOp::Lt, Term::var("x"))
            .and(Formula::Rel(Term::var("x"), RelOp::Lt, Term::var("hi")));
        InternalPred::new("x", &phi, &p).unwrap()
    }

    #[test]
    fn extension_of_shrinking_strip() {
        let a = strip(recip_succ());
        let e3 = a.extension_at(3);
        assert!(e3.contains(&qr(1, 8)));
        assert!(!e3.contains(&qr(1, 4))); // (0, 1/4) is open
        assert!(!e3.contains(&Q::from_integer(0.into())));
        assert_eq!(e3.to_string(), "(0, 1/4)");
    }

    #[test]
    fn extension_of_point_and_empty() {
        let p = params();
        let eq2 = InternalPred::new(
            "x",
            &Formula::Rel(Term::var("x"), RelOp::Eq, Term::Const(qi(2))),
            &p,
        )
        .unwrap();
        for i in [0, 5, 100] {
            assert_eq!(eq2.extension_at(i).to_string(), "{2}");
        }
        let contradiction = InternalPred::new(
            "x",
            &Formula::Rel(Term::var("x"), RelOp::Lt, Term::Const(qi(0)))
                .and(Formula::Rel(Term::var("x"), RelOp::Gt, Term::Const(qi(1)))),
            &p,
        )
        .unwrap();
        assert!(contradiction.extension_at(7).is_empty());
    }

    #[test]
    fn emptiness_sets() {
        assert_eq!(
            strip(recip_succ()).emptiness_set().unwrap(),
            IndexSet::universe()
        );
        // 1 < x < 1/(n+1) is empty at every index
        let mut p = params();
        p.insert("hi".into(), recip_succ());
        let phi = Formula::Rel(Term::Const(qi(1)), RelOp::Lt, Term::var("x"))
            .and(Formula::Rel(Term::var("x"), RelOp::Lt, Term::var("hi")));
        let never = InternalPred::new("x", &phi, &p).unwrap();
        assert_eq!(never.emptiness_set().unwrap(), IndexSet::empty());
        let point = InternalPred::new(
            "x",
            &Formula::Rel(Term::var("x"), RelOp::Eq, Term::Const(qi(2))),
            &params(),
        )
        .unwrap();
        assert_eq!(point.emptiness_set().unwrap(), IndexSet::universe());
    }

    #[test]
    fn subset_sets() {
        // strips nest: (0, 1/(n+2)) inside (0, 1/(n+1)) everywhere
        let inner = strip(shift_recip());
        let outer = strip(recip_succ());
        assert_eq!(inner.subset_set(&outer).unwrap(), IndexSet::universe());
        assert_eq!(outer.subset_set(&outer).unwrap(), IndexSet::universe());
        // (0,1) inside (0, 1/(n+1)) only at index 0
        let unit = strip(Seq::constant(qi(1)));
        assert_eq!(
            unit.subset_set(&outer).unwrap(),
            IndexSet::finite([0])
        );
    }

    /// 1/(n+2).
    fn shift_recip() -> Seq {
        let rf = RationalFunc::constant(qi(1))
            .div(&RationalFunc::var().add(&RationalFunc::constant(qi(2))))
            .unwrap();
        Seq::piecewise(vec![(IndexSet::universe(), rf)]).unwrap()
    }

    #[test]
    fn boolean_template_algebra() {
        let a = strip(recip_succ());
        let contradiction = a.and(&a.negate());
        assert_eq!(contradiction.emptiness_set().unwrap(), IndexSet::empty());
        let b = strip(Seq::constant(qi(1)));
        let u = a.or(&b);
        let e = u.extension_at(4);
        // union of (0, 1/5) and (0, 1) is (0, 1)
        assert_eq!(e.to_string(), "(0, 1)");
    }

    #[test]
    fn membership_distributes_over_conjunction() {
        let f0 = Filter::frechet();
        let a = strip(Seq::constant(qi(1)));
        let b = strip(Seq::constant(qr(1, 2)));
        let both = a.and(&b);
        let probe = Seq::constant(qr(1, 4));
        assert_eq!(
            both.member_at(&probe, &f0).unwrap(),
            a.member_at(&probe, &f0).unwrap() && b.member_at(&probe, &f0).unwrap()
        );
        assert!(both.member_at(&probe, &f0).unwrap());
        let outside = Seq::constant(qr(3, 4));
        assert!(a.member_at(&outside, &f0).unwrap());
        assert!(!both.member_at(&outside, &f0).unwrap());
    }

    #[test]
    fn hypernatural_membership_controlled_by_evens() {
        // b follows n/2 on evens and sits at 1/2 on odds; the predicate
        // x = t with t matching b exactly on evens makes membership turn on
        // the even set being in the viewpoint.
        let evens = IndexSet::residue(0, 2).unwrap();
        let odds = IndexSet::residue(1, 2).unwrap();
        let half_n = RationalFunc::var()
            .div(&RationalFunc::constant(qi(2)))
            .unwrap();
        let b = Seq::piecewise(vec![
            (evens.clone(), half_n.clone()),
            (odds.clone(), RationalFunc::constant(qr(1, 2))),
        ])
        .unwrap();
        let tracker = Seq::piecewise(vec![
            (evens.clone(), half_n),
            (odds.clone(), RationalFunc::constant(Q::from_integer(0.into()))),
        ])
        .unwrap();
        let mut p = params();
        p.insert("t".into(), tracker);
        let pred = InternalPred::new(
            "x",
            &Formula::Rel(Term::var("x"), RelOp::Eq, Term::var("t")),
            &p,
        )
        .unwrap();
        let f0 = Filter::frechet();
        let at_evens = f0.extend(&evens).unwrap();
        assert!(pred.member_at(&b, &at_evens).unwrap());
        assert!(!pred.member_at(&b, &f0).unwrap());
        assert_eq!(pred.membership_set(&b).unwrap(), evens);
    }

    #[test]
    fn saturation_on_the_canonical_chain() {
        // every link is the strip (0, 1/(n+1)); the diagonal witness is
        // 1/(2n+2) from index 1 on
        let chain = Chain::generate(100, |_| Ok(strip(recip_succ()))).unwrap();
        let f0 = Filter::frechet();
        let out = saturation_witness(&chain, &f0).unwrap();
        assert!(out.all_verified());
        assert_eq!(out.checks.len(), 100);
        assert_eq!(out.witness.eval(0), Q::from_integer(0.into()));
        for n in 1..=120 {
            assert_eq!(out.witness.eval(n), qr(1, 2 * (n as i64) + 2), "n = {n}");
        }
    }

    #[test]
    fn saturation_on_a_constant_chain() {
        let chain = Chain::generate(10, |_| Ok(strip(Seq::constant(qi(1))))).unwrap();
        let out = saturation_witness(&chain, &Filter::frechet()).unwrap();
        assert!(out.all_verified());
        for n in 1..=30 {
            assert_eq!(out.witness.eval(n), qr(1, 2), "n = {n}");
        }
    }

    #[test]
    fn saturation_precondition_failure_names_the_link() {
        // X^3 is wider than X^2, so containment fails between links 2 and 3
        let chain = Chain::finite(vec![
            strip(Seq::constant(qi(1))),
            strip(Seq::constant(qr(1, 2))),
            strip(Seq::constant(qi(1))),
        ]);
        match saturation_witness(&chain, &Filter::frechet()) {
            Err(EngineError::ChainPrecondition { k, .. }) => assert_eq!(k, 2),
            other => panic!("expected chain precondition error, got {other:?}"),
        }
    }

    #[test]
    fn finite_standard_check() {
        let f0 = Filter::frechet();
        let points = [qi(1), qi(2)];
        let pred = finite_standard_pred(&points).unwrap();
        assert!(pred.member_at(&Seq::constant(qi(2)), &f0).unwrap());
        assert!(!pred.member_at(&Seq::constant(qi(3)), &f0).unwrap());
        // a presentation alternating between the two points is a member
        let evens = IndexSet::residue(0, 2).unwrap();
        let odds = IndexSet::residue(1, 2).unwrap();
        let alt = Seq::piecewise(vec![
            (evens, RationalFunc::constant(qi(1))),
            (odds, RationalFunc::constant(qi(2))),
        ])
        .unwrap();
        assert!(pred.member_at(&alt, &f0).unwrap());
        let report = finite_standard_internal_check(
            &points,
            &[Seq::constant(qi(2)), Seq::constant(qi(3)), alt],
            &f0,
        )
        .unwrap();
        assert!(report.all_passed());
    }

    #[test]
    fn variable_free_atoms_refine_the_arrangement() {
        // template: 0 < x and (t = 0), with t vanishing exactly on the
        // evens; the extension flips between (0, +oo) and empty by parity
        let evens = IndexSet::residue(0, 2).unwrap();
        let t = Seq::piecewise(vec![
            (evens.clone(), RationalFunc::constant(Q::from_integer(0.into()))),
            (evens.complement(), RationalFunc::constant(qi(1))),
        ])
        .unwrap();
        let mut p = params();
        p.insert("t".into(), t);
        let phi = Formula::Rel(Term::Const(Q::from_integer(0.into())), RelOp::Lt, Term::var("x"))
            .and(Formula::Rel(Term::var("t"), RelOp::Eq, Term::Const(Q::from_integer(0.into()))));
        let pred = InternalPred::new("x", &phi, &p).unwrap();
        assert!(!pred.extension_at(0).is_empty());
        assert!(pred.extension_at(1).is_empty());
        assert_eq!(pred.emptiness_set().unwrap(), evens);
        // containment also respects the flip: the strip (0,1) sits inside
        // exactly where the predicate is the whole right half-line
        let strip = InternalPred::new(
            "x",
            &Formula::Rel(Term::Const(Q::from_integer(0.into())), RelOp::Lt, Term::var("x"))
                .and(Formula::Rel(Term::var("x"), RelOp::Lt, Term::Const(qi(1)))),
            &params(),
        )
        .unwrap();
        assert_eq!(strip.subset_set(&pred).unwrap(), evens);
    }

    #[test]
    fn template_rejects_non_isolated_variable() {
        let p = params();
        let bad = Formula::Rel(
            Term::Add(Box::new(Term::var("x")), Box::new(Term::Const(qi(1)))),
            RelOp::Lt,
            Term::Const(qi(2)),
        );
        assert!(matches!(
            InternalPred::new("x", &bad, &p),
            Err(EngineError::Fragment(_))
        ));
        let quantified = Formula::Exists(
            "y".into(),
            None,
            Box::new(Formula::Rel(Term::var("x"), RelOp::Lt, Term::var("y"))),
        );
        assert!(matches!(
            InternalPred::new("x", &quantified, &p),
            Err(EngineError::Fragment(_))
        ));
    }
}
