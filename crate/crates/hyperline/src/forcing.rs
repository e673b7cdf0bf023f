//! The forcing relation, decided two independent ways.
//!
//! [`truth_index_set`] computes the per-index truth set of a formula in the
//! decidable fragment compositionally: atoms through exact sign analysis,
//! connectives through the set algebra, witnessed existentials by
//! substitution. [`forces`] then reduces satisfaction at a viewpoint to
//! filter membership of that set.
//!
//! Viewpoint-relative atoms (`~~`, `S`, `st`) have no per-index truth set,
//! but over the engine's finitely generated filters each is equivalent to
//! membership of a fixed index set obtained by limit analysis: closeness to
//! within every `1/n` along a piecewise-rational difference holds at a
//! filter exactly when the union of the difference's vanishing-limit cells
//! belongs to it (split any piece by its limit: cells with limit away from
//! zero put an infinite chunk of the core outside `||.| < 1/n|` once `1/n`
//! undercuts that limit, and conversely those cells are the only
//! obstruction). `forces` therefore evaluates the extended fragment against
//! such filter-stable characterizations.
//!
//! [`forces_clausal`] is the cross-check: it evaluates the forcing
//! clauses directly — negation as "no extension forces", disjunction and
//! existentials by dense witness search — probing with the exact algebraic
//! extension plus sampled residue-class extensions. Agreement of the two
//! evaluators over the shared fragment is the engine's operational reading
//! of the reduced-power satisfaction theorem.

use std::collections::BTreeMap;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{EngineError, Result};
use crate::filter::Filter;
use crate::formula::{Formula, Term};
use crate::index_set::IndexSet;
use crate::internal::InternalPred;
use crate::sample::{random_extension, random_seq, Sampler};
use crate::seq::{RelOp, Seq};

/// Variable and predicate bindings a formula is evaluated against.
#[derive(Clone, Debug, Default)]
pub struct Env {
    pub vars: BTreeMap<String, Seq>,
    pub preds: BTreeMap<String, InternalPred>,
}

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    pub fn with_var(mut self, name: impl Into<String>, value: Seq) -> Env {
        self.vars.insert(name.into(), value);
        self
    }

    pub fn with_pred(mut self, name: impl Into<String>, pred: InternalPred) -> Env {
        self.preds.insert(name.into(), pred);
        self
    }
}

/// Outcome of a forcing query.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub value: bool,
    /// The per-index truth set, present when the formula has one.
    pub truth_index_set: Option<IndexSet>,
    pub certificate: Option<Certificate>,
}

/// Evidence attached to a verdict.
#[derive(Clone, Debug)]
pub enum Certificate {
    /// The witness presentation satisfying a forced existential.
    Witness { var: String, value: Seq },
    /// An extension of the queried filter refuting the formula.
    RefutedBy(Filter),
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::Witness { var, value } => write!(f, "witness {var} = {value}"),
            Certificate::RefutedBy(g) => write!(f, "refuted by: {g}"),
        }
    }
}

/// Evaluate a term to a presentation.
pub fn eval_term(term: &Term, env: &Env) -> Result<Seq> {
    match term {
        Term::Const(q) => Ok(Seq::constant(q.clone())),
        Term::Var(v) => env
            .vars
            .get(v)
            .cloned()
            .ok_or_else(|| EngineError::Unbound(v.clone())),
        Term::SeqLit(pieces) => Seq::piecewise(pieces.clone()),
        Term::Add(a, b) => Ok(eval_term(a, env)?.add(&eval_term(b, env)?)),
        Term::Sub(a, b) => Ok(eval_term(a, env)?.sub(&eval_term(b, env)?)),
        Term::Mul(a, b) => Ok(eval_term(a, env)?.mul(&eval_term(b, env)?)),
        Term::Div(a, b) => eval_term(a, env)?.try_div(&eval_term(b, env)?),
        Term::Neg(a) => Ok(eval_term(a, env)?.neg()),
        Term::Abs(a) => eval_term(a, env)?.abs(),
        Term::Min(a, b) => eval_term(a, env)?.min(&eval_term(b, env)?),
        Term::Max(a, b) => eval_term(a, env)?.max(&eval_term(b, env)?),
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Mode {
    /// Strict per-index truth sets; viewpoint-relative atoms are errors.
    PerIndex,
    /// Allow viewpoint-relative atoms via their filter-stable sets.
    FilterStable,
}

/// Optional interception of comparison atoms, used by the structure-axiom
/// checker for fault injection.
pub type AtomHook<'a> = &'a dyn Fn(&Seq, RelOp, &Seq) -> Option<IndexSet>;

fn char_set(phi: &Formula, env: &Env, mode: Mode, hook: Option<AtomHook>) -> Result<IndexSet> {
    match phi {
        Formula::Rel(a, op, b) => {
            let sa = eval_term(a, env)?;
            let sb = eval_term(b, env)?;
            if let Some(h) = hook {
                if let Some(set) = h(&sa, *op, &sb) {
                    return Ok(set);
                }
            }
            sa.truth_set(*op, &sb)
        }
        Formula::Pred(name, t) => {
            let pred = env
                .preds
                .get(name)
                .ok_or_else(|| EngineError::Unbound(format!("internal predicate {name}")))?;
            pred.membership_set(&eval_term(t, env)?)
        }
        Formula::Close(a, b) => match mode {
            Mode::PerIndex => Err(EngineError::Fragment(
                "`~~` is viewpoint-relative and has no per-index truth set".into(),
            )),
            Mode::FilterStable => {
                let d = eval_term(a, env)?.sub(&eval_term(b, env)?);
                d.infinitesimal_support()
            }
        },
        Formula::Standard(t) => match mode {
            Mode::PerIndex => Err(EngineError::Fragment(
                "`S` is viewpoint-relative and has no per-index truth set".into(),
            )),
            Mode::FilterStable => eval_term(t, env)?.standard_support(),
        },
        Formula::StandardPart(a, b) => match mode {
            Mode::PerIndex => Err(EngineError::Fragment(
                "`st` is viewpoint-relative and has no per-index truth set".into(),
            )),
            Mode::FilterStable => {
                let sa = eval_term(a, env)?;
                let diff = sa.sub(&eval_term(b, env)?);
                sa.standard_support()?
                    .intersect(&diff.infinitesimal_support()?)
            }
        },
        Formula::Not(p) => Ok(char_set(p, env, mode, hook)?.complement()),
        Formula::And(p, q) => {
            char_set(p, env, mode, hook)?.intersect(&char_set(q, env, mode, hook)?)
        }
        Formula::Or(p, q) => char_set(p, env, mode, hook)?.union(&char_set(q, env, mode, hook)?),
        Formula::Implies(p, q) => char_set(p, env, mode, hook)?
            .complement()
            .union(&char_set(q, env, mode, hook)?),
        Formula::Exists(x, Some(w), body) => {
            let witness = eval_term(w, env)?;
            let inner = env.clone().with_var(x.clone(), witness);
            char_set(body, &inner, mode, hook)
        }
        Formula::Exists(x, None, body) => {
            // one-variable interval fragment: nonemptiness of the template
            let pred = InternalPred::new(x.clone(), body, &env.vars).map_err(|e| {
                EngineError::Fragment(format!(
                    "unwitnessed existential needs an interval template body: {e}"
                ))
            })?;
            pred.emptiness_set()
        }
        Formula::Forall(x, None, body) => {
            // dually: the set where no counterexample value exists
            let negated = body.clone().not();
            let pred = InternalPred::new(x.clone(), &negated, &env.vars).map_err(|e| {
                EngineError::Fragment(format!(
                    "unwitnessed universal needs an interval template body: {e}"
                ))
            })?;
            Ok(pred.emptiness_set()?.complement())
        }
        Formula::Forall(_, Some(_), _) => Err(EngineError::Fragment(
            "a universal quantifier cannot carry a witness annotation".into(),
        )),
    }
}

/// The per-index truth set of a formula in the decidable fragment.
pub fn truth_index_set(phi: &Formula, env: &Env) -> Result<IndexSet> {
    char_set(phi, env, Mode::PerIndex, None)
}

/// Decide the forcing relation at a viewpoint.
pub fn forces(filter: &Filter, phi: &Formula, env: &Env) -> Result<Verdict> {
    forces_with(filter, phi, env, None)
}

fn forces_with(
    filter: &Filter,
    phi: &Formula,
    env: &Env,
    hook: Option<AtomHook>,
) -> Result<Verdict> {
    let set = char_set(phi, env, Mode::FilterStable, hook)?;
    let value = filter.contains(&set);
    let truth_index_set = if phi.has_filter_relative_atoms() {
        None
    } else {
        Some(set.clone())
    };
    let certificate = if value {
        match phi {
            Formula::Exists(x, Some(w), _) => Some(Certificate::Witness {
                var: x.clone(),
                value: eval_term(w, env)?,
            }),
            _ => None,
        }
    } else {
        // the complement extension is proper exactly because the set is
        // not in the filter
        filter
            .extend(&set.complement())
            .ok()
            .map(Certificate::RefutedBy)
    };
    Ok(Verdict {
        value,
        truth_index_set,
        certificate,
    })
}

/// Evaluate the forcing clauses directly, with dense-witness searches
/// over exact and sampled extensions. Cross-check for [`forces`].
pub fn forces_clausal(
    filter: &Filter,
    phi: &Formula,
    env: &Env,
    sampler: &Sampler,
) -> Result<bool> {
    let mut rng = sampler.rng();
    clausal(filter, phi, env, sampler, &mut rng, 0)
}

fn probe_extensions(
    f: &Filter,
    sampler: &Sampler,
    rng: &mut ChaCha8Rng,
    depth: usize,
) -> Vec<Filter> {
    if depth >= sampler.probe_depth {
        return vec![];
    }
    (0..sampler.probes)
        .filter_map(|_| random_extension(rng, f, 12))
        .collect()
}

fn clausal(
    f: &Filter,
    phi: &Formula,
    env: &Env,
    sampler: &Sampler,
    rng: &mut ChaCha8Rng,
    depth: usize,
) -> Result<bool> {
    match phi {
        Formula::Not(p) => {
            // no extension may force p; restricting to p's own set is the
            // one extension that forces p if any extension does
            let wp = char_set(p, env, Mode::FilterStable, None)?;
            let mut candidates = vec![f.clone()];
            if let Ok(g) = f.extend(&wp) {
                candidates.push(g);
            }
            candidates.extend(probe_extensions(f, sampler, rng, depth));
            for g in candidates {
                if clausal(&g, p, env, sampler, rng, depth + 1)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::And(p, q) => Ok(clausal(f, p, env, sampler, rng, depth)?
            && clausal(f, q, env, sampler, rng, depth)?),
        Formula::Or(p, q) => {
            // density: below every extension some further extension forces
            // a disjunct
            let wp = char_set(p, env, Mode::FilterStable, None)?;
            let wq = char_set(q, env, Mode::FilterStable, None)?;
            let mut outer = vec![f.clone()];
            if let Ok(g) = f.extend(&wp.union(&wq)?.complement()) {
                outer.push(g);
            }
            outer.extend(probe_extensions(f, sampler, rng, depth));
            for g in outer {
                let mut inner = vec![g.clone()];
                if let Ok(h) = g.extend(&wp) {
                    inner.push(h);
                }
                if let Ok(h) = g.extend(&wq) {
                    inner.push(h);
                }
                let found = inner.into_iter().try_fold(false, |acc, h| {
                    if acc {
                        Ok::<bool, EngineError>(true)
                    } else {
                        Ok(clausal(&h, p, env, sampler, rng, depth + 1)?
                            || clausal(&h, q, env, sampler, rng, depth + 1)?)
                    }
                })?;
                if !found {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Implies(p, q) => {
            // every extension forcing p also forces q; the exact probe
            // restricts to p-true, q-false indices
            let wp = char_set(p, env, Mode::FilterStable, None)?;
            let wq = char_set(q, env, Mode::FilterStable, None)?;
            let mut candidates = vec![f.clone()];
            if let Ok(g) = f.extend(&wp.intersect(&wq.complement())?) {
                candidates.push(g);
            }
            candidates.extend(probe_extensions(f, sampler, rng, depth));
            for g in candidates {
                if clausal(&g, p, env, sampler, rng, depth + 1)?
                    && !clausal(&g, q, env, sampler, rng, depth + 1)?
                {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Exists(x, Some(w), body) => {
            // dense witness clause with the annotated witness
            let witness = eval_term(w, env)?;
            let inner_env = env.clone().with_var(x.clone(), witness);
            let wb = char_set(body, &inner_env, Mode::FilterStable, None)?;
            let mut outer = vec![f.clone()];
            if let Ok(g) = f.extend(&wb.complement()) {
                outer.push(g);
            }
            outer.extend(probe_extensions(f, sampler, rng, depth));
            for g in outer {
                let mut found = clausal(&g, body, &inner_env, sampler, rng, depth + 1)?;
                if !found {
                    if let Ok(h) = g.extend(&wb) {
                        found = clausal(&h, body, &inner_env, sampler, rng, depth + 1)?;
                    }
                }
                if !found {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        // atoms and quantifier shapes with exact per-index or filter-stable
        // sets: decided by membership, shared base of both evaluators
        _ => Ok(f.contains(&char_set(phi, env, Mode::FilterStable, None)?)),
    }
}

/// One named structure check.
#[derive(Clone, Debug)]
pub struct CheckEntry {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Report of the forcing-structure axioms over a filter sample.
#[derive(Clone, Debug)]
pub struct StructureReport {
    pub entries: Vec<CheckEntry>,
}

impl StructureReport {
    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }
}

impl fmt::Display for StructureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(
                f,
                "{}: {}{}",
                e.name,
                if e.passed { "pass" } else { "FAIL" },
                if e.detail.is_empty() {
                    String::new()
                } else {
                    format!(" ({})", e.detail)
                }
            )?;
        }
        Ok(())
    }
}

/// Check persistence, refinability, equality-as-equivalence,
/// equality-as-congruence and regular-openness for an atomic formula over
/// sampled filters, using the default atom evaluation.
pub fn check_structure_axioms(
    phi: &Formula,
    env: &Env,
    filters: &[Filter],
    seed: u64,
) -> Result<StructureReport> {
    check_structure_axioms_with(phi, env, filters, seed, None)
}

/// As [`check_structure_axioms`], with comparison atoms evaluated through
/// the hook (fault injection for the test suite). The refutation extensions
/// the checks build always come from the engine's own truth sets, so a
/// buggy hook shows up as a refinability or regular-openness failure.
pub fn check_structure_axioms_with(
    phi: &Formula,
    env: &Env,
    filters: &[Filter],
    seed: u64,
    hook: Option<AtomHook>,
) -> Result<StructureReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::new();
    let reference = char_set(phi, env, Mode::FilterStable, None)?;
    let verdict = |f: &Filter| -> Result<bool> {
        Ok(forces_with(f, phi, env, hook)?.value)
    };

    // Persistence: a verdict survives every sampled refinement.
    let mut failure = None;
    'outer: for f in filters {
        if !verdict(f)? {
            continue;
        }
        for _ in 0..4 {
            if let Some(g) = random_extension(&mut rng, f, 12) {
                if !verdict(&g)? {
                    failure = Some(format!("forced at {f} but not at {g}"));
                    break 'outer;
                }
            }
        }
    }
    entries.push(CheckEntry {
        name: "persistence",
        passed: failure.is_none(),
        detail: failure.unwrap_or_default(),
    });

    // Refinability: a failed verdict is refuted by extending with the
    // complement of the engine's truth set, stably under further sampled
    // extensions.
    let mut failure = None;
    'outer: for f in filters {
        if verdict(f)? {
            continue;
        }
        let g = match f.extend(&reference.complement()) {
            Ok(g) => g,
            Err(e) => {
                failure = Some(format!("complement extension of {f} failed: {e}"));
                break;
            }
        };
        let mut hs = vec![g.clone()];
        for _ in 0..4 {
            if let Some(h) = random_extension(&mut rng, &g, 12) {
                hs.push(h);
            }
        }
        for h in hs {
            if verdict(&h)? {
                failure = Some(format!("refutation of {f} overturned at {h}"));
                break 'outer;
            }
        }
    }
    entries.push(CheckEntry {
        name: "refinability",
        passed: failure.is_none(),
        detail: failure.unwrap_or_default(),
    });

    // Equality as equivalence: reflexivity is the full index space,
    // symmetry is set equality, transitivity is an inclusion.
    let hooked_eq = |a: &Seq, b: &Seq| -> Result<IndexSet> {
        if let Some(h) = hook {
            if let Some(s) = h(a, RelOp::Eq, b) {
                return Ok(s);
            }
        }
        a.truth_set(RelOp::Eq, b)
    };
    let mut failure = None;
    for _ in 0..8 {
        let a = random_seq(&mut rng, 8, 2);
        let b = random_seq(&mut rng, 8, 2);
        let c = random_seq(&mut rng, 8, 2);
        if hooked_eq(&a, &a)? != IndexSet::universe() {
            failure = Some(format!("|a = a| is not everything for a = {a}"));
            break;
        }
        if hooked_eq(&a, &b)? != hooked_eq(&b, &a)? {
            failure = Some("equality truth set is not symmetric".into());
            break;
        }
        let trans = hooked_eq(&a, &b)?.intersect(&hooked_eq(&b, &c)?)?;
        if !trans.subset_of(&hooked_eq(&a, &c)?)? {
            failure = Some("transitivity inclusion fails".into());
            break;
        }
    }
    entries.push(CheckEntry {
        name: "equality-as-equivalence",
        passed: failure.is_none(),
        detail: failure.unwrap_or_default(),
    });

    // Equality as congruence: for each arithmetic operation, componentwise
    // equality pushes through; and the checked atom respects substitution.
    let mut failure = None;
    'cong: for _ in 0..8 {
        let a = random_seq(&mut rng, 6, 2);
        let b = random_seq(&mut rng, 6, 2);
        let a2 = random_seq(&mut rng, 6, 2);
        let b2 = random_seq(&mut rng, 6, 2);
        let eqs = hooked_eq(&a, &a2)?.intersect(&hooked_eq(&b, &b2)?)?;
        for (name, l, r) in [
            ("+", a.add(&b), a2.add(&b2)),
            ("-", a.sub(&b), a2.sub(&b2)),
            ("*", a.mul(&b), a2.mul(&b2)),
        ] {
            if !eqs.subset_of(&hooked_eq(&l, &r)?)? {
                failure = Some(format!("congruence fails for {name}"));
                break 'cong;
            }
        }
        if let Formula::Rel(_, op, _) = phi {
            let rel = |x: &Seq, y: &Seq| -> Result<IndexSet> {
                if let Some(h) = hook {
                    if let Some(s) = h(x, *op, y) {
                        return Ok(s);
                    }
                }
                x.truth_set(*op, y)
            };
            let before = eqs.intersect(&rel(&a, &b)?)?;
            if !before.subset_of(&rel(&a2, &b2)?)? {
                failure = Some(format!("atom substitution fails for {}", op.symbol()));
                break 'cong;
            }
        }
    }
    entries.push(CheckEntry {
        name: "equality-as-congruence",
        passed: failure.is_none(),
        detail: failure.unwrap_or_default(),
    });

    // Regular-openness: forced exactly when every sampled extension has a
    // further extension that forces.
    let mut failure = None;
    'ro: for f in filters {
        let forced = verdict(f)?;
        let mut gs = vec![f.clone()];
        if let Ok(g) = f.extend(&reference.complement()) {
            gs.push(g);
        }
        for _ in 0..3 {
            if let Some(g) = random_extension(&mut rng, f, 12) {
                gs.push(g);
            }
        }
        let mut dense = true;
        for g in &gs {
            let mut hs = vec![g.clone()];
            if let Ok(h) = g.extend(&reference) {
                hs.push(h);
            }
            if !hs.iter().map(verdict).collect::<Result<Vec<_>>>()?.iter().any(|&v| v) {
                dense = false;
                break;
            }
        }
        if forced != dense {
            failure = Some(format!(
                "at {f}: forced = {forced} but dense-below = {dense}"
            ));
            break 'ro;
        }
    }
    entries.push(CheckEntry {
        name: "regular-openness",
        passed: failure.is_none(),
        detail: failure.unwrap_or_default(),
    });

    Ok(StructureReport { entries })
}
