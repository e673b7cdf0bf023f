//! Exact Boolean algebra of the subsets of the index space the engine can
//! name: eventually periodic sets, stored as a periodic part together with a
//! finite set of exceptional indices.
//!
//! A value is kept in canonical form: the modulus is the least period of the
//! periodic part, and every exception genuinely disagrees with it. Under that
//! normalization structural equality coincides with extensional equality, so
//! `PartialEq` is set equality.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{EngineError, Result};

/// Largest modulus the engine will materialize. Keeps pathological lcm
/// cascades from eating memory; everyday work stays far below it.
pub const MAX_MODULUS: u64 = 1 << 20;

/// An eventually periodic subset of the naturals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IndexSet {
    /// Least period of the periodic part; at least 1.
    modulus: u64,
    /// `residues[r]` says whether the class `r mod modulus` is in the
    /// periodic part. Length is exactly `modulus`.
    residues: Vec<bool>,
    /// Indices where the set disagrees with its periodic part.
    flips: BTreeSet<u64>,
}

/// Exact classification of an [`IndexSet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetClass {
    /// Finite with the given cardinality.
    Finite(u64),
    /// Complement is finite with the given cardinality.
    Cofinite(u64),
    /// Both the set and its complement are infinite.
    InfiniteCoinfinite,
}

impl SetClass {
    pub fn is_finite(&self) -> bool {
        matches!(self, SetClass::Finite(_))
    }
}

impl IndexSet {
    /// Canonicalize a raw description. `flips` must already disagree with the
    /// periodic part; the public constructors guarantee that.
    fn canonical(modulus: u64, residues: Vec<bool>, flips: BTreeSet<u64>) -> IndexSet {
        debug_assert_eq!(residues.len(), modulus as usize);
        let period = least_period(&residues);
        let residues = if period == modulus {
            residues
        } else {
            residues[..period as usize].to_vec()
        };
        IndexSet {
            modulus: period,
            residues,
            flips,
        }
    }

    /// Build from a periodic part plus arbitrary add/remove exceptions;
    /// redundant exceptions are dropped.
    fn from_raw(
        modulus: u64,
        residues: Vec<bool>,
        exceptions: impl IntoIterator<Item = (u64, bool)>,
    ) -> IndexSet {
        let mut flips = BTreeSet::new();
        for (idx, add) in exceptions {
            let periodic = residues[(idx % modulus) as usize];
            if periodic != add {
                flips.insert(idx);
            }
        }
        IndexSet::canonical(modulus, residues, flips)
    }

    /// The empty set.
    pub fn empty() -> IndexSet {
        IndexSet {
            modulus: 1,
            residues: vec![false],
            flips: BTreeSet::new(),
        }
    }

    /// The whole index space.
    pub fn universe() -> IndexSet {
        IndexSet {
            modulus: 1,
            residues: vec![true],
            flips: BTreeSet::new(),
        }
    }

    /// The arithmetic progression `{n : n = r mod m}`.
    pub fn residue(r: u64, m: u64) -> Result<IndexSet> {
        if m == 0 {
            return Err(EngineError::Argument("modulus must be positive".into()));
        }
        if r >= m {
            return Err(EngineError::Argument(format!(
                "residue {r} is not below modulus {m}"
            )));
        }
        if m > MAX_MODULUS {
            return Err(EngineError::ModulusOverflow(m));
        }
        let residues = (0..m).map(|i| i == r).collect();
        Ok(IndexSet::canonical(m, residues, BTreeSet::new()))
    }

    /// A finite set given by an explicit list (duplicates collapse).
    pub fn finite(indices: impl IntoIterator<Item = u64>) -> IndexSet {
        let flips: BTreeSet<u64> = indices.into_iter().collect();
        IndexSet {
            modulus: 1,
            residues: vec![false],
            flips,
        }
    }

    /// The tail `{n : n >= k}`.
    pub fn tail(k: u64) -> IndexSet {
        IndexSet {
            modulus: 1,
            residues: vec![true],
            flips: (0..k).collect(),
        }
    }

    /// O(1) membership test.
    pub fn member(&self, n: u64) -> bool {
        self.residues[(n % self.modulus) as usize] ^ self.flips.contains(&n)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Exceptional indices (those disagreeing with the periodic part).
    pub fn exceptions(&self) -> impl Iterator<Item = u64> + '_ {
        self.flips.iter().copied()
    }

    /// Residue classes in the periodic part.
    pub fn residue_classes(&self) -> impl Iterator<Item = u64> + '_ {
        self.residues
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(r, _)| r as u64)
    }

    pub fn classify(&self) -> SetClass {
        let count = self.residues.iter().filter(|&&b| b).count();
        if count == 0 {
            SetClass::Finite(self.flips.len() as u64)
        } else if count == self.residues.len() {
            SetClass::Cofinite(self.flips.len() as u64)
        } else {
            SetClass::InfiniteCoinfinite
        }
    }

    pub fn is_empty(&self) -> bool {
        self.classify() == SetClass::Finite(0)
    }

    pub fn is_finite(&self) -> bool {
        self.classify().is_finite()
    }

    pub fn complement(&self) -> IndexSet {
        IndexSet {
            modulus: self.modulus,
            residues: self.residues.iter().map(|b| !b).collect(),
            flips: self.flips.clone(),
        }
    }

    fn merge(&self, other: &IndexSet, op: impl Fn(bool, bool) -> bool) -> Result<IndexSet> {
        let l = lcm_checked(self.modulus, other.modulus)?;
        let residues: Vec<bool> = (0..l)
            .map(|r| {
                op(
                    self.residues[(r % self.modulus) as usize],
                    other.residues[(r % other.modulus) as usize],
                )
            })
            .collect();
        let candidates: BTreeSet<u64> = self.flips.union(&other.flips).copied().collect();
        let exceptions = candidates
            .into_iter()
            .map(|n| (n, op(self.member(n), other.member(n))));
        Ok(IndexSet::from_raw(l, residues, exceptions))
    }

    pub fn union(&self, other: &IndexSet) -> Result<IndexSet> {
        self.merge(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &IndexSet) -> Result<IndexSet> {
        self.merge(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &IndexSet) -> Result<IndexSet> {
        self.merge(other, |a, b| a && !b)
    }

    /// Extensional inclusion, decided exactly.
    pub fn subset_of(&self, other: &IndexSet) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    /// Least element, if the set is nonempty.
    pub fn min_member(&self) -> Option<u64> {
        if self.is_empty() {
            return None;
        }
        let max_flip = self.flips.iter().next_back().copied().unwrap_or(0);
        let bound = max_flip + 2 * self.modulus + 2;
        (0..bound).find(|&n| self.member(n))
    }

    /// Members below `bound`, ascending.
    pub fn members_below(&self, bound: u64) -> impl Iterator<Item = u64> + '_ {
        (0..bound).filter(move |&n| self.member(n))
    }

    /// A sound bound for extensional scans: beyond it the set is purely
    /// periodic with period `modulus`.
    pub fn scan_bound(&self) -> u64 {
        self.flips.iter().next_back().map_or(0, |&f| f + 1) + 4 * self.modulus + 1
    }
}

fn least_period(residues: &[bool]) -> u64 {
    let m = residues.len() as u64;
    for d in 1..=m {
        if !m.is_multiple_of(d) {
            continue;
        }
        let periodic = (0..m as usize).all(|r| residues[r] == residues[r % d as usize]);
        if periodic {
            return d;
        }
    }
    m
}

fn lcm_checked(a: u64, b: u64) -> Result<u64> {
    let g = num_integer::gcd(a, b);
    let l = (a / g)
        .checked_mul(b)
        .ok_or(EngineError::ModulusOverflow(u64::MAX))?;
    if l > MAX_MODULUS {
        return Err(EngineError::ModulusOverflow(l));
    }
    Ok(l)
}

impl fmt::Display for IndexSet {
    /// Prints in the textual set syntax, so every value re-parses.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let finite_body = |items: &mut dyn Iterator<Item = u64>| {
            let parts: Vec<String> = items.map(|n| n.to_string()).collect();
            format!("fin{{{}}}", parts.join(","))
        };
        match self.classify() {
            SetClass::Finite(_) => {
                write!(f, "{}", finite_body(&mut self.flips.iter().copied()))
            }
            SetClass::Cofinite(_) => {
                write!(f, "~{}", finite_body(&mut self.flips.iter().copied()))
            }
            SetClass::InfiniteCoinfinite => {
                let classes: Vec<String> = self
                    .residue_classes()
                    .map(|r| format!("res({r},{})", self.modulus))
                    .collect();
                let mut body = if classes.len() == 1 {
                    classes.into_iter().next().unwrap()
                } else {
                    format!("({})", classes.join(" | "))
                };
                let removed: Vec<u64> = self
                    .flips
                    .iter()
                    .copied()
                    .filter(|&n| self.residues[(n % self.modulus) as usize])
                    .collect();
                let added: Vec<u64> = self
                    .flips
                    .iter()
                    .copied()
                    .filter(|&n| !self.residues[(n % self.modulus) as usize])
                    .collect();
                if !removed.is_empty() {
                    body = format!("({body} \\ {})", finite_body(&mut removed.into_iter()));
                }
                if !added.is_empty() {
                    body = format!("({body} | {})", finite_body(&mut added.into_iter()));
                }
                write!(f, "{body}")
            }
        }
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
