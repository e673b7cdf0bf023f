//! Viewpoints: filters on the naturals finitely generated over the cofinite
//! (Fréchet) filter.
//!
//! A value holds its generator list and the cached intersection (`core`).
//! The represented filter is `{B : core \ B is finite}` — everything the
//! generators and the cofinite sets force in. Membership, refinement and
//! compatibility all reduce to finiteness checks in the index algebra, so
//! each is decided exactly.

use std::fmt;

use crate::error::{EngineError, Result};
use crate::index_set::IndexSet;

/// A non-principal filter finitely generated over the cofinite filter.
#[derive(Clone, PartialEq, Eq)]
pub struct Filter {
    generators: Vec<IndexSet>,
    core: IndexSet,
}

impl Filter {
    /// The Fréchet filter of cofinite sets: the weakest viewpoint.
    pub fn frechet() -> Filter {
        Filter {
            generators: vec![],
            core: IndexSet::universe(),
        }
    }

    /// Generate a filter from finitely many sets. Fails when the
    /// intersection is finite, which is the incompatibility of the
    /// generators as viewpoints.
    pub fn new(generators: Vec<IndexSet>) -> Result<Filter> {
        let mut core = IndexSet::universe();
        let mut kept: Vec<IndexSet> = Vec::new();
        for g in generators {
            if !kept.contains(&g) {
                core = core.intersect(&g)?;
                kept.push(g);
            }
        }
        if core.is_finite() {
            return Err(EngineError::ImproperFilter(format!("core {core}")));
        }
        Ok(Filter {
            generators: kept,
            core,
        })
    }

    pub fn generators(&self) -> &[IndexSet] {
        &self.generators
    }

    pub fn core(&self) -> &IndexSet {
        &self.core
    }

    /// Decidable membership: `S` belongs to the filter exactly when the core
    /// is almost contained in it.
    pub fn contains(&self, s: &IndexSet) -> bool {
        self.core
            .difference(s)
            .map(|d| d.is_finite())
            .unwrap_or(false)
    }

    /// Restrict the viewpoint by one more set.
    pub fn extend(&self, s: &IndexSet) -> Result<Filter> {
        let mut gens = self.generators.clone();
        gens.push(s.clone());
        Filter::new(gens)
    }

    /// True when `self` is the stronger viewpoint: it contains everything
    /// `other` does.
    pub fn refines(&self, other: &Filter) -> bool {
        other.generators.iter().all(|g| self.contains(g))
    }

    /// True when the two viewpoints admit a common refinement.
    pub fn compatible(&self, other: &Filter) -> bool {
        self.core
            .intersect(&other.core)
            .map(|c| !c.is_finite())
            .unwrap_or(false)
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F0")?;
        for g in &self.generators {
            write!(f, " + {g}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} [core {:?}]", self.core.classify())
    }
}
