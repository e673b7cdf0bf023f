//! Ultrafilter-style oracles on the residue-class algebra.
//!
//! A coherent residue chooser — one residue below each modulus, compatible
//! across divisibility — induces a two-valued, non-principal verdict on
//! every eventually periodic set: accept exactly when the chosen residue
//! lies in the set's periodic part, exceptions ignored. That verdict is an
//! ultrafilter of the quotient algebra modulo finite sets, and quotient
//! satisfaction through it is classical two-valued logic extending every
//! forcing verdict along compatible viewpoints.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::error::{EngineError, Result};
use crate::filter::Filter;
use crate::forcing::{truth_index_set, Env};
use crate::formula::Formula;
use crate::index_set::IndexSet;

/// Moduli probed for coherence at construction time.
const PROBE_LIMIT: u64 = 64;

#[derive(Clone)]
enum Chooser {
    /// Track a fixed natural number: the residue at `m` is `v mod m`.
    /// Coherent by construction.
    Integer(BigUint),
    /// Explicit table with default 0; used to exercise coherence checking.
    Table(Arc<BTreeMap<u64, u64>>),
}

/// A deterministic, coherent residue chooser acting as an ultrafilter on
/// the residue-class algebra.
#[derive(Clone)]
pub struct UltraOracle {
    chooser: Chooser,
    tag: String,
}

impl UltraOracle {
    /// The chooser tracking 0: accepts every `res(0, m)`.
    pub fn zero() -> UltraOracle {
        UltraOracle {
            chooser: Chooser::Integer(BigUint::from(0u32)),
            tag: "zero".into(),
        }
    }

    /// Track an arbitrary natural number.
    pub fn tracking(value: BigUint, tag: impl Into<String>) -> UltraOracle {
        UltraOracle {
            chooser: Chooser::Integer(value),
            tag: tag.into(),
        }
    }

    /// Track the number with the given little-endian digits in `base`.
    pub fn padic(base: u64, digits: &[u64]) -> Result<UltraOracle> {
        if base < 2 {
            return Err(EngineError::Argument("padic base must be at least 2".into()));
        }
        let mut value = BigUint::from(0u32);
        let b = BigUint::from(base);
        for (i, d) in digits.iter().enumerate() {
            if *d >= base {
                return Err(EngineError::Argument(format!(
                    "digit {d} at place {i} is not below base {base}"
                )));
            }
            value += BigUint::from(*d) * b.pow(i as u32);
        }
        let tag = format!(
            "padic({base};{})",
            digits
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(",")
        );
        Ok(UltraOracle {
            chooser: Chooser::Integer(value),
            tag,
        })
    }

    /// Build from an explicit residue table (moduli missing from the table
    /// choose residue 0). Coherence is probed across every divisible pair
    /// of moduli up to the probe limit.
    pub fn from_table(table: BTreeMap<u64, u64>, tag: impl Into<String>) -> Result<UltraOracle> {
        for (&m, &r) in &table {
            if m == 0 || r >= m {
                return Err(EngineError::Argument(format!(
                    "table entry r_{m} = {r} is out of range"
                )));
            }
        }
        let oracle = UltraOracle {
            chooser: Chooser::Table(Arc::new(table)),
            tag: tag.into(),
        };
        for small in 1..=PROBE_LIMIT {
            for large in (2 * small..=PROBE_LIMIT).step_by(small as usize) {
                oracle.check_pair(small, large)?;
            }
        }
        Ok(oracle)
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    /// The chosen residue below a modulus.
    pub fn residue(&self, m: u64) -> u64 {
        match &self.chooser {
            Chooser::Integer(v) => {
                let m_big = BigUint::from(m);
                let r = v % m_big;
                r.try_into().expect("residue below a u64 modulus fits")
            }
            Chooser::Table(t) => t.get(&m).copied().unwrap_or(0),
        }
    }

    fn check_pair(&self, small: u64, large: u64) -> Result<()> {
        let rs = self.residue(small);
        let rl = self.residue(large);
        if rl % small != rs {
            return Err(EngineError::IncoherentChooser {
                smaller: small,
                smaller_res: rs,
                larger: large,
                larger_res: rl,
            });
        }
        Ok(())
    }

    /// On-demand coherence across the divisors of a queried modulus.
    /// Integer tracking is coherent by construction; only tables need the
    /// scan.
    fn check_modulus(&self, m: u64) -> Result<()> {
        if matches!(self.chooser, Chooser::Integer(_)) {
            return Ok(());
        }
        for d in 1..=m {
            if m.is_multiple_of(d) {
                self.check_pair(d, m)?;
            }
        }
        Ok(())
    }

    /// Two-valued acceptance of an eventually periodic set: the chosen
    /// residue lies in the periodic part. Finite exceptions are ignored.
    pub fn accepts(&self, s: &IndexSet) -> Result<bool> {
        let m = s.modulus();
        self.check_modulus(m)?;
        let r = self.residue(m);
        Ok(s.residue_classes().any(|c| c == r))
    }

    /// True when the oracle accepts every generator of the filter.
    pub fn extends_filter(&self, f: &Filter) -> Result<bool> {
        for g in f.generators() {
            if !self.accepts(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Classical satisfaction in the oracle's quotient: acceptance of the
    /// formula's truth set. Decidable fragment only.
    pub fn quotient_sat(&self, phi: &Formula, env: &Env) -> Result<bool> {
        self.accepts(&truth_index_set(phi, env)?)
    }
}

impl fmt::Display for UltraOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ultra {}", self.tag)
    }
}

impl fmt::Debug for UltraOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::RationalFunc;
    use crate::rational::qi;
    use crate::seq::Seq;

    fn evens() -> IndexSet {
        IndexSet::residue(0, 2).unwrap()
    }

    fn odds() -> IndexSet {
        IndexSet::residue(1, 2).unwrap()
    }

    #[test]
    fn zero_chooser_basics() {
        let zero = UltraOracle::zero();
        assert!(zero.accepts(&evens()).unwrap());
        assert!(!zero.accepts(&odds()).unwrap());
        for m in 1..=12 {
            assert!(zero.accepts(&IndexSet::residue(0, m).unwrap()).unwrap());
        }
    }

    #[test]
    fn cofinite_sets_always_accepted() {
        for oracle in [
            UltraOracle::zero(),
            UltraOracle::padic(2, &[1]).unwrap(),
            UltraOracle::tracking(BigUint::from(123456u32), "t"),
        ] {
            assert!(oracle
                .accepts(&IndexSet::finite([0, 5, 9]).complement())
                .unwrap());
            assert!(!oracle.accepts(&IndexSet::finite([0, 5, 9])).unwrap());
        }
    }

    #[test]
    fn complement_totality() {
        let oracle = UltraOracle::padic(3, &[2, 1]).unwrap(); // tracks 5
        for m in 1..=12u64 {
            for r in 0..m {
                let s = IndexSet::residue(r, m).unwrap();
                let a = oracle.accepts(&s).unwrap();
                let b = oracle.accepts(&s.complement()).unwrap();
                assert!(a ^ b, "totality fails at res({r},{m})");
            }
        }
    }

    #[test]
    fn intersection_law_on_the_algebra() {
        let oracle = UltraOracle::tracking(BigUint::from(6u32), "six");
        let a = IndexSet::residue(0, 2).unwrap();
        let b = IndexSet::residue(0, 3).unwrap();
        assert!(oracle.accepts(&a).unwrap());
        assert!(oracle.accepts(&b).unwrap());
        assert!(oracle.accepts(&a.intersect(&b).unwrap()).unwrap());
    }

    #[test]
    fn incoherent_table_rejected() {
        let mut t = BTreeMap::new();
        t.insert(2u64, 1u64);
        t.insert(4u64, 0u64);
        match UltraOracle::from_table(t, "broken") {
            Err(EngineError::IncoherentChooser {
                smaller,
                larger,
                ..
            }) => {
                assert_eq!((smaller, larger), (2, 4));
            }
            other => panic!("expected incoherence, got {other:?}"),
        }
        // an empty table is the zero chooser and passes
        assert!(UltraOracle::from_table(BTreeMap::new(), "zeroish").is_ok());
    }

    #[test]
    fn filter_extension_checks_generators() {
        let zero = UltraOracle::zero();
        let f0 = Filter::frechet();
        assert!(zero.extends_filter(&f0).unwrap());
        assert!(zero
            .extends_filter(&f0.extend(&evens()).unwrap())
            .unwrap());
        assert!(!zero
            .extends_filter(&f0.extend(&odds()).unwrap())
            .unwrap());
    }

    #[test]
    fn quotient_decides_what_forcing_leaves_open() {
        let zero = UltraOracle::zero();
        let a = Seq::piecewise(vec![
            (evens(), RationalFunc::constant(qi(2))),
            (odds(), RationalFunc::constant(qi(0))),
        ])
        .unwrap();
        let env = Env::new().with_var("a", a);
        let phi = crate::parser::parse_formula("a = 2").unwrap();
        let neg = crate::parser::parse_formula("~(a = 2)").unwrap();
        // the quotient picks the even branch
        assert!(zero.quotient_sat(&phi, &env).unwrap());
        assert!(!zero.quotient_sat(&neg, &env).unwrap());
        // while the weakest viewpoint forces neither
        let f0 = Filter::frechet();
        assert!(!crate::forcing::forces(&f0, &phi, &env).unwrap().value);
        assert!(!crate::forcing::forces(&f0, &neg, &env).unwrap().value);
    }
}
