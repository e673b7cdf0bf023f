//! Finite unions of rational intervals, the per-index extensions of
//! internal predicates.
//!
//! Endpoints optionally carry a tag naming the term they came from. Tags are
//! invisible to the set algebra (comparison and equality look at the value
//! only); they let the saturation-witness selector map a concrete endpoint
//! back to the symbolic expression that produced it.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;

use crate::rational::{show_rational, Q};

/// A rational endpoint value with an optional provenance tag.
#[derive(Clone, Debug)]
pub struct Marked {
    pub value: Q,
    pub tag: Option<usize>,
}

impl Marked {
    pub fn plain(value: Q) -> Marked {
        Marked { value, tag: None }
    }

    pub fn tagged(value: Q, tag: usize) -> Marked {
        Marked {
            value,
            tag: Some(tag),
        }
    }
}

impl PartialEq for Marked {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl Eq for Marked {}

impl PartialOrd for Marked {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Marked {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value.cmp(&other.value)
    }
}

/// Lower bound of an interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lo {
    NegInf,
    Open(Marked),
    Closed(Marked),
}

/// Upper bound of an interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Hi {
    Open(Marked),
    Closed(Marked),
    PosInf,
}

/// A nonempty interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Lo,
    pub hi: Hi,
}

impl Interval {
    fn is_nonempty(lo: &Lo, hi: &Hi) -> bool {
        match (lo, hi) {
            (Lo::NegInf, _) | (_, Hi::PosInf) => true,
            (Lo::Open(a), Hi::Open(b)) => a.value < b.value,
            (Lo::Open(a), Hi::Closed(b)) => a.value < b.value,
            (Lo::Closed(a), Hi::Open(b)) => a.value < b.value,
            (Lo::Closed(a), Hi::Closed(b)) => a.value <= b.value,
        }
    }

    pub fn contains(&self, x: &Q) -> bool {
        let lo_ok = match &self.lo {
            Lo::NegInf => true,
            Lo::Open(a) => *x > a.value,
            Lo::Closed(a) => *x >= a.value,
        };
        let hi_ok = match &self.hi {
            Hi::PosInf => true,
            Hi::Open(b) => *x < b.value,
            Hi::Closed(b) => *x <= b.value,
        };
        lo_ok && hi_ok
    }
}

/// A finite union of disjoint, non-touching intervals, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntervalSet {
    parts: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> IntervalSet {
        IntervalSet { parts: vec![] }
    }

    pub fn whole_line() -> IntervalSet {
        IntervalSet {
            parts: vec![Interval {
                lo: Lo::NegInf,
                hi: Hi::PosInf,
            }],
        }
    }

    pub fn interval(lo: Lo, hi: Hi) -> IntervalSet {
        if Interval::is_nonempty(&lo, &hi) {
            IntervalSet {
                parts: vec![Interval { lo, hi }],
            }
        } else {
            IntervalSet::empty()
        }
    }

    pub fn point(x: Marked) -> IntervalSet {
        IntervalSet::interval(Lo::Closed(x.clone()), Hi::Closed(x))
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, x: &Q) -> bool {
        self.parts.iter().any(|i| i.contains(x))
    }

    /// Set complement within the rational line.
    pub fn complement(&self) -> IntervalSet {
        let mut parts = Vec::new();
        let mut lo = Lo::NegInf;
        for part in &self.parts {
            let hi = match &part.lo {
                Lo::NegInf => None,
                Lo::Open(a) => Some(Hi::Closed(a.clone())),
                Lo::Closed(a) => Some(Hi::Open(a.clone())),
            };
            if let Some(hi) = hi {
                if Interval::is_nonempty(&lo, &hi) {
                    parts.push(Interval {
                        lo: lo.clone(),
                        hi,
                    });
                }
            }
            lo = match &part.hi {
                Hi::PosInf => return IntervalSet { parts },
                Hi::Open(b) => Lo::Closed(b.clone()),
                Hi::Closed(b) => Lo::Open(b.clone()),
            };
        }
        parts.push(Interval {
            lo,
            hi: Hi::PosInf,
        });
        IntervalSet { parts }
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let mut parts = Vec::new();
        for a in &self.parts {
            for b in &other.parts {
                let lo = max_lo(&a.lo, &b.lo);
                let hi = min_hi(&a.hi, &b.hi);
                if Interval::is_nonempty(&lo, &hi) {
                    parts.push(Interval { lo, hi });
                }
            }
        }
        let mut out = IntervalSet { parts };
        out.sort();
        out
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        // De Morgan keeps all endpoint/adjacency bookkeeping in one place
        self.complement()
            .intersect(&other.complement())
            .complement()
    }

    fn sort(&mut self) {
        self.parts.sort_by(|a, b| cmp_lo(&a.lo, &b.lo));
    }

    /// A canonical element, when the set is nonempty: from the leftmost
    /// interval take the closed left endpoint; otherwise the midpoint when
    /// bounded; otherwise step one unit inside from the finite end; for the
    /// whole line take 0.
    pub fn pick(&self) -> Option<Pick> {
        let first = self.parts.first()?;
        Some(match (&first.lo, &first.hi) {
            (Lo::Closed(a), _) => Pick::LeftEndpoint(a.clone()),
            (Lo::Open(a), Hi::Open(b) | Hi::Closed(b)) => Pick::Midpoint(a.clone(), b.clone()),
            (Lo::Open(a), Hi::PosInf) => Pick::RightOfLeft(a.clone()),
            (Lo::NegInf, Hi::Open(b) | Hi::Closed(b)) => Pick::LeftOfRight(b.clone()),
            (Lo::NegInf, Hi::PosInf) => Pick::Zero,
        })
    }
}

/// How [`IntervalSet::pick`] chose its element; carries the tagged endpoints
/// so callers can rebuild the choice symbolically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pick {
    LeftEndpoint(Marked),
    Midpoint(Marked, Marked),
    RightOfLeft(Marked),
    LeftOfRight(Marked),
    Zero,
}

impl Pick {
    /// The concrete rational chosen.
    pub fn value(&self) -> Q {
        match self {
            Pick::LeftEndpoint(a) => a.value.clone(),
            Pick::Midpoint(a, b) => (&a.value + &b.value) / Q::from_integer(2.into()),
            Pick::RightOfLeft(a) => &a.value + Q::from_integer(1.into()),
            Pick::LeftOfRight(b) => &b.value - Q::from_integer(1.into()),
            Pick::Zero => Q::zero(),
        }
    }
}

fn cmp_lo(a: &Lo, b: &Lo) -> Ordering {
    match (a, b) {
        (Lo::NegInf, Lo::NegInf) => Ordering::Equal,
        (Lo::NegInf, _) => Ordering::Less,
        (_, Lo::NegInf) => Ordering::Greater,
        (Lo::Open(x), Lo::Open(y)) | (Lo::Closed(x), Lo::Closed(y)) => x.cmp(y),
        (Lo::Closed(x), Lo::Open(y)) => x.cmp(y).then(Ordering::Less),
        (Lo::Open(x), Lo::Closed(y)) => x.cmp(y).then(Ordering::Greater),
    }
}

fn max_lo(a: &Lo, b: &Lo) -> Lo {
    if cmp_lo(a, b) == Ordering::Less {
        b.clone()
    } else {
        a.clone()
    }
}

fn cmp_hi(a: &Hi, b: &Hi) -> Ordering {
    match (a, b) {
        (Hi::PosInf, Hi::PosInf) => Ordering::Equal,
        (Hi::PosInf, _) => Ordering::Greater,
        (_, Hi::PosInf) => Ordering::Less,
        (Hi::Open(x), Hi::Open(y)) | (Hi::Closed(x), Hi::Closed(y)) => x.cmp(y),
        (Hi::Closed(x), Hi::Open(y)) => x.cmp(y).then(Ordering::Greater),
        (Hi::Open(x), Hi::Closed(y)) => x.cmp(y).then(Ordering::Less),
    }
}

fn min_hi(a: &Hi, b: &Hi) -> Hi {
    if cmp_hi(a, b) == Ordering::Greater {
        b.clone()
    } else {
        a.clone()
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "{{}}");
        }
        let parts: Vec<String> = self
            .parts
            .iter()
            .map(|i| {
                if let (Lo::Closed(a), Hi::Closed(b)) = (&i.lo, &i.hi) {
                    if a == b {
                        return format!("{{{}}}", show_rational(&a.value));
                    }
                }
                let lo = match &i.lo {
                    Lo::NegInf => "(-oo".to_string(),
                    Lo::Open(a) => format!("({}", show_rational(&a.value)),
                    Lo::Closed(a) => format!("[{}", show_rational(&a.value)),
                };
                let hi = match &i.hi {
                    Hi::PosInf => "+oo)".to_string(),
                    Hi::Open(b) => format!("{})", show_rational(&b.value)),
                    Hi::Closed(b) => format!("{}]", show_rational(&b.value)),
                };
                format!("{lo}, {hi}")
            })
            .collect();
        write!(f, "{}", parts.join(" u "))
    }
}
