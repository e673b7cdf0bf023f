//! Univariate polynomials and rational functions over the exact rationals,
//! in the index variable `n`.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{EngineError, Result};
use crate::rational::{ceil_to_u64, q_of_index, show_rational, sign, Q};
use crate::seq::Limit;

/// Dense polynomial; `coeffs[i]` is the coefficient of `n^i`, no trailing
/// zeros, the zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Q>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Q>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: vec![] }
    }

    pub fn constant(q: Q) -> Poly {
        Poly::new(vec![q])
    }

    /// The identity polynomial `n`.
    pub fn var() -> Poly {
        Poly::new(vec![Q::zero(), Q::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Q> {
        self.coeffs.last()
    }

    pub fn eval(&self, n: u64) -> Q {
        let x = q_of_index(n);
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * &x + c;
        }
        acc
    }

    /// Evaluate at an arbitrary rational point.
    pub fn eval_q(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_else(Q::zero);
                let b = other.coeffs.get(i).cloned().unwrap_or_else(Q::zero);
                a + b
            })
            .collect();
        Poly::new(coeffs)
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Q::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::new(coeffs)
    }

    pub fn scale(&self, q: &Q) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * q).collect())
    }

    /// Euclidean division; `other` must be nonzero.
    pub fn div_rem(&self, other: &Poly) -> (Poly, Poly) {
        assert!(!other.is_zero(), "division by the zero polynomial");
        let mut rem = self.clone();
        let mut quot = vec![Q::zero(); self.coeffs.len().saturating_sub(other.coeffs.len() - 1)];
        let dlead = other.leading().unwrap().clone();
        let ddeg = other.degree().unwrap();
        while let Some(rdeg) = rem.degree() {
            if rdeg < ddeg {
                break;
            }
            let factor = rem.leading().unwrap() / &dlead;
            let shift = rdeg - ddeg;
            quot[shift] = factor.clone();
            let mut scaled = vec![Q::zero(); shift];
            scaled.extend(other.coeffs.iter().map(|c| c * &factor));
            rem = rem.sub(&Poly::new(scaled));
        }
        (Poly::new(quot), rem)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }

    fn make_monic(self) -> Poly {
        match self.leading() {
            None => self,
            Some(l) if l.is_one() => self,
            Some(l) => {
                let inv = l.recip();
                self.scale(&inv)
            }
        }
    }

    /// Cauchy root bound: every real root has absolute value below it.
    /// Zero for constants.
    pub fn cauchy_bound(&self) -> Result<u64> {
        match self.degree() {
            None | Some(0) => Ok(0),
            Some(d) => {
                let lead = self.leading().unwrap();
                let mut max = Q::zero();
                for c in &self.coeffs[..d] {
                    let ratio = (c / lead).abs();
                    if ratio > max {
                        max = ratio;
                    }
                }
                Ok(ceil_to_u64(&(max + Q::one()))?)
            }
        }
    }

    /// Nonnegative integer roots (complete: candidates are bounded by the
    /// Cauchy bound).
    pub fn integer_roots(&self) -> Result<Vec<u64>> {
        if self.is_zero() {
            return Err(EngineError::Internal(
                "integer roots of the zero polynomial requested".into(),
            ));
        }
        let bound = self.cauchy_bound()?;
        Ok((0..=bound).filter(|&n| self.eval(n).is_zero()).collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{}", show_rational(&mag))?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{}*", show_rational(&mag))?;
                    }
                    if i == 1 {
                        write!(f, "n")?;
                    } else {
                        write!(f, "n^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A quotient of polynomials in lowest terms with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunc {
    num: Poly,
    den: Poly,
}

impl RationalFunc {
    /// Normalize `num/den`; `den` must be nonzero.
    pub fn new(num: Poly, den: Poly) -> Result<RationalFunc> {
        if den.is_zero() {
            return Err(EngineError::Argument(
                "zero denominator polynomial".into(),
            ));
        }
        if num.is_zero() {
            return Ok(RationalFunc {
                num: Poly::zero(),
                den: Poly::constant(Q::one()),
            });
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lead = den.leading().unwrap().clone();
        let inv = lead.recip();
        Ok(RationalFunc {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    pub fn zero() -> RationalFunc {
        RationalFunc {
            num: Poly::zero(),
            den: Poly::constant(Q::one()),
        }
    }

    pub fn constant(q: Q) -> RationalFunc {
        RationalFunc {
            num: Poly::constant(q),
            den: Poly::constant(Q::one()),
        }
    }

    /// The index variable itself.
    pub fn var() -> RationalFunc {
        RationalFunc {
            num: Poly::var(),
            den: Poly::constant(Q::one()),
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `Some(q)` when the function is the constant `q`.
    pub fn as_constant(&self) -> Option<Q> {
        if self.den.degree() == Some(0) && self.num.degree().is_none_or(|d| d == 0) {
            if self.num.is_zero() {
                Some(Q::zero())
            } else {
                Some(self.num.coeffs[0].clone() / &self.den.coeffs[0])
            }
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    /// Exact value at an index; `None` when the denominator vanishes there.
    pub fn eval(&self, n: u64) -> Option<Q> {
        let d = self.den.eval(n);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(n) / d)
        }
    }

    pub fn add(&self, other: &RationalFunc) -> RationalFunc {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        RationalFunc::new(num, den).expect("product of nonzero denominators is nonzero")
    }

    pub fn neg(&self) -> RationalFunc {
        RationalFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RationalFunc) -> RationalFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RationalFunc) -> RationalFunc {
        RationalFunc::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("product of nonzero denominators is nonzero")
    }

    /// Division; `other` must not be the zero function.
    pub fn div(&self, other: &RationalFunc) -> Result<RationalFunc> {
        if other.is_zero() {
            return Err(EngineError::Argument(
                "division by the zero rational function".into(),
            ));
        }
        RationalFunc::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    /// Limit as the index grows without bound.
    pub fn limit(&self) -> Limit {
        if self.num.is_zero() {
            return Limit::Finite(Q::zero());
        }
        let dn = self.num.degree().unwrap();
        let dd = self.den.degree().unwrap();
        if dn < dd {
            Limit::Finite(Q::zero())
        } else if dn == dd {
            Limit::Finite(self.num.leading().unwrap() / self.den.leading().unwrap())
        } else {
            // denominator is monic, so the sign at infinity is the sign of
            // the numerator's leading coefficient
            if sign(self.num.leading().unwrap()) > 0 {
                Limit::PlusInfinity
            } else {
                Limit::MinusInfinity
            }
        }
    }

    /// Index beyond which both numerator and denominator keep a constant
    /// sign. Cauchy bound, rounded up, plus one.
    pub fn sign_stable_bound(&self) -> Result<u64> {
        Ok(self.num.cauchy_bound()?.max(self.den.cauchy_bound()?) + 1)
    }

    /// Nonnegative integer roots of the denominator.
    pub fn denominator_roots(&self) -> Result<Vec<u64>> {
        if self.den.degree() == Some(0) {
            return Ok(vec![]);
        }
        self.den.integer_roots()
    }
}

impl fmt::Display for RationalFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &Poly| {
            let s = p.to_string();
            if s.contains(' ') {
                format!("({s})")
            } else {
                s
            }
        };
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{} / ({})", wrap(&self.num), self.den)
        }
    }
}

impl fmt::Debug for RationalFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
