//! Exact slope arithmetic.
//!
//! Slopes are extended rational numbers `q/p` with `infinity = 1/0`. A slope
//! in `(0, 1]` has a unique continued fraction expansion
//! `[m1, m2, ..., mk]` with every term positive and the last term at least 2
//! (unless the expansion is just `[1]`). This module carries both
//! representations, the well-ordering on expansions used for transfinite
//! induction, the predecessor map, and the interval endpoints `r1 < r < r2`
//! cut out by the Farey edges at `r`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// An exact rational number, or the point at infinity.
///
/// Stored in lowest terms with a non-negative denominator. Infinity is
/// normalized to `1/0`; `-1/0` denotes the same point. Finite values compare,
/// add, and negate exactly — there is no floating-point path anywhere.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExtendedRational {
    num: BigInt,
    den: BigInt,
}

impl ExtendedRational {
    /// Build `num/den` reduced to lowest terms.
    ///
    /// A zero denominator yields infinity; `0/0` is rejected.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, Error> {
        let mut num = num.into();
        let mut den = den.into();
        if den.is_zero() {
            if num.is_zero() {
                return Err(Error::Indeterminate);
            }
            return Ok(Self::infinity());
        }
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        let g = num.gcd(&den);
        if !g.is_one() {
            num /= &g;
            den /= &g;
        }
        Ok(ExtendedRational { num, den })
    }

    /// Shorthand for small test values. Panics on `0/0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::new(num, den).expect("ratio: indeterminate 0/0")
    }

    pub fn infinity() -> Self {
        ExtendedRational {
            num: BigInt::one(),
            den: BigInt::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::ratio(0, 1)
    }

    pub fn one() -> Self {
        Self::ratio(1, 1)
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn is_infinite(&self) -> bool {
        self.den.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !self.is_infinite()
    }

    /// True for finite values in `(0, 1]`, the slope domain of the relator.
    pub fn is_slope(&self) -> bool {
        self.is_finite() && self.num.is_positive() && self.num <= self.den
    }

    /// Numerator and denominator as machine integers, for the word and
    /// sequence builders that materialize `O(p)` data.
    pub(crate) fn small_parts(&self) -> Result<(u64, u64), Error> {
        match (self.num.to_u64(), self.den.to_u64()) {
            (Some(q), Some(p)) => Ok((q, p)),
            _ => Err(Error::TooLarge(format!("slope {self} exceeds u64"))),
        }
    }

    fn cmp_finite(&self, other: &Self) -> Ordering {
        debug_assert!(self.is_finite() && other.is_finite());
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

/// Finite values are totally ordered; infinity compares only to itself.
impl PartialOrd for ExtendedRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self.is_infinite(), other.is_infinite()) {
            (true, true) => Some(Ordering::Equal),
            (true, false) | (false, true) => None,
            (false, false) => Some(self.cmp_finite(other)),
        }
    }
}

macro_rules! finite_only {
    ($lhs:expr, $rhs:expr, $op:literal) => {
        assert!(
            $lhs.is_finite() && $rhs.is_finite(),
            concat!("exact ", $op, " is defined for finite values only"),
        );
    };
}

impl Add for &ExtendedRational {
    type Output = ExtendedRational;
    fn add(self, rhs: &ExtendedRational) -> ExtendedRational {
        finite_only!(self, rhs, "addition");
        ExtendedRational::new(
            &self.num * &rhs.den + &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
        .expect("finite sum")
    }
}

impl Sub for &ExtendedRational {
    type Output = ExtendedRational;
    fn sub(self, rhs: &ExtendedRational) -> ExtendedRational {
        finite_only!(self, rhs, "subtraction");
        ExtendedRational::new(
            &self.num * &rhs.den - &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
        .expect("finite difference")
    }
}

impl Mul for &ExtendedRational {
    type Output = ExtendedRational;
    fn mul(self, rhs: &ExtendedRational) -> ExtendedRational {
        finite_only!(self, rhs, "multiplication");
        ExtendedRational::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("finite product")
    }
}

impl Div for &ExtendedRational {
    type Output = ExtendedRational;
    fn div(self, rhs: &ExtendedRational) -> ExtendedRational {
        finite_only!(self, rhs, "division");
        assert!(!rhs.num.is_zero(), "division by zero");
        ExtendedRational::new(&self.num * &rhs.den, &self.den * &rhs.num).expect("finite quotient")
    }
}

impl Neg for &ExtendedRational {
    type Output = ExtendedRational;
    fn neg(self) -> ExtendedRational {
        assert!(self.is_finite(), "negation is defined for finite values only");
        ExtendedRational {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for ExtendedRational {
    type Err = Error;

    /// Accepts `"q/p"`, a bare integer `"n"`, or `"inf"`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s == "inf" {
            return Ok(Self::infinity());
        }
        let bad = || Error::Parse(format!("expected `q/p`, an integer, or `inf`, got `{s}`"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (
                BigInt::from_str(n.trim()).map_err(|_| bad())?,
                BigInt::from_str(d.trim()).map_err(|_| bad())?,
            ),
            None => (BigInt::from_str(s).map_err(|_| bad())?, BigInt::one()),
        };
        Self::new(n, d).map_err(|_| Error::Parse(format!("indeterminate fraction `{s}`")))
    }
}

/// True iff `x` and `y` span an edge of the Farey tessellation:
/// `|x.num * y.den - x.den * y.num| = 1`. Infinity `1/0` participates.
pub fn is_farey_neighbor(x: &ExtendedRational, y: &ExtendedRational) -> bool {
    let cross = x.numer() * y.denom() - x.denom() * y.numer();
    cross.abs().is_one()
}

/// Evaluate a raw term list `[m1, ..., mk]` as `1/(m1 + 1/(m2 + ...))`.
/// The empty list evaluates to 0 (the `k = 1` truncation case).
pub(crate) fn eval_terms(terms: &[u64]) -> ExtendedRational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for &m in terms.iter().rev() {
        // 1/(m + num/den) = den/(m*den + num)
        let next_den = BigInt::from(m) * &den + num;
        num = den;
        den = next_den;
    }
    // gcd(num, den) = 1 is preserved at every step
    ExtendedRational { num, den }
}

/// A continued fraction expansion `[m1, m2, ..., mk]` in normal form:
/// every term positive and `mk >= 2` unless `k = 1`. Its value always lies
/// in `(0, 1]`, with `[1]` the expansion of 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ContinuedFraction {
    terms: Vec<u64>,
}

impl ContinuedFraction {
    /// Validate a term list as a normal-form expansion.
    pub fn new(terms: Vec<u64>) -> Result<Self, Error> {
        if terms.is_empty() {
            return Err(Error::InvalidContinuedFraction("empty term list".into()));
        }
        if terms.contains(&0) {
            return Err(Error::InvalidContinuedFraction(
                "terms must be positive".into(),
            ));
        }
        if terms.len() > 1 && *terms.last().unwrap() < 2 {
            return Err(Error::InvalidContinuedFraction(
                "last term must be at least 2".into(),
            ));
        }
        Ok(ContinuedFraction { terms })
    }

    /// Expand a slope in `(0, 1]` by the Euclidean algorithm.
    ///
    /// The plain quotient sequence is already in normal form: a final
    /// quotient of 1 would force equal consecutive remainders, which the
    /// algorithm never produces past the first step.
    pub fn expand(r: &ExtendedRational) -> Result<Self, Error> {
        if !r.is_slope() {
            return Err(Error::SlopeOutOfRange(format!(
                "continued fraction expansion needs 0 < r <= 1, got {r}"
            )));
        }
        let mut terms = Vec::new();
        // r = q/p; repeatedly divide p by q
        let mut p = r.denom().clone();
        let mut q = r.numer().clone();
        while !q.is_zero() {
            let (quot, rem) = p.div_rem(&q);
            let m = quot
                .to_u64()
                .ok_or_else(|| Error::TooLarge(format!("continued fraction term {quot}")))?;
            terms.push(m);
            p = q;
            q = rem;
        }
        Self::new(terms)
    }

    /// The exact value `1/(m1 + 1/(m2 + ...))`.
    pub fn value(&self) -> ExtendedRational {
        eval_terms(&self.terms)
    }

    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        false // normal forms are nonempty by construction
    }

    /// First term `m1`.
    pub fn first_term(&self) -> u64 {
        self.terms[0]
    }

    /// The predecessor in the well-ordering:
    /// `[m1-1, m2, ..., mk]` if `m1 >= 2`, else `[m2+1, m3, ..., mk]`.
    ///
    /// `[1]` (the expansion of 1) is the base of the induction and has none.
    pub fn predecessor(&self) -> Result<Self, Error> {
        if self.terms == [1] {
            return Err(Error::NoPredecessor);
        }
        let mut terms = self.terms.clone();
        if terms[0] >= 2 {
            terms[0] -= 1;
        } else {
            terms.remove(0);
            terms[0] += 1;
        }
        Self::new(terms)
    }

    /// The well-ordering on expansions: shorter first, then lexicographic.
    fn order_cmp(&self, other: &Self) -> Ordering {
        self.terms
            .len()
            .cmp(&other.terms.len())
            .then_with(|| self.terms.cmp(&other.terms))
    }

    /// `self` precedes `other` (reflexively) in the well-ordering.
    pub fn precedes(&self, other: &Self) -> bool {
        self.order_cmp(other) != Ordering::Greater
    }

    /// The endpoints `r1 < r < r2` of the intervals `I1 = [0, r1]` and
    /// `I2 = [r2, 1]`, read off parity-dependent truncations of the
    /// expansion. Both are Farey neighbors of `r`. Requires `r < 1`.
    pub fn interval_endpoints(&self) -> Result<(ExtendedRational, ExtendedRational), Error> {
        if self.terms == [1] {
            return Err(Error::SlopeOutOfRange(
                "interval endpoints need 0 < r < 1".into(),
            ));
        }
        let k = self.terms.len();
        let dropped = eval_terms(&self.terms[..k - 1]);
        let decremented = {
            let mut t = self.terms.clone();
            *t.last_mut().unwrap() -= 1;
            eval_terms(&t)
        };
        if k % 2 == 1 {
            Ok((dropped, decremented))
        } else {
            Ok((decremented, dropped))
        }
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, m) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for ContinuedFraction {
    type Err = Error;

    /// Accepts `"[m1,m2,...]"`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let inner = s
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected `[m1,m2,...]`, got `{s}`")))?;
        let terms = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad continued fraction term `{t}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(terms).map_err(|e| Error::Parse(e.to_string()))
    }
}
