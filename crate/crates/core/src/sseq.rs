//! S-sequences of slopes.
//!
//! The S-sequence of a reduced word is the run-length sequence of its
//! exponent-sign blocks; for a slope `r = q/p` the sequence of the relator
//! has length `2q`, sums to `2p`, and is invariant under half-rotation.
//! This module has both routes to it — reading the relator, and the
//! closed-form floor-star formula — together with the predecessor
//! recurrences, the symmetric `((S1, S2, S1, S2))` decomposition, and the
//! pattern/interval criteria that connect sequences to the Farey picture.

use std::fmt;

use crate::cyclic;
use crate::error::Error;
use crate::rational::{ContinuedFraction, ExtendedRational};
use crate::word::{CyclicWord, Word};

/// A run-length sequence of positive integers. May be empty (the `S1` of a
/// one-term expansion); every stored term is at least 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SSequence {
    terms: Vec<u64>,
}

impl SSequence {
    pub fn new(terms: Vec<u64>) -> Result<Self, Error> {
        if terms.contains(&0) {
            return Err(Error::InvalidContinuedFraction(
                "S-sequence terms must be positive".into(),
            ));
        }
        Ok(SSequence { terms })
    }

    pub fn empty() -> Self {
        SSequence { terms: Vec::new() }
    }

    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.terms.iter().sum()
    }

    pub fn is_palindromic(&self) -> bool {
        let n = self.terms.len();
        (0..n / 2).all(|i| self.terms[i] == self.terms[n - 1 - i])
    }

    /// Concatenation, used to build the `(S1, S2)` block patterns.
    pub fn concat(&self, other: &SSequence) -> SSequence {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        SSequence { terms }
    }
}

impl fmt::Display for SSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, ")")
    }
}

/// An S-sequence considered up to rotation.
///
/// Equality compares rotations; the canonical representative (least
/// rotation) backs hashing and serialization.
#[derive(Clone, Debug)]
pub struct CyclicSSequence {
    rep: SSequence,
}

impl CyclicSSequence {
    pub fn new(rep: SSequence) -> Self {
        CyclicSSequence { rep }
    }

    pub fn rep(&self) -> &SSequence {
        &self.rep
    }

    pub fn len(&self) -> usize {
        self.rep.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rep.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.rep.sum()
    }

    pub fn terms(&self) -> &[u64] {
        self.rep.terms()
    }

    /// Lexicographically least rotation.
    pub fn canonical(&self) -> SSequence {
        let k = cyclic::least_rotation_index(self.rep.terms());
        SSequence {
            terms: cyclic::rotated(self.rep.terms(), k),
        }
    }

    pub fn rotated(&self, k: usize) -> CyclicSSequence {
        CyclicSSequence {
            rep: SSequence {
                terms: cyclic::rotated(self.rep.terms(), k),
            },
        }
    }

    pub fn reversed(&self) -> CyclicSSequence {
        let mut terms = self.rep.terms.clone();
        terms.reverse();
        CyclicSSequence {
            rep: SSequence { terms },
        }
    }
}

impl PartialEq for CyclicSSequence {
    fn eq(&self, other: &Self) -> bool {
        cyclic::cyclic_eq(self.rep.terms(), other.rep.terms())
    }
}

impl Eq for CyclicSSequence {}

impl std::hash::Hash for CyclicSSequence {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.canonical().terms().hash(state);
    }
}

impl fmt::Display for CyclicSSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(({}))", {
            let c = self.canonical();
            let s = c.to_string();
            s[1..s.len() - 1].to_string()
        })
    }
}

/// Run lengths of the maximal sign blocks of a reduced word, in order.
/// The empty word yields the empty sequence.
pub fn s_sequence(w: &Word) -> SSequence {
    let mut terms = Vec::new();
    let mut run = 0u64;
    let mut sign = true;
    for (i, l) in w.letters().iter().enumerate() {
        if i == 0 || l.positive == sign {
            run += 1;
        } else {
            terms.push(run);
            run = 1;
        }
        sign = l.positive;
    }
    if run > 0 {
        terms.push(run);
    }
    SSequence { terms }
}

/// Run lengths around a cyclic word: the wrap-around block is merged.
/// A constant-sign cycle yields the single-term sequence.
pub fn cyclic_s_sequence(w: &CyclicWord) -> CyclicSSequence {
    let mut seq = s_sequence(w.rep());
    let ls = w.rep().letters();
    if seq.len() > 1 && ls.first().unwrap().positive == ls.last().unwrap().positive {
        let last = seq.terms.pop().unwrap();
        seq.terms[0] += last;
    }
    CyclicSSequence::new(seq)
}

/// Greatest integer strictly smaller than `a/b` for `a >= 0, b > 0`;
/// equals `ceil(a/b) - 1`, so in particular -1 at 0.
fn floor_star(a: u64, b: u64) -> i64 {
    a.div_ceil(b) as i64 - 1
}

/// The S-sequence of slope `r = q/p` by the closed form
/// `s_j = floor_star(j/r) - floor_star((j-1)/r)`, `j = 1..2q`.
///
/// Agrees with `s_sequence(relator(r))` term by term.
pub fn slope_sseq(r: &ExtendedRational) -> Result<SSequence, Error> {
    if !r.is_slope() {
        return Err(Error::SlopeOutOfRange(format!(
            "S-sequence needs 0 < q/p <= 1, got {r}"
        )));
    }
    let (q, p) = r.small_parts()?;
    if q > 10_000_000 {
        return Err(Error::TooLarge(format!(
            "S-sequence of {r} would have {} terms",
            2 * u128::from(q)
        )));
    }
    let terms = (1..=2 * q)
        .map(|j| (floor_star(j * p, q) - floor_star((j - 1) * p, q)) as u64)
        .collect();
    Ok(SSequence { terms })
}

/// Cyclic S-sequence of a slope, via the closed form.
pub fn cyclic_slope_sseq(r: &ExtendedRational) -> Result<CyclicSSequence, Error> {
    Ok(CyclicSSequence::new(slope_sseq(r)?))
}

/// The `m1 >= 2` recurrence: adds 1 to every term.
pub fn recurrence_up(cs_pred: &CyclicSSequence) -> CyclicSSequence {
    CyclicSSequence {
        rep: SSequence {
            terms: cs_pred.terms().iter().map(|&t| t + 1).collect(),
        },
    }
}

/// The `m1 = 1` recurrence: each term `t` unpacks to `2` followed by
/// `t - 2` ones, applied around the cycle in forward and in reversed
/// order. The true sequence of the successor slope is cyclically equal to
/// one of the two candidates. Rejects any term below 2.
pub fn recurrence_flip(
    cs_pred: &CyclicSSequence,
) -> Result<(CyclicSSequence, CyclicSSequence), Error> {
    if cs_pred.terms().iter().any(|&t| t < 2) {
        return Err(Error::SlopeOutOfRange(
            "flip recurrence needs every term at least 2".into(),
        ));
    }
    let unpack = |terms: &mut dyn Iterator<Item = u64>| {
        let mut out = Vec::new();
        for t in terms {
            out.push(2);
            out.extend(std::iter::repeat_n(1, (t - 2) as usize));
        }
        CyclicSSequence {
            rep: SSequence { terms: out },
        }
    };
    let forward = unpack(&mut cs_pred.terms().iter().copied());
    let reversed = unpack(&mut cs_pred.terms().iter().rev().copied());
    Ok((forward, reversed))
}

/// The symmetric splitting `CS(r) = ((S1, S2, S1, S2))`.
///
/// `S1` is empty exactly when the expansion has one term; otherwise it
/// begins and ends with `m1 + 1`, while `S2` begins and ends with `m1`.
/// Both blocks are palindromic and each occurs exactly twice around the
/// cycle.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Decomposition {
    pub s1: SSequence,
    pub s2: SSequence,
}

impl Decomposition {
    /// The full cycle `(S1, S2, S1, S2)`.
    pub fn cs(&self) -> CyclicSSequence {
        let half = self.s1.concat(&self.s2);
        CyclicSSequence::new(half.concat(&half))
    }
}

/// Build the decomposition by the predecessor recursion and verify it
/// against the closed-form sequence. A mismatch is an internal error, not
/// a fallback.
pub fn decompose(r: &ContinuedFraction) -> Result<Decomposition, Error> {
    // the blocks together have q terms; refuse to materialize absurd ones
    let (q, _) = r.value().small_parts()?;
    if q > 10_000_000 {
        return Err(Error::TooLarge(format!(
            "decomposition of {r} would have {q} terms"
        )));
    }

    // walk down the predecessor chain to a one-term base
    let mut chain = Vec::new();
    let mut cur = r.clone();
    while cur.len() > 1 {
        let pred = cur.predecessor()?;
        chain.push(cur);
        cur = pred;
    }

    // base [m1]: S1 empty, S2 = (m1)
    let mut dec = Decomposition {
        s1: SSequence::empty(),
        s2: SSequence {
            terms: vec![cur.first_term()],
        },
    };

    // unwind, applying the case transform that carried each step
    for step in chain.into_iter().rev() {
        dec = if step.first_term() >= 2 {
            // termwise +1 on both blocks
            Decomposition {
                s1: SSequence {
                    terms: dec.s1.terms.iter().map(|&t| t + 1).collect(),
                },
                s2: SSequence {
                    terms: dec.s2.terms.iter().map(|&t| t + 1).collect(),
                },
            }
        } else if step.len() == 2 {
            // [1, m2]: S1 = (2), S2 = (m2 - 1 ones)
            let m2 = step.terms()[1];
            Decomposition {
                s1: SSequence { terms: vec![2] },
                s2: SSequence {
                    terms: vec![1; (m2 - 1) as usize],
                },
            }
        } else {
            // [1, m2, ...]: unpack the predecessor blocks, swapping roles
            let mut s1 = vec![2];
            for &a in dec.s2.terms() {
                s1.extend(std::iter::repeat_n(1, (a - 2) as usize));
                s1.push(2);
            }
            let mut s2 = Vec::new();
            for (i, &a) in dec.s1.terms().iter().enumerate() {
                if i > 0 {
                    s2.push(2);
                }
                s2.extend(std::iter::repeat_n(1, (a - 2) as usize));
            }
            Decomposition {
                s1: SSequence { terms: s1 },
                s2: SSequence { terms: s2 },
            }
        };
    }

    let expected = cyclic_slope_sseq(&r.value())?;
    assert_eq!(
        dec.cs(),
        expected,
        "internal error: decomposition of {r} disagrees with its cyclic S-sequence"
    );
    Ok(dec)
}

/// Number of rotations of `cs` that begin with `pattern`.
pub fn count_cyclic_occurrences(
    cs: &CyclicSSequence,
    pattern: &SSequence,
) -> Result<usize, Error> {
    if pattern.is_empty() {
        return Err(Error::EmptyPattern);
    }
    Ok(cyclic::count_cyclic_matches(cs.terms(), pattern.terms()))
}

/// The necessary condition on `CS(s)` for the loop of slope `s` to die in
/// the group of slope `r`: a term at least `m1` when the expansion of `r`
/// has a single term, and otherwise a contiguous `(S1, S2)` or `(S2, S1)`
/// block from the decomposition of `r`.
pub fn contains_pattern(r: &ContinuedFraction, cs_s: &CyclicSSequence) -> Result<bool, Error> {
    if r.len() == 1 {
        let m1 = r.first_term();
        return Ok(cs_s.terms().iter().any(|&t| t >= m1));
    }
    let dec = decompose(r)?;
    let p12 = dec.s1.concat(&dec.s2);
    let p21 = dec.s2.concat(&dec.s1);
    Ok(cyclic::count_cyclic_matches(cs_s.terms(), p12.terms()) > 0
        || cyclic::count_cyclic_matches(cs_s.terms(), p21.terms()) > 0)
}

/// The continued-fraction shape forced on `s = [l1, ..., lt]` by the
/// pattern condition for `r = [m1, ..., mk]`: the expansions agree up to
/// position `k - 1`, and at `k` either `l_k >= m_k`, or `l_k = m_k - 1`
/// with the expansion of `s` strictly longer.
pub fn connection_conditions(r: &ContinuedFraction, s: &ContinuedFraction) -> bool {
    let m = r.terms();
    let l = s.terms();
    let k = m.len();
    if l.len() < k {
        return false;
    }
    if l[..k - 1] != m[..k - 1] {
        return false;
    }
    l[k - 1] >= m[k - 1] || (l[k - 1] + 1 == m[k - 1] && l.len() > k)
}

/// True iff `s` lies strictly between the interval endpoints of `r`.
pub fn in_open_interval(r: &ContinuedFraction, s: &ExtendedRational) -> Result<bool, Error> {
    let (r1, r2) = r.interval_endpoints()?;
    Ok(r1 < *s && *s < r2)
}
