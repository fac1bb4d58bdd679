//! Words in the free group on `{a, b}` and the relator of the upper
//! presentation.
//!
//! The compact text encoding uses lowercase for a generator and uppercase
//! for its inverse: `"abAB"` is `a b a^-1 b^-1`. For cyclic words the
//! canonical representative is the lexicographically least rotation under
//! `a < A < b < B`.

use std::fmt;
use std::str::FromStr;

use crate::cyclic;
use crate::error::Error;
use crate::rational::ExtendedRational;

/// One of the two meridian generators.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Gen {
    A,
    B,
}

/// A single letter `a`, `a^-1`, `b`, or `b^-1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Letter {
    pub gen: Gen,
    pub positive: bool,
}

impl Letter {
    pub fn new(gen: Gen, positive: bool) -> Self {
        Letter { gen, positive }
    }

    pub fn exponent(self) -> i32 {
        if self.positive {
            1
        } else {
            -1
        }
    }

    pub fn inverse(self) -> Self {
        Letter {
            gen: self.gen,
            positive: !self.positive,
        }
    }

    /// True when the two letters cancel as an adjacent pair.
    pub fn cancels(self, other: Self) -> bool {
        self.gen == other.gen && self.positive != other.positive
    }

    pub fn to_char(self) -> char {
        match (self.gen, self.positive) {
            (Gen::A, true) => 'a',
            (Gen::A, false) => 'A',
            (Gen::B, true) => 'b',
            (Gen::B, false) => 'B',
        }
    }

    pub fn from_char(c: char) -> Result<Self, Error> {
        match c {
            'a' => Ok(Letter::new(Gen::A, true)),
            'A' => Ok(Letter::new(Gen::A, false)),
            'b' => Ok(Letter::new(Gen::B, true)),
            'B' => Ok(Letter::new(Gen::B, false)),
            _ => Err(Error::Parse(format!("bad letter `{c}`"))),
        }
    }

    // canonical order a < A < b < B
    fn key(self) -> u8 {
        match (self.gen, self.positive) {
            (Gen::A, true) => 0,
            (Gen::A, false) => 1,
            (Gen::B, true) => 2,
            (Gen::B, false) => 3,
        }
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

/// A freely reduced word: no adjacent `x x^-1` pair survives construction.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    /// Free reduction: cancel adjacent inverse pairs until none remain.
    /// The result is the unique reduced form of the input.
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut stack: Vec<Letter> = Vec::new();
        for l in letters {
            match stack.last() {
                Some(&top) if top.cancels(l) => {
                    stack.pop();
                }
                _ => stack.push(l),
            }
        }
        Word { letters: stack }
    }

    pub fn empty() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// The automorphism `a -> a`, `b -> b^-1` applied letterwise.
    /// An involution; preserves free reduction.
    pub fn flip_b(&self) -> Self {
        Word {
            letters: self
                .letters
                .iter()
                .map(|&l| match l.gen {
                    Gen::A => l,
                    Gen::B => l.inverse(),
                })
                .collect(),
        }
    }

    /// True when no `a^{+-2}` or `b^{+-2}` occurs (linear reading).
    pub fn is_alternating(&self) -> bool {
        self.letters.windows(2).all(|w| w[0].gen != w[1].gen)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(&f), Some(&l)) => self.len() == 1 || !l.cancels(f),
            _ => true,
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let letters = s
            .trim()
            .chars()
            .map(Letter::from_char)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Word::new(letters))
    }
}

/// A cyclic word: a cyclically reduced word considered up to rotation.
///
/// Equality compares rotations; hashing goes through the canonical (least)
/// rotation so the two stay consistent. Reversal is *not* identified with
/// the word itself.
#[derive(Clone, Debug)]
pub struct CyclicWord {
    rep: Word,
}

impl CyclicWord {
    /// Cyclic reduction: freely reduce, then strip cancelling ends.
    pub fn new(word: Word) -> Self {
        let mut letters = word.letters;
        loop {
            match (letters.first(), letters.last()) {
                (Some(&f), Some(&l)) if letters.len() >= 2 && l.cancels(f) => {
                    letters.pop();
                    letters.remove(0);
                }
                _ => break,
            }
        }
        CyclicWord {
            rep: Word { letters },
        }
    }

    /// The representative this cyclic word was built from.
    pub fn rep(&self) -> &Word {
        &self.rep
    }

    pub fn len(&self) -> usize {
        self.rep.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rep.is_empty()
    }

    /// Lexicographically least rotation (`a < A < b < B`).
    pub fn canonical(&self) -> Word {
        let k = cyclic::least_rotation_index(self.rep.letters());
        Word {
            letters: cyclic::rotated(self.rep.letters(), k),
        }
    }

    /// Rotate the representative left by `k`.
    pub fn rotated(&self, k: usize) -> CyclicWord {
        CyclicWord {
            rep: Word {
                letters: cyclic::rotated(self.rep.letters(), k),
            },
        }
    }

    pub fn inverse(&self) -> CyclicWord {
        CyclicWord {
            rep: self.rep.inverse(),
        }
    }

    /// Equality up to cyclic shift, by doubling-and-scan.
    pub fn cyclically_equal(&self, other: &CyclicWord) -> bool {
        cyclic::cyclic_eq(self.rep.letters(), other.rep.letters())
    }

    /// True when generators alternate all the way around the cycle.
    /// Forces even length on nonempty words.
    pub fn is_alternating(&self) -> bool {
        let n = self.rep.len();
        if n == 0 {
            return false;
        }
        let ls = self.rep.letters();
        (0..n).all(|i| ls[i].gen != ls[(i + 1) % n].gen)
    }
}

impl PartialEq for CyclicWord {
    fn eq(&self, other: &Self) -> bool {
        self.cyclically_equal(other)
    }
}

impl Eq for CyclicWord {}

impl std::hash::Hash for CyclicWord {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.canonical().letters().hash(state);
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.canonical())
    }
}

/// The relator `u_{q/p}` of the upper presentation, for `0 < q/p <= 1`.
///
/// With `e_i = (-1)^floor(iq/p)` and `hat = b^{e_1} a^{e_2} ... ^{e_{p-1}}`:
/// `u = a hat b^{(-1)^q} hat^-1` for odd `p`, and `u = a hat a^-1 hat^-1`
/// for even `p`. The result has length `2p`, starts with `a`, and is
/// cyclically alternating.
pub fn relator(r: &ExtendedRational) -> Result<Word, Error> {
    if !r.is_slope() {
        return Err(Error::SlopeOutOfRange(format!(
            "relator needs 0 < q/p <= 1, got {r}"
        )));
    }
    let (q, p) = r.small_parts()?;
    if p > 10_000_000 {
        return Err(Error::TooLarge(format!(
            "relator of {r} would have {} letters",
            2 * u128::from(p)
        )));
    }
    let hat: Vec<Letter> = (1..p)
        .map(|i| {
            let gen = if i % 2 == 1 { Gen::B } else { Gen::A };
            let positive = (i * q / p) % 2 == 0;
            Letter::new(gen, positive)
        })
        .collect();
    let mut letters = Vec::with_capacity(2 * p as usize);
    letters.push(Letter::new(Gen::A, true));
    letters.extend_from_slice(&hat);
    let middle = if p % 2 == 1 {
        Letter::new(Gen::B, q % 2 == 0)
    } else {
        Letter::new(Gen::A, false)
    };
    letters.push(middle);
    letters.extend(hat.iter().rev().map(|l| l.inverse()));
    Ok(Word::new(letters))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn relator_examples() {
        assert_eq!(
            relator(&ExtendedRational::ratio(1, 2)).unwrap().to_string(),
            "abAB"
        );
        assert_eq!(
            relator(&ExtendedRational::ratio(2, 5)).unwrap().to_string(),
            "abaBAbabAB"
        );
        assert_eq!(
            relator(&ExtendedRational::ratio(1, 1)).unwrap().to_string(),
            "aB"
        );
    }

    #[test]
    fn relator_rejects_out_of_range() {
        assert!(relator(&ExtendedRational::zero()).is_err());
        assert!(relator(&ExtendedRational::ratio(3, 2)).is_err());
        assert!(relator(&ExtendedRational::infinity()).is_err());
        // absurd denominators error instead of exhausting memory
        let huge = ExtendedRational::new(1u64, 100_000_000_000u64).unwrap();
        assert!(matches!(relator(&huge), Err(Error::TooLarge(_))));
    }

    #[test]
    fn relator_shape() {
        for p in 1u64..=60 {
            for q in 1..=p {
                if num_integer::gcd(p, q) != 1 {
                    continue;
                }
                let u = relator(&ExtendedRational::new(q, p).unwrap()).unwrap();
                assert_eq!(u.len(), 2 * p as usize, "length at {q}/{p}");
                let first = u.letters()[0];
                assert_eq!((first.gen, first.positive), (Gen::A, true));
                let cu = CyclicWord::new(u.clone());
                assert_eq!(cu.len(), u.len(), "relator not cyclically reduced");
                assert!(cu.is_alternating(), "relator not alternating at {q}/{p}");
                // hat letter exponents follow e_i = (-1)^floor(iq/p)
                for i in 1..p {
                    let expected_positive = (i * q / p) % 2 == 0;
                    assert_eq!(
                        u.letters()[i as usize].positive,
                        expected_positive,
                        "exponent at position {i} of {q}/{p}"
                    );
                }
            }
        }
    }

    #[test]
    fn free_reduction() {
        assert_eq!(w("abBa").to_string(), "aa");
        assert_eq!(w(""), Word::empty());
        assert_eq!(w("aA").len(), 0);
        // nested cancellation collapses fully
        assert_eq!(w("abBAba").to_string(), "ba");
    }

    #[test]
    fn cyclic_reduction() {
        let c = CyclicWord::new(w("Babb"));
        assert_eq!(c, CyclicWord::new(w("ab")));
        assert_eq!(CyclicWord::new(w("aA")).len(), 0);
        assert_eq!(CyclicWord::new(w("baB")).rep().to_string(), "a");
    }

    #[test]
    fn alternation() {
        assert!(CyclicWord::new(w("abAB")).is_alternating());
        assert!(!CyclicWord::new(w("aba")).is_alternating());
        let u = relator(&ExtendedRational::ratio(2, 5)).unwrap();
        assert!(CyclicWord::new(u).is_alternating());
    }

    #[test]
    fn flip_examples() {
        assert_eq!(w("abAB").flip_b().to_string(), "aBAb");
        let u = relator(&ExtendedRational::ratio(2, 5)).unwrap();
        assert_eq!(u.flip_b().flip_b(), u);
    }

    #[test]
    fn flip_relates_complementary_slopes() {
        // 3/5 = 1 - 2/5; the flip carries one relator to the other up to
        // rotation and inversion
        let u25 = CyclicWord::new(relator(&ExtendedRational::ratio(2, 5)).unwrap().flip_b());
        let u35 = CyclicWord::new(relator(&ExtendedRational::ratio(3, 5)).unwrap());
        assert!(u25 == u35 || u25 == u35.inverse());
    }

    #[test]
    fn cyclic_equality() {
        assert_eq!(CyclicWord::new(w("ab")), CyclicWord::new(w("ba")));
        assert_ne!(CyclicWord::new(w("ab")), CyclicWord::new(w("aB")));
        let u = CyclicWord::new(relator(&ExtendedRational::ratio(2, 5)).unwrap());
        assert_eq!(u, u.rotated(3));
    }

    #[test]
    fn canonical_rotation_least_under_letter_order() {
        assert_eq!(CyclicWord::new(w("bA")).canonical().to_string(), "Ab");
        assert_eq!(CyclicWord::new(w("ba")).canonical().to_string(), "ab");
        // a < A < b < B
        assert!(Letter::from_char('a').unwrap() < Letter::from_char('A').unwrap());
        assert!(Letter::from_char('A').unwrap() < Letter::from_char('b').unwrap());
        assert!(Letter::from_char('b').unwrap() < Letter::from_char('B').unwrap());
    }

    #[test]
    fn inverse_not_identified_with_word() {
        let u = CyclicWord::new(relator(&ExtendedRational::ratio(2, 5)).unwrap());
        assert_ne!(u, u.inverse());
    }
}
