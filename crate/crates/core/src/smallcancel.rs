//! Small cancellation conditions C(4) and T(4) for the symmetrized
//! one-relator presentation `<a, b | u_r>`.
//!
//! A piece is a common prefix of two distinct elements of the symmetrized
//! set (the closure of the relator under inversion and cyclic permutation;
//! different offsets of the same relator are different elements). C(4)
//! holds when no element is a concatenation of fewer than 4 pieces; T(4)
//! when no ordered triple, none adjacent to an inverse pair, cancels at
//! all three junctions.

use crate::cyclic;
use crate::error::Error;
use crate::rational::ExtendedRational;
use crate::word::{relator, CyclicWord, Letter, Word};

/// The closure of a cyclically reduced word under inversion and rotation,
/// deduplicated. All elements share one length.
#[derive(Clone, Debug)]
pub struct SymmetrizedSet {
    words: Vec<Word>, // sorted
}

impl SymmetrizedSet {
    /// All cyclic permutations of `u` and of `u^-1`.
    pub fn symmetrize(u: &Word) -> Result<Self, Error> {
        if u.is_empty() || !u.is_cyclically_reduced() {
            return Err(Error::NotCyclicallyReduced);
        }
        let mut words = Vec::with_capacity(2 * u.len());
        for w in [u.clone(), u.inverse()] {
            let ls = w.letters();
            for k in 0..ls.len() {
                words.push(Word::new(cyclic::rotated(ls, k)));
            }
        }
        words.sort();
        words.dedup();
        Ok(SymmetrizedSet { words })
    }

    pub fn relators(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.binary_search(w).is_ok()
    }

    fn index_of(&self, w: &Word) -> Option<usize> {
        self.words.binary_search(w).ok()
    }

    /// Longest prefix of `w` rotated to start at `i` that is also a prefix
    /// of a different element of the set. Rotations of `w` itself count as
    /// different elements.
    pub fn max_piece_prefix(&self, w: &Word, i: usize) -> usize {
        let v = Word::new(cyclic::rotated(w.letters(), i));
        self.words
            .iter()
            .filter(|y| **y != v)
            .map(|y| lcp(v.letters(), y.letters()))
            .max()
            .unwrap_or(0)
    }

    /// Longest piece starting at each element, exploiting sorted order:
    /// the best common prefix of a word is with one of its sorted
    /// neighbors.
    fn piece_lengths(&self) -> Vec<usize> {
        let n = self.words.len();
        (0..n)
            .map(|i| {
                let mut best = 0;
                if i > 0 {
                    best = best.max(lcp(self.words[i - 1].letters(), self.words[i].letters()));
                }
                if i + 1 < n {
                    best = best.max(lcp(self.words[i].letters(), self.words[i + 1].letters()));
                }
                best
            })
            .collect()
    }

    /// Index of each element's rotation by one letter.
    fn rotation_step(&self) -> Vec<usize> {
        self.words
            .iter()
            .map(|w| {
                let r = Word::new(cyclic::rotated(w.letters(), 1));
                self.index_of(&r).expect("set is rotation-closed")
            })
            .collect()
    }

    /// Minimal number of pieces whose concatenation is `w`, or `None` when
    /// no decomposition into pieces exists at all.
    pub fn min_pieces(&self, w: &Word) -> Option<usize> {
        let idx = self.index_of(w)?;
        let pieces = self.piece_lengths();
        let step = self.rotation_step();
        self.min_pieces_at(idx, &pieces, &step)
    }

    fn min_pieces_at(&self, idx: usize, pieces: &[usize], step: &[usize]) -> Option<usize> {
        let n = self.words[idx].len();
        // max piece length starting at offset i of this element
        let mut avail = Vec::with_capacity(n);
        let mut cur = idx;
        for i in 0..n {
            avail.push(pieces[cur].min(n - i));
            cur = step[cur];
        }
        // dp over suffixes
        const INF: usize = usize::MAX;
        let mut f = vec![INF; n + 1];
        f[n] = 0;
        for i in (0..n).rev() {
            let mut best = INF;
            for l in 1..=avail[i] {
                if f[i + l] != INF {
                    best = best.min(f[i + l] + 1);
                }
            }
            f[i] = best;
        }
        (f[0] != INF).then_some(f[0])
    }

    /// T(4) by the cancellation-adjacency matrix: a failing triple is a
    /// directed triangle in the graph `x -> y` iff `xy` cancels, avoiding
    /// the excluded inverse pairs.
    pub fn t4_by_adjacency(&self) -> bool {
        let n = self.words.len();
        let inv: Vec<usize> = self
            .words
            .iter()
            .map(|w| self.index_of(&w.inverse()).expect("set is inversion-closed"))
            .collect();
        let words_per_row = n.div_ceil(64);
        // out[x] = bitset of y with "last of x cancels first of y"
        let mut out = vec![vec![0u64; words_per_row]; n];
        let mut into = vec![vec![0u64; words_per_row]; n];
        for x in 0..n {
            let lx = *self.words[x].letters().last().unwrap();
            for y in 0..n {
                let fy = self.words[y].letters()[0];
                if lx.cancels(fy) {
                    out[x][y / 64] |= 1 << (y % 64);
                    into[y][x / 64] |= 1 << (x % 64);
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                if out[x][y / 64] & (1 << (y % 64)) == 0 || y == inv[x] {
                    continue;
                }
                // z with y -> z and z -> x, z not inv(y), z not inv(x)
                for wi in 0..words_per_row {
                    let mut zs = out[y][wi] & into[x][wi];
                    while zs != 0 {
                        let z = wi * 64 + zs.trailing_zeros() as usize;
                        zs &= zs - 1;
                        if z != inv[y] && z != inv[x] {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// T(4) by literal enumeration of triples, reducing each junction
    /// product. Reference oracle for `t4_by_adjacency`.
    pub fn t4_by_enumeration(&self) -> bool {
        let n = self.words.len();
        let reduced = |x: &Word, y: &Word| {
            let joined = Word::new(x.letters().iter().chain(y.letters()).copied());
            joined.len() == x.len() + y.len()
        };
        for i in 0..n {
            for j in 0..n {
                if self.words[j] == self.words[i].inverse() {
                    continue;
                }
                for k in 0..n {
                    if self.words[k] == self.words[j].inverse()
                        || self.words[i] == self.words[k].inverse()
                    {
                        continue;
                    }
                    if !reduced(&self.words[i], &self.words[j])
                        && !reduced(&self.words[j], &self.words[k])
                        && !reduced(&self.words[k], &self.words[i])
                    {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn lcp(a: &[Letter], b: &[Letter]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Outcome of the piece analysis for one slope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceReport {
    pub max_piece_length: usize,
    /// `None` when some relator admits no decomposition into pieces;
    /// never the case for a genuine slope.
    pub min_pieces_per_relator: Option<usize>,
    pub c4: bool,
    pub t4: bool,
}

fn analyze(r: &ExtendedRational) -> Result<PieceReport, Error> {
    if !r.is_slope() || *r == ExtendedRational::one() {
        return Err(Error::SlopeOutOfRange(format!(
            "small cancellation check needs 0 < r < 1, got {r}"
        )));
    }
    // the symmetrized set holds about 8p^2 letters
    let (_, p) = r.small_parts()?;
    if p > 2000 {
        return Err(Error::TooLarge(format!(
            "small cancellation check supports denominators up to 2000, got {p}"
        )));
    }
    let u = relator(r)?;
    debug_assert!(CyclicWord::new(u.clone()).len() == u.len());
    let set = SymmetrizedSet::symmetrize(&u)?;
    let pieces = set.piece_lengths();
    let step = set.rotation_step();
    let max_piece_length = pieces.iter().copied().max().unwrap_or(0);
    // an element with no piece decomposition never lowers the minimum
    let min_pieces = (0..set.len())
        .filter_map(|idx| set.min_pieces_at(idx, &pieces, &step))
        .min();
    Ok(PieceReport {
        max_piece_length,
        min_pieces_per_relator: min_pieces,
        c4: min_pieces.is_none_or(|m| m >= 4),
        t4: set.t4_by_adjacency(),
    })
}

/// Verify C(4) for the symmetrized presentation of slope `r`, `0 < r < 1`.
pub fn check_c4(r: &ExtendedRational) -> Result<PieceReport, Error> {
    analyze(r)
}

/// Verify T(4) for the symmetrized presentation of slope `r`, `0 < r < 1`.
pub fn check_t4(r: &ExtendedRational) -> Result<PieceReport, Error> {
    analyze(r)
}
