//! Small helpers for sequences considered modulo rotation.
//!
//! Shared by the word and S-sequence modules; sizes are tiny (a relator has
//! length `2p`), so the quadratic canonicalization is deliberate.

/// Index of the lexicographically least rotation of `xs`.
pub(crate) fn least_rotation_index<T: Ord>(xs: &[T]) -> usize {
    let n = xs.len();
    if n == 0 {
        return 0;
    }
    let mut best = 0;
    for start in 1..n {
        for j in 0..n {
            let a = &xs[(start + j) % n];
            let b = &xs[(best + j) % n];
            match a.cmp(b) {
                std::cmp::Ordering::Less => {
                    best = start;
                    break;
                }
                std::cmp::Ordering::Greater => break,
                std::cmp::Ordering::Equal => {}
            }
        }
    }
    best
}

pub(crate) fn rotated<T: Clone>(xs: &[T], k: usize) -> Vec<T> {
    let n = xs.len();
    if n == 0 {
        return Vec::new();
    }
    let k = k % n;
    let mut out = Vec::with_capacity(n);
    out.extend_from_slice(&xs[k..]);
    out.extend_from_slice(&xs[..k]);
    out
}

/// Equality up to rotation.
pub(crate) fn cyclic_eq<T: Eq>(a: &[T], b: &[T]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let n = a.len();
    (0..n).any(|s| (0..n).all(|j| a[(s + j) % n] == b[j]))
}

/// Number of rotations of `cycle` that start with `pattern` as a prefix.
/// Patterns longer than the cycle never match.
pub(crate) fn count_cyclic_matches<T: Eq>(cycle: &[T], pattern: &[T]) -> usize {
    let n = cycle.len();
    if pattern.is_empty() || pattern.len() > n {
        return 0;
    }
    (0..n)
        .filter(|&s| (0..pattern.len()).all(|j| cycle[(s + j) % n] == pattern[j]))
        .count()
}
