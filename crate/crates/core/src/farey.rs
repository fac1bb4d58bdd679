//! Reflection groups on the boundary of the Farey tessellation and the
//! null-homotopy decision.
//!
//! For a slope `r` in `(0, 1)`, the group generated by reflections in the
//! Farey edges at `r` together with the reflections at infinity has a
//! fundamental set on the boundary: `I1 = [0, r1]`, `I2 = [r2, 1]`, and the
//! two vertices `infinity` and `r`. Reducing a slope `s` into that set
//! decides whether the simple loop of slope `s` is null-homotopic in the
//! link complement of slope `r`: it is exactly when the reduction lands on
//! `infinity` or `r`.
//!
//! The deterministic reduction walks `s` through the four walls of the
//! fundamental domain. A breadth-first orbit search over a denominator-capped
//! state space serves as an independent oracle for it.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::Error;
use crate::rational::{is_farey_neighbor, ContinuedFraction, ExtendedRational};

/// A 2x2 integer matrix of determinant -1 and trace 0, acting on slopes by
/// the Möbius action. Every such matrix is an involution; the ones built
/// here fix the two endpoints of a Farey edge.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReflectionMatrix {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl ReflectionMatrix {
    /// Reflection in the Farey edge spanned by `v1 = q/p` and `v2 = c/d`:
    /// `[[qd+pc, -2qc], [2pd, -(qd+pc)]]`. Rejects non-neighbors.
    pub fn in_edge(v1: &ExtendedRational, v2: &ExtendedRational) -> Result<Self, Error> {
        if !is_farey_neighbor(v1, v2) {
            return Err(Error::NotFareyNeighbors(v1.to_string(), v2.to_string()));
        }
        let (q, p) = (v1.numer(), v1.denom());
        let (c, d) = (v2.numer(), v2.denom());
        let diag = q * d + p * c;
        let m = ReflectionMatrix {
            a: diag.clone(),
            b: BigInt::from(-2) * (q * c),
            c: BigInt::from(2) * (p * d),
            d: -diag,
        };
        debug_assert!((&m.a * &m.d - &m.b * &m.c) == BigInt::from(-1));
        Ok(m)
    }

    /// Reflection `x -> 2k - x` in the edge from infinity to the integer `k`.
    pub fn gamma_inf(k: impl Into<BigInt>) -> Self {
        let v2 = ExtendedRational::new(k, 1).expect("integer vertex");
        Self::in_edge(&ExtendedRational::infinity(), &v2).expect("(inf, k) is always an edge")
    }

    /// Möbius action `n/d -> (a n + b d)/(c n + d d)`, renormalized.
    pub fn apply(&self, s: &ExtendedRational) -> ExtendedRational {
        let n = &self.a * s.numer() + &self.b * s.denom();
        let d = &self.c * s.numer() + &self.d * s.denom();
        ExtendedRational::new(n, d).expect("nonsingular matrix image")
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    /// Rows as `[[a, b], [c, d]]`.
    pub fn entries(&self) -> [[BigInt; 2]; 2] {
        [
            [self.a.clone(), self.b.clone()],
            [self.c.clone(), self.d.clone()],
        ]
    }
}

impl fmt::Display for ReflectionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

/// The endpoint data of a slope's fundamental set.
struct Fundamental {
    r: ExtendedRational,
    r1: ExtendedRational,
    r2: ExtendedRational,
}

impl Fundamental {
    fn for_slope(r: &ExtendedRational) -> Result<Self, Error> {
        if !r.is_slope() || *r == ExtendedRational::one() {
            return Err(Error::SlopeOutOfRange(format!(
                "orbit reduction needs 0 < r < 1, got {r}"
            )));
        }
        let cf = ContinuedFraction::expand(r)?;
        let (r1, r2) = cf.interval_endpoints()?;
        Ok(Fundamental {
            r: r.clone(),
            r1,
            r2,
        })
    }

    /// Membership in `I1 ∪ I2 ∪ {infinity, r}`.
    fn contains(&self, s: &ExtendedRational) -> bool {
        if s.is_infinite() || *s == self.r {
            return true;
        }
        let zero = ExtendedRational::zero();
        let one = ExtendedRational::one();
        (zero <= *s && *s <= self.r1) || (self.r2 <= *s && *s <= one)
    }
}

/// Outcome of an orbit reduction: where the input landed and the
/// reflections that took it there, in application order.
#[derive(Clone, Debug)]
pub struct OrbitResult {
    pub canonical: ExtendedRational,
    pub trail: Vec<ReflectionMatrix>,
}

impl OrbitResult {
    /// Re-apply the trail to `s`; reproduces `canonical` by construction.
    pub fn replay(&self, s: &ExtendedRational) -> ExtendedRational {
        self.trail.iter().fold(s.clone(), |x, m| m.apply(&x))
    }
}

/// Reflect `s` into `[0, 1] ∪ {infinity}` using reflections at infinity.
/// At most three reflections are ever needed.
pub fn normalize_mod_gamma_inf(
    s: &ExtendedRational,
) -> (ExtendedRational, Vec<ReflectionMatrix>) {
    if s.is_infinite() {
        return (s.clone(), Vec::new());
    }
    let mut cur = s.clone();
    let mut trail = Vec::new();
    let zero = ExtendedRational::zero();
    let one = ExtendedRational::one();
    let mut push = |m: ReflectionMatrix, cur: &mut ExtendedRational| {
        *cur = m.apply(cur);
        trail.push(m);
    };
    if cur < zero {
        push(ReflectionMatrix::gamma_inf(0), &mut cur);
    }
    if cur > one {
        // x -> 2k - x with k = floor((x + 1)/2) lands in (-1, 1]
        let k = (cur.numer() + cur.denom()).div_floor(&(BigInt::from(2) * cur.denom()));
        push(ReflectionMatrix::gamma_inf(k), &mut cur);
        if cur < zero {
            push(ReflectionMatrix::gamma_inf(0), &mut cur);
        }
    }
    (cur, trail)
}

fn default_fuel(s: &ExtendedRational) -> u64 {
    (10 * s.denom().bits()).max(16)
}

/// Reduce `s` to its canonical representative in `I1 ∪ I2 ∪ {infinity, r}`.
///
/// Each round normalizes modulo the reflections at infinity and, if the
/// result still lies in `(r1, r2) \ {r}`, reflects across the Farey edge
/// `(r, r1)` or `(r, r2)` on the side of `s`. The iteration cap defaults to
/// ten times the bit length of the denominator of `s`; exhausting it is a
/// hard error, never a silently non-canonical answer.
pub fn reduce_to_fundamental(
    r: &ExtendedRational,
    s: &ExtendedRational,
) -> Result<OrbitResult, Error> {
    reduce_to_fundamental_with_fuel(r, s, default_fuel(s))
}

/// `reduce_to_fundamental` with an explicit reflection budget.
pub fn reduce_to_fundamental_with_fuel(
    r: &ExtendedRational,
    s: &ExtendedRational,
    fuel: u64,
) -> Result<OrbitResult, Error> {
    let fund = Fundamental::for_slope(r)?;
    let wall1 = ReflectionMatrix::in_edge(&fund.r, &fund.r1)?;
    let wall2 = ReflectionMatrix::in_edge(&fund.r, &fund.r2)?;
    let mut cur = s.clone();
    let mut trail = Vec::new();
    let mut left = fuel;
    loop {
        let (normalized, steps) = normalize_mod_gamma_inf(&cur);
        cur = normalized;
        trail.extend(steps);
        if fund.contains(&cur) {
            return Ok(OrbitResult {
                canonical: cur,
                trail,
            });
        }
        if left == 0 {
            return Err(Error::FuelExhausted(fuel));
        }
        left -= 1;
        let wall = if cur < fund.r { &wall1 } else { &wall2 };
        cur = wall.apply(&cur);
        trail.push(wall.clone());
    }
}

/// Whether the loop of slope `s` is null-homotopic in the complement of
/// the link of slope `r`: exactly when the reduction lands on `infinity`
/// or on `r`.
pub fn is_null_homotopic(r: &ExtendedRational, s: &ExtendedRational) -> Result<bool, Error> {
    let result = reduce_to_fundamental(r, s)?;
    Ok(result.canonical.is_infinite() || result.canonical == *r)
}

// ---------------------------------------------------------------------------
// Breadth-first orbit oracle
// ---------------------------------------------------------------------------

/// Value window kept by the pruned search, as multiples of the denominator.
/// Wide enough to let the reflections at infinity walk any kept value back
/// into `[0, 1]` without leaving the window.
const WINDOW_LO: i64 = -4;
const WINDOW_HI: i64 = 5;

/// Bounds that keep every intermediate product of the search inside i64.
const ORACLE_MAX_CAP: u64 = 100_000;
const ORACLE_MAX_DEN: u64 = 10_000;

type State = (i64, i64);

/// Visited-state store: a flat table when the cap is small enough for one,
/// a hash map otherwise. Keys come pre-packed into u64.
enum Visited {
    Dense(Vec<u32>),
    Sparse(HashMap<u64, u32>),
}

const UNSEEN: u32 = u32::MAX;

impl Visited {
    fn for_cap(cap: i64) -> Visited {
        let span = (WINDOW_HI - WINDOW_LO) as usize * (cap as usize + 1) + 2;
        let slots = span * (cap as usize + 2);
        if slots <= 32_000_000 {
            Visited::Dense(vec![UNSEEN; slots])
        } else {
            Visited::Sparse(HashMap::new())
        }
    }

    fn get(&self, key: u64) -> Option<u32> {
        match self {
            Visited::Dense(t) => {
                let v = t[key as usize];
                (v != UNSEEN).then_some(v)
            }
            Visited::Sparse(m) => m.get(&key).copied(),
        }
    }

    fn insert(&mut self, key: u64, comp: u32) {
        match self {
            Visited::Dense(t) => t[key as usize] = comp,
            Visited::Sparse(m) => {
                m.insert(key, comp);
            }
        }
    }
}

/// Independent check of the orbit reduction: a breadth-first closure of a
/// start slope under the reflections `x -> -x`, `x -> 2 - x`, and the
/// reflections in every Farey edge at `r` with denominator at most `cap`,
/// pruned at that denominator cap. Conservative: pruning can lose the
/// canonical representative (then the search reports unknown), but a found
/// representative is genuinely in the orbit.
///
/// Explored components are memoized, so sweeping many start slopes against
/// one `r` does not repeat work.
pub struct OrbitOracle {
    fund_r: State,
    fund_r1: State,
    fund_r2: State,
    cap: i64,
    gens: Vec<[i64; 4]>,
    visited: Visited,
    results: Vec<Option<State>>,
}

impl OrbitOracle {
    pub fn new(r: &ExtendedRational, cap: u64) -> Result<Self, Error> {
        let fund = Fundamental::for_slope(r)?;
        let (q, p) = r.small_parts()?;
        if p > ORACLE_MAX_DEN || cap > ORACLE_MAX_CAP {
            return Err(Error::TooLarge(format!(
                "orbit oracle supports slope denominators up to {ORACLE_MAX_DEN} \
                 and caps up to {ORACLE_MAX_CAP}"
            )));
        }
        if cap < p {
            return Err(Error::TooLarge(format!(
                "oracle cap {cap} is below the denominator of r = {r}"
            )));
        }
        let (q, p) = (q as i64, p as i64);
        let cap = cap as i64;

        let mut gens = vec![
            // x -> -x and x -> 2 - x
            [1, 0, 0, -1],
            [1, -2, 0, -1],
        ];
        // reflections in the edges (r, v), v = c/d a neighbor with d <= cap:
        // q d - p c = ±1, i.e. d = ±q^{-1} (mod p)
        let q_inv = mod_inverse(q, p);
        for sign in [1i64, -1] {
            let d0 = (sign * q_inv).rem_euclid(p);
            let mut d = if d0 == 0 { p } else { d0 };
            while d <= cap {
                let c = (q * d - sign) / p;
                let diag = q * d + p * c;
                gens.push([diag, -2 * q * c, 2 * p * d, -diag]);
                d += p;
            }
        }

        Ok(OrbitOracle {
            fund_r: state_of(&fund.r),
            fund_r1: state_of(&fund.r1),
            fund_r2: state_of(&fund.r2),
            cap,
            gens,
            visited: Visited::for_cap(cap),
            results: Vec::new(),
        })
    }

    fn keep(&self, (n, d): State) -> bool {
        if d == 0 {
            return true;
        }
        d <= self.cap && WINDOW_LO * (d + 1) <= n && n <= WINDOW_HI * (d + 1)
    }

    /// Kept states pack injectively into a u64.
    fn key(&self, (n, d): State) -> u64 {
        debug_assert!(self.keep((n, d)));
        let shifted = (n - WINDOW_LO * (self.cap + 1)) as u64;
        shifted * (self.cap as u64 + 2) + d as u64
    }

    fn is_canonical(&self, (n, d): State) -> bool {
        if d == 0 {
            return true;
        }
        if (n, d) == self.fund_r {
            return true;
        }
        let le = |(a, b): State, (c, e): State| a * e <= c * b;
        // [0, r1] or [r2, 1]
        (0 <= n && le((n, d), self.fund_r1)) || (le(self.fund_r2, (n, d)) && n <= d)
    }

    /// The unique fundamental-set member of the (pruned) orbit of `s`, or
    /// `None` when the pruned search finds none.
    pub fn canonical(&mut self, s: &ExtendedRational) -> Result<Option<ExtendedRational>, Error> {
        let n = s
            .numer()
            .to_i64()
            .ok_or_else(|| Error::TooLarge(format!("oracle start {s}")))?;
        let d = s
            .denom()
            .to_i64()
            .ok_or_else(|| Error::TooLarge(format!("oracle start {s}")))?;
        if d > self.cap {
            return Err(Error::TooLarge(format!(
                "oracle cap {} is below the denominator of s = {s}",
                self.cap
            )));
        }
        let start: State = (n, d);
        if !self.keep(start) {
            return Ok(None);
        }
        if let Some(comp) = self.visited.get(self.key(start)) {
            return Ok(self.results[comp as usize].map(rational_of));
        }

        let comp = self.results.len() as u32;
        let mut found: Vec<State> = Vec::new();
        let mut queue = VecDeque::new();
        self.visited.insert(self.key(start), comp);
        queue.push_back(start);
        while let Some(st) = queue.pop_front() {
            if self.is_canonical(st) {
                found.push(st);
            }
            for g in &self.gens {
                let img = apply_state(g, st);
                if !self.keep(img) {
                    continue;
                }
                let key = self.key(img);
                if self.visited.get(key).is_some() {
                    continue;
                }
                self.visited.insert(key, comp);
                queue.push_back(img);
            }
        }
        assert!(
            found.len() <= 1,
            "orbit of {s} met the fundamental set more than once: {found:?}"
        );
        self.results.push(found.first().copied());
        Ok(found.first().copied().map(rational_of))
    }
}

/// One-shot form of [`OrbitOracle`].
pub fn orbit_bfs_oracle(
    r: &ExtendedRational,
    s: &ExtendedRational,
    cap: u64,
) -> Result<Option<ExtendedRational>, Error> {
    OrbitOracle::new(r, cap)?.canonical(s)
}

fn state_of(r: &ExtendedRational) -> State {
    (
        r.numer().to_i64().expect("small state"),
        r.denom().to_i64().expect("small state"),
    )
}

fn rational_of((n, d): State) -> ExtendedRational {
    ExtendedRational::new(n, d).expect("normalized state")
}

// No reduction step: a determinant ±1 matrix carries coprime pairs to
// coprime pairs, so sign normalization is all a state needs.
fn apply_state(g: &[i64; 4], (n, d): State) -> State {
    let num = g[0] * n + g[1] * d;
    let den = g[2] * n + g[3] * d;
    if den == 0 {
        return (1, 0);
    }
    if den < 0 {
        (-num, -den)
    } else {
        (num, den)
    }
}

/// Inverse of `a` modulo `m` for coprime inputs, in `[0, m)`.
fn mod_inverse(a: i64, m: i64) -> i64 {
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    debug_assert_eq!(old_r, 1, "inputs must be coprime");
    old_s.rem_euclid(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn rat(q: i64, p: i64) -> ExtendedRational {
        ExtendedRational::ratio(q, p)
    }

    fn inf() -> ExtendedRational {
        ExtendedRational::infinity()
    }

    fn edge(v1: &ExtendedRational, v2: &ExtendedRational) -> ReflectionMatrix {
        ReflectionMatrix::in_edge(v1, v2).unwrap()
    }

    fn entries_i64(m: &ReflectionMatrix) -> [[i64; 2]; 2] {
        let e = m.entries();
        let f = |x: &BigInt| x.to_i64().unwrap();
        [[f(&e[0][0]), f(&e[0][1])], [f(&e[1][0]), f(&e[1][1])]]
    }

    #[test]
    fn edge_matrices() {
        assert_eq!(
            entries_i64(&edge(&inf(), &ExtendedRational::zero())),
            [[1, 0], [0, -1]]
        );
        assert_eq!(
            entries_i64(&edge(&inf(), &ExtendedRational::one())),
            [[1, -2], [0, -1]]
        );
        assert_eq!(
            entries_i64(&edge(&rat(5, 17), &rat(2, 7))),
            [[69, -20], [238, -69]]
        );
        assert!(ReflectionMatrix::in_edge(&rat(2, 5), &rat(3, 5)).is_err());
    }

    #[test]
    fn matrix_structure() {
        for (v1, v2) in [
            (inf(), ExtendedRational::zero()),
            (inf(), rat(3, 1)),
            (rat(5, 17), rat(2, 7)),
            (rat(5, 17), rat(3, 10)),
            (rat(1, 2), rat(1, 3)),
        ] {
            let m = edge(&v1, &v2);
            assert_eq!(m.det(), BigInt::from(-1));
            assert_eq!(m.trace(), BigInt::zero());
            assert_eq!(m.apply(&v1), v1, "does not fix {v1}");
            assert_eq!(m.apply(&v2), v2, "does not fix {v2}");
            // involution
            let probe = rat(7, 24);
            assert_eq!(m.apply(&m.apply(&probe)), probe);
        }
    }

    #[test]
    fn mobius_examples() {
        let m = edge(&inf(), &ExtendedRational::one());
        assert_eq!(m.apply(&rat(5, 17)), rat(29, 17));
        let m = edge(&rat(5, 17), &rat(2, 7));
        assert_eq!(m.apply(&rat(7, 24)), rat(3, 10));
        assert_eq!(m.apply(&inf()), rat(69, 238));
    }

    #[test]
    fn normalization_examples() {
        let (s, trail) = normalize_mod_gamma_inf(&rat(-1, 3));
        assert_eq!(s, rat(1, 3));
        assert_eq!(trail.len(), 1);
        assert_eq!(entries_i64(&trail[0]), [[1, 0], [0, -1]]);

        let (s, trail) = normalize_mod_gamma_inf(&rat(7, 3));
        assert_eq!(s, rat(1, 3));
        assert_eq!(trail.len(), 2);

        let (s, trail) = normalize_mod_gamma_inf(&rat(5, 3));
        assert_eq!(s, rat(1, 3));
        assert_eq!(trail.len(), 1);

        // already normalized, and infinity
        assert_eq!(normalize_mod_gamma_inf(&rat(1, 3)).1.len(), 0);
        assert_eq!(normalize_mod_gamma_inf(&inf()).0, inf());
    }

    #[test]
    fn normalization_replays_and_stays_put() {
        for n in -25i64..=25 {
            for d in 1i64..=9 {
                let s = rat(n, d);
                let (out, trail) = normalize_mod_gamma_inf(&s);
                assert!(out >= ExtendedRational::zero() && out <= ExtendedRational::one());
                let replayed = trail.iter().fold(s.clone(), |x, m| m.apply(&x));
                assert_eq!(replayed, out);
            }
        }
    }

    #[test]
    fn reduction_spot_values() {
        let r = rat(5, 17);

        let res = reduce_to_fundamental(&r, &rat(7, 24)).unwrap();
        assert_eq!(res.canonical, rat(3, 10));
        assert_eq!(res.trail.len(), 1);
        assert_eq!(entries_i64(&res.trail[0]), [[69, -20], [238, -69]]);

        let res = reduce_to_fundamental(&r, &rat(69, 238)).unwrap();
        assert_eq!(res.canonical, inf());

        let res = reduce_to_fundamental(&r, &rat(8, 27)).unwrap();
        assert_eq!(res.canonical, rat(2, 7));
        assert_eq!(res.trail.len(), 1);
        assert_eq!(entries_i64(&res.trail[0]), [[101, -30], [340, -101]]);
    }

    #[test]
    fn reduction_replays_and_is_idempotent() {
        let r = rat(5, 17);
        for s in [rat(7, 24), rat(8, 27), rat(69, 238), rat(-13, 30), inf()] {
            let res = reduce_to_fundamental(&r, &s).unwrap();
            assert_eq!(res.replay(&s), res.canonical);
            let again = reduce_to_fundamental(&r, &res.canonical).unwrap();
            assert_eq!(again.canonical, res.canonical);
            assert!(again.trail.is_empty());
        }
    }

    #[test]
    fn reduction_rejects_bad_r_and_exhausted_fuel() {
        assert!(reduce_to_fundamental(&ExtendedRational::one(), &rat(1, 3)).is_err());
        assert!(reduce_to_fundamental(&inf(), &rat(1, 3)).is_err());
        assert!(matches!(
            reduce_to_fundamental_with_fuel(&rat(5, 17), &rat(7, 24), 0),
            Err(Error::FuelExhausted(0))
        ));
    }

    #[test]
    fn null_homotopy_examples() {
        let r = rat(5, 17);
        assert!(is_null_homotopic(&r, &rat(69, 238)).unwrap());
        assert!(!is_null_homotopic(&r, &rat(1, 3)).unwrap());
        assert!(is_null_homotopic(&r, &r).unwrap());
    }

    #[test]
    fn oracle_spot_values() {
        assert_eq!(
            orbit_bfs_oracle(&rat(5, 17), &rat(7, 24), 300).unwrap(),
            Some(rat(3, 10))
        );
        assert_eq!(
            orbit_bfs_oracle(&rat(5, 17), &rat(5, 17), 100).unwrap(),
            Some(rat(5, 17))
        );
        let reduced = reduce_to_fundamental(&rat(1, 2), &rat(3, 4)).unwrap();
        assert_eq!(
            orbit_bfs_oracle(&rat(1, 2), &rat(3, 4), 100).unwrap(),
            Some(reduced.canonical)
        );
    }

    #[test]
    fn oracle_respects_caps() {
        assert!(OrbitOracle::new(&rat(5, 17), 5).is_err());
        let mut oracle = OrbitOracle::new(&rat(5, 17), 30).unwrap();
        assert!(oracle.canonical(&rat(1, 40)).is_err());
    }

    #[test]
    fn oracle_memoizes_components() {
        let mut oracle = OrbitOracle::new(&rat(2, 5), 200).unwrap();
        let a = oracle.canonical(&rat(7, 24)).unwrap();
        let b = oracle.canonical(&rat(7, 24)).unwrap();
        assert_eq!(a, b);
        assert!(a.is_some());
    }

    #[test]
    fn state_application_preserves_coprimality() {
        use num_integer::Integer;
        let oracle = OrbitOracle::new(&rat(2, 5), 40).unwrap();
        for g in &oracle.gens {
            for n in -20i64..=20 {
                for d in 0i64..=10 {
                    if (n, d) == (0, 0) || n.gcd(&d) != 1 {
                        continue;
                    }
                    let (n2, d2) = apply_state(g, (n, d));
                    assert_eq!(n2.gcd(&d2), 1, "image of {n}/{d} under {g:?} not reduced");
                    assert!(d2 >= 0);
                }
            }
        }
    }
}
