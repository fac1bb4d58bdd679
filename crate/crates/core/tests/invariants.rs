//! Cross-module invariants: the word-level flip mechanism, structural
//! properties of cyclic comparisons, and reflection-matrix structure over
//! many edges. The per-statement verification sweeps live in the
//! acceptance suite.

use bridge_core::farey::{orbit_bfs_oracle, reduce_to_fundamental, ReflectionMatrix};
use bridge_core::rational::{is_farey_neighbor, ContinuedFraction, ExtendedRational};
use bridge_core::sseq::{count_cyclic_occurrences, CyclicSSequence, SSequence};
use bridge_core::word::{relator, CyclicWord, Gen, Letter, Word};
use proptest::prelude::*;

fn coprime_slopes(max_den: u64) -> Vec<ExtendedRational> {
    let mut out = Vec::new();
    for p in 1..=max_den {
        for q in 1..=p {
            if num_integer::gcd(p, q) == 1 {
                out.push(ExtendedRational::new(q, p).unwrap());
            }
        }
    }
    out
}

/// The flip automorphism carries the relator of the predecessor of any
/// slope with `m1 = 1` to the relator of the slope itself, up to rotation
/// and inversion.
#[test]
fn flip_connects_predecessor_relators() {
    for r in coprime_slopes(60) {
        if r == ExtendedRational::one() {
            continue;
        }
        let cf = ContinuedFraction::expand(&r).unwrap();
        if cf.first_term() != 1 {
            continue;
        }
        let pred = cf.predecessor().unwrap();
        let flipped = CyclicWord::new(relator(&pred.value()).unwrap().flip_b());
        let target = CyclicWord::new(relator(&r).unwrap());
        assert!(
            flipped == target || flipped == target.inverse(),
            "flip mechanism failed at {cf}"
        );
    }
}

/// Reflection matrices in edges at r: determinant -1, trace 0, involution,
/// and exactly the two edge endpoints fixed among nearby slopes.
#[test]
fn reflection_matrices_are_edge_reflections() {
    let probes = coprime_slopes(12);
    for r in coprime_slopes(9) {
        for v in &probes {
            if !is_farey_neighbor(&r, v) {
                continue;
            }
            let m = ReflectionMatrix::in_edge(&r, v).unwrap();
            assert_eq!(m.det(), (-1).into());
            assert_eq!(m.trace(), 0.into());
            assert_eq!(m.apply(&r), r);
            assert_eq!(m.apply(v), *v);
            for probe in &probes {
                let moved = m.apply(probe);
                assert_eq!(m.apply(&moved), *probe, "not an involution");
                if *probe != r && *probe != *v {
                    assert_ne!(moved, *probe, "extra fixed point at {probe}");
                }
            }
        }
    }
}

/// Lighter companion to the acceptance orbit sweep: the fifth sample slope
/// with a smaller state cap.
#[test]
fn oracle_agrees_for_one_third() {
    let r = ExtendedRational::ratio(1, 3);
    let mut oracle = bridge_core::farey::OrbitOracle::new(&r, 300).unwrap();
    let mut known = 0usize;
    for s in coprime_slopes(30) {
        let reduced = reduce_to_fundamental(&r, &s).unwrap();
        if let Some(c) = oracle.canonical(&s).unwrap() {
            assert_eq!(c, reduced.canonical, "oracle disagrees at s = {s}");
            known += 1;
        }
    }
    assert!(known > 200, "oracle resolved only {known} cases");
}

#[test]
fn one_shot_oracle_matches_reduction() {
    let r = ExtendedRational::ratio(2, 5);
    for s in coprime_slopes(12) {
        if let Some(c) = orbit_bfs_oracle(&r, &s, 200).unwrap() {
            assert_eq!(c, reduce_to_fundamental(&r, &s).unwrap().canonical);
        }
    }
}

/// Any length-3 word in the fundamental-domain generators moves a slope
/// within its orbit, so the canonical value is unchanged.
#[test]
fn reduction_invariant_under_generator_words() {
    let r = ExtendedRational::ratio(5, 17);
    let cf = ContinuedFraction::expand(&r).unwrap();
    let (r1, r2) = cf.interval_endpoints().unwrap();
    let gens = [
        ReflectionMatrix::gamma_inf(0),
        ReflectionMatrix::gamma_inf(1),
        ReflectionMatrix::in_edge(&r, &r1).unwrap(),
        ReflectionMatrix::in_edge(&r, &r2).unwrap(),
    ];
    for s in coprime_slopes(9) {
        let base = reduce_to_fundamental(&r, &s).unwrap().canonical;
        for a in &gens {
            for b in &gens {
                for c in &gens {
                    let moved = c.apply(&b.apply(&a.apply(&s)));
                    let got = reduce_to_fundamental(&r, &moved).unwrap().canonical;
                    assert_eq!(got, base, "moved {s} -> {moved}");
                }
            }
        }
    }
}

/// Reflections at infinity normalize values of any size in one jump.
#[test]
fn normalization_handles_big_values() {
    let big: ExtendedRational = "123456789123456789123456789/7".parse().unwrap();
    let (out, trail) = bridge_core::farey::normalize_mod_gamma_inf(&big);
    assert!(out >= ExtendedRational::zero() && out <= ExtendedRational::one());
    assert!(trail.len() <= 3);
    let replayed = trail.iter().fold(big, |x, m| m.apply(&x));
    assert_eq!(replayed, out);
}

fn arb_letter() -> impl Strategy<Value = Letter> {
    (any::<bool>(), any::<bool>()).prop_map(|(g, s)| {
        Letter::new(if g { Gen::A } else { Gen::B }, s)
    })
}

fn arb_word(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(arb_letter(), 0..max_len).prop_map(Word::new)
}

proptest! {
    /// Free reduction leaves no cancelling pair and is idempotent.
    #[test]
    fn free_reduction_is_reduced(w in arb_word(40)) {
        prop_assert!(w.letters().windows(2).all(|p| !p[0].cancels(p[1])));
        prop_assert_eq!(Word::new(w.letters().to_vec()), w);
    }

    #[test]
    fn flip_is_an_involution(w in arb_word(40)) {
        prop_assert_eq!(w.flip_b().flip_b(), w);
    }

    /// Cyclic equality is rotation-invariant and symmetric; canonical
    /// forms agree exactly on equal cyclic words.
    #[test]
    fn cyclic_equality_laws(w in arb_word(30), k in 0usize..30) {
        let c = CyclicWord::new(w);
        let rot = c.rotated(k);
        prop_assert_eq!(&rot, &c);
        prop_assert_eq!(rot.canonical(), c.canonical());
    }

    /// Occurrence counting is invariant under rotating the cycle.
    #[test]
    fn occurrence_count_rotation_invariant(
        terms in prop::collection::vec(1u64..5, 1..12),
        pat in prop::collection::vec(1u64..5, 1..4),
        k in 0usize..12,
    ) {
        let cs = CyclicSSequence::new(SSequence::new(terms).unwrap());
        let pat = SSequence::new(pat).unwrap();
        let a = count_cyclic_occurrences(&cs, &pat).unwrap();
        let b = count_cyclic_occurrences(&cs.rotated(k), &pat).unwrap();
        prop_assert_eq!(a, b);
    }

    /// The well-ordering matches the (length, lexicographic) model.
    #[test]
    fn precedes_matches_model(
        xs in prop::collection::vec(1u64..6, 1..5),
        ys in prop::collection::vec(1u64..6, 1..5),
    ) {
        let fix = |mut t: Vec<u64>| {
            if t.len() > 1 && *t.last().unwrap() < 2 {
                *t.last_mut().unwrap() = 2;
            }
            ContinuedFraction::new(t).unwrap()
        };
        let x = fix(xs);
        let y = fix(ys);
        let model = (x.len(), x.terms()) <= (y.len(), y.terms());
        prop_assert_eq!(x.precedes(&y), model);
    }

    /// Inversion reverses the cyclic S-sequence.
    #[test]
    fn inverse_reverses_runs(w in arb_word(30)) {
        let c = CyclicWord::new(w);
        prop_assume!(!c.is_empty());
        let runs = bridge_core::sseq::cyclic_s_sequence(&c);
        let inv_runs = bridge_core::sseq::cyclic_s_sequence(&c.inverse());
        prop_assert_eq!(inv_runs, runs.reversed());
    }
}
