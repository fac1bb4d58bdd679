//! Named verification sweeps over slope ranges.
//!
//! Each property re-checks one statement family across every slope with
//! denominator up to a bound, in a fixed enumeration order (increasing
//! denominator, then increasing numerator). Sweeps over independent slopes
//! fan out across a rayon pool; `BRIDGE_CANCEL_THREADS` caps the workers.

use bridge_core::farey::{
    is_null_homotopic, reduce_to_fundamental, OrbitOracle, ReflectionMatrix,
};
use bridge_core::rational::{is_farey_neighbor, ContinuedFraction, ExtendedRational};
use bridge_core::smallcancel::{check_c4, check_t4, SymmetrizedSet};
use bridge_core::sseq::{
    connection_conditions, contains_pattern, count_cyclic_occurrences, cyclic_slope_sseq,
    decompose, in_open_interval, recurrence_flip, recurrence_up, s_sequence, slope_sseq,
};
use bridge_core::word::{relator, CyclicWord};
use bridge_core::Error;
use rayon::prelude::*;

pub struct VerifyOptions {
    pub max_denominator: u64,
    pub sample_r: Vec<String>,
    pub fuel: Option<u64>,
    pub bfs_cap: u64,
}

#[derive(Clone, Debug)]
pub struct Failure {
    pub case: String,
    pub detail: String,
}

#[derive(Debug)]
pub struct VerificationReport {
    pub property: String,
    pub range: String,
    pub cases: usize,
    pub failures: Vec<Failure>,
}

pub const PROPERTIES: &[(&str, &str)] = &[
    ("duality", "relator-read and closed-form S-sequences agree"),
    ("half-rotation", "S(r) has length 2q and is half-rotation invariant"),
    ("term-structure", "CS(r) is ((m1,m1)) or made of m1 and m1+1"),
    ("recurrence", "predecessor recurrences rebuild CS(r)"),
    ("flip", "the b-flip carries predecessor relators to relators"),
    ("decomposition", "((S1,S2,S1,S2)) structure and occurrence counts"),
    ("c4t4", "small cancellation conditions C(4) and T(4)"),
    ("t4-oracle", "adjacency-matrix T(4) equals naive enumeration"),
    ("connection", "connection conditions = open interval = pattern test"),
    ("endpoints", "interval endpoints bracket r as Farey neighbors"),
    ("orbit", "orbit reduction: membership, idempotence, oracle agreement"),
    ("nullhomotopy", "null-homotopic implies pattern; I1, I2 never null"),
];

pub fn known_property(name: &str) -> bool {
    name == "all" || PROPERTIES.iter().any(|(n, _)| *n == name)
}

pub fn run_property(name: &str, opts: &VerifyOptions) -> Result<VerificationReport, Error> {
    match name {
        "duality" => sweep_slopes(name, opts, check_duality),
        "half-rotation" => sweep_slopes(name, opts, check_half_rotation),
        "term-structure" => sweep_slopes(name, opts, check_term_structure),
        "recurrence" => sweep_slopes(name, opts, check_recurrence),
        "flip" => sweep_slopes(name, opts, check_flip),
        "decomposition" => sweep_slopes(name, opts, check_decomposition),
        "c4t4" => sweep_slopes(name, opts, check_c4t4),
        "t4-oracle" => sweep_slopes(name, opts, check_t4_oracle),
        "endpoints" => sweep_slopes(name, opts, check_endpoints),
        "connection" => connection_sweep(opts),
        "orbit" => orbit_sweep(opts),
        "nullhomotopy" => null_homotopy_sweep(opts),
        other => Err(Error::Parse(format!("unknown property `{other}`"))),
    }
}

/// Slopes in `(0, 1]` by increasing denominator, then numerator.
fn slopes_up_to(max_den: u64) -> Vec<ExtendedRational> {
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

fn small_parts(r: &ExtendedRational) -> (u64, u64) {
    let q = r.numer().try_into().expect("sweep slopes are small");
    let p = r.denom().try_into().expect("sweep slopes are small");
    (q, p)
}

fn pool() -> rayon::ThreadPool {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = std::env::var("BRIDGE_CANCEL_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
    {
        builder = builder.num_threads(n);
    }
    builder.build().expect("thread pool")
}

/// Fan a per-slope check over the slope range; failures keep enumeration
/// order regardless of scheduling.
fn sweep_slopes(
    name: &str,
    opts: &VerifyOptions,
    check: fn(&ExtendedRational) -> Option<String>,
) -> Result<VerificationReport, Error> {
    let slopes = slopes_up_to(opts.max_denominator);
    let mut failures: Vec<(usize, Failure)> = pool().install(|| {
        slopes
            .par_iter()
            .enumerate()
            .filter_map(|(i, r)| {
                check(r).map(|detail| {
                    (
                        i,
                        Failure {
                            case: format!("r={r}"),
                            detail,
                        },
                    )
                })
            })
            .collect()
    });
    failures.sort_by_key(|(i, _)| *i);
    Ok(VerificationReport {
        property: name.to_string(),
        range: format!("0 < q/p <= 1, p <= {}", opts.max_denominator),
        cases: slopes.len(),
        failures: failures.into_iter().map(|(_, f)| f).collect(),
    })
}

/// Inside a per-slope check, an operation error is itself a failure.
macro_rules! try_case {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return Some(format!("operation failed: {e}")),
        }
    };
}

fn check_duality(r: &ExtendedRational) -> Option<String> {
    let via_word = s_sequence(&try_case!(relator(r)));
    let via_formula = try_case!(slope_sseq(r));
    (via_word != via_formula)
        .then(|| format!("word route {via_word} != closed form {via_formula}"))
}

fn check_half_rotation(r: &ExtendedRational) -> Option<String> {
    let (q, p) = small_parts(r);
    let s = try_case!(slope_sseq(r));
    if s.len() != 2 * q as usize || s.sum() != 2 * p {
        return Some(format!("length {} or sum {} wrong", s.len(), s.sum()));
    }
    let t = s.terms();
    (0..q as usize)
        .find(|&j| t[j] != t[q as usize + j])
        .map(|j| format!("s_{} != s_{}", j + 1, q as usize + j + 1))
}

fn check_term_structure(r: &ExtendedRational) -> Option<String> {
    let cf = try_case!(ContinuedFraction::expand(r));
    let m1 = cf.first_term();
    let cs = try_case!(cyclic_slope_sseq(r));
    if cf.len() == 1 {
        return (cs.terms() != [m1, m1]).then(|| format!("CS = {cs}, expected (({m1},{m1}))"));
    }
    let low = cs.terms().iter().filter(|&&t| t == m1).count();
    let high = cs.terms().iter().filter(|&&t| t == m1 + 1).count();
    (low == 0 || high == 0 || low + high != cs.len())
        .then(|| format!("CS = {cs} not built from {m1} and {}", m1 + 1))
}

fn check_recurrence(r: &ExtendedRational) -> Option<String> {
    if *r == ExtendedRational::one() {
        return None;
    }
    let cf = try_case!(ContinuedFraction::expand(r));
    let pred = try_case!(cf.predecessor());
    let cs_pred = try_case!(cyclic_slope_sseq(&pred.value()));
    let cs = try_case!(cyclic_slope_sseq(r));
    if cf.first_term() >= 2 {
        (recurrence_up(&cs_pred) != cs).then(|| "up-recurrence mismatch".to_string())
    } else {
        match recurrence_flip(&cs_pred) {
            Ok((f, b)) => (f != cs && b != cs).then(|| "no flip candidate matches".to_string()),
            Err(e) => Some(format!("flip precondition failed: {e}")),
        }
    }
}

fn check_flip(r: &ExtendedRational) -> Option<String> {
    if *r == ExtendedRational::one() {
        return None;
    }
    let cf = try_case!(ContinuedFraction::expand(r));
    if cf.first_term() != 1 {
        return None;
    }
    let pred = try_case!(cf.predecessor());
    let flipped = CyclicWord::new(try_case!(relator(&pred.value())).flip_b());
    let target = CyclicWord::new(try_case!(relator(r)));
    (flipped != target && flipped != target.inverse())
        .then(|| "flip of predecessor relator matches neither u_r nor its inverse".to_string())
}

fn check_decomposition(r: &ExtendedRational) -> Option<String> {
    let cf = try_case!(ContinuedFraction::expand(r));
    let d = match decompose(&cf) {
        Ok(d) => d,
        Err(e) => return Some(format!("decompose failed: {e}")),
    };
    let (q, p) = small_parts(r);
    let m1 = cf.first_term();
    if !d.s1.is_palindromic() || !d.s2.is_palindromic() {
        return Some("block not palindromic".into());
    }
    if (cf.len() == 1) != d.s1.is_empty() {
        return Some("S1 emptiness wrong".into());
    }
    if !d.s1.is_empty()
        && (d.s1.terms()[0] != m1 + 1 || *d.s1.terms().last().unwrap() != m1 + 1)
    {
        return Some(format!("S1 = {} boundary wrong", d.s1));
    }
    if d.s2.is_empty() || d.s2.terms()[0] != m1 || *d.s2.terms().last().unwrap() != m1 {
        return Some(format!("S2 = {} boundary wrong", d.s2));
    }
    if d.s1.sum() + d.s2.sum() != p || (d.s1.len() + d.s2.len()) as u64 != q {
        return Some("accounting (sum p, length q) wrong".into());
    }
    let cs = try_case!(cyclic_slope_sseq(r));
    if d.cs() != cs {
        return Some("blocks do not rebuild CS(r)".into());
    }
    for (name, pat) in [
        ("S1", d.s1.clone()),
        ("S2", d.s2.clone()),
        ("(S1,S2)", d.s1.concat(&d.s2)),
        ("(S2,S1)", d.s2.concat(&d.s1)),
    ] {
        if pat.is_empty() {
            continue;
        }
        let n = try_case!(count_cyclic_occurrences(&cs, &pat));
        if n != 2 {
            return Some(format!("{name} occurs {n} times, expected 2"));
        }
    }
    None
}

fn check_c4t4(r: &ExtendedRational) -> Option<String> {
    if *r == ExtendedRational::one() {
        return None;
    }
    match (check_c4(r), check_t4(r)) {
        (Ok(c), Ok(t)) => {
            if !c.c4 {
                Some(format!("C(4) fails: min pieces {:?}", c.min_pieces_per_relator))
            } else if !t.t4 {
                Some("T(4) fails".into())
            } else {
                None
            }
        }
        (c, t) => Some(format!("checks errored: {c:?} {t:?}")),
    }
}

fn check_t4_oracle(r: &ExtendedRational) -> Option<String> {
    let (_, p) = small_parts(r);
    if *r == ExtendedRational::one() || p > 10 {
        return None; // the naive route is cubic; keep it at desk scale
    }
    let set = try_case!(SymmetrizedSet::symmetrize(&try_case!(relator(r))));
    (set.t4_by_adjacency() != set.t4_by_enumeration())
        .then(|| "adjacency and enumeration T(4) disagree".to_string())
}

fn check_endpoints(r: &ExtendedRational) -> Option<String> {
    if *r == ExtendedRational::one() {
        return None;
    }
    let cf = try_case!(ContinuedFraction::expand(r));
    let (r1, r2) = try_case!(cf.interval_endpoints());
    if !(r1 < *r && *r < r2) {
        return Some(format!("endpoints {r1}, {r2} do not bracket"));
    }
    (!is_farey_neighbor(&r1, r) || !is_farey_neighbor(&r2, r))
        .then(|| format!("{r1} or {r2} is not a Farey neighbor of r"))
}

fn parse_sample_cfs(opts: &VerifyOptions) -> Result<Vec<ContinuedFraction>, Error> {
    if opts.sample_r.is_empty() {
        return Ok([
            vec![2u64],
            vec![3],
            vec![2, 2],
            vec![1, 2],
            vec![3, 2, 2],
            vec![1, 1, 2],
            vec![2, 1, 3],
        ]
        .into_iter()
        .map(|t| ContinuedFraction::new(t).unwrap())
        .collect());
    }
    opts.sample_r
        .iter()
        .map(|text| {
            let t = text.trim();
            if t.starts_with('[') {
                t.parse()
            } else {
                ContinuedFraction::expand(&t.parse::<ExtendedRational>()?)
            }
        })
        .collect()
}

fn connection_sweep(opts: &VerifyOptions) -> Result<VerificationReport, Error> {
    let samples = parse_sample_cfs(opts)?;
    for r in &samples {
        if r.value() == ExtendedRational::one() {
            return Err(Error::SlopeOutOfRange(
                "connection sweep needs sample slopes with 0 < r < 1".into(),
            ));
        }
    }
    let targets = slopes_up_to(opts.max_denominator);
    let mut failures = Vec::new();
    let mut cases = 0;
    for r in &samples {
        for s in &targets {
            cases += 1;
            let s_cf = ContinuedFraction::expand(s)?;
            let cs_s = cyclic_slope_sseq(s)?;
            let conn = connection_conditions(r, &s_cf);
            let open = in_open_interval(r, s)?;
            let pat = contains_pattern(r, &cs_s)?;
            if conn != open || open != pat {
                failures.push(Failure {
                    case: format!("r={r} s={s}"),
                    detail: format!("conditions {conn}, interval {open}, pattern {pat}"),
                });
            }
        }
    }
    Ok(VerificationReport {
        property: "connection".into(),
        range: format!(
            "{} sample slopes x denominators <= {}",
            samples.len(),
            opts.max_denominator
        ),
        cases,
        failures,
    })
}

fn orbit_sample(opts: &VerifyOptions) -> Result<Vec<ExtendedRational>, Error> {
    if opts.sample_r.is_empty() {
        return Ok(vec![
            ExtendedRational::ratio(1, 2),
            ExtendedRational::ratio(2, 5),
            ExtendedRational::ratio(3, 5),
            ExtendedRational::ratio(5, 17),
        ]);
    }
    opts.sample_r
        .iter()
        .map(|text| {
            let t = text.trim();
            if t.starts_with('[') {
                Ok(t.parse::<ContinuedFraction>()?.value())
            } else {
                t.parse()
            }
        })
        .collect()
}

fn orbit_sweep(opts: &VerifyOptions) -> Result<VerificationReport, Error> {
    let samples = orbit_sample(opts)?;
    let targets: Vec<ExtendedRational> = slopes_up_to(opts.max_denominator)
        .into_iter()
        .chain([ExtendedRational::infinity()])
        .collect();
    let cases = samples.len() * targets.len();
    let fuel = opts.fuel;
    let cap = opts.bfs_cap;
    let per_sample: Result<Vec<Vec<Failure>>, Error> = pool().install(|| {
        samples
            .par_iter()
            .map(|r| orbit_sweep_one(r, &targets, fuel, cap))
            .collect()
    });
    Ok(VerificationReport {
        property: "orbit".into(),
        range: format!(
            "{} sample slopes x denominators <= {}, oracle cap {}",
            samples.len(),
            opts.max_denominator,
            cap
        ),
        cases,
        failures: per_sample?.into_iter().flatten().collect(),
    })
}

fn orbit_sweep_one(
    r: &ExtendedRational,
    targets: &[ExtendedRational],
    fuel: Option<u64>,
    cap: u64,
) -> Result<Vec<Failure>, Error> {
    let cf = ContinuedFraction::expand(r)?;
    let (r1, r2) = cf.interval_endpoints()?;
    let in_fundamental = |x: &ExtendedRational| {
        x.is_infinite()
            || x == r
            || (ExtendedRational::zero() <= *x && *x <= r1)
            || (r2 <= *x && *x <= ExtendedRational::one())
    };
    let generators = [
        ReflectionMatrix::gamma_inf(0),
        ReflectionMatrix::gamma_inf(1),
        ReflectionMatrix::in_edge(r, &r1)?,
        ReflectionMatrix::in_edge(r, &r2)?,
    ];
    let reduce = |s: &ExtendedRational| match fuel {
        Some(f) => bridge_core::farey::reduce_to_fundamental_with_fuel(r, s, f),
        None => reduce_to_fundamental(r, s),
    };
    let mut oracle = OrbitOracle::new(r, cap)?;
    let mut failures = Vec::new();
    for s in targets {
        let mut fail = |detail: String| {
            failures.push(Failure {
                case: format!("r={r} s={s}"),
                detail,
            })
        };
        let reduced = match reduce(s) {
            Ok(res) => res,
            Err(e) => {
                fail(format!("reduction failed: {e}"));
                continue;
            }
        };
        if !in_fundamental(&reduced.canonical) {
            fail(format!("canonical {} outside fundamental set", reduced.canonical));
            continue;
        }
        if reduced.replay(s) != reduced.canonical {
            fail("trail does not replay to the canonical value".into());
        }
        match reduce(&reduced.canonical) {
            Ok(again) if again.canonical == reduced.canonical && again.trail.is_empty() => {}
            _ => fail("reduction is not idempotent".into()),
        }
        for g in &generators {
            match reduce(&g.apply(s)) {
                Ok(moved) if moved.canonical == reduced.canonical => {}
                _ => {
                    fail("canonical value not invariant under a generator".into());
                    break;
                }
            }
        }
        match oracle.canonical(s) {
            Ok(Some(c)) if c != reduced.canonical => {
                fail(format!("oracle found {c}, reduction {}", reduced.canonical))
            }
            Ok(_) => {}
            Err(e) => fail(format!("oracle error: {e}")),
        }
    }
    Ok(failures)
}

fn null_homotopy_sweep(opts: &VerifyOptions) -> Result<VerificationReport, Error> {
    let samples = parse_sample_cfs(opts)?;
    let targets = slopes_up_to(opts.max_denominator);
    let mut failures = Vec::new();
    let mut cases = 0;
    for r_cf in &samples {
        let r = r_cf.value();
        let (r1, r2) = r_cf.interval_endpoints()?;
        for s in &targets {
            cases += 1;
            let null = is_null_homotopic(&r, s)?;
            if null && !contains_pattern(r_cf, &cyclic_slope_sseq(s)?)? {
                failures.push(Failure {
                    case: format!("r={r} s={s}"),
                    detail: "null-homotopic but the pattern condition fails".into(),
                });
            }
            if null && (*s <= r1 || *s >= r2) {
                failures.push(Failure {
                    case: format!("r={r} s={s}"),
                    detail: "slope inside I1 or I2 reported null-homotopic".into(),
                });
            }
        }
    }
    Ok(VerificationReport {
        property: "nullhomotopy".into(),
        range: format!(
            "{} sample slopes x denominators <= {}",
            samples.len(),
            opts.max_denominator
        ),
        cases,
        failures,
    })
}
