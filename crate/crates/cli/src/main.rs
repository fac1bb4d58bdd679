//! `bridge-cancel`: relator words, S-sequences, small cancellation checks,
//! and Farey orbit reduction for 2-bridge link slopes, with JSON output.
//!
//! Exit codes: 0 success, 1 verification found counterexamples,
//! 2 usage/parse error, 3 domain error.

mod verify;

use bridge_core::farey::{reduce_to_fundamental, reduce_to_fundamental_with_fuel, OrbitResult};
use bridge_core::rational::{ContinuedFraction, ExtendedRational};
use bridge_core::smallcancel::check_c4;
use bridge_core::sseq::{
    count_cyclic_occurrences, cyclic_slope_sseq, decompose, s_sequence, slope_sseq,
};
use bridge_core::word::relator;
use bridge_core::Error;
use clap::{ArgAction, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use verify::{known_property, run_property, VerifyOptions, PROPERTIES};

#[derive(Parser)]
#[command(
    name = "bridge-cancel",
    version,
    about = "Combinatorics of 2-bridge link group presentations",
    after_help = "Slopes are written `q/p` (e.g. 5/17), `inf`, or as a continued \
                  fraction `[m1,m2,...]` (e.g. [3,2,2])."
)]
struct Cli {
    /// Emit machine-readable JSON (pass `--json false` for plain text)
    #[arg(
        long,
        global = true,
        default_value_t = true,
        action = ArgAction::Set,
        num_args = 0..=1,
        default_missing_value = "true"
    )]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the relator word of a slope, its length, and its S-sequence
    Relator { r: String },
    /// Print the S-sequence and cyclic S-sequence of a slope
    Sseq { r: String },
    /// Print the symmetric decomposition ((S1,S2,S1,S2)) of CS(r)
    Decompose { r: String },
    /// Check the small cancellation conditions C(4) and T(4)
    Smallcancel { r: String },
    /// Reduce s to its canonical representative in I1 u I2 u {inf, r}
    OrbitReduce {
        r: String,
        s: String,
        /// Reflection budget (default: 10x the bit length of the denominator)
        #[arg(long)]
        fuel: Option<u64>,
    },
    /// Decide whether the loop of slope s is null-homotopic for K(r)
    Nullhomotopic {
        r: String,
        s: String,
        #[arg(long)]
        fuel: Option<u64>,
    },
    /// Run a named verification sweep (see `verify help` for the list)
    Verify {
        /// Property name, or `all`
        property: String,
        /// Largest slope denominator in the sweep
        #[arg(long, default_value_t = 40)]
        max_denominator: u64,
        /// Override the sample slopes (repeatable; commas outside brackets
        /// also separate, so `--sample-r "5/17,[2,2]"` names two slopes)
        #[arg(long)]
        sample_r: Vec<String>,
        /// Reflection budget for orbit reductions
        #[arg(long)]
        fuel: Option<u64>,
        /// State cap for the breadth-first orbit oracle
        #[arg(long, default_value_t = 500)]
        bfs_cap: u64,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_parse() {
                2
            } else {
                3
            }
        }
    };
    std::process::exit(code);
}

/// Accept a slope as `q/p`, `inf`, or `[m1,m2,...]`; continued fractions
/// are normalized on input.
fn parse_slope(text: &str) -> Result<ExtendedRational, Error> {
    let t = text.trim();
    if t.starts_with('[') {
        Ok(t.parse::<ContinuedFraction>()?.value())
    } else {
        t.parse()
    }
}

/// The machinery of these subcommands needs a non-trivial link.
fn require_nontrivial(r: &ExtendedRational) -> Result<(), Error> {
    if r.is_infinite() || *r == ExtendedRational::one() {
        return Err(Error::SlopeOutOfRange(format!(
            "r = {r} is a trivial link (unknot or unlink); this command applies to 0 < r < 1"
        )));
    }
    Ok(())
}

fn json_int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(x.to_string()),
    }
}

fn trail_json(result: &OrbitResult) -> Value {
    Value::from(
        result
            .trail
            .iter()
            .map(|m| {
                let e = m.entries();
                json!([
                    [json_int(&e[0][0]), json_int(&e[0][1])],
                    [json_int(&e[1][0]), json_int(&e[1][1])]
                ])
            })
            .collect::<Vec<_>>(),
    )
}

fn run(cli: &Cli) -> Result<i32, Error> {
    match &cli.command {
        Command::Relator { r } => {
            let r = parse_slope(r)?;
            let u = relator(&r)?;
            let sseq = s_sequence(&u);
            if cli.json {
                let tokens: Vec<String> =
                    u.letters().iter().map(|l| l.to_char().to_string()).collect();
                print_json(&json!({
                    "r": r.to_string(),
                    "word": u.to_string(),
                    "length": u.len(),
                    "sseq": sseq.terms(),
                    "tokens": tokens,
                }));
            } else {
                println!("word:   {u}");
                println!("length: {}", u.len());
                println!("sseq:   {sseq}");
            }
            Ok(0)
        }
        Command::Sseq { r } => {
            let r = parse_slope(r)?;
            let linear = slope_sseq(&r)?;
            let cyclic = cyclic_slope_sseq(&r)?;
            if cli.json {
                print_json(&json!({
                    "r": r.to_string(),
                    "S": linear.terms(),
                    "CS": cyclic.canonical().terms(),
                }));
            } else {
                println!("S:  {linear}");
                println!("CS: {cyclic}");
            }
            Ok(0)
        }
        Command::Decompose { r } => {
            let r = parse_slope(r)?;
            let cf = ContinuedFraction::expand(&r)?;
            let d = decompose(&cf)?;
            let cs = d.cs();
            let occurrences = |pat: &bridge_core::sseq::SSequence| -> Result<Value, Error> {
                if pat.is_empty() {
                    return Ok(Value::Null); // vacuous for one-term expansions
                }
                Ok(Value::from(count_cyclic_occurrences(&cs, pat)?))
            };
            if cli.json {
                print_json(&json!({
                    "r": r.to_string(),
                    "cf": cf.to_string(),
                    "CS": cs.canonical().terms(),
                    "S1": d.s1.terms(),
                    "S2": d.s2.terms(),
                    "occurrences": {
                        "S1": occurrences(&d.s1)?,
                        "S2": occurrences(&d.s2)?,
                    },
                }));
            } else {
                println!("cf: {cf}");
                println!("CS: {cs}");
                println!("S1: {}", d.s1);
                println!("S2: {}", d.s2);
            }
            Ok(0)
        }
        Command::Smallcancel { r } => {
            let r = parse_slope(r)?;
            require_nontrivial(&r)?;
            let report = check_c4(&r)?;
            if cli.json {
                print_json(&json!({
                    "r": r.to_string(),
                    "max_piece": report.max_piece_length,
                    "min_pieces": report.min_pieces_per_relator,
                    "c4": report.c4,
                    "t4": report.t4,
                }));
            } else {
                println!("max piece:  {}", report.max_piece_length);
                println!(
                    "min pieces: {}",
                    report
                        .min_pieces_per_relator
                        .map_or("none".to_string(), |m| m.to_string())
                );
                println!("C(4): {}", report.c4);
                println!("T(4): {}", report.t4);
            }
            Ok(0)
        }
        Command::OrbitReduce { r, s, fuel } | Command::Nullhomotopic { r, s, fuel } => {
            let r = parse_slope(r)?;
            let s = parse_slope(s)?;
            require_nontrivial(&r)?;
            let result = match fuel {
                Some(f) => reduce_to_fundamental_with_fuel(&r, &s, *f)?,
                None => reduce_to_fundamental(&r, &s)?,
            };
            let is_null = result.canonical.is_infinite() || result.canonical == r;
            if cli.json {
                print_json(&json!({
                    "r": r.to_string(),
                    "s": s.to_string(),
                    "canonical": result.canonical.to_string(),
                    "null_homotopic": is_null,
                    "trail": trail_json(&result),
                }));
            } else {
                println!("canonical:      {}", result.canonical);
                println!("null-homotopic: {is_null}");
                println!("reflections:    {}", result.trail.len());
            }
            Ok(0)
        }
        Command::Verify {
            property,
            max_denominator,
            sample_r,
            fuel,
            bfs_cap,
        } => {
            if *max_denominator < 2 {
                return Err(Error::Parse(
                    "--max-denominator must be at least 2".into(),
                ));
            }
            if *max_denominator > 5000 {
                return Err(Error::Parse(
                    "--max-denominator above 5000 is not supported; the sweeps \
                     enumerate on the order of N^2 slopes"
                        .into(),
                ));
            }
            if !known_property(property) {
                let names: Vec<&str> = PROPERTIES.iter().map(|(n, _)| *n).collect();
                return Err(Error::Parse(format!(
                    "unknown property `{property}`; known: {} or `all`",
                    names.join(", ")
                )));
            }
            let opts = VerifyOptions {
                max_denominator: *max_denominator,
                sample_r: split_samples(sample_r),
                fuel: *fuel,
                bfs_cap: *bfs_cap,
            };
            let names: Vec<&str> = if property == "all" {
                PROPERTIES.iter().map(|(n, _)| *n).collect()
            } else {
                vec![property.as_str()]
            };
            let mut any_failed = false;
            let mut reports = Vec::new();
            for name in names {
                let report = run_property(name, &opts)?;
                any_failed |= !report.failures.is_empty();
                reports.push(report);
            }
            for report in &reports {
                if cli.json {
                    print_json(&json!({
                        "property": report.property,
                        "range": report.range,
                        "cases": report.cases,
                        "failures": report
                            .failures
                            .iter()
                            .map(|f| json!({"case": f.case, "detail": f.detail}))
                            .collect::<Vec<_>>(),
                    }));
                } else {
                    println!(
                        "{}: {} cases, {} failures ({})",
                        report.property,
                        report.cases,
                        report.failures.len(),
                        report.range
                    );
                    for f in &report.failures {
                        println!("  {}: {}", f.case, f.detail);
                    }
                }
            }
            Ok(if any_failed { 1 } else { 0 })
        }
    }
}

fn print_json(value: &Value) {
    println!("{value}");
}

/// Split sample-slope arguments on commas that sit outside `[...]`, so a
/// single argument may carry both fraction and continued-fraction forms.
fn split_samples(raw: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    for arg in raw {
        let mut depth = 0usize;
        let mut cur = String::new();
        for ch in arg.chars() {
            match ch {
                '[' => {
                    depth += 1;
                    cur.push(ch);
                }
                ']' => {
                    depth = depth.saturating_sub(1);
                    cur.push(ch);
                }
                ',' if depth == 0 => {
                    if !cur.trim().is_empty() {
                        out.push(cur.trim().to_string());
                    }
                    cur.clear();
                }
                _ => cur.push(ch),
            }
        }
        if !cur.trim().is_empty() {
            out.push(cur.trim().to_string());
        }
    }
    out
}
