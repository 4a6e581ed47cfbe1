//! Checks for the derived scale s = 2^(10/3) against plain integer arithmetic.
//!
//! For this scale s^3 = 1024, so every comparison of s^(-i) with a rational
//! p/q reduces to comparing q^3 with p^3 * 1024^i.

use std::cmp::Ordering;

use laakso::{MSequence, Rational, ScaleFactor};
use num_bigint::BigInt;
use num_traits::{One, Pow};

fn q13_10() -> ScaleFactor {
    ScaleFactor::from_dimension(Rational::new(13.into(), 10.into())).unwrap()
}

/// Ordering of s^(-i) relative to p/q for s^3 = 1024.
fn oracle_cmp(i: u32, p: &BigInt, q: &BigInt) -> Ordering {
    // s^(-i) < p/q  <=>  q^3 < p^3 * 1024^i
    let lhs: BigInt = q.pow(3u32);
    let rhs: BigInt = p.pow(3u32) * BigInt::from(1024).pow(i);
    lhs.cmp(&rhs)
}

/// Both sandwich bounds at index i for the product D (entries so far), n = 10.
fn sandwich_ok(i: u32, d: &BigInt) -> bool {
    let n = BigInt::from(10);
    let n1 = BigInt::from(11);
    // lower: n / ((n+1) D) <= s^(-i); upper: s^(-i) <= (n+1) / (n D)
    oracle_cmp(i, &n, &(&n1 * d)) != Ordering::Less
        && oracle_cmp(i, &n1, &(&n * d)) != Ordering::Greater
}

#[test]
fn floor_and_first_comparison() {
    let s = q13_10();
    // 10^3 = 1000 < 1024 < 1331 = 11^3
    assert_eq!(s.floor(), BigInt::from(10));
    let tenth = Rational::new(1.into(), 10.into());
    assert_eq!(s.compare_spower(1, &tenth).unwrap(), Ordering::Less);
    assert_eq!(oracle_cmp(1, &BigInt::one(), &BigInt::from(10)), Ordering::Less);
}

#[test]
fn comparisons_agree_with_integer_oracle() {
    let s = q13_10();
    for i in 1..=12u32 {
        for q in [7u64, 10, 11, 97, 1000, 1013, 10_079, 1_015_936] {
            for p in [1u64, 2, 3, 5] {
                let r = Rational::new(p.into(), q.into());
                assert_eq!(
                    s.compare_spower(i as u64, &r).unwrap(),
                    oracle_cmp(i, &BigInt::from(p), &BigInt::from(q)),
                    "i={i} r={r}"
                );
            }
        }
    }
}

#[test]
fn first_eight_entries_are_a_valid_assignment() {
    let mut valid = Vec::new();
    for mask in 0u32..256 {
        let entries: Vec<u64> = (0..8).map(|j| if mask >> j & 1 == 1 { 11 } else { 10 }).collect();
        let mut d = BigInt::one();
        let ok = entries.iter().enumerate().all(|(j, &m)| {
            d *= m;
            sandwich_ok(j as u32 + 1, &d)
        });
        if ok {
            valid.push(entries);
        }
    }
    assert!(!valid.is_empty());
    let ms = MSequence::new(q13_10());
    let greedy: Vec<u64> = ms
        .entries(8)
        .unwrap()
        .iter()
        .map(|m| u64::try_from(m.clone()).unwrap())
        .collect();
    assert!(valid.contains(&greedy), "greedy {greedy:?} not among {valid:?}");
}

#[test]
fn greedy_choice_matches_log_midpoint_rule() {
    // Independent replay: at each step choose the product closer to s^(-i) in
    // log scale, i.e. m = 10 iff s^(-2i) >= 1/(D^2 * 10 * 11), falling back
    // to the other entry when the sandwich fails.
    let ms = MSequence::new(q13_10());
    let mut d = BigInt::one();
    for i in 1..=16u32 {
        // s^(-2i) vs 1/(110 D^2): compare (110 D^2)^3 with 1024^(2i)
        let geo = BigInt::from(110) * &d * &d;
        let lhs: BigInt = geo.pow(3u32);
        let rhs: BigInt = BigInt::from(1024).pow(2 * i);
        let mut pick = if lhs >= rhs { 10u64 } else { 11 };
        if !sandwich_ok(i, &(&d * pick)) {
            pick = 21 - pick;
        }
        assert!(sandwich_ok(i, &(&d * pick)));
        assert_eq!(ms.m(i as usize).unwrap(), BigInt::from(pick), "entry {i}");
        d *= pick;
        assert_eq!(ms.denom(i as usize).unwrap(), d);
    }
}

#[test]
fn sandwich_holds_to_sixty_four() {
    let ms = MSequence::new(q13_10());
    let mut d = BigInt::one();
    for i in 1..=64u32 {
        d *= ms.m(i as usize).unwrap();
        assert!(sandwich_ok(i, &d), "index {i}");
    }
}
