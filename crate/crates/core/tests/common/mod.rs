#![allow(dead_code)]

use laakso::{Address, Point, Rational, SpaceConfig};
use num_bigint::BigInt;
use rand::Rng;

/// Random eventually periodic address with short prefix and cycle.
pub fn random_address<R: Rng>(rng: &mut R) -> Address {
    let plen = rng.gen_range(0..=4);
    let clen = rng.gen_range(1..=3);
    let prefix = (0..plen).map(|_| rng.gen_range(0..=1)).collect();
    let cycle = (0..clen).map(|_| rng.gen_range(0..=1)).collect();
    Address::new(prefix, cycle).unwrap()
}

/// Height on a mixed grid: multiples of 1/81 most of the time, else j/q for small q.
pub fn random_height<R: Rng>(rng: &mut R) -> Rational {
    if rng.gen_bool(0.7) {
        Rational::new(BigInt::from(rng.gen_range(0..=81)), BigInt::from(81))
    } else {
        let q = rng.gen_range(1..=20);
        Rational::new(BigInt::from(rng.gen_range(0..=q)), BigInt::from(q))
    }
}

pub fn random_point<R: Rng>(cfg: &SpaceConfig, rng: &mut R) -> Point {
    cfg.canonicalize(random_address(rng), random_height(rng)).unwrap()
}

/// Whether every differing digit can be flipped inside `[min h, max h]`.
///
/// Walks the orders upward; once two distinct levels of order at most `k`
/// lie in the range, every later order has a level between them.
pub fn monotone_connectable(cfg: &SpaceConfig, x: &Point, y: &Point) -> bool {
    let (lo, hi) = if x.height() <= y.height() {
        (x.height(), y.height())
    } else {
        (y.height(), x.height())
    };
    let ms = cfg.mseq();
    let diff = x.address().difference_orders(y.address());
    let mut seen: Vec<Rational> = Vec::new();
    for k in 1..400 {
        let levels = ms.levels_in(k, lo, hi).unwrap_or_default();
        if diff.contains(k) && levels.is_empty() {
            return false;
        }
        if diff.last().is_some_and(|l| k >= l) || diff.is_empty() {
            return true;
        }
        seen.extend(levels.iter().take(2).map(|w| w.value.clone()));
        seen.sort();
        seen.dedup();
        if seen.len() >= 2 {
            return true;
        }
    }
    panic!("criterion did not settle");
}
