//! The sequence `m`, wormhole levels, and queries over the level sets `J_k`.
//!
//! With `D_k = m_1 m_2 … m_k`, the order-`k` levels are exactly the fractions
//! `N / D_k` with `1 <= N <= D_k - 1` and `N mod m_k != 0`. Every query below
//! works on those numerators directly; nothing enumerates `J_k`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::{Rational, ScaleFactor};

#[derive(Debug, Default)]
struct Memo {
    /// `m[i - 1] = m_i`
    m: Vec<BigInt>,
    /// `d[k] = D_k`, with `d[0] = 1`
    d: Vec<BigInt>,
}

/// The sequence `m_1, m_2, …` with `m_i ∈ {n, n+1}`, extended on demand.
///
/// Entries past any user-supplied override are chosen greedily: among the
/// admissible values the one whose partial product `1 / D_i` is closest to
/// `s^(-i)` in log scale, ties going to `n`. Extension takes the write lock,
/// so concurrent readers never observe a partially validated entry.
#[derive(Debug)]
pub struct MSequence {
    scale: ScaleFactor,
    n: BigInt,
    overrides: Vec<BigInt>,
    memo: RwLock<Memo>,
}

impl Clone for MSequence {
    fn clone(&self) -> Self {
        let memo = self.memo.read().expect("m-sequence lock poisoned");
        MSequence {
            scale: self.scale.clone(),
            n: self.n.clone(),
            overrides: self.overrides.clone(),
            memo: RwLock::new(Memo {
                m: memo.m.clone(),
                d: memo.d.clone(),
            }),
        }
    }
}

impl MSequence {
    pub fn new(scale: ScaleFactor) -> Self {
        Self::build(scale, Vec::new())
    }

    /// Uses `prefix` for the first entries, validating each one.
    pub fn with_override(scale: ScaleFactor, prefix: Vec<BigInt>) -> Result<Self> {
        let len = prefix.len();
        let seq = Self::build(scale, prefix);
        seq.extend_to(len)?;
        Ok(seq)
    }

    fn build(scale: ScaleFactor, overrides: Vec<BigInt>) -> Self {
        let n = scale.floor();
        MSequence {
            scale,
            n,
            overrides,
            memo: RwLock::new(Memo {
                m: Vec::new(),
                d: vec![BigInt::one()],
            }),
        }
    }

    pub fn scale(&self) -> &ScaleFactor {
        &self.scale
    }

    /// `n = floor(s)`.
    pub fn n(&self) -> &BigInt {
        &self.n
    }

    pub fn overrides(&self) -> &[BigInt] {
        &self.overrides
    }

    /// Checks both sandwich bounds for the candidate product `1 / d` at index `i`.
    fn admissible(&self, i: usize, d: &BigInt) -> Result<bool> {
        let n = &self.n;
        let n1 = n + 1u32;
        let lower = Rational::new(n.clone(), &n1 * d);
        let upper = Rational::new(n1, n * d);
        let i = i as u64;
        Ok(self.scale.compare_spower(i, &lower)? != Ordering::Less
            && self.scale.compare_spower(i, &upper)? != Ordering::Greater)
    }

    fn choose(&self, i: usize, prev: &BigInt) -> Result<BigInt> {
        let n = self.n.clone();
        let n1 = &n + 1u32;
        if let Some(m) = self.overrides.get(i - 1) {
            if *m != n && *m != n1 {
                return Err(Error::Infeasible {
                    index: i,
                    reason: format!("m_{i} = {m} is not {n} or {n1}"),
                });
            }
            if !self.admissible(i, &(prev * m))? {
                return Err(Error::Infeasible {
                    index: i,
                    reason: format!("m_{i} = {m} violates the bound around s^-{i}"),
                });
            }
            return Ok(m.clone());
        }
        let with_n = prev * &n;
        let with_n1 = prev * &n1;
        match (self.admissible(i, &with_n)?, self.admissible(i, &with_n1)?) {
            (true, false) => Ok(n),
            (false, true) => Ok(n1),
            (false, false) => Err(Error::Infeasible {
                index: i,
                reason: "neither n nor n+1 keeps the partial product within bounds".into(),
            }),
            (true, true) => {
                // 1/with_n > 1/with_n1; compare s^(-2i) with their product.
                let above = Rational::new(BigInt::one(), with_n.clone());
                let below = Rational::new(BigInt::one(), with_n1.clone());
                let i64_ = i as u64;
                if self.scale.compare_spower(i64_, &above)? != Ordering::Less {
                    return Ok(n);
                }
                if self.scale.compare_spower(i64_, &below)? != Ordering::Greater {
                    return Ok(n1);
                }
                match self.scale.compare_spower(2 * i64_, &(above * below))? {
                    Ordering::Less => Ok(n1),
                    _ => Ok(n),
                }
            }
        }
    }

    fn extend_to(&self, i: usize) -> Result<()> {
        if self.memo.read().expect("m-sequence lock poisoned").m.len() >= i {
            return Ok(());
        }
        let mut memo = self.memo.write().expect("m-sequence lock poisoned");
        while memo.m.len() < i {
            let index = memo.m.len() + 1;
            let prev = memo.d.last().expect("D_0 present").clone();
            let m = self.choose(index, &prev)?;
            memo.d.push(prev * &m);
            memo.m.push(m);
        }
        Ok(())
    }

    /// `m_i` for `i >= 1`.
    pub fn m(&self, i: usize) -> Result<BigInt> {
        if i == 0 {
            return Err(Error::Precondition("m is indexed from 1".into()));
        }
        self.extend_to(i)?;
        Ok(self.memo.read().expect("m-sequence lock poisoned").m[i - 1].clone())
    }

    /// `D_k = m_1 … m_k`, with `D_0 = 1`.
    pub fn denom(&self, k: usize) -> Result<BigInt> {
        self.extend_to(k)?;
        Ok(self.memo.read().expect("m-sequence lock poisoned").d[k].clone())
    }

    /// The first `k` entries.
    pub fn entries(&self, k: usize) -> Result<Vec<BigInt>> {
        self.extend_to(k)?;
        Ok(self.memo.read().expect("m-sequence lock poisoned").m[..k].to_vec())
    }

    /// Re-checks the sandwich condition for every index up to `k`.
    pub fn validate(&self, k: usize) -> Result<()> {
        for i in 1..=k {
            let d = self.denom(i)?;
            if !self.admissible(i, &d)? {
                return Err(Error::Infeasible {
                    index: i,
                    reason: "materialized entry fails the bound around s^-i".into(),
                });
            }
        }
        Ok(())
    }

    /// `Some((i0, c))` when `m_i = c` for every `i >= i0`.
    ///
    /// Only integer scales have this property: the greedy rule then keeps
    /// `m_i = s` except for at most one correction right after the override.
    pub fn constant_tail(&self) -> Option<(usize, BigInt)> {
        if self.scale.is_integer() {
            Some((self.overrides.len() + 2, self.n.clone()))
        } else {
            None
        }
    }

    fn level(&self, order: usize, numerator: BigInt) -> Result<WormholeLevel> {
        let d = self.denom(order)?;
        Ok(WormholeLevel {
            order,
            value: Rational::new(numerator.clone(), d),
            numerator,
        })
    }

    fn is_level_numerator(&self, order: usize, numerator: &BigInt) -> Result<bool> {
        let d = self.denom(order)?;
        Ok(numerator.is_positive()
            && *numerator < d
            && !numerator.is_multiple_of(&self.m(order)?))
    }

    /// The level with mixed-radix digits `(n_1, …, n_k)`.
    pub fn omega_value(&self, digits: &[BigInt]) -> Result<WormholeLevel> {
        let k = digits.len();
        if k == 0 {
            return Err(Error::DigitRange("a level needs at least one digit".into()));
        }
        let mut numerator = BigInt::zero();
        let mut direct = Rational::zero();
        for (j, dj) in digits.iter().enumerate() {
            let mj = self.m(j + 1)?;
            let lowest = if j + 1 == k { BigInt::one() } else { BigInt::zero() };
            if *dj < lowest || *dj >= mj {
                return Err(Error::DigitRange(format!(
                    "digit {} = {dj} must lie in [{lowest}, {}]",
                    j + 1,
                    &mj - 1u32
                )));
            }
            numerator = numerator * &mj + dj;
            direct += Rational::new(dj.clone(), self.denom(j + 1)?);
        }
        let level = self.level(k, numerator)?;
        debug_assert_eq!(level.value, direct);
        Ok(level)
    }

    /// Mixed-radix digits of a level.
    pub fn digits(&self, level: &WormholeLevel) -> Result<Vec<BigInt>> {
        let mut rest = level.numerator.clone();
        let mut digits = vec![BigInt::zero(); level.order];
        for j in (1..=level.order).rev() {
            let (q, r) = rest.div_rem(&self.m(j)?);
            digits[j - 1] = r;
            rest = q;
        }
        Ok(digits)
    }

    /// The level whose value is `y`, if `y` is a wormhole level of some order.
    pub fn classify_height(&self, y: &Rational) -> Result<Option<WormholeLevel>> {
        if !y.is_positive() || *y >= Rational::one() {
            return Ok(None);
        }
        let q = y.denom();
        // Every D_k factors over the primes of n(n+1).
        let basis = &self.n * (&self.n + 1u32);
        let mut rest = q.clone();
        loop {
            let g = rest.gcd(&basis);
            if g.is_one() {
                break;
            }
            rest /= g;
        }
        if !rest.is_one() {
            return Ok(None);
        }
        let tail = self.constant_tail();
        let mut rest = q.clone();
        let mut k = 0;
        while !rest.is_one() {
            k += 1;
            if let Some((from, c)) = &tail {
                if k == *from {
                    let mut probe = rest.clone();
                    loop {
                        let g = probe.gcd(c);
                        if g.is_one() {
                            break;
                        }
                        probe /= g;
                    }
                    if !probe.is_one() {
                        return Ok(None);
                    }
                }
            }
            let g = rest.gcd(&self.m(k)?);
            rest /= g;
        }
        let numerator = y.numer() * self.denom(k)? / q;
        debug_assert!(self.is_level_numerator(k, &numerator)?);
        Ok(Some(self.level(k, numerator)?))
    }

    /// Largest order-`k` level `<= y`.
    pub fn below(&self, k: usize, y: &Rational) -> Result<Option<WormholeLevel>> {
        let d = self.denom(k)?;
        let scaled = y * Rational::from_integer(d.clone());
        let mut numerator = scaled.floor().to_integer().min(d - 1u32);
        if numerator.is_multiple_of(&self.m(k)?) {
            numerator -= 1u32;
        }
        if !numerator.is_positive() {
            return Ok(None);
        }
        Ok(Some(self.level(k, numerator)?))
    }

    /// Smallest order-`k` level `>= y`.
    pub fn above(&self, k: usize, y: &Rational) -> Result<Option<WormholeLevel>> {
        let d = self.denom(k)?;
        let scaled = y * Rational::from_integer(d.clone());
        let mut numerator = scaled.ceil().to_integer().max(BigInt::zero());
        if numerator.is_multiple_of(&self.m(k)?) {
            numerator += 1u32;
        }
        if numerator >= d {
            return Ok(None);
        }
        Ok(Some(self.level(k, numerator)?))
    }

    /// The order-`k` level closest to `y` in the requested direction.
    pub fn nearest(&self, k: usize, y: &Rational, mode: Direction) -> Result<WormholeLevel> {
        let not_found = |direction| Error::NotFound {
            order: k,
            direction,
            height: y.to_string(),
        };
        match mode {
            Direction::Below => self.below(k, y)?.ok_or_else(|| not_found("at or below")),
            Direction::Above => self.above(k, y)?.ok_or_else(|| not_found("at or above")),
            Direction::Either => match (self.below(k, y)?, self.above(k, y)?) {
                (Some(lo), Some(hi)) => {
                    if &hi.value - y < y - &lo.value {
                        Ok(hi)
                    } else {
                        Ok(lo)
                    }
                }
                (Some(w), None) | (None, Some(w)) => Ok(w),
                (None, None) => Err(not_found("near")),
            },
        }
    }

    /// Least element of `J_k ∩ [lo, hi]`.
    pub fn first_in_interval(
        &self,
        k: usize,
        lo: &Rational,
        hi: &Rational,
    ) -> Result<Option<WormholeLevel>> {
        Ok(self.above(k, lo)?.filter(|w| &w.value <= hi))
    }

    /// Greatest element of `J_k ∩ [lo, hi]`.
    pub fn last_in_interval(
        &self,
        k: usize,
        lo: &Rational,
        hi: &Rational,
    ) -> Result<Option<WormholeLevel>> {
        Ok(self.below(k, hi)?.filter(|w| &w.value >= lo))
    }

    /// All of `J_k ∩ [lo, hi]`, in increasing order.
    pub fn levels_in(&self, k: usize, lo: &Rational, hi: &Rational) -> Result<Vec<WormholeLevel>> {
        let mut out = Vec::new();
        let Some(mut current) = self.first_in_interval(k, lo, hi)? else {
            return Ok(out);
        };
        let m = self.m(k)?;
        let d = self.denom(k)?;
        loop {
            let mut next = &current.numerator + 1u32;
            if next.is_multiple_of(&m) {
                next += 1u32;
            }
            out.push(current);
            if next >= d {
                break;
            }
            let level = self.level(k, next)?;
            if &level.value > hi {
                break;
            }
            current = level;
        }
        Ok(out)
    }

    /// A level of order `order` strictly between two distinct levels, built by
    /// extending the digits of the higher-order one.
    pub fn nested_between(
        &self,
        w1: &WormholeLevel,
        w2: &WormholeLevel,
        order: usize,
    ) -> Result<WormholeLevel> {
        if w1.value == w2.value {
            return Err(Error::Precondition("nested_between needs distinct levels".into()));
        }
        if order <= w1.order.max(w2.order) {
            return Err(Error::Precondition(format!(
                "order {order} must exceed both {} and {}",
                w1.order, w2.order
            )));
        }
        let (low, high) = if w1.value < w2.value { (w1, w2) } else { (w2, w1) };
        let scale_up = |w: &WormholeLevel| -> Result<BigInt> {
            Ok(&w.numerator * (self.denom(order)? / self.denom(w.order)?))
        };
        // (n_1, …, n_N - 1, 0, …, 0, 1) below the higher value, or
        // (n_1, …, n_N, 0, …, 0, 1) above the lower one when it has the larger order.
        let numerator = if high.order >= low.order {
            scale_up(high)? - self.denom(order)? / self.denom(high.order)? + 1u32
        } else {
            scale_up(low)? + 1u32
        };
        let level = self.level(order, numerator)?;
        debug_assert!(low.value < level.value && level.value < high.value);
        Ok(level)
    }
}

/// Search direction for [`MSequence::nearest`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Below,
    Above,
    /// Closest on either side; an exact tie returns the lower level.
    Either,
}

/// An element of `J_k`: the value `numerator / D_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WormholeLevel {
    pub order: usize,
    pub numerator: BigInt,
    pub value: Rational,
}

impl fmt::Display for WormholeLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (order {})", self.value, self.order)
    }
}
