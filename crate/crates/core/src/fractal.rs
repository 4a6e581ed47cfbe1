//! Points of the Cantor-like attractor, named by eventually periodic binary
//! addresses.
//!
//! Digit `i` (1-based) selects the map applied at depth `i`, so the point
//! with address `a` sits at `sum_i a_i (s - 1) / s^i`. Addresses are kept in a
//! canonical form (shortest preperiod, primitive cycle), which makes equality
//! of infinite strings a syntactic comparison.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::{lcm, Enclosure, Interval, Rational, ScaleFactor};

/// Eventually periodic infinite binary string `prefix · cycle cycle cycle …`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Address {
    prefix: Vec<u8>,
    cycle: Vec<u8>,
}

fn check_digits(digits: &[u8]) -> Result<()> {
    match digits.iter().find(|&&d| d > 1) {
        Some(d) => Err(Error::Parse {
            token: d.to_string(),
            reason: "address digits must be 0 or 1".into(),
        }),
        None => Ok(()),
    }
}

impl Address {
    pub fn new(prefix: Vec<u8>, cycle: Vec<u8>) -> Result<Self> {
        check_digits(&prefix)?;
        check_digits(&cycle)?;
        if cycle.is_empty() {
            return Err(Error::Parse {
                token: "()".into(),
                reason: "the repeating cycle must be nonempty".into(),
            });
        }
        Ok(Self::canonical(prefix, cycle))
    }

    /// The constant string `d d d …`.
    pub fn constant(d: u8) -> Self {
        assert!(d <= 1);
        Address {
            prefix: Vec::new(),
            cycle: vec![d],
        }
    }

    /// `digits` followed by zeros.
    pub fn finite(digits: &[u8]) -> Self {
        Self::new(digits.to_vec(), vec![0]).expect("binary digits")
    }

    fn canonical(mut prefix: Vec<u8>, cycle: Vec<u8>) -> Self {
        let len = cycle.len();
        let period = (1..=len)
            .find(|&p| len.is_multiple_of(p) && (p..len).all(|i| cycle[i] == cycle[i - p]))
            .unwrap_or(len);
        let mut cycle = cycle[..period].to_vec();
        while let (Some(&last), Some(&tail)) = (prefix.last(), cycle.last()) {
            if last != tail {
                break;
            }
            prefix.pop();
            cycle.rotate_right(1);
        }
        Address { prefix, cycle }
    }

    pub fn prefix(&self) -> &[u8] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[u8] {
        &self.cycle
    }

    /// Digit at 1-based position `i`.
    pub fn digit(&self, i: usize) -> u8 {
        assert!(i >= 1, "address digits are 1-based");
        let p = self.prefix.len();
        if i <= p {
            self.prefix[i - 1]
        } else {
            self.cycle[(i - 1 - p) % self.cycle.len()]
        }
    }

    /// The first `k` digits.
    pub fn truncate(&self, k: usize) -> Vec<u8> {
        (1..=k).map(|i| self.digit(i)).collect()
    }

    /// The switching map: flips digit `n` and keeps every other digit.
    pub fn switch(&self, n: usize) -> Address {
        assert!(n >= 1, "address digits are 1-based");
        let mut prefix = self.truncate(n.max(self.prefix.len()));
        prefix[n - 1] ^= 1;
        // Re-align the cycle with the end of the materialized prefix.
        let shift = (prefix.len() - self.prefix.len()) % self.cycle.len();
        let mut cycle = self.cycle.clone();
        cycle.rotate_left(shift);
        Self::canonical(prefix, cycle)
    }

    /// Replaces the first `digits.len()` digits.
    pub fn with_head(&self, digits: &[u8]) -> Address {
        let mut prefix = self.truncate(digits.len().max(self.prefix.len()));
        prefix[..digits.len()].copy_from_slice(digits);
        let shift = (prefix.len() - self.prefix.len()) % self.cycle.len();
        let mut cycle = self.cycle.clone();
        cycle.rotate_left(shift);
        Self::canonical(prefix, cycle)
    }

    /// Number of leading digits after which both strings are periodic with a common period.
    fn window(&self, other: &Address) -> (usize, usize) {
        (
            self.prefix.len().max(other.prefix.len()),
            lcm(self.cycle.len(), other.cycle.len()),
        )
    }

    /// Whether the two strings agree from some index on.
    pub fn same_asymptotic(&self, other: &Address) -> bool {
        if self.cycle.len() != other.cycle.len() {
            return false;
        }
        let start = self.prefix.len().max(other.prefix.len());
        (start + 1..=start + self.cycle.len()).all(|i| self.digit(i) == other.digit(i))
    }

    /// The positions where the two strings differ.
    pub fn difference_orders(&self, other: &Address) -> DifferenceOrders {
        let (start, period) = self.window(other);
        let head: Vec<usize> = (1..=start)
            .filter(|&i| self.digit(i) != other.digit(i))
            .collect();
        let pattern: Vec<bool> = (start + 1..=start + period)
            .map(|i| self.digit(i) != other.digit(i))
            .collect();
        if !pattern.iter().any(|&d| d) {
            return DifferenceOrders { head, tail: None };
        }
        let len = pattern.len();
        let period = (1..=len)
            .find(|&p| len.is_multiple_of(p) && (p..len).all(|i| pattern[i] == pattern[i - p]))
            .unwrap_or(len);
        let offsets = (0..period).filter(|&j| pattern[j]).collect();
        DifferenceOrders {
            head,
            tail: Some(PeriodicTail {
                start,
                period,
                offsets,
            }),
        }
    }

    /// The attractor coordinate `sum_i a_i (s - 1) / s^i`, exact when `s` is rational.
    pub fn value(&self, scale: &ScaleFactor, width: &Rational) -> Result<Enclosure> {
        scale.refine(width, |s| self.value_on(s))
    }

    /// Exact coordinate for a rational `s`.
    pub fn value_exact(&self, s: &Rational) -> Rational {
        self.value_on(&Interval::point(s.clone())).lo
    }

    /// Interval evaluation of the coordinate over every `s` in `s_range`.
    fn value_on(&self, s_range: &Interval) -> Interval {
        let one = Interval::point(Rational::one());
        let t = one.div(s_range);
        let horner = |digits: &[u8]| {
            // sum_j d_j t^j
            let mut acc = Interval::point(Rational::zero());
            for &d in digits.iter().rev() {
                acc = acc.add(&Interval::point(Rational::from_integer(d.into()))).mul(&t);
            }
            acc
        };
        let mut t_prefix = one.clone();
        for _ in 0..self.prefix.len() {
            t_prefix = t_prefix.mul(&t);
        }
        let mut t_cycle = one.clone();
        for _ in 0..self.cycle.len() {
            t_cycle = t_cycle.mul(&t);
        }
        let tail = t_prefix.mul(&horner(&self.cycle)).div(&one.sub(&t_cycle));
        s_range.sub(&one).mul(&horner(&self.prefix).add(&tail))
    }

    /// Lexicographic order of the infinite strings.
    pub fn cmp_lex(&self, other: &Address) -> Ordering {
        let (start, period) = self.window(other);
        (1..=start + period)
            .map(|i| self.digit(i).cmp(&other.digit(i)))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }
}

impl PartialOrd for Address {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Address {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_lex(other)
    }
}

/// Endpoints of the convex hull of the cell named by `prefix`.
pub fn cell_interval(
    prefix: &[u8],
    scale: &ScaleFactor,
    width: &Rational,
) -> Result<(Enclosure, Enclosure)> {
    let low = Address::new(prefix.to_vec(), vec![0])?;
    let high = Address::new(prefix.to_vec(), vec![1])?;
    Ok((low.value(scale, width)?, high.value(scale, width)?))
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.prefix {
            write!(f, "{d}")?;
        }
        f.write_str("(")?;
        for d in &self.cycle {
            write!(f, "{d}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for Address {
    type Err = Error;

    /// `101(0)` is prefix `101` with cycle `0`; `(10)` is purely periodic;
    /// a string without parentheses is followed by zeros.
    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let digits = |part: &str| -> Result<Vec<u8>> {
            part.chars()
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    other => Err(Error::Parse {
                        token: other.to_string(),
                        reason: format!("address digits must be 0 or 1 in `{text}`"),
                    }),
                })
                .collect()
        };
        match text.find('(') {
            None => {
                if text.contains(')') {
                    return Err(Error::Parse {
                        token: text.into(),
                        reason: "unbalanced parenthesis".into(),
                    });
                }
                if text.is_empty() {
                    return Err(Error::Parse {
                        token: text.into(),
                        reason: "empty address".into(),
                    });
                }
                Address::new(digits(text)?, vec![0])
            }
            Some(open) => {
                let rest = &text[open + 1..];
                let close = rest.strip_suffix(')').ok_or_else(|| Error::Parse {
                    token: text.into(),
                    reason: "the cycle must be closed by `)` at the end".into(),
                })?;
                if close.is_empty() {
                    return Err(Error::Parse {
                        token: text.into(),
                        reason: "the repeating cycle must be nonempty".into(),
                    });
                }
                Address::new(digits(&text[..open])?, digits(close)?)
            }
        }
    }
}

/// Eventual pattern of a difference set: index `i > start` is included iff
/// `(i - start - 1) mod period` is one of `offsets`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicTail {
    pub start: usize,
    pub period: usize,
    pub offsets: Vec<usize>,
}

/// The increasing set of indices where two addresses differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceOrders {
    head: Vec<usize>,
    tail: Option<PeriodicTail>,
}

impl DifferenceOrders {
    pub fn is_empty(&self) -> bool {
        self.head.is_empty() && self.tail.is_none()
    }

    pub fn is_finite(&self) -> bool {
        self.tail.is_none()
    }

    /// Eventual period when the set is infinite.
    pub fn period(&self) -> Option<usize> {
        self.tail.as_ref().map(|t| t.period)
    }

    pub fn tail(&self) -> Option<&PeriodicTail> {
        self.tail.as_ref()
    }

    pub fn contains(&self, k: usize) -> bool {
        match &self.tail {
            Some(t) if k > t.start => t.offsets.contains(&((k - t.start - 1) % t.period)),
            _ => self.head.binary_search(&k).is_ok(),
        }
    }

    /// Smallest element strictly greater than `k`.
    pub fn next_after(&self, k: usize) -> Option<usize> {
        if let Some(&i) = self.head.iter().find(|&&i| i > k) {
            return Some(i);
        }
        let t = self.tail.as_ref()?;
        let from = k.max(t.start) + 1;
        (from..from + t.period).find(|&i| self.contains(i))
    }

    pub fn first(&self) -> Option<usize> {
        self.next_after(0)
    }

    /// Largest element, or `None` when the set is empty or infinite.
    pub fn last(&self) -> Option<usize> {
        if self.tail.is_some() {
            None
        } else {
            self.head.last().copied()
        }
    }

    /// Elements in increasing order; unbounded when the set is infinite.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let mut current = 0;
        std::iter::from_fn(move || {
            let next = self.next_after(current)?;
            current = next;
            Some(next)
        })
    }

    /// Elements not exceeding `k`.
    pub fn up_to(&self, k: usize) -> Vec<usize> {
        self.iter().take_while(|&i| i <= k).collect()
    }
}
