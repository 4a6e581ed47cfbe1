//! Exact rationals, rational intervals, and the scale factor `s`.
//!
//! Every height, wormhole level and distance in the crate is a [`Rational`].
//! The scale factor is either a rational `s > 2` or is derived from a
//! rational dimension `Q` through `s = 2^(1/(Q-1))`. In the derived case
//! `s^(-i)` is compared against rationals by clearing the fractional
//! exponent, so every ordering decision is exact integer arithmetic.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact fraction, always reduced with a positive denominator.
pub type Rational = BigRational;

/// Default refinement cap, in bits, for interval enclosures of an irrational `s`.
pub const DEFAULT_PRECISION_CAP: u32 = 4096;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p/q`, `p` or a finite decimal such as `0.25`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Parse {
        token: text.to_string(),
        reason: "expected an exact fraction such as 3/10".into(),
    };
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse {
                token: text.to_string(),
                reason: "zero denominator".into(),
            });
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole: BigInt = match whole {
            "" | "-" | "+" => BigInt::zero(),
            w => w.parse().map_err(|_| bad())?,
        };
        let frac_num: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mut value = Rational::from_integer(whole.abs()) + Rational::new(frac_num, scale);
        if negative {
            value = -value;
        }
        return Ok(value);
    }
    let n: BigInt = text.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

pub fn pow_rational(base: &Rational, exp: usize) -> Rational {
    num_traits::pow(base.clone(), exp)
}

/// Closed rational interval `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        Interval::new(&self.lo - &other.hi, &self.hi - &other.lo)
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        Interval::new(lo, hi)
    }

    /// Division by an interval that does not contain zero.
    pub fn div(&self, other: &Interval) -> Interval {
        assert!(
            !other.contains(&Rational::zero()),
            "interval division by an interval containing zero"
        );
        let recip = Interval::new(other.hi.recip(), other.lo.recip());
        self.mul(&recip)
    }

    pub fn scale(&self, k: &Rational) -> Interval {
        self.mul(&Interval::point(k.clone()))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// A quantity known exactly, or only through a certified enclosure.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Enclosure {
    Exact(Rational),
    Within(Interval),
}

impl Enclosure {
    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Enclosure::Exact(r) => Some(r),
            Enclosure::Within(_) => None,
        }
    }

    pub fn interval(&self) -> Interval {
        match self {
            Enclosure::Exact(r) => Interval::point(r.clone()),
            Enclosure::Within(i) => i.clone(),
        }
    }

    pub fn add(&self, other: &Enclosure) -> Enclosure {
        match (self, other) {
            (Enclosure::Exact(a), Enclosure::Exact(b)) => Enclosure::Exact(a + b),
            _ => Enclosure::Within(self.interval().add(&other.interval())),
        }
    }

    pub fn add_rational(&self, r: &Rational) -> Enclosure {
        self.add(&Enclosure::Exact(r.clone()))
    }

    /// `|self - r|` for a rational `r`.
    pub fn abs_diff(&self, r: &Rational) -> Enclosure {
        match self {
            Enclosure::Exact(a) => Enclosure::Exact((a - r).abs()),
            Enclosure::Within(i) => {
                let lo = &i.lo - r;
                let hi = &i.hi - r;
                if lo.is_negative() && hi.is_positive() {
                    Enclosure::Within(Interval::new(Rational::zero(), lo.abs().max(hi)))
                } else {
                    let (a, b) = (lo.abs(), hi.abs());
                    Enclosure::Within(Interval::new(a.clone().min(b.clone()), a.max(b)))
                }
            }
        }
    }

    /// Midpoint as a float, for rendering only.
    pub fn approx_f64(&self) -> f64 {
        match self {
            Enclosure::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Enclosure::Within(i) => ((&i.lo + &i.hi) / int(2)).to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Enclosure::Exact(r) => write!(f, "{r}"),
            Enclosure::Within(i) => write!(f, "{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    /// `s` is a rational number.
    Rational(Rational),
    /// `s = 2^(num/den)` with `gcd(num, den) = 1` and `den > 1`, so `s` is irrational.
    PowerOfTwo { num: u64, den: u64 },
}

/// The contraction ratio `s > 2` of the two-map system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaleFactor {
    repr: Repr,
    dimension: Option<Rational>,
    precision_cap: u32,
}

impl ScaleFactor {
    /// Scale given directly as a rational `s > 2`.
    pub fn from_s(s: Rational) -> Result<Self> {
        if s <= int(2) {
            return Err(Error::InvalidScale(format!("s must exceed 2, got {s}")));
        }
        Ok(ScaleFactor {
            repr: Repr::Rational(s),
            dimension: None,
            precision_cap: DEFAULT_PRECISION_CAP,
        })
    }

    /// Scale derived from the dimension `Q` in `(1, 2)` as `s = 2^(1/(Q-1))`.
    pub fn from_dimension(q: Rational) -> Result<Self> {
        if q <= int(1) || q >= int(2) {
            return Err(Error::InvalidScale(format!(
                "dimension Q must lie strictly between 1 and 2, got {q}"
            )));
        }
        let exponent = (&q - int(1)).recip();
        let num = exponent
            .numer()
            .to_u64()
            .ok_or_else(|| Error::InvalidScale(format!("exponent of 2 too large for Q = {q}")))?;
        let den = exponent
            .denom()
            .to_u64()
            .ok_or_else(|| Error::InvalidScale(format!("exponent of 2 too large for Q = {q}")))?;
        let repr = if den == 1 {
            Repr::Rational(Rational::from_integer(BigInt::one() << num))
        } else {
            Repr::PowerOfTwo { num, den }
        };
        Ok(ScaleFactor {
            repr,
            dimension: Some(q),
            precision_cap: DEFAULT_PRECISION_CAP,
        })
    }

    pub fn with_precision_cap(mut self, bits: u32) -> Self {
        self.precision_cap = bits;
        self
    }

    pub fn precision_cap(&self) -> u32 {
        self.precision_cap
    }

    /// The dimension `Q`, when the space was configured from it.
    pub fn dimension(&self) -> Option<&Rational> {
        self.dimension.as_ref()
    }

    /// `Some(s)` when `s` is rational.
    pub fn exact(&self) -> Option<&Rational> {
        match &self.repr {
            Repr::Rational(s) => Some(s),
            Repr::PowerOfTwo { .. } => None,
        }
    }

    /// `true` when `s` is an integer, which makes the canonical m-sequence constant.
    pub fn is_integer(&self) -> bool {
        self.exact().is_some_and(|s| s.is_integer())
    }

    /// Ordering of `s^(-i)` relative to `r`.
    pub fn compare_spower(&self, i: u64, r: &Rational) -> Result<Ordering> {
        if i == 0 {
            return Err(Error::Precondition("compare_spower needs i >= 1".into()));
        }
        if !r.is_positive() {
            return Ok(Ordering::Greater);
        }
        let (p, q) = (r.numer(), r.denom());
        Ok(match &self.repr {
            Repr::Rational(s) => {
                // s^(-i) = v^i / u^i  against  p / q
                let u = num_traits::pow(s.numer().clone(), i as usize);
                let v = num_traits::pow(s.denom().clone(), i as usize);
                (v * q).cmp(&(p * u))
            }
            Repr::PowerOfTwo { num, den } => {
                // 2^(-i num/den) < p/q  <=>  q^den < p^den 2^(i num)
                let lhs = num_traits::pow(q.clone(), *den as usize);
                let shift = i
                    .checked_mul(*num)
                    .and_then(|x| usize::try_from(x).ok())
                    .ok_or(Error::PrecisionExhausted {
                        bits: self.precision_cap,
                    })?;
                let rhs = num_traits::pow(p.clone(), *den as usize) << shift;
                lhs.cmp(&rhs)
            }
        })
    }

    /// The integer `n` with `n <= s < n + 1`.
    pub fn floor(&self) -> BigInt {
        match &self.repr {
            Repr::Rational(s) => s.floor().to_integer(),
            Repr::PowerOfTwo { num, den } => {
                let power = BigUint::one() << (*num as usize);
                BigInt::from_biguint(Sign::Plus, power.nth_root(*den as u32))
            }
        }
    }

    /// Rational enclosure of `s` at `bits` bits after the binary point.
    pub fn bounds(&self, bits: u32) -> Interval {
        match &self.repr {
            Repr::Rational(s) => Interval::point(s.clone()),
            Repr::PowerOfTwo { num, den } => {
                let shift = *num as usize + bits as usize * *den as usize;
                let scaled = (BigUint::one() << shift).nth_root(*den as u32);
                let denom = BigInt::one() << (bits as usize);
                let lo = Rational::new(BigInt::from_biguint(Sign::Plus, scaled.clone()), denom.clone());
                let hi = Rational::new(BigInt::from_biguint(Sign::Plus, scaled + 1u32), denom);
                Interval::new(lo, hi)
            }
        }
    }

    /// Evaluates `f` on successively tighter enclosures of `s` until the result
    /// is narrower than `width`.
    pub fn refine<F>(&self, width: &Rational, f: F) -> Result<Enclosure>
    where
        F: Fn(&Interval) -> Interval,
    {
        if let Some(s) = self.exact() {
            let out = f(&Interval::point(s.clone()));
            debug_assert_eq!(out.lo, out.hi);
            return Ok(Enclosure::Exact(out.lo));
        }
        let mut bits = 64;
        loop {
            let out = f(&self.bounds(bits));
            if &out.width() <= width {
                return Ok(Enclosure::Within(out));
            }
            if bits >= self.precision_cap {
                return Err(Error::PrecisionExhausted {
                    bits: self.precision_cap,
                });
            }
            bits = (bits * 2).min(self.precision_cap);
        }
    }
}

impl fmt::Display for ScaleFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.repr, &self.dimension) {
            (Repr::Rational(s), Some(q)) => write!(f, "s = {s} (Q = {q})"),
            (Repr::Rational(s), None) => write!(f, "s = {s}"),
            (Repr::PowerOfTwo { num, den }, _) => write!(f, "s = 2^({num}/{den})"),
        }
    }
}

/// Least common multiple of two positive sizes.
pub fn lcm(a: usize, b: usize) -> usize {
    a.lcm(&b)
}
