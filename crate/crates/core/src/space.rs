//! The quotient space: configuration and canonical points.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fractal::Address;
use crate::numeric::{parse_rational, Enclosure, Rational, ScaleFactor};
use crate::wormhole::{MSequence, WormholeLevel};

/// A configured space: the scale, `n = floor(s)` and the sequence `m`.
#[derive(Debug, Clone)]
pub struct SpaceConfig {
    mseq: MSequence,
}

impl SpaceConfig {
    pub fn new(scale: ScaleFactor) -> Self {
        SpaceConfig {
            mseq: MSequence::new(scale),
        }
    }

    pub fn with_m_override(scale: ScaleFactor, prefix: Vec<BigInt>) -> Result<Self> {
        Ok(SpaceConfig {
            mseq: MSequence::with_override(scale, prefix)?,
        })
    }

    /// The middle-third space, `s = 3`.
    pub fn middle_third() -> Self {
        Self::new(ScaleFactor::from_s(Rational::from_integer(3.into())).expect("3 > 2"))
    }

    pub fn scale(&self) -> &ScaleFactor {
        self.mseq.scale()
    }

    pub fn n(&self) -> &BigInt {
        self.mseq.n()
    }

    /// The dimension `Q`, when configured from it.
    pub fn dimension(&self) -> Option<&Rational> {
        self.scale().dimension()
    }

    pub fn mseq(&self) -> &MSequence {
        &self.mseq
    }

    /// Canonical representative of the class of `(address, y)`.
    pub fn canonicalize(&self, address: Address, y: Rational) -> Result<Point> {
        if y < Rational::zero() || y > Rational::one() {
            return Err(Error::Precondition(format!("height {y} outside [0, 1]")));
        }
        let address = match self.mseq.classify_height(&y)? {
            Some(w) if address.digit(w.order) == 1 => address.switch(w.order),
            _ => address,
        };
        Ok(Point { address, height: y })
    }

    /// The order of the wormhole level at the point's height, if any.
    pub fn level_at(&self, p: &Point) -> Result<Option<WormholeLevel>> {
        self.mseq.classify_height(&p.height)
    }

    /// Representatives in the product space: one, or two at a wormhole level.
    pub fn preimages(&self, p: &Point) -> Result<Vec<(Address, Rational)>> {
        let mut out = vec![(p.address.clone(), p.height.clone())];
        if let Some(w) = self.level_at(p)? {
            out.push((p.address.switch(w.order), p.height.clone()));
        }
        Ok(out)
    }

    /// Coordinates `(attractor value, height)`.
    pub fn embed(&self, p: &Point, width: &Rational) -> Result<(Enclosure, Rational)> {
        Ok((p.address.value(self.scale(), width)?, p.height.clone()))
    }

    /// Parses `address@height` (height defaults to 0) and canonicalizes it.
    pub fn parse_point(&self, text: &str) -> Result<Point> {
        let (addr, height) = match text.split_once('@') {
            Some((a, h)) => (a, parse_rational(h)?),
            None => (text, Rational::zero()),
        };
        if height < Rational::zero() || height > Rational::one() {
            return Err(Error::Parse {
                token: text.to_string(),
                reason: "height must lie in [0, 1]".into(),
            });
        }
        self.canonicalize(addr.parse()?, height)
    }
}

/// A point of the space, stored as its canonical representative: at a level
/// of order `k`, digit `k` of the address is 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point {
    address: Address,
    height: Rational,
}

impl Point {
    pub fn address(&self) -> &Address {
        &self.address
    }

    /// The height function.
    pub fn height(&self) -> &Rational {
        &self.height
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.address, self.height)
    }
}
