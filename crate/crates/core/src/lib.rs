//! Exact arithmetic, addresses, wormhole levels and geodesics for Laakso-type spaces.

mod error;
pub mod fractal;
pub mod geodesic;
pub mod numeric;
pub mod oracle;
pub mod space;
pub mod wormhole;

pub use error::{Error, Result};
pub use fractal::{Address, DifferenceOrders};
pub use geodesic::{
    classify, connect, distance, geodesic_path, minimal_interval, Classification, Jump, JumpKind,
    Limit, MinimalInterval, PathItem, PathRep, PathShape, Segment, Strategy,
};
pub use numeric::{Enclosure, Interval, Rational, ScaleFactor};
pub use space::{Point, SpaceConfig};
pub use wormhole::{Direction, MSequence, WormholeLevel};
