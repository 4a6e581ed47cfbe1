//! Paths, minimal height intervals, distances and geodesics.
//!
//! A path is a list of vertical pieces joined by wormhole jumps. Flipping
//! digit `k` of the address is only possible at a height in `J_k`, so a path
//! between two points must reach a level of every order where their
//! addresses differ. The cheapest height range that does so is the minimal
//! interval `[a, b]`, and the distance is `2(b - a) - |h(x) - h(y)|`.
//!
//! When the addresses differ in infinitely many digits the jumps accumulate
//! at a limit height. Such paths materialize the first `depth` jumps of the
//! accumulating run and summarize the rest in a [`Limit`] piece.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fractal::{Address, DifferenceOrders};
use crate::numeric::{Enclosure, Interval, Rational};
use crate::space::{Point, SpaceConfig};
use crate::wormhole::{MSequence, WormholeLevel};

/// Vertical segment on a fixed address.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub address: Address,
    pub from: Rational,
    pub to: Rational,
}

impl Segment {
    pub fn length(&self) -> Rational {
        (&self.to - &self.from).abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JumpKind {
    Upward,
    Downward,
    Inversion,
}

impl fmt::Display for JumpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            JumpKind::Upward => "upward",
            JumpKind::Downward => "downward",
            JumpKind::Inversion => "inversion",
        })
    }
}

/// Passage through a wormhole: `to_address` is `from_address` with digit `at.order` flipped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Jump {
    pub at: WormholeLevel,
    pub from_address: Address,
    pub to_address: Address,
    pub kind: JumpKind,
}

/// The unmaterialized remainder of an infinite run of jumps.
///
/// From `from_height` on `from_address` the run continues monotonically
/// (upward when `ascending`) through infinitely many jumps converging to
/// `omega_bar`, arrives on `to_address`, and then moves vertically from
/// `omega_bar` to `to_height`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limit {
    pub from_address: Address,
    pub from_height: Rational,
    pub ascending: bool,
    pub omega_bar: Enclosure,
    pub to_address: Address,
    pub to_height: Rational,
    pub truncated_at: usize,
}

impl Limit {
    pub fn length(&self) -> Enclosure {
        let iv = self.omega_bar.interval();
        let monotone = if self.ascending {
            self.to_height >= iv.hi
        } else {
            self.to_height <= iv.lo
        };
        if monotone {
            return Enclosure::Exact((&self.to_height - &self.from_height).abs());
        }
        self.omega_bar
            .abs_diff(&self.from_height)
            .add(&self.omega_bar.abs_diff(&self.to_height))
    }

    /// Direction of travel when arriving at `to_height`; `None` if undecided
    /// by the enclosure of the limit height.
    fn arrival_up(&self) -> Option<bool> {
        let iv = self.omega_bar.interval();
        if self.to_height > iv.hi {
            Some(true)
        } else if self.to_height < iv.lo {
            Some(false)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathItem {
    Segment(Segment),
    Jump(Jump),
    Limit(Limit),
}

/// A path as alternating vertical pieces and jumps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathRep {
    pub start: Point,
    pub end: Point,
    pub items: Vec<PathItem>,
}

impl PathRep {
    pub fn segments(&self) -> impl Iterator<Item = &Segment> {
        self.items.iter().filter_map(|i| match i {
            PathItem::Segment(s) => Some(s),
            _ => None,
        })
    }

    pub fn jumps(&self) -> impl Iterator<Item = &Jump> {
        self.items.iter().filter_map(|i| match i {
            PathItem::Jump(j) => Some(j),
            _ => None,
        })
    }

    pub fn limit(&self) -> Option<&Limit> {
        self.items.iter().find_map(|i| match i {
            PathItem::Limit(l) => Some(l),
            _ => None,
        })
    }

    /// Total vertical length: exact unless a limit height is only enclosed.
    pub fn length(&self) -> Enclosure {
        let mut total = Enclosure::Exact(Rational::zero());
        for item in &self.items {
            match item {
                PathItem::Segment(s) => total = total.add_rational(&s.length()),
                PathItem::Limit(l) => total = total.add(&l.length()),
                PathItem::Jump(_) => {}
            }
        }
        total
    }

    /// Checks the chaining and jump invariants against the configuration.
    pub fn validate(&self, cfg: &SpaceConfig) -> Result<()> {
        let bad = |msg: String| Err(Error::Precondition(msg));
        let starts = cfg.preimages(&self.start)?;
        let ends = cfg.preimages(&self.end)?;
        let mut position: Option<(Address, Rational)> = None;
        for (idx, item) in self.items.iter().enumerate() {
            let (entry_addr, entry_h, exit_addr, exit_h) = match item {
                PathItem::Segment(s) => (&s.address, &s.from, &s.address, &s.to),
                PathItem::Limit(l) => (&l.from_address, &l.from_height, &l.to_address, &l.to_height),
                PathItem::Jump(j) => {
                    let level = cfg.mseq().classify_height(&j.at.value)?;
                    if level.as_ref() != Some(&j.at) {
                        return bad(format!("item {idx}: {} is not a level of order {}", j.at.value, j.at.order));
                    }
                    if j.to_address != j.from_address.switch(j.at.order) {
                        return bad(format!("item {idx}: jump does not flip digit {}", j.at.order));
                    }
                    (&j.from_address, &j.at.value, &j.to_address, &j.at.value)
                }
            };
            match &position {
                None => {
                    if !starts.iter().any(|(a, h)| a == entry_addr && h == entry_h) {
                        return bad(format!("item {idx}: path does not start at a preimage of {}", self.start));
                    }
                }
                Some((a, h)) => {
                    if a != entry_addr || h != entry_h {
                        return bad(format!("item {idx}: piece does not continue from {a}@{h}"));
                    }
                }
            }
            if let (PathItem::Jump(_), Some(PathItem::Jump(_))) = (item, self.items.get(idx + 1)) {
                return bad(format!("item {idx}: consecutive jumps"));
            }
            position = Some((exit_addr.clone(), exit_h.clone()));
        }
        let ok = match &position {
            None => self.start == self.end,
            Some((a, h)) => ends.iter().any(|(ea, eh)| ea == a && eh == h),
        };
        if !ok {
            return bad(format!("path does not end at a preimage of {}", self.end));
        }
        Ok(())
    }
}

/// Overall shape of a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathShape {
    MonotoneUp,
    MonotoneDown,
    Oscillating,
    /// No vertical motion at all (start equals end).
    Trivial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub shape: PathShape,
    pub kinds: Vec<JumpKind>,
}

impl Classification {
    pub fn inversions(&self) -> usize {
        self.kinds.iter().filter(|k| **k == JumpKind::Inversion).count()
    }
}

/// Direction of travel leaving a piece's start and arriving at its end.
fn piece_directions(item: &PathItem) -> (Option<bool>, Option<bool>) {
    match item {
        PathItem::Segment(s) => {
            let up = s.to > s.from;
            (Some(up), Some(up))
        }
        PathItem::Limit(l) => (Some(l.ascending), l.arrival_up()),
        PathItem::Jump(_) => (None, None),
    }
}

fn jump_kinds(items: &[PathItem]) -> Vec<JumpKind> {
    let mut kinds = Vec::new();
    for (idx, item) in items.iter().enumerate() {
        if let PathItem::Jump(_) = item {
            let incoming = idx.checked_sub(1).and_then(|i| piece_directions(&items[i]).1);
            let outgoing = items.get(idx + 1).and_then(|n| piece_directions(n).0);
            kinds.push(match (incoming, outgoing) {
                (Some(true), Some(true)) => JumpKind::Upward,
                (Some(false), Some(false)) => JumpKind::Downward,
                _ => JumpKind::Inversion,
            });
        }
    }
    kinds
}

/// Per-jump kinds and the overall shape.
pub fn classify(path: &PathRep) -> Classification {
    let kinds = jump_kinds(&path.items);
    let shape = if kinds.is_empty() {
        let dirs: Vec<bool> = path
            .items
            .iter()
            .filter_map(|i| piece_directions(i).0)
            .collect();
        match dirs.first() {
            None => PathShape::Trivial,
            Some(&first) if dirs.iter().all(|&d| d == first) => {
                if first {
                    PathShape::MonotoneUp
                } else {
                    PathShape::MonotoneDown
                }
            }
            Some(_) => PathShape::Oscillating,
        }
    } else if kinds.iter().all(|k| *k == JumpKind::Upward) {
        PathShape::MonotoneUp
    } else if kinds.iter().all(|k| *k == JumpKind::Downward) {
        PathShape::MonotoneDown
    } else {
        PathShape::Oscillating
    };
    Classification { shape, kinds }
}

struct Builder {
    items: Vec<PathItem>,
    address: Address,
    height: Rational,
}

impl Builder {
    fn new(address: Address, height: Rational) -> Self {
        Builder {
            items: Vec::new(),
            address,
            height,
        }
    }

    fn move_to(&mut self, target: &Rational) {
        if *target != self.height {
            self.items.push(PathItem::Segment(Segment {
                address: self.address.clone(),
                from: self.height.clone(),
                to: target.clone(),
            }));
            self.height = target.clone();
        }
    }

    fn jump(&mut self, level: WormholeLevel) {
        self.move_to(&level.value);
        let to = self.address.switch(level.order);
        self.items.push(PathItem::Jump(Jump {
            at: level,
            from_address: self.address.clone(),
            to_address: to.clone(),
            kind: JumpKind::Inversion,
        }));
        self.address = to;
    }

    fn limit(&mut self, limit: Limit) {
        self.address = limit.to_address.clone();
        self.height = limit.to_height.clone();
        self.items.push(PathItem::Limit(limit));
    }

    fn finish(mut self, start: &Point, end: &Point) -> PathRep {
        let kinds = jump_kinds(&self.items);
        let mut kinds = kinds.into_iter();
        for item in &mut self.items {
            if let PathItem::Jump(j) = item {
                j.kind = kinds.next().expect("one kind per jump");
            }
        }
        PathRep {
            start: start.clone(),
            end: end.clone(),
            items: self.items,
        }
    }
}

/// Endpoint representatives that avoid a needless flip at either end.
fn endpoint_addresses(cfg: &SpaceConfig, x: &Point, y: &Point) -> Result<(Address, Address)> {
    let mut px = x.address().clone();
    if let Some(w) = cfg.level_at(x)? {
        if px.digit(w.order) != y.address().digit(w.order) {
            px = px.switch(w.order);
        }
    }
    let mut py = y.address().clone();
    if let Some(w) = cfg.level_at(y)? {
        if py.digit(w.order) != px.digit(w.order) {
            py = py.switch(w.order);
        }
    }
    Ok((px, py))
}

/// `sum of 1/D_k` over the orders `k > after` of `orders`.
///
/// Exact when the set is finite, or when `m` is eventually constant (the
/// eventually periodic set then gives a geometric series). Otherwise an
/// enclosure of width at most `1 / D_(after + 2)`.
pub fn tail_sum(ms: &MSequence, orders: &DifferenceOrders, after: usize) -> Result<Enclosure> {
    let mut partial = Rational::zero();
    let Some(tail) = orders.tail() else {
        for k in orders.iter().filter(|&k| k > after) {
            partial += Rational::new(BigInt::one(), ms.denom(k)?);
        }
        return Ok(Enclosure::Exact(partial));
    };
    match ms.constant_tail() {
        Some((from, c)) => {
            let mut split = (after + 1).max(from).max(tail.start + 1);
            while (split - tail.start - 1) % tail.period != 0 {
                split += 1;
            }
            for k in orders.iter().skip_while(|&k| k <= after).take_while(|&k| k < split) {
                partial += Rational::new(BigInt::one(), ms.denom(k)?);
            }
            let c = Rational::from_integer(c);
            let ratio = c.recip();
            let mut cycle = Rational::zero();
            for &r in &tail.offsets {
                cycle += num_traits::pow(ratio.clone(), r + 1);
            }
            let geometric = cycle / (Rational::one() - num_traits::pow(ratio, tail.period));
            let scale = Rational::from_integer(ms.denom(split - 1)?);
            Ok(Enclosure::Exact(partial + geometric / scale))
        }
        None => {
            let upto = after + 2;
            for k in orders.iter().skip_while(|&k| k <= after).take_while(|&k| k <= upto) {
                partial += Rational::new(BigInt::one(), ms.denom(k)?);
            }
            let n = Rational::from_integer(ms.n().clone());
            let bound = (Rational::from_integer(ms.denom(upto)?) * (n - Rational::one())).recip();
            let hi = &partial + bound;
            Ok(Enclosure::Within(Interval::new(partial, hi)))
        }
    }
}

/// Shortest height interval containing both heights and a level of every
/// order in which the addresses differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalInterval {
    pub a: Rational,
    pub b: Rational,
    /// A level inside `[a, b]` for each required order up to `nested_from`
    /// (all required orders when there are finitely many).
    pub witnesses: BTreeMap<usize, WormholeLevel>,
    /// When set, `[a, b]` holds two distinct levels of order at most this
    /// value, so every higher order also has a level strictly inside.
    pub nested_from: Option<usize>,
}

impl MinimalInterval {
    pub fn width(&self) -> Rational {
        &self.b - &self.a
    }
}

struct IntervalSearch<'a> {
    ms: &'a MSequence,
    orders: &'a DifferenceOrders,
    best: Option<(Rational, Rational, Option<usize>)>,
}

impl IntervalSearch<'_> {
    fn dominated(&self, a: &Rational, b: &Rational) -> bool {
        match &self.best {
            None => false,
            Some((ba, bb, _)) => {
                let (w, bw) = (b - a, bb - ba);
                w > bw || (w == bw && b >= bb)
            }
        }
    }

    fn record(&mut self, a: Rational, b: Rational, nested: Option<usize>) {
        if !self.dominated(&a, &b) {
            self.best = Some((a, b, nested));
        }
    }

    /// Scans orders upward; an unsatisfied required order branches into
    /// extending down or up to its nearest level.
    fn explore(&mut self, a: Rational, b: Rational) -> Result<()> {
        if self.dominated(&a, &b) {
            return Ok(());
        }
        let last = self.orders.last();
        let mut lowest: Option<Rational> = None;
        let mut highest: Option<Rational> = None;
        let mut k = 1;
        loop {
            let first = self.ms.first_in_interval(k, &a, &b)?;
            if first.is_none() && self.orders.contains(k) {
                if let Some(w) = self.ms.below(k, &a)? {
                    self.explore(w.value, b.clone())?;
                }
                if let Some(w) = self.ms.above(k, &b)? {
                    self.explore(a.clone(), w.value)?;
                }
                return Ok(());
            }
            if let Some(w) = first {
                let top = self.ms.last_in_interval(k, &a, &b)?.expect("nonempty");
                if lowest.as_ref().is_none_or(|l| w.value < *l) {
                    lowest = Some(w.value);
                }
                if highest.as_ref().is_none_or(|h| top.value > *h) {
                    highest = Some(top.value);
                }
            }
            if last.is_some_and(|l| k >= l) {
                self.record(a, b, None);
                return Ok(());
            }
            if let (Some(l), Some(h)) = (&lowest, &highest) {
                if l < h {
                    self.record(a, b, Some(k));
                    return Ok(());
                }
            }
            k += 1;
        }
    }
}

/// The minimal height interval for two distinct points.
pub fn minimal_interval(cfg: &SpaceConfig, x: &Point, y: &Point) -> Result<MinimalInterval> {
    if x == y {
        return Err(Error::Degenerate("minimal interval of a point with itself".into()));
    }
    let orders = x.address().difference_orders(y.address());
    let (lo, hi) = ordered(x.height(), y.height());
    let ms = cfg.mseq();
    let (a, b, nested_from) = if orders.is_empty() {
        (lo, hi, None)
    } else {
        let mut search = IntervalSearch {
            ms,
            orders: &orders,
            best: None,
        };
        search.explore(lo, hi)?;
        search.best.expect("some branch always covers every order")
    };
    let horizon = nested_from.or(orders.last()).unwrap_or(0);
    let mut witnesses = BTreeMap::new();
    for k in orders.up_to(horizon) {
        let w = ms
            .first_in_interval(k, &a, &b)?
            .expect("minimal interval covers every required order");
        witnesses.insert(k, w);
    }
    Ok(MinimalInterval {
        a,
        b,
        witnesses,
        nested_from,
    })
}

fn ordered(p: &Rational, q: &Rational) -> (Rational, Rational) {
    if p <= q {
        (p.clone(), q.clone())
    } else {
        (q.clone(), p.clone())
    }
}

/// The metric: `2(b - a) - |h(x) - h(y)|` over the minimal interval.
pub fn distance(cfg: &SpaceConfig, x: &Point, y: &Point) -> Result<Rational> {
    if x == y {
        return Ok(Rational::zero());
    }
    let mi = minimal_interval(cfg, x, y)?;
    Ok(Rational::from_integer(2.into()) * mi.width() - (x.height() - y.height()).abs())
}

/// Level of order `k` one step of `1/D_k` away from `base`, which must be a
/// multiple of `1/D_(k-1)`.
fn step_level(ms: &MSequence, base: &Rational, k: usize, up: bool) -> Result<WormholeLevel> {
    let target = if up {
        ms.above(k, base)?
    } else {
        ms.below(k, base)?
    };
    let level = target.ok_or_else(|| Error::NotFound {
        order: k,
        direction: if up { "above" } else { "below" },
        height: base.to_string(),
    })?;
    debug_assert_eq!((&level.value - base).abs(), Rational::new(BigInt::one(), ms.denom(k)?));
    Ok(level)
}

/// A geodesic: down (or up) to one end of the minimal interval, one
/// monotone sweep across it taking every jump, then straight to the end.
pub fn geodesic_path(cfg: &SpaceConfig, x: &Point, y: &Point, depth: usize) -> Result<PathRep> {
    let mi = minimal_interval(cfg, x, y)?;
    let ms = cfg.mseq();
    let (px, py) = endpoint_addresses(cfg, x, y)?;
    let orders = px.difference_orders(&py);
    let (hx, hy) = (x.height(), y.height());
    let up = hx <= hy;
    let (a, b) = (&mi.a, &mi.b);
    let (lo, hi) = ordered(hx, hy);
    let (sweep_start, sweep_end) = if up { (a, b) } else { (b, a) };

    let finite: Vec<usize> = if orders.is_finite() {
        orders.iter().collect()
    } else {
        orders.up_to(mi.nested_from.expect("infinite difference needs nesting"))
    };
    let mut placed = Vec::with_capacity(finite.len());
    for &k in &finite {
        let w = if up {
            ms.first_in_interval(k, a, b)?
        } else {
            ms.last_in_interval(k, a, b)?
        };
        placed.push(w.ok_or_else(|| Error::Precondition(format!("no level of order {k} in [{a}, {b}]")))?);
    }
    // Turning at an end of the interval happens through the level that forced it.
    for (turn, extended) in [(a, *a < lo), (b, *b > hi)] {
        if extended {
            if let Some(w) = ms.classify_height(turn)? {
                if let Some(slot) = placed.iter_mut().find(|p| p.order == w.order) {
                    *slot = w;
                }
            }
        }
    }
    placed.sort_by(|p, q| {
        let o = p.value.cmp(&q.value);
        if up {
            o
        } else {
            o.reverse()
        }
    });

    // The accumulating run of jumps for orders beyond `nested_from` fits in
    // an open gap of width 1/D_K between consecutive multiples of 1/D_K.
    let chain = match mi.nested_from.filter(|_| !orders.is_finite()) {
        None => None,
        Some(kstar) => {
            let dk = Rational::from_integer(ms.denom(kstar)?);
            let step = dk.recip();
            let edge = if up {
                (a * &dk).ceil() / &dk
            } else {
                (b * &dk).floor() / &dk
            };
            let mut candidates = vec![edge];
            candidates.extend(placed.iter().map(|p| p.value.clone()));
            let fits = |c: &Rational| {
                if up {
                    &(c + &step) <= b
                } else {
                    &(c - &step) >= a
                }
            };
            let base = candidates
                .into_iter()
                .filter(|c| fits(c))
                .reduce(|best, c| {
                    let better = if up { c > best } else { c < best };
                    if better {
                        c
                    } else {
                        best
                    }
                })
                .ok_or_else(|| Error::Precondition("no room for the accumulating jumps".into()))?;
            let position = placed
                .iter()
                .take_while(|p| if up { p.value <= base } else { p.value >= base })
                .count();
            Some((kstar, base, position))
        }
    };

    let mut path = Builder::new(px, hx.clone());
    path.move_to(sweep_start);
    for idx in 0..=placed.len() {
        if let Some((kstar, base, position)) = &chain {
            if *position == idx {
                let next_stop = placed.get(idx).map_or(sweep_end, |p| &p.value).clone();
                let mut remaining_addr = py.clone();
                for p in &placed[idx..] {
                    remaining_addr = remaining_addr.switch(p.order);
                }
                let mut current = base.clone();
                let mut last_order = *kstar;
                for k in orders.iter().skip_while(|&k| k <= *kstar).take(depth) {
                    let level = step_level(ms, &current, k, up)?;
                    current = level.value.clone();
                    last_order = k;
                    path.jump(level);
                }
                let rest = tail_sum(ms, &orders, last_order)?;
                let omega_bar = if up {
                    rest.add_rational(&current)
                } else {
                    negate(&rest).add_rational(&current)
                };
                let from_height = path.height.clone();
                path.limit(Limit {
                    from_address: path.address.clone(),
                    from_height,
                    ascending: up,
                    omega_bar,
                    to_address: remaining_addr,
                    to_height: next_stop,
                    truncated_at: depth,
                });
            }
        }
        if let Some(level) = placed.get(idx) {
            path.jump(level.clone());
        }
    }
    path.move_to(sweep_end);
    path.move_to(hy);
    Ok(path.finish(x, y))
}

fn negate(e: &Enclosure) -> Enclosure {
    match e {
        Enclosure::Exact(r) => Enclosure::Exact(-r),
        Enclosure::Within(iv) => Enclosure::Within(Interval::new(-&iv.hi, -&iv.lo)),
    }
}

/// Jump-selection rule for [`connect`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Lowest differing digit first, through the closest level of that order.
    /// Equidistant levels are resolved by continuing in the current direction.
    Nearest,
    /// Lowest differing digit first, through the closest level on the side
    /// of the end height, so that the run of jumps is one monotone sweep.
    IncreasingOrder,
}

/// A path from `x` to `y` built one differing digit at a time.
pub fn connect(
    cfg: &SpaceConfig,
    x: &Point,
    y: &Point,
    strategy: Strategy,
    depth: usize,
) -> Result<PathRep> {
    let ms = cfg.mseq();
    let (hx, hy) = (x.height(), y.height());
    if x == y {
        return Ok(Builder::new(x.address().clone(), hx.clone()).finish(x, y));
    }
    let (px, py) = endpoint_addresses(cfg, x, y)?;
    let orders = px.difference_orders(&py);
    let sweep_up = hy >= hx;
    let mut path = Builder::new(px, hx.clone());
    let mut heading_up: Option<bool> = None;
    let mut last_order = 0;
    for (taken, k) in orders.iter().enumerate() {
        if !orders.is_finite() && taken == depth.max(1) {
            break;
        }
        let h = path.height.clone();
        let (below, above) = (ms.below(k, &h)?, ms.above(k, &h)?);
        let level = match strategy {
            Strategy::Nearest => match (below, above) {
                (Some(lo), Some(hi)) => match (&hi.value - &h).cmp(&(&h - &lo.value)) {
                    Ordering::Less => hi,
                    Ordering::Greater => lo,
                    Ordering::Equal => {
                        let up = heading_up.unwrap_or(*hy > h);
                        if up {
                            hi
                        } else {
                            lo
                        }
                    }
                },
                (Some(w), None) | (None, Some(w)) => w,
                (None, None) => unreachable!("J_k is nonempty"),
            },
            Strategy::IncreasingOrder => {
                let (first, second) = if sweep_up { (above, below) } else { (below, above) };
                first.or(second).expect("J_k is nonempty")
            }
        };
        heading_up = Some(level.value > h);
        last_order = k;
        path.jump(level);
    }
    if !orders.is_finite() {
        // Past the first jump every later level is one step of 1/D_k away,
        // in a fixed direction.
        let ascending = match strategy {
            Strategy::Nearest => heading_up.expect("at least one jump"),
            Strategy::IncreasingOrder => sweep_up,
        };
        let rest = tail_sum(ms, &orders, last_order)?;
        let omega_bar = if ascending {
            rest.add_rational(&path.height)
        } else {
            negate(&rest).add_rational(&path.height)
        };
        let from_height = path.height.clone();
        path.limit(Limit {
            from_address: path.address.clone(),
            from_height,
            ascending,
            omega_bar,
            to_address: py,
            to_height: hy.clone(),
            truncated_at: depth,
        });
    }
    path.move_to(hy);
    Ok(path.finish(x, y))
}
