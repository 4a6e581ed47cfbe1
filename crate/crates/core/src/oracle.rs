//! Brute-force check: shortest paths on a depth-`K` discretization.
//!
//! Vertices are (column, height) pairs where a column is one of the `2^K`
//! digit strings of length `K` and heights are all multiples of `1/D_K` plus
//! any inserted query heights. Vertical edges join consecutive heights in a
//! column; weight-0 wormhole edges join columns differing exactly at digit
//! `k <= K`, at heights of order `k`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fractal::Address;
use crate::numeric::Rational;
use crate::space::{Point, SpaceConfig};

pub const DEFAULT_VERTEX_BUDGET: u128 = 1_000_000;

#[derive(Debug, Clone)]
pub struct ApproxGraph {
    depth: usize,
    heights: Vec<Rational>,
    /// Wormhole order at each height index, 0 when none of order `<= depth`.
    orders: Vec<usize>,
}

/// Edge of the graph, by vertex index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub weight: Rational,
}

impl ApproxGraph {
    pub fn build(cfg: &SpaceConfig, depth: usize, extra_heights: &[Rational]) -> Result<Self> {
        Self::build_with_budget(cfg, depth, extra_heights, DEFAULT_VERTEX_BUDGET)
    }

    pub fn build_with_budget(
        cfg: &SpaceConfig,
        depth: usize,
        extra_heights: &[Rational],
        budget: u128,
    ) -> Result<Self> {
        if depth == 0 {
            return Err(Error::Precondition("graph depth must be at least 1".into()));
        }
        let ms = cfg.mseq();
        let dk = ms.denom(depth)?;
        let columns = 1u128.checked_shl(depth as u32).unwrap_or(u128::MAX);
        let rows = (&dk + 1u32 + BigInt::from(extra_heights.len()))
            .to_u128()
            .unwrap_or(u128::MAX);
        let vertices = columns.saturating_mul(rows);
        if vertices > budget {
            return Err(Error::Budget { vertices, budget });
        }
        let rows = dk.to_u64().expect("within budget");
        let mut heights: Vec<Rational> = (0..=rows)
            .map(|j| Rational::new(BigInt::from(j), dk.clone()))
            .collect();
        for h in extra_heights {
            if *h < Rational::zero() || *h > Rational::from_integer(1.into()) {
                return Err(Error::Precondition(format!("inserted height {h} outside [0, 1]")));
            }
            heights.push(h.clone());
        }
        heights.sort();
        heights.dedup();
        let mut orders = Vec::with_capacity(heights.len());
        for h in &heights {
            let order = match ms.classify_height(h)? {
                Some(w) if w.order <= depth => w.order,
                _ => 0,
            };
            orders.push(order);
        }
        Ok(ApproxGraph {
            depth,
            heights,
            orders,
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn heights(&self) -> &[Rational] {
        &self.heights
    }

    pub fn column_count(&self) -> usize {
        1 << self.depth
    }

    pub fn vertex_count(&self) -> usize {
        self.column_count() * self.heights.len()
    }

    pub fn vertex(&self, column: usize, row: usize) -> usize {
        column * self.heights.len() + row
    }

    /// `(column, row)` of a vertex index.
    pub fn locate(&self, v: usize) -> (usize, usize) {
        (v / self.heights.len(), v % self.heights.len())
    }

    /// Column of the first `depth` digits of an address.
    pub fn column_of(&self, address: &Address) -> usize {
        (1..=self.depth).fold(0, |acc, k| (acc << 1) | address.digit(k) as usize)
    }

    pub fn column_digits(&self, column: usize) -> Vec<u8> {
        (1..=self.depth)
            .map(|k| ((column >> (self.depth - k)) & 1) as u8)
            .collect()
    }

    pub fn row_of(&self, height: &Rational) -> Option<usize> {
        self.heights.binary_search(height).ok()
    }

    fn neighbours(&self, v: usize, out: &mut Vec<(usize, Rational)>) {
        out.clear();
        let (column, row) = self.locate(v);
        if row > 0 {
            out.push((v - 1, &self.heights[row] - &self.heights[row - 1]));
        }
        if row + 1 < self.heights.len() {
            out.push((v + 1, &self.heights[row + 1] - &self.heights[row]));
        }
        let k = self.orders[row];
        if k > 0 {
            let other = column ^ (1 << (self.depth - k));
            out.push((self.vertex(other, row), Rational::zero()));
        }
    }

    /// Every undirected edge once.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        let mut adj = Vec::new();
        for v in 0..self.vertex_count() {
            self.neighbours(v, &mut adj);
            for (u, w) in adj.drain(..) {
                if u > v {
                    out.push(Edge {
                        from: v,
                        to: u,
                        weight: w,
                    });
                }
            }
        }
        out
    }

    pub fn vertex_label(&self, v: usize) -> String {
        let (column, row) = self.locate(v);
        let digits: String = self
            .column_digits(column)
            .iter()
            .map(|d| char::from(b'0' + d))
            .collect();
        format!("{digits}:{}", self.heights[row])
    }

    /// `u v w` lines, one per edge.
    pub fn edgelist(&self) -> String {
        let mut s = String::new();
        for e in self.edges() {
            let _ = writeln!(s, "{} {} {}", self.vertex_label(e.from), self.vertex_label(e.to), e.weight);
        }
        s
    }

    /// Exact shortest distances from a set of zero-cost sources.
    pub fn distances_from(&self, sources: &[usize]) -> Vec<Option<Rational>> {
        let mut dist: Vec<Option<Rational>> = vec![None; self.vertex_count()];
        let mut heap = BinaryHeap::new();
        for &s in sources {
            dist[s] = Some(Rational::zero());
            heap.push(Reverse((Rational::zero(), s)));
        }
        let mut adj = Vec::new();
        while let Some(Reverse((d, v))) = heap.pop() {
            if dist[v].as_ref().is_some_and(|best| *best < d) {
                continue;
            }
            self.neighbours(v, &mut adj);
            for (u, w) in adj.drain(..) {
                let candidate = &d + w;
                if dist[u].as_ref().is_none_or(|best| candidate < *best) {
                    dist[u] = Some(candidate.clone());
                    heap.push(Reverse((candidate, u)));
                }
            }
        }
        dist
    }

    /// Vertex of an address at a row, from its first `depth` digits.
    fn vertex_for(&self, address: &Address, row: usize) -> usize {
        self.vertex(self.column_of(address), row)
    }

    /// Shortest-path distance between two points representable at this depth.
    pub fn graph_distance(&self, cfg: &SpaceConfig, x: &Point, y: &Point) -> Result<Rational> {
        let unrepresentable = |reason: String| Error::NotRepresentable {
            depth: self.depth,
            reason,
        };
        let rx = self
            .row_of(x.height())
            .ok_or_else(|| unrepresentable(format!("height {} is not a grid node", x.height())))?;
        let ry = self
            .row_of(y.height())
            .ok_or_else(|| unrepresentable(format!("height {} is not a grid node", y.height())))?;
        let xs = cfg.preimages(x)?;
        let ys = cfg.preimages(y)?;
        let mut best: Option<Rational> = None;
        for (ax, _) in &xs {
            let dist = self.distances_from(&[self.vertex_for(ax, rx)]);
            for (ay, _) in &ys {
                let orders = ax.difference_orders(ay);
                if !orders.last().map_or(orders.is_empty(), |l| l <= self.depth) {
                    continue;
                }
                if let Some(d) = &dist[self.vertex_for(ay, ry)] {
                    if best.as_ref().is_none_or(|b| d < b) {
                        best = Some(d.clone());
                    }
                }
            }
        }
        best.ok_or_else(|| unrepresentable(format!("{x} and {y} differ beyond digit {}", self.depth)))
    }

    /// The canonical point at a vertex, with zero digits past the depth.
    pub fn point_at(&self, cfg: &SpaceConfig, v: usize) -> Result<Point> {
        let (column, row) = self.locate(v);
        cfg.canonicalize(Address::finite(&self.column_digits(column)), self.heights[row].clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, rat};

    #[test]
    fn order_one_graph() {
        let cfg = SpaceConfig::middle_third();
        let g = ApproxGraph::build(&cfg, 1, &[]).unwrap();
        assert_eq!(g.column_count(), 2);
        assert_eq!(g.heights(), &[int(0), rat(1, 3), rat(2, 3), int(1)]);
        let worm: Vec<_> = g.edges().into_iter().filter(|e| e.weight.is_zero()).collect();
        assert_eq!(worm.len(), 2);
        let x = cfg.parse_point("0@0").unwrap();
        let y = cfg.parse_point("0@1").unwrap();
        assert_eq!(g.graph_distance(&cfg, &x, &y).unwrap(), int(1));
        assert_eq!(g.graph_distance(&cfg, &x, &x).unwrap(), int(0));
    }

    #[test]
    fn order_two_wormholes() {
        let cfg = SpaceConfig::middle_third();
        let g = ApproxGraph::build(&cfg, 2, &[]).unwrap();
        let mut at: Vec<_> = g
            .edges()
            .into_iter()
            .filter(|e| e.weight.is_zero())
            .filter(|e| g.locate(e.from).0 ^ g.locate(e.to).0 == 1)
            .map(|e| g.heights()[g.locate(e.from).1].clone())
            .collect();
        at.sort();
        at.dedup();
        let expected: Vec<_> = [1, 2, 4, 5, 7, 8].iter().map(|&j| rat(j, 9)).collect();
        assert_eq!(at, expected);
    }

    #[test]
    fn inserted_heights_split_edges() {
        let cfg = SpaceConfig::middle_third();
        let g = ApproxGraph::build(&cfg, 1, &[rat(1, 5)]).unwrap();
        assert_eq!(g.heights()[1], rat(1, 5));
        let e = g.edges();
        assert!(e.iter().any(|e| e.weight == rat(1, 5)));
        assert!(e.iter().any(|e| e.weight == rat(2, 15)));
    }

    #[test]
    fn worked_example_on_the_graph() {
        let cfg = SpaceConfig::middle_third();
        let g = ApproxGraph::build(&cfg, 3, &[rat(1, 5), rat(1, 10)]).unwrap();
        let x = cfg.parse_point("0@1/5").unwrap();
        let y = cfg.parse_point("101(0)@1/10").unwrap();
        assert_eq!(g.graph_distance(&cfg, &x, &y).unwrap(), rat(11, 30));
        let far = cfg.parse_point("1011(0)@1/10").unwrap();
        assert!(g.graph_distance(&cfg, &x, &far).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let cfg = SpaceConfig::middle_third();
        assert!(matches!(
            ApproxGraph::build(&cfg, 12, &[]),
            Err(Error::Budget { .. })
        ));
    }
}
