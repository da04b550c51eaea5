//! Shortest paths on the cell lattice under the weight `dist(z, ∂Ω)^{1-p}`.
//!
//! Nodes are the cells of one side (inside or outside `Ω`), edges join
//! 8-neighbours in 2D and 26-neighbours in 3D. An edge costs its length
//! times the weight at its midpoint, which is a half-grid point, so the
//! distance is read off the field without interpolation. A move is allowed
//! only when every cell whose closure holds the midpoint is on the same
//! side, so no edge slips through a pinch point of `∂Ω`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::geometry::distance::{distance_transform, DistanceField};
use crate::geometry::domain::VoxelDomain;
use crate::grid::Grid;

/// Which side of `∂Ω` the path runs on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathSide {
    Complement,
    Interior,
}

/// Line density along the path as a function of the distance to `∂Ω`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Weight {
    /// `d^{1-p}`, `1 < p < 2`.
    Power(f64),
    /// Length only. Cells next to `∂Ω` are closed to the path except at its ends.
    Unit,
    /// `1/d`, the quasi-hyperbolic length.
    InverseDistance,
}

impl Weight {
    /// `p = 1` gives [`Weight::Unit`], `1 < p < 2` gives [`Weight::Power`].
    pub fn from_exponent(p: f64) -> Result<Self> {
        if p == 1.0 {
            Ok(Weight::Unit)
        } else if p > 1.0 && p < 2.0 {
            Ok(Weight::Power(p))
        } else {
            Err(Error::UnsupportedExponent(p))
        }
    }

    #[inline]
    pub fn at(&self, d: f64) -> f64 {
        match *self {
            Weight::Power(p) => d.powf(1.0 - p),
            Weight::Unit => 1.0,
            Weight::InverseDistance => 1.0 / d,
        }
    }

    /// Cost of a straight segment of length `len` along which the distance
    /// runs linearly from `d0` to `d1`. An inverse weight starting on `∂Ω`
    /// is charged at `d1` instead, since its integral diverges.
    pub fn segment(&self, len: f64, d0: f64, d1: f64) -> f64 {
        if len == 0.0 {
            return 0.0;
        }
        let (a, b) = if d0 <= d1 { (d0, d1) } else { (d1, d0) };
        match *self {
            Weight::Unit => len,
            _ if b - a <= 1e-12 * b => len * self.at(b),
            Weight::Power(p) => len * (b.powf(2.0 - p) - a.powf(2.0 - p)) / ((2.0 - p) * (b - a)),
            Weight::InverseDistance if a == 0.0 => len / b,
            Weight::InverseDistance => len * (b / a).ln() / (b - a),
        }
    }
}

/// `Ω` on a grid large enough for the search, with its distance field.
#[derive(Clone, Debug)]
pub struct CurveContext {
    domain: VoxelDomain,
    dist: DistanceField,
}

impl CurveContext {
    /// Grows the grid by `margin` on every side (complement searches need room).
    pub fn new(dom: &VoxelDomain, margin: f64) -> Result<Self> {
        let domain = if margin > 0.0 { dom.with_margin(margin)? } else { dom.clone() };
        let dist = distance_transform(&domain);
        Ok(CurveContext { domain, dist })
    }

    /// Margin equal to the domain diameter.
    pub fn complement(dom: &VoxelDomain) -> Result<Self> {
        Self::new(dom, dom.diameter())
    }

    pub fn interior(dom: &VoxelDomain) -> Self {
        CurveContext { domain: dom.clone(), dist: distance_transform(dom) }
    }

    pub fn domain(&self) -> &VoxelDomain {
        &self.domain
    }
    pub fn grid(&self) -> &Grid {
        self.domain.grid()
    }
    pub fn dist(&self) -> &DistanceField {
        &self.dist
    }
}

/// A lattice path from `z₁` to `z₂`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicPath {
    /// `z₁`, the cell centers visited, `z₂`.
    pub points: Vec<[f64; 3]>,
    /// Distance to `∂Ω` at each point.
    pub dists: Vec<f64>,
    pub edge_lengths: Vec<f64>,
    pub edge_costs: Vec<f64>,
    pub cost: f64,
    pub length: f64,
}

impl GeodesicPath {
    fn single(z: [f64; 3], d: f64) -> Self {
        GeodesicPath { points: vec![z], dists: vec![d], edge_lengths: Vec::new(), edge_costs: Vec::new(), cost: 0.0, length: 0.0 }
    }

    pub fn edge_count(&self) -> usize {
        self.edge_lengths.len()
    }

    /// Arc length from `z₁` to each point.
    pub fn arc_lengths(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.points.len());
        let mut t = 0.0;
        out.push(0.0);
        for l in &self.edge_lengths {
            t += l;
            out.push(t);
        }
        out
    }

    pub fn reversed(&self) -> Self {
        let mut r = self.clone();
        r.points.reverse();
        r.dists.reverse();
        r.edge_lengths.reverse();
        r.edge_costs.reverse();
        r
    }
}

struct Move {
    offset: [i64; 3],
    /// Cells (relative to the source) whose closures hold the midpoint.
    block: Vec<[i64; 3]>,
    len_cells: f64,
}

fn moves(dim: usize) -> Vec<Move> {
    let g = Grid::unit(dim, 0).expect("unit grid");
    g.neighbor_offsets()
        .into_iter()
        .map(|o| {
            let axes: Vec<usize> = (0..3).filter(|&a| o[a] != 0).collect();
            let block = (0..1usize << axes.len())
                .map(|m| {
                    let mut c = [0i64; 3];
                    for (b, &a) in axes.iter().enumerate() {
                        if m >> b & 1 == 1 {
                            c[a] = o[a];
                        }
                    }
                    c
                })
                .collect();
            Move { offset: o, block, len_cells: (axes.len() as f64).sqrt() }
        })
        .collect()
}

/// The weighted lattice graph of one side of `∂Ω`.
pub struct LatticeGraph<'c> {
    ctx: &'c CurveContext,
    side: PathSide,
    weight: Weight,
    on_side: Vec<bool>,
    /// Cells next to `∂Ω`, closed to the interior of unit-weight paths.
    closed: Vec<bool>,
    moves: Vec<Move>,
}

/// An endpoint snapped to the half grid, with its entry cells and costs.
#[derive(Clone, Debug, PartialEq)]
pub struct Attachment {
    pub point: [f64; 3],
    pub half: [usize; 3],
    pub dist: f64,
    pub cells: Vec<(usize, f64)>,
}

impl<'c> LatticeGraph<'c> {
    pub fn new(ctx: &'c CurveContext, side: PathSide, weight: Weight) -> Self {
        let g = ctx.grid();
        let occ = ctx.domain().occupancy();
        let on_side: Vec<bool> = occ
            .iter()
            .map(|&o| match side {
                PathSide::Interior => o,
                PathSide::Complement => !o,
            })
            .collect();
        let closed = if weight == Weight::Unit {
            let faces = ctx.domain().boundary_faces();
            let mut c = vec![false; g.len()];
            for f in faces {
                for cell in [f.low_cell(), f.high_cell()] {
                    if let Some(i) = g.index_signed(cell) {
                        if on_side[i] {
                            c[i] = true;
                        }
                    }
                }
            }
            c
        } else {
            Vec::new()
        };
        LatticeGraph { ctx, side, weight, on_side, closed, moves: moves(g.dim()) }
    }

    pub fn context(&self) -> &CurveContext {
        self.ctx
    }
    pub fn side(&self) -> PathSide {
        self.side
    }
    pub fn weight(&self) -> Weight {
        self.weight
    }
    pub fn node_count(&self) -> usize {
        self.on_side.len()
    }
    pub fn is_node(&self, i: usize) -> bool {
        self.on_side[i]
    }
    /// Whether a unit-weight path may pass through cell `i`.
    pub fn is_open(&self, i: usize) -> bool {
        self.on_side[i] && (self.closed.is_empty() || !self.closed[i])
    }

    #[inline]
    fn side_signed(&self, c: [i64; 3]) -> bool {
        self.ctx.grid().index_signed(c).map(|i| self.on_side[i]).unwrap_or(false)
    }

    /// Calls `f(j, cost)` for every edge out of node `i`.
    pub fn for_each_edge(&self, i: usize, mut f: impl FnMut(usize, f64)) {
        let g = self.ctx.grid();
        let c = g.coords(i);
        let ci = [c[0] as i64, c[1] as i64, c[2] as i64];
        let h = g.h();
        for m in &self.moves {
            if !m.block.iter().all(|b| self.side_signed([ci[0] + b[0], ci[1] + b[1], ci[2] + b[2]])) {
                continue;
            }
            let t = [ci[0] + m.offset[0], ci[1] + m.offset[1], ci[2] + m.offset[2]];
            let j = g.index_signed(t).expect("block membership implies in-grid");
            let mut hc = [0usize; 3];
            for a in 0..3 {
                hc[a] = (2 * ci[a] + 1 + m.offset[a]) as usize;
            }
            if g.dim() == 2 {
                hc[2] = 0;
            }
            let d = self.ctx.dist().dist_half(hc);
            f(j, m.len_cells * h * self.weight.at(d));
        }
    }

    /// Snaps `z` to the nearest half-grid point and lists the side cells
    /// whose closures contain it, each with the cost of the straight segment
    /// from the point to the cell center.
    pub fn attach(&self, z: [f64; 3]) -> Result<Attachment> {
        let g = self.ctx.grid();
        let o = g.origin();
        let hd = g.half_dims();
        let h2 = 0.5 * g.h();
        let mut half = [0usize; 3];
        for a in 0..g.dim() {
            let v = (z[a] / h2).round() as i64 - 2 * o[a];
            if v < 0 || v >= hd[a] as i64 {
                return Err(Error::InvalidArgument(format!("endpoint {z:?} outside the grid")));
            }
            half[a] = v as usize;
        }
        let point = g.half_point(half);
        let dist = self.ctx.dist().dist_half(half);
        // candidate cell coordinates per axis
        let mut cand: Vec<[i64; 3]> = vec![[0; 3]];
        for a in 0..g.dim() {
            let v = half[a] as i64;
            let opts: Vec<i64> = if v % 2 == 1 { vec![(v - 1) / 2] } else { vec![v / 2 - 1, v / 2] };
            cand = cand
                .into_iter()
                .flat_map(|c| {
                    opts.iter().map(move |&x| {
                        let mut c = c;
                        c[a] = x;
                        c
                    })
                })
                .collect();
        }
        let mut cells = Vec::new();
        for c in cand {
            if let Some(i) = g.index_signed(c) {
                if self.on_side[i] {
                    let len = g.distance(point, g.center(g.coords(i)));
                    cells.push((i, self.weight.segment(len, dist, self.ctx.dist().cell(i))));
                }
            }
        }
        if cells.is_empty() {
            return Err(Error::InvalidArgument(format!("endpoint {z:?} does not touch the path side")));
        }
        Ok(Attachment { point, half, dist, cells })
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Entry(f64, u32);

impl Eq for Entry {}
impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}
impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

const NONE: u32 = u32::MAX;

/// Multi-source, multi-target Dijkstra. Sources and targets carry entry and
/// exit costs. Returns the total cost and the node sequence, or `None` if no
/// target is reachable.
pub fn dijkstra(graph: &LatticeGraph, sources: &[(usize, f64)], targets: &[(usize, f64)]) -> Option<(f64, Vec<usize>)> {
    let n = graph.node_count();
    let sink = n as u32;
    let mut dist = vec![f64::INFINITY; n + 1];
    let mut prev = vec![NONE; n + 1];
    let mut exit = std::collections::HashMap::new();
    for &(t, c) in targets {
        let e = exit.entry(t).or_insert(f64::INFINITY);
        *e = f64::min(*e, c);
    }
    let mut heap = BinaryHeap::new();
    for &(s, c) in sources {
        if c < dist[s] {
            dist[s] = c;
            heap.push(Entry(c, s as u32));
        }
    }
    let unit = graph.weight() == Weight::Unit;
    while let Some(Entry(d, u)) = heap.pop() {
        if d > dist[u as usize] {
            continue;
        }
        if u == sink {
            let mut path = Vec::new();
            let mut v = prev[sink as usize];
            while v != NONE {
                path.push(v as usize);
                v = prev[v as usize];
            }
            path.reverse();
            return Some((d, path));
        }
        let ui = u as usize;
        if let Some(&c) = exit.get(&ui) {
            let nd = d + c;
            if nd < dist[n] {
                dist[n] = nd;
                prev[n] = u;
                heap.push(Entry(nd, sink));
            }
        }
        graph.for_each_edge(ui, |j, w| {
            if unit && !graph.is_open(j) && !exit.contains_key(&j) {
                return;
            }
            let nd = d + w;
            if nd < dist[j] {
                dist[j] = nd;
                prev[j] = u;
                heap.push(Entry(nd, j as u32));
            }
        });
    }
    None
}

/// Least-cost lattice path between two points on the closure of the side.
pub fn geodesic_on(graph: &LatticeGraph, z1: [f64; 3], z2: [f64; 3]) -> Result<GeodesicPath> {
    let a = graph.attach(z1)?;
    let b = graph.attach(z2)?;
    if a.half == b.half {
        return Ok(GeodesicPath::single(a.point, a.dist));
    }
    let (cost, nodes) = dijkstra(graph, &a.cells, &b.cells).ok_or(Error::Unreachable)?;
    let g = graph.context().grid();
    let dist = graph.context().dist();
    let mut points = vec![a.point];
    let mut dists = vec![a.dist];
    for &i in &nodes {
        points.push(g.center(g.coords(i)));
        dists.push(dist.cell(i));
    }
    points.push(b.point);
    dists.push(b.dist);
    let mut edge_costs = Vec::with_capacity(nodes.len() + 1);
    let entry = |att: &Attachment, i: usize| att.cells.iter().find(|c| c.0 == i).map(|c| c.1).expect("entry cell");
    edge_costs.push(entry(&a, nodes[0]));
    for w in nodes.windows(2) {
        let mut c = f64::NAN;
        graph.for_each_edge(w[0], |j, x| {
            if j == w[1] {
                c = x;
            }
        });
        edge_costs.push(c);
    }
    edge_costs.push(entry(&b, *nodes.last().expect("nonempty")));
    let edge_lengths: Vec<f64> = points.windows(2).map(|w| g.distance(w[0], w[1])).collect();
    let length = edge_lengths.iter().sum();
    Ok(GeodesicPath { points, dists, edge_lengths, edge_costs, cost, length })
}

/// `weighted_geodesic` with the weight chosen from `p` (`p = 1` is the unit
/// weight that avoids `∂Ω`).
pub fn weighted_geodesic(ctx: &CurveContext, z1: [f64; 3], z2: [f64; 3], p: f64, side: PathSide) -> Result<GeodesicPath> {
    let graph = LatticeGraph::new(ctx, side, Weight::from_exponent(p)?);
    geodesic_on(&graph, z1, z2)
}
