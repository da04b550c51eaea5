//! Decomposition of a planar voxel boundary into simple closed loops.
//!
//! Every interface edge is oriented with the set on its left, so outer
//! boundaries run counter-clockwise and holes clockwise. At a vertex where
//! two set cells meet only diagonally the tracer turns left, keeping the two
//! cells on separate loops. A traced cycle that still revisits a vertex is
//! cut there into smaller cycles, so every loop is simple.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::grid::interface_faces;
use crate::perimeter::voxelset::VoxelSet;

#[derive(Clone, Debug, PartialEq)]
pub struct JordanLoop {
    /// Absolute vertex coordinates in cell units; the loop closes implicitly.
    pub vertices: Vec<[i64; 2]>,
    /// Twice the signed area in cell units (positive for counter-clockwise loops).
    pub signed_area2: i64,
    /// Smallest loop enclosing this one.
    pub parent: Option<usize>,
    pub depth: usize,
}

impl JordanLoop {
    pub fn edge_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn length(&self, h: f64) -> f64 {
        self.vertices.len() as f64 * h
    }

    pub fn area(&self, h: f64) -> f64 {
        0.5 * self.signed_area2 as f64 * h * h
    }

    pub fn is_outer(&self) -> bool {
        self.signed_area2 > 0
    }

    /// Winding number around a point given in cell units.
    pub fn winding(&self, p: [f64; 2]) -> i32 {
        let m = self.vertices.len();
        let mut w = 0;
        for i in 0..m {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % m];
            if a[0] != b[0] || (a[0] as f64) <= p[0] {
                continue;
            }
            let (y0, y1) = (a[1] as f64, b[1] as f64);
            if y0 < y1 && p[1] > y0 && p[1] < y1 {
                w += 1;
            } else if y1 < y0 && p[1] > y1 && p[1] < y0 {
                w -= 1;
            }
        }
        w
    }

    /// Absolute coordinates of the vertices.
    pub fn points(&self, h: f64) -> Vec<[f64; 2]> {
        self.vertices.iter().map(|v| [v[0] as f64 * h, v[1] as f64 * h]).collect()
    }

    /// A point just left of the first edge, strictly inside a cell.
    fn probe(&self) -> [f64; 2] {
        let a = self.vertices[0];
        let b = self.vertices[1 % self.vertices.len()];
        let d = [(b[0] - a[0]) as f64, (b[1] - a[1]) as f64];
        let mid = [0.5 * (a[0] + b[0]) as f64, 0.5 * (a[1] + b[1]) as f64];
        [mid[0] - 0.25 * d[1], mid[1] + 0.25 * d[0]]
    }
}

/// Unit edges of the oriented interface, as (start, end) absolute vertices.
fn oriented_edges(a: &VoxelSet) -> Vec<([i64; 2], [i64; 2])> {
    let g = a.grid();
    let o = g.origin();
    interface_faces(g, a.mask())
        .into_iter()
        .map(|f| {
            let high_in = a.contains_signed(f.high_cell());
            let (x, y) = (f.cell[0] + o[0], f.cell[1] + o[1]);
            match (f.axis, high_in) {
                (0, true) => ([x, y + 1], [x, y]),
                (0, false) => ([x, y], [x, y + 1]),
                (_, true) => ([x, y], [x + 1, y]),
                (_, false) => ([x + 1, y], [x, y]),
            }
        })
        .collect()
}

/// Turn preference: left, straight, right.
fn turn_rank(din: [i64; 2], dout: [i64; 2]) -> u8 {
    let cross = din[0] * dout[1] - din[1] * dout[0];
    if cross > 0 {
        0
    } else if cross == 0 {
        1
    } else {
        2
    }
}

fn split_simple(cycle: Vec<[i64; 2]>, out: &mut Vec<Vec<[i64; 2]>>) {
    let mut stack = vec![cycle];
    while let Some(c) = stack.pop() {
        let mut seen: HashMap<[i64; 2], usize> = HashMap::new();
        let mut cut = None;
        for (j, v) in c.iter().enumerate() {
            if let Some(&i) = seen.get(v) {
                cut = Some((i, j));
                break;
            }
            seen.insert(*v, j);
        }
        match cut {
            None => out.push(c),
            Some((i, j)) => {
                let inner: Vec<[i64; 2]> = c[i..j].to_vec();
                let mut rest: Vec<[i64; 2]> = c[..i].to_vec();
                rest.extend_from_slice(&c[j..]);
                stack.push(inner);
                stack.push(rest);
            }
        }
    }
}

fn shoelace2(v: &[[i64; 2]]) -> i64 {
    let m = v.len();
    (0..m).map(|i| v[i][0] * v[(i + 1) % m][1] - v[(i + 1) % m][0] * v[i][1]).sum()
}

/// Simple oriented loops of `∂A` with their nesting forest.
pub fn jordan_loops(a: &VoxelSet) -> Result<Vec<JordanLoop>> {
    if a.dim() != 2 {
        return Err(Error::InvalidArgument("loop decomposition is planar".into()));
    }
    let edges = oriented_edges(a);
    let mut out_of: HashMap<[i64; 2], Vec<usize>> = HashMap::with_capacity(edges.len());
    for (i, e) in edges.iter().enumerate() {
        out_of.entry(e.0).or_default().push(i);
    }
    let dir = |i: usize| [edges[i].1[0] - edges[i].0[0], edges[i].1[1] - edges[i].0[1]];
    let succ: Vec<usize> = (0..edges.len())
        .map(|i| {
            let din = dir(i);
            *out_of[&edges[i].1].iter().min_by_key(|&&j| turn_rank(din, dir(j))).unwrap()
        })
        .collect();
    let mut used = vec![false; edges.len()];
    let mut cycles = Vec::new();
    for s in 0..edges.len() {
        if used[s] {
            continue;
        }
        let mut verts = Vec::new();
        let mut e = s;
        while !used[e] {
            used[e] = true;
            verts.push(edges[e].0);
            e = succ[e];
        }
        split_simple(verts, &mut cycles);
    }
    let mut loops: Vec<JordanLoop> = cycles
        .into_iter()
        .map(|v| {
            let s = shoelace2(&v);
            JordanLoop { vertices: v, signed_area2: s, parent: None, depth: 0 }
        })
        .collect();
    // deterministic order: by lowest vertex, then orientation
    loops.sort_by_key(|l| (*l.vertices.iter().min().unwrap(), -l.signed_area2));
    let probes: Vec<[f64; 2]> = loops.iter().map(|l| l.probe()).collect();
    let parents: Vec<Option<usize>> = crate::par::map_range(loops.len(), |i| {
        let mine = loops[i].signed_area2.abs();
        (0..loops.len())
            .filter(|&j| j != i && loops[j].signed_area2.abs() > mine && loops[j].winding(probes[i]) != 0)
            .min_by_key(|&j| loops[j].signed_area2.abs())
    });
    for (i, p) in parents.iter().enumerate() {
        loops[i].parent = *p;
    }
    for i in 0..loops.len() {
        let mut d = 0;
        let mut p = loops[i].parent;
        while let Some(j) = p {
            d += 1;
            p = loops[j].parent;
        }
        loops[i].depth = d;
    }
    Ok(loops)
}
