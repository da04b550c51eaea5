//! Independent brute-force verification of the Whitney properties.
//!
//! Nothing here reuses the prefix sums, face index or ownership paint of the
//! decomposition: containment is checked cell by cell, distances against
//! every boundary face, and adjacency over all cube pairs.

use crate::whitney::decompose::{box_face_dist_sq, WhitneyDecomposition};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AuditReport {
    pub cubes: usize,
    pub truncated: usize,
    pub w1_failures: usize,
    pub w2_overlaps: usize,
    pub w2_uncovered: usize,
    pub w3_failures: usize,
    pub w4_failures: usize,
    pub touching_pairs: usize,
    pub collar_measure: f64,
}

impl AuditReport {
    pub fn ok(&self) -> bool {
        self.w1_failures == 0
            && self.w2_overlaps == 0
            && self.w2_uncovered == 0
            && self.w3_failures == 0
            && self.w4_failures == 0
    }

    /// `W1 ok W2 ok W3 ok W4 ok collar=<area>`
    pub fn summary_line(&self) -> String {
        let f = |b: bool| if b { "ok" } else { "FAIL" };
        format!(
            "W1 {} W2 {} W3 {} W4 {} collar={}",
            f(self.w1_failures == 0),
            f(self.w2_overlaps == 0 && self.w2_uncovered == 0),
            f(self.w3_failures == 0),
            f(self.w4_failures == 0),
            self.collar_measure
        )
    }
}

/// Exact brute-force distance (cells²) from cube `i` to `∂Ω`.
pub fn brute_dist_sq(dec: &WhitneyDecomposition, i: usize) -> i64 {
    let n = dec.grid().dim();
    let (lo, s) = dec.cube_cells(i);
    let mut hi = lo;
    for a in 0..n {
        hi[a] += s;
    }
    dec.boundary()
        .iter()
        .map(|f| box_face_dist_sq(n, lo, hi, f.axis, f.cell))
        .min()
        .unwrap_or(i64::MAX)
}

pub fn audit(dec: &WhitneyDecomposition) -> AuditReport {
    let g = dec.grid();
    let n = g.dim();
    let m = dec.len();
    let region = dec.region();
    let mut rep = AuditReport {
        cubes: m,
        truncated: dec.cubes().iter().filter(|c| c.truncated).count(),
        collar_measure: dec.collar_measure(),
        ..Default::default()
    };

    // W1: every cell of a non-truncated cube lies in the region
    let w1 = crate::par::map_range(m, |i| {
        if dec.cubes()[i].truncated {
            return false;
        }
        let (lo, s) = dec.cube_cells(i);
        let zr = if n == 3 { s } else { 1 };
        for z in 0..zr {
            for y in 0..s {
                for x in 0..s {
                    match g.index_signed([lo[0] + x, lo[1] + y, lo[2] + z]) {
                        Some(j) if region[j] => {}
                        _ => return true,
                    }
                }
            }
        }
        false
    });
    rep.w1_failures = w1.iter().filter(|&&b| b).count();

    // W2: coverage count per region cell
    let mut cover = vec![0u32; g.len()];
    for i in 0..m {
        let (lo, s) = dec.cube_cells(i);
        let zr = if n == 3 { s } else { 1 };
        for z in 0..zr {
            for y in 0..s {
                for x in 0..s {
                    if let Some(j) = g.index_signed([lo[0] + x, lo[1] + y, lo[2] + z]) {
                        if region[j] {
                            cover[j] += 1;
                        }
                    }
                }
            }
        }
    }
    for j in 0..g.len() {
        if region[j] {
            match cover[j] {
                0 => rep.w2_uncovered += 1,
                1 => {}
                _ => rep.w2_overlaps += 1,
            }
        }
    }

    // W3: l^2 <= d^2 <= 16 n l^2, exact in cell units
    let w3 = crate::par::map_range(m, |i| {
        let c = &dec.cubes()[i];
        if c.truncated || c.synthetic {
            return false;
        }
        let s = dec.side_cells(i);
        let d = brute_dist_sq(dec, i);
        !(s * s <= d && d <= 16 * n as i64 * s * s)
    });
    rep.w3_failures = w3.iter().filter(|&&b| b).count();

    // W4 over all touching pairs, found by a pairwise scan
    let boxes: Vec<([i64; 3], [i64; 3])> = (0..m)
        .map(|i| {
            let (lo, s) = dec.cube_cells(i);
            let mut hi = lo;
            for a in 0..n {
                hi[a] += s;
            }
            (lo, hi)
        })
        .collect();
    let res = crate::par::map_range(m, |i| {
        let (alo, ahi) = boxes[i];
        let si = ahi[0] - alo[0];
        let mut pairs = 0usize;
        let mut bad = 0usize;
        for j in i + 1..m {
            let (blo, bhi) = boxes[j];
            if (0..n).all(|a| alo[a] <= bhi[a] && blo[a] <= ahi[a]) {
                pairs += 1;
                let sj = bhi[0] - blo[0];
                if !(4 * si >= sj && 4 * sj >= si) {
                    bad += 1;
                }
            }
        }
        (pairs, bad)
    });
    for (p, b) in res {
        rep.touching_pairs += p;
        rep.w4_failures += b;
    }
    rep
}
