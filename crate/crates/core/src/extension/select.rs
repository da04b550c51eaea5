//! Majority selection of Whitney cubes.
//!
//! `A'` takes every interior cube more than half filled by `A`. `A₀` takes
//! every exterior cube `Q̃` whose `c`-dilate holds more of `A'` than of
//! `Ω ∖ A'`. Truncated cubes take part as ordinary selection units (their
//! region cells stand in for the cube), so the collar is assigned as well.
//! Both tests are strict; ties are left out.

use crate::grid::{Grid, PrefixCount};
use crate::whitney::decompose::{WhitneyDecomposition, NO_OWNER};

/// Selected cubes and their union on the decomposition grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Selection {
    pub mask: Vec<bool>,
    pub cubes: Vec<usize>,
    /// Cubes left out because their dilate leaves the working box.
    pub flagged: Vec<usize>,
}

fn paint(dec: &WhitneyDecomposition, chosen: &[bool]) -> Vec<bool> {
    dec.owner()
        .iter()
        .map(|&o| o != NO_OWNER && chosen[o as usize])
        .collect()
}

fn box_count(pc: &PrefixCount, lo: [i64; 3], s: i64, dim: usize) -> u64 {
    let mut hi = [1i64; 3];
    for a in 0..3 {
        hi[a] = if a < dim { lo[a] + s } else { lo[a] + 1 };
    }
    pc.count(lo, hi)
}

/// `A' = ∪ {Q_i : |A ∩ Q_i| > ½|Q_i ∩ Ω|}` for a mask on the decomposition grid.
pub fn select_a_prime(a: &[bool], dec: &WhitneyDecomposition) -> Selection {
    let g = dec.grid();
    let n = g.dim();
    let pa = PrefixCount::new(g, a);
    let pr = PrefixCount::new(g, dec.region());
    let chosen = crate::par::map_range(dec.len(), |i| {
        let (lo, s) = dec.cube_cells(i);
        2 * box_count(&pa, lo, s, n) > box_count(&pr, lo, s, n)
    });
    Selection {
        mask: paint(dec, &chosen),
        cubes: (0..dec.len()).filter(|&i| chosen[i]).collect(),
        flagged: Vec::new(),
    }
}

/// Cells of `grid` (local, half-open) whose centers lie in the closed box
/// `[lo, hi]` given in absolute cell units.
fn center_range(grid: &Grid, lo: [f64; 3], hi: [f64; 3]) -> ([i64; 3], [i64; 3]) {
    let o = grid.origin();
    let mut a = [0i64; 3];
    let mut b = [1i64; 3];
    for ax in 0..grid.dim() {
        a[ax] = (lo[ax] - 0.5).ceil() as i64 - o[ax];
        b[ax] = (hi[ax] - 0.5).floor() as i64 + 1 - o[ax];
    }
    (a, b)
}

/// The dilated-majority counts `(|cQ̃ ∩ A'|, |cQ̃ ∩ (Ω ∖ A')|)` in cells, and
/// whether the dilate leaves the exterior grid.
pub fn dilate_counts(
    i: usize,
    ext: &WhitneyDecomposition,
    c: f64,
    omega_grid: &Grid,
    pa: &PrefixCount,
    prest: &PrefixCount,
) -> (u64, u64, bool) {
    let eg = ext.grid();
    let n = eg.dim();
    let (lo, s) = ext.cube_cells(i);
    let eo = eg.origin();
    let half = 0.5 * c * s as f64;
    let mut dlo = [0.0; 3];
    let mut dhi = [0.0; 3];
    let mut exits = false;
    for ax in 0..n {
        let center = (lo[ax] + eo[ax]) as f64 + 0.5 * s as f64;
        dlo[ax] = center - half;
        dhi[ax] = center + half;
        exits |= dlo[ax] < eo[ax] as f64 || dhi[ax] > (eo[ax] + eg.dims()[ax] as i64) as f64;
    }
    let (a, b) = center_range(omega_grid, dlo, dhi);
    (pa.count(a, b), prest.count(a, b), exits)
}

/// `A₀ = ∪ {Q̃ : |cQ̃ ∩ A'| > |cQ̃ ∩ (Ω ∖ A')|}`. `a_prime` and `omega` live
/// on `omega_grid`; the result lives on the exterior grid. Synthetic cubes
/// whose dilate leaves the exterior grid are flagged and not selected.
pub fn select_a0(
    a_prime: &[bool],
    omega: &[bool],
    omega_grid: &Grid,
    ext: &WhitneyDecomposition,
    c: f64,
) -> Selection {
    let rest: Vec<bool> = omega.iter().zip(a_prime).map(|(&o, &a)| o && !a).collect();
    let pa = PrefixCount::new(omega_grid, a_prime);
    let prest = PrefixCount::new(omega_grid, &rest);
    let res = crate::par::map_range(ext.len(), |i| {
        let (na, nr, exits) = dilate_counts(i, ext, c, omega_grid, &pa, &prest);
        if exits && ext.cubes()[i].synthetic {
            (false, true)
        } else {
            (na > nr, false)
        }
    });
    let chosen: Vec<bool> = res.iter().map(|r| r.0).collect();
    Selection {
        mask: paint(ext, &chosen),
        cubes: (0..ext.len()).filter(|&i| chosen[i]).collect(),
        flagged: (0..ext.len()).filter(|&i| res[i].1).collect(),
    }
}
