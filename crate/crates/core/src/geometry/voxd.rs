//! The `VOXD1` domain file format.
//!
//! ```text
//! VOXD1
//! dim 2
//! K 6
//! bbox 0 0 1 1
//! generator cube dim=2
//! bytes 512
//! <raw occupancy bits, x fastest, least significant bit first>
//! ```
//!
//! Box corners are reduced dyadic fractions such as `-1/2` or `3`.

use std::io::Write;

use crate::error::{Error, Result};
use crate::geometry::domain::VoxelDomain;
use crate::grid::Grid;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn dyadic_string(cells: i64, k: u32) -> String {
    let den = 1i64 << k;
    let g = gcd(cells, den).max(1);
    let (n, d) = (cells / g, den / g);
    if d == 1 {
        n.to_string()
    } else {
        format!("{n}/{d}")
    }
}

fn parse_dyadic(s: &str, k: u32) -> Result<i64> {
    let bad = || Error::Format(format!("bad bbox coordinate `{s}`"));
    let (n, d) = match s.split_once('/') {
        Some((a, b)) => (a.parse::<i64>().map_err(|_| bad())?, b.parse::<i64>().map_err(|_| bad())?),
        None => (s.parse::<i64>().map_err(|_| bad())?, 1),
    };
    let den = 1i64 << k;
    if d <= 0 || (n * den) % d != 0 {
        return Err(bad());
    }
    Ok(n * den / d)
}

/// Serializes a domain.
pub fn write_voxd(dom: &VoxelDomain) -> Vec<u8> {
    let g = dom.grid();
    let (lo, hi) = g.bbox_cells();
    let n = g.dim();
    let k = g.level();
    let corners: Vec<String> = lo[..n]
        .iter()
        .chain(hi[..n].iter())
        .map(|&c| dyadic_string(c, k))
        .collect();
    let nbytes = g.len().div_ceil(8);
    let mut bits = vec![0u8; nbytes];
    for (i, &b) in dom.occupancy().iter().enumerate() {
        if b {
            bits[i / 8] |= 1 << (i % 8);
        }
    }
    let mut out = Vec::with_capacity(nbytes + 128);
    let _ = write!(
        out,
        "VOXD1\ndim {n}\nK {k}\nbbox {}\ngenerator {}\nbytes {nbytes}\n",
        corners.join(" "),
        dom.name()
    );
    out.extend_from_slice(&bits);
    out
}

/// Parses a domain written by [`write_voxd`].
pub fn read_voxd(data: &[u8]) -> Result<VoxelDomain> {
    let mut pos = 0usize;
    let mut next_line = || -> Result<String> {
        let end = data[pos..]
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| Error::Format("truncated header".into()))?;
        let line = std::str::from_utf8(&data[pos..pos + end])
            .map_err(|_| Error::Format("header is not UTF-8".into()))?
            .to_string();
        pos += end + 1;
        Ok(line)
    };
    if next_line()? != "VOXD1" {
        return Err(Error::Format("missing VOXD1 magic".into()));
    }
    let field = |line: String, key: &str| -> Result<String> {
        line.strip_prefix(key)
            .and_then(|r| r.strip_prefix(' '))
            .map(|s| s.to_string())
            .ok_or_else(|| Error::Format(format!("expected `{key}` line")))
    };
    let n: usize = field(next_line()?, "dim")?
        .parse()
        .map_err(|_| Error::Format("bad dim".into()))?;
    let k: u32 = field(next_line()?, "K")?.parse().map_err(|_| Error::Format("bad K".into()))?;
    if !(n == 2 || n == 3) || k > 40 {
        return Err(Error::Format("dimension or level out of range".into()));
    }
    let bbox = field(next_line()?, "bbox")?;
    let parts: Vec<&str> = bbox.split_whitespace().collect();
    if parts.len() != 2 * n {
        return Err(Error::Format("wrong number of bbox coordinates".into()));
    }
    let mut lo = [0i64; 3];
    let mut hi = [0i64; 3];
    for a in 0..n {
        lo[a] = parse_dyadic(parts[a], k)?;
        hi[a] = parse_dyadic(parts[n + a], k)?;
    }
    let name = field(next_line()?, "generator")?;
    let nbytes: usize = field(next_line()?, "bytes")?
        .parse()
        .map_err(|_| Error::Format("bad byte count".into()))?;
    let grid = Grid::from_box(n, k, lo, hi)?;
    if nbytes != grid.len().div_ceil(8) || data.len() != pos + nbytes {
        return Err(Error::Format("payload size does not match the grid".into()));
    }
    let bits = &data[pos..];
    let occ: Vec<bool> = (0..grid.len()).map(|i| bits[i / 8] >> (i % 8) & 1 == 1).collect();
    VoxelDomain::from_occupancy(grid, occ, name)
}
