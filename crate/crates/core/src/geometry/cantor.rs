//! The Cantor-tube construction in exact rational arithmetic.
//!
//! Starting from `C_0 = [0,1]^3`, every cube of level `n-1` (side `l_{n-1}`)
//! holds eight children of side `l_n = λ_1⋯λ_n`, separated from each other and
//! from the parent's boundary by `e_n = l_{n-1}(1 - 2λ_n)/3`. Each child is
//! joined to the top face of its parent by an axis-parallel curve `L_{n,i}`
//! whose closed `c_n/2` neighbourhood is the tube `T_{n,i}`, with
//! `c_0 = e_1/8` and `c_n = c_{n-1}/64`.
//!
//! Curves are routed through the free space between the children:
//!
//! * rise from the top-face center `x_{n,i}` of the child by `e_n/2`,
//! * run along `x` and then along `y` to a lane of the central column of the
//!   parent (lane offset `6c_n` per axis for top-layer children, `3c_n` for
//!   bottom-layer children, signs given by the child's quadrant),
//! * rise to the top face of the parent, ending at `y_{n,i}`.
//!
//! Every requirement on the curves and on the tube splitting is certified by
//! exact predicates in [`CantorTubeSpec::certify`].

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type RPoint = [Rational; 3];

fn q(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// One cube `C_{n,i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CantorCube {
    pub level: usize,
    pub index: usize,
    /// Index of the containing cube at level `n-1` (0 for the root).
    pub parent: usize,
    pub lo: RPoint,
    pub side: Rational,
}

impl CantorCube {
    pub fn hi(&self) -> RPoint {
        [&self.lo[0] + &self.side, &self.lo[1] + &self.side, &self.lo[2] + &self.side]
    }

    /// Middle point of the upper face.
    pub fn top_center(&self) -> RPoint {
        let half = &self.side / q(2, 1);
        [&self.lo[0] + &half, &self.lo[1] + &half, &self.lo[2] + &self.side]
    }

    pub fn lo_f64(&self) -> [f64; 3] {
        [to_f64(&self.lo[0]), to_f64(&self.lo[1]), to_f64(&self.lo[2])]
    }

    pub fn side_f64(&self) -> f64 {
        to_f64(&self.side)
    }
}

/// The curve `L_{n,i}` and its splitting into pieces.
#[derive(Clone, Debug, PartialEq)]
pub struct TubeCurve {
    pub level: usize,
    /// Index of the cube `C_{n,i}` the curve starts from.
    pub cube: usize,
    pub parent: usize,
    /// Vertices from `x_{n,i}` to `y_{n,i}`.
    pub vertices: Vec<RPoint>,
    /// Arc-length positions, measured from `y_{n,i}`, where the curve is cut
    /// into the pieces `L^1, …, L^J` (exclusive of both ends).
    pub cuts: Vec<Rational>,
}

impl TubeCurve {
    pub fn x(&self) -> &RPoint {
        &self.vertices[0]
    }

    pub fn y(&self) -> &RPoint {
        self.vertices.last().unwrap()
    }

    pub fn segment_lengths(&self) -> Vec<Rational> {
        self.vertices.windows(2).map(|w| axis_len(&w[0], &w[1])).collect()
    }

    pub fn length(&self) -> Rational {
        self.segment_lengths().into_iter().fold(Rational::zero(), |a, b| a + b)
    }

    pub fn piece_count(&self) -> usize {
        self.cuts.len() + 1
    }

    /// Lengths of the pieces `L^1..L^J`, ordered from `y` towards `x`.
    pub fn piece_lengths(&self) -> Vec<Rational> {
        let total = self.length();
        let mut out = Vec::with_capacity(self.cuts.len() + 1);
        let mut prev = Rational::zero();
        for c in self.cuts.iter().chain(std::iter::once(&total)) {
            out.push(c - &prev);
            prev = c.clone();
        }
        out
    }

    /// Piece `j` (0-based, from `y`) as a polyline.
    pub fn piece(&self, j: usize) -> Vec<RPoint> {
        let total = self.length();
        let start = if j == 0 { Rational::zero() } else { self.cuts[j - 1].clone() };
        let end = if j == self.cuts.len() { total } else { self.cuts[j].clone() };
        let rev: Vec<RPoint> = self.vertices.iter().rev().cloned().collect();
        sub_polyline(&rev, &start, &end)
    }

    pub fn vertices_f64(&self) -> Vec<[f64; 3]> {
        self.vertices.iter().map(pt_f64).collect()
    }
}

/// The full construction up to a given depth.
#[derive(Clone, Debug)]
pub struct CantorTubeSpec {
    lambda: Vec<Rational>,
    /// `l_0..l_m`
    l: Vec<Rational>,
    /// `e_0..e_m` with `e_0 = 0` unused
    e: Vec<Rational>,
    /// `c_0..c_m`
    c: Vec<Rational>,
    cubes: Vec<Vec<CantorCube>>,
    curves: Vec<Vec<TubeCurve>>,
}

/// Default ratios `λ_i = e^{-1/i}/2`, as exact binary rationals of their
/// nearest doubles.
pub fn default_lambda(m: usize) -> Vec<f64> {
    (1..=m).map(|i| 0.5 * (-1.0 / i as f64).exp()).collect()
}

/// Builds and certifies the construction of depth `m`.
pub fn build_cantor_tube(m: usize, lambda_override: Option<Vec<f64>>) -> Result<CantorTubeSpec> {
    if m == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    let lam_f = match lambda_override {
        Some(v) => {
            if v.len() < m {
                return Err(Error::InvalidArgument(format!(
                    "{} ratios given for depth {m}",
                    v.len()
                )));
            }
            v[..m].to_vec()
        }
        None => default_lambda(m),
    };
    for (i, &x) in lam_f.iter().enumerate() {
        if !(x > 0.0 && x < 0.5) {
            return Err(Error::InvalidArgument(format!("λ_{} = {x} outside (0, 1/2)", i + 1)));
        }
        if i > 0 && x <= lam_f[i - 1] {
            return Err(Error::InvalidArgument("ratios must be strictly increasing".into()));
        }
    }
    let lambda: Vec<Rational> =
        lam_f.iter().map(|&x| BigRational::from_float(x).expect("finite ratio")).collect();

    let two = q(2, 1);
    let three = q(3, 1);
    let mut l = vec![Rational::one()];
    let mut e = vec![Rational::zero()];
    for n in 1..=m {
        let ln = &l[n - 1] * &lambda[n - 1];
        let en = &l[n - 1] * (Rational::one() - &two * &lambda[n - 1]) / &three;
        l.push(ln);
        e.push(en);
    }
    let mut c = vec![&e[1] / q(8, 1)];
    for n in 1..=m {
        let cn = &c[n - 1] / q(64, 1);
        c.push(cn);
    }

    let root = CantorCube {
        level: 0,
        index: 0,
        parent: 0,
        lo: [Rational::zero(), Rational::zero(), Rational::zero()],
        side: Rational::one(),
    };
    let mut cubes = vec![vec![root]];
    let mut curves: Vec<Vec<TubeCurve>> = vec![Vec::new()];
    for n in 1..=m {
        let mut level_cubes = Vec::with_capacity(cubes[n - 1].len() * 8);
        let mut level_curves = Vec::with_capacity(cubes[n - 1].len() * 8);
        for (j, parent) in cubes[n - 1].iter().enumerate() {
            for bits in 0..8usize {
                let b = [bits & 1, (bits >> 1) & 1, (bits >> 2) & 1];
                let mut lo = parent.lo.clone();
                for a in 0..3 {
                    lo[a] = &parent.lo[a] + &e[n] + q(b[a] as i64, 1) * (&e[n] + &l[n]);
                }
                let cube = CantorCube {
                    level: n,
                    index: level_cubes.len(),
                    parent: j,
                    lo,
                    side: l[n].clone(),
                };
                let curve = route_curve(parent, &cube, b, &e[n], &l[n], &c[n]);
                level_cubes.push(cube);
                level_curves.push(curve);
            }
        }
        for curve in level_curves.iter_mut() {
            curve.cuts = split_cuts(&curve.length(), &c[n]);
        }
        cubes.push(level_cubes);
        curves.push(level_curves);
    }
    let spec = CantorTubeSpec { lambda, l, e, c, cubes, curves };
    spec.certify()?;
    Ok(spec)
}

fn route_curve(
    parent: &CantorCube,
    child: &CantorCube,
    b: [usize; 3],
    e: &Rational,
    l: &Rational,
    c: &Rational,
) -> TubeCurve {
    let two = q(2, 1);
    let half_side = &parent.side / &two;
    let cx = &parent.lo[0] + &half_side;
    let cy = &parent.lo[1] + &half_side;
    let ztop = &parent.lo[2] + &parent.side;
    let sx = if b[0] == 1 { q(1, 1) } else { q(-1, 1) };
    let sy = if b[1] == 1 { q(1, 1) } else { q(-1, 1) };
    let lane = if b[2] == 1 { c * q(6, 1) } else { c * q(3, 1) };
    let off = (e + l) / &two;
    let v0 = child.top_center();
    let zs = &v0[2] + e / &two;
    let v1 = [v0[0].clone(), v0[1].clone(), zs.clone()];
    let v2 = [&cx + &sx * &lane, &cy + &sy * &off, zs.clone()];
    let v3 = [&cx + &sx * &lane, &cy + &sy * &lane, zs];
    let v4 = [v3[0].clone(), v3[1].clone(), ztop];
    TubeCurve {
        level: child.level,
        cube: child.index,
        parent: child.parent,
        vertices: vec![v0, v1, v2, v3, v4],
        cuts: Vec::new(),
    }
}

/// Greedy split into pieces of length `4c`, merging a short remainder into
/// the last piece and halving the longest piece when the count is odd.
fn split_cuts(total: &Rational, c: &Rational) -> Vec<Rational> {
    let four_c = c * q(4, 1);
    let two_c = c * q(2, 1);
    let whole = (total / &four_c).floor().to_integer().to_usize().unwrap_or(0).max(1);
    let mut lengths: Vec<Rational> = vec![four_c.clone(); whole];
    let rem = total - &four_c * q(whole as i64, 1);
    if rem >= two_c {
        lengths.push(rem);
    } else if rem.is_positive() {
        let last = lengths.last_mut().unwrap();
        *last = &*last + rem;
    }
    if lengths.len() % 2 == 1 {
        let (k, _) = lengths
            .iter()
            .enumerate()
            .rev()
            .max_by(|a, b| a.1.cmp(b.1))
            .unwrap();
        let half = &lengths[k] / q(2, 1);
        lengths[k] = half.clone();
        lengths.insert(k + 1, half);
    }
    let mut cuts = Vec::with_capacity(lengths.len() - 1);
    let mut acc = Rational::zero();
    for len in &lengths[..lengths.len() - 1] {
        acc += len;
        cuts.push(acc.clone());
    }
    cuts
}

fn axis_len(a: &RPoint, b: &RPoint) -> Rational {
    (0..3).map(|k| (&a[k] - &b[k]).abs()).fold(Rational::zero(), |s, x| s + x)
}

fn lerp(a: &RPoint, b: &RPoint, t: &Rational) -> RPoint {
    [
        &a[0] + (&b[0] - &a[0]) * t,
        &a[1] + (&b[1] - &a[1]) * t,
        &a[2] + (&b[2] - &a[2]) * t,
    ]
}

fn point_at(poly: &[RPoint], s: &Rational) -> (usize, RPoint) {
    let mut acc = Rational::zero();
    for k in 0..poly.len() - 1 {
        let len = axis_len(&poly[k], &poly[k + 1]);
        if &(&acc + &len) >= s {
            let t = (s - &acc) / &len;
            return (k, lerp(&poly[k], &poly[k + 1], &t));
        }
        acc += len;
    }
    (poly.len() - 2, poly.last().unwrap().clone())
}

fn sub_polyline(poly: &[RPoint], start: &Rational, end: &Rational) -> Vec<RPoint> {
    let (ks, ps) = point_at(poly, start);
    let (ke, pe) = point_at(poly, end);
    let mut out = vec![ps];
    for v in poly.iter().take(ke + 1).skip(ks + 1) {
        if v != out.last().unwrap() {
            out.push(v.clone());
        }
    }
    if &pe != out.last().unwrap() {
        out.push(pe);
    }
    out
}

/// Axis-parallel segment or point as a degenerate box.
fn seg_box(a: &RPoint, b: &RPoint) -> (RPoint, RPoint) {
    let lo = [
        a[0].clone().min(b[0].clone()),
        a[1].clone().min(b[1].clone()),
        a[2].clone().min(b[2].clone()),
    ];
    let hi = [
        a[0].clone().max(b[0].clone()),
        a[1].clone().max(b[1].clone()),
        a[2].clone().max(b[2].clone()),
    ];
    (lo, hi)
}

/// Exact squared distance between two closed boxes.
pub fn box_dist_sq(a: &(RPoint, RPoint), b: &(RPoint, RPoint)) -> Rational {
    let mut d = Rational::zero();
    for k in 0..3 {
        let g1 = &b.0[k] - &a.1[k];
        let g2 = &a.0[k] - &b.1[k];
        let g = g1.max(g2).max(Rational::zero());
        d += &g * &g;
    }
    d
}

/// Exact squared distance between two axis-parallel polylines.
pub fn polyline_dist_sq(p: &[RPoint], r: &[RPoint]) -> Rational {
    let mut best: Option<Rational> = None;
    for a in p.windows(2) {
        let ba = seg_box(&a[0], &a[1]);
        for b in r.windows(2) {
            let d = box_dist_sq(&ba, &seg_box(&b[0], &b[1]));
            best = Some(match best {
                Some(x) if x <= d => x,
                _ => d,
            });
        }
    }
    best.unwrap_or_else(Rational::zero)
}

fn is_axis_parallel(a: &RPoint, b: &RPoint) -> bool {
    (0..3).filter(|&k| a[k] != b[k]).count() == 1
}

fn in_closed_box(p: &RPoint, lo: &RPoint, hi: &RPoint) -> bool {
    (0..3).all(|k| lo[k] <= p[k] && p[k] <= hi[k])
}

fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn pt_f64(p: &RPoint) -> [f64; 3] {
    [to_f64(&p[0]), to_f64(&p[1]), to_f64(&p[2])]
}

impl CantorTubeSpec {
    pub fn depth(&self) -> usize {
        self.l.len() - 1
    }
    pub fn lambda(&self) -> &[Rational] {
        &self.lambda
    }
    /// `l_n`, `n = 0..=depth`.
    pub fn l(&self, n: usize) -> &Rational {
        &self.l[n]
    }
    /// `e_n`, `n = 1..=depth`.
    pub fn e(&self, n: usize) -> &Rational {
        &self.e[n]
    }
    /// `c_n`, `n = 0..=depth`.
    pub fn c(&self, n: usize) -> &Rational {
        &self.c[n]
    }
    pub fn c_f64(&self, n: usize) -> f64 {
        to_f64(&self.c[n])
    }
    pub fn e_f64(&self, n: usize) -> f64 {
        to_f64(&self.e[n])
    }
    pub fn l_f64(&self, n: usize) -> f64 {
        to_f64(&self.l[n])
    }
    /// Cubes `C_{n,·}`.
    pub fn cubes(&self, n: usize) -> &[CantorCube] {
        &self.cubes[n]
    }
    /// Curves `L_{n,·}` for `n >= 1`.
    pub fn curves(&self, n: usize) -> &[TubeCurve] {
        &self.curves[n]
    }

    /// Exact `|C_n|` summed over the cube list.
    pub fn measure(&self, n: usize) -> Rational {
        self.cubes[n].iter().fold(Rational::zero(), |acc, c| acc + &c.side * &c.side * &c.side)
    }

    /// `(∏_{i≤n} 2λ_i)^3`.
    pub fn product_measure(&self, n: usize) -> Rational {
        let p = self.lambda[..n].iter().fold(Rational::one(), |acc, x| acc * x * q(2, 1));
        &p * &p * &p
    }

    /// Checks every structural requirement exactly; returns the first failure.
    pub fn certify(&self) -> Result<()> {
        let m = self.depth();
        let fail = |level: usize, cube: usize, reason: String| Error::Construction { level, cube, reason };
        for n in 1..=m {
            if self.c[n] > &self.e[n] / q(8, 1) || self.c[n] > self.l[n] {
                return Err(fail(n, 0, "c_n exceeds e_n/8 or l_n".into()));
            }
            if self.measure(n) != self.product_measure(n) {
                return Err(fail(n, 0, "cube measure differs from product formula".into()));
            }
            let cn = &self.c[n];
            let cn_sq = cn * cn;
            for (j, parent) in self.cubes[n - 1].iter().enumerate() {
                let kids: Vec<&CantorCube> =
                    self.cubes[n].iter().filter(|k| k.parent == j).collect();
                if kids.len() != 8 {
                    return Err(fail(n, j, "parent does not hold 8 children".into()));
                }
                let plo = parent.lo.clone();
                let phi = parent.hi();
                // separation among children and from the parent boundary
                for (a, ka) in kids.iter().enumerate() {
                    for k in 0..3 {
                        if &ka.lo[k] - &plo[k] < self.e[n] || &phi[k] - &ka.hi()[k] < self.e[n] {
                            return Err(fail(n, ka.index, "child too close to parent boundary".into()));
                        }
                    }
                    for kb in kids.iter().skip(a + 1) {
                        let d = box_dist_sq(&(ka.lo.clone(), ka.hi()), &(kb.lo.clone(), kb.hi()));
                        if d < &self.e[n] * &self.e[n] {
                            return Err(fail(n, ka.index, "children closer than e_n".into()));
                        }
                    }
                }
                let curves: Vec<&TubeCurve> =
                    self.curves[n].iter().filter(|cv| cv.parent == j).collect();
                for cv in &curves {
                    self.certify_curve(cv, parent, &kids, n).map_err(|r| fail(n, cv.cube, r))?;
                }
                // (L3) with the tube radius: tubes at least c_n apart
                for (a, ca) in curves.iter().enumerate() {
                    for cb in curves.iter().skip(a + 1) {
                        let d = polyline_dist_sq(&ca.vertices, &cb.vertices);
                        if d < &cn_sq * q(4, 1) {
                            return Err(fail(n, ca.cube, format!("tube {} within c_n of tube {}", ca.cube, cb.cube)));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn certify_curve(
        &self,
        cv: &TubeCurve,
        parent: &CantorCube,
        kids: &[&CantorCube],
        n: usize,
    ) -> std::result::Result<(), String> {
        let cn = &self.c[n];
        let own = &self.cubes[n][cv.cube];
        let (plo, phi) = (parent.lo.clone(), parent.hi());
        // endpoints
        if cv.x() != &own.top_center() {
            return Err("curve does not start at x_{n,i}".into());
        }
        let y = cv.y();
        if y[2] != phi[2] {
            return Err("y_{n,i} not on the top face".into());
        }
        // (L2)
        let xp = parent.top_center();
        let d2 = (0..3).fold(Rational::zero(), |s, k| s + (&y[k] - &xp[k]) * (&y[k] - &xp[k]));
        let bound = &self.c[n - 1] / q(2, 1);
        if d2 > &bound * &bound {
            return Err("(L2) violated".into());
        }
        // (L1): inside the parent, outside int(C_{n,i}); also clear of siblings
        for v in &cv.vertices {
            if !in_closed_box(v, &plo, &phi) {
                return Err("(L1) curve leaves the parent cube".into());
            }
        }
        let own_box = (own.lo.clone(), own.hi());
        for (s, w) in cv.vertices.windows(2).enumerate() {
            let sb = seg_box(&w[0], &w[1]);
            if s == 0 {
                // first segment leaves the top face upward
                if w[1][2] <= w[0][2] || w[0][2] != own.hi()[2] {
                    return Err("(L5) first segment not perpendicular to the top face".into());
                }
            } else if box_dist_sq(&sb, &own_box) <= Rational::zero() {
                return Err("(L1) curve re-enters C_{n,i}".into());
            }
            for k in kids.iter().filter(|k| k.index != own.index) {
                if box_dist_sq(&sb, &(k.lo.clone(), k.hi())) < cn * cn {
                    return Err(format!("curve passes within c_n of sibling {}", k.index));
                }
            }
            // (L4)
            if !is_axis_parallel(&w[0], &w[1]) || axis_len(&w[0], &w[1]) < *cn {
                return Err("(L4) segment not axis-parallel or shorter than c_n".into());
            }
        }
        // (L5) at y: last segment vertical
        let k = cv.vertices.len();
        let (a, b) = (&cv.vertices[k - 2], &cv.vertices[k - 1]);
        if !(a[0] == b[0] && a[1] == b[1] && a[2] < b[2]) {
            return Err("(L5) last segment not perpendicular to the top face".into());
        }
        // (P1)-(P4)
        let len = cv.length();
        if len < cn * q(8, 1) {
            return Err("curve shorter than 8 c_n".into());
        }
        let pieces = cv.piece_lengths();
        if !pieces.len().is_multiple_of(2) {
            return Err("(P1) odd number of pieces".into());
        }
        let lo = cn * q(2, 1);
        let hi = cn * q(6, 1);
        if pieces.iter().any(|p| p < &lo || p > &hi) {
            return Err("(P2) piece length outside [2c_n, 6c_n]".into());
        }
        if cv.cuts.windows(2).any(|w| w[0] >= w[1]) {
            return Err("(P3) cuts not increasing".into());
        }
        Ok(())
    }

    /// Structured text dump with exact rationals as `num den` pairs.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let r = |x: &Rational| format!("{} {}", x.numer(), x.denom());
        let _ = writeln!(s, "CANTORTUBE1");
        let _ = writeln!(s, "depth {}", self.depth());
        for (i, x) in self.lambda.iter().enumerate() {
            let _ = writeln!(s, "lambda {} {}", i + 1, r(x));
        }
        for n in 0..=self.depth() {
            let _ = writeln!(s, "c {} {}", n, r(&self.c[n]));
        }
        for n in 0..=self.depth() {
            for cb in &self.cubes[n] {
                let _ = writeln!(
                    s,
                    "cube {} {} {} {} {} {} {}",
                    n,
                    cb.index,
                    cb.parent,
                    r(&cb.lo[0]),
                    r(&cb.lo[1]),
                    r(&cb.lo[2]),
                    r(&cb.side)
                );
            }
        }
        for n in 1..=self.depth() {
            for cv in &self.curves[n] {
                let verts: Vec<String> = cv
                    .vertices
                    .iter()
                    .map(|v| format!("{} {} {}", r(&v[0]), r(&v[1]), r(&v[2])))
                    .collect();
                let _ = writeln!(
                    s,
                    "curve {} {} {} {} {}",
                    n,
                    cv.cube,
                    cv.parent,
                    cv.vertices.len(),
                    verts.join(" ")
                );
                let _ = writeln!(s, "pieces {} {} {}", n, cv.cube, cv.piece_count());
            }
        }
        s
    }

    /// Parses [`to_text`](Self::to_text) output and re-certifies it.
    pub fn from_text(text: &str) -> Result<CantorTubeSpec> {
        let bad = |m: &str| Error::Format(m.to_string());
        let mut lines = text.lines();
        if lines.next() != Some("CANTORTUBE1") {
            return Err(bad("missing CANTORTUBE1 header"));
        }
        let mut lambda = Vec::new();
        let mut c = Vec::new();
        let mut cubes: Vec<Vec<CantorCube>> = Vec::new();
        let mut curves: Vec<Vec<TubeCurve>> = Vec::new();
        let mut depth = 0usize;
        let rat = |t: &[&str]| -> Result<Rational> {
            let n: BigInt = t[0].parse().map_err(|_| bad("bad numerator"))?;
            let d: BigInt = t[1].parse().map_err(|_| bad("bad denominator"))?;
            if d.is_zero() {
                return Err(bad("zero denominator"));
            }
            Ok(BigRational::new(n, d))
        };
        for line in lines {
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.is_empty() {
                continue;
            }
            let us = |x: &str| x.parse::<usize>().map_err(|_| bad("bad integer"));
            match t[0] {
                "depth" => {
                    depth = us(t.get(1).ok_or_else(|| bad("depth"))?)?;
                    cubes = vec![Vec::new(); depth + 1];
                    curves = vec![Vec::new(); depth + 1];
                }
                "lambda" if t.len() == 4 => lambda.push(rat(&t[2..4])?),
                "c" if t.len() == 4 => c.push(rat(&t[2..4])?),
                "cube" if t.len() == 12 => {
                    let n = us(t[1])?;
                    let cube = CantorCube {
                        level: n,
                        index: us(t[2])?,
                        parent: us(t[3])?,
                        lo: [rat(&t[4..6])?, rat(&t[6..8])?, rat(&t[8..10])?],
                        side: rat(&t[10..12])?,
                    };
                    cubes.get_mut(n).ok_or_else(|| bad("cube level"))?.push(cube);
                }
                "curve" => {
                    let n = us(t[1])?;
                    let nv = us(t[4])?;
                    if t.len() != 5 + 6 * nv {
                        return Err(bad("curve vertex count"));
                    }
                    let mut vertices = Vec::with_capacity(nv);
                    for k in 0..nv {
                        let b = 5 + 6 * k;
                        vertices.push([rat(&t[b..b + 2])?, rat(&t[b + 2..b + 4])?, rat(&t[b + 4..b + 6])?]);
                    }
                    curves.get_mut(n).ok_or_else(|| bad("curve level"))?.push(TubeCurve {
                        level: n,
                        cube: us(t[2])?,
                        parent: us(t[3])?,
                        vertices,
                        cuts: Vec::new(),
                    });
                }
                "pieces" => {}
                _ => return Err(bad(&format!("unrecognised line: {line}"))),
            }
        }
        if lambda.len() != depth || c.len() != depth + 1 {
            return Err(bad("inconsistent depth"));
        }
        let mut l = vec![Rational::one()];
        let mut e = vec![Rational::zero()];
        for n in 1..=depth {
            e.push(&l[n - 1] * (Rational::one() - q(2, 1) * &lambda[n - 1]) / q(3, 1));
            l.push(&l[n - 1] * &lambda[n - 1]);
        }
        for n in 1..=depth {
            for cv in curves[n].iter_mut() {
                cv.cuts = split_cuts(&cv.length(), &c[n]);
            }
        }
        let spec = CantorTubeSpec { lambda, l, e, c, cubes, curves };
        spec.certify()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_one_constants_match_closed_forms() {
        let s = build_cantor_tube(1, None).unwrap();
        let e1 = (1.0 - (-1.0f64).exp()) / 3.0;
        assert!((s.l_f64(1) - 0.5 * (-1.0f64).exp()).abs() < 1e-15);
        assert!((s.e_f64(1) - e1).abs() < 1e-15);
        assert!((s.c_f64(0) - e1 / 8.0).abs() < 1e-15);
        assert!((s.c_f64(1) - e1 / 512.0).abs() < 1e-17);
        // rounded reference values
        assert!((s.l_f64(1) - 0.183940).abs() < 1e-6);
        assert!((s.e_f64(1) - 0.210707).abs() < 1e-6);
        assert!((s.c_f64(0) - 0.0263384).abs() < 1e-7);
        assert!((s.c_f64(1) - 0.000411537).abs() < 1e-9);
        assert_eq!(s.cubes(1).len(), 8);
        assert_eq!(s.curves(1).len(), 8);
    }

    #[test]
    fn depth_two_measure() {
        let s = build_cantor_tube(2, None).unwrap();
        assert_eq!(s.measure(2), s.product_measure(2));
        let v = to_f64(&s.measure(2));
        let target = (-4.5f64).exp();
        assert!(((v - target) / target).abs() < 1e-12);
        assert!((v - 0.0111090).abs() < 1e-7);
    }

    #[test]
    fn pieces_satisfy_split_rules() {
        let s = build_cantor_tube(2, None).unwrap();
        for n in 1..=2 {
            let c = s.c(n).clone();
            for cv in s.curves(n) {
                assert!(cv.length() >= &c * q(8, 1));
                let p = cv.piece_lengths();
                assert_eq!(p.len() % 2, 0);
                assert!(p.iter().all(|x| x >= &(&c * q(2, 1)) && x <= &(&c * q(6, 1))));
            }
        }
        // consecutive pieces share exactly their end points
        let cv = &s.curves(1)[3];
        let a = cv.piece(0);
        let b = cv.piece(1);
        assert_eq!(a.last(), b.first());
        assert_eq!(a.first().unwrap(), cv.y());
        assert_eq!(cv.piece(cv.piece_count() - 1).last().unwrap(), cv.x());
    }

    #[test]
    fn split_handles_exact_multiples_and_odd_counts() {
        let c = q(1, 1);
        // 12c -> 3 pieces of 4c -> odd, longest halved -> 4 pieces
        let cuts = split_cuts(&q(12, 1), &c);
        assert_eq!(cuts.len() + 1, 4);
        // 9c -> 4c + 5c (merged) -> even
        let cuts = split_cuts(&q(9, 1), &c);
        assert_eq!(cuts, vec![q(4, 1)]);
    }

    #[test]
    fn invalid_ratios_rejected() {
        assert!(build_cantor_tube(2, Some(vec![0.3, 0.2])).is_err());
        assert!(build_cantor_tube(1, Some(vec![0.6])).is_err());
        assert!(build_cantor_tube(2, Some(vec![0.3])).is_err());
        assert!(build_cantor_tube(1, Some(vec![0.25])).is_ok());
    }

    #[test]
    fn text_roundtrip() {
        let s = build_cantor_tube(2, None).unwrap();
        let t = s.to_text();
        let back = CantorTubeSpec::from_text(&t).unwrap();
        assert_eq!(back.to_text(), t);
        assert!(CantorTubeSpec::from_text("nope").is_err());
    }
}
