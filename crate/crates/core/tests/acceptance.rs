//! Acceptance run. Prints one `criterion N <name>: PASS|FAIL <details>` line
//! per criterion and exits nonzero when any criterion fails.

#![allow(clippy::needless_range_loop)]

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use whitext::curves::*;
use whitext::extension::*;
use whitext::geometry::cantor::pt_f64;
use whitext::geometry::cantor_voxel::{min_set_gap_sq, tube_voxels, CantorMembership};
use whitext::geometry::distance::distance_transform;
use whitext::geometry::domain::{build_cantor_window, build_domain, Generator, VoxelDomain};
use whitext::geometry::build_cantor_tube;
use whitext::grid::Grid;
use whitext::perimeter::*;
use whitext::whitney::{audit, whitney_decompose, PartitionOfUnity};

// tolerances
const C1_SECONDS: f64 = 60.0;
const C2_SUM_TOL: f64 = 1e-9;
const C2_POINTS: usize = 10_000;
const C2_STABILITY: f64 = 0.05;
const C4_TOL_K10: f64 = 0.05;
const C4_TOL_K11: f64 = 0.025;
const C4_RATE_TOL: f64 = 0.1;
const C5_TOL: f64 = 0.05;
const C5_SCALE_TOL: f64 = 0.03;
const C7_DRIFT: f64 = 0.20;
const C7_DECAY: f64 = 1.5;
const C7_SECONDS: f64 = 600.0;
const C8_SETS: u64 = 50;
const C9_DISK_SPREAD: f64 = 4.0;
const C9_CUSP_GROWTH: f64 = 1.2;
const C9_SECONDS: f64 = 300.0;
const C10_DIGITS: f64 = 1e-12;
const C10_POINTS: usize = 20;
const C10_SECONDS: f64 = 600.0;
const C11_SETS: u64 = 100;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn blob_mask(d: &VoxelDomain, seed: u64, disks: usize) -> Vec<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = d.grid().bbox();
    let discs: Vec<([f64; 2], f64)> = (0..disks)
        .map(|_| ([rng.gen_range(lo[0]..hi[0]), rng.gen_range(lo[1]..hi[1])], rng.gen_range(0.03..0.25)))
        .collect();
    let g = d.grid();
    (0..g.len())
        .map(|i| {
            let p = g.center(g.coords(i));
            d.contains_cell(i) && discs.iter().any(|(c, r)| (p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2) < r * r)
        })
        .collect()
}

fn half_mask(d: &VoxelDomain, axis: usize) -> Vec<bool> {
    let g = d.grid();
    (0..g.len()).map(|i| d.contains_cell(i) && g.center(g.coords(i))[axis] < 0.5).collect()
}

fn planar_generators() -> Vec<Generator> {
    vec![
        Generator::Cube { dim: 2 },
        Generator::Ball { dim: 2, radius: 0.45 },
        Generator::SlitSquare { slit_len: 0.5 },
        Generator::OutwardCusp { alpha: 2.0 },
        Generator::Snowflake { iterations: 4 },
    ]
}

/// Midpoint of the straight middle run of the first depth-1 tube.
fn cantor_window_center() -> [f64; 3] {
    let spec = build_cantor_tube(1, None).unwrap();
    let v = spec.curves(1)[0].vertices_f64();
    [v[3][0], v[3][1], 0.5 * (v[3][2] + v[4][2])]
}

fn c1_whitney_audit() -> Outcome {
    let t = Instant::now();
    let mut doms: Vec<(String, VoxelDomain)> =
        planar_generators().into_iter().map(|g| (g.tag(), build_domain(&g, 9).unwrap())).collect();
    doms.push(("cube dim=3".into(), build_domain(&Generator::Cube { dim: 3 }, 6).unwrap()));
    doms.push(("ball dim=3".into(), build_domain(&Generator::Ball { dim: 3, radius: 0.45 }, 6).unwrap()));
    // the tubes need c_1 >= 4h, so the Cantor domain is audited on a 64^3 window at K = 14
    let spec = build_cantor_tube(1, None).unwrap();
    doms.push(("cantor_tube window".into(), build_cantor_window(&spec, 1, cantor_window_center(), 32, 14).unwrap()));
    let mut bad = Vec::new();
    let mut cubes = 0;
    for (name, d) in &doms {
        let w = whitney_decompose(d, d.grid().level() as i32).unwrap();
        let rep = audit(&w);
        cubes += rep.cubes - rep.truncated;
        if !rep.ok() {
            bad.push(format!("{name}: {}", rep.summary_line()));
        }
    }
    let secs = t.elapsed().as_secs_f64();
    outcome(
        bad.is_empty() && secs <= C1_SECONDS,
        format!("{} domains, {cubes} cubes checked, {secs:.1}s (limit {C1_SECONDS}s) {}", doms.len(), bad.join("; ")),
    )
}

fn c2_partition_of_unity() -> Outcome {
    let mut gens: Vec<(Generator, u32)> = planar_generators().into_iter().map(|g| (g, 8)).collect();
    gens.push((Generator::Ball { dim: 3, radius: 0.45 }, 5));
    let mut worst_sum: f64 = 0.0;
    let mut center_fail = 0;
    let mut consts = Vec::new();
    for (seed, (gen, k)) in gens.iter().enumerate() {
        let d = build_domain(gen, *k).unwrap();
        let w = whitney_decompose(&d, *k as i32).unwrap();
        let pu = PartitionOfUnity::new(&w);
        for (i, c) in w.cubes().iter().enumerate() {
            if c.truncated {
                continue;
            }
            let v = pu.evaluate(c.cube.center()).unwrap();
            if !v.iter().all(|&(j, x)| if j == i { x == 1.0 } else { x == 0.0 }) {
                center_fail += 1;
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed as u64);
        let (lo, hi) = d.grid().bbox();
        let n = d.dim();
        let mut pts = Vec::with_capacity(C2_POINTS);
        while pts.len() < C2_POINTS {
            let mut x = [0.0; 3];
            for a in 0..n {
                x[a] = rng.gen_range(lo[a]..hi[a]);
            }
            if let Ok(v) = pu.evaluate(x) {
                let s: f64 = v.iter().map(|p| p.1).sum();
                worst_sum = worst_sum.max((s - 1.0).abs());
                pts.push(x);
            }
        }
        consts.push(pu.measure_gradient_constant(&pts));
    }
    let c_pu = consts.iter().copied().fold(0.0, f64::max);
    let mean = consts.iter().sum::<f64>() / consts.len() as f64;
    let spread = consts.iter().map(|c| (c / mean - 1.0).abs()).fold(0.0, f64::max);
    outcome(
        worst_sum <= C2_SUM_TOL && center_fail == 0 && spread <= C2_STABILITY,
        format!(
            "max|sum-1|={worst_sum:.2e} center failures={center_fail} C_pu={c_pu:.4} per-domain={consts:.4?} max deviation from mean={:.1}% (limit {}%)",
            100.0 * spread,
            100.0 * C2_STABILITY
        ),
    )
}

/// Squared half-grid distance from every half-grid point to the nearest
/// boundary-face centroid, by exhaustive search.
fn brute_half_distances(d: &VoxelDomain) -> Vec<u32> {
    let g = d.grid();
    let feats: Vec<[usize; 3]> = d.boundary_faces().iter().map(|f| f.half(g)).collect();
    let hd = g.half_dims();
    let mut out = vec![0u32; g.half_len()];
    for z in 0..hd[2] {
        for y in 0..hd[1] {
            for x in 0..hd[0] {
                let p = [x, y, z];
                let best = feats
                    .iter()
                    .map(|f| (0..3).map(|a| (p[a] as i64 - f[a] as i64).pow(2)).sum::<i64>())
                    .min()
                    .unwrap();
                out[g.half_index(p)] = best as u32;
            }
        }
    }
    out
}

fn c3_distance_transform() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut mismatches = 0;
    let mut points = 0;
    for inst in 0..10 {
        let (dim, k) = if inst < 6 { (2, 6) } else { (3, 4) };
        let g = Grid::unit(dim, k).unwrap();
        let q = rng.gen_range(0.4..0.8);
        let occ: Vec<bool> = (0..g.len()).map(|_| rng.gen_bool(q)).collect();
        let d = VoxelDomain::from_occupancy(g.clone(), occ, "random").unwrap();
        let df = distance_transform(&d);
        let b = brute_half_distances(&d);
        mismatches += df.half_values().iter().zip(&b).filter(|(x, y)| x != y).count();
        points += b.len();
    }
    outcome(mismatches == 0, format!("10 domains (6 at 64^2, 4 at 16^3), {points} half-grid points, {mismatches} mismatches"))
}

fn half_square_integral(k: u32) -> f64 {
    let d = build_domain(&Generator::Cube { dim: 2 }, k).unwrap();
    let dist = distance_transform(&d);
    let a = VoxelSet::in_domain(&d, half_mask(&d, 1)).unwrap();
    weighted_boundary_integral(&a, 1.5, &dist, FaceSide::Interior).unwrap().finite
}

fn c4_weighted_integral() -> Outcome {
    let exact = 2.0 * 2f64.sqrt();
    let e10 = (half_square_integral(10) - exact).abs() / exact;
    let e11 = (half_square_integral(11) - exact).abs() / exact;
    // the endpoint singularity of t^{1-p} limits a centroid sum to O(h^{2-p})
    let rate = e10 / e11;
    let expected = 2f64.powf(2.0 - 1.5);
    outcome(
        e10 <= C4_TOL_K10 && e11 <= C4_TOL_K11 && (rate / expected - 1.0).abs() <= C4_RATE_TOL,
        format!(
            "rel err K=10 {:.3}% K=11 {:.3}% (limits 5%, 2.5%), error ratio per level {rate:.3} vs h^(2-p) rate {expected:.3}; not first order",
            100.0 * e10,
            100.0 * e11
        ),
    )
}

fn slab(k: u32) -> CurveContext {
    let g = Grid::from_box(2, k, [-(1i64 << k), -(5i64 << (k - 2)), 0], [1i64 << k, 1i64 << (k - 2), 1]).unwrap();
    let dom = VoxelDomain::from_predicate(g, "slab", |p| p[1] > 0.0).unwrap();
    CurveContext::new(&dom, 0.0).unwrap()
}

fn bellman_ford(graph: &LatticeGraph, src: usize, dst: usize) -> f64 {
    let n = graph.node_count();
    let mut d = vec![f64::INFINITY; n];
    d[src] = 0.0;
    let unit = graph.weight() == Weight::Unit;
    loop {
        let mut changed = false;
        for u in 0..n {
            if !graph.is_node(u) || !d[u].is_finite() {
                continue;
            }
            let du = d[u];
            graph.for_each_edge(u, |j, w| {
                if unit && !graph.is_open(j) && j != dst {
                    return;
                }
                if du + w < d[j] {
                    d[j] = du + w;
                    changed = true;
                }
            });
        }
        if !changed {
            return d[dst];
        }
    }
}

fn c5_geodesic() -> Outcome {
    let p = 1.5;
    let oracle = (1.0 - 0.25f64.powf(0.5)) / 0.5;
    let ctx = slab(10);
    let full = weighted_geodesic(&ctx, [0.0, -0.25, 0.0], [0.0, -1.0, 0.0], p, PathSide::Complement).unwrap();
    let err = (full.cost - oracle).abs() / oracle;
    let half = weighted_geodesic(&ctx, [0.0, -0.125, 0.0], [0.0, -0.5, 0.0], p, PathSide::Complement).unwrap();
    let cov = (half.cost / full.cost / 0.5f64.powf(2.0 - p) - 1.0).abs();

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut checked, mut mismatched) = (0, 0);
    for seed in 0..4u64 {
        let mut r2 = ChaCha8Rng::seed_from_u64(seed);
        let blobs: Vec<([f64; 2], f64)> =
            (0..5).map(|_| ([r2.gen_range(0.2..0.8), r2.gen_range(0.2..0.8)], r2.gen_range(0.08..0.2))).collect();
        let dom = VoxelDomain::from_predicate(Grid::unit(2, 6).unwrap(), "blobs", move |x| {
            blobs.iter().any(|(c, r)| (x[0] - c[0]).powi(2) + (x[1] - c[1]).powi(2) < r * r)
        })
        .unwrap();
        let ctx = CurveContext::new(&dom, 0.0).unwrap();
        let g = ctx.grid();
        for side in [PathSide::Complement, PathSide::Interior] {
            for weight in [Weight::Power(1.5), Weight::Power(1.25), Weight::Unit, Weight::InverseDistance] {
                let graph = LatticeGraph::new(&ctx, side, weight);
                let nodes: Vec<usize> = (0..g.len()).filter(|&i| graph.is_node(i)).collect();
                for _ in 0..3 {
                    let a = nodes[rng.gen_range(0..nodes.len())];
                    let b = nodes[rng.gen_range(0..nodes.len())];
                    let bf = bellman_ford(&graph, a, b);
                    let dj = dijkstra(&graph, &[(a, 0.0)], &[(b, 0.0)]).map(|r| r.0).unwrap_or(f64::INFINITY);
                    checked += 1;
                    if dj != bf {
                        mismatched += 1;
                    }
                }
            }
        }
    }
    outcome(
        err <= C5_TOL && cov <= C5_SCALE_TOL && mismatched == 0,
        format!(
            "slab cost {:.5} vs {oracle} ({:.2}%), scale covariance error {:.2}%, dijkstra vs bellman-ford {mismatched}/{checked} mismatches",
            full.cost,
            100.0 * err,
            100.0 * cov
        ),
    )
}

/// Face counts of `∂Ã` by class, scanning every cell pair of the working grid.
fn face_split_oracle(tilde: &[bool], dom: &VoxelDomain) -> [usize; 3] {
    let g = dom.grid();
    let mut out = [0usize; 3];
    let inside = |c: [i64; 3]| g.index_signed(c).map(|i| (tilde[i], dom.contains_cell(i))).unwrap_or((false, false));
    for i in 0..g.len() {
        let c = g.coords(i);
        let c = [c[0] as i64, c[1] as i64, c[2] as i64];
        for a in 0..g.dim() {
            let mut lo = c;
            lo[a] -= 1;
            let (t0, o0) = inside(lo);
            let (t1, o1) = (tilde[i], dom.contains_cell(i));
            let mut hi = c;
            hi[a] += 1;
            for ((ta, oa), (tb, ob)) in [((t0, o0), (t1, o1)), ((t1, o1), inside(hi))] {
                if ta != tb {
                    out[match (oa, ob) {
                        (true, true) => 0,
                        (false, false) => 1,
                        _ => 2,
                    }] += 1;
                }
            }
        }
    }
    // every interior pair was seen from both of its cells
    out.iter_mut().for_each(|x| *x /= 2);
    out
}

fn c6_extension_exactness() -> Outcome {
    let mut gens = planar_generators();
    gens[1] = Generator::Ball { dim: 2, radius: 0.5 };
    let (mut runs, mut restrict_fail, mut split_fail) = (0, 0, 0);
    for gen in gens {
        let d = build_domain(&gen, 7).unwrap();
        let geom = ExtensionGeometry::new(&d, 7).unwrap();
        let wg = geom.working().grid().clone();
        let dg = d.grid();
        for seed in 0..6 {
            let mask = if seed < 5 { blob_mask(&d, seed, 8) } else { half_mask(&d, 0) };
            let a = VoxelSet::in_domain(&d, mask.clone()).unwrap();
            let res = extend_set(&geom, &a, &ExtensionParams::new(2, 1.5)).unwrap();
            runs += 1;
            let tilde = res.a_tilde.mask();
            let ok = (0..wg.len()).all(|i| {
                if !geom.working().contains_cell(i) {
                    return true;
                }
                let x = wg.center(wg.coords(i));
                match dg.cell_at(x) {
                    Some(c) => tilde[i] == mask[dg.index(c)],
                    None => false,
                }
            });
            if !ok || !res.restriction_matches(&geom) {
                restrict_fail += 1;
            }
            let faces = res.a_tilde.classify(geom.working());
            let got = [FaceClass::Interior, FaceClass::Exterior, FaceClass::OnBoundary].map(|c| faces.count(c));
            let want = face_split_oracle(tilde, geom.working());
            if got != want || got.iter().sum::<usize>() != faces.len() {
                split_fail += 1;
            }
        }
    }
    outcome(
        restrict_fail == 0 && split_fail == 0,
        format!("{runs} extensions, restriction failures {restrict_fail}, face split failures {split_fail}"),
    )
}

fn c7_inequality_stability() -> Outcome {
    let t = Instant::now();
    let cases: [(Generator, usize, &str); 3] = [
        (Generator::Ball { dim: 2, radius: 0.5 }, 0, "disk/half"),
        (Generator::Cube { dim: 2 }, 0, "square/half"),
        (Generator::SlitSquare { slit_len: 0.5 }, 1, "slit_square/below-slit"),
    ];
    let ps = [1.25, 1.5, 1.75];
    let mut failures = Vec::new();
    let mut max_drift: f64 = 0.0;
    for (gen, axis, name) in cases {
        let mut rows = Vec::new();
        for k in [8u32, 9] {
            let d = build_domain(&gen, k).unwrap();
            let geom = ExtensionGeometry::new(&d, k as i32).unwrap();
            let a = VoxelSet::in_domain(&d, half_mask(&d, axis)).unwrap();
            let row: Vec<(f64, f64)> = ps
                .iter()
                .map(|&p| {
                    let r = extend_set(&geom, &a, &ExtensionParams::new(2, p)).unwrap().report;
                    (if r.ratio.is_finite() { r.ratio.value() } else { f64::NAN }, r.lhs_touching)
                })
                .collect();
            rows.push(row);
        }
        for (j, p) in ps.iter().enumerate() {
            let (r8, t8) = rows[0][j];
            let (r9, t9) = rows[1][j];
            let drift = (r9 / r8 - 1.0).abs();
            if drift.is_finite() {
                max_drift = max_drift.max(drift);
            }
            if !(r8.is_finite() && r9.is_finite() && drift <= C7_DRIFT) {
                failures.push(format!("{name} p={p}: ratio {r8:.4}->{r9:.4}"));
            }
            // a proxy that is already zero has nothing left to decay
            let decayed = t9 == 0.0 || t8 / t9 >= C7_DECAY;
            if !decayed {
                failures.push(format!("{name} p={p}: touching {t8}->{t9}"));
            }
        }
    }
    let secs = t.elapsed().as_secs_f64();
    outcome(
        failures.is_empty() && secs <= C7_SECONDS,
        format!("K=8->9, max ratio drift {:.2}%, {secs:.0}s; {}", 100.0 * max_drift, if failures.is_empty() { "all cases ok".to_string() } else { failures.join("; ") }),
    )
}

fn c8_lemma_suites() -> Outcome {
    let d = build_domain(&Generator::Ball { dim: 2, radius: 0.5 }, 7).unwrap();
    let geom = ExtensionGeometry::new(&d, 7).unwrap();
    let dec = geom.interior();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut nonfinite = 0;
    let mut maxes = Vec::new();
    for p in [1.25, 1.5, 1.75] {
        let mut max = [0.0f64; 3];
        for s in 0..C8_SETS {
            let a = VoxelSet::in_domain(&d, blob_mask(&d, 1000 + s, 6)).unwrap();
            let r = extend_set(&geom, &a, &ExtensionParams::new(2, p)).unwrap().report;
            let cubes: Vec<usize> = (0..dec.len()).filter(|_| rng.gen_bool(0.3)).collect();
            let l32 = verify_lemma_32(dec, &d, &cubes, p, geom.dist(), 4).unwrap();
            for (m, l) in max.iter_mut().zip([r.lemma31, l32, r.lemma33]) {
                if l.is_finite() {
                    *m = m.max(l.value());
                } else {
                    nonfinite += 1;
                }
            }
        }
        maxes.push(format!("p={p} max [{:.3}, {:.3}, {:.3}]", max[0], max[1], max[2]));
    }
    // idempotence: on unions of Whitney cubes the selection returns the set itself
    let mut idem_fail = 0;
    for _ in 0..5 {
        let chosen: Vec<bool> = (0..dec.len()).map(|_| rng.gen_bool(0.4)).collect();
        let mask: Vec<bool> = dec.owner().iter().map(|&o| o != u32::MAX && chosen[o as usize]).collect();
        let a = VoxelSet::in_domain(&d, mask.clone()).unwrap();
        let sel = select_a_prime(&mask, dec);
        let ap = VoxelSet::in_domain(&d, sel.mask).unwrap();
        for p in [1.25, 1.5, 1.75] {
            if verify_lemma_31(&a, &ap, p, geom.dist()).unwrap().value() != 1.0 {
                idem_fail += 1;
            }
        }
    }
    outcome(
        nonfinite == 0 && idem_fail == 0,
        format!(
            "{C8_SETS} sets x 3 p, non-finite {nonfinite}, idempotence failures {idem_fail}; {}",
            maxes.join("; ")
        ),
    )
}

fn c9_curve_dichotomy() -> Outcome {
    let t = Instant::now();
    let disk = build_domain(&Generator::Ball { dim: 2, radius: 0.5 }, 9).unwrap();
    let r = curve_condition_scan(&disk, 1.5, 3, 7).unwrap();
    let spread = r.scale_spread();

    let (p, alpha) = (1.25, 2.0);
    let cusp = build_domain(&Generator::OutwardCusp { alpha }, 10).unwrap();
    let ctx = CurveContext::complement(&cusp).unwrap();
    let seps = [0.125, 0.0625, 0.03125, 0.015625];
    let heights: Vec<f64> = seps.iter().map(|s: &f64| (s / 2.0).powf(1.0 / alpha)).collect();
    let pairs = row_pairs(&cusp, &heights).unwrap();
    let cr = scan_pairs(&ctx, &pairs, &seps, p).unwrap();
    let growth: Vec<f64> = cr.pairs.windows(2).map(|w| w[1].ratio / w[0].ratio).collect();
    let secs = t.elapsed().as_secs_f64();
    outcome(
        spread <= C9_DISK_SPREAD && growth.iter().all(|g| *g >= C9_CUSP_GROWTH) && secs <= C9_SECONDS,
        format!(
            "disk K=9 p=1.5 spread {spread:.3} (limit 4); cusp K=10 p={p} growth per halving {growth:.3?} (limit 1.2); {secs:.0}s"
        ),
    )
}

fn c10_cantor_tube() -> Outcome {
    let t = Instant::now();
    let spec = build_cantor_tube(2, None).unwrap();
    let certified = spec.certify().is_ok();
    let exact = spec.measure(2) == spec.product_measure(2);
    let v = spec.measure(2).to_f64().unwrap();
    let target = (-4.5f64).exp();
    let rel = ((v - target) / target).abs();

    let s1 = build_cantor_tube(1, None).unwrap();
    let member = CantorMembership::new(&s1, 1);
    let k = 14;
    let h = (-(k as f64)).exp2();
    let c1 = s1.c_f64(1);
    let tubes: Vec<Vec<[i64; 3]>> = (0..s1.curves(1).len()).map(|i| tube_voxels(&member, 1, i, k)).collect();
    let cutoff = (c1 / h).ceil() as i64 + 1;
    let gap = match min_set_gap_sq(&tubes, cutoff) {
        Some(g) => (g as f64).sqrt() * h,
        None => cutoff as f64 * h,
    };

    let radii: Vec<f64> = (0..14).map(|j| 0.1 * 0.5f64.powi(j)).collect();
    let cubes = spec.cubes(2);
    let step = cubes.len() / C10_POINTS;
    let mut floor = f64::INFINITY;
    for j in 0..C10_POINTS {
        let x = pt_f64(&cubes[j * step].top_center());
        let prof = cantor_density_profile(&spec, x, &radii, 12.0).unwrap();
        floor = prof.iter().map(|d| d.lower).fold(floor, f64::min);
    }
    let secs = t.elapsed().as_secs_f64();
    outcome(
        certified && exact && rel <= C10_DIGITS && gap >= c1 && floor > 0.0 && secs <= C10_SECONDS,
        format!(
            "certify {certified}, |C_2| exact {exact} rel err {rel:.1e}; depth-1 tube gap {gap:.3e} >= c_1 {c1:.3e} at K={k}; density floor {floor:.3} over {C10_POINTS} points x {} radii; {secs:.0}s",
            radii.len()
        ),
    )
}

fn c11_jordan_loops() -> Outcome {
    let g = Grid::unit(2, 6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut sum_fail, mut simple_fail, mut loops_seen) = (0, 0, 0);
    for _ in 0..C11_SETS {
        let q = rng.gen_range(0.2..0.8);
        let mask: Vec<bool> = (0..g.len()).map(|_| rng.gen_bool(q)).collect();
        let a = VoxelSet::new(g.clone(), mask).unwrap();
        let loops = jordan_loops(&a).unwrap();
        loops_seen += loops.len();
        let total: f64 = loops.iter().map(|l| l.length(g.h())).sum();
        if total != perimeter(&a, Region::Whole) {
            sum_fail += 1;
        }
        for l in &loops {
            let mut v = l.vertices.clone();
            v.sort();
            v.dedup();
            if v.len() != l.vertices.len() {
                simple_fail += 1;
            }
        }
    }
    let ring = VoxelSet::from_predicate(g.clone(), |p| {
        let r2 = (p[0] - 0.5).powi(2) + (p[1] - 0.5).powi(2);
        (0.04..0.16).contains(&r2)
    });
    let loops = jordan_loops(&ring).unwrap();
    let nested = loops.len() == 2
        && loops.iter().filter(|l| l.is_outer()).count() == 1
        && loops.iter().any(|l| l.parent.is_some() && l.depth == 1);
    outcome(
        sum_fail == 0 && simple_fail == 0 && nested,
        format!(
            "{C11_SETS} sets, {loops_seen} loops, length-sum failures {sum_fail}, non-simple {simple_fail}; annulus {} loops nested {nested}",
            loops.len()
        ),
    )
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "whitney audit", c1_whitney_audit),
        (2, "partition of unity", c2_partition_of_unity),
        (3, "distance transform", c3_distance_transform),
        (4, "weighted integral", c4_weighted_integral),
        (5, "geodesic", c5_geodesic),
        (6, "extension exactness", c6_extension_exactness),
        (7, "inequality stability", c7_inequality_stability),
        (8, "lemma sub-ratios", c8_lemma_suites),
        (9, "curve-condition dichotomy", c9_curve_dichotomy),
        (10, "cantor tube", c10_cantor_tube),
        (11, "jordan loops", c11_jordan_loops),
    ];
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (n, name, f) in criteria {
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let t = Instant::now();
        let o = catch_unwind(AssertUnwindSafe(f))
            .unwrap_or_else(|e| {
                let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
                outcome(false, format!("panicked: {}", msg.unwrap_or_default()))
            });
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {n} {name}: {} {} [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {failed} failed");
    if failed > 0 {
        std::process::exit(1);
    }
}
