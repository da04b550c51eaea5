use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use whitext::curves::*;
use whitext::geometry::domain::{build_domain, Generator, VoxelDomain};
use whitext::grid::Grid;
use whitext::Error;

/// Ω = {y > 0} inside `[-1, 1] x [-5/4, 1/4]`.
fn slab(k: u32) -> CurveContext {
    let g = Grid::from_box(2, k, [-(1i64 << k), -(5i64 << (k - 2)), 0], [1i64 << k, 1i64 << (k - 2), 1]).unwrap();
    let dom = VoxelDomain::from_predicate(g, "slab", |p| p[1] > 0.0).unwrap();
    CurveContext::new(&dom, 0.0).unwrap()
}

/// `∫_a^b t^{1-p} dt`.
fn vertical_oracle(a: f64, b: f64, p: f64) -> f64 {
    (b.powf(2.0 - p) - a.powf(2.0 - p)) / (2.0 - p)
}

#[test]
fn vertical_segment_below_a_slab() {
    let p = 1.5;
    let mut costs = Vec::new();
    for k in [9, 10] {
        let ctx = slab(k);
        let full = weighted_geodesic(&ctx, [0.0, -0.25, 0.0], [0.0, -1.0, 0.0], p, PathSide::Complement).unwrap();
        let oracle = vertical_oracle(0.25, 1.0, p);
        assert!((full.cost - oracle).abs() / oracle < 0.05, "K={k}: {}", full.cost);
        if k == 10 {
            // scaling the geometry by 1/2 scales the cost by (1/2)^{2-p}
            let half = weighted_geodesic(&ctx, [0.0, -0.125, 0.0], [0.0, -0.5, 0.0], p, PathSide::Complement).unwrap();
            let want = 0.5f64.powf(2.0 - p);
            assert!((half.cost / full.cost / want - 1.0).abs() < 0.03);
        }
        costs.push(full.cost);
    }
    // a finer lattice does not make the path noticeably worse
    assert!(costs[1] <= costs[0] * 1.02, "{costs:?}");
}

/// Relaxes every edge until nothing changes.
fn bellman_ford(graph: &LatticeGraph, src: &[(usize, f64)], dst: &[(usize, f64)]) -> f64 {
    let n = graph.node_count();
    let mut d = vec![f64::INFINITY; n];
    for &(s, c) in src {
        d[s] = d[s].min(c);
    }
    let target = |j: usize| dst.iter().any(|t| t.0 == j);
    let unit = graph.weight() == Weight::Unit;
    loop {
        let mut changed = false;
        for u in 0..n {
            if !graph.is_node(u) || !d[u].is_finite() {
                continue;
            }
            let du = d[u];
            graph.for_each_edge(u, |j, w| {
                if unit && !graph.is_open(j) && !target(j) {
                    return;
                }
                if du + w < d[j] {
                    d[j] = du + w;
                    changed = true;
                }
            });
        }
        if !changed {
            break;
        }
    }
    dst.iter().map(|&(t, c)| d[t] + c).fold(f64::INFINITY, f64::min)
}

fn random_domain(seed: u64, k: u32) -> VoxelDomain {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blobs: Vec<([f64; 2], f64)> =
        (0..5).map(|_| ([rng.gen_range(0.2..0.8), rng.gen_range(0.2..0.8)], rng.gen_range(0.08..0.2))).collect();
    let g = Grid::unit(2, k).unwrap();
    VoxelDomain::from_predicate(g, "blobs", move |p| {
        blobs.iter().any(|(c, r)| (p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2) < r * r)
    })
    .unwrap()
}

#[test]
fn dijkstra_matches_bellman_ford() {
    let mut checked = 0;
    for seed in 0..6 {
        let dom = random_domain(seed, 5);
        let ctx = CurveContext::new(&dom, 0.25).unwrap();
        let g = ctx.grid();
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 100);
        for side in [PathSide::Complement, PathSide::Interior] {
            for weight in [Weight::Power(1.5), Weight::Power(1.25), Weight::Unit, Weight::InverseDistance] {
                let graph = LatticeGraph::new(&ctx, side, weight);
                let nodes: Vec<usize> = (0..g.len()).filter(|&i| graph.is_node(i)).collect();
                for _ in 0..3 {
                    let a = nodes[rng.gen_range(0..nodes.len())];
                    let b = nodes[rng.gen_range(0..nodes.len())];
                    let src = [(a, 0.0)];
                    let dst = [(b, 0.0)];
                    let oracle = bellman_ford(&graph, &src, &dst);
                    match dijkstra(&graph, &src, &dst) {
                        Some((c, path)) => {
                            assert_eq!(c, oracle, "{side:?} {weight:?}");
                            assert_eq!((path[0], *path.last().unwrap()), (a, b));
                            checked += 1;
                        }
                        None => assert!(oracle.is_infinite()),
                    }
                }
            }
        }
    }
    assert!(checked > 50);
}

#[test]
fn disk_cost_scales_with_the_disk() {
    let p = 1.5;
    let mut costs = Vec::new();
    for r in [0.45, 0.225] {
        let d = build_domain(&Generator::Ball { dim: 2, radius: r }, 9).unwrap();
        let ctx = CurveContext::complement(&d).unwrap();
        let pairs = row_pairs(&d, &[0.5]).unwrap();
        let path = weighted_geodesic(&ctx, pairs[0].z1, pairs[0].z2, p, PathSide::Complement).unwrap();
        assert!(path.cost.is_finite() && path.cost > 0.0);
        costs.push(path.cost);
    }
    let want = 2f64.powf(2.0 - p);
    assert!((costs[0] / costs[1] / want - 1.0).abs() < 0.1, "{costs:?}");
}

#[test]
fn disk_ratios_are_flat_across_scales() {
    let d = build_domain(&Generator::Ball { dim: 2, radius: 0.5 }, 9).unwrap();
    let r = curve_condition_scan(&d, 1.5, 3, 7).unwrap();
    assert!(r.scales.len() >= 4);
    assert!(r.scale_sup.iter().all(|s| s.is_finite() && *s > 0.0));
    assert!(r.scale_spread() <= 4.0, "{:?}", r.scale_sup);
    assert_eq!(r.csv_rows().len(), r.pairs.len());
}

#[test]
fn cusp_ratio_grows_like_the_channel_model() {
    let (p, alpha) = (1.25, 2.0);
    let d = build_domain(&Generator::OutwardCusp { alpha }, 10).unwrap();
    let ctx = CurveContext::complement(&d).unwrap();
    let seps = [0.125, 0.0625, 0.03125, 0.015625];
    let heights: Vec<f64> = seps.iter().map(|s: &f64| (s / 2.0).powf(1.0 / alpha)).collect();
    let pairs = row_pairs(&d, &heights).unwrap();
    let r = scan_pairs(&ctx, &pairs, &seps, p).unwrap();
    let ratios: Vec<f64> = r.pairs.iter().map(|x| x.ratio).collect();
    for w in ratios.windows(2) {
        assert!(w[1] / w[0] >= 1.2, "{ratios:?}");
    }
    // the channel model: cost ~ t^{2-p} with t = (s/2)^{1/α}, so the ratio
    // grows like s^{-(2-p)(1-1/α)}
    let predicted = (2.0 - p) * (1.0 - 1.0 / alpha);
    let s0 = r.pairs[0].separation;
    let s2 = r.pairs[2].separation;
    let slope = (ratios[2] / ratios[0]).ln() / (s0 / s2).ln();
    assert!((slope / predicted - 1.0).abs() < 0.15, "{slope} vs {predicted}");
}

#[test]
fn unit_weight_avoids_the_boundary() {
    let d = build_domain(&Generator::Ball { dim: 2, radius: 0.4 }, 7).unwrap();
    let ctx = CurveContext::complement(&d).unwrap();
    let pairs = row_pairs(&d, &[0.5]).unwrap();
    let path = weighted_geodesic(&ctx, pairs[0].z1, pairs[0].z2, 1.0, PathSide::Complement).unwrap();
    let g = ctx.grid();
    let graph = LatticeGraph::new(&ctx, PathSide::Complement, Weight::Unit);
    let inner = &path.points[2..path.points.len() - 2];
    assert!(inner.iter().all(|p| graph.is_open(g.index(g.cell_at(*p).unwrap()))));
    let sep = g.distance(path.points[0], *path.points.last().unwrap());
    assert!(path.length <= 2.0 * sep);
    assert_eq!(path.cost, path.length);
    assert!(matches!(weighted_geodesic(&ctx, pairs[0].z1, pairs[0].z2, 2.0, PathSide::Complement), Err(Error::UnsupportedExponent(_))));
}

#[test]
fn john_constants() {
    let disk = build_domain(&Generator::Ball { dim: 2, radius: 0.45 }, 8).unwrap();
    let ctx = CurveContext::interior(&disk);
    let g = disk.grid();
    let samples: Vec<[f64; 3]> = disk.boundary_faces().iter().step_by(37).map(|f| f.centroid(g)).collect();
    let j = john_check(&ctx, [0.5, 0.5, 0.0], &samples).unwrap();
    assert!(j.j <= 1.5, "{}", j.j);

    let sq = build_domain(&Generator::Cube { dim: 2 }, 8).unwrap();
    let ctx = CurveContext::interior(&sq);
    let h = sq.grid().h();
    let corner = [[0.5 * h, 0.0, 0.0], [0.0, 0.5 * h, 0.0], [1.0 - 0.5 * h, 1.0, 0.0]];
    let j = john_check(&ctx, [0.5, 0.5, 0.0], &corner).unwrap();
    assert!(j.j <= 3.0, "{}", j.j);

    // at the cusp the constant keeps growing with resolution
    let mut js = Vec::new();
    for k in [7, 8, 9] {
        let c = build_domain(&Generator::OutwardCusp { alpha: 2.0 }, k).unwrap();
        let ctx = CurveContext::interior(&c);
        // bottom face of the lowest cell: the tip
        let cg = c.grid();
        let low = (0..cg.len()).find(|&i| c.contains_cell(i)).unwrap();
        let mut tip = cg.center(cg.coords(low));
        tip[1] -= 0.5 * cg.h();
        js.push(john_check(&ctx, [0.0, 0.75, 0.0], &[tip]).unwrap().j);
    }
    assert!(js[1] > js[0] && js[2] > js[1], "{js:?}");
}

#[test]
fn cig_on_a_disk_is_small() {
    let d = build_domain(&Generator::Ball { dim: 2, radius: 0.45 }, 8).unwrap();
    let ctx = CurveContext::interior(&d);
    let h = d.grid().h();
    let r = cig_check(&ctx, [0.05 + 2.0 * h, 0.5, 0.0], [0.95 - 2.0 * h, 0.5, 0.0]).unwrap();
    assert!(r.cig_d <= 2.0 && r.cig_d > 0.5, "{}", r.cig_d);
    assert!(r.cig_l >= r.cig_d);
}

#[test]
fn slit_tip_cig_constants_stay_bounded() {
    let d = build_domain(&Generator::SlitSquare { slit_len: 0.5 }, 9).unwrap();
    let ctx = CurveContext::interior(&d);
    let h = d.grid().h();
    let mut cd = Vec::new();
    for s in [0.2, 0.1, 0.05, 0.025] {
        let r = cig_check(&ctx, [0.5 - s, 0.5 - 1.5 * h, 0.0], [0.5 - s, 0.5 + 2.5 * h, 0.0]).unwrap();
        cd.push(r.cig_d);
    }
    let (mn, mx) = cd.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
    assert!(mx / mn < 1.3, "{cd:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn lattice_triangle_inequality(seed in any::<u64>(), p in 1.1f64..1.9) {
        let dom = random_domain(seed % 8, 5);
        let ctx = CurveContext::new(&dom, 0.25).unwrap();
        let graph = LatticeGraph::new(&ctx, PathSide::Complement, Weight::Power(p));
        let g = ctx.grid();
        let nodes: Vec<usize> = (0..g.len()).filter(|&i| graph.is_node(i)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pick = |rng: &mut ChaCha8Rng| g.center(g.coords(nodes[rng.gen_range(0..nodes.len())]));
        let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let ac = geodesic_on(&graph, a, c).unwrap().cost;
        let ab = geodesic_on(&graph, a, b).unwrap().cost;
        let bc = geodesic_on(&graph, b, c).unwrap().cost;
        prop_assert!(ac <= ab + bc + 1e-12 * (ab + bc));
    }
}
