use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use whitext::geometry::cantor::build_cantor_tube;
use whitext::geometry::distance::distance_transform;
use whitext::geometry::domain::{build_domain, Generator};
use whitext::geometry::dyadic::DyadicCube;
use whitext::grid::Grid;
use whitext::perimeter::*;
use whitext::whitney::whitney_decompose;

#[test]
fn digitized_disk_perimeter_is_l1_perimeter() {
    let r = 0.4;
    for k in [9, 10] {
        let g = Grid::unit(2, k).unwrap();
        let disk = VoxelSet::from_predicate(g, |p| (p[0] - 0.5).powi(2) + (p[1] - 0.5).powi(2) < r * r);
        let per = perimeter(&disk, Region::Whole);
        // ℓ¹ perimeter of a disk: 4 · diameter = (4/π) · 2πr
        let oracle = 8.0 * r;
        assert!((per - oracle).abs() / oracle < 0.03, "K={k}: {per}");
    }
}

fn random_mask(g: &Grid, seed: u64, p: f64) -> Vec<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..g.len()).map(|_| rng.gen_bool(p)).collect()
}

#[test]
fn random_set_loops_are_simple_and_sum_to_perimeter() {
    let g = Grid::unit(2, 6).unwrap();
    for seed in 0..4 {
        let a = VoxelSet::new(g.clone(), random_mask(&g, seed, 0.5)).unwrap();
        let loops = jordan_loops(&a).unwrap();
        let total: f64 = loops.iter().map(|l| l.length(g.h())).sum();
        assert_eq!(total, perimeter(&a, Region::Whole));
        for l in &loops {
            let mut v = l.vertices.clone();
            v.sort();
            v.dedup();
            assert_eq!(v.len(), l.vertices.len());
        }
    }
}

#[test]
fn whitney_cube_weighted_integral_is_within_distance_bounds() {
    let p = 1.5;
    for gen in [Generator::Ball { dim: 2, radius: 0.45 }, Generator::Ball { dim: 3, radius: 0.45 }] {
        let k = if gen.dim() == 2 { 8 } else { 6 };
        let d = build_domain(&gen, k).unwrap();
        let dist = distance_transform(&d);
        let w = whitney_decompose(&d, k as i32).unwrap();
        let n = d.dim() as f64;
        let g = d.grid();
        let mut checked = 0;
        for (i, c) in w.cubes().iter().enumerate() {
            if c.truncated || c.cube.level > k as i32 - 2 {
                continue;
            }
            let (lo, s) = w.cube_cells(i);
            let mask: Vec<bool> = (0..g.len())
                .map(|j| {
                    let cc = g.coords(j);
                    (0..d.dim()).all(|a| (cc[a] as i64) >= lo[a] && (cc[a] as i64) < lo[a] + s)
                })
                .collect();
            let a = VoxelSet::in_domain(&d, mask).unwrap();
            let wi = weighted_boundary_integral(&a, p, &dist, FaceSide::Interior).unwrap();
            let l = c.cube.side();
            let scale = 2.0 * n * l.powf(n - 1.0);
            let lo_b = (4.0 * n.sqrt() * l).powf(1.0 - p) * scale;
            let hi_b = l.powf(1.0 - p) * scale;
            assert!(wi.finite >= lo_b && wi.finite <= hi_b, "{}: {} not in [{lo_b}, {hi_b}]", c.cube.level, wi.finite);
            assert!(!wi.touches());
            checked += 1;
        }
        assert!(checked > 10);
    }
}

#[test]
fn weighted_integral_is_monotone_in_p() {
    let sets = [
        Generator::Ball { dim: 2, radius: 0.45 },
        Generator::SlitSquare { slit_len: 0.5 },
        Generator::Snowflake { iterations: 3 },
    ];
    for gen in sets {
        let d = build_domain(&gen, 8).unwrap();
        let dist = distance_transform(&d);
        let g = d.grid();
        let mask: Vec<bool> = (0..g.len()).map(|i| d.contains_cell(i) && g.center(g.coords(i))[0] < 0.45).collect();
        let a = VoxelSet::in_domain(&d, mask).unwrap();
        let mut prev = 0.0;
        for p in [1.1, 1.3, 1.5, 1.7, 1.9] {
            let v = weighted_boundary_integral(&a, p, &dist, FaceSide::Interior).unwrap().finite;
            assert!(v >= prev, "{}: p={p}", gen.tag());
            prev = v;
        }
        let v = weighted_boundary_integral(&a, 1.5, &dist, FaceSide::Interior).unwrap();
        assert!(v.touches());
    }
}

#[test]
fn random_cube_pairs_have_a_positive_isoperimetric_floor() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let k = 6;
    let g = Grid::from_box(2, k, [-64, -64, 0], [128, 128, 1]).unwrap();
    let mut min_ratio = f64::INFINITY;
    let mut done = 0;
    while done < 500 {
        let lq = rng.gen_range(1..=3);
        let lp = (lq + rng.gen_range(-2..=2)).clamp(0, 4);
        let q = DyadicCube::new(2, lq, [rng.gen_range(0..(1 << lq)), rng.gen_range(0..(1 << lq)), 0]);
        // a neighbor of q across a random face, at level lp
        let axis = rng.gen_range(0..2);
        let side = q.side();
        let sp = (-(lp as f64)).exp2();
        let mut corner = q.lower();
        corner[axis] += if rng.gen_bool(0.5) { side } else { -sp };
        let other = 1 - axis;
        let span = (side / sp).max(1.0) as i64;
        let off = if sp <= side { rng.gen_range(0..span) as f64 * sp } else { 0.0 };
        corner[other] += off;
        if sp > side {
            corner[other] = (corner[other] / sp).floor() * sp;
        }
        let qp = DyadicCube::new(2, lp, [(corner[0] / sp).round() as i64, (corner[1] / sp).round() as i64, 0]);
        if !q.shares_face(&qp) {
            continue;
        }
        let density = rng.gen_range(0.1..0.9);
        let mask = random_mask(&g, rng.gen(), density);
        let a = VoxelSet::new(g.clone(), mask).unwrap();
        let r = isoperimetric_check(&a, IsoContext::CubePair(q, qp)).unwrap();
        min_ratio = min_ratio.min(r.ratio);
        done += 1;
    }
    assert!(min_ratio > 0.0 && min_ratio.is_finite(), "{min_ratio}");
}

#[test]
fn cantor_point_density_has_a_floor() {
    let spec = build_cantor_tube(2, None).unwrap();
    let x = whitext::geometry::cantor::pt_f64(&spec.cubes(2)[0].top_center());
    let radii: Vec<f64> = (0..14).map(|j| 0.1 * 0.5f64.powi(j)).collect();
    let prof = cantor_density_profile(&spec, x, &radii, 12.0).unwrap();
    let floor = prof.iter().map(|d| d.lower).fold(f64::INFINITY, f64::min);
    assert!(floor > 0.1, "{prof:?}");
    for d in &prof {
        assert!(d.lower <= d.upper && d.upper <= 1.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn loops_wind_once_around_set_cells(seed in any::<u64>(), p in 0.2f64..0.8) {
        let g = Grid::unit(2, 4).unwrap();
        let a = VoxelSet::new(g.clone(), random_mask(&g, seed, p)).unwrap();
        let loops = jordan_loops(&a).unwrap();
        for i in 0..g.len() {
            let c = g.coords(i);
            let pt = [c[0] as f64 + 0.5, c[1] as f64 + 0.5];
            let w: i32 = loops.iter().map(|l| l.winding(pt)).sum();
            prop_assert_eq!(w, a.mask()[i] as i32);
        }
        for l in &loops {
            if let Some(par) = l.parent {
                prop_assert!(loops[par].signed_area2.abs() > l.signed_area2.abs());
                prop_assert_eq!(loops[par].depth + 1, l.depth);
            }
        }
    }

    #[test]
    fn density_ratios_lie_in_unit_interval(seed in any::<u64>(), x in 0.0f64..1.0, y in 0.0f64..1.0) {
        let d = build_domain(&Generator::Ball { dim: 2, radius: 0.45 }, 6).unwrap();
        let g = d.grid().clone();
        let mask: Vec<bool> = random_mask(&g, seed, 0.5).iter().zip(d.occupancy()).map(|(a, b)| *a && *b).collect();
        let a = VoxelSet::in_domain(&d, mask).unwrap();
        let radii = [0.5, 0.25, 0.125, 0.0625];
        for base in [DensityBase::Domain(&d), DensityBase::Whole] {
            let p = density_profile(&a, [x, y, 0.0], &radii, base).unwrap();
            prop_assert!(p.ratios.iter().all(|&v| (0.0..=1.0).contains(&v)));
        }
    }

    #[test]
    fn classes_partition_the_faces(seed in any::<u64>()) {
        let d = build_domain(&Generator::SlitSquare { slit_len: 0.5 }, 5).unwrap();
        let g = d.grid().clone();
        let mask: Vec<bool> = random_mask(&g, seed, 0.5).iter().zip(d.occupancy()).map(|(a, b)| *a && *b).collect();
        let a = VoxelSet::in_domain(&d, mask).unwrap();
        let fs = a.boundary_faces();
        let parts = fs.count(FaceClass::Interior) + fs.count(FaceClass::Exterior) + fs.count(FaceClass::OnBoundary);
        prop_assert_eq!(parts, fs.len());
        prop_assert_eq!(fs.count(FaceClass::Exterior), 0);
        prop_assert_eq!(fs.area(FaceClass::Interior), perimeter(&a, Region::Domain(&d)));
    }
}
