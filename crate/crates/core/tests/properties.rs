mod common;

use common::*;
use imgtouch::beacon::{beep_interval, direction, Direction};
use imgtouch::config::MenuBeaconConfig;
use imgtouch::geometry::{centroid, round9};
use imgtouch::hints::{bake_prominence, speech_volume};
use imgtouch::region::area_prominence;
use imgtouch::zoom::{to_image_coords, to_screen_coords, ZoomState};
use imgtouch::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn polygon_strategy() -> impl Strategy<Value = Vec<Point>> {
    any::<u64>().prop_map(|s| random_polygon(&mut ChaCha8Rng::seed_from_u64(s)))
}

fn point_strategy() -> impl Strategy<Value = Point> {
    (0.0..=1.0f64, 0.0..=1.0f64).prop_map(|(x, y)| Point::new(x, y))
}

proptest! {
    #[test]
    fn overlapping_areas_resolve_to_smallest(
        polys in prop::collection::vec(polygon_strategy(), 1..6),
        p in point_strategy(),
    ) {
        let areas: Vec<Area> = polys.into_iter().enumerate().map(|(i, q)| Area::new(format!("a{i}"), q)).collect();
        let expected = oracle_smallest(&areas, p);
        let image = AnnotatedImage::new("p", areas);
        prop_assert_eq!(hit_test(&image, p, Level::Top).unwrap(), expected.map(AreaPath::top));
    }

    #[test]
    fn sub_area_hits_require_the_parent(sub in polygon_strategy(), p in point_strategy()) {
        let parent = rect(0.25, 0.25, 0.75, 0.75);
        let expected = ray_cast_contains(&parent, p) && ray_cast_contains(&sub, p);
        let image = AnnotatedImage::new("s", vec![Area::new("parent", parent).with_sub_areas(vec![Area::new("sub", sub)])]);
        let got = hit_test(&image, p, Level::Inside(0)).unwrap();
        prop_assert_eq!(got == Some(AreaPath::sub(0, 0)), expected);
    }

    #[test]
    fn quadrants_partition_the_square(p in point_strategy()) {
        let owners: Vec<Quadrant> = Quadrant::ALL
            .into_iter()
            .filter(|q| {
                let o = q.origin();
                let (in_x, in_y) = (p.x - o.x, p.y - o.y);
                // Center lines belong to the lower-numbered quadrant.
                let x_ok = if o.x == 0.0 { in_x <= 0.5 } else { in_x > 0.0 };
                let y_ok = if o.y == 0.0 { in_y <= 0.5 } else { in_y > 0.0 };
                x_ok && y_ok
            })
            .collect();
        prop_assert_eq!(owners.len(), 1);
        prop_assert_eq!(Quadrant::containing(p), owners[0]);
    }

    #[test]
    fn zoom_mapping_is_a_bijection(s in point_strategy(), qi in 0usize..4) {
        let z = ZoomState::new(Quadrant::ALL[qi]);
        let img = to_image_coords(&z, s);
        prop_assert!(z.active_quadrant.rect().contains(img));
        let back = to_screen_coords(&z, img);
        prop_assert!(back.distance(s) <= 1e-12);
    }

    #[test]
    fn beep_interval_is_monotone_in_distance(a in 0.0..2.0f64, b in 0.0..2.0f64) {
        let cfg = MenuBeaconConfig::default();
        let (near, far) = if a <= b { (a, b) } else { (b, a) };
        let (i_near, i_far) = (beep_interval(near, &cfg), beep_interval(far, &cfg));
        prop_assert!(i_near <= i_far);
        prop_assert!((cfg.min_interval_ms..=cfg.max_interval_ms).contains(&i_near));
        prop_assert_eq!(i_near % 10, 0);
    }

    #[test]
    fn direction_matches_sector_oracle(dx in -1.0..1.0f64, dy in -1.0..1.0f64) {
        prop_assume!(dx != 0.0 || dy != 0.0);
        let expected = Direction::ALL[oracle_sector(dx, dy)];
        prop_assert_eq!(direction(dx, dy), expected);
        prop_assert_eq!(expected.phrase(), SECTOR_PHRASES[oracle_sector(dx, dy)]);
    }

    #[test]
    fn prominence_matches_brute_force(poly in polygon_strategy(), rows in 1usize..20, cols in 1usize..20, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values: Vec<f64> = (0..rows * cols).map(|_| rng.gen()).collect();
        let got = area_prominence(&Area::new("a", poly.clone()), &CamGrid::new(rows, cols, values.clone()));
        prop_assert_eq!(got.to_bits(), oracle_prominence(&poly, rows, cols, &values).to_bits());
    }

    #[test]
    fn volume_stays_in_range(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..6);
        let areas = (0..n).map(|i| Area::new(format!("a{i}"), random_polygon(&mut rng))).collect();
        let mut image = AnnotatedImage::new("v", areas);
        image.cam = Some(CamGrid::new(8, 8, (0..64).map(|_| rng.gen()).collect()));
        let table = bake_prominence(&image).unwrap();
        let cfg = EngineConfig::default().hints;
        for p in image.all_paths() {
            let v = speech_volume(&table, p, &cfg).unwrap();
            prop_assert!((cfg.volume_min..=cfg.volume_max).contains(&v) || v == 1.0);
            prop_assert_eq!(v, round9(v));
        }
    }
}

/// Rejection-sampling centroid.
fn monte_carlo_centroid(poly: &[Point], samples: usize, rng: &mut ChaCha8Rng) -> Point {
    let (mut sx, mut sy, mut n) = (0.0, 0.0, 0usize);
    let xs = poly.iter().map(|p| p.x);
    let ys = poly.iter().map(|p| p.y);
    let (x0, x1) = (xs.clone().fold(f64::MAX, f64::min), xs.fold(f64::MIN, f64::max));
    let (y0, y1) = (ys.clone().fold(f64::MAX, f64::min), ys.fold(f64::MIN, f64::max));
    for _ in 0..samples {
        let p = Point::new(rng.gen_range(x0..x1), rng.gen_range(y0..y1));
        if ray_cast_contains(poly, p) {
            sx += p.x;
            sy += p.y;
            n += 1;
        }
    }
    Point::new(sx / n as f64, sy / n as f64)
}

#[test]
fn centroid_matches_monte_carlo() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..3 {
        let poly = random_star(&mut rng, 10);
        let mc = monte_carlo_centroid(&poly, 1_000_000, &mut rng);
        let c = centroid(&poly);
        assert!(c.distance(mc) < 1e-3, "{c:?} vs {mc:?}");
    }
}

#[test]
fn nested_hot_sub_area_is_more_prominent() {
    // Hot 4x4 block in the middle of a cold 8x8 CAM.
    let values: Vec<f64> = (0..64)
        .map(|i| if (2..6).contains(&(i / 8)) && (2..6).contains(&(i % 8)) { 0.9 } else { 0.1 })
        .collect();
    let mut image = AnnotatedImage::new(
        "nested",
        vec![Area::new("frame", rect(0.0, 0.0, 1.0, 1.0)).with_sub_areas(vec![Area::new("core", rect(0.3, 0.3, 0.7, 0.7))])],
    );
    image.cam = Some(CamGrid::new(8, 8, values.clone()));
    let table = bake_prominence(&image).unwrap();
    let parent = table.get(AreaPath::top(0)).unwrap();
    let sub = table.get(AreaPath::sub(0, 0)).unwrap();
    assert_eq!(parent, oracle_prominence(&rect(0.0, 0.0, 1.0, 1.0), 8, 8, &values));
    assert_eq!(sub, oracle_prominence(&rect(0.3, 0.3, 0.7, 0.7), 8, 8, &values));
    assert!(sub >= parent);
}

/// A shared strictly-interior point found on a sample grid.
fn grid_overlap(a: &[Point], b: &[Point]) -> bool {
    const N: usize = 150;
    (0..N * N).any(|i| {
        let p = Point::new(((i % N) as f64 + 0.5) / N as f64, ((i / N) as f64 + 0.5) / N as f64);
        ray_cast_contains(a, p) && ray_cast_contains(b, p) && {
            let strict = |poly: &[Point]| {
                let n = poly.len();
                (0..n).all(|k| {
                    let (u, v) = (poly[k], poly[(k + 1) % n]);
                    let seg = Point::new(v.x - u.x, v.y - u.y);
                    let len = (seg.x * seg.x + seg.y * seg.y).sqrt();
                    let cross = ((p.x - u.x) * seg.y - (p.y - u.y) * seg.x).abs() / len;
                    let t = ((p.x - u.x) * seg.x + (p.y - u.y) * seg.y) / (len * len);
                    cross > 1e-9 || !(0.0..=1.0).contains(&t)
                })
            };
            strict(a) && strict(b)
        }
    })
}

#[test]
fn overlap_warnings_agree_with_grid_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for case in 0..300 {
        let (a, b) = (random_polygon(&mut rng), random_polygon(&mut rng));
        let image = AnnotatedImage::new("o", vec![Area::new("a", a.clone()), Area::new("b", b.clone())]);
        let warned = validate(&image).iter().any(|i| i.message.starts_with("top-level overlap"));
        if grid_overlap(&a, &b) {
            assert!(warned, "case {case}: sampled overlap but no warning");
        }
        let bbox_apart = |p: &[Point], q: &[Point]| {
            let max = |v: &[Point], f: fn(&Point) -> f64| v.iter().map(f).fold(f64::MIN, f64::max);
            let min = |v: &[Point], f: fn(&Point) -> f64| v.iter().map(f).fold(f64::MAX, f64::min);
            max(p, |p| p.x) < min(q, |p| p.x) || max(p, |p| p.y) < min(q, |p| p.y)
        };
        if bbox_apart(&a, &b) || bbox_apart(&b, &a) {
            assert!(!warned, "case {case}: disjoint boxes warned");
        }
    }
}

#[test]
fn identical_polygons_warn_once() {
    let sq = rect(0.1, 0.1, 0.4, 0.4);
    let image = AnnotatedImage::new("twins", vec![Area::new("a", sq.clone()), Area::new("b", sq)]);
    let issues = validate(&image);
    assert_eq!(issues.len(), 1);
    assert_eq!(issues[0].severity, Severity::Warning);
    assert!(issues[0].message.starts_with("top-level overlap"));
}


#[test]
fn generated_polygons_are_simple() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..2_000 {
        assert!(imgtouch::geometry::is_simple(&random_polygon(&mut rng)));
    }
}
