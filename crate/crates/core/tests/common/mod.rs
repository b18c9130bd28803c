//! Reference implementations used as test oracles, written without calling
//! into the engine's geometry, plus random input generators.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use imgtouch::{AnnotatedImage, Area, AreaPath, Point};
use rand::seq::SliceRandom;
use rand::Rng;

pub const ORACLE_TOLERANCE: f64 = 1e-9;

pub fn samples_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../samples")
}

pub fn sample_images() -> Vec<(String, AnnotatedImage)> {
    let mut out = Vec::new();
    let mut paths: Vec<_> = std::fs::read_dir(samples_dir())
        .expect("samples directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.to_string_lossy().ends_with(".annot.json"))
        .collect();
    paths.sort();
    for p in paths {
        let text = std::fs::read_to_string(&p).unwrap();
        let name = p.file_name().unwrap().to_string_lossy().trim_end_matches(".annot.json").to_string();
        out.push((name, imgtouch::annot::from_json(&text).unwrap()));
    }
    out
}

/// Distance from `p` to segment `ab`, by clamped projection.
fn seg_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (vx, vy) = (b.0 - a.0, b.1 - a.1);
    let (wx, wy) = (p.0 - a.0, p.1 - a.1);
    let len2 = vx * vx + vy * vy;
    let u = if len2 == 0.0 { 0.0 } else { ((wx * vx + wy * vy) / len2).clamp(0.0, 1.0) };
    let (cx, cy) = (a.0 + u * vx - p.0, a.1 + u * vy - p.1);
    (cx * cx + cy * cy).sqrt()
}

/// Ray cast toward +x with the half-open edge rule and an orientation
/// test, counting boundary points (within the tolerance) as inside.
pub fn ray_cast_contains(poly: &[Point], p: Point) -> bool {
    let pts: Vec<(f64, f64)> = poly.iter().map(|q| (q.x, q.y)).collect();
    let n = pts.len();
    let pp = (p.x, p.y);
    for i in 0..n {
        if seg_distance(pp, pts[i], pts[(i + 1) % n]) <= ORACLE_TOLERANCE {
            return true;
        }
    }
    let mut crossings = 0;
    for i in 0..n {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        let upward = a.1 <= pp.1 && pp.1 < b.1;
        let downward = b.1 <= pp.1 && pp.1 < a.1;
        if !(upward || downward) {
            continue;
        }
        // Sign of the cross product says which side of the edge p is on.
        let cross = (b.0 - a.0) * (pp.1 - a.1) - (b.1 - a.1) * (pp.0 - a.0);
        if (upward && cross > 0.0) || (downward && cross < 0.0) {
            crossings += 1;
        }
    }
    crossings % 2 == 1
}

pub fn shoelace(poly: &[Point]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            a.x * b.y - b.x * a.y
        })
        .sum::<f64>()
        / 2.0
}

pub fn oracle_centroid(poly: &[Point]) -> Point {
    let a = shoelace(poly);
    if a.abs() < 1e-12 {
        let n = poly.len() as f64;
        return Point::new(poly.iter().map(|p| p.x).sum::<f64>() / n, poly.iter().map(|p| p.y).sum::<f64>() / n);
    }
    let n = poly.len();
    let (mut cx, mut cy) = (0.0, 0.0);
    for i in 0..n {
        let (p, q) = (poly[i], poly[(i + 1) % n]);
        let c = p.x * q.y - q.x * p.y;
        cx += (p.x + q.x) * c;
        cy += (p.y + q.y) * c;
    }
    Point::new(cx / (6.0 * a), cy / (6.0 * a))
}

/// Smallest containing area among `areas`, ties to the first.
pub fn oracle_smallest(areas: &[Area], p: Point) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, a) in areas.iter().enumerate() {
        if ray_cast_contains(&a.polygon, p) {
            let size = shoelace(&a.polygon).abs();
            match best {
                Some((_, s)) if s <= size => {}
                _ => best = Some((i, size)),
            }
        }
    }
    best.map(|(i, _)| i)
}

/// Top-level hit by brute force.
pub fn oracle_hit_top(image: &AnnotatedImage, p: Point) -> Option<AreaPath> {
    oracle_smallest(&image.areas, p).map(AreaPath::top)
}

/// Brute-force CAM mean over covered cell centers, row-major.
pub fn oracle_prominence(poly: &[Point], rows: usize, cols: usize, values: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut count = 0;
    for r in 0..rows {
        for c in 0..cols {
            let center = Point::new((c as f64 + 0.5) / cols as f64, (r as f64 + 0.5) / rows as f64);
            if ray_cast_contains(poly, center) {
                sum += values[r * cols + c];
                count += 1;
            }
        }
    }
    if count == 0 {
        let g = oracle_centroid(poly);
        let r = ((g.y * rows as f64).floor() as usize).min(rows - 1);
        let c = ((g.x * cols as f64).floor() as usize).min(cols - 1);
        return values[r * cols + c];
    }
    sum / count as f64
}

/// Star-shaped polygon: sorted distinct angles with every gap under a half
/// turn (so the center sees every edge), random radii, inside the unit
/// square.
pub fn random_star<R: Rng>(rng: &mut R, max_vertices: usize) -> Vec<Point> {
    use std::f64::consts::{PI, TAU};
    let c = Point::new(rng.gen_range(0.15..0.85), rng.gen_range(0.15..0.85));
    let room = c.x.min(1.0 - c.x).min(c.y).min(1.0 - c.y);
    let n = rng.gen_range(3..=max_vertices);
    let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..TAU)).collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup();
    let wrap_gap = angles.first().map_or(TAU, |a| a + TAU) - angles.last().copied().unwrap_or(0.0);
    let max_gap = angles.windows(2).map(|w| w[1] - w[0]).fold(wrap_gap, f64::max);
    if angles.len() < 3 || max_gap >= PI - 0.05 {
        return random_rect(rng);
    }
    let poly: Vec<Point> = angles
        .iter()
        .map(|a| {
            let r = rng.gen_range(0.2..1.0) * room;
            Point::new(c.x + r * a.cos(), c.y + r * a.sin())
        })
        .collect();
    if shoelace(&poly).abs() < 1e-6 {
        return random_rect(rng);
    }
    poly
}

pub fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Vec<Point> {
    vec![Point::new(x0, y0), Point::new(x1, y0), Point::new(x1, y1), Point::new(x0, y1)]
}

/// Axis-aligned rectangle on a 1/64 lattice, so lattice points can land
/// exactly on its edges.
pub fn random_rect<R: Rng>(rng: &mut R) -> Vec<Point> {
    let a = rng.gen_range(0..60);
    let b = rng.gen_range(a + 2..=64);
    let c = rng.gen_range(0..60);
    let d = rng.gen_range(c + 2..=64);
    let s = |v: i32| v as f64 / 64.0;
    rect(s(a), s(c), s(b), s(d))
}

pub fn random_polygon<R: Rng>(rng: &mut R) -> Vec<Point> {
    if rng.gen_bool(0.25) {
        random_rect(rng)
    } else {
        random_star(rng, 12)
    }
}

/// A query point: uniform, on the 1/64 lattice, or close to a vertex.
pub fn random_query<R: Rng>(rng: &mut R, poly: &[Point]) -> Point {
    match rng.gen_range(0..3) {
        0 => Point::new(rng.gen::<f64>(), rng.gen::<f64>()),
        1 => Point::new(rng.gen_range(0..=64) as f64 / 64.0, rng.gen_range(0..=64) as f64 / 64.0),
        _ => {
            let v = poly.choose(rng).unwrap();
            Point::new(
                (v.x + rng.gen_range(-0.02..0.02)).clamp(0.0, 1.0),
                (v.y + rng.gen_range(-0.02..0.02)).clamp(0.0, 1.0),
            )
        }
    }
}

const WORDS: &[&str] = &[
    "sky", "Balcony", "house", "tree", "dog", "Window", "cloud", "river", "bridge", "boat", "lamp",
    "door", "Roof", "chair", "table", "vase", "fence", "hill", "road", "car", "bird", "Sun",
];

/// Labels unique within one level, case-insensitively.
pub fn random_labels<R: Rng>(rng: &mut R, n: usize) -> Vec<String> {
    let mut used = BTreeSet::new();
    let mut out = Vec::new();
    while out.len() < n {
        let w = WORDS.choose(rng).unwrap();
        let label = if rng.gen_bool(0.5) { w.to_string() } else { format!("{w} {}", rng.gen_range(1..9)) };
        if used.insert(label.to_lowercase()) {
            out.push(label);
        }
    }
    out
}

/// Image of non-overlapping rectangles in a row, each with random sub-areas.
pub fn random_strip_image<R: Rng>(rng: &mut R, max_top: usize, max_subs: usize) -> AnnotatedImage {
    let n = rng.gen_range(1..=max_top);
    let labels = random_labels(rng, n);
    let w = 1.0 / n as f64;
    let areas = labels
        .into_iter()
        .enumerate()
        .map(|(i, label)| {
            let x0 = i as f64 * w;
            let k = rng.gen_range(0..=max_subs);
            let sub_labels = random_labels(rng, k);
            let subs = sub_labels
                .into_iter()
                .enumerate()
                .map(|(j, l)| {
                    let y0 = 0.2 + 0.6 * j as f64 / k as f64;
                    Area::new(l, rect(x0, y0, x0 + w, y0 + 0.6 / k as f64))
                })
                .collect();
            let mut a = Area::new(label, rect(x0, 0.2, x0 + w, 0.8)).with_sub_areas(subs);
            a.recommended = rng.gen_bool(0.3);
            a
        })
        .collect();
    AnnotatedImage::new("random", areas)
}

/// Areas explored, recomputed from the touched set alone.
pub fn oracle_explored(image: &AnnotatedImage, touched: &BTreeSet<AreaPath>) -> BTreeSet<AreaPath> {
    let mut out = BTreeSet::new();
    for (t, a) in image.areas.iter().enumerate() {
        let subs: Vec<AreaPath> = (0..a.sub_areas.len()).map(|s| AreaPath::sub(t, s)).collect();
        for s in &subs {
            if touched.contains(s) {
                out.insert(*s);
            }
        }
        let done = if subs.is_empty() { touched.contains(&AreaPath::top(t)) } else { subs.iter().all(|s| touched.contains(s)) };
        if done {
            out.insert(AreaPath::top(t));
        }
    }
    out
}

/// 8-way sector by comparing the angle in degrees against the sector
/// edges; an angle on an edge belongs to the lower-numbered sector.
pub fn oracle_sector(dx: f64, dy: f64) -> usize {
    let mut deg = dy.atan2(dx).to_degrees();
    if deg < 0.0 {
        deg += 360.0;
    }
    if deg <= 22.5 || deg >= 337.5 {
        return 0;
    }
    let edges = [67.5, 112.5, 157.5, 202.5, 247.5, 292.5, 337.5];
    1 + edges.iter().position(|e| deg <= *e).unwrap()
}

pub const SECTOR_PHRASES: [&str; 8] = [
    "right",
    "down and right",
    "down",
    "down and left",
    "left",
    "up and left",
    "up",
    "up and right",
];
