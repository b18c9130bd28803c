//! Fixtures shared by the benchmarks.

use imgtouch::{AnnotatedImage, Area, CamGrid, Phase, Point, TouchEvent};

/// Regular `n`-gon of radius `r` around `(cx, cy)`.
pub fn ngon(cx: f64, cy: f64, r: f64, n: usize) -> Vec<Point> {
    (0..n)
        .map(|i| {
            let a = std::f64::consts::TAU * i as f64 / n as f64;
            Point::new(cx + r * a.cos(), cy + r * a.sin())
        })
        .collect()
}

/// A `side` x `side` grid of octagons, each split into two sub-areas, with a
/// CAM of `cam` x `cam` cells.
pub fn grid_image(side: usize, cam: usize) -> AnnotatedImage {
    let cell = 1.0 / side as f64;
    let mut areas = Vec::new();
    for row in 0..side {
        for col in 0..side {
            let cx = (col as f64 + 0.5) * cell;
            let cy = (row as f64 + 0.5) * cell;
            let r = cell * 0.45;
            let subs = vec![
                Area::new(format!("left {row},{col}"), ngon(cx - r / 2.0, cy, r / 3.0, 6)),
                Area::new(format!("right {row},{col}"), ngon(cx + r / 2.0, cy, r / 3.0, 6)),
            ];
            areas.push(Area::new(format!("area {row},{col}"), ngon(cx, cy, r, 8)).with_sub_areas(subs));
        }
    }
    let mut image = AnnotatedImage::new("bench", areas);
    let values = (0..cam * cam).map(|i| ((i * 37) % 101) as f64 / 100.0).collect();
    image.cam = Some(CamGrid::new(cam, cam, values));
    image
}

/// One finger sweeping back and forth across the screen.
pub fn sweep_trace(rows: usize, samples: usize) -> Vec<TouchEvent> {
    let mut out = Vec::new();
    let mut t = 0;
    for row in 0..rows {
        let y = (row as f64 + 0.5) / rows as f64;
        out.push(TouchEvent::new(t, 0, Phase::Down, 0.0, y));
        for s in 1..=samples {
            t += 16;
            let x = s as f64 / samples as f64;
            let x = if row % 2 == 0 { x } else { 1.0 - x };
            out.push(TouchEvent::new(t, 0, Phase::Move, x, y));
        }
        out.push(TouchEvent::new(t, 0, Phase::Up, out.last().map_or(0.0, |e| e.position.x), y));
        t += 400;
    }
    out
}
