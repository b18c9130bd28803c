//! Audio beacon: guides the finger to a chosen area with direction speech
//! and distance-coded beeps.

use std::f64::consts::{FRAC_PI_4, SQRT_2};

use crate::audio::{AudioEvent, Cue, EarconKind, Speech};
use crate::config::MenuBeaconConfig;
use crate::explore::{ExplorationState, StepContext};
use crate::geometry::{self, Point};
use crate::region::{hit_test_in, visible_in, AnnotatedImage, AreaPath, Level, Quadrant};

#[derive(Debug, Clone, PartialEq)]
pub struct BeaconState {
    pub target: AreaPath,
    /// Image coordinates.
    pub target_point: Point,
    pub last_announce_ms: Option<u64>,
    /// Interval of the latest `beep_rate` event; `None` while silent.
    pub last_interval: Option<u32>,
}

/// The eight announced directions, in tie-break order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Right,
    DownRight,
    Down,
    DownLeft,
    Left,
    UpLeft,
    Up,
    UpRight,
}

impl Direction {
    pub const ALL: [Direction; 8] = [
        Direction::Right,
        Direction::DownRight,
        Direction::Down,
        Direction::DownLeft,
        Direction::Left,
        Direction::UpLeft,
        Direction::Up,
        Direction::UpRight,
    ];

    pub fn phrase(self) -> &'static str {
        match self {
            Direction::Right => "right",
            Direction::DownRight => "down and right",
            Direction::Down => "down",
            Direction::DownLeft => "down and left",
            Direction::Left => "left",
            Direction::UpLeft => "up and left",
            Direction::Up => "up",
            Direction::UpRight => "up and right",
        }
    }

    /// Unit step in screen coordinates (y down).
    pub fn unit(self) -> (f64, f64) {
        let a = self as usize as f64 * FRAC_PI_4;
        (a.cos(), a.sin())
    }
}

/// Quantizes the vector `(dx, dy)` (y down) into one of eight 45° sectors.
/// A vector on a sector boundary takes the sector listed first.
pub fn direction(dx: f64, dy: f64) -> Direction {
    let mut s = dy.atan2(dx) / FRAC_PI_4;
    if s < 0.0 {
        s += 8.0;
    }
    // Sector k spans (k - 0.5, k + 0.5]; the 7/0 boundary goes to 0.
    let k = if s == 7.5 { 0 } else { ((s + 0.5).ceil() as usize + 7) % 8 };
    Direction::ALL[k]
}

/// Beep interval for a finger `distance` away from the target, rounded to
/// the nearest 10 ms.
pub fn beep_interval(distance: f64, config: &MenuBeaconConfig) -> u32 {
    let lo = config.min_interval_ms as f64;
    let hi = config.max_interval_ms as f64;
    let raw = lo + (hi - lo) * (distance / SQRT_2).min(1.0);
    ((raw / 10.0).round() * 10.0) as u32
}

/// Point the beacon steers toward: the centroid of the target's visible
/// polygon, or the nearest point of the polygon that hit-tests to the
/// target when the centroid does not. `None` when nothing of the target is
/// visible in `quadrant`.
pub fn target_point(
    image: &AnnotatedImage,
    target: AreaPath,
    level: Level,
    quadrant: Option<Quadrant>,
) -> Option<Point> {
    let area = image.area(target)?;
    let poly = match quadrant {
        Some(q) => {
            let clipped = geometry::clip_to_rect(&area.polygon, q.rect());
            if geometry::polygon_area(&clipped) <= geometry::DEGENERATE_AREA {
                return None;
            }
            clipped
        }
        None => area.polygon.clone(),
    };
    let visible = |path| visible_in(image, path, quadrant);
    let hits = |p: Point| hit_test_in(image, p, level, visible).ok().flatten() == Some(target);
    let c = geometry::centroid(&poly);
    if geometry::contains(&poly, c) && hits(c) {
        return Some(c);
    }
    // Scan the bounding box for the closest point that resolves to the target.
    const STEPS: usize = 64;
    let bb = geometry::bounding_box(&poly);
    let mut best: Option<(f64, Point)> = None;
    for i in 0..=STEPS {
        for j in 0..=STEPS {
            let p = Point::new(
                bb.x0 + bb.width() * i as f64 / STEPS as f64,
                bb.y0 + bb.height() * j as f64 / STEPS as f64,
            );
            if !geometry::contains(&poly, p) || !hits(p) {
                continue;
            }
            let d = p.distance(c);
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, p));
            }
        }
    }
    Some(best.map_or_else(|| geometry::closest_on_boundary(&poly, c), |(_, p)| p))
}

/// Starts guidance toward `target`, replacing the menu.
pub fn activate(
    state: &mut ExplorationState,
    target: AreaPath,
    ctx: &StepContext,
    t: u64,
) -> Vec<AudioEvent> {
    state.menu.close();
    let quadrant = state.zoom.as_ref().map(|z| z.active_quadrant);
    let Some(point) = target_point(ctx.image, target, state.level, quadrant) else {
        return vec![AudioEvent::speech(
            t,
            Speech::new("target outside zoomed quadrant", Cue::BeaconRejected).about(target),
        )];
    };
    state.beacon = Some(BeaconState {
        target,
        target_point: point,
        last_announce_ms: None,
        last_interval: None,
    });
    state.counters.beacons_placed += 1;
    vec![AudioEvent::speech(t, Speech::new("in beacon mode", Cue::BeaconStart).about(target))]
}

pub fn cancel(state: &mut ExplorationState, t: u64) -> Vec<AudioEvent> {
    let Some(b) = state.beacon.take() else { return Vec::new() };
    let mut out = Vec::new();
    if b.last_interval.is_some() {
        out.push(AudioEvent::beep_rate(t, None));
    }
    out.push(AudioEvent::speech(t, Speech::new("beacon canceled", Cue::BeaconCancel).about(b.target)));
    out
}

/// Silences the beeps when the finger lifts; guidance resumes on the next
/// drag with a fresh direction announcement.
pub fn on_lift(state: &mut ExplorationState, t: u64) -> Vec<AudioEvent> {
    let Some(b) = state.beacon.as_mut() else { return Vec::new() };
    b.last_announce_ms = None;
    match b.last_interval.take() {
        Some(_) => vec![AudioEvent::beep_rate(t, None)],
        None => Vec::new(),
    }
}

/// Guidance for one finger sample at image point `finger`.
pub fn beacon_guide(
    state: &mut ExplorationState,
    finger: Point,
    t: u64,
    ctx: &StepContext,
) -> Vec<AudioEvent> {
    let level = state.level;
    let quadrant = state.zoom.map(|z| z.active_quadrant);
    let Some(b) = state.beacon.as_mut() else { return Vec::new() };
    let mut out = Vec::new();
    let visible = |path| visible_in(ctx.image, path, quadrant);
    if hit_test_in(ctx.image, finger, level, visible).ok().flatten() == Some(b.target) {
        let target = b.target;
        state.beacon = None;
        let label = ctx.image.area(target).map_or("", |a| a.label.as_str());
        out.push(AudioEvent::earcon(t, EarconKind::BeaconArrived));
        out.push(AudioEvent::speech(
            t,
            Speech::new(format!("arrived at {label}"), Cue::BeaconArrived).about(target),
        ));
        out.push(AudioEvent::beep_rate(t, None));
        return out;
    }
    let cfg = &ctx.config.menu_beacon;
    let interval = beep_interval(finger.distance(b.target_point), cfg);
    if b.last_interval != Some(interval) {
        b.last_interval = Some(interval);
        out.push(AudioEvent::beep_rate(t, Some(interval)));
    }
    if b.last_announce_ms.is_none_or(|last| t >= last + cfg.announce_period_ms) {
        b.last_announce_ms = Some(t);
        let dir = direction(b.target_point.x - finger.x, b.target_point.y - finger.y);
        out.push(AudioEvent::speech(
            t,
            Speech::new(dir.phrase(), Cue::BeaconDirection).about(b.target),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::EngineConfig;
    use crate::explore::Tools;
    use crate::region::{hit_test, Area};

    #[test]
    fn direction_examples() {
        assert_eq!(direction(0.5, -0.5), Direction::UpRight);
        assert_eq!(direction(1.0, 0.0), Direction::Right);
        assert_eq!(direction(0.0, 1.0), Direction::Down);
        assert_eq!(direction(-1.0, 0.0), Direction::Left);
        assert_eq!(direction(-1.0, -1.0), Direction::UpLeft);
        assert_eq!(direction(1.0, -1e-9), Direction::Right);
    }

    #[test]
    fn boundary_ties_take_smaller_index() {
        let at = |deg: f64| {
            let r = deg.to_radians();
            (r.cos(), r.sin())
        };
        // Construct vectors that land exactly on s = k + 0.5 where possible.
        for k in 0..8 {
            let (dx, dy) = at(45.0 * k as f64);
            assert_eq!(direction(dx, dy), Direction::ALL[k]);
        }
        let (dx, dy) = at(22.5);
        let s = dy.atan2(dx) / FRAC_PI_4;
        if s == 0.5 {
            assert_eq!(direction(dx, dy), Direction::Right);
        }
    }

    #[test]
    fn intervals() {
        let cfg = MenuBeaconConfig::default();
        assert_eq!(beep_interval(0.0, &cfg), 120);
        assert_eq!(beep_interval(SQRT_2, &cfg), 900);
        assert_eq!(beep_interval(5.0, &cfg), 900);
        // 120 + 780 * 0.5 = 510
        assert_eq!(beep_interval(SQRT_2 / 2.0, &cfg), 510);
    }

    fn square(x0: f64, y0: f64, s: f64) -> Vec<Point> {
        vec![
            Point::new(x0, y0),
            Point::new(x0 + s, y0),
            Point::new(x0 + s, y0 + s),
            Point::new(x0, y0 + s),
        ]
    }

    #[test]
    fn guide_then_arrive() {
        let img = AnnotatedImage::new(
            "t",
            vec![Area::new("sky", square(0.0, 0.0, 0.3)), Area::new("balcony", square(0.6, 0.1, 0.3))],
        );
        let cfg = EngineConfig::default();
        let ctx = StepContext { image: &img, config: &cfg, prominence: None };
        let mut s = ExplorationState::new(Tools { menu_beacon: true, ..Tools::NONE });
        activate(&mut s, AreaPath::top(1), &ctx, 0);
        assert_eq!(s.beacon.as_ref().unwrap().target_point, Point::new(0.75, 0.25));
        let first = beacon_guide(&mut s, Point::new(0.25, 0.75), 100, &ctx);
        assert_eq!(first.len(), 2);
        assert_eq!(first[1].as_speech().unwrap().text, "up and right");
        // Within the announce period only the beep rate may change.
        let second = beacon_guide(&mut s, Point::new(0.3, 0.7), 200, &ctx);
        assert!(second.iter().all(|e| e.as_speech().is_none()));
        let lifted = on_lift(&mut s, 300);
        assert_eq!(lifted, vec![AudioEvent::beep_rate(300, None)]);
        assert!(on_lift(&mut s, 301).is_empty());
        let arrived = beacon_guide(&mut s, Point::new(0.6, 0.4), 400, &ctx);
        assert_eq!(arrived[0], AudioEvent::earcon(400, EarconKind::BeaconArrived));
        assert_eq!(arrived[1].as_speech().unwrap().text, "arrived at balcony");
        assert_eq!(arrived[2], AudioEvent::beep_rate(400, None));
        assert!(s.beacon.is_none());
        assert!(beacon_guide(&mut s, Point::new(0.1, 0.1), 500, &ctx).is_empty());
    }

    #[test]
    fn covered_centroid_moves_target_point() {
        // A ring-like "frame" whose centroid is covered by a smaller area.
        let img = AnnotatedImage::new(
            "t",
            vec![Area::new("frame", square(0.0, 0.0, 1.0)), Area::new("hole", square(0.4, 0.4, 0.2))],
        );
        let p = target_point(&img, AreaPath::top(0), Level::Top, None).unwrap();
        assert_eq!(hit_test(&img, p, Level::Top).unwrap(), Some(AreaPath::top(0)));
    }

    #[test]
    fn zoomed_target_outside_quadrant() {
        let img = AnnotatedImage::new("t", vec![Area::new("a", square(0.6, 0.6, 0.3))]);
        assert_eq!(target_point(&img, AreaPath::top(0), Level::Top, Some(Quadrant::Q1)), None);
        let p = target_point(&img, AreaPath::top(0), Level::Top, Some(Quadrant::Q4)).unwrap();
        assert!((p.x - 0.75).abs() < 1e-12 && (p.y - 0.75).abs() < 1e-12);
    }
}
