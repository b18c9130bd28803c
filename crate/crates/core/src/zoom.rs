//! Quadrant zoom: a fixed 2x view of one image quadrant, with a warning
//! near edges that an area continues past.

use crate::audio::{AudioEvent, Cue, EarconKind, Speech, ToneAction, ToneKind};
use crate::beacon;
use crate::explore::{ExplorationState, StepContext};
use crate::geometry::{Point, BOUNDARY_TOLERANCE};
use crate::region::{hit_test_in, visible_in, Area, AreaPath, Level, Quadrant};

pub const BLEED_TEXT: &str = "continues beyond this quadrant — zoom out to explore";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZoomState {
    pub active_quadrant: Quadrant,
    pub in_bleed: bool,
}

impl ZoomState {
    pub fn new(quadrant: Quadrant) -> Self {
        Self { active_quadrant: quadrant, in_bleed: false }
    }
}

pub fn to_image_coords(z: &ZoomState, screen: Point) -> Point {
    let o = z.active_quadrant.origin();
    Point::new(o.x + screen.x / 2.0, o.y + screen.y / 2.0)
}

pub fn to_screen_coords(z: &ZoomState, image: Point) -> Point {
    let o = z.active_quadrant.origin();
    Point::new((image.x - o.x) * 2.0, (image.y - o.y) * 2.0)
}

/// Zooms into the quadrant under the two-finger tap midpoint.
pub fn zoom_in(state: &mut ExplorationState, midpoint: Point, ctx: &StepContext, t: u64) -> Vec<AudioEvent> {
    if state.zoom.is_some() {
        return Vec::new();
    }
    let q = Quadrant::containing(midpoint);
    let mut out = beacon::cancel(state, t);
    state.menu.close();
    state.zoom = Some(ZoomState::new(q));
    out.push(AudioEvent::earcon(t, EarconKind::ZoomConfirm));
    let name = &ctx.config.zoom.quadrant_names[q.index()];
    out.push(AudioEvent::speech(t, Speech::new(format!("zoomed into {name}"), Cue::Zoom)));
    out
}

pub fn zoom_out(state: &mut ExplorationState, _ctx: &StepContext, t: u64) -> Vec<AudioEvent> {
    if state.zoom.is_none() {
        return Vec::new();
    }
    let mut out = on_lift(state, t);
    out.extend(beacon::cancel(state, t));
    state.menu.close();
    state.zoom = None;
    out.push(AudioEvent::earcon(t, EarconKind::ZoomConfirm));
    out.push(AudioEvent::speech(t, Speech::new("zoomed out", Cue::Zoom)));
    out
}

/// Whether `p` lies within `band` of a quadrant side that `area` extends past.
pub fn in_bleed_band(area: &Area, q: Quadrant, p: Point, band: f64) -> bool {
    let r = q.rect();
    let tol = BOUNDARY_TOLERANCE;
    let beyond = |f: &dyn Fn(Point) -> bool| area.polygon.iter().any(|v| f(*v));
    (p.x - r.x0 <= band && beyond(&|v| v.x < r.x0 - tol))
        || (r.x1 - p.x <= band && beyond(&|v| v.x > r.x1 + tol))
        || (p.y - r.y0 <= band && beyond(&|v| v.y < r.y0 - tol))
        || (r.y1 - p.y <= band && beyond(&|v| v.y > r.y1 + tol))
}

/// Innermost area under `p` at the current level.
fn innermost(state: &ExplorationState, ctx: &StepContext, p: Point) -> Option<AreaPath> {
    let q = state.zoom.map(|z| z.active_quadrant);
    let visible = |path| visible_in(ctx.image, path, q);
    let hit = hit_test_in(ctx.image, p, state.level, visible).ok().flatten();
    match state.level {
        Level::Inside(parent) if hit.is_none() => (ctx.image.areas[parent].contains(p)
            && visible(AreaPath::top(parent)))
        .then_some(AreaPath::top(parent)),
        _ => hit,
    }
}

/// Starts or stops the bleed warning for a finger at image point `p`.
pub fn bleed_check(state: &mut ExplorationState, p: Point, ctx: &StepContext, t: u64) -> Vec<AudioEvent> {
    let Some(z) = state.zoom else { return Vec::new() };
    let hit = innermost(state, ctx, p);
    let bleeding = hit
        .and_then(|path| ctx.image.area(path))
        .is_some_and(|a| in_bleed_band(a, z.active_quadrant, p, ctx.config.zoom.guard_band));
    let mut out = Vec::new();
    if bleeding && !z.in_bleed {
        out.push(AudioEvent::tone(t, ToneKind::BleedWarning, ToneAction::Start));
        let mut speech = Speech::new(BLEED_TEXT, Cue::Bleed);
        speech.area = hit;
        out.push(AudioEvent::speech(t, speech));
    } else if !bleeding && z.in_bleed {
        out.push(AudioEvent::tone(t, ToneKind::BleedWarning, ToneAction::Stop));
    }
    if let Some(z) = state.zoom.as_mut() {
        z.in_bleed = bleeding;
    }
    out
}

/// Stops the bleed tone when the finger lifts.
pub fn on_lift(state: &mut ExplorationState, t: u64) -> Vec<AudioEvent> {
    match state.zoom.as_mut() {
        Some(z) if z.in_bleed => {
            z.in_bleed = false;
            vec![AudioEvent::tone(t, ToneKind::BleedWarning, ToneAction::Stop)]
        }
        _ => Vec::new(),
    }
}
