//! The exploration state machine.
//!
//! [`step`] consumes one classified gesture and returns the audio it
//! produces. Tool modules see each gesture first in a fixed order: zoom,
//! beacon, menu, then the baseline rules in this module.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::audio::{AudioEvent, Cue, Speech, ToneAction, ToneKind};
use crate::beacon::{self, BeaconState};
use crate::config::EngineConfig;
use crate::geometry::Point;
use crate::gesture::{GestureEvent, GestureKind};
use crate::hints::{self, ProminenceTable};
use crate::menu::{self, MenuState};
use crate::region::{AnnotatedImage, AreaPath, Level};
use crate::zoom::{self, ZoomState};

/// The optional tools layered over baseline exploration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Tools {
    pub menu_beacon: bool,
    pub hints: bool,
    pub quadrant_zoom: bool,
}

impl Tools {
    pub const NONE: Tools = Tools { menu_beacon: false, hints: false, quadrant_zoom: false };
    pub const ALL: Tools = Tools { menu_beacon: true, hints: true, quadrant_zoom: true };
}

impl FromStr for Tools {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut tools = Tools::NONE;
        for name in s.split(',').map(str::trim).filter(|n| !n.is_empty()) {
            match name {
                "menu_beacon" | "menu" | "beacon" => tools.menu_beacon = true,
                "hints" => tools.hints = true,
                "zoom" | "quadrant_zoom" => tools.quadrant_zoom = true,
                "none" | "baseline" => {}
                "all" => tools = Tools::ALL,
                other => return Err(format!("unknown tool \"{other}\"")),
            }
        }
        Ok(tools)
    }
}

impl fmt::Display for Tools {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = [
            (self.menu_beacon, "menu_beacon"),
            (self.hints, "hints"),
            (self.quadrant_zoom, "zoom"),
        ]
        .into_iter()
        .filter_map(|(on, n)| on.then_some(n))
        .collect();
        if names.is_empty() {
            f.write_str("none")
        } else {
            f.write_str(&names.join(","))
        }
    }
}

/// Session tallies kept alongside the state for metrics.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SessionCounters {
    /// Times of menu scrolls made at the top level.
    pub top_scroll_times: Vec<u64>,
    pub beacons_placed: u32,
    /// Time of the latest emitted audio event.
    pub last_event_ms: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExplorationState {
    pub level: Level,
    pub explored: BTreeSet<AreaPath>,
    pub touched_once: BTreeSet<AreaPath>,
    pub menu: MenuState,
    pub beacon: Option<BeaconState>,
    pub zoom: Option<ZoomState>,
    pub enabled_tools: Tools,
    /// Top-level area a double-tap will enter.
    pub last_announced_top: Option<usize>,
    pub off_area_tone: bool,
    pub completion_announced: bool,
    pub counters: SessionCounters,
}

impl ExplorationState {
    pub fn new(tools: Tools) -> Self {
        Self { enabled_tools: tools, ..Self::default() }
    }
}

/// Read-only inputs shared by every step.
#[derive(Debug, Clone, Copy)]
pub struct StepContext<'a> {
    pub image: &'a AnnotatedImage,
    pub config: &'a EngineConfig,
    pub prominence: Option<&'a ProminenceTable>,
}

/// Unexplored areas at `level`.
pub fn unexplored_count(state: &ExplorationState, image: &AnnotatedImage, level: Level) -> usize {
    image
        .level_paths(level)
        .into_iter()
        .filter(|p| !state.explored.contains(p))
        .count()
}

pub fn all_explored(state: &ExplorationState, image: &AnnotatedImage) -> bool {
    unexplored_count(state, image, Level::Top) == 0
}

pub const COMPLETE_TEXT: &str = "no more unexplored areas";

pub fn count_text(n: usize) -> String {
    if n == 1 {
        "1 unexplored area".to_string()
    } else {
        format!("{n} unexplored areas")
    }
}

/// Maps a screen point through the active zoom, if any.
pub fn view_point(state: &ExplorationState, screen: Point) -> Point {
    match &state.zoom {
        Some(z) => zoom::to_image_coords(z, screen),
        None => screen,
    }
}

/// Advances the state by one gesture.
pub fn step(state: &mut ExplorationState, g: &GestureEvent, ctx: &StepContext) -> Vec<AudioEvent> {
    let t = g.time_ms;
    let tools = state.enabled_tools;
    let mut out = Vec::new();
    match &g.kind {
        GestureKind::Tap { fingers: 2, count, position } => {
            if tools.quadrant_zoom {
                match count {
                    2 if state.zoom.is_none() => out.extend(zoom::zoom_in(state, *position, ctx, t)),
                    3 if state.zoom.is_some() => out.extend(zoom::zoom_out(state, ctx, t)),
                    _ => {}
                }
            }
        }
        GestureKind::DragMove(screen) => {
            let p = view_point(state, *screen);
            if state.zoom.is_some() {
                out.extend(zoom::bleed_check(state, p, ctx, t));
            }
            if state.beacon.is_some() {
                out.extend(beacon::beacon_guide(state, p, t, ctx));
            }
        }
        GestureKind::DragEnd(_) => {
            out.extend(zoom::on_lift(state, t));
            out.extend(beacon::on_lift(state, t));
            stop_off_area_tone(state, t, &mut out);
        }
        GestureKind::Tap { fingers: 1, count: 1, .. }
        | GestureKind::HoldStart(_)
        | GestureKind::HoldEnd(_) => {
            if tools.menu_beacon {
                out.extend(menu::menu_input(state, g, ctx));
            }
        }
        GestureKind::Tap { fingers: 1, count: 2, .. } => enter(state, ctx, t, &mut out),
        GestureKind::Tap { fingers: 1, count: 3, .. } => exit(state, ctx, t, &mut out),
        GestureKind::Tap { .. } => {}
        GestureKind::DragEnter(path) => drag_enter(state, *path, ctx, t, &mut out),
        GestureKind::DragExit(path) => {
            if let Level::Inside(parent) = state.level {
                if *path == AreaPath::top(parent) && !state.off_area_tone {
                    state.off_area_tone = true;
                    out.push(AudioEvent::tone(t, ToneKind::OffAreaWarning, ToneAction::Start));
                }
            }
        }
    }
    if let Some(last) = out.last() {
        state.counters.last_event_ms = Some(last.time_ms);
    }
    out
}

fn stop_off_area_tone(state: &mut ExplorationState, t: u64, out: &mut Vec<AudioEvent>) {
    if state.off_area_tone {
        state.off_area_tone = false;
        out.push(AudioEvent::tone(t, ToneKind::OffAreaWarning, ToneAction::Stop));
    }
}

/// Records a touch and updates the explored sets.
fn mark_touched(state: &mut ExplorationState, image: &AnnotatedImage, path: AreaPath) {
    state.touched_once.insert(path);
    match path.parent() {
        None => {
            if image.area(path).is_some_and(|a| !a.has_sub_areas()) {
                state.explored.insert(path);
            }
        }
        Some(parent) => {
            state.explored.insert(path);
            let subs = image.area(parent).map_or(0, |a| a.sub_areas.len());
            if (0..subs).all(|s| state.explored.contains(&AreaPath::sub(parent.top, s))) {
                state.explored.insert(parent);
            }
        }
    }
}

fn drag_enter(
    state: &mut ExplorationState,
    path: AreaPath,
    ctx: &StepContext,
    t: u64,
    out: &mut Vec<AudioEvent>,
) {
    match (state.level, path.sub) {
        (Level::Top, None) => state.last_announced_top = Some(path.top),
        (Level::Inside(parent), None) if parent == path.top => {
            // Back on the entered parent; only sub-areas are announced here.
            stop_off_area_tone(state, t, out);
            return;
        }
        (Level::Inside(parent), Some(_)) if parent == path.top => {}
        _ => return,
    }
    let Some(area) = ctx.image.area(path) else { return };
    let mut text = area.label.clone();
    if path.is_top() && area.has_sub_areas() {
        text.push_str(". Double-tap to explore");
    }
    let hints_on = state.enabled_tools.hints;
    let volume = match (hints_on, ctx.prominence) {
        (true, Some(table)) => hints::speech_volume(table, path, &ctx.config.hints).unwrap_or(1.0),
        _ => 1.0,
    };
    let speech = Speech::new(text, Cue::Area).about(path).volume(volume);
    if hints_on {
        out.extend(hints::first_touch_decorate(state, path, speech, t));
    } else {
        out.push(AudioEvent::speech(t, speech));
    }
    mark_touched(state, ctx.image, path);
    if !state.completion_announced && !ctx.image.areas.is_empty() && all_explored(state, ctx.image) {
        state.completion_announced = true;
        out.push(AudioEvent::speech(t, Speech::new(COMPLETE_TEXT, Cue::Complete)));
    }
}

/// Leaves any level-bound tool state behind when the level changes.
fn reset_level_tools(state: &mut ExplorationState, t: u64, out: &mut Vec<AudioEvent>) {
    stop_off_area_tone(state, t, out);
    out.extend(beacon::cancel(state, t));
    state.menu.close();
}

fn enter(state: &mut ExplorationState, ctx: &StepContext, t: u64, out: &mut Vec<AudioEvent>) {
    if state.level != Level::Top {
        return;
    }
    let Some(top) = state.last_announced_top else { return };
    let Some(area) = ctx.image.areas.get(top) else { return };
    if !area.has_sub_areas() {
        return;
    }
    reset_level_tools(state, t, out);
    state.level = Level::Inside(top);
    out.push(AudioEvent::speech(
        t,
        Speech::new(format!("Entered {}", area.label), Cue::Entered).about(AreaPath::top(top)),
    ));
}

fn exit(state: &mut ExplorationState, ctx: &StepContext, t: u64, out: &mut Vec<AudioEvent>) {
    if state.level == Level::Top {
        return;
    }
    reset_level_tools(state, t, out);
    state.level = Level::Top;
    let n = unexplored_count(state, ctx.image, Level::Top);
    out.push(AudioEvent::speech(t, Speech::new(count_text(n), Cue::Count)));
}
