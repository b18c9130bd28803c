//! The two-button audio menu listing the areas of the active level.

use std::cmp::Ordering;

use crate::audio::{AudioEvent, Cue, EarconKind, Speech, Voice};
use crate::beacon;
use crate::explore::{count_text, unexplored_count, ExplorationState, StepContext};
use crate::gesture::{Button, GestureEvent, GestureKind};
use crate::region::{visible_in, AnnotatedImage, AreaPath, Level};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MenuEntry {
    pub path: AreaPath,
    pub label: String,
    pub explored: bool,
    pub recommended: bool,
    pub sub_count: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MenuState {
    pub open: bool,
    pub entries: Vec<MenuEntry>,
    /// `None` until the first scroll after opening; a hold then targets
    /// the first entry.
    pub cursor: Option<usize>,
}

impl MenuState {
    pub fn close(&mut self) {
        *self = MenuState::default();
    }

    pub fn selected(&self) -> Option<&MenuEntry> {
        if !self.open {
            return None;
        }
        self.entries.get(self.cursor.unwrap_or(0))
    }
}

/// Enhanced-menu order: recommended entries alphabetically, then the rest
/// by descending sub-area count with alphabetical ties.
fn hinted_order(a: &MenuEntry, b: &MenuEntry) -> Ordering {
    let alpha = || {
        a.label
            .to_lowercase()
            .cmp(&b.label.to_lowercase())
            .then_with(|| a.path.cmp(&b.path))
    };
    match (a.recommended, b.recommended) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        (true, true) => alpha(),
        (false, false) => b.sub_count.cmp(&a.sub_count).then_with(alpha),
    }
}

/// Menu entries for the current level: unexplored first, explored last.
/// While zoomed, only areas intersecting the active quadrant are listed.
pub fn build_menu(image: &AnnotatedImage, state: &ExplorationState) -> Vec<MenuEntry> {
    let hints = state.enabled_tools.hints;
    let quadrant = state.zoom.as_ref().map(|z| z.active_quadrant);
    let mut entries: Vec<MenuEntry> = image
        .level_paths(state.level)
        .into_iter()
        .filter_map(|path| {
            let area = image.area(path)?;
            if !visible_in(image, path, quadrant) {
                return None;
            }
            Some(MenuEntry {
                path,
                label: area.label.clone(),
                explored: state.explored.contains(&path),
                recommended: area.recommended && path.is_top(),
                sub_count: area.sub_areas.len(),
            })
        })
        .collect();
    // Stable sorts keep annotation order wherever the keys tie.
    if hints {
        entries.sort_by(hinted_order);
    }
    entries.sort_by_key(|e| e.explored);
    entries
}

/// Spoken form of a menu entry.
pub fn entry_text(entry: &MenuEntry, hints: bool) -> String {
    let mut words = Vec::new();
    if hints && entry.recommended {
        words.push("recommended".to_string());
    }
    if entry.explored {
        words.push("explored".to_string());
    }
    words.push(entry.label.clone());
    let mut text = words.join(" ");
    if hints && entry.sub_count > 0 {
        let noun = if entry.sub_count == 1 { "sub-area" } else { "sub-areas" };
        text.push_str(&format!(", {} {noun}", entry.sub_count));
    }
    text
}

fn button_at(ctx: &StepContext, position: crate::geometry::Point) -> Option<Button> {
    let cfg = &ctx.config.menu_beacon;
    if cfg.open_button.contains(position) {
        Some(Button::Open)
    } else if cfg.scroll_button.contains(position) {
        Some(Button::Scroll)
    } else {
        None
    }
}

/// Handles taps and holds on the menu buttons.
pub fn menu_input(state: &mut ExplorationState, g: &GestureEvent, ctx: &StepContext) -> Vec<AudioEvent> {
    let t = g.time_ms;
    let mut out = Vec::new();
    match &g.kind {
        GestureKind::Tap { fingers: 1, count: 1, position } => match button_at(ctx, *position) {
            Some(Button::Open) => {
                state.menu = MenuState { open: true, entries: build_menu(ctx.image, state), cursor: None };
                let n = unexplored_count(state, ctx.image, state.level);
                out.push(AudioEvent::speech(t, Speech::new(count_text(n), Cue::Count)));
            }
            Some(Button::Scroll) => {
                if !state.menu.open || state.menu.entries.is_empty() {
                    return out;
                }
                let len = state.menu.entries.len();
                let mut next = state.menu.cursor.map_or(0, |c| c + 1);
                if next >= len {
                    next = 0;
                    out.push(AudioEvent::earcon(t, EarconKind::MenuWrap));
                }
                state.menu.cursor = Some(next);
                let entry = &state.menu.entries[next];
                let voice = if entry.explored { Voice::Secondary } else { Voice::Primary };
                out.push(AudioEvent::speech(
                    t,
                    Speech::new(entry_text(entry, state.enabled_tools.hints), Cue::MenuEntry)
                        .voice(voice)
                        .about(entry.path),
                ));
                if state.level == Level::Top {
                    state.counters.top_scroll_times.push(t);
                }
            }
            None => {}
        },
        GestureKind::HoldStart(Button::Scroll) => {
            if state.beacon.is_some() {
                out.extend(beacon::cancel(state, t));
            } else if let Some(entry) = state.menu.selected() {
                let target = entry.path;
                out.extend(beacon::activate(state, target, ctx, t));
            }
        }
        _ => {}
    }
    out
}
