//! Raw touch input and its classification into taps, holds and drags.
//!
//! The classifier is incremental. Multi-tap groups and holds complete on
//! timers, so [`GestureClassifier::advance`] must be called with each new
//! event's timestamp before the event itself is handled; gestures whose
//! deadline has passed are released first, stamped with the deadline.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::config::TimingConfig;
use crate::geometry::Point;
use crate::region::{hit_test, AnnotatedImage, AreaPath, Level};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Down,
    Move,
    Up,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TouchEvent {
    pub time_ms: u64,
    pub pointer_id: u32,
    pub phase: Phase,
    /// Screen position, normalized.
    pub position: Point,
}

impl TouchEvent {
    pub fn new(time_ms: u64, pointer_id: u32, phase: Phase, x: f64, y: f64) -> Self {
        Self { time_ms, pointer_id, phase, position: Point::new(x, y) }
    }
}

/// The two on-screen menu buttons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Button {
    /// Upper-left: opens the menu.
    Open,
    /// Lower-left: scrolls the menu; hold for the beacon.
    Scroll,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GestureKind {
    DragEnter(AreaPath),
    DragExit(AreaPath),
    /// Every sampled position of the exploring finger, in screen space.
    DragMove(Point),
    /// Exploring finger lifted.
    DragEnd(Point),
    Tap { fingers: u8, count: u8, position: Point },
    HoldStart(Button),
    HoldEnd(Button),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GestureEvent {
    pub time_ms: u64,
    pub kind: GestureKind,
}

impl GestureEvent {
    pub fn new(time_ms: u64, kind: GestureKind) -> Self {
        Self { time_ms, kind }
    }
}

/// What lies under a screen point.
#[derive(Debug, Clone, PartialEq)]
pub enum Location {
    Button(Button),
    /// Areas under the point, outermost first (empty when off every area).
    Image(Vec<AreaPath>),
}

/// Resolves screen points against the engine's current view.
pub trait Surface {
    fn locate(&self, screen: Point) -> Location;
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TraceError {
    #[error("non-monotonic trace: event at {at} ms follows {previous} ms")]
    NonMonotonic { at: u64, previous: u64 },
    #[error("pointer {0} moved or lifted without a prior down")]
    UnknownPointer(u32),
    #[error("pointer {0} pressed twice without lifting")]
    DuplicateDown(u32),
    #[error("position {0} outside the unit square")]
    OutOfBounds(Point),
}

#[derive(Debug, Clone)]
enum Role {
    TapCandidate,
    Drag { stack: Vec<AreaPath> },
    Button { button: Button, held: bool },
    Ignored,
}

#[derive(Debug, Clone)]
struct Track {
    down_time: u64,
    down_pos: Point,
    last_pos: Point,
    role: Role,
}

#[derive(Debug, Clone)]
struct TapInProgress {
    fingers: u8,
    active: BTreeSet<u32>,
    down_positions: Vec<Point>,
}

#[derive(Debug, Clone)]
struct TapGroup {
    count: u8,
    fingers: u8,
    position: Point,
    last_up: u64,
    /// A new tap started within the gap and may extend this group.
    continuing: bool,
}

#[derive(Debug, Clone)]
pub struct GestureClassifier {
    config: TimingConfig,
    last_time: Option<u64>,
    pointers: BTreeMap<u32, Track>,
    tap: Option<TapInProgress>,
    group: Option<TapGroup>,
}

fn stack_transition(time: u64, old: &[AreaPath], new: &[AreaPath], out: &mut Vec<GestureEvent>) {
    let common = old.iter().zip(new).take_while(|(a, b)| a == b).count();
    for p in old[common..].iter().rev() {
        out.push(GestureEvent::new(time, GestureKind::DragExit(*p)));
    }
    for p in &new[common..] {
        out.push(GestureEvent::new(time, GestureKind::DragEnter(*p)));
    }
}

impl GestureClassifier {
    pub fn new(config: TimingConfig) -> Self {
        Self { config, last_time: None, pointers: BTreeMap::new(), tap: None, group: None }
    }

    pub fn config(&self) -> &TimingConfig {
        &self.config
    }

    pub fn last_time(&self) -> Option<u64> {
        self.last_time
    }

    fn group_event(g: &TapGroup, time: u64) -> GestureEvent {
        GestureEvent::new(
            time,
            GestureKind::Tap { fingers: g.fingers, count: g.count, position: g.position },
        )
    }

    fn flush_group(&mut self, time: u64, out: &mut Vec<GestureEvent>) {
        if let Some(g) = self.group.take() {
            out.push(Self::group_event(&g, time));
        }
    }

    /// Releases timer-driven gestures due strictly before `now` (holds: at
    /// or before `now`).
    pub fn advance(&mut self, now: u64) -> Vec<GestureEvent> {
        let mut fired: Vec<GestureEvent> = Vec::new();
        for track in self.pointers.values_mut() {
            if let Role::Button { button, held } = &mut track.role {
                let due = track.down_time + self.config.hold_ms;
                if !*held && due <= now {
                    *held = true;
                    fired.push(GestureEvent::new(due, GestureKind::HoldStart(*button)));
                }
            }
        }
        if let Some(g) = &self.group {
            let due = g.last_up + self.config.multi_tap_gap_ms;
            if !g.continuing && due < now {
                fired.push(Self::group_event(g, due));
                self.group = None;
            }
        }
        fired.sort_by_key(|g| g.time_ms);
        fired
    }

    /// Fires every outstanding timer and closes open drags; call once at
    /// the end of a session. Holds still pressed fire at their deadline,
    /// which may lie past the last event.
    pub fn finish(&mut self) -> Vec<GestureEvent> {
        let end = self.last_time.unwrap_or(0);
        let mut out = self.advance(u64::MAX);
        let mut tail = Vec::new();
        if self.tap.is_some() {
            self.abandon_tap(end, &mut tail);
        }
        if let Some(g) = self.group.take() {
            let due = (g.last_up + self.config.multi_tap_gap_ms).max(end);
            tail.push(Self::group_event(&g, due));
        }
        for track in self.pointers.values() {
            if let Role::Drag { .. } = track.role {
                tail.push(GestureEvent::new(end, GestureKind::DragEnd(track.last_pos)));
            }
        }
        self.pointers.clear();
        out.extend(tail);
        out.sort_by_key(|g| g.time_ms);
        out
    }

    fn abandon_tap(&mut self, now: u64, out: &mut Vec<GestureEvent>) {
        if let Some(tap) = self.tap.take() {
            for id in tap.active {
                if let Some(t) = self.pointers.get_mut(&id) {
                    t.role = Role::Ignored;
                }
            }
            if self.group.as_ref().is_some_and(|g| g.continuing) {
                self.flush_group(now, out);
            }
        }
    }

    fn image_pointer_down(&self) -> bool {
        self.pointers
            .values()
            .any(|t| !matches!(t.role, Role::Button { .. }))
    }

    /// Classifies one event. `surface` must reflect the engine state after
    /// every gesture returned so far has been applied.
    pub fn handle(
        &mut self,
        ev: &TouchEvent,
        surface: &dyn Surface,
    ) -> Result<Vec<GestureEvent>, TraceError> {
        if let Some(prev) = self.last_time {
            if ev.time_ms < prev {
                return Err(TraceError::NonMonotonic { at: ev.time_ms, previous: prev });
            }
        }
        let p = ev.position;
        if !(p.x.is_finite() && p.y.is_finite() && p.in_unit_square()) {
            return Err(TraceError::OutOfBounds(p));
        }
        match ev.phase {
            Phase::Down if self.pointers.contains_key(&ev.pointer_id) => {
                return Err(TraceError::DuplicateDown(ev.pointer_id))
            }
            Phase::Move | Phase::Up if !self.pointers.contains_key(&ev.pointer_id) => {
                return Err(TraceError::UnknownPointer(ev.pointer_id))
            }
            _ => {}
        }
        self.last_time = Some(ev.time_ms);
        let now = ev.time_ms;
        let mut out = Vec::new();
        match ev.phase {
            Phase::Down => self.on_down(ev.pointer_id, now, p, surface, &mut out),
            Phase::Move => self.on_move(ev.pointer_id, now, p, surface, &mut out),
            Phase::Up => self.on_up(ev.pointer_id, now, p, &mut out),
        }
        Ok(out)
    }

    fn on_down(&mut self, id: u32, now: u64, p: Point, surface: &dyn Surface, out: &mut Vec<GestureEvent>) {
        let mut track = Track { down_time: now, down_pos: p, last_pos: p, role: Role::Ignored };
        if let Location::Button(button) = surface.locate(p) {
            self.abandon_tap(now, out);
            self.flush_group(now, out);
            track.role = Role::Button { button, held: false };
        } else if let Some(tap) = &mut self.tap {
            tap.active.insert(id);
            tap.fingers = tap.fingers.max(tap.active.len().min(u8::MAX as usize) as u8);
            tap.down_positions.push(p);
            track.role = Role::TapCandidate;
        } else if !self.image_pointer_down() {
            if let Some(g) = &mut self.group {
                g.continuing = now - g.last_up <= self.config.multi_tap_gap_ms && g.count < 3;
                if !g.continuing {
                    self.flush_group(now, out);
                }
            }
            self.tap = Some(TapInProgress {
                fingers: 1,
                active: BTreeSet::from([id]),
                down_positions: vec![p],
            });
            track.role = Role::TapCandidate;
        }
        self.pointers.insert(id, track);
    }

    fn on_move(&mut self, id: u32, now: u64, p: Point, surface: &dyn Surface, out: &mut Vec<GestureEvent>) {
        let slop = self.config.slop;
        let tap_max = self.config.tap_max_ms;
        let Some(track) = self.pointers.get_mut(&id) else { return };
        track.last_pos = p;
        let became_drag = match &track.role {
            Role::TapCandidate => {
                p.distance(track.down_pos) >= slop || now - track.down_time > tap_max
            }
            _ => false,
        };
        if became_drag {
            let single = self.tap.as_ref().is_some_and(|t| t.fingers == 1);
            self.abandon_tap(now, out);
            if !single {
                return;
            }
            if let Some(t) = self.pointers.get_mut(&id) {
                t.role = Role::Drag { stack: Vec::new() };
            }
        }
        let Some(track) = self.pointers.get_mut(&id) else { return };
        if let Role::Drag { stack } = &mut track.role {
            let new_stack = match surface.locate(p) {
                Location::Image(s) => s,
                Location::Button(_) => Vec::new(),
            };
            stack_transition(now, stack, &new_stack, out);
            *stack = new_stack;
            out.push(GestureEvent::new(now, GestureKind::DragMove(p)));
        }
    }

    fn on_up(&mut self, id: u32, now: u64, p: Point, out: &mut Vec<GestureEvent>) {
        let Some(track) = self.pointers.remove(&id) else { return };
        match track.role {
            Role::Drag { .. } => out.push(GestureEvent::new(now, GestureKind::DragEnd(p))),
            Role::Button { button, held: true } => {
                out.push(GestureEvent::new(now, GestureKind::HoldEnd(button)))
            }
            Role::Button { held: false, .. } => out.push(GestureEvent::new(
                now,
                GestureKind::Tap { fingers: 1, count: 1, position: p },
            )),
            Role::Ignored => {}
            Role::TapCandidate => {
                let too_long = now - track.down_time > self.config.tap_max_ms;
                let moved = p.distance(track.down_pos) >= self.config.slop;
                if too_long || moved {
                    self.abandon_tap(now, out);
                    return;
                }
                let done = match &mut self.tap {
                    Some(tap) => {
                        tap.active.remove(&id);
                        tap.active.is_empty()
                    }
                    None => false,
                };
                if done {
                    let tap = self.tap.take().expect("tap in progress");
                    self.complete_tap(tap, now, out);
                }
            }
        }
    }

    fn complete_tap(&mut self, tap: TapInProgress, now: u64, out: &mut Vec<GestureEvent>) {
        let n = tap.down_positions.len() as f64;
        let (sx, sy) = tap
            .down_positions
            .iter()
            .fold((0.0, 0.0), |(sx, sy), q| (sx + q.x, sy + q.y));
        let position = Point::new(sx / n, sy / n);
        match &mut self.group {
            Some(g) if g.continuing && g.fingers == tap.fingers => {
                g.count += 1;
                g.last_up = now;
                g.continuing = false;
                if g.count >= 3 {
                    self.flush_group(now, out);
                }
            }
            _ => {
                self.flush_group(now, out);
                self.group = Some(TapGroup {
                    count: 1,
                    fingers: tap.fingers,
                    position,
                    last_up: now,
                    continuing: false,
                });
            }
        }
    }
}

/// Resolves points at the top level of an image with no menu buttons.
pub struct TopLevelSurface<'a>(pub &'a AnnotatedImage);

impl Surface for TopLevelSurface<'_> {
    fn locate(&self, screen: Point) -> Location {
        Location::Image(
            hit_test(self.0, screen, Level::Top)
                .ok()
                .flatten()
                .into_iter()
                .collect(),
        )
    }
}

/// Classifies a complete trace against the top level of `image`.
pub fn classify(
    raw: &[TouchEvent],
    config: &TimingConfig,
    image: &AnnotatedImage,
) -> Result<Vec<GestureEvent>, TraceError> {
    let surface = TopLevelSurface(image);
    let mut classifier = GestureClassifier::new(config.clone());
    let mut out = Vec::new();
    for ev in raw {
        if let Some(prev) = classifier.last_time() {
            if ev.time_ms < prev {
                return Err(TraceError::NonMonotonic { at: ev.time_ms, previous: prev });
            }
        }
        out.extend(classifier.advance(ev.time_ms));
        out.extend(classifier.handle(ev, &surface)?);
    }
    out.extend(classifier.finish());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::Area;
    use Phase::*;

    fn image() -> AnnotatedImage {
        let left = vec![
            Point::new(0.0, 0.0),
            Point::new(0.5, 0.0),
            Point::new(0.5, 1.0),
            Point::new(0.0, 1.0),
        ];
        AnnotatedImage::new("t", vec![Area::new("left", left)])
    }

    fn run(events: &[TouchEvent]) -> Vec<GestureEvent> {
        classify(events, &TimingConfig::default(), &image()).unwrap()
    }

    fn taps(g: &[GestureEvent]) -> Vec<(u8, u8)> {
        g.iter()
            .filter_map(|e| match e.kind {
                GestureKind::Tap { fingers, count, .. } => Some((fingers, count)),
                _ => None,
            })
            .collect()
    }

    #[test]
    fn single_finger_double_tap() {
        let g = run(&[
            TouchEvent::new(0, 1, Down, 0.3, 0.3),
            TouchEvent::new(100, 1, Up, 0.3, 0.3),
            TouchEvent::new(250, 1, Down, 0.3, 0.3),
            TouchEvent::new(330, 1, Up, 0.3, 0.3),
        ]);
        assert_eq!(taps(&g), vec![(1, 2)]);
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].time_ms, 630);
    }

    #[test]
    fn two_finger_double_tap() {
        let g = run(&[
            TouchEvent::new(0, 1, Down, 0.2, 0.7),
            TouchEvent::new(10, 2, Down, 0.3, 0.9),
            TouchEvent::new(110, 1, Up, 0.2, 0.7),
            TouchEvent::new(120, 2, Up, 0.3, 0.9),
            TouchEvent::new(300, 3, Down, 0.2, 0.7),
            TouchEvent::new(310, 4, Down, 0.3, 0.9),
            TouchEvent::new(400, 3, Up, 0.2, 0.7),
            TouchEvent::new(410, 4, Up, 0.3, 0.9),
        ]);
        assert_eq!(taps(&g), vec![(2, 2)]);
        match g[0].kind {
            GestureKind::Tap { position, .. } => {
                assert!((position.x - 0.25).abs() < 1e-12 && (position.y - 0.8).abs() < 1e-12)
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn triple_tap_fires_on_third_lift() {
        let g = run(&[
            TouchEvent::new(0, 1, Down, 0.3, 0.3),
            TouchEvent::new(50, 1, Up, 0.3, 0.3),
            TouchEvent::new(150, 1, Down, 0.3, 0.3),
            TouchEvent::new(200, 1, Up, 0.3, 0.3),
            TouchEvent::new(300, 1, Down, 0.3, 0.3),
            TouchEvent::new(350, 1, Up, 0.3, 0.3),
            TouchEvent::new(400, 1, Down, 0.3, 0.3),
            TouchEvent::new(450, 1, Up, 0.3, 0.3),
        ]);
        assert_eq!(taps(&g), vec![(1, 3), (1, 1)]);
        assert_eq!(g[0].time_ms, 350);
        assert_eq!(g[1].time_ms, 750);
    }

    #[test]
    fn slow_taps_do_not_group() {
        let g = run(&[
            TouchEvent::new(0, 1, Down, 0.3, 0.3),
            TouchEvent::new(100, 1, Up, 0.3, 0.3),
            TouchEvent::new(500, 1, Down, 0.3, 0.3),
            TouchEvent::new(600, 1, Up, 0.3, 0.3),
        ]);
        assert_eq!(taps(&g), vec![(1, 1), (1, 1)]);
        assert_eq!(g[0].time_ms, 400);
    }

    #[test]
    fn drag_across_screen() {
        let g = run(&[
            TouchEvent::new(0, 1, Down, 0.3, 0.5),
            TouchEvent::new(50, 1, Move, 0.45, 0.5),
            TouchEvent::new(100, 1, Move, 0.6, 0.5),
            TouchEvent::new(150, 1, Up, 0.6, 0.5),
        ]);
        assert!(taps(&g).is_empty());
        let kinds: Vec<_> = g.iter().map(|e| e.kind.clone()).collect();
        assert_eq!(
            kinds,
            vec![
                GestureKind::DragEnter(AreaPath::top(0)),
                GestureKind::DragMove(Point::new(0.45, 0.5)),
                GestureKind::DragExit(AreaPath::top(0)),
                GestureKind::DragMove(Point::new(0.6, 0.5)),
                GestureKind::DragEnd(Point::new(0.6, 0.5)),
            ]
        );
    }

    #[test]
    fn still_finger_becomes_drag_after_tap_window() {
        let g = run(&[
            TouchEvent::new(0, 1, Down, 0.3, 0.5),
            TouchEvent::new(300, 1, Move, 0.3, 0.5),
            TouchEvent::new(400, 1, Up, 0.3, 0.5),
        ]);
        assert!(matches!(g[0].kind, GestureKind::DragEnter(_)));
        assert!(taps(&g).is_empty());
    }

    #[test]
    fn pending_double_tap_flushes_before_drag() {
        let g = run(&[
            TouchEvent::new(0, 1, Down, 0.3, 0.3),
            TouchEvent::new(50, 1, Up, 0.3, 0.3),
            TouchEvent::new(150, 1, Down, 0.3, 0.3),
            TouchEvent::new(200, 1, Up, 0.3, 0.3),
            TouchEvent::new(300, 1, Down, 0.3, 0.3),
            TouchEvent::new(340, 1, Move, 0.4, 0.3),
        ]);
        assert!(matches!(g[0].kind, GestureKind::Tap { count: 2, .. }));
        assert_eq!(g[0].time_ms, 340);
        assert!(matches!(g[1].kind, GestureKind::DragEnter(_)));
    }

    #[test]
    fn rejects_bad_traces() {
        let cfg = TimingConfig::default();
        let img = image();
        let back = [TouchEvent::new(10, 1, Down, 0.1, 0.1), TouchEvent::new(5, 1, Up, 0.1, 0.1)];
        assert_eq!(
            classify(&back, &cfg, &img).unwrap_err().to_string(),
            "non-monotonic trace: event at 5 ms follows 10 ms"
        );
        let orphan = [TouchEvent::new(0, 7, Move, 0.1, 0.1)];
        assert_eq!(classify(&orphan, &cfg, &img).unwrap_err(), TraceError::UnknownPointer(7));
        let twice = [TouchEvent::new(0, 1, Down, 0.1, 0.1), TouchEvent::new(1, 1, Down, 0.1, 0.1)];
        assert_eq!(classify(&twice, &cfg, &img).unwrap_err(), TraceError::DuplicateDown(1));
    }

    struct ButtonSurface;
    impl Surface for ButtonSurface {
        fn locate(&self, p: Point) -> Location {
            if p.x < 0.2 && p.y > 0.8 {
                Location::Button(Button::Scroll)
            } else {
                Location::Image(vec![])
            }
        }
    }

    fn run_buttons(events: &[TouchEvent]) -> Vec<GestureKind> {
        let mut c = GestureClassifier::new(TimingConfig::default());
        let mut out = Vec::new();
        for e in events {
            out.extend(c.advance(e.time_ms));
            out.extend(c.handle(e, &ButtonSurface).unwrap());
        }
        out.extend(c.finish());
        out.into_iter().map(|g| g.kind).collect()
    }

    #[test]
    fn button_hold_and_tap() {
        let kinds = run_buttons(&[
            TouchEvent::new(0, 1, Down, 0.1, 0.9),
            TouchEvent::new(600, 1, Up, 0.1, 0.9),
            TouchEvent::new(700, 1, Down, 0.1, 0.9),
            TouchEvent::new(760, 1, Up, 0.1, 0.9),
        ]);
        assert_eq!(
            kinds,
            vec![
                GestureKind::HoldStart(Button::Scroll),
                GestureKind::HoldEnd(Button::Scroll),
                GestureKind::Tap { fingers: 1, count: 1, position: Point::new(0.1, 0.9) },
            ]
        );
    }

    #[test]
    fn button_taps_never_aggregate() {
        let kinds = run_buttons(&[
            TouchEvent::new(0, 1, Down, 0.1, 0.9),
            TouchEvent::new(50, 1, Up, 0.1, 0.9),
            TouchEvent::new(100, 1, Down, 0.1, 0.9),
            TouchEvent::new(150, 1, Up, 0.1, 0.9),
        ]);
        assert_eq!(kinds.len(), 2);
        assert!(kinds.iter().all(|k| matches!(k, GestureKind::Tap { count: 1, .. })));
    }
}
