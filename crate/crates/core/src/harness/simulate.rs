//! Synthetic exploration strategies that stand in for a participant.
//!
//! A strategy drives a live [`Engine`], reacting only to the audio it
//! hears, and records the touches it made. Replaying the recorded trace
//! reproduces the session exactly.

use std::collections::BTreeSet;
use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::audio::{AudioEvent, AudioPayload, Cue, EarconKind, Voice};
use crate::beacon::Direction;
use crate::config::EngineConfig;
use crate::engine::Engine;
use crate::explore::Tools;
use crate::geometry::{bounding_box, round9, Point, Rect};
use crate::gesture::{Phase, TouchEvent, TraceError};
use crate::harness::SessionMetrics;
use crate::region::{AnnotatedImage, AreaPath, Level};
use crate::validate::{has_errors, validate, ValidationIssue};

/// Drag samples are this far apart in time.
const MOVE_MS: u64 = 20;
/// Press length of a synthetic tap.
const PRESS_MS: u64 = 50;
/// Smallest and largest beacon-guided step.
const MIN_STEP: f64 = 0.004;
const MAX_STEP: f64 = 0.02;
/// Beacon attempts giving up after this many steps.
const MAX_BEACON_STEPS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strategy {
    /// Boustrophedon scan with the given row pitch.
    Grid { pitch: f64 },
    /// Menu and beacon to every unexplored area in turn.
    BeaconGuided,
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "beacon" || s == "beacon_guided" {
            return Ok(Strategy::BeaconGuided);
        }
        let pitch = s
            .strip_prefix("grid:")
            .ok_or_else(|| format!("unknown strategy \"{s}\" (expected grid:<pitch> or beacon)"))?;
        let pitch: f64 = pitch.parse().map_err(|_| format!("bad grid pitch \"{pitch}\""))?;
        if !(pitch > 0.0 && pitch < 1.0) {
            return Err(format!("grid pitch must lie in (0, 1), got {pitch}"));
        }
        Ok(Strategy::Grid { pitch })
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Grid { pitch } => write!(f, "grid:{pitch}"),
            Strategy::BeaconGuided => f.write_str("beacon"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("the beacon strategy needs the menu_beacon tool")]
    BeaconNeedsMenu,
    #[error("annotation has validation errors")]
    Invalid(Vec<ValidationIssue>),
    #[error(transparent)]
    Trace(#[from] TraceError),
}

#[derive(Debug, Clone)]
pub struct SimOutput {
    pub trace: Vec<TouchEvent>,
    pub events: Vec<AudioEvent>,
    pub metrics: SessionMetrics,
}

/// Runs `strategy` on `image`. `seed` randomizes the beacon strategy's
/// first finger position; without it the finger starts at the center.
pub fn simulate(
    image: &AnnotatedImage,
    strategy: Strategy,
    tools: Tools,
    config: &EngineConfig,
    seed: Option<u64>,
) -> Result<SimOutput, SimError> {
    let issues = validate(image);
    if has_errors(&issues) {
        return Err(SimError::Invalid(issues));
    }
    let mut d = Driver::new(Engine::new(image.clone(), config.clone(), tools));
    match strategy {
        Strategy::Grid { pitch } => grid(&mut d, pitch)?,
        Strategy::BeaconGuided => {
            if !tools.menu_beacon {
                return Err(SimError::BeaconNeedsMenu);
            }
            let start = match seed {
                Some(s) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(s);
                    Point::new(rng.gen_range(0.2..0.8), rng.gen_range(0.2..0.8))
                }
                None => Point::new(0.5, 0.5),
            };
            beacon_guided(&mut d, start)?;
        }
    }
    d.engine.finish();
    let metrics = SessionMetrics::online(&d.engine);
    Ok(SimOutput { trace: d.trace, events: d.engine.into_events(), metrics })
}

/// A single synthetic finger plus the clock.
struct Driver {
    engine: Engine,
    trace: Vec<TouchEvent>,
    t: u64,
}

impl Driver {
    fn new(engine: Engine) -> Self {
        Self { engine, trace: Vec::new(), t: 0 }
    }

    fn touch(&mut self, phase: Phase, p: Point) -> Result<Vec<AudioEvent>, TraceError> {
        let ev = TouchEvent::new(self.t, 0, phase, round9(p.x), round9(p.y));
        let out = self.engine.push(&ev)?;
        self.trace.push(ev);
        Ok(out)
    }

    fn gap(&self) -> u64 {
        self.engine.config().timing.multi_tap_gap_ms
    }

    /// `n` quick taps at `p`; returns once the group has been classified.
    fn taps(&mut self, n: u8, p: Point) -> Result<Vec<AudioEvent>, TraceError> {
        let mut out = Vec::new();
        for i in 0..n {
            if i > 0 {
                self.t += 100;
            }
            out.extend(self.touch(Phase::Down, p)?);
            self.t += PRESS_MS;
            out.extend(self.touch(Phase::Up, p)?);
        }
        self.t += self.gap() + 50;
        out.extend(self.engine.advance(self.t));
        Ok(out)
    }

    fn button_tap(&mut self, r: Rect) -> Result<Vec<AudioEvent>, TraceError> {
        let p = r.center();
        let mut out = self.touch(Phase::Down, p)?;
        self.t += PRESS_MS;
        out.extend(self.touch(Phase::Up, p)?);
        self.t += 100;
        Ok(out)
    }

    fn button_hold(&mut self, r: Rect) -> Result<Vec<AudioEvent>, TraceError> {
        let p = r.center();
        let mut out = self.touch(Phase::Down, p)?;
        self.t += self.engine.config().timing.hold_ms + 100;
        out.extend(self.touch(Phase::Up, p)?);
        self.t += 100;
        Ok(out)
    }

    fn in_button(&self, p: Point) -> bool {
        self.engine.view().button_at(p).is_some()
    }
}

fn speeches(events: &[AudioEvent]) -> impl Iterator<Item = &crate::audio::Speech> {
    events.iter().filter_map(|e| e.as_speech())
}

/// A top-level parent announced in `events` that has not been entered yet.
fn enterable(d: &Driver, events: &[AudioEvent], entered: &BTreeSet<usize>) -> Option<usize> {
    speeches(events)
        .filter(|s| s.cue == Cue::Area)
        .filter_map(|s| s.area)
        .find(|p| {
            p.is_top()
                && !entered.contains(&p.top)
                && d.engine.image().area(*p).is_some_and(|a| a.has_sub_areas())
        })
        .map(|p| p.top)
}

/// Leftmost usable x on row `y`, keeping the finger-down off the buttons.
fn row_start(d: &Driver, region: Rect, y: f64) -> f64 {
    let mut x0 = region.x0;
    let tools = d.engine.state().enabled_tools;
    if tools.menu_beacon {
        let mb = &d.engine.config().menu_beacon;
        for b in [mb.open_button, mb.scroll_button] {
            if y >= b.y0 && y <= b.y1 && x0 <= b.x1 {
                x0 = x0.max(b.x1 + 0.005);
            }
        }
    }
    x0
}

fn grid(d: &mut Driver, pitch: f64) -> Result<(), SimError> {
    let mut entered = BTreeSet::new();
    scan(d, Rect::new(0.0, 0.0, 1.0, 1.0), pitch, Some(&mut entered))
}

/// Scans `region` row by row. At the top level (`entered` given) each newly
/// announced parent is entered, scanned and left before the row resumes.
fn scan(
    d: &mut Driver,
    region: Rect,
    pitch: f64,
    mut entered: Option<&mut BTreeSet<usize>>,
) -> Result<(), SimError> {
    let step = pitch.min(0.01);
    let mut k = 0usize;
    loop {
        let y = region.y0 + pitch * (k as f64 + 0.5);
        if y >= region.y1 {
            break;
        }
        let lo = row_start(d, region, y);
        let hi = region.x1;
        if lo < hi {
            let (from, to) = if k.is_multiple_of(2) { (lo, hi) } else { (hi, lo) };
            let len = (to - from).abs();
            let dir = (to - from).signum();
            let moves = (len / step).ceil() as usize;
            let mut x = from;
            d.touch(Phase::Down, Point::new(x, y))?;
            for i in 1..=moves {
                x = from + dir * (i as f64 * step).min(len);
                d.t += MOVE_MS;
                let out = d.touch(Phase::Move, Point::new(x, y))?;
                let Some(entered) = entered.as_deref_mut() else { continue };
                let Some(parent) = enterable(d, &out, entered) else { continue };
                entered.insert(parent);
                d.t += MOVE_MS;
                d.touch(Phase::Up, Point::new(x, y))?;
                d.t += d.gap() + 50;
                d.taps(2, Point::new(0.5, 0.5))?;
                if d.engine.state().level == Level::Inside(parent) {
                    let bb = bounding_box(&d.engine.image().areas[parent].polygon);
                    scan(d, bb, pitch, None)?;
                    d.taps(3, Point::new(0.5, 0.5))?;
                }
                d.touch(Phase::Down, Point::new(x, y))?;
            }
            d.t += MOVE_MS;
            d.touch(Phase::Up, Point::new(x, y))?;
            d.t += 200;
        }
        k += 1;
    }
    Ok(())
}

fn count_from(events: &[AudioEvent]) -> Option<usize> {
    speeches(events)
        .filter(|s| s.cue == Cue::Count)
        .last()
        .and_then(|s| s.text.split_whitespace().next()?.parse().ok())
}

/// Distance implied by a beep interval under `config`.
fn distance_estimate(interval: u32, config: &EngineConfig) -> f64 {
    let mb = &config.menu_beacon;
    let span = (mb.max_interval_ms - mb.min_interval_ms).max(1) as f64;
    (interval as f64 - mb.min_interval_ms as f64).max(0.0) / span * SQRT_2
}

fn direction_from(text: &str) -> Option<Direction> {
    Direction::ALL.into_iter().find(|d| d.phrase() == text)
}

/// Outcome of following the beacon once.
enum Guided {
    Arrived(Vec<AudioEvent>),
    GaveUp,
}

fn follow_beacon(d: &mut Driver, pos: &mut Point) -> Result<Guided, SimError> {
    if d.in_button(*pos) {
        *pos = Point::new(0.5, 0.5);
    }
    let period = d.engine.config().menu_beacon.announce_period_ms;
    d.touch(Phase::Down, *pos)?;
    d.t += d.engine.config().timing.tap_max_ms + 50;
    let mut out = d.touch(Phase::Move, *pos)?;
    let mut heading = None;
    let mut interval = None;
    for _ in 0..MAX_BEACON_STEPS {
        if speeches(&out).any(|s| s.cue == Cue::BeaconArrived) {
            d.t += MOVE_MS;
            d.touch(Phase::Up, *pos)?;
            d.t += 100;
            return Ok(Guided::Arrived(out));
        }
        for e in &out {
            match &e.payload {
                AudioPayload::BeepRate(Some(i)) => interval = Some(*i),
                AudioPayload::Speech(s) if s.cue == Cue::BeaconDirection => {
                    heading = direction_from(&s.text).or(heading)
                }
                _ => {}
            }
        }
        let (Some(dir), Some(iv)) = (heading, interval) else { break };
        let step = distance_estimate(iv, d.engine.config()).clamp(MIN_STEP, MAX_STEP);
        let (ux, uy) = dir.unit();
        *pos = Point::new(
            round9((pos.x + step * ux).clamp(0.0, 1.0)),
            round9((pos.y + step * uy).clamp(0.0, 1.0)),
        );
        d.t += period;
        out = d.touch(Phase::Move, *pos)?;
    }
    d.t += MOVE_MS;
    d.touch(Phase::Up, *pos)?;
    d.t += 100;
    Ok(Guided::GaveUp)
}

fn beacon_guided(d: &mut Driver, start: Point) -> Result<(), SimError> {
    let (open, scroll) = {
        let mb = &d.engine.config().menu_beacon;
        (mb.open_button, mb.scroll_button)
    };
    let mut pos = start;
    let mut failed: BTreeSet<AreaPath> = BTreeSet::new();
    let budget = 4 * d.engine.image().total_areas() + 8;
    for _ in 0..budget {
        let level = d.engine.state().level;
        let n = count_from(&d.button_tap(open)?).unwrap_or(0);
        let exit_or_stop = |d: &mut Driver, failed: &mut BTreeSet<AreaPath>| -> Result<bool, SimError> {
            match level {
                Level::Top => Ok(false),
                Level::Inside(parent) => {
                    if n > 0 {
                        failed.insert(AreaPath::top(parent));
                    }
                    d.taps(3, Point::new(0.5, 0.5))?;
                    Ok(true)
                }
            }
        };
        if n == 0 {
            if exit_or_stop(d, &mut failed)? {
                continue;
            }
            break;
        }
        // Scroll to the first unexplored entry not given up on.
        let mut target = None;
        for i in 0..=n + failed.len() {
            let out = d.button_tap(scroll)?;
            let wrapped = out.iter().any(|e| e.payload == AudioPayload::Earcon(EarconKind::MenuWrap));
            if wrapped && i > 0 {
                break;
            }
            let Some(s) = speeches(&out).find(|s| s.cue == Cue::MenuEntry) else { break };
            if s.voice == Voice::Secondary {
                break;
            }
            if let Some(p) = s.area.filter(|p| !failed.contains(p)) {
                target = Some(p);
                break;
            }
        }
        let Some(target) = target else {
            if exit_or_stop(d, &mut failed)? {
                continue;
            }
            break;
        };
        let held = d.button_hold(scroll)?;
        if !speeches(&held).any(|s| s.cue == Cue::BeaconStart) {
            failed.insert(target);
            continue;
        }
        match follow_beacon(d, &mut pos)? {
            Guided::GaveUp => {
                d.button_hold(scroll)?;
                failed.insert(target);
            }
            Guided::Arrived(out) => {
                let invites = speeches(&out).any(|s| {
                    s.cue == Cue::Area && s.area == Some(target) && target.is_top()
                }) && d.engine.image().area(target).is_some_and(|a| a.has_sub_areas());
                if invites {
                    d.t += d.gap();
                    d.taps(2, Point::new(0.5, 0.5))?;
                }
            }
        }
    }
    Ok(())
}
