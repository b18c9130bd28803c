//! Ties the classifier and the state machine together.

use crate::audio::AudioEvent;
use crate::config::EngineConfig;
use crate::explore::{step, view_point, ExplorationState, StepContext, Tools};
use crate::geometry::Point;
use crate::gesture::{Button, GestureClassifier, GestureEvent, Location, Surface, TouchEvent, TraceError};
use crate::hints::{prominence_for, ProminenceTable};
use crate::region::{hit_test_in, visible_in, AnnotatedImage, AreaPath, Level};

/// The screen as the engine currently presents it: menu buttons when the
/// menu tool is on, and the image through the active zoom at the active
/// level.
pub struct View<'a> {
    pub image: &'a AnnotatedImage,
    pub config: &'a EngineConfig,
    pub state: &'a ExplorationState,
}

impl View<'_> {
    pub fn button_at(&self, screen: Point) -> Option<Button> {
        if !self.state.enabled_tools.menu_beacon {
            return None;
        }
        let mb = &self.config.menu_beacon;
        if mb.open_button.contains(screen) {
            Some(Button::Open)
        } else if mb.scroll_button.contains(screen) {
            Some(Button::Scroll)
        } else {
            None
        }
    }

    /// Areas under an image point, outermost first. While zoomed, areas
    /// with no interior in the quadrant are skipped.
    pub fn stack_at(&self, p: Point) -> Vec<AreaPath> {
        let q = self.state.zoom.map(|z| z.active_quadrant);
        let visible = |path| visible_in(self.image, path, q);
        let hit = hit_test_in(self.image, p, self.state.level, visible).ok().flatten();
        match self.state.level {
            Level::Top => hit.into_iter().collect(),
            Level::Inside(parent) => {
                let Some(area) = self.image.areas.get(parent) else { return Vec::new() };
                if !area.contains(p) || !visible(AreaPath::top(parent)) {
                    return Vec::new();
                }
                let mut stack = vec![AreaPath::top(parent)];
                stack.extend(hit);
                stack
            }
        }
    }
}

impl Surface for View<'_> {
    fn locate(&self, screen: Point) -> Location {
        match self.button_at(screen) {
            Some(b) => Location::Button(b),
            None => Location::Image(self.stack_at(view_point(self.state, screen))),
        }
    }
}

/// A live exploration session over one image.
#[derive(Debug, Clone)]
pub struct Engine {
    image: AnnotatedImage,
    config: EngineConfig,
    prominence: Option<ProminenceTable>,
    classifier: GestureClassifier,
    state: ExplorationState,
    gestures: Vec<GestureEvent>,
    events: Vec<AudioEvent>,
}

impl Engine {
    pub fn new(image: AnnotatedImage, config: EngineConfig, tools: Tools) -> Self {
        let prominence = prominence_for(&image);
        Self {
            classifier: GestureClassifier::new(config.timing.clone()),
            image,
            config,
            prominence,
            state: ExplorationState::new(tools),
            gestures: Vec::new(),
            events: Vec::new(),
        }
    }

    pub fn image(&self) -> &AnnotatedImage {
        &self.image
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn state(&self) -> &ExplorationState {
        &self.state
    }

    pub fn prominence(&self) -> Option<&ProminenceTable> {
        self.prominence.as_ref()
    }

    /// Every audio event emitted so far.
    pub fn events(&self) -> &[AudioEvent] {
        &self.events
    }

    /// Every gesture applied so far.
    pub fn gestures(&self) -> &[GestureEvent] {
        &self.gestures
    }

    pub fn into_events(self) -> Vec<AudioEvent> {
        self.events
    }

    pub fn view(&self) -> View<'_> {
        View { image: &self.image, config: &self.config, state: &self.state }
    }

    /// Applies one gesture directly, bypassing the classifier.
    pub fn apply(&mut self, g: GestureEvent) -> Vec<AudioEvent> {
        let ctx = StepContext {
            image: &self.image,
            config: &self.config,
            prominence: self.prominence.as_ref(),
        };
        let out = step(&mut self.state, &g, &ctx);
        self.gestures.push(g);
        self.events.extend(out.iter().cloned());
        out
    }

    /// Feeds one touch event and returns the audio it released.
    pub fn push(&mut self, ev: &TouchEvent) -> Result<Vec<AudioEvent>, TraceError> {
        if let Some(prev) = self.classifier.last_time() {
            if ev.time_ms < prev {
                return Err(TraceError::NonMonotonic { at: ev.time_ms, previous: prev });
            }
        }
        let mut out = Vec::new();
        for g in self.classifier.advance(ev.time_ms) {
            out.extend(self.apply(g));
        }
        let view = View { image: &self.image, config: &self.config, state: &self.state };
        let gestures = self.classifier.handle(ev, &view)?;
        for g in gestures {
            out.extend(self.apply(g));
        }
        Ok(out)
    }

    /// Releases pending gestures as if the clock ran to `now` with no input.
    pub fn advance(&mut self, now: u64) -> Vec<AudioEvent> {
        let mut out = Vec::new();
        for g in self.classifier.advance(now) {
            out.extend(self.apply(g));
        }
        out
    }

    /// Ends the session, flushing timers and open drags.
    pub fn finish(&mut self) -> Vec<AudioEvent> {
        let mut out = Vec::new();
        for g in self.classifier.finish() {
            out.extend(self.apply(g));
        }
        out
    }
}

/// Runs a whole trace and returns the session's audio.
pub fn run_trace(
    image: &AnnotatedImage,
    config: &EngineConfig,
    tools: Tools,
    trace: &[TouchEvent],
) -> Result<Vec<AudioEvent>, TraceError> {
    let mut engine = Engine::new(image.clone(), config.clone(), tools);
    for ev in trace {
        engine.push(ev)?;
    }
    engine.finish();
    Ok(engine.into_events())
}
