//! Session metrics: coverage, duration, menu-scroll timing, beacon count.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::audio::{AudioEvent, Cue};
use crate::engine::Engine;
use crate::region::{AnnotatedImage, AreaPath};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionMetrics {
    /// Touched areas over all areas and sub-areas, in percent.
    pub coverage_pct: f64,
    pub touched_areas: usize,
    pub total_areas: usize,
    /// Time of the last audio event.
    pub duration_ms: u64,
    /// Top-level menu scrolls binned by elapsed fraction of the session.
    pub menu_scrolls_by_decile: [u32; 10],
    pub beacons_placed: u32,
}

fn decile(t: u64, duration: u64) -> usize {
    if duration == 0 {
        return 0;
    }
    ((t as u128 * 10 / duration as u128) as usize).min(9)
}

impl SessionMetrics {
    fn assemble(
        touched: &BTreeSet<AreaPath>,
        image: &AnnotatedImage,
        duration_ms: u64,
        scroll_times: &[u64],
        beacons_placed: u32,
    ) -> Self {
        let total = image.total_areas();
        let touched_areas = touched.iter().filter(|p| image.area(**p).is_some()).count();
        let coverage_pct = if total == 0 { 0.0 } else { touched_areas as f64 * 100.0 / total as f64 };
        let mut bins = [0u32; 10];
        for &t in scroll_times {
            bins[decile(t, duration_ms)] += 1;
        }
        Self {
            coverage_pct,
            touched_areas,
            total_areas: total,
            duration_ms,
            menu_scrolls_by_decile: bins,
            beacons_placed,
        }
    }

    /// Recomputes metrics from an event log alone; `image` supplies the
    /// coverage denominator.
    pub fn from_log(events: &[AudioEvent], image: &AnnotatedImage) -> Self {
        let mut touched = BTreeSet::new();
        let mut scrolls = Vec::new();
        let mut beacons = 0;
        for e in events {
            let Some(s) = e.as_speech() else { continue };
            match (s.cue, s.area) {
                (Cue::Area, Some(p)) => {
                    touched.insert(p);
                }
                (Cue::MenuEntry, Some(p)) if p.is_top() => scrolls.push(e.time_ms),
                (Cue::BeaconStart, _) => beacons += 1,
                _ => {}
            }
        }
        let duration = events.last().map_or(0, |e| e.time_ms);
        Self::assemble(&touched, image, duration, &scrolls, beacons)
    }

    /// Metrics from the engine's own counters.
    pub fn online(engine: &Engine) -> Self {
        let s = engine.state();
        Self::assemble(
            &s.touched_once,
            engine.image(),
            s.counters.last_event_ms.unwrap_or(0),
            &s.counters.top_scroll_times,
            s.counters.beacons_placed,
        )
    }

    pub fn total_scrolls(&self) -> u32 {
        self.menu_scrolls_by_decile.iter().sum()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("metrics serialize");
        s.push('\n');
        s
    }
}
