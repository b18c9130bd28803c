//! Prominence-scaled announcement volume and the first-touch earcon.

use std::collections::BTreeMap;

use crate::audio::{AudioEvent, EarconKind, Speech};
use crate::config::HintsConfig;
use crate::explore::ExplorationState;
use crate::geometry::round9;
use crate::region::{area_prominence, AnnotatedImage, AreaPath};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HintsError {
    #[error("no CAM grid")]
    NoCam,
    #[error("no prominence for area {0}")]
    UnknownPath(AreaPath),
}

/// Per-area prominence with the image-wide extremes.
#[derive(Debug, Clone, PartialEq)]
pub struct ProminenceTable {
    values: BTreeMap<AreaPath, f64>,
    min: f64,
    max: f64,
}

impl ProminenceTable {
    pub fn from_values(values: BTreeMap<AreaPath, f64>) -> Self {
        let min = values.values().copied().fold(f64::INFINITY, f64::min);
        let max = values.values().copied().fold(f64::NEG_INFINITY, f64::max);
        Self { values, min, max }
    }

    pub fn get(&self, path: AreaPath) -> Option<f64> {
        self.values.get(&path).copied()
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (AreaPath, f64)> + '_ {
        self.values.iter().map(|(p, v)| (*p, *v))
    }
}

/// Computes the CAM prominence of every area and sub-area.
pub fn bake_prominence(image: &AnnotatedImage) -> Result<ProminenceTable, HintsError> {
    let cam = image.cam.as_ref().ok_or(HintsError::NoCam)?;
    let values = image
        .all_paths()
        .into_iter()
        .map(|p| (p, area_prominence(image.area(p).expect("path from all_paths"), cam)))
        .collect();
    Ok(ProminenceTable::from_values(values))
}

/// Prominence table for the engine: baked from the CAM when present,
/// otherwise taken from authored per-area values if every area has one.
pub fn prominence_for(image: &AnnotatedImage) -> Option<ProminenceTable> {
    if image.cam.is_some() {
        return bake_prominence(image).ok();
    }
    let authored: Option<BTreeMap<_, _>> = image
        .all_paths()
        .into_iter()
        .map(|p| image.area(p).and_then(|a| a.prominence).map(|v| (p, v)))
        .collect();
    authored.filter(|m| !m.is_empty()).map(ProminenceTable::from_values)
}

/// Min-max maps prominence onto `[volume_min, volume_max]`, rounded to 9
/// decimals; a flat table gives full volume everywhere.
pub fn speech_volume(
    table: &ProminenceTable,
    path: AreaPath,
    config: &HintsConfig,
) -> Result<f64, HintsError> {
    let p = table.get(path).ok_or(HintsError::UnknownPath(path))?;
    if table.max == table.min {
        return Ok(1.0);
    }
    let t = (p - table.min) / (table.max - table.min);
    Ok(round9((config.volume_min + (config.volume_max - config.volume_min) * t).clamp(0.0, 1.0)))
}

/// Prefixes the first-touch earcon when `path` has never been touched.
pub fn first_touch_decorate(
    state: &ExplorationState,
    path: AreaPath,
    utterance: Speech,
    time_ms: u64,
) -> Vec<AudioEvent> {
    let mut out = Vec::with_capacity(2);
    if !state.touched_once.contains(&path) {
        out.push(AudioEvent::earcon(time_ms, EarconKind::FirstTouch));
    }
    out.push(AudioEvent::speech(time_ms, utterance));
    out
}
