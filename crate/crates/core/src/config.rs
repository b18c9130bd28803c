//! Engine tuning constants, loadable from a TOML file.
//!
//! Every key is optional; missing keys take the defaults below.
//!
//! ```toml
//! [timing]
//! tap_max_ms = 250          # longest press that still counts as a tap
//! multi_tap_gap_ms = 300    # max lift-to-press gap joining taps into one group
//! hold_ms = 500             # button press length that becomes a hold
//! slop = 0.02               # movement (normalized) that turns a press into a drag
//!
//! [menu_beacon]
//! min_interval_ms = 120     # beep interval at the target
//! max_interval_ms = 900     # beep interval at the farthest distance
//! announce_period_ms = 1500 # direction announcement period
//! open_button = [0.0, 0.0, 0.18, 0.10]    # x0, y0, x1, y1 (screen, normalized)
//! scroll_button = [0.0, 0.90, 0.18, 1.0]
//!
//! [hints]
//! volume_min = 0.3
//! volume_max = 1.0
//!
//! [zoom]
//! guard_band = 0.03
//! quadrant_names = ["top left", "top right", "bottom left", "bottom right"]
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::geometry::Rect;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimingConfig {
    pub tap_max_ms: u64,
    pub multi_tap_gap_ms: u64,
    pub hold_ms: u64,
    pub slop: f64,
}

impl Default for TimingConfig {
    fn default() -> Self {
        Self { tap_max_ms: 250, multi_tap_gap_ms: 300, hold_ms: 500, slop: 0.02 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MenuBeaconConfig {
    pub min_interval_ms: u32,
    pub max_interval_ms: u32,
    pub announce_period_ms: u64,
    pub open_button: Rect,
    pub scroll_button: Rect,
}

impl Default for MenuBeaconConfig {
    fn default() -> Self {
        Self {
            min_interval_ms: 120,
            max_interval_ms: 900,
            announce_period_ms: 1500,
            open_button: Rect::new(0.0, 0.0, 0.18, 0.10),
            scroll_button: Rect::new(0.0, 0.90, 0.18, 1.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HintsConfig {
    pub volume_min: f64,
    pub volume_max: f64,
}

impl Default for HintsConfig {
    fn default() -> Self {
        Self { volume_min: 0.3, volume_max: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ZoomConfig {
    pub guard_band: f64,
    pub quadrant_names: [String; 4],
}

impl Default for ZoomConfig {
    fn default() -> Self {
        Self {
            guard_band: 0.03,
            quadrant_names: ["top left", "top right", "bottom left", "bottom right"]
                .map(String::from),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EngineConfig {
    pub timing: TimingConfig,
    pub menu_beacon: MenuBeaconConfig,
    pub hints: HintsConfig,
    pub zoom: ZoomConfig,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("reading config: {0}")]
    Io(#[from] std::io::Error),
    #[error("parsing config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

impl EngineConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let cfg: EngineConfig = toml::from_str(text)?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    fn check(&self) -> Result<(), ConfigError> {
        let bad = |m: &str| Err(ConfigError::Invalid(m.to_string()));
        if self.timing.slop.is_nan() || self.timing.slop <= 0.0 {
            return bad("timing.slop must be positive");
        }
        if self.menu_beacon.min_interval_ms > self.menu_beacon.max_interval_ms {
            return bad("menu_beacon.min_interval_ms exceeds max_interval_ms");
        }
        if !(0.0..=1.0).contains(&self.hints.volume_min)
            || !(0.0..=1.0).contains(&self.hints.volume_max)
            || self.hints.volume_min > self.hints.volume_max
        {
            return bad("hints volumes must satisfy 0 <= volume_min <= volume_max <= 1");
        }
        if !(self.zoom.guard_band >= 0.0 && self.zoom.guard_band < 0.25) {
            return bad("zoom.guard_band must be within [0, 0.25)");
        }
        Ok(())
    }
}
