//! Symbolic audio output and the `.events.jsonl` log format.
//!
//! Each line is one event with keys in a fixed order: `t`, `type`, then
//! the payload keys. Speech lines carry a `cue` naming what produced them
//! and, where one applies, the `area` path they talk about; the log alone
//! is enough to recompute session metrics.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::region::AreaPath;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Voice {
    Primary,
    Secondary,
}

/// What caused a speech event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cue {
    /// Finger entered an area.
    Area,
    /// Double-tap entered a parent area.
    Entered,
    /// Unexplored-count reminder.
    Count,
    /// Every area has been explored.
    Complete,
    MenuEntry,
    BeaconStart,
    BeaconDirection,
    BeaconArrived,
    BeaconCancel,
    BeaconRejected,
    Zoom,
    Bleed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EarconKind {
    FirstTouch,
    MenuWrap,
    ZoomConfirm,
    BeaconArrived,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ToneKind {
    OffAreaWarning,
    BleedWarning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ToneAction {
    Start,
    Stop,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Speech {
    pub text: String,
    pub volume: f64,
    pub voice: Voice,
    pub cue: Cue,
    pub area: Option<AreaPath>,
}

impl Speech {
    pub fn new(text: impl Into<String>, cue: Cue) -> Self {
        Self { text: text.into(), volume: 1.0, voice: Voice::Primary, cue, area: None }
    }

    pub fn about(mut self, path: AreaPath) -> Self {
        self.area = Some(path);
        self
    }

    pub fn volume(mut self, volume: f64) -> Self {
        self.volume = volume;
        self
    }

    pub fn voice(mut self, voice: Voice) -> Self {
        self.voice = voice;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AudioPayload {
    Speech(Speech),
    Earcon(EarconKind),
    Tone { kind: ToneKind, action: ToneAction },
    /// Beep every `n` ms, or `None` for silence.
    BeepRate(Option<u32>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AudioEvent {
    pub time_ms: u64,
    pub payload: AudioPayload,
}

impl AudioEvent {
    pub fn speech(time_ms: u64, speech: Speech) -> Self {
        Self { time_ms, payload: AudioPayload::Speech(speech) }
    }

    pub fn earcon(time_ms: u64, kind: EarconKind) -> Self {
        Self { time_ms, payload: AudioPayload::Earcon(kind) }
    }

    pub fn tone(time_ms: u64, kind: ToneKind, action: ToneAction) -> Self {
        Self { time_ms, payload: AudioPayload::Tone { kind, action } }
    }

    pub fn beep_rate(time_ms: u64, interval_ms: Option<u32>) -> Self {
        Self { time_ms, payload: AudioPayload::BeepRate(interval_ms) }
    }

    pub fn as_speech(&self) -> Option<&Speech> {
        match &self.payload {
            AudioPayload::Speech(s) => Some(s),
            _ => None,
        }
    }

    /// One log line, without the trailing newline.
    pub fn to_json_line(&self) -> String {
        fn json<T: Serialize + ?Sized>(v: &T) -> String {
            serde_json::to_string(v).expect("audio fields always serialize")
        }
        let mut line = format!("{{\"t\":{}", self.time_ms);
        match &self.payload {
            AudioPayload::Speech(s) => {
                let _ = write!(
                    line,
                    ",\"type\":\"speech\",\"text\":{},\"volume\":{},\"voice\":{},\"cue\":{}",
                    json(&s.text),
                    json(&s.volume),
                    json(&s.voice),
                    json(&s.cue)
                );
                if let Some(p) = &s.area {
                    let _ = write!(line, ",\"area\":{}", json(p));
                }
            }
            AudioPayload::Earcon(k) => {
                let _ = write!(line, ",\"type\":\"earcon\",\"kind\":{}", json(k));
            }
            AudioPayload::Tone { kind, action } => {
                let _ = write!(
                    line,
                    ",\"type\":\"tone\",\"kind\":{},\"action\":{}",
                    json(kind),
                    json(action)
                );
            }
            AudioPayload::BeepRate(interval) => {
                let _ = write!(line, ",\"type\":\"beep_rate\",\"interval_ms\":{}", json(interval));
            }
        }
        line.push('}');
        line
    }

    pub fn from_json_line(line: &str) -> Result<Self, LogError> {
        let raw: RawEvent = serde_json::from_str(line)?;
        let missing = |k: &str| LogError::Malformed(format!("{} event missing \"{k}\"", raw.kind));
        let payload = match raw.kind.as_str() {
            "speech" => AudioPayload::Speech(Speech {
                text: raw.text.ok_or_else(|| missing("text"))?,
                volume: raw.volume.ok_or_else(|| missing("volume"))?,
                voice: raw.voice.ok_or_else(|| missing("voice"))?,
                cue: raw.cue.ok_or_else(|| missing("cue"))?,
                area: raw.area,
            }),
            "earcon" => AudioPayload::Earcon(
                serde_json::from_value(raw.event_kind.ok_or_else(|| missing("kind"))?)?,
            ),
            "tone" => AudioPayload::Tone {
                kind: serde_json::from_value(raw.event_kind.ok_or_else(|| missing("kind"))?)?,
                action: raw.action.ok_or_else(|| missing("action"))?,
            },
            "beep_rate" => AudioPayload::BeepRate(raw.interval_ms),
            other => return Err(LogError::Malformed(format!("unknown event type \"{other}\""))),
        };
        Ok(AudioEvent { time_ms: raw.t, payload })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEvent {
    t: u64,
    #[serde(rename = "type")]
    kind: String,
    text: Option<String>,
    volume: Option<f64>,
    voice: Option<Voice>,
    cue: Option<Cue>,
    area: Option<AreaPath>,
    #[serde(rename = "kind")]
    event_kind: Option<serde_json::Value>,
    action: Option<ToneAction>,
    interval_ms: Option<u32>,
}

#[derive(Debug, thiserror::Error)]
pub enum LogError {
    #[error("line {line}: {source}")]
    Line { line: usize, source: Box<LogError> },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Malformed(String),
}

/// Serializes events as newline-terminated JSON lines.
pub fn write_log(events: &[AudioEvent]) -> String {
    let mut out = String::new();
    for e in events {
        out.push_str(&e.to_json_line());
        out.push('\n');
    }
    out
}

pub fn parse_log(text: &str) -> Result<Vec<AudioEvent>, LogError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            AudioEvent::from_json_line(l)
                .map_err(|e| LogError::Line { line: i + 1, source: Box::new(e) })
        })
        .collect()
}
