//! The `.trace.json` touch-trace format.
//!
//! ```json
//! {"events":[
//!   {"t":0,"p":0,"phase":"down","x":0.3,"y":0.5},
//!   {"t":80,"p":0,"phase":"up","x":0.3,"y":0.5}
//! ]}
//! ```

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::geometry::{round9, Point};
use crate::gesture::{Phase, TouchEvent};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTouch {
    t: u64,
    p: u32,
    phase: Phase,
    x: f64,
    y: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTrace {
    events: Vec<RawTouch>,
}

pub fn parse_trace(text: &str) -> Result<Vec<TouchEvent>, serde_json::Error> {
    let raw: RawTrace = serde_json::from_str(text)?;
    Ok(raw
        .events
        .into_iter()
        .map(|r| TouchEvent { time_ms: r.t, pointer_id: r.p, phase: r.phase, position: Point::new(r.x, r.y) })
        .collect())
}

/// One event per line; coordinates rounded to 9 decimals.
pub fn write_trace(events: &[TouchEvent]) -> String {
    let mut out = String::from("{\"events\":[");
    for (i, e) in events.iter().enumerate() {
        let raw = RawTouch {
            t: e.time_ms,
            p: e.pointer_id,
            phase: e.phase,
            x: round9(e.position.x),
            y: round9(e.position.y),
        };
        let sep = if i == 0 { "" } else { "," };
        let _ = write!(out, "{sep}\n  {}", serde_json::to_string(&raw).expect("trace event serializes"));
    }
    out.push_str("\n]}\n");
    out
}
