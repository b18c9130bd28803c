//! Deterministic replay, synthetic exploration strategies and metrics.

pub mod metrics;
pub mod simulate;

pub use metrics::SessionMetrics;
pub use simulate::{simulate, SimError, SimOutput, Strategy};

use crate::audio::AudioEvent;
use crate::config::EngineConfig;
use crate::engine::Engine;
use crate::explore::Tools;
use crate::gesture::{TouchEvent, TraceError};
use crate::region::AnnotatedImage;
use crate::validate::{has_errors, validate, ValidationIssue};

#[derive(Debug, thiserror::Error)]
pub enum ReplayError {
    #[error("annotation has {} validation error(s)", .0.iter().filter(|i| i.is_error()).count())]
    Invalid(Vec<ValidationIssue>),
    #[error(transparent)]
    Trace(#[from] TraceError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplayOutput {
    pub events: Vec<AudioEvent>,
    pub metrics: SessionMetrics,
}

/// Feeds a trace through the engine. Annotations with validation errors
/// are refused.
pub fn replay(
    image: &AnnotatedImage,
    trace: &[TouchEvent],
    tools: Tools,
    config: &EngineConfig,
) -> Result<ReplayOutput, ReplayError> {
    let issues = validate(image);
    if has_errors(&issues) {
        return Err(ReplayError::Invalid(issues));
    }
    let mut engine = Engine::new(image.clone(), config.clone(), tools);
    for ev in trace {
        engine.push(ev)?;
    }
    engine.finish();
    let metrics = SessionMetrics::online(&engine);
    Ok(ReplayOutput { events: engine.into_events(), metrics })
}
