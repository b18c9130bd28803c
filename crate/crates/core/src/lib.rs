//! Touchscreen image exploration for blind and low-vision users.
//!
//! An [`AnnotatedImage`] describes labeled polygonal areas, optionally
//! nested one level deep. An [`Engine`] consumes raw [`TouchEvent`]s and
//! emits symbolic [`AudioEvent`]s: speech, earcons, warning tones and beacon
//! beep rates. The optional tools (menu and beacon, hints, quadrant zoom)
//! are switched on through [`Tools`].
//!
//! ```
//! use imgtouch::{AnnotatedImage, Area, Engine, EngineConfig, Phase, Point, TouchEvent, Tools};
//!
//! let square = vec![
//!     Point::new(0.2, 0.2),
//!     Point::new(0.8, 0.2),
//!     Point::new(0.8, 0.8),
//!     Point::new(0.2, 0.8),
//! ];
//! let image = AnnotatedImage::new("demo", vec![Area::new("window", square)]);
//! let mut engine = Engine::new(image, EngineConfig::default(), Tools::NONE);
//! engine.push(&TouchEvent::new(0, 0, Phase::Down, 0.1, 0.5)).unwrap();
//! engine.push(&TouchEvent::new(50, 0, Phase::Move, 0.5, 0.5)).unwrap();
//! engine.push(&TouchEvent::new(90, 0, Phase::Up, 0.5, 0.5)).unwrap();
//! engine.finish();
//! let spoken: Vec<_> = engine.events().iter().filter_map(|e| e.as_speech()).collect();
//! assert_eq!(spoken[0].text, "window");
//! ```

pub mod annot;
pub mod audio;
pub mod beacon;
pub mod config;
pub mod engine;
pub mod explore;
pub mod geometry;
pub mod gesture;
pub mod harness;
pub mod hints;
pub mod menu;
pub mod region;
pub mod trace;
pub mod validate;
pub mod zoom;

pub use audio::{AudioEvent, AudioPayload, Cue, EarconKind, Speech, ToneAction, ToneKind, Voice};
pub use config::EngineConfig;
pub use engine::{run_trace, Engine};
pub use explore::{ExplorationState, Tools};
pub use geometry::Point;
pub use gesture::{GestureEvent, GestureKind, Phase, TouchEvent};
pub use hints::ProminenceTable;
pub use region::{hit_test, AnnotatedImage, Area, AreaPath, CamGrid, Level, Quadrant};
pub use validate::{validate, Severity, ValidationIssue};
