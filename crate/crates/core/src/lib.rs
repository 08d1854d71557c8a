//! Multi-touch whiteboard engine with a palm-hidden pie menu.
//!
//! The pipeline is `touch` → `gesture` → `doc`, hosted by `session` (and
//! `server` for live WebSocket use). `menu` holds the pie-menu geometry and
//! `experiment` the menu-accuracy and gaze-analysis harnesses.

pub mod doc;
pub mod experiment;
pub mod geom;
pub mod gesture;
pub mod menu;
pub mod server;
pub mod session;
pub mod touch;

pub use doc::{CanvasTransform, Command, Diagnostic, Document, Object};
pub use geom::{Point, Rect, Vector};
pub use gesture::{EngineConfig, GestureEngine, GestureEvent, GestureFamily, Mode, TransformMode};
pub use menu::{MenuAction, MenuGeometry, PalmPose, PieMenuConfig};
pub use session::{replay, RenderUpdate, Replay, Role, Session, SessionMessage};
pub use touch::{emit_trace, parse_trace, validate_stream, Phase, TouchEvent, TouchTrace};
