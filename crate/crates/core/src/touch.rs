//! Touch event stream, its validity rules, and the line-delimited trace format.
//!
//! A trace file is one header record followed by one event record per line:
//!
//! ```text
//! {"w":1920,"h":1080,"v":1}
//! {"t":0,"id":1,"ph":"d","x":100,"y":200}
//! {"t":16,"id":1,"ph":"m","x":104.5,"y":200}
//! {"t":33,"id":1,"ph":"u","x":104.5,"y":200}
//! ```
//!
//! Emission is canonical: keys in that order, no whitespace, LF endings and
//! shortest round-trip decimals, so identical traces are byte-identical.

use std::collections::HashSet;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::Point;

pub const TRACE_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Phase {
    #[serde(rename = "d")]
    Down,
    #[serde(rename = "m")]
    Move,
    #[serde(rename = "u")]
    Up,
}

impl Phase {
    fn code(self) -> &'static str {
        match self {
            Phase::Down => "d",
            Phase::Move => "m",
            Phase::Up => "u",
        }
    }
}

/// One contact sample. Field order matches the wire/trace key order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TouchEvent {
    /// Milliseconds on the session's monotonic clock.
    pub t: u64,
    #[serde(rename = "id")]
    pub contact_id: u32,
    #[serde(rename = "ph")]
    pub phase: Phase,
    pub x: f64,
    pub y: f64,
}

impl TouchEvent {
    pub fn new(t: u64, contact_id: u32, phase: Phase, x: f64, y: f64) -> Self {
        Self { t, contact_id, phase, x, y }
    }

    pub fn down(t: u64, id: u32, x: f64, y: f64) -> Self {
        Self::new(t, id, Phase::Down, x, y)
    }

    pub fn moved(t: u64, id: u32, x: f64, y: f64) -> Self {
        Self::new(t, id, Phase::Move, x, y)
    }

    pub fn up(t: u64, id: u32, x: f64, y: f64) -> Self {
        Self::new(t, id, Phase::Up, x, y)
    }

    pub fn position(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TouchTrace {
    pub screen_width: u32,
    pub screen_height: u32,
    pub events: Vec<TouchEvent>,
}

impl TouchTrace {
    pub fn new(screen_width: u32, screen_height: u32, events: Vec<TouchEvent>) -> Self {
        Self { screen_width, screen_height, events }
    }

    /// Stream violations plus any event outside the screen rectangle.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = validate_stream(&self.events);
        let (w, h) = (self.screen_width as f64, self.screen_height as f64);
        for (index, e) in self.events.iter().enumerate() {
            let finite = e.x.is_finite() && e.y.is_finite();
            if finite && !((0.0..=w).contains(&e.x) && (0.0..=h).contains(&e.y)) {
                out.push(Violation { index, kind: ViolationKind::OutOfBounds { x: e.x, y: e.y } });
            }
        }
        out.sort_by_key(|v| v.index);
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ViolationKind {
    MoveWithoutDown { contact_id: u32 },
    UpWithoutDown { contact_id: u32 },
    NestedDown { contact_id: u32 },
    TimestampRegression { previous: u64, t: u64 },
    NonFinite,
    OutOfBounds { x: f64, y: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub index: usize,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "event {}: {}", self.index, self.kind)
    }
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationKind::MoveWithoutDown { contact_id } => write!(f, "move without down (id {contact_id})"),
            ViolationKind::UpWithoutDown { contact_id } => write!(f, "up without down (id {contact_id})"),
            ViolationKind::NestedDown { contact_id } => write!(f, "down while contact {contact_id} is already down"),
            ViolationKind::TimestampRegression { previous, t } => {
                write!(f, "timestamp regression ({t} ms after {previous} ms)")
            }
            ViolationKind::NonFinite => f.write_str("non-finite coordinate"),
            ViolationKind::OutOfBounds { x, y } => write!(f, "({x}, {y}) outside the screen"),
        }
    }
}

/// Tracks the per-contact phase grammar and the global clock. Shared by
/// [`validate_stream`] and the gesture engine so both enforce the same rules.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StreamChecker {
    active: HashSet<u32>,
    last_t: Option<u64>,
}

impl StreamChecker {
    pub fn new() -> Self {
        Self::default()
    }

    /// Checks `e` without recording it.
    pub fn check(&self, e: &TouchEvent) -> Option<ViolationKind> {
        if let Some(prev) = self.last_t {
            if e.t < prev {
                return Some(ViolationKind::TimestampRegression { previous: prev, t: e.t });
            }
        }
        if !e.x.is_finite() || !e.y.is_finite() {
            return Some(ViolationKind::NonFinite);
        }
        let down = self.active.contains(&e.contact_id);
        match (e.phase, down) {
            (Phase::Down, true) => Some(ViolationKind::NestedDown { contact_id: e.contact_id }),
            (Phase::Move, false) => Some(ViolationKind::MoveWithoutDown { contact_id: e.contact_id }),
            (Phase::Up, false) => Some(ViolationKind::UpWithoutDown { contact_id: e.contact_id }),
            _ => None,
        }
    }

    /// Records an event previously accepted by [`StreamChecker::check`].
    pub fn accept(&mut self, e: &TouchEvent) {
        self.last_t = Some(e.t);
        match e.phase {
            Phase::Down => {
                self.active.insert(e.contact_id);
            }
            Phase::Up => {
                self.active.remove(&e.contact_id);
            }
            Phase::Move => {}
        }
    }

    pub fn active_contacts(&self) -> usize {
        self.active.len()
    }
}

/// Returns every invariant violation in `events`; empty iff the stream is
/// replayable. Offending events are skipped so later ones are still judged.
pub fn validate_stream(events: &[TouchEvent]) -> Vec<Violation> {
    let mut checker = StreamChecker::new();
    let mut out = Vec::new();
    for (index, e) in events.iter().enumerate() {
        match checker.check(e) {
            Some(kind) => out.push(Violation { index, kind }),
            None => checker.accept(e),
        }
    }
    out
}

#[derive(Debug, Error, PartialEq)]
pub enum TraceError {
    #[error("trace header missing")]
    MissingHeader,
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line 1: unsupported trace version {0}")]
    UnsupportedVersion(u32),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    w: u32,
    h: u32,
    v: u32,
}

pub fn parse_trace(text: &str) -> Result<TouchTrace, TraceError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, first) = lines.next().ok_or(TraceError::MissingHeader)?;
    let header: Header = serde_json::from_str(first).map_err(|_| TraceError::MissingHeader)?;
    if header.v != TRACE_VERSION {
        return Err(TraceError::UnsupportedVersion(header.v));
    }
    let events = lines
        .map(|(i, line)| {
            serde_json::from_str::<TouchEvent>(line)
                .map_err(|e| TraceError::Malformed { line: i + 1, message: e.to_string() })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TouchTrace::new(header.w, header.h, events))
}

pub fn emit_trace(trace: &TouchTrace) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{{\"w\":{},\"h\":{},\"v\":{}}}", trace.screen_width, trace.screen_height, TRACE_VERSION);
    for e in &trace.events {
        let _ = writeln!(
            out,
            "{{\"t\":{},\"id\":{},\"ph\":\"{}\",\"x\":{},\"y\":{}}}",
            e.t,
            e.contact_id,
            e.phase.code(),
            fmt_num(e.x),
            fmt_num(e.y)
        );
    }
    out
}

/// Shortest round-trip decimal without exponent; `-0` is written as `0`.
pub(crate) fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v}")
    }
}
