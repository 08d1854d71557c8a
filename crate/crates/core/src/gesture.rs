//! Deterministic gesture recognizer.
//!
//! Consumes [`TouchEvent`]s in stream order and emits [`GestureEvent`]s:
//!
//! * one finger draws a stroke,
//! * two fingers moving in parallel pan the object under them (or the canvas),
//! * two fingers opening or closing zoom it,
//! * three fingers show the palm menu; a swipe selects an item, a rotation
//!   steps through undo/redo instead.
//!
//! Contacts landing within `settle_window` ms of the first one join the same
//! gesture. The gesture is classified by contact count when the window
//! expires, when any contact moves more than `move_threshold`, or when a
//! contact lifts.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{centroid, wrap_delta, Point, Vector};
use crate::menu::{
    estimate_palm_pose, fallback_pose, layout_menu, select_from_displacement, MenuAction, MenuConfigError,
    MenuGeometry, PalmPose, PieMenuConfig,
};
use crate::touch::{Phase, StreamChecker, TouchEvent, ViolationKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformMode {
    Pan,
    Zoom,
}

/// Recognizer output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GestureEvent {
    StrokeBegin { point: Point },
    StrokePoint { point: Point },
    StrokeEnd,
    /// `origin` is the initial two-finger centroid; the document resolves it
    /// to an object or the canvas.
    TransformBegin { origin: Point, mode: TransformMode },
    /// Translate by `translation`, then scale by `scale` about `pivot`.
    /// Deltas are incremental; their scales multiply to the gesture total.
    TransformDelta { translation: Vector, scale: f64, pivot: Point },
    TransformEnd,
    UndoStep,
    RedoStep,
    MenuShown { pose: PalmPose, geometry: MenuGeometry },
    MenuPreview { highlighted: Option<usize> },
    MenuSelected { item: usize, action: MenuAction },
    MenuCancelled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GestureFamily {
    Stroke,
    Transform,
    Tri,
}

impl GestureEvent {
    pub fn family(&self) -> GestureFamily {
        use GestureEvent::*;
        match self {
            StrokeBegin { .. } | StrokePoint { .. } | StrokeEnd => GestureFamily::Stroke,
            TransformBegin { .. } | TransformDelta { .. } | TransformEnd => GestureFamily::Transform,
            UndoStep | RedoStep | MenuShown { .. } | MenuPreview { .. } | MenuSelected { .. } | MenuCancelled => {
                GestureFamily::Tri
            }
        }
    }
}

/// One short tag per recognized outcome, e.g. `stroke`, `pan`, `undo`,
/// `menu:back`, `menu:cancel`. Intermediate events are skipped.
pub fn outcome_labels(events: &[GestureEvent]) -> Vec<String> {
    events
        .iter()
        .filter_map(|e| match e {
            GestureEvent::StrokeBegin { .. } => Some("stroke".to_string()),
            GestureEvent::TransformBegin { mode: TransformMode::Pan, .. } => Some("pan".to_string()),
            GestureEvent::TransformBegin { mode: TransformMode::Zoom, .. } => Some("zoom".to_string()),
            GestureEvent::UndoStep => Some("undo".to_string()),
            GestureEvent::RedoStep => Some("redo".to_string()),
            GestureEvent::MenuSelected { action, .. } => Some(format!("menu:{action}")),
            GestureEvent::MenuCancelled => Some("menu:cancel".to_string()),
            _ => None,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EngineConfig {
    /// ms after the first contact during which further contacts join.
    pub settle_window: u64,
    pub move_threshold: f64,
    /// Centroid travel (px) that turns a three-finger touch into a menu swipe.
    pub selection_threshold: f64,
    pub zoom_ratio_threshold: f64,
    pub pan_lock_distance: f64,
    /// Degrees of mean rotation that turn a three-finger touch into undo/redo.
    pub rotation_threshold: f64,
    pub rotation_step: f64,
    /// Lock every two-finger gesture as a zoom that also carries translation.
    pub combined_pan_zoom: bool,
    /// Counter-clockwise rotation (as seen on screen) undoes.
    pub undo_counter_clockwise: bool,
    pub menu: PieMenuConfig,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            settle_window: 80,
            move_threshold: 8.0,
            selection_threshold: 30.0,
            zoom_ratio_threshold: 0.08,
            pan_lock_distance: 12.0,
            rotation_threshold: 15.0,
            rotation_step: 30.0,
            combined_pan_zoom: false,
            undo_counter_clockwise: true,
            menu: PieMenuConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{field} must be finite and strictly positive, got {value}")]
    NonPositive { field: &'static str, value: f64 },
    #[error("rotation_step ({step}) must be at least rotation_threshold ({threshold})")]
    StepBelowThreshold { step: f64, threshold: f64 },
    #[error("menu: {0}")]
    Menu(#[from] MenuConfigError),
    #[error("config parse error: {0}")]
    Parse(String),
}

impl EngineConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let fields = [
            ("settle_window", self.settle_window as f64),
            ("move_threshold", self.move_threshold),
            ("selection_threshold", self.selection_threshold),
            ("zoom_ratio_threshold", self.zoom_ratio_threshold),
            ("pan_lock_distance", self.pan_lock_distance),
            ("rotation_threshold", self.rotation_threshold),
            ("rotation_step", self.rotation_step),
        ];
        for (field, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(ConfigError::NonPositive { field, value });
            }
        }
        if self.rotation_step < self.rotation_threshold {
            return Err(ConfigError::StepBelowThreshold { step: self.rotation_step, threshold: self.rotation_threshold });
        }
        self.menu.validate()?;
        Ok(())
    }

    /// Sorted-key compact JSON; the config file format.
    pub fn to_canonical_json(&self) -> String {
        let value = serde_json::to_value(self).expect("config serializes");
        value.to_string()
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: EngineConfig = serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("touch stream error: {0}")]
pub struct StreamError(pub ViolationKind);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Idle,
    Settling,
    Stroke,
    TransformPending,
    TransformLocked(TransformMode),
    TriPending,
    TriSwipe,
    TriRotate,
    /// Swallows input until every contact has lifted.
    Dead,
}

#[derive(Debug, Clone, PartialEq)]
struct Contact {
    id: u32,
    anchor: Point,
    pos: Point,
    /// Raw-screen angle about the centroid at the previous update; `None`
    /// while the contact sits too close to the centroid to have one.
    last_angle: Option<f64>,
}

impl Contact {
    fn new(id: u32, at: Point) -> Self {
        Self { id, anchor: at, pos: at, last_angle: None }
    }
}

/// Everything the recognizer remembers between events.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EngineState {
    mode: Mode,
    checker: StreamChecker,
    contacts: Vec<Contact>,
    ignored: HashSet<u32>,
    settle_start: u64,
    settle_moves: Vec<Point>,
    anchor_centroid: Point,
    anchor_distance: f64,
    last_centroid: Point,
    last_distance: f64,
    rotation: f64,
    steps: i64,
}

impl EngineState {
    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Mean rotation of the three-finger gesture in raw screen degrees
    /// (positive is clockwise on screen).
    pub fn rotation(&self) -> f64 {
        self.rotation
    }

    /// Net undo/redo steps emitted by the current rotation.
    pub fn step_counter(&self) -> i64 {
        self.steps
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GestureEngine {
    config: EngineConfig,
    state: EngineState,
}

impl GestureEngine {
    pub fn new(config: EngineConfig) -> Result<Self, ConfigError> {
        config.validate()?;
        Ok(Self { config, state: EngineState::default() })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn state(&self) -> &EngineState {
        &self.state
    }

    pub fn mode(&self) -> Mode {
        self.state.mode
    }

    /// Back to a fresh engine. Contacts still down must be re-announced.
    pub fn reset(&mut self) {
        self.state = EngineState::default();
    }

    /// Classifies a settling gesture whose window has expired by `now`,
    /// without waiting for the next touch event.
    pub fn tick(&mut self, now: u64) -> Vec<GestureEvent> {
        let mut out = Vec::new();
        if self.state.mode == Mode::Settling && now > self.state.settle_start + self.config.settle_window {
            self.classify(&mut out);
        }
        out
    }

    pub fn process_event(&mut self, e: &TouchEvent) -> Result<Vec<GestureEvent>, StreamError> {
        if let Some(kind) = self.state.checker.check(e) {
            return Err(StreamError(kind));
        }
        self.state.checker.accept(e);

        let mut out = self.tick(e.t);
        let id = e.contact_id;
        let at = e.position();

        if self.state.ignored.contains(&id) {
            if e.phase == Phase::Up {
                self.state.ignored.remove(&id);
                self.settle_if_clear();
            }
            return Ok(out);
        }

        match self.state.mode {
            Mode::Idle => {
                if e.phase == Phase::Down {
                    self.state.contacts = vec![Contact::new(id, at)];
                    self.state.settle_start = e.t;
                    self.state.settle_moves.clear();
                    self.state.mode = Mode::Settling;
                }
            }
            Mode::Settling => match e.phase {
                Phase::Down if self.state.contacts.len() >= 3 => {
                    self.state.contacts.clear();
                    self.state.mode = Mode::Dead;
                }
                Phase::Down => self.state.contacts.push(Contact::new(id, at)),
                Phase::Move => {
                    self.settling_move(id, at);
                    let cfg = &self.config;
                    if self.state.contacts.iter().any(|c| c.pos.distance(c.anchor) > cfg.move_threshold) {
                        self.classify(&mut out);
                    }
                }
                Phase::Up => {
                    if self.contact(id).is_some_and(|c| c.pos != at) {
                        self.settling_move(id, at);
                    }
                    self.classify(&mut out);
                    self.gesture_up(id, at, &mut out);
                }
            },
            Mode::Dead => {
                if e.phase == Phase::Up {
                    self.settle_if_clear();
                }
            }
            _ => match e.phase {
                Phase::Down => {
                    self.state.ignored.insert(id);
                }
                Phase::Move => self.gesture_move(id, at, &mut out),
                Phase::Up => self.gesture_up(id, at, &mut out),
            },
        }
        Ok(out)
    }

    /// Feeds `events` in order, stopping at the first stream error.
    pub fn feed(&mut self, events: &[TouchEvent]) -> Result<Vec<GestureEvent>, StreamError> {
        let mut out = Vec::new();
        for e in events {
            out.extend(self.process_event(e)?);
        }
        Ok(out)
    }

    fn contact(&self, id: u32) -> Option<&Contact> {
        self.state.contacts.iter().find(|c| c.id == id)
    }

    fn contact_mut(&mut self, id: u32) -> Option<&mut Contact> {
        self.state.contacts.iter_mut().find(|c| c.id == id)
    }

    fn positions(&self) -> Vec<Point> {
        self.state.contacts.iter().map(|c| c.pos).collect()
    }

    fn settling_move(&mut self, id: u32, at: Point) {
        if let Some(c) = self.contact_mut(id) {
            c.pos = at;
            if self.state.contacts.len() == 1 {
                self.state.settle_moves.push(at);
            }
        }
    }

    fn settle_if_clear(&mut self) {
        if self.state.mode == Mode::Dead && self.state.checker.active_contacts() == 0 {
            self.state = EngineState { checker: self.state.checker.clone(), ..EngineState::default() };
        }
    }

    fn classify(&mut self, out: &mut Vec<GestureEvent>) {
        match self.state.contacts.len() {
            1 => {
                self.state.mode = Mode::Stroke;
                out.push(GestureEvent::StrokeBegin { point: self.state.contacts[0].anchor });
                out.extend(self.state.settle_moves.drain(..).map(|point| GestureEvent::StrokePoint { point }));
            }
            2 => {
                let anchors = [self.state.contacts[0].anchor, self.state.contacts[1].anchor];
                self.state.anchor_centroid = centroid(&anchors);
                self.state.anchor_distance = anchors[0].distance(anchors[1]);
                self.state.last_centroid = self.state.anchor_centroid;
                self.state.last_distance = self.state.anchor_distance;
                self.state.mode = Mode::TransformPending;
                self.update_transform(out);
            }
            3 => {
                let anchors: Vec<Point> = self.state.contacts.iter().map(|c| c.anchor).collect();
                let ac = centroid(&anchors);
                self.state.anchor_centroid = ac;
                for c in &mut self.state.contacts {
                    c.last_angle = angle_about(c.anchor, ac);
                }
                self.state.rotation = 0.0;
                self.state.steps = 0;
                let pts = self.positions();
                let tri = [pts[0], pts[1], pts[2]];
                let menu = &self.config.menu;
                let pose = estimate_palm_pose(&tri, menu).unwrap_or_else(|_| fallback_pose(&tri, menu));
                out.push(GestureEvent::MenuShown { pose, geometry: layout_menu(&pose, menu) });
                self.state.mode = Mode::TriPending;
                self.update_tri(out);
            }
            _ => self.state.mode = Mode::Dead,
        }
    }

    fn gesture_move(&mut self, id: u32, at: Point, out: &mut Vec<GestureEvent>) {
        let Some(c) = self.contact_mut(id) else { return };
        c.pos = at;
        match self.state.mode {
            Mode::Stroke => out.push(GestureEvent::StrokePoint { point: at }),
            Mode::TransformPending | Mode::TransformLocked(_) => self.update_transform(out),
            Mode::TriPending | Mode::TriSwipe | Mode::TriRotate => self.update_tri(out),
            _ => {}
        }
    }

    fn gesture_up(&mut self, id: u32, at: Point, out: &mut Vec<GestureEvent>) {
        if self.contact(id).is_some_and(|c| c.pos != at) {
            self.gesture_move(id, at, out);
        }
        match self.state.mode {
            Mode::Stroke => out.push(GestureEvent::StrokeEnd),
            Mode::TransformLocked(_) => out.push(GestureEvent::TransformEnd),
            Mode::TriPending => out.push(GestureEvent::MenuCancelled),
            Mode::TriSwipe => {
                let d = self.tri_displacement();
                let menu = &self.config.menu;
                match select_from_displacement(d, menu, self.config.selection_threshold) {
                    Some(item) => out.push(GestureEvent::MenuSelected { item, action: menu.items[item].action }),
                    None => out.push(GestureEvent::MenuCancelled),
                }
            }
            _ => {}
        }
        self.state.contacts.clear();
        self.state.mode = Mode::Dead;
        self.settle_if_clear();
    }

    fn update_transform(&mut self, out: &mut Vec<GestureEvent>) {
        let pts = self.positions();
        let c = centroid(&pts);
        let d = pts[0].distance(pts[1]);
        let st = &mut self.state;
        if st.mode == Mode::TransformPending {
            let ratio = if st.anchor_distance > 1e-9 { d / st.anchor_distance } else { 1.0 };
            let mode = if (ratio - 1.0).abs() > self.config.zoom_ratio_threshold {
                TransformMode::Zoom
            } else if c.distance(st.anchor_centroid) > self.config.pan_lock_distance {
                if self.config.combined_pan_zoom {
                    TransformMode::Zoom
                } else {
                    TransformMode::Pan
                }
            } else {
                return;
            };
            st.mode = Mode::TransformLocked(mode);
            out.push(GestureEvent::TransformBegin { origin: st.anchor_centroid, mode });
        }
        let Mode::TransformLocked(mode) = st.mode else { return };
        let translation = c - st.last_centroid;
        let scale = match mode {
            TransformMode::Zoom if st.last_distance > 1e-9 && d > 1e-9 => d / st.last_distance,
            _ => 1.0,
        };
        if translation != Point::ZERO || scale != 1.0 {
            out.push(GestureEvent::TransformDelta { translation, scale, pivot: c });
        }
        st.last_centroid = c;
        if d > 1e-9 {
            st.last_distance = d;
        }
    }

    fn tri_displacement(&self) -> Vector {
        centroid(&self.positions()) - self.state.anchor_centroid
    }

    fn update_tri(&mut self, out: &mut Vec<GestureEvent>) {
        let c = centroid(&self.positions());
        // mean angular change over contacts whose angle is defined both
        // before and after this update
        let (mut sum, mut count) = (0.0, 0);
        for ct in &mut self.state.contacts {
            let a = angle_about(ct.pos, c);
            if let (Some(prev), Some(now)) = (ct.last_angle, a) {
                sum += wrap_delta(now - prev);
                count += 1;
            }
            ct.last_angle = a;
        }
        if count > 0 {
            self.state.rotation += sum / count as f64;
        }
        let d = c - self.state.anchor_centroid;
        let rho = self.state.rotation();
        let menu = &self.config.menu;
        match self.state.mode {
            Mode::TriPending => {
                if d.length() > self.config.selection_threshold {
                    self.state.mode = Mode::TriSwipe;
                    let highlighted = select_from_displacement(d, menu, self.config.selection_threshold);
                    out.push(GestureEvent::MenuPreview { highlighted });
                } else if rho.abs() > self.config.rotation_threshold {
                    self.state.mode = Mode::TriRotate;
                    out.push(GestureEvent::MenuCancelled);
                    self.emit_steps(rho, out);
                }
            }
            Mode::TriSwipe => {
                let highlighted = select_from_displacement(d, menu, self.config.selection_threshold);
                out.push(GestureEvent::MenuPreview { highlighted });
            }
            Mode::TriRotate => self.emit_steps(rho, out),
            _ => {}
        }
    }

    /// Moves the step counter toward `trunc(rho / rotation_step)`; each unit
    /// is one undo or redo depending on direction.
    fn emit_steps(&mut self, rho: f64, out: &mut Vec<GestureEvent>) {
        let target = (rho / self.config.rotation_step).trunc() as i64;
        let ccw_undo = self.config.undo_counter_clockwise;
        while self.state.steps != target {
            // raw screen angles grow clockwise
            let clockwise = target > self.state.steps;
            self.state.steps += if clockwise { 1 } else { -1 };
            out.push(if clockwise == ccw_undo { GestureEvent::RedoStep } else { GestureEvent::UndoStep });
        }
    }
}

/// Contacts nearer the centroid than this have no usable angle; a finger
/// passing over the centroid would otherwise read as a half turn.
const MIN_ROTATION_RADIUS: f64 = 8.0;

/// Angle of `p` about `c` in raw screen coordinates (y down), degrees.
fn angle_about(p: Point, c: Point) -> Option<f64> {
    let v = p - c;
    (v.length() >= MIN_ROTATION_RADIUS).then(|| v.y.atan2(v.x).to_degrees())
}
