//! A live whiteboard session: touch messages in, render updates out.
//!
//! The presenter receives menu state; audience subscribers only ever receive
//! scenes. Keeping the menu off the audience stream is protocol policy, not a
//! rendering detail.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::doc::{CanvasTransform, Document};
use crate::gesture::{ConfigError, EngineConfig, GestureEngine, GestureEvent};
use crate::menu::MenuGeometry;
use crate::touch::{TouchEvent, TouchTrace, Violation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Presenter,
    Audience,
}

/// Inbound frame. On the wire each variant is a JSON object with a `"type"`
/// discriminator, e.g. `{"type":"touch","t":0,"id":1,"ph":"d","x":5,"y":5}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SessionMessage {
    Touch(TouchEvent),
    SetConfig(EngineConfig),
    LoadDocument { text: String },
    ViewRequest { role: Role },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RenderUpdate {
    Scene { document: String, canvas: CanvasTransform, slide: usize },
    /// `geometry` is present only while `visible`.
    MenuState { visible: bool, geometry: Option<MenuGeometry>, highlighted: Option<usize> },
    Diagnostic { text: String },
}

impl RenderUpdate {
    pub fn is_visible_menu(&self) -> bool {
        matches!(self, RenderUpdate::MenuState { visible: true, .. })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("render update serializes")
    }
}

/// Updates produced by one inbound message, split by subscriber role.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outbound {
    pub presenter: Vec<RenderUpdate>,
    pub audience: Vec<RenderUpdate>,
    /// Recognizer output for the message, in order.
    pub gestures: Vec<GestureEvent>,
}

impl Outbound {
    fn diagnostic(text: impl Into<String>) -> Self {
        Self { presenter: vec![RenderUpdate::Diagnostic { text: text.into() }], ..Self::default() }
    }

    pub fn for_role(&self, role: Role) -> &[RenderUpdate] {
        match role {
            Role::Presenter => &self.presenter,
            Role::Audience => &self.audience,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Session {
    engine: GestureEngine,
    doc: Document,
    menu: Option<(MenuGeometry, Option<usize>)>,
}

impl Session {
    pub fn new(config: EngineConfig, doc: Document) -> Result<Self, ConfigError> {
        Ok(Self { engine: GestureEngine::new(config)?, doc, menu: None })
    }

    pub fn document(&self) -> &Document {
        &self.doc
    }

    pub fn engine(&self) -> &GestureEngine {
        &self.engine
    }

    pub fn scene(&self) -> RenderUpdate {
        RenderUpdate::Scene {
            document: self.doc.serialize(),
            canvas: self.doc.canvas(),
            slide: self.doc.current_slide(),
        }
    }

    fn menu_state(&self) -> RenderUpdate {
        match &self.menu {
            Some((geometry, highlighted)) => {
                RenderUpdate::MenuState { visible: true, geometry: Some(geometry.clone()), highlighted: *highlighted }
            }
            None => RenderUpdate::MenuState { visible: false, geometry: None, highlighted: None },
        }
    }

    /// Parses one wire frame; malformed frames become a presenter diagnostic.
    pub fn handle_text(&mut self, text: &str) -> Outbound {
        match serde_json::from_str::<SessionMessage>(text) {
            Ok(msg) => self.handle_message(msg),
            Err(e) => Outbound::diagnostic(format!("malformed message: {e}")),
        }
    }

    pub fn handle_message(&mut self, msg: SessionMessage) -> Outbound {
        match msg {
            SessionMessage::Touch(e) => self.handle_touch(&e),
            SessionMessage::SetConfig(config) => match GestureEngine::new(config) {
                Ok(engine) => {
                    self.engine = engine;
                    self.interrupt()
                }
                Err(e) => Outbound::diagnostic(format!("config rejected: {e}")),
            },
            SessionMessage::LoadDocument { text } => match Document::deserialize(&text) {
                Ok(doc) => {
                    self.engine.reset();
                    self.doc = doc;
                    self.interrupt()
                }
                Err(e) => Outbound::diagnostic(format!("document rejected: {e}")),
            },
            SessionMessage::ViewRequest { role } => {
                let mut out = Outbound::default();
                match role {
                    Role::Presenter => {
                        out.presenter.push(self.scene());
                        if self.menu.is_some() {
                            out.presenter.push(self.menu_state());
                        }
                    }
                    Role::Audience => out.audience.push(self.scene()),
                }
                out
            }
        }
    }

    /// After a config or document swap: drop gesture state and resync everyone.
    fn interrupt(&mut self) -> Outbound {
        self.engine.reset();
        self.doc.abort_gesture();
        let mut out = Outbound::default();
        if self.menu.take().is_some() {
            out.presenter.push(self.menu_state());
        }
        let scene = self.scene();
        out.presenter.push(scene.clone());
        out.audience.push(scene);
        out
    }

    fn handle_touch(&mut self, e: &TouchEvent) -> Outbound {
        let gestures = match self.engine.process_event(e) {
            Ok(g) => g,
            Err(err) => return Outbound::diagnostic(err.to_string()),
        };
        let revision = self.doc.revision();
        let mut out = Outbound::default();
        for g in &gestures {
            match g {
                GestureEvent::MenuShown { geometry, .. } => {
                    self.menu = Some((geometry.clone(), None));
                    out.presenter.push(self.menu_state());
                }
                GestureEvent::MenuPreview { highlighted } => {
                    if let Some((_, h)) = &mut self.menu {
                        *h = *highlighted;
                    }
                    out.presenter.push(self.menu_state());
                }
                GestureEvent::MenuSelected { .. } | GestureEvent::MenuCancelled => {
                    self.menu = None;
                    out.presenter.push(self.menu_state());
                }
                _ => {}
            }
            for d in self.doc.apply_gesture(g) {
                out.presenter.push(RenderUpdate::Diagnostic { text: d.to_string() });
            }
        }
        if self.doc.revision() != revision {
            let scene = self.scene();
            out.presenter.push(scene.clone());
            out.audience.push(scene);
        }
        out.gestures = gestures;
        out
    }
}

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error("trace is not replayable ({} violation(s)); first: {}", .0.len(), .0[0])]
    InvalidTrace(Vec<Violation>),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Replay {
    /// Canonical serialization of the final document.
    pub document: String,
    pub gestures: Vec<GestureEvent>,
    pub diagnostics: Vec<String>,
}

/// Replays `trace` against `initial` using only trace timestamps. The trace
/// is validated up front; an invalid trace produces no partial state.
pub fn replay(trace: &TouchTrace, config: &EngineConfig, initial: Document) -> Result<Replay, ReplayError> {
    let violations = trace.validate();
    if !violations.is_empty() {
        return Err(ReplayError::InvalidTrace(violations));
    }
    let mut session = Session::new(config.clone(), initial)?;
    let mut gestures = Vec::new();
    let mut diagnostics = Vec::new();
    for e in &trace.events {
        let out = session.handle_message(SessionMessage::Touch(*e));
        gestures.extend(out.gestures);
        diagnostics.extend(out.presenter.into_iter().filter_map(|u| match u {
            RenderUpdate::Diagnostic { text } => Some(text),
            _ => None,
        }));
    }
    Ok(Replay { document: session.document().serialize(), gestures, diagnostics })
}
