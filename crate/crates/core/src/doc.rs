//! Slide/canvas document that gesture events mutate.
//!
//! Every mutation goes through a [`Command`]. Executing a command records the
//! exact prior state it overwrote, so undo restores bytes rather than running
//! inverse arithmetic.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Point, Rect, Vector};
use crate::gesture::{GestureEvent, TransformMode};
use crate::menu::MenuAction;

pub const MIN_CANVAS_SCALE: f64 = 0.05;
pub const MAX_CANVAS_SCALE: f64 = 20.0;
/// Fraction of the viewport left empty on each side by [`Document::overview`].
pub const OVERVIEW_MARGIN: f64 = 0.05;
pub const DUPLICATE_OFFSET: Vector = Point::new(20.0, 20.0);
pub const DOC_FORMAT: &str = "spieboard-doc/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Stroke {
    pub points: Vec<Point>,
    pub color: String,
    pub width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Image {
    pub rect: Rect,
    pub resource: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Object {
    Stroke(Stroke),
    Image(Image),
}

impl Object {
    /// Hit area: a stroke's bounding box grown by half its width, or the image rect.
    pub fn bounds(&self) -> Rect {
        match self {
            Object::Stroke(s) => Rect::bounding(&s.points)
                .unwrap_or(Rect::new(0.0, 0.0, 0.0, 0.0))
                .inflate(s.width / 2.0),
            Object::Image(i) => i.rect,
        }
    }

    /// Applies `p -> pivot + factor * (p - pivot) + shift`.
    fn scaled(&self, factor: f64, pivot: Point, shift: Vector) -> Object {
        let map = |p: Point| pivot + (p - pivot) * factor + shift;
        match self {
            Object::Stroke(s) => Object::Stroke(Stroke {
                points: s.points.iter().map(|&p| map(p)).collect(),
                color: s.color.clone(),
                width: s.width * factor,
            }),
            Object::Image(i) => {
                let o = map(Point::new(i.rect.x, i.rect.y));
                Object::Image(Image {
                    rect: Rect::new(o.x, o.y, i.rect.w * factor, i.rect.h * factor),
                    resource: i.resource.clone(),
                })
            }
        }
    }

    fn translated(&self, delta: Vector) -> Object {
        match self {
            Object::Stroke(s) => Object::Stroke(Stroke {
                points: s.points.iter().map(|&p| p + delta).collect(),
                color: s.color.clone(),
                width: s.width,
            }),
            Object::Image(i) => Object::Image(Image {
                rect: Rect::new(i.rect.x + delta.x, i.rect.y + delta.y, i.rect.w, i.rect.h),
                resource: i.resource.clone(),
            }),
        }
    }

    fn check(&self) -> Result<(), String> {
        match self {
            Object::Stroke(s) => {
                if s.points.len() < 2 {
                    return Err("stroke needs at least two points".into());
                }
                if !(s.width.is_finite() && s.width > 0.0) || s.points.iter().any(|p| !p.is_finite()) {
                    return Err("stroke has a non-finite point or non-positive width".into());
                }
            }
            Object::Image(i) => {
                let r = i.rect;
                if !(r.w > 0.0 && r.h > 0.0) || ![r.x, r.y, r.w, r.h].iter().all(|v| v.is_finite()) {
                    return Err("image rect must be finite with positive size".into());
                }
            }
        }
        Ok(())
    }
}

/// World-to-screen mapping `screen = scale * world + (tx, ty)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CanvasTransform {
    pub scale: f64,
    pub tx: f64,
    pub ty: f64,
}

impl Default for CanvasTransform {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl CanvasTransform {
    pub const IDENTITY: CanvasTransform = CanvasTransform { scale: 1.0, tx: 0.0, ty: 0.0 };

    pub fn to_screen(&self, p: Point) -> Point {
        Point::new(self.scale * p.x + self.tx, self.scale * p.y + self.ty)
    }

    pub fn to_world(&self, q: Point) -> Point {
        Point::new((q.x - self.tx) / self.scale, (q.y - self.ty) / self.scale)
    }

    /// Screen-space `q -> pivot + f * (q - pivot) + shift` with the resulting
    /// scale clamped; `f` shrinks to whatever the clamp allows.
    fn zoomed(&self, factor: f64, pivot: Point, shift: Vector) -> CanvasTransform {
        let scale = (self.scale * factor).clamp(MIN_CANVAS_SCALE, MAX_CANVAS_SCALE);
        let f = scale / self.scale;
        let t = pivot + (Point::new(self.tx, self.ty) - pivot) * f + shift;
        CanvasTransform { scale, tx: t.x, ty: t.y }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Slide {
    pub objects: Vec<Object>,
    pub canvas: CanvasTransform,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Viewport {
    pub w: f64,
    pub h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pen {
    pub color: String,
    pub width: f64,
}

impl Default for Pen {
    fn default() -> Self {
        Self { color: "#202020".into(), width: 4.0 }
    }
}

/// An undoable edit. Object indices and canvases refer to the current slide;
/// object-space quantities are in world units, canvas ones in screen px.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "cmd", rename_all = "snake_case")]
pub enum Command {
    AddStroke { stroke: Stroke },
    MoveObject { target: usize, delta: Vector },
    ScaleObject { target: usize, factor: f64, pivot: Point, shift: Vector },
    PanCanvas { delta: Vector },
    ZoomCanvas { factor: f64, pivot: Point, shift: Vector },
    NextSlide,
    PrevSlide,
    Overview,
    DuplicateSelection { offset: Vector },
}

/// State a command overwrote.
#[derive(Debug, Clone, PartialEq)]
enum Restore {
    PopObject { selection: Option<usize>, clipboard: Option<Object> },
    Object { index: usize, object: Object, selection: Option<usize> },
    Canvas(CanvasTransform),
    Slide { index: usize, selection: Option<usize> },
}

#[derive(Debug, Clone, PartialEq)]
struct Record {
    command: Command,
    restore: Restore,
}

/// Why an operation left the document untouched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    NothingToUndo,
    NothingToRedo,
    NoSelection,
    AtFirstSlide,
    AtLastSlide,
    StrokeTooShort,
    OverviewUnchanged,
    NoActionBound,
    InvalidTarget(usize),
    InvalidParameter(&'static str),
    UnbalancedGesture(&'static str),
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::NothingToUndo => f.write_str("nothing to undo"),
            Diagnostic::NothingToRedo => f.write_str("nothing to redo"),
            Diagnostic::NoSelection => f.write_str("no selection to copy"),
            Diagnostic::AtFirstSlide => f.write_str("already at the first slide"),
            Diagnostic::AtLastSlide => f.write_str("already at the last slide"),
            Diagnostic::StrokeTooShort => f.write_str("stroke dropped: fewer than two points"),
            Diagnostic::OverviewUnchanged => f.write_str("overview already showing all contents"),
            Diagnostic::NoActionBound => f.write_str("menu item has no action"),
            Diagnostic::InvalidTarget(i) => write!(f, "no object {i} on this slide"),
            Diagnostic::InvalidParameter(what) => write!(f, "invalid {what}"),
            Diagnostic::UnbalancedGesture(what) => write!(f, "{what} outside its gesture"),
        }
    }
}

#[derive(Debug, Error)]
pub enum DocError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid document: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Target {
    Object(usize),
    Canvas,
}

/// Two-finger manipulation in progress, applied live on top of a snapshot.
#[derive(Debug, Clone, PartialEq)]
struct LiveTransform {
    target: Target,
    mode: TransformMode,
    origin: Point,
    /// Accumulated screen map `q -> scale * q + offset`.
    scale: f64,
    offset: Vector,
    object: Option<Object>,
    canvas: CanvasTransform,
    selection: Option<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Wire {
    format: String,
    slides: Vec<Slide>,
    current_slide: usize,
    selection: Option<usize>,
    clipboard: Option<Object>,
    viewport: Viewport,
    pen: Pen,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    slides: Vec<Slide>,
    current: usize,
    selection: Option<usize>,
    clipboard: Option<Object>,
    viewport: Viewport,
    pen: Pen,
    undo_stack: Vec<Record>,
    redo_stack: Vec<Record>,
    live_stroke: Option<Vec<Point>>,
    live_transform: Option<LiveTransform>,
    revision: u64,
}

impl Default for Document {
    fn default() -> Self {
        Self::new(1, Viewport { w: 1920.0, h: 1080.0 })
    }
}

impl Document {
    pub fn new(slides: usize, viewport: Viewport) -> Self {
        Self {
            slides: vec![Slide::default(); slides.max(1)],
            current: 0,
            selection: None,
            clipboard: None,
            viewport,
            pen: Pen::default(),
            undo_stack: Vec::new(),
            redo_stack: Vec::new(),
            live_stroke: None,
            live_transform: None,
            revision: 0,
        }
    }

    pub fn slides(&self) -> &[Slide] {
        &self.slides
    }

    pub fn current_slide(&self) -> usize {
        self.current
    }

    pub fn slide(&self) -> &Slide {
        &self.slides[self.current]
    }

    pub fn canvas(&self) -> CanvasTransform {
        self.slide().canvas
    }

    pub fn selection(&self) -> Option<usize> {
        self.selection
    }

    pub fn clipboard(&self) -> Option<&Object> {
        self.clipboard.as_ref()
    }

    pub fn viewport(&self) -> Viewport {
        self.viewport
    }

    pub fn pen(&self) -> &Pen {
        &self.pen
    }

    pub fn can_undo(&self) -> bool {
        !self.undo_stack.is_empty()
    }

    pub fn can_redo(&self) -> bool {
        !self.redo_stack.is_empty()
    }

    /// Bumped on every visible change, including live gesture previews.
    pub fn revision(&self) -> u64 {
        self.revision
    }

    /// Moves to slide `index` without recording history; used to set up fixtures.
    pub fn with_current_slide(mut self, index: usize) -> Self {
        self.current = index.min(self.slides.len() - 1);
        self.selection = None;
        self
    }

    /// Adds an object without recording history; used to set up fixtures.
    pub fn insert_object(&mut self, slide: usize, object: Object) {
        self.slides[slide].objects.push(object);
        self.revision += 1;
    }

    /// Topmost object on the current slide whose bounds contain `world`.
    pub fn hit_test(&self, world: Point) -> Option<usize> {
        self.slide().objects.iter().rposition(|o| o.bounds().contains(world))
    }

    pub fn execute(&mut self, command: Command) -> Result<(), Diagnostic> {
        let restore = self.perform(&command)?;
        self.undo_stack.push(Record { command, restore });
        self.redo_stack.clear();
        self.revision += 1;
        Ok(())
    }

    pub fn undo(&mut self) -> Result<(), Diagnostic> {
        let record = self.undo_stack.pop().ok_or(Diagnostic::NothingToUndo)?;
        self.revert(&record.restore);
        self.redo_stack.push(record);
        self.revision += 1;
        Ok(())
    }

    pub fn redo(&mut self) -> Result<(), Diagnostic> {
        let record = self.redo_stack.pop().ok_or(Diagnostic::NothingToRedo)?;
        // the stack discipline guarantees the pre-command state is back
        let restore = self.perform(&record.command).expect("redo replays a command that succeeded before");
        self.undo_stack.push(Record { command: record.command, restore });
        self.revision += 1;
        Ok(())
    }

    pub fn next_slide(&mut self) -> Result<(), Diagnostic> {
        self.execute(Command::NextSlide)
    }

    pub fn prev_slide(&mut self) -> Result<(), Diagnostic> {
        self.execute(Command::PrevSlide)
    }

    pub fn overview(&mut self) -> Result<(), Diagnostic> {
        self.execute(Command::Overview)
    }

    pub fn duplicate_selection(&mut self) -> Result<(), Diagnostic> {
        self.execute(Command::DuplicateSelection { offset: DUPLICATE_OFFSET })
    }

    /// Canvas transform that fits the current slide's contents into the
    /// viewport with a 5% margin on each side, centred.
    pub fn overview_transform(&self) -> CanvasTransform {
        let bounds = self.slide().objects.iter().map(Object::bounds).reduce(|a, b| a.union(&b));
        let Some(b) = bounds else { return CanvasTransform::IDENTITY };
        let usable = 1.0 - 2.0 * OVERVIEW_MARGIN;
        let sx = if b.w > 0.0 { self.viewport.w * usable / b.w } else { MAX_CANVAS_SCALE };
        let sy = if b.h > 0.0 { self.viewport.h * usable / b.h } else { MAX_CANVAS_SCALE };
        let scale = sx.min(sy).clamp(MIN_CANVAS_SCALE, MAX_CANVAS_SCALE);
        let c = b.center();
        CanvasTransform {
            scale,
            tx: self.viewport.w / 2.0 - scale * c.x,
            ty: self.viewport.h / 2.0 - scale * c.y,
        }
    }

    fn perform(&mut self, command: &Command) -> Result<Restore, Diagnostic> {
        let cur = self.current;
        match command {
            Command::AddStroke { stroke } => {
                let object = Object::Stroke(stroke.clone());
                if object.check().is_err() {
                    return Err(Diagnostic::StrokeTooShort);
                }
                self.slides[cur].objects.push(object);
                Ok(Restore::PopObject { selection: self.selection, clipboard: self.clipboard.clone() })
            }
            Command::MoveObject { target, delta } => {
                if !delta.is_finite() {
                    return Err(Diagnostic::InvalidParameter("move delta"));
                }
                let before = self.object(*target)?.clone();
                self.slides[cur].objects[*target] = before.translated(*delta);
                let selection = self.selection.replace(*target);
                Ok(Restore::Object { index: *target, object: before, selection })
            }
            Command::ScaleObject { target, factor, pivot, shift } => {
                if !(factor.is_finite() && *factor > 0.0 && pivot.is_finite() && shift.is_finite()) {
                    return Err(Diagnostic::InvalidParameter("scale factor"));
                }
                let before = self.object(*target)?.clone();
                self.slides[cur].objects[*target] = before.scaled(*factor, *pivot, *shift);
                let selection = self.selection.replace(*target);
                Ok(Restore::Object { index: *target, object: before, selection })
            }
            Command::PanCanvas { delta } => {
                if !delta.is_finite() {
                    return Err(Diagnostic::InvalidParameter("pan delta"));
                }
                let before = self.slides[cur].canvas;
                let c = &mut self.slides[cur].canvas;
                c.tx += delta.x;
                c.ty += delta.y;
                Ok(Restore::Canvas(before))
            }
            Command::ZoomCanvas { factor, pivot, shift } => {
                if !(factor.is_finite() && *factor > 0.0 && pivot.is_finite() && shift.is_finite()) {
                    return Err(Diagnostic::InvalidParameter("zoom factor"));
                }
                let before = self.slides[cur].canvas;
                self.slides[cur].canvas = before.zoomed(*factor, *pivot, *shift);
                Ok(Restore::Canvas(before))
            }
            Command::NextSlide | Command::PrevSlide => {
                let next = matches!(command, Command::NextSlide);
                let index = match (next, cur) {
                    (true, c) if c + 1 >= self.slides.len() => return Err(Diagnostic::AtLastSlide),
                    (false, 0) => return Err(Diagnostic::AtFirstSlide),
                    (true, c) => c + 1,
                    (false, c) => c - 1,
                };
                self.current = index;
                let selection = self.selection.take();
                Ok(Restore::Slide { index: cur, selection })
            }
            Command::Overview => {
                let fit = self.overview_transform();
                let before = self.slides[cur].canvas;
                if fit == before {
                    return Err(Diagnostic::OverviewUnchanged);
                }
                self.slides[cur].canvas = fit;
                Ok(Restore::Canvas(before))
            }
            Command::DuplicateSelection { offset } => {
                let index = self.selection.ok_or(Diagnostic::NoSelection)?;
                let copy = self.object(index)?.translated(*offset);
                let restore = Restore::PopObject { selection: self.selection, clipboard: self.clipboard.take() };
                self.clipboard = Some(copy.clone());
                self.slides[cur].objects.push(copy);
                self.selection = Some(self.slides[cur].objects.len() - 1);
                Ok(restore)
            }
        }
    }

    fn revert(&mut self, restore: &Restore) {
        let cur = self.current;
        match restore {
            Restore::PopObject { selection, clipboard } => {
                self.slides[cur].objects.pop();
                self.selection = *selection;
                self.clipboard = clipboard.clone();
            }
            Restore::Object { index, object, selection } => {
                self.slides[cur].objects[*index] = object.clone();
                self.selection = *selection;
            }
            Restore::Canvas(c) => self.slides[cur].canvas = *c,
            Restore::Slide { index, selection } => {
                self.current = *index;
                self.selection = *selection;
            }
        }
    }

    fn object(&self, index: usize) -> Result<&Object, Diagnostic> {
        self.slide().objects.get(index).ok_or(Diagnostic::InvalidTarget(index))
    }

    /// Applies one recognizer event. Events that cannot apply leave the
    /// document unchanged and come back as diagnostics.
    pub fn apply_gesture(&mut self, event: &GestureEvent) -> Vec<Diagnostic> {
        let result = match event {
            GestureEvent::StrokeBegin { point } => {
                self.live_stroke = Some(vec![*point]);
                Ok(())
            }
            GestureEvent::StrokePoint { point } => match &mut self.live_stroke {
                Some(points) => {
                    points.push(*point);
                    Ok(())
                }
                None => Err(Diagnostic::UnbalancedGesture("stroke point")),
            },
            GestureEvent::StrokeEnd => self.finish_stroke(),
            GestureEvent::TransformBegin { origin, mode } => {
                self.begin_transform(*origin, *mode);
                Ok(())
            }
            GestureEvent::TransformDelta { translation, scale, pivot } => {
                self.update_transform(*translation, *scale, *pivot)
            }
            GestureEvent::TransformEnd => self.finish_transform(),
            GestureEvent::UndoStep => self.undo(),
            GestureEvent::RedoStep => self.redo(),
            GestureEvent::MenuSelected { action, .. } => match action {
                MenuAction::Back => self.prev_slide(),
                MenuAction::Next => self.next_slide(),
                MenuAction::Overview => self.overview(),
                MenuAction::Copy => self.duplicate_selection(),
                MenuAction::None => Err(Diagnostic::NoActionBound),
            },
            GestureEvent::MenuShown { .. } | GestureEvent::MenuPreview { .. } | GestureEvent::MenuCancelled => Ok(()),
        };
        result.err().into_iter().collect()
    }

    /// Drops any in-flight stroke or transform, restoring the pre-gesture state.
    pub fn abort_gesture(&mut self) {
        self.live_stroke = None;
        if let Some(live) = self.live_transform.take() {
            self.restore_snapshot(&live);
            self.revision += 1;
        }
    }

    fn finish_stroke(&mut self) -> Result<(), Diagnostic> {
        let points = self.live_stroke.take().ok_or(Diagnostic::UnbalancedGesture("stroke end"))?;
        let canvas = self.canvas();
        let stroke = Stroke {
            points: points.into_iter().map(|q| canvas.to_world(q)).collect(),
            color: self.pen.color.clone(),
            width: self.pen.width,
        };
        self.execute(Command::AddStroke { stroke })
    }

    fn begin_transform(&mut self, origin: Point, mode: TransformMode) {
        let canvas = self.canvas();
        let target = match self.hit_test(canvas.to_world(origin)) {
            Some(i) => Target::Object(i),
            None => Target::Canvas,
        };
        let object = match target {
            Target::Object(i) => Some(self.slide().objects[i].clone()),
            Target::Canvas => None,
        };
        let selection = self.selection;
        if let Target::Object(i) = target {
            self.selection = Some(i);
        }
        self.live_transform = Some(LiveTransform {
            target,
            mode,
            origin,
            scale: 1.0,
            offset: Point::ZERO,
            object,
            canvas,
            selection,
        });
    }

    fn update_transform(&mut self, translation: Vector, scale: f64, pivot: Point) -> Result<(), Diagnostic> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Diagnostic::InvalidParameter("transform scale"));
        }
        let live = self.live_transform.as_mut().ok_or(Diagnostic::UnbalancedGesture("transform delta"))?;
        // q -> pivot + s (q + t - pivot), composed after the accumulated map
        live.scale *= scale;
        live.offset = live.offset * scale + translation * scale + pivot - pivot * scale;
        let live = live.clone();
        self.restore_snapshot(&live);
        if let Some(cmd) = Self::transform_command(&live) {
            self.perform(&cmd).map(|_| ())?;
        }
        self.selection = match live.target {
            Target::Object(i) => Some(i),
            Target::Canvas => live.selection,
        };
        self.revision += 1;
        Ok(())
    }

    fn finish_transform(&mut self) -> Result<(), Diagnostic> {
        let live = self.live_transform.take().ok_or(Diagnostic::UnbalancedGesture("transform end"))?;
        self.restore_snapshot(&live);
        match Self::transform_command(&live) {
            Some(cmd) => self.execute(cmd),
            None => {
                self.revision += 1;
                Ok(())
            }
        }
    }

    fn restore_snapshot(&mut self, live: &LiveTransform) {
        let cur = self.current;
        match live.target {
            Target::Object(i) => {
                if let Some(o) = &live.object {
                    self.slides[cur].objects[i] = o.clone();
                }
            }
            Target::Canvas => self.slides[cur].canvas = live.canvas,
        }
        self.selection = live.selection;
    }

    /// The single command equivalent to the accumulated gesture, or `None`
    /// when it nets out to the identity.
    fn transform_command(live: &LiveTransform) -> Option<Command> {
        if live.scale == 1.0 && live.offset == Point::ZERO {
            return None;
        }
        let canvas = live.canvas;
        // q -> S q + T  ==  q -> origin + S (q - origin) + shift
        let shift = live.offset - live.origin * (1.0 - live.scale);
        Some(match (live.target, live.mode) {
            (Target::Canvas, TransformMode::Pan) => Command::PanCanvas { delta: live.offset },
            (Target::Canvas, TransformMode::Zoom) => {
                Command::ZoomCanvas { factor: live.scale, pivot: live.origin, shift }
            }
            (Target::Object(target), TransformMode::Pan) => {
                Command::MoveObject { target, delta: live.offset / canvas.scale }
            }
            (Target::Object(target), TransformMode::Zoom) => Command::ScaleObject {
                target,
                factor: live.scale,
                pivot: canvas.to_world(live.origin),
                shift: shift / canvas.scale,
            },
        })
    }

    /// Canonical text: sorted keys, no whitespace, shortest round-trip numbers.
    /// History and in-flight gestures are not part of the document.
    pub fn serialize(&self) -> String {
        let wire = Wire {
            format: DOC_FORMAT.to_string(),
            slides: self.slides.clone(),
            current_slide: self.current,
            selection: self.selection,
            clipboard: self.clipboard.clone(),
            viewport: self.viewport,
            pen: self.pen.clone(),
        };
        serde_json::to_value(&wire).expect("document serializes").to_string()
    }

    pub fn deserialize(text: &str) -> Result<Document, DocError> {
        let wire: Wire = serde_json::from_str(text).map_err(|e| DocError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if wire.format != DOC_FORMAT {
            return Err(DocError::Invalid(format!("unknown format {:?}", wire.format)));
        }
        if wire.slides.is_empty() {
            return Err(DocError::Invalid("a document needs at least one slide".into()));
        }
        if wire.current_slide >= wire.slides.len() {
            return Err(DocError::Invalid(format!("current_slide {} out of range", wire.current_slide)));
        }
        for (si, slide) in wire.slides.iter().enumerate() {
            let c = slide.canvas;
            if !(MIN_CANVAS_SCALE..=MAX_CANVAS_SCALE).contains(&c.scale) || !c.tx.is_finite() || !c.ty.is_finite() {
                return Err(DocError::Invalid(format!("slide {si}: canvas transform out of range")));
            }
            for (oi, o) in slide.objects.iter().enumerate() {
                o.check().map_err(|m| DocError::Invalid(format!("slide {si} object {oi}: {m}")))?;
            }
        }
        if let Some(s) = wire.selection {
            if s >= wire.slides[wire.current_slide].objects.len() {
                return Err(DocError::Invalid(format!("selection {s} does not exist")));
            }
        }
        if !(wire.viewport.w > 0.0 && wire.viewport.h > 0.0) {
            return Err(DocError::Invalid("viewport must have positive size".into()));
        }
        Ok(Document {
            slides: wire.slides,
            current: wire.current_slide,
            selection: wire.selection,
            clipboard: wire.clipboard,
            viewport: wire.viewport,
            pen: wire.pen,
            ..Document::default()
        })
    }
}
