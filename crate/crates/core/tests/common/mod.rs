#![allow(dead_code)]

use std::path::PathBuf;

use serde::Deserialize;
use spieboard::{parse_trace, Document, Point, TouchEvent, TouchTrace};

pub fn tests_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests")
}

#[derive(Debug, Deserialize)]
pub struct CorpusEntry {
    pub file: String,
    pub expect: Vec<String>,
}

pub fn manifest() -> Vec<CorpusEntry> {
    let text = std::fs::read_to_string(tests_dir().join("corpus/manifest.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

pub fn corpus_trace(file: &str) -> TouchTrace {
    let text = std::fs::read_to_string(tests_dir().join("corpus").join(file)).unwrap();
    parse_trace(&text).unwrap_or_else(|e| panic!("{file}: {e}"))
}

pub fn corpus_raw(file: &str) -> String {
    std::fs::read_to_string(tests_dir().join("corpus").join(file)).unwrap()
}

pub fn initial_doc() -> Document {
    let text = std::fs::read_to_string(tests_dir().join("corpus/initial.json")).unwrap();
    Document::deserialize(&text).unwrap()
}

pub fn trace(events: Vec<TouchEvent>) -> TouchTrace {
    TouchTrace::new(1920, 1080, events)
}

/// Three contacts placed at `start`, turned rigidly by `total_deg` (raw
/// screen degrees, positive clockwise) about their centroid in `frames` steps.
pub fn rigid_rotation(start: [Point; 3], total_deg: f64, frames: usize) -> Vec<TouchEvent> {
    let c = Point::new((start[0].x + start[1].x + start[2].x) / 3.0, (start[0].y + start[1].y + start[2].y) / 3.0);
    let at = |p: Point, deg: f64| {
        let (s, co) = deg.to_radians().sin_cos();
        let r = p - c;
        Point::new(c.x + r.x * co - r.y * s, c.y + r.x * s + r.y * co)
    };
    let mut ev = Vec::new();
    for (i, p) in start.iter().enumerate() {
        ev.push(TouchEvent::down(i as u64 * 5, i as u32 + 1, p.x, p.y));
    }
    let mut t = 20;
    for f in 1..=frames {
        t += 16;
        let deg = total_deg * f as f64 / frames as f64;
        for (i, p) in start.iter().enumerate() {
            let q = at(*p, deg);
            ev.push(TouchEvent::moved(t, i as u32 + 1, q.x, q.y));
        }
    }
    t += 16;
    for (i, p) in start.iter().enumerate() {
        let q = at(*p, total_deg);
        ev.push(TouchEvent::up(t, i as u32 + 1, q.x, q.y));
    }
    ev
}

/// Three contacts translated together by `d` in `frames` steps.
pub fn three_finger_swipe(start: [Point; 3], d: Point, frames: usize) -> Vec<TouchEvent> {
    let mut ev = Vec::new();
    for (i, p) in start.iter().enumerate() {
        ev.push(TouchEvent::down(i as u64 * 5, i as u32 + 1, p.x, p.y));
    }
    let mut t = 20;
    for f in 1..=frames {
        t += 16;
        let k = f as f64 / frames as f64;
        for (i, p) in start.iter().enumerate() {
            ev.push(TouchEvent::moved(t, i as u32 + 1, p.x + d.x * k, p.y + d.y * k));
        }
    }
    t += 16;
    for (i, p) in start.iter().enumerate() {
        ev.push(TouchEvent::up(t, i as u32 + 1, p.x + d.x, p.y + d.y));
    }
    ev
}

pub const HAND: [Point; 3] = [Point { x: 900.0, y: 500.0 }, Point { x: 960.0, y: 470.0 }, Point { x: 1020.0, y: 500.0 }];

/// Turns arbitrary (op, id, x, y, dt) tuples into a legal touch stream:
/// ops on an inactive id become downs, downs on an active id become moves.
pub fn legalize(raw: &[(u8, u8, f64, f64, u8)]) -> Vec<TouchEvent> {
    let mut active = std::collections::BTreeSet::new();
    let mut t = 0u64;
    let mut out = Vec::new();
    for &(op, id, x, y, dt) in raw {
        t += dt as u64;
        let id = id as u32;
        let e = if !active.contains(&id) {
            active.insert(id);
            TouchEvent::down(t, id, x, y)
        } else if op % 3 == 2 {
            active.remove(&id);
            TouchEvent::up(t, id, x, y)
        } else {
            TouchEvent::moved(t, id, x, y)
        };
        out.push(e);
    }
    out
}

/// Lifts every contact still down at the end of `events`.
pub fn close_all(events: &mut Vec<TouchEvent>) {
    let mut last = std::collections::BTreeMap::new();
    for e in events.iter() {
        match e.phase {
            spieboard::Phase::Up => {
                last.remove(&e.contact_id);
            }
            _ => {
                last.insert(e.contact_id, *e);
            }
        }
    }
    let t = events.last().map_or(0, |e| e.t + 1);
    for (id, e) in last {
        events.push(TouchEvent::up(t, id, e.x, e.y));
    }
}
