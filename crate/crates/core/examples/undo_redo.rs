//! Three strokes, then a counter-clockwise three-finger twist undoes two of
//! them and a clockwise twist brings one back.

use spieboard::gesture::outcome_labels;
use spieboard::{Document, EngineConfig, GestureEngine, Point, TouchEvent};

fn stroke(t0: u64, y: f64) -> Vec<TouchEvent> {
    let mut ev = vec![TouchEvent::down(t0, 1, 100.0, y)];
    for k in 1..=10u64 {
        ev.push(TouchEvent::moved(t0 + 16 * k, 1, 100.0 + 20.0 * k as f64, y));
    }
    ev.push(TouchEvent::up(t0 + 180, 1, 300.0, y));
    ev
}

/// Rigid rotation by `deg` (positive is clockwise on screen).
fn twist(t0: u64, deg: f64) -> Vec<TouchEvent> {
    let c = Point::new(960.0, 500.0);
    let tips = [Point::new(-60.0, 10.0), Point::new(0.0, -20.0), Point::new(60.0, 10.0)];
    let at = |p: Point, d: f64| c + p.rotate(-d);
    let mut ev: Vec<TouchEvent> = tips.iter().enumerate().map(|(i, p)| TouchEvent::down(t0 + i as u64 * 4, i as u32 + 1, c.x + p.x, c.y + p.y)).collect();
    let frames = 30u64;
    for k in 1..=frames {
        for (i, p) in tips.iter().enumerate() {
            let q = at(*p, deg * k as f64 / frames as f64);
            ev.push(TouchEvent::moved(t0 + 16 * k, i as u32 + 1, q.x, q.y));
        }
    }
    for (i, p) in tips.iter().enumerate() {
        let q = at(*p, deg);
        ev.push(TouchEvent::up(t0 + 16 * frames + 16, i as u32 + 1, q.x, q.y));
    }
    ev
}

fn main() -> anyhow::Result<()> {
    let mut doc = Document::default();
    let mut engine = GestureEngine::new(EngineConfig::default())?;
    let script = [
        ("stroke", stroke(0, 100.0)),
        ("stroke", stroke(1000, 200.0)),
        ("stroke", stroke(2000, 300.0)),
        ("twist -70", twist(3000, -70.0)),
        ("twist +40", twist(4000, 40.0)),
        ("twist -10", twist(5000, -10.0)),
    ];
    for (name, events) in script {
        let gestures = engine.feed(&events)?;
        let diags: Vec<String> = gestures.iter().flat_map(|g| doc.apply_gesture(g)).map(|d| d.to_string()).collect();
        println!(
            "{name:<10} {:<40} strokes on slide: {}  {}",
            format!("{:?}", outcome_labels(&gestures)),
            doc.slide().objects.len(),
            diags.join("; ")
        );
    }
    Ok(())
}
