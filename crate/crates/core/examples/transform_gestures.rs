//! Two-finger pan and pinch on an image and on the empty canvas.

use spieboard::doc::{Image, Viewport};
use spieboard::geom::Rect;
use spieboard::{Document, EngineConfig, GestureEngine, Object, Point, TouchEvent};

/// Two contacts moving from `a0, b0` to `a1, b1` in `frames` steps.
fn two_finger(a0: Point, b0: Point, a1: Point, b1: Point, frames: u64) -> Vec<TouchEvent> {
    let mut ev = vec![TouchEvent::down(0, 1, a0.x, a0.y), TouchEvent::down(6, 2, b0.x, b0.y)];
    for k in 1..=frames {
        let s = k as f64 / frames as f64;
        let (a, b) = (a0 + (a1 - a0) * s, b0 + (b1 - b0) * s);
        ev.push(TouchEvent::moved(10 + 16 * k, 1, a.x, a.y));
        ev.push(TouchEvent::moved(10 + 16 * k, 2, b.x, b.y));
    }
    let t = 26 + 16 * frames;
    ev.push(TouchEvent::up(t, 1, a1.x, a1.y));
    ev.push(TouchEvent::up(t, 2, b1.x, b1.y));
    ev
}

fn run(doc: &mut Document, label: &str, events: &[TouchEvent]) -> anyhow::Result<()> {
    let mut engine = GestureEngine::new(EngineConfig::default())?;
    for g in engine.feed(events)? {
        for d in doc.apply_gesture(&g) {
            println!("  diagnostic: {d}");
        }
    }
    let Object::Image(img) = &doc.slide().objects[0] else { unreachable!() };
    let c = doc.canvas();
    println!("{label:<14} image {:?}  canvas scale {:.3} t=({:.1}, {:.1})", img.rect, c.scale, c.tx, c.ty);
    Ok(())
}

fn main() -> anyhow::Result<()> {
    let mut doc = Document::new(1, Viewport { w: 1920.0, h: 1080.0 });
    doc.insert_object(0, Object::Image(Image { rect: Rect::new(700.0, 400.0, 400.0, 300.0), resource: "photo.png".into() }));
    let p = Point::new;

    run(&mut doc, "pan image", &two_finger(p(850.0, 550.0), p(950.0, 550.0), p(950.0, 500.0), p(1050.0, 500.0), 30))?;
    run(&mut doc, "pinch image", &two_finger(p(950.0, 500.0), p(1050.0, 500.0), p(900.0, 500.0), p(1100.0, 500.0), 30))?;
    run(&mut doc, "pan canvas", &two_finger(p(200.0, 900.0), p(300.0, 900.0), p(120.0, 900.0), p(220.0, 900.0), 30))?;
    run(&mut doc, "zoom canvas", &two_finger(p(300.0, 200.0), p(400.0, 200.0), p(250.0, 200.0), p(450.0, 200.0), 30))?;

    for _ in 0..4 {
        doc.undo().map_err(|d| anyhow::anyhow!("{d}"))?;
    }
    run(&mut doc, "after 4 undos", &[])?;
    Ok(())
}
