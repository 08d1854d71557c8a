//! One presenter drives a session; the audience stream only ever carries
//! scenes, never the pie menu.

use spieboard::{Document, EngineConfig, Point, RenderUpdate, Role, Session, SessionMessage, TouchEvent};

fn summary(u: &RenderUpdate) -> String {
    match u {
        RenderUpdate::Scene { slide, .. } => format!("scene(slide {slide})"),
        RenderUpdate::MenuState { visible, highlighted, .. } => format!("menu(visible={visible}, highlighted={highlighted:?})"),
        RenderUpdate::Diagnostic { text } => format!("diagnostic({text})"),
    }
}

fn main() -> anyhow::Result<()> {
    let mut session = Session::new(EngineConfig::default(), Document::new(3, spieboard::doc::Viewport { w: 1920.0, h: 1080.0 }))?;

    // three fingers swiping right: "Next"
    let tips = [Point::new(900.0, 500.0), Point::new(960.0, 470.0), Point::new(1020.0, 500.0)];
    let mut frames: Vec<SessionMessage> = Vec::new();
    for (i, p) in tips.iter().enumerate() {
        frames.push(SessionMessage::Touch(TouchEvent::down(i as u64 * 5, i as u32 + 1, p.x, p.y)));
    }
    for k in 1..=8u64 {
        for (i, p) in tips.iter().enumerate() {
            frames.push(SessionMessage::Touch(TouchEvent::moved(20 + 16 * k, i as u32 + 1, p.x + 10.0 * k as f64, p.y)));
        }
    }
    for (i, p) in tips.iter().enumerate() {
        frames.push(SessionMessage::Touch(TouchEvent::up(180, i as u32 + 1, p.x + 80.0, p.y)));
    }

    let (mut presenter, mut audience) = (Vec::new(), Vec::new());
    for f in frames {
        let text = serde_json::to_string(&f)?;
        let out = session.handle_text(&text);
        presenter.extend(out.for_role(Role::Presenter).iter().map(summary));
        audience.extend(out.for_role(Role::Audience).iter().map(summary));
    }
    presenter.dedup();
    println!("presenter: {}", presenter.join(" -> "));
    println!("audience:  {}", audience.join(" -> "));

    let bad = session.handle_text(r#"{"type":"touch","t":0,"id":4,"ph":"m","x":1,"y":1}"#);
    println!("bad frame -> presenter {:?}, audience {:?}", bad.presenter.iter().map(summary).collect::<Vec<_>>(), bad.audience);
    Ok(())
}
