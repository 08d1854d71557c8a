//! Starts the WebSocket host on a free port, connects a presenter and an
//! audience client, performs a three-finger "Next" swipe and prints what each
//! side received.
//!
//!     cargo run --example live_server

use std::time::Duration;

use futures::{SinkExt, StreamExt};
use spieboard::server::{router, Hub};
use spieboard::{Document, EngineConfig, Session, SessionMessage, TouchEvent};
use tokio_tungstenite::connect_async;
use tokio_tungstenite::tungstenite::Message;

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    let session = Session::new(EngineConfig::default(), Document::new(2, spieboard::doc::Viewport { w: 1920.0, h: 1080.0 }))?;
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await?;
    let addr = listener.local_addr()?;
    tokio::spawn(async move { axum::serve(listener, router(Hub::new(session))).await });
    println!("serving ws://{addr}/ws");

    let (mut presenter, _) = connect_async(format!("ws://{addr}/ws?role=presenter")).await?;
    let (mut audience, _) = connect_async(format!("ws://{addr}/ws?role=audience")).await?;

    let xs = [900.0, 960.0, 1020.0];
    let mut frames = Vec::new();
    for (i, x) in xs.iter().enumerate() {
        frames.push(TouchEvent::down(i as u64 * 5, i as u32 + 1, *x, 500.0));
    }
    for k in 1..=8u64 {
        for (i, x) in xs.iter().enumerate() {
            frames.push(TouchEvent::moved(20 + 16 * k, i as u32 + 1, x + 10.0 * k as f64, 500.0));
        }
    }
    for (i, x) in xs.iter().enumerate() {
        frames.push(TouchEvent::up(180, i as u32 + 1, x + 80.0, 500.0));
    }
    for e in frames {
        presenter.send(Message::Text(serde_json::to_string(&SessionMessage::Touch(e))?)).await?;
    }

    for (name, ws) in [("presenter", &mut presenter), ("audience", &mut audience)] {
        let mut kinds = Vec::new();
        while let Ok(Some(Ok(Message::Text(t)))) = tokio::time::timeout(Duration::from_millis(300), ws.next()).await {
            let v: serde_json::Value = serde_json::from_str(&t)?;
            kinds.push(format!("{}{}", v["type"].as_str().unwrap_or("?"), v.get("slide").map(|s| format!("({s})")).unwrap_or_default()));
        }
        kinds.dedup();
        println!("{name:<9} received: {}", kinds.join(", "));
    }
    Ok(())
}
