//! Replays a touch trace file and prints what the recognizer saw.
//!
//!     cargo run --example stroke_replay -- [trace.jsonl] [doc.json]

use spieboard::gesture::outcome_labels;
use spieboard::{parse_trace, replay, Document, EngineConfig, GestureEvent};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let trace_path = args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/tests/corpus/stroke_basic.jsonl").into());
    let doc = match args.next() {
        Some(p) => Document::deserialize(&std::fs::read_to_string(p)?)?,
        None => Document::default(),
    };

    let trace = parse_trace(&std::fs::read_to_string(&trace_path)?)?;
    println!("{trace_path}: {} events on a {}x{} screen", trace.events.len(), trace.screen_width, trace.screen_height);

    let r = replay(&trace, &EngineConfig::default(), doc)?;
    let points = r.gestures.iter().filter(|g| matches!(g, GestureEvent::StrokePoint { .. })).count();
    println!("outcomes: {:?} ({points} stroke points)", outcome_labels(&r.gestures));
    for d in &r.diagnostics {
        println!("diagnostic: {d}");
    }
    println!("{}", r.document);
    Ok(())
}
