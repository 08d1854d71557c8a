mod common;

use common::*;
use spieboard::doc::Image;
use spieboard::geom::Rect;
use spieboard::session::Outbound;
use spieboard::{replay, Document, EngineConfig, Object, RenderUpdate, Role, Session, SessionMessage};

fn live(file: &str) -> (Session, Vec<Outbound>) {
    let mut s = Session::new(EngineConfig::default(), initial_doc()).unwrap();
    let outs = corpus_trace(file)
        .events
        .iter()
        .map(|e| s.handle_text(&serde_json::to_string(&SessionMessage::Touch(*e)).unwrap()))
        .collect();
    (s, outs)
}

#[test]
fn audience_never_sees_menu_state_or_diagnostics() {
    for entry in manifest() {
        let (_, outs) = live(&entry.file);
        for o in &outs {
            for u in o.for_role(Role::Audience) {
                assert!(matches!(u, RenderUpdate::Scene { .. }), "{}: {u:?}", entry.file);
            }
        }
        if entry.file.starts_with("menu") {
            assert!(outs.iter().flat_map(|o| o.for_role(Role::Presenter)).any(RenderUpdate::is_visible_menu));
        }
    }
}

#[test]
fn live_session_matches_offline_replay() {
    for entry in manifest() {
        let (s, outs) = live(&entry.file);
        let r = replay(&corpus_trace(&entry.file), &EngineConfig::default(), initial_doc()).unwrap();
        assert_eq!(s.document().serialize(), r.document, "{}", entry.file);
        let gestures: Vec<_> = outs.into_iter().flat_map(|o| o.gestures).collect();
        assert_eq!(gestures, r.gestures);
    }
}

#[test]
fn menu_back_goes_to_previous_slide() {
    assert_eq!(initial_doc().current_slide(), 1);
    let (s, _) = live("menu_back.jsonl");
    assert_eq!(s.document().current_slide(), 0);
    let (s, _) = live("menu_next.jsonl");
    assert_eq!(s.document().current_slide(), 2);
}

#[test]
fn zoom_on_image_scales_about_the_finger_centroid() {
    let (s, _) = live("zoom_object.jsonl");
    let Object::Image(Image { rect, .. }) = &s.document().slide().objects[0] else { panic!() };
    // 400x300 at (760, 340) scaled 1.6 about (960, 490)
    let expected = Rect::new(960.0 - 320.0, 490.0 - 240.0, 640.0, 480.0);
    for (a, b) in [(rect.x, expected.x), (rect.y, expected.y), (rect.w, expected.w), (rect.h, expected.h)] {
        assert!((a - b).abs() < 1e-9, "{rect:?}");
    }
}

#[test]
fn pan_on_image_moves_only_the_image() {
    let (s, _) = live("pan_object.jsonl");
    let doc = s.document();
    let Object::Image(Image { rect, .. }) = &doc.slide().objects[0] else { panic!() };
    assert!((rect.x - 910.0).abs() < 1e-9 && (rect.y - 400.0).abs() < 1e-9, "{rect:?}");
    assert_eq!(doc.canvas(), initial_doc().canvas());
    assert_eq!(doc.selection(), Some(0));
}

#[test]
fn rotation_undoes_the_preceding_stroke() {
    let (s, _) = live("rotate_after_stroke.jsonl");
    assert_eq!(s.document().serialize(), initial_doc().serialize());
}

#[test]
fn copy_duplicates_the_selected_object() {
    let (s, _) = live("menu_copy.jsonl");
    let doc = s.document();
    assert_eq!(doc.slide().objects.len(), 3);
    assert_eq!(doc.selection(), Some(2));
    assert_eq!(doc.clipboard(), Some(&doc.slide().objects[2]));
}

#[test]
fn malformed_and_rejected_messages_only_reach_the_presenter() {
    let mut s = Session::new(EngineConfig::default(), initial_doc()).unwrap();
    let before = s.document().serialize();
    for text in [
        "not json",
        r#"{"type":"touch","t":0,"id":1,"ph":"m","x":0,"y":0}"#,
        r#"{"type":"load_document","text":"{}"}"#,
        r#"{"type":"set_config","settle_window":0}"#,
        r#"{"type":"warp"}"#,
    ] {
        let out = s.handle_text(text);
        assert!(out.audience.is_empty(), "{text}");
        assert!(matches!(out.presenter.as_slice(), [RenderUpdate::Diagnostic { .. }]), "{text}: {out:?}");
    }
    assert_eq!(s.document().serialize(), before);
}

#[test]
fn load_document_resyncs_both_roles() {
    let mut s = Session::new(EngineConfig::default(), initial_doc()).unwrap();
    let text = Document::default().serialize();
    let out = s.handle_message(SessionMessage::LoadDocument { text: text.clone() });
    assert_eq!(out.presenter, out.audience);
    assert!(matches!(&out.audience[0], RenderUpdate::Scene { document, .. } if *document == text));
}

#[test]
fn view_request_answers_with_the_role_view() {
    let mut s = Session::new(EngineConfig::default(), initial_doc()).unwrap();
    let out = s.handle_message(SessionMessage::ViewRequest { role: Role::Audience });
    assert!(out.presenter.is_empty());
    assert_eq!(out.audience, vec![s.scene()]);
}

#[test]
fn invalid_trace_is_rejected_before_replay() {
    let mut t = corpus_trace("stroke_basic.jsonl");
    t.events.remove(0);
    assert!(replay(&t, &EngineConfig::default(), initial_doc()).is_err());
}

#[test]
fn set_config_frame_is_the_flattened_config() {
    let mut s = Session::new(EngineConfig::default(), initial_doc()).unwrap();
    let out = s.handle_text(r#"{"type":"set_config","rotation_step":45.0,"undo_counter_clockwise":false}"#);
    assert!(out.presenter.iter().all(|u| !matches!(u, RenderUpdate::Diagnostic { .. })), "{out:?}");
    assert_eq!(s.engine().config().rotation_step, 45.0);
    assert!(!s.engine().config().undo_counter_clockwise);
    let out = s.handle_text(r#"{"type":"set_config","settle_window":0}"#);
    assert!(matches!(&out.presenter[..], [RenderUpdate::Diagnostic { text }] if text.starts_with("config rejected")), "{out:?}");
}
