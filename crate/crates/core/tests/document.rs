mod common;

use proptest::prelude::*;
use spieboard::doc::{DocError, Image, Stroke, Viewport, MAX_CANVAS_SCALE, MIN_CANVAS_SCALE};
use spieboard::geom::Rect;
use spieboard::{Command, Diagnostic, Document, GestureEvent, Object, Point, TransformMode};

fn fixture(name: &str) -> String {
    std::fs::read_to_string(common::tests_dir().join("fixtures").join(name)).unwrap()
}

#[test]
fn empty_document_matches_golden_file() {
    assert_eq!(Document::default().serialize(), fixture("empty_doc.json").trim_end());
}

#[test]
fn pretty_fixture_loads_and_canonicalizes() {
    let doc = Document::deserialize(&fixture("one_stroke.json")).unwrap();
    assert_eq!(doc.selection(), Some(0));
    assert_eq!(doc.canvas().scale, 2.0);
    assert_eq!(doc.viewport(), Viewport { w: 1280.0, h: 720.0 });
    let Object::Stroke(s) = &doc.slide().objects[0] else { panic!() };
    assert_eq!(s.points.len(), 3);
    let text = doc.serialize();
    assert!(!text.contains(' ') && !text.contains('\n'));
    // keys come out sorted
    assert!(text.starts_with(r#"{"clipboard":null,"current_slide":0,"format":"spieboard-doc/1","pen":"#), "{text}");
    assert_eq!(Document::deserialize(&text).unwrap().serialize(), text);
}

#[test]
fn parse_errors_carry_a_position() {
    match Document::deserialize("{\n  \"format\": ") {
        Err(DocError::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
    let unknown = fixture("one_stroke.json").replacen("\"clipboard\"", "\"bogus\": 1, \"clipboard\"", 1);
    assert!(matches!(Document::deserialize(&unknown), Err(DocError::Parse { .. })));
    let bad_slide = fixture("one_stroke.json").replace("\"current_slide\": 0", "\"current_slide\": 4");
    assert!(matches!(Document::deserialize(&bad_slide), Err(DocError::Invalid(_))));
}

#[test]
fn stroke_is_stored_in_world_coordinates() {
    let mut doc = Document::deserialize(&fixture("one_stroke.json")).unwrap();
    for g in [
        GestureEvent::StrokeBegin { point: Point::new(110.0, 95.0) },
        GestureEvent::StrokePoint { point: Point::new(130.0, 95.0) },
        GestureEvent::StrokeEnd,
    ] {
        assert!(doc.apply_gesture(&g).is_empty());
    }
    let Object::Stroke(s) = doc.slide().objects.last().unwrap() else { panic!() };
    assert_eq!(s.points, vec![Point::new(50.0, 50.0), Point::new(60.0, 50.0)]);
}

#[test]
fn live_transform_commits_as_one_command() {
    let mut doc = Document::default();
    doc.insert_object(0, Object::Image(Image { rect: Rect::new(100.0, 100.0, 200.0, 100.0), resource: "a.png".into() }));
    let before = doc.serialize();
    let seq = [
        GestureEvent::TransformBegin { origin: Point::new(200.0, 150.0), mode: TransformMode::Pan },
        GestureEvent::TransformDelta { translation: Point::new(10.0, 0.0), scale: 1.0, pivot: Point::new(210.0, 150.0) },
        GestureEvent::TransformDelta { translation: Point::new(5.0, 5.0), scale: 1.0, pivot: Point::new(215.0, 155.0) },
    ];
    for g in &seq {
        assert!(doc.apply_gesture(g).is_empty());
    }
    let Object::Image(i) = &doc.slide().objects[0] else { panic!() };
    assert_eq!(i.rect, Rect::new(115.0, 105.0, 200.0, 100.0));
    assert!(doc.apply_gesture(&GestureEvent::TransformEnd).is_empty());
    assert!(doc.undo().is_ok());
    assert_eq!(doc.serialize(), before);
    assert_eq!(doc.undo(), Err(Diagnostic::NothingToUndo));
}

#[test]
fn overview_fits_contents_inside_the_viewport() {
    let mut doc = Document::default();
    doc.insert_object(0, Object::Image(Image { rect: Rect::new(-3000.0, 200.0, 500.0, 400.0), resource: "x".into() }));
    doc.insert_object(0, Object::Image(Image { rect: Rect::new(4000.0, 5000.0, 100.0, 100.0), resource: "y".into() }));
    doc.overview().unwrap();
    let c = doc.canvas();
    for o in &doc.slide().objects {
        let b = o.bounds();
        for p in [Point::new(b.x, b.y), Point::new(b.x + b.w, b.y + b.h)] {
            let q = c.to_screen(p);
            assert!(q.x >= 0.0 && q.x <= 1920.0 && q.y >= 0.0 && q.y <= 1080.0, "{q:?}");
        }
    }
    assert_eq!(doc.overview(), Err(Diagnostic::OverviewUnchanged));
}

#[test]
fn copy_needs_a_selection() {
    let mut doc = Document::default();
    assert_eq!(doc.duplicate_selection(), Err(Diagnostic::NoSelection));
}

fn point() -> impl Strategy<Value = Point> {
    (-500.0..2500.0f64, -500.0..1500.0f64).prop_map(|(x, y)| Point::new(x, y))
}

#[derive(Debug, Clone)]
enum Op {
    Do(Command),
    Undo,
    Redo,
}

fn command() -> impl Strategy<Value = Command> {
    prop_oneof![
        prop::collection::vec(point(), 1..6).prop_map(|points| Command::AddStroke {
            stroke: Stroke { points, color: "#123456".into(), width: 3.0 }
        }),
        (0usize..6, point()).prop_map(|(target, delta)| Command::MoveObject { target, delta }),
        (0usize..6, 0.2..5.0f64, point(), point())
            .prop_map(|(target, factor, pivot, shift)| Command::ScaleObject { target, factor, pivot, shift }),
        point().prop_map(|delta| Command::PanCanvas { delta }),
        (0.01..100.0f64, point(), point()).prop_map(|(factor, pivot, shift)| Command::ZoomCanvas { factor, pivot, shift }),
        Just(Command::NextSlide),
        Just(Command::PrevSlide),
        Just(Command::Overview),
        point().prop_map(|offset| Command::DuplicateSelection { offset }),
    ]
}

fn ops() -> impl Strategy<Value = Vec<Op>> {
    prop::collection::vec(
        prop_oneof![6 => command().prop_map(Op::Do), 2 => Just(Op::Undo), 1 => Just(Op::Redo)],
        0..=50,
    )
}

fn seeded() -> Document {
    let mut doc = Document::new(3, Viewport { w: 1920.0, h: 1080.0 });
    doc.insert_object(0, Object::Image(Image { rect: Rect::new(10.0, 10.0, 100.0, 80.0), resource: "p.png".into() }));
    doc
}

/// Runs `ops`, returning the serialization before each successful change.
fn run(doc: &mut Document, ops: &[Op]) {
    for op in ops {
        let before = doc.serialize();
        let r = match op {
            Op::Do(c) => doc.execute(c.clone()),
            Op::Undo => doc.undo(),
            Op::Redo => doc.redo(),
        };
        if r.is_err() {
            assert_eq!(doc.serialize(), before, "failed {op:?} changed the document");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn undo_all_restores_the_initial_bytes(ops in ops()) {
        let mut doc = seeded();
        let initial = doc.serialize();
        run(&mut doc, &ops);
        let end = doc.serialize();
        let mut undone = 0;
        while doc.undo().is_ok() {
            undone += 1;
        }
        prop_assert_eq!(doc.serialize(), initial);
        for _ in 0..undone {
            doc.redo().unwrap();
        }
        prop_assert_eq!(doc.serialize(), end);
    }

    #[test]
    fn each_undo_reverts_exactly_one_step(ops in ops(), extra in command()) {
        let mut doc = seeded();
        run(&mut doc, &ops);
        let before = doc.serialize();
        if doc.execute(extra).is_ok() {
            let after = doc.serialize();
            doc.undo().unwrap();
            prop_assert_eq!(doc.serialize(), before);
            doc.redo().unwrap();
            prop_assert_eq!(doc.serialize(), after);
        }
    }

    #[test]
    fn serialization_round_trips(ops in ops()) {
        let mut doc = seeded();
        run(&mut doc, &ops);
        let text = doc.serialize();
        prop_assert_eq!(Document::deserialize(&text).unwrap().serialize(), text);
    }

    #[test]
    fn canvas_scale_stays_clamped(ops in ops()) {
        let mut doc = seeded();
        run(&mut doc, &ops);
        for s in doc.slides() {
            prop_assert!((MIN_CANVAS_SCALE..=MAX_CANVAS_SCALE).contains(&s.canvas.scale));
        }
    }
}
