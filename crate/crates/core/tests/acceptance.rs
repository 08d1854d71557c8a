//! One line per acceptance criterion. Run with `cargo test --test acceptance`.

mod common;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spieboard::doc::{Image, Stroke, Viewport};
use spieboard::experiment::exp1::{
    analytic_success, fit_noise_params, simulate_exp1, FitOptions, NoiseModel, Observation, OBSERVED_RATES,
};
use spieboard::experiment::gaze::{gaze_movement_rate, synthesize, GazeSample, GazeTrace, ScreenGeometry, SyntheticViewing};
use spieboard::experiment::stats::paired_t_test;
use spieboard::geom::{normalize_deg, Rect};
use spieboard::gesture::outcome_labels;
use spieboard::menu::{estimate_palm_pose, map_direction, PieMenuConfig};
use spieboard::{replay, Command, Document, EngineConfig, Object, Point, RenderUpdate, Role, Session, SessionMessage, TouchEvent};

struct Report {
    failed: Vec<&'static str>,
}

impl Report {
    fn line(&mut self, name: &'static str, pass: bool, detail: String) {
        println!("[{}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
        if !pass {
            self.failed.push(name);
        }
    }
}

fn exp1_fit(r: &mut Report) {
    let start = Instant::now();
    let obs: Vec<Observation> = OBSERVED_RATES.iter().map(|&(n, rate)| Observation { n_items: n, rate }).collect();
    let fit = fit_noise_params(&obs, &FitOptions::default()).unwrap();
    let worst_fit = fit.residuals.iter().map(|res| res.error().abs()).fold(0.0, f64::max);
    let mut worst_sim = 0.0f64;
    for &(n, _) in &OBSERVED_RATES {
        let sim = simulate_exp1(&fit.model, n, 100_000, 20_240_501);
        worst_sim = worst_sim.max((sim.rate() - analytic_success(&fit.model, n)).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    r.line(
        "exp1 fit",
        worst_fit <= 0.03 && worst_sim <= 0.005 && secs < 10.0,
        format!(
            "sigma={:.3} lapse={:.4}; max |fit-observed|={:.2} pts (<=3.0); max |sim-analytic|={:.3} pts (<=0.5); {secs:.2}s (<10)",
            fit.model.sigma,
            fit.model.lapse,
            worst_fit * 100.0,
            worst_sim * 100.0
        ),
    );
}

/// Strict decrease wherever the comparison is resolvable: analytic values
/// below 1 in f64, simulated gaps beyond six standard errors. Elsewhere only
/// an inversion larger than the noise counts as a violation.
fn monotonicity(r: &mut Report) {
    let trials = 20_000u64;
    let (mut violations, mut saturated, mut cells) = (0, 0, 0);
    let mut first_bad = String::new();
    for sigma in (1..=30).map(f64::from) {
        for lapse in [0.0, 0.01, 0.025, 0.05] {
            cells += 1;
            let m = NoiseModel::new(sigma, lapse).unwrap();
            let a: Vec<f64> = [2, 4, 8, 16].iter().map(|&n| analytic_success(&m, n)).collect();
            let s: Vec<f64> = [2, 4, 8, 16].iter().map(|&n| simulate_exp1(&m, n, trials, 99).rate()).collect();
            for k in 0..3 {
                let tie = a[k] == 1.0 && a[k + 1] == 1.0;
                if tie {
                    saturated += 1;
                }
                let analytic_ok = a[k] > a[k + 1] || tie;
                let se = ((a[k] * (1.0 - a[k]) + a[k + 1] * (1.0 - a[k + 1])) / trials as f64).sqrt();
                let sim_ok = if a[k] - a[k + 1] > 6.0 * se { s[k] > s[k + 1] } else { s[k] >= s[k + 1] - 6.0 * se };
                if !(analytic_ok && sim_ok) {
                    violations += 1;
                    if first_bad.is_empty() {
                        first_bad = format!("; first at sigma={sigma} lapse={lapse} pair {k}");
                    }
                }
            }
        }
    }
    r.line(
        "monotonicity",
        violations == 0,
        format!(
            "{cells} (sigma, lapse) cells x 3 adjacent N pairs, {violations} violations; {saturated} pairs tie at exactly 1.0 (lapse=0, small sigma) and are not resolvable in f64 or by sampling{first_bad}"
        ),
    );
}

fn oracle_sector(a10: i64, n: usize) -> usize {
    let w10 = 3600 / n as i64;
    let mut best = (0usize, i64::MAX);
    for i in 0..n {
        let c10 = (900 - i as i64 * w10).rem_euclid(3600);
        let d = (a10 - c10).rem_euclid(3600);
        let dist = d.min(3600 - d);
        if dist < best.1 || (dist == best.1 && d == 3600 - w10 / 2) {
            best = (i, dist);
        }
    }
    best.0
}

fn sector_oracle(r: &mut Report) {
    let mut mismatches = 0;
    for n in [2usize, 4, 8, 16] {
        let cfg = PieMenuConfig::evenly_spaced(n);
        mismatches += (0..3600).filter(|&a10| map_direction(a10 as f64 / 10.0, &cfg) != oracle_sector(a10, n)).count();
    }
    r.line("sector oracle", mismatches == 0, format!("3600 angles x N in {{2,4,8,16}}, {mismatches} mismatches"));
}

fn golden_corpus(r: &mut Report) {
    let cfg = EngineConfig::default();
    let manifest = common::manifest();
    let (mut correct, mut identical) = (0, 0);
    let mut wrong = Vec::new();
    for e in &manifest {
        let t = common::corpus_trace(&e.file);
        let a = replay(&t, &cfg, common::initial_doc()).unwrap();
        let b = replay(&t, &cfg, common::initial_doc()).unwrap();
        if outcome_labels(&a.gestures) == e.expect {
            correct += 1;
        } else {
            wrong.push(e.file.clone());
        }
        if a.document == b.document {
            identical += 1;
        }
    }
    let families = ["stroke", "pan", "zoom", "rotate", "menu"]
        .iter()
        .map(|f| manifest.iter().filter(|e| e.file.starts_with(f)).count())
        .min()
        .unwrap_or(0);
    let n = manifest.len();
    r.line(
        "golden corpus",
        n >= 25 && families >= 5 && correct == n && identical == n,
        format!("{n} traces (>=5 per family: {}), {correct}/{n} classified, {identical}/{n} byte-equal replays {wrong:?}", families >= 5),
    );
}

fn random_command(rng: &mut ChaCha8Rng) -> Command {
    let pt = |rng: &mut ChaCha8Rng| Point::new(rng.gen_range(-500.0..2500.0), rng.gen_range(-500.0..1500.0));
    match rng.gen_range(0..9) {
        0 => {
            let k = rng.gen_range(1..6);
            let points = (0..k).map(|_| pt(rng)).collect();
            Command::AddStroke { stroke: Stroke { points, color: "#336699".into(), width: 2.5 } }
        }
        1 => Command::MoveObject { target: rng.gen_range(0..5), delta: pt(rng) },
        2 => Command::ScaleObject { target: rng.gen_range(0..5), factor: rng.gen_range(0.2..5.0), pivot: pt(rng), shift: pt(rng) },
        3 => Command::PanCanvas { delta: pt(rng) },
        4 => Command::ZoomCanvas { factor: rng.gen_range(0.01..100.0), pivot: pt(rng), shift: pt(rng) },
        5 => Command::NextSlide,
        6 => Command::PrevSlide,
        7 => Command::Overview,
        _ => Command::DuplicateSelection { offset: pt(rng) },
    }
}

fn undo_totality(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    let mut failures = 0;
    let mut executed = 0;
    for _ in 0..1000 {
        let mut doc = Document::new(3, Viewport { w: 1920.0, h: 1080.0 });
        doc.insert_object(0, Object::Image(Image { rect: Rect::new(50.0, 50.0, 300.0, 200.0), resource: "a.png".into() }));
        let initial = doc.serialize();
        let len = rng.gen_range(0..=50);
        for _ in 0..len {
            match rng.gen_range(0..10) {
                0 => {
                    let _ = doc.undo();
                }
                1 => {
                    let _ = doc.redo();
                }
                _ => {
                    if doc.execute(random_command(&mut rng)).is_ok() {
                        executed += 1;
                    }
                }
            }
        }
        while doc.undo().is_ok() {}
        if doc.serialize() != initial {
            failures += 1;
        }
    }
    r.line("undo totality", failures == 0, format!("1000 sequences (len<=50, {executed} commands applied), {failures} not byte-equal after full undo"));
}

fn well_shaped(p: &[Point; 3]) -> bool {
    let spread = p[0].distance(p[1]).max(p[0].distance(p[2])).max(p[1].distance(p[2]));
    let area2 = ((p[1] - p[0]).x * (p[2] - p[0]).y - (p[1] - p[0]).y * (p[2] - p[0]).x).abs();
    if spread < 20.0 || area2 < 0.05 * spread * spread {
        return false;
    }
    let c = Point::new((p[0].x + p[1].x + p[2].x) / 3.0, (p[0].y + p[1].y + p[2].y) / 3.0);
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for q in p {
        let d = *q - c;
        sxx += d.x * d.x;
        syy += d.y * d.y;
        sxy += d.x * d.y;
    }
    if (sxx - syy).hypot(2.0 * sxy) < 0.05 * (sxx + syy) {
        return false;
    }
    let th = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let ax = Point::new(th.cos(), th.sin());
    let mut pr: Vec<f64> = p.iter().map(|q| (*q - c).dot(ax)).collect();
    pr.sort_by(f64::total_cmp);
    pr[1] - pr[0] > 0.02 * spread && pr[2] - pr[1] > 0.02 * spread
}

fn palm_equivariance(r: &mut Report) {
    let cfg = PieMenuConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut tested, mut skipped) = (0, 0);
    let (mut worst_px, mut worst_deg) = (0.0f64, 0.0f64);
    while tested < 1000 {
        let p: [Point; 3] = std::array::from_fn(|_| Point::new(rng.gen_range(-400.0..400.0), rng.gen_range(-400.0..400.0)));
        if !well_shaped(&p) {
            skipped += 1;
            continue;
        }
        tested += 1;
        let phi = rng.gen_range(0.0..360.0);
        let t = Point::new(rng.gen_range(-500.0..500.0), rng.gen_range(-500.0..500.0));
        let a = estimate_palm_pose(&p, &cfg).unwrap();
        let b = estimate_palm_pose(&p.map(|q| q.rotate(phi) + t), &cfg).unwrap();
        worst_px = worst_px.max((b.center - (a.center.rotate(phi) + t)).length());
        let d = normalize_deg(b.orientation - a.orientation - phi);
        worst_deg = worst_deg.max(d.min(360.0 - d));
    }
    r.line(
        "palm equivariance",
        worst_px <= 1e-9 && worst_deg <= 1e-9,
        format!("1000 triples x rigid motions ({skipped} near-collinear/ambiguous draws skipped); max error {worst_px:.2e} px, {worst_deg:.2e} deg"),
    );
}

fn gaze_statistics(r: &mut Report) {
    let hand = paired_t_test(&[1.0, 2.0, 3.0], &[0.0, 0.0, 0.0]).unwrap();
    let hand_ok = (hand.t - 3.4641).abs() <= 1e-4 && hand.df == 2.0;

    // 14 subjects; in condition B every saccade and jitter is 40% smaller
    let screen = ScreenGeometry::full_hd_37_inch();
    let base = SyntheticViewing::default();
    let reduced = SyntheticViewing { saccade_px: base.saccade_px * 0.6, jitter_px: base.jitter_px * 0.6, ..base.clone() };
    let mut a = Vec::new();
    let mut b = Vec::new();
    for subject in 0..14u64 {
        let dist = 1300.0 + 15.0 * subject as f64;
        a.push(gaze_movement_rate(&synthesize(screen, dist, &base, 100 + subject)));
        b.push(gaze_movement_rate(&synthesize(screen, dist, &reduced, 200 + subject)));
    }
    let cohort = paired_t_test(&a, &b).unwrap();
    let cohort_ok = cohort.p < 0.01 && cohort.df == 13.0;

    let px = 140.0 * screen.width_px / screen.width_mm;
    let c = Point::new(screen.width_px / 2.0, screen.height_px / 2.0);
    let trace = GazeTrace { samples: vec![GazeSample::new(0, c.x, c.y)], screen, viewing_distance_mm: 1400.0 };
    let angle = trace.visual_angle(c, c + Point::new(px, 0.0));
    let angle_ok = (angle - 5.7106).abs() <= 1e-3;

    r.line(
        "gaze statistics",
        hand_ok && cohort_ok && angle_ok,
        format!(
            "d=[1,2,3]: t={:.4} df={}; synthetic n=14: t({})={:.2} p={:.2e} (<.01); 140 mm @ 1400 mm = {angle:.4} deg",
            hand.t, hand.df, cohort.df, cohort.t, cohort.p
        ),
    );
}

fn audience_isolation(r: &mut Report) {
    // every corpus trace back to back in one live session
    let mut session = Session::new(EngineConfig::default(), common::initial_doc()).unwrap();
    let (mut offset, mut frames, mut leaked, mut presenter_menus) = (0u64, 0, 0, 0);
    let mut families = std::collections::BTreeSet::new();
    for entry in common::manifest() {
        let events = common::corpus_trace(&entry.file).events;
        let last = events.last().map_or(0, |e| e.t);
        for e in events {
            let msg = SessionMessage::Touch(TouchEvent { t: e.t + offset, ..e });
            let out = session.handle_text(&serde_json::to_string(&msg).unwrap());
            families.extend(out.gestures.iter().map(|g| format!("{:?}", g.family())));
            presenter_menus += out.for_role(Role::Presenter).iter().filter(|u| u.is_visible_menu()).count();
            for u in out.for_role(Role::Audience) {
                frames += 1;
                if !matches!(u, RenderUpdate::Scene { .. }) {
                    leaked += 1;
                }
            }
        }
        offset += last + 1000;
    }
    r.line(
        "audience isolation",
        leaked == 0 && families.len() == 3 && presenter_menus > 0,
        format!("{frames} audience frames, {leaked} carrying menu state; presenter saw {presenter_menus} visible-menu frames; families exercised {families:?}"),
    );
}

fn main() {
    let mut r = Report { failed: Vec::new() };
    exp1_fit(&mut r);
    monotonicity(&mut r);
    sector_oracle(&mut r);
    golden_corpus(&mut r);
    undo_totality(&mut r);
    palm_equivariance(&mut r);
    gaze_statistics(&mut r);
    audience_isolation(&mut r);
    println!("[INFO] experiment-2 timing: not reproducible without human subjects; covered by the determinism and classification lines above");
    if !r.failed.is_empty() {
        eprintln!("failed: {:?}", r.failed);
        std::process::exit(1);
    }
}
