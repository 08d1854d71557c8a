//! Audience gaze traces: visual-angle movement and dispersion-based fixations.
//!
//! A screen point maps to a ray from an eye on the perpendicular through the
//! screen centre, `viewing_distance_mm` away. Pixels are square; their size
//! comes from the physical screen width.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::Point;
use crate::touch::fmt_num;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GazeSample {
    pub t: u64,
    pub x: f64,
    pub y: f64,
}

impl GazeSample {
    pub fn new(t: u64, x: f64, y: f64) -> Self {
        Self { t, x, y }
    }

    pub fn point(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScreenGeometry {
    pub width_px: f64,
    pub height_px: f64,
    pub width_mm: f64,
}

impl ScreenGeometry {
    /// 1920×1080 panel on a 37-inch 16:9 display.
    pub fn full_hd_37_inch() -> Self {
        let diagonal_mm = 37.0 * 25.4;
        Self { width_px: 1920.0, height_px: 1080.0, width_mm: diagonal_mm * 16.0 / (337.0f64).sqrt() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GazeTrace {
    pub samples: Vec<GazeSample>,
    pub screen: ScreenGeometry,
    pub viewing_distance_mm: f64,
}

impl GazeTrace {
    fn ray(&self, p: Point) -> [f64; 3] {
        let mm = self.screen.width_mm / self.screen.width_px;
        [
            (p.x - self.screen.width_px / 2.0) * mm,
            (p.y - self.screen.height_px / 2.0) * mm,
            self.viewing_distance_mm,
        ]
    }

    /// Angle at the eye between gaze at `a` and gaze at `b`, in degrees.
    pub fn visual_angle(&self, a: Point, b: Point) -> f64 {
        let (u, v) = (self.ray(a), self.ray(b));
        let cross = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
        let cross_len = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
        let dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
        cross_len.atan2(dot).to_degrees()
    }

    pub fn duration_ms(&self) -> u64 {
        match (self.samples.first(), self.samples.last()) {
            (Some(a), Some(b)) => b.t - a.t,
            _ => 0,
        }
    }
}

/// Sum of visual angles between consecutive samples, degrees. Fewer than two
/// samples give zero.
pub fn total_gaze_movement(trace: &GazeTrace) -> f64 {
    trace.samples.windows(2).map(|w| trace.visual_angle(w[0].point(), w[1].point())).sum()
}

/// Movement per second of trace time; zero for an instantaneous trace.
pub fn gaze_movement_rate(trace: &GazeTrace) -> f64 {
    let ms = trace.duration_ms();
    if ms == 0 {
        0.0
    } else {
        total_gaze_movement(trace) / (ms as f64 / 1000.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fixation {
    /// Mean sample position, px.
    pub centroid: Point,
    pub start: u64,
    pub duration: u64,
}

/// I-DT: a window covering at least `min_duration_ms` whose samples are all
/// within `dispersion_deg` of each other starts a fixation, which then grows
/// while that still holds.
pub fn detect_fixations(trace: &GazeTrace, dispersion_deg: f64, min_duration_ms: u64) -> Vec<Fixation> {
    let s = &trace.samples;
    let mut out = Vec::new();
    let mut i = 0;
    while i < s.len() {
        let Some(j) = (i..s.len()).find(|&j| s[j].t - s[i].t >= min_duration_ms) else { break };
        let mut spread = 0.0f64;
        let mut ok = true;
        for k in i + 1..=j {
            spread = spread.max(max_angle_to(trace, &s[i..k], s[k].point()));
            if spread > dispersion_deg {
                ok = false;
                break;
            }
        }
        if !ok {
            i += 1;
            continue;
        }
        let mut end = j;
        while end + 1 < s.len() && max_angle_to(trace, &s[i..=end], s[end + 1].point()) <= dispersion_deg {
            end += 1;
        }
        let pts: Vec<Point> = s[i..=end].iter().map(GazeSample::point).collect();
        out.push(Fixation { centroid: crate::geom::centroid(&pts), start: s[i].t, duration: s[end].t - s[i].t });
        i = end + 1;
    }
    out
}

fn max_angle_to(trace: &GazeTrace, window: &[GazeSample], p: Point) -> f64 {
    window.iter().map(|q| trace.visual_angle(q.point(), p)).fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GazeMetrics {
    pub total_movement: f64,
    pub movement_rate: f64,
    pub fixations: Vec<Fixation>,
}

pub const DEFAULT_DISPERSION_DEG: f64 = 1.0;
pub const DEFAULT_MIN_FIXATION_MS: u64 = 100;

pub fn analyze(trace: &GazeTrace, dispersion_deg: f64, min_duration_ms: u64) -> GazeMetrics {
    GazeMetrics {
        total_movement: total_gaze_movement(trace),
        movement_rate: gaze_movement_rate(trace),
        fixations: detect_fixations(trace, dispersion_deg, min_duration_ms),
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum GazeFileError {
    #[error("gaze trace header missing or malformed")]
    MissingHeader,
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: samples out of time order")]
    OutOfOrder { line: usize },
    #[error("header: {0}")]
    BadHeader(&'static str),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GazeHeader {
    w: f64,
    h: f64,
    w_mm: f64,
    dist_mm: f64,
    v: u32,
}

/// Header `{"w":..,"h":..,"w_mm":..,"dist_mm":..,"v":1}`, then one
/// `{"t":..,"x":..,"y":..}` per line.
pub fn parse_gaze_trace(text: &str) -> Result<GazeTrace, GazeFileError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, first) = lines.next().ok_or(GazeFileError::MissingHeader)?;
    let h: GazeHeader = serde_json::from_str(first).map_err(|_| GazeFileError::MissingHeader)?;
    if h.v != 1 {
        return Err(GazeFileError::BadHeader("unsupported version"));
    }
    if !(h.w > 0.0 && h.h > 0.0 && h.w_mm > 0.0) {
        return Err(GazeFileError::BadHeader("screen size must be positive"));
    }
    if !(h.dist_mm > 0.0) {
        return Err(GazeFileError::BadHeader("viewing distance must be positive"));
    }
    let mut samples: Vec<GazeSample> = Vec::new();
    for (i, line) in lines {
        let s: GazeSample = serde_json::from_str(line)
            .map_err(|e| GazeFileError::Malformed { line: i + 1, message: e.to_string() })?;
        if samples.last().is_some_and(|p| s.t < p.t) {
            return Err(GazeFileError::OutOfOrder { line: i + 1 });
        }
        samples.push(s);
    }
    Ok(GazeTrace {
        samples,
        screen: ScreenGeometry { width_px: h.w, height_px: h.h, width_mm: h.w_mm },
        viewing_distance_mm: h.dist_mm,
    })
}

pub fn emit_gaze_trace(trace: &GazeTrace) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{{\"w\":{},\"h\":{},\"w_mm\":{},\"dist_mm\":{},\"v\":1}}",
        fmt_num(trace.screen.width_px),
        fmt_num(trace.screen.height_px),
        fmt_num(trace.screen.width_mm),
        fmt_num(trace.viewing_distance_mm)
    );
    for s in &trace.samples {
        let _ = writeln!(out, "{{\"t\":{},\"x\":{},\"y\":{}}}", s.t, fmt_num(s.x), fmt_num(s.y));
    }
    out
}

/// Parameters for generating a plausible viewing session: dwell at a point,
/// jump, dwell again.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticViewing {
    pub duration_ms: u64,
    pub sample_hz: f64,
    /// Mean saccade length in px; each jump is 0.5–1.5× this.
    pub saccade_px: f64,
    pub dwell_ms: (u64, u64),
    /// Per-sample Gaussian jitter around the fixation point, px.
    pub jitter_px: f64,
}

impl Default for SyntheticViewing {
    fn default() -> Self {
        Self { duration_ms: 30_000, sample_hz: 60.0, saccade_px: 300.0, dwell_ms: (200, 600), jitter_px: 2.0 }
    }
}

pub fn synthesize(screen: ScreenGeometry, viewing_distance_mm: f64, p: &SyntheticViewing, seed: u64) -> GazeTrace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let jitter = Normal::new(0.0, p.jitter_px.max(f64::MIN_POSITIVE)).expect("finite jitter");
    let clamp = |q: Point| Point::new(q.x.clamp(0.0, screen.width_px), q.y.clamp(0.0, screen.height_px));
    let mut focus = Point::new(screen.width_px / 2.0, screen.height_px / 2.0);
    let mut dwell_end = rng.gen_range(p.dwell_ms.0..=p.dwell_ms.1);
    let mut samples = Vec::new();
    let mut k = 0u64;
    loop {
        let t = (k as f64 * 1000.0 / p.sample_hz).round() as u64;
        if t > p.duration_ms {
            break;
        }
        if t >= dwell_end {
            let dir = Point::from_angle(rng.gen_range(0.0..360.0));
            let len = p.saccade_px * rng.gen_range(0.5..1.5);
            focus = clamp(focus + dir * len);
            dwell_end = t + rng.gen_range(p.dwell_ms.0..=p.dwell_ms.1);
        }
        let q = clamp(focus + Point::new(jitter.sample(&mut rng), jitter.sample(&mut rng)));
        samples.push(GazeSample::new(t, q.x, q.y));
        k += 1;
    }
    GazeTrace { samples, screen, viewing_distance_mm }
}
