//! The palm-hidden pie menu: palm pose from three fingertips, sector layout
//! and direction-to-item mapping.
//!
//! Item angles stay screen-aligned regardless of hand rotation, so "left"
//! always means the item centred at 180°.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{centroid, normalize_deg, Point, Vector};

/// Item counts the accuracy experiment was run with.
pub const EXPERIMENT_ITEM_COUNTS: [usize; 4] = [2, 4, 8, 16];

/// Contacts closer than this (max pairwise distance, px) carry no pose.
pub const MIN_CONTACT_SPREAD: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MenuAction {
    Back,
    Next,
    Overview,
    Copy,
    /// Selection is reported but nothing is dispatched.
    None,
}

impl fmt::Display for MenuAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MenuAction::Back => "back",
            MenuAction::Next => "next",
            MenuAction::Overview => "overview",
            MenuAction::Copy => "copy",
            MenuAction::None => "none",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MenuItem {
    pub label: String,
    pub action: MenuAction,
    /// Degrees, 0° = right, 90° = up.
    pub center_angle: f64,
}

impl MenuItem {
    pub fn new(label: impl Into<String>, action: MenuAction, center_angle: f64) -> Self {
        Self { label: label.into(), action, center_angle }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Handedness {
    Right,
    Left,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieMenuConfig {
    pub items: Vec<MenuItem>,
    pub radius: f64,
    /// Distance from the fingertip centroid to the menu centre.
    pub offset_distance: f64,
    /// Angle between the fingertip axis and the offset direction; 90 is the
    /// palm-ward normal.
    pub offset_angle: f64,
    pub handedness: Handedness,
}

impl Default for PieMenuConfig {
    fn default() -> Self {
        Self {
            items: vec![
                MenuItem::new("Back", MenuAction::Back, 180.0),
                MenuItem::new("Next", MenuAction::Next, 0.0),
                MenuItem::new("Overview", MenuAction::Overview, 90.0),
                MenuItem::new("Copy", MenuAction::Copy, 270.0),
            ],
            radius: 60.0,
            offset_distance: 80.0,
            offset_angle: 90.0,
            handedness: Handedness::Right,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MenuConfigError {
    #[error("a pie menu needs at least two items, got {0}")]
    TooFewItems(usize),
    #[error("{field} must be finite and positive, got {value}")]
    NonPositive { field: &'static str, value: f64 },
    #[error("non-finite angle in menu configuration")]
    NonFiniteAngle,
    #[error("item centre angles must be evenly spaced by {expected}° so sectors tile the circle")]
    UnevenSpacing { expected: f64 },
}

impl PieMenuConfig {
    /// `n` items labelled `1..=n`, clockwise from the top, no bound actions.
    pub fn evenly_spaced(n: usize) -> Self {
        let step = 360.0 / n as f64;
        let items = (0..n)
            .map(|i| MenuItem::new((i + 1).to_string(), MenuAction::None, normalize_deg(90.0 - i as f64 * step)))
            .collect();
        Self { items, ..Self::default() }
    }

    pub fn sector_width(&self) -> f64 {
        360.0 / self.items.len() as f64
    }

    /// Counts other than 2/4/8/16 are allowed but were never measured.
    pub fn is_experiment_count(&self) -> bool {
        EXPERIMENT_ITEM_COUNTS.contains(&self.items.len())
    }

    pub fn validate(&self) -> Result<(), MenuConfigError> {
        let n = self.items.len();
        if n < 2 {
            return Err(MenuConfigError::TooFewItems(n));
        }
        for (field, value) in [("radius", self.radius), ("offset_distance", self.offset_distance)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(MenuConfigError::NonPositive { field, value });
            }
        }
        if !self.offset_angle.is_finite() || self.items.iter().any(|i| !i.center_angle.is_finite()) {
            return Err(MenuConfigError::NonFiniteAngle);
        }
        let step = self.sector_width();
        let mut centers: Vec<f64> = self.items.iter().map(|i| normalize_deg(i.center_angle)).collect();
        centers.sort_by(f64::total_cmp);
        let uneven = (0..n).any(|k| {
            let next = if k + 1 == n { centers[0] + 360.0 } else { centers[k + 1] };
            (next - centers[k] - step).abs() > 1e-6
        });
        if uneven {
            return Err(MenuConfigError::UnevenSpacing { expected: step });
        }
        Ok(())
    }

    pub fn item_for_action(&self, action: MenuAction) -> Option<usize> {
        self.items.iter().position(|i| i.action == action)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PalmPose {
    pub center: Point,
    /// Direction from the fingertips toward the palm, in `[0, 360)`.
    pub orientation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("contact points are coincident; no hand orientation can be derived")]
pub struct DegeneratePose;

/// Locates the palm from three fingertip contacts.
///
/// The fingertip axis is the principal axis of the three points. The palm
/// lies on the side opposite the middle fingertip (the one in the middle
/// along that axis), which bulges away from the palm. When the points are
/// collinear the palm is taken to be below the fingertips.
pub fn estimate_palm_pose(contacts: &[Point; 3], config: &PieMenuConfig) -> Result<PalmPose, DegeneratePose> {
    let spread = max_pairwise_distance(contacts);
    if !(spread >= MIN_CONTACT_SPREAD) {
        return Err(DegeneratePose);
    }
    let c = centroid(contacts);
    let axis = principal_axis(contacts, c);
    // perpendicular in raw (y-down) coordinates
    let normal = Point::new(-axis.y, axis.x);

    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| (contacts[a] - c).dot(axis).total_cmp(&(contacts[b] - c).dot(axis)));
    let bulge = (contacts[order[1]] - c).dot(normal);

    let palm = if bulge.abs() > 1e-9 * spread {
        normal * -bulge.signum()
    } else if normal.y.abs() > 1e-12 {
        normal * normal.y.signum()
    } else {
        // vertical fingertip line: the palm trails the hand's thumb side
        match config.handedness {
            Handedness::Right => Point::new(1.0, 0.0),
            Handedness::Left => Point::new(-1.0, 0.0),
        }
    };
    let twist = match config.handedness {
        Handedness::Right => config.offset_angle - 90.0,
        Handedness::Left => 90.0 - config.offset_angle,
    };
    let dir = palm.rotate(twist);
    Ok(PalmPose { center: c + dir * config.offset_distance, orientation: dir.angle() })
}

/// Pose used when [`estimate_palm_pose`] fails: straight below the centroid.
pub fn fallback_pose(contacts: &[Point; 3], config: &PieMenuConfig) -> PalmPose {
    let c = centroid(contacts);
    PalmPose { center: c + Point::new(0.0, config.offset_distance), orientation: 270.0 }
}

fn max_pairwise_distance(p: &[Point; 3]) -> f64 {
    p[0].distance(p[1]).max(p[0].distance(p[2])).max(p[1].distance(p[2]))
}

/// Unit direction of largest spread. Isotropic point sets fall back to the
/// direction of the widest pair.
fn principal_axis(p: &[Point; 3], c: Point) -> Vector {
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for q in p {
        let d = *q - c;
        sxx += d.x * d.x;
        syy += d.y * d.y;
        sxy += d.x * d.y;
    }
    let anisotropy = (sxx - syy).hypot(2.0 * sxy);
    if anisotropy > 1e-9 * (sxx + syy) {
        let theta = 0.5 * (2.0 * sxy).atan2(sxx - syy);
        return Point::new(theta.cos(), theta.sin());
    }
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let (a, b) = pairs
        .into_iter()
        .max_by(|&(a, b), &(c2, d)| p[a].distance(p[b]).total_cmp(&p[c2].distance(p[d])))
        .expect("three pairs");
    let d = p[b] - p[a];
    d / d.length()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MenuArc {
    pub item: usize,
    /// Inclusive start angle, degrees.
    pub start: f64,
    /// Exclusive end angle, degrees; `end - start` is the sector width.
    pub end: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MenuGeometry {
    pub center: Point,
    pub radius: f64,
    pub arcs: Vec<MenuArc>,
}

pub fn layout_menu(pose: &PalmPose, config: &PieMenuConfig) -> MenuGeometry {
    let half = config.sector_width() / 2.0;
    let arcs = config
        .items
        .iter()
        .enumerate()
        .map(|(item, it)| {
            let c = normalize_deg(it.center_angle);
            MenuArc { item, start: c - half, end: c + half }
        })
        .collect();
    MenuGeometry { center: pose.center, radius: config.radius, arcs }
}

/// Index of the item whose half-open sector `[c - w/2, c + w/2)` contains
/// `angle`. A boundary angle belongs to the sector counter-clockwise of it.
pub fn map_direction(angle: f64, config: &PieMenuConfig) -> usize {
    let width = config.sector_width();
    let half = width / 2.0;
    let mut best = (0usize, f64::INFINITY);
    for (i, item) in config.items.iter().enumerate() {
        let rel = normalize_deg(angle - item.center_angle + half);
        if rel < width {
            return i;
        }
        // only reachable through rounding at a boundary
        let miss = (rel - width).min(360.0 - rel);
        if miss < best.1 {
            best = (i, miss);
        }
    }
    best.0
}

/// Rounds to 1e-9° so directions that are exactly diagonal in pixel space
/// land deterministically on sector boundaries.
fn snap_angle(deg: f64) -> f64 {
    normalize_deg((deg * 1e9).round() / 1e9)
}

/// Maps a swipe displacement to an item, or `None` below `threshold` px.
pub fn select_from_displacement(v: Vector, config: &PieMenuConfig, threshold: f64) -> Option<usize> {
    if !(v.length() >= threshold) || v.length() == 0.0 {
        return None;
    }
    Some(map_direction(snap_angle(v.angle()), config))
}
