//! Palm pose from three fingertips, the resulting pie layout, and how swipe
//! directions map onto items.

use spieboard::menu::{estimate_palm_pose, layout_menu, select_from_displacement, Handedness, PieMenuConfig};
use spieboard::Point;

fn main() {
    let tips = [Point::new(900.0, 500.0), Point::new(960.0, 470.0), Point::new(1020.0, 500.0)];
    for handedness in [Handedness::Right, Handedness::Left] {
        let cfg = PieMenuConfig { offset_angle: 75.0, handedness, ..PieMenuConfig::default() };
        let pose = estimate_palm_pose(&tips, &cfg).expect("distinct contacts");
        println!("{handedness:?} hand, 75 deg offset: centre ({:.1}, {:.1}), palm at {:.1} deg", pose.center.x, pose.center.y, pose.orientation);
    }

    let cfg = PieMenuConfig::default();
    let pose = estimate_palm_pose(&tips, &cfg).expect("distinct contacts");
    let geometry = layout_menu(&pose, &cfg);
    println!("\nmenu at ({:.1}, {:.1}) r={}", geometry.center.x, geometry.center.y, geometry.radius);
    for arc in &geometry.arcs {
        println!("  {:<9} [{:>6.1}, {:>6.1})", cfg.items[arc.item].label, arc.start, arc.end);
    }

    println!("\nswipe -> item (threshold 30 px)");
    for (x, y) in [(-60.0, 0.0), (60.0, 0.0), (0.0, -60.0), (0.0, 60.0), (22.0, -22.0), (21.0, -21.0)] {
        let hit = select_from_displacement(Point::new(x, y), &cfg, 30.0).map(|i| cfg.items[i].label.as_str());
        println!("  ({x:>5}, {y:>5}) -> {}", hit.unwrap_or("-"));
    }

    let eight = PieMenuConfig::evenly_spaced(8);
    print!("\n8 items, every 15 deg:");
    for a in (0..360).step_by(15) {
        let i = select_from_displacement(Point::from_angle(a as f64) * 100.0, &eight, 1.0).unwrap();
        print!(" {}", eight.items[i].label);
    }
    println!();
}
