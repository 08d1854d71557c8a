//! Synthetic 14-viewer comparison: condition B makes every eye movement 40%
//! smaller. Reports movement, fixations and a paired t-test.

use spieboard::experiment::gaze::{analyze, synthesize, ScreenGeometry, SyntheticViewing};
use spieboard::experiment::stats::paired_t_test;

fn main() -> anyhow::Result<()> {
    let screen = ScreenGeometry::full_hd_37_inch();
    let a_params = SyntheticViewing::default();
    let b_params = SyntheticViewing { saccade_px: a_params.saccade_px * 0.6, jitter_px: a_params.jitter_px * 0.6, ..a_params.clone() };

    let (mut a, mut b) = (Vec::new(), Vec::new());
    println!("viewer  A deg/s  B deg/s  A fix  B fix");
    for viewer in 0..14u64 {
        let ma = analyze(&synthesize(screen, 1400.0, &a_params, viewer), 1.0, 100);
        let mb = analyze(&synthesize(screen, 1400.0, &b_params, 1000 + viewer), 1.0, 100);
        println!("{viewer:>6}  {:>7.2}  {:>7.2}  {:>5}  {:>5}", ma.movement_rate, mb.movement_rate, ma.fixations.len(), mb.fixations.len());
        a.push(ma.movement_rate);
        b.push(mb.movement_rate);
    }
    let t = paired_t_test(&a, &b)?;
    println!("\npaired t({}) = {:.3}, p = {:.2e}, mean difference {:.2} deg/s", t.df, t.t, t.p, t.mean_difference);
    Ok(())
}
