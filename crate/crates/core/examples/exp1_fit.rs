//! Fits the angular-noise model to the published menu accuracies and checks
//! it against a Monte Carlo run through the real direction mapper.

use spieboard::experiment::exp1::{
    analytic_success, fit_noise_params, simulate_exp1, FitOptions, Observation, OBSERVED_RATES,
};

fn main() -> anyhow::Result<()> {
    let obs: Vec<Observation> = OBSERVED_RATES.iter().map(|&(n, rate)| Observation { n_items: n, rate }).collect();
    let fit = fit_noise_params(&obs, &FitOptions::default())?;
    println!("sigma = {:.3} deg, lapse = {:.4}, sse = {:.2e}", fit.model.sigma, fit.model.lapse, fit.sse);
    for w in &fit.warnings {
        println!("warning: {w}");
    }
    println!("\n  N  observed  fitted  simulated (1e5)");
    for r in &fit.residuals {
        let sim = simulate_exp1(&fit.model, r.n_items, 100_000, 42);
        println!("{:>3}  {:>7.1}%  {:>5.1}%  {:>8.2}%", r.n_items, r.observed * 100.0, r.fitted * 100.0, sim.rate() * 100.0);
    }
    println!("\nextrapolated: N=32 -> {:.1}%", analytic_success(&fit.model, 32) * 100.0);
    Ok(())
}
