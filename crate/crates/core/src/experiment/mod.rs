//! Harnesses for the menu-accuracy experiment and the audience gaze analysis.

pub mod exp1;
pub mod gaze;
pub mod stats;

pub use exp1::{
    analytic_success, fit_noise_params, simulate_exp1, FitError, FitOptions, FitResult, NoiseModel, Observation,
    SimulationResult, OBSERVED_RATES,
};
pub use gaze::{
    detect_fixations, total_gaze_movement, Fixation, GazeMetrics, GazeSample, GazeTrace, ScreenGeometry,
};
pub use stats::{paired_t_test, StatsError, TTest};
