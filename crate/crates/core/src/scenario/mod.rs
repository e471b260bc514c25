//! Scenario files, the worked-example presets and the artifact writers behind the CLI.

mod presets;
mod runner;
mod schema;

pub use presets::{example_a, example_a_asymmetric, example_a_bath, example_b, example_c, example_d, preset, PRESETS};
pub use runner::{
    euler_report_json, output_dir, run_euler, run_scenario, simulate_scenario, sweep_csv, trajectory_csv, EulerReport,
    EulerRequest, MagnusJson, RunOptions, RunOutcome, SimulateOutcome, Verdict, WatchEntry, OUT_DIR_ENV, WATCH_TOL,
};
pub use schema::{
    BasisSpec, DirectionSpec, ErrorSpec, OperatorSource, ResolvedScenario, Scenario, ScheduleSpec, SegmentSpec,
    SweepParameter, SweepSpec, DEFAULT_BATH_LABEL,
};

/// Fixed-width scientific formatting used by every CSV artifact; `-0` prints as `0`.
pub fn format_value(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}
