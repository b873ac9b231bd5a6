//! Scenario files, bundled figure presets and CSV output for `polrot`.

pub mod output;
pub mod pipeline;
pub mod presets;
pub mod scenario;

pub use pipeline::{run_scenario, Artifact, RunOptions};
pub use scenario::{
    parse_scenario, serialize_scenario, Medium, Observable, ScenarioConfig, ScenarioError,
};

/// Error from running a bundled figure.
#[derive(Debug, thiserror::Error)]
pub enum FigureError {
    #[error("no preset for figure {0} (expected 1 to 10)")]
    UnknownFigure(u32),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Numeric(#[from] polrot::Error),
}

pub fn figure_scenario(n: u32) -> Result<ScenarioConfig, FigureError> {
    let name = format!("fig{n}");
    Ok(presets::preset(&name).ok_or(FigureError::UnknownFigure(n))??)
}

/// Artifacts of bundled figure `n`.
pub fn run_figure(n: u32, opts: &RunOptions) -> Result<Vec<Artifact>, FigureError> {
    let cfg = figure_scenario(n)?;
    Ok(run_scenario(&cfg, opts)?)
}
