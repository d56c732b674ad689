//! TOML-configured runs: parse, evolve, analyse, and write reproducible
//! artifacts.

mod config;
mod plot;
mod run;

pub use config::{
    parse_config, parse_config_str, AnalysisConfig, ComparisonConfig, DatumConfig, ExperimentConfig, FrontConfig, GridConfig, ModelConfig,
    RankineConfig, SchemeConfig, SpreadingConfig, SubsolutionConfig, TimeConfig,
};
pub use plot::{emit_plot_data, plot_text, PlotData};
pub use run::{resolve_out_dir, run_experiment, Check, RunOptions, RunSummary};

/// Packaged configurations, one per acceptance experiment.
pub const DEMOS: &[(&str, &str)] = &[
    ("front_speed_1d", include_str!("../../configs/front_speed_1d.toml")),
    ("rankine_hugoniot_1d", include_str!("../../configs/rankine_hugoniot_1d.toml")),
    ("anisotropic_2d", include_str!("../../configs/anisotropic_2d.toml")),
    ("comparison_1d", include_str!("../../configs/comparison_1d.toml")),
    ("subsolution_1d", include_str!("../../configs/subsolution_1d.toml")),
    ("supersolution_2d", include_str!("../../configs/supersolution_2d.toml")),
];

/// A packaged configuration by name.
pub fn demo_config(name: &str) -> Option<crate::Result<ExperimentConfig>> {
    DEMOS.iter().find(|(n, _)| *n == name).map(|(_, text)| parse_config_str(text))
}
