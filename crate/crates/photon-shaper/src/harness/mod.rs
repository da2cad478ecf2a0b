//! Scenario definitions reproducing each experimental arrangement, their
//! execution, and reporting.

mod report;
mod run;
mod scenario;

pub use report::{
    config_hash, CombSummary, CosineFit, FinalMeasurement, FrogSummary, GaSummary, PairScan,
    Provenance, Report, ScanSummary, TomoSummary, Tooth,
};
pub use run::{comb_analysis, comb_scenario, phase_scan, run_scenario, write_outputs, RunOutput};
pub use scenario::{
    bundled, load_scenario, AnalysisSpec, ChannelSpec, CombSpec, FrogSpec, GaSpec, GridSpec,
    MichelsonSpec, ModeRecipe, PhaseScanSpec, ResolvedScenario, Scenario, TomoSpec,
    BUNDLED_NAMES, DEFAULT_N_PIXELS,
};
