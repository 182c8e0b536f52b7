//! Campaign runner behind the command-line tool.
//!
//! Each campaign expands its configuration into independent cases, runs
//! them in parallel with per-case random streams, and assembles a report in
//! case order, so identical configurations give identical reports.

mod campaigns;
mod config;
mod report;
pub mod selftest;

pub use campaigns::{
    case_rng, image_roots, interior_case, random_roots, run_biortho_equiv, run_campaign, run_conjecture32_campaign,
    run_question31_campaign, run_ssr_explore, run_theorem12_campaign, Input, Map, EQUIVALENCE_MIN_SEPARATION,
    EQUIVALENCE_TOL,
};
pub use config::{Campaign, CampaignConfig, Format, DEFAULT_TIMESTAMP, MAX_DEG_CAP, RANDOM_ROOT_RANGE};
pub use report::{
    emit_report, from_json, render, to_csv, to_json, CampaignReport, CaseParams, CaseRecord, CaseStatus, Summary,
};
