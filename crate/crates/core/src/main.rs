use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ultrazero::harness::{emit_report, run_campaign, Campaign, CampaignConfig};
use ultrazero::Result;

/// Zero-location experiments for ultraspherical and Jacobi polynomial
/// transforms.
#[derive(Parser)]
#[command(name = "ultrazero", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Random interior-rooted inputs through the ultraspherical transform.
    Theorem12(Flags),
    /// Jacobi transform of (x-1)^n (x+1)^m and of random inputs.
    Conj32(Flags),
    /// Real-rootedness of the factorial Jacobi transform.
    Q31(Flags),
    /// Minor-sign scans of the ultraspherical and Jacobi generating kernels.
    Ssr(Flags),
    /// Biorthogonal polynomials against the ultraspherical transform.
    BiorthoEquiv(Flags),
    /// Internal consistency checks.
    Selftest(Flags),
}

#[derive(Args)]
struct Flags {
    /// Flat `key = value` file; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated alpha values.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "alpha_max")]
    alpha: Option<String>,
    /// Comma-separated beta values.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "beta_max")]
    beta: Option<String>,
    /// Integer alpha grid 0..=N.
    #[arg(long)]
    alpha_max: Option<String>,
    /// Integer beta grid 0..=N.
    #[arg(long)]
    beta_max: Option<String>,
    #[arg(long)]
    deg_cap: Option<String>,
    #[arg(long)]
    random_degree_max: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    m_max: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// `double` or `extended:<bits>`.
    #[arg(long)]
    precision: Option<String>,
    /// Root classification tolerance.
    #[arg(long)]
    tol: Option<String>,
    /// Report timestamp.
    #[arg(long)]
    timestamp: Option<String>,
    /// Record per-case wall time.
    #[arg(long)]
    timing: bool,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<String>,
    /// `json` or `csv`.
    #[arg(long)]
    format: Option<String>,
}

impl Flags {
    fn pairs(&self) -> Vec<(&'static str, &String)> {
        [
            ("alpha", &self.alpha),
            ("beta", &self.beta),
            ("alpha_max", &self.alpha_max),
            ("beta_max", &self.beta_max),
            ("deg_cap", &self.deg_cap),
            ("random_degree_max", &self.random_degree_max),
            ("trials", &self.trials),
            ("m_max", &self.m_max),
            ("seed", &self.seed),
            ("precision", &self.precision),
            ("tol", &self.tol),
            ("timestamp", &self.timestamp),
            ("out", &self.out),
            ("format", &self.format),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_ref().map(|v| (k, v)))
        .collect()
    }
}

fn build_config(campaign: Campaign, flags: &Flags) -> Result<CampaignConfig> {
    let mut cfg = CampaignConfig::for_campaign(campaign);
    if let Some(path) = &flags.config {
        cfg.apply_file(path)?;
    }
    for (k, v) in flags.pairs() {
        cfg.set(k, v)?;
    }
    if flags.timing {
        cfg.timing = true;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(campaign: Campaign, flags: &Flags) -> Result<bool> {
    let cfg = build_config(campaign, flags)?;
    let report = run_campaign(&cfg)?;
    emit_report(&report, cfg.format, cfg.out.as_deref())?;
    let s = &report.summary;
    eprintln!(
        "{campaign}: {} cases, {} passes, {} violations ({} outside exploratory ranges), {} indeterminate",
        s.cases, s.passes, s.violations, s.expected_violations, s.indeterminates
    );
    Ok(s.expected_violations == 0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let (campaign, flags) = match &cli.command {
        Command::Theorem12(f) => (Campaign::Theorem12, f),
        Command::Conj32(f) => (Campaign::Conjecture32, f),
        Command::Q31(f) => (Campaign::Question31, f),
        Command::Ssr(f) => (Campaign::SsrExplore, f),
        Command::BiorthoEquiv(f) => (Campaign::BiorthoEquiv, f),
        Command::Selftest(f) => (Campaign::Selftest, f),
    };
    match run(campaign, flags) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
