use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use scientrix_cli::config::parse_decimal;
use scientrix_cli::{run_pipeline, run_stage, CliError, Manifest, RunConfig, Stage};

#[derive(Parser)]
#[command(
    name = "scientrix",
    version,
    about = "Bibliometric indicator pipeline for field-tagged exports"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and normalize the input exports.
    Parse(Overrides),
    /// Percentile rank index of the target papers within their peer sets.
    Pri(Overrides),
    /// Shannon diversity of journals, subfields and keywords.
    Diversity(Overrides),
    /// Cooperation classes and output per city.
    Collab(Overrides),
    /// Keyword clusters and the strategic diagram.
    Coword(Overrides),
    /// All stages in order.
    Run(Overrides),
    /// Check the output files against the manifest digests.
    Verify(Overrides),
}

#[derive(Args)]
struct Overrides {
    /// Key-value config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Input export file; replaces input_paths when given.
    #[arg(long = "input")]
    inputs: Vec<PathBuf>,
    /// Peer-set file; replaces peer_set_paths when given.
    #[arg(long = "peer-set")]
    peer_sets: Vec<PathBuf>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    #[arg(long)]
    min_cosine: Option<f64>,
    #[arg(long)]
    min_frequency: Option<usize>,
    #[arg(long)]
    min_cluster_size: Option<usize>,
    #[arg(long)]
    max_cluster_size: Option<usize>,
    #[arg(long)]
    pri_year_cutoff: Option<i32>,
    #[arg(long)]
    organization_prefix: Option<String>,
    #[arg(long)]
    city_threshold_pct: Option<String>,
}

impl Overrides {
    fn resolve(self) -> Result<RunConfig, CliError> {
        let mut c = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        if !self.inputs.is_empty() {
            c.input_paths = self.inputs;
        }
        if !self.peer_sets.is_empty() {
            c.peer_set_paths = self.peer_sets;
        }
        if let Some(v) = self.output_dir {
            c.output_dir = v;
        }
        if let Some(v) = self.min_cosine {
            c.min_cosine = v;
        }
        if let Some(v) = self.min_frequency {
            c.min_keyword_frequency = v;
        }
        if let Some(v) = self.min_cluster_size {
            c.min_cluster_size = v;
        }
        if let Some(v) = self.max_cluster_size {
            c.max_cluster_size = v;
        }
        if let Some(v) = self.pri_year_cutoff {
            c.pri_year_cutoff = Some(v);
        }
        if let Some(v) = self.organization_prefix {
            c.organization_prefix = v.to_uppercase();
        }
        if let Some(v) = self.city_threshold_pct {
            c.city_threshold_pct = parse_decimal(&v)
                .ok_or_else(|| CliError::Usage(format!("invalid --city-threshold-pct {v:?}")))?;
        }
        Ok(c)
    }
}

fn verify(config: &RunConfig) -> Result<(), CliError> {
    let manifest =
        Manifest::load(&config.output_dir)?.ok_or_else(|| CliError::MissingIntermediate {
            stage: "verify".into(),
            path: config
                .output_dir
                .join(scientrix_cli::manifest::MANIFEST_FILE),
            needs: "run".into(),
        })?;
    let problems = manifest.verify(&config.output_dir);
    if problems.is_empty() {
        println!("{} outputs match the manifest", manifest.outputs.len());
        return Ok(());
    }
    let detail: Vec<String> = problems
        .iter()
        .map(|(f, why)| format!("{f}: {why}"))
        .collect();
    Err(CliError::Stage {
        stage: "verify".into(),
        message: detail.join("; "),
    })
}

fn report(manifest: &Manifest, stages: &[Stage]) {
    for stage in stages {
        if let Some(record) = manifest.stages.get(stage.name()) {
            let counts: Vec<String> = record
                .counts
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            println!("{}: {}", stage.name(), counts.join(" "));
            for w in &record.warnings {
                eprintln!("warning: {}: {w}", stage.name());
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Run(o) => o
            .resolve()
            .and_then(|c| run_pipeline(&c))
            .map(|m| report(&m, &Stage::ALL)),
        Command::Verify(o) => o.resolve().and_then(|c| verify(&c)),
        Command::Parse(o) => single(Stage::Parse, o),
        Command::Pri(o) => single(Stage::Pri, o),
        Command::Diversity(o) => single(Stage::Diversity, o),
        Command::Collab(o) => single(Stage::Collab, o),
        Command::Coword(o) => single(Stage::Coword, o),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn single(stage: Stage, overrides: Overrides) -> Result<(), CliError> {
    let config = overrides.resolve()?;
    let manifest = run_stage(stage, &config)?;
    report(&manifest, &[stage]);
    Ok(())
}
