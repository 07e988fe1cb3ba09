use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use pathlet_core::{MetricChoice, PairOrientation, PipelineConfig};

#[derive(Debug, Parser)]
#[command(name = "pathlet", version, about = "Writer identification from log path signatures of contour fragments")]
pub struct Cli {
    /// Directory that relative input and output paths are resolved against.
    #[arg(long, global = true, env = "PATHLET_DATA_ROOT")]
    pub data_root: Option<PathBuf>,

    /// More log output (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    /// Only print errors.
    #[arg(short, long, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

impl Cli {
    pub fn log_level(&self) -> &'static str {
        match (self.quiet, self.verbose) {
            (true, _) => "error",
            (false, 0) => "warn",
            (false, 1) => "info",
            _ => "debug",
        }
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        match &self.data_root {
            Some(root) if path.is_relative() => root.join(path),
            _ => path.to_path_buf(),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render a pseudo-handwriting corpus and its manifest.
    GenerateSynthetic(GenerateArgs),
    /// Learn a codebook from the manifest's training documents.
    Train(TrainArgs),
    /// Write one feature-matrix file per manifest document.
    Featurize(FeaturizeArgs),
    /// Measure Top-N identification accuracy.
    Evaluate(EvaluateArgs),
    /// Rank gallery writers for a single page image.
    Identify(IdentifyArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Output directory; receives `images/` and `manifest.csv`.
    #[arg(short, long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 10)]
    pub writers: usize,
    #[arg(long, default_value_t = 2)]
    pub docs_per_writer: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1400)]
    pub width: usize,
    #[arg(long, default_value_t = 1000)]
    pub height: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Preset {
    /// w=4, m=3, M=48.
    Default,
    /// w=3, m=2, M=32, for documents with little ink.
    SmallInk,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MetricArg {
    Auto,
    Manhattan,
    Chi2,
}

impl From<MetricArg> for MetricChoice {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Auto => MetricChoice::Auto,
            MetricArg::Manhattan => MetricChoice::Manhattan,
            MetricArg::Chi2 => MetricChoice::Chi2,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OrientationArg {
    Traversal,
    Outward,
}

impl From<OrientationArg> for PairOrientation {
    fn from(o: OrientationArg) -> Self {
        match o {
            OrientationArg::Traversal => PairOrientation::Traversal,
            OrientationArg::Outward => PairOrientation::Outward,
        }
    }
}

/// Pipeline settings; unset flags fall back to the preset.
#[derive(Debug, Args)]
pub struct ConfigArgs {
    #[arg(long, value_enum, default_value = "default")]
    pub preset: Preset,
    /// Polygonization tolerance in pixels.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Vertices per pathlet.
    #[arg(short = 'w', long)]
    pub pathlet_size: Option<usize>,
    /// Signature truncation level.
    #[arg(short = 'm', long)]
    pub level: Option<usize>,
    /// Number of codebook entries.
    #[arg(short = 'M', long)]
    pub codebook_size: Option<usize>,
    #[arg(long, value_enum)]
    pub orientation: Option<OrientationArg>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Contours with fewer border pixels are ignored.
    #[arg(long)]
    pub min_perimeter: Option<usize>,
    /// Maximum number of pathlet features used for k-means.
    #[arg(long)]
    pub subsample_cap: Option<usize>,
    /// k-means restarts; the lowest-inertia run is kept.
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Ignore inner (hole) contours.
    #[arg(long)]
    pub exclude_holes: bool,
    /// Treat light strokes on a dark background as ink.
    #[arg(long)]
    pub invert: bool,
}

impl ConfigArgs {
    pub fn to_config(&self) -> PipelineConfig {
        let mut c = match self.preset {
            Preset::Default => PipelineConfig::default(),
            Preset::SmallInk => PipelineConfig::small_ink(),
        };
        if let Some(v) = self.epsilon {
            c.epsilon = v;
        }
        if let Some(v) = self.pathlet_size {
            c.pathlet_size = v;
        }
        if let Some(v) = self.level {
            c.level = v;
        }
        if let Some(v) = self.codebook_size {
            c.codebook_size = v;
        }
        if let Some(v) = self.orientation {
            c.orientation = v.into();
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = self.min_perimeter {
            c.min_perimeter = v;
        }
        if let Some(v) = self.subsample_cap {
            c.subsample_cap = v;
        }
        if let Some(v) = self.restarts {
            c.restarts = v;
        }
        c.include_holes = !self.exclude_holes;
        c.invert = self.invert;
        c
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Corpus manifest (CSV: doc_id,writer_id,path,role).
    #[arg(long)]
    pub manifest: PathBuf,
    /// Codebook file to write.
    #[arg(short, long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Debug, Args)]
pub struct FeaturizeArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long)]
    pub codebook: PathBuf,
    /// Directory for `<doc_id>.lpsfm` files.
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EvalMode {
    /// Every gallery document queries all the others.
    Loo,
    /// Query documents are ranked against template documents.
    Queryset,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long)]
    pub codebook: PathBuf,
    #[arg(long, value_enum, default_value = "loo")]
    pub mode: EvalMode,
    /// Comma-separated Top-N cut-offs.
    #[arg(long, value_delimiter = ',', default_value = "1,10")]
    pub tops: Vec<usize>,
    #[arg(long, value_enum, default_value = "auto")]
    pub metric: MetricArg,
    /// Read matrices written by `featurize` instead of recomputing them.
    #[arg(long)]
    pub matrices: Option<PathBuf>,
    /// Directory for `report.csv` and `report.txt`.
    #[arg(short, long)]
    pub out: PathBuf,
    /// Dataset label in the report; defaults to the manifest's directory name.
    #[arg(long)]
    pub dataset: Option<String>,
}

#[derive(Debug, Args)]
pub struct IdentifyArgs {
    /// Page image to identify.
    pub image: PathBuf,
    #[arg(long)]
    pub codebook: PathBuf,
    /// Directory of `.lpsfm` files written by `featurize`.
    #[arg(long)]
    pub gallery: PathBuf,
    /// Number of writers to list.
    #[arg(long, default_value_t = 10)]
    pub top: usize,
    #[arg(long, value_enum, default_value = "auto")]
    pub metric: MetricArg,
}
