use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ionscreen::datasets::{Category, Format, Property};
use ionscreen::evalharness::SplitScheme;
use ionscreen::fingerprints::FingerprintKind;
use ionscreen::screening::Objective;

#[derive(Debug, Parser)]
#[command(
    name = "ionscreen",
    version,
    about = "Ionic-liquid screening toolkit: canonical SMILES, descriptors, fingerprints, \
             baseline models, group cross-validation and similarity-guided search",
    after_help = "Exit status: 0 on success, 1 on a domain error, 2 on a usage error. \
                  Errors are printed to standard error as `CODE: message`."
)]
pub struct Cli {
    /// Worker thread cap (default: all cores).
    #[arg(long, global = true, env = "IONSCREEN_THREADS", value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,
    /// TOML configuration file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for sampling, splits and model initialisation [default: 42].
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RecordFormat {
    Csv,
    Jsonl,
}

impl From<RecordFormat> for Format {
    fn from(f: RecordFormat) -> Format {
        match f {
            RecordFormat::Csv => Format::Csv,
            RecordFormat::Jsonl => Format::Jsonl,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum ModelKindArg {
    Ridge,
    Mlp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ActivationArg {
    Tanh,
    Relu,
}

#[derive(Debug, Args)]
pub struct RecordInput {
    /// Record file (CSV or JSONL); standard input when omitted.
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    /// Record format; inferred from the file extension by default.
    #[arg(long, value_enum)]
    pub format: Option<RecordFormat>,
}

impl RecordInput {
    pub fn format(&self) -> Option<Format> {
        self.format.map(Format::from)
    }
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Model family; repeat to compare several.
    #[arg(long = "model", value_enum)]
    pub kinds: Vec<ModelKindArg>,
    /// TOML or JSON model specification (`type = "ridge" | "mlp"` plus hyperparameters).
    #[arg(long)]
    pub model_config: Option<PathBuf>,
    /// Ridge penalty.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub epochs: Option<usize>,
    /// Hidden layer widths, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub hidden: Option<Vec<usize>>,
    #[arg(long)]
    pub learning_rate: Option<f64>,
    #[arg(long)]
    pub batch_size: Option<usize>,
    #[arg(long, value_enum)]
    pub activation: Option<ActivationArg>,
    /// Temperature multiplier inside pseudo-labels [default: 0.001].
    #[arg(long)]
    pub temperature_scale: Option<f64>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct PredictorSource {
    /// Trained model JSON written by `train`.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// External predictor command speaking the JSON-lines protocol.
    #[arg(long)]
    pub predictor_cmd: Option<String>,
    /// Labeled record file used as a lookup table of predictions.
    #[arg(long)]
    pub lookup: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// TOML or JSON search configuration.
    #[arg(long)]
    pub search_config: Option<PathBuf>,
    #[arg(long)]
    pub objective: Option<Objective>,
    #[arg(long)]
    pub property: Option<Property>,
    #[arg(long)]
    pub beam_width: Option<usize>,
    /// Minimum Tanimoto similarity of a swapped-in molecule
    /// [default: 0.3 for search, 0 for the modify commands].
    #[arg(long)]
    pub similarity_floor: Option<f64>,
    #[arg(long)]
    pub fingerprint: Option<FingerprintKind>,
    #[arg(long)]
    pub nbits: Option<usize>,
    /// Seconds to wait for each external prediction.
    #[arg(long, default_value_t = 30.0)]
    pub predictor_timeout: f64,
    /// Ranked candidates as JSON lines; standard output when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Trajectory table; standard error when omitted.
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ModifyArgs {
    #[arg(long)]
    pub cation: String,
    #[arg(long)]
    pub anion: String,
    #[arg(long)]
    pub solute: Option<String>,
    /// Kelvin; 298.15 when a solute is given and this is omitted.
    #[arg(long)]
    pub temperature: Option<f64>,
    /// SMILES list of replacement candidates.
    #[arg(long)]
    pub pool: PathBuf,
    /// Iteration budget [default: 5].
    #[arg(long)]
    pub budget: Option<usize>,
    #[command(flatten)]
    pub predictor: PredictorSource,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Subcommand)]
pub enum ThermoOp {
    /// Hydration free energy: solvation minus IL/water transfer.
    Hydration {
        #[arg(long, allow_hyphen_values = true)]
        solvation: f64,
        #[arg(long, allow_hyphen_values = true)]
        transfer: f64,
    },
    /// IL/organic transfer: IL/water minus organic/water transfer.
    IlOrganic {
        #[arg(long, allow_hyphen_values = true)]
        transfer_il_water: f64,
        #[arg(long, allow_hyphen_values = true)]
        transfer_org_water: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Canonical SMILES for each input line.
    Canonicalize {
        /// SMILES list; standard input when omitted.
        #[arg(short, long)]
        input: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The 21 descriptors for each input SMILES.
    Descriptors {
        #[arg(short, long)]
        input: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
    },
    /// Graph feature tensors for each record, as JSON lines.
    Featurize {
        #[command(flatten)]
        records: RecordInput,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Folded fingerprints as hex strings.
    Fingerprint {
        #[arg(short, long)]
        input: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value = "ecfp4")]
        kind: FingerprintKind,
        #[arg(long, default_value_t = ionscreen::fingerprints::DEFAULT_NBITS)]
        nbits: usize,
    },
    /// Pairwise Tanimoto matrix with hierarchical-clustering leaf order.
    Similarity {
        #[arg(short, long)]
        input: Option<PathBuf>,
        /// Matrix CSV; standard output when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Dendrogram leaf order CSV.
        #[arg(long)]
        order_output: Option<PathBuf>,
        /// Full matrix, labels and merge list as JSON.
        #[arg(long)]
        json_output: Option<PathBuf>,
        /// Fingerprint kinds; several are averaged.
        #[arg(long = "kind", default_value = "ecfp4")]
        kinds: Vec<FingerprintKind>,
        #[arg(long, default_value_t = ionscreen::fingerprints::DEFAULT_NBITS)]
        nbits: usize,
    },
    /// Group k-fold assignment as JSON.
    Split {
        #[command(flatten)]
        records: RecordInput,
        #[arg(long)]
        scheme: Option<SplitScheme>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Fits a baseline model and writes it as JSON.
    Train {
        #[command(flatten)]
        records: RecordInput,
        #[arg(long)]
        property: Option<Property>,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Group cross-validation; prints a JSON metric report.
    Evaluate {
        /// Record file; the bundled synthetic dataset when omitted.
        #[arg(short, long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<RecordFormat>,
        #[arg(long)]
        property: Option<Property>,
        #[arg(long)]
        scheme: Option<SplitScheme>,
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// `mean±std` table rows as CSV.
        #[arg(long)]
        table_output: Option<PathBuf>,
        /// Directory for rank-table and label-histogram data files.
        #[arg(long)]
        plot_dir: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        bins: usize,
    },
    /// Top-K seeding followed by similarity-gated beam search.
    Search {
        /// Seed records (CSV or JSONL).
        #[arg(long)]
        seeds: PathBuf,
        #[arg(long, value_enum)]
        format: Option<RecordFormat>,
        #[arg(long)]
        cation_pool: Option<PathBuf>,
        #[arg(long)]
        anion_pool: Option<PathBuf>,
        #[arg(long)]
        solute_pool: Option<PathBuf>,
        #[arg(long)]
        solvent_pool: Option<PathBuf>,
        #[arg(long)]
        top_k: Option<usize>,
        #[arg(long)]
        iterations: Option<usize>,
        #[command(flatten)]
        predictor: PredictorSource,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Keeps the cation and substitutes anions from a pool.
    ModifyAnion(ModifyArgs),
    /// Keeps the anion and substitutes cations (side-chain variants) from a pool.
    ModifyCation(ModifyArgs),
    /// Free-energy cycle arithmetic (kcal/mol).
    Thermo {
        #[command(subcommand)]
        op: ThermoOp,
    },
    /// Samples distinct synthetic systems from molecule pools.
    GenSynthetic {
        #[arg(short, long)]
        n: usize,
        /// Categories to sample; all four when omitted.
        #[arg(long = "category")]
        categories: Vec<Category>,
        /// Label every system with the synthetic ground-truth function.
        #[arg(long)]
        label: Option<Property>,
        #[arg(long)]
        cations: Option<PathBuf>,
        #[arg(long)]
        anions: Option<PathBuf>,
        #[arg(long)]
        solutes: Option<PathBuf>,
        #[arg(long)]
        solvents: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<RecordFormat>,
    },
    /// Ten novel ion pairs per solute; optional per-solute hydration estimates.
    HydrationBenchmark {
        #[command(flatten)]
        records: RecordInput,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Solvation model used for estimates.
        #[arg(long, requires = "transfer_model")]
        solvation_model: Option<PathBuf>,
        /// IL/water transfer model used for estimates.
        #[arg(long, requires = "estimates")]
        transfer_model: Option<PathBuf>,
        /// Per-solute averaged hydration estimates as JSON.
        #[arg(long, requires = "solvation_model")]
        estimates: Option<PathBuf>,
    },
}
