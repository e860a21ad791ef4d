//! Command-line front end: configuration merging, atomic output, exit
//! codes.

use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use tempfile::NamedTempFile;

use crate::error::{Error, Result};
use crate::graph::{to_dot, NodeClass, Side, UnifiedGraph};
use crate::lammps::{parse_data_file, SystemTopology};
use crate::pipeline::{run_pipeline, DotStage, PipelineConfig, PipelineRun};
use crate::similarity::ScoringWeights;

pub const LOG_ENV: &str = "TEMPLATER_LOG";

pub const PRE_TEMPLATE: &str = "pre.molecule";
pub const POST_TEMPLATE: &str = "post.molecule";
pub const MAP_FILE: &str = "reaction.map";
pub const REPORT_TEXT: &str = "report.txt";
pub const REPORT_JSON: &str = "report.json";
pub const SIMILARITY_CSV: &str = "similarity.csv";

#[derive(Debug, Parser)]
#[command(
    name = "templater",
    version,
    about = "Build fix bond/react templates from LAMMPS data files"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Map reactants onto products and write templates, map and reports.
    Run(RunArgs),
    /// Write one DOT view of the mapping.
    Dot(DotArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Reactant data files, one molecule each.
    #[arg(long, num_args = 1..)]
    pub reactants: Vec<PathBuf>,
    /// Product data files, one molecule each.
    #[arg(long, num_args = 1..)]
    pub products: Vec<PathBuf>,
    /// TOML file with defaults for any of these options.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Template radius in bonds around the reaction site.
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Rounds of conserved-region search.
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Node expansions allowed per common sub-graph search.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Mass window (amu) around 1.008 that counts as hydrogen.
    #[arg(long)]
    pub h_tolerance: Option<f64>,
    /// Weight of the centrality change when picking initiators.
    #[arg(long)]
    pub centrality_weight: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Output directory, created if missing.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write reactants.dot, products.dot and mapped.dot.
    #[arg(long)]
    pub export_dot: bool,
    /// Also write the similarity matrix as CSV.
    #[arg(long)]
    pub export_similarity_csv: bool,
}

#[derive(Debug, Args)]
pub struct DotArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// reactants, products or mapped
    #[arg(long)]
    pub stage: String,
    /// Destination file; standard output if omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Contents of a `--config` file. Relative paths are resolved against the
/// file's directory.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub reactants: Option<Vec<PathBuf>>,
    pub products: Option<Vec<PathBuf>>,
    pub out: Option<PathBuf>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub cutoff: Option<usize>,
    pub iterations: Option<usize>,
    pub budget: Option<u64>,
    pub hydrogen_tolerance: Option<f64>,
    pub centrality_weight: Option<f64>,
    pub export_dot: Option<bool>,
    pub export_similarity_csv: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<FileConfig> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg: FileConfig =
            toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {}", path.display(), e.message())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        let rebase = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        cfg.reactants.iter_mut().flatten().for_each(rebase);
        cfg.products.iter_mut().flatten().for_each(rebase);
        cfg.out.iter_mut().for_each(rebase);
        Ok(cfg)
    }
}

/// Fully resolved settings of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub reactants: Vec<PathBuf>,
    pub products: Vec<PathBuf>,
    pub out: Option<PathBuf>,
    pub pipeline: PipelineConfig,
    pub export_dot: bool,
    pub export_similarity_csv: bool,
}

impl RunConfig {
    /// Command-line values win over file values, file values over
    /// defaults.
    pub fn resolve(input: &InputArgs, file: FileConfig) -> Result<RunConfig> {
        let (reactants, products) = input_files(input, &file);
        if reactants.is_empty() || products.is_empty() {
            return Err(Error::Config(
                "at least one reactant and one product file are required".into(),
            ));
        }
        let defaults = PipelineConfig::default();
        let d = defaults.weights;
        let alpha = input.alpha.or(file.alpha).unwrap_or(d.alpha);
        let beta = input.beta.or(file.beta).unwrap_or(d.beta);
        let gamma = input.gamma.or(file.gamma).unwrap_or(d.gamma);
        let weights = ScoringWeights::new(alpha, beta, gamma)?;
        if ((alpha + beta + gamma) - 1.0).abs() > 1e-12 {
            log::warn!(
                "weights alpha={alpha} beta={beta} gamma={gamma} rescaled to {} {} {}",
                weights.alpha,
                weights.beta,
                weights.gamma
            );
        }
        let pipeline = PipelineConfig {
            weights,
            iterations: input.iterations.or(file.iterations).unwrap_or(defaults.iterations),
            cutoff: input.cutoff.or(file.cutoff).unwrap_or(defaults.cutoff),
            budget: input.budget.or(file.budget).unwrap_or(defaults.budget),
            hydrogen_tolerance: input
                .h_tolerance
                .or(file.hydrogen_tolerance)
                .unwrap_or(defaults.hydrogen_tolerance),
            centrality_weight: input
                .centrality_weight
                .or(file.centrality_weight)
                .unwrap_or(defaults.centrality_weight),
        };
        pipeline.validate()?;
        Ok(RunConfig {
            reactants,
            products,
            out: file.out,
            pipeline,
            export_dot: file.export_dot.unwrap_or(false),
            export_similarity_csv: file.export_similarity_csv.unwrap_or(false),
        })
    }

    fn from_input(input: &InputArgs) -> Result<RunConfig> {
        RunConfig::resolve(input, load_config(input)?)
    }
}

fn load_config(input: &InputArgs) -> Result<FileConfig> {
    match &input.config {
        Some(path) => FileConfig::load(path),
        None => Ok(FileConfig::default()),
    }
}

/// Reactant and product paths, flags first, then the config file.
fn input_files(input: &InputArgs, file: &FileConfig) -> (Vec<PathBuf>, Vec<PathBuf>) {
    let pick = |flag: &Vec<PathBuf>, from_file: &Option<Vec<PathBuf>>| {
        if flag.is_empty() {
            from_file.clone().unwrap_or_default()
        } else {
            flag.clone()
        }
    };
    (
        pick(&input.reactants, &file.reactants),
        pick(&input.products, &file.products),
    )
}

pub fn read_topology(path: &Path) -> Result<SystemTopology> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_data_file(&text).map_err(|source| Error::Parse {
        path: path.to_path_buf(),
        source,
    })
}

pub fn execute(cfg: &RunConfig) -> Result<PipelineRun> {
    let reactants = cfg
        .reactants
        .iter()
        .map(|p| read_topology(p))
        .collect::<Result<Vec<_>>>()?;
    let products = cfg
        .products
        .iter()
        .map(|p| read_topology(p))
        .collect::<Result<Vec<_>>>()?;
    run_pipeline(&reactants, &products, &cfg.pipeline)
}

/// Every file a run produces, name and content, in a fixed order.
pub fn artifacts(run: &PipelineRun, export_dot: bool, export_similarity_csv: bool) -> Vec<(String, String)> {
    let mut files = vec![
        (PRE_TEMPLATE.to_string(), run.pre_template()),
        (POST_TEMPLATE.to_string(), run.post_template()),
        (MAP_FILE.to_string(), run.map_file()),
        (REPORT_TEXT.to_string(), run.report_text()),
        (REPORT_JSON.to_string(), run.report_json()),
    ];
    if export_dot {
        for stage in DotStage::ALL {
            files.push((format!("{}.dot", stage.name()), run.dot(stage)));
        }
    }
    if export_similarity_csv {
        if let Some(csv) = run.similarity_csv() {
            files.push((SIMILARITY_CSV.to_string(), csv));
        }
    }
    files
}

/// Writes all files into `dir` or none of them: everything is staged in
/// temporary files first and only renamed into place once all writes
/// succeeded.
pub fn write_atomically(dir: &Path, files: &[(String, String)]) -> Result<Vec<PathBuf>> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| Error::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io(dir))?;
    let mut staged = Vec::with_capacity(files.len());
    for (name, content) in files {
        let mut tmp = NamedTempFile::new_in(dir).map_err(io(dir))?;
        tmp.write_all(content.as_bytes()).map_err(io(tmp.path()))?;
        tmp.as_file().sync_all().map_err(io(tmp.path()))?;
        staged.push((tmp, dir.join(name)));
    }
    let mut written = Vec::with_capacity(staged.len());
    for (tmp, target) in staged {
        tmp.persist(&target).map_err(|e| Error::Io {
            path: target.clone(),
            source: e.error,
        })?;
        written.push(target);
    }
    Ok(written)
}

fn run_command(args: &RunArgs) -> Result<()> {
    let mut cfg = RunConfig::from_input(&args.input)?;
    if args.out.is_some() {
        cfg.out = args.out.clone();
    }
    cfg.export_dot |= args.export_dot;
    cfg.export_similarity_csv |= args.export_similarity_csv;
    let out = cfg
        .out
        .clone()
        .ok_or_else(|| Error::Config("an output directory is required (--out)".into()))?;
    let run = execute(&cfg)?;
    for path in write_atomically(&out, &artifacts(&run, cfg.export_dot, cfg.export_similarity_csv))? {
        println!("{}", path.display());
    }
    Ok(())
}

fn dot_command(args: &DotArgs) -> Result<()> {
    let stage: DotStage = args.stage.parse()?;
    let file = load_config(&args.input)?;
    let (reactants, products) = input_files(&args.input, &file);
    // one side alone is enough for its own view, drawn without mapping
    // colors
    let single = match stage {
        DotStage::Reactants if products.is_empty() => Some((reactants, Side::Reactant)),
        DotStage::Products if reactants.is_empty() => Some((products, Side::Product)),
        _ => None,
    };
    let dot = match single {
        Some((paths, _)) if paths.is_empty() => {
            return Err(Error::Config(format!("no {} files given", stage.name())));
        }
        Some((paths, side)) => {
            let topologies = paths.iter().map(|p| read_topology(p)).collect::<Result<Vec<_>>>()?;
            let g = UnifiedGraph::build(&topologies, side)?;
            to_dot(&g, stage.name(), |_| NodeClass::Unmapped)
        }
        None => execute(&RunConfig::resolve(&args.input, file)?)?.dot(stage),
    };
    match &args.output {
        Some(path) => {
            let dir = path
                .parent()
                .filter(|p| !p.as_os_str().is_empty())
                .unwrap_or(Path::new("."));
            let name = path
                .file_name()
                .ok_or_else(|| Error::Config(format!("{} is not a file path", path.display())))?;
            write_atomically(dir, &[(name.to_string_lossy().into_owned(), dot)])?;
        }
        None => print!("{dot}"),
    }
    Ok(())
}

pub fn dispatch(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Run(args) => run_command(args),
        Command::Dot(args) => dot_command(args),
    }
}

/// Entry point of the binary.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::new().filter_or(LOG_ENV, "warn")).try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.machine_line());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
