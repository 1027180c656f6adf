use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use tessgraph::emit::{emit, face_table, write_output, Format, Payload};
use tessgraph::hyperbolicity::{delta_growth_curve, CenterLabel, DEFAULT_VERTEX_BUDGET};
use tessgraph::verification::{
    boundary_crossing_profile, run_suite, suite_header, tile_statistics, SuiteConfig,
    DEFAULT_DEPTH, DEFAULT_LEVELS_M, DEFAULT_MARGIN,
};
use tessgraph::{extract_tiles, DeltaOptions, Error, GenConfig, Mode, Subset, Variant};

#[derive(Parser, Debug)]
#[command(name = "tessgraph", version, about = "Generate truncated tessellation graphs and check their hyperbolicity")]
struct Cli {
    /// key=value file; explicit flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// worker threads (default: available parallelism)
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// output file (default: stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    format: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a truncated graph
    Generate(GraphArgs),
    /// Run the verification suite
    Verify(VerifyArgs),
    /// Fixed-base hyperbolicity of growing balls
    Delta(DeltaArgs),
    /// Face table and tile statistics
    Tiles(GraphArgs),
    /// Distance across one strip along the boundary line
    Crossing(CrossingArgs),
}

#[derive(Args, Debug)]
struct GraphArgs {
    #[arg(long)]
    variant: Option<String>,
    #[arg(long)]
    depth: Option<u32>,
    #[arg(long)]
    strips: Option<u32>,
    #[arg(long)]
    mode: Option<String>,
    /// edge length of added diagonals in unit mode
    #[arg(long)]
    diagonal_length: Option<f64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    depth: Option<u32>,
    #[arg(long)]
    levels_m: Option<u32>,
    #[arg(long)]
    margin: Option<u32>,
    #[arg(long)]
    strips: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct DeltaArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// comma-separated increasing radii
    #[arg(long)]
    radii: Option<String>,
    /// even, all or sample:K
    #[arg(long)]
    subset: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// largest subset searched exactly
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    center_level: Option<i32>,
    #[arg(long)]
    center_index: Option<i64>,
}

#[derive(Args, Debug)]
struct CrossingArgs {
    /// period, tri-short or both
    #[arg(long)]
    variant: Option<String>,
    #[arg(long)]
    depth: Option<u32>,
    #[arg(long)]
    margin: Option<u32>,
}

enum Failure {
    Usage(String),
    Budget(String),
    Verification(String),
    Runtime(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Budget(_) => 3,
            Failure::Verification(_) | Failure::Runtime(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Budget(m) | Failure::Verification(m) | Failure::Runtime(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(msg),
            Error::Io(_) | Error::Disconnected { .. } | Error::NonPlanarInput { .. } | Error::TriangleViolation { .. } => {
                Failure::Runtime(msg)
            }
            _ => Failure::Usage(msg),
        }
    }
}

/// Settings merged from the config file and the command line.
struct Settings {
    file: BTreeMap<String, String>,
}

impl Settings {
    fn load(path: Option<&Path>) -> Result<Self, Failure> {
        let mut file = BTreeMap::new();
        if let Some(p) = path {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display())))?;
            for (i, raw) in text.lines().enumerate() {
                let line = raw.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (k, v) = line
                    .split_once('=')
                    .ok_or_else(|| Failure::Usage(format!("{}:{}: expected key=value", p.display(), i + 1)))?;
                file.insert(k.trim().replace('_', "-"), v.trim().to_string());
            }
        }
        Ok(Settings { file })
    }

    fn get<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, Failure> {
        self.opt(flag, key).map(|v| v.unwrap_or(default))
    }

    fn opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, Failure> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Failure::Usage(format!("bad value for {key}: {v:?}"))),
            None => Ok(None),
        }
    }
}

fn parse<T: FromStr<Err = Error>>(s: &str) -> Result<T, Failure> {
    s.parse().map_err(Failure::from)
}

fn gen_config(a: &GraphArgs, s: &Settings, default_variant: Variant) -> Result<GenConfig, Failure> {
    let variant = match s.opt(a.variant.clone(), "variant")? {
        Some(v) => parse(&v)?,
        None => default_variant,
    };
    let mode: Mode = parse(&s.get(a.mode.clone(), "mode", "geometric".to_string())?)?;
    let depth = s.get(a.depth, "depth", DEFAULT_DEPTH)?;
    let strips = s.get(a.strips, "strips", 1)?;
    let mut cfg = GenConfig::new(variant, depth, mode).with_strips(strips);
    cfg.diagonal_length = s.opt(a.diagonal_length, "diagonal-length")?;
    cfg.validate()?;
    Ok(cfg)
}

fn header(pairs: &[(&str, String)]) -> String {
    let mut out = String::new();
    for (k, v) in pairs {
        writeln!(out, "# {k} = {v}").unwrap();
    }
    out
}

fn graph_header(cfg: &GenConfig) -> Vec<(&'static str, String)> {
    vec![
        ("variant", cfg.variant.to_string()),
        ("depth", cfg.depth.to_string()),
        ("strips", cfg.strips.to_string()),
        ("mode", cfg.mode.to_string()),
    ]
}

fn format_of(cli: &Cli, s: &Settings, default: Format) -> Result<Format, Failure> {
    match s.opt(cli.format.clone(), "format")? {
        Some(f) => parse(&f),
        None => Ok(default),
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let s = Settings::load(cli.config.as_deref())?;
    let workers = s.get(
        cli.workers,
        "workers",
        std::thread::available_parallelism().map_or(1, |n| n.get()),
    )?;
    if workers == 0 {
        return Err(Failure::Usage("workers must be positive".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global()
        .map_err(|e| Failure::Runtime(e.to_string()))?;
    // worker count stays out of the outputs so they compare byte for byte
    eprintln!("# workers = {workers}");
    let out_path = s.opt(cli.out.clone(), "out")?;
    let out = out_path.as_deref();

    match &cli.command {
        Command::Generate(a) => {
            let cfg = gen_config(a, &s, Variant::HalfPeriod)?;
            let format = format_of(cli, &s, Format::Edgelist)?;
            let g = cfg.generate()?;
            eprint!("{}", header(&graph_header(&cfg)));
            write_output(out, &emit(&Payload::Graph(&g), format)?)?;
        }
        Command::Verify(a) => {
            let cfg = SuiteConfig {
                depth: s.get(a.depth, "depth", DEFAULT_DEPTH)?,
                levels_m: s.get(a.levels_m, "levels-m", DEFAULT_LEVELS_M)?,
                margin: s.get(a.margin, "margin", DEFAULT_MARGIN)?,
                strips: s.get(a.strips, "strips", 1)?,
                seed: s.get(a.seed, "seed", 0)?,
            };
            let format = format_of(cli, &s, Format::Report)?;
            let reports = run_suite(&cfg, &DeltaOptions::default())?;
            let failed: Vec<String> = reports
                .iter()
                .filter(|r| !r.pass)
                .map(|r| format!("{}: {}", r.lemma, r.counterexample.as_deref().unwrap_or("failed")))
                .collect();
            let mut head = suite_header(&cfg);
            writeln!(head, "# overall = {}", if failed.is_empty() { "pass" } else { "fail" }).unwrap();
            write_output(out, &emit(&Payload::Reports(&head, &reports), format)?)?;
            if !failed.is_empty() {
                return Err(Failure::Verification(failed.join("\n")));
            }
        }
        Command::Delta(a) => {
            let cfg = gen_config(&a.graph, &s, Variant::Tessellation)?;
            let format = format_of(cli, &s, Format::Csv)?;
            let radii: Vec<f64> = s
                .get(a.radii.clone(), "radii", "4,8,12,16".to_string())?
                .split(',')
                .map(|r| r.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| Failure::Usage(format!("bad radii: {e}")))?;
            let subset: Subset = parse(&s.get(a.subset.clone(), "subset", "even".to_string())?)?;
            let opts = DeltaOptions {
                budget: s.get(a.budget, "budget", DEFAULT_VERTEX_BUDGET)?,
                seed: s.get(a.seed, "seed", 0)?,
            };
            let center = CenterLabel {
                level: s.get(a.center_level, "center-level", 0)?,
                index: s.get(a.center_index, "center-index", 1)?,
            };
            let mut h = graph_header(&cfg);
            h.push(("subset", subset.describe()));
            h.push(("seed", opts.seed.to_string()));
            h.push(("budget", opts.budget.to_string()));
            eprint!("{}", header(&h));
            let curve = delta_growth_curve(&cfg, center, &radii, &subset, &opts)?;
            write_output(out, &emit(&Payload::Curve(&curve), format)?)?;
        }
        Command::Tiles(a) => {
            let cfg = gen_config(a, &s, Variant::Tessellation)?;
            let format = format_of(cli, &s, Format::Report)?;
            let g = cfg.generate()?;
            let tiles = extract_tiles(&g)?;
            let text = match format {
                Format::Report => {
                    let stats = tile_statistics(&tiles, cfg.depth);
                    format!(
                        "{}\n{}\n# face_id k vertex_ids... area perimeter inradius convex\n{}",
                        header(&graph_header(&cfg)),
                        stats.to_text(),
                        face_table(&tiles)
                    )
                }
                f => emit(&Payload::Tiles(&tiles), f)?,
            };
            write_output(out, &text)?;
        }
        Command::Crossing(a) => {
            let variants = match s.get(a.variant.clone(), "variant", "both".to_string())?.as_str() {
                "both" => vec![Variant::Period, Variant::TriangulationShort],
                v => vec![parse(v)?],
            };
            let depth = s.get(a.depth, "depth", DEFAULT_DEPTH)?;
            let margin = s.get(a.margin, "margin", DEFAULT_MARGIN)?;
            let format = format_of(cli, &s, Format::Csv)?;
            eprint!(
                "{}",
                header(&[("depth", depth.to_string()), ("margin", margin.to_string())])
            );
            let profiles = variants
                .into_iter()
                .map(|v| boundary_crossing_profile(v, depth, margin))
                .collect::<Result<Vec<_>, _>>()?;
            write_output(out, &emit(&Payload::Crossing(&profiles), format)?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
