//! `msec`: build, check, normalize and simulate binary matroid decompositions.
//!
//! Exit status is 0 on success, 1 when validation reports findings and 2 on
//! any error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use matroid_secretary::decomposition::{check_claimed_root, normalize, validate_tree, DecompTree};
use matroid_secretary::fixtures;
use matroid_secretary::graph::GraphModel;
use matroid_secretary::io;
use matroid_secretary::matroid::weight_of;
use matroid_secretary::secretary::{build_composite_plan, simulate, CompositePlan, Strategy};
use matroid_secretary::sums::Mode;
use matroid_secretary::zoo::zoo;
use matroid_secretary::{BinaryMatroid, Weights};

#[derive(Parser)]
#[command(name = "msec", version, about = "Binary matroid decompositions and secretary simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a named matroid: triangle, c4, k4, k5, k23, k33, r10, f7, f7dual,
    /// graphic:<edges> or cographic:<edges> with edges like "0-1,1-2,2-0".
    Zoo {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a built-in decomposition: two_triangles, badseed1, stacked_bad,
    /// parallel_child, parallel_chain, regular_chain, mfmc_small, mfmc_chain.
    Fixture {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a decomposition and print its root matroid.
    Compose {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a decomposition; exits 1 when there are findings.
    Validate {
        #[command(flatten)]
        spec: SpecArgs,
        /// Recompute every internal matroid from its children.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Normalize a decomposition and print it with its move log.
    Normalize {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the circuits of a matroid.
    Circuits {
        #[command(flatten)]
        source: MatroidArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maximum-weight independent set by the greedy algorithm.
    Opt {
        #[command(flatten)]
        source: MatroidArgs,
        #[arg(long)]
        weights: Option<PathBuf>,
    },
    /// Run seeded trials of the composite algorithm on a decomposition, or of
    /// one base algorithm on a matroid.
    Simulate {
        #[command(flatten)]
        source: MatroidArgs,
        #[arg(long, default_value = "relaxed")]
        mode: ModeArg,
        /// Base algorithm for `--matroid` input.
        #[arg(long, default_value = "sample-threshold")]
        algorithm: Strategy,
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SpecArgs {
    /// Decomposition file.
    #[arg(long)]
    spec: PathBuf,
    #[arg(long, default_value = "relaxed")]
    mode: ModeArg,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct MatroidArgs {
    /// Matroid file, or a zoo name when no such file exists.
    #[arg(long)]
    matroid: Option<String>,
    /// Decomposition file; its root matroid is used.
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Strict,
    Relaxed,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Strict => Mode::Strict,
            ModeArg::Relaxed => Mode::Relaxed,
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => io::write_text(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn build(path: &Path, mode: ModeArg) -> Result<DecompTree> {
    let spec = io::read_decomposition(path)?;
    spec.build(mode.into()).with_context(|| format!("building {}", path.display()))
}

fn load_matroid(source: &MatroidArgs) -> Result<(BinaryMatroid, Option<GraphModel>)> {
    if let Some(path) = &source.spec {
        return Ok((build(path, ModeArg::Relaxed)?.root_matroid().clone(), None));
    }
    let arg = source.matroid.as_deref().expect("clap enforces one source");
    if Path::new(arg).exists() {
        return Ok((io::read_matroid(Path::new(arg))?, None));
    }
    let z = zoo(arg).with_context(|| format!("{arg} is neither a file nor a zoo name"))?;
    Ok((z.matroid, z.graph))
}

fn load_weights(path: Option<&Path>, m: &BinaryMatroid) -> Result<Weights> {
    match path {
        Some(p) => Ok(io::read_weights(p)?),
        None => {
            log::info!("no weights given; every element weighs 1");
            Ok(Weights::unit(m.elements()))
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Zoo { name, out } => {
            let z = zoo(&name)?;
            eprintln!("{name}: {} elements, rank {}, class {:?}", z.matroid.len(), z.matroid.rank(), z.class);
            emit(&io::matroid_to_json(&z.matroid), out.as_deref())?;
        }
        Command::Fixture { name, out } => {
            let Some(spec) = fixtures::by_name(&name) else {
                bail!("unknown fixture {name}");
            };
            emit(&io::decomposition_to_json(&spec), out.as_deref())?;
        }
        Command::Compose { spec, out } => {
            let tree = build(&spec.spec, spec.mode)?;
            let root = tree.root_matroid();
            eprintln!("root: {} elements, rank {}, {} nodes", root.len(), root.rank(), tree.len());
            emit(&io::matroid_to_json(root), out.as_deref())?;
        }
        Command::Validate { spec, exhaustive, report } => {
            let file = io::read_decomposition_file(&spec.spec)?;
            let tree = file.to_spec()?.build(Mode::Relaxed)?;
            let mut result = validate_tree(&tree, exhaustive, spec.mode.into());
            if let Some(claimed) = &file.root {
                result.findings.extend(check_claimed_root(&tree, &claimed.to_matroid()?, exhaustive));
            }
            for f in &result.findings {
                eprintln!("finding: {f}");
            }
            eprintln!("{} findings, {} nodes rederived", result.findings.len(), result.rederived);
            if let Some(path) = report {
                io::write_text(&path, &io::json(&result))?;
            }
            return Ok(if result.is_valid() { 0 } else { 1 });
        }
        Command::Normalize { spec, out } => {
            let tree = build(&spec.spec, spec.mode)?;
            let n = normalize(&tree)?;
            for m in &n.provenance {
                eprintln!("moved {} from {} to {} (parallel to {})", m.element, m.from, m.to, m.witness);
            }
            eprintln!("{} moves, potential trace {:?}", n.provenance.len(), n.make_good.phi_trace);
            emit(&io::normalized_to_json(&n), out.as_deref())?;
        }
        Command::Circuits { source, out } => {
            let (m, _) = load_matroid(&source)?;
            let circuits = m.enumerate_circuits()?;
            eprintln!("{} circuits", circuits.len());
            emit(&io::json(&circuits), out.as_deref())?;
        }
        Command::Opt { source, weights } => {
            let (m, _) = load_matroid(&source)?;
            let w = load_weights(weights.as_deref(), &m)?;
            let best = m.greedy_opt(&w);
            let value = weight_of(&best, &w);
            println!("{}", io::json(&serde_json::json!({ "opt": value, "basis": best })).trim_end());
        }
        Command::Simulate {
            source,
            mode,
            algorithm,
            weights,
            trials,
            seed,
            report,
        } => {
            let plan = match &source.spec {
                Some(path) => build_composite_plan(&normalize(&build(path, mode)?)?)?,
                None => {
                    let (m, graph) = load_matroid(&source)?;
                    if algorithm == Strategy::Graphic && graph.is_none() {
                        bail!("the graphic algorithm needs a graphic zoo matroid");
                    }
                    CompositePlan::single(m, algorithm, graph)
                }
            };
            let w = load_weights(weights.as_deref(), &plan.root)?;
            let r = simulate(&plan, &w, trials, seed)?;
            match r.mean_ratio {
                Some(ratio) => eprintln!(
                    "{trials} trials: mean {:.4}, opt {}, ratio {ratio:.4} ± {:.4}",
                    r.mean_alg,
                    r.opt,
                    r.ci_halfwidth.unwrap_or(0.0)
                ),
                None => eprintln!("{trials} trials: opt is 0"),
            }
            emit(&io::json(&r), report.as_deref())?;
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
